use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::textprep::PreprocessConfig;
use crate::vsm::{SimilarityKind, WeightingScheme};

pub const TOPIC_COUNTS: [usize; 4] = [32, 64, 128, 256];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Vsm,
    Lsi,
    Lda,
}

impl ModelKind {
    pub const ALL: [Self; 3] = [Self::Vsm, Self::Lsi, Self::Lda];

    pub fn name(self) -> &'static str {
        match self {
            Self::Vsm => "vsm",
            Self::Lsi => "lsi",
            Self::Lda => "lda",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Similarity used by a configuration. LDA's shared-topic probability is a
/// separate variant since it is not a vector similarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Similarity {
    Vector(SimilarityKind),
    ConditionalProbability,
}

impl Similarity {
    pub fn name(self) -> &'static str {
        match self {
            Self::Vector(SimilarityKind::Cosine) => "cosine",
            Self::Vector(SimilarityKind::Overlap) => "overlap",
            Self::ConditionalProbability => "condprob",
        }
    }
}

/// One classifier configuration. The derived ordering is the canonical
/// grid order: model, preprocessing, weighting, similarity, topics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassifierConfig {
    model: ModelKind,
    prep: PreprocessConfig,
    weighting: Option<WeightingScheme>,
    similarity: Similarity,
    topics: Option<usize>,
}

impl ClassifierConfig {
    pub fn vsm(
        prep: PreprocessConfig,
        weighting: WeightingScheme,
        similarity: SimilarityKind,
    ) -> Self {
        ClassifierConfig {
            model: ModelKind::Vsm,
            prep,
            weighting: Some(weighting),
            similarity: Similarity::Vector(similarity),
            topics: None,
        }
    }

    pub fn lsi(prep: PreprocessConfig, weighting: WeightingScheme, topics: usize) -> Result<Self> {
        check_topics(topics)?;
        Ok(ClassifierConfig {
            model: ModelKind::Lsi,
            prep,
            weighting: Some(weighting),
            similarity: Similarity::Vector(SimilarityKind::Cosine),
            topics: Some(topics),
        })
    }

    pub fn lda(prep: PreprocessConfig, topics: usize) -> Result<Self> {
        check_topics(topics)?;
        Ok(ClassifierConfig {
            model: ModelKind::Lda,
            prep,
            weighting: None,
            similarity: Similarity::ConditionalProbability,
            topics: Some(topics),
        })
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn prep(&self) -> PreprocessConfig {
        self.prep
    }

    pub fn weighting(&self) -> Option<WeightingScheme> {
        self.weighting
    }

    pub fn similarity(&self) -> Similarity {
        self.similarity
    }

    pub fn topics(&self) -> Option<usize> {
        self.topics
    }

    /// Canonical id `model:prep:weighting:similarity:topics`, `-` for absent
    /// fields, e.g. `lsi:stemstop:sublinear:cosine:128`.
    pub fn id(&self) -> String {
        format!(
            "{}:{}:{}:{}:{}",
            self.model,
            self.prep,
            self.weighting.map_or("-", WeightingScheme::name),
            self.similarity.name(),
            self.topics
                .map_or_else(|| "-".to_string(), |t| t.to_string()),
        )
    }
}

fn check_topics(topics: usize) -> Result<()> {
    if TOPIC_COUNTS.contains(&topics) {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "topic count must be one of {TOPIC_COUNTS:?}, got {topics}"
        )))
    }
}

impl fmt::Display for ClassifierConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for ClassifierConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownConfigId(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let [model, prep, weighting, similarity, topics] = parts.as_slice() else {
            return Err(unknown());
        };
        let prep: PreprocessConfig = prep.parse().map_err(|_| unknown())?;
        let topics = || topics.parse::<usize>().map_err(|_| unknown());
        let weighting = || weighting.parse::<WeightingScheme>().map_err(|_| unknown());
        let config = match (*model, *similarity) {
            ("vsm", "cosine") | ("vsm", "overlap") if parts[4] == "-" => {
                let sim = if *similarity == "cosine" {
                    SimilarityKind::Cosine
                } else {
                    SimilarityKind::Overlap
                };
                ClassifierConfig::vsm(prep, weighting()?, sim)
            }
            ("lsi", "cosine") => {
                ClassifierConfig::lsi(prep, weighting()?, topics()?).map_err(|_| unknown())?
            }
            ("lda", "condprob") if parts[2] == "-" => {
                ClassifierConfig::lda(prep, topics()?).map_err(|_| unknown())?
            }
            _ => return Err(unknown()),
        };
        // Reject non-canonical spellings such as leading zeros in topics.
        if config.id() != s {
            return Err(unknown());
        }
        Ok(config)
    }
}

impl Serialize for ClassifierConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.id())
    }
}

impl<'de> Deserialize<'de> for ClassifierConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All 88 configurations in canonical order.
pub fn enumerate_grid() -> Vec<ClassifierConfig> {
    let mut out = Vec::with_capacity(88);
    for prep in PreprocessConfig::all() {
        for w in WeightingScheme::ALL {
            for sim in SimilarityKind::ALL {
                out.push(ClassifierConfig::vsm(prep, w, sim));
            }
        }
    }
    for prep in PreprocessConfig::all() {
        for w in WeightingScheme::ALL {
            for t in TOPIC_COUNTS {
                out.push(ClassifierConfig::lsi(prep, w, t).expect("valid topics"));
            }
        }
    }
    for prep in PreprocessConfig::all() {
        for t in TOPIC_COUNTS {
            out.push(ClassifierConfig::lda(prep, t).expect("valid topics"));
        }
    }
    out
}
