//! Builds classifier models for a corpus and runs queries against them.
//!
//! Models that share inputs share work: one token pass per preprocessing
//! setting, one matrix and one SVD per (preprocessing, weighting) pair. All
//! topic counts of an LSI family are truncations of the same SVD.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{ClassifierConfig, ModelKind, Similarity};
use crate::corpus::{Corpus, QueryArtifact};
use crate::error::{Error, Result};
use crate::lda::{build_lda, lda_rank, LdaModel, LdaParams};
use crate::lsi::{lsi_rank, LsiBasis, LsiModel};
use crate::ranking::RankedList;
use crate::textprep::{preprocess_with, PreprocessConfig, Stopwords, TokenStream};
use crate::vsm::{corpus_tokens, vsm_rank, SimilarityKind, TermDocMatrix, WeightingScheme};

/// Seed used when the caller does not supply one.
pub const DEFAULT_MASTER_SEED: u64 = 20180701;

/// Version stamp of the on-disk model format.
pub const CACHE_FORMAT_VERSION: u32 = 1;
const CACHE_FORMAT_NAME: &str = "llr-model";

/// Everything besides the corpus that affects a built model.
#[derive(Debug, Clone)]
pub struct BuildSettings {
    pub stopwords: Arc<Stopwords>,
    pub lda: LdaParams,
    pub master_seed: u64,
    pub cache_dir: Option<PathBuf>,
}

impl Default for BuildSettings {
    fn default() -> Self {
        BuildSettings {
            stopwords: Arc::new(Stopwords::embedded().clone()),
            lda: LdaParams::default(),
            master_seed: DEFAULT_MASTER_SEED,
            cache_dir: None,
        }
    }
}

impl BuildSettings {
    pub fn with_seed(seed: u64) -> Self {
        BuildSettings {
            master_seed: seed,
            ..Self::default()
        }
    }
}

/// Stable 64-bit seed from a master seed and a list of labels.
pub fn derive_seed(master: u64, parts: &[&str]) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    for part in parts {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part.as_bytes());
    }
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

/// Identifies every input of model building: the lessons, the stopword
/// list, the LDA settings and the master seed. Names the cache
/// subdirectory.
pub fn model_fingerprint(corpus: &Corpus, settings: &BuildSettings) -> String {
    let mut hasher = Sha256::new();
    hasher.update(CACHE_FORMAT_VERSION.to_le_bytes());
    hasher.update(corpus.lessons_digest().as_bytes());
    for word in settings.stopwords.sorted() {
        hasher.update(word.as_bytes());
        hasher.update(b"\n");
    }
    hasher.update(serde_json::to_vec(&settings.lda).expect("serializable"));
    hasher.update(settings.master_seed.to_le_bytes());
    hex::encode(&hasher.finalize()[..16])
}

/// A built classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Model {
    Vsm {
        matrix: Arc<TermDocMatrix>,
        similarity: SimilarityKind,
    },
    Lsi {
        matrix: Arc<TermDocMatrix>,
        lsi: Arc<LsiModel>,
    },
    Lda {
        lda: Arc<LdaModel>,
    },
}

impl Model {
    /// Ranks lessons for already-preprocessed query tokens. `seed` drives
    /// the LDA fold-in and is ignored by the other models.
    pub fn rank(&self, query: &TokenStream, seed: u64) -> RankedList {
        match self {
            Model::Vsm { matrix, similarity } => {
                vsm_rank(query, matrix, matrix.scheme(), *similarity)
            }
            Model::Lsi { matrix, lsi } => lsi_rank(query, lsi, matrix),
            Model::Lda { lda } => lda_rank(query, lda, seed),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    config_id: String,
    fingerprint: String,
    model: Model,
}

pub struct Engine<'c> {
    corpus: &'c Corpus,
    settings: BuildSettings,
    fingerprint: String,
    models: BTreeMap<ClassifierConfig, Model>,
}

impl<'c> Engine<'c> {
    /// Builds (or loads from the cache directory) a model for every config.
    pub fn build(
        corpus: &'c Corpus,
        settings: BuildSettings,
        configs: &[ClassifierConfig],
    ) -> Result<Self> {
        settings.lda.validate()?;
        let fingerprint = model_fingerprint(corpus, &settings);
        let wanted: BTreeSet<ClassifierConfig> = configs.iter().copied().collect();

        let mut models = BTreeMap::new();
        let mut missing = Vec::new();
        for config in wanted {
            match load_cached(&settings, &fingerprint, &config) {
                Some(model) => {
                    models.insert(config, model);
                }
                None => missing.push(config),
            }
        }

        let built = build_models(corpus, &settings, &missing)?;
        if let Some(dir) = &settings.cache_dir {
            for (config, model) in &built {
                store_cached(dir, &fingerprint, config, model)?;
            }
        }
        models.extend(built);

        Ok(Engine {
            corpus,
            settings,
            fingerprint,
            models,
        })
    }

    pub fn corpus(&self) -> &Corpus {
        self.corpus
    }

    pub fn settings(&self) -> &BuildSettings {
        &self.settings
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn model(&self, config: &ClassifierConfig) -> Option<&Model> {
        self.models.get(config)
    }

    pub fn query_tokens(&self, artifact: &QueryArtifact, prep: PreprocessConfig) -> TokenStream {
        preprocess_with(&artifact.query_string(), prep, &self.settings.stopwords)
    }

    /// Fold-in seed for one (config, artifact) query.
    pub fn query_seed(&self, config: &ClassifierConfig, artifact: &QueryArtifact) -> u64 {
        derive_seed(
            self.settings.master_seed,
            &["lda-infer", &config.id(), &artifact.id],
        )
    }

    pub fn rank(&self, config: &ClassifierConfig, artifact: &QueryArtifact) -> Result<RankedList> {
        let model = self
            .models
            .get(config)
            .ok_or_else(|| Error::Config(format!("model {config} was not built")))?;
        let tokens = self.query_tokens(artifact, config.prep());
        Ok(model.rank(&tokens, self.query_seed(config, artifact)))
    }

    /// Ranked lists for each config (outer) and artifact (inner), in the
    /// given orders.
    pub fn rank_all(
        &self,
        configs: &[ClassifierConfig],
        artifacts: &[QueryArtifact],
    ) -> Result<Vec<Vec<RankedList>>> {
        configs
            .par_iter()
            .map(|config| {
                artifacts
                    .iter()
                    .map(|a| self.rank(config, a))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| e.in_classifier(&config.id()))
            })
            .collect()
    }
}

/// Builds the model for `config` and ranks lessons for one artifact.
pub fn run_classifier(
    config: &ClassifierConfig,
    corpus: &Corpus,
    artifact: &QueryArtifact,
    settings: &BuildSettings,
) -> Result<RankedList> {
    let engine = Engine::build(corpus, settings.clone(), std::slice::from_ref(config))?;
    engine.rank(config, artifact)
}

fn build_models(
    corpus: &Corpus,
    settings: &BuildSettings,
    configs: &[ClassifierConfig],
) -> Result<Vec<(ClassifierConfig, Model)>> {
    if configs.is_empty() {
        return Ok(Vec::new());
    }
    let doc_ids: Vec<String> = corpus.lessons().iter().map(|l| l.id.clone()).collect();

    let preps: BTreeSet<PreprocessConfig> = configs.iter().map(|c| c.prep()).collect();
    let tokens: BTreeMap<PreprocessConfig, Vec<TokenStream>> = preps
        .into_iter()
        .map(|p| (p, corpus_tokens(corpus, p, &settings.stopwords)))
        .collect();

    let matrix_keys: BTreeSet<(PreprocessConfig, WeightingScheme)> = configs
        .iter()
        .filter_map(|c| c.weighting().map(|w| (c.prep(), w)))
        .collect();
    let matrices: BTreeMap<_, Arc<TermDocMatrix>> = matrix_keys
        .into_iter()
        .map(|(p, w)| {
            let m = TermDocMatrix::from_tokens(doc_ids.clone(), &tokens[&p], w)?;
            Ok(((p, w), Arc::new(m)))
        })
        .collect::<Result<_>>()?;

    let lsi_keys: Vec<(PreprocessConfig, WeightingScheme)> = configs
        .iter()
        .filter(|c| c.model() == ModelKind::Lsi)
        .map(|c| (c.prep(), c.weighting().expect("lsi has weighting")))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let bases: BTreeMap<_, LsiBasis> = lsi_keys
        .par_iter()
        .map(|key| {
            debug!("computing SVD for {}/{}", key.0, key.1);
            (*key, LsiBasis::compute(&matrices[key]))
        })
        .collect();

    configs
        .par_iter()
        .map(|config| {
            let model = build_one(config, settings, &doc_ids, &tokens, &matrices, &bases)
                .map_err(|e| e.in_classifier(&config.id()))?;
            Ok((*config, model))
        })
        .collect()
}

fn build_one(
    config: &ClassifierConfig,
    settings: &BuildSettings,
    doc_ids: &[String],
    tokens: &BTreeMap<PreprocessConfig, Vec<TokenStream>>,
    matrices: &BTreeMap<(PreprocessConfig, WeightingScheme), Arc<TermDocMatrix>>,
    bases: &BTreeMap<(PreprocessConfig, WeightingScheme), LsiBasis>,
) -> Result<Model> {
    let prep = config.prep();
    match config.model() {
        ModelKind::Vsm => {
            let key = (prep, config.weighting().expect("vsm has weighting"));
            let Similarity::Vector(similarity) = config.similarity() else {
                unreachable!("vsm uses a vector similarity")
            };
            Ok(Model::Vsm {
                matrix: Arc::clone(&matrices[&key]),
                similarity,
            })
        }
        ModelKind::Lsi => {
            let key = (prep, config.weighting().expect("lsi has weighting"));
            let k = config.topics().expect("lsi has topics");
            Ok(Model::Lsi {
                matrix: Arc::clone(&matrices[&key]),
                lsi: Arc::new(bases[&key].truncate(k)?),
            })
        }
        ModelKind::Lda => {
            let k = config.topics().expect("lda has topics");
            let seed = derive_seed(settings.master_seed, &["lda-train", &config.id()]);
            debug!("training {config}");
            let lda = build_lda(doc_ids.to_vec(), &tokens[&prep], k, seed, &settings.lda)?;
            Ok(Model::Lda { lda: Arc::new(lda) })
        }
    }
}

/// `<cache>/<fingerprint>/<config-id>.model`
pub fn cache_path(cache_dir: &Path, fingerprint: &str, config: &ClassifierConfig) -> PathBuf {
    cache_dir
        .join(fingerprint)
        .join(format!("{}.model", config.id()))
}

fn load_cached(
    settings: &BuildSettings,
    fingerprint: &str,
    config: &ClassifierConfig,
) -> Option<Model> {
    let path = cache_path(settings.cache_dir.as_deref()?, fingerprint, config);
    let bytes = fs::read(&path).ok()?;
    match serde_json::from_slice::<CacheFile>(&bytes) {
        Ok(file)
            if file.format == CACHE_FORMAT_NAME
                && file.version == CACHE_FORMAT_VERSION
                && file.config_id == config.id()
                && file.fingerprint == fingerprint =>
        {
            debug!("loaded {config} from {}", path.display());
            Some(file.model)
        }
        Ok(_) => {
            warn!("ignoring stale model cache {}", path.display());
            None
        }
        Err(e) => {
            warn!("ignoring unreadable model cache {}: {e}", path.display());
            None
        }
    }
}

fn store_cached(
    cache_dir: &Path,
    fingerprint: &str,
    config: &ClassifierConfig,
    model: &Model,
) -> Result<()> {
    let path = cache_path(cache_dir, fingerprint, config);
    let dir = path.parent().expect("cache path has a parent");
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let file = CacheFile {
        format: CACHE_FORMAT_NAME.to_string(),
        version: CACHE_FORMAT_VERSION,
        config_id: config.id(),
        fingerprint: fingerprint.to_string(),
        model: model.clone(),
    };
    let tmp = path.with_extension("model.tmp");
    fs::write(&tmp, serde_json::to_vec(&file)?).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
}
