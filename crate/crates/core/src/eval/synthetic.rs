//! Planted-relevance corpora for exercising the pipeline without real data.
//!
//! Each theme owns a disjoint pool of pseudo-word roots. Every lesson and
//! artifact is written from one theme's pool mixed with a shared noise pool
//! and stopwords; roots appear with random inflections so that stemming has
//! something to merge. An artifact's relevant lessons are exactly the
//! lessons of its theme.

use std::collections::HashSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{ArtifactKind, Corpus, LessonRecord, QueryArtifact, RelevanceJudgments};
use crate::error::{Error, Result};
use crate::textprep::Stopwords;

pub const DEFAULT_LESSONS: usize = 212;
pub const DEFAULT_ARTIFACTS: usize = 55;
pub const DEFAULT_THEMES: usize = 40;
const PROJECTS: usize = 30;

const THEME_POOL: usize = 25;
const NOISE_POOL: usize = 300;
const THEME_RATE: f64 = 0.25;
const STOP_RATE: f64 = 0.3;
const INFLECTIONS: [&str; 6] = ["", "s", "ing", "ed", "er", "ment"];
const ONSETS: [&str; 15] = [
    "b", "c", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z",
];
const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];

struct Vocabulary {
    themes: Vec<Vec<String>>,
    noise: Vec<String>,
    stopwords: Vec<String>,
}

impl Vocabulary {
    fn generate(rng: &mut ChaCha8Rng, n_themes: usize) -> Self {
        let stopwords: Vec<String> = Stopwords::embedded()
            .sorted()
            .into_iter()
            .filter(|w| w.len() >= 2)
            .map(str::to_string)
            .collect();
        let mut seen: HashSet<String> = stopwords.iter().cloned().collect();
        let mut fresh = |rng: &mut ChaCha8Rng| loop {
            let root = pseudo_root(rng);
            if seen.insert(root.clone()) {
                return root;
            }
        };
        let themes = (0..n_themes)
            .map(|_| (0..THEME_POOL).map(|_| fresh(rng)).collect())
            .collect();
        let noise = (0..NOISE_POOL).map(|_| fresh(rng)).collect();
        Vocabulary {
            themes,
            noise,
            stopwords,
        }
    }

    fn word(&self, rng: &mut ChaCha8Rng, theme: usize) -> String {
        let u: f64 = rng.random();
        if u < STOP_RATE {
            return self.stopwords.choose(rng).expect("non-empty").clone();
        }
        let pool = if u < STOP_RATE + THEME_RATE {
            &self.themes[theme]
        } else {
            &self.noise
        };
        let root = pool.choose(rng).expect("non-empty");
        let suffix = INFLECTIONS.choose(rng).expect("non-empty");
        format!("{root}{suffix}")
    }

    fn sentence(&self, rng: &mut ChaCha8Rng, theme: usize, words: usize) -> String {
        let mut text = (0..words)
            .map(|_| self.word(rng, theme))
            .collect::<Vec<_>>()
            .join(" ");
        if let Some(first) = text.get_mut(..1) {
            first.make_ascii_uppercase();
        }
        text.push('.');
        text
    }
}

/// Five-letter consonant-vowel root ending in a consonant, e.g. `bakot`.
fn pseudo_root(rng: &mut ChaCha8Rng) -> String {
    let mut s = String::with_capacity(5);
    for _ in 0..2 {
        s.push_str(ONSETS.choose(rng).expect("non-empty"));
        s.push_str(VOWELS.choose(rng).expect("non-empty"));
    }
    s.push_str(ONSETS.choose(rng).expect("non-empty"));
    s
}

/// Generates a deterministic synthetic corpus.
pub fn generate_synthetic_corpus(
    seed: u64,
    n_lessons: usize,
    n_artifacts: usize,
    n_themes: usize,
) -> Result<Corpus> {
    if n_lessons == 0 || n_artifacts == 0 || n_themes == 0 {
        return Err(Error::Config(
            "synthetic corpus counts must be at least 1".into(),
        ));
    }
    if n_themes > n_lessons {
        return Err(Error::Config(format!(
            "cannot spread {n_themes} themes over {n_lessons} lessons"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = Vocabulary::generate(&mut rng, n_themes);

    let mut lesson_theme = Vec::with_capacity(n_lessons);
    let lessons: Vec<LessonRecord> = (0..n_lessons)
        .map(|i| {
            let theme = i % n_themes;
            lesson_theme.push(theme);
            LessonRecord {
                id: format!("LL-{:04}", i + 1),
                project_id: format!("P{:02}", i % PROJECTS.min(n_lessons) + 1),
                context: vocab.sentence(&mut rng, theme, 12),
                problem: vocab.sentence(&mut rng, theme, 12),
                recommended_actions: vocab.sentence(&mut rng, theme, 10),
            }
        })
        .collect();

    let mut judgments = RelevanceJudgments::new();
    let artifacts: Vec<QueryArtifact> = (0..n_artifacts)
        .map(|i| {
            let theme = rng.random_range(0..n_themes);
            let kind = if rng.random_bool(0.5) {
                ArtifactKind::Issue
            } else {
                ArtifactKind::Risk
            };
            let id = format!("PM-{:03}", i + 1);
            for (lesson, &t) in lessons.iter().zip(&lesson_theme) {
                if t == theme {
                    judgments.add(id.as_str(), lesson.id.as_str());
                }
            }
            QueryArtifact {
                id,
                kind,
                title: vocab.sentence(&mut rng, theme, 4),
                description: vocab.sentence(&mut rng, theme, 12),
            }
        })
        .collect();

    Corpus::new(lessons, artifacts, judgments)
}

/// [`generate_synthetic_corpus`] at the default 212 lessons / 55 artifacts.
pub fn generate_default_corpus(seed: u64) -> Result<Corpus> {
    generate_synthetic_corpus(seed, DEFAULT_LESSONS, DEFAULT_ARTIFACTS, DEFAULT_THEMES)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sizes() {
        let c = generate_default_corpus(1).unwrap();
        assert_eq!(c.lessons().len(), 212);
        assert_eq!(c.artifacts().len(), 55);
        assert!(c.judgments().pair_count() > 0);
        assert!(c
            .artifacts()
            .iter()
            .all(|a| !c.judgments().relevant(&a.id).unwrap().is_empty()));
    }

    #[test]
    fn single_theme_makes_everything_relevant() {
        let c = generate_synthetic_corpus(3, 10, 4, 1).unwrap();
        for a in c.artifacts() {
            assert_eq!(c.judgments().relevant(&a.id).unwrap().len(), 10);
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            generate_synthetic_corpus(9, 30, 5, 6).unwrap(),
            generate_synthetic_corpus(9, 30, 5, 6).unwrap()
        );
        assert_ne!(
            generate_synthetic_corpus(9, 30, 5, 6).unwrap(),
            generate_synthetic_corpus(10, 30, 5, 6).unwrap()
        );
    }

    #[test]
    fn invalid_counts() {
        assert!(generate_synthetic_corpus(1, 0, 1, 1).is_err());
        assert!(generate_synthetic_corpus(1, 1, 0, 1).is_err());
        assert!(generate_synthetic_corpus(1, 5, 1, 6).is_err());
        assert!(generate_synthetic_corpus(1, 5, 1, 0).is_err());
    }
}
