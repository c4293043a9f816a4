//! The classifier grid: every (model, preprocessing, parameter) combination,
//! and the machinery to build and query any of them.

mod config;
mod engine;

pub use config::{enumerate_grid, ClassifierConfig, ModelKind, Similarity, TOPIC_COUNTS};
pub use engine::{
    cache_path, derive_seed, model_fingerprint, run_classifier, BuildSettings, Engine, Model,
    CACHE_FORMAT_VERSION, DEFAULT_MASTER_SEED,
};
