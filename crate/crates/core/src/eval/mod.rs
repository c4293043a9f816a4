//! Top-K and relative-improvement metrics, the hybrid selection protocol,
//! the end-to-end experiment, and synthetic corpora.

mod experiment;
mod metrics;
mod protocol;
pub mod synthetic;

pub use experiment::{
    evaluate_ensemble, fuse_per_artifact, individuals_csv, individuals_json, run_experiment,
    run_grid, score_lists, CombinationResult, EnsembleResult, EvalConfig, ExperimentReport,
    IndividualResult, ReportFormat, DEFAULT_TOP_K, MEMBER_SEPARATOR,
};
pub use metrics::{relative_improvement, round_percent, top_k_accuracy, top_k_hits};
pub use protocol::{build_combinations, select_subspace_toppers, CombinationSpec};
pub use synthetic::{generate_default_corpus, generate_synthetic_corpus};
