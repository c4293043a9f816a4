use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use llr_core::grid::DEFAULT_MASTER_SEED;

#[derive(Debug, Parser)]
#[command(
    name = "llr",
    version,
    about = "Recommend lessons-learned records for project issues and risks",
    after_help = "Exit status: 0 success, 1 usage error, 2 invalid input data, 3 internal error."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Master seed for every random choice (synthetic data, LDA sampling).
    #[arg(long, global = true, default_value_t = DEFAULT_MASTER_SEED)]
    pub seed: u64,

    /// Worker threads [default: number of logical cores].
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,

    /// Directory for caching built models between runs.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Stopword list, one word per line; `#` starts a comment line.
    #[arg(long, global = true, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,

    /// JSON settings file; its values override the corresponding flags.
    /// Keys: master_seed, k, jobs, cache_dir, stopwords,
    /// lda.{alpha,beta,train_sweeps,infer_sweeps}.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// LDA document-topic prior [default: 50 / topics].
    #[arg(long, global = true)]
    pub lda_alpha: Option<f64>,

    /// LDA topic-word prior [default: 0.01].
    #[arg(long, global = true)]
    pub lda_beta: Option<f64>,

    /// LDA training sweeps [default: 500].
    #[arg(long, global = true)]
    pub lda_train_sweeps: Option<usize>,

    /// LDA query fold-in sweeps [default: 100].
    #[arg(long, global = true)]
    pub lda_infer_sweeps: Option<usize>,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate corpus files and print their sizes.
    Ingest(CorpusArgs),
    /// Rank lessons for one artifact with one classifier or an ensemble.
    Query(QueryArgs),
    /// Run all 88 classifiers and write their top-K accuracy.
    Grid(RunArgs),
    /// Run the full hybrid experiment and write the report.
    Experiment(RunArgs),
    /// Write a synthetic corpus with planted relevance.
    GenSynthetic(SyntheticArgs),
    /// Fuse classifiers and report the hybrid's accuracy, or one artifact's
    /// fused ranking.
    Fuse(FuseArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    /// Directory holding lessons.jsonl, artifacts.jsonl and judgments.tsv.
    #[arg(long, value_name = "DIR", required_unless_present_all = ["lessons", "artifacts", "judgments"])]
    pub corpus: Option<PathBuf>,
    /// Lessons file (JSON Lines); overrides the one in --corpus.
    #[arg(long, value_name = "FILE")]
    pub lessons: Option<PathBuf>,
    /// Artifacts file (JSON Lines); overrides the one in --corpus.
    #[arg(long, value_name = "FILE")]
    pub artifacts: Option<PathBuf>,
    /// Judgments file (TSV: artifact_id, lesson_id); overrides the one in --corpus.
    #[arg(long, value_name = "FILE")]
    pub judgments: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Borda,
    Scoreadd,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Top-K cutoff.
    #[arg(long)]
    pub k: Option<usize>,
    /// Output directory (created if missing).
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Artifact id to use as the query.
    #[arg(long)]
    pub artifact: String,
    /// Single classifier id, e.g. `vsm:stem:tfidf:cosine:-`.
    #[arg(
        long,
        value_name = "ID",
        conflicts_with = "members",
        required_unless_present = "members"
    )]
    pub classifier: Option<String>,
    /// Comma-separated classifier ids to fuse.
    #[arg(long, value_delimiter = ',')]
    pub members: Vec<String>,
    /// Fusion method for --members.
    #[arg(long, value_enum, default_value_t = Method::Borda)]
    pub method: Method,
    /// Number of lessons to print.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FuseArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Comma-separated classifier ids (at least two).
    #[arg(long, value_delimiter = ',', required = true)]
    pub members: Vec<String>,
    /// Print the fused ranking for this artifact instead of accuracy.
    #[arg(long)]
    pub artifact: Option<String>,
    /// Top-K cutoff.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SyntheticArgs {
    /// Output directory (created if missing).
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, default_value_t = llr_core::eval::synthetic::DEFAULT_LESSONS)]
    pub lessons: usize,
    #[arg(long, default_value_t = llr_core::eval::synthetic::DEFAULT_ARTIFACTS)]
    pub artifacts: usize,
    #[arg(long, default_value_t = llr_core::eval::synthetic::DEFAULT_THEMES)]
    pub themes: usize,
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    use super::*;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
