use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{relative_improvement, round_percent, top_k_hits};
use super::protocol::{build_combinations, select_subspace_toppers, CombinationSpec};
use crate::corpus::{Corpus, QueryArtifact};
use crate::error::{Error, Result};
use crate::fusion::FusionMethod;
use crate::grid::{enumerate_grid, BuildSettings, ClassifierConfig, Engine, DEFAULT_MASTER_SEED};
use crate::ranking::RankedList;

pub const DEFAULT_TOP_K: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub k: usize,
    pub master_seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            k: DEFAULT_TOP_K,
            master_seed: DEFAULT_MASTER_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndividualResult {
    pub config_id: String,
    pub hits: usize,
    pub top_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinationResult {
    pub comb_id: usize,
    pub members: Vec<String>,
    pub top_individual: f64,
    pub score_addition: f64,
    /// Percent, unrounded.
    pub ri_score_addition: f64,
    pub borda: f64,
    /// Percent, unrounded.
    pub ri_borda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub k: usize,
    pub master_seed: u64,
    pub queries: usize,
    pub rows: Vec<CombinationResult>,
    /// All grid configurations in canonical order.
    pub individuals: Vec<IndividualResult>,
}

/// Output encoding for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

/// Hits and fraction for one list per artifact.
pub fn score_lists(
    corpus: &Corpus,
    artifacts: &[QueryArtifact],
    lists: &[RankedList],
    k: usize,
) -> Result<(usize, f64)> {
    let (hits, total) = top_k_hits(
        artifacts.iter().map(|a| a.id.as_str()).zip(lists),
        corpus.judgments(),
        k,
    )?;
    if total == 0 {
        return Err(Error::UndefinedMetric("top-K over zero queries".into()));
    }
    Ok((hits, hits as f64 / total as f64))
}

/// Fuses the members' per-artifact lists with `method`.
pub fn fuse_per_artifact(
    member_lists: &[&[RankedList]],
    method: FusionMethod,
) -> Result<Vec<RankedList>> {
    let n = member_lists.first().map_or(0, |l| l.len());
    (0..n)
        .map(|a| {
            let lists: Vec<&RankedList> = member_lists.iter().map(|m| &m[a]).collect();
            method.fuse(&lists)
        })
        .collect()
}

fn check_inputs(corpus: &Corpus, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Config("top-K cutoff must be at least 1".into()));
    }
    if corpus.artifacts().is_empty() {
        return Err(Error::UndefinedMetric(
            "corpus has no query artifacts".into(),
        ));
    }
    if corpus.judgments().pair_count() == 0 {
        return Err(Error::UndefinedMetric(
            "corpus has no relevance judgments".into(),
        ));
    }
    Ok(())
}

/// Ranked lists (per config, per artifact) and top-K results for every grid
/// configuration.
struct GridRun {
    grid: Vec<ClassifierConfig>,
    lists: Vec<Vec<RankedList>>,
    individuals: Vec<IndividualResult>,
}

fn evaluate_grid(corpus: &Corpus, eval: &EvalConfig, settings: &BuildSettings) -> Result<GridRun> {
    check_inputs(corpus, eval.k)?;
    let settings = BuildSettings {
        master_seed: eval.master_seed,
        ..settings.clone()
    };
    let grid = enumerate_grid();
    let engine = Engine::build(corpus, settings, &grid)?;
    let lists = engine.rank_all(&grid, corpus.artifacts())?;
    let individuals = grid
        .iter()
        .zip(&lists)
        .map(|(config, config_lists)| {
            let (hits, top_k) = score_lists(corpus, corpus.artifacts(), config_lists, eval.k)
                .map_err(|e| e.in_classifier(&config.id()))?;
            Ok(IndividualResult {
                config_id: config.id(),
                hits,
                top_k,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridRun {
        grid,
        lists,
        individuals,
    })
}

/// Top-K of every grid configuration, in canonical order.
/// `eval.master_seed` overrides the seed in `settings`.
pub fn run_grid(
    corpus: &Corpus,
    eval: &EvalConfig,
    settings: &BuildSettings,
) -> Result<Vec<IndividualResult>> {
    Ok(evaluate_grid(corpus, eval, settings)?.individuals)
}

/// Runs every grid configuration against every artifact, selects the
/// subspace toppers, builds the 22 hybrids and scores them with both fusion
/// methods. `eval.master_seed` overrides the seed in `settings`.
pub fn run_experiment(
    corpus: &Corpus,
    eval: &EvalConfig,
    settings: &BuildSettings,
) -> Result<ExperimentReport> {
    let GridRun {
        grid,
        lists,
        individuals,
    } = evaluate_grid(corpus, eval, settings)?;
    let artifacts = corpus.artifacts();
    let scored: Vec<(ClassifierConfig, f64)> = grid
        .iter()
        .zip(&individuals)
        .map(|(c, r)| (*c, r.top_k))
        .collect();

    let toppers = select_subspace_toppers(&scored)?;
    let combos = build_combinations(&toppers)?;
    let index_of = |c: &ClassifierConfig| grid.iter().position(|g| g == c).expect("grid member");

    let rows = combos
        .par_iter()
        .map(|spec| {
            evaluate_combination(corpus, artifacts, spec, &lists, &scored, &index_of, eval.k)
                .map_err(|e| e.in_combination(spec.comb_id))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentReport {
        k: eval.k,
        master_seed: eval.master_seed,
        queries: artifacts.len(),
        rows,
        individuals,
    })
}

/// Accuracy of an ad-hoc ensemble over all artifacts of the engine's corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub method: FusionMethod,
    pub members: Vec<IndividualResult>,
    pub hybrid_hits: usize,
    pub hybrid_top_k: f64,
    pub best_member_top_k: f64,
    /// Percent, unrounded.
    pub ri: f64,
}

pub fn evaluate_ensemble(
    engine: &Engine<'_>,
    members: &[ClassifierConfig],
    method: FusionMethod,
    k: usize,
) -> Result<EnsembleResult> {
    let corpus = engine.corpus();
    check_inputs(corpus, k)?;
    let artifacts = corpus.artifacts();
    let lists = engine.rank_all(members, artifacts)?;
    let member_results = members
        .iter()
        .zip(&lists)
        .map(|(config, l)| {
            let (hits, top_k) = score_lists(corpus, artifacts, l, k)?;
            Ok(IndividualResult {
                config_id: config.id(),
                hits,
                top_k,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = member_results
        .iter()
        .map(|r| r.top_k)
        .fold(f64::NEG_INFINITY, f64::max);
    let refs: Vec<&[RankedList]> = lists.iter().map(Vec::as_slice).collect();
    let fused = fuse_per_artifact(&refs, method)?;
    let (hybrid_hits, hybrid_top_k) = score_lists(corpus, artifacts, &fused, k)?;
    Ok(EnsembleResult {
        method,
        members: member_results,
        hybrid_hits,
        hybrid_top_k,
        best_member_top_k: best,
        ri: relative_improvement(hybrid_top_k, best)?,
    })
}

fn evaluate_combination(
    corpus: &Corpus,
    artifacts: &[QueryArtifact],
    spec: &CombinationSpec,
    lists: &[Vec<RankedList>],
    scored: &[(ClassifierConfig, f64)],
    index_of: &(dyn Fn(&ClassifierConfig) -> usize + Sync),
    k: usize,
) -> Result<CombinationResult> {
    let indices: Vec<usize> = spec.members.iter().map(index_of).collect();
    let best = indices
        .iter()
        .map(|&i| scored[i].1)
        .fold(f64::NEG_INFINITY, f64::max);
    let member_lists: Vec<&[RankedList]> = indices.iter().map(|&i| lists[i].as_slice()).collect();

    let fused_score = |method| -> Result<(f64, f64)> {
        let fused = fuse_per_artifact(&member_lists, method)?;
        let (_, p) = score_lists(corpus, artifacts, &fused, k)?;
        Ok((p, relative_improvement(p, best)?))
    };
    let (score_addition, ri_score_addition) = fused_score(FusionMethod::ScoreAddition)?;
    let (borda, ri_borda) = fused_score(FusionMethod::Borda)?;

    Ok(CombinationResult {
        comb_id: spec.comb_id,
        members: spec.members.iter().map(ClassifierConfig::id).collect(),
        top_individual: best,
        score_addition,
        ri_score_addition,
        borda,
        ri_borda,
    })
}

#[derive(Serialize)]
struct CsvRow {
    comb_id: usize,
    members: String,
    top_individual: String,
    score_addition: String,
    ri_score_addition: i64,
    borda: String,
    ri_borda: i64,
}

#[derive(Serialize)]
struct CsvIndividual<'a> {
    config_id: &'a str,
    top_k: String,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    comb_id: usize,
    members: &'a [String],
    top_individual: f64,
    score_addition: f64,
    ri_score_addition: i64,
    borda: f64,
    ri_borda: i64,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    k: usize,
    master_seed: u64,
    queries: usize,
    rows: Vec<JsonRow<'a>>,
}

#[derive(Serialize)]
struct JsonIndividuals<'a> {
    k: usize,
    queries: usize,
    individuals: Vec<CsvIndividualJson<'a>>,
}

#[derive(Serialize)]
struct CsvIndividualJson<'a> {
    config_id: &'a str,
    top_k: f64,
}

/// Separator between member ids inside the `members` column.
pub const MEMBER_SEPARATOR: &str = ";";

fn fraction(x: f64) -> String {
    format!("{x:.4}")
}

impl ExperimentReport {
    pub fn report_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(CsvRow {
                comb_id: row.comb_id,
                members: row.members.join(MEMBER_SEPARATOR),
                top_individual: fraction(row.top_individual),
                score_addition: fraction(row.score_addition),
                ri_score_addition: round_percent(row.ri_score_addition),
                borda: fraction(row.borda),
                ri_borda: round_percent(row.ri_borda),
            })?;
        }
        into_bytes(w)
    }

    pub fn individuals_csv(&self) -> Result<Vec<u8>> {
        individuals_csv(&self.individuals)
    }

    pub fn report_json(&self) -> Result<Vec<u8>> {
        let doc = JsonReport {
            k: self.k,
            master_seed: self.master_seed,
            queries: self.queries,
            rows: self
                .rows
                .iter()
                .map(|r| JsonRow {
                    comb_id: r.comb_id,
                    members: &r.members,
                    top_individual: r.top_individual,
                    score_addition: r.score_addition,
                    ri_score_addition: round_percent(r.ri_score_addition),
                    borda: r.borda,
                    ri_borda: round_percent(r.ri_borda),
                })
                .collect(),
        };
        let mut out = serde_json::to_vec_pretty(&doc)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn individuals_json(&self) -> Result<Vec<u8>> {
        individuals_json(self.k, self.queries, &self.individuals)
    }

    /// Writes `report.{csv,json}` and `individuals.{csv,json}` into `dir`,
    /// returning the paths written.
    pub fn write(&self, dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let (ext, report, individuals) = match format {
            ReportFormat::Csv => ("csv", self.report_csv()?, self.individuals_csv()?),
            ReportFormat::Json => ("json", self.report_json()?, self.individuals_json()?),
        };
        let report_path = dir.join(format!("report.{ext}"));
        let individuals_path = dir.join(format!("individuals.{ext}"));
        write_file(&report_path, &report)?;
        write_file(&individuals_path, &individuals)?;
        Ok(vec![report_path, individuals_path])
    }
}

pub fn individuals_csv(individuals: &[IndividualResult]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for ind in individuals {
        w.serialize(CsvIndividual {
            config_id: &ind.config_id,
            top_k: fraction(ind.top_k),
        })?;
    }
    into_bytes(w)
}

pub fn individuals_json(
    k: usize,
    queries: usize,
    individuals: &[IndividualResult],
) -> Result<Vec<u8>> {
    let doc = JsonIndividuals {
        k,
        queries,
        individuals: individuals
            .iter()
            .map(|i| CsvIndividualJson {
                config_id: &i.config_id,
                top_k: i.top_k,
            })
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&doc)?;
    out.push(b'\n');
    Ok(out)
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn into_bytes(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner()
        .map_err(|e| Error::Csv(e.into_error().into()))
}
