use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use log::info;

use llr_core::corpus::{load_corpus, ARTIFACTS_FILE, JUDGMENTS_FILE, LESSONS_FILE};
use llr_core::eval::{
    evaluate_ensemble, individuals_csv, individuals_json, round_percent, run_experiment, run_grid,
    synthetic::generate_synthetic_corpus, EvalConfig, ReportFormat,
};
use llr_core::{ClassifierConfig, Corpus, Engine, FusionMethod, RankedList};

use crate::args::{
    Cli, Command, CorpusArgs, Format, FuseArgs, Method, QueryArgs, RunArgs, SyntheticArgs,
};
use crate::settings::{require_file, require_output_dir, RunConfig};
use crate::UsageError;

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let global = &cli.global;
    match cli.command {
        Command::Ingest(args) => {
            let config = RunConfig::resolve(global, None)?;
            let paths = CorpusPaths::resolve(&args)?;
            config.init_pool()?;
            ingest(&paths)
        }
        Command::Query(args) => {
            let config = RunConfig::resolve(global, args.k)?;
            let paths = CorpusPaths::resolve(&args.corpus)?;
            config.init_pool()?;
            query(&config, &paths, &args)
        }
        Command::Grid(args) => {
            let config = RunConfig::resolve(global, args.k)?;
            let paths = CorpusPaths::resolve(&args.corpus)?;
            require_output_dir(&args.out)?;
            config.init_pool()?;
            grid(&config, &paths, &args)
        }
        Command::Experiment(args) => {
            let config = RunConfig::resolve(global, args.k)?;
            let paths = CorpusPaths::resolve(&args.corpus)?;
            require_output_dir(&args.out)?;
            config.init_pool()?;
            experiment(&config, &paths, &args)
        }
        Command::GenSynthetic(args) => {
            let config = RunConfig::resolve(global, None)?;
            require_output_dir(&args.out)?;
            gen_synthetic(&config, &args)
        }
        Command::Fuse(args) => {
            let config = RunConfig::resolve(global, args.k)?;
            let paths = CorpusPaths::resolve(&args.corpus)?;
            config.init_pool()?;
            fuse(&config, &paths, &args)
        }
    }
}

struct CorpusPaths {
    lessons: PathBuf,
    artifacts: PathBuf,
    judgments: PathBuf,
}

impl CorpusPaths {
    fn resolve(args: &CorpusArgs) -> anyhow::Result<Self> {
        let pick = |explicit: &Option<PathBuf>, name: &str| -> anyhow::Result<PathBuf> {
            let path = match (explicit, &args.corpus) {
                (Some(p), _) => p.clone(),
                (None, Some(dir)) => dir.join(name),
                (None, None) => return Err(UsageError(format!("no path given for {name}")).into()),
            };
            require_file(&path)?;
            Ok(path)
        };
        if let Some(dir) = &args.corpus {
            if !dir.is_dir() {
                return Err(UsageError(format!("no such directory: {}", dir.display())).into());
            }
        }
        Ok(CorpusPaths {
            lessons: pick(&args.lessons, LESSONS_FILE)?,
            artifacts: pick(&args.artifacts, ARTIFACTS_FILE)?,
            judgments: pick(&args.judgments, JUDGMENTS_FILE)?,
        })
    }

    fn load(&self) -> anyhow::Result<Corpus> {
        let corpus = load_corpus(&self.lessons, &self.artifacts, &self.judgments)?;
        info!(
            "loaded {} lessons, {} artifacts, {} judgments",
            corpus.lessons().len(),
            corpus.artifacts().len(),
            corpus.judgments().pair_count()
        );
        Ok(corpus)
    }
}

fn parse_members(ids: &[String]) -> anyhow::Result<Vec<ClassifierConfig>> {
    let members = ids
        .iter()
        .map(|id| id.trim().parse::<ClassifierConfig>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut distinct = members.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != members.len() {
        return Err(UsageError("--members lists a classifier twice".into()).into());
    }
    if members.len() < 2 {
        return Err(UsageError("--members needs at least two classifiers".into()).into());
    }
    Ok(members)
}

fn method(m: Method) -> FusionMethod {
    match m {
        Method::Borda => FusionMethod::Borda,
        Method::Scoreadd => FusionMethod::ScoreAddition,
    }
}

fn report_format(f: Format) -> ReportFormat {
    match f {
        Format::Csv => ReportFormat::Csv,
        Format::Json => ReportFormat::Json,
    }
}

fn write_stdout(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .context("writing to stdout")?;
    out.flush().context("writing to stdout")
}

fn ingest(paths: &CorpusPaths) -> anyhow::Result<()> {
    let corpus = paths.load()?;
    write_stdout(&format!(
        "lessons\t{}\nartifacts\t{}\njudgments\t{}\nlessons_sha256\t{}\n",
        corpus.lessons().len(),
        corpus.artifacts().len(),
        corpus.judgments().pair_count(),
        corpus.lessons_digest()
    ))
}

fn print_ranking(
    corpus: &Corpus,
    artifact_id: &str,
    list: &RankedList,
    k: usize,
) -> anyhow::Result<()> {
    let mut text = String::from("rank\tlesson_id\tscore\trelevant\n");
    for item in list.top(k) {
        let relevant = corpus.judgments().is_relevant(artifact_id, &item.doc_id);
        text.push_str(&format!(
            "{}\t{}\t{:.6}\t{}\n",
            item.rank,
            item.doc_id,
            item.score,
            if relevant { "yes" } else { "no" }
        ));
    }
    write_stdout(&text)
}

fn ranked_for_artifact(
    config: &RunConfig,
    corpus: &Corpus,
    artifact_id: &str,
    members: &[ClassifierConfig],
    fusion: Option<FusionMethod>,
) -> anyhow::Result<RankedList> {
    let artifact = corpus
        .artifact(artifact_id)
        .ok_or_else(|| llr_core::Error::UnknownArtifact(artifact_id.to_string()))?;
    let engine = Engine::build(corpus, config.build_settings()?, members)?;
    let lists = members
        .iter()
        .map(|m| engine.rank(m, artifact))
        .collect::<Result<Vec<_>, _>>()?;
    match fusion {
        None => Ok(lists.into_iter().next().expect("one member")),
        Some(method) => {
            let refs: Vec<&RankedList> = lists.iter().collect();
            Ok(method.fuse(&refs)?)
        }
    }
}

fn query(config: &RunConfig, paths: &CorpusPaths, args: &QueryArgs) -> anyhow::Result<()> {
    let (members, fusion) = match &args.classifier {
        Some(id) => (vec![id.trim().parse::<ClassifierConfig>()?], None),
        None => (parse_members(&args.members)?, Some(method(args.method))),
    };
    let corpus = paths.load()?;
    let list = ranked_for_artifact(config, &corpus, &args.artifact, &members, fusion)?;
    print_ranking(&corpus, &args.artifact, &list, config.k)
}

fn fuse(config: &RunConfig, paths: &CorpusPaths, args: &FuseArgs) -> anyhow::Result<()> {
    let members = parse_members(&args.members)?;
    let fusion = method(args.method);
    let corpus = paths.load()?;
    if let Some(artifact) = &args.artifact {
        let list = ranked_for_artifact(config, &corpus, artifact, &members, Some(fusion))?;
        return print_ranking(&corpus, artifact, &list, config.k);
    }
    let engine = Engine::build(&corpus, config.build_settings()?, &members)?;
    let result = evaluate_ensemble(&engine, &members, fusion, config.k)?;
    let mut text = String::from("classifier\ttop_k\n");
    for m in &result.members {
        text.push_str(&format!("{}\t{:.4}\n", m.config_id, m.top_k));
    }
    text.push_str(&format!("hybrid:{fusion}\t{:.4}\n", result.hybrid_top_k));
    text.push_str(&format!("ri_percent\t{:+}\n", round_percent(result.ri)));
    write_stdout(&text)
}

fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    std::fs::write(path, bytes).map_err(|e| llr_core::Error::io(path, e))?;
    Ok(())
}

fn create_dir(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| llr_core::Error::io(dir, e))?;
    Ok(())
}

fn print_written(paths: &[PathBuf]) -> anyhow::Result<()> {
    let text: String = paths.iter().map(|p| format!("{}\n", p.display())).collect();
    write_stdout(&text)
}

fn eval_config(config: &RunConfig) -> EvalConfig {
    EvalConfig {
        k: config.k,
        master_seed: config.master_seed,
    }
}

fn grid(config: &RunConfig, paths: &CorpusPaths, args: &RunArgs) -> anyhow::Result<()> {
    let corpus = paths.load()?;
    let individuals = run_grid(&corpus, &eval_config(config), &config.build_settings()?)?;
    create_dir(&args.out)?;
    let (path, bytes) = match args.format {
        Format::Csv => (
            args.out.join("individuals.csv"),
            individuals_csv(&individuals)?,
        ),
        Format::Json => (
            args.out.join("individuals.json"),
            individuals_json(config.k, corpus.artifacts().len(), &individuals)?,
        ),
    };
    write_file(&path, &bytes)?;
    print_written(&[path])
}

fn experiment(config: &RunConfig, paths: &CorpusPaths, args: &RunArgs) -> anyhow::Result<()> {
    let corpus = paths.load()?;
    let report = run_experiment(&corpus, &eval_config(config), &config.build_settings()?)?;
    let written = report.write(&args.out, report_format(args.format))?;
    print_written(&written)
}

fn gen_synthetic(config: &RunConfig, args: &SyntheticArgs) -> anyhow::Result<()> {
    let corpus = generate_synthetic_corpus(
        config.master_seed,
        args.lessons,
        args.artifacts,
        args.themes,
    )?;
    corpus.save_dir(&args.out)?;
    print_written(&[
        args.out.join(LESSONS_FILE),
        args.out.join(ARTIFACTS_FILE),
        args.out.join(JUDGMENTS_FILE),
    ])
}
