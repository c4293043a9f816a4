//! Merging of flags and the optional `--config` JSON file.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use serde::Deserialize;

use llr_core::eval::DEFAULT_TOP_K;
use llr_core::lda::LdaParams;
use llr_core::textprep::Stopwords;
use llr_core::BuildSettings;

use crate::args::GlobalArgs;
use crate::UsageError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    master_seed: Option<u64>,
    k: Option<usize>,
    jobs: Option<usize>,
    cache_dir: Option<PathBuf>,
    stopwords: Option<PathBuf>,
    #[serde(default)]
    lda: LdaOverrides,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LdaOverrides {
    alpha: Option<f64>,
    beta: Option<f64>,
    train_sweeps: Option<usize>,
    infer_sweeps: Option<usize>,
}

/// Fully resolved run settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub master_seed: u64,
    pub k: usize,
    pub jobs: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub lda: LdaParams,
}

impl RunConfig {
    pub fn resolve(global: &GlobalArgs, k: Option<usize>) -> anyhow::Result<Self> {
        let file = match &global.config {
            Some(path) => read_config(path)?,
            None => ConfigFile::default(),
        };
        let defaults = LdaParams::default();
        let lda = LdaParams {
            alpha: file.lda.alpha.or(global.lda_alpha).or(defaults.alpha),
            beta: file.lda.beta.or(global.lda_beta).unwrap_or(defaults.beta),
            train_sweeps: file
                .lda
                .train_sweeps
                .or(global.lda_train_sweeps)
                .unwrap_or(defaults.train_sweeps),
            infer_sweeps: file
                .lda
                .infer_sweeps
                .or(global.lda_infer_sweeps)
                .unwrap_or(defaults.infer_sweeps),
        };
        lda.validate()?;
        let config = RunConfig {
            master_seed: file.master_seed.unwrap_or(global.seed),
            k: file.k.or(k).unwrap_or(DEFAULT_TOP_K),
            jobs: file.jobs.or(global.jobs.map(usize::from)),
            cache_dir: file.cache_dir.or_else(|| global.cache_dir.clone()),
            stopwords: file.stopwords.or_else(|| global.stopwords.clone()),
            lda,
        };
        if config.k == 0 {
            return Err(UsageError("--k must be at least 1".into()).into());
        }
        if config.jobs == Some(0) {
            return Err(UsageError("jobs must be at least 1".into()).into());
        }
        if let Some(path) = &config.stopwords {
            require_file(path)?;
        }
        if let Some(dir) = &config.cache_dir {
            if dir.exists() && !dir.is_dir() {
                return Err(
                    UsageError(format!("cache dir {} is not a directory", dir.display())).into(),
                );
            }
        }
        Ok(config)
    }

    pub fn build_settings(&self) -> anyhow::Result<BuildSettings> {
        let stopwords = match &self.stopwords {
            Some(path) => Stopwords::from_file(path)?,
            None => Stopwords::embedded().clone(),
        };
        Ok(BuildSettings {
            stopwords: Arc::new(stopwords),
            lda: self.lda,
            master_seed: self.master_seed,
            cache_dir: self.cache_dir.clone(),
        })
    }

    /// Sizes the global worker pool. Call once, before any parallel work.
    pub fn init_pool(&self) -> anyhow::Result<()> {
        if let Some(jobs) = self.jobs {
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global()
                .context("starting worker pool")?;
        }
        Ok(())
    }
}

fn read_config(path: &Path) -> anyhow::Result<ConfigFile> {
    require_file(path)?;
    let text = std::fs::read_to_string(path).map_err(|e| llr_core::Error::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("invalid config file {}: {e}", path.display())).into())
}

pub fn require_file(path: &Path) -> anyhow::Result<()> {
    if !path.is_file() {
        return Err(UsageError(format!("no such file: {}", path.display())).into());
    }
    Ok(())
}

/// Rejects an output path that exists but is not a directory.
pub fn require_output_dir(path: &Path) -> anyhow::Result<()> {
    if path.exists() && !path.is_dir() {
        return Err(
            UsageError(format!("output path {} is not a directory", path.display())).into(),
        );
    }
    Ok(())
}
