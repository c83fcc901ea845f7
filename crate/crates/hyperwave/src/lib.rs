//! Experiment runner for `hyperwave-core`: JSON configs, a catalogue of
//! scenarios with pass/fail checks, checksummed CSV output and binary plan
//! and state snapshots.

pub mod config;
pub mod data;
pub mod output;
pub mod persist;
pub mod scenario;

pub use config::{parse_config, parse_config_in, ConfigError, DataSpec, Scenario, SimConfig};
pub use scenario::{run_scenario, run_scenario_with, Check, RunStatus, ScenarioResult};

use anyhow::{Context, Result};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

/// Reads and parses a config file; relative paths inside it are resolved
/// against the file's directory.
pub fn load_config(path: &Path) -> Result<SimConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new(""));
    parse_config_in(&text, base).with_context(|| format!("invalid config {}", path.display()))
}

/// The `*.json` files directly inside `dir`, sorted by name.
pub fn sweep_configs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "json") && path.is_file() {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

/// Runs every config in `dir` on a pool of `threads` workers, each into its
/// own subdirectory of `out_root`. Results come back in file-name order.
pub fn sweep(dir: &Path, out_root: &Path, threads: usize) -> Result<Vec<(PathBuf, Result<ScenarioResult>)>> {
    let configs = sweep_configs(dir)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(|| {
        configs
            .into_par_iter()
            .map(|path| {
                let res = load_config(&path).map(|mut cfg| {
                    cfg.output_dir = scenario::sweep_output_dir(out_root, &path);
                    run_scenario(&cfg)
                });
                (path, res)
            })
            .collect()
    }))
}
