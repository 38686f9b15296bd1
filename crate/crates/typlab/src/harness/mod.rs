// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Config-driven commands behind the `typlab` binary.
//!
//! `cmd_run` writes into one directory:
//!
//! - `stats.csv`: `t,mean,variance,bound`, the bound repeated per row;
//! - `trajectories.csv` (optional): `t,traj_0,...,traj_{M-1}`;
//! - `meta.json`: config echo, RNG identifier, every derived seed, the
//!   spectral moments `c_1..c_8` and the analytic reference values;
//! - `plot.svg` (optional).
//!
//! A relative output directory is resolved against the config file's
//! directory.

pub mod config;
pub mod output;
pub mod plot;
pub mod verify;

use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::json;

pub use config::ExperimentConfig;
pub use output::{StatsTable, TrajectoryTable};
pub use verify::{CheckRow, VerifyReport};

use crate::ensemble::OmegaParams;
use crate::error::{Result, TyplabError};
use crate::model::Model;
use crate::operator::SpectralMoments;
use crate::propagate::{run_ensemble_with_seeds, TimeGrid};
use crate::rng::{child_seed, RNG_ALGORITHM};
use crate::stats::{
    mean_expectation_analytic, norm_variance_analytic, sample_stats, variance_bound, EnsembleStats,
};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "TYPLAB_THREADS";

/// Size the global rayon pool from `TYPLAB_THREADS` (unset or 0 keeps the
/// default). Returns the thread count in effect.
pub fn init_thread_pool() -> Result<usize> {
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value.trim().parse().map_err(|_| {
            TyplabError::InvalidParameter(format!("{THREADS_ENV} must be an integer, got {value:?}"))
        })?;
        if threads > 0 {
            // a pool that already exists keeps its size
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
    Ok(rayon::current_num_threads())
}

/// Command-line overrides for `run`.
#[derive(Clone, Debug, Default)]
pub struct RunOverrides {
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

/// What `cmd_run` produced.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub stats: EnsembleStats,
    pub bound: f64,
    pub moments: SpectralMoments,
    pub files: Vec<PathBuf>,
}

fn resolve_out_dir(config_path: &Path, configured: &Path) -> PathBuf {
    if configured.is_absolute() {
        return configured.to_path_buf();
    }
    config_path
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .join(configured)
}

/// Load `config_path` and run the configured ensemble.
pub fn cmd_run(config_path: &Path, overrides: &RunOverrides) -> Result<RunSummary> {
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(seed) = overrides.seed {
        config.base_seed = seed;
    }
    let out_dir = match &overrides.out_dir {
        Some(dir) => dir.clone(),
        None => resolve_out_dir(config_path, &config.output.directory),
    };
    run_config(&config, &out_dir)
}

/// Run an already loaded config, writing into `out_dir`.
pub fn run_config(config: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    config.validate()?;
    let model = Model::build(&config.model)?;
    let a = config.build_observable()?;
    let n = a.dim();
    let d = config.d;
    let moments = a.spectral_moments();
    let bound = variance_bound(d, moments.c(4), moments.c(8), n)?;
    let params = OmegaParams::new(d, &a)?;
    let grid = TimeGrid::uniform(config.time.t_max, config.time.points)?;
    let seeds: Vec<u64> = (0..config.trajectories as u64)
        .map(|i| {
            if config.force_identical_seeds {
                config.base_seed
            } else {
                child_seed(config.base_seed, i)
            }
        })
        .collect();

    log::info!("diagonalizing H (n = {n})");
    let dec = model.hamiltonian.eigendecompose()?;
    log::info!("propagating {} trajectories over {} points", seeds.len(), grid.len());
    let records = run_ensemble_with_seeds(&dec, &a, &params, &seeds, &grid)?;
    let stats = sample_stats(&records)?;

    std::fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    let stats_path = out_dir.join("stats.csv");
    output::write_stats_csv(&stats_path, &stats, bound)?;
    files.push(stats_path.clone());
    if config.output.emit_trajectories {
        let path = out_dir.join("trajectories.csv");
        output::write_trajectories_csv(&path, &records)?;
        files.push(path);
    }

    let meta = json!({
        "config": config,
        "rng": RNG_ALGORITHM,
        "seeds": {
            "base": config.base_seed,
            "model": config.model.seed,
            "observable": config.model.observable_seed(),
            "perturbation": config.model.perturbation_seed(),
            "trajectories": seeds,
        },
        "moments": moments.as_array(),
        "analytic": {
            "norm_variance": norm_variance_analytic(d, moments.c(3), moments.c(4), n),
            "mean_expectation": mean_expectation_analytic(d, moments.c(3)),
            "variance_bound": bound,
        },
        "diagnostics": {
            "eigendecomposition_residual": dec.reconstruction_residual(&model.hamiltonian),
        },
    });
    let meta_path = out_dir.join("meta.json");
    let mut text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    text.push('\n');
    std::fs::write(&meta_path, text)?;
    files.push(meta_path);

    if config.output.emit_plot {
        let path = out_dir.join("plot.svg");
        let table = output::read_stats_csv(&stats_path)?;
        let trajectories = if config.output.emit_trajectories {
            Some(output::read_trajectories_csv(&out_dir.join("trajectories.csv"))?)
        } else {
            None
        };
        std::fs::write(&path, plot::render_svg(&table, trajectories.as_ref()))?;
        files.push(path);
    }

    Ok(RunSummary {
        out_dir: out_dir.to_path_buf(),
        stats,
        bound,
        moments,
        files,
    })
}

/// Load `config_path` and run every verification check. The report is
/// returned even when checks fail; use [`VerifyReport::into_result`] to
/// turn failures into an error.
pub fn cmd_verify(config_path: &Path) -> Result<VerifyReport> {
    let config = ExperimentConfig::load(config_path)?;
    verify::run_checks(&config)
}

/// Spectral moments of the configured observable with the gate applied.
#[derive(Clone, Debug)]
pub struct MomentsReport {
    pub moments: SpectralMoments,
    pub gate: Vec<CheckRow>,
}

impl MomentsReport {
    pub fn new(moments: SpectralMoments) -> Self {
        Self {
            gate: verify::moment_gate(&moments),
            moments,
        }
    }

    /// Names of flagged moments, e.g. `c1`.
    pub fn flagged(&self) -> Vec<String> {
        self.gate
            .iter()
            .enumerate()
            .filter(|(_, row)| !row.passed())
            .map(|(i, _)| format!("c{}", i + 1))
            .collect()
    }
}

impl fmt::Display for MomentsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<4}  {:>22}  gate", "i", "c_i")?;
        for (i, row) in self.gate.iter().enumerate() {
            let flag = if row.passed() { "ok" } else { "FLAG" };
            writeln!(
                f,
                "{:<4}  {:>22}  {flag} ({})",
                i + 1,
                output::format_f64(self.moments.c(i + 1)),
                row.criterion
            )?;
        }
        Ok(())
    }
}

pub fn cmd_moments(config_path: &Path) -> Result<MomentsReport> {
    let config = ExperimentConfig::load(config_path)?;
    Ok(MomentsReport::new(config.build_observable()?.spectral_moments()))
}

/// Render `stats_csv` (and optionally `trajectories_csv`) to `out_svg`.
pub fn cmd_plot(stats_csv: &Path, trajectories_csv: Option<&Path>, out_svg: &Path) -> Result<()> {
    let stats = output::read_stats_csv(stats_csv)?;
    let trajectories = trajectories_csv
        .map(output::read_trajectories_csv)
        .transpose()?;
    if let Some(parent) = out_svg.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(out_svg, plot::render_svg(&stats, trajectories.as_ref()))?;
    Ok(())
}
