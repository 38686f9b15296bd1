// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration (TOML).
//!
//! ```toml
//! d = 0.1
//! trajectories = 100
//! base_seed = 42
//!
//! [model]
//! n = 600
//! delta_e = 8.33e-4
//! v_kind = "gaussian"        # or "constant"
//! v_scale = 2.25e-6
//! seed = 1
//! # gaussian_diagonal = "real"   # or "zero"
//! # constant_diagonal = true
//!
//! [time]
//! t_max = 200.0
//! points = 200
//!
//! [output]
//! directory = "out"
//! emit_trajectories = true
//! emit_plot = true
//! ```
//!
//! Optional tables: `[observable]` (`scale`, `offset`: the observable is
//! `scale·A + offset·1`) and `[verify]` (sample counts of `typlab verify`).
//! Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TyplabError};
use crate::model::{build_observable_pm1, ModelSpec};
use crate::operator::HermitianOperator;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    /// Deviation parameter of the shifted ensemble.
    pub d: f64,
    /// Number of trajectories `M`.
    pub trajectories: usize,
    pub time: TimeConfig,
    pub base_seed: u64,
    pub output: OutputConfig,
    #[serde(default)]
    pub observable: ObservableConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    /// Give every trajectory the seed `base_seed` itself (test hook).
    #[serde(default)]
    pub force_identical_seeds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_max: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub emit_trajectories: bool,
    pub emit_plot: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableConfig {
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub offset: f64,
}

impl Default for ObservableConfig {
    fn default() -> Self {
        Self {
            scale: 1.0,
            offset: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Uniform states for the mean/variance oracle.
    #[serde(default = "default_uniform_samples")]
    pub uniform_samples: usize,
    /// Shifted-ensemble states for the norm and mean-value oracles.
    #[serde(default = "default_omega_samples")]
    pub omega_samples: usize,
    /// Grid points used for the bound-domination check.
    #[serde(default = "default_bound_points")]
    pub bound_points: usize,
    /// Dimensions of the scaling fit.
    #[serde(default = "default_scaling_dims")]
    pub scaling_dims: Vec<usize>,
    /// Grid points per dimension of the scaling fit.
    #[serde(default = "default_scaling_points")]
    pub scaling_points: usize,
    #[serde(default = "default_verify_seed")]
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            uniform_samples: default_uniform_samples(),
            omega_samples: default_omega_samples(),
            bound_points: default_bound_points(),
            scaling_dims: default_scaling_dims(),
            scaling_points: default_scaling_points(),
            seed: default_verify_seed(),
        }
    }
}

fn one() -> f64 {
    1.0
}
fn default_uniform_samples() -> usize {
    20_000
}
fn default_omega_samples() -> usize {
    10_000
}
fn default_bound_points() -> usize {
    40
}
fn default_scaling_dims() -> Vec<usize> {
    vec![50, 100, 200, 400]
}
fn default_scaling_points() -> usize {
    12
}
fn default_verify_seed() -> u64 {
    0x7e57
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| TyplabError::ConfigParse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::parse(&text, path)
    }

    /// Parse and validate; `origin` only labels errors.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| TyplabError::ConfigParse {
            path: origin.to_path_buf(),
            message: e.to_string().trim_end().to_string(),
        })?;
        config.validate().map_err(|e| TyplabError::ConfigParse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if !(self.d.is_finite() && (0.0..1.0).contains(&self.d)) {
            return Err(TyplabError::InvalidParameter(format!(
                "d must lie in [0, 1), got {}",
                self.d
            )));
        }
        if self.trajectories < 2 {
            return Err(TyplabError::InvalidParameter(format!(
                "trajectories must be >= 2, got {}",
                self.trajectories
            )));
        }
        if self.time.points < 2 || !(self.time.t_max.is_finite() && self.time.t_max > 0.0) {
            return Err(TyplabError::InvalidParameter(
                "time.points must be >= 2 and time.t_max positive".into(),
            ));
        }
        if !(self.observable.scale.is_finite() && self.observable.offset.is_finite()) {
            return Err(TyplabError::InvalidParameter(
                "observable scale and offset must be finite".into(),
            ));
        }
        Ok(())
    }

    /// `scale·A + offset·1` with `A` the seeded `±1` observable.
    pub fn build_observable(&self) -> Result<HermitianOperator> {
        let base = build_observable_pm1(self.model.n, self.model.observable_seed())?;
        let entries: Vec<f64> = base
            .diagonal_entries()
            .expect("observable is diagonal")
            .into_iter()
            .map(|x| self.observable.scale * x + self.observable.offset)
            .collect();
        Ok(HermitianOperator::from_real_diagonal(&entries))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
