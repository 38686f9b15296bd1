// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end verification: Monte Carlo estimates against closed forms,
//! exact variance against the bound, symmetry and picture checks, and the
//! `1/n` scaling of the exact variance.
//!
//! The sampling helpers are public so tests and examples can reuse them.

use std::fmt;

use faer::{c64, Mat};
use rayon::prelude::*;

use super::config::ExperimentConfig;
use crate::ensemble::{
    average_density, commuting_unitary, sample_omega, sample_uniform_state, OmegaParams,
    StateVector,
};
use crate::error::{Result, TyplabError};
use crate::model::{Model, ModelSpec};
use crate::operator::{
    frobenius_norm, heisenberg_observable, mat_mul, HermitianOperator, SpectralDecomposition,
    SpectralMoments,
};
use crate::propagate::{evolve_state, expectation, TimeGrid};
use crate::rng::{child_seed, SeededRng};
use crate::stats::{
    ha_uniform, hv_uniform, mean_expectation_analytic, moment_map, norm_variance_analytic,
    variance_bound, SampleSummary, VarianceProfile,
};

/// Lower edge of the order-one band for `|c_i|^{1/i}`.
pub const MOMENT_BAND_LOW: f64 = 0.1;
/// Upper edge of the order-one band for `|c_i|^{1/i}`.
pub const MOMENT_BAND_HIGH: f64 = 10.0;
/// Largest accepted `|c_1|`.
pub const TRACE_TOL: f64 = 1e-12;

const BATCH: usize = 256;

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub measured: f64,
    /// Human-readable acceptance condition.
    pub criterion: String,
    /// Distance to failure; negative means failed.
    pub margin: f64,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        self.margin >= 0.0
    }

    /// `|measured − target| ≤ tol`.
    pub fn within(name: impl Into<String>, measured: f64, target: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            criterion: format!("|x - {target:.6e}| <= {tol:.3e}"),
            margin: tol - (measured - target).abs(),
        }
    }

    /// `measured ≤ limit`.
    pub fn at_most(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            criterion: format!("x <= {limit:.6e}"),
            margin: limit - measured,
        }
    }

    /// `lo ≤ measured ≤ hi`.
    pub fn in_range(name: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            criterion: format!("{lo} <= x <= {hi}"),
            margin: (measured - lo).min(hi - measured),
        }
    }
}

/// All rows of a verification run, in a fixed order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub rows: Vec<CheckRow>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(CheckRow::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckRow> {
        self.rows.iter().find(|r| !r.passed())
    }

    /// `Err(VerificationFailed)` naming the first failing check.
    pub fn into_result(self) -> Result<Self> {
        match self.first_failure() {
            Some(row) => Err(TyplabError::VerificationFailed(format!(
                "{}: measured {:.6e}, required {}",
                row.name, row.measured, row.criterion
            ))),
            None => Ok(self),
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(5).max(5);
        writeln!(
            f,
            "{:<4}  {:<width$}  {:>14}  {:>11}  criterion",
            "", "check", "measured", "margin"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<4}  {:<width$}  {:>14.6e}  {:>11.3e}  {}",
                if r.passed() { "PASS" } else { "FAIL" },
                r.name,
                r.measured,
                r.margin,
                r.criterion
            )?;
        }
        Ok(())
    }
}

/// Rows of the order-one moment gate: `|c_1| ≤ 1e-12`, and for `i ≥ 2`
/// the scale `|c_i|^{1/i}` must not exceed 10; even moments must also reach
/// 0.1. Odd moments may vanish by symmetry.
pub fn moment_gate(moments: &SpectralMoments) -> Vec<CheckRow> {
    let mut rows = vec![CheckRow::at_most("moment c1 trace-free", moments.c(1).abs(), TRACE_TOL)];
    for i in 2..=8 {
        let scale = moments.c(i).abs().powf(1.0 / i as f64);
        let lo = if i % 2 == 0 { MOMENT_BAND_LOW } else { 0.0 };
        rows.push(CheckRow::in_range(
            format!("moment |c{i}|^(1/{i})"),
            scale,
            lo,
            MOMENT_BAND_HIGH,
        ));
    }
    rows
}

/// `⟨ψ|D|ψ⟩` for `count` uniform states with seeds `child_seed(seed, i)`.
pub fn uniform_expectations(d: &HermitianOperator, count: usize, seed: u64) -> Vec<f64> {
    let n = d.dim();
    let batches: Vec<(usize, usize)> = (0..count)
        .step_by(BATCH)
        .map(|start| (start, (start + BATCH).min(count)))
        .collect();
    batches
        .par_iter()
        .map(|&(start, end)| {
            let states: Vec<StateVector> = (start..end)
                .map(|i| sample_uniform_state(n, child_seed(seed, i as u64)))
                .collect();
            let psi = Mat::from_fn(n, states.len(), |j, m| states[m].amplitudes()[j]);
            let applied = mat_mul(d.matrix(), psi.as_ref());
            (0..states.len())
                .map(|m| {
                    (0..n)
                        .map(|j| (psi[(j, m)].conj() * applied[(j, m)]).re)
                        .sum::<f64>()
                })
                .collect::<Vec<f64>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

/// Initial norm and expectation value of one shifted state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmegaSample {
    pub norm_sqr: f64,
    pub value: f64,
}

/// `count` shifted states with seeds `child_seed(seed, i)`.
pub fn omega_samples(params: &OmegaParams<'_>, count: usize, seed: u64) -> Result<Vec<OmegaSample>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let omega = sample_omega(params, child_seed(seed, i as u64));
            Ok(OmegaSample {
                norm_sqr: omega.norm_sqr(),
                value: expectation(params.observable(), &omega)?,
            })
        })
        .collect()
}

/// Hilbert–Schmidt distance between the sample average of `|ω⟩⟨ω|` over
/// `count` states and its closed form.
pub fn density_distance(params: &OmegaParams<'_>, count: usize, seed: u64) -> Result<f64> {
    if count == 0 {
        return Err(TyplabError::InvalidParameter("need at least one sample".into()));
    }
    let n = params.observable().dim();
    let states: Vec<StateVector> = (0..count)
        .into_par_iter()
        .map(|i| sample_omega(params, child_seed(seed, i as u64)))
        .collect();
    let omega = Mat::from_fn(n, count, |j, m| states[m].amplitudes()[j]);
    let mut sum = mat_mul(omega.as_ref(), omega.adjoint());
    let expected = average_density(params, n)?;
    let inv = 1.0 / count as f64;
    for k in 0..n {
        for j in 0..n {
            sum[(j, k)] = sum[(j, k)] * inv - expected.matrix()[(j, k)];
        }
    }
    Ok(frobenius_norm(sum.as_ref()))
}

/// Largest `|⟨Uω|A|Uω⟩ − ⟨ω|A|ω⟩|` over `states` shifted states and
/// `unitaries` commuting unitaries per state.
pub fn commuting_invariance_residual(
    params: &OmegaParams<'_>,
    states: usize,
    unitaries: usize,
    seed: u64,
) -> Result<f64> {
    let a = params.observable();
    let worst = (0..states)
        .into_par_iter()
        .map(|s| -> Result<f64> {
            let omega = sample_omega(params, child_seed(seed, s as u64));
            let before = expectation(a, &omega)?;
            let mut worst = 0.0f64;
            for k in 0..unitaries {
                let u = commuting_unitary(a, child_seed(seed ^ 0x55, (s * unitaries + k) as u64))?;
                let after = expectation(a, &omega.transformed(u.as_ref())?)?;
                worst = worst.max((after - before).abs());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(worst.into_iter().fold(0.0, f64::max))
}

/// Largest relative difference between `⟨ω(t)|A|ω(t)⟩` and `⟨ω|A(t)|ω⟩`.
pub fn picture_residual(
    a: &HermitianOperator,
    dec: &SpectralDecomposition,
    omega: &StateVector,
    times: &[f64],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &t in times {
        let schrodinger = expectation(a, &evolve_state(dec, omega, t)?)?;
        let heisenberg = expectation(&heisenberg_observable(a, dec, t)?, omega)?;
        let scale = schrodinger.abs().max(heisenberg.abs()).max(1.0);
        worst = worst.max((schrodinger - heisenberg).abs() / scale);
    }
    Ok(worst)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// `spec` moved to dimension `n` with the spectral bandwidth `n·ΔE` and the
/// ratio `v_scale/ΔE²` held fixed.
pub fn rescale_spec(spec: &ModelSpec, n: usize) -> ModelSpec {
    let ratio = spec.n as f64 / n as f64;
    ModelSpec {
        n,
        delta_e: spec.delta_e * ratio,
        v_scale: spec.v_scale * ratio * ratio,
        ..spec.clone()
    }
}

/// `max_t` of the exact shifted-ensemble variance of `⟨ω|A(t)|ω⟩` over
/// `times` for the model built from `spec`.
pub fn peak_exact_variance(spec: &ModelSpec, d: f64, times: &[f64]) -> Result<f64> {
    let model = Model::build(spec)?;
    let dec = model.hamiltonian.eigendecompose()?;
    let profile = VarianceProfile::new(&model.observable, &dec, d)?;
    Ok(profile.hv_on(times).into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Dense random Hermitian matrix with spectrum of order one.
pub fn random_hermitian(n: usize, seed: u64) -> HermitianOperator {
    let mut rng = SeededRng::new(seed);
    let scale = 1.0 / (n as f64).sqrt();
    let mut m = Mat::<c64>::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = c64::new(rng.gaussian_pair().0 * scale, 0.0);
        for j in 0..k {
            let z = rng.complex_gaussian() * (scale / std::f64::consts::SQRT_2);
            m[(j, k)] = z;
            m[(k, j)] = z.conj();
        }
    }
    HermitianOperator::new(m).expect("constructed Hermitian")
}

type Check<'a> = Box<dyn Fn() -> Result<Vec<CheckRow>> + Send + Sync + 'a>;

/// Run every check for `config`. Checks run in parallel; rows keep a fixed
/// order.
pub fn run_checks(config: &ExperimentConfig) -> Result<VerifyReport> {
    config.validate()?;
    let model = Model::build(&config.model)?;
    let a = config.build_observable()?;
    let n = a.dim();
    let d = config.d;
    let params = OmegaParams::new(d, &a)?;
    let moments = a.spectral_moments();
    let v = &config.verify;
    let bound = variance_bound(d, moments.c(4), moments.c(8), n)?;
    let dec = model.hamiltonian.eigendecompose()?;
    let grid = TimeGrid::uniform(config.time.t_max, v.bound_points.max(2))?;

    let checks: Vec<Check<'_>> = vec![
        Box::new(|| Ok(moment_gate(&moments))),
        Box::new(|| {
            let identity = HermitianOperator::identity(n);
            let norm_chain = hv_uniform(&moment_map(&identity, &a, d)?);
            let mean_chain = ha_uniform(&moment_map(&a, &a, d)?);
            Ok(vec![
                CheckRow::within(
                    "identity: norm variance",
                    norm_chain,
                    norm_variance_analytic(d, moments.c(3), moments.c(4), n),
                    1e-12,
                ),
                CheckRow::within(
                    "identity: mean expectation",
                    mean_chain,
                    mean_expectation_analytic(d, moments.c(3)),
                    1e-12,
                ),
            ])
        }),
        Box::new(|| {
            let op = random_hermitian(n, v.seed);
            let s = SampleSummary::from_samples(&uniform_expectations(&op, v.uniform_samples, v.seed ^ 1));
            let ha = ha_uniform(&op);
            let hv = hv_uniform(&op);
            Ok(vec![
                CheckRow::within("uniform MC: mean", s.mean, ha, 3.0 * s.std_error()),
                CheckRow::within("uniform MC: variance", s.variance, hv, 0.1 * hv),
            ])
        }),
        Box::new(|| {
            let samples = omega_samples(&params, v.omega_samples, v.seed ^ 2)?;
            let count = samples.len() as f64;
            let norms: Vec<f64> = samples.iter().map(|s| s.norm_sqr).collect();
            let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
            let norm = SampleSummary::from_samples(&norms);
            let value = SampleSummary::from_samples(&values);
            let nv = norm_variance_analytic(d, moments.c(3), moments.c(4), n);
            let norm_var_row = if nv == 0.0 {
                CheckRow::at_most("omega MC: norm variance", norm.variance, 1e-24)
            } else {
                CheckRow::within("omega MC: norm variance", norm.variance, nv, 0.15 * nv)
            };
            Ok(vec![
                CheckRow::within(
                    "omega MC: mean norm",
                    norm.mean,
                    1.0,
                    (3.0 * (nv / count).sqrt()).max(1e-12),
                ),
                norm_var_row,
                CheckRow::within(
                    "omega MC: mean expectation",
                    value.mean,
                    mean_expectation_analytic(d, moments.c(3)),
                    3.0 * (bound / count).sqrt(),
                ),
            ])
        }),
        Box::new(|| {
            let profile = VarianceProfile::new(&a, &dec, d)?;
            let peak = profile
                .hv_on(grid.times())
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            Ok(vec![CheckRow::at_most("exact variance <= bound", peak, bound + 1e-10)])
        }),
        Box::new(|| {
            let r = commuting_invariance_residual(&params, 20, 5, v.seed ^ 3)?;
            Ok(vec![CheckRow::at_most("commuting unitary invariance", r, 1e-10)])
        }),
        Box::new(|| {
            let omega = sample_omega(&params, v.seed ^ 4);
            let t_max = config.time.t_max;
            let r = picture_residual(&a, &dec, &omega, &[0.0, 0.1 * t_max, 0.5 * t_max, t_max])?;
            Ok(vec![CheckRow::at_most("picture equivalence", r, 1e-9)])
        }),
        Box::new(|| {
            let times = TimeGrid::uniform(config.time.t_max, v.scaling_points.max(2))?;
            let dims: Vec<f64> = v.scaling_dims.iter().map(|&k| k as f64).collect();
            let peaks = v
                .scaling_dims
                .iter()
                .map(|&k| peak_exact_variance(&rescale_spec(&config.model, k), d, times.times()))
                .collect::<Result<Vec<f64>>>()?;
            Ok(vec![CheckRow::in_range(
                "1/n scaling slope",
                loglog_slope(&dims, &peaks),
                -1.3,
                -0.7,
            )])
        }),
    ];
    if v.scaling_dims.len() < 2 {
        return Err(TyplabError::InvalidParameter(
            "verify.scaling_dims needs at least two dimensions".into(),
        ));
    }
    let rows = checks
        .par_iter()
        .map(|check| check())
        .collect::<Result<Vec<Vec<CheckRow>>>>()?;
    Ok(VerifyReport {
        rows: rows.concat(),
    })
}
