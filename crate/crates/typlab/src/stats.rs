// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form Hilbert-space statistics and the sample estimators they are
//! compared against.
//!
//! For the uniform ensemble, `HA[⟨ψ|D|ψ⟩] = Tr{D}/n` and
//! `HV[⟨ψ|D|ψ⟩] = (c_2 − c_1²)/(n + 1)`. Averages over the shifted ensemble
//! reduce to these through the moment map
//! `D = (1 + dA) C (1 + dA)/(1 + d²)`.

use faer::{c64, Mat};
use rayon::prelude::*;

use crate::error::{Result, TyplabError};
use crate::operator::{
    ensure_dim, frobenius_norm, heisenberg_observable, mat_mul, trace, HermitianOperator,
    SpectralDecomposition,
};
use crate::propagate::TrajectoryRecord;

/// `Tr{D}/n`: mean of `⟨ψ|D|ψ⟩` over uniform states.
pub fn ha_uniform(d: &HermitianOperator) -> f64 {
    d.trace() / d.dim() as f64
}

/// `(c_2 − c_1²)/(n + 1)`: variance of `⟨ψ|D|ψ⟩` over uniform states.
pub fn hv_uniform(d: &HermitianOperator) -> f64 {
    let n = d.dim() as f64;
    let c1 = d.trace() / n;
    // Tr{D²} = ‖D‖_F² for Hermitian D
    let c2 = frobenius_norm(d.matrix()).powi(2) / n;
    (c2 - c1 * c1) / (n + 1.0)
}

/// `(1 + dA) C (1 + dA)/(1 + d²)`.
pub fn moment_map(c: &HermitianOperator, a: &HermitianOperator, d: f64) -> Result<HermitianOperator> {
    ensure_dim(a.dim(), c.dim())?;
    let n = a.dim();
    let norm = 1.0 / (1.0 + d * d);
    let cm = c.matrix();
    if let Some(diag) = a.diagonal_entries() {
        let m = Mat::from_fn(n, n, |j, k| {
            cm[(j, k)] * ((1.0 + d * diag[j]) * (1.0 + d * diag[k]) * norm)
        });
        return Ok(HermitianOperator::from_hermitian_part(m));
    }
    let am = a.matrix();
    let shift = Mat::from_fn(n, n, |j, k| {
        let id = if j == k { 1.0 } else { 0.0 };
        c64::new(id, 0.0) + am[(j, k)] * d
    });
    let left = mat_mul(shift.as_ref(), cm);
    let full = mat_mul(left.as_ref(), shift.as_ref());
    Ok(HermitianOperator::from_hermitian_part(full * faer::Scale(c64::new(norm, 0.0))))
}

/// Variance of the squared norms `⟨ω|ω⟩`:
/// `(4d² + 4d³c_3 + d⁴(c_4 − 1)) / ((n + 1)(1 + d²)²)`.
pub fn norm_variance_analytic(d: f64, c3: f64, c4: f64, n: usize) -> f64 {
    let d2 = d * d;
    let numerator = 4.0 * d2 + 4.0 * d2 * d * c3 + d2 * d2 * (c4 - 1.0);
    numerator / ((n as f64 + 1.0) * (1.0 + d2).powi(2))
}

/// Mean of `⟨ω|A|ω⟩`: `(2d + d²c_3)/(1 + d²)`.
pub fn mean_expectation_analytic(d: f64, c3: f64) -> f64 {
    (2.0 * d + d * d * c3) / (1.0 + d * d)
}

/// Upper bound on the variance of `⟨ω|A(t)|ω⟩`, valid at every time:
///
/// `(1 + 4d√c_4 + 6d²c_4 + 4d³√c_4 (c_4c_8)^{1/4} + d⁴√(c_4c_8)) / ((n + 1)(1 + d²)²)`.
///
/// Only `d >= 0` is accepted.
pub fn variance_bound(d: f64, c4: f64, c8: f64, n: usize) -> Result<f64> {
    if c4 < 0.0 {
        return Err(TyplabError::NegativeMoment { name: "c4", value: c4 });
    }
    if c8 < 0.0 {
        return Err(TyplabError::NegativeMoment { name: "c8", value: c8 });
    }
    if !(d.is_finite() && d >= 0.0) {
        return Err(TyplabError::InvalidParameter(format!(
            "variance bound needs d >= 0, got {d}"
        )));
    }
    let s4 = c4.sqrt();
    let s48 = (c4 * c8).sqrt();
    let numerator = 1.0
        + 4.0 * d * s4
        + 6.0 * d * d * c4
        + 4.0 * d.powi(3) * s4 * s48.sqrt()
        + d.powi(4) * s48;
    Ok(numerator / ((n as f64 + 1.0) * (1.0 + d * d).powi(2)))
}

/// Exact variance of `⟨ω|A(t)|ω⟩` over the shifted ensemble, by direct
/// composition of the Heisenberg observable, the moment map and `hv_uniform`.
pub fn hv_at_time_exact(
    a: &HermitianOperator,
    dec: &SpectralDecomposition,
    d: f64,
    t: f64,
) -> Result<f64> {
    let at = heisenberg_observable(a, dec, t)?;
    Ok(hv_uniform(&moment_map(&at, a, d)?))
}

/// Evaluates [`hv_at_time_exact`] on many times with one matrix product per
/// time.
///
/// With `P = (1 + dA)²` and everything in the energy eigenbasis,
/// `Tr{D} = Tr{F Ã}/(1 + d²)` and `Tr{D²} = Tr{(F Ã)²}/(1 + d²)²`, where
/// `F_jk = e^{−i(E_j − E_k)t} P̃_jk`.
#[derive(Clone, Debug)]
pub struct VarianceProfile {
    energies: Vec<f64>,
    observable: Mat<c64>,
    weight: Mat<c64>,
    d: f64,
}

impl VarianceProfile {
    pub fn new(a: &HermitianOperator, dec: &SpectralDecomposition, d: f64) -> Result<Self> {
        ensure_dim(dec.dim(), a.dim())?;
        let n = a.dim();
        let am = a.matrix();
        let shift = Mat::from_fn(n, n, |j, k| {
            let id = if j == k { 1.0 } else { 0.0 };
            c64::new(id, 0.0) + am[(j, k)] * d
        });
        let p = mat_mul(shift.as_ref(), shift.as_ref());
        Ok(Self {
            energies: dec.eigenvalues().to_vec(),
            observable: dec.to_eigenbasis(am),
            weight: dec.to_eigenbasis(p.as_ref()),
            d,
        })
    }

    pub fn hv_at(&self, t: f64) -> f64 {
        let n = self.energies.len();
        let phases: Vec<c64> = self.energies.iter().map(|&e| c64::cis(-e * t)).collect();
        let f = Mat::from_fn(n, n, |j, k| self.weight[(j, k)] * phases[j] * phases[k].conj());
        let y = mat_mul(f.as_ref(), self.observable.as_ref());
        let tr_y = trace(y.as_ref());
        let mut tr_y2 = c64::new(0.0, 0.0);
        for k in 0..n {
            for j in 0..n {
                tr_y2 += y[(j, k)] * y[(k, j)];
            }
        }
        let norm = 1.0 + self.d * self.d;
        let nf = n as f64;
        let c1 = tr_y / norm / nf;
        let c2 = tr_y2.re / (norm * norm) / nf;
        (c2 - c1 * c1) / (nf + 1.0)
    }

    /// Values on `times`, evaluated in parallel, in input order.
    pub fn hv_on(&self, times: &[f64]) -> Vec<f64> {
        times.par_iter().map(|&t| self.hv_at(t)).collect()
    }
}

/// Per-time statistics over an ensemble of trajectories.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleStats {
    pub time_grid: Vec<f64>,
    pub mean: Vec<f64>,
    /// Unbiased sample variance (divisor `M − 1`).
    pub variance: Vec<f64>,
    pub count: usize,
}

/// Per-time mean and unbiased variance. Sums run in trajectory order.
pub fn sample_stats(trajectories: &[TrajectoryRecord]) -> Result<EnsembleStats> {
    let m = trajectories.len();
    if m < 2 {
        return Err(TyplabError::TooFewTrajectories(m));
    }
    let grid = trajectories[0].grid.times();
    for (index, record) in trajectories.iter().enumerate() {
        if record.grid.times() != grid || record.values.len() != grid.len() {
            return Err(TyplabError::GridMismatch { index });
        }
    }
    let mut mean = Vec::with_capacity(grid.len());
    let mut variance = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        let column: Vec<f64> = trajectories.iter().map(|r| r.values[k]).collect();
        let s = SampleSummary::from_samples(&column);
        mean.push(s.mean);
        variance.push(s.variance);
    }
    Ok(EnsembleStats {
        time_grid: grid.to_vec(),
        mean,
        variance,
        count: m,
    })
}

/// Mean, unbiased variance and standard error of a sample (two-pass).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
}

impl SampleSummary {
    pub fn from_samples(xs: &[f64]) -> Self {
        let count = xs.len();
        let mean = xs.iter().sum::<f64>() / count as f64;
        let variance = if count > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64
        } else {
            0.0
        };
        Self {
            count,
            mean,
            variance,
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        (self.variance / self.count as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_observable_pm1;
    use crate::propagate::TimeGrid;
    use crate::rng::SeededRng;

    fn random_hermitian(n: usize, seed: u64) -> HermitianOperator {
        let mut rng = SeededRng::new(seed);
        let mut m = Mat::<c64>::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = c64::new(rng.gaussian_pair().0, 0.0);
            for j in 0..k {
                let z = rng.complex_gaussian() * 0.5;
                m[(j, k)] = z;
                m[(k, j)] = z.conj();
            }
        }
        HermitianOperator::new(m).unwrap()
    }

    #[test]
    fn uniform_moments_of_simple_operators() {
        let id = HermitianOperator::identity(9);
        assert_eq!(ha_uniform(&id), 1.0);
        assert_eq!(hv_uniform(&id), 0.0);
        let a = build_observable_pm1(40, 1).unwrap();
        assert_eq!(ha_uniform(&a), 0.0);
        assert!((hv_uniform(&a) - 1.0 / 41.0).abs() < 1e-15);
    }

    #[test]
    fn moment_map_cases() {
        let a = build_observable_pm1(20, 2).unwrap();
        let c = random_hermitian(20, 3);
        assert_eq!(moment_map(&c, &a, 0.0).unwrap(), c);

        let d = 0.1;
        let mapped = moment_map(&HermitianOperator::identity(20), &a, d).unwrap();
        let expected = HermitianOperator::identity(20)
            .scaled(1.0 + d * d)
            .try_add(&a.scaled(2.0 * d))
            .unwrap()
            .scaled(1.0 / (1.0 + d * d));
        assert!(frobenius_norm((mapped.matrix() - expected.matrix()).as_ref()) < 1e-14);
        assert!((ha_uniform(&mapped) - 1.0).abs() < 1e-14);

        let mapped = moment_map(&a, &a, d).unwrap();
        assert!((ha_uniform(&mapped) - 0.2 / 1.01).abs() < 1e-15);
        assert!((ha_uniform(&mapped) - 0.19802).abs() < 1e-5);
    }

    #[test]
    fn moment_map_general_observable_matches_diagonal_path() {
        // a rotated copy of a diagonal observable goes through the product path
        let c = random_hermitian(12, 4);
        let diag = build_observable_pm1(12, 5).unwrap();
        let dense = HermitianOperator::new({
            let mut m = diag.matrix().to_owned();
            m[(0, 1)] = c64::new(0.0, 1e-3);
            m[(1, 0)] = c64::new(0.0, -1e-3);
            m
        })
        .unwrap();
        let via_products = moment_map(&c, &dense, 0.2).unwrap();
        // reference by explicit products
        let n = 12;
        let shift = Mat::from_fn(n, n, |j, k| {
            let id = if j == k { 1.0 } else { 0.0 };
            c64::new(id, 0.0) + dense.matrix()[(j, k)] * 0.2
        });
        let r = mat_mul(mat_mul(shift.as_ref(), c.matrix()).as_ref(), shift.as_ref());
        let r = r * faer::Scale(c64::new(1.0 / 1.04, 0.0));
        assert!(frobenius_norm((via_products.matrix() - r).as_ref()) < 1e-13);
        assert!(moment_map(&c, &HermitianOperator::identity(3), 0.1).is_err());
    }

    #[test]
    fn norm_variance_values() {
        assert_eq!(norm_variance_analytic(0.0, 0.3, 2.0, 100), 0.0);
        let v = norm_variance_analytic(0.1, 0.0, 1.0, 6000);
        // (1 + d²)² = 1.0201
        let expected = 0.04 / (6001.0 * 1.0201);
        assert!((v - expected).abs() < 1e-14 * expected);
        assert!((v - 6.534e-6).abs() < 0.001e-6);
    }

    #[test]
    fn mean_expectation_values() {
        assert_eq!(mean_expectation_analytic(0.0, 0.0), 0.0);
        let m = mean_expectation_analytic(0.1, 0.0);
        assert!((m - 0.198).abs() < 1e-3);
        let h = 1e-6;
        let slope = (mean_expectation_analytic(h, 0.4) - mean_expectation_analytic(-h, 0.4)) / (2.0 * h);
        assert!((slope - 2.0).abs() < 1e-6);
    }

    #[test]
    fn bound_values() {
        assert!((variance_bound(0.0, 1.0, 1.0, 99).unwrap() - 0.01).abs() < 1e-16);
        let b = variance_bound(0.1, 1.0, 1.0, 6000).unwrap();
        // ±1 observable: numerator is (1 + d)⁴
        let expected = 1.1f64.powi(4) / (6001.0 * 1.0201);
        assert!((b - expected).abs() < 1e-14 * expected);
        assert!((b - 2.392e-4).abs() < 0.001e-4);
        assert!(matches!(
            variance_bound(0.1, -1.0, 1.0, 10),
            Err(TyplabError::NegativeMoment { name: "c4", .. })
        ));
        assert!(variance_bound(0.1, 1.0, -1.0, 10).is_err());
        assert!(variance_bound(-0.1, 1.0, 1.0, 10).is_err());
    }

    #[test]
    fn bound_monotone_in_d() {
        let mut prev = 0.0;
        for k in 0..1000 {
            let d = k as f64 / 1000.0;
            let b = variance_bound(d, 1.0, 1.0, 10).unwrap();
            assert!(b >= prev);
            prev = b;
        }
    }

    #[test]
    fn analytic_identities_hold() {
        for n in [50, 100] {
            let a = build_observable_pm1(n, n as u64).unwrap();
            let m = a.spectral_moments();
            let id = HermitianOperator::identity(n);
            for d in [0.0, 0.05, 0.1, 0.3] {
                let hv = hv_uniform(&moment_map(&id, &a, d).unwrap());
                assert!((hv - norm_variance_analytic(d, m.c(3), m.c(4), n)).abs() < 1e-12);
                let ha = ha_uniform(&moment_map(&a, &a, d).unwrap());
                assert!((ha - mean_expectation_analytic(d, m.c(3))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_hv_at_zero_time() {
        let n = 30;
        let a = build_observable_pm1(n, 8).unwrap();
        let dec = random_hermitian(n, 9).eigendecompose().unwrap();
        let hv = hv_at_time_exact(&a, &dec, 0.0, 0.0).unwrap();
        assert!((hv - 1.0 / (n as f64 + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn exact_hv_below_bound_and_profile_agrees() {
        let n = 40;
        let a = build_observable_pm1(n, 10).unwrap();
        let dec = random_hermitian(n, 11).eigendecompose().unwrap();
        let d = 0.3;
        let bound = variance_bound(d, 1.0, 1.0, n).unwrap();
        let profile = VarianceProfile::new(&a, &dec, d).unwrap();
        for t in [0.0, 0.2, 1.0, 7.5, 30.0] {
            let direct = hv_at_time_exact(&a, &dec, d, t).unwrap();
            let fast = profile.hv_at(t);
            assert!((direct - fast).abs() < 1e-12, "t={t}: {direct} vs {fast}");
            assert!(direct <= bound + 1e-10);
        }
    }

    #[test]
    fn exact_hv_constant_for_conserved_observable() {
        let n = 10;
        let a = build_observable_pm1(n, 12).unwrap();
        let levels: Vec<f64> = (0..n).map(|k| 0.37 * k as f64).collect();
        let dec = HermitianOperator::from_real_diagonal(&levels)
            .eigendecompose()
            .unwrap();
        let h0 = hv_at_time_exact(&a, &dec, 0.1, 0.0).unwrap();
        for t in [1.0, 4.0, 50.0] {
            assert!((hv_at_time_exact(&a, &dec, 0.1, t).unwrap() - h0).abs() < 1e-14);
        }
    }

    fn record(values: Vec<f64>) -> TrajectoryRecord {
        let grid = TimeGrid::uniform(1.0, values.len()).unwrap();
        TrajectoryRecord {
            grid,
            values,
            norm0: 1.0,
            seed: 0,
        }
    }

    #[test]
    fn sample_stats_basic() {
        let r = record(vec![0.2, 0.1, 0.0]);
        let s = sample_stats(&[r.clone(), r.clone()]).unwrap();
        assert_eq!(s.variance, vec![0.0; 3]);
        assert_eq!(s.mean, vec![0.2, 0.1, 0.0]);
        assert_eq!(s.count, 2);

        let s = sample_stats(&[record(vec![1.0, 0.0]), record(vec![3.0, 0.0])]).unwrap();
        assert_eq!(s.mean, vec![2.0, 0.0]);
        assert_eq!(s.variance, vec![2.0, 0.0]);
    }

    #[test]
    fn sample_stats_errors() {
        assert!(matches!(
            sample_stats(&[record(vec![0.0, 1.0])]),
            Err(TyplabError::TooFewTrajectories(1))
        ));
        assert!(matches!(
            sample_stats(&[record(vec![0.0, 1.0]), record(vec![0.0, 1.0, 2.0])]),
            Err(TyplabError::GridMismatch { index: 1 })
        ));
    }
}
