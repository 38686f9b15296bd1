// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Model systems: an equidistant unperturbed spectrum `H0`, a diagonal
//! observable with equally many `+1` and `-1` entries, and a perturbation
//! `V` that is either a complex Gaussian random matrix or a constant matrix.
//!
//! Everything is written in the eigenbasis of `H0`, where the observable is
//! diagonal too.

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TyplabError};
use crate::operator::HermitianOperator;
use crate::rng::{salted_seed, SeededRng, SALT_OBSERVABLE, SALT_PERTURBATION};

/// Dimension of the reference model.
pub const REFERENCE_DIM: usize = 6000;
/// Level spacing of the reference model.
pub const REFERENCE_SPACING: f64 = 8.33e-5;
/// `mean |V_jk|^2` of the weak Gaussian perturbation (exponential decay).
pub const WEAK_GAUSSIAN_MEAN_SQ: f64 = 2.25e-8;
/// `mean |V_jk|^2` of the strong Gaussian perturbation (non-exponential decay).
pub const STRONG_GAUSSIAN_MEAN_SQ: f64 = 6.25e-6;
/// `V_jk^2` of the constant perturbation (no relaxation).
pub const CONSTANT_VALUE_SQ: f64 = 2.25e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKind {
    Gaussian,
    Constant,
}

/// Diagonal of the Gaussian perturbation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussianDiagonal {
    /// Real Gaussian with variance `mean_sq`.
    #[default]
    Real,
    Zero,
}

fn default_true() -> bool {
    true
}

/// Parameters of a model Hamiltonian `H = H0 + V`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub n: usize,
    pub delta_e: f64,
    pub v_kind: PerturbationKind,
    /// Gaussian: `mean |V_jk|^2`. Constant: `V_jk^2`.
    pub v_scale: f64,
    pub seed: u64,
    #[serde(default)]
    pub gaussian_diagonal: GaussianDiagonal,
    /// Whether the constant perturbation also fills the diagonal.
    #[serde(default = "default_true")]
    pub constant_diagonal: bool,
}

impl ModelSpec {
    pub fn new(n: usize, delta_e: f64, v_kind: PerturbationKind, v_scale: f64, seed: u64) -> Self {
        Self {
            n,
            delta_e,
            v_kind,
            v_scale,
            seed,
            gaussian_diagonal: GaussianDiagonal::Real,
            constant_diagonal: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(TyplabError::InvalidDimension(format!(
                "n = {} (need n >= 2)",
                self.n
            )));
        }
        if !self.n.is_multiple_of(2) {
            return Err(TyplabError::OddDimension(self.n));
        }
        check_spacing(self.delta_e)?;
        check_scale("v_scale", self.v_scale)
    }

    pub fn observable_seed(&self) -> u64 {
        salted_seed(self.seed, SALT_OBSERVABLE)
    }

    pub fn perturbation_seed(&self) -> u64 {
        salted_seed(self.seed, SALT_PERTURBATION)
    }
}

/// The three reference perturbations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    /// Weak Gaussian perturbation: exponential relaxation.
    WeakGaussian,
    /// Strong Gaussian perturbation: non-exponential relaxation.
    StrongGaussian,
    /// Constant perturbation: no relaxation.
    Constant,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [
        Scenario::WeakGaussian,
        Scenario::StrongGaussian,
        Scenario::Constant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::WeakGaussian => "weak-gaussian",
            Scenario::StrongGaussian => "strong-gaussian",
            Scenario::Constant => "constant",
        }
    }

    /// The model at the reference dimension 6000.
    pub fn reference_spec(self, seed: u64) -> ModelSpec {
        self.scaled_spec(REFERENCE_DIM, seed)
    }

    /// The model at dimension `n`, keeping the bandwidth `n·ΔE` and the ratio
    /// `v_scale/ΔE²` of the reference model. Level density relative to the
    /// coupling is unchanged, so the relaxation shape carries over.
    pub fn scaled_spec(self, n: usize, seed: u64) -> ModelSpec {
        let ratio = REFERENCE_DIM as f64 / n as f64;
        let (kind, scale) = match self {
            Scenario::WeakGaussian => (PerturbationKind::Gaussian, WEAK_GAUSSIAN_MEAN_SQ),
            Scenario::StrongGaussian => (PerturbationKind::Gaussian, STRONG_GAUSSIAN_MEAN_SQ),
            Scenario::Constant => (PerturbationKind::Constant, CONSTANT_VALUE_SQ),
        };
        ModelSpec::new(n, REFERENCE_SPACING * ratio, kind, scale * ratio * ratio, seed)
    }
}

/// Diagonal `H0` with eigenvalues `k·ΔE`, `k = 0..n`.
pub fn build_h0(n: usize, delta_e: f64) -> Result<HermitianOperator> {
    if n < 2 {
        return Err(TyplabError::InvalidDimension(format!("n = {n} (need n >= 2)")));
    }
    check_spacing(delta_e)?;
    let levels: Vec<f64> = (0..n).map(|k| k as f64 * delta_e).collect();
    Ok(HermitianOperator::from_real_diagonal(&levels))
}

/// Diagonal observable with `n/2` entries `+1` and `n/2` entries `-1` in
/// seeded random order.
pub fn build_observable_pm1(n: usize, seed: u64) -> Result<HermitianOperator> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(TyplabError::OddDimension(n));
    }
    let mut entries: Vec<f64> = (0..n).map(|k| if k < n / 2 { 1.0 } else { -1.0 }).collect();
    SeededRng::new(seed).shuffle(&mut entries);
    Ok(HermitianOperator::from_real_diagonal(&entries))
}

/// Gaussian perturbation with a real Gaussian diagonal.
pub fn build_v_gaussian(n: usize, mean_sq: f64, seed: u64) -> Result<HermitianOperator> {
    build_v_gaussian_with(n, mean_sq, seed, GaussianDiagonal::Real)
}

/// Hermitian matrix with `V_jk = x + iy` above the diagonal, `x, y` independent
/// with variance `mean_sq/2`.
///
/// Draw order: rows `j` ascending; per row one complex Gaussian for the
/// diagonal (its real part, scaled by `sqrt(mean_sq)`, is used unless the
/// diagonal is zero) followed by one per `k > j`. The stream is the same for
/// both diagonal choices, so the off-diagonal part does not change.
pub fn build_v_gaussian_with(
    n: usize,
    mean_sq: f64,
    seed: u64,
    diagonal: GaussianDiagonal,
) -> Result<HermitianOperator> {
    check_scale("mean_sq", mean_sq)?;
    let mut rng = SeededRng::new(seed);
    let off = (mean_sq / 2.0).sqrt();
    let on = mean_sq.sqrt();
    let mut m = Mat::<c64>::zeros(n, n);
    for j in 0..n {
        let d = rng.complex_gaussian().re * on;
        if diagonal == GaussianDiagonal::Real {
            m[(j, j)] = c64::new(d, 0.0);
        }
        for k in j + 1..n {
            let z = rng.complex_gaussian() * off;
            m[(j, k)] = z;
            m[(k, j)] = z.conj();
        }
    }
    HermitianOperator::new(m)
}

/// Constant perturbation including the diagonal.
pub fn build_v_constant(n: usize, value_sq: f64) -> Result<HermitianOperator> {
    build_v_constant_with(n, value_sq, true)
}

/// Every entry equal to `sqrt(value_sq)`; the diagonal is zero when
/// `include_diagonal` is false.
pub fn build_v_constant_with(
    n: usize,
    value_sq: f64,
    include_diagonal: bool,
) -> Result<HermitianOperator> {
    check_scale("value_sq", value_sq)?;
    let v = value_sq.sqrt();
    let m = Mat::from_fn(n, n, |j, k| {
        if j == k && !include_diagonal {
            c64::new(0.0, 0.0)
        } else {
            c64::new(v, 0.0)
        }
    });
    HermitianOperator::new(m)
}

/// `H = H0 + V` for the given spec.
pub fn assemble_hamiltonian(spec: &ModelSpec) -> Result<HermitianOperator> {
    spec.validate()?;
    let h0 = build_h0(spec.n, spec.delta_e)?;
    let v = match spec.v_kind {
        PerturbationKind::Gaussian => build_v_gaussian_with(
            spec.n,
            spec.v_scale,
            spec.perturbation_seed(),
            spec.gaussian_diagonal,
        )?,
        PerturbationKind::Constant => {
            build_v_constant_with(spec.n, spec.v_scale, spec.constant_diagonal)?
        }
    };
    let h = h0.try_add(&v)?;
    // the sum of two Hermitian matrices is Hermitian; the gate is kept anyway
    HermitianOperator::new(h.into_matrix())
}

/// Hamiltonian and observable of one model instance.
#[derive(Clone, Debug)]
pub struct Model {
    pub spec: ModelSpec,
    pub hamiltonian: HermitianOperator,
    pub observable: HermitianOperator,
}

impl Model {
    pub fn build(spec: &ModelSpec) -> Result<Self> {
        let hamiltonian = assemble_hamiltonian(spec)?;
        let observable = build_observable_pm1(spec.n, spec.observable_seed())?;
        Ok(Self {
            spec: spec.clone(),
            hamiltonian,
            observable,
        })
    }
}

fn check_spacing(delta_e: f64) -> Result<()> {
    if delta_e.is_finite() && delta_e > 0.0 {
        Ok(())
    } else {
        Err(TyplabError::InvalidDimension(format!(
            "level spacing must be positive, got {delta_e}"
        )))
    }
}

fn check_scale(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(TyplabError::InvalidParameter(format!(
            "{name} must be non-negative, got {value}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h0_levels() {
        let h0 = build_h0(4, 8.33e-5).unwrap();
        let d = h0.diagonal_entries().unwrap();
        let expected = [0.0, 8.33e-5, 2.0 * 8.33e-5, 3.0 * 8.33e-5];
        for (x, e) in d.iter().zip(expected) {
            assert!((x - e).abs() < 1e-18);
        }
        assert!((d[2] - 1.666e-4).abs() < 1e-12);
        assert_eq!(build_h0(2, 1.0).unwrap().diagonal_entries().unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn h0_rejects_zero_spacing_and_tiny_dim() {
        assert!(matches!(build_h0(3, 0.0), Err(TyplabError::InvalidDimension(_))));
        assert!(matches!(build_h0(1, 1.0), Err(TyplabError::InvalidDimension(_))));
        assert!(build_h0(3, -1.0).is_err());
    }

    #[test]
    fn observable_two_arrangements() {
        for seed in 0..10 {
            let d = build_observable_pm1(2, seed).unwrap().diagonal_entries().unwrap();
            assert!(d == vec![1.0, -1.0] || d == vec![-1.0, 1.0]);
        }
    }

    #[test]
    fn observable_moments_exact() {
        for (n, seed) in [(6000, 1), (10, 2), (2, 3), (602, 4)] {
            let a = build_observable_pm1(n, seed).unwrap();
            let m = a.spectral_moments();
            assert_eq!(m.c(1), 0.0);
            assert_eq!(m.c(2), 1.0);
            assert_eq!(m.c(3), 0.0);
            assert_eq!(m.c(4), 1.0);
            assert_eq!(m.c(8), 1.0);
        }
    }

    #[test]
    fn observable_deterministic_and_seed_dependent() {
        let a = build_observable_pm1(100, 5).unwrap();
        assert_eq!(a, build_observable_pm1(100, 5).unwrap());
        assert_ne!(a, build_observable_pm1(100, 6).unwrap());
    }

    #[test]
    fn observable_rejects_odd() {
        assert!(matches!(build_observable_pm1(5, 0), Err(TyplabError::OddDimension(5))));
    }

    #[test]
    fn gaussian_zero_scale_is_zero() {
        let v = build_v_gaussian(5, 0.0, 1).unwrap();
        assert_eq!(v.frobenius_norm(), 0.0);
    }

    #[test]
    fn gaussian_diagonal_switch_keeps_off_diagonal() {
        let a = build_v_gaussian_with(6, 1.0, 9, GaussianDiagonal::Real).unwrap();
        let b = build_v_gaussian_with(6, 1.0, 9, GaussianDiagonal::Zero).unwrap();
        for j in 0..6 {
            assert_eq!(b.matrix()[(j, j)], c64::new(0.0, 0.0));
            assert_ne!(a.matrix()[(j, j)], c64::new(0.0, 0.0));
            for k in 0..6 {
                if j != k {
                    assert_eq!(a.matrix()[(j, k)], b.matrix()[(j, k)]);
                }
            }
        }
    }

    #[test]
    fn gaussian_second_moment() {
        let n = 2000;
        let mean_sq = 2.25e-8;
        let v = build_v_gaussian(n, mean_sq, 17).unwrap();
        let m = v.matrix();
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let mut count = 0.0;
        for k in 0..n {
            for j in 0..k {
                let x = m[(j, k)].norm_sqr();
                sum += x;
                sum_sq += x * x;
                count += 1.0;
            }
        }
        let mean = sum / count;
        let var = sum_sq / count - mean * mean;
        let se = (var / count).sqrt();
        assert!((mean - mean_sq).abs() <= 3.0 * se, "{mean} vs {mean_sq} (se {se})");
    }

    #[test]
    fn constant_structure() {
        let v = build_v_constant(3, 4.0).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(v.matrix()[(j, k)], c64::new(2.0, 0.0));
            }
        }
        let dec = v.eigendecompose().unwrap();
        let e = dec.eigenvalues();
        assert!(e[0].abs() < 1e-12 && e[1].abs() < 1e-12 && (e[2] - 6.0).abs() < 1e-12);

        let v = build_v_constant(4, 2.25e-8).unwrap();
        assert!((v.matrix()[(1, 2)].re - 1.5e-4).abs() < 1e-18);
        let v = build_v_constant_with(3, 4.0, false).unwrap();
        assert_eq!(v.matrix()[(1, 1)], c64::new(0.0, 0.0));
    }

    #[test]
    fn assemble_without_perturbation_is_h0() {
        let mut spec = ModelSpec::new(8, 0.5, PerturbationKind::Gaussian, 0.0, 3);
        assert_eq!(assemble_hamiltonian(&spec).unwrap(), build_h0(8, 0.5).unwrap());
        spec.v_kind = PerturbationKind::Constant;
        assert_eq!(assemble_hamiltonian(&spec).unwrap(), build_h0(8, 0.5).unwrap());
    }

    #[test]
    fn assemble_is_deterministic() {
        let spec = Scenario::StrongGaussian.scaled_spec(60, 4);
        let a = assemble_hamiltonian(&spec).unwrap();
        let b = assemble_hamiltonian(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.max_off_diagonal() > 0.0);
    }

    #[test]
    fn spec_validation() {
        assert!(ModelSpec::new(7, 1.0, PerturbationKind::Gaussian, 0.0, 0)
            .validate()
            .is_err());
        assert!(ModelSpec::new(8, 0.0, PerturbationKind::Gaussian, 0.0, 0)
            .validate()
            .is_err());
        assert!(ModelSpec::new(8, 1.0, PerturbationKind::Gaussian, -1.0, 0)
            .validate()
            .is_err());
    }

    #[test]
    fn scaled_scenarios_preserve_ratios() {
        let reference = Scenario::WeakGaussian.reference_spec(0);
        assert_eq!(reference.n, 6000);
        assert_eq!(reference.delta_e, 8.33e-5);
        assert_eq!(reference.v_scale, 2.25e-8);
        let small = Scenario::WeakGaussian.scaled_spec(600, 0);
        let r0 = reference.v_scale / reference.delta_e.powi(2);
        let r1 = small.v_scale / small.delta_e.powi(2);
        assert!((r0 - r1).abs() < 1e-9 * r0);
        assert!((small.n as f64 * small.delta_e - 6000.0 * 8.33e-5).abs() < 1e-12);
        // constant: top eigenvalue n·sqrt(value_sq) = 0.9 at every size
        let c = Scenario::Constant.scaled_spec(600, 0);
        assert!((c.n as f64 * c.v_scale.sqrt() - 0.9).abs() < 1e-12);
    }
}
