// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Pure-state ensembles.
//!
//! The uniform ensemble `{|ψ⟩}` is sampled by drawing `2n` independent
//! standard normals for the real and imaginary parts and normalizing, which
//! is exactly the unitarily invariant measure on the unit sphere. The
//! shifted ensemble `{|ω⟩}` applies `(1 + dA)/sqrt(1 + d²)` to a uniform
//! state and is deliberately left unnormalized.

use faer::traits::Conjugate;
use faer::{c64, Mat, MatRef};

use crate::error::{Result, TyplabError};
use crate::operator::{ensure_dim, mat_mul, HermitianOperator};
use crate::rng::{salted_seed, SeededRng, SALT_UNITARY};

/// Complex amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<c64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<c64>) -> Self {
        Self { amplitudes }
    }

    /// Basis state `|k⟩`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut amplitudes = vec![c64::new(0.0, 0.0); n];
        amplitudes[k] = c64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[c64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<c64> {
        self.amplitudes
    }

    /// `⟨φ|φ⟩`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<c64> {
        ensure_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `M |φ⟩` for a square matrix `M`.
    pub fn transformed<T: Conjugate<Canonical = c64>>(&self, m: MatRef<'_, T>) -> Result<StateVector> {
        ensure_dim(m.ncols(), self.dim())?;
        let v = Mat::from_fn(self.dim(), 1, |j, _| self.amplitudes[j]);
        let out = mat_mul(m, v.as_ref());
        Ok(Self::new((0..m.nrows()).map(|j| out[(j, 0)]).collect()))
    }
}

/// Parameters of the shifted ensemble.
#[derive(Clone, Copy, Debug)]
pub struct OmegaParams<'a> {
    d: f64,
    observable: &'a HermitianOperator,
}

impl<'a> OmegaParams<'a> {
    /// `d` must be finite with `|d| < 1`.
    pub fn new(d: f64, observable: &'a HermitianOperator) -> Result<Self> {
        if !d.is_finite() || d.abs() >= 1.0 {
            return Err(TyplabError::InvalidParameter(format!(
                "deviation parameter d must satisfy |d| < 1, got {d}"
            )));
        }
        Ok(Self { d, observable })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn observable(&self) -> &'a HermitianOperator {
        self.observable
    }
}

/// Unit vector from the unitarily invariant distribution.
pub fn sample_uniform_state(n: usize, seed: u64) -> StateVector {
    assert!(n >= 1, "state dimension must be positive");
    let mut rng = SeededRng::new(seed);
    let mut amplitudes: Vec<c64> = (0..n).map(|_| rng.complex_gaussian()).collect();
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amplitudes {
        *z /= norm;
    }
    StateVector::new(amplitudes)
}

/// `|ω⟩ = (1 + dA)|ψ⟩ / sqrt(1 + d²)`, not renormalized.
pub fn make_omega(psi: &StateVector, params: &OmegaParams<'_>) -> Result<StateVector> {
    let a = params.observable;
    ensure_dim(a.dim(), psi.dim())?;
    let d = params.d;
    if d == 0.0 {
        return Ok(psi.clone());
    }
    let scale = 1.0 / (1.0 + d * d).sqrt();
    let a_psi = a.apply(psi.amplitudes());
    Ok(StateVector::new(
        psi.amplitudes()
            .iter()
            .zip(a_psi)
            .map(|(&x, ax)| (x + ax * d) * scale)
            .collect(),
    ))
}

/// Sample one `|ω⟩` from a seed.
pub fn sample_omega(params: &OmegaParams<'_>, seed: u64) -> StateVector {
    let psi = sample_uniform_state(params.observable.dim(), seed);
    make_omega(&psi, params).expect("dimensions agree by construction")
}

/// Ensemble average `(1 + 2dA + d²A²) / (n(1 + d²))` of `|ω⟩⟨ω|`.
pub fn average_density(params: &OmegaParams<'_>, n: usize) -> Result<HermitianOperator> {
    let a = params.observable;
    ensure_dim(a.dim(), n)?;
    let d = params.d;
    let norm = 1.0 / (n as f64 * (1.0 + d * d));
    let am = a.matrix();
    let a2 = mat_mul(am, am);
    let m = Mat::from_fn(n, n, |j, k| {
        let id = if j == k { 1.0 } else { 0.0 };
        (c64::new(id, 0.0) + am[(j, k)] * (2.0 * d) + a2[(j, k)] * (d * d)) * norm
    });
    Ok(HermitianOperator::from_hermitian_part(m))
}

/// `e^{iB}` for a real diagonal generator `B = diag(b)`.
pub fn diagonal_unitary(b: &[f64]) -> Mat<c64> {
    let n = b.len();
    let mut u = Mat::zeros(n, n);
    for (j, &x) in b.iter().enumerate() {
        u[(j, j)] = c64::cis(x);
    }
    u
}

/// A random unitary `e^{iB}` with `[B, A] = 0`: `B` diagonal with entries
/// uniform in `[0, 2π)`. Only diagonal observables are supported.
pub fn commuting_unitary(a: &HermitianOperator, seed: u64) -> Result<Mat<c64>> {
    if !a.is_diagonal() {
        return Err(TyplabError::NotDiagonal(a.max_off_diagonal()));
    }
    let mut rng = SeededRng::new(salted_seed(seed, SALT_UNITARY));
    let b: Vec<f64> = (0..a.dim())
        .map(|_| std::f64::consts::TAU * rng.uniform())
        .collect();
    Ok(diagonal_unitary(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_observable_pm1;
    use crate::operator::frobenius_norm;

    fn pm1_2() -> HermitianOperator {
        HermitianOperator::from_real_diagonal(&[1.0, -1.0])
    }

    #[test]
    fn uniform_states_are_normalized() {
        for (n, seed) in [(1, 0), (2, 1), (17, 2), (500, 3)] {
            let psi = sample_uniform_state(n, seed);
            assert_eq!(psi.dim(), n);
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_sampling_deterministic() {
        assert_eq!(sample_uniform_state(10, 4), sample_uniform_state(10, 4));
        assert_ne!(sample_uniform_state(10, 4), sample_uniform_state(10, 5));
    }

    #[test]
    fn omega_with_zero_d_is_psi() {
        let a = build_observable_pm1(8, 1).unwrap();
        let params = OmegaParams::new(0.0, &a).unwrap();
        let psi = sample_uniform_state(8, 2);
        assert_eq!(make_omega(&psi, &params).unwrap(), psi);
    }

    #[test]
    fn omega_two_level_closed_form() {
        let a = pm1_2();
        let params = OmegaParams::new(0.1, &a).unwrap();
        let psi = StateVector::basis(2, 0);
        let omega = make_omega(&psi, &params).unwrap();
        let expected = 1.1 / 1.01f64.sqrt();
        assert!((omega.amplitudes()[0].re - expected).abs() < 1e-15);
        assert_eq!(omega.amplitudes()[1], c64::new(0.0, 0.0));
        assert!((omega.norm_sqr() - 1.21 / 1.01).abs() < 1e-14);
    }

    #[test]
    fn omega_dimension_mismatch() {
        let a = pm1_2();
        let params = OmegaParams::new(0.1, &a).unwrap();
        assert!(matches!(
            make_omega(&sample_uniform_state(3, 0), &params),
            Err(TyplabError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn omega_params_reject_large_d() {
        let a = pm1_2();
        assert!(OmegaParams::new(1.0, &a).is_err());
        assert!(OmegaParams::new(-1.5, &a).is_err());
        assert!(OmegaParams::new(f64::NAN, &a).is_err());
        assert!(OmegaParams::new(-0.5, &a).is_ok());
    }

    #[test]
    fn average_density_limits() {
        let a = build_observable_pm1(4, 3).unwrap();
        let rho = average_density(&OmegaParams::new(0.0, &a).unwrap(), 4).unwrap();
        let diff = rho.into_matrix() - HermitianOperator::identity(4).scaled(0.25).matrix();
        assert!(frobenius_norm(diff.as_ref()) < 1e-15);

        let rho = average_density(&OmegaParams::new(0.1, &a).unwrap(), 4).unwrap();
        let expected = HermitianOperator::identity(4)
            .scaled(1.01)
            .try_add(&a.scaled(0.2))
            .unwrap()
            .scaled(1.0 / (4.0 * 1.01));
        let diff = rho.matrix() - expected.matrix();
        assert!(frobenius_norm(diff.as_ref()) < 1e-15);
        assert!((rho.trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn average_density_trace_general() {
        // trace = (1 + 2d c_1 + d² c_2)/(1 + d²)
        let a = HermitianOperator::from_real_diagonal(&[2.0, -2.0, 1.0, 0.0]);
        let d = 0.3;
        let rho = average_density(&OmegaParams::new(d, &a).unwrap(), 4).unwrap();
        let c = a.spectral_moments();
        let expected = (1.0 + 2.0 * d * c.c(1) + d * d * c.c(2)) / (1.0 + d * d);
        assert!((rho.trace() - expected).abs() < 1e-14);
    }

    #[test]
    fn zero_generator_gives_identity() {
        let u = diagonal_unitary(&[0.0; 5]);
        let diff = u - Mat::<c64>::identity(5, 5);
        assert_eq!(frobenius_norm(diff.as_ref()), 0.0);
    }

    #[test]
    fn commuting_unitary_commutes_exactly() {
        let a = build_observable_pm1(12, 7).unwrap();
        let u = commuting_unitary(&a, 3).unwrap();
        let ua = mat_mul(u.as_ref(), a.matrix());
        let au = mat_mul(a.matrix(), u.as_ref());
        assert_eq!(frobenius_norm((ua - au).as_ref()), 0.0);
        let g = mat_mul(u.adjoint(), u.as_ref()) - Mat::<c64>::identity(12, 12);
        assert!(frobenius_norm(g.as_ref()) < 1e-14);
    }

    #[test]
    fn commuting_unitary_needs_diagonal() {
        let m = Mat::from_fn(2, 2, |_, _| c64::new(1.0, 0.0));
        let a = HermitianOperator::new(m).unwrap();
        assert!(matches!(commuting_unitary(&a, 0), Err(TyplabError::NotDiagonal(_))));
    }

    #[test]
    fn commuting_unitary_preserves_expectation() {
        let a = build_observable_pm1(30, 1).unwrap();
        let params = OmegaParams::new(0.1, &a).unwrap();
        for s in 0..10 {
            let omega = sample_omega(&params, s);
            let before = a.quadratic_form(omega.amplitudes()).re;
            let u = commuting_unitary(&a, 100 + s).unwrap();
            let rotated = omega.transformed(u.as_ref()).unwrap();
            let after = a.quadratic_form(rotated.amplitudes()).re;
            assert!((before - after).abs() <= 1e-10);
        }
    }
}
