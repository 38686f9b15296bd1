// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Exact Schrödinger propagation through one eigendecomposition of `H`.
//!
//! A state is rotated into the energy eigenbasis once; each time point then
//! costs a diagonal phase multiplication and one rotation back (batched over
//! all trajectories of an ensemble as a single matrix product).

use faer::{c64, Mat, MatRef};
use log::warn;
use rayon::prelude::*;

use crate::ensemble::{sample_omega, OmegaParams, StateVector};
use crate::error::{Result, TyplabError};
use crate::operator::{ensure_dim, mat_mul, HermitianOperator, SpectralDecomposition};
use crate::rng::child_seed;
use crate::stats::{mean_expectation_analytic, norm_variance_analytic, variance_bound};

/// Relative tolerance on the imaginary part of an expectation value.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// Strictly increasing times starting at 0.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(TyplabError::InvalidGrid(format!(
                "need at least 2 points, got {}",
                times.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(TyplabError::InvalidGrid(format!(
                "grid must start at 0, starts at {}",
                times[0]
            )));
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(TyplabError::InvalidGrid(
                "times must be finite and strictly increasing".into(),
            ));
        }
        Ok(Self { times })
    }

    /// `points` equally spaced times on `[0, t_max]`.
    pub fn uniform(t_max: f64, points: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(TyplabError::InvalidGrid(format!("t_max must be positive, got {t_max}")));
        }
        if points < 2 {
            return Err(TyplabError::InvalidGrid(format!(
                "need at least 2 points, got {points}"
            )));
        }
        let step = t_max / (points - 1) as f64;
        Self::new((0..points).map(|k| k as f64 * step).collect())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Expectation values `a_ω(t) = ⟨ω(t)|A|ω(t)⟩` of one initial state.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    /// `⟨ω|ω⟩` of the initial state.
    pub norm0: f64,
    /// Seed the initial state was drawn from (0 when supplied directly).
    pub seed: u64,
}

/// `U e^{−iΛt} U† ψ`.
pub fn evolve_state(dec: &SpectralDecomposition, psi: &StateVector, t: f64) -> Result<StateVector> {
    ensure_dim(dec.dim(), psi.dim())?;
    if t == 0.0 {
        return Ok(psi.clone());
    }
    let u = dec.eigenvectors();
    let rotated = psi.transformed(u.adjoint())?;
    let phased: Vec<c64> = rotated
        .amplitudes()
        .iter()
        .zip(dec.eigenvalues())
        .map(|(&z, &e)| z * c64::cis(-e * t))
        .collect();
    StateVector::new(phased).transformed(u)
}

/// `Re⟨φ|A|φ⟩`, rejecting an imaginary part above `1e-10·‖φ‖²`.
pub fn expectation(a: &HermitianOperator, phi: &StateVector) -> Result<f64> {
    ensure_dim(a.dim(), phi.dim())?;
    let z = a.quadratic_form(phi.amplitudes());
    check_real(z, phi.norm_sqr())
}

fn check_real(z: c64, norm_sqr: f64) -> Result<f64> {
    let tolerance = IMAG_RESIDUE_TOL * norm_sqr.max(f64::MIN_POSITIVE);
    if z.im.abs() > tolerance {
        return Err(TyplabError::NonHermitianResidue {
            imag: z.im,
            tolerance,
        });
    }
    Ok(z.re)
}

/// Batched evaluation of `⟨ψ_m(t)|A|ψ_m(t)⟩` for the columns of a state
/// matrix already expressed in the energy eigenbasis.
struct Evaluator<'a> {
    dec: &'a SpectralDecomposition,
    diagonal: Option<Vec<f64>>,
    /// `Ã = U†AU` when `A` is not diagonal.
    observable_eig: Option<Mat<c64>>,
}

impl<'a> Evaluator<'a> {
    fn new(dec: &'a SpectralDecomposition, a: &HermitianOperator) -> Result<Self> {
        ensure_dim(dec.dim(), a.dim())?;
        let diagonal = a.diagonal_entries();
        let observable_eig = diagonal.is_none().then(|| dec.to_eigenbasis(a.matrix()));
        Ok(Self {
            dec,
            diagonal,
            observable_eig,
        })
    }

    /// Expectation values at time `t` for every column of `states_eig`.
    fn values_at(&self, states_eig: MatRef<'_, c64>, norms: &[f64], t: f64) -> Result<Vec<f64>> {
        let n = states_eig.nrows();
        let energies = self.dec.eigenvalues();
        let phases: Vec<c64> = energies.iter().map(|&e| c64::cis(-e * t)).collect();
        let phased = Mat::from_fn(n, states_eig.ncols(), |j, m| states_eig[(j, m)] * phases[j]);
        match (&self.diagonal, &self.observable_eig) {
            (Some(diag), _) => {
                let psi = mat_mul(self.dec.eigenvectors(), phased.as_ref());
                Ok((0..psi.ncols())
                    .map(|m| {
                        let col = psi.col(m);
                        (0..n).map(|j| diag[j] * col[j].norm_sqr()).sum()
                    })
                    .collect())
            }
            (None, Some(a_eig)) => {
                let applied = mat_mul(a_eig.as_ref(), phased.as_ref());
                (0..phased.ncols())
                    .map(|m| {
                        let z: c64 = (0..n).map(|j| phased[(j, m)].conj() * applied[(j, m)]).sum();
                        check_real(z, norms[m])
                    })
                    .collect()
            }
            (None, None) => unreachable!("evaluator always has an observable"),
        }
    }

    /// Rows are grid times, columns are states.
    fn series(&self, initial: &[StateVector], grid: &TimeGrid) -> Result<Vec<Vec<f64>>> {
        let n = self.dec.dim();
        for s in initial {
            ensure_dim(n, s.dim())?;
        }
        let states = Mat::from_fn(n, initial.len(), |j, m| initial[m].amplitudes()[j]);
        let states_eig = mat_mul(self.dec.eigenvectors().adjoint(), states.as_ref());
        let norms: Vec<f64> = initial.iter().map(StateVector::norm_sqr).collect();
        grid.times()
            .par_iter()
            .map(|&t| self.values_at(states_eig.as_ref(), &norms, t))
            .collect()
    }
}

/// `a_ω(t_k)` for every grid time.
pub fn run_trajectory(
    dec: &SpectralDecomposition,
    a: &HermitianOperator,
    omega0: &StateVector,
    grid: &TimeGrid,
) -> Result<TrajectoryRecord> {
    let rows = Evaluator::new(dec, a)?.series(std::slice::from_ref(omega0), grid)?;
    Ok(TrajectoryRecord {
        grid: grid.clone(),
        values: rows.into_iter().map(|r| r[0]).collect(),
        norm0: omega0.norm_sqr(),
        seed: 0,
    })
}

/// `M` trajectories whose initial states are drawn with seeds
/// `child_seed(base_seed, i)`, `i = 0..M`.
pub fn run_ensemble(
    dec: &SpectralDecomposition,
    a: &HermitianOperator,
    params: &OmegaParams<'_>,
    m: usize,
    base_seed: u64,
    grid: &TimeGrid,
) -> Result<Vec<TrajectoryRecord>> {
    let seeds: Vec<u64> = (0..m as u64).map(|i| child_seed(base_seed, i)).collect();
    run_ensemble_with_seeds(dec, a, params, &seeds, grid)
}

/// Like [`run_ensemble`] with explicit per-trajectory seeds.
pub fn run_ensemble_with_seeds(
    dec: &SpectralDecomposition,
    a: &HermitianOperator,
    params: &OmegaParams<'_>,
    seeds: &[u64],
    grid: &TimeGrid,
) -> Result<Vec<TrajectoryRecord>> {
    if seeds.is_empty() {
        return Err(TyplabError::InvalidParameter("ensemble needs M >= 1".into()));
    }
    ensure_dim(a.dim(), params.observable().dim())?;
    let initial: Vec<StateVector> = seeds.par_iter().map(|&s| sample_omega(params, s)).collect();
    let rows = Evaluator::new(dec, a)?.series(&initial, grid)?;
    let records: Vec<TrajectoryRecord> = initial
        .iter()
        .zip(seeds)
        .enumerate()
        .map(|(m, (state, &seed))| TrajectoryRecord {
            grid: grid.clone(),
            values: rows.iter().map(|r| r[m]).collect(),
            norm0: state.norm_sqr(),
            seed,
        })
        .collect();
    soft_checks(&records, a, params);
    Ok(records)
}

/// Logs initial norms and expectation values far outside the predicted
/// ensemble spread. Never fatal.
fn soft_checks(records: &[TrajectoryRecord], a: &HermitianOperator, params: &OmegaParams<'_>) {
    let n = a.dim();
    let moments = a.spectral_moments();
    let d = params.d();
    let norm_band = 10.0 * norm_variance_analytic(d, moments.c(3), moments.c(4), n).sqrt();
    let value_band = variance_bound(d.abs(), moments.c(4).max(0.0), moments.c(8).max(0.0), n)
        .map(|b| 3.0 * b.sqrt())
        .unwrap_or(f64::INFINITY);
    let expected = mean_expectation_analytic(d, moments.c(3));
    for r in records {
        if (r.norm0 - 1.0).abs() > norm_band {
            warn!(
                "trajectory seed {}: initial norm² {} outside 1 ± {norm_band}",
                r.seed, r.norm0
            );
        }
        if (r.values[0] - expected).abs() > value_band {
            warn!(
                "trajectory seed {}: initial value {} outside {expected} ± {value_band}",
                r.seed, r.values[0]
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::sample_uniform_state;
    use crate::model::{build_observable_pm1, Scenario};
    use crate::operator::heisenberg_observable;
    use crate::rng::SeededRng;

    fn random_hermitian(n: usize, seed: u64) -> HermitianOperator {
        let mut rng = SeededRng::new(seed);
        let mut m = Mat::<c64>::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = c64::new(rng.gaussian_pair().0, 0.0);
            for j in 0..k {
                let z = rng.complex_gaussian() * 0.3;
                m[(j, k)] = z;
                m[(k, j)] = z.conj();
            }
        }
        HermitianOperator::new(m).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(vec![0.0]).is_err());
        assert!(TimeGrid::new(vec![0.1, 0.2]).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.2, 0.2]).is_err());
        assert!(TimeGrid::uniform(0.0, 5).is_err());
        assert!(TimeGrid::uniform(1.0, 1).is_err());
        let g = TimeGrid::uniform(2.0, 5).unwrap();
        assert_eq!(g.times(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn evolve_at_zero_is_identity() {
        let dec = random_hermitian(8, 1).eigendecompose().unwrap();
        let psi = sample_uniform_state(8, 2);
        assert_eq!(evolve_state(&dec, &psi, 0.0).unwrap(), psi);
    }

    #[test]
    fn stationary_basis_state_gains_phase() {
        let levels = [0.0, 0.5, 1.25];
        let dec = HermitianOperator::from_real_diagonal(&levels)
            .eigendecompose()
            .unwrap();
        let t = 3.0;
        let out = evolve_state(&dec, &StateVector::basis(3, 2), t).unwrap();
        let expected = c64::cis(-1.25 * t);
        assert!((out.amplitudes()[2] - expected).norm() < 1e-14);
        assert!(out.amplitudes()[0].norm() < 1e-15);
    }

    #[test]
    fn group_property_and_unitarity() {
        let dec = random_hermitian(30, 3).eigendecompose().unwrap();
        let psi = sample_uniform_state(30, 4);
        let two_step = evolve_state(&dec, &evolve_state(&dec, &psi, 0.3).unwrap(), 0.4).unwrap();
        let one_step = evolve_state(&dec, &psi, 0.7).unwrap();
        let diff: f64 = two_step
            .amplitudes()
            .iter()
            .zip(one_step.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-10);
        for t in [0.1, 10.0, 1000.0] {
            let out = evolve_state(&dec, &psi, t).unwrap();
            assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn expectation_examples() {
        let a = HermitianOperator::from_real_diagonal(&[1.0, -1.0]);
        assert_eq!(expectation(&a, &StateVector::basis(2, 0)).unwrap(), 1.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = StateVector::new(vec![c64::new(s, 0.0), c64::new(s, 0.0)]);
        assert!(expectation(&a, &phi).unwrap().abs() < 1e-16);
        assert!(expectation(&a, &StateVector::basis(3, 0)).is_err());
    }

    #[test]
    fn expectation_rejects_imaginary_residue() {
        assert!(matches!(
            check_real(c64::new(0.3, 1e-6), 1.0),
            Err(TyplabError::NonHermitianResidue { .. })
        ));
        assert_eq!(check_real(c64::new(0.3, 1e-13), 1.0).unwrap(), 0.3);
    }

    #[test]
    fn uniform_state_expectation_in_band() {
        let n = 2000;
        let a = build_observable_pm1(n, 5).unwrap();
        let psi = sample_uniform_state(n, 6);
        let v = expectation(&a, &psi).unwrap();
        assert!(v.abs() <= 3.0 * (1.0 / (n as f64 + 1.0)).sqrt());
    }

    #[test]
    fn conserved_observable_gives_constant_series() {
        let n = 16;
        let a = build_observable_pm1(n, 7).unwrap();
        let levels: Vec<f64> = (0..n).map(|k| 0.1 * k as f64).collect();
        let dec = HermitianOperator::from_real_diagonal(&levels)
            .eigendecompose()
            .unwrap();
        let psi = sample_uniform_state(n, 8);
        let grid = TimeGrid::uniform(50.0, 20).unwrap();
        let rec = run_trajectory(&dec, &a, &psi, &grid).unwrap();
        for v in &rec.values {
            assert!((v - rec.values[0]).abs() < 1e-13);
        }
    }

    #[test]
    fn schrodinger_matches_heisenberg() {
        for (n, observable_is_diagonal) in [(40, true), (24, false)] {
            let h = random_hermitian(n, 9 + n as u64);
            let dec = h.eigendecompose().unwrap();
            let a = if observable_is_diagonal {
                build_observable_pm1(n, 10).unwrap()
            } else {
                random_hermitian(n, 11)
            };
            let omega = sample_uniform_state(n, 12);
            let grid = TimeGrid::uniform(5.0, 11).unwrap();
            let rec = run_trajectory(&dec, &a, &omega, &grid).unwrap();
            for (k, &t) in grid.times().iter().enumerate() {
                let at = heisenberg_observable(&a, &dec, t).unwrap();
                let heis = expectation(&at, &omega).unwrap();
                assert!((rec.values[k] - heis).abs() < 1e-9, "t={t}");
                let evolved = evolve_state(&dec, &omega, t).unwrap();
                let schr = expectation(&a, &evolved).unwrap();
                assert!((rec.values[k] - schr).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn energy_is_conserved() {
        let h = random_hermitian(32, 13);
        let dec = h.eigendecompose().unwrap();
        let psi = sample_uniform_state(32, 14);
        let e0 = expectation(&h, &psi).unwrap();
        for t in [0.5, 5.0, 50.0] {
            let e = expectation(&h, &evolve_state(&dec, &psi, t).unwrap()).unwrap();
            assert!((e - e0).abs() <= 1e-9 * e0.abs().max(1.0));
        }
    }

    #[test]
    fn ensemble_is_deterministic_and_matches_single_runs() {
        let spec = Scenario::WeakGaussian.scaled_spec(40, 1);
        let model = crate::model::Model::build(&spec).unwrap();
        let dec = model.hamiltonian.eigendecompose().unwrap();
        let params = OmegaParams::new(0.1, &model.observable).unwrap();
        let grid = TimeGrid::uniform(20.0, 9).unwrap();
        let a = run_ensemble(&dec, &model.observable, &params, 3, 77, &grid).unwrap();
        let b = run_ensemble(&dec, &model.observable, &params, 3, 77, &grid).unwrap();
        assert_eq!(a, b);
        let single = run_ensemble(&dec, &model.observable, &params, 1, 77, &grid).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].seed, a[0].seed);
        for (x, y) in single[0].values.iter().zip(&a[0].values) {
            assert!((x - y).abs() < 1e-13);
        }
        let omega = sample_omega(&params, child_seed(77, 0));
        let direct = run_trajectory(&dec, &model.observable, &omega, &grid).unwrap();
        for (x, y) in direct.values.iter().zip(&a[0].values) {
            assert!((x - y).abs() < 1e-13);
        }
        assert_eq!(a[0].seed, child_seed(77, 0));
    }
}
