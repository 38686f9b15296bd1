// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex Hermitian operators.
//!
//! Storage is a column-major [`faer::Mat`]. Every constructor that accepts
//! arbitrary input goes through [`validate_hermitian`]; operators produced
//! internally from products that are Hermitian in exact arithmetic are
//! symmetrized instead, so rounding residue never accumulates.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self, ComputeEigenvectors};
use faer::linalg::matmul::matmul;
use faer::diag::Diag;
use faer::traits::Conjugate;
use faer::{c64, Accum, Mat, MatRef, Par};

use crate::error::{Result, TyplabError};

/// Absolute per-entry tolerance of the Hermiticity gate.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Highest spectral moment the analytic formulas need.
pub const MAX_MOMENT: usize = 8;

/// Dense Hermitian matrix of dimension `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: Mat<c64>,
}

/// Check `matrix` for squareness and conjugate symmetry and wrap it.
pub fn validate_hermitian(matrix: Mat<c64>) -> Result<HermitianOperator> {
    let (rows, cols) = (matrix.nrows(), matrix.ncols());
    if rows != cols {
        return Err(TyplabError::NotSquare { rows, cols });
    }
    let mut worst = (0.0_f64, 0, 0);
    for k in 0..cols {
        for j in 0..=k {
            let asym = if j == k {
                matrix[(j, j)].im.abs()
            } else {
                (matrix[(j, k)] - matrix[(k, j)].conj()).norm()
            };
            if asym.is_nan() || asym > worst.0 {
                worst = (asym, j, k);
            }
        }
    }
    if worst.0.is_nan() || worst.0 > HERMITIAN_TOL {
        return Err(TyplabError::NotHermitian {
            max_asymmetry: worst.0,
            row: worst.1,
            col: worst.2,
        });
    }
    Ok(HermitianOperator { matrix })
}

impl HermitianOperator {
    pub fn new(matrix: Mat<c64>) -> Result<Self> {
        validate_hermitian(matrix)
    }

    /// Wrap the Hermitian part `(M + M†)/2` of a matrix that is Hermitian up
    /// to rounding.
    pub(crate) fn from_hermitian_part(matrix: Mat<c64>) -> Self {
        let n = matrix.nrows();
        debug_assert_eq!(n, matrix.ncols());
        let sym = Mat::from_fn(n, n, |j, k| {
            if j == k {
                c64::new(matrix[(j, j)].re, 0.0)
            } else {
                (matrix[(j, k)] + matrix[(k, j)].conj()) * 0.5
            }
        });
        Self { matrix: sym }
    }

    pub fn from_real_diagonal(diagonal: &[f64]) -> Self {
        let n = diagonal.len();
        let mut matrix = Mat::zeros(n, n);
        for (j, &x) in diagonal.iter().enumerate() {
            matrix[(j, j)] = c64::new(x, 0.0);
        }
        Self { matrix }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real_diagonal(&vec![1.0; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            matrix: Mat::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<c64> {
        self.matrix
    }

    /// Largest off-diagonal magnitude.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for k in 0..n {
            for j in 0..n {
                if j != k {
                    worst = worst.max(self.matrix[(j, k)].norm());
                }
            }
        }
        worst
    }

    pub fn is_diagonal(&self) -> bool {
        self.max_off_diagonal() == 0.0
    }

    /// Real diagonal, if every off-diagonal entry is exactly zero.
    pub fn diagonal_entries(&self) -> Option<Vec<f64>> {
        self.is_diagonal()
            .then(|| (0..self.dim()).map(|j| self.matrix[(j, j)].re).collect())
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|j| self.matrix[(j, j)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius_norm(self.matrix())
    }

    pub fn try_add(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        ensure_dim(self.dim(), other.dim())?;
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn scaled(&self, factor: f64) -> HermitianOperator {
        Self {
            matrix: Mat::from_fn(self.dim(), self.dim(), |j, k| self.matrix[(j, k)] * factor),
        }
    }

    /// `c_i = Tr{A^i}/n` by repeated multiplication (exact summation of the
    /// diagonal when the operator is diagonal).
    pub fn spectral_moment(&self, order: usize) -> Result<f64> {
        check_order(order)?;
        Ok(self.spectral_moments().c(order))
    }

    /// All moments `c_1..c_8` from three matrix products.
    pub fn spectral_moments(&self) -> SpectralMoments {
        let n = self.dim() as f64;
        if let Some(diag) = self.diagonal_entries() {
            return SpectralMoments::from_eigenvalues(&diag);
        }
        let a = self.matrix();
        let a2 = mat_mul(a, a);
        let a3 = mat_mul(a2.as_ref(), a);
        let a4 = mat_mul(a2.as_ref(), a2.as_ref());
        let traces = [
            self.trace(),
            trace(a2.as_ref()),
            trace(a3.as_ref()),
            trace(a4.as_ref()),
            trace_of_product(a4.as_ref(), a),
            trace_of_product(a4.as_ref(), a2.as_ref()),
            trace_of_product(a4.as_ref(), a3.as_ref()),
            trace_of_product(a4.as_ref(), a4.as_ref()),
        ];
        SpectralMoments {
            values: traces.map(|t| t / n),
        }
    }

    pub fn eigendecompose(&self) -> Result<SpectralDecomposition> {
        eigendecompose(self)
    }

    /// `⟨v|A|v⟩` without the realness check (see `propagate::expectation`).
    pub(crate) fn quadratic_form(&self, v: &[c64]) -> c64 {
        let n = self.dim();
        if let Some(diag) = self.diagonal_entries() {
            return v
                .iter()
                .zip(&diag)
                .map(|(x, &a)| c64::new(a * x.norm_sqr(), 0.0))
                .sum();
        }
        let mut acc = c64::new(0.0, 0.0);
        for k in 0..n {
            let col = self.matrix.col(k);
            let mut av = c64::new(0.0, 0.0);
            for j in 0..n {
                av += v[j].conj() * col[j];
            }
            acc += av * v[k];
        }
        acc
    }

    /// `A v`.
    pub(crate) fn apply(&self, v: &[c64]) -> Vec<c64> {
        let n = self.dim();
        let mut out = vec![c64::new(0.0, 0.0); n];
        for (k, &vk) in v.iter().enumerate() {
            if vk == c64::new(0.0, 0.0) {
                continue;
            }
            let col = self.matrix.col(k);
            for j in 0..n {
                out[j] += col[j] * vk;
            }
        }
        out
    }
}

/// Spectral moments `c_1..c_8` of an operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralMoments {
    values: [f64; MAX_MOMENT],
}

impl SpectralMoments {
    pub fn from_eigenvalues(eigenvalues: &[f64]) -> Self {
        let n = eigenvalues.len() as f64;
        let mut sums = [0.0; MAX_MOMENT];
        for &x in eigenvalues {
            let mut p = 1.0;
            for s in sums.iter_mut() {
                p *= x;
                *s += p;
            }
        }
        Self {
            values: sums.map(|s| s / n),
        }
    }

    /// Moment of order `i` (1-based). Panics outside `1..=8`.
    pub fn c(&self, i: usize) -> f64 {
        assert!((1..=MAX_MOMENT).contains(&i), "moment order {i} outside 1..=8");
        self.values[i - 1]
    }

    pub fn as_array(&self) -> [f64; MAX_MOMENT] {
        self.values
    }

    /// `c_2 - c_1^2`.
    pub fn spectral_variance(&self) -> f64 {
        self.c(2) - self.c(1) * self.c(1)
    }

    /// `c_2 >= c_1^2`, `c_4, c_8 >= 0` and `c_8 >= c_4^2`, each up to a
    /// relative slack `tol`.
    pub fn satisfies_invariants(&self, tol: f64) -> bool {
        let (c1, c2, c4, c8) = (self.c(1), self.c(2), self.c(4), self.c(8));
        c2 - c1 * c1 >= -tol * c2.abs().max(1.0)
            && c4 >= -tol
            && c8 >= -tol
            && c8 - c4 * c4 >= -tol * c8.abs().max(1.0)
    }
}

/// Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian
/// operator.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Mat<c64>,
}

pub fn eigendecompose(op: &HermitianOperator) -> Result<SpectralDecomposition> {
    let n = op.dim();
    let mut s = Diag::<c64>::zeros(n);
    let mut u = Mat::<c64>::zeros(n, n);
    let par = Par::Seq;
    let scratch =
        evd::self_adjoint_evd_scratch::<c64>(n, ComputeEigenvectors::Yes, par, Default::default());
    let mut buf = MemBuffer::new(scratch);
    evd::self_adjoint_evd(
        op.matrix(),
        s.as_mut(),
        Some(u.as_mut()),
        par,
        MemStack::new(&mut buf),
        Default::default(),
    )
    .map_err(|_| TyplabError::ConvergenceFailure {
        dim: n,
        residual: f64::NAN,
    })?;

    let values: Vec<f64> = s.column_vector().iter().map(|z| z.re).collect();
    if values.iter().any(|x| !x.is_finite()) {
        return Err(TyplabError::ConvergenceFailure {
            dim: n,
            residual: f64::INFINITY,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let eigenvalues = order.iter().map(|&i| values[i]).collect();
    let eigenvectors = Mat::from_fn(n, n, |j, k| u[(j, order[k])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are eigenvectors.
    pub fn eigenvectors(&self) -> MatRef<'_, c64> {
        self.eigenvectors.as_ref()
    }

    /// `U Λ U†`.
    pub fn reconstruct(&self) -> Mat<c64> {
        let n = self.dim();
        let u = self.eigenvectors();
        let scaled = Mat::from_fn(n, n, |j, k| u[(j, k)] * self.eigenvalues[k]);
        mat_mul(scaled.as_ref(), u.adjoint())
    }

    /// `‖UΛU† − H‖_F / ‖H‖_F`.
    pub fn reconstruction_residual(&self, op: &HermitianOperator) -> f64 {
        let diff = self.reconstruct() - op.matrix();
        let scale = op.frobenius_norm();
        let res = frobenius_norm(diff.as_ref());
        if scale == 0.0 {
            res
        } else {
            res / scale
        }
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let u = self.eigenvectors();
        let mut g = mat_mul(u.adjoint(), u);
        for j in 0..self.dim() {
            g[(j, j)] -= c64::new(1.0, 0.0);
        }
        frobenius_norm(g.as_ref())
    }

    /// `c_i` from the eigenvalues.
    pub fn spectral_moment(&self, order: usize) -> Result<f64> {
        check_order(order)?;
        Ok(SpectralMoments::from_eigenvalues(&self.eigenvalues).c(order))
    }

    /// `U† X U`: an operator expressed in the energy eigenbasis.
    pub fn to_eigenbasis(&self, x: MatRef<'_, c64>) -> Mat<c64> {
        let u = self.eigenvectors();
        let xu = mat_mul(x, u);
        mat_mul(u.adjoint(), xu.as_ref())
    }

    /// `U X U†`.
    pub fn from_eigenbasis(&self, x: MatRef<'_, c64>) -> Mat<c64> {
        let u = self.eigenvectors();
        let xu = mat_mul(x, u.adjoint());
        mat_mul(u, xu.as_ref())
    }
}

/// `Tr{X† Y}`.
pub fn hilbert_schmidt_inner(x: MatRef<'_, c64>, y: MatRef<'_, c64>) -> Result<c64> {
    if x.nrows() != y.nrows() || x.ncols() != y.ncols() {
        return Err(TyplabError::DimensionMismatch {
            expected: x.nrows() * x.ncols(),
            found: y.nrows() * y.ncols(),
        });
    }
    let mut acc = c64::new(0.0, 0.0);
    for k in 0..x.ncols() {
        for j in 0..x.nrows() {
            acc += x[(j, k)].conj() * y[(j, k)];
        }
    }
    Ok(acc)
}

/// Heisenberg-picture observable `A(t) = e^{iHt} A e^{-iHt}` with `H` given by
/// its decomposition. Returns `A` itself at `t = 0`.
pub fn heisenberg_observable(
    a: &HermitianOperator,
    dec: &SpectralDecomposition,
    t: f64,
) -> Result<HermitianOperator> {
    ensure_dim(dec.dim(), a.dim())?;
    if t == 0.0 {
        return Ok(a.clone());
    }
    let mut in_eigenbasis = dec.to_eigenbasis(a.matrix());
    apply_heisenberg_phases(&mut in_eigenbasis, dec.eigenvalues(), t);
    Ok(HermitianOperator::from_hermitian_part(
        dec.from_eigenbasis(in_eigenbasis.as_ref()),
    ))
}

/// Multiply entry `(j, k)` by `e^{i(E_j − E_k)t}`.
pub(crate) fn apply_heisenberg_phases(x: &mut Mat<c64>, energies: &[f64], t: f64) {
    let phases: Vec<c64> = energies.iter().map(|&e| c64::cis(e * t)).collect();
    for k in 0..x.ncols() {
        let right = phases[k].conj();
        for j in 0..x.nrows() {
            x[(j, k)] *= phases[j] * right;
        }
    }
}

pub(crate) fn mat_mul<L, R>(a: MatRef<'_, L>, b: MatRef<'_, R>) -> Mat<c64>
where
    L: Conjugate<Canonical = c64>,
    R: Conjugate<Canonical = c64>,
{
    let mut out = Mat::zeros(a.nrows(), b.ncols());
    matmul(
        out.as_mut(),
        Accum::Replace,
        a,
        b,
        c64::new(1.0, 0.0),
        Par::Seq,
    );
    out
}

pub(crate) fn trace(x: MatRef<'_, c64>) -> f64 {
    (0..x.nrows()).map(|j| x[(j, j)].re).sum()
}

/// `Tr{X Y}` in `O(n^2)`.
pub(crate) fn trace_of_product(x: MatRef<'_, c64>, y: MatRef<'_, c64>) -> f64 {
    let mut acc = c64::new(0.0, 0.0);
    for j in 0..x.nrows() {
        for k in 0..x.ncols() {
            acc += x[(j, k)] * y[(k, j)];
        }
    }
    acc.re
}

pub(crate) fn frobenius_norm(x: MatRef<'_, c64>) -> f64 {
    let mut acc = 0.0;
    for k in 0..x.ncols() {
        for j in 0..x.nrows() {
            acc += x[(j, k)].norm_sqr();
        }
    }
    acc.sqrt()
}

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(TyplabError::DimensionMismatch { expected, found })
    }
}

fn check_order(order: usize) -> Result<()> {
    if (1..=MAX_MOMENT).contains(&order) {
        Ok(())
    } else {
        Err(TyplabError::OutOfRange(order))
    }
}
