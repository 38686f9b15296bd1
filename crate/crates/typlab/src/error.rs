// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum TyplabError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max asymmetry {max_asymmetry:e} at ({row}, {col})")]
    NotHermitian {
        max_asymmetry: f64,
        row: usize,
        col: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("moment order {0} outside 1..=8")]
    OutOfRange(usize),

    #[error("eigendecomposition did not converge (dim {dim}, residual {residual:e})")]
    ConvergenceFailure { dim: usize, residual: f64 },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("observable with +1/-1 entries needs an even dimension, got {0}")]
    OddDimension(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator is not diagonal (max off-diagonal magnitude {0:e})")]
    NotDiagonal(f64),

    #[error("negative spectral moment {name} = {value}")]
    NegativeMoment { name: &'static str, value: f64 },

    #[error("expectation value has imaginary residue {imag:e} (tolerance {tolerance:e})")]
    NonHermitianResidue { imag: f64, tolerance: f64 },

    #[error("trajectory {index} uses a different time grid")]
    GridMismatch { index: usize },

    #[error("need at least 2 trajectories, got {0}")]
    TooFewTrajectories(usize),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("config error in {path}: {message}")]
    ConfigParse { path: PathBuf, message: String },

    #[error("CSV format error in {path} at row {row}: {message}")]
    CsvFormat {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = TyplabError> = std::result::Result<T, E>;
