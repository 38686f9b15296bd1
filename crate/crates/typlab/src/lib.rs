// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Numerical laboratory for dynamical typicality of quantum expectation
//! values.
//!
//! The crate builds dense model Hamiltonians `H = H0 + V`, samples pure
//! states from the uniform ensemble and from the shifted ensemble
//! `(1 + dA)|ψ⟩/sqrt(1 + d²)`, propagates them exactly through one
//! eigendecomposition of `H`, and compares ensemble statistics of
//! `⟨ω|A(t)|ω⟩` with closed-form Hilbert-space averages and the
//! time-independent variance bound.
//!
//! Modules, bottom up:
//!
//! - [`operator`]: Hermitian operators, spectral moments, eigendecomposition.
//! - [`model`]: equidistant `H0`, the `±1` observable, perturbations.
//! - [`ensemble`]: uniform and shifted state ensembles.
//! - [`stats`]: analytic averages, variances, the bound, sample statistics.
//! - [`propagate`]: exact time evolution and trajectory ensembles.
//! - [`harness`]: config files, CSV/metadata/SVG output, verification.

pub mod ensemble;
pub mod error;
pub mod harness;
pub mod model;
pub mod operator;
pub mod propagate;
pub mod rng;
pub mod stats;

pub use ensemble::{
    average_density, commuting_unitary, make_omega, sample_omega, sample_uniform_state,
    OmegaParams, StateVector,
};
pub use error::{Result, TyplabError};
pub use model::{
    assemble_hamiltonian, build_h0, build_observable_pm1, build_v_constant, build_v_gaussian,
    Model, ModelSpec, PerturbationKind, Scenario,
};
pub use operator::{
    eigendecompose, heisenberg_observable, hilbert_schmidt_inner, validate_hermitian,
    HermitianOperator, SpectralDecomposition, SpectralMoments,
};
pub use propagate::{
    evolve_state, expectation, run_ensemble, run_trajectory, TimeGrid, TrajectoryRecord,
};
pub use stats::{
    ha_uniform, hv_at_time_exact, hv_uniform, mean_expectation_analytic, moment_map,
    norm_variance_analytic, sample_stats, variance_bound, EnsembleStats, VarianceProfile,
};
