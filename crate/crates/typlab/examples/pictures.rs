// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Schrödinger-picture `⟨ω(t)|A|ω(t)⟩` against Heisenberg-picture
//! `⟨ω|A(t)|ω⟩`, and conservation of the energy and of the spectral moments
//! of `A(t)`.
//!
//! cargo run --release --example pictures

use typlab::{
    evolve_state, expectation, heisenberg_observable, sample_omega, Model, OmegaParams, Scenario,
};

fn main() -> typlab::Result<()> {
    let model = Model::build(&Scenario::StrongGaussian.scaled_spec(100, 3))?;
    let h = &model.hamiltonian;
    let a = &model.observable;
    let dec = h.eigendecompose()?;
    println!("reconstruction residual {:.2e}", dec.reconstruction_residual(h));
    let omega = sample_omega(&OmegaParams::new(0.1, a)?, 4);
    for t in [0.0, 1.0, 10.0, 100.0] {
        let evolved = evolve_state(&dec, &omega, t)?;
        let at = heisenberg_observable(a, &dec, t)?;
        println!(
            "t = {t:5.1}  schrödinger {:+.10}  heisenberg {:+.10}  energy {:.10}  c4(A(t)) {:.10}",
            expectation(a, &evolved)?,
            expectation(&at, &omega)?,
            expectation(h, &evolved)?,
            at.spectral_moment(4)?
        );
    }
    Ok(())
}
