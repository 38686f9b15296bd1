// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Unitaries `e^{iB}` with `[B, A] = 0` leave `⟨ω|A|ω⟩` unchanged state by
//! state, while changing the state itself.
//!
//! cargo run --release --example commuting_unitaries

use typlab::{build_observable_pm1, commuting_unitary, expectation, sample_omega, OmegaParams};

fn main() -> typlab::Result<()> {
    let a = build_observable_pm1(200, 8)?;
    let params = OmegaParams::new(0.1, &a)?;
    for s in 0..5 {
        let omega = sample_omega(&params, s);
        let u = commuting_unitary(&a, 100 + s)?;
        let rotated = omega.transformed(u.as_ref())?;
        let overlap = omega.inner(&rotated)?.norm() / omega.norm_sqr();
        println!(
            "state {s}: ⟨A⟩ {:+.12} -> {:+.12}  |⟨ω|Uω⟩|/⟨ω|ω⟩ {overlap:.3}",
            expectation(&a, &omega)?,
            expectation(&a, &rotated)?
        );
    }
    Ok(())
}
