// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Convergence of the sampled average of `|ω⟩⟨ω|` to
//! `(1 + 2dA + d²A²)/(n(1 + d²))` in Hilbert–Schmidt distance.
//!
//! cargo run --release --example density_matrix

use typlab::harness::verify::density_distance;
use typlab::{build_observable_pm1, OmegaParams};

fn main() -> typlab::Result<()> {
    let a = build_observable_pm1(100, 12)?;
    let params = OmegaParams::new(0.1, &a)?;
    for samples in [100, 1_000, 10_000, 100_000] {
        let dist = density_distance(&params, samples, 55)?;
        println!("{samples:>7} samples  distance {dist:.4e}  ×√N {:.3}", dist * (samples as f64).sqrt());
    }
    Ok(())
}
