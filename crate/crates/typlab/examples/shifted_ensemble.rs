// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Statistics of the shifted ensemble `(1 + dA)|ψ⟩/sqrt(1 + d²)` for a
//! `±1` observable: norms and initial expectation values against their
//! closed forms.
//!
//! cargo run --release --example shifted_ensemble -- [n] [d] [samples]

use typlab::harness::verify::omega_samples;
use typlab::stats::SampleSummary;
use typlab::{build_observable_pm1, mean_expectation_analytic, norm_variance_analytic, OmegaParams};

fn main() -> typlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(200, |s| s.parse().expect("n"));
    let d: f64 = args.next().map_or(0.1, |s| s.parse().expect("d"));
    let samples: usize = args.next().map_or(10_000, |s| s.parse().expect("samples"));

    let a = build_observable_pm1(n, 5)?;
    let c = a.spectral_moments();
    let params = OmegaParams::new(d, &a)?;
    let draws = omega_samples(&params, samples, 9)?;
    let norms = SampleSummary::from_samples(&draws.iter().map(|s| s.norm_sqr).collect::<Vec<_>>());
    let values = SampleSummary::from_samples(&draws.iter().map(|s| s.value).collect::<Vec<_>>());

    println!("n = {n}, d = {d}, {samples} states");
    println!("⟨ω|ω⟩ mean      {:.6}  expected 1", norms.mean);
    println!(
        "⟨ω|ω⟩ variance  {:.4e}  expected {:.4e}",
        norms.variance,
        norm_variance_analytic(d, c.c(3), c.c(4), n)
    );
    println!(
        "⟨ω|A|ω⟩ mean    {:.6}  expected {:.6}",
        values.mean,
        mean_expectation_analytic(d, c.c(3))
    );
    Ok(())
}
