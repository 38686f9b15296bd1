// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Mean and variance of `⟨ψ|D|ψ⟩` over uniformly random pure states,
//! against `Tr{D}/n` and `(c_2 − c_1²)/(n + 1)`.
//!
//! cargo run --release --example uniform_ensemble -- [n] [samples]

use typlab::harness::verify::{random_hermitian, uniform_expectations};
use typlab::stats::SampleSummary;
use typlab::{ha_uniform, hv_uniform};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(100, |s| s.parse().expect("n"));
    let samples: usize = args.next().map_or(50_000, |s| s.parse().expect("samples"));

    let d = random_hermitian(n, 1);
    let s = SampleSummary::from_samples(&uniform_expectations(&d, samples, 2));
    println!("n = {n}, {samples} states");
    println!("mean      {:+.6e}  closed form {:+.6e}  (±{:.1e})", s.mean, ha_uniform(&d), s.std_error());
    println!("variance  {:.6e}  closed form {:.6e}", s.variance, hv_uniform(&d));
}
