// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Peak exact variance of `⟨ω|A(t)|ω⟩` against the dimension `n`, and the
//! fitted log-log slope.
//!
//! cargo run --release --example finite_size_scaling

use typlab::harness::verify::{loglog_slope, peak_exact_variance};
use typlab::{Scenario, TimeGrid};

fn main() -> typlab::Result<()> {
    let dims = [100usize, 200, 400, 800];
    let grid = TimeGrid::uniform(200.0, 16)?;
    let mut peaks = Vec::new();
    for &n in &dims {
        let peak = peak_exact_variance(&Scenario::WeakGaussian.scaled_spec(n, 1), 0.1, grid.times())?;
        println!("n = {n:4}  max variance {peak:.4e}  ×(n+1) {:.4}", peak * (n as f64 + 1.0));
        peaks.push(peak);
    }
    let xs: Vec<f64> = dims.iter().map(|&n| n as f64).collect();
    println!("slope {:.4}", loglog_slope(&xs, &peaks));
    Ok(())
}
