// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Exact ensemble variance of `⟨ω|A(t)|ω⟩` over time for the three
//! perturbation scenarios, next to the time-independent bound.
//!
//! cargo run --release --example variance_bound -- [n]

use typlab::{variance_bound, Model, Scenario, TimeGrid, VarianceProfile};

fn main() -> typlab::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(400, |s| s.parse().expect("n"));
    let d = 0.1;
    let grid = TimeGrid::uniform(200.0, 11)?;
    for scenario in Scenario::ALL {
        let model = Model::build(&scenario.scaled_spec(n, 1))?;
        let dec = model.hamiltonian.eigendecompose()?;
        let c = model.observable.spectral_moments();
        let bound = variance_bound(d, c.c(4), c.c(8), n)?;
        let exact = VarianceProfile::new(&model.observable, &dec, d)?.hv_on(grid.times());
        println!("{} (bound {bound:.4e})", scenario.name());
        for (t, v) in grid.times().iter().zip(&exact) {
            println!("  t = {t:6.1}  variance {v:.4e}  ratio {:.3}", v / bound);
        }
    }
    Ok(())
}
