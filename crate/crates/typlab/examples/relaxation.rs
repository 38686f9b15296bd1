// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Ensemble-averaged relaxation of `⟨ω|A(t)|ω⟩` for the weak Gaussian,
//! strong Gaussian and constant perturbations at n = 600, with the spread
//! of the individual trajectories.
//!
//! cargo run --release --example relaxation -- [trajectories]

use typlab::{run_ensemble, sample_stats, Model, OmegaParams, Scenario, TimeGrid};

fn main() -> typlab::Result<()> {
    let m: usize = std::env::args().nth(1).map_or(100, |s| s.parse().expect("trajectories"));
    let grid = TimeGrid::uniform(200.0, 201)?;
    for scenario in Scenario::ALL {
        let model = Model::build(&scenario.scaled_spec(600, 1))?;
        let dec = model.hamiltonian.eigendecompose()?;
        let params = OmegaParams::new(0.1, &model.observable)?;
        let records = run_ensemble(&dec, &model.observable, &params, m, 2026, &grid)?;
        let stats = sample_stats(&records)?;
        println!("{}", scenario.name());
        for k in (0..grid.len()).step_by(20) {
            println!(
                "  t = {:6.1}  mean {:+.4}  std {:.4}",
                stats.time_grid[k],
                stats.mean[k],
                stats.variance[k].sqrt()
            );
        }
    }
    Ok(())
}
