// Copyright 2026 typlab contributors
// SPDX-License-Identifier: Apache-2.0

//! Drive the harness from code: load a TOML config, run it into a
//! directory and print the verification report.
//!
//! cargo run --release --example config_run -- [config] [out_dir]

use std::path::PathBuf;

use typlab::harness::{self, verify, ExperimentConfig};

fn main() -> typlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let config_path = args
        .next()
        .map_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/small.toml"), PathBuf::from);
    let out_dir = args.next().map_or_else(|| std::env::temp_dir().join("typlab-config-run"), PathBuf::from);

    let config = ExperimentConfig::load(&config_path)?;
    let summary = harness::run_config(&config, &out_dir)?;
    println!("bound {:.4e}", summary.bound);
    for file in &summary.files {
        println!("wrote {}", file.display());
    }
    print!("{}", verify::run_checks(&config)?);
    Ok(())
}
