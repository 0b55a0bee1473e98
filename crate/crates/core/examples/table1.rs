// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! Runs the optimizer over the built-in 32-target catalog and prints
//! fidelity and post-selection probability next to the reference value.

use std::time::Instant;

use qwalk::optimizer::{optimize, EngineeringProblem, OptimizerConfig};
use qwalk::targets::table1_catalog;

fn main() -> qwalk::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2026);
    println!("{:<14} {:>12} {:>8} {:>8} {:>7}", "target", "1-F", "p", "table", "secs");
    for entry in table1_catalog() {
        let t0 = Instant::now();
        let problem = EngineeringProblem::new(5, entry.spec.materialize(5)?)?;
        let r = optimize(&problem, &OptimizerConfig::with_seed(seed))?;
        println!(
            "{:<14} {:>12.3e} {:>8.4} {:>8.2} {:>7.2}",
            entry.label,
            1.0 - r.fidelity,
            r.probability,
            entry.reference_probability,
            t0.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
