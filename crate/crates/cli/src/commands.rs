// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fs;

use anyhow::Context;
use qwalk::measurement::{basis_probabilities, estimate_fidelity_mc, simulate_counts};
use qwalk::optimizer::{optimize, EngineeringProblem, OptimizerConfig};
use qwalk::phasespace::{
    coherence_ratio, export_polar, husimi_q, interference_lobes, interference_term, q_incoherent, SphericalGrid,
};
use qwalk::photonic::{compile as compile_circuit, simulate_physical, PhysicalCircuit, QPlateParams};
use qwalk::rng::derive_seed;
use qwalk::targets::{gram_schmidt_basis, table1_catalog, TargetSpec};
use qwalk::{evolve, fidelity, project_coin, CoinKet, CoinParams, WalkerCoinState};
use serde::{Deserialize, Serialize};

use crate::args::{
    BatchArgs, Cli, CoinSource, Command, CompileArgs, Coords, EngineerArgs, FieldArg, QfuncArgs, SimulateArgs, Suite,
};
use crate::output::{csv_writer, fmt_f64, resolve_out};
use crate::report::{
    read_json, timestamp, write_json, MeasurementReport, OpticsReport, RunReport, SimulationReport, FIDELITY_THRESHOLD,
    SCHEMA_VERSION, TOOL_VERSION,
};
use crate::{EXIT_BELOW_THRESHOLD, EXIT_OK};

/// Poisson resamples behind the fidelity sigma.
pub const RESAMPLES: usize = 1000;
/// Samples on the meridian loop used for the lobe count log line.
const LOBE_SAMPLES: usize = 1440;

pub fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Engineer(a) => engineer(a),
        Command::Qfunc(a) => qfunc(a),
        Command::Batch(a) => batch(a),
        Command::Compile(a) => compile(a),
        Command::Simulate(a) => simulate(a),
    }
}

fn fresh_seed() -> u64 {
    use std::hash::BuildHasher;
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or_default();
    std::collections::hash_map::RandomState::new().hash_one((now, std::process::id()))
}

/// `amps:` targets with `2n + 1` entries are read over every lattice site,
/// so wrong-parity weight surfaces as an infeasible target.
pub fn build_problem(target: &TargetSpec, steps: usize) -> anyhow::Result<EngineeringProblem> {
    if let TargetSpec::Explicit { amplitudes } = target {
        if amplitudes.len() == 2 * steps + 1 {
            return Ok(EngineeringProblem::from_dense_target(steps, amplitudes)?);
        }
    }
    let state = target.materialize(steps)?;
    Ok(EngineeringProblem::new(steps, state)?)
}

/// Optimizes `problem` and assembles the full report.
pub fn engineer_report(
    target: &TargetSpec,
    problem: &EngineeringProblem,
    config: OptimizerConfig,
    alpha0: Option<f64>,
    shots: u64,
) -> anyhow::Result<RunReport> {
    let result = optimize(problem, &config)?;
    let walked = evolve(&problem.initial_state(), &result.coins)?;
    let (output, _) = project_coin(&walked, &problem.projection())?;
    let basis = gram_schmidt_basis(problem.target());
    let probs = basis_probabilities(&output, &basis)?;

    let optics = match alpha0 {
        Some(alpha0) => {
            let circuit = compile_circuit(&result.coins, QPlateParams::tuned(alpha0))?;
            let circuit = PhysicalCircuit {
                projection: problem.projection(),
                ..circuit
            };
            let (physical, p) = simulate_physical(&circuit, &problem.initial_state())?;
            Some(OpticsReport {
                elements: circuit.elements(),
                projection: circuit.projection,
                fidelity_to_ideal: fidelity(&physical, &output)?,
                probability: p,
            })
        }
        None => None,
    };

    let measurement = if shots > 0 {
        let seed = derive_seed(config.seed, 1);
        let counts = simulate_counts(&output, &basis, shots, seed)?;
        let estimate = estimate_fidelity_mc(&counts.with_leftover(), 0, RESAMPLES, derive_seed(config.seed, 2))?;
        Some(MeasurementReport {
            shots,
            seed,
            resamples: RESAMPLES,
            counts,
            estimate,
        })
    } else {
        None
    };

    let passed = result.fidelity >= FIDELITY_THRESHOLD;
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        timestamp: timestamp(),
        master_seed: config.seed,
        target: target.to_string(),
        lattice: problem.target().lattice(),
        target_amplitudes: problem.target().amplitudes().to_vec(),
        optimizer: config,
        result,
        output_amplitudes: output.amplitudes().to_vec(),
        basis_probabilities: probs,
        optics,
        measurement,
        threshold: FIDELITY_THRESHOLD,
        passed,
    })
}

fn engineer(args: EngineerArgs) -> anyhow::Result<u8> {
    let problem = build_problem(&args.target, args.steps)?;
    let mut config = OptimizerConfig::with_seed(args.seed.unwrap_or_else(fresh_seed));
    if let Some(k) = args.starts {
        config.multistarts = k;
    }
    config.maximize_probability = args.max_probability;
    let report = engineer_report(
        &args.target,
        &problem,
        config,
        args.compile.then_some(args.alpha0),
        args.shots,
    )?;
    let path = resolve_out(args.out, "report.json");
    write_json(&path, &report)?;
    eprintln!(
        "{}: F = {:.9}, p = {:.6}, seed {} -> {}",
        report.target,
        report.result.fidelity,
        report.result.probability,
        report.master_seed,
        path.display()
    );
    Ok(if report.passed { EXIT_OK } else { EXIT_BELOW_THRESHOLD })
}

fn qfunc(args: QfuncArgs) -> anyhow::Result<u8> {
    let (na, nb) = args.grid;
    let grid = if args.quadrature {
        SphericalGrid::quadrature(na, nb)?
    } else {
        SphericalGrid::uniform(na, nb)?
    };
    let state = args.state.into();
    let field = match args.field {
        FieldArg::Q => husimi_q(args.two_s, state, &grid),
        FieldArg::Qinc => q_incoherent(args.two_s, &grid),
        FieldArg::Interf => interference_term(args.two_s, &grid),
        FieldArg::Ratio => coherence_ratio(args.two_s, state, &grid),
    };
    let path = resolve_out(args.out, "qfunc.csv");
    let mut w = csv_writer(&path)?;
    match args.coords {
        Coords::Polar => {
            w.write_record(["alpha", "beta", "value"])?;
            for (i, v) in field.values.iter().enumerate() {
                let (a, b) = grid.point(i);
                w.write_record([fmt_f64(a), fmt_f64(b), fmt_f64(*v)])?;
            }
        }
        Coords::Cartesian => {
            w.write_record(["x", "y", "z", "value"])?;
            for row in export_polar(&field) {
                w.write_record(row.map(fmt_f64))?;
            }
        }
    }
    w.flush()?;
    eprintln!(
        "{} points ({} masked) -> {}",
        field.values.len(),
        field.masked,
        path.display()
    );
    if args.field == FieldArg::Interf {
        eprintln!(
            "interference lobes on the y-z meridian loop: {}",
            interference_lobes(args.two_s, LOBE_SAMPLES)?
        );
    }
    Ok(EXIT_OK)
}

/// Index of one batch run, written next to the per-target reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchManifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub timestamp: String,
    pub suite: String,
    pub master_seed: u64,
    pub multistarts: usize,
    pub reports: Vec<String>,
}

fn slug(label: &str) -> String {
    let mut s: String = label
        .chars()
        .map(|c| match c {
            '-' => 'm',
            '+' => 'p',
            c if c.is_ascii_alphanumeric() => c,
            _ => '_',
        })
        .collect();
    while s.contains("__") {
        s = s.replace("__", "_");
    }
    s.trim_matches('_').to_string()
}

fn batch(args: BatchArgs) -> anyhow::Result<u8> {
    let Suite::Table1 = args.suite;
    let master = args.seed.unwrap_or_else(fresh_seed);
    let dir = resolve_out(args.out, "table1");
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut summary = csv_writer(&dir.join("summary.csv"))?;
    summary.write_record([
        "index",
        "label",
        "target",
        "seed",
        "fidelity",
        "probability",
        "reference_probability",
        "status",
    ])?;

    let n_steps = 5;
    let mut manifest = BatchManifest {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        timestamp: timestamp(),
        suite: "table1".into(),
        master_seed: master,
        multistarts: args.starts.unwrap_or(OptimizerConfig::default().multistarts),
        reports: Vec::new(),
    };
    let mut all_passed = true;
    for (i, entry) in table1_catalog().into_iter().enumerate() {
        let seed = derive_seed(master, i as u64);
        let config = OptimizerConfig {
            multistarts: manifest.multistarts,
            ..OptimizerConfig::with_seed(seed)
        };
        let outcome = build_problem(&entry.spec, n_steps)
            .and_then(|problem| engineer_report(&entry.spec, &problem, config, None, 0));
        let (fid, prob, status) = match outcome {
            Ok(report) => {
                let name = format!("{:02}-{}.json", i + 1, slug(entry.label));
                write_json(&dir.join(&name), &report)?;
                manifest.reports.push(name);
                all_passed &= report.passed;
                let status = if report.passed { "ok" } else { "below-threshold" };
                (
                    fmt_f64(report.result.fidelity),
                    fmt_f64(report.result.probability),
                    status.to_string(),
                )
            }
            Err(e) => {
                all_passed = false;
                (String::new(), String::new(), format!("error: {e:#}"))
            }
        };
        eprintln!(
            "[{:2}/32] {:<28} F = {fid:<24} p = {prob:<24} {status}",
            i + 1,
            entry.label
        );
        summary.write_record([
            (i + 1).to_string(),
            entry.label.to_string(),
            entry.spec.to_string(),
            seed.to_string(),
            fid,
            prob,
            fmt_f64(entry.reference_probability),
            status,
        ])?;
    }
    summary.flush()?;
    write_json(&dir.join("batch.json"), &manifest)?;
    eprintln!("master seed {master}; summary -> {}", dir.join("summary.csv").display());
    Ok(if all_passed { EXIT_OK } else { EXIT_BELOW_THRESHOLD })
}

fn load_coins(source: CoinSource) -> anyhow::Result<Vec<CoinParams>> {
    match (source.coins, source.report) {
        (Some(list), _) => Ok(list.0),
        (None, Some(path)) => Ok(read_json::<RunReport>(&path)?.result.coins),
        (None, None) => anyhow::bail!("no coin sequence given"),
    }
}

fn compile(args: CompileArgs) -> anyhow::Result<u8> {
    let coins = load_coins(args.source)?;
    let circuit = compile_circuit(&coins, QPlateParams::tuned(args.alpha0))?;
    let path = resolve_out(args.out, "circuit.tsv");
    crate::output::ensure_parent(&path)?;
    fs::write(&path, circuit.to_table()).with_context(|| format!("writing {}", path.display()))?;
    if args.json {
        write_json(&path.with_extension("json"), &circuit)?;
    }
    eprintln!(
        "{} steps, {} elements -> {}",
        coins.len(),
        circuit.elements().len(),
        path.display()
    );
    Ok(EXIT_OK)
}

fn simulate(args: SimulateArgs) -> anyhow::Result<u8> {
    let coins = load_coins(args.source)?;
    let projection: CoinKet = args.projection.into();
    let initial = WalkerCoinState::origin_plus();
    let (state, p) = if args.physical {
        let circuit = PhysicalCircuit {
            projection,
            ..compile_circuit(&coins, QPlateParams::tuned(args.alpha0))?
        };
        simulate_physical(&circuit, &initial)?
    } else {
        project_coin(&evolve(&initial, &coins)?, &projection)?
    };
    let fid = match &args.target {
        Some(t) => Some(fidelity(&t.materialize(coins.len())?, &state)?),
        None => None,
    };
    let report = SimulationReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        timestamp: timestamp(),
        coins,
        projection,
        physical: args.physical,
        lattice: state.lattice(),
        amplitudes: state.amplitudes().to_vec(),
        probability: p,
        target: args.target.as_ref().map(ToString::to_string),
        fidelity: fid,
    };
    let path = resolve_out(args.out, "simulation.json");
    write_json(&path, &report)?;
    eprintln!("p = {p:.9} -> {}", path.display());
    Ok(EXIT_OK)
}
