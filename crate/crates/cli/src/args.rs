// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qwalk::phasespace::CatState;
use qwalk::targets::TargetSpec;
use qwalk::{CoinKet, CoinParams};

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Qudit state engineering with coined quantum walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search a coin sequence producing a target qudit and write a JSON report.
    Engineer(EngineerArgs),
    /// Write a Husimi Q field of the spin-coherent cat states as CSV.
    Qfunc(QfuncArgs),
    /// Run a built-in target suite.
    Batch(BatchArgs),
    /// Compile a coin sequence to waveplates and Q-plates.
    Compile(CompileArgs),
    /// Run a given coin sequence and report the projected walker state.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct EngineerArgs {
    /// Target spec, e.g. `cat:phi=0`, `fourier:k=3`, `amps:[1,0,0,0,0,0]`.
    #[arg(long, value_parser = parse_target)]
    pub target: TargetSpec,
    #[arg(long, default_value_t = 5)]
    pub steps: usize,
    /// Master seed; generated and recorded in the report when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of optimizer starts.
    #[arg(long)]
    pub starts: Option<usize>,
    /// Also compile to optics and check the physical simulation.
    #[arg(long)]
    pub compile: bool,
    /// Q-plate orientation (radians) used with `--compile`.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha0: f64,
    /// Simulated shots in the Gram-Schmidt fidelity basis (0 to skip).
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    /// Maximize the success probability among fidelity-optimal solutions.
    #[arg(long)]
    pub max_probability: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateArg {
    Psi1,
    Psi2,
    Inc,
}

impl From<StateArg> for CatState {
    fn from(s: StateArg) -> Self {
        match s {
            StateArg::Psi1 => CatState::Psi1,
            StateArg::Psi2 => CatState::Psi2,
            StateArg::Inc => CatState::Incoherent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    /// Q of the chosen state.
    Q,
    /// Q of the incoherent mixture.
    Qinc,
    /// Interference term Re[q+ q-*].
    Interf,
    /// Q of the chosen state over Q of the mixture.
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coords {
    /// `alpha,beta,value`
    Polar,
    /// `x,y,z,value` with radius equal to the value.
    Cartesian,
}

#[derive(Debug, Args)]
pub struct QfuncArgs {
    #[arg(long, value_enum, default_value = "psi1")]
    pub state: StateArg,
    #[arg(long, value_enum, default_value = "q")]
    pub field: FieldArg,
    /// `<n_alpha>x<n_beta>`
    #[arg(long, default_value = "64x128", value_parser = parse_grid)]
    pub grid: (usize, usize),
    /// Twice the spin.
    #[arg(long, default_value_t = 5)]
    pub two_s: u32,
    /// Gauss-Legendre nodes in cos(alpha) instead of a uniform alpha grid.
    #[arg(long)]
    pub quadrature: bool,
    #[arg(long, value_enum, default_value = "polar")]
    pub coords: Coords,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Table1,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[arg(long, value_enum, default_value = "table1")]
    pub suite: Suite,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub starts: Option<usize>,
    /// Output directory for per-target reports and `summary.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false, args = ["coins", "report"])]
pub struct CoinSource {
    /// `theta,xi,zeta;theta,xi,zeta;...` in radians.
    #[arg(long, value_parser = parse_coins, allow_hyphen_values = true)]
    pub coins: Option<CoinList>,
    /// Take the coins from an `engineer` report.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub source: CoinSource,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha0: f64,
    /// Also write the circuit as JSON next to the table.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProjectionArg {
    Plus,
    Minus,
    Down,
    Up,
}

impl From<ProjectionArg> for CoinKet {
    fn from(p: ProjectionArg) -> Self {
        match p {
            ProjectionArg::Plus => CoinKet::plus(),
            ProjectionArg::Minus => CoinKet::minus(),
            ProjectionArg::Down => CoinKet::down(),
            ProjectionArg::Up => CoinKet::up(),
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: CoinSource,
    #[arg(long, value_enum, default_value = "plus")]
    pub projection: ProjectionArg,
    /// Report the fidelity against this target.
    #[arg(long, value_parser = parse_target)]
    pub target: Option<TargetSpec>,
    /// Run the compiled optical circuit instead of the ideal walk.
    #[arg(long)]
    pub physical: bool,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha0: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_target(s: &str) -> Result<TargetSpec, String> {
    s.parse().map_err(|e| format!("{e}"))
}

pub fn parse_grid(s: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .with_context(|| format!("grid {s:?} is not of the form AxB"))?;
    let a: usize = a.trim().parse().with_context(|| format!("bad alpha count in {s:?}"))?;
    let b: usize = b.trim().parse().with_context(|| format!("bad beta count in {s:?}"))?;
    if a < 2 || b < 1 {
        bail!("grid {s:?} needs at least 2 alpha and 1 beta samples");
    }
    Ok((a, b))
}

/// A parsed `--coins` value.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinList(pub Vec<CoinParams>);

pub fn parse_coins(s: &str) -> anyhow::Result<CoinList> {
    let mut coins = Vec::new();
    for (i, chunk) in s.split(';').map(str::trim).filter(|c| !c.is_empty()).enumerate() {
        let vals: Vec<f64> = chunk
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .with_context(|| format!("coin {i}: {chunk:?} is not a list of numbers"))?;
        let [t, x, z] = vals[..] else {
            bail!("coin {i}: expected theta,xi,zeta, got {} values", vals.len());
        };
        coins.push(CoinParams::new(t, x, z)?);
    }
    if coins.is_empty() {
        bail!("empty coin sequence");
    }
    Ok(CoinList(coins))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec() {
        assert_eq!(parse_grid("128x720").unwrap(), (128, 720));
        assert_eq!(parse_grid(" 4 X 8").unwrap(), (4, 8));
        for bad in ["128", "x5", "1x5", "4x0", "ax3", "3x-1"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn coin_list() {
        let c = parse_coins("0.5,0,1; 1,-2,3;").unwrap().0;
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].as_array(), [0.5, 0.0, 1.0]);
        assert!(parse_coins("1,2").is_err());
        assert!(parse_coins("").is_err());
        assert!(parse_coins("1,2,nan").is_err());
    }
}
