// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! Search for coin sequences that steer the post-selected walker onto a
//! target qudit.
//!
//! Each multistart draws uniform angles on its own ChaCha8 stream
//! `(master seed, start index)`, runs Nelder–Mead on `1 - F`, and polishes
//! with finite-difference BFGS. Starts run in parallel; the reduction only
//! looks at the index-ordered result list, so the outcome does not depend on
//! scheduling.

mod polish;
mod simplex;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};
use crate::rng::stream_rng;
use crate::walk::{coin_matrix_raw, CoinKet, CoinParams, Lattice, WalkerCoinState, WalkerState, ZERO_PROBABILITY};

pub use polish::central_gradient;
pub use simplex::{nelder_mead, SimplexOptions, SimplexOutcome};

/// Fidelity at or above which a search counts as converged.
pub const SUCCESS_FIDELITY: f64 = 1.0 - 1e-6;
/// Fidelities closer than this are treated as equal when ranking starts.
pub const FIDELITY_TIE: f64 = 1e-9;
/// Width of the probability bins used to group tied starts.
pub const PROBABILITY_BIN: f64 = 1e-5;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Target, initial state and final coin projection of one engineering task.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineeringProblem {
    n_steps: usize,
    initial_coin: CoinKet,
    projection: CoinKet,
    target: WalkerState,
}

impl EngineeringProblem {
    /// Starts from `|0⟩ ⊗ |+⟩` and projects onto `|+⟩`.
    pub fn new(n_steps: usize, target: WalkerState) -> Result<Self> {
        if n_steps == 0 {
            return Err(QwError::InvalidParameter("at least one step is required".into()));
        }
        if target.lattice().n_steps != n_steps {
            return Err(QwError::DimensionMismatch {
                expected: n_steps + 1,
                got: target.dimension(),
            });
        }
        Ok(Self {
            n_steps,
            initial_coin: CoinKet::plus(),
            projection: CoinKet::plus(),
            target,
        })
    }

    /// Builds the problem from amplitudes over every site `-n ..= n`
    /// (length `2n + 1`). Weight on sites of the wrong parity cannot be
    /// produced by any coin sequence and is rejected.
    pub fn from_dense_target(n_steps: usize, amplitudes: &[Complex64]) -> Result<Self> {
        let expected = 2 * n_steps + 1;
        if amplitudes.len() != expected {
            return Err(QwError::DimensionMismatch {
                expected,
                got: amplitudes.len(),
            });
        }
        let stray: Vec<i32> = amplitudes
            .iter()
            .enumerate()
            .filter(|(i, a)| i % 2 == 1 && a.norm() > 1e-12)
            .map(|(i, _)| i as i32 - n_steps as i32)
            .collect();
        if !stray.is_empty() {
            return Err(QwError::InfeasibleTarget(format!(
                "sites {stray:?} have the wrong parity for a {n_steps}-step walk"
            )));
        }
        let compact: Vec<Complex64> = amplitudes.iter().step_by(2).copied().collect();
        let target = WalkerState::from_amplitudes(Lattice::new(n_steps), compact)?;
        Self::new(n_steps, target)
    }

    /// Replaces the initial state `|0⟩ ⊗ |coin⟩`.
    pub fn with_initial_coin(mut self, coin: CoinKet) -> Self {
        self.initial_coin = coin;
        self
    }

    pub fn with_projection(mut self, ket: CoinKet) -> Self {
        self.projection = ket;
        self
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn target(&self) -> &WalkerState {
        &self.target
    }

    pub fn projection(&self) -> CoinKet {
        self.projection
    }

    pub fn initial_coin(&self) -> CoinKet {
        self.initial_coin
    }

    pub fn initial_state(&self) -> WalkerCoinState {
        WalkerCoinState::initial(self.initial_coin)
    }

    /// `(F, p)` for raw angles laid out as `[θ₁, ξ₁, ζ₁, θ₂, …]`.
    pub fn evaluate_raw(&self, x: &[f64]) -> (f64, f64) {
        Kernel::new(self).evaluate(x)
    }
}

/// Reusable scratch space for the inner loop.
struct Kernel<'a> {
    problem: &'a EngineeringProblem,
    buf: Vec<[Complex64; 2]>,
}

impl<'a> Kernel<'a> {
    fn new(problem: &'a EngineeringProblem) -> Self {
        Self {
            problem,
            buf: vec![[ZERO; 2]; 2 * problem.n_steps + 1],
        }
    }

    fn evaluate(&mut self, x: &[f64]) -> (f64, f64) {
        let n = self.problem.n_steps;
        debug_assert_eq!(x.len(), 3 * n);
        let buf = &mut self.buf;
        buf.iter_mut().for_each(|p| *p = [ZERO; 2]);
        buf[n] = self.problem.initial_coin.amplitudes();
        for t in 0..n {
            let m = coin_matrix_raw(x[3 * t], x[3 * t + 1], x[3 * t + 2]);
            let (lo, hi) = (n - t, n + t);
            for p in &mut buf[lo..=hi] {
                *p = m.apply(*p);
            }
            for i in lo..=hi {
                buf[i - 1][0] = buf[i][0];
            }
            buf[hi][0] = ZERO;
            for i in (lo..=hi).rev() {
                buf[i + 1][1] = buf[i][1];
            }
            buf[lo][1] = ZERO;
        }
        let [kd, ku] = self.problem.projection.amplitudes();
        let (kd, ku) = (kd.conj(), ku.conj());
        let mut overlap = ZERO;
        let mut p = 0.0;
        for (j, t) in self.problem.target.amplitudes().iter().enumerate() {
            let a = buf[2 * j];
            let phi = kd * a[0] + ku * a[1];
            p += phi.norm_sqr();
            overlap += t.conj() * phi;
        }
        if p < ZERO_PROBABILITY {
            return (0.0, p);
        }
        ((overlap.norm_sqr() / p).min(1.0), p)
    }
}

fn flatten(coins: &[CoinParams]) -> Vec<f64> {
    coins.iter().flat_map(|c| c.as_array()).collect()
}

fn to_coins(x: &[f64]) -> Result<Vec<CoinParams>> {
    x.chunks(3).map(|c| CoinParams::new(c[0], c[1], c[2])).collect()
}

/// Fidelity of the post-selected walker with the target and the
/// post-selection probability. A vanishing probability gives fidelity 0.
pub fn objective(problem: &EngineeringProblem, coins: &[CoinParams]) -> Result<(f64, f64)> {
    if coins.len() != problem.n_steps {
        return Err(QwError::DimensionMismatch {
            expected: problem.n_steps,
            got: coins.len(),
        });
    }
    Ok(problem.evaluate_raw(&flatten(coins)))
}

/// Central-difference gradient of the fidelity with respect to
/// `[θ₁, ξ₁, ζ₁, θ₂, …]`.
pub fn finite_difference_gradient(problem: &EngineeringProblem, coins: &[CoinParams], h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(QwError::InvalidParameter(format!("step h = {h} must be positive")));
    }
    if coins.len() != problem.n_steps {
        return Err(QwError::DimensionMismatch {
            expected: problem.n_steps,
            got: coins.len(),
        });
    }
    let mut kernel = Kernel::new(problem);
    let mut f = |x: &[f64]| kernel.evaluate(x).0;
    Ok(central_gradient(&mut f, &flatten(coins), h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub multistarts: usize,
    /// Nelder–Mead iteration budget per start, shared across its restarts.
    pub max_iterations: usize,
    /// Convergence tolerance on `1 - F`.
    pub tolerance: f64,
    pub seed: u64,
    /// After the fidelity search, maximize the post-selection probability
    /// while holding the fidelity at its optimum.
    pub maximize_probability: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            multistarts: 128,
            max_iterations: 2000,
            tolerance: 1e-10,
            seed: 0,
            maximize_probability: false,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineeringResult {
    pub coins: Vec<CoinParams>,
    pub fidelity: f64,
    pub probability: f64,
    pub best_start_index: usize,
    pub iterations_used: usize,
    pub seed: u64,
    /// `false` when the best fidelity stayed below `1 - 1e-6`.
    pub reached_threshold: bool,
}

#[derive(Debug, Clone)]
struct StartOutcome {
    x: Vec<f64>,
    fidelity: f64,
    probability: f64,
    iterations: usize,
}

const RESTART_ROUNDS: usize = 4;
const POLISH_ITERATIONS: usize = 400;
const FD_STEP: f64 = 1e-6;

fn local_search(problem: &EngineeringProblem, config: &OptimizerConfig, start: usize) -> StartOutcome {
    let dim = 3 * problem.n_steps;
    let mut rng = stream_rng(config.seed, start as u64);
    let mut x: Vec<f64> = (0..dim)
        .map(|i| {
            if i % 3 == 0 {
                rng.random_range(0.0..PI)
            } else {
                rng.random_range(-PI..PI)
            }
        })
        .collect();

    let mut kernel = Kernel::new(problem);
    let mut loss = |v: &[f64]| 1.0 - kernel.evaluate(v).0;
    let mut budget = config.max_iterations;
    let mut iterations = 0;
    let mut best = loss(&x);
    for round in 0..RESTART_ROUNDS {
        let nm = nelder_mead(
            &mut loss,
            &x,
            &SimplexOptions {
                max_iterations: budget,
                f_tol: config.tolerance * 1e-2,
                x_tol: 1e-6,
                initial_step: if round == 0 { 0.6 } else { 0.25 },
            },
        );
        budget = budget.saturating_sub(nm.iterations);
        iterations += nm.iterations;
        let pol = polish::bfgs(&mut loss, &nm.x, FD_STEP, POLISH_ITERATIONS, 0.0);
        iterations += pol.iterations;
        if pol.f < best {
            best = pol.f;
            x = pol.x;
        }
        if best <= config.tolerance || budget == 0 {
            break;
        }
    }
    let (fidelity, probability) = problem.evaluate_raw(&x);
    StartOutcome {
        x,
        fidelity,
        probability,
        iterations,
    }
}

/// Picks the reported start: highest fidelity; among starts tied within
/// `FIDELITY_TIE`, the probability bin with the largest
/// `members × probability` (expected yield per start); then the lowest
/// start index.
fn select(outcomes: &[StartOutcome]) -> usize {
    let best_f = outcomes.iter().map(|o| o.fidelity).fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = (0..outcomes.len())
        .filter(|&i| outcomes[i].fidelity >= best_f - FIDELITY_TIE)
        .collect();
    // bins keyed by their first (lowest-index) member
    let mut bins: Vec<(usize, usize)> = Vec::new();
    for &i in &tied {
        let p = outcomes[i].probability;
        match bins
            .iter_mut()
            .find(|(rep, _)| (outcomes[*rep].probability - p).abs() <= PROBABILITY_BIN)
        {
            Some(bin) => bin.1 += 1,
            None => bins.push((i, 1)),
        }
    }
    let score = |&(rep, count): &(usize, usize)| count as f64 * outcomes[rep].probability;
    bins.iter()
        .max_by(|a, b| score(a).total_cmp(&score(b)).then(b.0.cmp(&a.0)))
        .map(|(rep, _)| *rep)
        .expect("at least one start")
}

fn refine_probability(problem: &EngineeringProblem, x0: &[f64], tolerance: f64) -> Option<Vec<f64>> {
    const WEIGHT: f64 = 1e4;
    let mut kernel = Kernel::new(problem);
    let mut penalized = |v: &[f64]| {
        let (f, p) = kernel.evaluate(v);
        WEIGHT * (1.0 - f) - p
    };
    let nm = nelder_mead(
        &mut penalized,
        x0,
        &SimplexOptions {
            max_iterations: 4000,
            f_tol: 1e-13,
            x_tol: 1e-8,
            initial_step: 0.2,
        },
    );
    let pol = polish::bfgs(&mut penalized, &nm.x, FD_STEP, POLISH_ITERATIONS, f64::NEG_INFINITY);
    let mut kernel = Kernel::new(problem);
    let mut loss = |v: &[f64]| 1.0 - kernel.evaluate(v).0;
    let back = polish::bfgs(&mut loss, &pol.x, FD_STEP, POLISH_ITERATIONS, 0.0);
    (back.f <= tolerance.max(1e-12)).then_some(back.x)
}

/// Multistart search for coins maximizing the post-selected fidelity.
pub fn optimize(problem: &EngineeringProblem, config: &OptimizerConfig) -> Result<EngineeringResult> {
    if config.multistarts == 0 {
        return Err(QwError::InvalidParameter("multistarts must be at least 1".into()));
    }
    let outcomes: Vec<StartOutcome> = (0..config.multistarts)
        .into_par_iter()
        .map(|start| local_search(problem, config, start))
        .collect();
    let chosen = select(&outcomes);
    let mut x = outcomes[chosen].x.clone();
    if config.maximize_probability {
        let (f0, p0) = problem.evaluate_raw(&x);
        if let Some(refined) = refine_probability(problem, &x, config.tolerance) {
            let (f1, p1) = problem.evaluate_raw(&refined);
            if f1 >= f0 - FIDELITY_TIE && p1 > p0 {
                x = refined;
            }
        }
    }
    let coins = to_coins(&x)?;
    let (fidelity, probability) = objective(problem, &coins)?;
    Ok(EngineeringResult {
        coins,
        fidelity,
        probability,
        best_start_index: chosen,
        iterations_used: outcomes[chosen].iterations,
        seed: config.seed,
        reached_threshold: fidelity >= SUCCESS_FIDELITY,
    })
}
