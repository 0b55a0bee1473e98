// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! Qudit state engineering with coined discrete-time quantum walks.
//!
//! A walker starts at the origin with its coin in `|+⟩`, takes `n` steps
//! with step-dependent SU(2) coins, and the coin is finally projected onto a
//! fixed ket. The [`optimizer`] searches coin sequences so that the
//! surviving walker state matches a target qudit from [`targets`]. The
//! [`photonic`] module compiles a coin sequence to waveplates and Q-plates,
//! and [`phasespace`] analyses spin-coherent cat states on the sphere.

pub mod error;
pub mod measurement;
pub mod optimizer;
pub mod phasespace;
pub mod photonic;
pub mod rng;
pub mod special;
pub mod targets;
pub mod walk;

pub use error::{QwError, Result};
pub use walk::{
    apply_coin, apply_shift, coin_matrix, evolve, fidelity, project_coin, CoinKet, CoinMatrix, CoinParams, Lattice,
    WalkerCoinState, WalkerState,
};
