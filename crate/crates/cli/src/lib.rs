// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! Library half of the `qwalk` binary: argument types, commands and the
//! JSON/CSV file formats.

pub mod args;
pub mod commands;
pub mod output;
pub mod report;

use qwalk::QwError;

pub const EXIT_OK: u8 = 0;
/// Fidelity below [`report::FIDELITY_THRESHOLD`].
pub const EXIT_BELOW_THRESHOLD: u8 = 1;
/// Bad arguments, unparsable input or I/O failure.
pub const EXIT_INPUT: u8 = 2;
/// The target can never be produced by the walk.
pub const EXIT_INFEASIBLE: u8 = 3;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QWALK_OUT_DIR";

/// Maps a failed command to its exit code.
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<QwError>()) {
        Some(QwError::InfeasibleTarget(_) | QwError::OffParity(_)) => EXIT_INFEASIBLE,
        _ => EXIT_INPUT,
    }
}
