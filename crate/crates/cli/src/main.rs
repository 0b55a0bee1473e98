// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

use clap::Parser;
use qwalk_cli::args::Cli;
use qwalk_cli::{commands, exit_code_for};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("qwalk: error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
