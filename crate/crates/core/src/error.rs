// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QwError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coin projection has vanishing probability {0:e}")]
    ZeroProbability(f64),

    #[error("state has amplitude {0:e} on sites outside the lattice parity class")]
    OffParity(f64),

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("basis is not orthonormal (max deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("measurement record holds no counts")]
    EmptyCounts,

    #[error("target is not reachable: {0}")]
    InfeasibleTarget(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("argument outside convergent domain: |z| = {0}")]
    Domain(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QwError>;
