// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;

use crate::OUT_DIR_ENV;

/// `explicit`, else `$QWALK_OUT_DIR/<default_name>`, else `./<default_name>`.
pub fn resolve_out(explicit: Option<PathBuf>, default_name: &str) -> PathBuf {
    explicit.unwrap_or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."))
            .join(default_name)
    })
}

pub fn ensure_parent(path: &Path) -> anyhow::Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
        }
        _ => Ok(()),
    }
}

/// Scientific notation with 17 significant digits; `NaN` for masked values.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn csv_writer(path: &Path) -> anyhow::Result<csv::Writer<fs::File>> {
    ensure_parent(path)?;
    csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))
}
