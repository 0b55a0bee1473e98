// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! Small special-function kit: binomials, Γ at half-integers, the Gauss
//! hypergeometric series and Gauss–Legendre nodes.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QwError, Result};

/// `C(n, k)` as a float; exact for the small arguments used here.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Γ(m/2)` for a positive integer `m`.
pub fn gamma_half(m: u32) -> f64 {
    assert!(m > 0, "Γ has a pole at 0");
    let (mut value, mut x) = if m.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    let target = m as f64 / 2.0;
    while x < target {
        value *= x;
        x += 1.0;
    }
    value
}

/// Relative term size at which the hypergeometric series is truncated.
pub const HYP_TOL: f64 = 1e-14;
/// Hard cap on hypergeometric series terms.
pub const HYP_MAX_TERMS: usize = 10_000;

/// `₂F₁(a, b; c; z)` by its power series, for `|z| < 1` or a terminating
/// series (`b` a non-positive integer).
///
/// Summation stops once a term falls below `HYP_TOL` relative to the running
/// sum, or after `HYP_MAX_TERMS` terms.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64> {
    let terminating = b <= 0.0 && b.fract() == 0.0;
    if !terminating && z.norm() >= 1.0 {
        return Err(QwError::Domain(z.norm()));
    }
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(QwError::InvalidParameter(format!("c = {c} is a pole")));
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for n in 0..HYP_MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        if ratio == 0.0 {
            break;
        }
        term *= z * ratio;
        sum += term;
        if term.norm() <= HYP_TOL * sum.norm() {
            break;
        }
    }
    Ok(sum)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}
