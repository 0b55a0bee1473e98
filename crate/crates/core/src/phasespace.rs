// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! Spherical phase-space picture of the spin-coherent cat states
//! `ψ₁,₂ = (|S₁⟩ ± |S₂⟩)/√2` with `S₁ = |s, π/2, 0⟩` and `S₂ = |s, -π/2, 0⟩`.
//!
//! With `q±(α, β) = ⟨s, α, β | s, ±π/2, 0⟩` the fields are
//!
//! ```text
//! Q_j   = |q₊ + sign_j q₋|² / 2        sign₁ = +1, sign₂ = -1
//! Q_inc = (|q₊|² + |q₋|²) / 2
//! I     = Re[q₊ q₋*]                    Q_j = Q_inc + sign_j I
//! R_j   = Q_j / Q_inc
//! ```
//!
//! The overlaps come from the finite `2s + 1` term sum. [`closed_form_q`] is
//! an independent hypergeometric route kept for cross-checking.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};
use crate::special::{gamma_half, gauss_legendre, hyp2f1};
use crate::targets::scs_amplitudes;

/// `Q_inc` below this is masked in ratio fields.
pub const RATIO_MASK_THRESHOLD: f64 = 1e-12;
/// Value stored at masked points.
pub const MASKED: f64 = f64::NAN;
/// Fewest loop samples accepted by [`interference_lobes`].
pub const MIN_LOBE_SAMPLES: usize = 720;

/// `⟨s, α, β | s, θ, φ⟩` by direct summation.
pub fn scs_overlap(two_s: u32, alpha: f64, beta: f64, theta: f64, phi: f64) -> Complex64 {
    let bra = scs_amplitudes(two_s, alpha, beta);
    let ket = scs_amplitudes(two_s, theta, phi);
    bra.iter().zip(&ket).map(|(a, b)| a.conj() * b).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `q±(α, β)` through the hypergeometric closed form
///
/// ```text
/// q± = (±1)^s Γ(2s+1)/Γ(s+1)² (S_α C_α S_θ C_θ)^s
///      [₂F₁(1, -s; s+1; x) + ₂F₁(1, -s; s+1; 1/x) - 1],   x = ∓e^{-iβ} T_α T_θ
/// ```
///
/// with `S = sin(·/2)`, `C = cos(·/2)`, `T = S/C`. The first series converges
/// only for `|T_α T_θ| < 1`; outside that a [`QwError::Domain`] is returned.
/// For half-integer `s` the second function is continued to `|1/x| > 1` with
/// the `z → 1/z` connection formula, whose `(-1/x)^s` factor is taken on the
/// branch `arg(-1/x) = β` (upper sign) or `β - π` (lower sign) together with
/// `(-1)^s = e^{iπs}`; the leading power is combined with the prefactor so
/// that `α → 0` stays finite. For integer `s` both series terminate.
pub fn closed_form_q(two_s: u32, alpha: f64, beta: f64, theta: f64, sign: Sign) -> Result<Complex64> {
    if !(0.0..=PI).contains(&alpha) || !(0.0..PI).contains(&theta) || !beta.is_finite() {
        return Err(QwError::InvalidParameter(format!(
            "closed form needs alpha in [0, pi], theta in [0, pi); got alpha={alpha}, theta={theta}"
        )));
    }
    let s = two_s as f64 / 2.0;
    let (sa, ca) = (alpha / 2.0).sin_cos();
    let (st, ct) = (theta / 2.0).sin_cos();
    let t = (sa / ca) * (st / ct);
    if t.is_nan() || t.abs() >= 1.0 {
        return Err(QwError::Domain(t.abs()));
    }
    let sg = sign.value();
    let one = Complex64::new(1.0, 0.0);
    let x = Complex64::from_polar(-sg * t, -beta);
    let branch = match sign {
        Sign::Plus => one,
        Sign::Minus => Complex64::from_polar(1.0, PI * s),
    };
    let gamma_ratio = gamma_half(2 * two_s + 2) / gamma_half(two_s + 2).powi(2);
    let f_x = hyp2f1(1.0, -s, s + 1.0, x)?;

    if two_s.is_multiple_of(2) {
        // terminating series in 1/x; P / T^k stays finite as T → 0
        let si = two_s / 2;
        let mut f_y_scaled = Complex64::new(0.0, 0.0);
        let mut coeff = 1.0;
        for k in 0..=si {
            let kf = k as f64;
            if k > 0 {
                coeff *= (-s + kf - 1.0) / (s + kf);
            }
            let pk = (ca * ct).powi((si + k) as i32) * (sa * st).powi((si - k) as i32);
            f_y_scaled += Complex64::from_polar(coeff * pk * (-sg).powi(k as i32), beta * kf);
        }
        let p = (sa * ca * st * ct).powi(si as i32);
        return Ok(branch * gamma_ratio * (p * (f_x - one) + f_y_scaled));
    }

    let p = (sa * ca * st * ct).powf(s);
    // -s/(s+1) (-y)^{-1} ₂F₁(1, 1-s; 2+s; 1/y) with 1/y = x and (-y)^{-1} = -x
    let head = (-s / (s + 1.0)) * (-x) * hyp2f1(1.0, 1.0 - s, 2.0 + s, x)?;
    let tail = Complex64::from_polar((ca * ct).powf(2.0 * s), s * beta) * (one - x).powi(two_s as i32);
    Ok(branch * gamma_ratio * p * (f_x + head - one) + tail)
}

/// Samples of the sphere: `alpha` strictly increasing in `[0, π]`, `beta`
/// strictly increasing in `[0, 2π)`, stored row-major (α outer).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalGrid {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// Gauss–Legendre weights in `cos α`, when built by [`SphericalGrid::quadrature`].
    cos_weights: Option<Vec<f64>>,
}

impl SphericalGrid {
    /// `n_alpha` points spanning `[0, π]` inclusive, `n_beta` points on `[0, 2π)`.
    pub fn uniform(n_alpha: usize, n_beta: usize) -> Result<Self> {
        if n_alpha < 2 || n_beta < 1 {
            return Err(QwError::InvalidParameter(format!("grid {n_alpha}x{n_beta} too small")));
        }
        let alpha = (0..n_alpha).map(|i| PI * i as f64 / (n_alpha - 1) as f64).collect();
        Ok(Self {
            alpha,
            beta: uniform_beta(n_beta),
            cos_weights: None,
        })
    }

    /// Gauss–Legendre nodes in `cos α` and uniform `β`, suitable for
    /// [`sphere_integral`].
    pub fn quadrature(n_alpha: usize, n_beta: usize) -> Result<Self> {
        if n_alpha < 1 || n_beta < 1 {
            return Err(QwError::InvalidParameter(format!("grid {n_alpha}x{n_beta} too small")));
        }
        let (x, w) = gauss_legendre(n_alpha);
        // nodes ascend in cos α, so reverse for ascending α
        let alpha = x.iter().rev().map(|c| c.acos()).collect();
        let weights = w.into_iter().rev().collect();
        Ok(Self {
            alpha,
            beta: uniform_beta(n_beta),
            cos_weights: Some(weights),
        })
    }

    pub fn from_samples(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if alpha.is_empty() || beta.is_empty() || !increasing(&alpha) || !increasing(&beta) {
            return Err(QwError::InvalidParameter(
                "grid samples must be non-empty and strictly increasing".into(),
            ));
        }
        if alpha[0] < 0.0 || alpha[alpha.len() - 1] > PI || beta[0] < 0.0 || beta[beta.len() - 1] >= 2.0 * PI {
            return Err(QwError::InvalidParameter(
                "alpha must lie in [0, pi] and beta in [0, 2pi)".into(),
            ));
        }
        Ok(Self {
            alpha,
            beta,
            cos_weights: None,
        })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.alpha.len(), self.beta.len())
    }

    pub fn len(&self) -> usize {
        self.alpha.len() * self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(α, β)` of flat index `i`.
    pub fn point(&self, i: usize) -> (f64, f64) {
        let nb = self.beta.len();
        (self.alpha[i / nb], self.beta[i % nb])
    }

    fn map<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        (0..self.len())
            .into_par_iter()
            .map(|i| {
                let (a, b) = self.point(i);
                f(a, b)
            })
            .collect()
    }
}

fn uniform_beta(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Which state a field describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatState {
    /// `(|S₁⟩ + |S₂⟩)/√2`
    Psi1,
    /// `(|S₁⟩ - |S₂⟩)/√2`
    Psi2,
    /// The equal mixture of `S₁` and `S₂`.
    Incoherent,
}

impl CatState {
    pub fn sign(self) -> f64 {
        match self {
            CatState::Psi1 => 1.0,
            CatState::Psi2 => -1.0,
            CatState::Incoherent => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    Husimi,
    Incoherent,
    Interference,
    Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QField {
    pub grid: SphericalGrid,
    /// Row-major over the grid; masked ratio points hold [`MASKED`].
    pub values: Vec<f64>,
    pub kind: FieldKind,
    pub state: Option<CatState>,
    pub two_s: u32,
    /// Points masked because `Q_inc` fell below [`RATIO_MASK_THRESHOLD`].
    pub masked: usize,
}

/// `(q₊, q₋)` for the cat pair at `(α, β)`.
pub fn cat_overlaps(two_s: u32, alpha: f64, beta: f64) -> (Complex64, Complex64) {
    (
        scs_overlap(two_s, alpha, beta, FRAC_PI_2, 0.0),
        scs_overlap(two_s, alpha, beta, -FRAC_PI_2, 0.0),
    )
}

fn husimi_value(two_s: u32, state: CatState, alpha: f64, beta: f64) -> f64 {
    let (qp, qm) = cat_overlaps(two_s, alpha, beta);
    match state {
        CatState::Incoherent => (qp.norm_sqr() + qm.norm_sqr()) / 2.0,
        _ => (qp + qm * state.sign()).norm_sqr() / 2.0,
    }
}

fn field(grid: &SphericalGrid, values: Vec<f64>, kind: FieldKind, state: Option<CatState>, two_s: u32) -> QField {
    QField {
        grid: grid.clone(),
        values,
        kind,
        state,
        two_s,
        masked: 0,
    }
}

/// `Q = |⟨s, α, β|ψ⟩|²` for the chosen cat state (the mixture gives `Q_inc`).
pub fn husimi_q(two_s: u32, state: CatState, grid: &SphericalGrid) -> QField {
    let values = grid.map(|a, b| husimi_value(two_s, state, a, b));
    field(grid, values, FieldKind::Husimi, Some(state), two_s)
}

pub fn q_incoherent(two_s: u32, grid: &SphericalGrid) -> QField {
    let values = grid.map(|a, b| husimi_value(two_s, CatState::Incoherent, a, b));
    field(grid, values, FieldKind::Incoherent, Some(CatState::Incoherent), two_s)
}

/// `Re[q₊ q₋*]`
pub fn interference_term(two_s: u32, grid: &SphericalGrid) -> QField {
    let values = grid.map(|a, b| interference_at(two_s, a, b));
    field(grid, values, FieldKind::Interference, None, two_s)
}

pub fn interference_at(two_s: u32, alpha: f64, beta: f64) -> f64 {
    let (qp, qm) = cat_overlaps(two_s, alpha, beta);
    (qp * qm.conj()).re
}

/// `Q / Q_inc`; points with `Q_inc` below [`RATIO_MASK_THRESHOLD`] are set to
/// [`MASKED`] and counted in [`QField::masked`].
pub fn coherence_ratio(two_s: u32, state: CatState, grid: &SphericalGrid) -> QField {
    let values = grid.map(|a, b| {
        let inc = husimi_value(two_s, CatState::Incoherent, a, b);
        if inc < RATIO_MASK_THRESHOLD {
            MASKED
        } else {
            husimi_value(two_s, state, a, b) / inc
        }
    });
    let masked = values.iter().filter(|v| v.is_nan()).count();
    QField {
        masked,
        ..field(grid, values, FieldKind::Ratio, Some(state), two_s)
    }
}

/// `(value sin α cos β, value sin α sin β, value cos α, value)` per grid point.
pub fn export_polar(field: &QField) -> Vec<[f64; 4]> {
    field
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let (a, b) = field.grid.point(i);
            [v * a.sin() * b.cos(), v * a.sin() * b.sin(), v * a.cos(), v]
        })
        .collect()
}

/// `∫ value dΩ` over the sphere; needs a grid from [`SphericalGrid::quadrature`].
pub fn sphere_integral(field: &QField) -> Result<f64> {
    let weights = field
        .grid
        .cos_weights
        .as_ref()
        .ok_or_else(|| QwError::Unsupported("sphere integral needs a Gauss-Legendre grid".into()))?;
    let nb = field.grid.beta.len();
    let dbeta = 2.0 * PI / nb as f64;
    Ok(field
        .values
        .chunks(nb)
        .zip(weights)
        .map(|(row, w)| w * dbeta * row.iter().sum::<f64>())
        .sum())
}

/// `(2s + 1)/(4π) ∫ Q dΩ`
pub fn normalization(field: &QField) -> Result<f64> {
    Ok((field.two_s as f64 + 1.0) / (4.0 * PI) * sphere_integral(field)?)
}

/// Great circle through both poles in the `y–z` plane, the circle
/// perpendicular to the `S₁`/`S₂` axis. Parameter `γ ∈ [0, 2π)` runs from the
/// north pole along `β = π/2` to the south pole and back along `β = 3π/2`.
pub fn meridian_loop(samples: usize) -> Vec<(f64, f64)> {
    (0..samples)
        .map(|k| {
            let g = 2.0 * PI * k as f64 / samples as f64;
            if g <= PI {
                (g, FRAC_PI_2)
            } else {
                (2.0 * PI - g, 3.0 * FRAC_PI_2)
            }
        })
        .collect()
}

/// Strict local maxima of `|values|` on a closed loop. Neighbouring samples
/// equal to within `1e-12` of the peak magnitude form one plateau.
pub fn count_lobes(values: &[f64]) -> usize {
    let mags: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let peak = mags.iter().cloned().fold(0.0, f64::max);
    let tol = 1e-12 * peak + 1e-300;
    // collapse runs of (nearly) equal samples
    let mut runs: Vec<f64> = Vec::new();
    for &m in &mags {
        if runs.last().is_none_or(|&r| (r - m).abs() > tol) {
            runs.push(m);
        }
    }
    if runs.len() > 1 && (runs[0] - runs[runs.len() - 1]).abs() <= tol {
        runs.pop();
    }
    let n = runs.len();
    if n < 2 {
        return 0;
    }
    (0..n)
        .filter(|&i| runs[i] > runs[(i + n - 1) % n] && runs[i] > runs[(i + 1) % n])
        .count()
}

/// Number of interference lobes for the spin-`s` cat pair, counted along
/// [`meridian_loop`].
pub fn interference_lobes(two_s: u32, samples: usize) -> Result<usize> {
    if samples < MIN_LOBE_SAMPLES {
        return Err(QwError::InvalidParameter(format!(
            "lobe counting needs at least {MIN_LOBE_SAMPLES} samples, got {samples}"
        )));
    }
    let values: Vec<f64> = meridian_loop(samples)
        .into_iter()
        .map(|(a, b)| interference_at(two_s, a, b))
        .collect();
    Ok(count_lobes(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use rand::Rng;

    const S52: u32 = 5;

    #[test]
    fn overlap_examples() {
        for &(a, b) in &[(0.0, 0.0), (0.7, 2.0), (PI, 5.0)] {
            assert!((scs_overlap(S52, a, b, a, b) - 1.0).norm() < 1e-14);
        }
        assert!(scs_overlap(S52, FRAC_PI_2, 0.0, -FRAC_PI_2, 0.0).norm() < 1e-15);
        let grid = SphericalGrid::uniform(50, 50).unwrap();
        for i in 0..grid.len() {
            let (a, b) = grid.point(i);
            assert!(scs_overlap(S52, a, b, 1.1, 0.4).norm() <= 1.0 + 1e-14);
        }
    }

    #[test]
    fn husimi_third_example() {
        let grid = SphericalGrid::from_samples(vec![FRAC_PI_2], vec![0.0]).unwrap();
        let q = husimi_q(S52, CatState::Psi2, &grid);
        assert!((q.values[0] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn decomposition_identity() {
        let grid = SphericalGrid::uniform(100, 200).unwrap();
        let inc = q_incoherent(S52, &grid);
        let interf = interference_term(S52, &grid);
        for state in [CatState::Psi1, CatState::Psi2] {
            let q = husimi_q(S52, state, &grid);
            for i in 0..grid.len() {
                let rebuilt = inc.values[i] + state.sign() * interf.values[i];
                assert!((q.values[i] - rebuilt).abs() < 1e-12);
                assert!((0.0..=1.0 + 1e-12).contains(&q.values[i]));
            }
        }
    }

    #[test]
    fn quadrature_normalization() {
        let grid = SphericalGrid::quadrature(128, 256).unwrap();
        for state in [CatState::Psi1, CatState::Psi2, CatState::Incoherent] {
            let q = husimi_q(S52, state, &grid);
            assert!((normalization(&q).unwrap() - 1.0).abs() < 1e-6);
        }
        // ∫ dΩ = 4π, independent oracle for the weights
        let ones = QField {
            values: vec![1.0; grid.len()],
            ..q_incoherent(S52, &grid)
        };
        assert!((sphere_integral(&ones).unwrap() - 4.0 * PI).abs() < 1e-12);
        let uniform = SphericalGrid::uniform(10, 10).unwrap();
        assert!(sphere_integral(&q_incoherent(S52, &uniform)).is_err());
    }

    #[test]
    fn interference_matches_analytic_form() {
        // q₊ q₋* = (cos α - i sin α sin β)^{2s} / 2^{2s}
        let mut rng = stream_rng(21, 0);
        for two_s in 1..=6u32 {
            for _ in 0..50 {
                let (a, b) = (rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI));
                let (qp, qm) = cat_overlaps(two_s, a, b);
                let want = Complex64::new(a.cos(), -a.sin() * b.sin()).powi(two_s as i32) / 2f64.powi(two_s as i32);
                assert!((qp * qm.conj() - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn lobe_counts() {
        for two_s in [2u32, 3, 4, 5] {
            assert_eq!(interference_lobes(two_s, 720).unwrap(), 2 * two_s as usize);
            assert_eq!(interference_lobes(two_s, 1441).unwrap(), 2 * two_s as usize);
        }
        assert!(interference_lobes(5, 100).is_err());
    }

    #[test]
    fn equatorial_slice_carries_no_interference() {
        // on α = π/2 the interference vanishes for half-integer s
        for k in 0..720 {
            let b = 2.0 * PI * k as f64 / 720.0;
            assert!(interference_at(S52, FRAC_PI_2, b).abs() < 1e-15);
        }
    }

    #[test]
    fn count_lobes_handles_plateaus_and_wrap() {
        assert_eq!(count_lobes(&[0.0, 1.0, 1.0, 0.0, 2.0, 0.0]), 2);
        assert_eq!(count_lobes(&[3.0, 0.0, 1.0, 0.0, 3.0]), 2);
        assert_eq!(count_lobes(&[1.0; 10]), 0);
        assert_eq!(count_lobes(&[0.0, -1.0, 0.0, 1.0]), 2);
    }

    #[test]
    fn inversion_symmetry() {
        let mut rng = stream_rng(22, 0);
        for two_s in [4u32, 5] {
            let parity = if two_s % 2 == 0 { 1.0 } else { -1.0 };
            for _ in 0..200 {
                let (a, b) = (rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI));
                let here = interference_at(two_s, a, b);
                let there = interference_at(two_s, PI - a, (b + PI).rem_euclid(2.0 * PI));
                assert!((there - parity * here).abs() < 1e-12);
                assert!((there.abs() - here.abs()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn coherence_ratio_behaviour() {
        let grid = SphericalGrid::uniform(40, 80).unwrap();
        let base = coherence_ratio(S52, CatState::Incoherent, &grid);
        assert!(base.values.iter().all(|v| v.is_nan() || (v - 1.0).abs() < 1e-12));
        let r = coherence_ratio(S52, CatState::Psi2, &grid);
        assert_eq!(r.kind, FieldKind::Ratio);
        let spread = r
            .values
            .iter()
            .filter(|v| !v.is_nan())
            .fold(0.0f64, |m, v| m.max((v - 1.0).abs()));
        assert!(spread > 0.5);
        assert_eq!(r.masked, r.values.iter().filter(|v| v.is_nan()).count());
    }

    #[test]
    fn ratio_masks_vanishing_baseline() {
        let grid = SphericalGrid::from_samples(vec![0.0], vec![0.0]).unwrap();
        let r = coherence_ratio(60, CatState::Psi1, &grid);
        // Q_inc(0, 0) = 2^{-2s}, below the threshold for s = 30
        assert_eq!(r.masked, 1);
        assert!(r.values[0].is_nan());
    }

    #[test]
    fn polar_export() {
        let grid = SphericalGrid::uniform(5, 8).unwrap();
        let ones = QField {
            values: vec![1.0; grid.len()],
            ..q_incoherent(S52, &grid)
        };
        let rows = export_polar(&ones);
        assert_eq!(rows.len(), grid.len());
        for r in &rows {
            assert!((r[0] * r[0] + r[1] * r[1] + r[2] * r[2] - 1.0).abs() < 1e-14);
        }
        let zeros = QField {
            values: vec![0.0; grid.len()],
            ..ones
        };
        assert!(export_polar(&zeros).iter().all(|r| r[..3].iter().all(|c| *c == 0.0)));
    }

    #[test]
    fn closed_form_matches_direct_sum() {
        let mut rng = stream_rng(23, 0);
        for two_s in 1..=7u32 {
            for _ in 0..200 {
                let theta: f64 = rng.random_range(0.05..3.0);
                let bound = 2.0 * (1.0 / (theta / 2.0).tan()).atan();
                let alpha = rng.random_range(0.0..bound.min(PI) * 0.999);
                let beta = rng.random_range(0.0..2.0 * PI);
                for (sign, th) in [(Sign::Plus, theta), (Sign::Minus, -theta)] {
                    let cf = closed_form_q(two_s, alpha, beta, theta, sign).unwrap();
                    let direct = scs_overlap(two_s, alpha, beta, th, 0.0);
                    assert!(
                        (cf - direct).norm() < 1e-8,
                        "2s={two_s} a={alpha} b={beta} t={theta}: {cf} vs {direct}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_edges() {
        // α → 0 keeps only the leading terms
        for sign in [Sign::Plus, Sign::Minus] {
            let th = if sign == Sign::Plus { FRAC_PI_2 } else { -FRAC_PI_2 };
            let cf = closed_form_q(S52, 0.0, 0.3, FRAC_PI_2, sign).unwrap();
            assert!((cf - scs_overlap(S52, 0.0, 0.3, th, 0.0)).norm() < 1e-12);
        }
        assert!(matches!(
            closed_form_q(S52, 1.6, 0.0, FRAC_PI_2, Sign::Plus),
            Err(QwError::Domain(_))
        ));
        assert!(matches!(
            closed_form_q(S52, 2.5, 0.0, FRAC_PI_2, Sign::Minus),
            Err(QwError::Domain(_))
        ));
    }

    #[test]
    fn parallel_grid_matches_sequential() {
        let grid = SphericalGrid::uniform(17, 23).unwrap();
        let par = interference_term(S52, &grid);
        for i in 0..grid.len() {
            let (a, b) = grid.point(i);
            assert_eq!(par.values[i].to_bits(), interference_at(S52, a, b).to_bits());
        }
    }
}
