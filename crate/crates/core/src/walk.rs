// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! State-vector simulation of the coined discrete-time walk on a line.
//!
//! The coin basis is ordered `(↓, ↑)`: index 0 is `↓`, index 1 is `↑`. A
//! shift moves `↓` amplitude one site down and `↑` amplitude one site up. A
//! walk step applies the coin first and then the shift.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};

pub const DOWN: usize = 0;
pub const UP: usize = 1;

/// Tolerance for unit-norm checks on walker states.
pub const STATE_NORM_TOL: f64 = 1e-10;
/// Tolerance for unitarity checks on 2×2 matrices.
pub const MATRIX_TOL: f64 = 1e-12;
/// Below this post-selection probability the conditional state is undefined.
pub const ZERO_PROBABILITY: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Angles `(θ, ξ, ζ)` of one step's SU(2) coin.
///
/// Construction normalizes into `θ ∈ [0, π/2]`, `ξ, ζ ∈ (-π, π]` without
/// changing the coin matrix: `(θ+π, ξ+π, ζ+π)` and `(-θ, ξ, ζ+π)` both give
/// the same matrix as `(θ, ξ, ζ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinParams {
    theta: f64,
    xi: f64,
    zeta: f64,
}

impl CoinParams {
    pub fn new(theta: f64, xi: f64, zeta: f64) -> Result<Self> {
        if !(theta.is_finite() && xi.is_finite() && zeta.is_finite()) {
            return Err(QwError::InvalidParameter(format!(
                "coin angles must be finite, got ({theta}, {xi}, {zeta})"
            )));
        }
        let turns = (theta / PI).floor();
        let mut t = theta - turns * PI;
        let shift = turns * PI;
        let (mut x, z) = (xi + shift, zeta + shift);
        if t > PI / 2.0 {
            t = PI - t;
            x -= PI;
        }
        Ok(Self {
            theta: t.clamp(0.0, PI / 2.0),
            xi: wrap_angle(x),
            zeta: wrap_angle(z),
        })
    }

    pub fn identity() -> Self {
        Self {
            theta: 0.0,
            xi: 0.0,
            zeta: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.theta, self.xi, self.zeta]
    }

    pub fn matrix(&self) -> CoinMatrix {
        coin_matrix_raw(self.theta, self.xi, self.zeta)
    }
}

/// A 2×2 complex matrix acting on the coin, rows and columns in `(↓, ↑)`
/// order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix(pub [[Complex64; 2]; 2]);

impl CoinMatrix {
    pub fn identity() -> Self {
        Self([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let m = &self.0;
        Self([[m[0][0] * c, m[0][1] * c], [m[1][0] * c, m[1][1] * c]])
    }

    /// Largest entrywise deviation of `M†M` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint() * *self;
        let id = Self::identity();
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((p.0[r][c] - id.0[r][c]).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    pub fn is_special_unitary(&self, tol: f64) -> bool {
        self.is_unitary(tol) && (self.det() - ONE).norm() <= tol
    }

    /// `|tr(A†B)| / 2`, equal to 1 iff `A` and `B` agree up to a global phase.
    pub fn phase_insensitive_overlap(&self, other: &CoinMatrix) -> f64 {
        (self.adjoint() * *other).trace().norm() / 2.0
    }

    pub fn max_abs_diff(&self, other: &CoinMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }
}

impl Mul for CoinMatrix {
    type Output = CoinMatrix;

    fn mul(self, rhs: CoinMatrix) -> CoinMatrix {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        CoinMatrix(out)
    }
}

pub(crate) fn coin_matrix_raw(theta: f64, xi: f64, zeta: f64) -> CoinMatrix {
    let (s, c) = theta.sin_cos();
    let exi = Complex64::from_polar(1.0, xi);
    let ezeta = Complex64::from_polar(1.0, zeta);
    CoinMatrix([[exi * c, ezeta * s], [-ezeta.conj() * s, exi.conj() * c]])
}

/// The SU(2) coin
/// `[[e^{iξ}cosθ, e^{iζ}sinθ], [-e^{-iζ}sinθ, e^{-iξ}cosθ]]`.
pub fn coin_matrix(params: &CoinParams) -> CoinMatrix {
    params.matrix()
}

/// Lattice geometry of an `n_steps` walk started at the origin.
///
/// Sites span `[-n, n]`; after `n` steps only sites with the parity of `n`
/// are populated, which gives `d = n + 1` qudit levels. Site `k` carries OAM
/// `k * oam_step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub n_steps: usize,
    pub oam_step: i32,
}

impl Lattice {
    pub fn new(n_steps: usize) -> Self {
        Self { n_steps, oam_step: 1 }
    }

    pub fn with_oam_step(n_steps: usize, oam_step: i32) -> Self {
        Self { n_steps, oam_step }
    }

    pub fn dimension(&self) -> usize {
        self.n_steps + 1
    }

    pub fn extent(&self) -> i32 {
        self.n_steps as i32
    }

    /// Reachable sites in ascending order: `-n, -n+2, …, n`.
    pub fn sites(&self) -> impl Iterator<Item = i32> {
        let n = self.extent();
        (0..=self.n_steps as i32).map(move |j| -n + 2 * j)
    }

    /// Position of `site` in the ascending list of reachable sites.
    pub fn index_of(&self, site: i32) -> Option<usize> {
        let n = self.extent();
        if site < -n || site > n || (site + n) % 2 != 0 {
            None
        } else {
            Some(((site + n) / 2) as usize)
        }
    }

    pub fn site_at(&self, index: usize) -> i32 {
        -self.extent() + 2 * index as i32
    }

    pub fn oam(&self, site: i32) -> i32 {
        site * self.oam_step
    }

    fn grown(&self) -> Self {
        Self {
            n_steps: self.n_steps + 1,
            oam_step: self.oam_step,
        }
    }
}

/// A normalized coin state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinKet {
    amplitudes: [Complex64; 2],
}

impl CoinKet {
    /// Normalizes `(down, up)`; rejects the zero vector.
    pub fn new(down: Complex64, up: Complex64) -> Result<Self> {
        let norm = (down.norm_sqr() + up.norm_sqr()).sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(QwError::ZeroVector);
        }
        Ok(Self {
            amplitudes: [down / norm, up / norm],
        })
    }

    pub fn down() -> Self {
        Self {
            amplitudes: [ONE, ZERO],
        }
    }

    pub fn up() -> Self {
        Self {
            amplitudes: [ZERO, ONE],
        }
    }

    /// `(|↑⟩ + |↓⟩)/√2`
    pub fn plus() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self { amplitudes: [h, h] }
    }

    /// `(|↑⟩ - |↓⟩)/√2`, orthogonal to `plus`.
    pub fn minus() -> Self {
        let h = FRAC_1_SQRT_2;
        Self {
            amplitudes: [Complex64::new(-h, 0.0), Complex64::new(h, 0.0)],
        }
    }

    /// The unit ket orthogonal to this one.
    pub fn orthogonal(&self) -> Self {
        let [a, b] = self.amplitudes;
        Self {
            amplitudes: [-b.conj(), a.conj()],
        }
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        self.amplitudes
    }
}

/// Joint walker ⊗ coin amplitudes, stored densely over sites `[-n, n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerCoinState {
    lattice: Lattice,
    amps: Vec<[Complex64; 2]>,
}

impl WalkerCoinState {
    /// `|0⟩_w ⊗ |coin⟩_c` on the zero-step lattice.
    pub fn initial(coin: CoinKet) -> Self {
        Self::initial_with_oam_step(coin, 1)
    }

    pub fn initial_with_oam_step(coin: CoinKet, oam_step: i32) -> Self {
        Self {
            lattice: Lattice::with_oam_step(0, oam_step),
            amps: vec![coin.amplitudes],
        }
    }

    /// The default starting point `|0⟩ ⊗ |+⟩`.
    pub fn origin_plus() -> Self {
        Self::initial(CoinKet::plus())
    }

    pub fn zeros(lattice: Lattice) -> Self {
        Self {
            lattice,
            amps: vec![[ZERO; 2]; 2 * lattice.n_steps + 1],
        }
    }

    /// `|site⟩ ⊗ |coin⟩` on `lattice`; any site in `[-n, n]` is accepted.
    pub fn basis(lattice: Lattice, site: i32, coin: usize) -> Result<Self> {
        let mut out = Self::zeros(lattice);
        let idx = out.raw_index(site).ok_or_else(|| {
            QwError::InvalidParameter(format!("site {site} outside lattice extent {}", lattice.n_steps))
        })?;
        if coin > 1 {
            return Err(QwError::InvalidParameter(format!("coin index {coin}")));
        }
        out.amps[idx][coin] = ONE;
        Ok(out)
    }

    /// Builds a state from dense `(↓, ↑)` pairs over sites `[-n, n]`.
    pub fn from_dense(lattice: Lattice, amps: Vec<[Complex64; 2]>) -> Result<Self> {
        let expected = 2 * lattice.n_steps + 1;
        if amps.len() != expected {
            return Err(QwError::DimensionMismatch {
                expected,
                got: amps.len(),
            });
        }
        Ok(Self { lattice, amps })
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    /// Dense `(↓, ↑)` amplitudes indexed by `site + n`.
    pub fn dense(&self) -> &[[Complex64; 2]] {
        &self.amps
    }

    fn raw_index(&self, site: i32) -> Option<usize> {
        let n = self.lattice.extent();
        (site >= -n && site <= n).then(|| (site + n) as usize)
    }

    pub fn amplitude(&self, site: i32, coin: usize) -> Complex64 {
        self.raw_index(site).map(|i| self.amps[i][coin]).unwrap_or(ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|p| p[0].norm_sqr() + p[1].norm_sqr()).sum()
    }

    /// Total squared amplitude on sites of the wrong parity for the lattice.
    pub fn off_parity_weight(&self) -> f64 {
        // index i holds site i - n, which has the lattice parity iff i is even
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 != 0)
            .map(|(_, p)| p[0].norm_sqr() + p[1].norm_sqr())
            .sum()
    }

    /// Multiplies every amplitude by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            lattice: self.lattice,
            amps: self.amps.iter().map(|p| [p[0] * c, p[1] * c]).collect(),
        }
    }

    pub fn inner(&self, other: &WalkerCoinState) -> Result<Complex64> {
        if self.amps.len() != other.amps.len() {
            return Err(QwError::DimensionMismatch {
                expected: self.amps.len(),
                got: other.amps.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a[0].conj() * b[0] + a[1].conj() * b[1])
            .sum())
    }

    /// Applies a coin-only operator at every site.
    pub fn apply_coin_matrix(&self, m: &CoinMatrix) -> Self {
        Self {
            lattice: self.lattice,
            amps: self.amps.iter().map(|p| m.apply(*p)).collect(),
        }
    }
}

/// A normalized qudit state of the walker over the reachable sites of a
/// lattice, in ascending site order.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    lattice: Lattice,
    amps: Vec<Complex64>,
}

impl WalkerState {
    /// Normalizes `amps` (ascending site order); rejects the zero vector.
    pub fn from_amplitudes(lattice: Lattice, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != lattice.dimension() {
            return Err(QwError::DimensionMismatch {
                expected: lattice.dimension(),
                got: amps.len(),
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(QwError::ZeroVector);
        }
        Ok(Self {
            lattice,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Wraps already-normalized amplitudes without rescaling.
    pub(crate) fn from_normalized(lattice: Lattice, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), lattice.dimension());
        Self { lattice, amps }
    }

    /// The position eigenstate `|site⟩`.
    pub fn basis(lattice: Lattice, site: i32) -> Result<Self> {
        let idx = lattice.index_of(site).ok_or_else(|| {
            QwError::InvalidParameter(format!("site {site} is not reachable in {} steps", lattice.n_steps))
        })?;
        let mut amps = vec![ZERO; lattice.dimension()];
        amps[idx] = ONE;
        Ok(Self { lattice, amps })
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude_at(&self, site: i32) -> Complex64 {
        self.lattice.index_of(site).map(|i| self.amps[i]).unwrap_or(ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &WalkerState) -> Result<Complex64> {
        if self.amps.len() != other.amps.len() {
            return Err(QwError::DimensionMismatch {
                expected: self.amps.len(),
                got: other.amps.len(),
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Sites carrying more than `tol` probability.
    pub fn support(&self, tol: f64) -> Vec<i32> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > tol)
            .map(|(i, _)| self.lattice.site_at(i))
            .collect()
    }
}

impl fmt::Display for WalkerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.amps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:+.4}{:+.4}i", a.re, a.im)?;
        }
        write!(f, "]")
    }
}

pub fn apply_coin(state: &WalkerCoinState, params: &CoinParams) -> WalkerCoinState {
    state.apply_coin_matrix(&params.matrix())
}

/// Conditional shift; the lattice grows by one site on each side.
pub fn apply_shift(state: &WalkerCoinState) -> WalkerCoinState {
    let lattice = state.lattice.grown();
    let mut amps = vec![[ZERO; 2]; 2 * lattice.n_steps + 1];
    // old index i = k + n; new index of k±1 is (k ± 1) + n + 1.
    for (i, p) in state.amps.iter().enumerate() {
        amps[i][DOWN] = p[DOWN];
        amps[i + 2][UP] = p[UP];
    }
    WalkerCoinState { lattice, amps }
}

/// Coin-then-shift for each entry of `coins`, in order.
pub fn evolve(initial: &WalkerCoinState, coins: &[CoinParams]) -> Result<WalkerCoinState> {
    if coins.is_empty() {
        return Err(QwError::InvalidParameter("coin sequence is empty".into()));
    }
    let matrices: Vec<CoinMatrix> = coins.iter().map(CoinParams::matrix).collect();
    Ok(evolve_matrices(initial, &matrices))
}

pub(crate) fn evolve_matrices(initial: &WalkerCoinState, coins: &[CoinMatrix]) -> WalkerCoinState {
    coins
        .iter()
        .fold(initial.clone(), |state, m| apply_shift(&state.apply_coin_matrix(m)))
}

/// Projects the coin onto `ket` and returns the renormalized walker state
/// with the success probability.
pub fn project_coin(state: &WalkerCoinState, ket: &CoinKet) -> Result<(WalkerState, f64)> {
    let (amps, p) = project_unnormalized(state, ket)?;
    if p < ZERO_PROBABILITY {
        return Err(QwError::ZeroProbability(p));
    }
    let scale = 1.0 / p.sqrt();
    Ok((
        WalkerState::from_normalized(state.lattice, amps.into_iter().map(|a| a * scale).collect()),
        p,
    ))
}

/// `(I ⊗ ⟨ket|)|state⟩` over reachable sites and its squared norm.
pub(crate) fn project_unnormalized(state: &WalkerCoinState, ket: &CoinKet) -> Result<(Vec<Complex64>, f64)> {
    let stray = state.off_parity_weight();
    if stray > 1e-20 {
        return Err(QwError::OffParity(stray.sqrt()));
    }
    let [kd, ku] = ket.amplitudes;
    let (kd, ku) = (kd.conj(), ku.conj());
    let lattice = state.lattice;
    let amps: Vec<Complex64> = lattice
        .sites()
        .map(|k| {
            let p = state.amps[(k + lattice.extent()) as usize];
            kd * p[DOWN] + ku * p[UP]
        })
        .collect();
    let p = amps.iter().map(|a| a.norm_sqr()).sum();
    Ok((amps, p))
}

/// `|⟨a|b⟩|²`
pub fn fidelity(a: &WalkerState, b: &WalkerState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}
