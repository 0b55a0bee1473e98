// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! Optical realization of the walk: waveplate stacks for the coins and
//! Q-plates for the shifts.
//!
//! # Conventions
//!
//! The coin is carried by circular polarization with `R ↔ ↓` (index 0) and
//! `L ↔ ↑` (index 1); site `k` carries OAM `k · oam_step`. A retarder of
//! retardance `Γ` with fast axis at angle `a` acts in the `(R, L)` basis as
//!
//! ```text
//! J(Γ, a) = [[cos(Γ/2),            i e^{2ia} sin(Γ/2)],
//!            [i e^{-2ia} sin(Γ/2), cos(Γ/2)          ]]
//! ```
//!
//! with `det J = 1`; a QWP is `Γ = π/2` and a HWP is `Γ = π`. Stacks are
//! listed in the order the light meets them. A Q-plate with tuning `δ`,
//! orientation phase `α₀` and charge `q` maps
//!
//! ```text
//! |L, m⟩ → cos(δ/2)|L, m⟩ + i e^{2iα₀}  sin(δ/2)|R, m+2q⟩
//! |R, m⟩ → cos(δ/2)|R, m⟩ + i e^{-2iα₀} sin(δ/2)|L, m-2q⟩
//! ```
//!
//! At `δ = π` this is the ideal shift followed by the coin flip
//! `F(α₀) = [[0, i e^{2iα₀}], [i e^{-2iα₀}, 0]]`. The compiler folds each
//! `F⁻¹` into the next coin's waveplates, and the last one into a final
//! stack in front of the projection, so the physical output matches the
//! ideal walk up to a global phase.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};
use crate::walk::{project_coin, CoinKet, CoinMatrix, CoinParams, Lattice, WalkerCoinState, WalkerState};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest `|δ - π|` the compiler accepts as full conversion.
pub const FULL_CONVERSION_TOL: f64 = 1e-12;
/// Unitarity tolerance for matrices handed to [`decompose_coin`].
pub const DECOMPOSE_TOL: f64 = 1e-9;

/// Jones matrix of a retarder with retardance `gamma` and fast axis `angle`.
pub fn jones_retarder(gamma: f64, angle: f64) -> CoinMatrix {
    let (s, c) = (gamma / 2.0).sin_cos();
    let e = Complex64::from_polar(1.0, 2.0 * angle);
    CoinMatrix([
        [Complex64::new(c, 0.0), I * e * s],
        [I * e.conj() * s, Complex64::new(c, 0.0)],
    ])
}

pub fn jones_qwp(angle: f64) -> CoinMatrix {
    jones_retarder(FRAC_PI_2, angle)
}

pub fn jones_hwp(angle: f64) -> CoinMatrix {
    jones_retarder(PI, angle)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum WaveplateKind {
    Qwp,
    Hwp,
}

impl fmt::Display for WaveplateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WaveplateKind::Qwp => "QWP",
            WaveplateKind::Hwp => "HWP",
        })
    }
}

/// A waveplate and its fast-axis angle in `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveplateSetting {
    pub kind: WaveplateKind,
    pub angle: f64,
}

impl WaveplateSetting {
    pub fn new(kind: WaveplateKind, angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(QwError::InvalidParameter(format!("waveplate angle {angle}")));
        }
        let mut angle = angle.rem_euclid(PI);
        if angle >= PI {
            angle = 0.0;
        }
        Ok(Self { kind, angle })
    }

    pub fn jones(&self) -> CoinMatrix {
        match self.kind {
            WaveplateKind::Qwp => jones_qwp(self.angle),
            WaveplateKind::Hwp => jones_hwp(self.angle),
        }
    }
}

/// Product of a stack, first element applied first.
pub fn stack_matrix(stack: &[WaveplateSetting]) -> CoinMatrix {
    stack.iter().fold(CoinMatrix::identity(), |acc, w| w.jones() * acc)
}

/// QWP–HWP–QWP angles whose product equals `coin` up to a global phase.
///
/// A retarder at angle `a` rotates the Poincaré sphere about the equatorial
/// axis at azimuth `ψ = π - 2a`; the three angles follow from the ZYZ Euler
/// angles of `coin / √det`.
pub fn decompose_coin(coin: &CoinMatrix) -> Result<Vec<WaveplateSetting>> {
    let err = coin.unitarity_error();
    if err.is_nan() || err > DECOMPOSE_TOL {
        return Err(QwError::NotUnitary(err));
    }
    let v = coin.scale(coin.det().sqrt().inv());
    let (a, c21) = (v.get(0, 0), v.get(1, 0));
    // v = Rz(A) Ry(B) Rz(C): v00 = e^{-i(A+C)/2} cos(B/2), v10 = e^{i(A-C)/2} sin(B/2)
    let b = 2.0 * c21.norm().atan2(a.norm());
    let sum = if a.norm() > 1e-14 { -2.0 * a.arg() } else { 0.0 };
    let diff = if c21.norm() > 1e-14 { 2.0 * c21.arg() } else { 0.0 };
    let (big_a, big_c) = ((sum + diff) / 2.0, (sum - diff) / 2.0);
    let psi3 = big_a;
    let psi1 = -big_c;
    let psi2 = (big_a - big_c - b) / 2.0;
    let angle = |psi: f64| (PI - psi) / 2.0;
    Ok(vec![
        WaveplateSetting::new(WaveplateKind::Qwp, angle(psi1))?,
        WaveplateSetting::new(WaveplateKind::Hwp, angle(psi2))?,
        WaveplateSetting::new(WaveplateKind::Qwp, angle(psi3))?,
    ])
}

/// Q-plate tuning `delta`, orientation phase `alpha0` and charge `q = two_q / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QPlateParams {
    pub delta: f64,
    pub alpha0: f64,
    pub two_q: i32,
}

impl QPlateParams {
    pub fn new(delta: f64, alpha0: f64, two_q: i32) -> Result<Self> {
        if !delta.is_finite() || !alpha0.is_finite() {
            return Err(QwError::InvalidParameter(format!(
                "Q-plate delta={delta}, alpha0={alpha0}"
            )));
        }
        Ok(Self { delta, alpha0, two_q })
    }

    /// Full conversion (`δ = π`), `q = 1/2`.
    pub fn tuned(alpha0: f64) -> Self {
        Self {
            delta: PI,
            alpha0,
            two_q: 1,
        }
    }

    pub fn with_two_q(self, two_q: i32) -> Self {
        Self { two_q, ..self }
    }

    pub fn q(&self) -> f64 {
        self.two_q as f64 / 2.0
    }

    /// Coin flip left behind by a fully converting plate.
    pub fn conversion_flip(&self) -> CoinMatrix {
        let e = Complex64::from_polar(1.0, 2.0 * self.alpha0);
        CoinMatrix([[ZERO, I * e], [I * e.conj(), ZERO]])
    }
}

/// Applies the Q-plate to every `(coin, site)` component. The plate must
/// shift OAM by exactly one lattice site (`2q = oam_step`); the lattice
/// grows by one site on each side.
pub fn apply_qplate(state: &WalkerCoinState, plate: &QPlateParams) -> Result<WalkerCoinState> {
    let lattice = state.lattice();
    if plate.two_q != lattice.oam_step {
        return Err(QwError::Unsupported(format!(
            "Q-plate shifts OAM by {} but lattice sites are {} apart",
            plate.two_q, lattice.oam_step
        )));
    }
    let grown = Lattice::with_oam_step(lattice.n_steps + 1, lattice.oam_step);
    let (s, c) = (plate.delta / 2.0).sin_cos();
    let e = Complex64::from_polar(1.0, 2.0 * plate.alpha0);
    let mut amps = vec![[ZERO; 2]; 2 * grown.n_steps + 1];
    // old dense index i is new index i + 1
    for (i, p) in state.dense().iter().enumerate() {
        amps[i + 1][0] += c * p[0];
        amps[i + 1][1] += c * p[1];
        amps[i + 2][0] += I * e * s * p[1];
        amps[i][1] += I * e.conj() * s * p[0];
    }
    WalkerCoinState::from_dense(grown, amps)
}

/// Alias of [`apply_qplate`] returning a reusable operator.
pub fn qplate_unitary(plate: QPlateParams) -> impl Fn(&WalkerCoinState) -> Result<WalkerCoinState> {
    move |state| apply_qplate(state, &plate)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalStep {
    pub waveplates: Vec<WaveplateSetting>,
    pub qplate: QPlateParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalCircuit {
    pub steps: Vec<PhysicalStep>,
    /// Stack in front of the projection.
    pub final_waveplates: Vec<WaveplateSetting>,
    pub projection: CoinKet,
}

/// One optical element of a flattened circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "element", rename_all = "UPPERCASE")]
pub enum Element {
    Qwp { angle: f64 },
    Hwp { angle: f64 },
    Qplate { delta: f64, alpha0: f64, q: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitElement {
    /// 1-based step; the final compensation stack is step `n + 1`.
    pub step: usize,
    #[serde(flatten)]
    pub element: Element,
}

impl PhysicalCircuit {
    /// Elements in the order the light meets them.
    pub fn elements(&self) -> Vec<CircuitElement> {
        let wp = |step: usize, w: &WaveplateSetting| CircuitElement {
            step,
            element: match w.kind {
                WaveplateKind::Qwp => Element::Qwp { angle: w.angle },
                WaveplateKind::Hwp => Element::Hwp { angle: w.angle },
            },
        };
        let mut out = Vec::new();
        for (t, step) in self.steps.iter().enumerate() {
            out.extend(step.waveplates.iter().map(|w| wp(t + 1, w)));
            out.push(CircuitElement {
                step: t + 1,
                element: Element::Qplate {
                    delta: step.qplate.delta,
                    alpha0: step.qplate.alpha0,
                    q: step.qplate.q(),
                },
            });
        }
        let last = self.steps.len() + 1;
        out.extend(self.final_waveplates.iter().map(|w| wp(last, w)));
        out
    }

    /// Line-oriented table: `step element angle delta alpha0 q`, one row per
    /// element, `-` for fields that do not apply.
    pub fn to_table(&self) -> String {
        let mut s = String::from("step\telement\tangle\tdelta\talpha0\tq\n");
        for e in self.elements() {
            let row = match e.element {
                Element::Qwp { angle } => format!("{}\tQWP\t{angle:.17e}\t-\t-\t-", e.step),
                Element::Hwp { angle } => format!("{}\tHWP\t{angle:.17e}\t-\t-\t-", e.step),
                Element::Qplate { delta, alpha0, q } => {
                    format!("{}\tQPLATE\t-\t{delta:.17e}\t{alpha0:.17e}\t{q}", e.step)
                }
            };
            s.push_str(&row);
            s.push('\n');
        }
        s
    }
}

/// Compiles coins with the same Q-plate at every step.
pub fn compile(coins: &[CoinParams], plate: QPlateParams) -> Result<PhysicalCircuit> {
    compile_with_plates(coins, &vec![plate; coins.len()])
}

/// Compiles coins with one Q-plate per step (each may carry its own `α₀`).
pub fn compile_with_plates(coins: &[CoinParams], plates: &[QPlateParams]) -> Result<PhysicalCircuit> {
    if coins.is_empty() {
        return Err(QwError::InvalidParameter("coin sequence is empty".into()));
    }
    if plates.len() != coins.len() {
        return Err(QwError::DimensionMismatch {
            expected: coins.len(),
            got: plates.len(),
        });
    }
    for p in plates {
        if (p.delta - PI).abs() > FULL_CONVERSION_TOL {
            return Err(QwError::Unsupported(format!(
                "compiler needs full conversion (delta = pi), got delta = {}",
                p.delta
            )));
        }
        if p.two_q == 0 {
            return Err(QwError::Unsupported("Q-plate with q = 0 does not shift".into()));
        }
    }
    let mut steps = Vec::with_capacity(coins.len());
    let mut undo = CoinMatrix::identity();
    for (coin, plate) in coins.iter().zip(plates) {
        let w = coin.matrix() * undo;
        steps.push(PhysicalStep {
            waveplates: decompose_coin(&w)?,
            qplate: *plate,
        });
        undo = plate.conversion_flip().adjoint();
    }
    Ok(PhysicalCircuit {
        steps,
        final_waveplates: decompose_coin(&undo)?,
        projection: CoinKet::plus(),
    })
}

/// Runs the waveplate/Q-plate cascade on `initial` and projects the coin.
pub fn simulate_physical(circuit: &PhysicalCircuit, initial: &WalkerCoinState) -> Result<(WalkerState, f64)> {
    let mut state = initial.clone();
    for step in &circuit.steps {
        state = state.apply_coin_matrix(&stack_matrix(&step.waveplates));
        state = apply_qplate(&state, &step.qplate)?;
    }
    state = state.apply_coin_matrix(&stack_matrix(&circuit.final_waveplates));
    project_coin(&state, &circuit.projection)
}
