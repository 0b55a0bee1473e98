// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! Target qudit states and the fidelity measurement basis.
//!
//! Logical index `j = 1 … d` runs over walker sites in ascending order, so
//! `j = 1` is the most negative site. Spin states `|s, s_z⟩` sit on site
//! `2 s_z`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};
use crate::rng::stream_rng;
use crate::special::binomial;
use crate::walk::{Lattice, WalkerState};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Gram–Schmidt dependence threshold.
pub const GS_DEPENDENCE_TOL: f64 = 1e-10;

/// Spin-coherent state parameters; the spin is stored doubled so that
/// half-integers stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScsParams {
    pub two_s: u32,
    pub theta: f64,
    pub phi: f64,
}

impl ScsParams {
    pub fn new(two_s: u32, theta: f64, phi: f64) -> Self {
        Self { two_s, theta, phi }
    }

    pub fn spin(&self) -> f64 {
        self.two_s as f64 / 2.0
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.two_s as usize)
    }
}

/// Amplitudes of `|s, θ, φ⟩` for `s_z = -s … s` (ascending).
pub(crate) fn scs_amplitudes(two_s: u32, theta: f64, phi: f64) -> Vec<Complex64> {
    let s = two_s as f64 / 2.0;
    let (sin_h, cos_h) = (theta / 2.0).sin_cos();
    (0..=two_s)
        .map(|up| {
            // up = s + s_z, down = s - s_z
            let down = two_s - up;
            let sz = up as f64 - s;
            let magnitude = binomial(two_s, up).sqrt() * cos_h.powi(up as i32) * sin_h.powi(down as i32);
            Complex64::from_polar(1.0, -phi * sz) * magnitude
        })
        .collect()
}

/// `|s, θ, φ⟩ = Σ √C(2s, s+s_z) e^{-iφ s_z} cos(θ/2)^{s+s_z} sin(θ/2)^{s-s_z} |s_z⟩`
pub fn scs_state(params: &ScsParams) -> WalkerState {
    let amps = scs_amplitudes(params.two_s, params.theta, params.phi);
    WalkerState::from_amplitudes(params.lattice(), amps).expect("coherent states are normalizable")
}

/// `(|n⟩ + e^{iφ}|-n⟩)/√2` on the extremal sites of `lattice`.
pub fn extremal_cat(lattice: Lattice, relative_phase: f64) -> Result<WalkerState> {
    if lattice.dimension() < 2 {
        return Err(QwError::InvalidParameter("a cat state needs at least two sites".into()));
    }
    let mut amps = vec![ZERO; lattice.dimension()];
    let last = amps.len() - 1;
    amps[last] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[0] = Complex64::from_polar(FRAC_1_SQRT_2, relative_phase);
    WalkerState::from_amplitudes(lattice, amps)
}

/// Normalized `c1|s1⟩ + c2|s2⟩`.
pub fn scs_superposition(c1: Complex64, c2: Complex64, s1: &WalkerState, s2: &WalkerState) -> Result<WalkerState> {
    if s1.dimension() != s2.dimension() {
        return Err(QwError::DimensionMismatch {
            expected: s1.dimension(),
            got: s2.dimension(),
        });
    }
    let amps: Vec<Complex64> = s1
        .amplitudes()
        .iter()
        .zip(s2.amplitudes())
        .map(|(a, b)| c1 * a + c2 * b)
        .collect();
    WalkerState::from_amplitudes(s1.lattice(), amps)
}

/// `|QFT_k⟩ = d^{-1/2} Σ_{j=1}^{d} e^{2πi jk/d} |j⟩`.
pub fn fourier_state(k: usize, d: usize) -> Result<WalkerState> {
    if d < 1 || k < 1 || k > d {
        return Err(QwError::InvalidParameter(format!("Fourier index {k} outside 1..={d}")));
    }
    let scale = 1.0 / (d as f64).sqrt();
    let amps = (1..=d)
        .map(|j| Complex64::from_polar(scale, 2.0 * PI * ((j * k) % d) as f64 / d as f64))
        .collect();
    WalkerState::from_amplitudes(Lattice::new(d - 1), amps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RandomKind {
    /// Amplitudes uniform in `[0, 1]`.
    Real,
    /// Real and imaginary parts uniform in `[-0.5, 0.5]`.
    Complex,
}

/// A random state drawn on stream 0 of `seed`, then normalized.
pub fn random_target(kind: RandomKind, d: usize, seed: u64) -> Result<WalkerState> {
    if d < 2 {
        return Err(QwError::InvalidParameter("dimension must be at least 2".into()));
    }
    let mut rng = stream_rng(seed, 0);
    loop {
        let amps: Vec<Complex64> = (0..d)
            .map(|_| match kind {
                RandomKind::Real => Complex64::new(rng.random::<f64>(), 0.0),
                RandomKind::Complex => Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
            })
            .collect();
        match WalkerState::from_amplitudes(Lattice::new(d - 1), amps) {
            Ok(s) => return Ok(s),
            Err(QwError::ZeroVector) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Renormalized copy of a user amplitude list (ascending sites).
pub fn explicit_target(amplitudes: &[Complex64]) -> Result<WalkerState> {
    if amplitudes.is_empty() {
        return Err(QwError::ZeroVector);
    }
    WalkerState::from_amplitudes(Lattice::new(amplitudes.len() - 1), amplitudes.to_vec())
}

/// Orthonormal basis whose first element is `target`, completed from the
/// computational basis in ascending site order.
pub fn gram_schmidt_basis(target: &WalkerState) -> Vec<WalkerState> {
    let lattice = target.lattice();
    let d = target.dimension();
    let mut basis = vec![target.clone()];
    for idx in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = vec![ZERO; d];
        v[idx] = ONE;
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for b in &basis {
                let overlap: Complex64 = b.amplitudes().iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b.amplitudes()) {
                    *vi -= overlap * bi;
                }
            }
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < GS_DEPENDENCE_TOL {
            continue;
        }
        basis.push(WalkerState::from_normalized(
            lattice,
            v.into_iter().map(|a| a / norm).collect(),
        ));
    }
    basis
}

/// Relative sign of the second coherent state in `(|S₁⟩ + c|S₂⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CatSign {
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl CatSign {
    pub fn coefficient(&self) -> Complex64 {
        match self {
            CatSign::Plus => ONE,
            CatSign::Minus => -ONE,
            CatSign::PlusI => I,
            CatSign::MinusI => -I,
        }
    }

    fn token(&self) -> &'static str {
        match self {
            CatSign::Plus => "+",
            CatSign::Minus => "-",
            CatSign::PlusI => "+i",
            CatSign::MinusI => "-i",
        }
    }
}

/// Declarative target description.
///
/// Text form (`FromStr`/`Display`):
/// `cat:phi=<rad>`, `scs:s=<half-int>,theta=<rad>,phi=<rad>`,
/// `scscat:sign=+|-|+i|-i`, `fourier:k=<int>`,
/// `random:kind=real|complex,seed=<int>`, `amps:[re(+im i),...]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TargetSpec {
    ExtremalCat { phi: f64 },
    Scs { two_s: u32, theta: f64, phi: f64 },
    ScsSuperposition { sign: CatSign },
    Fourier { k: usize },
    Random { random: RandomKind, seed: u64 },
    Explicit { amplitudes: Vec<Complex64> },
}

impl TargetSpec {
    /// Builds the state on an `n_steps` walk (`d = n_steps + 1`).
    pub fn materialize(&self, n_steps: usize) -> Result<WalkerState> {
        let lattice = Lattice::new(n_steps);
        let d = lattice.dimension();
        match self {
            TargetSpec::ExtremalCat { phi } => extremal_cat(lattice, *phi),
            TargetSpec::Scs { two_s, theta, phi } => {
                if *two_s as usize != n_steps {
                    return Err(QwError::DimensionMismatch {
                        expected: d,
                        got: *two_s as usize + 1,
                    });
                }
                Ok(scs_state(&ScsParams::new(*two_s, *theta, *phi)))
            }
            TargetSpec::ScsSuperposition { sign } => {
                let two_s = n_steps as u32;
                let s1 = scs_state(&ScsParams::new(two_s, FRAC_PI_2, 0.0));
                let s2 = scs_state(&ScsParams::new(two_s, -FRAC_PI_2, 0.0));
                scs_superposition(ONE, sign.coefficient(), &s1, &s2)
            }
            TargetSpec::Fourier { k } => fourier_state(*k, d),
            TargetSpec::Random { random, seed } => random_target(*random, d, *seed),
            TargetSpec::Explicit { amplitudes } => {
                if amplitudes.len() != d {
                    return Err(QwError::DimensionMismatch {
                        expected: d,
                        got: amplitudes.len(),
                    });
                }
                explicit_target(amplitudes)
            }
        }
    }
}

fn format_complex(z: &Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::ExtremalCat { phi } => write!(f, "cat:phi={phi}"),
            TargetSpec::Scs { two_s, theta, phi } => {
                if two_s % 2 == 0 {
                    write!(f, "scs:s={},theta={theta},phi={phi}", two_s / 2)
                } else {
                    write!(f, "scs:s={two_s}/2,theta={theta},phi={phi}")
                }
            }
            TargetSpec::ScsSuperposition { sign } => write!(f, "scscat:sign={}", sign.token()),
            TargetSpec::Fourier { k } => write!(f, "fourier:k={k}"),
            TargetSpec::Random { random, seed } => {
                let kind = match random {
                    RandomKind::Real => "real",
                    RandomKind::Complex => "complex",
                };
                write!(f, "random:kind={kind},seed={seed}")
            }
            TargetSpec::Explicit { amplitudes } => {
                let parts: Vec<String> = amplitudes.iter().map(format_complex).collect();
                write!(f, "amps:[{}]", parts.join(","))
            }
        }
    }
}

fn parse_err(msg: impl Into<String>) -> QwError {
    QwError::Parse(msg.into())
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| parse_err(format!("{key}: cannot parse {v:?} as a number")))?;
    if !x.is_finite() {
        return Err(parse_err(format!("{key}: value must be finite")));
    }
    Ok(x)
}

/// Parses `5/2`, `2.5` or `3` into `2s`.
fn parse_two_s(v: &str) -> Result<u32> {
    let v = v.trim();
    if let Some((num, den)) = v.split_once('/') {
        let num: u32 = num
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("s: bad numerator in {v:?}")))?;
        return match den.trim() {
            "2" => Ok(num),
            "1" => Ok(2 * num),
            _ => Err(parse_err(format!("s: {v:?} is not a half-integer"))),
        };
    }
    let x = parse_f64("s", v)?;
    let doubled = 2.0 * x;
    if x < 0.0 || (doubled - doubled.round()).abs() > 1e-12 {
        return Err(parse_err(format!("s: {v:?} is not a non-negative half-integer")));
    }
    Ok(doubled.round() as u32)
}

fn key_values(body: &str) -> Result<Vec<(&str, &str)>> {
    body.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| parse_err(format!("expected key=value, got {p:?}")))
        })
        .collect()
}

fn take<'a>(kv: &[(&str, &'a str)], key: &str) -> Result<&'a str> {
    kv.iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| parse_err(format!("missing parameter {key:?}")))
}

fn reject_unknown(kv: &[(&str, &str)], allowed: &[&str]) -> Result<()> {
    for (k, _) in kv {
        if !allowed.contains(k) {
            return Err(parse_err(format!("unknown parameter {k:?}")));
        }
    }
    Ok(())
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`, with exponents allowed.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(parse_err("empty amplitude"));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(parse_f64("amplitude", &t)?, 0.0));
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_f64("amplitude", other)?,
    };
    Ok(Complex64::new(parse_f64("amplitude", re)?, im))
}

impl FromStr for TargetSpec {
    type Err = QwError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| parse_err(format!("target {s:?} lacks a kind prefix")))?;
        match kind.trim() {
            "cat" => {
                let kv = key_values(body)?;
                reject_unknown(&kv, &["phi"])?;
                Ok(TargetSpec::ExtremalCat {
                    phi: parse_f64("phi", take(&kv, "phi")?)?,
                })
            }
            "scs" => {
                let kv = key_values(body)?;
                reject_unknown(&kv, &["s", "theta", "phi"])?;
                Ok(TargetSpec::Scs {
                    two_s: parse_two_s(take(&kv, "s")?)?,
                    theta: parse_f64("theta", take(&kv, "theta")?)?,
                    phi: parse_f64("phi", take(&kv, "phi")?)?,
                })
            }
            "scscat" => {
                let kv = key_values(body)?;
                reject_unknown(&kv, &["sign"])?;
                let sign = match take(&kv, "sign")? {
                    "+" => CatSign::Plus,
                    "-" => CatSign::Minus,
                    "+i" => CatSign::PlusI,
                    "-i" => CatSign::MinusI,
                    other => return Err(parse_err(format!("sign: unknown value {other:?}"))),
                };
                Ok(TargetSpec::ScsSuperposition { sign })
            }
            "fourier" => {
                let kv = key_values(body)?;
                reject_unknown(&kv, &["k"])?;
                let k = take(&kv, "k")?
                    .parse()
                    .map_err(|_| parse_err("k: expected a positive integer"))?;
                Ok(TargetSpec::Fourier { k })
            }
            "random" => {
                let kv = key_values(body)?;
                reject_unknown(&kv, &["kind", "seed"])?;
                let random = match take(&kv, "kind")? {
                    "real" => RandomKind::Real,
                    "complex" => RandomKind::Complex,
                    other => return Err(parse_err(format!("kind: unknown value {other:?}"))),
                };
                let seed = take(&kv, "seed")?
                    .parse()
                    .map_err(|_| parse_err("seed: expected a non-negative integer"))?;
                Ok(TargetSpec::Random { random, seed })
            }
            "amps" => {
                let inner = body
                    .trim()
                    .strip_prefix('[')
                    .and_then(|b| b.strip_suffix(']'))
                    .ok_or_else(|| parse_err("amps: expected [a, b, ...]"))?;
                let amplitudes = inner.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
                Ok(TargetSpec::Explicit { amplitudes })
            }
            other => Err(parse_err(format!("unknown target kind {other:?}"))),
        }
    }
}

/// One row of the built-in benchmark suite.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub label: &'static str,
    pub spec: TargetSpec,
    /// Reference generation probability for this target.
    pub reference_probability: f64,
}

/// Amplitudes of the five real and five complex reference random targets,
/// given as rounded values; they are renormalized on load.
pub const RANDOM_TABLE: [(&str, [(f64, f64); 6]); 10] = [
    (
        "r1",
        [
            (0.51, 0.0),
            (0.27, 0.0),
            (0.13, 0.0),
            (0.10, 0.0),
            (0.29, 0.0),
            (0.75, 0.0),
        ],
    ),
    (
        "r2",
        [
            (0.19, 0.0),
            (0.40, 0.0),
            (0.04, 0.0),
            (0.53, 0.0),
            (0.37, 0.0),
            (0.62, 0.0),
        ],
    ),
    (
        "r3",
        [
            (0.50, 0.0),
            (0.74, 0.0),
            (0.40, 0.0),
            (0.16, 0.0),
            (0.10, 0.0),
            (0.006, 0.0),
        ],
    ),
    (
        "r4",
        [
            (0.50, 0.0),
            (0.47, 0.0),
            (0.55, 0.0),
            (0.31, 0.0),
            (0.36, 0.0),
            (0.04, 0.0),
        ],
    ),
    (
        "r5",
        [
            (0.24, 0.0),
            (0.12, 0.0),
            (0.72, 0.0),
            (0.16, 0.0),
            (0.54, 0.0),
            (0.30, 0.0),
        ],
    ),
    (
        "c1",
        [
            (0.04, 0.35),
            (0.34, 0.41),
            (0.10, 0.42),
            (0.18, -0.26),
            (0.11, -0.11),
            (-0.47, 0.22),
        ],
    ),
    (
        "c2",
        [
            (0.19, -0.33),
            (-0.43, 0.30),
            (-0.18, -0.02),
            (-0.37, 0.42),
            (-0.12, -0.10),
            (0.23, 0.38),
        ],
    ),
    (
        "c3",
        [
            (-0.19, -0.30),
            (-0.02, 0.39),
            (0.30, -0.15),
            (0.25, -0.22),
            (-0.13, 0.42),
            (0.24, 0.48),
        ],
    ),
    (
        "c4",
        [
            (0.06, 0.07),
            (0.30, -0.37),
            (-0.23, 0.08),
            (0.11, -0.13),
            (-0.22, 0.57),
            (0.07, -0.54),
        ],
    ),
    (
        "c5",
        [
            (0.07, 0.14),
            (0.48, -0.34),
            (-0.41, -0.18),
            (-0.41, -0.09),
            (-0.10, 0.32),
            (0.32, 0.18),
        ],
    ),
];

fn random_table_spec(label: &str) -> TargetSpec {
    let (_, row) = RANDOM_TABLE
        .iter()
        .find(|(l, _)| *l == label)
        .expect("label present in table");
    TargetSpec::Explicit {
        amplitudes: row.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
    }
}

fn eigenstate_spec(site: i32) -> TargetSpec {
    let lat = Lattice::new(5);
    let mut amplitudes = vec![ZERO; 6];
    amplitudes[lat.index_of(site).expect("reachable site")] = ONE;
    TargetSpec::Explicit { amplitudes }
}

/// The 32 five-step benchmark targets in reference row order (first column
/// top to bottom, then second column).
pub fn table1_catalog() -> Vec<CatalogEntry> {
    let mut rows = Vec::with_capacity(32);
    let eig = [
        ("|-5>", -5),
        ("|-3>", -3),
        ("|-1>", -1),
        ("|1>", 1),
        ("|3>", 3),
        ("|5>", 5),
    ];
    for (label, site) in eig {
        rows.push(CatalogEntry {
            label,
            spec: eigenstate_spec(site),
            reference_probability: 0.5,
        });
    }
    // (|-5> + c|5>)/√2 equals (|5> + e^{iφ}|-5>)/√2 up to a global phase
    // with e^{iφ} = 1/c.
    for (label, phi) in [
        ("(|-5>+|5>)/sqrt2", 0.0),
        ("(|-5>-|5>)/sqrt2", PI),
        ("(|-5>+i|5>)/sqrt2", -FRAC_PI_2),
        ("(|-5>-i|5>)/sqrt2", FRAC_PI_2),
    ] {
        rows.push(CatalogEntry {
            label,
            spec: TargetSpec::ExtremalCat { phi },
            reference_probability: 0.5,
        });
    }
    rows.push(CatalogEntry {
        label: "S1",
        spec: TargetSpec::Scs {
            two_s: 5,
            theta: FRAC_PI_2,
            phi: 0.0,
        },
        reference_probability: 0.15,
    });
    rows.push(CatalogEntry {
        label: "S2",
        spec: TargetSpec::Scs {
            two_s: 5,
            theta: -FRAC_PI_2,
            phi: 0.0,
        },
        reference_probability: 0.15,
    });
    for (label, sign, p) in [
        ("(S1+S2)/sqrt2", CatSign::Plus, 0.15),
        ("(S1-S2)/sqrt2", CatSign::Minus, 0.15),
        ("(S1-iS2)/sqrt2", CatSign::MinusI, 0.23),
        ("(S1+iS2)/sqrt2", CatSign::PlusI, 0.23),
    ] {
        rows.push(CatalogEntry {
            label,
            spec: TargetSpec::ScsSuperposition { sign },
            reference_probability: p,
        });
    }
    let qft_p = [0.14, 0.17, 0.17, 0.17, 0.17, 0.17];
    let qft_labels = ["QFT1", "QFT2", "QFT3", "QFT4", "QFT5", "QFT6"];
    for (k, (label, p)) in qft_labels.iter().zip(qft_p).enumerate() {
        rows.push(CatalogEntry {
            label,
            spec: TargetSpec::Fourier { k: k + 1 },
            reference_probability: p,
        });
    }
    let random_p = [0.22, 0.16, 0.17, 0.14, 0.19, 0.16, 0.29, 0.17, 0.16, 0.28];
    for ((label, _), p) in RANDOM_TABLE.iter().zip(random_p) {
        rows.push(CatalogEntry {
            label,
            spec: random_table_spec(label),
            reference_probability: p,
        });
    }
    rows
}
