// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qwalk::measurement::{basis_probabilities, orthonormality_error};
use qwalk::photonic::{apply_qplate, decompose_coin, stack_matrix, QPlateParams};
use qwalk::targets::{gram_schmidt_basis, RandomKind, TargetSpec};
use qwalk::{evolve, project_coin, CoinKet, CoinMatrix, CoinParams, WalkerCoinState};

fn angle() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn coin() -> impl Strategy<Value = (f64, f64, f64)> {
    (angle(), angle(), angle())
}

fn coins(max: usize) -> impl Strategy<Value = Vec<CoinParams>> {
    prop::collection::vec(coin(), 1..=max).prop_map(|v| {
        v.into_iter()
            .map(|(t, x, z)| CoinParams::new(t, x, z).unwrap())
            .collect()
    })
}

fn ket() -> impl Strategy<Value = CoinKet> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("non-zero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
        .prop_map(|(a, b, c, d)| CoinKet::new(Complex64::new(a, b), Complex64::new(c, d)).unwrap())
}

/// Haar-random SU(2) from a uniform point on S³.
fn su2() -> impl Strategy<Value = CoinMatrix> {
    prop::array::uniform4(-1.0..1.0f64)
        .prop_filter("inside ball", |v| {
            let r = v.iter().map(|x| x * x).sum::<f64>();
            r > 1e-4 && r <= 1.0
        })
        .prop_map(|v| {
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let a = Complex64::new(v[0] / r, v[1] / r);
            let b = Complex64::new(v[2] / r, v[3] / r);
            CoinMatrix([[a, b], [-b.conj(), a.conj()]])
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn coin_is_special_unitary((t, x, z) in coin()) {
        let m = CoinParams::new(t, x, z).unwrap().matrix();
        prop_assert!(m.unitarity_error() < 1e-12);
        prop_assert!((m.det() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn normalization_keeps_matrix((t, x, z) in coin()) {
        let p = CoinParams::new(t, x, z).unwrap();
        prop_assert!((0.0..=PI / 2.0 + 1e-12).contains(&p.theta()));
        // matrix written out from the raw angles
        let (s, c) = t.sin_cos();
        let e = |phi: f64| Complex64::from_polar(1.0, phi);
        let raw = CoinMatrix([[e(x) * c, e(z) * s], [-e(-z) * s, e(-x) * c]]);
        prop_assert!(p.matrix().max_abs_diff(&raw) < 1e-12);
    }

    #[test]
    fn projection_is_complete(cs in coins(6), k in ket()) {
        let state = evolve(&WalkerCoinState::origin_plus(), &cs).unwrap();
        let p = |ket: &CoinKet| match project_coin(&state, ket) {
            Ok((_, p)) => p,
            Err(_) => 0.0,
        };
        prop_assert!((p(&k) + p(&k.orthogonal()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projected_state_is_normalized(cs in coins(6)) {
        let state = evolve(&WalkerCoinState::origin_plus(), &cs).unwrap();
        if let Ok((w, p)) = project_coin(&state, &CoinKet::plus()) {
            prop_assert!((w.norm_sqr() - 1.0).abs() < 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&p));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn waveplates_reconstruct_su2(u in su2()) {
        let stack = decompose_coin(&u).unwrap();
        prop_assert_eq!(stack.len(), 3);
        prop_assert!(stack.iter().all(|w| (0.0..PI).contains(&w.angle)));
        prop_assert!(stack_matrix(&stack).phase_insensitive_overlap(&u) >= 1.0 - 1e-9);
    }

    #[test]
    fn qplate_is_unitary(cs in coins(4), delta in 0.0..2.0 * PI, alpha0 in -PI..PI) {
        let state = evolve(&WalkerCoinState::origin_plus(), &cs).unwrap();
        let plate = QPlateParams::new(delta, alpha0, 1).unwrap();
        let out = apply_qplate(&state, &plate).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn target_text_round_trips(k in 1usize..=6, seed in any::<u64>(), phi in -PI..PI) {
        for spec in [
            TargetSpec::Fourier { k },
            TargetSpec::Random { random: RandomKind::Complex, seed },
            TargetSpec::ExtremalCat { phi },
        ] {
            let text = spec.to_string();
            let back: TargetSpec = text.parse().unwrap();
            prop_assert_eq!(back, spec);
        }
    }

    #[test]
    fn gram_schmidt_puts_target_first(seed in any::<u64>()) {
        let target = TargetSpec::Random { random: RandomKind::Complex, seed }.materialize(5).unwrap();
        let basis = gram_schmidt_basis(&target);
        prop_assert_eq!(basis.len(), 6);
        prop_assert!(orthonormality_error(&basis).unwrap() < 1e-12);
        let probs = basis_probabilities(&target, &basis).unwrap();
        prop_assert!((probs[0] - 1.0).abs() < 1e-12);
    }
}
