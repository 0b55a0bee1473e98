// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! Simulated projective measurements and count-based fidelity estimates.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};
use crate::rng::stream_rng;
use crate::walk::WalkerState;

/// Orthonormality tolerance for measurement bases.
pub const BASIS_TOL: f64 = 1e-10;

/// Counts per basis element plus a sink bucket for probability not covered
/// by a partial basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementCounts {
    pub per_element: Vec<u64>,
    pub leftover: u64,
}

impl MeasurementCounts {
    pub fn total(&self) -> u64 {
        self.per_element.iter().sum::<u64>() + self.leftover
    }

    /// Bucket counts with the sink appended as the last entry.
    pub fn with_leftover(&self) -> Vec<u64> {
        let mut v = self.per_element.clone();
        v.push(self.leftover);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub value: f64,
    pub sigma: f64,
}

/// Largest deviation of the Gram matrix of `basis` from the identity.
pub fn orthonormality_error(basis: &[WalkerState]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate().skip(i) {
            let g = a.inner(b)?;
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g.re - expected).abs().max(g.im.abs()));
        }
    }
    Ok(worst)
}

/// Born probabilities `|⟨B_i|state⟩|²` for each basis element.
pub fn basis_probabilities(state: &WalkerState, basis: &[WalkerState]) -> Result<Vec<f64>> {
    basis.iter().map(|b| b.inner(state).map(|z| z.norm_sqr())).collect()
}

/// Multinomial draw of `shots` outcomes of measuring `state` in `basis`.
///
/// The draw is a chain of conditional binomials on a ChaCha8 stream seeded
/// with `seed`, so identical inputs give identical counts.
pub fn simulate_counts(state: &WalkerState, basis: &[WalkerState], shots: u64, seed: u64) -> Result<MeasurementCounts> {
    if shots == 0 {
        return Err(QwError::InvalidParameter("shots must be positive".into()));
    }
    if basis.is_empty() {
        return Err(QwError::InvalidParameter("empty measurement basis".into()));
    }
    let err = orthonormality_error(basis)?;
    if err > BASIS_TOL {
        return Err(QwError::NotOrthonormal(err));
    }
    let mut probs = basis_probabilities(state, basis)?;
    let covered: f64 = probs.iter().sum();
    let leftover_p = (1.0 - covered).max(0.0);
    probs.push(leftover_p);

    let mut rng = stream_rng(seed, 0);
    let draws = multinomial(&mut rng, shots, &probs);
    let (per_element, sink) = draws.split_at(basis.len());
    Ok(MeasurementCounts {
        per_element: per_element.to_vec(),
        leftover: sink[0],
    })
}

fn multinomial<R: Rng>(rng: &mut R, shots: u64, probs: &[f64]) -> Vec<u64> {
    let total_p: f64 = probs.iter().sum();
    let mut remaining = shots;
    let mut mass_left = total_p;
    let mut out = Vec::with_capacity(probs.len());
    for (i, &p) in probs.iter().enumerate() {
        if i + 1 == probs.len() {
            out.push(remaining);
            break;
        }
        let k = if remaining == 0 || p <= 0.0 {
            0
        } else if p >= mass_left {
            remaining
        } else {
            let q = (p / mass_left).clamp(0.0, 1.0);
            Binomial::new(remaining, q)
                .expect("probability clamped to [0, 1]")
                .sample(rng)
        };
        out.push(k);
        remaining -= k;
        mass_left -= p;
    }
    out
}

/// Target-bucket frequency and its Monte Carlo standard deviation under
/// independent Poisson resampling of every bucket.
pub fn estimate_fidelity_mc(
    counts: &[u64],
    target_index: usize,
    resamples: usize,
    seed: u64,
) -> Result<FidelityEstimate> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(QwError::EmptyCounts);
    }
    if target_index >= counts.len() {
        return Err(QwError::InvalidParameter(format!(
            "target index {target_index} out of range for {} buckets",
            counts.len()
        )));
    }
    if resamples < 2 {
        return Err(QwError::InvalidParameter("need at least two resamples".into()));
    }
    let value = counts[target_index] as f64 / total as f64;

    let mut rng = stream_rng(seed, 1);
    let poissons: Vec<Option<Poisson<f64>>> = counts
        .iter()
        .map(|&c| (c > 0).then(|| Poisson::new(c as f64).expect("positive rate")))
        .collect();
    let mut samples = Vec::with_capacity(resamples);
    while samples.len() < resamples {
        let mut t = 0.0;
        let mut sum = 0.0;
        for (i, dist) in poissons.iter().enumerate() {
            let k = dist.as_ref().map_or(0.0, |d| d.sample(&mut rng));
            if i == target_index {
                t = k;
            }
            sum += k;
        }
        if sum > 0.0 {
            samples.push(t / sum);
        }
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let var = samples.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
    Ok(FidelityEstimate {
        value,
        sigma: var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::Lattice;
    use num_complex::Complex64;

    fn computational(lat: Lattice) -> Vec<WalkerState> {
        lat.sites().map(|k| WalkerState::basis(lat, k).unwrap()).collect()
    }

    #[test]
    fn basis_state_lands_in_its_bucket() {
        let lat = Lattice::new(5);
        let basis = computational(lat);
        let c = simulate_counts(&basis[1], &basis, 1000, 3).unwrap();
        assert_eq!(c.per_element, vec![0, 1000, 0, 0, 0, 0]);
        assert_eq!(c.leftover, 0);
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let lat = Lattice::new(3);
        let state = WalkerState::from_amplitudes(
            lat,
            vec![
                Complex64::new(0.3, 0.1),
                Complex64::new(0.5, 0.0),
                Complex64::new(-0.2, 0.4),
                Complex64::new(0.1, -0.6),
            ],
        )
        .unwrap();
        let basis = computational(lat);
        let a = simulate_counts(&state, &basis, 5000, 77).unwrap();
        let b = simulate_counts(&state, &basis, 5000, 77).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total(), 5000);
    }

    #[test]
    fn partial_basis_uses_sink() {
        let lat = Lattice::new(1);
        let plus = WalkerState::from_amplitudes(lat, vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        let basis = vec![WalkerState::basis(lat, -1).unwrap()];
        let c = simulate_counts(&plus, &basis, 100_000, 5).unwrap();
        let f = c.per_element[0] as f64 / 100_000.0;
        assert!((f - 0.5).abs() < 0.01);
        assert_eq!(c.total(), 100_000);
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let lat = Lattice::new(1);
        let a = WalkerState::basis(lat, -1).unwrap();
        let b = WalkerState::from_amplitudes(lat, vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        assert!(matches!(
            simulate_counts(&a, &[a.clone(), b], 10, 0),
            Err(QwError::NotOrthonormal(_))
        ));
    }

    #[test]
    fn frequencies_within_three_sigma() {
        let lat = Lattice::new(3);
        let state = WalkerState::from_amplitudes(
            lat,
            vec![
                Complex64::new(0.1, 0.2),
                Complex64::new(0.7, 0.0),
                Complex64::new(0.0, 0.3),
                Complex64::new(0.4, -0.1),
            ],
        )
        .unwrap();
        let basis = computational(lat);
        let probs = basis_probabilities(&state, &basis).unwrap();
        let shots = 200_000u64;
        let c = simulate_counts(&state, &basis, shots, 11).unwrap();
        for (k, p) in c.per_element.iter().zip(&probs) {
            let sd = (shots as f64 * p * (1.0 - p)).sqrt();
            assert!((*k as f64 - shots as f64 * p).abs() <= 3.0 * sd + 1.0);
        }
    }

    #[test]
    fn all_counts_in_target_has_no_spread() {
        let est = estimate_fidelity_mc(&[500, 0, 0], 0, 200, 1).unwrap();
        assert_eq!(est.value, 1.0);
        assert!(est.sigma < 1e-12);
    }

    #[test]
    fn empty_counts_rejected() {
        assert!(matches!(
            estimate_fidelity_mc(&[0, 0], 0, 100, 1),
            Err(QwError::EmptyCounts)
        ));
    }

    #[test]
    fn sigma_scales_like_inverse_sqrt_shots() {
        let a = estimate_fidelity_mc(&[9000, 1000], 0, 4000, 9).unwrap();
        let b = estimate_fidelity_mc(&[18000, 2000], 0, 4000, 9).unwrap();
        let ratio = b.sigma / a.sigma;
        let expected = std::f64::consts::FRAC_1_SQRT_2;
        assert!((ratio - expected).abs() < 0.2 * expected, "ratio {ratio}");
        // binomial reference: sqrt(F(1-F)/N)
        let analytic = (0.9f64 * 0.1 / 10_000.0).sqrt();
        assert!((a.sigma - analytic).abs() < 0.1 * analytic);
    }
}
