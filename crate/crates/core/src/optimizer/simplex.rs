// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! Nelder–Mead minimization with dimension-adaptive coefficients.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Stop when the spread of simplex values falls below this.
    pub f_tol: f64,
    /// Stop when every vertex is within this distance of the best one.
    pub x_tol: f64,
    pub initial_step: f64,
}

#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
}

/// Minimizes `f` from `x0`; coefficients follow Gao & Han's adaptive scheme
/// so that the method keeps contracting in 15+ dimensions.
pub fn nelder_mead<F>(f: &mut F, x0: &[f64], opts: &SimplexOptions) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let nf = n as f64;
    let alpha = 1.0;
    let beta = 1.0 + 2.0 / nf;
    let gamma = 0.75 - 1.0 / (2.0 * nf);
    let delta = 1.0 - 1.0 / nf;

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut iterations = 0;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    while iterations < opts.max_iterations {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let size = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread <= opts.f_tol && size <= opts.x_tol {
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }
        let worst = &simplex[n];
        for i in 0..n {
            trial[i] = centroid[i] + alpha * (centroid[i] - worst[i]);
        }
        let fr = f(&trial);

        if fr < values[0] {
            for i in 0..n {
                trial2[i] = centroid[i] + beta * (trial[i] - centroid[i]);
            }
            let fe = f(&trial2);
            if fe < fr {
                simplex[n].copy_from_slice(&trial2);
                values[n] = fe;
            } else {
                simplex[n].copy_from_slice(&trial);
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n].copy_from_slice(&trial);
            values[n] = fr;
            continue;
        }
        // contraction, outside if the reflection improved on the worst
        let outside = fr < values[n];
        for i in 0..n {
            trial2[i] = if outside {
                centroid[i] + gamma * (trial[i] - centroid[i])
            } else {
                centroid[i] - gamma * (centroid[i] - simplex[n][i])
            };
        }
        let fc = f(&trial2);
        if (outside && fc <= fr) || (!outside && fc < values[n]) {
            simplex[n].copy_from_slice(&trial2);
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].clone();
        for j in 1..=n {
            for i in 0..n {
                simplex[j][i] = best[i] + delta * (simplex[j][i] - best[i]);
            }
            values[j] = f(&simplex[j]);
        }
    }

    let (best, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("simplex is non-empty");
    SimplexOutcome {
        x: simplex[best].clone(),
        f: values[best],
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let mut rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = nelder_mead(
            &mut rosen,
            &[-1.2, 1.0],
            &SimplexOptions {
                max_iterations: 5000,
                f_tol: 1e-14,
                x_tol: 1e-10,
                initial_step: 0.5,
            },
        );
        assert!((out.x[0] - 1.0).abs() < 1e-5, "{:?}", out.x);
        assert!((out.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn minimizes_quadratic_in_fifteen_dims() {
        let mut quad = |x: &[f64]| {
            x.iter()
                .enumerate()
                .map(|(i, v)| (i as f64 + 1.0) * (v - 0.1 * i as f64).powi(2))
                .sum::<f64>()
        };
        let out = nelder_mead(
            &mut quad,
            &[1.0; 15],
            &SimplexOptions {
                max_iterations: 20_000,
                f_tol: 1e-16,
                x_tol: 1e-9,
                initial_step: 0.5,
            },
        );
        assert!(out.f < 1e-10, "{}", out.f);
    }
}
