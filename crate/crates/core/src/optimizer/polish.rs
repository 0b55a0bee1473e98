// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! Quasi-Newton (BFGS) descent driven by finite-difference gradients.

pub struct PolishOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
}

/// Central-difference gradient of `f` at `x`.
pub fn central_gradient<F>(f: &mut F, x: &[f64], h: f64) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `f` from `x0` with BFGS and Armijo backtracking.
pub fn bfgs<F>(f: &mut F, x0: &[f64], h: f64, max_iterations: usize, f_floor: f64) -> PolishOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut g = central_gradient(f, &x, h);
    let mut hinv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut iterations = 0;

    while iterations < max_iterations && fx > f_floor {
        iterations += 1;
        let mut dir: Vec<f64> = hinv.iter().map(|row| -dot(row, &g)).collect();
        let mut slope = dot(&dir, &g);
        if slope >= 0.0 {
            // lost positive definiteness; restart from steepest descent
            for (i, row) in hinv.iter_mut().enumerate() {
                row.iter_mut()
                    .enumerate()
                    .for_each(|(j, v)| *v = if i == j { 1.0 } else { 0.0 });
            }
            dir = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }
        if slope.abs() < 1e-30 {
            break;
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let cand: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
            let fc = f(&cand);
            if fc <= fx + 1e-4 * step * slope {
                accepted = Some((cand, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fxn)) = accepted else { break };

        let gn = central_gradient(f, &xn, h);
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        let improvement = fx - fxn;
        x = xn;
        fx = fxn;
        g = gn;
        if sy > 1e-300 {
            let hy: Vec<f64> = hinv.iter().map(|row| dot(row, &y)).collect();
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            for i in 0..n {
                for j in 0..n {
                    hinv[i][j] += (1.0 + yhy * rho) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
        if improvement.abs() < 1e-18 && dot(&g, &g).sqrt() < 1e-12 {
            break;
        }
    }
    PolishOutcome { x, f: fx, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bfgs_on_rosenbrock() {
        let mut rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = bfgs(&mut rosen, &[-1.2, 1.0], 1e-6, 500, 0.0);
        assert!(out.f < 1e-12, "{}", out.f);
    }

    #[test]
    fn central_gradient_of_quadratic() {
        let mut f = |x: &[f64]| 3.0 * x[0] * x[0] + x[0] * x[1];
        let g = central_gradient(&mut f, &[1.0, 2.0], 1e-5);
        assert!((g[0] - 8.0).abs() < 1e-8);
        assert!((g[1] - 1.0).abs() < 1e-8);
    }
}
