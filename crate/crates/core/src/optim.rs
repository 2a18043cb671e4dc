// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Derivative-free local minimization (Nelder-Mead simplex).

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    /// Edge length of the initial simplex along each coordinate.
    pub step: f64,
    /// Stop when the spread of function values over the simplex drops below this.
    pub ftol: f64,
    pub max_evals: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            step: 0.1,
            ftol: 1e-12,
            max_evals: 4000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

impl NelderMead {
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, mut f: F, x0: &[f64]) -> Minimum {
        let n = x0.len();
        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        simplex.push(x0.to_vec());
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += self.step;
            simplex.push(x);
        }
        let mut values: Vec<f64> = simplex.iter().map(|x| f(x)).collect();
        let mut evals = n + 1;

        let mut order: Vec<usize> = (0..=n).collect();
        let mut centroid = vec![0.0; n];
        let mut trial = vec![0.0; n];
        let mut trial2 = vec![0.0; n];

        while evals < self.max_evals {
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            let (best, worst, second) = (order[0], order[n], order[n - 1]);
            if (values[worst] - values[best]).abs() <= self.ftol {
                break;
            }

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for &i in &order[..n] {
                for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                    *c += x / n as f64;
                }
            }
            let along = |t: f64, out: &mut Vec<f64>, worst: &[f64], centroid: &[f64]| {
                for ((o, c), w) in out.iter_mut().zip(centroid).zip(worst) {
                    *o = c + t * (w - c);
                }
            };

            along(-1.0, &mut trial, &simplex[worst], &centroid);
            let fr = f(&trial);
            evals += 1;

            if fr < values[best] {
                along(-2.0, &mut trial2, &simplex[worst], &centroid);
                let fe = f(&trial2);
                evals += 1;
                if fe < fr {
                    simplex[worst].copy_from_slice(&trial2);
                    values[worst] = fe;
                } else {
                    simplex[worst].copy_from_slice(&trial);
                    values[worst] = fr;
                }
            } else if fr < values[second] {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = fr;
            } else {
                let t = if fr < values[worst] { -0.5 } else { 0.5 };
                along(t, &mut trial2, &simplex[worst], &centroid);
                let fc = f(&trial2);
                evals += 1;
                if fc < values[worst].min(fr) {
                    simplex[worst].copy_from_slice(&trial2);
                    values[worst] = fc;
                } else {
                    // shrink towards the best vertex
                    let anchor = simplex[best].clone();
                    for &i in &order[1..] {
                        for (x, a) in simplex[i].iter_mut().zip(&anchor) {
                            *x = a + 0.5 * (*x - a);
                        }
                        values[i] = f(&simplex[i]);
                        evals += 1;
                    }
                }
            }
        }

        let best = (0..=n)
            .min_by(|&a, &b| values[a].total_cmp(&values[b]))
            .unwrap_or(0);
        Minimum {
            x: simplex.swap_remove(best),
            value: values[best],
            evals,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let nm = NelderMead {
            step: 0.5,
            ftol: 1e-20,
            max_evals: 20_000,
        };
        let m = nm.minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
        );
        assert!((m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn respects_evaluation_budget() {
        let nm = NelderMead {
            max_evals: 50,
            ..NelderMead::default()
        };
        let m = nm.minimize(|x| x.iter().map(|v| v.sin().powi(2) + v * v).sum(), &[3.0; 6]);
        assert!(m.evals <= 50 + 7);
    }
}
