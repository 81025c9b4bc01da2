//! Derivative-free minimization by the Nelder–Mead simplex method with
//! dimension-adaptive coefficients.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Stop when the spread of simplex values falls below this.
    pub f_tol: f64,
    /// Stop when the simplex diameter falls below this.
    pub x_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 2000,
            initial_step: 0.05,
            f_tol: 1e-12,
            x_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0` with at most `max_evals` calls.
/// Non-finite values are treated as `+∞`.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: &NelderMeadOptions,
) -> NelderMeadResult {
    let n = x0.len();
    let mut evals = 0usize;
    let budget = opts.max_evals.max(1);
    let mut eval = |x: &[f64], evals: &mut usize| {
        if *evals >= budget {
            return f64::INFINITY;
        }
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    if n == 0 {
        let value = eval(x0, &mut evals);
        return NelderMeadResult {
            x: Vec::new(),
            value,
            evals,
            converged: true,
        };
    }

    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();
    let mut converged = false;

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    while evals < budget {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (spread.is_finite() && spread <= opts.f_tol) || diameter <= opts.x_tol {
            converged = true;
            break;
        }

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
        let fr = eval(&trial, &mut evals);

        if fr < values[0] {
            for i in 0..n {
                trial2[i] = centroid[i] + beta * (trial[i] - centroid[i]);
            }
            let fe = eval(&trial2, &mut evals);
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
        let outside = fr < values[n];
        for i in 0..n {
            trial2[i] = if outside {
                centroid[i] + gamma * (trial[i] - centroid[i])
            } else {
                centroid[i] - gamma * (centroid[i] - worst[i])
            };
        }
        let fc = eval(&trial2, &mut evals);
        if fc < fr.min(values[n]) {
            simplex[n].copy_from_slice(&trial2);
            values[n] = fc;
            continue;
        }
        for j in 1..=n {
            for i in 0..n {
                simplex[j][i] = simplex[0][i] + delta * (simplex[j][i] - simplex[0][i]);
            }
            values[j] = eval(&simplex[j], &mut evals);
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)))
        .unwrap_or(0);
    NelderMeadResult {
        x: simplex[best].clone(),
        value: values[best],
        evals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum() {
        let r = nelder_mead(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &NelderMeadOptions {
                initial_step: 0.5,
                ..Default::default()
            },
        );
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] + 2.0).abs() < 1e-5);
        assert!(r.evals <= 2000);
    }

    #[test]
    fn rosenbrock() {
        let r = nelder_mead(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &NelderMeadOptions {
                max_evals: 5000,
                initial_step: 0.5,
                ..Default::default()
            },
        );
        assert!(r.value < 1e-8, "{r:?}");
    }

    #[test]
    fn zero_dimensional_problem_is_a_single_evaluation() {
        let r = nelder_mead(|_| 3.0, &[], &NelderMeadOptions::default());
        assert_eq!((r.value, r.evals), (3.0, 1));
    }

    #[test]
    fn infinite_values_are_avoided() {
        let r = nelder_mead(
            |x| if x[0] < 0.0 { f64::NAN } else { (x[0] - 0.3).powi(2) },
            &[0.5],
            &NelderMeadOptions::default(),
        );
        assert!((r.x[0] - 0.3).abs() < 1e-5);
    }

    #[test]
    fn respects_budget() {
        let r = nelder_mead(
            |x| x.iter().map(|v| v.abs()).sum(),
            &[1.0; 10],
            &NelderMeadOptions {
                max_evals: 100,
                ..Default::default()
            },
        );
        assert!(r.evals <= 100);
    }
}
