//! Nelder–Mead maximization with simplex restarts around the incumbent.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub iterations: usize,
    pub step_init: f64,
    pub step_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub best: Vec<f64>,
    pub best_value: f64,
    /// Best value so far after each iteration.
    pub history: Vec<f64>,
}

fn replace(simplex: &mut [Vec<f64>], values: &mut [f64], i: usize, p: Vec<f64>, v: f64) {
    simplex[i] = p;
    values[i] = v;
}

/// Maximizes `f` from `start`. When the simplex collapses below `step_tol`
/// before the iteration budget is used, it is rebuilt around the best point
/// with half the previous step, until the step itself drops below
/// `step_tol`. NaN values count as `-inf`.
pub fn maximize<F>(mut f: F, start: &[f64], opts: &SimplexOptions) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let mut eval = |p: &[f64]| {
        let v = f(p);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let n = start.len();
    let mut best = start.to_vec();
    let mut best_value = eval(start);
    let mut history = Vec::with_capacity(opts.iterations);
    if n == 0 {
        history.resize(opts.iterations, best_value);
        return SimplexOutcome {
            best,
            best_value,
            history,
        };
    }

    let mut step = opts.step_init;
    let mut used = 0;
    while used < opts.iterations && step >= opts.step_tol {
        let mut simplex = vec![best.clone()];
        let mut values = vec![best_value];
        for i in 0..n {
            let mut p = best.clone();
            p[i] += step;
            values.push(eval(&p));
            simplex.push(p);
        }

        while used < opts.iterations {
            used += 1;
            // Sort descending by value; stable so ties keep vertex order.
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            if values[0] > best_value {
                best_value = values[0];
                best.clone_from(&simplex[0]);
            }
            history.push(best_value);

            let diameter = simplex[1..]
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(&simplex[0])
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if diameter < opts.step_tol {
                break;
            }

            let mut centroid = vec![0.0; n];
            for p in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(p) {
                    *c += x / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n])
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let reflected = along(1.0);
            let fr = eval(&reflected);
            if fr > values[0] {
                let expanded = along(2.0);
                let fe = eval(&expanded);
                if fe > fr {
                    replace(&mut simplex, &mut values, n, expanded, fe);
                } else {
                    replace(&mut simplex, &mut values, n, reflected, fr);
                }
                continue;
            }
            if fr > values[n - 1] {
                replace(&mut simplex, &mut values, n, reflected, fr);
                continue;
            }
            let (candidate, threshold) = if fr > values[n] {
                (along(0.5), fr)
            } else {
                (along(-0.5), values[n])
            };
            let fc = eval(&candidate);
            if fc > threshold {
                replace(&mut simplex, &mut values, n, candidate, fc);
                continue;
            }
            // Shrink toward the best vertex.
            for i in 1..=n {
                let p: Vec<f64> = simplex[i]
                    .iter()
                    .zip(&simplex[0])
                    .map(|(x, b)| b + 0.5 * (x - b))
                    .collect();
                values[i] = eval(&p);
                simplex[i] = p;
            }
        }
        step *= 0.5;
    }
    SimplexOutcome {
        best,
        best_value,
        history,
    }
}
