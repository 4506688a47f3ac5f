//! Nelder-Mead downhill simplex for small unconstrained problems.

/// Stop when every vertex lies within this infinity-norm distance of the best one.
pub const SIMPLEX_DIAMETER_TOL: f64 = 1e-9;

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub max_iterations: usize,
    /// Stop once `f(worst) - f(best)` over the simplex falls below this.
    pub value_tol: f64,
    /// Edge length of the axis-aligned starting simplex.
    pub step: f64,
}

/// Minimizes `f` starting from `x0`. The returned value is never worse than `f(x0)`.
pub fn minimize<F>(mut f: F, x0: &[f64], settings: Settings) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for k in 0..dim {
        let mut x = x0.to_vec();
        x[k] += settings.step;
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    // stable sort keeps the earlier vertex ahead on ties, so x0 wins ties with its neighbours
    let order = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    order(&mut simplex);

    while iterations < settings.max_iterations && dim > 0 {
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        let spread = worst - best;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread.abs() < settings.value_tol || diameter < SIMPLEX_DIAMETER_TOL {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(REFLECT);
        let fr = eval(&xr);
        let second_worst = simplex[dim - 1].1;

        if fr < best {
            let xe = along(REFLECT * EXPAND);
            let fe = eval(&xe);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < second_worst {
            simplex[dim] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst {
                let xc = along(REFLECT * CONTRACT);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(-CONTRACT);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < worst.min(fr) {
                simplex[dim] = (xc, fc);
            } else {
                let x_best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = x_best
                        .iter()
                        .zip(&vertex.0)
                        .map(|(b, v)| b + SHRINK * (v - b))
                        .collect();
                    let v = eval(&x);
                    *vertex = (x, v);
                }
            }
        }
        order(&mut simplex);
    }

    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, evaluations, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> Settings {
        Settings { max_iterations: 5000, value_tol: 1e-14, step: 0.5 }
    }

    #[test]
    fn quadratic_bowl() {
        let m = minimize(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0], settings());
        assert!((m.x[0] - 1.0).abs() < 1e-5, "{:?}", m);
        assert!((m.x[1] + 2.0).abs() < 1e-5, "{:?}", m);
        assert!(m.value < 1e-10);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let m = minimize(f, &[-1.2, 1.0], settings());
        assert!((m.x[0] - 1.0).abs() < 1e-3, "{:?}", m);
        assert!((m.x[1] - 1.0).abs() < 1e-3, "{:?}", m);
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64]| (x[0] * 3.0).sin() + (x[1] * 5.0).cos() + 0.1 * x[2];
        let start = [0.3, -1.1, 0.7];
        let m = minimize(f, &start, Settings { max_iterations: 7, ..settings() });
        assert!(m.value <= f(&start));
        assert!(m.iterations <= 7);
    }

    #[test]
    fn flat_function_stops_immediately() {
        let m = minimize(|_| 0.0, &[1.0, 2.0], settings());
        assert_eq!(m.iterations, 0);
        assert_eq!(m.evaluations, 3);
        assert_eq!(m.x, vec![1.0, 2.0]);
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| (x[0] - 0.2).abs() + (x[1] * x[0]).cos();
        let a = minimize(f, &[0.0, 0.0], settings());
        let b = minimize(f, &[0.0, 0.0], settings());
        assert_eq!(a, b);
    }
}
