//! Nelder-Mead simplex minimization with an evaluation budget.

/// Result of one simplex run.
#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Initial edge length along each axis.
    pub step: f64,
    /// Stop once the spread of values over the simplex drops below this.
    pub f_tol: f64,
    pub max_evaluations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { step: 0.5, f_tol: 1e-12, max_evaluations: 2000 }
    }
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `x0`. Non-finite values are treated as `+inf`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: SimplexOptions) -> Minimum {
    let dim = x0.len();
    let mut evaluations = 0usize;
    let cap = opts.max_evaluations.max(1);
    let mut eval = |x: &[f64], count: &mut usize| {
        if *count >= cap {
            return f64::INFINITY;
        }
        *count += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = eval(x0, &mut evaluations);
    simplex.push((x0.to_vec(), v0));
    if dim == 0 || opts.max_evaluations <= 1 {
        return Minimum { x: x0.to_vec(), value: v0, evaluations };
    }
    for i in 0..dim {
        if evaluations >= opts.max_evaluations {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += opts.step;
        let v = eval(&x, &mut evaluations);
        simplex.push((x, v));
    }

    while evaluations < opts.max_evaluations && simplex.len() == dim + 1 {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        if (worst - best).abs() <= opts.f_tol * (1.0 + best.abs()) {
            break;
        }
        let centroid: Vec<f64> = (0..dim).map(|j| simplex[..dim].iter().map(|p| p.0[j]).sum::<f64>() / dim as f64).collect();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[dim].0).map(|(c, w)| c + t * (c - w)).collect()
        };
        let xr = along(REFLECT);
        let fr = eval(&xr, &mut evaluations);
        if fr < best {
            let xe = along(EXPAND);
            let fe = eval(&xe, &mut evaluations);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst {
                let xc = along(CONTRACT);
                let fc = eval(&xc, &mut evaluations);
                (xc, fc)
            } else {
                let xc = along(-CONTRACT);
                let fc = eval(&xc, &mut evaluations);
                (xc, fc)
            };
            if fc < fr.min(worst) {
                simplex[dim] = (xc, fc);
            } else {
                let x_best = simplex[0].0.clone();
                for p in simplex.iter_mut().skip(1) {
                    if evaluations >= opts.max_evaluations {
                        break;
                    }
                    let x: Vec<f64> = x_best.iter().zip(&p.0).map(|(b, x)| b + SHRINK * (x - b)).collect();
                    let v = eval(&x, &mut evaluations);
                    *p = (x, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, evaluations }
}
