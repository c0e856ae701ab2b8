//! Small derivative-free minimizers: Nelder–Mead simplex and golden-section search.

const PHI_RESP: f64 = 0.381_966_011_250_105_15; // 2 − golden ratio

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
    pub max_iterations: usize,
    /// Stop once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            max_iterations: 2000,
            diameter_tol: 1e-11,
        }
    }
}

/// Standard Nelder–Mead (reflection 1, expansion 2, contraction ½, shrink ½).
pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let fx = eval(&x);
        simplex.push((x, fx));
    }

    let lerp = |from: &[f64], to: &[f64], t: f64| -> Vec<f64> {
        from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect()
    };

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));

        let best = &simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(best)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }

        let (worst, f_worst) = simplex[n].clone();
        let f_best = simplex[0].1;
        let f_second = simplex[n - 1].1;

        let reflected = lerp(&centroid, &worst, -1.0);
        let f_r = eval(&reflected);

        if f_r < f_best {
            let expanded = lerp(&centroid, &worst, -2.0);
            let f_e = eval(&expanded);
            simplex[n] = if f_e < f_r {
                (expanded, f_e)
            } else {
                (reflected, f_r)
            };
        } else if f_r < f_second {
            simplex[n] = (reflected, f_r);
        } else {
            let (contracted, f_c) = if f_r < f_worst {
                let c = lerp(&centroid, &reflected, 0.5);
                let fc = eval(&c);
                (c, fc)
            } else {
                let c = lerp(&centroid, &worst, 0.5);
                let fc = eval(&c);
                (c, fc)
            };
            if f_c < f_worst.min(f_r) {
                simplex[n] = (contracted, f_c);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x = lerp(&best, &vertex.0, 0.5);
                    let fx = eval(&x);
                    *vertex = (x, fx);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    NelderMeadResult {
        x,
        fx,
        iterations,
        converged,
    }
}

/// Nelder–Mead repeated from its own best point with a fresh simplex of edge
/// `restart_step` until a restart stops improving the minimum.
///
/// A collapsed simplex can stall on the kink of a non-smooth objective; the
/// restart re-expands it. `converged` reports whether any run met the
/// diameter criterion.
pub fn nelder_mead_restarted<F>(
    f: F,
    x0: &[f64],
    opts: &NelderMeadOptions,
    restart_step: f64,
    max_runs: usize,
) -> NelderMeadResult
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = nelder_mead(&f, x0, opts);
    let mut converged = best.converged;
    let mut iterations = best.iterations;
    let restart = NelderMeadOptions {
        initial_step: restart_step,
        ..*opts
    };
    for _ in 1..max_runs {
        let r = nelder_mead(&f, &best.x, &restart);
        converged |= r.converged;
        iterations += r.iterations;
        let improvement = best.fx - r.fx;
        if r.fx <= best.fx {
            best = r;
        }
        if improvement <= 1e-15 {
            break;
        }
    }
    best.converged = converged;
    best.iterations = iterations;
    best
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Returns `(x_min, f_min)`. For a unimodal `f` the bracket shrinks until it
/// is narrower than `tol`; otherwise a local minimum or an endpoint is found.
pub fn golden_section_minimize<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    if hi < lo {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut x1 = lo + PHI_RESP * (hi - lo);
    let mut x2 = hi - PHI_RESP * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    // ~0.618^k shrink; the cap only guards against tol below float spacing.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = lo + PHI_RESP * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = hi - PHI_RESP * (hi - lo);
            f2 = f(x2);
        }
    }

    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    // Endpoints matter when the minimum sits on the bracket edge.
    for x in [lo, hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}
