//! Derivative-free local search used by every measurement-basis optimization.

/// Adaptive Nelder-Mead (dimension-dependent coefficients) with restarts
/// from the incumbent whenever the simplex collapses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    /// Converged once `max_i |f_i − f_best|` across the simplex is below this.
    pub f_tol: f64,
    pub max_evals: usize,
    pub initial_step: f64,
    /// Fresh simplices built around the incumbent after convergence. A
    /// restart that improves by less than `f_tol` ends the search.
    pub max_restarts: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self { f_tol: 1e-9, max_evals: 50_000, initial_step: 0.5, max_restarts: 6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn minimize<F>(&self, f: F, x0: &[f64]) -> Minimum
    where
        F: Fn(&[f64]) -> f64,
    {
        let mut evals = 0usize;
        let mut counted = |x: &[f64]| {
            evals += 1;
            let v = f(x);
            if v.is_nan() { f64::INFINITY } else { v }
        };
        let mut best_x = x0.to_vec();
        let mut best_f = counted(&best_x);
        let mut step = self.initial_step;
        let mut converged = false;
        let mut budget_left = self.max_evals.saturating_sub(1);
        for _ in 0..=self.max_restarts {
            if budget_left == 0 {
                break;
            }
            let (x, fx, used, conv) = self.run(&mut counted, &best_x, best_f, step, budget_left);
            budget_left = budget_left.saturating_sub(used);
            let improvement = best_f - fx;
            if fx < best_f {
                best_f = fx;
                best_x = x;
            }
            converged = conv;
            if !conv || improvement < self.f_tol {
                break;
            }
            step = (step * 0.5).max(1e-3);
        }
        Minimum { x: best_x, f: best_f, evals, converged }
    }

    fn run<F>(&self, f: &mut F, x0: &[f64], f0: f64, step: f64, budget: usize) -> (Vec<f64>, f64, usize, bool)
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = x0.len();
        if n == 0 {
            return (Vec::new(), f0, 0, true);
        }
        let nf = n as f64;
        let (alpha, gamma, rho, sigma) =
            (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);
        let mut used = 0usize;
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), f0));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += step;
            let fx = f(&x);
            used += 1;
            simplex.push((x, fx));
        }
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex.iter().map(|s| (s.1 - simplex[0].1).abs()).fold(0.0, f64::max);
            if spread < self.f_tol {
                let (x, fx) = simplex.swap_remove(0);
                return (x, fx, used, true);
            }
            if used + 2 > budget {
                let (x, fx) = simplex.swap_remove(0);
                return (x, fx, used, false);
            }
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / nf;
                }
            }
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> {
                centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect()
            };
            let xr = along(alpha);
            let fr = f(&xr);
            used += 1;
            if fr < simplex[0].1 {
                let xe = along(gamma);
                let fe = f(&xe);
                used += 1;
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst.1 {
                let xc = along(alpha * rho);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = along(-rho);
                let fc = f(&xc);
                (xc, fc)
            };
            used += 1;
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
                continue;
            }
            let best = simplex[0].0.clone();
            for s in simplex.iter_mut().skip(1) {
                for (xi, bi) in s.0.iter_mut().zip(&best) {
                    *xi = bi + sigma * (*xi - bi);
                }
                s.1 = f(&s.0);
                used += 1;
            }
        }
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
/// Returns the abscissa and value of the best point seen.
pub fn golden_section_max<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd { (c, fc) } else { (d, fd) }
}
