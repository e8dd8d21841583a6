//! Derivative-free minimisation and scalar root finding.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub initial_step: f64,
    pub f_tol: f64,
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            initial_step: 0.5,
            f_tol: 1e-12,
            x_tol: 1e-10,
            max_iter: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl NelderMead {
    /// Minimise `f` starting from `x0`. Non-finite objective values are
    /// treated as +infinity, so infeasible regions simply repel the simplex.
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, mut f: F, x0: &[f64]) -> Minimum {
        let n = x0.len();
        let mut eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        if n == 0 {
            let v = eval(x0);
            return Minimum {
                x: vec![],
                f: v,
                iterations: 0,
                converged: true,
            };
        }
        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        simplex.push(x0.to_vec());
        for i in 0..n {
            let mut p = x0.to_vec();
            let step = if p[i] != 0.0 {
                self.initial_step * p[i].abs().max(1.0)
            } else {
                self.initial_step
            };
            p[i] += step;
            simplex.push(p);
        }
        let mut values: Vec<f64> = simplex.iter().map(|p| eval(p)).collect();

        let (alpha, gamma, rho, shrink) = (1.0, 2.0, 0.5, 0.5);
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iter {
            iterations += 1;
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            let f_spread = (values[n] - values[0]).abs();
            let x_spread = simplex[1..]
                .iter()
                .flat_map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if values[0].is_finite()
                && f_spread <= self.f_tol * values[0].abs().max(1e-300) + self.f_tol * 1e-3
                && x_spread <= self.x_tol
            {
                converged = true;
                break;
            }

            let mut centroid = vec![0.0; n];
            for p in &simplex[..n] {
                for (c, v) in centroid.iter_mut().zip(p) {
                    *c += v / n as f64;
                }
            }
            let along =
                |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (c - w)).collect() };

            let xr = along(alpha);
            let fr = eval(&xr);
            if fr < values[0] {
                let xe = along(gamma);
                let fe = eval(&xe);
                if fe < fr {
                    simplex[n] = xe;
                    values[n] = fe;
                } else {
                    simplex[n] = xr;
                    values[n] = fr;
                }
                continue;
            }
            if fr < values[n - 1] {
                simplex[n] = xr;
                values[n] = fr;
                continue;
            }
            let (xc, fc) = if fr < values[n] {
                let xc = along(rho * alpha);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(-rho);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < values[n].min(fr) {
                simplex[n] = xc;
                values[n] = fc;
                continue;
            }
            let best = simplex[0].clone();
            for i in 1..=n {
                for (v, b) in simplex[i].iter_mut().zip(&best) {
                    *v = b + shrink * (*v - b);
                }
                values[i] = eval(&simplex[i]);
            }
        }
        let (best, _) = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty simplex");
        Minimum {
            x: simplex[best].clone(),
            f: values[best],
            iterations,
            converged,
        }
    }
}

/// Bisection on a sign-changing bracket, to `rel_tol` relative width.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if !(flo.is_finite() && fhi.is_finite()) {
        return Err(Error::NonFinite("bisect bracket"));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidParameter {
            name: "bracket",
            reason: format!("no sign change on [{lo}, {hi}]"),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= rel_tol * mid.abs().max(f64::MIN_POSITIVE) {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// All sign changes of `f` on a uniform grid of `n` cells, each refined by
/// bisection.
pub fn find_roots<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize, rel_tol: f64) -> Vec<f64> {
    let h = (b - a) / n as f64;
    let mut roots = Vec::new();
    let mut x_prev = a;
    let mut f_prev = f(a);
    for i in 1..=n {
        let x = if i == n { b } else { a + i as f64 * h };
        let fx = f(x);
        if f_prev == 0.0 {
            roots.push(x_prev);
        } else if fx != 0.0 && fx.signum() != f_prev.signum() && fx.is_finite() && f_prev.is_finite() {
            if let Ok(r) = bisect(&mut f, x_prev, x, rel_tol) {
                roots.push(r);
            }
        }
        x_prev = x;
        f_prev = fx;
    }
    if f_prev == 0.0 {
        roots.push(b);
    }
    roots
}

/// Golden-section search for a minimum of a unimodal function.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
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
    0.5 * (a + b)
}
