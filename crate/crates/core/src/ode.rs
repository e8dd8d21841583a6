//! Adaptive Dormand-Prince 5(4) integrator for small first-order systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rk45 {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for Rk45 {
    fn default() -> Self {
        Self {
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            max_steps: 1_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

impl Rk45 {
    /// Integrate `y' = f(t, y)` from `t0` to each time in `outputs`
    /// (ascending, all >= t0). Steps are clipped to land on output times.
    pub fn solve<F>(&self, f: F, t0: f64, y0: &[f64], outputs: &[f64]) -> Result<Vec<Vec<f64>>>
    where
        F: Fn(f64, &[f64]) -> Vec<f64>,
    {
        let n = y0.len();
        let mut t = t0;
        let mut y = y0.to_vec();
        let span = outputs.last().map(|&e| e - t0).unwrap_or(0.0);
        let mut h = if span > 0.0 { span * 1e-3 } else { 0.0 };
        let mut steps = 0usize;
        let mut out = Vec::with_capacity(outputs.len());
        for &target in outputs {
            if target < t {
                return Err(Error::Ode(format!("output time {target} precedes {t}")));
            }
            while t < target {
                if steps >= self.max_steps {
                    return Err(Error::Ode(format!("step budget exhausted at t = {t}")));
                }
                steps += 1;
                let hh = h.min(target - t);
                let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
                for s in 0..7 {
                    let ys: Vec<f64> = (0..n)
                        .map(|i| y[i] + hh * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>())
                        .collect();
                    k.push(f(t + C[s] * hh, &ys));
                }
                let mut err: f64 = 0.0;
                let mut y5 = vec![0.0; n];
                for i in 0..n {
                    let d5: f64 = (0..7).map(|s| B5[s] * k[s][i]).sum();
                    let d4: f64 = (0..7).map(|s| B4[s] * k[s][i]).sum();
                    y5[i] = y[i] + hh * d5;
                    let scale = self.abs_tol + self.rel_tol * y[i].abs().max(y5[i].abs());
                    err = err.max((hh * (d5 - d4)).abs() / scale);
                }
                if !err.is_finite() {
                    return Err(Error::Ode(format!("non-finite derivative near t = {t}")));
                }
                if err <= 1.0 {
                    t += hh;
                    y = y5;
                    if target - t < 1e-15 * target.abs().max(1.0) {
                        t = target;
                    }
                }
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = hh * factor;
                if h < 1e-14 * span.max(f64::MIN_POSITIVE) {
                    return Err(Error::Ode(format!("step size underflow at t = {t}")));
                }
            }
            out.push(y.clone());
        }
        Ok(out)
    }
}
