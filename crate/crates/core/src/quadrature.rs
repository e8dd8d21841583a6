//! Adaptive Gauss-Kronrod (7/15) quadrature, real and complex.
//!
//! Global adaptive bisection: the interval with the largest error estimate
//! is split until the summed estimate meets `max(abs, rel * |I|)`. Error
//! estimates use the QUADPACK rescaling of |K15 - G7|.

use std::cell::RefCell;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be integrated: reals and complex numbers.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    truncation: f64,
}

// Returns (value, error, truncation part of the error before the
// round-off floor is applied).
fn gk15<T: Integrand, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.magnitude() * WGK[7];
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[j];
        abs_sum += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).magnitude() * WGK[7];
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let value = kronrod * half;
    let asc = asc * half.abs();
    let abs_sum = abs_sum * half.abs();
    let mut err = ((kronrod - gauss) * half).magnitude();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    let truncation = err;
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_sum);
    }
    (value, err, truncation)
}

impl Quadrature {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    /// Integrate `f` over `[a, b]`, returning the estimate and its error.
    pub fn integrate_estimate<T, F>(&self, mut f: F, a: f64, b: f64) -> Result<Estimate<T>>
    where
        T: Integrand,
        F: FnMut(f64) -> T,
    {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::NonFinite("integration limits"));
        }
        if a == b {
            return Ok(Estimate {
                value: T::zero(),
                error: 0.0,
                evaluations: 0,
            });
        }
        let (value, error, truncation) = gk15(&mut f, a, b);
        let mut segments = vec![Segment {
            a,
            b,
            value,
            error,
            truncation,
        }];
        let mut evaluations = 15;
        loop {
            let total = segments.iter().fold(T::zero(), |acc, s| acc + s.value);
            let total_err: f64 = segments.iter().map(|s| s.error).sum();
            if !total.magnitude().is_finite() {
                return Err(Error::NonFinite("integrand"));
            }
            let total_trunc: f64 = segments.iter().map(|s| s.truncation).sum();
            let target = self.abs_tol.max(self.rel_tol * total.magnitude());
            // Once only round-off remains (e.g. integrals that cancel to
            // zero), further bisection cannot help.
            if total_err <= target || total_trunc <= target {
                return Ok(Estimate {
                    value: total,
                    error: total_err,
                    evaluations,
                });
            }
            if segments.len() >= self.max_intervals {
                return Err(Error::QuadratureNotConverged {
                    estimate: total.magnitude(),
                    error: total_err,
                });
            }
            let (idx, _) = segments
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
                .expect("non-empty");
            let worst = segments.swap_remove(idx);
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
                // interval exhausted at machine precision
                return Err(Error::QuadratureNotConverged {
                    estimate: total.magnitude(),
                    error: total_err,
                });
            }
            let (v1, e1, t1) = gk15(&mut f, worst.a, mid);
            let (v2, e2, t2) = gk15(&mut f, mid, worst.b);
            evaluations += 30;
            segments.push(Segment {
                a: worst.a,
                b: mid,
                value: v1,
                error: e1,
                truncation: t1,
            });
            segments.push(Segment {
                a: mid,
                b: worst.b,
                value: v2,
                error: e2,
                truncation: t2,
            });
        }
    }

    pub fn integrate<T, F>(&self, f: F, a: f64, b: f64) -> Result<T>
    where
        T: Integrand,
        F: FnMut(f64) -> T,
    {
        self.integrate_estimate(f, a, b).map(|e| e.value)
    }

    /// Iterated integral over the rectangle `[ax, bx] x [ay, by]`;
    /// `f(x, y)`, with `y` innermost.
    pub fn integrate_2d<T, F>(&self, f: F, x: (f64, f64), y: (f64, f64)) -> Result<T>
    where
        T: Integrand,
        F: Fn(f64, f64) -> T,
    {
        let failure = RefCell::new(None);
        let outer = self.integrate(
            |xv| match self.integrate(|yv| f(xv, yv), y.0, y.1) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    T::zero()
                }
            },
            x.0,
            x.1,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        outer
    }

    /// Iterated integral over a box; `f(x, y, z)` with `z` innermost.
    pub fn integrate_3d<T, F>(&self, f: F, x: (f64, f64), y: (f64, f64), z: (f64, f64)) -> Result<T>
    where
        T: Integrand,
        F: Fn(f64, f64, f64) -> T,
    {
        let failure = RefCell::new(None);
        let outer = self.integrate(
            |xv| match self.integrate_2d(|yv, zv| f(xv, yv, zv), y, z) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    T::zero()
                }
            },
            x.0,
            x.1,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        outer
    }
}

/// Integrate with the default tolerances (rel 1e-10, abs 1e-14).
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    Quadrature::default().integrate(f, a, b)
}

pub fn integrate_complex<F: FnMut(f64) -> Complex64>(f: F, a: f64, b: f64) -> Result<Complex64> {
    Quadrature::default().integrate(f, a, b)
}

/// Composite Simpson rule on `n` panels (`n` rounded up to even).
pub fn simpson<T: Integrand, F: FnMut(f64) -> T>(mut f: F, a: f64, b: f64, n: usize) -> T {
    let n = (n.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + f(a + i as f64 * h) * w;
    }
    acc * (h / 3.0)
}

/// Simpson rule on pre-sampled, equally spaced values (odd length).
pub fn simpson_samples(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    assert!(
        n >= 3 && n % 2 == 1,
        "simpson_samples needs an odd number >= 3 of samples"
    );
    let mut acc = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}
