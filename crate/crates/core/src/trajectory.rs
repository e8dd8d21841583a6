//! The radiation-minimising closing trajectory.
//!
//! A quadrupole Q(t) = (2/3) m x(t)^2 closes from x0 to 0 in time T. With
//! x = x0 xi(t/T) the radiated energy is
//! E = 4 G dQ^2 / (5 c^5 T^5) * S, where
//! S = int_0^1 (xi xi''' + 3 xi' xi'')^2 dtau = 1/4 int_0^1 (P''')^2 dtau
//! and P = xi^2. All integrals here go through P, which stays polynomial
//! and smooth up to tau = 1 where xi itself has a square-root zero.
//!
//! The candidate family is P_a = (1 - tau)^3 (1 + 3 tau + (6 + a) tau^2),
//! minimised at a = -10/3 with S = 80.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{self, Error, Result};
use crate::optimize::{find_roots, golden_section, NelderMead};
use crate::polynomial::Polynomial;
use crate::quadrature::{integrate, Quadrature};
use crate::units::{Constants, Dimension, PhysicalQuantity};

/// Minimising family parameter, -60/18.
pub const A_OPT: f64 = -10.0 / 3.0;
/// Smallest admissible family parameter.
pub const A_MIN: f64 = -10.0;
/// Minimum of the action functional.
pub const S_MIN: f64 = 80.0;

const BOUNDARY_TOL: f64 = 1e-8;
const SCAN_POINTS: usize = 10_000;

/// Anything that can report xi^2 and its first three derivatives on [0, 1].
pub trait SquaredProfile {
    fn p(&self, tau: f64) -> f64;
    fn p1(&self, tau: f64) -> f64;
    fn p2(&self, tau: f64) -> f64;
    fn p3(&self, tau: f64) -> f64;

    fn xi(&self, tau: f64) -> f64 {
        self.p(tau).max(0.0).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialProfile {
    p: [Polynomial; 4],
}

impl PolynomialProfile {
    pub fn new(p: Polynomial) -> Self {
        let p1 = p.derivative();
        let p2 = p1.derivative();
        let p3 = p2.derivative();
        Self { p: [p, p1, p2, p3] }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.p[0]
    }
}

impl SquaredProfile for PolynomialProfile {
    fn p(&self, tau: f64) -> f64 {
        self.p[0].eval(tau)
    }
    fn p1(&self, tau: f64) -> f64 {
        self.p[1].eval(tau)
    }
    fn p2(&self, tau: f64) -> f64 {
        self.p[2].eval(tau)
    }
    fn p3(&self, tau: f64) -> f64 {
        self.p[3].eval(tau)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryFamilyParam {
    a: f64,
}

impl TrajectoryFamilyParam {
    pub fn new(a: f64) -> Result<Self> {
        error::finite("a", a)?;
        if !is_admissible(a) {
            return Err(Error::InadmissibleTrajectory(a));
        }
        Ok(Self { a })
    }

    pub fn optimal() -> Self {
        Self { a: A_OPT }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Coefficients a0..a5 of P_a.
    pub fn coefficients(&self) -> [f64; 6] {
        let a = self.a;
        [1.0, 0.0, a, -10.0 - 3.0 * a, 15.0 + 3.0 * a, -6.0 - a]
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(self.coefficients().to_vec())
    }

    /// The quadratic cofactor q with P_a = (1 - tau)^3 q.
    fn q(&self, tau: f64) -> f64 {
        1.0 + 3.0 * tau + (6.0 + self.a) * tau * tau
    }

    fn q1(&self, tau: f64) -> f64 {
        3.0 + 2.0 * (6.0 + self.a) * tau
    }

    /// xi'(tau) in regularised form, finite on all of [0, 1].
    pub fn xi_dot(&self, tau: f64) -> f64 {
        let r = self.r(tau);
        (1.0 - tau).max(0.0).sqrt() * r / (2.0 * self.q(tau).sqrt())
    }

    // (1 - tau) q' - 3 q
    fn r(&self, tau: f64) -> f64 {
        2.0 * self.a * tau - 5.0 * (6.0 + self.a) * tau * tau
    }

    fn r1(&self, tau: f64) -> f64 {
        2.0 * self.a - 10.0 * (6.0 + self.a) * tau
    }

    /// Numerator of xi''; its roots in (0, 1) are the speed extrema.
    fn speed_extremum_poly(&self, tau: f64) -> f64 {
        let (r, r1, q, q1) = (self.r(tau), self.r1(tau), self.q(tau), self.q1(tau));
        (1.0 - tau) * (r1 * q - 0.5 * r * q1) - 0.5 * r * q
    }
}

impl SquaredProfile for TrajectoryFamilyParam {
    fn p(&self, tau: f64) -> f64 {
        (1.0 - tau).powi(3) * self.q(tau)
    }
    fn p1(&self, tau: f64) -> f64 {
        let c = self.coefficients();
        c[1] + tau * (2.0 * c[2] + tau * (3.0 * c[3] + tau * (4.0 * c[4] + tau * 5.0 * c[5])))
    }
    fn p2(&self, tau: f64) -> f64 {
        let c = self.coefficients();
        2.0 * c[2] + tau * (6.0 * c[3] + tau * (12.0 * c[4] + tau * 20.0 * c[5]))
    }
    fn p3(&self, tau: f64) -> f64 {
        let c = self.coefficients();
        6.0 * c[3] + tau * (24.0 * c[4] + tau * 60.0 * c[5])
    }
}

/// Positivity of a cofactor on [0, 1): grid scan plus the interior minima
/// located from the roots of its derivative.
fn positive_on_unit_interval(q: &Polynomial) -> bool {
    let scan_ok = (0..SCAN_POINTS).all(|i| q.eval(i as f64 / SCAN_POINTS as f64) > 0.0);
    if !scan_ok {
        return false;
    }
    let dq = q.derivative();
    find_roots(|t| dq.eval(t), 0.0, 1.0, 64, 1e-13)
        .into_iter()
        .filter(|&t| t < 1.0)
        .all(|t| q.eval(t) > 0.0)
}

/// P_a > 0 on [0, 1) holds iff a >= -10; this evaluates it numerically.
pub fn is_admissible(a: f64) -> bool {
    if !a.is_finite() {
        return false;
    }
    let q = Polynomial::new(vec![1.0, 3.0, 6.0 + a]);
    positive_on_unit_interval(&q)
}

/// Divide out the triple root at tau = 1: returns q with P = (1 - tau)^3 q.
fn strip_triple_root(p: &Polynomial) -> Option<Polynomial> {
    let mut c = p.coeffs.clone();
    for _ in 0..3 {
        // synthetic division by (tau - 1)
        let n = c.len();
        if n < 2 {
            return None;
        }
        let mut out = vec![0.0; n - 1];
        let mut carry = 0.0;
        for k in (1..n).rev() {
            carry += c[k];
            out[k - 1] = carry;
        }
        let remainder = carry + c[0];
        let scale = p.coeffs.iter().map(|x| x.abs()).fold(1.0, f64::max);
        if remainder.abs() > 1e-9 * scale {
            return None;
        }
        c = out;
    }
    // (tau - 1)^3 = -(1 - tau)^3
    Some(Polynomial::new(c.into_iter().map(|x| -x).collect()))
}

pub fn polynomial_is_admissible(p: &Polynomial) -> bool {
    match strip_triple_root(p) {
        Some(q) => positive_on_unit_interval(&q),
        None => false,
    }
}

fn check_boundaries<P: SquaredProfile + ?Sized>(xi: &P) -> Result<()> {
    // xi(0) = 1, xi(1) = 0, xi'(0) = 0. For P >= 0, xi'(1) = 0 requires P to
    // vanish faster than quadratically at 1, i.e. P'(1) = P''(1) = 0.
    let checks = [
        ("xi(0) = 1", xi.p(0.0) - 1.0),
        ("xi(1) = 0", xi.p(1.0)),
        ("xi'(0) = 0", xi.p1(0.0)),
        ("xi'(1) = 0", xi.p1(1.0)),
        ("xi'(1) = 0", xi.p2(1.0)),
    ];
    for (name, v) in checks {
        if !(v.abs() <= BOUNDARY_TOL) {
            return Err(Error::BoundaryCondition(format!("{name} violated by {v:e}")));
        }
    }
    Ok(())
}

/// The action S = 1/4 int_0^1 (P''')^2 dtau by adaptive quadrature.
pub fn s_functional<P: SquaredProfile + ?Sized>(xi: &P, quadrature_tol: f64) -> Result<f64> {
    check_boundaries(xi)?;
    let q = Quadrature::with_tolerances(quadrature_tol, 1e-14);
    let v = q.integrate(|t| xi.p3(t).powi(2), 0.0, 1.0)?;
    Ok(0.25 * v)
}

/// The integrand (xi xi''' + 3 xi' xi'')^2 evaluated from xi derivatives
/// directly. Singular at tau = 1; cross-check only.
pub fn direct_integrand<P: SquaredProfile + ?Sized>(xi: &P, tau: f64) -> f64 {
    let x0 = xi.xi(tau);
    let x1 = xi.p1(tau) / (2.0 * x0);
    let x2 = (xi.p2(tau) - 2.0 * x1 * x1) / (2.0 * x0);
    let x3 = (xi.p3(tau) - 6.0 * x1 * x2) / (2.0 * x0);
    (x0 * x3 + 3.0 * x1 * x2).powi(2)
}

pub fn s_closed_form(a: f64) -> Result<f64> {
    TrajectoryFamilyParam::new(a)?;
    Ok(180.0 + 60.0 * a + 9.0 * a * a)
}

/// Minimiser of S over the family, located numerically: golden-section
/// bracketing on the quadrature action followed by a parabolic step.
pub fn numeric_argmin() -> Result<f64> {
    let s = |a: f64| {
        TrajectoryFamilyParam::new(a)
            .and_then(|p| s_functional(&p, 1e-12))
            .unwrap_or(f64::INFINITY)
    };
    let coarse = golden_section(s, A_MIN, 10.0, 1e-4);
    let h = 0.5;
    let (f0, f1, f2) = (s(coarse - h), s(coarse), s(coarse + h));
    let denom = f0 - 2.0 * f1 + f2;
    if !(denom > 0.0) {
        return Err(Error::NonFinite("parabolic step"));
    }
    Ok(coarse - 0.5 * h * (f2 - f0) / denom)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledTrajectory {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub velocities: Vec<f64>,
    pub x0: f64,
    #[serde(rename = "T")]
    pub t_close: f64,
}

impl SampledTrajectory {
    /// Least-squares quintic fit of (x/x0)^2 in the normalised time, as a
    /// profile for [`s_functional`].
    pub fn squared_profile(&self, degree: usize) -> Option<PolynomialProfile> {
        let taus: Vec<f64> = self.times.iter().map(|t| t / self.t_close).collect();
        let ps: Vec<f64> = self.positions.iter().map(|x| (x / self.x0).powi(2)).collect();
        Polynomial::fit(&taus, &ps, degree).map(PolynomialProfile::new)
    }
}

/// x(t) = x0 sqrt(1 - 10t^2/3T^2 + 5t^4/T^4 - 8t^5/3T^5) on a uniform grid.
pub fn optimal_trajectory(x0: f64, t_close: f64, n_samples: usize) -> Result<SampledTrajectory> {
    error::positive("x0", x0)?;
    error::positive("T", t_close)?;
    if n_samples < 2 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            reason: format!("need at least 2, got {n_samples}"),
        });
    }
    let xi = TrajectoryFamilyParam::optimal();
    let last = n_samples - 1;
    let mut times = Vec::with_capacity(n_samples);
    let mut positions = Vec::with_capacity(n_samples);
    let mut velocities = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let tau = i as f64 / last as f64;
        times.push(if i == last { t_close } else { tau * t_close });
        positions.push(match i {
            0 => x0,
            _ if i == last => 0.0,
            _ => x0 * xi.xi(tau),
        });
        velocities.push(x0 / t_close * xi.xi_dot(tau));
    }
    Ok(SampledTrajectory {
        times,
        positions,
        velocities,
        x0,
        t_close,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedPeak {
    pub tau: f64,
    /// max |xi'|, so that v_max = coefficient * x0 / T.
    pub coefficient: f64,
}

/// Peak of |xi'| for a family member, from the roots of the xi'' numerator.
pub fn speed_peak(param: &TrajectoryFamilyParam) -> Result<SpeedPeak> {
    let roots = find_roots(|t| param.speed_extremum_poly(t), 0.0, 1.0, 2000, 1e-13);
    let mut best = SpeedPeak {
        tau: 0.0,
        coefficient: 0.0,
    };
    for tau in roots.into_iter().chain([0.0, 1.0]) {
        let v = param.xi_dot(tau).abs();
        if v > best.coefficient {
            best = SpeedPeak { tau, coefficient: v };
        }
    }
    if best.coefficient == 0.0 {
        return Err(Error::NonFinite("speed peak"));
    }
    Ok(best)
}

/// max |xi_opt'| (about 1.464).
pub fn max_speed_coefficient() -> f64 {
    static COEF: OnceLock<f64> = OnceLock::new();
    *COEF.get_or_init(|| {
        speed_peak(&TrajectoryFamilyParam::optimal())
            .expect("optimal profile has an interior speed peak")
            .coefficient
    })
}

/// Peak speed of the optimal closing trajectory.
pub fn max_speed(x0: f64, t_close: f64) -> Result<f64> {
    error::positive("x0", x0)?;
    error::positive("T", t_close)?;
    Ok(max_speed_coefficient() * x0 / t_close)
}

/// Largest x0 / (cT) that keeps the optimal trajectory subluminal (about 0.683).
pub fn subluminal_ratio() -> f64 {
    1.0 / max_speed_coefficient()
}

/// E_min = 64 G dQ^2 / (c^5 T^5).
pub fn min_radiated_energy(delta_q: f64, t_close: f64, k: &Constants) -> Result<f64> {
    error::finite("delta_q", delta_q)?;
    error::positive("T", t_close)?;
    Ok(64.0 * k.g * delta_q * delta_q / (k.c.powi(5) * t_close.powi(5)))
}

/// Dimension-tracked form of [`min_radiated_energy`].
pub fn min_radiated_energy_quantity(
    delta_q: PhysicalQuantity,
    t_close: PhysicalQuantity,
    k: &Constants,
) -> Result<PhysicalQuantity> {
    if delta_q.dim != Dimension::QUADRUPOLE {
        return Err(Error::DimensionMismatch {
            lhs: delta_q.dim,
            rhs: Dimension::QUADRUPOLE,
        });
    }
    if t_close.dim != Dimension::TIME {
        return Err(Error::DimensionMismatch {
            lhs: t_close.dim,
            rhs: Dimension::TIME,
        });
    }
    let e = k.g_quantity() * delta_q.powi(2) / (k.c_quantity().powi(5) * t_close.powi(5)) * 64.0;
    if !e.is_finite() {
        return Err(Error::NonFinite("min_radiated_energy"));
    }
    Ok(e)
}

/// Radiated energy for a given action value: 4 G dQ^2 S / (5 c^5 T^5).
pub fn radiated_energy(s: f64, delta_q: f64, t_close: f64, k: &Constants) -> Result<f64> {
    error::positive("T", t_close)?;
    Ok(4.0 * k.g * delta_q * delta_q * s / (5.0 * k.c.powi(5) * t_close.powi(5)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiationResult {
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    pub v_max: f64,
}

/// Action, radiated energy and peak speed of one family member closing a
/// quadrupole split `delta_q` from displacement `x0` in time `t_close`.
pub fn radiation(
    param: &TrajectoryFamilyParam,
    delta_q: f64,
    x0: f64,
    t_close: f64,
    k: &Constants,
) -> Result<RadiationResult> {
    error::positive("x0", x0)?;
    let s = s_functional(param, 1e-10)?;
    Ok(RadiationResult {
        s,
        energy: radiated_energy(s, delta_q, t_close, k)?,
        v_max: speed_peak(param)?.coefficient * x0 / t_close,
    })
}

/// kappa = 2 int_0^1 xi_opt dtau (about 1.155).
pub fn kappa() -> f64 {
    static KAPPA: OnceLock<f64> = OnceLock::new();
    *KAPPA.get_or_init(|| {
        let xi = TrajectoryFamilyParam::optimal();
        2.0 * integrate(|t| xi.xi(t), 0.0, 1.0).expect("smooth integrand")
    })
}

/// tau_e = tau_f + kappa tau_a.
pub fn effective_time(tau_f: f64, tau_a: f64) -> Result<f64> {
    error::non_negative("tau_f", tau_f)?;
    error::non_negative("tau_a", tau_a)?;
    Ok(tau_f + kappa() * tau_a)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForceResult {
    /// Free coefficients a_2 .. a_{n-3} of the best polynomial.
    pub best_params: Vec<f64>,
    /// All coefficients a_0 .. a_n of the best polynomial.
    pub coefficients: Vec<f64>,
    pub s_best: f64,
    pub restarts_succeeded: usize,
}

/// Complete the coefficient vector from the free ones: a0 = 1, a1 = 0, and
/// the top three fixed by P(1) = P'(1) = P''(1) = 0.
pub fn constrained_polynomial(degree: usize, free: &[f64]) -> Polynomial {
    assert!(degree >= 5 && free.len() == degree - 4);
    let mut c = vec![0.0; degree + 1];
    c[0] = 1.0;
    c[2..degree - 2].copy_from_slice(free);
    let mut rhs = [-1.0, 0.0, 0.0];
    for (k, &a) in c.iter().enumerate().take(degree - 2).skip(2) {
        let kf = k as f64;
        rhs[0] -= a;
        rhs[1] -= kf * a;
        rhs[2] -= kf * (kf - 1.0) * a;
    }
    let cols: Vec<[f64; 3]> = (degree - 2..=degree)
        .map(|j| {
            let j = j as f64;
            [1.0, j, j * (j - 1.0)]
        })
        .collect();
    let det3 = |a: [f64; 3], b: [f64; 3], c: [f64; 3]| {
        a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1]) + c[0] * (a[1] * b[2] - a[2] * b[1])
    };
    let d = det3(cols[0], cols[1], cols[2]);
    c[degree - 2] = det3(rhs, cols[1], cols[2]) / d;
    c[degree - 1] = det3(cols[0], rhs, cols[2]) / d;
    c[degree] = det3(cols[0], cols[1], rhs) / d;
    Polynomial::new(c)
}

fn brute_objective(degree: usize, free: &[f64]) -> f64 {
    let p = constrained_polynomial(degree, free);
    if !polynomial_is_admissible(&p) {
        return f64::INFINITY;
    }
    s_functional(&PolynomialProfile::new(p), 1e-12).unwrap_or(f64::INFINITY)
}

/// Multi-start Nelder-Mead over xi = sqrt(P), deg P = `degree`, subject to
/// the four boundary conditions. Restarts run in parallel; the reduction is
/// by restart index so the result depends only on the seed.
pub fn brute_force_minimize(degree: usize, n_restarts: usize, seed: u64) -> Result<BruteForceResult> {
    if degree < 5 {
        return Err(Error::InvalidParameter {
            name: "degree",
            reason: format!("need degree >= 5, got {degree}"),
        });
    }
    if n_restarts == 0 {
        return Err(Error::InvalidParameter {
            name: "n_restarts",
            reason: "need at least one restart".into(),
        });
    }
    let n_free = degree - 4;
    let nm = NelderMead {
        initial_step: 0.5,
        f_tol: 1e-14,
        x_tol: 1e-10,
        max_iter: 20_000,
    };
    let runs: Vec<Option<(Vec<f64>, f64)>> = (0..n_restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let start = (0..256).find_map(|_| {
                let x: Vec<f64> = (0..n_free)
                    .map(|k| {
                        if k == 0 {
                            rng.gen_range(-9.0..5.0)
                        } else {
                            rng.gen_range(-2.0..2.0)
                        }
                    })
                    .collect();
                brute_objective(degree, &x).is_finite().then_some(x)
            })?;
            let m = nm.minimize(|x| brute_objective(degree, x), &start);
            m.f.is_finite().then_some((m.x, m.f))
        })
        .collect();
    let restarts_succeeded = runs.iter().filter(|r| r.is_some()).count();
    let best = runs
        .into_iter()
        .flatten()
        .fold(None::<(Vec<f64>, f64)>, |acc, run| match acc {
            Some(b) if b.1 <= run.1 => Some(b),
            _ => Some(run),
        })
        .ok_or(Error::AllRestartsFailed(n_restarts))?;
    let coefficients = constrained_polynomial(degree, &best.0).coeffs;
    Ok(BruteForceResult {
        best_params: best.0,
        coefficients,
        s_best: best.1,
        restarts_succeeded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn optimum_and_closed_form() {
        let s = s_functional(&TrajectoryFamilyParam::optimal(), 1e-10).unwrap();
        assert!((s - 80.0).abs() / 80.0 < 1e-10);
        let s0 = s_functional(&TrajectoryFamilyParam::new(0.0).unwrap(), 1e-10).unwrap();
        assert!((s0 - 180.0).abs() < 1e-8);
        // 180 + 60 + 9
        let s1 = s_functional(&TrajectoryFamilyParam::new(1.0).unwrap(), 1e-10).unwrap();
        assert!((s1 - 249.0).abs() < 1e-8);
    }

    #[test]
    fn closed_form_agrees_with_quadrature() {
        for a in [-6.0, A_OPT, -1.0, 0.0, 1.0, 3.0] {
            let p = TrajectoryFamilyParam::new(a).unwrap();
            let num = s_functional(&p, 1e-10).unwrap();
            let cf = s_closed_form(a).unwrap();
            assert!((num - cf).abs() / cf < 1e-7, "a = {a}");
        }
    }

    #[test]
    fn stationarity_at_vertex() {
        for eps in [1e-2, 1e-3] {
            let s = s_closed_form(A_OPT + eps).unwrap();
            assert!((s - 80.0 - 9.0 * eps * eps).abs() < 1e-10);
            let s = s_closed_form(A_OPT - eps).unwrap();
            assert!((s - 80.0 - 9.0 * eps * eps).abs() < 1e-10);
        }
    }

    #[test]
    fn numeric_minimiser_matches_vertex() {
        let a = numeric_argmin().unwrap();
        assert!((a - A_OPT).abs() < 1e-9, "{a}");
    }

    #[test]
    fn admissibility_threshold() {
        assert!(is_admissible(-10.0));
        assert!(is_admissible(50.0));
        assert!(!is_admissible(-10.1));
        assert!(matches!(s_closed_form(-11.0), Err(Error::InadmissibleTrajectory(_))));
    }

    #[test]
    fn boundary_violation_rejected() {
        let p = PolynomialProfile::new(Polynomial::new(vec![1.0, 0.0, -1.0]));
        assert!(matches!(s_functional(&p, 1e-10), Err(Error::BoundaryCondition(_))));
    }

    #[test]
    fn direct_integrand_cross_check() {
        let p = TrajectoryFamilyParam::new(-1.0).unwrap();
        let cutoff = 1.0 - 1e-6;
        let direct = integrate(|t| direct_integrand(&p, t), 0.0, 0.5).unwrap();
        let via_p = 0.25 * integrate(|t| p.p3(t).powi(2), 0.0, 0.5).unwrap();
        assert!((direct - via_p).abs() / via_p < 1e-9);
        let t = cutoff;
        let lhs = direct_integrand(&p, t);
        assert!((lhs - 0.25 * p.p3(t).powi(2)).abs() / lhs < 1e-3);
    }

    #[test]
    fn sampled_trajectory() {
        let tr = optimal_trajectory(2.0, 3.0, 1001).unwrap();
        assert_eq!(tr.positions[0], 2.0);
        assert_eq!(*tr.positions.last().unwrap(), 0.0);
        assert_eq!(*tr.times.last().unwrap(), 3.0);
        let mid = tr.positions[500];
        assert!((mid - 2.0 * (19.0f64 / 48.0).sqrt()).abs() < 1e-14);
        assert!(tr.positions.iter().all(|&x| (0.0..=2.0).contains(&x)));
        assert!(tr.positions.windows(2).all(|w| w[1] <= w[0]));
        let fit = tr.squared_profile(5).unwrap();
        let s = s_functional(&fit, 1e-10).unwrap();
        assert!((s - 80.0).abs() < 1e-5);
    }

    #[test]
    fn endpoint_velocity_vanishes_with_refinement() {
        let mut last = f64::INFINITY;
        for n in [101, 1001, 10001] {
            let tr = optimal_trajectory(1.0, 1.0, n).unwrap();
            let h = tr.times[1];
            let v0 = (tr.positions[1] - tr.positions[0]).abs() / h;
            let vn = (tr.positions[n - 1] - tr.positions[n - 2]).abs() / h;
            let worst = v0.max(vn);
            assert!(worst < last);
            last = worst;
        }
        // (1 - tau)^{3/2} endpoint: the one-sided slope decays like sqrt(h)
        assert!(last < 0.05);
    }

    #[test]
    fn speed_peak_value() {
        let peak = speed_peak(&TrajectoryFamilyParam::optimal()).unwrap();
        assert!((peak.coefficient - 1.463_918_045).abs() < 1e-8);
        assert!((peak.tau - 0.677_22).abs() < 1e-4);
        // finite-difference oracle
        let xi = TrajectoryFamilyParam::optimal();
        let n = 200_000;
        let fd = (0..n)
            .map(|i| {
                let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
                (xi.xi(b) - xi.xi(a)).abs() * n as f64
            })
            .fold(0.0, f64::max);
        assert!((fd - peak.coefficient).abs() < 1e-6);
        assert_eq!(max_speed(2.0, 1.0).unwrap(), 2.0 * max_speed(1.0, 1.0).unwrap());
    }

    #[test]
    fn energy_identities() {
        let k = Constants::planck();
        let e = min_radiated_energy(0.7, 1.3, &k).unwrap();
        let s = s_functional(&TrajectoryFamilyParam::optimal(), 1e-12).unwrap();
        let via_s = radiated_energy(s, 0.7, 1.3, &k).unwrap();
        assert!((e - via_s).abs() / e < 1e-9);
        let r = min_radiated_energy(1.0, 2.0, &k).unwrap() / min_radiated_energy(1.0, 1.0, &k).unwrap();
        assert_eq!(r, 2f64.powi(-5));
        assert_eq!(min_radiated_energy(0.0, 1.0, &k).unwrap(), 0.0);
        let res = radiation(&TrajectoryFamilyParam::new(0.0).unwrap(), 1.0, 1.0, 1.0, &k).unwrap();
        assert!(res.energy >= e);
    }

    #[test]
    fn kappa_value_and_simpson() {
        assert!((kappa() - 1.154_726_124).abs() < 1e-8);
        let xi = TrajectoryFamilyParam::optimal();
        let s1: f64 = crate::quadrature::simpson(|t| xi.xi(t), 0.0, 1.0, 200_000);
        let s2: f64 = crate::quadrature::simpson(|t| xi.xi(t), 0.0, 1.0, 400_000);
        assert!((s1 - s2).abs() < 1e-8);
        assert!((2.0 * s2 - kappa()).abs() < 1e-8);
        assert_eq!(effective_time(2.0, 0.0).unwrap(), 2.0);
    }

    #[test]
    fn brute_force_degree5() {
        let r = brute_force_minimize(5, 32, 7).unwrap();
        assert!((r.s_best - 80.0).abs() < 1e-4);
        assert!((r.best_params[0] - A_OPT).abs() < 1e-3);
        let again = brute_force_minimize(5, 32, 7).unwrap();
        assert_eq!(r.s_best.to_bits(), again.s_best.to_bits());
    }

    #[test]
    fn constrained_polynomial_reproduces_family() {
        let p = constrained_polynomial(5, &[A_OPT]);
        let fam = TrajectoryFamilyParam::optimal().coefficients();
        for (a, b) in p.coeffs.iter().zip(fam) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn action_bounded_below(a in -10.0f64..20.0) {
            let p = TrajectoryFamilyParam::new(a).unwrap();
            let s = s_functional(&p, 1e-10).unwrap();
            prop_assert!(s >= 80.0 - 1e-8);
        }

        #[test]
        fn energy_scales_t_minus_five(t in 0.1f64..10.0, dq in 0.01f64..10.0) {
            let k = Constants::planck();
            let r = min_radiated_energy(dq, 2.0 * t, &k).unwrap() / min_radiated_energy(dq, t, &k).unwrap();
            prop_assert!((r - 1.0 / 32.0).abs() < 1e-15);
        }
    }
}
