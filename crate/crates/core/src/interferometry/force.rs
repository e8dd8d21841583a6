//! Splitting force profiles and the classical branch path u(t).
//!
//! A profile acts on [0, tau_a] and must leave the particle displaced by
//! `d` and at rest: int F dt = 0 and int int F dt dt = m d.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{self, Error, Result};
use crate::ode::Rk45;
use crate::quadrature::integrate;
use crate::trajectory::{SquaredProfile, TrajectoryFamilyParam};

/// Position, velocity and the running integral of u'^2 at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PathState {
    pub u: f64,
    pub u_dot: f64,
    /// int_0^t u'(s)^2 ds
    pub action: f64,
}

type ForceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum ForceProfile {
    Zero {
        tau_a: f64,
    },
    /// The radiation-optimal closing shape run backwards:
    /// u(t) = d xi_opt(1 - t/tau_a).
    Canonical {
        tau_a: f64,
        d: f64,
    },
    /// +F0 for the first half, -F0 for the second, F0 = 4 m d / tau_a^2.
    ImpulsePair {
        tau_a: f64,
        d: f64,
    },
    /// u = d (3 s^2 - 2 s^3), a linear force ramp.
    Smoothstep {
        tau_a: f64,
        d: f64,
    },
    /// Arbitrary force F(t); the path is integrated numerically.
    Custom {
        tau_a: f64,
        d: f64,
        force: ForceFn,
    },
}

impl fmt::Debug for ForceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero { tau_a } => write!(f, "Zero {{ tau_a: {tau_a} }}"),
            Self::Canonical { tau_a, d } => write!(f, "Canonical {{ tau_a: {tau_a}, d: {d} }}"),
            Self::ImpulsePair { tau_a, d } => write!(f, "ImpulsePair {{ tau_a: {tau_a}, d: {d} }}"),
            Self::Smoothstep { tau_a, d } => write!(f, "Smoothstep {{ tau_a: {tau_a}, d: {d} }}"),
            Self::Custom { tau_a, d, .. } => write!(f, "Custom {{ tau_a: {tau_a}, d: {d} }}"),
        }
    }
}

// int_0^1 xi_opt'(tau)^2 dtau
fn canonical_action_unit() -> f64 {
    static J: OnceLock<f64> = OnceLock::new();
    *J.get_or_init(|| {
        let xi = TrajectoryFamilyParam::optimal();
        integrate(|t| xi.xi_dot(t).powi(2), 0.0, 1.0).expect("smooth integrand")
    })
}

impl ForceProfile {
    pub fn tau_a(&self) -> f64 {
        match self {
            Self::Zero { tau_a }
            | Self::Canonical { tau_a, .. }
            | Self::ImpulsePair { tau_a, .. }
            | Self::Smoothstep { tau_a, .. }
            | Self::Custom { tau_a, .. } => *tau_a,
        }
    }

    pub fn displacement(&self) -> f64 {
        match self {
            Self::Zero { .. } => 0.0,
            Self::Canonical { d, .. }
            | Self::ImpulsePair { d, .. }
            | Self::Smoothstep { d, .. }
            | Self::Custom { d, .. } => *d,
        }
    }

    /// F(t) for a particle of mass m. The canonical profile diverges like
    /// t^(-1/2) at t = 0 (integrably).
    pub fn force(&self, t: f64, m: f64) -> f64 {
        let tau_a = self.tau_a();
        if !(0.0..=tau_a).contains(&t) {
            return 0.0;
        }
        let d = self.displacement();
        match self {
            Self::Zero { .. } => 0.0,
            Self::Canonical { .. } => {
                let tau = 1.0 - t / tau_a;
                m * d / (tau_a * tau_a) * canonical_xi_ddot(tau)
            }
            Self::ImpulsePair { .. } => {
                let f0 = 4.0 * m * d / (tau_a * tau_a);
                if t < 0.5 * tau_a {
                    f0
                } else {
                    -f0
                }
            }
            Self::Smoothstep { .. } => {
                let s = t / tau_a;
                m * 6.0 * d * (1.0 - 2.0 * s) / (tau_a * tau_a)
            }
            Self::Custom { force, .. } => force(t),
        }
    }

    /// Analytic path state, where available.
    fn analytic_state(&self, t: f64) -> Option<PathState> {
        let tau_a = self.tau_a();
        let t = t.clamp(0.0, tau_a);
        let d = self.displacement();
        let s = t / tau_a;
        match self {
            Self::Zero { .. } => Some(PathState::default()),
            Self::Canonical { .. } => {
                let xi = TrajectoryFamilyParam::optimal();
                let tau = 1.0 - s;
                let u = if t == tau_a { d } else { d * xi.xi(tau) };
                let u_dot = -d / tau_a * xi.xi_dot(tau);
                // int_0^t u'^2 = (d^2/tau_a) int_{1-s}^1 xi'^2
                let tail = if s == 0.0 {
                    0.0
                } else {
                    integrate(|x| xi.xi_dot(x).powi(2), tau, 1.0).ok()?
                };
                let action = if t == tau_a {
                    d * d / tau_a * canonical_action_unit()
                } else {
                    d * d / tau_a * tail
                };
                Some(PathState { u, u_dot, action })
            }
            Self::ImpulsePair { .. } => {
                let acc = 4.0 * d / (tau_a * tau_a);
                let total = acc * acc * tau_a.powi(3) / 12.0;
                Some(if t <= 0.5 * tau_a {
                    PathState {
                        u: 0.5 * acc * t * t,
                        u_dot: acc * t,
                        action: acc * acc * t.powi(3) / 3.0,
                    }
                } else {
                    let r = tau_a - t;
                    PathState {
                        u: d - 0.5 * acc * r * r,
                        u_dot: acc * r,
                        action: total - acc * acc * r.powi(3) / 3.0,
                    }
                })
            }
            Self::Smoothstep { .. } => Some(PathState {
                u: d * (3.0 * s * s - 2.0 * s.powi(3)),
                u_dot: 6.0 * d * s * (1.0 - s) / tau_a,
                action: 36.0 * d * d / tau_a * (s.powi(3) / 3.0 - s.powi(4) / 2.0 + s.powi(5) / 5.0),
            }),
            Self::Custom { .. } => None,
        }
    }

    /// Check int F = 0 and int int F = m d by quadrature.
    pub fn check_invariants(&self, m: f64) -> Result<()> {
        let tau_a = self.tau_a();
        let d = self.displacement();
        let (impulse, moment) = match self {
            // closed forms; the t^(-1/2) force needs no numerics
            Self::Zero { .. } | Self::Canonical { .. } => (0.0, m * d),
            _ => {
                let impulse = piecewise_integral(|t| self.force(t, m), tau_a)?;
                // int_0^tau int_0^t F = int_0^tau (tau - t) F(t) dt
                let moment = piecewise_integral(|t| (tau_a - t) * self.force(t, m), tau_a)?;
                (impulse, moment)
            }
        };
        let scale = (m * d / tau_a).abs().max(f64::MIN_POSITIVE);
        if impulse.abs() > 1e-8 * scale {
            return Err(Error::InvalidParameter {
                name: "force",
                reason: format!("net impulse {impulse:e} is not zero"),
            });
        }
        if (moment - m * d).abs() > 1e-8 * (m * d).abs().max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidParameter {
                name: "force",
                reason: format!("double integral {moment:e} differs from m d = {:e}", m * d),
            });
        }
        Ok(())
    }
}

// split at the midpoint so the impulse-pair jump is a panel edge
fn piecewise_integral<F: Fn(f64) -> f64>(f: F, tau_a: f64) -> Result<f64> {
    Ok(integrate(&f, 0.0, 0.5 * tau_a)? + integrate(&f, 0.5 * tau_a, tau_a)?)
}

// xi_opt'' from the polynomial P = xi^2: xi'' = (P'' - 2 xi'^2) / (2 xi).
fn canonical_xi_ddot(tau: f64) -> f64 {
    let xi = TrajectoryFamilyParam::optimal();
    let x = xi.xi(tau);
    if x == 0.0 {
        return f64::NEG_INFINITY;
    }
    let x1 = xi.xi_dot(tau);
    (xi.p2(tau) - 2.0 * x1 * x1) / (2.0 * x)
}

/// Sample the path m u'' = F(t), u(0) = u'(0) = 0, at the given times in
/// [0, tau_a]. Analytic profiles are evaluated in closed form; custom
/// profiles go through RK45 and must land on u = d, u' = 0 within 1e-8 d.
pub fn classical_path(profile: &ForceProfile, m: f64, times: &[f64]) -> Result<Vec<PathState>> {
    error::positive("m", m)?;
    let tau_a = error::positive("tau_a", profile.tau_a())?;
    if let Some(t) = times.iter().find(|t| !(0.0..=tau_a).contains(*t)) {
        return Err(Error::InvalidParameter {
            name: "times",
            reason: format!("{t} outside [0, {tau_a}]"),
        });
    }
    if !matches!(profile, ForceProfile::Custom { .. }) {
        return times
            .iter()
            .map(|&t| profile.analytic_state(t).ok_or(Error::NonFinite("classical_path")))
            .collect();
    }
    let mut sorted: Vec<(usize, f64)> = times.iter().copied().enumerate().collect();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut outputs: Vec<f64> = sorted.iter().map(|p| p.1).collect();
    outputs.push(tau_a);
    let rhs = |t: f64, y: &[f64]| vec![y[1], profile.force(t, m) / m, y[1] * y[1]];
    let ys = Rk45::default().solve(rhs, 0.0, &[0.0, 0.0, 0.0], &outputs)?;
    let end = ys.last().expect("tau_a appended");
    let d = profile.displacement();
    let tol = 1e-8 * d.abs().max(f64::MIN_POSITIVE);
    if (end[0] - d).abs() > tol || (end[1] * tau_a).abs() > tol {
        return Err(Error::Ode(format!(
            "end state u = {:e}, u' = {:e} misses (d, 0) = ({d:e}, 0)",
            end[0], end[1]
        )));
    }
    let mut out = vec![PathState::default(); times.len()];
    for ((idx, _), y) in sorted.iter().zip(&ys) {
        out[*idx] = PathState {
            u: y[0],
            u_dot: y[1],
            action: y[2],
        };
    }
    Ok(out)
}

/// Full branch path: opening stroke, free flight at u = d, closing stroke
/// (the opening run backwards), over [0, tau_f + 2 tau_a].
#[derive(Debug, Clone)]
pub struct SplitPath {
    pub opening: ForceProfile,
    pub tau_f: f64,
    pub m: f64,
}

impl SplitPath {
    pub fn tau_t(&self) -> f64 {
        self.tau_f + 2.0 * self.opening.tau_a()
    }

    pub fn state_at(&self, t: f64) -> Result<PathState> {
        let tau_a = self.opening.tau_a();
        let d = self.opening.displacement();
        let t = t.clamp(0.0, self.tau_t());
        let stroke = |s: f64| -> Result<PathState> { Ok(classical_path(&self.opening, self.m, &[s])?[0]) };
        if t <= tau_a {
            return stroke(t);
        }
        let full = stroke(tau_a)?.action;
        let tau_b = tau_a + self.tau_f;
        if t <= tau_b {
            return Ok(PathState {
                u: d,
                u_dot: 0.0,
                action: full,
            });
        }
        let mirrored = stroke(tau_a - (t - tau_b))?;
        Ok(PathState {
            u: mirrored.u,
            u_dot: -mirrored.u_dot,
            action: 2.0 * full - mirrored.action,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_force_stays_put() {
        let p = ForceProfile::Zero { tau_a: 1.0 };
        let s = classical_path(&p, 1.0, &[0.0, 0.5, 1.0]).unwrap();
        assert!(s.iter().all(|x| x.u == 0.0 && x.u_dot == 0.0));
    }

    #[test]
    fn analytic_profiles_reach_d_at_rest() {
        for p in [
            ForceProfile::Canonical { tau_a: 2.0, d: 0.7 },
            ForceProfile::ImpulsePair { tau_a: 2.0, d: 0.7 },
            ForceProfile::Smoothstep { tau_a: 2.0, d: 0.7 },
        ] {
            let s = classical_path(&p, 1.3, &[0.0, 2.0]).unwrap();
            assert_eq!(s[0].u, 0.0);
            assert!(s[0].u_dot.abs() < 1e-12);
            assert!((s[1].u - 0.7).abs() < 1e-8 * 0.7, "{p:?}");
            assert!(s[1].u_dot.abs() < 1e-8, "{p:?}");
            p.check_invariants(1.3).unwrap();
        }
    }

    #[test]
    fn rk45_matches_closed_forms() {
        let (m, tau_a, d) = (1.3, 2.0, 0.7);
        let ip = ForceProfile::ImpulsePair { tau_a, d };
        let custom = ForceProfile::Custom {
            tau_a,
            d,
            force: Arc::new(move |t| {
                let f0 = 4.0 * m * d / (tau_a * tau_a);
                if t < 0.5 * tau_a {
                    f0
                } else {
                    -f0
                }
            }),
        };
        let ts = [0.3, 0.9, 1.5, 2.0];
        let a = classical_path(&ip, m, &ts).unwrap();
        let b = classical_path(&custom, m, &ts).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.u - y.u).abs() < 1e-9);
            assert!((x.u_dot - y.u_dot).abs() < 1e-9);
            assert!((x.action - y.action).abs() < 1e-9);
        }
        let bad = ForceProfile::Custom {
            tau_a,
            d,
            force: Arc::new(|_| 1.0),
        };
        assert!(matches!(classical_path(&bad, m, &[1.0]), Err(Error::Ode(_))));
        assert!(bad.check_invariants(m).is_err());
    }

    #[test]
    fn canonical_action_by_finite_sums() {
        let p = ForceProfile::Canonical { tau_a: 1.0, d: 1.0 };
        let n = 20_000;
        let mut acc = 0.0;
        let states = classical_path(&p, 1.0, &(0..=n).map(|i| i as f64 / n as f64).collect::<Vec<_>>()).unwrap();
        for w in states.windows(2) {
            acc += 0.5 * (w[0].u_dot.powi(2) + w[1].u_dot.powi(2)) / n as f64;
        }
        assert!((acc - states[n].action).abs() < 1e-6);
    }

    #[test]
    fn split_path_segments() {
        let path = SplitPath {
            opening: ForceProfile::Canonical { tau_a: 1.0, d: 2.0 },
            tau_f: 5.0,
            m: 1.0,
        };
        let mid = path.state_at(3.0).unwrap();
        assert_eq!(mid.u, 2.0);
        let end = path.state_at(path.tau_t()).unwrap();
        assert!(end.u.abs() < 1e-12 && end.u_dot.abs() < 1e-12);
        let open = path.state_at(1.0).unwrap();
        assert!((end.action - 2.0 * open.action).abs() < 1e-12);
        // mirror symmetry of the speed
        let a = path.state_at(0.3).unwrap();
        let b = path.state_at(path.tau_t() - 0.3).unwrap();
        assert!((a.u - b.u).abs() < 1e-12 && (a.u_dot + b.u_dot).abs() < 1e-12);
    }
}
