//! Closed-form branch wavepackets and their overlap.
//!
//! psi_+-(t, x) = e^{i alpha0} e^{+- i alpha x} psi_f(t, x -+ u), with
//! alpha0 = -(m / 2 hbar) int u'^2, alpha = m u' / hbar and psi_f the freely
//! spreading Gaussian of initial width sigma. These solve the Schroedinger
//! equation with potential -+ F(t) x exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::force::PathState;
use crate::error::Result;
use crate::quadrature::Quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Free Gaussian, normalised, centred at 0 with zero mean momentum.
pub fn free_gaussian(t: f64, x: f64, m: f64, sigma: f64, hbar: f64) -> Complex64 {
    let spread = Complex64::new(1.0, hbar * t / (2.0 * m * sigma * sigma));
    let norm = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
    norm / spread.sqrt() * (-(x * x) / (4.0 * sigma * sigma * spread)).exp()
}

pub fn wavepacket(t: f64, x: f64, branch: Branch, state: &PathState, m: f64, sigma: f64, hbar: f64) -> Complex64 {
    let s = branch.sign();
    let alpha0 = -m / (2.0 * hbar) * state.action;
    let alpha = m * state.u_dot / hbar;
    Complex64::from_polar(1.0, alpha0 + s * alpha * x) * free_gaussian(t, x - s * state.u, m, sigma, hbar)
}

/// A(t) = exp(-(u - t u')^2 / (2 sigma^2) - 2 (m sigma u' / hbar)^2).
pub fn visibility(t: f64, u: f64, u_dot: f64, m: f64, sigma: f64, hbar: f64) -> f64 {
    let shift = u - t * u_dot;
    (-(shift * shift) / (2.0 * sigma * sigma) - 2.0 * (m * sigma * u_dot / hbar).powi(2)).exp()
}

fn support(t: f64, state: &PathState, m: f64, sigma: f64, hbar: f64) -> (f64, f64) {
    let width = sigma * (1.0 + (hbar * t / (2.0 * m * sigma * sigma)).powi(2)).sqrt();
    let reach = state.u.abs() + 14.0 * width;
    (-reach, reach)
}

/// <psi_+ | psi_-> by adaptive quadrature over x.
pub fn overlap_numeric(t: f64, state: &PathState, m: f64, sigma: f64, hbar: f64) -> Result<Complex64> {
    let (a, b) = support(t, state, m, sigma, hbar);
    let q = Quadrature {
        rel_tol: 1e-12,
        abs_tol: 1e-15,
        max_intervals: 20_000,
    };
    q.integrate(
        |x| {
            wavepacket(t, x, Branch::Plus, state, m, sigma, hbar).conj()
                * wavepacket(t, x, Branch::Minus, state, m, sigma, hbar)
        },
        a,
        b,
    )
}

/// int |psi|^2 dx by quadrature.
pub fn norm_numeric(t: f64, branch: Branch, state: &PathState, m: f64, sigma: f64, hbar: f64) -> Result<f64> {
    let (a, b) = support(t, state, m, sigma, hbar);
    Quadrature::with_tolerances(1e-12, 1e-15).integrate(
        |x| wavepacket(t, x, branch, state, m, sigma, hbar).norm_sqr(),
        a,
        b,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn initial_gaussian() {
        let s = PathState::default();
        for x in [-1.0, 0.0, 0.4] {
            let v = wavepacket(0.0, x, Branch::Plus, &s, 1.0, 0.8, 1.0);
            let expect = (2.0 * std::f64::consts::PI * 0.64).powf(-0.25) * (-x * x / (4.0 * 0.64)).exp();
            assert!((v - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn visibility_limits() {
        assert_eq!(visibility(3.0, 0.0, 0.0, 1.0, 1.0, 1.0), 1.0);
        let mut last = 1.0;
        for v in [0.1, 0.5, 1.0, 2.0] {
            // hold u - t u' fixed at 0.2
            let a = visibility(1.0, 0.2 + v, v, 1.0, 1.0, 1.0);
            assert!(a < last);
            last = a;
        }
    }

    #[test]
    fn overlap_matches_including_spreading() {
        // far outside t << 2 m sigma^2 / hbar, the overlap still equals A
        let s = PathState {
            u: 0.4,
            u_dot: 0.1,
            action: 0.3,
        };
        let ov = overlap_numeric(25.0, &s, 1.0, 1.0, 1.0).unwrap();
        let a = visibility(25.0, s.u, s.u_dot, 1.0, 1.0, 1.0);
        assert!((ov.re - a).abs() < 1e-10 && ov.im.abs() < 1e-10, "{ov} vs {a}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn unitarity(t in 0.0f64..5.0, u in -2.0f64..2.0, v in -2.0f64..2.0, m in 0.2f64..3.0, sigma in 0.3f64..2.0) {
            let s = PathState { u, u_dot: v, action: 0.7 };
            for b in [Branch::Plus, Branch::Minus] {
                let n = norm_numeric(t, b, &s, m, sigma, 1.0).unwrap();
                prop_assert!((n - 1.0).abs() < 1e-8);
            }
        }
    }
}
