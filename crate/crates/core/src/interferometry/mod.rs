//! Bob's Stern-Gerlach interferometer in the field of Alice's quadrupole.
//!
//! Bob's particle (mass `m`) is split into branches at `D +- d`, held for a
//! free-flight time `tau_f` and recombined; each opening and closing stroke
//! lasts `tau_a`. Alice's quadrupole is `Q0 +- dQ`.

pub mod force;
pub mod split_operator;
pub mod wavepacket;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{self, Error, Result};
use crate::trajectory;
use crate::units::Constants;

pub use force::{classical_path, ForceProfile, PathState, SplitPath};
pub use wavepacket::{overlap_numeric, visibility, wavepacket, Branch};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AliceQuadrupole {
    #[serde(rename = "Q0")]
    pub q0: f64,
    pub delta_q: f64,
    #[serde(rename = "T")]
    pub t_close: f64,
}

impl AliceQuadrupole {
    pub fn validate(&self) -> Result<()> {
        error::finite("Q0", self.q0)?;
        error::finite("delta_q", self.delta_q)?;
        error::positive("T", self.t_close)?;
        if self.is_unphysical_split() {
            log::warn!(
                "quadrupole split dQ = {} exceeds the mean Q0 = {}",
                self.delta_q,
                self.q0
            );
        }
        Ok(())
    }

    /// dQ > Q0 would make Q- negative.
    pub fn is_unphysical_split(&self) -> bool {
        self.delta_q.abs() > self.q0.abs()
    }

    pub fn q_plus(&self) -> f64 {
        self.q0 + self.delta_q
    }

    pub fn q_minus(&self) -> f64 {
        self.q0 - self.delta_q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferometerSetup {
    pub m: f64,
    pub d: f64,
    #[serde(rename = "D")]
    pub big_d: f64,
    pub tau_a: f64,
    pub tau_f: f64,
    pub sigma: f64,
    pub delta_t: f64,
}

impl InterferometerSetup {
    pub fn validate(&self) -> Result<()> {
        error::positive("m", self.m)?;
        error::positive("d", self.d)?;
        error::positive("D", self.big_d)?;
        error::positive("tau_a", self.tau_a)?;
        error::positive("tau_f", self.tau_f)?;
        error::positive("sigma", self.sigma)?;
        error::positive("delta_t", self.delta_t)?;
        Ok(())
    }

    /// Total duration tau_t = tau_f + 2 tau_a.
    pub fn tau_t(&self) -> f64 {
        self.tau_f + 2.0 * self.tau_a
    }

    /// Effective phase-accumulation time tau_f + kappa tau_a.
    pub fn effective_time(&self) -> Result<f64> {
        trajectory::effective_time(self.tau_f, self.tau_a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialPair {
    pub exact: f64,
    pub linearized: f64,
}

/// Newtonian potential of a quadrupole Q at distance D + dx, relative to
/// the monopole reference: exact -GQ/(D+dx)^3 and its first-order
/// expansion -GQ/D^3 + 3 G dx Q / D^4.
pub fn quadrupole_potential(q: f64, big_d: f64, dx: f64, k: &Constants) -> Result<PotentialPair> {
    error::finite("Q", q)?;
    error::finite("dx", dx)?;
    let r = big_d + dx;
    if !(r > 0.0) {
        return Err(Error::InvalidParameter {
            name: "D + dx",
            reason: format!("must be positive, got {r}"),
        });
    }
    Ok(PotentialPair {
        exact: -k.g * q / r.powi(3),
        linearized: -k.g * q / big_d.powi(3) + 3.0 * k.g * dx * q / big_d.powi(4),
    })
}

/// Position-dependent part of Phi_+ - Phi_- at offset dx (linearised):
/// 6 G dx dQ / D^4. The dx-independent remainder -2 G dQ / D^3 is
/// common to Bob's two branches and drops out of his phases.
pub fn branch_potential_difference(alice: &AliceQuadrupole, big_d: f64, dx: f64, k: &Constants) -> Result<f64> {
    let plus = quadrupole_potential(alice.q_plus(), big_d, dx, k)?.linearized;
    let minus = quadrupole_potential(alice.q_minus(), big_d, dx, k)?.linearized;
    let plus0 = quadrupole_potential(alice.q_plus(), big_d, 0.0, k)?.linearized;
    let minus0 = quadrupole_potential(alice.q_minus(), big_d, 0.0, k)?.linearized;
    Ok((plus - minus) - (plus0 - minus0))
}

/// Which-way displacement of a free test particle: 3 G tau_f^2 dQ / D^4.
pub fn test_particle_displacement(delta_q: f64, big_d: f64, tau_f: f64, k: &Constants) -> Result<f64> {
    error::finite("delta_q", delta_q)?;
    error::positive("D", big_d)?;
    error::positive("tau_f", tau_f)?;
    Ok(3.0 * k.g * tau_f * tau_f * delta_q / big_d.powi(4))
}

/// Largest dQ whose minimal closing radiation stays below one graviton:
/// sqrt(2 pi)/8 m_P c^2 T^2.
pub fn graviton_emission_bound(t_close: f64, k: &Constants) -> Result<f64> {
    error::positive("T", t_close)?;
    Ok((2.0 * PI).sqrt() / 8.0 * k.planck_mass() * k.c * k.c * t_close * t_close)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSet {
    pub phi_pp: f64,
    pub phi_pm: f64,
    pub phi_mp: f64,
    pub phi_mm: f64,
    #[serde(rename = "Gamma")]
    pub big_gamma: f64,
    pub gamma: f64,
}

impl PhaseSet {
    /// Assemble the four branch phases from phi0, Gamma and gamma.
    pub fn from_parts(phi0: f64, big_gamma: f64, gamma: f64) -> Self {
        Self {
            phi_pp: phi0 + 0.5 * big_gamma + 0.5 * gamma,
            phi_pm: phi0 - 0.5 * big_gamma - 0.5 * gamma,
            phi_mp: phi0 + 0.5 * big_gamma - 0.5 * gamma,
            phi_mm: phi0 - 0.5 * big_gamma + 0.5 * gamma,
            big_gamma,
            gamma,
        }
    }

    /// Recover (Gamma, gamma) from the four branch phases.
    pub fn reconstruct(&self) -> (f64, f64) {
        let plus = self.phi_pp - self.phi_pm;
        let minus = self.phi_mp - self.phi_mm;
        (0.5 * (plus + minus), 0.5 * (plus - minus))
    }
}

/// Gamma = 6 G m tau_e d Q0 / (hbar D^4), gamma likewise with dQ, and the
/// common phase phi0 = -m tau_e G Q0 / (hbar D^3).
pub fn gravitational_phases(setup: &InterferometerSetup, alice: &AliceQuadrupole, k: &Constants) -> Result<PhaseSet> {
    setup.validate()?;
    alice.validate()?;
    let tau_e = setup.effective_time()?;
    let coupling = 6.0 * k.g * setup.m * tau_e * setup.d / (k.hbar * setup.big_d.powi(4));
    let phi0 = -setup.m * tau_e * k.g * alice.q0 / (k.hbar * setup.big_d.powi(3));
    Ok(PhaseSet::from_parts(
        phi0,
        coupling * alice.q0,
        coupling * alice.delta_q,
    ))
}

/// Branch phases m tau_e Phi(+-d) / hbar from the linearised potential,
/// without dropping the Q-dependent constant -G dQ / D^3.
pub fn branch_phases_direct(setup: &InterferometerSetup, alice: &AliceQuadrupole, k: &Constants) -> Result<[f64; 4]> {
    let tau_e = setup.effective_time()?;
    let f = |q: f64, dx: f64| -> Result<f64> {
        Ok(setup.m * tau_e / k.hbar * quadrupole_potential(q, setup.big_d, dx, k)?.linearized)
    };
    Ok([
        f(alice.q_plus(), setup.d)?,
        f(alice.q_plus(), -setup.d)?,
        f(alice.q_minus(), setup.d)?,
        f(alice.q_minus(), -setup.d)?,
    ])
}

/// Mass at which gamma reaches pi/2: pi hbar D^4 / (12 G tau_e dQ d).
pub fn quarter_phase_mass(d: f64, big_d: f64, tau_e: f64, delta_q: f64, k: &Constants) -> Result<f64> {
    error::positive("d", d)?;
    error::positive("tau_e", tau_e)?;
    error::positive("delta_q", delta_q)?;
    Ok(PI * k.hbar * big_d.powi(4) / (12.0 * k.g * tau_e * delta_q * d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AliceState {
    QPlus,
    QMinus,
}

/// Bob's observable for each of Alice's states: 1 + A for Q+,
/// 1 + A cos(2 gamma) for Q-.
pub fn expectation_o(state: AliceState, visibility: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::InvalidParameter {
            name: "A",
            reason: format!("visibility must lie in [0, 1], got {visibility}"),
        });
    }
    Ok(match state {
        AliceState::QPlus => 1.0 + visibility,
        AliceState::QMinus => 1.0 + visibility * (2.0 * gamma).cos(),
    })
}

/// Linearised visibility averaged over the final `delta_t` of the run:
/// 1 - (15 m d^2 dt / (2 hbar tau_a^2)) (hbar tau_a/(2 m sigma^2) + 2 m sigma^2/(hbar tau_a)).
pub fn averaged_visibility(m: f64, d: f64, sigma: f64, tau_a: f64, delta_t: f64, k: &Constants) -> Result<f64> {
    error::positive("m", m)?;
    error::positive("sigma", sigma)?;
    error::positive("tau_a", tau_a)?;
    error::non_negative("delta_t", delta_t)?;
    if delta_t > 0.1 * tau_a {
        log::warn!("averaging window {delta_t} is not small against tau_a = {tau_a}; linearisation is poor");
    }
    let factor = k.hbar * tau_a / (2.0 * m * sigma * sigma) + 2.0 * m * sigma * sigma / (k.hbar * tau_a);
    Ok(1.0 - 15.0 * m * d * d * delta_t / (2.0 * k.hbar * tau_a * tau_a) * factor)
}

/// Same expansion with an explicit wavepacket clock: the spreading term
/// carries the elapsed time `t_end` at the end of the window. For a single
/// closing stroke timed from its own start, `t_end = tau_a` and this equals
/// [`averaged_visibility`].
pub fn averaged_visibility_at(
    m: f64,
    d: f64,
    sigma: f64,
    tau_a: f64,
    delta_t: f64,
    t_end: f64,
    k: &Constants,
) -> Result<f64> {
    error::positive("m", m)?;
    error::positive("sigma", sigma)?;
    error::positive("tau_a", tau_a)?;
    error::non_negative("delta_t", delta_t)?;
    let factor = t_end * t_end / (2.0 * sigma * sigma) + 2.0 * m * m * sigma * sigma / (k.hbar * k.hbar);
    Ok(1.0 - 15.0 * d * d * delta_t / (2.0 * tau_a.powi(3)) * factor)
}

/// The bracket hbar tau_a/(2 m sigma^2) + 2 m sigma^2/(hbar tau_a); minimum 2.
pub fn width_factor(m: f64, sigma: f64, tau_a: f64, k: &Constants) -> f64 {
    k.hbar * tau_a / (2.0 * m * sigma * sigma) + 2.0 * m * sigma * sigma / (k.hbar * tau_a)
}

/// sigma* = sqrt(hbar tau_a / (2 m)) minimises the width factor.
pub fn optimal_sigma(m: f64, tau_a: f64, k: &Constants) -> Result<f64> {
    error::positive("m", m)?;
    error::positive("tau_a", tau_a)?;
    Ok((k.hbar * tau_a / (2.0 * m)).sqrt())
}

/// (v_max T / x0)^2 / 15, about 0.1429.
pub fn time_resolution_coefficient() -> f64 {
    trajectory::max_speed_coefficient().powi(2) / 15.0
}

/// dt_max = coefficient * hbar / (m c^2).
pub fn time_resolution_bound(m: f64, k: &Constants) -> Result<f64> {
    error::positive("m", m)?;
    Ok(time_resolution_coefficient() * k.hbar / (m * k.c * k.c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{Dimension, PhysicalQuantity};
    use proptest::prelude::*;

    fn planck() -> Constants {
        Constants::planck()
    }

    #[test]
    fn potential_expansion_is_second_order() {
        let k = planck();
        assert_eq!(quadrupole_potential(0.0, 1.0, 0.1, &k).unwrap().exact, 0.0);
        let diff = |dx: f64| {
            let p = quadrupole_potential(1.0, 1.0, dx, &k).unwrap();
            p.linearized - p.exact
        };
        let ratio = diff(1e-3) / diff(5e-4);
        assert!((ratio - 4.0).abs() < 1e-2, "{ratio}");
        assert!(quadrupole_potential(1.0, 1.0, -1.0, &k).is_err());
    }

    #[test]
    fn branch_difference() {
        let k = planck();
        let alice = AliceQuadrupole {
            q0: 2.0,
            delta_q: 0.3,
            t_close: 1.0,
        };
        let v = branch_potential_difference(&alice, 1.7, 0.01, &k).unwrap();
        let expect = 6.0 * 0.01 * 0.3 / 1.7f64.powi(4);
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn displacement_scaling_and_planck_limit() {
        let k = planck();
        assert_eq!(test_particle_displacement(0.0, 1.0, 1.0, &k).unwrap(), 0.0);
        let a = test_particle_displacement(1.0, 1.0, 1.0, &k).unwrap();
        let b = test_particle_displacement(1.0, 2.0, 1.0, &k).unwrap();
        assert!((a / b - 16.0).abs() < 1e-12);
        let dq = graviton_emission_bound(1.0, &k).unwrap();
        let delta = test_particle_displacement(dq, 1.0, 1.0, &k).unwrap();
        assert!((delta - 3.0 * (2.0 * PI).sqrt() / 8.0).abs() < 1e-12);
    }

    #[test]
    fn emission_bound_identity() {
        for k in [Constants::planck(), Constants::si()] {
            let t = if k.mode == crate::UnitMode::Si { 1e-3 } else { 1.0 };
            let dq = graviton_emission_bound(t, &k).unwrap();
            let e = trajectory::min_radiated_energy(dq, t, &k).unwrap();
            let quantum = 2.0 * PI * k.hbar / t;
            assert!((e - quantum).abs() / quantum < 1e-12);
        }
        let k = planck();
        assert!((graviton_emission_bound(1.0, &k).unwrap() - 0.313_328_534_328_875_5).abs() < 1e-12);
        let r = graviton_emission_bound(2.0, &k).unwrap() / graviton_emission_bound(1.0, &k).unwrap();
        assert!((r - 4.0).abs() < 1e-14);
    }

    fn setup() -> InterferometerSetup {
        InterferometerSetup {
            m: 0.3,
            d: 1.2,
            big_d: 2.0,
            tau_a: 0.5,
            tau_f: 7.0,
            sigma: 1.0,
            delta_t: 0.01,
        }
    }

    #[test]
    fn phases_structure() {
        let k = planck();
        let alice = AliceQuadrupole {
            q0: 1.5,
            delta_q: 0.0,
            t_close: 1.0,
        };
        let p = gravitational_phases(&setup(), &alice, &k).unwrap();
        assert_eq!(p.gamma, 0.0);
        assert!((p.phi_pp - p.phi_pm - p.big_gamma).abs() < 1e-12);
        let alice = AliceQuadrupole { delta_q: 0.4, ..alice };
        let p = gravitational_phases(&setup(), &alice, &k).unwrap();
        let (g, small) = p.reconstruct();
        assert!((g - p.big_gamma).abs() < 1e-12 && (small - p.gamma).abs() < 1e-12);
        let direct = branch_phases_direct(&setup(), &alice, &k).unwrap();
        assert!((direct[0] - direct[1] - (p.big_gamma + p.gamma)).abs() < 1e-12);
        assert!((direct[2] - direct[3] - (p.big_gamma - p.gamma)).abs() < 1e-12);
    }

    #[test]
    fn quarter_phase_at_mass_condition() {
        let k = planck();
        let s = setup();
        let alice = AliceQuadrupole {
            q0: 1.0,
            delta_q: 0.2,
            t_close: 1.0,
        };
        let tau_e = s.effective_time().unwrap();
        let m = quarter_phase_mass(s.d, s.big_d, tau_e, alice.delta_q, &k).unwrap();
        let p = gravitational_phases(&InterferometerSetup { m, ..s }, &alice, &k).unwrap();
        assert!((p.gamma - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_and_displacement_share_dq() {
        let k = planck();
        let s = setup();
        let alice = AliceQuadrupole {
            q0: 1.0,
            delta_q: 0.37,
            t_close: 1.0,
        };
        let p = gravitational_phases(&s, &alice, &k).unwrap();
        let tau_e = s.effective_time().unwrap();
        let from_gamma = p.gamma * k.hbar * s.big_d.powi(4) / (6.0 * k.g * s.m * tau_e * s.d);
        let delta = test_particle_displacement(alice.delta_q, s.big_d, s.tau_f, &k).unwrap();
        let from_delta = delta * s.big_d.powi(4) / (3.0 * k.g * s.tau_f * s.tau_f);
        assert!((from_gamma - alice.delta_q).abs() < 1e-12);
        assert!((from_delta - alice.delta_q).abs() < 1e-12);
    }

    #[test]
    fn dimension_audit() {
        let k = Constants::si();
        let g = k.g_quantity();
        let hbar = k.hbar_quantity();
        let dq = PhysicalQuantity::new(1.0, Dimension::QUADRUPOLE);
        let big_d = PhysicalQuantity::new(1.0, Dimension::LENGTH);
        let t = PhysicalQuantity::new(1.0, Dimension::TIME);
        let m = PhysicalQuantity::new(1.0, Dimension::MASS);
        let delta = g * t.powi(2) * dq / big_d.powi(4) * 3.0;
        assert_eq!(delta.dim, Dimension::LENGTH);
        let gamma = g * m * t * big_d * dq / (hbar * big_d.powi(4)) * 6.0;
        assert!(gamma.dim.is_dimensionless());
    }

    #[test]
    fn expectation_values() {
        let q_minus = expectation_o(AliceState::QMinus, 1.0, PI / 2.0).unwrap();
        assert!(q_minus.abs() < 1e-15);
        assert_eq!(expectation_o(AliceState::QPlus, 1.0, PI / 2.0).unwrap(), 2.0);
        assert_eq!(expectation_o(AliceState::QPlus, 0.0, 0.3).unwrap(), 1.0);
        assert_eq!(expectation_o(AliceState::QMinus, 0.0, 0.3).unwrap(), 1.0);
        assert!((expectation_o(AliceState::QMinus, 1.0, PI / 4.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(expectation_o(AliceState::QPlus, 1.5, 0.0).is_err());
    }

    #[test]
    fn width_factor_values() {
        let k = planck();
        let s = optimal_sigma(1.0, 1.0, &k).unwrap();
        assert!((s - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((width_factor(1.0, s, 1.0, &k) - 2.0).abs() < 1e-14);
        // x/2 + 2/x at x = 4 (sigma doubled): 1/8... evaluated: 0.25 + 4
        assert!((width_factor(1.0, 2.0 * s, 1.0, &k) - 4.25).abs() < 1e-14);
        assert_eq!(averaged_visibility(1.0, 1.0, s, 1.0, 0.0, &k).unwrap(), 1.0);
        let a = averaged_visibility(0.7, 1.1, 0.9, 1.3, 1e-3, &k).unwrap();
        let b = averaged_visibility_at(0.7, 1.1, 0.9, 1.3, 1e-3, 1.3, &k).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn time_resolution() {
        let k = planck();
        let c = time_resolution_coefficient();
        assert!((c - 0.1429).abs() < 3e-4);
        assert!((time_resolution_bound(1.0, &k).unwrap() - c).abs() < 1e-15);
        let r = time_resolution_bound(1.0, &k).unwrap() / time_resolution_bound(2.0, &k).unwrap();
        assert!((r - 2.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn reconstruction_exact(phi0 in -50.0f64..50.0, g in -10.0f64..10.0, s in -10.0f64..10.0) {
            let p = PhaseSet::from_parts(phi0, g, s);
            let (g2, s2) = p.reconstruct();
            prop_assert!((g2 - g).abs() < 1e-12 && (s2 - s).abs() < 1e-12);
        }

        #[test]
        fn width_factor_at_least_two(m in 0.01f64..10.0, sigma in 0.01f64..10.0, tau in 0.01f64..10.0) {
            prop_assert!(width_factor(m, sigma, tau, &Constants::planck()) >= 2.0 - 1e-12);
        }
    }
}
