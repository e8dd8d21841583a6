//! Photon emission and absorption rates of the quasiatom.
//!
//! Two golden-rule prefactors are provided. [`Convention::Verbatim`]
//! carries an extra omega_fi^2 next to the momentum matrix element;
//! [`Convention::Standard`] is the plain A.p result
//! pi q^2 / (eps0 mu^2 omega V) |eps.p|^2. The total spontaneous rate is
//! likewise given both as 2 k_e w^3 q^2 |r|^2 / (hbar c^3) and as the
//! Einstein coefficient 4 k_e w^3 q^2 |r|^2 / (3 hbar c^3).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{self, Error, Result};
use crate::interferometry::InterferometerSetup;
use crate::quadrature::Quadrature;
use crate::units::Constants;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldMode {
    pub omega: f64,
    pub n_photons: u64,
    pub polarization: [f64; 3],
    pub volume: f64,
}

impl FieldMode {
    pub fn new(omega: f64, n_photons: u64, polarization: [f64; 3], volume: f64) -> Result<Self> {
        error::positive("omega", omega)?;
        error::positive("V", volume)?;
        let norm = polarization.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "polarization",
                reason: format!("must be a unit vector, |e| = {norm}"),
            });
        }
        Ok(Self {
            omega,
            n_photons,
            polarization,
            volume,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionRates {
    #[serde(rename = "gamma_emi")]
    pub gamma_emission: f64,
    #[serde(rename = "gamma_abs")]
    pub gamma_absorption: f64,
    #[serde(rename = "gamma_spo")]
    pub gamma_spontaneous: f64,
    /// 1 / gamma_emission: the excited-state lifetime in the driven field.
    pub lifetime: f64,
}

impl TransitionRates {
    /// Rates in an n-photon mode from the vacuum rate: (n+1) gamma for
    /// emission, n gamma for absorption.
    pub fn from_spontaneous(gamma_spontaneous: f64, n_photons: u64) -> Result<Self> {
        error::non_negative("gamma_spontaneous", gamma_spontaneous)?;
        let (emi, abs) = rate_ratios(n_photons);
        let gamma_emission = emi * gamma_spontaneous;
        Ok(Self {
            gamma_emission,
            gamma_absorption: abs * gamma_spontaneous,
            gamma_spontaneous,
            lifetime: if gamma_emission > 0.0 {
                1.0 / gamma_emission
            } else {
                f64::INFINITY
            },
        })
    }
}

/// Occupation factors (n + 1, n) for emission and absorption.
pub fn rate_ratios(n_photons: u64) -> (f64, f64) {
    let n = n_photons as f64;
    (n + 1.0, n)
}

/// tau = 1 / Gamma.
pub fn lifetime(rate: f64) -> Result<f64> {
    error::positive("rate", rate)?;
    Ok(1.0 / rate)
}

/// Total spontaneous rate as printed: w^3 q^2 |r|^2 / (2 pi eps0 hbar c^3).
pub fn spontaneous_rate_total(omega: f64, dipole_length: f64, q: f64, k: &Constants) -> Result<f64> {
    error::positive("omega", omega)?;
    Ok(2.0 * k.k_e * omega.powi(3) * q * q * dipole_length * dipole_length / (k.hbar * k.c.powi(3)))
}

/// Einstein A: w^3 q^2 |r|^2 / (3 pi eps0 hbar c^3).
pub fn einstein_a(omega: f64, dipole_length: f64, q: f64, k: &Constants) -> Result<f64> {
    error::positive("omega", omega)?;
    Ok(4.0 * k.k_e * omega.powi(3) * q * q * dipole_length * dipole_length / (3.0 * k.hbar * k.c.powi(3)))
}

fn transverse_basis(theta: f64, phi: f64, rotation: f64) -> [[f64; 3]; 2] {
    let e_theta = [theta.cos() * phi.cos(), theta.cos() * phi.sin(), -theta.sin()];
    let e_phi = [-phi.sin(), phi.cos(), 0.0];
    let (s, c) = rotation.sin_cos();
    let mix = |a: f64, b: f64| -> [f64; 3] {
        [
            a * e_theta[0] + b * e_phi[0],
            a * e_theta[1] + b * e_phi[1],
            a * e_theta[2] + b * e_phi[2],
        ]
    };
    [mix(c, s), mix(-s, c)]
}

/// Integrate the per-mode vacuum rate pi w_fi^2 |eps* . d|^2 / (eps0 w V)
/// over emission directions and both transverse polarizations with the
/// mode density V w^2 / (2 pi c)^3 dOmega dw. `rotation` turns the
/// polarization basis about each propagation direction.
pub fn spontaneous_rate_direction_integrated(
    omega: f64,
    dipole: [Complex64; 3],
    q: f64,
    rotation: f64,
    k: &Constants,
) -> Result<f64> {
    error::positive("omega", omega)?;
    let eps0 = 1.0 / (4.0 * PI * k.k_e);
    let angular = Quadrature::with_tolerances(1e-12, 1e-300).integrate_2d(
        |theta, phi| {
            let basis = transverse_basis(theta, phi, rotation);
            let sum: f64 = basis
                .iter()
                .map(|e| {
                    (0..3)
                        .map(|i| dipole[i] * e[i])
                        .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
                        .norm_sqr()
                })
                .sum();
            sum * theta.sin()
        },
        (0.0, PI),
        (0.0, 2.0 * PI),
    )?;
    // per-mode rate at w = w_fi, times mode density, delta(E) = delta(w)/hbar
    let per_mode = PI * omega * omega / (eps0 * omega) * q * q;
    let density = omega * omega / (2.0 * PI * k.c).powi(3);
    Ok(per_mode * density * angular / k.hbar)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Channel {
    Emission,
    Absorption,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// pi q^2 w_fi^2 / (eps0 mu^2 w V) |eps.p|^2, as printed.
    Verbatim,
    /// pi q^2 / (eps0 mu^2 w V) |eps.p|^2.
    Standard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenRuleInput {
    pub mode: FieldMode,
    /// Atomic transition frequency |E_f - E_i| / hbar.
    pub omega_fi: f64,
    /// |<f| eps . p |i>|^2
    pub momentum_matrix_sq: f64,
    pub q: f64,
    pub mu: f64,
    /// Line-shape density (per unit energy) standing in for the delta.
    pub spectral_density: f64,
}

/// Golden-rule rate for one mode. The energy delta is honoured only on
/// resonance (|w - w_fi| <= 1e-9 w_fi), where it is replaced by
/// `spectral_density`; off resonance the rate is zero.
pub fn golden_rule_rate(
    input: &GoldenRuleInput,
    channel: Channel,
    convention: Convention,
    k: &Constants,
) -> Result<f64> {
    error::positive("omega_fi", input.omega_fi)?;
    error::positive("mu", input.mu)?;
    error::non_negative("spectral_density", input.spectral_density)?;
    let w = input.mode.omega;
    if (w - input.omega_fi).abs() > 1e-9 * input.omega_fi {
        log::warn!(
            "mode frequency {w} is off the transition frequency {}; rate set to zero",
            input.omega_fi
        );
        return Ok(0.0);
    }
    let eps0 = 1.0 / (4.0 * PI * k.k_e);
    let (emi, abs) = rate_ratios(input.mode.n_photons);
    let occupation = match channel {
        Channel::Emission => emi,
        Channel::Absorption => abs,
    };
    let extra = match convention {
        Convention::Verbatim => input.omega_fi * input.omega_fi,
        Convention::Standard => 1.0,
    };
    Ok(
        PI * input.q * input.q * extra / (eps0 * input.mu * input.mu * w * input.mode.volume)
            * occupation
            * input.momentum_matrix_sq
            * input.spectral_density,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityWindow {
    /// Spontaneous lifetime exceeds the free-flight time.
    pub stable: bool,
    /// Absorption time is shorter than the acceleration time.
    pub excitation_ok: bool,
    /// lifetime / tau_f (infinite without spontaneous decay).
    pub lifetime_margin: f64,
    /// tau_a / absorption time.
    pub excitation_margin: f64,
}

impl StabilityWindow {
    pub fn passes(&self) -> bool {
        self.stable && self.excitation_ok
    }
}

/// Strict comparisons; a ratio of exactly one fails.
pub fn stability_window(setup: &InterferometerSetup, rates: &TransitionRates) -> StabilityWindow {
    let spont_life = if rates.gamma_spontaneous > 0.0 {
        1.0 / rates.gamma_spontaneous
    } else {
        f64::INFINITY
    };
    let lifetime_margin = spont_life / setup.tau_f;
    let excitation_margin = setup.tau_a * rates.gamma_absorption;
    StabilityWindow {
        stable: lifetime_margin > 1.0,
        excitation_ok: excitation_margin > 1.0,
        lifetime_margin,
        excitation_margin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasiatom::{self, hydrogen_si};
    use crate::units::{Dimension, PhysicalQuantity};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn occupation_factors() {
        assert_eq!(rate_ratios(0), (1.0, 0.0));
        let (e, a) = rate_ratios(1_000_000);
        assert_eq!(a, 1e6);
        assert_eq!(e - a, 1.0);
        for n in [1u64, 2, 17, 1000, 1_000_000] {
            let r = TransitionRates::from_spontaneous(3.0, n).unwrap();
            let expect = (n as f64 + 1.0) / n as f64;
            assert!((r.gamma_emission / r.gamma_absorption - expect).abs() <= 1e-15 * expect);
            assert!(r.gamma_emission >= r.gamma_spontaneous);
        }
    }

    #[test]
    fn lifetimes() {
        assert_eq!(lifetime(1.0).unwrap(), 1.0);
        assert!(lifetime(0.0).is_err());
        assert!((lifetime(5.0 * 2.0).unwrap() - lifetime(2.0).unwrap() / 5.0).abs() < 1e-16);
        let r = TransitionRates::from_spontaneous(2.0, 9).unwrap();
        assert!((r.lifetime - lifetime(2.0).unwrap() / 10.0).abs() < 1e-16);
    }

    #[test]
    fn spontaneous_scaling() {
        let k = Constants::planck();
        assert_eq!(spontaneous_rate_total(1.0, 0.0, 1.0, &k).unwrap(), 0.0);
        let r = spontaneous_rate_total(2.0, 1.0, 1.0, &k).unwrap() / spontaneous_rate_total(1.0, 1.0, 1.0, &k).unwrap();
        assert!((r - 8.0).abs() < 1e-14);
    }

    #[test]
    fn direction_integral_reproduces_einstein_a() {
        let k = Constants::planck();
        let d = [
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.0),
            Complex64::new(0.5, -0.4),
        ];
        let mag = d.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let num = spontaneous_rate_direction_integrated(0.7, d, 1.0, 0.0, &k).unwrap();
        let a = einstein_a(0.7, mag, 1.0, &k).unwrap();
        assert!((num - a).abs() / a < 1e-10);
        // printed total is 3/2 of it
        let total = spontaneous_rate_total(0.7, mag, 1.0, &k).unwrap();
        assert!((total / a - 1.5).abs() < 1e-12);
    }

    #[test]
    fn polarization_rotation_invariance() {
        let k = Constants::planck();
        let d = [
            Complex64::new(0.1, 0.0),
            Complex64::new(0.0, 0.7),
            Complex64::new(0.4, 0.0),
        ];
        let base = spontaneous_rate_direction_integrated(1.1, d, 1.0, 0.0, &k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let rot = rng.gen_range(0.0..2.0 * PI);
            let v = spontaneous_rate_direction_integrated(1.1, d, 1.0, rot, &k).unwrap();
            assert!((v - base).abs() / base < 1e-10);
        }
    }

    #[test]
    fn hydrogen_2p_rate_order_of_magnitude() {
        let k = Constants::si();
        let h = hydrogen_si();
        let a0 = h.bohr_radius(&k);
        let omega = 0.75 * h.rydberg_energy(&k) / k.hbar;
        // |<1s| r |2p0>| = (1/sqrt 3)(radial) a0 ... z-component only
        let r = quasiatom::dipole_coefficient() * a0;
        let einstein = einstein_a(omega, r, h.q, &k).unwrap();
        assert!((einstein - 6.27e8).abs() / 6.27e8 < 5e-3, "{einstein:e}");
        let printed = spontaneous_rate_total(omega, r, h.q, &k).unwrap();
        assert!(printed / einstein > 1.0 && printed / einstein < 2.0 * PI);
    }

    #[test]
    fn golden_rule_resonance_handling() {
        let k = Constants::planck();
        let mode = FieldMode::new(2.0, 3, [0.0, 0.0, 1.0], 10.0).unwrap();
        let input = GoldenRuleInput {
            mode,
            omega_fi: 2.0,
            momentum_matrix_sq: 0.5,
            q: 0.3,
            mu: 1.5,
            spectral_density: 1.0,
        };
        let s = golden_rule_rate(&input, Channel::Emission, Convention::Standard, &k).unwrap();
        let v = golden_rule_rate(&input, Channel::Emission, Convention::Verbatim, &k).unwrap();
        assert!((v / s - 4.0).abs() < 1e-14);
        let a = golden_rule_rate(&input, Channel::Absorption, Convention::Standard, &k).unwrap();
        assert!((s / a - 4.0 / 3.0).abs() < 1e-14);
        let off = GoldenRuleInput { omega_fi: 2.1, ..input };
        assert_eq!(
            golden_rule_rate(&off, Channel::Emission, Convention::Standard, &k).unwrap(),
            0.0
        );
    }

    fn setup() -> InterferometerSetup {
        InterferometerSetup {
            m: 1.0,
            d: 1.0,
            big_d: 1.0,
            tau_a: 1.0,
            tau_f: 100.0,
            sigma: 1.0,
            delta_t: 0.1,
        }
    }

    #[test]
    fn stability_semantics() {
        let s = setup();
        let none = TransitionRates::from_spontaneous(0.0, 5).unwrap();
        assert!(stability_window(&s, &none).stable);
        // lifetime exactly tau_f
        let edge = TransitionRates::from_spontaneous(1.0 / s.tau_f, 1).unwrap();
        let w = stability_window(&s, &edge);
        assert!(!w.stable);
        assert_eq!(w.lifetime_margin, 1.0);
        // absorption time tau_a / 10 and lifetime 10 tau_f
        let gamma = 1.0 / (10.0 * s.tau_f);
        let n = (10.0 / (s.tau_a * gamma)).round() as u64;
        let r = TransitionRates::from_spontaneous(gamma, n).unwrap();
        let w = stability_window(&s, &r);
        assert!(w.passes());
        assert!((w.lifetime_margin - 10.0).abs() < 1e-12);
        assert!((w.excitation_margin - 10.0).abs() < 1e-9);
    }

    #[test]
    fn rate_dimension() {
        let k = Constants::si();
        let omega = PhysicalQuantity::new(1.0, Dimension::FREQUENCY);
        let r = PhysicalQuantity::new(1.0, Dimension::LENGTH);
        let gamma = k.k_e_quantity() * omega.powi(3) * k.e_quantity().powi(2) * r.powi(2)
            / (k.hbar_quantity() * k.c_quantity().powi(3));
        assert_eq!(gamma.dim, Dimension::FREQUENCY);
    }
}
