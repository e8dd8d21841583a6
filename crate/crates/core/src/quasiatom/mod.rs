//! Generalised hydrogen atom: two masses m1, m2 bound by charges +-q.
//!
//! In relative coordinates the problem is hydrogen with reduced mass mu,
//! Rydberg energy E_R = k_e^2 q^4 mu / (2 hbar^2) and Bohr radius
//! a0 = hbar^2 / (k_e mu q^2). The centre-of-mass Hamiltonian and the
//! A^2 term are dropped, so neither appears here.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{self, Error, Result};
use crate::quadrature::Quadrature;
use crate::special::{factorial, gaunt_conj, laguerre, spherical_harmonic};
use crate::units::Constants;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiatomParams {
    pub m1: f64,
    pub m2: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiatomSummary {
    #[serde(rename = "M")]
    pub total_mass: f64,
    pub mu: f64,
    #[serde(rename = "E_R")]
    pub rydberg: f64,
    pub a0: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    #[serde(rename = "E1")]
    pub e1: f64,
    pub dipole_coeff: f64,
}

impl QuasiatomParams {
    pub fn new(m1: f64, m2: f64, q: f64) -> Result<Self> {
        error::positive("m1", m1)?;
        error::positive("m2", m2)?;
        error::finite("q", q)?;
        if q == 0.0 {
            return Err(Error::InvalidParameter {
                name: "q",
                reason: "an unbound pair has no spectrum".into(),
            });
        }
        Ok(Self { m1, m2, q })
    }

    pub fn total_mass(&self) -> f64 {
        self.m1 + self.m2
    }

    pub fn reduced_mass(&self) -> f64 {
        self.m1 * self.m2 / (self.m1 + self.m2)
    }

    pub fn rydberg_energy(&self, k: &Constants) -> f64 {
        k.k_e.powi(2) * self.q.powi(4) * self.reduced_mass() / (2.0 * k.hbar * k.hbar)
    }

    pub fn bohr_radius(&self, k: &Constants) -> f64 {
        k.hbar * k.hbar / (k.k_e * self.reduced_mass() * self.q * self.q)
    }

    /// Total energies of n = 1 and n = 2: (Mc^2 - E_R, Mc^2 - E_R/4).
    pub fn energy_levels(&self, k: &Constants) -> (f64, f64) {
        let mc2 = self.total_mass() * k.c * k.c;
        let er = self.rydberg_energy(k);
        (mc2 - er, mc2 - er / 4.0)
    }

    pub fn summary(&self, k: &Constants) -> QuasiatomSummary {
        let (e0, e1) = self.energy_levels(k);
        QuasiatomSummary {
            total_mass: self.total_mass(),
            mu: self.reduced_mass(),
            rydberg: self.rydberg_energy(k),
            a0: self.bohr_radius(k),
            e0,
            e1,
            dipole_coeff: dipole_coefficient(),
        }
    }
}

/// SI hydrogen: proton, electron, elementary charge.
pub fn hydrogen_si() -> QuasiatomParams {
    use crate::units::codata;
    QuasiatomParams {
        m1: codata::PROTON_MASS,
        m2: codata::ELECTRON_MASS,
        q: codata::ELEMENTARY_CHARGE,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitalLabel {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

impl OrbitalLabel {
    pub const ONE_S: Self = Self { n: 1, l: 0, m: 0 };
    pub const TWO_S: Self = Self { n: 2, l: 0, m: 0 };
    pub const TWO_P0: Self = Self { n: 2, l: 1, m: 0 };
    pub const TWO_P_PLUS: Self = Self { n: 2, l: 1, m: 1 };
    pub const TWO_P_MINUS: Self = Self { n: 2, l: 1, m: -1 };

    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        let label = Self { n, l, m };
        label.validate()?;
        Ok(label)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.l >= self.n || self.m.unsigned_abs() > self.l {
            return Err(Error::InvalidParameter {
                name: "orbital",
                reason: format!(
                    "(n, l, m) = ({}, {}, {}) violates n >= 1, l < n, |m| <= l",
                    self.n, self.l, self.m
                ),
            });
        }
        Ok(())
    }

    /// All orbitals up to and including shell `n_max`.
    pub fn up_to(n_max: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for n in 1..=n_max {
            for l in 0..n {
                for m in -(l as i32)..=(l as i32) {
                    out.push(Self { n, l, m });
                }
            }
        }
        out
    }
}

/// Radial function R_nl(r) with normalisation int R^2 r^2 dr = 1.
pub fn radial(n: u32, l: u32, r: f64, a0: f64) -> f64 {
    let rho = 2.0 * r / (n as f64 * a0);
    let norm = (4.0 * factorial(n - l - 1) / (n.pow(4) as f64 * a0.powi(3) * factorial(n + l))).sqrt();
    norm * (-rho / 2.0).exp() * rho.powi(l as i32) * laguerre(n - l - 1, (2 * l + 1) as f64, rho)
}

/// dR_nl/dr, analytic.
pub fn radial_derivative(n: u32, l: u32, r: f64, a0: f64) -> f64 {
    let rho = 2.0 * r / (n as f64 * a0);
    let norm = (4.0 * factorial(n - l - 1) / (n.pow(4) as f64 * a0.powi(3) * factorial(n + l))).sqrt();
    let k = n - l - 1;
    let alpha = (2 * l + 1) as f64;
    let lag = laguerre(k, alpha, rho);
    let dlag = if k == 0 {
        0.0
    } else {
        -laguerre(k - 1, alpha + 1.0, rho)
    };
    let e = (-rho / 2.0).exp();
    let pow_term = if l == 0 { 0.0 } else { l as f64 * rho.powi(l as i32 - 1) };
    let d_rho = norm * e * (pow_term * lag - 0.5 * rho.powi(l as i32) * lag + rho.powi(l as i32) * dlag);
    d_rho * 2.0 / (n as f64 * a0)
}

/// psi_nlm(r, theta, phi).
pub fn wavefunction(orbital: OrbitalLabel, r: f64, theta: f64, phi: f64, a0: f64) -> Result<Complex64> {
    orbital.validate()?;
    error::non_negative("r", r)?;
    error::positive("a0", a0)?;
    if orbital.n > 3 {
        log::debug!("orbital n = {} beyond the n <= 3 set is experimental", orbital.n);
    }
    Ok(spherical_harmonic(orbital.l, orbital.m, theta, phi) * radial(orbital.n, orbital.l, r, a0))
}

/// Outer radius for radial quadrature: 40 n a0.
pub fn radial_cutoff(n_max: u32, a0: f64) -> f64 {
    40.0 * n_max as f64 * a0
}

/// int_0^inf R_{n1 l1} R_{n2 l2} r^(2 + power) dr.
pub fn radial_integral(n1: u32, l1: u32, n2: u32, l2: u32, power: i32, a0: f64) -> Result<f64> {
    let cut = radial_cutoff(n1.max(n2), a0);
    Quadrature::with_tolerances(1e-12, 1e-16).integrate(
        |r| radial(n1, l1, r, a0) * radial(n2, l2, r, a0) * r.powi(2 + power),
        0.0,
        cut,
    )
}

/// Radial 1s-2p0 dipole integral in units of a0: 64 sqrt(24) / 243.
pub fn radial_dipole_integral() -> Result<f64> {
    radial_integral(1, 0, 2, 1, 1, 1.0)
}

pub fn radial_dipole_closed_form() -> f64 {
    64.0 * 24f64.sqrt() / 243.0
}

/// <l' m'| cos theta |l m> from Gaunt coefficients (cos theta = sqrt(4 pi/3) Y_1^0).
pub fn angular_dipole_factor(l_bra: u32, m_bra: i32, l_ket: u32, m_ket: i32) -> Result<f64> {
    if l_bra > 3 || l_ket > 3 || m_bra.unsigned_abs() > l_bra || m_ket.unsigned_abs() > l_ket {
        return Err(Error::Unsupported(format!(
            "angular factor for ({l_bra},{m_bra}) <- ({l_ket},{m_ket})"
        )));
    }
    Ok((4.0 * PI / 3.0).sqrt() * gaunt_conj(l_bra as i32, m_bra, 1, 0, l_ket as i32, m_ket))
}

/// Same factor by direct quadrature over the sphere.
pub fn angular_dipole_factor_quadrature(l_bra: u32, m_bra: i32, l_ket: u32, m_ket: i32) -> Result<Complex64> {
    Quadrature::with_tolerances(1e-12, 1e-15).integrate_2d(
        |theta, phi| {
            spherical_harmonic(l_bra, m_bra, theta, phi).conj()
                * theta.cos()
                * spherical_harmonic(l_ket, m_ket, theta, phi)
                * theta.sin()
        },
        (0.0, PI),
        (0.0, 2.0 * PI),
    )
}

/// 128 sqrt(2) / 243 = (1/sqrt 3)(64 sqrt 24 / 243).
pub fn dipole_coefficient() -> f64 {
    128.0 * 2f64.sqrt() / 243.0
}

/// <1s| -q E z |2p0> = -(128 sqrt 2 / 243) q a0 E.
pub fn dipole_matrix_element(e_field: f64, params: &QuasiatomParams, k: &Constants) -> f64 {
    -dipole_coefficient() * params.q * params.bohr_radius(k) * e_field
}

/// <bra| f(r, theta, phi) |ket> by nested quadrature in spherical
/// coordinates.
pub fn volume_matrix_element<F>(bra: OrbitalLabel, ket: OrbitalLabel, a0: f64, op: F) -> Result<Complex64>
where
    F: Fn(f64, f64, f64) -> f64,
{
    bra.validate()?;
    ket.validate()?;
    let cut = radial_cutoff(bra.n.max(ket.n), a0);
    let q = Quadrature {
        rel_tol: 1e-11,
        abs_tol: 1e-14,
        max_intervals: 4000,
    };
    q.integrate_3d(
        |r, theta, phi| {
            let psi_b = spherical_harmonic(bra.l, bra.m, theta, phi) * radial(bra.n, bra.l, r, a0);
            let psi_k = spherical_harmonic(ket.l, ket.m, theta, phi) * radial(ket.n, ket.l, r, a0);
            psi_b.conj() * psi_k * (op(r, theta, phi) * r * r * theta.sin())
        },
        (0.0, cut),
        (0.0, PI),
        (0.0, 2.0 * PI),
    )
}

/// <p^2 / 2 mu> for an eigenstate, in units of hbar^2 / (mu a0^2).
pub fn kinetic_expectation(orbital: OrbitalLabel, a0: f64) -> Result<f64> {
    orbital.validate()?;
    let (n, l) = (orbital.n, orbital.l);
    let ll = (l * (l + 1)) as f64;
    let v = Quadrature::with_tolerances(1e-12, 1e-16).integrate(
        |r| {
            let centrifugal = if l == 0 { 0.0 } else { ll * radial(n, l, r, a0).powi(2) };
            radial_derivative(n, l, r, a0).powi(2) * r * r + centrifugal
        },
        0.0,
        radial_cutoff(n, a0),
    )?;
    Ok(0.5 * v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BohrRadiusBound {
    pub mass_ratio: f64,
    /// hbar / sqrt(2 mu E_R) at E_R = x M c^2, M = M_min (Planck lengths).
    pub a0: f64,
    /// Rounded form a0 < hbar^2 / (c179 k_e e^2 sqrt(M mu)) at M = M_min.
    pub a0_charge_form: f64,
    /// sqrt(M/mu) coefficient of the saturating a0.
    pub slope: f64,
}

/// Bohr radius at the saturating point of the internal-energy chain:
/// E_R = x M c^2 with M = m_bound m_P. `coef_179` is the squared charge
/// coefficient of q > c13.4 e (M/mu)^(1/4).
pub fn bohr_radius_bound(
    mass_ratio: f64,
    x: f64,
    m_bound: f64,
    coef_179: f64,
    k: &Constants,
) -> Result<BohrRadiusBound> {
    if !(mass_ratio >= 4.0) {
        return Err(Error::InvalidParameter {
            name: "mass_ratio",
            reason: format!("M/mu is at least 4, got {mass_ratio}"),
        });
    }
    error::positive("x", x)?;
    error::positive("m_bound", m_bound)?;
    let m = m_bound * k.planck_mass();
    let mu = m / mass_ratio;
    let e_r = x * m * k.c * k.c;
    let a0 = k.hbar / (2.0 * mu * e_r).sqrt();
    let alpha = k.fine_structure();
    let a0_charge_form = k.hbar * k.hbar / (coef_179 * alpha * k.hbar * k.c * (m * mu).sqrt());
    let l_p = k.planck_length();
    Ok(BohrRadiusBound {
        mass_ratio,
        a0: a0 / l_p,
        a0_charge_form: a0_charge_form / l_p,
        slope: a0 / l_p / mass_ratio.sqrt(),
    })
}
