//! Graviton absorption by the quasiatom: strain amplitude, transverse-
//! traceless polarizations, the rank-two spherical unit tensors, first- and
//! second-order transition amplitudes and the resulting constant rate.
//!
//! The drive is the classical H_int = (h/2)(mu/M) w^2 sin(wt) e_ij x^i x^j
//! in the dipole approximation. Its matrix elements are written
//! lambda sin(wt) X with X = <a| e_ij x^i x^j |b> and
//! lambda = (2 mu / M c) sqrt(pi G hbar w^3 / V).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{self, Error, Result};
use crate::quadrature::Quadrature;
use crate::quasiatom::{self, OrbitalLabel, QuasiatomParams};
use crate::special::{gaunt_conj, spherical_harmonic};
use crate::units::Constants;

type Mat3 = [[f64; 3]; 3];
type CMat3 = [[Complex64; 3]; 3];

/// h = sqrt(16 pi G hbar / (V w c^2)).
pub fn strain_amplitude(omega: f64, volume: f64, k: &Constants) -> Result<f64> {
    error::positive("omega", omega)?;
    error::positive("V", volume)?;
    Ok((16.0 * PI * k.g * k.hbar / (volume * omega * k.c * k.c)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GwKind {
    Plus,
    Cross,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GWPolarization {
    pub e: Mat3,
    pub k_hat: [f64; 3],
    pub kind: GwKind,
}

fn normalize(v: [f64; 3]) -> Result<[f64; 3]> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidParameter {
            name: "k_hat",
            reason: "propagation direction must be a nonzero finite vector".into(),
        });
    }
    Ok([v[0] / n, v[1] / n, v[2] / n])
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl GWPolarization {
    /// e+ = e1 e1 - e2 e2 and ex = e1 e2 + e2 e1 with (e1, e2, k) a right-
    /// handed frame. Along z this gives e1 = x, e2 = y.
    pub fn new(k_hat: [f64; 3], kind: GwKind) -> Result<Self> {
        let k = normalize(k_hat)?;
        let e1 = if (k[2].abs() - 1.0).abs() < 1e-15 {
            [1.0, 0.0, 0.0]
        } else {
            // theta direction of k
            let rho = (k[0] * k[0] + k[1] * k[1]).sqrt();
            [k[2] * k[0] / rho, k[2] * k[1] / rho, -rho]
        };
        let e2 = cross(k, e1);
        let mut e = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                e[i][j] = match kind {
                    GwKind::Plus => e1[i] * e1[j] - e2[i] * e2[j],
                    GwKind::Cross => e1[i] * e2[j] + e2[i] * e1[j],
                };
            }
        }
        Ok(Self { e, k_hat: k, kind })
    }

    pub fn along_z(kind: GwKind) -> Self {
        Self::new([0.0, 0.0, 1.0], kind).expect("z is a valid direction")
    }

    /// Largest violation among transversality, symmetry, tracelessness and
    /// e_ij e^ij = 2.
    pub fn invariant_residual(&self) -> f64 {
        let e = &self.e;
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            let t: f64 = (0..3).map(|j| e[i][j] * self.k_hat[j]).sum();
            worst = worst.max(t.abs());
            for j in 0..3 {
                worst = worst.max((e[i][j] - e[j][i]).abs());
            }
        }
        worst = worst.max((e[0][0] + e[1][1] + e[2][2]).abs());
        let norm: f64 = e.iter().flatten().map(|x| x * x).sum();
        worst.max((norm - 2.0).abs())
    }

    /// e_ij x^i x^j
    pub fn contract(&self, x: [f64; 3]) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.e[i][j] * x[i] * x[j];
            }
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalUnitTensor {
    pub m: i32,
    pub components: CMat3,
}

impl SphericalUnitTensor {
    /// The bare integer matrices as tabulated (no normalisation).
    pub fn unnormalized(m: i32) -> Result<CMat3> {
        let z = Complex64::new(0.0, 0.0);
        let r = |x: f64| Complex64::new(x, 0.0);
        let s = m.signum() as f64;
        let i = Complex64::new(0.0, s);
        Ok(match m {
            2 | -2 => [[r(1.0), i, z], [i, r(-1.0), z], [z, z, z]],
            1 | -1 => [[z, z, r(1.0)], [z, z, i], [r(1.0), i, z]],
            0 => [[r(-1.0), z, z], [z, r(-1.0), z], [z, z, r(2.0)]],
            _ => {
                return Err(Error::InvalidParameter {
                    name: "m",
                    reason: format!("must lie in [-2, 2], got {m}"),
                })
            }
        })
    }

    /// Scaled so that Y_2^m(r) = Y^m_ij r^i r^j for unit r.
    pub fn new(m: i32) -> Result<Self> {
        let base = Self::unnormalized(m)?;
        let n = match m {
            2 | -2 | -1 => (15.0 / (32.0 * PI)).sqrt(),
            1 => -(15.0 / (32.0 * PI)).sqrt(),
            _ => (5.0 / (16.0 * PI)).sqrt(),
        };
        let mut components = base;
        for row in components.iter_mut() {
            for c in row.iter_mut() {
                *c *= n;
            }
        }
        Ok(Self { m, components })
    }

    pub fn all() -> [Self; 5] {
        [-2, -1, 0, 1, 2].map(|m| Self::new(m).expect("m in range"))
    }

    pub fn contract(&self, x: [f64; 3]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                s += self.components[i][j] * (x[i] * x[j]);
            }
        }
        s
    }

    /// sum_ij e_ij conj(Y^m_ij)
    pub fn project(&self, e: &Mat3) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                s += self.components[i][j].conj() * e[i][j];
            }
        }
        s
    }
}

/// (8 pi / 15) sum_m conj(Y^m_ij) Y_2^m(theta, phi), which equals
/// r_i r_j - delta_ij / 3.
pub fn unit_tensor_expansion(theta: f64, phi: f64) -> CMat3 {
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for t in SphericalUnitTensor::all() {
        let y = spherical_harmonic(2, t.m, theta, phi);
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] += t.components[i][j].conj() * y * (8.0 * PI / 15.0);
            }
        }
    }
    out
}

/// <bra| e_ij x^i x^j |ket> by 3-D quadrature.
pub fn quadrupole_matrix_element(
    bra: OrbitalLabel,
    ket: OrbitalLabel,
    pol: &GWPolarization,
    a0: f64,
) -> Result<Complex64> {
    quasiatom::volume_matrix_element(bra, ket, a0, |r, theta, phi| {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        pol.contract([r * st * cp, r * st * sp, r * ct])
    })
}

/// Same element through the unit-tensor decomposition: radial r^4
/// integral times (8 pi / 15) sum_m (e : conj Y^m) <bra| Y_2^m |ket>.
pub fn quadrupole_matrix_element_decomposed(
    bra: OrbitalLabel,
    ket: OrbitalLabel,
    pol: &GWPolarization,
    a0: f64,
) -> Result<Complex64> {
    bra.validate()?;
    ket.validate()?;
    let mut angular = Complex64::new(0.0, 0.0);
    for t in SphericalUnitTensor::all() {
        let g = gaunt_conj(bra.l as i32, bra.m, 2, t.m, ket.l as i32, ket.m);
        if g != 0.0 {
            angular += t.project(&pol.e) * g;
        }
    }
    if angular.norm() == 0.0 {
        return Ok(angular);
    }
    let radial = quasiatom::radial_integral(bra.n, bra.l, ket.n, ket.l, 2, a0)?;
    Ok(angular * (8.0 * PI / 15.0) * radial)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiHarmonic {
    Cos2,
    Sin2,
}

/// int_0^{2 pi} e^{i n phi} cos 2phi (or sin 2phi) dphi.
pub fn phi_selection_integral(n: i32, which: PhiHarmonic) -> Complex64 {
    match (which, n) {
        (PhiHarmonic::Cos2, 2 | -2) => Complex64::new(PI, 0.0),
        (PhiHarmonic::Sin2, 2) => Complex64::new(0.0, PI),
        (PhiHarmonic::Sin2, -2) => Complex64::new(0.0, -PI),
        _ => Complex64::new(0.0, 0.0),
    }
}

pub fn phi_selection_integral_numeric(n: i32, which: PhiHarmonic) -> Result<Complex64> {
    Quadrature::with_tolerances(1e-14, 1e-15).integrate(
        |phi| {
            let h = match which {
                PhiHarmonic::Cos2 => (2.0 * phi).cos(),
                PhiHarmonic::Sin2 => (2.0 * phi).sin(),
            };
            Complex64::from_polar(1.0, n as f64 * phi) * h
        },
        0.0,
        2.0 * PI,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    pub l_initial: u32,
    pub l_final: u32,
    /// Single-graviton transition allowed (|dl| = 2).
    pub allowed: bool,
    /// Electric-dipole transition allowed (|dl| = 1).
    pub dipole_allowed: bool,
}

impl Selection {
    pub fn describe(&self) -> &'static str {
        match (self.allowed, self.dipole_allowed) {
            (true, _) => "gravitationally allowed",
            (false, true) => "electromagnetically allowed but gravitationally forbidden",
            (false, false) => "forbidden",
        }
    }
}

/// Single-graviton rule: |l_f - l_i| = 2. The dl = 0 part of the rank-two
/// operator is not counted.
pub fn selection_rule(l_initial: u32, l_final: u32) -> Selection {
    let dl = l_initial.abs_diff(l_final);
    Selection {
        l_initial,
        l_final,
        allowed: dl == 2,
        dipole_allowed: dl == 1,
    }
}

pub fn selection_table(l_max: u32) -> Vec<Selection> {
    let mut rows = Vec::new();
    for li in 0..=l_max {
        for lf in 0..=l_max {
            rows.push(selection_rule(li, lf));
        }
    }
    rows
}

/// Masses and box volume entering the graviton coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GravitonCoupling {
    pub mu: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    #[serde(rename = "V")]
    pub volume: f64,
}

impl GravitonCoupling {
    pub fn new(mu: f64, big_m: f64, volume: f64) -> Result<Self> {
        error::positive("mu", mu)?;
        error::positive("M", big_m)?;
        error::positive("V", volume)?;
        Ok(Self { mu, big_m, volume })
    }

    pub fn from_atom(params: &QuasiatomParams, volume: f64) -> Result<Self> {
        Self::new(params.reduced_mass(), params.total_mass(), volume)
    }

    /// lambda(w) = (h/2)(mu/M) w^2, the sin(wt) amplitude per unit X.
    pub fn drive(&self, omega: f64, k: &Constants) -> Result<f64> {
        Ok(0.5 * strain_amplitude(omega, self.volume, k)? * self.mu / self.big_m * omega * omega)
    }

    /// mu^2 pi G / (hbar V M^2 c^2)
    fn rate_scale(&self, k: &Constants) -> f64 {
        self.mu * self.mu * PI * k.g / (k.hbar * self.volume * self.big_m * self.big_m * k.c * k.c)
    }
}

/// (e^{i W t} - 1) / W, continued to i t at W = 0.
pub fn b_factor(w: f64, t: f64) -> Complex64 {
    let x = w * t;
    if x.abs() < 1e-8 {
        return Complex64::new(-x / 2.0, 1.0 - x * x / 6.0) * t;
    }
    let h = (0.5 * x).sin();
    Complex64::new(-2.0 * h * h, x.sin()) / w
}

/// First-order amplitude under the classical drive:
/// (i mu / M c) sqrt(pi G w^3 / (V hbar)) X (B(w_ab + w) - B(w_ab - w)).
pub fn first_order_amplitude(
    x_ab: Complex64,
    omega_ab: f64,
    omega: f64,
    t: f64,
    coupling: &GravitonCoupling,
    k: &Constants,
) -> Result<Complex64> {
    error::positive("omega", omega)?;
    error::non_negative("t", t)?;
    let pre = coupling.mu / (coupling.big_m * k.c) * (PI * k.g * omega.powi(3) / (coupling.volume * k.hbar)).sqrt();
    Ok(Complex64::i() * pre * x_ab * (b_factor(omega_ab + omega, t) - b_factor(omega_ab - omega, t)))
}

/// First-order amplitude for single-graviton emission with the quantized
/// matrix element (mu / M c) sqrt(pi G hbar w^3 / V) e^{iwt} X.
pub fn first_order_amplitude_emission(
    x_ab: Complex64,
    omega_ab: f64,
    omega: f64,
    t: f64,
    coupling: &GravitonCoupling,
    k: &Constants,
) -> Result<Complex64> {
    error::positive("omega", omega)?;
    error::non_negative("t", t)?;
    let g = coupling.mu / (coupling.big_m * k.c) * (PI * k.g * k.hbar * omega.powi(3) / coupling.volume).sqrt();
    Ok(-(g / k.hbar) * x_ab * b_factor(omega_ab + omega, t))
}

/// Hydrogen-like level frequency E_n / hbar = -E_R / (hbar n^2).
pub fn level_frequency(n: u32, params: &QuasiatomParams, k: &Constants) -> f64 {
    -params.rydberg_energy(k) / (k.hbar * (n * n) as f64)
}

pub fn first_order_amplitude_orbitals(
    alpha: OrbitalLabel,
    beta: OrbitalLabel,
    pol: &GWPolarization,
    omega: f64,
    t: f64,
    params: &QuasiatomParams,
    volume: f64,
    k: &Constants,
) -> Result<Complex64> {
    let a0 = params.bohr_radius(k);
    let x = quadrupole_matrix_element_decomposed(alpha, beta, pol, a0)?;
    let w_ab = level_frequency(alpha.n, params, k) - level_frequency(beta.n, params, k);
    first_order_amplitude(x, w_ab, omega, t, &GravitonCoupling::from_atom(params, volume)?, k)
}

/// One intermediate state gamma between beta and alpha.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntermediateChannel {
    /// <alpha| e2 x x |gamma>
    pub x_ag: Complex64,
    /// <gamma| e1 x x |beta>
    pub x_gb: Complex64,
    /// w_gamma - w_beta
    pub omega_gb: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderInput {
    /// w_alpha - w_beta
    pub omega_ab: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub channels: Vec<IntermediateChannel>,
}

const POLE_TOL: f64 = 1e-9;

fn check_poles(input: &SecondOrderInput) -> Result<()> {
    for c in &input.channels {
        for pole in [c.omega_gb, -c.omega_gb] {
            if (pole - input.omega1).abs() <= POLE_TOL * input.omega1.abs().max(pole.abs()) {
                return Err(Error::Pole {
                    omega: input.omega1,
                    pole,
                });
            }
        }
    }
    Ok(())
}

/// Second-order Dyson amplitude for the classical two-frequency drive:
/// C sum_g X_ag X_gb sum_{s1,s2} s1 s2 / (w_gb + s1 w1)
///   [B(w_ag + s2 w2) - B(w_ab + s1 w1 + s2 w2)],
/// C = pi G mu^2 sqrt(w1^3 w2^3) / (hbar V M^2 c^2).
pub fn second_order_amplitude(
    input: &SecondOrderInput,
    t: f64,
    coupling: &GravitonCoupling,
    k: &Constants,
) -> Result<Complex64> {
    error::positive("omega1", input.omega1)?;
    error::positive("omega2", input.omega2)?;
    error::non_negative("t", t)?;
    check_poles(input)?;
    let (w1, w2) = (input.omega1, input.omega2);
    let pre = coupling.rate_scale(k) * (w1.powi(3) * w2.powi(3)).sqrt();
    let mut total = Complex64::new(0.0, 0.0);
    for c in &input.channels {
        let w_ag = input.omega_ab - c.omega_gb;
        let mut s = Complex64::new(0.0, 0.0);
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                s += s1 * s2 / (c.omega_gb + s1 * w1)
                    * (b_factor(w_ag + s2 * w2, t) - b_factor(input.omega_ab + s1 * w1 + s2 * w2, t));
            }
        }
        total += c.x_ag * c.x_gb * s;
    }
    Ok(total * pre)
}

fn on_resonance(input: &SecondOrderInput) -> bool {
    let w = input.omega1 + input.omega2;
    (w - input.omega_ab).abs() <= 1e-9 * input.omega_ab.abs().max(w)
}

/// Constant rate with a final-state density rho (per unit angular
/// frequency): 2 pi (mu^2 pi G / (hbar V M^2 c^2))^2 w1^3 w2^3
/// |sum_g X_ag X_gb / (w_gb - w1)|^2 rho. Channels add coherently.
pub fn second_order_rate(
    input: &SecondOrderInput,
    rho: f64,
    coupling: &GravitonCoupling,
    k: &Constants,
) -> Result<f64> {
    error::positive("omega1", input.omega1)?;
    error::positive("omega2", input.omega2)?;
    error::non_negative("rho", rho)?;
    check_poles(input)?;
    if !on_resonance(input) {
        log::warn!(
            "w1 + w2 = {} misses w_ab = {}; no constant rate off the resonance surface",
            input.omega1 + input.omega2,
            input.omega_ab
        );
        return Ok(0.0);
    }
    let amp: Complex64 = input
        .channels
        .iter()
        .map(|c| c.x_ag * c.x_gb / (c.omega_gb - input.omega1))
        .sum();
    let s = coupling.rate_scale(k);
    Ok(2.0 * PI * s * s * input.omega1.powi(3) * input.omega2.powi(3) * amp.norm_sqr() * rho)
}

/// The single-final-state closed form as printed:
/// (pi/2) (mu^2 pi G / (hbar V M^2 c^2))^2 |w_bg^3 w_ga^3| |X_ag X_gb / w_gb|^2,
/// with w_ga = w_g - w_a. Several channels are summed coherently at the
/// amplitude level sqrt|w_bg^3 w_ga^3| X X / w_gb. No density of states
/// enters, so the result is not a rate in the usual sense.
pub fn second_order_rate_printed(input: &SecondOrderInput, coupling: &GravitonCoupling, k: &Constants) -> Result<f64> {
    check_poles(input)?;
    let mut amp = Complex64::new(0.0, 0.0);
    for c in &input.channels {
        if c.omega_gb == 0.0 {
            return Err(Error::Pole { omega: 0.0, pole: 0.0 });
        }
        let w_ga = c.omega_gb - input.omega_ab;
        let w_bg = -c.omega_gb;
        amp += (w_bg.powi(3) * w_ga.powi(3)).abs().sqrt() * c.x_ag * c.x_gb / c.omega_gb;
    }
    let s = coupling.rate_scale(k);
    Ok(0.5 * PI * s * s * amp.norm_sqr())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub n_max: u32,
    pub states_considered: usize,
    pub channels_kept: usize,
}

/// Intermediate channels beta -> gamma -> alpha over every orbital with
/// n <= n_max, keeping those whose product of matrix elements is nonzero.
pub fn intermediate_channels(
    beta: OrbitalLabel,
    alpha: OrbitalLabel,
    pol1: &GWPolarization,
    pol2: &GWPolarization,
    n_max: u32,
    params: &QuasiatomParams,
    k: &Constants,
) -> Result<(Vec<IntermediateChannel>, TruncationReport)> {
    let a0 = params.bohr_radius(k);
    let states = OrbitalLabel::up_to(n_max);
    let mut channels = Vec::new();
    for g in &states {
        let x_gb = quadrupole_matrix_element_decomposed(*g, beta, pol1, a0)?;
        let x_ag = quadrupole_matrix_element_decomposed(alpha, *g, pol2, a0)?;
        let scale = a0 * a0;
        if x_gb.norm() > 1e-12 * scale && x_ag.norm() > 1e-12 * scale {
            channels.push(IntermediateChannel {
                x_ag,
                x_gb,
                omega_gb: level_frequency(g.n, params, k) - level_frequency(beta.n, params, k),
            });
        }
    }
    let report = TruncationReport {
        n_max,
        states_considered: states.len(),
        channels_kept: channels.len(),
    };
    Ok((channels, report))
}

/// Report for one graviton-mediated transition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GravitonTransition {
    pub initial: OrbitalLabel,
    pub intermediate: Option<OrbitalLabel>,
    #[serde(rename = "final")]
    pub final_state: OrbitalLabel,
    pub omega1: f64,
    pub omega2: f64,
    pub amplitude: Complex64,
    pub rate: f64,
}

/// Second-order transition beta -> gamma -> alpha at time t, with the rate
/// evaluated for a final-state density `rho`.
#[allow(clippy::too_many_arguments)]
pub fn two_graviton_transition(
    beta: OrbitalLabel,
    gamma: OrbitalLabel,
    alpha: OrbitalLabel,
    pol1: &GWPolarization,
    pol2: &GWPolarization,
    omega1: f64,
    omega2: f64,
    t: f64,
    rho: f64,
    params: &QuasiatomParams,
    volume: f64,
    k: &Constants,
) -> Result<GravitonTransition> {
    let a0 = params.bohr_radius(k);
    let w = |o: OrbitalLabel| level_frequency(o.n, params, k);
    let input = SecondOrderInput {
        omega_ab: w(alpha) - w(beta),
        omega1,
        omega2,
        channels: vec![IntermediateChannel {
            x_ag: quadrupole_matrix_element_decomposed(alpha, gamma, pol2, a0)?,
            x_gb: quadrupole_matrix_element_decomposed(gamma, beta, pol1, a0)?,
            omega_gb: w(gamma) - w(beta),
        }],
    };
    let coupling = GravitonCoupling::from_atom(params, volume)?;
    Ok(GravitonTransition {
        initial: beta,
        intermediate: Some(gamma),
        final_state: alpha,
        omega1,
        omega2,
        amplitude: second_order_amplitude(&input, t, &coupling, k)?,
        rate: second_order_rate(&input, rho, &coupling, k)?,
    })
}

/// Brute-force check of the constant rate: the Dyson double time integral
/// of the sin-drive is summed on a grid, |a2|^2 / t is averaged over a flat
/// band of final states of width `window`, and the result is compared with
/// [`second_order_rate`] at rho = 1 / window. hbar = 1 toy units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DysonToy {
    pub omega1: f64,
    pub omega2: f64,
    pub omega_gb: f64,
    pub x_ag: f64,
    pub x_gb: f64,
    /// Drive strength lambda for both photons (H = lambda sin(wt) X).
    pub lambda: f64,
    pub t: f64,
    pub window: f64,
    pub n_detunings: usize,
    pub dt: f64,
}

impl Default for DysonToy {
    fn default() -> Self {
        Self {
            omega1: 0.7,
            omega2: 0.9,
            omega_gb: 1.0,
            x_ag: 1.0,
            x_gb: 1.0,
            lambda: 1.0,
            t: 1000.0,
            window: 0.1,
            n_detunings: 2001,
            dt: 0.02,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DysonComparison {
    pub numeric: f64,
    pub closed_form: f64,
    pub rel_err: f64,
}

pub fn dyson_oracle(toy: &DysonToy) -> Result<DysonComparison> {
    use rayon::prelude::*;

    error::positive("t", toy.t)?;
    error::positive("dt", toy.dt)?;
    error::positive("window", toy.window)?;
    if toy.n_detunings < 3 || toy.n_detunings % 2 == 0 {
        return Err(Error::InvalidParameter {
            name: "n_detunings",
            reason: "Simpson averaging needs an odd count >= 3".into(),
        });
    }
    let steps = (toy.t / toy.dt).round() as usize;
    let h = toy.t / steps as f64;
    // inner(t') = int_0^t' sin(w1 s) e^{i w_gb s} ds, cumulative trapezoid
    let f_inner = |s: f64| Complex64::from_polar((toy.omega1 * s).sin(), toy.omega_gb * s);
    let mut outer_weight = Vec::with_capacity(steps + 1);
    let mut inner = Complex64::new(0.0, 0.0);
    let mut prev = f_inner(0.0);
    for j in 0..=steps {
        let tj = j as f64 * h;
        if j > 0 {
            let cur = f_inner(tj);
            inner += (prev + cur) * (0.5 * h);
            prev = cur;
        }
        let w = if j == 0 || j == steps { 0.5 * h } else { h };
        outer_weight.push(inner * ((toy.omega2 * tj).sin() * w));
    }
    let lam2 = toy.lambda * toy.lambda;
    let detunings: Vec<f64> = (0..toy.n_detunings)
        .map(|i| -0.5 * toy.window + toy.window * i as f64 / (toy.n_detunings - 1) as f64)
        .collect();
    let probs: Vec<f64> = detunings
        .par_iter()
        .map(|&delta| {
            let w_ag = toy.omega1 + toy.omega2 + delta - toy.omega_gb;
            let step = Complex64::from_polar(1.0, w_ag * h);
            let mut phase = Complex64::new(1.0, 0.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for w in &outer_weight {
                acc += w * phase;
                phase *= step;
            }
            // a2 = -(1/hbar^2) lambda^2 X_ag X_gb acc
            (acc * (lam2 * toy.x_ag * toy.x_gb)).norm_sqr() / toy.t
        })
        .collect();
    let dd = toy.window / (toy.n_detunings - 1) as f64;
    let numeric = crate::quadrature::simpson_samples(&probs, dd) / toy.window;
    // closed form in lambda units: 2 pi (lambda^2 / 4)^2 |X X / (w_gb - w1)|^2 rho
    let amp = toy.x_ag * toy.x_gb / (toy.omega_gb - toy.omega1);
    let closed_form = 2.0 * PI * (lam2 / 4.0).powi(2) * amp * amp / toy.window;
    Ok(DysonComparison {
        numeric,
        closed_form,
        rel_err: (numeric - closed_form) / closed_form,
    })
}
