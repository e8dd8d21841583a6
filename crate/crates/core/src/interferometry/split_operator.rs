//! Grid Schroedinger solver (Strang split-operator, FFT kinetic step) used
//! as an independent check of the closed-form wavepackets.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::force::{classical_path, ForceProfile};
use super::wavepacket::{wavepacket, Branch};
use crate::error::{self, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitOperator {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub dt: f64,
    pub hbar: f64,
    pub m: f64,
}

impl SplitOperator {
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n).map(|i| self.x_min + i as f64 * dx).collect()
    }

    fn wavenumbers(&self) -> Vec<f64> {
        let l = self.x_max - self.x_min;
        let n = self.n as isize;
        (0..n)
            .map(|j| {
                let j = if j < n / 2 { j } else { j - n };
                2.0 * std::f64::consts::PI * j as f64 / l
            })
            .collect()
    }

    /// Evolve `psi` from t = 0 to `t_end` under H = p^2/2m - s F(t) x,
    /// with the force sampled at each step midpoint.
    pub fn evolve<F: Fn(f64) -> f64>(&self, psi: &mut [Complex64], force: F, sign: f64, t_end: f64) -> Result<()> {
        error::positive("dt", self.dt)?;
        error::non_negative("t_end", t_end)?;
        if psi.len() != self.n || !self.n.is_power_of_two() {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("grid of {} points (need a power of two matching psi)", self.n),
            });
        }
        let steps = (t_end / self.dt).round() as usize;
        let dt = if steps > 0 { t_end / steps as f64 } else { 0.0 };
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(self.n);
        let inv = planner.plan_fft_inverse(self.n);
        let kinetic: Vec<Complex64> = self
            .wavenumbers()
            .iter()
            .map(|k| Complex64::from_polar(1.0, -self.hbar * k * k * dt / (2.0 * self.m)))
            .collect();
        let xs = self.grid();
        let scale = 1.0 / self.n as f64;
        for step in 0..steps {
            let t_mid = (step as f64 + 0.5) * dt;
            // V = -s F x, half step e^{-i V dt / 2 hbar}
            let f = sign * force(t_mid);
            let half: Vec<Complex64> = xs
                .iter()
                .map(|x| Complex64::from_polar(1.0, f * x * dt / (2.0 * self.hbar)))
                .collect();
            for (p, h) in psi.iter_mut().zip(&half) {
                *p *= h;
            }
            fwd.process(psi);
            for (p, k) in psi.iter_mut().zip(&kinetic) {
                *p *= k * scale;
            }
            inv.process(psi);
            for (p, h) in psi.iter_mut().zip(&half) {
                *p *= h;
            }
        }
        Ok(())
    }
}

/// L2 distance between two grid functions.
pub fn l2_distance(a: &[Complex64], b: &[Complex64], dx: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt() * dx.sqrt()
}

/// Evolve the Gaussian along `branch` through one force stroke on the grid
/// and return the L2 distance to the closed-form wavepacket at t = tau_a.
pub fn compare_with_analytic(
    solver: &SplitOperator,
    profile: &ForceProfile,
    branch: Branch,
    sigma: f64,
) -> Result<f64> {
    let tau_a = profile.tau_a();
    let xs = solver.grid();
    let zero = Default::default();
    let mut psi: Vec<Complex64> = xs
        .iter()
        .map(|&x| wavepacket(0.0, x, branch, &zero, solver.m, sigma, solver.hbar))
        .collect();
    solver.evolve(&mut psi, |t| profile.force(t, solver.m), branch.sign(), tau_a)?;
    let state = classical_path(profile, solver.m, &[tau_a])?[0];
    let exact: Vec<Complex64> = xs
        .iter()
        .map(|&x| wavepacket(tau_a, x, branch, &state, solver.m, sigma, solver.hbar))
        .collect();
    Ok(l2_distance(&psi, &exact, solver.dx()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_evolution_matches_spreading_gaussian() {
        let solver = SplitOperator {
            x_min: -20.0,
            x_max: 20.0,
            n: 1024,
            dt: 1e-2,
            hbar: 1.0,
            m: 1.0,
        };
        let err = compare_with_analytic(&solver, &ForceProfile::Zero { tau_a: 1.0 }, Branch::Plus, 1.0).unwrap();
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn impulse_pair_small_grid() {
        let solver = SplitOperator {
            x_min: -20.0,
            x_max: 20.0,
            n: 1024,
            dt: 1e-3,
            hbar: 1.0,
            m: 1.0,
        };
        let p = ForceProfile::ImpulsePair { tau_a: 1.0, d: 1.0 };
        for b in [Branch::Plus, Branch::Minus] {
            let err = compare_with_analytic(&solver, &p, b, 1.0).unwrap();
            assert!(err < 1e-3, "{err}");
        }
    }
}
