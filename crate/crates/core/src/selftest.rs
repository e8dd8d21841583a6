//! Quick end-to-end checks: each closed form against an independent
//! numerical path, plus the printed constants.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::feasibility::{self, InternalEnergies, Verdict};
use crate::graviton::{self, GWPolarization, GwKind, PhiHarmonic};
use crate::interferometry::{
    self, split_operator::SplitOperator, AliceQuadrupole, Branch, ForceProfile, InterferometerSetup, PathState,
};
use crate::quasiatom::{self, OrbitalLabel, QuasiatomParams};
use crate::radiative::{self, TransitionRates};
use crate::trajectory::{self, TrajectoryFamilyParam};
use crate::units::{self, Constants, Dimension, PhysicalQuantity};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

struct Suite(Vec<CheckResult>);

impl Suite {
    fn check<F: FnOnce() -> Result<(bool, String)>>(&mut self, name: &str, f: F) {
        let (passed, detail) = match f() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        self.0.push(CheckResult {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

/// Run every check. `seed` drives the randomised parts.
pub fn run(seed: u64) -> Vec<CheckResult> {
    let k = Constants::planck();
    let mut s = Suite(Vec::new());

    s.check("units.planck_roundtrip", || {
        let q = PhysicalQuantity::new(2.5, Dimension::ENERGY);
        let back = units::from_planck(units::to_planck(q)?)?;
        let e = rel(back.value, q.value);
        Ok((e < 1e-12, format!("rel err {e:.2e}")))
    });
    s.check("units.alpha", || {
        let a = units::fine_structure();
        Ok((rel(1.0 / a, 137.035_999) < 1e-8, format!("1/alpha = {:.6}", 1.0 / a)))
    });

    s.check("trajectory.s_functional_minimum", || {
        let v = trajectory::s_functional(&TrajectoryFamilyParam::optimal(), 1e-12)?;
        Ok((rel(v, 80.0) < 1e-7, format!("S = {v:.10}")))
    });
    s.check("trajectory.closed_form_vs_quadrature", || {
        let p = TrajectoryFamilyParam::new(-1.0)?;
        let v = trajectory::s_functional(&p, 1e-12)?;
        let c = trajectory::s_closed_form(-1.0)?;
        Ok((rel(v, c) < 1e-9, format!("{v:.10} vs {c}")))
    });
    s.check("trajectory.argmin", || {
        let a = trajectory::numeric_argmin()?;
        Ok(((a + 10.0 / 3.0).abs() < 1e-6, format!("a* = {a:.8}")))
    });
    s.check("trajectory.kinematics", || {
        let v = trajectory::max_speed_coefficient();
        let kap = trajectory::kappa();
        Ok((
            (v - 1.464).abs() < 5e-4 && (kap - 1.155).abs() < 1e-3,
            format!("v_max = {v:.6}, kappa = {kap:.6}"),
        ))
    });
    s.check("trajectory.energy_identity", || {
        let t = 1.7;
        let dq = (2.0 * PI).sqrt() / 8.0 * t * t;
        let e = trajectory::min_radiated_energy(dq, t, &k)?;
        let err = rel(e, 2.0 * PI / t);
        Ok((err < 1e-12, format!("E T / 2 pi hbar - 1 = {err:.2e}")))
    });
    s.check("trajectory.sampled_endpoints", || {
        let tr = trajectory::optimal_trajectory(1.0, 1.0, 101)?;
        let ok = tr.positions[0] == 1.0 && tr.positions[100].abs() < 1e-12;
        Ok((
            ok,
            format!("x(0) = {}, x(T) = {:.1e}", tr.positions[0], tr.positions[100]),
        ))
    });

    let setup = InterferometerSetup {
        m: 1.0,
        d: 0.5,
        big_d: 3.0,
        tau_a: 1.0,
        tau_f: 10.0,
        sigma: 1.0,
        delta_t: 0.01,
    };
    let alice = AliceQuadrupole {
        q0: 2.0,
        delta_q: 0.5,
        t_close: 1.0,
    };
    s.check("interferometry.phase_reconstruction", || {
        let p = interferometry::gravitational_phases(&setup, &alice, &k)?;
        let (g, small) = p.reconstruct();
        let e = (g - p.big_gamma).abs() + (small - p.gamma).abs();
        Ok((e < 1e-12, format!("Gamma {:.6}, gamma {:.6}", p.big_gamma, p.gamma)))
    });
    s.check("interferometry.overlap_oracle", || {
        let st = PathState {
            u: 0.3,
            u_dot: 0.05,
            action: 0.1,
        };
        let ov = interferometry::overlap_numeric(0.2, &st, 1.0, 1.0, 1.0)?;
        let a = interferometry::visibility(0.2, st.u, st.u_dot, 1.0, 1.0, 1.0);
        let e = (ov - a).norm();
        Ok((e < 1e-8, format!("|<+|-> - A| = {e:.2e}")))
    });
    s.check("interferometry.split_operator_oracle", || {
        let solver = SplitOperator {
            x_min: -20.0,
            x_max: 20.0,
            n: 2048,
            dt: 2.5e-4,
            hbar: 1.0,
            m: 1.0,
        };
        let p = ForceProfile::ImpulsePair { tau_a: 1.0, d: 1.0 };
        let e = interferometry::split_operator::compare_with_analytic(&solver, &p, Branch::Plus, 1.0)?;
        Ok((e < 1e-4, format!("L2 error {e:.2e}")))
    });
    s.check("interferometry.time_resolution", || {
        let c = interferometry::time_resolution_coefficient();
        Ok(((c - 0.143).abs() / 0.143 < 2e-3, format!("{c:.6}")))
    });

    s.check("quasiatom.radial_integral", || {
        let v = quasiatom::radial_dipole_integral()?;
        let e = (v - quasiatom::radial_dipole_closed_form()).abs();
        Ok((e < 1e-10, format!("{v:.12}")))
    });
    s.check("quasiatom.angular_factor", || {
        let v = quasiatom::angular_dipole_factor(0, 0, 1, 0)?;
        Ok(((v - 1.0 / 3f64.sqrt()).abs() < 1e-10, format!("{v:.12}")))
    });
    s.check("quasiatom.rydberg_si", || {
        let ks = Constants::si();
        let er = quasiatom::hydrogen_si().rydberg_energy(&ks) / units::codata::ELECTRON_VOLT;
        Ok((rel(er, 13.6057) < 1e-3, format!("E_R = {er:.5} eV")))
    });
    s.check("quasiatom.levels", || {
        let p = QuasiatomParams::new(1.0, 1.0, 2.0)?;
        let (e0, e1) = p.energy_levels(&k);
        Ok((
            rel(e1 - e0, 0.75 * p.rydberg_energy(&k)) < 1e-12,
            format!("E0 {e0:.4}, E1 {e1:.4}"),
        ))
    });

    s.check("radiative.rate_ratios", || {
        let ok = (1..=1_000_000u64).step_by(9973).all(|n| {
            let (e, a) = radiative::rate_ratios(n);
            e / a == (n as f64 + 1.0) / n as f64
        });
        Ok((ok, "(n+1)/n".into()))
    });
    s.check("radiative.stability_window", || {
        let r = TransitionRates::from_spontaneous(1.0 / (10.0 * setup.tau_f), 1000)?;
        let w = radiative::stability_window(&setup, &r);
        Ok((
            w.passes(),
            format!("margins {:.2}, {:.2}", w.lifetime_margin, w.excitation_margin),
        ))
    });
    s.check("radiative.einstein_a_direction_integral", || {
        let d = [
            crate::Complex64::new(0.0, 0.0),
            crate::Complex64::new(0.0, 0.0),
            crate::Complex64::new(0.6, 0.0),
        ];
        let n = radiative::spontaneous_rate_direction_integrated(0.9, d, 1.0, 0.3, &k)?;
        let a = radiative::einstein_a(0.9, 0.6, 1.0, &k)?;
        Ok((rel(n, a) < 1e-10, format!("{n:.6e} vs {a:.6e}")))
    });

    s.check("graviton.strain", || {
        let h = graviton::strain_amplitude(1.0, 1.0, &k)?;
        Ok(((h - (16.0 * PI).sqrt()).abs() < 1e-12, format!("h = {h:.6}")))
    });
    s.check("graviton.phi_integrals", || {
        let mut worst: f64 = 0.0;
        for n in -3..=3 {
            for w in [PhiHarmonic::Cos2, PhiHarmonic::Sin2] {
                let a = graviton::phi_selection_integral(n, w);
                let q = graviton::phi_selection_integral_numeric(n, w)?;
                worst = worst.max((a - q).norm());
            }
        }
        Ok((worst < 1e-12, format!("max deviation {worst:.1e}")))
    });
    s.check("graviton.forbidden_1s_2p", || {
        let mut worst: f64 = 0.0;
        for kind in [GwKind::Plus, GwKind::Cross] {
            let v = graviton::quadrupole_matrix_element(
                OrbitalLabel::ONE_S,
                OrbitalLabel::TWO_P0,
                &GWPolarization::along_z(kind),
                1.0,
            )?;
            worst = worst.max(v.norm());
        }
        let table_ok = !graviton::selection_rule(0, 1).allowed && graviton::selection_rule(0, 2).allowed;
        Ok((worst < 1e-10 && table_ok, format!("|<1s|e x x|2p0>| <= {worst:.1e}")))
    });
    s.check("graviton.dyson_oracle", || {
        let c = graviton::dyson_oracle(&graviton::DysonToy::default())?;
        Ok((c.rel_err.abs() < 0.02, format!("rel err {:.3}%", 100.0 * c.rel_err)))
    });

    s.check("feasibility.two_level_possible", || {
        let st = InterferometerSetup {
            m: 0.1,
            d: 10.0,
            big_d: 10.0,
            tau_a: 0.01,
            tau_f: 1.0,
            sigma: 0.1,
            delta_t: 1.0,
        };
        let al = AliceQuadrupole {
            q0: 0.2,
            delta_q: 0.1,
            t_close: 1.0,
        };
        let r = feasibility::check_ftl_chain(&st, &al, Some(InternalEnergies { e0: 0.1, e1: 2.0 }), &k)?;
        Ok((
            r.verdict == Verdict::ParadoxPossible,
            format!("{:?}", r.blocking_constraints),
        ))
    });
    s.check("feasibility.split_bound", || {
        let m = feasibility::split_mass_bound(&k);
        Ok(((m - 0.47).abs() < 1e-3, format!("{m:.5}")))
    });
    s.check("feasibility.constants_table", || {
        let rows = feasibility::derive_constants();
        let bad: Vec<&str> = rows
            .iter()
            .filter(|r| {
                // a two-figure printed value may sit between the stepwise and full chains
                let printed: f64 = r.printed.parse().unwrap_or(f64::NAN);
                !r.documented_exception && r.rel_err.min(rel(r.full_chain, printed)) >= 0.005
            })
            .map(|r| r.name)
            .collect();
        Ok((bad.is_empty(), format!("{} rows, off by >= 0.5%: {bad:?}", rows.len())))
    });

    // seeded spot checks of the polarization invariants
    s.check("graviton.polarization_invariants", || {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let v = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            for kind in [GwKind::Plus, GwKind::Cross] {
                worst = worst.max(GWPolarization::new(v, kind)?.invariant_residual());
            }
        }
        Ok((worst < 1e-12, format!("worst residual {worst:.1e}")))
    });

    s.0
}
