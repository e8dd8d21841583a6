use gravsig_core::feasibility::{self, FeasibilityReport, Scenario, CONSTRAINT_NAMES};
use gravsig_core::interferometry::{self, InterferometerSetup};
use gravsig_core::quasiatom;
use gravsig_core::radiative::{self, TransitionRates};
use gravsig_core::trajectory::{self, SquaredProfile, TrajectoryFamilyParam};
use gravsig_core::units::{codata, Constants, Dimension};
use gravsig_core::{graviton, selftest};
use serde_json::{json, Value};

use crate::output::{num, Artifact};
use crate::scenario::{dimension_of, Resolved, Units};
use crate::CliError;

pub struct Ctx<'a> {
    pub scenario: Resolved<'a>,
    pub units: Units,
    pub samples: Option<usize>,
    pub seed: u64,
}

fn k() -> Constants {
    Constants::planck()
}

fn b(v: bool) -> String {
    v.to_string()
}

pub fn trajectory(ctx: &Ctx) -> Result<Artifact, CliError> {
    let u = ctx.units;
    let x0 = ctx.scenario.get("x0")?;
    let t = ctx.scenario.get("T")?;
    let n = ctx.samples.unwrap_or(1001);
    let tr = trajectory::optimal_trajectory(x0, t, n)?;
    let ts: Vec<f64> = tr.times.iter().map(|&v| u.to_user(v, Dimension::TIME)).collect();
    let xs: Vec<f64> = tr.positions.iter().map(|&v| u.to_user(v, Dimension::LENGTH)).collect();
    let vs: Vec<f64> = tr
        .velocities
        .iter()
        .map(|&v| u.to_user(v, Dimension::VELOCITY))
        .collect();
    let mut a = Artifact::new(
        vec!["t", "x", "v"],
        json!({
            "unit_mode": u.0,
            "x0": u.to_user(x0, Dimension::LENGTH),
            "T": u.to_user(t, Dimension::TIME),
            "a": TrajectoryFamilyParam::optimal().a(),
            "S_min": 80.0,
            "v_max": u.to_user(trajectory::max_speed(x0, t)?, Dimension::VELOCITY),
            "t": ts, "x": xs, "v": vs,
        }),
    );
    for i in 0..n {
        a.row(vec![num(ts[i]), num(xs[i]), num(vs[i])]);
    }
    Ok(a)
}

pub fn visibility(ctx: &Ctx) -> Result<Artifact, CliError> {
    let (u, s, k) = (ctx.units, &ctx.scenario, k());
    let (m, d, sigma, tau_a, dt) = (
        s.get("m")?,
        s.get("d")?,
        s.get("sigma")?,
        s.get("tau_a")?,
        s.get("delta_t")?,
    );
    let avg = interferometry::averaged_visibility(m, d, sigma, tau_a, dt, &k)?;
    let n = ctx.samples.unwrap_or(101).max(2);
    let xi = TrajectoryFamilyParam::optimal();
    let mut a = Artifact::new(vec!["t", "u", "u_dot", "A"], Value::Null);
    let mut curve = Vec::with_capacity(n);
    // closing stroke u = d xi(t / tau_a), clock from the start of the stroke
    for i in 0..n {
        let t = tau_a * i as f64 / (n - 1) as f64;
        let uu = d * xi.xi(t / tau_a);
        let ud = d / tau_a * xi.xi_dot(t / tau_a);
        let vis = interferometry::visibility(t, uu, ud, m, sigma, k.hbar);
        let row = [
            u.to_user(t, Dimension::TIME),
            u.to_user(uu, Dimension::LENGTH),
            u.to_user(ud, Dimension::VELOCITY),
            vis,
        ];
        a.row(row.iter().map(|&v| num(v)).collect());
        curve.push(json!({"t": row[0], "u": row[1], "u_dot": row[2], "A": row[3]}));
    }
    a.json = json!({
        "unit_mode": u.0,
        "averaged_visibility": avg,
        "width_factor": interferometry::width_factor(m, sigma, tau_a, &k),
        "optimal_sigma": u.to_user(interferometry::optimal_sigma(m, tau_a, &k)?, Dimension::LENGTH),
        "time_resolution_bound": u.to_user(interferometry::time_resolution_bound(m, &k)?, Dimension::TIME),
        "curve": curve,
    });
    Ok(a)
}

pub fn phases(ctx: &Ctx) -> Result<Artifact, CliError> {
    let (u, k) = (ctx.units, k());
    let setup = ctx.scenario.setup()?;
    let alice = ctx.scenario.alice()?;
    let p = interferometry::gravitational_phases(&setup, &alice, &k)?;
    let tau_e = setup.effective_time()?;
    let cells = [
        p.phi_pp,
        p.phi_pm,
        p.phi_mp,
        p.phi_mm,
        p.big_gamma,
        p.gamma,
        u.to_user(tau_e, Dimension::TIME),
    ];
    let mut a = Artifact::new(
        vec!["phi_pp", "phi_pm", "phi_mp", "phi_mm", "Gamma", "gamma", "tau_e"],
        json!({
            "unit_mode": u.0,
            "phi_pp": cells[0], "phi_pm": cells[1], "phi_mp": cells[2], "phi_mm": cells[3],
            "Gamma": cells[4], "gamma": cells[5], "tau_e": cells[6],
        }),
    );
    a.row(cells.iter().map(|&v| num(v)).collect());
    Ok(a)
}

fn energy_ev(planck_energy: f64) -> f64 {
    Units(gravsig_core::UnitMode::Si).to_user(planck_energy, Dimension::ENERGY) / codata::ELECTRON_VOLT
}

pub fn atom(ctx: &Ctx) -> Result<Artifact, CliError> {
    let (u, k) = (ctx.units, k());
    let s = ctx.scenario.atom()?.summary(&k);
    let e = |v: f64| u.to_user(v, Dimension::ENERGY);
    let cells = [
        u.to_user(s.total_mass, Dimension::MASS),
        u.to_user(s.mu, Dimension::MASS),
        e(s.rydberg),
        u.to_user(s.a0, Dimension::LENGTH),
        e(s.e0),
        e(s.e1),
        s.dipole_coeff,
        energy_ev(s.rydberg),
    ];
    let mut a = Artifact::new(
        vec!["M", "mu", "E_R", "a0", "E0", "E1", "dipole_coeff", "E_R_eV"],
        json!({
            "unit_mode": u.0,
            "M": cells[0], "mu": cells[1], "E_R": cells[2], "a0": cells[3],
            "E0": cells[4], "E1": cells[5], "dipole_coeff": cells[6], "E_R_eV": cells[7],
        }),
    );
    a.row(cells.iter().map(|&v| num(v)).collect());
    Ok(a)
}

pub fn rates(ctx: &Ctx) -> Result<Artifact, CliError> {
    let (u, k, s) = (ctx.units, k(), &ctx.scenario);
    let atom = s.atom()?;
    let n = s.n_photons()?;
    let omega = 0.75 * atom.rydberg_energy(&k) / k.hbar;
    let r = quasiatom::dipole_coefficient() * atom.bohr_radius(&k);
    let gamma = radiative::spontaneous_rate_total(omega, r, atom.q, &k)?;
    let rates = TransitionRates::from_spontaneous(gamma, n)?;
    // only the two stroke times enter the stability window
    let setup = InterferometerSetup {
        m: 1.0,
        d: 1.0,
        big_d: 1.0,
        tau_a: s.get("tau_a")?,
        tau_f: s.get("tau_f")?,
        sigma: 1.0,
        delta_t: 1.0,
    };
    let w = radiative::stability_window(&setup, &rates);
    let f = |v: f64| u.to_user(v, Dimension::FREQUENCY);
    let cells = [
        f(rates.gamma_spontaneous),
        f(rates.gamma_emission),
        f(rates.gamma_absorption),
        u.to_user(rates.lifetime, Dimension::TIME),
        f(omega),
    ];
    let mut a = Artifact::new(
        vec![
            "gamma_spo",
            "gamma_emi",
            "gamma_abs",
            "lifetime",
            "omega",
            "stable",
            "excitation_ok",
            "lifetime_margin",
            "excitation_margin",
        ],
        json!({
            "unit_mode": u.0,
            "gamma_spo": cells[0], "gamma_emi": cells[1], "gamma_abs": cells[2],
            "lifetime": cells[3], "omega": cells[4], "n_photons": n,
            "stable": w.stable, "excitation_ok": w.excitation_ok,
            "lifetime_margin": w.lifetime_margin, "excitation_margin": w.excitation_margin,
        }),
    );
    let mut row: Vec<String> = cells.iter().map(|&v| num(v)).collect();
    row.extend([
        b(w.stable),
        b(w.excitation_ok),
        num(w.lifetime_margin),
        num(w.excitation_margin),
    ]);
    a.row(row);
    Ok(a)
}

pub fn graviton(ctx: &Ctx) -> Result<Artifact, CliError> {
    let table = graviton::selection_table(ctx.scenario.l_max()?);
    let mut a = Artifact::new(
        vec!["l_i", "l_f", "allowed", "dipole_allowed", "rule"],
        json!({ "selections": table.iter().map(|s| json!({
            "l_i": s.l_initial, "l_f": s.l_final, "allowed": s.allowed,
            "dipole_allowed": s.dipole_allowed, "rule": s.describe(),
        })).collect::<Vec<_>>() }),
    );
    for s in &table {
        a.row(vec![
            s.l_initial.to_string(),
            s.l_final.to_string(),
            b(s.allowed),
            b(s.dipole_allowed),
            s.describe().to_string(),
        ]);
    }
    Ok(a)
}

/// The report with every quantity in the user's unit system.
fn report_in(u: Units, mut r: FeasibilityReport) -> FeasibilityReport {
    for c in &mut r.constraints {
        c.lhs = u.quantity(c.lhs);
        c.rhs = u.quantity(c.rhs);
    }
    r
}

fn report_row(value: Option<f64>, r: &FeasibilityReport) -> Vec<String> {
    let mut row: Vec<String> = value.map(num).into_iter().collect();
    row.push(
        serde_json::to_value(r.verdict)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default(),
    );
    row.push(r.blocking_constraints.join(";"));
    for name in CONSTRAINT_NAMES {
        let c = r.constraints.iter().find(|c| c.name == name);
        row.push(c.map(|c| b(c.satisfied)).unwrap_or_default());
        row.push(c.map(|c| num(c.margin)).unwrap_or_default());
    }
    row
}

fn report_header(with_value: bool) -> Vec<&'static str> {
    let mut h = Vec::new();
    if with_value {
        h.push("value");
    }
    h.extend(["verdict", "blocking"]);
    h.extend([
        "signal_T_ok",
        "signal_T_margin",
        "signal_tau_t_ok",
        "signal_tau_t_margin",
        "graviton_emission_ok",
        "graviton_emission_margin",
        "phase_reachability_ok",
        "phase_reachability_margin",
        "time_resolution_ok",
        "time_resolution_margin",
        "geometry_ok",
        "geometry_margin",
    ]);
    h
}

pub fn feasibility(ctx: &Ctx) -> Result<Artifact, CliError> {
    let r = report_in(ctx.units, ctx.scenario.scenario()?.check(&k())?);
    let mut a = Artifact::new(report_header(false), serde_json::to_value(&r).map_err(json_err)?);
    a.row(report_row(None, &r));
    Ok(a)
}

pub fn constants(_: &Ctx) -> Result<Artifact, CliError> {
    let rows = feasibility::derive_constants();
    let mut a = Artifact::new(
        vec![
            "name",
            "derived",
            "printed",
            "rel_err",
            "full_chain",
            "tolerance",
            "within_tolerance",
            "documented_exception",
            "formula",
        ],
        serde_json::to_value(&rows).map_err(json_err)?,
    );
    for r in &rows {
        a.row(vec![
            r.name.to_string(),
            num(r.derived),
            r.printed.to_string(),
            num(r.rel_err),
            num(r.full_chain),
            num(r.tolerance),
            b(r.within_tolerance),
            b(r.documented_exception),
            r.formula.to_string(),
        ]);
    }
    Ok(a)
}

pub struct SweepArgs<'a> {
    pub param: &'a str,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

pub fn sweep(ctx: &Ctx, args: &SweepArgs) -> Result<Artifact, CliError> {
    if !Scenario::PARAMETERS.contains(&args.param) {
        return Err(CliError::Validation(format!(
            "unknown sweep parameter `{}` (expected one of {})",
            args.param,
            Scenario::PARAMETERS.join(", ")
        )));
    }
    let u = ctx.units;
    let base = ctx.scenario.scenario()?;
    let dim = dimension_of(args.param);
    let grid = feasibility::linspace(args.lo, args.hi, args.points)?;
    let internal: Vec<f64> = grid.iter().map(|&v| u.to_internal(v, dim)).collect::<Result<_, _>>()?;
    let points = feasibility::sweep(&base, args.param, &internal, &k())?;
    let mut a = Artifact::new(report_header(true), Value::Null);
    let mut docs = Vec::with_capacity(points.len());
    for (user_value, p) in grid.iter().zip(points) {
        let r = report_in(u, p.report);
        a.row(report_row(Some(*user_value), &r));
        docs.push(json!({ "value": user_value, "report": r }));
    }
    a.json = json!({ "parameter": args.param, "unit_mode": u.0, "points": docs });
    Ok(a)
}

pub fn selftest(ctx: &Ctx) -> Result<(Artifact, bool), CliError> {
    let checks = selftest::run(ctx.seed);
    let ok = checks.iter().all(|c| c.passed);
    let mut a = Artifact::new(
        vec!["name", "passed", "detail"],
        json!({ "seed": ctx.seed, "passed": ok, "checks": checks }),
    );
    for c in &checks {
        a.row(vec![c.name.clone(), b(c.passed), c.detail.clone()]);
    }
    Ok((a, ok))
}

fn json_err(e: serde_json::Error) -> CliError {
    CliError::Io(e.to_string())
}
