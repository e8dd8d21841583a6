//! Scenario files: flat parameters plus an optional `[output]` table, in
//! TOML or JSON. Values are read in the file's unit system and held in
//! Planck units from here on.

use std::path::{Path, PathBuf};

use gravsig_core::feasibility::{InternalEnergies, Scenario};
use gravsig_core::interferometry::{AliceQuadrupole, InterferometerSetup};
use gravsig_core::units::{self, Dimension, PhysicalQuantity, UnitMode};
use gravsig_core::QuasiatomParams;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Everything a scenario file may set. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub unit_mode: Option<UnitMode>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub output: Option<OutputSpec>,

    pub m: Option<f64>,
    pub d: Option<f64>,
    #[serde(rename = "D")]
    pub big_d: Option<f64>,
    pub tau_a: Option<f64>,
    pub tau_f: Option<f64>,
    pub sigma: Option<f64>,
    pub delta_t: Option<f64>,
    #[serde(rename = "Q0")]
    pub q0: Option<f64>,
    pub delta_q: Option<f64>,
    #[serde(rename = "T")]
    pub t_close: Option<f64>,
    #[serde(rename = "E0")]
    pub e0: Option<f64>,
    #[serde(rename = "E1")]
    pub e1: Option<f64>,

    pub m1: Option<f64>,
    pub m2: Option<f64>,
    pub q: Option<f64>,
    pub n_photons: Option<u64>,

    pub x0: Option<f64>,
    pub l_max: Option<u32>,
}

const DIMS: [(&str, Dimension); 16] = [
    ("m", Dimension::MASS),
    ("d", Dimension::LENGTH),
    ("D", Dimension::LENGTH),
    ("tau_a", Dimension::TIME),
    ("tau_f", Dimension::TIME),
    ("sigma", Dimension::LENGTH),
    ("delta_t", Dimension::TIME),
    ("Q0", Dimension::QUADRUPOLE),
    ("delta_q", Dimension::QUADRUPOLE),
    ("T", Dimension::TIME),
    ("E0", Dimension::ENERGY),
    ("E1", Dimension::ENERGY),
    ("m1", Dimension::MASS),
    ("m2", Dimension::MASS),
    ("q", Dimension::CHARGE),
    ("x0", Dimension::LENGTH),
];

/// Dimension of a scenario or sweep parameter.
pub fn dimension_of(name: &str) -> Dimension {
    DIMS.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, d)| *d)
        .unwrap_or(Dimension::DIMENSIONLESS)
}

/// Converts between the user's unit system and Planck units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Units(pub UnitMode);

impl Units {
    pub fn to_internal(&self, value: f64, dim: Dimension) -> Result<f64, CliError> {
        match self.0 {
            UnitMode::Planck => Ok(value),
            UnitMode::Si => Ok(units::to_planck(PhysicalQuantity::new(value, dim))?.value),
        }
    }

    pub fn to_user(&self, value: f64, dim: Dimension) -> f64 {
        match self.0 {
            UnitMode::Planck => value,
            UnitMode::Si => units::from_planck(PhysicalQuantity::new(value, dim))
                .map(|q| q.value)
                .unwrap_or(value),
        }
    }

    pub fn quantity(&self, q: PhysicalQuantity) -> PhysicalQuantity {
        PhysicalQuantity::new(self.to_user(q.value, q.dim), q.dim)
    }
}

/// The built-in demonstration scenario, in Planck units: a two-level
/// particle whose ground energy sits below the time-resolution ceiling.
pub fn demo() -> ScenarioConfig {
    ScenarioConfig {
        m: Some(0.1),
        d: Some(10.0),
        big_d: Some(10.0),
        tau_a: Some(0.01),
        tau_f: Some(1.0),
        sigma: Some(0.1),
        delta_t: Some(1.0),
        q0: Some(0.2),
        delta_q: Some(0.1),
        t_close: Some(1.0),
        e0: Some(0.1),
        e1: Some(2.0),
        m1: Some(0.533),
        m2: Some(0.533),
        q: Some(1.6),
        n_photons: Some(10),
        x0: Some(1.0),
        l_max: Some(4),
        ..Default::default()
    }
}

pub fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read scenario {}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    parse(&text, is_json).map_err(|msg| CliError::Validation(format!("{}: {msg}", path.display())))
}

pub fn parse(text: &str, is_json: bool) -> Result<ScenarioConfig, String> {
    if is_json {
        serde_json::from_str(text).map_err(|e| e.to_string())
    } else {
        toml::from_str(text).map_err(|e| e.to_string().trim_end().to_string())
    }
}

/// A scenario resolved into Planck units with access checks per command.
pub struct Resolved<'a> {
    cfg: &'a ScenarioConfig,
    units: Units,
    command: &'static str,
}

impl<'a> Resolved<'a> {
    pub fn new(cfg: &'a ScenarioConfig, units: Units, command: &'static str) -> Self {
        Self { cfg, units, command }
    }

    fn missing(&self, key: &str) -> CliError {
        CliError::Validation(format!(
            "scenario is missing key `{key}` required by `{}`",
            self.command
        ))
    }

    pub fn get(&self, key: &'static str) -> Result<f64, CliError> {
        let c = self.cfg;
        let raw = match key {
            "m" => c.m,
            "d" => c.d,
            "D" => c.big_d,
            "tau_a" => c.tau_a,
            "tau_f" => c.tau_f,
            "sigma" => c.sigma,
            "delta_t" => c.delta_t,
            "Q0" => c.q0,
            "delta_q" => c.delta_q,
            "T" => c.t_close,
            "E0" => c.e0,
            "E1" => c.e1,
            "m1" => c.m1,
            "m2" => c.m2,
            "q" => c.q,
            "x0" => c.x0,
            _ => unreachable!("unknown scenario key {key}"),
        };
        let v = raw.ok_or_else(|| self.missing(key))?;
        self.units.to_internal(v, dimension_of(key))
    }

    pub fn n_photons(&self) -> Result<u64, CliError> {
        self.cfg.n_photons.ok_or_else(|| self.missing("n_photons"))
    }

    pub fn l_max(&self) -> Result<u32, CliError> {
        self.cfg.l_max.ok_or_else(|| self.missing("l_max"))
    }

    pub fn setup(&self) -> Result<InterferometerSetup, CliError> {
        Ok(InterferometerSetup {
            m: self.get("m")?,
            d: self.get("d")?,
            big_d: self.get("D")?,
            tau_a: self.get("tau_a")?,
            tau_f: self.get("tau_f")?,
            sigma: self.get("sigma")?,
            delta_t: self.get("delta_t")?,
        })
    }

    pub fn alice(&self) -> Result<AliceQuadrupole, CliError> {
        Ok(AliceQuadrupole {
            q0: self.get("Q0")?,
            delta_q: self.get("delta_q")?,
            t_close: self.get("T")?,
        })
    }

    /// Two-level energies when both are given; one without the other is
    /// an error.
    pub fn internal(&self) -> Result<Option<InternalEnergies>, CliError> {
        match (self.cfg.e0, self.cfg.e1) {
            (None, None) => Ok(None),
            (Some(_), None) => Err(self.missing("E1")),
            (None, Some(_)) => Err(self.missing("E0")),
            _ => Ok(Some(InternalEnergies {
                e0: self.get("E0")?,
                e1: self.get("E1")?,
            })),
        }
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        Ok(Scenario {
            setup: self.setup()?,
            alice: self.alice()?,
            internal: self.internal()?,
        })
    }

    pub fn atom(&self) -> Result<QuasiatomParams, CliError> {
        Ok(QuasiatomParams::new(self.get("m1")?, self.get("m2")?, self.get("q")?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_agree() {
        let t = parse(
            "unit_mode = \"si\"\nm = 2.0\nD = 1.5\n[output]\nformat = \"json\"\n",
            false,
        )
        .unwrap();
        let j = parse(
            r#"{"unit_mode": "si", "m": 2.0, "D": 1.5, "output": {"format": "json"}}"#,
            true,
        )
        .unwrap();
        assert_eq!(t, j);
        assert_eq!(t.unit_mode, Some(UnitMode::Si));
        assert_eq!(t.output.unwrap().format, Some(Format::Json));
    }

    #[test]
    fn unknown_key_reports_line() {
        let e = parse("m = 1.0\nbogus = 2\n", false).unwrap_err();
        assert!(e.contains("bogus") && e.contains("line 2"), "{e}");
        let e = parse("{\n \"m\": 1.0,\n \"bogus\": 2\n}", true).unwrap_err();
        assert!(e.contains("bogus") && e.contains("line 3"), "{e}");
    }

    #[test]
    fn si_roundtrip() {
        let u = Units(UnitMode::Si);
        let v = u.to_internal(1.0, Dimension::LENGTH).unwrap();
        assert!((v * 1.616255e-35 - 1.0).abs() < 1e-5);
        assert!((u.to_user(v, Dimension::LENGTH) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn missing_key_names_command() {
        let cfg = ScenarioConfig::default();
        let r = Resolved::new(&cfg, Units(UnitMode::Planck), "phases");
        let e = r.setup().unwrap_err().to_string();
        assert!(e.contains("`m`") && e.contains("phases"), "{e}");
    }
}
