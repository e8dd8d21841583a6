//! `gravsig` command line: every analysis as a subcommand writing CSV or
//! JSON. Exit codes: 0 success, 2 invalid input, 1 numerical failure.

pub mod commands;
pub mod output;
pub mod scenario;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gravsig_core::UnitMode;

use crate::commands::{Ctx, SweepArgs};
use crate::scenario::{Format, Resolved, ScenarioConfig, Units};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<gravsig_core::Error> for CliError {
    fn from(e: gravsig_core::Error) -> Self {
        use gravsig_core::Error as E;
        match e {
            E::QuadratureNotConverged { .. } | E::Ode(_) | E::AllRestartsFailed(_) | E::Pole { .. } => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnitArg {
    Planck,
    Si,
}

#[derive(Debug, Parser)]
#[command(
    name = "gravsig",
    version,
    about = "Gravitational which-way signaling feasibility toolkit"
)]
struct Cli {
    /// Scenario file (.toml or .json). Without one the built-in demo scenario is used.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Unit system of scenario values and outputs [default: planck]
    #[arg(long, global = true, value_enum)]
    unit_mode: Option<UnitArg>,
    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sample count for sampled curves
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Radiation-optimal closing trajectory x(t), v(t)
    Trajectory,
    /// Visibility along the closing stroke and its window average
    Visibility,
    /// Branch phases Gamma, gamma and the four path phases
    Phases,
    /// Quasi-atom summary: masses, Rydberg energy, Bohr radius, levels
    Atom,
    /// Photon emission, absorption and spontaneous rates with the stability window
    Rates,
    /// Single-graviton selection table up to l_max
    Graviton,
    /// Full feasibility report for the scenario
    Feasibility,
    /// Derived constants against their printed values
    Constants,
    /// Feasibility over a grid in one parameter
    Sweep {
        /// Parameter to vary (m, E0, E1, d, D, d_over_D, tau_a, tau_f, T, sigma, delta_t, Q0, delta_q)
        #[arg(long)]
        param: String,
        /// Inclusive range LO:HI in the active unit system
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        range: (f64, f64),
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Oracle suite; exits 1 if any check fails
    Selftest,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok((p(lo)?, p(hi)?))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Trajectory => "trajectory",
        Command::Visibility => "visibility",
        Command::Phases => "phases",
        Command::Atom => "atom",
        Command::Rates => "rates",
        Command::Graviton => "graviton",
        Command::Feasibility => "feasibility",
        Command::Constants => "constants",
        Command::Sweep { .. } => "sweep",
        Command::Selftest => "selftest",
    }
}

/// Parse `argv`, run the command, write the artifact. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let cfg = match &cli.scenario {
        Some(p) => scenario::load(p)?,
        None => scenario::demo(),
    };
    let mode = match cli.unit_mode {
        Some(UnitArg::Planck) => UnitMode::Planck,
        Some(UnitArg::Si) => UnitMode::Si,
        None => cfg.unit_mode.unwrap_or_default(),
    };
    let units = Units(mode);
    let out_spec = cfg.output.clone().unwrap_or_default();
    let format = cli.format.or(out_spec.format).unwrap_or(Format::Csv);
    let out = cli.out.clone().or(out_spec.path);
    let name = command_name(&cli.command);
    log::info!("{name}: unit mode {mode:?}, format {format:?}");

    let ctx = Ctx {
        scenario: Resolved::new(&cfg, units, name),
        units,
        samples: cli.samples.or(cfg.samples),
        seed: cli.seed.or(cfg.seed).unwrap_or(0),
    };
    let mut code = 0;
    let artifact = match &cli.command {
        Command::Trajectory => commands::trajectory(&ctx)?,
        Command::Visibility => commands::visibility(&ctx)?,
        Command::Phases => commands::phases(&ctx)?,
        Command::Atom => commands::atom(&ctx)?,
        Command::Rates => commands::rates(&ctx)?,
        Command::Graviton => commands::graviton(&ctx)?,
        Command::Feasibility => commands::feasibility(&ctx)?,
        Command::Constants => commands::constants(&ctx)?,
        Command::Sweep { param, range, points } => commands::sweep(
            &ctx,
            &SweepArgs {
                param,
                lo: range.0,
                hi: range.1,
                points: *points,
            },
        )?,
        Command::Selftest => {
            let (a, ok) = commands::selftest(&ctx)?;
            if !ok {
                code = 1;
            }
            a
        }
    };
    output::write(&artifact.render(format)?, out.as_deref())?;
    Ok(code)
}

/// Parse a scenario without running anything; used by tests and tooling.
pub fn parse_scenario(text: &str, is_json: bool) -> Result<ScenarioConfig, CliError> {
    scenario::parse(text, is_json).map_err(CliError::Validation)
}
