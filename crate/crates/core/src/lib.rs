//! Numerical engine for the gravitational which-way signaling problem.
//!
//! The crate is organised by subsystem:
//!
//! * [`units`] - dimension-tagged quantities, CODATA constants, Planck units.
//! * [`trajectory`] - the radiation-minimising closing trajectory and its
//!   brute-force oracle.
//! * [`interferometry`] - quadrupole potential, gravitational phases,
//!   wavepacket evolution and visibility.
//! * [`quasiatom`] - the two-body hydrogen-like system and its dipole
//!   matrix elements.
//! * [`radiative`] - photon emission/absorption rates.
//! * [`graviton`] - quadrupole coupling to quantized gravitational waves,
//!   selection rules, first- and second-order amplitudes.
//! * [`feasibility`] - the inequality chain deciding whether superluminal
//!   signaling is blocked.
//!
//! All physics functions take a [`Constants`] table. [`Constants::planck`]
//! gives G = hbar = c = k_e = 1 and is the default working system;
//! [`Constants::si`] is available for SI-mode sanity checks.

pub mod error;
pub mod feasibility;
pub mod graviton;
pub mod interferometry;
pub mod ode;
pub mod optimize;
pub mod polynomial;
pub mod quadrature;
pub mod quasiatom;
pub mod radiative;
pub mod selftest;
pub mod special;
pub mod trajectory;
pub mod units;

pub use error::{Error, Result};
pub use feasibility::{FeasibilityReport, Verdict};
pub use interferometry::{AliceQuadrupole, InterferometerSetup, PhaseSet};
pub use quasiatom::{OrbitalLabel, QuasiatomParams};
pub use trajectory::{RadiationResult, SampledTrajectory, TrajectoryFamilyParam};
pub use units::{Constants, Dimension, PhysicalQuantity, UnitMode};

pub use num_complex::Complex64;
