//! Dimension-checked quantities and the constant table.
//!
//! Dimensions are integer exponent vectors over (mass, length, time, charge).
//! Quantities carry a value in whatever unit system produced them; the
//! conversion helpers [`to_planck`] and [`from_planck`] move between SI and
//! Planck units using the CODATA 2018 table.

use std::fmt;
use std::ops::{Div, Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CODATA 2018 values in SI.
pub mod codata {
    pub const G: f64 = 6.674_30e-11;
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const C: f64 = 299_792_458.0;
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
    /// 1 / (4 pi epsilon_0)
    pub const COULOMB: f64 = 8.987_551_792_3e9;
    pub const PROTON_MASS: f64 = 1.672_621_923_69e-27;
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
    pub const ELECTRON_VOLT: f64 = ELEMENTARY_CHARGE;
    /// Rydberg energy with infinite nuclear mass, in eV.
    pub const RYDBERG_EV: f64 = 13.605_693_122_994;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Dimension {
    pub mass: i8,
    pub length: i8,
    pub time: i8,
    pub charge: i8,
}

impl Dimension {
    pub const fn new(mass: i8, length: i8, time: i8, charge: i8) -> Self {
        Self {
            mass,
            length,
            time,
            charge,
        }
    }

    pub const DIMENSIONLESS: Self = Self::new(0, 0, 0, 0);
    pub const MASS: Self = Self::new(1, 0, 0, 0);
    pub const LENGTH: Self = Self::new(0, 1, 0, 0);
    pub const TIME: Self = Self::new(0, 0, 1, 0);
    pub const CHARGE: Self = Self::new(0, 0, 0, 1);
    pub const VELOCITY: Self = Self::new(0, 1, -1, 0);
    pub const FREQUENCY: Self = Self::new(0, 0, -1, 0);
    pub const ENERGY: Self = Self::new(1, 2, -2, 0);
    pub const ACTION: Self = Self::new(1, 2, -1, 0);
    pub const QUADRUPOLE: Self = Self::new(1, 2, 0, 0);
    /// Gravitational potential (energy per unit mass).
    pub const SPECIFIC_ENERGY: Self = Self::new(0, 2, -2, 0);
    pub const GRAVITATIONAL: Self = Self::new(-1, 3, -2, 0);
    /// Coulomb constant k_e: energy * length / charge^2.
    pub const COULOMB: Self = Self::new(1, 3, -2, -2);
    pub const FIELD_STRENGTH: Self = Self::new(1, 1, -2, -1);
    pub const VOLUME: Self = Self::new(0, 3, 0, 0);

    pub fn is_dimensionless(&self) -> bool {
        *self == Self::DIMENSIONLESS
    }

    pub fn powi(self, n: i8) -> Self {
        Self::new(self.mass * n, self.length * n, self.time * n, self.charge * n)
    }

    /// Square root of a dimension; fails when any exponent is odd.
    pub fn sqrt(self) -> Option<Self> {
        let all_even = [self.mass, self.length, self.time, self.charge]
            .iter()
            .all(|e| e % 2 == 0);
        all_even.then(|| Self::new(self.mass / 2, self.length / 2, self.time / 2, self.charge / 2))
    }
}

impl Mul for Dimension {
    type Output = Dimension;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.mass + rhs.mass,
            self.length + rhs.length,
            self.time + rhs.time,
            self.charge + rhs.charge,
        )
    }
}

impl Div for Dimension {
    type Output = Dimension;
    fn div(self, rhs: Self) -> Self {
        Self::new(
            self.mass - rhs.mass,
            self.length - rhs.length,
            self.time - rhs.time,
            self.charge - rhs.charge,
        )
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dimensionless() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (sym, e) in [
            ("M", self.mass),
            ("L", self.length),
            ("T", self.time),
            ("Q", self.charge),
        ] {
            match e {
                0 => {}
                1 => parts.push(sym.to_string()),
                _ => parts.push(format!("{sym}^{e}")),
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalQuantity {
    pub value: f64,
    pub dim: Dimension,
}

impl PhysicalQuantity {
    pub const fn new(value: f64, dim: Dimension) -> Self {
        Self { value, dim }
    }

    pub const fn dimensionless(value: f64) -> Self {
        Self::new(value, Dimension::DIMENSIONLESS)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                lhs: self.dim,
                rhs: rhs.dim,
            });
        }
        Ok(Self::new(self.value + rhs.value, self.dim))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        self.checked_add(-rhs)
    }

    pub fn powi(self, n: i8) -> Self {
        Self::new(self.value.powi(n as i32), self.dim.powi(n))
    }

    pub fn sqrt(self) -> Result<Self> {
        let dim = self.dim.sqrt().ok_or(Error::DimensionMismatch {
            lhs: self.dim,
            rhs: Dimension::DIMENSIONLESS,
        })?;
        if self.value < 0.0 {
            return Err(Error::InvalidParameter {
                name: "sqrt",
                reason: format!("negative operand {}", self.value),
            });
        }
        Ok(Self::new(self.value.sqrt(), dim))
    }

    pub fn scale(self, factor: f64) -> Self {
        Self::new(self.value * factor, self.dim)
    }

    /// Ratio of two quantities of identical dimension.
    pub fn ratio(self, rhs: Self) -> Result<f64> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                lhs: self.dim,
                rhs: rhs.dim,
            });
        }
        Ok(self.value / rhs.value)
    }
}

impl Mul for PhysicalQuantity {
    type Output = PhysicalQuantity;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.value * rhs.value, self.dim * rhs.dim)
    }
}

impl Div for PhysicalQuantity {
    type Output = PhysicalQuantity;
    fn div(self, rhs: Self) -> Self {
        Self::new(self.value / rhs.value, self.dim / rhs.dim)
    }
}

impl Mul<f64> for PhysicalQuantity {
    type Output = PhysicalQuantity;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Neg for PhysicalQuantity {
    type Output = PhysicalQuantity;
    fn neg(self) -> Self {
        Self::new(-self.value, self.dim)
    }
}

/// True iff the two quantities have identical dimension vectors.
pub fn dim_check(a: &PhysicalQuantity, b: &PhysicalQuantity) -> bool {
    a.dim == b.dim
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    #[default]
    Planck,
    Si,
}

/// Fundamental constants in one unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub g: f64,
    pub hbar: f64,
    pub c: f64,
    pub k_e: f64,
    pub e: f64,
    pub mode: UnitMode,
}

impl Constants {
    pub fn si() -> Self {
        Self {
            g: codata::G,
            hbar: codata::HBAR,
            c: codata::C,
            k_e: codata::COULOMB,
            e: codata::ELEMENTARY_CHARGE,
            mode: UnitMode::Si,
        }
    }

    /// G = hbar = c = k_e = 1; the elementary charge becomes sqrt(alpha).
    pub fn planck() -> Self {
        Self {
            g: 1.0,
            hbar: 1.0,
            c: 1.0,
            k_e: 1.0,
            e: fine_structure().sqrt(),
            mode: UnitMode::Planck,
        }
    }

    pub fn for_mode(mode: UnitMode) -> Self {
        match mode {
            UnitMode::Planck => Self::planck(),
            UnitMode::Si => Self::si(),
        }
    }

    pub fn planck_mass(&self) -> f64 {
        (self.hbar * self.c / self.g).sqrt()
    }

    pub fn planck_time(&self) -> f64 {
        (self.hbar * self.g / self.c.powi(5)).sqrt()
    }

    /// Defined as c * t_P so that l_P = c t_P holds exactly.
    pub fn planck_length(&self) -> f64 {
        self.c * self.planck_time()
    }

    /// Defined as m_P c^2.
    pub fn planck_energy(&self) -> f64 {
        self.planck_mass() * self.c * self.c
    }

    /// Charge unit with k_e q_P^2 = hbar c.
    pub fn planck_charge(&self) -> f64 {
        (self.hbar * self.c / self.k_e).sqrt()
    }

    pub fn fine_structure(&self) -> f64 {
        self.k_e * self.e * self.e / (self.hbar * self.c)
    }

    pub fn g_quantity(&self) -> PhysicalQuantity {
        PhysicalQuantity::new(self.g, Dimension::GRAVITATIONAL)
    }

    pub fn hbar_quantity(&self) -> PhysicalQuantity {
        PhysicalQuantity::new(self.hbar, Dimension::ACTION)
    }

    pub fn c_quantity(&self) -> PhysicalQuantity {
        PhysicalQuantity::new(self.c, Dimension::VELOCITY)
    }

    pub fn k_e_quantity(&self) -> PhysicalQuantity {
        PhysicalQuantity::new(self.k_e, Dimension::COULOMB)
    }

    pub fn e_quantity(&self) -> PhysicalQuantity {
        PhysicalQuantity::new(self.e, Dimension::CHARGE)
    }

    /// The Planck unit carrying a given dimension, in this system.
    pub fn planck_unit(&self, dim: Dimension) -> f64 {
        self.planck_mass().powi(dim.mass as i32)
            * self.planck_length().powi(dim.length as i32)
            * self.planck_time().powi(dim.time as i32)
            * self.planck_charge().powi(dim.charge as i32)
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::planck()
    }
}

/// alpha = k_e e^2 / (hbar c) from the CODATA table.
pub fn fine_structure() -> f64 {
    codata::COULOMB * codata::ELEMENTARY_CHARGE * codata::ELEMENTARY_CHARGE / (codata::HBAR * codata::C)
}

/// Rescale an SI quantity so that the matching Planck unit equals one.
pub fn to_planck(q: PhysicalQuantity) -> Result<PhysicalQuantity> {
    if !q.is_finite() {
        return Err(Error::NonFinite("to_planck"));
    }
    let unit = Constants::si().planck_unit(q.dim);
    Ok(PhysicalQuantity::new(q.value / unit, q.dim))
}

/// Inverse of [`to_planck`].
pub fn from_planck(q: PhysicalQuantity) -> Result<PhysicalQuantity> {
    if !q.is_finite() {
        return Err(Error::NonFinite("from_planck"));
    }
    let unit = Constants::si().planck_unit(q.dim);
    Ok(PhysicalQuantity::new(q.value * unit, q.dim))
}

/// Serialisable SI constant record (`constants.json`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRecord {
    #[serde(rename = "G")]
    pub g: f64,
    pub hbar: f64,
    pub c: f64,
    pub k_e: f64,
    pub e: f64,
}

impl From<&Constants> for ConstantsRecord {
    fn from(c: &Constants) -> Self {
        Self {
            g: c.g,
            hbar: c.hbar,
            c: c.c,
            k_e: c.k_e,
            e: c.e,
        }
    }
}

pub fn constants_json() -> String {
    let record = ConstantsRecord::from(&Constants::si());
    serde_json::to_string_pretty(&record).expect("plain struct serialises")
}
