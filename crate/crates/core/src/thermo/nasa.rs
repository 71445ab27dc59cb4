//! NASA 7-coefficient ideal-gas property polynomials.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::ln;
use crate::thermo::R_GAS;

const EMBEDDED: &str = include_str!("../../data/nasa7.dat");

/// Gaseous species tracked in the atmosphere and in the exhaust.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gas {
    N2,
    O2,
    H2O,
    CO2,
}

impl Gas {
    pub const ALL: [Gas; 4] = [Gas::N2, Gas::O2, Gas::H2O, Gas::CO2];

    pub fn name(self) -> &'static str {
        match self {
            Gas::N2 => "N2",
            Gas::O2 => "O2",
            Gas::H2O => "H2O",
            Gas::CO2 => "CO2",
        }
    }

    /// Molar mass in kg/mol.
    pub fn molar_mass(self) -> f64 {
        match self {
            Gas::N2 => 28.0134e-3,
            Gas::O2 => 31.9988e-3,
            Gas::H2O => 18.01528e-3,
            Gas::CO2 => 44.0095e-3,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_name(name: &str) -> Option<Gas> {
        Gas::ALL.into_iter().find(|g| g.name() == name)
    }
}

/// One temperature range of a NASA polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NasaRange {
    pub t_low: f64,
    pub t_high: f64,
    pub a: [f64; 7],
}

impl NasaRange {
    pub(crate) fn cp_r(&self, t: f64) -> f64 {
        let a = &self.a;
        a[0] + t * (a[1] + t * (a[2] + t * (a[3] + t * a[4])))
    }

    pub(crate) fn h_rt(&self, t: f64) -> f64 {
        let a = &self.a;
        a[0] + t * (a[1] / 2.0 + t * (a[2] / 3.0 + t * (a[3] / 4.0 + t * a[4] / 5.0))) + a[5] / t
    }

    pub(crate) fn s_r(&self, t: f64) -> f64 {
        let a = &self.a;
        a[0] * ln(t) + t * (a[1] + t * (a[2] / 2.0 + t * (a[3] / 3.0 + t * a[4] / 4.0))) + a[6]
    }
}

/// Thermochemical data of one species.
#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub gas: Gas,
    pub molar_mass: f64,
    low: NasaRange,
    high: NasaRange,
}

impl Species {
    pub fn new(gas: Gas, low: NasaRange, high: NasaRange) -> Result<Self> {
        let bad = |reason: &str| Error::ThermoData {
            line: 0,
            reason: format!("{}: {reason}", gas.name()),
        };
        if !(low.t_low > 0.0 && low.t_low < low.t_high) || !(high.t_low < high.t_high) {
            return Err(bad("temperature ranges must be positive and increasing"));
        }
        if low.t_high != high.t_low {
            return Err(bad("ranges must meet at a common split temperature"));
        }
        Ok(Self {
            gas,
            molar_mass: gas.molar_mass(),
            low,
            high,
        })
    }

    pub fn name(&self) -> &'static str {
        self.gas.name()
    }

    pub fn t_min(&self) -> f64 {
        self.low.t_low
    }

    pub fn t_max(&self) -> f64 {
        self.high.t_high
    }

    pub fn t_split(&self) -> f64 {
        self.low.t_high
    }

    pub fn ranges(&self) -> (&NasaRange, &NasaRange) {
        (&self.low, &self.high)
    }

    fn range(&self, t: f64) -> Result<&NasaRange> {
        if !(t >= self.t_min() && t <= self.t_max()) {
            return Err(Error::OutOfRange {
                species: self.name(),
                t,
                lo: self.t_min(),
                hi: self.t_max(),
            });
        }
        Ok(if t <= self.t_split() {
            &self.low
        } else {
            &self.high
        })
    }

    /// Molar heat capacity, J/(mol K).
    pub fn cp(&self, t: f64) -> Result<f64> {
        Ok(R_GAS * self.range(t)?.cp_r(t))
    }

    /// Molar enthalpy including formation enthalpy, J/mol.
    pub fn enthalpy(&self, t: f64) -> Result<f64> {
        Ok(R_GAS * t * self.range(t)?.h_rt(t))
    }

    /// Molar entropy at the standard pressure, J/(mol K).
    pub fn entropy(&self, t: f64) -> Result<f64> {
        Ok(R_GAS * self.range(t)?.s_r(t))
    }
}

/// Property data for every tracked gas.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoData {
    species: [Species; 4],
}

impl ThermoData {
    /// The coefficient table shipped with the crate.
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED).expect("embedded NASA table is valid")
    }

    /// Parses a whitespace- or comma-delimited table with one line per
    /// species and range: `name t_low t_high a1 .. a7`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ranges: [Vec<NasaRange>; 4] = Default::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            let err = |reason: &str| Error::ThermoData {
                line: line_no,
                reason: reason.to_string(),
            };
            if fields.len() != 10 {
                return Err(err("expected name, two temperatures and 7 coefficients"));
            }
            let gas = Gas::from_name(fields[0]).ok_or_else(|| err("unknown species"))?;
            let mut nums = [0.0; 9];
            for (slot, f) in nums.iter_mut().zip(&fields[1..]) {
                *slot = f
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err("malformed number"))?;
            }
            let mut a = [0.0; 7];
            a.copy_from_slice(&nums[2..]);
            ranges[gas.index()].push(NasaRange {
                t_low: nums[0],
                t_high: nums[1],
                a,
            });
        }
        let mut out: Vec<Species> = Vec::with_capacity(4);
        for gas in Gas::ALL {
            let mut rs = core::mem::take(&mut ranges[gas.index()]);
            if rs.len() != 2 {
                return Err(Error::ThermoData {
                    line: 0,
                    reason: format!(
                        "{} needs exactly two ranges, found {}",
                        gas.name(),
                        rs.len()
                    ),
                });
            }
            rs.sort_by(|a, b| a.t_low.total_cmp(&b.t_low));
            out.push(Species::new(gas, rs[0], rs[1])?);
        }
        let species: [Species; 4] = out.try_into().expect("four species");
        Ok(Self { species })
    }

    pub fn species(&self, gas: Gas) -> &Species {
        &self.species[gas.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Species> {
        self.species.iter()
    }
}

impl Default for ThermoData {
    fn default() -> Self {
        Self::embedded()
    }
}
