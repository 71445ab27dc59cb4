//! Dead state and the exergy primitives every component reuses: Carnot
//! heat-transfer factor, work transfer, and per-species mass-transfer
//! exergy (chemical plus physical).

mod nasa;

pub use nasa::{Gas, NasaRange, Species, ThermoData};

use alloc::format;

use crate::error::{Error, Result};
use crate::math::{abs, ln};

/// Universal gas constant, J/(mol K).
pub const R_GAS: f64 = 8.314_462_618;

/// Dead (reference) state: temperature, pressure and atmospheric molar
/// fractions. Species without thermochemistry are lumped into `others`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceState {
    t0: f64,
    p0: f64,
    fractions: [f64; 4],
    others: f64,
}

impl ReferenceState {
    /// `fractions` is indexed by [`Gas::index`].
    pub fn new(t0: f64, p0: f64, fractions: [f64; 4], others: f64) -> Result<Self> {
        if !(t0 > 0.0 && t0.is_finite()) {
            return Err(Error::InvalidReference(format!(
                "T0 must be positive, got {t0}"
            )));
        }
        if !(p0 > 0.0 && p0.is_finite()) {
            return Err(Error::InvalidReference(format!(
                "P0 must be positive, got {p0}"
            )));
        }
        for gas in Gas::ALL {
            let f = fractions[gas.index()];
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidReference(format!(
                    "{} fraction must lie in (0, 1), got {f}",
                    gas.name()
                )));
            }
        }
        if !(others >= 0.0) {
            return Err(Error::InvalidReference(format!(
                "others fraction {others} is negative"
            )));
        }
        let sum: f64 = fractions.iter().sum::<f64>() + others;
        if abs(sum - 1.0) > 1e-9 {
            return Err(Error::InvalidReference(format!(
                "fractions sum to {sum}, not 1"
            )));
        }
        Ok(Self {
            t0,
            p0,
            fractions,
            others,
        })
    }

    /// 298.15 K, 1 atm, humid air with N2 0.7567, O2 0.2035, CO2 0.0003,
    /// H2O 0.0303 and 0.0092 of other species (mostly argon).
    pub fn standard() -> Self {
        let mut f = [0.0; 4];
        f[Gas::N2.index()] = 0.7567;
        f[Gas::O2.index()] = 0.2035;
        f[Gas::H2O.index()] = 0.0303;
        f[Gas::CO2.index()] = 0.0003;
        Self::new(298.15, 101_325.0, f, 0.0092).expect("standard dead state is valid")
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn fraction(&self, gas: Gas) -> f64 {
        self.fractions[gas.index()]
    }

    pub fn others(&self) -> f64 {
        self.others
    }
}

impl Default for ReferenceState {
    fn default() -> Self {
        Self::standard()
    }
}

/// `1 - T0/T`, the share of heat at `t` convertible to work.
pub fn carnot_factor(t: f64, reference: &ReferenceState) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTemperature(t));
    }
    if t < reference.t0 {
        return Err(Error::BelowDeadState {
            t,
            t0: reference.t0,
        });
    }
    Ok(1.0 - reference.t0 / t)
}

/// Exergy carried by a heat flow `q_dot` (W) crossing a boundary at `t`.
/// Negative when heat leaves the system.
pub fn heat_exergy_rate(q_dot: f64, t: f64, reference: &ReferenceState) -> Result<f64> {
    Ok(carnot_factor(t, reference)? * q_dot)
}

/// Work-transfer exergy rate for a system delivering `w_dot` (W). Components
/// here are rigid, so there is no boundary work against the surroundings.
pub fn work_exergy_rate(w_dot: f64) -> f64 {
    -w_dot
}

/// Molar chemical exergy `R T0 ln(f*/f0)` of a species present at molar
/// fraction `f_star` in a stream at T0, P0. Absent species contribute 0.
pub fn chemical_exergy(gas: Gas, f_star: f64, reference: &ReferenceState) -> Result<f64> {
    if !(0.0..=1.0).contains(&f_star) {
        return Err(Error::param(
            "f_star",
            format!("{f_star} is not a molar fraction"),
        ));
    }
    if f_star == 0.0 {
        return Ok(0.0);
    }
    Ok(R_GAS * reference.t0 * ln(f_star / reference.fraction(gas)))
}

/// Molar physical exergy `h(T) - h(T0) - T0 (s(T) - s(T0))` of a species
/// stream at `t` and P0.
pub fn physical_exergy(species: &Species, t: f64, reference: &ReferenceState) -> Result<f64> {
    let t0 = reference.t0;
    if t == t0 {
        return Ok(0.0);
    }
    let dh = species.enthalpy(t)? - species.enthalpy(t0)?;
    let ds = species.entropy(t)? - species.entropy(t0)?;
    Ok(dh - t0 * ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        abs(a - b) <= rel * abs(b).max(1e-300)
    }

    #[test]
    fn carnot_examples() {
        let r = ReferenceState::standard();
        assert_eq!(carnot_factor(298.15, &r).unwrap(), 0.0);
        assert_eq!(carnot_factor(596.30, &r).unwrap(), 0.5);
        assert!(abs(carnot_factor(400.0, &r).unwrap() - 0.2546) < 5e-5);
        assert!(matches!(
            carnot_factor(290.0, &r),
            Err(Error::BelowDeadState { .. })
        ));
        assert!(matches!(
            carnot_factor(0.0, &r),
            Err(Error::NonPositiveTemperature(_))
        ));
    }

    #[test]
    fn heat_exergy_examples() {
        let r = ReferenceState::standard();
        assert_eq!(heat_exergy_rate(0.0, 350.0, &r).unwrap(), 0.0);
        assert_eq!(heat_exergy_rate(-100.0, 596.30, &r).unwrap(), -50.0);
        let x = heat_exergy_rate(-37.2, 310.0, &r).unwrap();
        assert!(abs(x - (-1.422)) < 1e-3, "{x}");
    }

    #[test]
    fn chemical_exergy_examples() {
        let r = ReferenceState::standard();
        assert_eq!(chemical_exergy(Gas::N2, 0.7567, &r).unwrap(), 0.0);
        assert_eq!(chemical_exergy(Gas::O2, 0.0, &r).unwrap(), 0.0);
        let co2 = chemical_exergy(Gas::CO2, 0.125, &r).unwrap();
        // 8.314 * 298.15 * ln(0.125 / 0.0003) by hand = 1.4953e4
        assert!(abs(co2 - 1.495e4) < 10.0, "{co2}");
        assert!(chemical_exergy(Gas::CO2, -0.1, &r).is_err());
    }

    #[test]
    fn reference_state_validation() {
        let good = [0.7567, 0.2035, 0.0303, 0.0003];
        assert!(ReferenceState::new(298.15, 101325.0, good, 0.0092).is_ok());
        assert!(ReferenceState::new(298.15, 101325.0, good, 0.0100).is_err());
        assert!(ReferenceState::new(-1.0, 101325.0, good, 0.0092).is_err());
        assert!(ReferenceState::new(298.15, 0.0, good, 0.0092).is_err());
        let mut no_co2 = good;
        no_co2[3] = 0.0;
        assert!(ReferenceState::new(298.15, 101325.0, no_co2, 0.0095).is_err());
    }

    #[test]
    fn nasa_ranges_are_continuous_at_split() {
        let data = ThermoData::embedded();
        for sp in data.iter() {
            let (lo, hi) = sp.ranges();
            let ts = sp.t_split();
            let hl = R_GAS * ts * lo.h_rt(ts);
            let hh = R_GAS * ts * hi.h_rt(ts);
            let sl = R_GAS * lo.s_r(ts);
            let sh = R_GAS * hi.s_r(ts);
            assert!(close(hh, hl, 1e-3), "{} enthalpy jump", sp.name());
            assert!(close(sh, sl, 1e-3), "{} entropy jump", sp.name());
        }
    }

    #[test]
    fn formation_enthalpies_at_298() {
        let data = ThermoData::embedded();
        let h = |g| data.species(g).enthalpy(298.15).unwrap();
        assert!(abs(h(Gas::N2)) < 5.0);
        assert!(abs(h(Gas::O2)) < 5.0);
        assert!(abs(h(Gas::H2O) + 241_826.0) < 50.0);
        assert!(abs(h(Gas::CO2) + 393_510.0) < 50.0);
    }

    #[test]
    fn physical_exergy_matches_janaf_at_800k() {
        // JANAF: (H - H298) [J/mol], S(800 K), S(298.15 K) [J/(mol K)]
        let janaf = [
            (Gas::N2, 15_046.0, 220.907, 191.609),
            (Gas::O2, 15_835.0, 235.921, 205.147),
            (Gas::H2O, 18_002.0, 223.826, 188.834),
            (Gas::CO2, 22_806.0, 257.494, 213.795),
        ];
        let data = ThermoData::embedded();
        let r = ReferenceState::standard();
        for (gas, dh, s800, s298) in janaf {
            let table = dh - 298.15 * (s800 - s298);
            let psi = physical_exergy(data.species(gas), 800.0, &r).unwrap();
            assert!(psi > 0.0);
            assert!(close(psi, table, 0.01), "{}: {psi} vs {table}", gas.name());
        }
    }

    #[test]
    fn physical_exergy_zero_at_dead_state_and_increasing() {
        let data = ThermoData::embedded();
        let r = ReferenceState::standard();
        for sp in data.iter() {
            assert_eq!(physical_exergy(sp, r.t0(), &r).unwrap(), 0.0);
            let a = physical_exergy(sp, 800.0, &r).unwrap();
            let b = physical_exergy(sp, 900.0, &r).unwrap();
            assert!(b > a);
        }
    }

    #[test]
    fn out_of_range_temperature_errors() {
        let data = ThermoData::embedded();
        let r = ReferenceState::standard();
        let n2 = data.species(Gas::N2);
        assert!(matches!(n2.enthalpy(150.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(
            physical_exergy(n2, 7000.0, &r),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn parse_rejects_malformed_tables() {
        assert!(ThermoData::parse("N2 200 1000 1 2 3").is_err());
        assert!(ThermoData::parse("XX 200 1000 1 2 3 4 5 6 7").is_err());
        // only one range for N2
        let one = "N2 200 1000 1 0 0 0 0 0 0\n";
        assert!(ThermoData::parse(one).is_err());
    }
}
