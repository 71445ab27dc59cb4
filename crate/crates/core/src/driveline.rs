//! Fixed-ratio coupling between the wheels and the machines.

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Driveline {
    /// Motor-to-wheel speed ratio.
    pub motor_ratio: f64,
    /// Number of identical motors sharing the traction demand.
    pub n_motors: u32,
    /// Engine-to-wheel overall ratios, lowest gear first. Empty without an engine.
    pub engine_gears: Vec<f64>,
    /// Lowest crank speed the gear selector shifts up into, rad/s.
    pub shift_speed: f64,
}

impl Driveline {
    pub fn validate(&self) -> Result<()> {
        if !(self.motor_ratio > 0.0) {
            return Err(Error::param("motor_ratio", "must be positive"));
        }
        if self.n_motors == 0 {
            return Err(Error::param("n_motors", "need at least one motor"));
        }
        if self.engine_gears.iter().any(|g| !(*g > 0.0)) {
            return Err(Error::param("engine_gears", "ratios must be positive"));
        }
        if self.engine_gears.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::param(
                "engine_gears",
                "ratios must decrease gear by gear",
            ));
        }
        Ok(())
    }

    pub fn motor_speed(&self, v: f64, r_wh: f64) -> f64 {
        v / r_wh * self.motor_ratio
    }

    /// Gear index and ratio for road speed `v`: the tallest gear that keeps
    /// the crank at or above the shift speed, or first gear.
    pub fn engine_gear(&self, v: f64, r_wh: f64) -> Option<(usize, f64)> {
        if self.engine_gears.is_empty() {
            return None;
        }
        let wheel = v / r_wh;
        let idx = self
            .engine_gears
            .iter()
            .rposition(|g| wheel * g >= self.shift_speed)
            .unwrap_or(0);
        Some((idx, self.engine_gears[idx]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn hev() -> Driveline {
        Driveline {
            motor_ratio: 8.0,
            n_motors: 1,
            engine_gears: vec![13.0, 8.0, 5.5, 4.1, 3.2],
            shift_speed: 150.0,
        }
    }

    #[test]
    fn motor_speed_scales_with_ratio() {
        let d = hev();
        assert!((d.motor_speed(3.0, 0.3) - 80.0).abs() < 1e-12);
    }

    #[test]
    fn gear_selection_keeps_crank_above_shift_speed() {
        let d = hev();
        assert_eq!(d.engine_gear(0.0, 0.3), Some((0, 13.0)));
        for v in [5.0, 10.0, 20.0, 36.0] {
            let (_, g) = d.engine_gear(v, 0.3).unwrap();
            assert!(v / 0.3 * g >= 150.0, "{v}");
        }
        assert_eq!(d.engine_gear(36.0, 0.3).unwrap().0, 4);
        let ev = Driveline {
            engine_gears: vec![],
            ..hev()
        };
        assert_eq!(ev.engine_gear(10.0, 0.3), None);
    }

    #[test]
    fn gear_ratios_must_decrease() {
        let mut d = hev();
        assert!(d.validate().is_ok());
        d.engine_gears = vec![3.0, 5.0];
        assert!(d.validate().is_err());
    }
}
