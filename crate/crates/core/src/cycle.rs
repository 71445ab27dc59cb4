//! Time-stamped target speed profiles.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DriveCycle {
    t: Vec<f64>,
    v: Vec<f64>,
}

impl DriveCycle {
    /// `t` in s starting at 0 and strictly increasing; `v` in m/s, non-negative.
    pub fn new(t: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::Cycle("cycle has no samples".into()));
        }
        if t.len() != v.len() {
            return Err(Error::Cycle(format!(
                "{} time stamps but {} speeds",
                t.len(),
                v.len()
            )));
        }
        if t[0] != 0.0 {
            return Err(Error::Cycle(format!("first time stamp is {}, not 0", t[0])));
        }
        for i in 1..t.len() {
            if !(t[i] > t[i - 1]) || !t[i].is_finite() {
                return Err(Error::Cycle(format!("time not increasing at sample {i}")));
            }
        }
        if let Some(i) = v.iter().position(|x| !(*x >= 0.0) || !x.is_finite()) {
            return Err(Error::Cycle(format!(
                "invalid speed {} at sample {i}",
                v[i]
            )));
        }
        Ok(Self { t, v })
    }

    pub fn from_kmh(t: Vec<f64>, v_kmh: Vec<f64>) -> Result<Self> {
        Self::new(t, v_kmh.into_iter().map(|x| x / 3.6).collect())
    }

    /// Constant-speed samples every `dt` seconds.
    pub fn constant(v: f64, duration: f64, dt: f64) -> Result<Self> {
        let n = crate::math::round(duration / dt) as usize;
        let t = (0..=n).map(|k| k as f64 * dt).collect();
        Self::new(t, alloc::vec![v; n + 1])
    }

    pub fn times(&self) -> &[f64] {
        &self.t
    }

    /// Target speeds, m/s.
    pub fn speeds(&self) -> &[f64] {
        &self.v
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    pub fn max_speed(&self) -> f64 {
        self.v.iter().copied().fold(0.0, f64::max)
    }

    /// Distance by the trapezoidal rule, m.
    pub fn distance(&self) -> f64 {
        self.t
            .windows(2)
            .zip(self.v.windows(2))
            .map(|(t, v)| 0.5 * (v[0] + v[1]) * (t[1] - t[0]))
            .sum()
    }

    /// Target speed at `t`, linearly interpolated and held past the end.
    pub fn target(&self, t: f64) -> f64 {
        let n = self.t.len();
        if t <= self.t[0] {
            return self.v[0];
        }
        if t >= self.t[n - 1] {
            return self.v[n - 1];
        }
        let hi = self.t.partition_point(|&x| x <= t);
        let lo = hi - 1;
        let w = (t - self.t[lo]) / (self.t[hi] - self.t[lo]);
        self.v[lo] + w * (self.v[hi] - self.v[lo])
    }

    /// Simulation time grid `0, dt, 2 dt, ...` up to the cycle end.
    pub fn time_grid(&self, dt: f64) -> Vec<f64> {
        let n = crate::math::floor(self.duration() / dt + 1e-9) as usize;
        (0..=n).map(|k| k as f64 * dt).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn ramp_cycle_interpolates() {
        let c = DriveCycle::from_kmh(vec![0.0, 10.0], vec![0.0, 36.0]).unwrap();
        assert_eq!(c.len(), 2);
        assert!((c.target(5.0) - 5.0).abs() < 1e-12);
        assert_eq!(c.target(20.0), 10.0);
        assert!((c.distance() - 50.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(DriveCycle::new(vec![], vec![]).is_err());
        assert!(DriveCycle::new(vec![0.0, 2.0, 1.0], vec![0.0; 3]).is_err());
        assert!(DriveCycle::new(vec![0.0, 1.0], vec![0.0, -1.0]).is_err());
        assert!(DriveCycle::new(vec![1.0, 2.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn grid_covers_duration() {
        let c = DriveCycle::constant(0.0, 10.0, 1.0).unwrap();
        assert_eq!(c.time_grid(1.0).len(), 11);
        assert_eq!(c.time_grid(0.5).len(), 21);
        assert_eq!(*c.time_grid(0.5).last().unwrap(), 10.0);
    }
}
