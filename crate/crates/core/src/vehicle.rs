//! Longitudinal chassis dynamics on a flat road.

use alloc::format;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ChassisParams {
    /// Vehicle mass, kg.
    pub m_veh: f64,
    /// Frontal area, m².
    pub a_f: f64,
    pub c_d: f64,
    pub k_roll: f64,
    /// Wheel radius, m.
    pub r_wh: f64,
    /// Air density, kg/m³.
    pub rho_air: f64,
    pub g: f64,
    pub eta_diff: f64,
}

impl ChassisParams {
    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("m_veh", self.m_veh),
            ("a_f", self.a_f),
            ("c_d", self.c_d),
            ("k_roll", self.k_roll),
            ("r_wh", self.r_wh),
            ("rho_air", self.rho_air),
            ("g", self.g),
            ("eta_diff", self.eta_diff),
        ];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        if self.c_d >= 1.0 {
            return Err(Error::param("c_d", "must be below 1"));
        }
        if self.k_roll >= 0.1 {
            return Err(Error::param("k_roll", "must be below 0.1"));
        }
        if self.eta_diff > 1.0 {
            return Err(Error::param("eta_diff", "must not exceed 1"));
        }
        Ok(())
    }

    pub fn aero_force(&self, v: f64) -> f64 {
        0.5 * self.a_f * self.rho_air * self.c_d * v * v
    }

    /// Rolling resistance; zero at standstill since static friction does no work.
    pub fn roll_force(&self, v: f64) -> f64 {
        if v > 0.0 {
            self.m_veh * self.g * self.k_roll
        } else {
            0.0
        }
    }
}

/// Returns `(F_aero, F_roll)` in N.
pub fn resistive_forces(v: f64, params: &ChassisParams) -> (f64, f64) {
    (params.aero_force(v), params.roll_force(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LongitudinalState {
    /// Speed, m/s.
    pub v: f64,
    /// Distance travelled, m.
    pub x: f64,
}

/// Forces actually applied over a step, after the standstill clamp.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AppliedForces {
    pub trac: f64,
    pub brake: f64,
    pub roll: f64,
    pub aero: f64,
}

/// Step-averaged powers at the wheels, W.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PowerTerms {
    pub trac: f64,
    pub brake: f64,
    pub roll: f64,
    pub aero: f64,
    /// `m v̇ v`, the rate of change of kinetic energy.
    pub long: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongitudinalStep {
    pub state: LongitudinalState,
    pub forces: AppliedForces,
    pub powers: PowerTerms,
    /// Mean speed over the step, m/s.
    pub v_mid: f64,
}

/// Advances the speed by one explicit step with forces evaluated at the
/// start speed.
///
/// Powers are force times the mean step speed, so that `P_long * dt` equals
/// the kinetic-energy change exactly. When the update would reverse the
/// vehicle, the speed is clamped at zero and the surplus decelerating force
/// is removed from the friction brake first, then from rolling resistance,
/// drag and finally regenerative traction.
pub fn step_longitudinal(
    state: LongitudinalState,
    f_trac: f64,
    f_brake: f64,
    params: &ChassisParams,
    dt: f64,
) -> LongitudinalStep {
    let v = state.v.max(0.0);
    let (aero, roll) = resistive_forces(v, params);
    let mut f = AppliedForces {
        trac: f_trac,
        brake: f_brake.max(0.0),
        roll,
        aero,
    };
    let m = params.m_veh;
    let net = f.trac - f.brake - f.roll - f.aero;
    let mut v_next = v + dt * net / m;
    if v_next < 0.0 {
        // net force that brings the vehicle exactly to rest
        let needed = -m * v / dt;
        let mut excess = needed - net;
        for slot in [&mut f.brake, &mut f.roll, &mut f.aero] {
            let cut = excess.min(*slot);
            *slot -= cut;
            excess -= cut;
        }
        if excess > 0.0 && f.trac < 0.0 {
            let cut = excess.min(-f.trac);
            f.trac += cut;
        }
        v_next = 0.0;
    }
    let v_mid = 0.5 * (v + v_next);
    let accel = (v_next - v) / dt;
    let powers = PowerTerms {
        trac: f.trac * v_mid,
        brake: f.brake * v_mid,
        roll: f.roll * v_mid,
        aero: f.aero * v_mid,
        long: m * accel * v_mid,
    };
    LongitudinalStep {
        state: LongitudinalState {
            v: v_next,
            x: state.x + v_mid * dt,
        },
        forces: f,
        powers,
        v_mid,
    }
}

/// Exergy rate of the chassis, `P_trac - P_brake - P_roll - P_aero`.
pub fn hamiltonian_rate(p: &PowerTerms) -> f64 {
    p.trac - p.brake - p.roll - p.aero
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev() -> ChassisParams {
        ChassisParams {
            m_veh: 2108.0,
            a_f: 2.34,
            c_d: 0.24,
            k_roll: 0.009,
            r_wh: 0.483,
            rho_air: 1.18,
            g: 9.81,
            eta_diff: 0.98,
        }
    }

    fn unit_mass() -> ChassisParams {
        ChassisParams {
            m_veh: 1000.0,
            a_f: 1e-12,
            c_d: 1e-12,
            k_roll: 1e-12,
            ..ev()
        }
    }

    #[test]
    fn resistive_force_examples() {
        let p = ev();
        assert_eq!(resistive_forces(0.0, &p), (0.0, 0.0));
        let (aero, roll) = resistive_forces(30.0, &p);
        // 0.5 * 2.34 * 1.18 * 0.24 * 900 = 298.2
        assert!((aero - 298.2).abs() < 0.05, "{aero}");
        // 2108 * 9.81 * 0.009 = 186.1
        assert!((roll - 186.1).abs() < 0.05, "{roll}");
    }

    #[test]
    fn steady_state_holds_speed() {
        let p = ev();
        let s = LongitudinalState { v: 20.0, x: 0.0 };
        let (aero, roll) = resistive_forces(20.0, &p);
        let out = step_longitudinal(s, aero + roll, 0.0, &p, 1.0);
        assert!((out.state.v - 20.0).abs() < 1e-12);
        assert!(out.powers.long.abs() < 1e-9);
        assert!(out.powers.trac > 0.0);
    }

    #[test]
    fn free_rolling_without_forces() {
        let p = unit_mass();
        let s = LongitudinalState { v: 10.0, x: 0.0 };
        let out = step_longitudinal(s, 0.0, 0.0, &p, 1.0);
        assert!((out.state.v - 10.0).abs() < 1e-6);
        assert_eq!(out.powers.trac, 0.0);
        assert_eq!(out.powers.brake, 0.0);
    }

    #[test]
    fn hand_integrated_acceleration() {
        let p = unit_mass();
        let s = LongitudinalState { v: 10.0, x: 0.0 };
        let out = step_longitudinal(s, 1000.0, 0.0, &p, 1.0);
        assert!((out.state.v - 11.0).abs() < 1e-6);
        // force times mean speed (10.5 m/s); 10 kW at the start speed
        assert!((out.powers.trac - 10_500.0).abs() < 1e-3);
        assert!((out.powers.long - 10_500.0).abs() < 1e-3);
        // kinetic energy change: 0.5 * 1000 * (121 - 100)
        assert!((out.powers.long * 1.0 - 10_500.0).abs() < 1e-3);
    }

    #[test]
    fn coastdown_loses_exergy() {
        let p = ev();
        let s = LongitudinalState { v: 25.0, x: 0.0 };
        let out = step_longitudinal(s, 0.0, 0.0, &p, 1.0);
        let rate = hamiltonian_rate(&out.powers);
        assert!(rate < 0.0);
        assert!((rate + out.powers.roll + out.powers.aero).abs() < 1e-9);
        assert!((rate - out.powers.long).abs() < 1e-9 * rate.abs());
    }

    #[test]
    fn braking_to_rest_clamps_and_trims_brake() {
        let p = ev();
        let s = LongitudinalState { v: 1.0, x: 0.0 };
        let out = step_longitudinal(s, -500.0, 10_000.0, &p, 1.0);
        assert_eq!(out.state.v, 0.0);
        assert!(out.forces.brake < 10_000.0 && out.forces.brake >= 0.0);
        let net = out.forces.trac - out.forces.brake - out.forces.roll - out.forces.aero;
        assert!((net + p.m_veh).abs() < 1e-9);
        // regen kept because the brake absorbed the surplus
        assert_eq!(out.forces.trac, -500.0);
    }

    #[test]
    fn validation_rejects_bad_params() {
        let mut p = ev();
        assert!(p.validate().is_ok());
        p.c_d = 1.2;
        assert!(p.validate().is_err());
        let mut p = ev();
        p.eta_diff = 1.1;
        assert!(p.validate().is_err());
        let mut p = ev();
        p.m_veh = 0.0;
        assert!(p.validate().is_err());
    }
}
