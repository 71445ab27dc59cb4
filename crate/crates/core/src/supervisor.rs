//! Driver model, EV power path and ECMS torque split for the parallel hybrid.
//!
//! Every dispatch decides the wheel forces for one step and predicts the
//! resulting longitudinal step, so that machine speeds follow the mean step
//! speed exactly as the chassis integrator does.

use alloc::vec::Vec;

use crate::battery::PackParams;
use crate::driveline::Driveline;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::motor::MotorParams;
use crate::vehicle::{
    resistive_forces, step_longitudinal, ChassisParams, LongitudinalState, LongitudinalStep,
};

#[derive(Debug, Clone, PartialEq)]
pub struct DriverParams {
    /// Proportional gain, N/(m/s).
    pub kp: f64,
    /// Integral gain, N/m.
    pub ki: f64,
    pub f_trac_max: f64,
    pub f_brake_max: f64,
}

impl DriverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.kp >= 0.0 && self.ki >= 0.0) {
            return Err(Error::param("kp/ki", "gains must be non-negative"));
        }
        if !(self.f_trac_max > 0.0 && self.f_brake_max > 0.0) {
            return Err(Error::param("f_max", "force limits must be positive"));
        }
        Ok(())
    }
}

/// Speed-tracking driver: inverse-model feedforward plus a PI correction.
#[derive(Debug, Clone, PartialEq)]
pub struct Driver {
    pub params: DriverParams,
    integral: f64,
    last_increment: f64,
}

impl Driver {
    pub fn new(params: DriverParams) -> Self {
        Self {
            params,
            integral: 0.0,
            last_increment: 0.0,
        }
    }

    pub fn integral(&self) -> f64 {
        self.integral
    }

    /// PI force on the speed error `target_v - actual_v`.
    pub fn step(&mut self, target_v: f64, actual_v: f64, dt: f64) -> f64 {
        let e = target_v - actual_v;
        self.last_increment = e * dt;
        self.integral += self.last_increment;
        self.params.kp * e + self.params.ki * self.integral
    }

    /// Anti-windup: discards the integration of the last step. Called when
    /// the actuators could not deliver the demand.
    pub fn hold(&mut self) {
        self.integral -= self.last_increment;
        self.last_increment = 0.0;
    }

    /// Signed wheel force that reaches `target_next` after `dt`, plus the
    /// PI correction on the present error; clamped to the driver limits.
    pub fn demand(
        &mut self,
        chassis: &ChassisParams,
        v: f64,
        target_now: f64,
        target_next: f64,
        dt: f64,
    ) -> f64 {
        let (aero, roll) = resistive_forces(v, chassis);
        let ff = chassis.m_veh * (target_next - v) / dt + aero + roll;
        let pi = self.step(target_now, v, dt);
        let f = ff + pi;
        let clamped = f.clamp(-self.params.f_brake_max, self.params.f_trac_max);
        if clamped != f {
            self.hold();
        }
        clamped
    }
}

/// Proportional-integral part of the driver for one step.
pub fn driver_step(driver: &mut Driver, target_v: f64, actual_v: f64, dt: f64) -> f64 {
    driver.step(target_v, actual_v, dt)
}

/// References to the components a dispatch needs.
#[derive(Debug, Clone, Copy)]
pub struct Powertrain<'a> {
    pub chassis: &'a ChassisParams,
    pub motor: &'a MotorParams,
    pub pack: &'a PackParams,
    pub driveline: &'a Driveline,
    pub engine: Option<&'a Engine>,
}

impl Powertrain<'_> {
    fn n_motors(&self) -> f64 {
        f64::from(self.driveline.n_motors)
    }

    fn motor_speed(&self, v: f64) -> f64 {
        self.driveline.motor_speed(v, self.chassis.r_wh)
    }

    /// Engine operating speed at road speed `v`.
    fn engine_speed(&self, v: f64) -> Option<EngineSpeed> {
        let engine = self.engine?;
        let (gear, ratio) = self.driveline.engine_gear(v, self.chassis.r_wh)?;
        let omega = v / self.chassis.r_wh * ratio;
        Some(EngineSpeed {
            gear,
            ratio,
            omega,
            available: engine.params.in_speed_range(omega),
        })
    }

    /// Largest per-motor motoring torque at `omega` within the torque
    /// envelope and the pack discharge limit shared by all motors.
    pub fn discharge_torque_cap(&self, soc: f64, omega: f64) -> f64 {
        let lim = self.motor.torque_limit(omega);
        if omega <= 0.0 {
            return lim;
        }
        let p_max = self.pack.max_discharge_power(soc) / self.n_motors();
        if self.motor.battery_power(lim, omega) <= p_max {
            return lim;
        }
        bisect_max(lim, |tau| self.motor.battery_power(tau, omega) <= p_max)
    }

    /// Largest per-motor generating torque magnitude at `omega` within the
    /// torque envelope and the pack charge limit.
    pub fn charge_torque_cap(&self, soc: f64, omega: f64) -> f64 {
        let lim = self.motor.torque_limit(omega);
        if omega <= 0.0 {
            return lim;
        }
        let p_min = self.pack.max_charge_power(soc) / self.n_motors();
        if self.motor.battery_power(-lim, omega) >= p_min {
            return lim;
        }
        bisect_max(lim, |tau| self.motor.battery_power(-tau, omega) >= p_min)
    }
}

#[derive(Debug, Clone, Copy)]
struct EngineSpeed {
    gear: usize,
    ratio: f64,
    omega: f64,
    available: bool,
}

/// Largest `x` in `[0, hi]` with `ok(x)`, assuming `ok(0)` and monotonicity.
fn bisect_max(hi: f64, ok: impl Fn(f64) -> bool) -> f64 {
    let (mut lo, mut hi) = (0.0, hi);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Largest traction force not above `demand` that the actuators can deliver,
/// where `cap(F)` is the deliverable force when `F` is applied (machine
/// speeds depend on the resulting mean speed). Returns `(force, saturated)`.
fn feasible_traction(demand: f64, cap: impl Fn(f64) -> f64) -> (f64, bool) {
    if demand <= cap(demand) {
        return (demand, false);
    }
    (bisect_max(demand, |f| f <= cap(f)), true)
}

/// Outcome of one dispatch decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Actuation {
    pub step: LongitudinalStep,
    /// Force requested by the driver, N.
    pub demand: f64,
    pub saturated: bool,
    /// Torque of each motor, Nm.
    pub tau_mot: f64,
    pub omega_mot: f64,
    pub tau_eng: f64,
    pub omega_eng: f64,
    pub gear: Option<usize>,
    /// Total battery terminal power, W.
    pub p_batt: f64,
    /// Selected motor-torque fraction; `None` for the engine-off candidate
    /// or when no split was made.
    pub u: Option<f64>,
}

impl Actuation {
    /// Signed force delivered at the wheels by machines and brakes.
    pub fn delivered(&self) -> f64 {
        self.step.forces.trac - self.step.forces.brake
    }
}

/// Regen-first braking: the motors absorb what the pack accepts, friction
/// brakes take the rest. The engine stays off.
fn regen_brake(
    pt: &Powertrain<'_>,
    demand: f64,
    state: LongitudinalState,
    soc: f64,
    dt: f64,
) -> Actuation {
    let ch = pt.chassis;
    let n = pt.n_motors();
    let ratio = pt.driveline.motor_ratio;
    // the net force is fixed, so the mean speed does not depend on the split
    let probe = step_longitudinal(state, demand, 0.0, ch, dt);
    let omega = pt.motor_speed(probe.v_mid);
    let cap = n * pt.charge_torque_cap(soc, omega) * ratio / (ch.r_wh * ch.eta_diff);
    let f_regen = demand.max(-cap);
    let step = step_longitudinal(state, f_regen, f_regen - demand, ch, dt);
    let tau = step.forces.trac * ch.r_wh * ch.eta_diff / (n * ratio);
    let p_batt = n * pt.motor.battery_power(tau, omega);
    let es = pt.engine_speed(step.v_mid);
    Actuation {
        step,
        demand,
        saturated: false,
        tau_mot: tau,
        omega_mot: omega,
        tau_eng: 0.0,
        omega_eng: es.map_or(0.0, |e| e.omega),
        gear: es.map(|e| e.gear),
        p_batt,
        u: None,
    }
}

/// EV power path: traction demand split equally over the motors, limited
/// by the torque envelope and the pack; braking is regen-first.
pub fn ev_dispatch(
    pt: &Powertrain<'_>,
    demand: f64,
    state: LongitudinalState,
    soc: f64,
    dt: f64,
) -> Result<Actuation> {
    let ch = pt.chassis;
    if demand < 0.0 {
        return Ok(regen_brake(pt, demand, state, soc, dt));
    }
    let n = pt.n_motors();
    let ratio = pt.driveline.motor_ratio;
    let cap = |f: f64| {
        let v_mid = step_longitudinal(state, f, 0.0, ch, dt).v_mid;
        n * pt.discharge_torque_cap(soc, pt.motor_speed(v_mid)) * ratio * ch.eta_diff / ch.r_wh
    };
    let (force, saturated) = feasible_traction(demand, cap);
    let step = step_longitudinal(state, force, 0.0, ch, dt);
    let omega = pt.motor_speed(step.v_mid);
    let tau = step.forces.trac * ch.r_wh / (ch.eta_diff * n * ratio);
    let p_batt = n * pt.motor.battery_power(tau, omega);
    Ok(Actuation {
        step,
        demand,
        saturated,
        tau_mot: tau,
        omega_mot: omega,
        tau_eng: 0.0,
        omega_eng: 0.0,
        gear: None,
        p_batt,
        u: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EcmsParams {
    /// Equivalence factor applied to charging power.
    pub s_charge: f64,
    /// Equivalence factor applied to discharging power.
    pub s_discharge: f64,
    pub soc_ref: f64,
    /// Proportional SoC correction of the equivalence factors.
    pub k_soc: f64,
    /// Number of motor-torque fractions on `[-1, 1]`.
    pub grid_points: usize,
}

impl EcmsParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.s_charge > 0.0 && self.s_discharge > 0.0) {
            return Err(Error::param("s_charge/s_discharge", "must be positive"));
        }
        if !(self.soc_ref > 0.0 && self.soc_ref < 1.0) {
            return Err(Error::param("soc_ref", "must lie in (0, 1)"));
        }
        if !(self.k_soc >= 0.0) {
            return Err(Error::param("k_soc", "must be non-negative"));
        }
        if self.grid_points < 2 {
            return Err(Error::param("grid_points", "need at least 2 points"));
        }
        Ok(())
    }

    /// SoC-corrected equivalence factor for battery power `p_batt`.
    pub fn s_eff(&self, soc: f64, p_batt: f64) -> f64 {
        let s = if p_batt >= 0.0 {
            self.s_discharge
        } else {
            self.s_charge
        };
        s * (1.0 + self.k_soc * (self.soc_ref - soc)).max(0.0)
    }

    /// Candidate fractions `-1, ..., 1`.
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.grid_points;
        (0..n).map(move |i| -1.0 + 2.0 * i as f64 / (n - 1) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcmsCandidate {
    /// Motor-torque fraction; `None` for the engine-off candidate.
    pub u: Option<f64>,
    pub tau_mot: f64,
    pub tau_eng: f64,
    /// Fuel flow, kg/s.
    pub mdot: f64,
    pub p_batt: f64,
    /// Equivalent fuel flow, kg/s.
    pub cost: f64,
}

/// Operating conditions of one ECMS decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitPoint {
    /// Torque to deliver at the gearbox input, referred to the wheel
    /// (`τ_mot r_mot + τ_eng r_eng`), Nm.
    pub shaft_torque: f64,
    pub omega_mot: f64,
    pub omega_eng: f64,
    pub engine_ratio: f64,
    pub engine_available: bool,
    pub soc: f64,
}

/// All feasible candidates for a split point, engine-off first.
pub fn ecms_candidates(
    pt: &Powertrain<'_>,
    params: &EcmsParams,
    at: &SplitPoint,
) -> Vec<EcmsCandidate> {
    let r_m = pt.driveline.motor_ratio;
    let cap_dis = pt.discharge_torque_cap(at.soc, at.omega_mot);
    let cap_chg = pt.charge_torque_cap(at.soc, at.omega_mot);
    let cost = |mdot: f64, p_batt: f64, engine: &Engine| {
        mdot + params.s_eff(at.soc, p_batt) * p_batt / engine.params.lhv
    };
    let mut out = Vec::with_capacity(params.grid_points + 1);
    let Some(engine) = pt.engine else {
        return out;
    };
    let tol = 1e-9 * (1.0 + at.shaft_torque.abs());
    let tau_off = at.shaft_torque / r_m;
    if tau_off <= cap_dis + tol {
        let p_batt = pt.motor.battery_power(tau_off, at.omega_mot);
        out.push(EcmsCandidate {
            u: None,
            tau_mot: tau_off,
            tau_eng: 0.0,
            mdot: 0.0,
            p_batt,
            cost: cost(0.0, p_batt, engine),
        });
    }
    if !at.engine_available {
        return out;
    }
    let tau_e_max = engine.params.max_torque(at.omega_eng);
    for u in params.grid() {
        let tau_mot = if u >= 0.0 { u * cap_dis } else { u * cap_chg };
        let tau_eng = (at.shaft_torque - tau_mot * r_m) / at.engine_ratio;
        if tau_eng < -tol || tau_eng > tau_e_max + tol {
            continue;
        }
        let tau_eng = tau_eng.clamp(0.0, tau_e_max);
        let mdot = engine.params.fuel_rate(tau_eng, at.omega_eng);
        let p_batt = pt.motor.battery_power(tau_mot, at.omega_mot);
        out.push(EcmsCandidate {
            u: Some(u),
            tau_mot,
            tau_eng,
            mdot,
            p_batt,
            cost: cost(mdot, p_batt, engine),
        });
    }
    out
}

/// Minimum-cost candidate; ties go to the smaller battery power magnitude.
pub fn ecms_select(candidates: &[EcmsCandidate]) -> Option<&EcmsCandidate> {
    let mut best: Option<&EcmsCandidate> = None;
    for c in candidates {
        best = match best {
            None => Some(c),
            Some(b) if c.cost < b.cost || (c.cost == b.cost && c.p_batt.abs() < b.p_batt.abs()) => {
                Some(c)
            }
            keep => keep,
        };
    }
    best
}

/// Hybrid dispatch: traction by ECMS over motor-torque fractions, braking
/// regen-first with the engine off.
pub fn ecms_split(
    pt: &Powertrain<'_>,
    params: &EcmsParams,
    demand: f64,
    state: LongitudinalState,
    soc: f64,
    dt: f64,
) -> Result<Actuation> {
    let ch = pt.chassis;
    let engine = pt
        .engine
        .ok_or_else(|| Error::param("engine", "hybrid dispatch needs an engine"))?;
    if demand < 0.0 {
        return Ok(regen_brake(pt, demand, state, soc, dt));
    }
    let r_m = pt.driveline.motor_ratio;
    let cap = |f: f64| {
        let v_mid = step_longitudinal(state, f, 0.0, ch, dt).v_mid;
        let mut shaft = pt.discharge_torque_cap(soc, pt.motor_speed(v_mid)) * r_m;
        if let Some(es) = pt.engine_speed(v_mid).filter(|e| e.available) {
            shaft += engine.params.max_torque(es.omega) * es.ratio;
        }
        shaft * ch.eta_diff / ch.r_wh
    };
    let (force, saturated) = feasible_traction(demand, cap);
    let step = step_longitudinal(state, force, 0.0, ch, dt);
    let omega_mot = pt.motor_speed(step.v_mid);
    let es = pt.engine_speed(step.v_mid);
    let at = SplitPoint {
        shaft_torque: step.forces.trac * ch.r_wh / ch.eta_diff,
        omega_mot,
        omega_eng: es.map_or(0.0, |e| e.omega),
        engine_ratio: es.map_or(1.0, |e| e.ratio),
        engine_available: es.is_some_and(|e| e.available),
        soc,
    };
    let candidates = ecms_candidates(pt, params, &at);
    let best = ecms_select(&candidates).ok_or(Error::NoFeasibleSplit { force })?;
    Ok(Actuation {
        step,
        demand,
        saturated,
        tau_mot: best.tau_mot,
        omega_mot,
        tau_eng: best.tau_eng,
        omega_eng: at.omega_eng,
        gear: es.map(|e| e.gear),
        p_batt: best.p_batt,
        u: best.u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::table::Grid;
    use crate::thermo::{ReferenceState, ThermoData};
    use alloc::vec;

    fn flat_motor(eta: f64) -> MotorParams {
        MotorParams {
            eff_map: Grid::from_fn(vec![0.0, 400.0], vec![0.0, 2000.0], |_, _| eta).unwrap(),
            ..presets::ev_motor()
        }
    }

    struct Parts {
        chassis: ChassisParams,
        motor: MotorParams,
        pack: PackParams,
        driveline: Driveline,
        engine: Option<Engine>,
    }

    impl Parts {
        fn ev() -> Self {
            Self {
                chassis: presets::ev_chassis(),
                motor: presets::ev_motor(),
                pack: presets::ev_pack(),
                driveline: presets::ev_driveline(),
                engine: None,
            }
        }

        fn hev() -> Self {
            let engine = Engine::new(
                presets::hev_engine(),
                &ThermoData::embedded(),
                &ReferenceState::standard(),
            )
            .unwrap();
            Self {
                chassis: presets::hev_chassis(),
                motor: presets::hev_motor(),
                pack: presets::hev_pack(),
                driveline: presets::hev_driveline(),
                engine: Some(engine),
            }
        }

        fn pt(&self) -> Powertrain<'_> {
            Powertrain {
                chassis: &self.chassis,
                motor: &self.motor,
                pack: &self.pack,
                driveline: &self.driveline,
                engine: self.engine.as_ref(),
            }
        }
    }

    fn moving(v: f64) -> LongitudinalState {
        LongitudinalState { v, x: 0.0 }
    }

    #[test]
    fn driver_examples() {
        let mut d = Driver::new(DriverParams {
            kp: 1000.0,
            ki: 0.0,
            f_trac_max: 1e5,
            f_brake_max: 1e5,
        });
        assert_eq!(d.step(0.0, 0.0, 1.0), 0.0);
        assert_eq!(driver_step(&mut d, 11.0, 10.0, 1.0), 1000.0);
        assert!(d.step(10.0, 11.0, 1.0) < 0.0);
    }

    #[test]
    fn hold_discards_last_integration() {
        let mut d = Driver::new(presets::driver());
        d.step(2.0, 1.0, 0.5);
        let before = d.integral();
        d.step(3.0, 1.0, 0.5);
        d.hold();
        assert_eq!(d.integral(), before);
    }

    #[test]
    fn demand_is_clamped_without_windup() {
        let ch = presets::ev_chassis();
        let mut d = Driver::new(presets::driver());
        let f = d.demand(&ch, 0.0, 0.0, 100.0, 1.0);
        assert_eq!(f, presets::driver().f_trac_max);
        assert_eq!(d.integral(), 0.0);
    }

    #[test]
    fn coasting_at_rest_does_nothing() {
        let parts = Parts::ev();
        let a = ev_dispatch(&parts.pt(), 0.0, LongitudinalState::default(), 0.7, 1.0).unwrap();
        assert_eq!((a.tau_mot, a.p_batt, a.step.forces.brake), (0.0, 0.0, 0.0));
        assert!(!a.saturated);
        let parts = Parts::hev();
        let pt = parts.pt();
        let a = ecms_split(
            &pt,
            &presets::ecms(),
            0.0,
            LongitudinalState::default(),
            0.5,
            1.0,
        )
        .unwrap();
        assert_eq!((a.tau_mot, a.tau_eng, a.p_batt), (0.0, 0.0, 0.0));
        assert_eq!(a.u, None);
    }

    #[test]
    fn ev_traction_back_propagates_losses() {
        let mut parts = Parts::ev();
        parts.motor = flat_motor(0.9);
        let pt = parts.pt();
        let ch = &parts.chassis;
        // force giving 10 kW over the step
        let mut f = 1000.0;
        for _ in 0..100 {
            f = 10e3 / step_longitudinal(moving(15.0), f, 0.0, ch, 1.0).v_mid;
        }
        let a = ev_dispatch(&pt, f, moving(15.0), 0.7, 1.0).unwrap();
        assert!(!a.saturated);
        assert!((a.step.powers.trac - 10e3).abs() < 1e-6);
        assert!((a.p_batt - 10e3 / 0.98 / 0.9).abs() < 1e-6, "{}", a.p_batt);
        assert!((a.p_batt - 11_337.87).abs() < 0.01);
        assert!((a.delivered() - f).abs() < 1e-9);
    }

    #[test]
    fn regen_saturates_at_the_charge_limit() {
        let mut parts = Parts::ev();
        parts.pack = parts.pack.clone().with_c_limits(5.0, 0.2);
        let pt = parts.pt();
        let a = ev_dispatch(&pt, -8000.0, moving(20.0), 0.7, 1.0).unwrap();
        assert!(a.step.forces.brake > 0.0);
        let limit = parts.pack.max_charge_power(0.7);
        assert!(
            (a.p_batt - limit).abs() < 1e-6 * limit.abs(),
            "{} vs {limit}",
            a.p_batt
        );
        assert!((a.delivered() + 8000.0).abs() < 1e-9);

        // a gentle stop is absorbed entirely by the motors
        let a = ev_dispatch(&Parts::ev().pt(), -500.0, moving(20.0), 0.7, 1.0).unwrap();
        assert_eq!(a.step.forces.brake, 0.0);
        assert!(a.p_batt < 0.0);
    }

    #[test]
    fn traction_beyond_capability_saturates() {
        let parts = Parts::ev();
        let pt = parts.pt();
        let a = ev_dispatch(&pt, 1e6, moving(30.0), 0.7, 1.0).unwrap();
        assert!(a.saturated);
        assert!(a.step.forces.trac < 1e6);
        let omega = pt.motor_speed(a.step.v_mid);
        assert!(a.tau_mot <= pt.discharge_torque_cap(0.7, omega) * (1.0 + 1e-9));
    }

    #[test]
    fn equivalence_factor_follows_soc() {
        let p = presets::ecms();
        assert_eq!(p.s_eff(p.soc_ref, 1.0), p.s_discharge);
        assert_eq!(p.s_eff(p.soc_ref, -1.0), p.s_charge);
        assert!(p.s_eff(0.4, 1.0) > p.s_discharge);
        assert_eq!(p.s_eff(1.0, 1.0), 0.0);
        let g: Vec<f64> = p.grid().collect();
        assert_eq!(g.len(), 41);
        assert_eq!((g[0], g[20], g[40]), (-1.0, 0.0, 1.0));
    }

    fn mid_load_point(pt: &Powertrain<'_>) -> SplitPoint {
        let v = 15.0;
        let es = pt.engine_speed(v).unwrap();
        SplitPoint {
            shaft_torque: 60.0 * es.ratio,
            omega_mot: pt.motor_speed(v),
            omega_eng: es.omega,
            engine_ratio: es.ratio,
            engine_available: es.available,
            soc: 0.5,
        }
    }

    #[test]
    fn selection_matches_exhaustive_grid() {
        let parts = Parts::hev();
        let pt = parts.pt();
        let params = presets::ecms();
        let at = mid_load_point(&pt);
        let lhv = parts.engine.as_ref().unwrap().params.lhv;
        let cands = ecms_candidates(&pt, &params, &at);
        assert!(cands.iter().skip(1).all(|c| c.u.is_some()));
        assert!(cands.len() > 2);
        // independent cost evaluation over the candidates
        let mut best = 0;
        let mut best_j = f64::INFINITY;
        for (i, c) in cands.iter().enumerate() {
            let s = if c.p_batt >= 0.0 {
                params.s_discharge
            } else {
                params.s_charge
            };
            let j = c.mdot + s * (1.0 + params.k_soc * (params.soc_ref - at.soc)) * c.p_batt / lhv;
            if j < best_j {
                best_j = j;
                best = i;
            }
        }
        let chosen = ecms_select(&cands).unwrap();
        assert_eq!(chosen, &cands[best]);
    }

    #[test]
    fn argmin_is_scale_invariant() {
        let parts = Parts::hev();
        let pt = parts.pt();
        let at = mid_load_point(&pt);
        let cands = ecms_candidates(&pt, &presets::ecms(), &at);
        let chosen = ecms_select(&cands).unwrap().u;
        for k in [1e-3, 0.5, 7.0, 1e4] {
            let scaled: Vec<EcmsCandidate> = cands
                .iter()
                .map(|c| EcmsCandidate {
                    cost: c.cost * k,
                    ..*c
                })
                .collect();
            assert_eq!(ecms_select(&scaled).unwrap().u, chosen);
        }
    }

    #[test]
    fn costly_battery_means_pure_engine() {
        let parts = Parts::hev();
        let pt = parts.pt();
        let params = EcmsParams {
            s_discharge: 1e12,
            s_charge: 1e-12,
            ..presets::ecms()
        };
        let at = mid_load_point(&pt);
        let c = ecms_select(&ecms_candidates(&pt, &params, &at))
            .copied()
            .unwrap();
        assert_eq!(c.u, Some(0.0));
        assert_eq!(c.p_batt, 0.0);
        assert!(c.tau_eng > 0.0);
    }

    #[test]
    fn ties_prefer_less_battery_power() {
        let base = EcmsCandidate {
            u: Some(0.0),
            tau_mot: 0.0,
            tau_eng: 0.0,
            mdot: 0.0,
            p_batt: 5.0,
            cost: 1.0,
        };
        let c = [
            base,
            EcmsCandidate {
                p_batt: -2.0,
                u: Some(0.5),
                ..base
            },
        ];
        assert_eq!(ecms_select(&c).unwrap().u, Some(0.5));
        assert!(ecms_select(&[]).is_none());
    }

    #[test]
    fn hybrid_braking_keeps_engine_off() {
        let parts = Parts::hev();
        let a = ecms_split(
            &parts.pt(),
            &presets::ecms(),
            -3000.0,
            moving(20.0),
            0.5,
            1.0,
        )
        .unwrap();
        assert_eq!(a.tau_eng, 0.0);
        assert!(a.tau_mot < 0.0);
        assert!(a.step.forces.brake >= 0.0);
    }

    #[test]
    fn hybrid_requires_engine() {
        let parts = Parts::ev();
        assert!(ecms_split(&parts.pt(), &presets::ecms(), 100.0, moving(5.0), 0.5, 1.0).is_err());
    }
}
