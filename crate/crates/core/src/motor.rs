//! Map-based interior permanent-magnet machine.
//!
//! Power flow between battery and shaft uses the efficiency map, while heat
//! and entropy generation use the physical copper, iron and friction loss
//! model evaluated on MTPA currents.

use alloc::format;

use crate::battery::thermal_step;
use crate::error::{Error, Result};
use crate::math::{abs, sqrt};
use crate::table::Grid;
use crate::thermo::{carnot_factor, ReferenceState};

#[derive(Debug, Clone, PartialEq)]
pub struct MotorParams {
    /// Efficiency over (|τ| rows in Nm, ω columns in rad/s).
    pub eff_map: Grid,
    pub tau_max: f64,
    pub p_max: f64,
    /// Stator resistance at T0, Ω.
    pub rs0: f64,
    /// Resistance temperature coefficient, 1/K.
    pub xi: f64,
    pub ld: f64,
    pub lq: f64,
    /// Permanent-magnet flux linkage, Wb.
    pub lambda_pm: f64,
    pub n_pp: u32,
    pub k_h: f64,
    pub k_f: f64,
    pub c_copper: f64,
    pub c_iron: f64,
    pub h_copper: f64,
    pub h_iron: f64,
    /// Copper mass fraction.
    pub alpha: f64,
    /// Iron mass fraction.
    pub beta: f64,
}

impl MotorParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tau_max", self.tau_max),
            ("p_max", self.p_max),
            ("rs0", self.rs0),
            ("ld", self.ld),
            ("lq", self.lq),
            ("lambda_pm", self.lambda_pm),
            ("c_copper", self.c_copper),
            ("c_iron", self.c_iron),
            ("h_copper", self.h_copper),
            ("h_iron", self.h_iron),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        for (name, v) in [("xi", self.xi), ("k_h", self.k_h), ("k_f", self.k_f)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("must be non-negative, got {v}")));
            }
        }
        if self.n_pp == 0 {
            return Err(Error::param("n_pp", "must be at least 1"));
        }
        if !(self.alpha >= 0.0 && self.beta >= 0.0 && abs(self.alpha + self.beta - 1.0) < 1e-9) {
            return Err(Error::param("alpha/beta", "mass fractions must sum to 1"));
        }
        let (lo, hi) = (self.eff_map.min_value(), self.eff_map.max_value());
        if !(lo > 0.0 && hi <= 1.0) {
            return Err(Error::param("eff_map", "efficiency must lie in (0, 1]"));
        }
        Ok(())
    }

    pub fn c_mot(&self) -> f64 {
        self.alpha * self.c_copper + self.beta * self.c_iron
    }

    pub fn h_out(&self) -> f64 {
        self.alpha * self.h_copper + self.beta * self.h_iron
    }

    /// `sqrt(3/2) λ_pm`.
    pub fn big_lambda(&self) -> f64 {
        sqrt(1.5) * self.lambda_pm
    }

    /// Torque envelope at speed `omega`: the rated torque below base
    /// speed, constant power above it.
    pub fn torque_limit(&self, omega: f64) -> f64 {
        if omega > 0.0 {
            self.tau_max.min(self.p_max / omega)
        } else {
            self.tau_max
        }
    }

    pub fn map_efficiency(&self, tau: f64, omega: f64) -> f64 {
        self.eff_map.eval(abs(tau), omega)
    }

    /// Electrical power drawn (positive) or returned (negative) for a
    /// shaft operating point.
    pub fn battery_power(&self, tau: f64, omega: f64) -> f64 {
        let p_mot = tau * omega;
        let eta = self.map_efficiency(tau, omega);
        if p_mot >= 0.0 {
            p_mot / eta
        } else {
            p_mot * eta
        }
    }
}

/// Shaft power from battery-side power, `P_mot = P_batt η^sign(I)`, with the
/// implied torque saturated at the envelope. Returns `(P_mot, τ)`.
pub fn shaft_power(
    params: &MotorParams,
    p_batt: f64,
    tau: f64,
    omega: f64,
    current_sign: f64,
) -> (f64, f64) {
    let eta = params.map_efficiency(tau, omega);
    let p = if current_sign > 0.0 {
        p_batt * eta
    } else if current_sign < 0.0 {
        p_batt / eta
    } else {
        p_batt
    };
    if omega <= 0.0 {
        let t = tau.clamp(-params.tau_max, params.tau_max);
        return (0.0, t);
    }
    let lim = params.torque_limit(omega);
    let t = (p / omega).clamp(-lim, lim);
    (t * omega, t)
}

/// Minimum-magnitude `(I_d, I_q)` producing torque `tau`.
///
/// Along the MTPA locus `I_d` is an explicit function of `I_q`, and torque
/// grows monotonically with `|I_q|`, so `I_q` is found by bisection.
pub fn mtpa_currents(params: &MotorParams, tau: f64) -> Result<(f64, f64)> {
    if tau == 0.0 {
        return Ok((0.0, 0.0));
    }
    let k = 1.5 * f64::from(params.n_pp);
    let lam = params.lambda_pm;
    let delta = params.lq - params.ld;
    let id_of =
        |iq: f64| -2.0 * delta * iq * iq / (lam + sqrt(lam * lam + 4.0 * delta * delta * iq * iq));
    let torque = |iq: f64| k * iq * (lam - delta * id_of(iq));
    let target = abs(tau);
    let mut lo = 0.0;
    // the reluctance term only adds torque, so the non-salient current brackets
    let mut hi = target / (k * lam);
    if !hi.is_finite() {
        return Err(Error::NoConvergence { torque: tau });
    }
    let mut iters = 0;
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if torque(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
        if iters > 200 {
            return Err(Error::NoConvergence { torque: tau });
        }
    }
    let iq = 0.5 * (lo + hi);
    Ok((id_of(iq), if tau < 0.0 { -iq } else { iq }))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MotorLosses {
    pub copper: f64,
    pub iron: f64,
    pub friction: f64,
}

impl MotorLosses {
    pub fn total(&self) -> f64 {
        self.copper + self.iron + self.friction
    }
}

/// Physical losses at winding temperature `t`.
pub fn losses(params: &MotorParams, id: f64, iq: f64, omega: f64, t: f64, t0: f64) -> MotorLosses {
    let rs = params.rs0 * (1.0 + params.xi * (t - t0));
    let w = abs(omega);
    let flux_d = params.ld * id + params.big_lambda();
    let flux_q = params.lq * iq;
    MotorLosses {
        copper: rs * (id * id + iq * iq),
        iron: params.k_h * w * (flux_d * flux_d + flux_q * flux_q),
        friction: params.k_f * w * w,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotorState {
    pub t: f64,
    pub id: f64,
    pub iq: f64,
    pub losses: MotorLosses,
}

impl MotorState {
    pub fn new(t: f64) -> Self {
        Self {
            t,
            id: 0.0,
            iq: 0.0,
            losses: MotorLosses::default(),
        }
    }
}

/// Rates over one motor step for a single machine, W (entropy in W/K).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MotorExergy {
    pub losses: MotorLosses,
    pub s_gen: f64,
    pub x_heat: f64,
    pub x_dest: f64,
    pub x_mot: f64,
}

/// Advances the motor temperature by `dt` at operating point `(tau, omega)`.
/// Shaft work is booked elsewhere, so only heat and destruction appear.
pub fn step_motor(
    params: &MotorParams,
    state: &MotorState,
    tau: f64,
    omega: f64,
    reference: &ReferenceState,
    dt: f64,
) -> Result<(MotorState, MotorExergy)> {
    let t0 = reference.t0();
    let t = state.t;
    let (id, iq) = mtpa_currents(params, tau)?;
    let l = losses(params, id, iq, omega, t, t0);
    let q = l.total();
    let h = params.h_out();
    let x_heat = carnot_factor(t, reference)? * h * (t0 - t);
    let s_gen = q / t;
    let x_dest = -t0 * s_gen;
    let next = MotorState {
        t: thermal_step(t, q, params.c_mot(), h, t0, dt),
        id,
        iq,
        losses: l,
    };
    Ok((
        next,
        MotorExergy {
            losses: l,
            s_gen,
            x_heat,
            x_dest,
            x_mot: x_heat + x_dest,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn params() -> MotorParams {
        MotorParams {
            eff_map: Grid::new(
                vec![0.0, 100.0, 200.0],
                vec![0.0, 500.0, 1000.0],
                vec![
                    vec![0.80, 0.85, 0.80],
                    vec![0.88, 0.95, 0.90],
                    vec![0.86, 0.93, 0.90],
                ],
            )
            .unwrap(),
            tau_max: 200.0,
            p_max: 100e3,
            rs0: 4.7973e-3,
            xi: 0.0039,
            ld: 0.3752e-3,
            lq: 0.4184e-3,
            lambda_pm: 0.1194,
            n_pp: 4,
            k_h: 27.543,
            k_f: 1e-3,
            c_copper: 4903.6,
            c_iron: 33401.0,
            h_copper: 27.0270,
            h_iron: 66.6667,
            alpha: 0.15,
            beta: 0.85,
        }
    }

    #[test]
    fn mixed_thermal_properties() {
        let p = params();
        assert!((p.c_mot() - (0.15 * 4903.6 + 0.85 * 33401.0)).abs() < 1e-9);
        assert!((p.h_out() - (0.15 * 27.0270 + 0.85 * 66.6667)).abs() < 1e-9);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn map_node_and_midpoint() {
        let p = params();
        assert_eq!(p.map_efficiency(100.0, 500.0), 0.95);
        assert_eq!(p.map_efficiency(-100.0, 500.0), 0.95);
        let mid = p.map_efficiency(50.0, 250.0);
        assert!((mid - (0.80 + 0.85 + 0.88 + 0.95) / 4.0).abs() < 1e-12);
        assert_eq!(p.map_efficiency(500.0, 2000.0), 0.90);
    }

    #[test]
    fn shaft_power_sign_convention() {
        let mut p = params();
        p.eff_map = Grid::new(vec![0.0, 200.0], vec![0.0, 1000.0], vec![vec![0.9; 2]; 2]).unwrap();
        assert_eq!(shaft_power(&p, 0.0, 0.0, 300.0, 0.0).0, 0.0);
        let (pm, _) = shaft_power(&p, 10e3, 30.0, 500.0, 1.0);
        assert!((pm - 9e3).abs() < 1e-9);
        // regen: -9 kW at the shaft returns -8.1 kW to the battery
        let pb = p.battery_power(-18.0, 500.0);
        assert!((pb + 8.1e3).abs() < 1e-9);
        let (pm, _) = shaft_power(&p, pb, -18.0, 500.0, -1.0);
        assert!((pm + 9e3).abs() < 1e-9);
        // standstill delivers torque but no power
        assert_eq!(shaft_power(&p, 5e3, 500.0, 0.0, 1.0), (0.0, 200.0));
    }

    #[test]
    fn mtpa_zero_and_non_salient() {
        let mut p = params();
        assert_eq!(mtpa_currents(&p, 0.0).unwrap(), (0.0, 0.0));
        p.ld = p.lq;
        let (id, iq) = mtpa_currents(&p, 50.0).unwrap();
        assert_eq!(id, 0.0);
        assert!((iq - 50.0 / (6.0 * 0.1194)).abs() < 1e-9);
    }

    #[test]
    fn mtpa_reproduces_torque_with_negative_id() {
        let p = params();
        for tau in [-150.0, -1.0, 0.5, 50.0, 199.0] {
            let (id, iq) = mtpa_currents(&p, tau).unwrap();
            let t = 6.0 * (p.lambda_pm * iq + (p.ld - p.lq) * id * iq);
            assert!(((t - tau) / tau).abs() < 1e-9, "{tau}: {t}");
            assert!(id <= 0.0);
        }
    }

    #[test]
    fn mtpa_handles_vanishing_torque() {
        let p = params();
        for tau in [1e-17, -8.5e-17, 1e-300] {
            let (id, iq) = mtpa_currents(&p, tau).unwrap();
            assert!(id <= 0.0 && iq.signum() == tau.signum());
        }
    }

    #[test]
    fn idle_motor_has_no_losses() {
        let p = params();
        let r = ReferenceState::standard();
        let s = MotorState::new(r.t0());
        let (n, x) = step_motor(&p, &s, 0.0, 0.0, &r, 1.0).unwrap();
        assert_eq!(n.t, r.t0());
        assert_eq!(x.x_mot, 0.0);
        assert_eq!(x.s_gen, 0.0);
    }

    #[test]
    fn spinning_without_current_has_no_load_losses() {
        let p = params();
        let r = ReferenceState::standard();
        let s = MotorState::new(r.t0());
        let (_, x) = step_motor(&p, &s, 0.0, 400.0, &r, 1.0).unwrap();
        let lam = p.big_lambda();
        assert!((x.losses.iron - p.k_h * 400.0 * lam * lam).abs() < 1e-9);
        assert!((x.losses.friction - p.k_f * 160_000.0).abs() < 1e-9);
        assert_eq!(x.losses.copper, 0.0);
    }

    #[test]
    fn constant_losses_settle_at_closed_form_temperature() {
        let p = params();
        let r = ReferenceState::standard();
        let mut s = MotorState::new(r.t0());
        // no current: losses do not depend on temperature
        let q = losses(&p, 0.0, 0.0, 600.0, r.t0(), r.t0()).total();
        let t_ss = r.t0() + q / p.h_out();
        let tau = p.c_mot() / p.h_out();
        for _ in 0..(12.0 * tau) as usize {
            s = step_motor(&p, &s, 0.0, 600.0, &r, 1.0).unwrap().0;
        }
        assert!((s.t - t_ss).abs() < 1e-3 * (t_ss - r.t0()));
    }

    #[test]
    fn copper_resistance_rises_with_temperature() {
        let p = params();
        let t0 = 298.15;
        let cold = losses(&p, -10.0, 100.0, 0.0, t0, t0).copper;
        let hot = losses(&p, -10.0, 100.0, 0.0, t0 + 100.0, t0).copper;
        assert!((hot / cold - 1.39).abs() < 1e-12);
    }
}
