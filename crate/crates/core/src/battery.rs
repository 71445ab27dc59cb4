//! Zero-order equivalent-circuit battery pack with a lumped thermal node.
//!
//! Sign convention: positive current and power discharge the pack.

use alloc::format;

use crate::error::{Error, Result};
use crate::math::{exp, sqrt};
use crate::table::Curve;
use crate::thermo::{carnot_factor, ReferenceState};

#[derive(Debug, Clone, PartialEq)]
pub struct CellParams {
    /// Nominal capacity, Ah.
    pub q_nom: f64,
    /// Nominal voltage, V.
    pub v_nom: f64,
    /// Open-circuit voltage versus SoC, V.
    pub ocv: Curve,
    /// Series resistance versus SoC, Ω.
    pub r0: Curve,
    /// Heat capacity, J/K.
    pub c_cell: f64,
    /// Heat-transfer conductance to ambient, W/K.
    pub h_out: f64,
}

impl CellParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("q_nom_cell", self.q_nom),
            ("v_nom_cell", self.v_nom),
            ("c_cell", self.c_cell),
            ("h_out_cell", self.h_out),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        for (name, curve) in [("ocv", &self.ocv), ("r0", &self.r0)] {
            let xs = curve.xs();
            if xs[0] > 0.0 || xs[xs.len() - 1] < 1.0 {
                return Err(Error::param(name, "curve must cover SoC 0 to 1"));
            }
            if !(curve.min_value() > 0.0) {
                return Err(Error::param(name, "values must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackParams {
    pub cell: CellParams,
    pub n_s: u32,
    pub n_p: u32,
    /// Discharge current limit as a multiple of the pack capacity (1/h).
    pub max_discharge_c: f64,
    /// Charge current limit as a multiple of the pack capacity (1/h).
    pub max_charge_c: f64,
}

/// Builds the pack from a cell and an `n_s` x `n_p` arrangement.
pub fn upscale(cell: CellParams, n_s: u32, n_p: u32) -> Result<PackParams> {
    let pack = PackParams {
        cell,
        n_s,
        n_p,
        max_discharge_c: f64::INFINITY,
        max_charge_c: f64::INFINITY,
    };
    pack.validate()?;
    Ok(pack)
}

impl PackParams {
    pub fn with_c_limits(mut self, discharge: f64, charge: f64) -> Self {
        self.max_discharge_c = discharge;
        self.max_charge_c = charge;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_s == 0 || self.n_p == 0 {
            return Err(Error::param("n_s/n_p", "at least one cell per string"));
        }
        if !(self.max_discharge_c > 0.0) || !(self.max_charge_c > 0.0) {
            return Err(Error::param("c_limits", "must be positive"));
        }
        self.cell.validate()
    }

    fn ns(&self) -> f64 {
        f64::from(self.n_s)
    }

    fn np(&self) -> f64 {
        f64::from(self.n_p)
    }

    pub fn v_oc(&self, soc: f64) -> f64 {
        self.ns() * self.cell.ocv.eval(soc)
    }

    pub fn r0(&self, soc: f64) -> f64 {
        self.ns() / self.np() * self.cell.r0.eval(soc)
    }

    pub fn v_nom(&self) -> f64 {
        self.ns() * self.cell.v_nom
    }

    /// Pack capacity, Ah.
    pub fn q_nom(&self) -> f64 {
        self.np() * self.cell.q_nom
    }

    /// Nominal energy, J.
    pub fn e_nom(&self) -> f64 {
        self.v_nom() * self.q_nom() * 3600.0
    }

    pub fn c_batt(&self) -> f64 {
        self.ns() * self.np() * self.cell.c_cell
    }

    pub fn h_out(&self) -> f64 {
        self.ns() * self.np() * self.cell.h_out
    }

    pub fn max_discharge_current(&self) -> f64 {
        self.max_discharge_c * self.q_nom()
    }

    pub fn max_charge_current(&self) -> f64 {
        self.max_charge_c * self.q_nom()
    }

    /// Cell current over cell capacity, 1/h.
    pub fn c_rate(&self, current: f64) -> f64 {
        current / self.q_nom()
    }

    /// Largest deliverable power at `soc`: the current limit or the
    /// matched-load point, whichever binds first.
    pub fn max_discharge_power(&self, soc: f64) -> f64 {
        let voc = self.v_oc(soc);
        let r0 = self.r0(soc);
        let i = self.max_discharge_current().min(voc / (2.0 * r0));
        (voc - r0 * i) * i
    }

    /// Most negative accepted power at `soc`.
    pub fn max_charge_power(&self, soc: f64) -> f64 {
        let i = self.max_charge_current();
        if !i.is_finite() {
            return f64::NEG_INFINITY;
        }
        -(self.v_oc(soc) + self.r0(soc) * i) * i
    }

    /// Solves `P = (V_oc - R_0 I) I` for the physical root.
    pub fn solve_current(&self, soc: f64, p_batt: f64) -> Result<(f64, f64)> {
        solve_current(self.v_oc(soc), self.r0(soc), p_batt)
    }
}

/// Returns `(I, V)` for terminal power `p` on a source `v_oc` behind `r0`.
pub fn solve_current(v_oc: f64, r0: f64, p: f64) -> Result<(f64, f64)> {
    let disc = v_oc * v_oc - 4.0 * r0 * p;
    if disc < 0.0 {
        return Err(Error::PowerLimit {
            demand: p,
            max: v_oc * v_oc / (4.0 * r0),
        });
    }
    // rationalised form of (V - sqrt(disc)) / 2R, free of cancellation
    let i = 2.0 * p / (v_oc + sqrt(disc));
    Ok((i, v_oc - r0 * i))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryState {
    pub soc: f64,
    pub soe: f64,
    /// Pack temperature, K.
    pub t: f64,
    pub current: f64,
    pub voltage: f64,
}

impl BatteryState {
    pub fn new(soc: f64, soe: f64, t: f64) -> Self {
        Self {
            soc,
            soe,
            t,
            current: 0.0,
            voltage: 0.0,
        }
    }
}

/// Rates over one battery step, W (entropy in W/K).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BatteryExergy {
    pub current: f64,
    pub voltage: f64,
    /// Joule heat `R_0 I²`.
    pub q_gen: f64,
    pub s_gen: f64,
    pub x_heat: f64,
    pub x_dest: f64,
    /// Electrical work transfer, `-P_batt`.
    pub x_work: f64,
    pub x_batt: f64,
}

/// Exact update of `C dT/dt = Q + h (T0 - T)` for constant `Q` over `dt`.
pub(crate) fn thermal_step(t: f64, q: f64, c: f64, h: f64, t0: f64, dt: f64) -> f64 {
    let t_ss = t0 + q / h;
    let next = t_ss + (t - t_ss) * exp(-h * dt / c);
    next.max(t0)
}

/// Advances the pack by `dt` at constant terminal power `p_batt`. Rates are
/// evaluated with the state at the start of the step.
pub fn step_battery(
    pack: &PackParams,
    state: &BatteryState,
    p_batt: f64,
    reference: &ReferenceState,
    dt: f64,
) -> Result<(BatteryState, BatteryExergy)> {
    let t0 = reference.t0();
    let (i, v) = pack.solve_current(state.soc, p_batt)?;
    let r0 = pack.r0(state.soc);
    let q_gen = r0 * i * i;
    let t = state.t;
    let h = pack.h_out();
    let x_heat = carnot_factor(t, reference)? * h * (t0 - t);
    let s_gen = q_gen / t;
    let x_dest = -t0 * s_gen;
    let x_work = -p_batt;
    let soc = state.soc - dt * i / (3600.0 * pack.q_nom());
    let soe = state.soe - dt * p_batt / pack.e_nom();
    if !(0.0..=1.0).contains(&soc) {
        return Err(Error::SocOutOfBounds(soc));
    }
    let next = BatteryState {
        soc,
        soe: soe.clamp(0.0, 1.0),
        t: thermal_step(t, q_gen, pack.c_batt(), h, t0, dt),
        current: i,
        voltage: v,
    };
    Ok((
        next,
        BatteryExergy {
            current: i,
            voltage: v,
            q_gen,
            s_gen,
            x_heat,
            x_dest,
            x_work,
            x_batt: x_work + x_dest + x_heat,
        },
    ))
}

/// Exergy stored at the start of a run.
pub fn initial_exergy(pack: &PackParams, soc0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&soc0) {
        return Err(Error::SocOutOfBounds(soc0));
    }
    Ok(soc0 * pack.e_nom())
}
