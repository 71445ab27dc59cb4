//! Quasi-static spark-ignition engine and its exergy terms.
//!
//! The engine has no thermal state. For each operating point the fuel
//! flow comes from the map; fuel, work, exhaust, wall-heat and friction
//! exergy follow from it, and combustion irreversibility closes the balance.

use alloc::format;
use alloc::string::ToString;

use crate::error::{Error, Result};
use crate::math::{abs, powf};
use crate::table::{Curve, Grid};
use crate::thermo::{
    carnot_factor, chemical_exergy, physical_exergy, Gas, ReferenceState, ThermoData,
};

const PI: f64 = core::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct EngineParams {
    /// Fuel flow in kg/s over (ω rows in rad/s, τ columns in Nm).
    pub fuel_map: Grid,
    /// Full-load torque versus speed, Nm.
    pub torque_curve: Curve,
    pub omega_idle: f64,
    pub omega_max: f64,
    /// Carbon atoms per fuel molecule.
    pub x: u32,
    /// Hydrogen atoms per fuel molecule.
    pub y: u32,
    /// Lower heating value, J/kg.
    pub lhv: f64,
    pub afr_stoich: f64,
    /// Tank volume, m³.
    pub v_tank: f64,
    /// Fuel density, kg/m³.
    pub rho_fuel: f64,
    /// Bore, m.
    pub bore: f64,
    /// Displacement, m³.
    pub v_d: f64,
    /// Mean gas temperature, K.
    pub t_eng: f64,
    /// Coolant temperature, K.
    pub t_c: f64,
    /// Gas thermal conductivity, W/(m K).
    pub k_g: f64,
    /// Gas viscosity, kg/(m s).
    pub mu_g: f64,
    /// Heat-transfer correlation coefficient.
    pub a: f64,
    /// Heat-transfer correlation exponent.
    pub b: f64,
    /// Exhaust temperature, K.
    pub t_exh: f64,
    /// FMEP coefficients `[c0 Pa, c1 Pa s/rad, c2 Pa s²/rad²]`.
    pub fmep: [f64; 3],
}

impl EngineParams {
    pub fn validate(&self, reference: &ReferenceState) -> Result<()> {
        if self.x == 0 || self.y == 0 {
            return Err(Error::param(
                "x/y",
                "fuel formula needs carbon and hydrogen",
            ));
        }
        for (name, v) in [
            ("lhv", self.lhv),
            ("afr_stoich", self.afr_stoich),
            ("rho_fuel", self.rho_fuel),
            ("bore", self.bore),
            ("v_d", self.v_d),
            ("k_g", self.k_g),
            ("mu_g", self.mu_g),
            ("a", self.a),
            ("omega_max", self.omega_max),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.v_tank >= 0.0) {
            return Err(Error::param("v_tank", "must be non-negative"));
        }
        if !(self.b > 0.0 && self.b < 1.0) {
            return Err(Error::param("b", "must lie in (0, 1)"));
        }
        if !(self.t_eng > self.t_c && self.t_c > reference.t0()) {
            return Err(Error::param("t_eng/t_c", "need T_eng > T_c > T0"));
        }
        if !(self.t_exh >= reference.t0()) {
            return Err(Error::param("t_exh", "must not be below T0"));
        }
        if !(self.omega_idle >= 0.0 && self.omega_idle < self.omega_max) {
            return Err(Error::param("omega_idle", "must lie below omega_max"));
        }
        if self.fmep.iter().any(|c| !(*c >= 0.0)) {
            return Err(Error::param("fmep", "coefficients must be non-negative"));
        }
        if !(self.fuel_map.min_value() >= 0.0) {
            return Err(Error::param("fuel_map", "fuel flow must be non-negative"));
        }
        Ok(())
    }

    pub fn max_torque(&self, omega: f64) -> f64 {
        self.torque_curve.eval(omega).max(0.0)
    }

    /// Whether the engine can run at crankshaft speed `omega`.
    pub fn in_speed_range(&self, omega: f64) -> bool {
        omega >= self.omega_idle && omega <= self.omega_max
    }

    /// Fuel flow in kg/s; zero when the engine is off (`tau <= 0`).
    pub fn fuel_rate(&self, tau: f64, omega: f64) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        self.fuel_map.eval(omega, tau).max(0.0)
    }

    pub fn tank_mass(&self) -> f64 {
        self.v_tank * self.rho_fuel
    }
}

/// Complete combustion `CxHy + z (O2 + 3.76 N2) -> a CO2 + b H2O + c N2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombustionStoich {
    pub a: f64,
    pub b: f64,
    pub z: f64,
    pub c: f64,
    pub n_tot: f64,
    /// Exhaust molar fractions indexed by [`Gas::index`].
    pub fractions: [f64; 4],
    /// Mean molar mass of the exhaust, kg/mol.
    pub molar_mass: f64,
}

impl CombustionStoich {
    pub fn fraction(&self, gas: Gas) -> f64 {
        self.fractions[gas.index()]
    }
}

pub fn stoichiometry(x: u32, y: u32) -> Result<CombustionStoich> {
    if x == 0 || y == 0 {
        return Err(Error::param(
            "x/y",
            "fuel formula needs carbon and hydrogen",
        ));
    }
    let a = f64::from(x);
    let b = f64::from(y) / 2.0;
    let z = a + b / 2.0;
    let c = 3.76 * z;
    let n_tot = a + b + c;
    let mut fractions = [0.0; 4];
    fractions[Gas::CO2.index()] = a / n_tot;
    fractions[Gas::H2O.index()] = b / n_tot;
    fractions[Gas::N2.index()] = c / n_tot;
    let molar_mass = Gas::ALL
        .into_iter()
        .map(|g| fractions[g.index()] * g.molar_mass())
        .sum();
    Ok(CombustionStoich {
        a,
        b,
        z,
        c,
        n_tot,
        fractions,
        molar_mass,
    })
}

/// Ratio of specific chemical exergy to LHV for a `CxHy` fuel.
pub fn fuel_exergy_factor(x: u32, y: u32) -> f64 {
    let (x, y) = (f64::from(x), f64::from(y));
    1.04224 + 0.011925 * x / y - 0.0042 / x
}

/// Specific fuel chemical exergy, J/kg.
pub fn specific_fuel_exergy(params: &EngineParams) -> f64 {
    fuel_exergy_factor(params.x, params.y) * params.lhv
}

pub fn fuel_exergy_rate(params: &EngineParams, mdot_fuel: f64) -> f64 {
    specific_fuel_exergy(params) * mdot_fuel
}

/// Exergy of a full tank, J.
pub fn max_fuel_exergy(params: &EngineParams) -> f64 {
    params.tank_mass() * specific_fuel_exergy(params)
}

/// Exergy per mole of exhaust at `t_exh` (chemical plus physical), J/mol.
pub fn exhaust_molar_exergy(
    stoich: &CombustionStoich,
    thermo: &ThermoData,
    t_exh: f64,
    reference: &ReferenceState,
) -> Result<f64> {
    let mut psi = 0.0;
    for gas in Gas::ALL {
        let f = stoich.fraction(gas);
        if f == 0.0 {
            continue;
        }
        let ch = chemical_exergy(gas, f, reference)?;
        let ph = physical_exergy(thermo.species(gas), t_exh, reference)?;
        psi += f * (ch + ph);
    }
    Ok(psi)
}

/// Exhaust molar flow, mol/s.
pub fn exhaust_molar_flow(params: &EngineParams, stoich: &CombustionStoich, mdot_fuel: f64) -> f64 {
    mdot_fuel * (1.0 + params.afr_stoich) / stoich.molar_mass
}

/// Exergy leaving with the exhaust (ledger sign, ≤ 0). Intake air is at
/// the dead state and carries none.
pub fn exhaust_exergy_rate(
    params: &EngineParams,
    stoich: &CombustionStoich,
    thermo: &ThermoData,
    mdot_fuel: f64,
    reference: &ReferenceState,
) -> Result<f64> {
    if mdot_fuel == 0.0 {
        return Ok(0.0);
    }
    let psi = exhaust_molar_exergy(stoich, thermo, params.t_exh, reference)?;
    Ok(-exhaust_molar_flow(params, stoich, mdot_fuel) * psi)
}

/// Time-averaged wall heat flow from the Taylor and Toong correlation, W.
pub fn heat_transfer_rate(params: &EngineParams, mdot_fuel: f64) -> f64 {
    if mdot_fuel <= 0.0 {
        return 0.0;
    }
    let b = params.b;
    let mdot = mdot_fuel * (1.0 + params.afr_stoich);
    let area = PI * params.bore * params.bore / 4.0;
    params.a * params.k_g / powf(params.mu_g, b)
        * powf(mdot, b)
        * powf(params.bore, b - 1.0)
        * powf(area, 1.0 - b)
        * (params.t_eng - params.t_c)
}

/// Exergy lost with the wall heat (ledger sign, ≤ 0).
pub fn heat_exergy_rate_engine(
    params: &EngineParams,
    mdot_fuel: f64,
    reference: &ReferenceState,
) -> Result<f64> {
    Ok(-carnot_factor(params.t_eng, reference)? * heat_transfer_rate(params, mdot_fuel))
}

/// Four-stroke friction power from a quadratic FMEP, W.
pub fn friction_power(params: &EngineParams, omega: f64) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    let [c0, c1, c2] = params.fmep;
    let fmep = c0 + c1 * omega + c2 * omega * omega;
    fmep * params.v_d * omega / (4.0 * PI)
}

pub fn friction_exergy_rate(params: &EngineParams, omega: f64) -> f64 {
    -friction_power(params, omega)
}

/// Engine exergy rates at one operating point, W.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EngineExergy {
    pub mdot_fuel: f64,
    /// Fuel exergy entering the engine (positive).
    pub x_fuel: f64,
    pub x_work: f64,
    pub x_exh: f64,
    pub x_heat: f64,
    pub x_fric: f64,
    pub x_comb: f64,
}

impl EngineExergy {
    /// Sum of all six terms of the engine balance; zero by construction.
    pub fn residual(&self) -> f64 {
        self.x_fuel + self.x_work + self.x_exh + self.x_heat + self.x_fric + self.x_comb
    }

    /// Brake work over fuel exergy.
    pub fn exergy_efficiency(&self) -> f64 {
        if self.x_fuel > 0.0 {
            -self.x_work / self.x_fuel
        } else {
            0.0
        }
    }
}

/// Closes the engine balance: whatever fuel exergy is not accounted for by
/// work, exhaust, wall heat and friction was destroyed by combustion.
pub fn combustion_irreversibility(
    x_fuel: f64,
    x_work: f64,
    x_exh: f64,
    x_heat: f64,
    x_fric: f64,
) -> f64 {
    -x_fuel - x_work - x_exh - x_heat - x_fric
}

/// Engine parameters bundled with the data needed to evaluate exergy terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Engine {
    pub params: EngineParams,
    pub stoich: CombustionStoich,
    /// Exhaust exergy per mole at the configured exhaust temperature.
    psi_exh: f64,
    carnot_eng: f64,
}

impl Engine {
    pub fn new(
        params: EngineParams,
        thermo: &ThermoData,
        reference: &ReferenceState,
    ) -> Result<Self> {
        params.validate(reference)?;
        let stoich = stoichiometry(params.x, params.y)?;
        let psi_exh = exhaust_molar_exergy(&stoich, thermo, params.t_exh, reference)?;
        let carnot_eng = carnot_factor(params.t_eng, reference)?;
        Ok(Self {
            params,
            stoich,
            psi_exh,
            carnot_eng,
        })
    }

    pub fn with_a(mut self, a: f64) -> Self {
        self.params.a = a;
        self
    }

    /// Exergy terms for brake torque `tau` at speed `omega`.
    pub fn evaluate(&self, tau: f64, omega: f64) -> EngineExergy {
        let p = &self.params;
        let mdot = p.fuel_rate(tau, omega);
        if mdot == 0.0 {
            return EngineExergy::default();
        }
        let x_fuel = fuel_exergy_rate(p, mdot);
        let x_work = -tau * omega;
        let x_exh = -exhaust_molar_flow(p, &self.stoich, mdot) * self.psi_exh;
        let x_heat = -self.carnot_eng * heat_transfer_rate(p, mdot);
        let x_fric = friction_exergy_rate(p, omega);
        let x_comb = combustion_irreversibility(x_fuel, x_work, x_exh, x_heat, x_fric);
        EngineExergy {
            mdot_fuel: mdot,
            x_fuel,
            x_work,
            x_exh,
            x_heat,
            x_fric,
            x_comb,
        }
    }
}

/// Wall-heat exergy over fuel exergy, both integrated over `mdot_samples`.
pub fn heat_to_fuel_ratio(
    params: &EngineParams,
    mdot_samples: &[f64],
    reference: &ReferenceState,
) -> Result<f64> {
    let mut heat = 0.0;
    let mut fuel = 0.0;
    for &m in mdot_samples {
        heat += heat_exergy_rate_engine(params, m, reference)?;
        fuel += fuel_exergy_rate(params, m);
    }
    if fuel <= 0.0 {
        return Err(Error::Calibration("cycle burns no fuel".to_string()));
    }
    Ok(-heat / fuel)
}

/// Finds the heat-transfer coefficient `a` for which wall-heat exergy is
/// `target` times fuel exergy over the given fuel-flow samples (equal
/// time weights). Bisection on `[1e-6, 1e4]`.
pub fn calibrate_a(
    params: &EngineParams,
    mdot_samples: &[f64],
    reference: &ReferenceState,
    target: f64,
) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::Calibration(format!(
            "target ratio {target} outside (0, 1)"
        )));
    }
    let mut p = params.clone();
    let mut ratio_at = |a: f64| -> Result<f64> {
        p.a = a;
        heat_to_fuel_ratio(&p, mdot_samples, reference)
    };
    let (mut lo, mut hi) = (1e-6, 1e4);
    if ratio_at(lo)? > target || ratio_at(hi)? < target {
        return Err(Error::Calibration(format!(
            "target ratio {target} not reachable for a in [{lo}, {hi}]"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio_at(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    let a = 0.5 * (lo + hi);
    if abs(ratio_at(a)? - target) > 1e-9 {
        return Err(Error::Calibration("bisection did not converge".to_string()));
    }
    Ok(a)
}
