//! Fixed-step orchestration and whole-vehicle exergy balance.
//!
//! Each step runs driver, dispatch (which also advances the chassis),
//! battery, motor and engine, then books every rate into the ledger. Rates
//! are held constant over the step and evaluated with the state at its start.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use crate::battery::{initial_exergy, step_battery, BatteryState, PackParams};
use crate::cycle::DriveCycle;
use crate::driveline::Driveline;
use crate::engine::{max_fuel_exergy, specific_fuel_exergy, Engine, EngineExergy, EngineParams};
use crate::error::{Error, Result};
use crate::ledger::{ExergyLedger, LossReport, Term};
use crate::motor::{step_motor, MotorParams, MotorState};
use crate::supervisor::{
    ecms_split, ev_dispatch, Actuation, Driver, DriverParams, EcmsParams, Powertrain,
};
use crate::thermo::{ReferenceState, ThermoData};
use crate::vehicle::{ChassisParams, LongitudinalState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    Ev,
    Hev,
}

impl Architecture {
    pub fn name(self) -> &'static str {
        match self {
            Architecture::Ev => "ev",
            Architecture::Hev => "hev",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub architecture: Architecture,
    /// Step, s.
    pub dt: f64,
    pub soc0: f64,
    pub soe0: f64,
    pub t_batt0: f64,
    pub t_mot0: f64,
    pub reference: ReferenceState,
    pub thermo: ThermoData,
    pub chassis: ChassisParams,
    pub pack: PackParams,
    pub motor: MotorParams,
    pub driveline: Driveline,
    pub driver: DriverParams,
    /// Used by the hybrid only.
    pub ecms: EcmsParams,
    /// Required by the hybrid, ignored by the EV.
    pub engine: Option<EngineParams>,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param(
                "dt",
                format!("must be positive, got {}", self.dt),
            ));
        }
        for (name, v) in [("soc0", self.soc0), ("soe0", self.soe0)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::param(name, format!("must lie in [0, 1], got {v}")));
            }
        }
        let t0 = self.reference.t0();
        for (name, v) in [("t_batt0", self.t_batt0), ("t_mot0", self.t_mot0)] {
            if !(v >= t0) {
                return Err(Error::param(name, format!("{v} K is below T0 = {t0} K")));
            }
        }
        self.chassis.validate()?;
        self.pack.validate()?;
        self.motor.validate()?;
        self.driveline.validate()?;
        self.driver.validate()?;
        if self.architecture == Architecture::Hev {
            self.ecms.validate()?;
            let engine = self
                .engine
                .as_ref()
                .ok_or_else(|| Error::param("engine", "the hybrid needs engine parameters"))?;
            engine.validate(&self.reference)?;
            if self.driveline.engine_gears.is_empty() {
                return Err(Error::param(
                    "engine_gears",
                    "the hybrid needs at least one gear",
                ));
            }
        }
        Ok(())
    }

    /// Engine with its derived data, for the hybrid.
    pub fn build_engine(&self) -> Result<Option<Engine>> {
        match (self.architecture, &self.engine) {
            (Architecture::Hev, Some(p)) => {
                Ok(Some(Engine::new(p.clone(), &self.thermo, &self.reference)?))
            }
            (Architecture::Hev, None) => {
                Err(Error::param("engine", "the hybrid needs engine parameters"))
            }
            (Architecture::Ev, _) => Ok(None),
        }
    }

    /// Fuel exergy of a full tank, zero for the EV.
    pub fn x_fuel_max(&self) -> f64 {
        match (self.architecture, &self.engine) {
            (Architecture::Hev, Some(p)) => max_fuel_exergy(p),
            _ => 0.0,
        }
    }

    /// Maximum storable exergy: full battery (plus full tank).
    pub fn x_max(&self) -> f64 {
        self.pack.e_nom() + self.x_fuel_max()
    }
}

/// `X / X_max`, the normalised vehicle exergy.
pub fn relative_exergy(x_veh: f64, x_max: f64) -> f64 {
    x_veh / x_max
}

/// Net conversion loss between sources and wheels in ledger signs:
/// `E_trac - E_batt (+ X_work)`. Non-positive for a physical run.
pub fn powertrain_losses(ledger: &ExergyLedger) -> f64 {
    ledger.total(Term::Trac) + ledger.total(Term::Batt) + ledger.total(Term::WorkEng)
}

/// Exergy rates of one step, W in ledger signs (entropy in W/K).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rates {
    pub p_trac: f64,
    pub p_brake: f64,
    pub p_roll: f64,
    pub p_aero: f64,
    pub p_long: f64,
    pub x_batt_work: f64,
    pub x_dest_batt: f64,
    pub x_heat_batt: f64,
    /// Totals over all motors.
    pub x_heat_mot: f64,
    pub x_dest_mot: f64,
    pub x_fuel: f64,
    pub x_work: f64,
    pub x_exh: f64,
    pub x_heat_eng: f64,
    pub x_fric: f64,
    pub x_comb: f64,
    pub s_gen_batt: f64,
    pub s_gen_mot: f64,
}

impl Rates {
    /// Rate of change of `X_veh`.
    pub fn x_veh(&self) -> f64 {
        self.p_trac - self.p_brake - self.p_roll - self.p_aero
            + self.x_batt_work
            + self.x_dest_batt
            + self.x_heat_batt
            + self.x_heat_mot
            + self.x_dest_mot
            + self.x_work
            + self.x_exh
            + self.x_heat_eng
            + self.x_fric
            + self.x_comb
    }

    fn book(&self, ledger: &mut ExergyLedger, dt: f64) {
        let entries = [
            (Term::Trac, self.p_trac),
            (Term::Brake, -self.p_brake),
            (Term::Roll, -self.p_roll),
            (Term::Aero, -self.p_aero),
            (Term::Batt, self.x_batt_work),
            (Term::DestBatt, self.x_dest_batt),
            (Term::HeatBatt, self.x_heat_batt),
            (Term::HeatMot, self.x_heat_mot),
            (Term::DestMot, self.x_dest_mot),
            (Term::FuelEng, self.x_fuel),
            (Term::WorkEng, self.x_work),
            (Term::ExhEng, self.x_exh),
            (Term::HeatEng, self.x_heat_eng),
            (Term::FricEng, self.x_fric),
            (Term::CombEng, self.x_comb),
        ];
        for (term, rate) in entries {
            ledger.add_rate(term, rate, dt);
        }
    }
}

/// One row per simulation time. State values are those at `t`; actuator
/// values and rates belong to the step starting at `t` (zero on the last row).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sample {
    pub t: f64,
    pub v: f64,
    pub v_target: f64,
    pub soc: f64,
    pub soe: f64,
    pub t_batt: f64,
    pub t_mot: f64,
    pub x_veh: f64,
    pub x_rel: f64,
    pub c_rate: f64,
    pub i_batt: f64,
    pub p_batt: f64,
    pub tau_mot: f64,
    pub omega_mot: f64,
    pub tau_eng: f64,
    pub omega_eng: f64,
    /// Engaged engine gear, 0-based; -1 without an engine.
    pub gear: i32,
    pub f_brake: f64,
    pub mdot_fuel: f64,
    pub rates: Rates,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub architecture: Architecture,
    pub duration: f64,
    pub steps: usize,
    pub delta_soc: f64,
    pub delta_soe: f64,
    pub delta_x_rel: f64,
    pub x_veh0: f64,
    pub x_veh_final: f64,
    pub x_max: f64,
    /// Fuel burnt, kg.
    pub fuel_mass: f64,
    /// Fuel exergy burnt, J.
    pub fuel_exergy: f64,
    /// Brake work over fuel energy (LHV based), zero without fuel.
    pub engine_efficiency: f64,
    pub powertrain_loss: f64,
    pub losses: LossReport,
    /// Largest `|v - v_target|` over the samples, m/s.
    pub max_tracking_error: f64,
    /// Steps where combustion irreversibility came out positive.
    pub comb_warnings: usize,
    /// Steps where the actuators could not deliver the driver demand.
    pub saturated_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub samples: Vec<Sample>,
    pub ledger: ExergyLedger,
    pub summary: Summary,
}

/// One step as seen from outside: the row at its start and, except for the
/// final time, the dispatch decision taken over it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub sample: Sample,
    pub actuation: Option<Actuation>,
}

/// Stepwise runner; [`run`] drives it to the end of the cycle.
#[derive(Debug, Clone)]
pub struct Simulation<'a> {
    config: &'a SimConfig,
    cycle: &'a DriveCycle,
    engine: Option<Engine>,
    times: Vec<f64>,
    k: usize,
    x_max: f64,
    tank: f64,
    ledger: ExergyLedger,
    driver: Driver,
    chassis: LongitudinalState,
    battery: BatteryState,
    motor: MotorState,
    samples: Vec<Sample>,
    fuel_mass: f64,
    fuel_exergy: f64,
    work: f64,
    comb_warnings: usize,
    saturated_steps: usize,
    max_err: f64,
}

impl<'a> Simulation<'a> {
    pub fn new(config: &'a SimConfig, cycle: &'a DriveCycle) -> Result<Self> {
        config.validate()?;
        let engine = config.build_engine()?;
        let times = cycle.time_grid(config.dt);
        let x0 = initial_exergy(&config.pack, config.soc0)? + config.x_fuel_max();
        let tank = engine.as_ref().map_or(0.0, |e| e.params.tank_mass());
        Ok(Self {
            config,
            cycle,
            engine,
            samples: Vec::with_capacity(times.len()),
            times,
            k: 0,
            x_max: config.x_max(),
            tank,
            ledger: ExergyLedger::new(x0),
            driver: Driver::new(config.driver.clone()),
            chassis: LongitudinalState::default(),
            battery: BatteryState::new(config.soc0, config.soe0, config.t_batt0),
            motor: MotorState::new(config.t_mot0),
            fuel_mass: 0.0,
            fuel_exergy: 0.0,
            work: 0.0,
            comb_warnings: 0,
            saturated_steps: 0,
            max_err: 0.0,
        })
    }

    pub fn config(&self) -> &SimConfig {
        self.config
    }

    /// Engine built from the configuration, if any.
    pub fn engine(&self) -> Option<&Engine> {
        self.engine.as_ref()
    }

    pub fn powertrain(&self) -> Powertrain<'_> {
        Powertrain {
            chassis: &self.config.chassis,
            motor: &self.config.motor,
            pack: &self.config.pack,
            driveline: &self.config.driveline,
            engine: self.engine.as_ref(),
        }
    }

    pub fn ledger(&self) -> &ExergyLedger {
        &self.ledger
    }

    pub fn is_done(&self) -> bool {
        self.k >= self.times.len()
    }

    /// Advances one step. Returns `None` once every time on the grid has
    /// produced its row.
    pub fn step(&mut self) -> Result<Option<StepReport>> {
        let Some(&t) = self.times.get(self.k) else {
            return Ok(None);
        };
        let k = self.k;
        self.k += 1;
        let v_target = self.cycle.target(t);
        self.max_err = self.max_err.max((self.chassis.v - v_target).abs());
        let mut row = Sample {
            t,
            v: self.chassis.v,
            v_target,
            soc: self.battery.soc,
            soe: self.battery.soe,
            t_batt: self.battery.t,
            t_mot: self.motor.t,
            x_veh: self.ledger.x_veh(),
            x_rel: relative_exergy(self.ledger.x_veh(), self.x_max),
            gear: -1,
            ..Sample::default()
        };
        if k + 1 == self.times.len() {
            self.samples.push(row);
            return Ok(Some(StepReport {
                sample: row,
                actuation: None,
            }));
        }
        let at_step = |e: Error| Error::AtStep {
            step: k,
            time: t,
            source: Box::new(e),
        };
        let step = self.advance(t).map_err(at_step)?;
        let dt = self.config.dt;
        step.rates.book(&mut self.ledger, dt);
        self.ledger.sample();
        if step.rates.x_comb > 0.0 {
            self.comb_warnings += 1;
        }
        if step.act.saturated {
            self.saturated_steps += 1;
        }
        self.fuel_mass += step.engine.mdot_fuel * dt;
        self.fuel_exergy += step.engine.x_fuel * dt;
        self.work -= step.engine.x_work * dt;
        if self.fuel_mass > self.tank && step.engine.mdot_fuel > 0.0 {
            return Err(at_step(Error::FuelExhausted {
                used: self.fuel_mass,
                capacity: self.tank,
            }));
        }
        let a = step.act;
        row.c_rate = self.config.pack.c_rate(step.current);
        row.i_batt = step.current;
        row.p_batt = a.p_batt;
        row.tau_mot = a.tau_mot;
        row.omega_mot = a.omega_mot;
        row.tau_eng = a.tau_eng;
        row.omega_eng = a.omega_eng;
        row.gear = a.gear.map_or(-1, |g| g as i32);
        row.f_brake = a.step.forces.brake;
        row.mdot_fuel = step.engine.mdot_fuel;
        row.rates = step.rates;
        self.samples.push(row);
        self.chassis = a.step.state;
        self.battery = step.battery;
        self.motor = step.motor;
        Ok(Some(StepReport {
            sample: row,
            actuation: Some(a),
        }))
    }

    fn advance(&mut self, t: f64) -> Result<Step> {
        let config = self.config;
        let dt = config.dt;
        let pt = Powertrain {
            chassis: &config.chassis,
            motor: &config.motor,
            pack: &config.pack,
            driveline: &config.driveline,
            engine: self.engine.as_ref(),
        };
        let v = self.chassis.v;
        let demand = self.driver.demand(
            &config.chassis,
            v,
            self.cycle.target(t),
            self.cycle.target(t + dt),
            dt,
        );
        let soc = self.battery.soc;
        let act = match config.architecture {
            Architecture::Ev => ev_dispatch(&pt, demand, self.chassis, soc, dt)?,
            Architecture::Hev => ecms_split(&pt, &config.ecms, demand, self.chassis, soc, dt)?,
        };
        if act.saturated {
            self.driver.hold();
        }
        let reference = &config.reference;
        let (battery, bx) = step_battery(&config.pack, &self.battery, act.p_batt, reference, dt)?;
        let (motor, mx) = step_motor(
            &config.motor,
            &self.motor,
            act.tau_mot,
            act.omega_mot,
            reference,
            dt,
        )?;
        let ex = self.engine.as_ref().map_or(EngineExergy::default(), |e| {
            e.evaluate(act.tau_eng, act.omega_eng)
        });
        let n = f64::from(config.driveline.n_motors);
        let p = act.step.powers;
        let rates = Rates {
            p_trac: p.trac,
            p_brake: p.brake,
            p_roll: p.roll,
            p_aero: p.aero,
            p_long: p.long,
            x_batt_work: bx.x_work,
            x_dest_batt: bx.x_dest,
            x_heat_batt: bx.x_heat,
            x_heat_mot: n * mx.x_heat,
            x_dest_mot: n * mx.x_dest,
            x_fuel: ex.x_fuel,
            x_work: ex.x_work,
            x_exh: ex.x_exh,
            x_heat_eng: ex.x_heat,
            x_fric: ex.x_fric,
            x_comb: ex.x_comb,
            s_gen_batt: bx.s_gen,
            s_gen_mot: n * mx.s_gen,
        };
        Ok(Step {
            act,
            battery,
            motor,
            engine: ex,
            rates,
            current: bx.current,
        })
    }

    /// Closes the ledger and builds the summary. Call after the last step.
    pub fn finish(self) -> SimResult {
        let samples = self.samples;
        let (first, last) = match (samples.first(), samples.last()) {
            (Some(f), Some(l)) => (*f, *l),
            _ => (Sample::default(), Sample::default()),
        };
        let lhv = self.engine.as_ref().map_or(1.0, |e| e.params.lhv);
        let ledger = self.ledger;
        let summary = Summary {
            architecture: self.config.architecture,
            duration: last.t,
            steps: samples.len().saturating_sub(1),
            delta_soc: last.soc - first.soc,
            delta_soe: last.soe - first.soe,
            delta_x_rel: last.x_rel - first.x_rel,
            x_veh0: ledger.x0(),
            x_veh_final: ledger.x_veh(),
            x_max: self.x_max,
            fuel_mass: self.fuel_mass,
            fuel_exergy: self.fuel_exergy,
            engine_efficiency: if self.fuel_mass > 0.0 {
                self.work / (self.fuel_mass * lhv)
            } else {
                0.0
            },
            powertrain_loss: powertrain_losses(&ledger),
            losses: ledger.close(),
            max_tracking_error: self.max_err,
            comb_warnings: self.comb_warnings,
            saturated_steps: self.saturated_steps,
        };
        SimResult {
            samples,
            ledger,
            summary,
        }
    }
}

struct Step {
    act: Actuation,
    battery: BatteryState,
    motor: MotorState,
    engine: EngineExergy,
    rates: Rates,
    current: f64,
}

/// Runs `cycle` with `config` at the configured step.
pub fn run(config: &SimConfig, cycle: &DriveCycle) -> Result<SimResult> {
    let mut sim = Simulation::new(config, cycle)?;
    while sim.step()?.is_some() {}
    Ok(sim.finish())
}

/// Fuel-flow series of a run, for calibrating the wall-heat coefficient.
pub fn fuel_samples(result: &SimResult) -> Vec<f64> {
    let n = result.samples.len().saturating_sub(1);
    result.samples[..n].iter().map(|s| s.mdot_fuel).collect()
}

/// Specific exergy of the configured fuel, J/kg (zero for the EV).
pub fn fuel_specific_exergy(config: &SimConfig) -> f64 {
    config.engine.as_ref().map_or(0.0, specific_fuel_exergy)
}
