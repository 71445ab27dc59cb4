//! Run configuration: TOML sections overlaid on the EV or HEV preset.
//!
//! Every key is optional and SI valued; a missing key keeps the preset
//! value. Unknown sections or keys are rejected. Paths are resolved against
//! the directory of the configuration file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use exergy_core::battery::{upscale, CellParams};
use exergy_core::presets;
use exergy_core::sim::{Architecture, SimConfig};
use exergy_core::thermo::ReferenceState;

use crate::error::{CliError, Result};
use crate::formats;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub run: RunSection,
    pub reference: ReferenceSection,
    pub vehicle: VehicleSection,
    pub battery: BatterySection,
    pub motor: MotorSection,
    pub engine: EngineSection,
    pub driveline: DrivelineSection,
    pub driver: DriverSection,
    pub ecms: EcmsSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    /// `"ev"` or `"hev"`.
    pub architecture: Option<String>,
    pub dt: Option<f64>,
    /// Defaults to `soe0` when only the latter is given.
    pub soc0: Option<f64>,
    pub soe0: Option<f64>,
    pub t_batt0: Option<f64>,
    pub t_mot0: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReferenceSection {
    pub t0: Option<f64>,
    pub p0: Option<f64>,
    pub f_n2: Option<f64>,
    pub f_o2: Option<f64>,
    pub f_h2o: Option<f64>,
    pub f_co2: Option<f64>,
    pub f_others: Option<f64>,
    /// NASA 7-coefficient table.
    pub thermo: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VehicleSection {
    pub m_veh: Option<f64>,
    pub a_f: Option<f64>,
    pub c_d: Option<f64>,
    pub k_roll: Option<f64>,
    pub r_wh: Option<f64>,
    pub rho_air: Option<f64>,
    pub g: Option<f64>,
    pub eta_diff: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BatterySection {
    pub n_s: Option<u32>,
    pub n_p: Option<u32>,
    /// Cell capacity, Ah.
    pub q_cell: Option<f64>,
    /// Pack nominal voltage, V.
    pub v_nom: Option<f64>,
    pub c_cell: Option<f64>,
    pub h_out_cell: Option<f64>,
    pub max_discharge_c: Option<f64>,
    pub max_charge_c: Option<f64>,
    /// SoC, OCV (V), R0 (Ω) per cell.
    pub cell_table: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MotorSection {
    pub tau_max: Option<f64>,
    pub p_max: Option<f64>,
    pub rs0: Option<f64>,
    pub xi: Option<f64>,
    pub ld: Option<f64>,
    pub lq: Option<f64>,
    pub lambda_pm: Option<f64>,
    pub n_pp: Option<u32>,
    pub k_h: Option<f64>,
    pub k_f: Option<f64>,
    pub c_copper: Option<f64>,
    pub c_iron: Option<f64>,
    pub h_copper: Option<f64>,
    pub h_iron: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// Efficiency grid over (|τ| Nm, ω rad/s).
    pub map: Option<PathBuf>,
    /// Shape of the synthetic map used when no file is given.
    pub map_peak: Option<f64>,
    pub map_floor: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineSection {
    pub lhv: Option<f64>,
    pub afr_stoich: Option<f64>,
    pub v_tank: Option<f64>,
    pub rho_fuel: Option<f64>,
    pub bore: Option<f64>,
    pub v_d: Option<f64>,
    pub t_eng: Option<f64>,
    pub t_c: Option<f64>,
    pub k_g: Option<f64>,
    pub mu_g: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub t_exh: Option<f64>,
    pub fmep_c0: Option<f64>,
    pub fmep_c1: Option<f64>,
    pub fmep_c2: Option<f64>,
    pub omega_idle: Option<f64>,
    pub omega_max: Option<f64>,
    /// Carbon atoms per fuel molecule.
    pub fuel_x: Option<u32>,
    /// Hydrogen atoms per fuel molecule.
    pub fuel_y: Option<u32>,
    /// Fuel flow grid in g/s over (ω rad/s, τ Nm).
    pub fuel_map: Option<PathBuf>,
    /// Full-load torque (Nm) against ω (rad/s).
    pub torque_curve: Option<PathBuf>,
    /// Peak brake efficiency of the synthetic fuel map.
    pub map_peak: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DrivelineSection {
    pub motor_ratio: Option<f64>,
    pub n_motors: Option<u32>,
    pub engine_gears: Option<Vec<f64>>,
    pub shift_speed: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriverSection {
    pub kp: Option<f64>,
    pub ki: Option<f64>,
    pub f_trac_max: Option<f64>,
    pub f_brake_max: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EcmsSection {
    pub s_charge: Option<f64>,
    pub s_discharge: Option<f64>,
    pub soc_ref: Option<f64>,
    pub k_soc: Option<f64>,
    pub grid_points: Option<usize>,
}

fn set<T>(dst: &mut T, src: Option<T>) {
    if let Some(v) = src {
        *dst = v;
    }
}

pub fn parse_architecture(s: &str) -> Result<Architecture> {
    match s.to_ascii_lowercase().as_str() {
        "ev" => Ok(Architecture::Ev),
        "hev" => Ok(Architecture::Hev),
        other => Err(CliError::Config(format!(
            "unknown architecture `{other}` (expected ev or hev)"
        ))),
    }
}

pub fn preset(arch: Architecture) -> SimConfig {
    match arch {
        Architecture::Ev => presets::ev_config(),
        Architecture::Hev => presets::hev_config(),
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = formats::read_text(path)?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn architecture(&self) -> Result<Option<Architecture>> {
        self.run
            .architecture
            .as_deref()
            .map(parse_architecture)
            .transpose()
    }

    /// Builds the simulation configuration. `arch` overrides the file's
    /// architecture; `base` resolves relative paths.
    pub fn build(&self, arch: Option<Architecture>, base: &Path) -> Result<SimConfig> {
        let arch = match arch {
            Some(a) => a,
            None => self.architecture()?.unwrap_or(Architecture::Ev),
        };
        let mut c = preset(arch);
        let path = |p: &PathBuf| base.join(p);

        let r = &self.run;
        set(&mut c.dt, r.dt);
        set(&mut c.soe0, r.soe0);
        c.soc0 = r.soc0.or(r.soe0).unwrap_or(c.soc0);
        set(&mut c.t_batt0, r.t_batt0);
        set(&mut c.t_mot0, r.t_mot0);

        let rf = &self.reference;
        let old = &c.reference;
        use exergy_core::thermo::Gas;
        c.reference = ReferenceState::new(
            rf.t0.unwrap_or(old.t0()),
            rf.p0.unwrap_or(old.p0()),
            [
                rf.f_n2.unwrap_or(old.fraction(Gas::N2)),
                rf.f_o2.unwrap_or(old.fraction(Gas::O2)),
                rf.f_h2o.unwrap_or(old.fraction(Gas::H2O)),
                rf.f_co2.unwrap_or(old.fraction(Gas::CO2)),
            ],
            rf.f_others.unwrap_or(old.others()),
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
        // initial temperatures follow T0 unless given
        if r.t_batt0.is_none() {
            c.t_batt0 = c.reference.t0();
        }
        if r.t_mot0.is_none() {
            c.t_mot0 = c.reference.t0();
        }
        if let Some(p) = &rf.thermo {
            c.thermo = formats::load_thermo(&path(p))?;
        }

        let v = &self.vehicle;
        let ch = &mut c.chassis;
        set(&mut ch.m_veh, v.m_veh);
        set(&mut ch.a_f, v.a_f);
        set(&mut ch.c_d, v.c_d);
        set(&mut ch.k_roll, v.k_roll);
        set(&mut ch.r_wh, v.r_wh);
        set(&mut ch.rho_air, v.rho_air);
        set(&mut ch.g, v.g);
        set(&mut ch.eta_diff, v.eta_diff);

        let b = &self.battery;
        let pack = &c.pack;
        let n_s = b.n_s.unwrap_or(pack.n_s);
        let n_p = b.n_p.unwrap_or(pack.n_p);
        if n_s == 0 || n_p == 0 {
            return Err(CliError::Config(
                "battery n_s and n_p must be at least 1".into(),
            ));
        }
        let v_nom = b.v_nom.unwrap_or(pack.v_nom());
        let mut cell = CellParams {
            v_nom: v_nom / f64::from(n_s),
            ..pack.cell.clone()
        };
        set(&mut cell.q_nom, b.q_cell);
        set(&mut cell.c_cell, b.c_cell);
        set(&mut cell.h_out, b.h_out_cell);
        if let Some(p) = &b.cell_table {
            let (ocv, r0) = formats::load_cell_table(&path(p))?;
            cell.ocv = ocv;
            cell.r0 = r0;
        }
        c.pack = upscale(cell, n_s, n_p)?.with_c_limits(
            b.max_discharge_c.unwrap_or(pack.max_discharge_c),
            b.max_charge_c.unwrap_or(pack.max_charge_c),
        );

        let m = &self.motor;
        let mp = &mut c.motor;
        let reshape = m.tau_max.is_some()
            || m.p_max.is_some()
            || m.map_peak.is_some()
            || m.map_floor.is_some();
        set(&mut mp.tau_max, m.tau_max);
        set(&mut mp.p_max, m.p_max);
        set(&mut mp.rs0, m.rs0);
        set(&mut mp.xi, m.xi);
        set(&mut mp.ld, m.ld);
        set(&mut mp.lq, m.lq);
        set(&mut mp.lambda_pm, m.lambda_pm);
        set(&mut mp.n_pp, m.n_pp);
        set(&mut mp.k_h, m.k_h);
        set(&mut mp.k_f, m.k_f);
        set(&mut mp.c_copper, m.c_copper);
        set(&mut mp.c_iron, m.c_iron);
        set(&mut mp.h_copper, m.h_copper);
        set(&mut mp.h_iron, m.h_iron);
        set(&mut mp.alpha, m.alpha);
        set(&mut mp.beta, m.beta);
        if let Some(p) = &m.map {
            mp.eff_map = formats::load_grid(&path(p))?;
        } else if reshape {
            if !(mp.tau_max > 0.0 && mp.p_max > 0.0) {
                return Err(CliError::Config(
                    "motor tau_max and p_max must be positive".into(),
                ));
            }
            mp.eff_map = presets::synthetic_motor_map(
                mp.tau_max,
                mp.p_max,
                m.map_peak.unwrap_or(presets::MOTOR_MAP_PEAK),
                m.map_floor.unwrap_or(presets::MOTOR_MAP_FLOOR),
            );
        }

        if let Some(ep) = c.engine.as_mut() {
            let e = &self.engine;
            let reshape = e.v_d.is_some() || e.lhv.is_some() || e.map_peak.is_some();
            set(&mut ep.lhv, e.lhv);
            set(&mut ep.afr_stoich, e.afr_stoich);
            set(&mut ep.v_tank, e.v_tank);
            set(&mut ep.rho_fuel, e.rho_fuel);
            set(&mut ep.bore, e.bore);
            set(&mut ep.v_d, e.v_d);
            set(&mut ep.t_eng, e.t_eng);
            set(&mut ep.t_c, e.t_c);
            set(&mut ep.k_g, e.k_g);
            set(&mut ep.mu_g, e.mu_g);
            set(&mut ep.a, e.a);
            set(&mut ep.b, e.b);
            set(&mut ep.t_exh, e.t_exh);
            set(&mut ep.fmep[0], e.fmep_c0);
            set(&mut ep.fmep[1], e.fmep_c1);
            set(&mut ep.fmep[2], e.fmep_c2);
            set(&mut ep.omega_idle, e.omega_idle);
            set(&mut ep.omega_max, e.omega_max);
            set(&mut ep.x, e.fuel_x);
            set(&mut ep.y, e.fuel_y);
            if let Some(p) = &e.fuel_map {
                ep.fuel_map = formats::load_fuel_map(&path(p))?;
            } else if reshape {
                if !(ep.v_d > 0.0 && ep.lhv > 0.0) {
                    return Err(CliError::Config(
                        "engine v_d and lhv must be positive".into(),
                    ));
                }
                ep.fuel_map = presets::synthetic_fuel_map(
                    ep.v_d,
                    ep.lhv,
                    e.map_peak.unwrap_or(presets::FUEL_MAP_PEAK),
                );
            }
            if let Some(p) = &e.torque_curve {
                ep.torque_curve = formats::load_curve(&path(p))?;
            }
        } else if self.engine != EngineSection::default() {
            return Err(CliError::Config(
                "[engine] is only valid for the hev architecture".into(),
            ));
        }

        let d = &self.driveline;
        set(&mut c.driveline.motor_ratio, d.motor_ratio);
        set(&mut c.driveline.n_motors, d.n_motors);
        set(&mut c.driveline.engine_gears, d.engine_gears.clone());
        set(&mut c.driveline.shift_speed, d.shift_speed);

        let dr = &self.driver;
        set(&mut c.driver.kp, dr.kp);
        set(&mut c.driver.ki, dr.ki);
        set(&mut c.driver.f_trac_max, dr.f_trac_max);
        set(&mut c.driver.f_brake_max, dr.f_brake_max);

        let s = &self.ecms;
        set(&mut c.ecms.s_charge, s.s_charge);
        set(&mut c.ecms.s_discharge, s.s_discharge);
        set(&mut c.ecms.soc_ref, s.soc_ref);
        set(&mut c.ecms.k_soc, s.k_soc);
        set(&mut c.ecms.grid_points, s.grid_points);

        c.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(c)
    }

    /// Every scalar of `c` written out, without table paths.
    pub fn from_sim(c: &SimConfig) -> Self {
        use exergy_core::thermo::Gas;
        let r = &c.reference;
        let ch = &c.chassis;
        let m = &c.motor;
        let engine = c
            .engine
            .as_ref()
            .map_or_else(EngineSection::default, |e| EngineSection {
                lhv: Some(e.lhv),
                afr_stoich: Some(e.afr_stoich),
                v_tank: Some(e.v_tank),
                rho_fuel: Some(e.rho_fuel),
                bore: Some(e.bore),
                v_d: Some(e.v_d),
                t_eng: Some(e.t_eng),
                t_c: Some(e.t_c),
                k_g: Some(e.k_g),
                mu_g: Some(e.mu_g),
                a: Some(e.a),
                b: Some(e.b),
                t_exh: Some(e.t_exh),
                fmep_c0: Some(e.fmep[0]),
                fmep_c1: Some(e.fmep[1]),
                fmep_c2: Some(e.fmep[2]),
                omega_idle: Some(e.omega_idle),
                omega_max: Some(e.omega_max),
                fuel_x: Some(e.x),
                fuel_y: Some(e.y),
                ..EngineSection::default()
            });
        Self {
            run: RunSection {
                architecture: Some(c.architecture.name().into()),
                dt: Some(c.dt),
                soc0: Some(c.soc0),
                soe0: Some(c.soe0),
                t_batt0: Some(c.t_batt0),
                t_mot0: Some(c.t_mot0),
            },
            reference: ReferenceSection {
                t0: Some(r.t0()),
                p0: Some(r.p0()),
                f_n2: Some(r.fraction(Gas::N2)),
                f_o2: Some(r.fraction(Gas::O2)),
                f_h2o: Some(r.fraction(Gas::H2O)),
                f_co2: Some(r.fraction(Gas::CO2)),
                f_others: Some(r.others()),
                thermo: None,
            },
            vehicle: VehicleSection {
                m_veh: Some(ch.m_veh),
                a_f: Some(ch.a_f),
                c_d: Some(ch.c_d),
                k_roll: Some(ch.k_roll),
                r_wh: Some(ch.r_wh),
                rho_air: Some(ch.rho_air),
                g: Some(ch.g),
                eta_diff: Some(ch.eta_diff),
            },
            battery: BatterySection {
                n_s: Some(c.pack.n_s),
                n_p: Some(c.pack.n_p),
                q_cell: Some(c.pack.cell.q_nom),
                v_nom: Some(c.pack.v_nom()),
                c_cell: Some(c.pack.cell.c_cell),
                h_out_cell: Some(c.pack.cell.h_out),
                max_discharge_c: Some(c.pack.max_discharge_c),
                max_charge_c: Some(c.pack.max_charge_c),
                cell_table: None,
            },
            motor: MotorSection {
                tau_max: Some(m.tau_max),
                p_max: Some(m.p_max),
                rs0: Some(m.rs0),
                xi: Some(m.xi),
                ld: Some(m.ld),
                lq: Some(m.lq),
                lambda_pm: Some(m.lambda_pm),
                n_pp: Some(m.n_pp),
                k_h: Some(m.k_h),
                k_f: Some(m.k_f),
                c_copper: Some(m.c_copper),
                c_iron: Some(m.c_iron),
                h_copper: Some(m.h_copper),
                h_iron: Some(m.h_iron),
                alpha: Some(m.alpha),
                beta: Some(m.beta),
                ..MotorSection::default()
            },
            engine,
            driveline: DrivelineSection {
                motor_ratio: Some(c.driveline.motor_ratio),
                n_motors: Some(c.driveline.n_motors),
                engine_gears: c.engine.as_ref().map(|_| c.driveline.engine_gears.clone()),
                shift_speed: c.engine.as_ref().map(|_| c.driveline.shift_speed),
            },
            driver: DriverSection {
                kp: Some(c.driver.kp),
                ki: Some(c.driver.ki),
                f_trac_max: Some(c.driver.f_trac_max),
                f_brake_max: Some(c.driver.f_brake_max),
            },
            ecms: EcmsSection {
                s_charge: Some(c.ecms.s_charge),
                s_discharge: Some(c.ecms.s_discharge),
                soc_ref: Some(c.ecms.soc_ref),
                k_soc: Some(c.ecms.k_soc),
                grid_points: Some(c.ecms.grid_points),
            },
        }
    }
}
