//! Default vehicles and synthetic input data.
//!
//! Scalar parameters reproduce the published vehicle table. The OCV and
//! resistance curves, the motor efficiency maps, the fuel map and the drive
//! cycle are synthetic stand-ins with documented shapes; real data can be
//! supplied through the file formats of the CLI crate.

use alloc::vec;
use alloc::vec::Vec;

use crate::battery::{upscale, CellParams, PackParams};
use crate::cycle::DriveCycle;
use crate::driveline::Driveline;
use crate::engine::EngineParams;
use crate::motor::MotorParams;
use crate::sim::{Architecture, SimConfig};
use crate::supervisor::{DriverParams, EcmsParams};
use crate::table::{Curve, Grid};
use crate::thermo::{ReferenceState, ThermoData};
use crate::vehicle::ChassisParams;

const PI: f64 = core::f64::consts::PI;

pub fn ev_chassis() -> ChassisParams {
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

pub fn hev_chassis() -> ChassisParams {
    ChassisParams {
        m_veh: 1360.0,
        a_f: 2.21,
        c_d: 0.25,
        r_wh: 0.3,
        ..ev_chassis()
    }
}

/// Synthetic NMC-like open-circuit voltage, 21 points on SoC 0..1.
pub fn ocv_curve() -> Curve {
    let v = vec![
        3.00, 3.30, 3.42, 3.49, 3.54, 3.58, 3.61, 3.63, 3.66, 3.68, 3.71, 3.74, 3.78, 3.82, 3.86,
        3.90, 3.95, 4.00, 4.06, 4.12, 4.18,
    ];
    Curve::new(soc_axis(), v).expect("static table")
}

/// Synthetic cell series resistance, Ω, rising towards empty.
pub fn r0_curve() -> Curve {
    let r = vec![
        0.045, 0.036, 0.031, 0.028, 0.026, 0.025, 0.024, 0.0235, 0.023, 0.023, 0.023, 0.023, 0.023,
        0.023, 0.023, 0.0232, 0.0234, 0.0236, 0.0238, 0.024, 0.024,
    ];
    Curve::new(soc_axis(), r).expect("static table")
}

fn soc_axis() -> Vec<f64> {
    (0..=20).map(|i| f64::from(i) / 20.0).collect()
}

pub fn cell(v_nom: f64) -> CellParams {
    CellParams {
        q_nom: 4.85,
        v_nom,
        ocv: ocv_curve(),
        r0: r0_curve(),
        c_cell: 156.3790,
        h_out: 0.2085,
    }
}

/// 110s46p, 400 V nominal.
pub fn ev_pack() -> PackParams {
    upscale(cell(400.0 / 110.0), 110, 46)
        .expect("static pack")
        .with_c_limits(5.0, 3.0)
}

/// 55s1p, 201.6 V nominal.
pub fn hev_pack() -> PackParams {
    upscale(cell(201.6 / 55.0), 55, 1)
        .expect("static pack")
        .with_c_limits(6.0, 6.0)
}

/// Synthetic efficiency map over |τ| in `[0, tau_max]` and ω in
/// `[0, 1000]` rad/s, derived from a copper/iron/windage loss shape and
/// scaled so the best node reaches `peak`. Nodes at zero power take
/// `floor`, the lowest efficiency allowed anywhere.
pub fn synthetic_motor_map(tau_max: f64, p_max: f64, peak: f64, floor: f64) -> Grid {
    let rows: Vec<f64> = (0..=12).map(|i| tau_max * f64::from(i) / 12.0).collect();
    let cols: Vec<f64> = (0..=20).map(|i| 50.0 * f64::from(i)).collect();
    let w_base = p_max / tau_max;
    let shape = |tau: f64, w: f64| {
        let t = tau / tau_max;
        let s = w / w_base;
        p_max * (0.020 * t * t + 0.006 * s + 0.004 * s * s) + 150.0
    };
    let eta = |k: f64, tau: f64, w: f64| {
        let p = tau * w;
        if p <= 0.0 {
            return floor;
        }
        (p / (p + k * shape(tau, w))).max(floor)
    };
    let best = |k: f64| {
        rows.iter()
            .flat_map(|&t| cols.iter().map(move |&w| (t, w)))
            .map(|(t, w)| eta(k, t, w))
            .fold(0.0, f64::max)
    };
    // loss scale giving the requested peak
    let (mut lo, mut hi) = (1e-3, 1e3);
    for _ in 0..200 {
        let mid = crate::math::sqrt(lo * hi);
        if best(mid) > peak {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k = hi;
    Grid::from_fn(rows.clone(), cols.clone(), |t, w| eta(k, t, w).min(peak)).expect("finite map")
}

fn motor_common(eff_map: Grid, tau_max: f64, p_max: f64) -> MotorParams {
    MotorParams {
        eff_map,
        tau_max,
        p_max,
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

/// Best and worst efficiency of the synthetic motor maps.
pub const MOTOR_MAP_PEAK: f64 = 0.96;
pub const MOTOR_MAP_FLOOR: f64 = 0.6;

/// Best brake efficiency of the synthetic fuel map.
pub const FUEL_MAP_PEAK: f64 = 0.36;

/// One of the two identical EV machines: 329 Nm, 193 kW.
pub fn ev_motor() -> MotorParams {
    motor_common(
        synthetic_motor_map(329.0, 193e3, MOTOR_MAP_PEAK, MOTOR_MAP_FLOOR),
        329.0,
        193e3,
    )
}

/// HEV machine: 200 Nm, 125.6 kW.
pub fn hev_motor() -> MotorParams {
    motor_common(
        synthetic_motor_map(200.0, 125.6e3, MOTOR_MAP_PEAK, MOTOR_MAP_FLOOR),
        200.0,
        125.6e3,
    )
}

/// Full-load torque of the 1.8 L engine versus crank speed.
pub fn engine_torque_curve() -> Curve {
    let rpm = [760.0, 1000.0, 2000.0, 3600.0, 4400.0, 5200.0, 5540.0];
    let tau = vec![105.0, 110.0, 128.0, 142.0, 140.0, 134.0, 130.0];
    Curve::new(rpm.iter().map(|n| n * PI / 30.0).collect(), tau).expect("static curve")
}

const HEYWOOD_FMEP: [f64; 3] = [0.97e5, 143.24, 0.45594];

/// Synthetic Willans-type fuel map in kg/s over ω 80..580 rad/s and
/// τ 0..150 Nm: fuel power is proportional to brake power plus friction
/// and throttling losses, with the proportionality chosen so the best node
/// has a brake efficiency of exactly `peak`.
pub fn synthetic_fuel_map(v_d: f64, lhv: f64, peak: f64) -> Grid {
    let rows: Vec<f64> = (0..=25).map(|i| 80.0 + 20.0 * f64::from(i)).collect();
    let cols: Vec<f64> = (0..=15).map(|i| 10.0 * f64::from(i)).collect();
    let per_rev = v_d / (4.0 * PI);
    let loss = |w: f64, tau: f64| {
        let [c0, c1, c2] = HEYWOOD_FMEP;
        let fmep = c0 + c1 * w + c2 * w * w;
        let pmep = 40e3 * (1.0 - tau / 150.0).max(0.0);
        (fmep + pmep) * per_rev * w
    };
    let best = rows
        .iter()
        .flat_map(|&w| cols.iter().map(move |&t| (w, t)))
        .map(|(w, t)| t * w / (t * w + loss(w, t)))
        .fold(0.0, f64::max);
    let e = peak / best;
    Grid::from_fn(rows, cols, |w, t| (t * w + loss(w, t)) / (e * lhv)).expect("finite map")
}

/// Gasoline 1.8 L spark-ignition engine.
pub fn hev_engine() -> EngineParams {
    let v_d = 1.8e-3;
    let lhv = 47.3e6;
    EngineParams {
        fuel_map: synthetic_fuel_map(v_d, lhv, FUEL_MAP_PEAK),
        torque_curve: engine_torque_curve(),
        omega_idle: 1000.0 * PI / 30.0,
        omega_max: 5200.0 * PI / 30.0,
        x: 8,
        y: 18,
        lhv,
        afr_stoich: 14.6,
        v_tank: 0.043,
        rho_fuel: 755.0,
        bore: 0.0805,
        v_d,
        t_eng: 677.23,
        t_c: 373.15,
        k_g: 0.05,
        mu_g: 3.26e-5,
        a: CALIBRATED_A,
        b: 0.75,
        t_exh: 800.0,
        fmep: [0.97e5, 10.0, 0.05],
    }
}

/// Heat-transfer coefficient calibrated on the surrogate cycle with the
/// default hybrid.
pub const CALIBRATED_A: f64 = 11.148335;

pub fn ev_driveline() -> Driveline {
    Driveline {
        motor_ratio: 9.73,
        n_motors: 2,
        engine_gears: vec![],
        shift_speed: 0.0,
    }
}

pub fn hev_driveline() -> Driveline {
    Driveline {
        motor_ratio: 8.0,
        n_motors: 1,
        engine_gears: vec![13.0, 8.0, 5.5, 4.1, 3.2],
        shift_speed: 150.0,
    }
}

pub fn driver() -> DriverParams {
    DriverParams {
        kp: 100.0,
        ki: 10.0,
        f_trac_max: 5e4,
        f_brake_max: 5e4,
    }
}

pub fn ecms() -> EcmsParams {
    EcmsParams {
        s_charge: 2.0,
        s_discharge: 3.0,
        soc_ref: 0.5,
        k_soc: 5.0,
        grid_points: 41,
    }
}

pub fn ev_config() -> SimConfig {
    let reference = ReferenceState::standard();
    let t0 = reference.t0();
    SimConfig {
        architecture: Architecture::Ev,
        dt: 1.0,
        soc0: 0.75,
        soe0: 0.75,
        t_batt0: t0,
        t_mot0: t0,
        reference,
        thermo: ThermoData::embedded(),
        chassis: ev_chassis(),
        pack: ev_pack(),
        motor: ev_motor(),
        driveline: ev_driveline(),
        driver: driver(),
        ecms: ecms(),
        engine: None,
    }
}

pub fn hev_config() -> SimConfig {
    SimConfig {
        architecture: Architecture::Hev,
        soc0: 0.5,
        soe0: 0.5,
        chassis: hev_chassis(),
        pack: hev_pack(),
        motor: hev_motor(),
        driveline: hev_driveline(),
        engine: Some(hev_engine()),
        ..ev_config()
    }
}

/// Knots `(t s, v km/h)` of a four-phase light-duty cycle shaped after the
/// class-3 WLTC: low, medium, high and extra-high phases of 589, 433, 455
/// and 323 s, top speed 131.3 km/h.
const SURROGATE_PHASES: [&[(f64, f64)]; 4] = [
    &[
        (0.0, 0.0),
        (11.0, 0.0),
        (17.0, 14.0),
        (23.0, 15.0),
        (30.0, 24.0),
        (38.0, 31.0),
        (46.0, 31.0),
        (52.0, 20.0),
        (58.0, 0.0),
        (69.0, 0.0),
        (80.0, 18.0),
        (90.0, 35.0),
        (104.0, 47.0),
        (116.0, 50.0),
        (130.0, 45.0),
        (140.0, 38.0),
        (150.0, 42.0),
        (166.0, 30.0),
        (176.0, 14.0),
        (184.0, 0.0),
        (200.0, 0.0),
        (212.0, 20.0),
        (226.0, 36.0),
        (240.0, 51.0),
        (258.0, 56.5),
        (270.0, 48.0),
        (285.0, 40.0),
        (300.0, 44.0),
        (320.0, 50.0),
        (332.0, 38.0),
        (345.0, 25.0),
        (356.0, 0.0),
        (370.0, 0.0),
        (380.0, 15.0),
        (394.0, 32.0),
        (408.0, 44.0),
        (424.0, 38.0),
        (436.0, 30.0),
        (448.0, 16.0),
        (458.0, 0.0),
        (478.0, 0.0),
        (490.0, 18.0),
        (504.0, 35.0),
        (520.0, 45.0),
        (536.0, 41.0),
        (550.0, 30.0),
        (562.0, 18.0),
        (572.0, 6.0),
        (580.0, 0.0),
        (589.0, 0.0),
    ],
    &[
        (0.0, 0.0),
        (12.0, 0.0),
        (24.0, 22.0),
        (40.0, 45.0),
        (60.0, 58.0),
        (80.0, 64.0),
        (96.0, 56.0),
        (112.0, 62.0),
        (130.0, 76.6),
        (148.0, 70.0),
        (162.0, 52.0),
        (176.0, 30.0),
        (188.0, 0.0),
        (206.0, 0.0),
        (218.0, 20.0),
        (232.0, 40.0),
        (248.0, 54.0),
        (266.0, 60.0),
        (290.0, 66.0),
        (310.0, 72.0),
        (330.0, 64.0),
        (350.0, 52.0),
        (368.0, 40.0),
        (384.0, 48.0),
        (400.0, 38.0),
        (414.0, 20.0),
        (426.0, 0.0),
        (433.0, 0.0),
    ],
    &[
        (0.0, 0.0),
        (10.0, 0.0),
        (24.0, 28.0),
        (42.0, 56.0),
        (62.0, 74.0),
        (82.0, 80.0),
        (104.0, 88.0),
        (126.0, 97.4),
        (150.0, 92.0),
        (172.0, 84.0),
        (192.0, 76.0),
        (210.0, 60.0),
        (226.0, 40.0),
        (240.0, 18.0),
        (252.0, 0.0),
        (264.0, 0.0),
        (276.0, 22.0),
        (294.0, 50.0),
        (316.0, 72.0),
        (340.0, 84.0),
        (364.0, 90.0),
        (388.0, 86.0),
        (410.0, 72.0),
        (428.0, 52.0),
        (442.0, 28.0),
        (450.0, 0.0),
        (455.0, 0.0),
    ],
    &[
        (0.0, 0.0),
        (8.0, 0.0),
        (22.0, 30.0),
        (40.0, 62.0),
        (60.0, 88.0),
        (80.0, 102.0),
        (104.0, 112.0),
        (130.0, 120.0),
        (158.0, 126.0),
        (186.0, 131.3),
        (212.0, 128.0),
        (236.0, 118.0),
        (256.0, 104.0),
        (274.0, 86.0),
        (290.0, 64.0),
        (304.0, 40.0),
        (316.0, 14.0),
        (323.0, 0.0),
    ],
];

/// Synthetic 1800 s mixed cycle sampled at 1 Hz (1801 samples).
pub fn surrogate_wltc() -> DriveCycle {
    let mut knots: Vec<(f64, f64)> = Vec::new();
    let mut offset = 0.0;
    for phase in SURROGATE_PHASES {
        for &(t, v) in phase {
            let t = offset + t;
            if knots.last().is_some_and(|k| k.0 == t) {
                continue;
            }
            knots.push((t, v));
        }
        offset += phase[phase.len() - 1].0;
    }
    let kt: Vec<f64> = knots.iter().map(|k| k.0).collect();
    let kv: Vec<f64> = knots.iter().map(|k| k.1).collect();
    let shape = Curve::new(kt, kv).expect("increasing knots");
    let t: Vec<f64> = (0..=1800).map(f64::from).collect();
    let v = t.iter().map(|&x| shape.eval(x)).collect();
    DriveCycle::from_kmh(t, v).expect("valid cycle")
}
