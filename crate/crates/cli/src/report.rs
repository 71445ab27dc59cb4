//! Run reports: time series, summary and ledger.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use exergy_core::ledger::{Category, Term};
use exergy_core::sim::{Sample, SimResult, Summary};

use crate::error::{CliError, Result};

type Get = fn(&Sample) -> f64;
type Put = fn(&mut Sample, f64);

/// Column name, reader and writer. Floats are written in shortest
/// round-trip form, so parsing a written file restores every value.
const COLUMNS: &[(&str, Get, Put)] = &[
    ("t_s", |s| s.t, |s, x| s.t = x),
    ("v_m_s", |s| s.v, |s, x| s.v = x),
    ("v_target_m_s", |s| s.v_target, |s, x| s.v_target = x),
    ("soc", |s| s.soc, |s, x| s.soc = x),
    ("soe", |s| s.soe, |s, x| s.soe = x),
    ("c_rate", |s| s.c_rate, |s, x| s.c_rate = x),
    ("i_batt_a", |s| s.i_batt, |s, x| s.i_batt = x),
    ("p_batt_w", |s| s.p_batt, |s, x| s.p_batt = x),
    ("t_batt_k", |s| s.t_batt, |s, x| s.t_batt = x),
    ("t_mot_k", |s| s.t_mot, |s, x| s.t_mot = x),
    ("tau_mot_nm", |s| s.tau_mot, |s, x| s.tau_mot = x),
    ("omega_mot_rad_s", |s| s.omega_mot, |s, x| s.omega_mot = x),
    ("tau_eng_nm", |s| s.tau_eng, |s, x| s.tau_eng = x),
    ("omega_eng_rad_s", |s| s.omega_eng, |s, x| s.omega_eng = x),
    ("gear", |s| f64::from(s.gear), |s, x| s.gear = x as i32),
    ("f_brake_n", |s| s.f_brake, |s, x| s.f_brake = x),
    ("mdot_fuel_kg_s", |s| s.mdot_fuel, |s, x| s.mdot_fuel = x),
    ("x_veh_j", |s| s.x_veh, |s, x| s.x_veh = x),
    ("x_rel", |s| s.x_rel, |s, x| s.x_rel = x),
    ("p_trac_w", |s| s.rates.p_trac, |s, x| s.rates.p_trac = x),
    ("p_brake_w", |s| s.rates.p_brake, |s, x| s.rates.p_brake = x),
    ("p_roll_w", |s| s.rates.p_roll, |s, x| s.rates.p_roll = x),
    ("p_aero_w", |s| s.rates.p_aero, |s, x| s.rates.p_aero = x),
    ("p_long_w", |s| s.rates.p_long, |s, x| s.rates.p_long = x),
    (
        "x_batt_work_w",
        |s| s.rates.x_batt_work,
        |s, x| s.rates.x_batt_work = x,
    ),
    (
        "x_dest_batt_w",
        |s| s.rates.x_dest_batt,
        |s, x| s.rates.x_dest_batt = x,
    ),
    (
        "x_heat_batt_w",
        |s| s.rates.x_heat_batt,
        |s, x| s.rates.x_heat_batt = x,
    ),
    (
        "x_heat_mot_w",
        |s| s.rates.x_heat_mot,
        |s, x| s.rates.x_heat_mot = x,
    ),
    (
        "x_dest_mot_w",
        |s| s.rates.x_dest_mot,
        |s, x| s.rates.x_dest_mot = x,
    ),
    (
        "x_fuel_eng_w",
        |s| s.rates.x_fuel,
        |s, x| s.rates.x_fuel = x,
    ),
    (
        "x_work_eng_w",
        |s| s.rates.x_work,
        |s, x| s.rates.x_work = x,
    ),
    ("x_exh_eng_w", |s| s.rates.x_exh, |s, x| s.rates.x_exh = x),
    (
        "x_heat_eng_w",
        |s| s.rates.x_heat_eng,
        |s, x| s.rates.x_heat_eng = x,
    ),
    (
        "x_fric_eng_w",
        |s| s.rates.x_fric,
        |s, x| s.rates.x_fric = x,
    ),
    (
        "x_comb_eng_w",
        |s| s.rates.x_comb,
        |s, x| s.rates.x_comb = x,
    ),
    (
        "s_gen_batt_w_k",
        |s| s.rates.s_gen_batt,
        |s, x| s.rates.s_gen_batt = x,
    ),
    (
        "s_gen_mot_w_k",
        |s| s.rates.s_gen_mot,
        |s, x| s.rates.s_gen_mot = x,
    ),
];

pub fn timeseries_header() -> String {
    COLUMNS.iter().map(|c| c.0).collect::<Vec<_>>().join(",")
}

pub fn write_timeseries(samples: &[Sample]) -> String {
    let mut out = timeseries_header();
    out.push('\n');
    for s in samples {
        for (i, (_, get, _)) in COLUMNS.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", get(s));
        }
        out.push('\n');
    }
    out
}

pub fn parse_timeseries(text: &str, path: &Path) -> Result<Vec<Sample>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == timeseries_header() => {}
        _ => return Err(CliError::parse(path, 1, "unexpected time-series header")),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != COLUMNS.len() {
            return Err(CliError::parse(
                path,
                i + 1,
                format!("expected {} columns, found {}", COLUMNS.len(), fields.len()),
            ));
        }
        let mut s = Sample::default();
        for (f, (name, _, put)) in fields.iter().zip(COLUMNS) {
            let x = f
                .trim()
                .parse()
                .map_err(|_| CliError::parse(path, i + 1, format!("bad {name} value `{f}`")))?;
            put(&mut s, x);
        }
        out.push(s);
    }
    Ok(out)
}

pub fn write_summary(summary: &Summary) -> String {
    let s = summary;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k:<24} {v}");
    };
    kv("architecture", s.architecture.name().into());
    kv("duration_s", format!("{}", s.duration));
    kv("steps", format!("{}", s.steps));
    kv("delta_soc", format!("{:.6}", s.delta_soc));
    kv("delta_soe", format!("{:.6}", s.delta_soe));
    kv("delta_x_rel", format!("{:.6}", s.delta_x_rel));
    kv("x_veh_initial_j", format!("{:.6e}", s.x_veh0));
    kv("x_veh_final_j", format!("{:.6e}", s.x_veh_final));
    kv("x_max_j", format!("{:.6e}", s.x_max));
    kv("fuel_mass_kg", format!("{:.6}", s.fuel_mass));
    kv("fuel_exergy_j", format!("{:.6e}", s.fuel_exergy));
    kv("engine_efficiency", format!("{:.4}", s.engine_efficiency));
    kv("powertrain_loss_j", format!("{:.6e}", s.powertrain_loss));
    kv(
        "max_tracking_error_kmh",
        format!("{:.4}", s.max_tracking_error * 3.6),
    );
    kv("saturated_steps", format!("{}", s.saturated_steps));
    kv("comb_warnings", format!("{}", s.comb_warnings));
    kv("total_loss_j", format!("{:.6e}", s.losses.total_loss));
    out.push_str("\nloss breakdown (% of total loss)\n");
    for sh in s.losses.ranked() {
        let _ = writeln!(out, "  {:<16} {:>8.3}", sh.category.id(), sh.percent);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerTerm {
    pub id: String,
    pub joules: f64,
    pub in_closure: bool,
    pub category: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerShare {
    pub category: String,
    pub loss_j: f64,
    pub percent: f64,
}

/// Machine-readable ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerReport {
    pub architecture: String,
    pub x_veh_initial_j: f64,
    pub x_veh_final_j: f64,
    pub x_max_j: f64,
    pub closure_sum_j: f64,
    pub terms: Vec<LedgerTerm>,
    pub losses: Vec<LedgerShare>,
    pub trajectory_j: Vec<f64>,
}

impl LedgerReport {
    pub fn new(result: &SimResult) -> Self {
        let l = &result.ledger;
        let s = &result.summary;
        Self {
            architecture: s.architecture.name().into(),
            x_veh_initial_j: l.x0(),
            x_veh_final_j: l.x_veh(),
            x_max_j: s.x_max,
            closure_sum_j: l.closure_sum(),
            terms: Term::ALL
                .iter()
                .map(|&t| LedgerTerm {
                    id: t.id().into(),
                    joules: l.total(t),
                    in_closure: t.in_closure(),
                    category: t.category().map(|c: Category| c.id().into()),
                })
                .collect(),
            losses: s
                .losses
                .ranked()
                .into_iter()
                .map(|sh| LedgerShare {
                    category: sh.category.id().into(),
                    loss_j: sh.loss,
                    percent: sh.percent,
                })
                .collect(),
            trajectory_j: l.trajectory().to_vec(),
        }
    }
}

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const SUMMARY_FILE: &str = "summary.txt";
pub const LEDGER_FILE: &str = "ledger.json";

fn write(path: PathBuf, text: &str) -> Result<PathBuf> {
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// Writes the three report files into `outdir`, creating it if needed.
pub fn emit_report(result: &SimResult, outdir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(outdir).map_err(|e| CliError::io(outdir, e))?;
    let ledger =
        serde_json::to_string_pretty(&LedgerReport::new(result)).expect("ledger serialises");
    Ok(vec![
        write(
            outdir.join(TIMESERIES_FILE),
            &write_timeseries(&result.samples),
        )?,
        write(outdir.join(SUMMARY_FILE), &write_summary(&result.summary))?,
        write(outdir.join(LEDGER_FILE), &ledger)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use exergy_core::cycle::DriveCycle;
    use exergy_core::presets;
    use exergy_core::sim::run;

    #[test]
    fn header_has_unique_columns() {
        let mut names: Vec<&str> = COLUMNS.iter().map(|c| c.0).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), COLUMNS.len());
    }

    #[test]
    fn empty_series_is_header_only() {
        let text = write_timeseries(&[]);
        assert_eq!(text.lines().count(), 1);
        assert!(parse_timeseries(&text, Path::new("x")).unwrap().is_empty());
    }

    #[test]
    fn series_round_trips_exactly() {
        let cycle =
            DriveCycle::from_kmh(vec![0.0, 5.0, 10.0, 20.0], vec![0.0, 20.0, 35.0, 0.0]).unwrap();
        let r = run(&presets::hev_config(), &cycle).unwrap();
        let back = parse_timeseries(&write_timeseries(&r.samples), Path::new("x")).unwrap();
        assert_eq!(back, r.samples);
    }

    #[test]
    fn summary_lists_every_share() {
        let cycle = DriveCycle::from_kmh(vec![0.0, 10.0, 20.0], vec![0.0, 40.0, 0.0]).unwrap();
        let r = run(&presets::ev_config(), &cycle).unwrap();
        let text = write_summary(&r.summary);
        let total: f64 = text
            .lines()
            .skip_while(|l| !l.starts_with("loss breakdown"))
            .skip(1)
            .map(|l| l.split_whitespace().nth(1).unwrap().parse::<f64>().unwrap())
            .sum();
        assert!((total - 100.0).abs() < 0.1, "{total}");
        let ledger = LedgerReport::new(&r);
        assert_eq!(ledger.terms.len(), 15);
        assert_eq!(ledger.trajectory_j.len(), r.samples.len());
    }
}
