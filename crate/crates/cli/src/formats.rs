//! Delimited text formats for cycles, curves, grids and NASA tables.
//!
//! Fields may be separated by commas, semicolons, tabs or spaces. Blank
//! lines and lines starting with `#` are ignored. A leading line whose first
//! field is not a number is taken as a header.

use std::fmt::Write as _;
use std::path::Path;

use exergy_core::cycle::DriveCycle;
use exergy_core::table::{Curve, Grid};
use exergy_core::thermo::ThermoData;

use crate::error::{CliError, Result};

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|f| !f.is_empty())
}

/// Non-comment lines as `(line number, fields)`.
fn records(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(n, l)| (n, fields(l).collect()))
        .collect()
}

fn number(path: &Path, line: usize, field: &str) -> Result<f64> {
    let x: f64 = field
        .parse()
        .map_err(|_| CliError::parse(path, line, format!("`{field}` is not a number")))?;
    if !x.is_finite() {
        return Err(CliError::parse(
            path,
            line,
            format!("non-finite value `{field}`"),
        ));
    }
    Ok(x)
}

/// Numeric rows of exactly `width` columns, skipping one optional header.
fn numeric_rows(text: &str, path: &Path, width: usize) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut recs = records(text);
    if let Some((_, first)) = recs.first() {
        if first.first().is_some_and(|f| f.parse::<f64>().is_err()) {
            recs.remove(0);
        }
    }
    recs.into_iter()
        .map(|(n, f)| {
            if f.len() != width {
                return Err(CliError::parse(
                    path,
                    n,
                    format!("expected {width} columns, found {}", f.len()),
                ));
            }
            let row = f
                .iter()
                .map(|x| number(path, n, x))
                .collect::<Result<Vec<_>>>()?;
            Ok((n, row))
        })
        .collect()
}

fn check_increasing(path: &Path, rows: &[(usize, Vec<f64>)], what: &str) -> Result<()> {
    for w in rows.windows(2) {
        if w[1].1[0] <= w[0].1[0] {
            return Err(CliError::parse(
                path,
                w[1].0,
                format!("{what} {} does not increase past {}", w[1].1[0], w[0].1[0]),
            ));
        }
    }
    Ok(())
}

/// Two columns: time in s, target speed in km/h.
pub fn parse_cycle(text: &str, path: &Path) -> Result<DriveCycle> {
    let rows = numeric_rows(text, path, 2)?;
    if rows.is_empty() {
        return Err(CliError::parse(path, 0, "cycle has no samples"));
    }
    check_increasing(path, &rows, "time")?;
    if let Some((n, r)) = rows.iter().find(|(_, r)| r[1] < 0.0) {
        return Err(CliError::parse(
            path,
            *n,
            format!("negative speed {}", r[1]),
        ));
    }
    if rows[0].1[0] != 0.0 {
        return Err(CliError::parse(
            path,
            rows[0].0,
            "the cycle must start at t = 0",
        ));
    }
    let (t, v) = rows.into_iter().map(|(_, r)| (r[0], r[1])).unzip();
    DriveCycle::from_kmh(t, v).map_err(|e| CliError::parse(path, 0, e.to_string()))
}

pub fn load_cycle(path: &Path) -> Result<DriveCycle> {
    parse_cycle(&read_text(path)?, path)
}

pub fn write_cycle(cycle: &DriveCycle) -> String {
    let mut out = String::from("t_s,v_kmh\n");
    for (t, v) in cycle.times().iter().zip(cycle.speeds()) {
        let _ = writeln!(out, "{t},{}", v * 3.6);
    }
    out
}

/// Two columns `x, y` on strictly increasing `x`.
pub fn parse_curve(text: &str, path: &Path) -> Result<Curve> {
    let rows = numeric_rows(text, path, 2)?;
    check_increasing(path, &rows, "breakpoint")?;
    let (x, y) = rows.into_iter().map(|(_, r)| (r[0], r[1])).unzip();
    Curve::new(x, y).map_err(|e| CliError::parse(path, 0, e.to_string()))
}

pub fn load_curve(path: &Path) -> Result<Curve> {
    parse_curve(&read_text(path)?, path)
}

pub fn write_curve(curve: &Curve, header: &str) -> String {
    let mut out = format!("{header}\n");
    for (x, y) in curve.xs().iter().zip(curve.ys()) {
        let _ = writeln!(out, "{x},{y}");
    }
    out
}

/// Cell table with columns SoC, open-circuit voltage (V) and internal
/// resistance (Ω). Returns `(ocv, r0)`.
pub fn parse_cell_table(text: &str, path: &Path) -> Result<(Curve, Curve)> {
    let rows = numeric_rows(text, path, 3)?;
    check_increasing(path, &rows, "SoC")?;
    if let Some((n, _)) = rows.iter().find(|(_, r)| !(0.0..=1.0).contains(&r[0])) {
        return Err(CliError::parse(path, *n, "SoC outside [0, 1]"));
    }
    let soc: Vec<f64> = rows.iter().map(|(_, r)| r[0]).collect();
    let ocv = rows.iter().map(|(_, r)| r[1]).collect();
    let r0 = rows.iter().map(|(_, r)| r[2]).collect();
    let bad = |e: exergy_core::error::TableError| CliError::parse(path, 0, e.to_string());
    Ok((
        Curve::new(soc.clone(), ocv).map_err(bad)?,
        Curve::new(soc, r0).map_err(bad)?,
    ))
}

pub fn load_cell_table(path: &Path) -> Result<(Curve, Curve)> {
    parse_cell_table(&read_text(path)?, path)
}

pub fn write_cell_table(ocv: &Curve, r0: &Curve) -> String {
    let mut out = String::from("soc,ocv_v,r0_ohm\n");
    for (i, s) in ocv.xs().iter().enumerate() {
        let _ = writeln!(out, "{s},{},{}", ocv.ys()[i], r0.eval(*s));
    }
    out
}

/// Rectangular grid. The first record holds a corner label followed by the
/// column breakpoints; every later record is a row breakpoint followed by
/// one value per column.
pub fn parse_grid(text: &str, path: &Path) -> Result<Grid> {
    let recs = records(text);
    let Some((head_line, head)) = recs.first() else {
        return Err(CliError::parse(path, 0, "grid file is empty"));
    };
    if head.len() < 2 {
        return Err(CliError::parse(
            path,
            *head_line,
            "header needs column breakpoints",
        ));
    }
    let cols = head[1..]
        .iter()
        .map(|f| number(path, *head_line, f))
        .collect::<Result<Vec<_>>>()?;
    for (k, w) in cols.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(CliError::parse(
                path,
                *head_line,
                format!("column breakpoint {} does not increase", k + 1),
            ));
        }
    }
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (i, (n, f)) in recs[1..].iter().enumerate() {
        if f.len() != cols.len() + 1 {
            return Err(CliError::parse(
                path,
                *n,
                format!(
                    "row {i} has {} values, expected {}",
                    f.len() - 1,
                    cols.len()
                ),
            ));
        }
        let r = number(path, *n, f[0])?;
        if rows.last().is_some_and(|&last| r <= last) {
            return Err(CliError::parse(
                path,
                *n,
                format!("row breakpoint {r} does not increase"),
            ));
        }
        rows.push(r);
        values.push(
            f[1..]
                .iter()
                .map(|x| number(path, *n, x))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if rows.is_empty() {
        return Err(CliError::parse(path, *head_line, "grid has no rows"));
    }
    Grid::new(rows, cols, values).map_err(|e| CliError::parse(path, 0, e.to_string()))
}

pub fn load_grid(path: &Path) -> Result<Grid> {
    parse_grid(&read_text(path)?, path)
}

pub fn write_grid(grid: &Grid, corner: &str) -> String {
    let mut out = String::from(corner);
    for c in grid.cols() {
        let _ = write!(out, ",{c}");
    }
    out.push('\n');
    for (r, vals) in grid.rows().iter().zip(grid.values()) {
        let _ = write!(out, "{r}");
        for v in vals {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// Multiplies every grid value by `k`.
pub fn scale_grid(grid: &Grid, k: f64) -> Grid {
    let values = grid
        .values()
        .map(|r| r.iter().map(|v| v * k).collect())
        .collect();
    Grid::new(grid.rows().to_vec(), grid.cols().to_vec(), values).expect("scaling keeps the shape")
}

/// Fuel map in g/s over (ω rad/s rows, τ Nm columns), returned in kg/s.
pub fn load_fuel_map(path: &Path) -> Result<Grid> {
    Ok(scale_grid(&load_grid(path)?, 1e-3))
}

pub fn write_fuel_map(grid_kg_s: &Grid) -> String {
    write_grid(&scale_grid(grid_kg_s, 1e3), "omega_rad_s\\tau_Nm")
}

pub fn load_thermo(path: &Path) -> Result<ThermoData> {
    let text = read_text(path)?;
    ThermoData::parse(&text).map_err(|e| match e {
        exergy_core::Error::ThermoData { line, reason } => CliError::parse(path, line, reason),
        other => CliError::parse(path, 0, other.to_string()),
    })
}
