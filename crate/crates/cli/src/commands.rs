//! Subcommand bodies. Each returns the text to print on success.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use exergy_core::engine::{calibrate_a, heat_to_fuel_ratio};
use exergy_core::sim::{fuel_samples, run, Architecture};

use crate::config::ConfigFile;
use crate::error::{CliError, Result};
use crate::formats;
use crate::manifest::RunManifest;
use crate::report::{emit_report, write_summary};

/// Runs a manifest and writes its reports.
pub fn run_manifest(
    manifest: &Path,
    arch: Option<Architecture>,
    dt: Option<f64>,
    output: Option<&Path>,
) -> Result<String> {
    let m = RunManifest::load(manifest)?;
    let (config, cycle) = m.prepare(arch, dt)?;
    let result = run(&config, &cycle)?;
    let outdir: PathBuf = output.map_or_else(|| m.output.clone(), Path::to_path_buf);
    let files = emit_report(&result, &outdir)?;
    let mut out = write_summary(&result.summary);
    out.push('\n');
    for f in files {
        let _ = writeln!(out, "wrote {}", f.display());
    }
    Ok(out)
}

/// Fits the wall heat-transfer coefficient so that heat exergy is `target`
/// of the fuel exergy over the manifest's cycle. The dispatch does not
/// depend on the coefficient, so a single run provides the fuel flows.
pub fn calibrate(manifest: &Path, target: f64, dt: Option<f64>) -> Result<String> {
    let m = RunManifest::load(manifest)?;
    let (config, cycle) = m.prepare(Some(Architecture::Hev), dt)?;
    let result = run(&config, &cycle)?;
    let samples = fuel_samples(&result);
    let engine = config
        .engine
        .as_ref()
        .expect("hybrid configuration has an engine");
    let a = calibrate_a(engine, &samples, &config.reference, target)?;
    let calibrated = exergy_core::engine::EngineParams {
        a,
        ..engine.clone()
    };
    let ratio = heat_to_fuel_ratio(&calibrated, &samples, &config.reference)?;
    let mut out = String::new();
    let _ = writeln!(out, "a = {a}");
    let _ = writeln!(out, "heat/fuel exergy = {ratio:.6} (target {target})");
    let _ = writeln!(
        out,
        "previous a = {} gives {:.6}",
        engine.a,
        heat_to_fuel_ratio(engine, &samples, &config.reference)?
    );
    Ok(out)
}

fn describe_config(
    out: &mut String,
    file: &ConfigFile,
    arch: Option<Architecture>,
    base: &Path,
) -> Result<()> {
    let config = file.build(arch, base)?;
    out.push_str(&ConfigFile::from_sim(&config).to_toml());
    let m = &config.motor.eff_map;
    let _ = writeln!(
        out,
        "\n# pack: {:.3} kWh, {:.1} V, {:.2} Ah",
        config.pack.e_nom() / 3.6e6,
        config.pack.v_nom(),
        config.pack.q_nom()
    );
    let _ = writeln!(
        out,
        "# motor map: {}x{} nodes, efficiency {:.3}..{:.3}",
        m.rows().len(),
        m.cols().len(),
        m.min_value(),
        m.max_value()
    );
    if let Some(e) = &config.engine {
        let f = &e.fuel_map;
        let _ = writeln!(
            out,
            "# fuel map: {}x{} nodes, {:.3}..{:.3} g/s",
            f.rows().len(),
            f.cols().len(),
            f.min_value() * 1e3,
            f.max_value() * 1e3
        );
        let _ = writeln!(out, "# full tank: {:.3} kg", e.tank_mass());
    }
    Ok(())
}

/// Echoes the effective configuration of a config file or manifest, with
/// a summary of the tables and cycle it uses.
pub fn inspect(path: &Path, arch: Option<Architecture>) -> Result<String> {
    let text = formats::read_text(path)?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut out = String::new();
    if table.contains_key("cycle") {
        let m = RunManifest::load(path)?;
        let (file, base) = m.config_file()?;
        let arch = match arch {
            Some(a) => Some(a),
            None => m
                .architecture
                .as_deref()
                .map(crate::config::parse_architecture)
                .transpose()?,
        };
        describe_config(&mut out, &file, arch, &base)?;
        let c = formats::load_cycle(&m.cycle)?;
        let _ = writeln!(
            out,
            "# cycle: {} samples, {} s, max {:.1} km/h, {:.3} km",
            c.len(),
            c.duration(),
            c.max_speed() * 3.6,
            c.distance() / 1e3
        );
        let _ = writeln!(out, "# output: {}", m.output.display());
    } else {
        let file = ConfigFile::load(path)?;
        describe_config(
            &mut out,
            &file,
            arch,
            path.parent().unwrap_or(Path::new(".")),
        )?;
    }
    Ok(out)
}
