//! Run manifest: which configuration, cycle and data files make up a run
//! and where its reports go.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use exergy_core::cycle::DriveCycle;
use exergy_core::sim::{Architecture, SimConfig};

use crate::config::{parse_architecture, ConfigFile};
use crate::error::{CliError, Result};
use crate::formats;

/// Table files overriding those named in the configuration.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MapPaths {
    pub motor_map: Option<PathBuf>,
    pub fuel_map: Option<PathBuf>,
    pub torque_curve: Option<PathBuf>,
    pub cell_table: Option<PathBuf>,
    pub thermo: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    /// Omitted: the preset of the selected architecture.
    #[serde(default)]
    pub config: Option<PathBuf>,
    pub cycle: PathBuf,
    pub output: PathBuf,
    #[serde(default)]
    pub architecture: Option<String>,
    #[serde(default)]
    pub maps: MapPaths,
}

fn absolute(base: &Path, p: &Path) -> PathBuf {
    let joined = base.join(p);
    std::path::absolute(&joined).unwrap_or(joined)
}

fn resolve(base: &Path, p: &mut Option<PathBuf>) {
    if let Some(x) = p.as_mut() {
        *x = absolute(base, x);
    }
}

impl RunManifest {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut m: RunManifest =
            toml::from_str(text).map_err(|e| CliError::Config(format!("manifest: {e}")))?;
        resolve(base, &mut m.config);
        m.cycle = absolute(base, &m.cycle);
        m.output = absolute(base, &m.output);
        resolve(base, &mut m.maps.motor_map);
        resolve(base, &mut m.maps.fuel_map);
        resolve(base, &mut m.maps.torque_curve);
        resolve(base, &mut m.maps.cell_table);
        resolve(base, &mut m.maps.thermo);
        m.check_files()?;
        Ok(m)
    }

    /// Reads a manifest; relative paths are taken from its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = formats::read_text(path)?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn inputs(&self) -> Vec<&PathBuf> {
        let m = &self.maps;
        [
            &self.config,
            &m.motor_map,
            &m.fuel_map,
            &m.torque_curve,
            &m.cell_table,
            &m.thermo,
        ]
        .into_iter()
        .flatten()
        .chain(std::iter::once(&self.cycle))
        .collect()
    }

    fn check_files(&self) -> Result<()> {
        for p in self.inputs() {
            if !p.is_file() {
                return Err(CliError::io(
                    p,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "referenced file not found"),
                ));
            }
        }
        Ok(())
    }

    /// Configuration file contents with the manifest's table overrides.
    pub fn config_file(&self) -> Result<(ConfigFile, PathBuf)> {
        let (mut f, base) = match &self.config {
            Some(p) => (
                ConfigFile::load(p)?,
                p.parent()
                    .map_or_else(|| PathBuf::from("."), Path::to_path_buf),
            ),
            None => (ConfigFile::default(), PathBuf::from(".")),
        };
        let m = &self.maps;
        // absolute already, so joining onto the config directory keeps them
        if m.motor_map.is_some() {
            f.motor.map = m.motor_map.clone();
        }
        if m.fuel_map.is_some() {
            f.engine.fuel_map = m.fuel_map.clone();
        }
        if m.torque_curve.is_some() {
            f.engine.torque_curve = m.torque_curve.clone();
        }
        if m.cell_table.is_some() {
            f.battery.cell_table = m.cell_table.clone();
        }
        if m.thermo.is_some() {
            f.reference.thermo = m.thermo.clone();
        }
        Ok((f, base))
    }

    /// Builds configuration and cycle. `arch` and `dt` override both files.
    pub fn prepare(
        &self,
        arch: Option<Architecture>,
        dt: Option<f64>,
    ) -> Result<(SimConfig, DriveCycle)> {
        let (mut file, base) = self.config_file()?;
        let arch = match arch {
            Some(a) => Some(a),
            None => self
                .architecture
                .as_deref()
                .map(parse_architecture)
                .transpose()?,
        };
        if dt.is_some() {
            file.run.dt = dt;
        }
        let config = file.build(arch, &base)?;
        let cycle = formats::load_cycle(&self.cycle)?;
        Ok((config, cycle))
    }
}
