use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use exergy_cli::commands;
use exergy_core::sim::Architecture;

#[derive(Parser)]
#[command(
    name = "exergy",
    version,
    about = "EV/HEV powertrain simulation with exergy accounting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Arch {
    Ev,
    Hev,
}

impl From<Arch> for Architecture {
    fn from(a: Arch) -> Self {
        match a {
            Arch::Ev => Architecture::Ev,
            Arch::Hev => Architecture::Hev,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the run described by a manifest and write its reports.
    Run {
        manifest: PathBuf,
        /// Override the vehicle architecture.
        #[arg(long)]
        arch: Option<Arch>,
        /// Override the time step, s.
        #[arg(long)]
        dt: Option<f64>,
        /// Override the output directory.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Fit the engine heat-transfer coefficient on the manifest's cycle.
    CalibrateA {
        manifest: PathBuf,
        /// Target share of heat exergy in fuel exergy.
        #[arg(long, default_value_t = 0.10)]
        target: f64,
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Print the effective configuration of a config file or manifest.
    Inspect {
        path: PathBuf,
        #[arg(long)]
        arch: Option<Arch>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Run {
            manifest,
            arch,
            dt,
            output,
        } => commands::run_manifest(&manifest, arch.map(Into::into), dt, output.as_deref()),
        Command::CalibrateA {
            manifest,
            target,
            dt,
        } => commands::calibrate(&manifest, target, dt),
        Command::Inspect { path, arch } => commands::inspect(&path, arch.map(Into::into)),
    };
    match out {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
