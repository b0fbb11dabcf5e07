//! `aquameter` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input.

pub mod render;

use std::io::Write;
use std::path::{Path, PathBuf};

use aquameter_core::scenario::load_scenario_doc;
use aquameter_core::service::{self, SweepKind};
use aquameter_core::{Error, Overrides, ScenarioDoc};
use clap::{Args, Parser, Subcommand};

pub use render::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "aquameter",
    version,
    about = "Energy, carbon and water footprint of compute workloads"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-stage and cumulative footprint report.
    Estimate(Common),
    /// Repeat the estimate across wet-bulb temperatures.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "diurnal", required_unless_present = "diurnal")]
        monthly: bool,
        #[arg(long)]
        diurnal: bool,
    },
    /// Scale the search stage to production query rates.
    Project {
        #[command(flatten)]
        common: Common,
        /// Queries per hour; replaces the scenario's list.
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        qph: Vec<f64>,
    },
    /// Check a scenario without computing anything.
    Validate(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_name = "PATH")]
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_name = "F", allow_negative_numbers = true)]
    pub pue: Option<f64>,
    #[arg(long = "wue-off", value_name = "F", allow_negative_numbers = true)]
    pub wue_off: Option<f64>,
    #[arg(long, value_name = "F", allow_negative_numbers = true)]
    pub cycles: Option<f64>,
    #[arg(long = "wet-bulb-f", value_name = "F", allow_negative_numbers = true)]
    pub wet_bulb_f: Option<f64>,
    #[arg(long, value_name = "F", allow_negative_numbers = true)]
    pub ci: Option<f64>,
}

impl Common {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            pue: self.pue,
            wue_off: self.wue_off,
            cycles: self.cycles,
            wet_bulb_f: self.wet_bulb_f,
            ci: self.ci,
        }
    }

    /// Scenario with flag overrides applied, plus the directory trace paths
    /// are resolved against.
    pub fn load(&self) -> Result<(ScenarioDoc, PathBuf), Error> {
        let mut doc = load_scenario_doc(&self.scenario)?;
        doc.apply_overrides(&self.overrides());
        let base = self
            .scenario
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."))
            .to_path_buf();
        Ok((doc, base))
    }
}

/// Whether table output should carry ANSI styling.
pub fn color_enabled(to_terminal: bool) -> bool {
    to_terminal && std::env::var_os("AQUAMETER_NO_COLOR").is_none()
}

fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_INVALID
    } else {
        EXIT_IO
    }
}

fn report_error(e: &Error, stderr: &mut dyn Write) {
    match e {
        Error::Invalid(errors) => {
            for err in errors.iter() {
                let _ = writeln!(stderr, "error: {err}");
            }
        }
        other => {
            let _ = writeln!(stderr, "error: {other}");
        }
    }
}

fn produce(command: &Command, color: bool) -> Result<(String, &Common), Error> {
    match command {
        Command::Estimate(c) => {
            let (doc, base) = c.load()?;
            let resp = service::estimate(&doc, Some(&base))?;
            Ok((render::estimate(&resp, c.format, color), c))
        }
        Command::Sweep { common, monthly, .. } => {
            let (doc, base) = common.load()?;
            let kind = if *monthly {
                SweepKind::Monthly
            } else {
                SweepKind::Diurnal
            };
            let resp = service::sweep(&doc, Some(&base), kind)?;
            Ok((render::sweep(&resp, common.format, color), common))
        }
        Command::Project { common, qph } => {
            let (doc, base) = common.load()?;
            let rates = (!qph.is_empty()).then_some(qph.as_slice());
            let resp = service::project(&doc, Some(&base), rates)?;
            Ok((render::project(&resp, common.format, color), common))
        }
        Command::Validate(c) => {
            let (doc, base) = c.load()?;
            let scenario = doc.resolve(Some(&base))?;
            let text = match c.format {
                Format::Json => "{\"valid\":true}\n".to_string(),
                _ => match &scenario.workload {
                    aquameter_core::Workload::Pipeline(p) => {
                        format!("ok: {} ({} stages)\n", p.label, p.stages.len())
                    }
                    aquameter_core::Workload::Trace { label, trace, .. } => {
                        format!("ok: {} ({} intervals)\n", label, trace.len())
                    }
                },
            };
            Ok((text, c))
        }
    }
}

/// Runs one command; returns the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write, stdout_is_terminal: bool) -> i32 {
    let common = match &cli.command {
        Command::Estimate(c) | Command::Validate(c) => c,
        Command::Sweep { common, .. } | Command::Project { common, .. } => common,
    };
    let color = common.out.is_none() && color_enabled(stdout_is_terminal);
    let (text, common) = match produce(&cli.command, color) {
        Ok(v) => v,
        Err(e) => {
            report_error(&e, stderr);
            return exit_code(&e);
        }
    };
    let written = match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_IO
        }
    }
}
