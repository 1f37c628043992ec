//! Command-line driver: config ingestion, experiment dispatch, and CSV,
//! SVG and report emission.
//!
//! Exit status: 0 on success, 2 for command-line, config or parameter
//! errors, 3 when a solver does not converge, 4 when a requested
//! truncation-convergence gate fails, 1 for anything else. Failures print
//! one `error: code=.. kind=.. message=..` line to stderr and write no
//! files.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod run;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

use config::{parse_config, Origin, RunConfig};
use run::{Failure, Outputs};

#[derive(Debug, Parser)]
#[command(name = "optolg", version, about = "Leggett-Garg sweeps of a linearized optomechanical system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Flat `key = value` config file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<String>,
    /// Curve as CSV
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<String>,
    /// Plot of L against the scaled delay
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub observable: Option<ObservableArg>,
    /// Keep only the excitation-conserving coupling.
    #[arg(long, global = true)]
    pub rwa: bool,
    /// Thermal occupation of the mechanical bath
    #[arg(long, global = true, value_name = "FLOAT")]
    pub nbar: Option<String>,
    /// Delay grid as `start:stop:count`.
    #[arg(long, global = true, value_name = "START:STOP:COUNT")]
    pub grid: Option<String>,
    /// Fixed second delay for `lg-general`, in grid units.
    #[arg(long, global = true, value_name = "FLOAT")]
    pub t2: Option<String>,
    /// Fail with exit status 4 unless the curve is converged in the
    /// truncation.
    #[arg(long, global = true)]
    pub convergence_gate: bool,
    /// Any config key, as `key=value`; may be repeated.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObservableArg {
    Cavity,
    Mechanical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Sweep L over the delay with t1 = t2.
    LgSweep,
    /// Sweep L over t1 at a fixed t2.
    LgGeneral,
    /// Evaluate the LG combination of an unbound observable.
    Unbound,
    /// Classical damped-oscillator counterexample.
    ClassicalDemo,
    /// Steady-state occupations.
    Steadystate,
    /// Solve the classical displacements.
    Displacement,
    /// Dispersive-readout feasibility checks.
    Feasibility,
    /// Truncation convergence ladder.
    Convergence,
}

impl Command {
    /// Experiment names this subcommand accepts in a config file.
    fn experiments(&self) -> &'static [&'static str] {
        match self {
            Command::LgSweep => &["lg-sweep-cavity", "lg-sweep-mechanical"],
            Command::LgGeneral => &["lg-general"],
            Command::Unbound => &["unbound-study"],
            Command::ClassicalDemo => &["classical-demo"],
            Command::Steadystate => &["steadystate"],
            Command::Displacement => &["displacement"],
            Command::Feasibility => &["feasibility"],
            Command::Convergence => &["convergence"],
        }
    }
}

/// Merges the config file and flags; flags win.
pub fn build_config(cli: &Cli) -> Result<(RunConfig, &'static str), Failure> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Invalid(format!("cannot read config {path}: {e}")))?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };

    let flag = |name: &str| Origin::Flag(name.to_string());
    for entry in &cli.set {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| Failure::Invalid(format!("flag --set expects key=value, got `{entry}`")))?;
        cfg.set(key.trim(), value.trim(), &flag("--set"))?;
    }
    for (key, value) in [
        ("csv", &cli.csv),
        ("svg", &cli.svg),
        ("report", &cli.report),
        ("n_bar", &cli.nbar),
        ("t2", &cli.t2),
    ] {
        if let Some(v) = value {
            cfg.set(key, v, &flag(&format!("--{}", key.replace("n_bar", "nbar"))))?;
        }
    }
    if let Some(obs) = cli.observable {
        let v = match obs {
            ObservableArg::Cavity => "cavity",
            ObservableArg::Mechanical => "mechanical",
        };
        cfg.set("observable", v, &flag("--observable"))?;
    }
    if cli.rwa {
        cfg.set("rwa", "true", &flag("--rwa"))?;
    }
    if cli.convergence_gate {
        cfg.set("convergence_gate", "true", &flag("--convergence-gate"))?;
    }
    if let Some(grid) = &cli.grid {
        let parts: Vec<&str> = grid.split(':').collect();
        if parts.len() != 3 {
            return Err(Failure::Invalid(format!(
                "flag --grid expects start:stop:count, got `{grid}`"
            )));
        }
        for (key, v) in ["grid_start", "grid_stop", "grid_count"].iter().zip(parts) {
            cfg.set(key, v.trim(), &flag("--grid"))?;
        }
    }

    let allowed = cli.command.experiments();
    let experiment = match cfg.choice("experiment") {
        Some(e) if allowed.contains(&e) => e,
        Some(e) => {
            return Err(Failure::Invalid(format!(
                "config experiment `{e}` does not match the subcommand (expected {})",
                allowed.join(" or ")
            )))
        }
        None => allowed[0],
    };
    let experiment = match (cli.command, cfg.choice("observable")) {
        (Command::LgSweep, Some("mechanical")) => "lg-sweep-mechanical",
        (Command::LgSweep, Some("cavity")) => "lg-sweep-cavity",
        _ => experiment,
    };
    cfg.set("experiment", experiment, &flag("subcommand"))?;
    Ok((cfg, experiment))
}

fn write_outputs(cfg: &RunConfig, out: &Outputs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let io = |path: &str, e: std::io::Error| Failure::Other(format!("cannot write {path}: {e}"));
    for (key, body) in [("csv", &out.csv), ("svg", &out.svg)] {
        if let (Some(path), Some(body)) = (cfg.path(key), body) {
            fs::write(path, body).map_err(|e| io(path, e))?;
        }
    }
    match cfg.path("report") {
        Some(path) => fs::write(path, &out.report).map_err(|e| io(path, e)),
        None => stdout
            .write_all(out.report.as_bytes())
            .map_err(|e| io("stdout", e)),
    }
}

/// Parses `args`, runs the experiment and returns the exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let msg = e.kind().to_string();
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or(&msg).trim_start_matches("error: ");
            let _ = writeln!(stderr, "{}", Failure::Invalid(first.to_string()).line());
            return 2;
        }
    };
    let result = build_config(&cli)
        .and_then(|(cfg, experiment)| run::run(&cfg, experiment).map(|out| (cfg, out)))
        .and_then(|(cfg, out)| write_outputs(&cfg, &out, stdout));
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "{}", f.line());
            f.code()
        }
    }
}
