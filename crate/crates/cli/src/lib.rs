//! Command-line front end: baseline tables, forward data generation,
//! inversion and round-trip reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;

use clap::{Args, Parser, Subcommand};
use commands::{DEFAULT_METHOD, SINGLE_LEVEL_METHOD};
use config::{ConfigFile, RunConfig};
use error::{CliError, CliResult};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "confine", version, about = "Recover a confining potential q(r) = r + p(r) from bound-state data")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Outer end of the radial grid.
    #[arg(long, global = true)]
    pub rmax: Option<f64>,
    /// Number of grid nodes.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Number of levels.
    #[arg(long = "J", global = true)]
    pub levels: Option<usize>,
    /// JSON file with r_max, n, J, margin, magnitude_cap, precision; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output CSV path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Levels of q = r as `j,energy,slope`.
    Base,
    /// Bound states of a potential as `j,energy,slope`.
    Forward {
        /// `linear`, `linear+exp:a,k`, `linear+gauss:a,mu,w`, or an `r,p` CSV file.
        potential: String,
    },
    /// Recover `r,q,p` from a `j,energy,slope` dataset.
    Invert {
        dataset: PathBuf,
        /// JSON report path; stderr when absent.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Use the closed form for one inserted level.
        #[arg(long)]
        single_level: bool,
        /// Recovery method by name.
        #[arg(long, conflicts_with = "single_level")]
        method: Option<String>,
    },
    /// Forward, invert and forward again; JSON report.
    Roundtrip {
        potential: String,
        /// JSON report path; stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn resolve_config(g: &GlobalArgs) -> CliResult<RunConfig> {
    let file = g.config.as_deref().map(ConfigFile::load).transpose()?;
    let flags = ConfigFile {
        r_max: g.rmax,
        n: g.n,
        levels: g.levels,
        ..ConfigFile::default()
    };
    RunConfig::resolve(file.as_ref(), &flags)
}

fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T, fallback_stderr: bool) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
    match (path, fallback_stderr) {
        (None, true) => {
            eprintln!("{text}");
            Ok(())
        }
        _ => io::emit(path, |w| writeln!(w, "{text}").map_err(|e| CliError::io("report", e))),
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = resolve_config(&cli.global)?;
    let out = cli.global.out.as_deref();
    match &cli.command {
        Command::Base => {
            let data = commands::base_table(&cfg, cfg.require_levels()?)?;
            io::emit(out, |w| io::write_dataset(w, &data, cfg.precision))
        }
        Command::Forward { potential } => {
            let model = commands::resolve_model(potential)?;
            let data = commands::forward(model.as_ref(), &cfg)?;
            io::emit(out, |w| io::write_dataset(w, &data, cfg.precision))
        }
        Command::Invert {
            dataset,
            report,
            single_level,
            method,
        } => {
            let data = io::read_dataset(dataset)?;
            let name = match (single_level, method) {
                (true, _) => SINGLE_LEVEL_METHOD,
                (false, Some(m)) => m.as_str(),
                (false, None) => DEFAULT_METHOD,
            };
            let inv = commands::invert(&data, &cfg, name)?;
            io::emit(out, |w| io::write_potential(w, &inv.result, cfg.precision))?;
            write_json(report.as_deref(), &inv.report, true)
        }
        Command::Roundtrip { potential, report } => {
            let model = commands::resolve_model(potential)?;
            let rep = commands::roundtrip(model.as_ref(), &cfg)?;
            write_json(report.as_deref(), &rep, false)
        }
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
