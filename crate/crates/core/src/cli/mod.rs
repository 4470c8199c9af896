//! Command-line front end.

pub mod commands;
pub mod config;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_density, cmd_moments, cmd_sweep, Quantity, Sweep, SweepParam};
pub use config::{BetaHw, CutoffArg, Format, GridArg, Pair, RunConfig, StateKind, Units};
pub use verify::{Check, Erratum, Group, Level, VerifyReport};

use crate::error::{Result, ThermoError};

/// Environment variable that fixes the number of worker threads.
pub const WORKERS_ENV: &str = "THERMOFIELD_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "thermofield", version, about = "Position densities and moments of thermalized displaced and squeezed number states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the position density on a grid.
    Density(RunArgs),
    /// Mean and variance of the position.
    Moments(RunArgs),
    /// Repeat `density` or `moments` over values of one parameter.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// NAME=V1,V2,... with NAME one of beta_hw, omega_t, n, alpha1, alpha2, z1, z2.
        #[arg(long = "sweep", required = true)]
        sweeps: Vec<Sweep>,
        #[arg(long, value_enum, default_value = "moments")]
        quantity: Quantity,
    },
    /// Check the closed forms against the Fock oracle and quadrature.
    Verify {
        #[arg(value_enum, default_value = "quick")]
        level: Level,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "vacuum")]
    pub state: StateKind,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// RE,IM
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub alpha: Pair,
    /// RE,IM
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub z: Pair,
    /// Dimensionless βħω, or inf.
    #[arg(long = "beta-hw", default_value = "inf")]
    pub beta_hw: BetaHw,
    #[arg(long = "omega-t", default_value_t = 0.0, allow_hyphen_values = true)]
    pub omega_t: f64,
    /// MIN:MAX:COUNT or auto.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    pub grid: GridArg,
    /// M,OMEGA,HBAR
    #[arg(long, default_value = "1,1,1")]
    pub units: Units,
    /// auto or a fixed Fock cutoff.
    #[arg(long, default_value = "auto")]
    pub cutoff: CutoffArg,
    #[arg(long, default_value_t = config::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl From<RunArgs> for RunConfig {
    fn from(a: RunArgs) -> Self {
        RunConfig {
            state: a.state,
            n: a.n,
            alpha: a.alpha,
            z: a.z,
            beta_hw: a.beta_hw,
            omega_t: a.omega_t,
            units: a.units,
            grid: a.grid,
            cutoff: a.cutoff,
            tol: a.tol,
            format: a.format,
            out: a.out,
        }
    }
}

/// Parses flags into a configuration, as the binary would.
pub fn parse_config<I, S>(subcommand: &str, flags: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let argv = ["thermofield".into(), OsString::from(subcommand)].into_iter().chain(flags.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(argv).map_err(|e| ThermoError::Usage(e.to_string()))?;
    Ok(match cli.command {
        Command::Density(r) | Command::Moments(r) | Command::Sweep { run: r, .. } | Command::Verify { run: r, .. } => r.into(),
    })
}

/// Writes to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let name = path.file_name().ok_or_else(|| ThermoError::Usage(format!("--out `{}` names no file", path.display())))?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let written = std::fs::File::create(&tmp).and_then(|mut f| {
        f.write_all(contents.as_bytes())?;
        f.sync_all()
    });
    if let Err(e) = written.and_then(|_| std::fs::rename(&tmp, path)) {
        let _ = std::fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn configure_workers() -> Result<()> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ThermoError::Usage(format!("{WORKERS_ENV} must be a positive integer, got `{v}`")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn exit_code(e: &ThermoError) -> i32 {
    match e {
        ThermoError::Usage(_) => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

fn execute(cli: Cli) -> Result<i32> {
    configure_workers()?;
    match cli.command {
        Command::Density(r) => {
            let cfg = RunConfig::from(r);
            emit(cfg.out.as_deref(), &cmd_density(&cfg)?)?;
        }
        Command::Moments(r) => {
            let cfg = RunConfig::from(r);
            emit(cfg.out.as_deref(), &cmd_moments(&cfg)?)?;
        }
        Command::Sweep { run, sweeps, quantity } => {
            let cfg = RunConfig::from(run);
            emit(cfg.out.as_deref(), &cmd_sweep(&cfg, &sweeps, quantity)?)?;
        }
        Command::Verify { level, run } => {
            let cfg = RunConfig::from(run);
            cfg.validate()?;
            let report = verify::run(level, &cfg.oracle_options())?;
            emit(cfg.out.as_deref(), &report.to_json())?;
            if !report.pass {
                for c in report.failures() {
                    eprintln!("FAILED {} [{}] {} = {:e} > {:e} at {}", c.id, serde_json::to_string(&c.group).unwrap_or_default(), c.metric, c.measured, c.threshold, c.params);
                }
                return Ok(EXIT_CHECK_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Runs the binary's logic and returns its exit code.
pub fn main_with_args<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("thermofield: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_round_trip_through_emitted_args() {
        let flags = [
            "--state", "squeezed", "--n", "2", "--alpha", "1,-0.5", "--z", "0.3,0.4", "--beta-hw", "0.5", "--omega-t", "-0.7",
            "--grid", "-6:6:121", "--units", "2,1,1", "--cutoff", "96", "--tol", "1e-9", "--format", "json", "--out", "x.json",
        ];
        let cfg = parse_config("density", flags).unwrap();
        assert_eq!(cfg.alpha, Pair(1.0, -0.5));
        assert_eq!(cfg.grid, GridArg::Range { min: -6.0, max: 6.0, count: 121 });
        let again = parse_config("density", cfg.to_args()).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(parse_config("moments", RunConfig::default().to_args()).unwrap(), RunConfig::default());
    }

    #[test]
    fn defaults() {
        let cfg = parse_config("density", Vec::<String>::new()).unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.units, Units { mass: 1.0, omega: 1.0, hbar: 1.0 });
        assert_eq!(cfg.grid, GridArg::Auto);
        assert_eq!(cfg.tol, 1e-8);
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, "a\n").unwrap();
        write_atomic(&p, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "b\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["thermofield", "density", "--beta-hw", "1e-9"]), EXIT_USAGE);
        assert_eq!(main_with_args(["thermofield", "density", "--grid", "1:2"]), EXIT_USAGE);
        assert_eq!(main_with_args(["thermofield", "frobnicate"]), EXIT_USAGE);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.json");
        assert_eq!(main_with_args(["thermofield".as_ref(), "moments".as_ref(), "--out".as_ref(), p.as_os_str()]), EXIT_OK);
        assert!(std::fs::read_to_string(&p).unwrap().contains("\"mean_x\""));
    }
}
