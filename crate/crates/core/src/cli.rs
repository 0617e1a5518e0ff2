//! Command-line front end. Every subcommand computes its full output before
//! touching the filesystem, so a failed run leaves nothing behind.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::atomic_data::AtomicDatabase;
use crate::config::{GridRange, Overrides, RunConfig, ATOMIC_DATA_ENV};
use crate::drive_dynamics::{simulate_mode, uniform_grid, write_trajectory_csv, ModeResult};
use crate::error::{Error, Result};
use crate::error_budget::error_budget;
use crate::gate_designer::{design_gate_with, wavelength_sweep, GateDesign};
use crate::report::{design_report, effective_phase_csv, error_report, sweep_csv, DataSource};
use crate::trap_mechanics::{BasisState, Geometry, Mode, TrapConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PHYSICS: i32 = 3;

pub const DEFAULT_TRAJECTORY_DIR: &str = "trajectory";

#[derive(Debug, Parser)]
#[command(name = "iongate", version, about = "Two-ion phase gates driven by polarization-modulated dipole forces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Write displacement and phase trajectories for all modes and basis states (CSV, one directory).
    Trajectory,
    /// Solve for the laser intensity and write a design report.
    Design,
    /// Design a gate at every wavelength of a grid (CSV).
    Sweep,
    /// Evaluate the technical-noise budget of the design.
    Errors,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Configuration file (sectioned key/value).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Species key or name from the atomic data, e.g. Ca40 or 40Ca+.
    #[arg(long, global = true, value_name = "NAME")]
    pub species: Option<String>,
    #[arg(long, global = true, value_name = "X")]
    pub lambda_nm: Option<f64>,
    /// Sweep grid in nm; empty when HI < LO.
    #[arg(long, global = true, value_name = "LO:HI:STEP", value_parser = parse_range)]
    pub lambda_grid: Option<GridRange>,
    #[arg(long, global = true, value_name = "X")]
    pub waist_um: Option<f64>,
    /// Axial trap frequency over 2 pi, kHz.
    #[arg(long, global = true, value_name = "X")]
    pub omega_z_khz: Option<f64>,
    /// Gate length in trap periods.
    #[arg(long, global = true, value_name = "N")]
    pub n: Option<u32>,
    #[arg(long, global = true, value_name = "a|b|c", value_parser = parse_geometry)]
    pub geometry: Option<Geometry>,
    /// Output file (directory for `trajectory`); stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Atomic data file; overrides the config file and the IONGATE_ATOMIC_DATA variable.
    #[arg(long, global = true, value_name = "PATH")]
    pub atomic_data: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<GridRange, String> {
    s.parse()
}

fn parse_geometry(s: &str) -> std::result::Result<Geometry, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            species: self.species.clone(),
            omega_z_khz: self.omega_z_khz,
            geometry: self.geometry,
            waist_um: self.waist_um,
            n: self.n,
            lambda_nm: self.lambda_nm,
            lambda_grid_nm: self.lambda_grid.map(|g| g.points()),
            out: self.out.clone(),
            atomic_data: self.atomic_data.clone(),
        }
    }
}

/// A file to create and its contents.
pub struct Output {
    pub path: PathBuf,
    pub contents: String,
}

/// Everything a subcommand produces: files plus text for stdout.
#[derive(Default)]
pub struct RunOutput {
    pub files: Vec<Output>,
    pub stdout: String,
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_physics() {
        EXIT_PHYSICS
    } else {
        EXIT_CONFIG
    }
}

/// Parses arguments, runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let env = std::env::var_os(ATOMIC_DATA_ENV).map(PathBuf::from);
    let result = RunConfig::load(cli.flags.config.as_deref(), cli.flags.overrides(), env)
        .and_then(|config| execute(cli.command, &config))
        .and_then(|output| commit(&output).map(|_| output));
    match result {
        Ok(output) => {
            let _ = stdout.write_all(output.stdout.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let kind = if e.is_physics() { "physics error" } else { "error" };
            let _ = writeln!(stderr, "iongate: {kind}: {e}");
            exit_code(&e)
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
}

fn commit(output: &RunOutput) -> Result<()> {
    for f in &output.files {
        if let Some(dir) = f.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        }
        std::fs::write(&f.path, &f.contents).map_err(|e| io_error(&f.path, e))?;
    }
    Ok(())
}

struct Setup {
    db: AtomicDatabase,
    key: String,
    trap: TrapConfig,
    waist: f64,
}

impl Setup {
    fn new(config: &RunConfig) -> Result<Self> {
        let db = match &config.atomic_data {
            Some(p) => AtomicDatabase::load(p)?,
            None => AtomicDatabase::builtin(),
        };
        let record = db.get(&config.species).ok_or_else(|| {
            let known: Vec<_> = db.records.iter().map(|r| r.key.as_str()).collect();
            Error::InvalidInput(format!(
                "species `{}` not found in {} (known: {})",
                config.species,
                db.origin,
                known.join(", ")
            ))
        })?;
        let key = record.key.clone();
        let trap = TrapConfig::new(record.species.clone(), config.omega_z)?;
        let waist = config.waist_for(&trap);
        Ok(Self { db, key, trap, waist })
    }

    fn source(&self) -> DataSource {
        DataSource {
            origin: self.db.origin.clone(),
            version: self.db.version,
            species_key: self.key.clone(),
        }
    }

    fn design(&self, config: &RunConfig) -> Result<GateDesign> {
        design_gate_with(
            &self.trap,
            config.geometry,
            self.waist,
            config.n,
            config.omega_laser(),
            &config.design,
        )
    }
}

/// Computes a subcommand's output without writing anything.
pub fn execute(command: Command, config: &RunConfig) -> Result<RunOutput> {
    let setup = Setup::new(config)?;
    match command {
        Command::Trajectory => trajectory(config, &setup),
        Command::Design => {
            let design = setup.design(config)?;
            Ok(to_file_or_stdout(config, design_report(&design, &setup.source())))
        }
        Command::Sweep => {
            let lambdas: Vec<f64> = config.lambda_grid_nm.iter().map(|x| x / 1e9).collect();
            let rows = wavelength_sweep(&setup.trap, config.geometry, setup.waist, config.n, &lambdas, &config.design);
            Ok(to_file_or_stdout(config, sweep_csv(&config.lambda_grid_nm, &rows)))
        }
        Command::Errors => {
            let design = setup.design(config)?;
            let report = error_budget(&design, &config.error_model, config.safety_factor)?;
            Ok(to_file_or_stdout(config, error_report(&design, &report, &setup.source())))
        }
    }
}

fn to_file_or_stdout(config: &RunConfig, contents: String) -> RunOutput {
    match &config.out {
        Some(path) => RunOutput {
            stdout: format!("wrote {}\n", path.display()),
            files: vec![Output {
                path: path.clone(),
                contents,
            }],
        },
        None => RunOutput {
            files: Vec::new(),
            stdout: contents,
        },
    }
}

/// File name of one trajectory CSV, e.g. `trajectory_com_dd.csv`.
pub fn trajectory_file_name(mode: Mode, state: BasisState) -> String {
    format!("trajectory_{}_{}.csv", mode.label(), state.label())
}

pub const EFFECTIVE_PHASE_FILE: &str = "effective_phase.csv";

fn trajectory(config: &RunConfig, setup: &Setup) -> Result<RunOutput> {
    let design = setup.design(config)?;
    let samples = uniform_grid(&design.profile, config.points_per_period);
    let mut results: Vec<ModeResult> = Vec::new();
    for mode in Mode::ALL {
        for state in BasisState::ALL {
            results.push(simulate_mode(&design.forces, &design.profile, mode, state, &samples)?);
        }
    }
    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_TRAJECTORY_DIR));
    let mut files = Vec::new();
    for r in &results {
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &r.trajectory).expect("writing to memory");
        files.push(Output {
            path: dir.join(trajectory_file_name(r.mode, r.basis_state)),
            contents: String::from_utf8(buf).expect("CSV is UTF-8"),
        });
    }
    files.push(Output {
        path: dir.join(EFFECTIVE_PHASE_FILE),
        contents: effective_phase_csv(&results),
    });
    let max = |mode: Mode| {
        results
            .iter()
            .filter(|r| r.mode == mode)
            .flat_map(|r| r.trajectory.iter().map(|p| p.beta.norm()))
            .fold(0.0, f64::max)
    };
    let stdout = format!(
        "wrote {} files to {}\npeak_intensity_W_m2 = {:e}\nexact_effective_phase_rad = {:e}\nmax_beta_com = {:e}\nmax_beta_breathing = {:e}\n",
        files.len(),
        dir.display(),
        design.peak_intensity,
        design.exact_phases.effective_phase,
        max(Mode::CenterOfMass),
        max(Mode::Breathing),
    );
    Ok(RunOutput { files, stdout })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("iongate").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["design", "--species", "Xe129"]).0, EXIT_CONFIG);
        assert_eq!(run_args(&["design", "--geometry", "q"]).0, EXIT_CONFIG);
        assert_eq!(run_args(&["bogus"]).0, EXIT_CONFIG);
        let (code, _, err) = run_args(&["design", "--lambda-nm", "396.959"]);
        assert_eq!(code, EXIT_PHYSICS, "{err}");
        let (code, _, err) = run_args(&["design", "--geometry", "b", "--waist-um", "5"]);
        assert_eq!(code, EXIT_PHYSICS, "{err}");
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn design_to_stdout() {
        let (code, out, err) = run_args(&["design"]);
        assert_eq!(code, EXIT_OK, "{err}");
        assert!(out.contains("[infidelity]"));
        assert!(out.contains("p_sc = "));
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let (code, out, _) = run_args(&["sweep", "--lambda-grid", "900:800:10"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "lambda_nm,power_W,gamma_sc_T,status\n");
    }
}
