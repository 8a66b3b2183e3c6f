//! Command-line front end: `ber-sweep`, `amam` and `scatter`.
//!
//! Each command computes all of its outputs in memory, writes a JSON run
//! manifest (resolved config plus SHA-256 of every data file), then writes the
//! data files. Every file goes through a temp file and a rename, so a failed
//! run never leaves a half-written CSV behind.
//!
//! Exit codes: 0 success, 2 usage, 3 I/O, 4 numeric/config.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::amplifier::{Clamp, PaParams, PolyCoeffs};
use crate::error::Error;
use crate::harness::{
    run_sweep, scatter_capture, ChainMode, PaConfig, StoppingRule, SweepConfig, DEFAULT_DRIVE_DB,
};
use crate::modem::{Family, ModScheme};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

/// Nominal line rate, recorded in manifests only; the simulation is symbol-level.
pub const NOMINAL_BIT_RATE_BPS: u32 = 30_000;

#[derive(Debug, Parser)]
#[command(
    name = "pa-linksim",
    version,
    about = "BER simulation of MPSK/MQAM through a cubic PA model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo BER vs Eb/N0, optionally with the PA in the chain.
    BerSweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Eb/N0 grid in dB as start:step:stop (inclusive).
        #[arg(long, allow_hyphen_values = true)]
        snr: String,
        #[arg(long, default_value_t = 100)]
        min_errors: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max_bits: u64,
        #[command(flatten)]
        pa: PaArgs,
    },
    /// AM/AM characteristic of the fitted PA (always clamped).
    Amam {
        #[command(flatten)]
        common: CommonArgs,
        /// Input level grid in dB as start:step:stop (inclusive).
        #[arg(long, allow_hyphen_values = true, default_value = "-40:0.5:15")]
        pin: String,
        #[command(flatten)]
        pa: PaArgs,
    },
    /// Ideal vs received symbol pairs for constellation plots.
    Scatter {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = 1000)]
        symbols: usize,
        /// Eb/N0 in dB; omit for a noiseless channel.
        #[arg(long, allow_hyphen_values = true)]
        snr: Option<String>,
        #[command(flatten)]
        pa: PaArgs,
    },
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SchemeArgs {
    #[arg(long, value_enum)]
    scheme: SchemeFamily,
    #[arg(long, default_value_t = 16)]
    m: u32,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeFamily {
    Psk,
    Qam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PaMode {
    Off,
    FixedDrive,
    DriveSweep,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClampArg {
    On,
    Off,
}

#[derive(Debug, Args)]
struct PaArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 23.0)]
    pa_gain: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 27.0)]
    pa_p1db: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 29.5)]
    pa_psat: f64,
    #[arg(long, value_enum, default_value_t = PaMode::Off)]
    pa_mode: PaMode,
    #[arg(long, allow_hyphen_values = true, default_value_t = DEFAULT_DRIVE_DB)]
    drive_db: f64,
    #[arg(long, value_enum, default_value_t = ClampArg::On)]
    clamp: ClampArg,
}

impl PaArgs {
    fn params(&self) -> Result<PaParams, CliError> {
        Ok(PaParams::new(self.pa_gain, self.pa_p1db, self.pa_psat)?)
    }

    fn config(&self) -> Result<PaConfig, CliError> {
        Ok(PaConfig {
            params: self.params()?,
            drive_db: self.drive_db,
            clamp: match self.clamp {
                ClampArg::On => Clamp::On,
                ClampArg::Off => Clamp::Off,
            },
        })
    }
}

impl SchemeArgs {
    fn scheme(&self) -> Result<ModScheme, CliError> {
        let family = match self.scheme {
            SchemeFamily::Psk => Family::Psk,
            SchemeFamily::Qam => Family::Qam,
        };
        Ok(ModScheme::new(family, self.m)?)
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(io::Error),
    Config(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Config(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Config(_) => EXIT_CONFIG,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
            CliError::Config(e) => write!(f, "config error: {e}"),
        }
    }
}

/// Parses an inclusive `start:step:stop` grid. A bare number is a one-point grid.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| {
        p.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("'{p}' is not a finite number in grid '{s}'"))
    };
    match parts.as_slice() {
        [single] => Ok(vec![num(single)?]),
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step <= 0.0 {
                return Err(format!("grid step must be positive in '{s}'"));
            }
            if stop < start {
                return Err(format!("grid stop is below start in '{s}'"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..n).map(|i| start + step * i as f64).collect())
        }
        _ => Err(format!("grid '{s}' must look like start:step:stop")),
    }
}

/// Manifest written alongside every command's data files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub master_seed: u64,
    pub nominal_bit_rate_bps: u32,
    pub config: serde_json::Value,
    pub outputs: Vec<OutputDigest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Resolved `amam` configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmAmConfig {
    pub params: PaParams,
    pub pin_db_start: f64,
    pub pin_db_stop: f64,
    pub steps: usize,
}

/// Resolved `scatter` configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterConfig {
    pub scheme: ModScheme,
    pub n_symbols: usize,
    pub seed: u64,
    pub pa: Option<PaConfig>,
    pub snr_db: Option<f64>,
}

/// Renders the `ber-sweep` CSV for a resolved config.
pub fn ber_sweep_csv(config: &SweepConfig) -> crate::Result<String> {
    let records = run_sweep(config)?;
    let mut csv = String::from("snr_db,bits,errors,ber,theory_ber\n");
    for r in &records {
        let theory = r.theory_ber.map(|t| t.to_string()).unwrap_or_default();
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            r.snr_db, r.bits_simulated, r.bit_errors, r.ber, theory
        );
    }
    Ok(csv)
}

/// Renders the `amam` power-domain and voltage-domain CSVs.
pub fn amam_csvs(config: &AmAmConfig) -> crate::Result<(String, String)> {
    let coeffs = PolyCoeffs::fit(&config.params)?;
    let curve = coeffs.am_am_curve(config.pin_db_start, config.pin_db_stop, config.steps)?;
    let mut db = String::from("pin_db,pout_db,gain_db\n");
    let mut volts = String::from("vin,vout\n");
    for p in &curve {
        let _ = writeln!(db, "{},{},{}", p.pin_db, p.pout_db, p.gain_db);
        let _ = writeln!(volts, "{},{}", p.vin, p.vout);
    }
    Ok((db, volts))
}

/// Renders the `scatter` CSV.
pub fn scatter_csv(config: &ScatterConfig) -> crate::Result<String> {
    let pts = scatter_capture(
        config.scheme,
        config.n_symbols,
        config.seed,
        config.pa.as_ref(),
        config.snr_db,
    )?;
    let mut csv = String::from("pre_i,pre_q,post_i,post_q\n");
    for p in &pts {
        let _ = writeln!(csv, "{},{},{},{}", p.pre.re, p.pre.im, p.post.re, p.post.im);
    }
    Ok(csv)
}

struct Planned {
    command: &'static str,
    seed: u64,
    config: serde_json::Value,
    files: Vec<(String, String)>,
}

fn plan(cmd: Command) -> Result<(PathBuf, Planned), CliError> {
    match cmd {
        Command::BerSweep {
            common,
            scheme,
            snr,
            min_errors,
            max_bits,
            pa,
        } => {
            let snr_points_db = parse_grid(&snr).map_err(CliError::Usage)?;
            let scheme = scheme.scheme()?;
            let (pa_cfg, mode) = match pa.pa_mode {
                PaMode::Off => (None, ChainMode::Linear),
                PaMode::FixedDrive => (Some(pa.config()?), ChainMode::PaFixedDrive),
                PaMode::DriveSweep => (Some(pa.config()?), ChainMode::PaDriveSweep),
            };
            let config = SweepConfig {
                scheme,
                snr_points_db,
                stopping: StoppingRule {
                    min_bit_errors: min_errors,
                    max_bits,
                },
                master_seed: common.seed,
                pa: pa_cfg,
                mode,
            };
            let csv = ber_sweep_csv(&config)?;
            Ok((
                common.out,
                Planned {
                    command: "ber-sweep",
                    seed: common.seed,
                    config: to_json(&config),
                    files: vec![("ber_sweep.csv".into(), csv)],
                },
            ))
        }
        Command::Amam { common, pin, pa } => {
            let grid = parse_grid(&pin).map_err(CliError::Usage)?;
            if grid.len() < 2 {
                return Err(CliError::Usage(format!(
                    "input grid '{pin}' has fewer than 2 points"
                )));
            }
            let config = AmAmConfig {
                params: pa.params()?,
                pin_db_start: grid[0],
                pin_db_stop: grid[grid.len() - 1],
                steps: grid.len(),
            };
            let (db, volts) = amam_csvs(&config)?;
            Ok((
                common.out,
                Planned {
                    command: "amam",
                    seed: common.seed,
                    config: to_json(&config),
                    files: vec![("amam.csv".into(), db), ("amam_voltage.csv".into(), volts)],
                },
            ))
        }
        Command::Scatter {
            common,
            scheme,
            symbols,
            snr,
            pa,
        } => {
            let snr_db = match snr {
                None => None,
                Some(s) => match parse_grid(&s).map_err(CliError::Usage)?.as_slice() {
                    [v] => Some(*v),
                    _ => {
                        return Err(CliError::Usage(format!(
                            "scatter takes a single --snr value, got '{s}'"
                        )))
                    }
                },
            };
            let pa_cfg = match pa.pa_mode {
                PaMode::Off => None,
                PaMode::FixedDrive => Some(pa.config()?),
                PaMode::DriveSweep => {
                    return Err(CliError::Usage(
                        "scatter supports --pa-mode off|fixed-drive".into(),
                    ))
                }
            };
            if symbols == 0 {
                return Err(CliError::Usage("--symbols must be at least 1".into()));
            }
            let config = ScatterConfig {
                scheme: scheme.scheme()?,
                n_symbols: symbols,
                seed: common.seed,
                pa: pa_cfg,
                snr_db,
            };
            let csv = scatter_csv(&config)?;
            Ok((
                common.out,
                Planned {
                    command: "scatter",
                    seed: common.seed,
                    config: to_json(&config),
                    files: vec![("scatter.csv".into(), csv)],
                },
            ))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("config types serialize infallibly")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> io::Result<()> {
    let tmp = dir.join(format!(".{name}.tmp"));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, dir.join(name))
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

fn emit(dir: &Path, planned: &Planned) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: planned.command.into(),
        master_seed: planned.seed,
        nominal_bit_rate_bps: NOMINAL_BIT_RATE_BPS,
        config: planned.config.clone(),
        outputs: planned
            .files
            .iter()
            .map(|(name, body)| OutputDigest {
                file: name.clone(),
                bytes: body.len(),
                sha256: sha256_hex(body.as_bytes()),
            })
            .collect(),
    };
    let manifest_name = format!("{}.manifest.json", planned.command.replace('-', "_"));
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    write_atomic(dir, &manifest_name, json.as_bytes())?;

    let mut written = vec![dir.join(&manifest_name)];
    for (name, body) in &planned.files {
        write_atomic(dir, name, body.as_bytes())?;
        written.push(dir.join(name));
    }
    Ok(written)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match plan(cli.command).and_then(|(dir, planned)| emit(&dir, &planned)) {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("pa-linksim: {e}");
            e.exit_code()
        }
    }
}
