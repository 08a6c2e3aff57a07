//! `cslwalk` command line. Every flag is long-form; nothing is read from the
//! environment.
//!
//! Exit status: 0 success, 1 I/O failure, 2 flag error, 3 rejected
//! precondition, 4 numerical non-convergence.

mod commands;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cslwalk_core::constraints::ConstraintId;
use cslwalk_core::units::{parse_quantity, Dimension};
use cslwalk_core::{Body, CslParams, Environment};
use serde_json::Value;

use crate::format::Precision;
use crate::output::{write_json, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cslwalk_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(cslwalk_core::Error::NonConvergence { .. }) => 4,
            CliError::Core(_) => 3,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "cslwalk",
    version,
    about = "CSL collapse and Brownian random walk of small bodies (CGS units)",
    arg_required_else_help = true
)]
pub struct Cli {
    /// Print every physical constant and convention in use, then exit.
    #[arg(long)]
    pub constants: bool,

    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Emit a JSON document instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Round table1/table2 entries to one significant figure.
    #[arg(long, global = true)]
    pub paper_format: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// CSL rms displacement of spheres in vacuum (5 radii x 3 times).
    Table1 {
        #[command(flatten)]
        csl: CslArgs,
    },
    /// Equilibrium wavepacket width and time for the five radii.
    Table2 {
        #[command(flatten)]
        csl: CslArgs,
        /// Density, g/cm^3.
        #[arg(long, default_value_t = 1.0)]
        density: f64,
    },
    /// Rotational factor f_ROT over an (alpha, beta) grid.
    Fig1(Fig1Args),
    /// Constraint map over a (log10 a, log10 lambda_inv) grid.
    Fig2(Fig2Args),
    /// Diffusion curve or time to reach a target displacement/angle.
    Diffuse(DiffuseArgs),
    /// Stochastic ensemble started from the equilibrium wavepacket.
    Simulate(SimulateArgs),
    /// Statistics of individual gas-molecule impacts.
    Collide {
        #[command(flatten)]
        body: BodyArgs,
        #[command(flatten)]
        env: EnvArgs,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct CslArgs {
    /// GRW values lambda = 1e-16 /s, a = 1e-5 cm (also the default).
    #[arg(long, conflicts_with_all = ["lambda", "lambda_inv", "a"])]
    pub grw: bool,

    /// Collapse rate lambda, 1/s.
    #[arg(long, conflicts_with = "lambda_inv")]
    pub lambda: Option<f64>,

    /// 1/lambda as a time, e.g. 1e20 or 1e20s.
    #[arg(long, value_parser = time)]
    pub lambda_inv: Option<f64>,

    /// Localization length a, e.g. 1e-5 or 1dmu.
    #[arg(long, value_parser = length)]
    pub a: Option<f64>,
}

impl CslArgs {
    pub fn params(&self) -> CliResult<CslParams> {
        let mut p = CslParams::GRW;
        if let Some(a) = self.a {
            p = CslParams::new(p.lambda, a)?;
        }
        if let Some(l) = self.lambda {
            p = CslParams::new(l, p.a)?;
        }
        if let Some(li) = self.lambda_inv {
            p = p.with_lambda_inv(li)?;
        }
        Ok(p)
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct BodyArgs {
    /// Sphere radius: R=1e-5, R=1dmu or a bare length.
    #[arg(long, value_name = "R=LEN", conflicts_with = "disc")]
    pub sphere: Option<String>,

    /// Disc radius and thickness: L=2dmu b=.5dmu.
    #[arg(long, num_args = 2, value_names = ["L=LEN", "b=LEN"])]
    pub disc: Option<Vec<String>>,

    /// Density, g/cm^3.
    #[arg(long, default_value_t = 1.0)]
    pub density: f64,
}

impl BodyArgs {
    /// The requested body, or a sphere of radius `default_radius`.
    pub fn body(&self, default_radius: f64) -> CliResult<Body> {
        if let Some(s) = &self.sphere {
            let r = key_length(s, &["R"], "--sphere")?;
            return Ok(Body::sphere(r, self.density)?);
        }
        if let Some(parts) = &self.disc {
            let (mut l, mut b) = (None, None);
            for p in parts {
                match p.split_once('=').map(|(k, _)| k.trim()) {
                    Some("L") => l = Some(key_length(p, &["L"], "--disc")?),
                    Some("b") => b = Some(key_length(p, &["b"], "--disc")?),
                    _ => {
                        return Err(usage(format!(
                            "--disc expects L=<length> b=<length>, got `{p}`"
                        )))
                    }
                }
            }
            let (Some(l), Some(b)) = (l, b) else {
                return Err(usage("--disc needs both L=<length> and b=<length>".into()));
            };
            return Ok(Body::disc(l, b, self.density)?);
        }
        Ok(Body::sphere(default_radius, self.density)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Gas {
    #[value(name = "N2", alias = "n2")]
    N2,
}

#[derive(Args, Debug, Clone, Default)]
pub struct EnvArgs {
    /// Gas species (nitrogen only).
    #[arg(long, value_enum)]
    pub gas: Option<Gas>,

    /// Temperature, e.g. 4.2K. Defaults to 293.15 K.
    #[arg(long = "T", id = "temperature", value_parser = temperature)]
    pub temperature: Option<f64>,

    /// Gas pressure, e.g. 5e-17Torr, 1pT or dyn/cm^2.
    #[arg(long = "p", id = "pressure", value_parser = pressure)]
    pub pressure: Option<f64>,

    /// Gas viscosity, poise. Defaults to 1.8e-4 (T/293.15 K)^(1/2).
    #[arg(long)]
    pub viscosity: Option<f64>,

    /// Thermal radiation bath temperature; defaults to --T.
    #[arg(long, value_parser = temperature)]
    pub radiation: Option<f64>,
}

/// Room-temperature air viscosity, poise.
pub const VISCOSITY_ROOM: f64 = 1.8e-4;

impl EnvArgs {
    pub fn environment(&self) -> CliResult<Option<Environment>> {
        let t = self
            .temperature
            .unwrap_or(cslwalk_core::constants::CGS.room_temperature);
        if let Some(p) = self.pressure {
            let eta = match self.viscosity {
                Some(v) => v,
                None => VISCOSITY_ROOM * (t / cslwalk_core::constants::CGS.room_temperature).sqrt(),
            };
            let mut env = Environment::gas(t, p)?.with_viscosity(eta)?;
            if let Some(tr) = self.radiation {
                env = env.with_radiation_temperature(tr)?;
            }
            return Ok(Some(env));
        }
        if self.gas.is_some() || self.viscosity.is_some() {
            return Err(usage("a gas needs a pressure: add --p <pressure>".into()));
        }
        match (self.radiation, self.temperature) {
            (Some(tr), _) => Ok(Some(
                Environment::radiation(t)?.with_radiation_temperature(tr)?,
            )),
            (None, Some(_)) => Ok(Some(Environment::radiation(t)?)),
            (None, None) => Ok(None),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Fig1Args {
    /// Comma-separated alpha = L/2a values [default: 0.1, 0.2, ..., 4].
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,

    /// Comma-separated beta = b/2a values.
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.25, 0.5, 1.0])]
    pub beta: Vec<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct Fig2Args {
    #[arg(long, default_value_t = -8.0, allow_negative_numbers = true)]
    pub log_a_min: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub log_a_max: f64,
    #[arg(long, default_value_t = 81)]
    pub log_a_n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub log_lambda_inv_min: f64,
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    pub log_lambda_inv_max: f64,
    #[arg(long, default_value_t = 121)]
    pub log_lambda_inv_n: usize,

    /// Comma-separated constraint ids for columns c1, c2, ...
    /// [default: ge-radiation,rot-null,perception-time,small-displacement,trans-null]
    #[arg(long, value_delimiter = ',', value_parser = constraint_id)]
    pub constraints: Option<Vec<ConstraintId>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MechanismArg {
    Csl,
    Brownian,
    Combined,
    QmBaseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiscDirection {
    Perp,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Short,
    Long,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RealmArg {
    Viscous,
    Slip,
    Molecular,
    Radiation,
}

#[derive(Args, Debug, Clone)]
pub struct DiffuseArgs {
    /// Rotation about a diameter (disc) instead of translation.
    #[arg(long, conflicts_with = "trans")]
    pub rot: bool,

    /// Translation (the default).
    #[arg(long)]
    pub trans: bool,

    #[command(flatten)]
    pub body: BodyArgs,

    #[command(flatten)]
    pub env: EnvArgs,

    #[command(flatten)]
    pub csl: CslArgs,

    #[arg(long, value_enum, default_value_t = MechanismArg::Csl)]
    pub mechanism: MechanismArg,

    /// Collapse factor f (or f_ROT); computed from the body when omitted.
    #[arg(long)]
    pub f: Option<f64>,

    /// Direction of disc translation.
    #[arg(long, value_enum, default_value_t = DiscDirection::Perp)]
    pub direction: DiscDirection,

    /// Report the time to reach this rms: an angle such as 2pi, pi/2, 90deg,
    /// or a length such as 1e-3 or 10dmu.
    #[arg(long)]
    pub target: Option<String>,

    /// Curve start time.
    #[arg(long, value_parser = time, default_value = "1")]
    pub t_min: f64,

    /// Curve end time.
    #[arg(long, value_parser = time, default_value = "1e5")]
    pub t_max: f64,

    /// Number of log-spaced curve samples.
    #[arg(long, default_value_t = 11)]
    pub points: usize,

    /// Asymptotic law for the combined mechanism.
    #[arg(long, value_enum, default_value_t = RegimeArg::Auto)]
    pub regime: RegimeArg,

    /// Drag realm; chosen from the mean free path when omitted.
    #[arg(long, value_enum)]
    pub realm: Option<RealmArg>,

    /// Initial-condition term of the CSL rms (cm^2 or rad^2).
    #[arg(long, default_value_t = 0.0)]
    pub initial: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    EulerMaruyama,
}

#[derive(Args, Debug, Clone)]
pub struct SimulateArgs {
    /// Number of trajectories.
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,

    #[command(flatten)]
    pub csl: CslArgs,

    /// Sphere radius.
    #[arg(long, value_parser = length, default_value = "1e-5")]
    pub radius: f64,

    /// Density, g/cm^3.
    #[arg(long, default_value_t = 1.0)]
    pub density: f64,

    /// Time step [default: tau_s/100].
    #[arg(long, value_parser = time)]
    pub dt: Option<f64>,

    /// End time [default: 10 tau_s].
    #[arg(long, value_parser = time)]
    pub t_end: Option<f64>,

    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,

    /// Record ensemble statistics every this many steps.
    #[arg(long, default_value_t = 10)]
    pub record_every: usize,

    /// Worker threads [default: all cores]. Output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

fn quantity(s: &str, dim: Dimension) -> Result<f64, String> {
    parse_quantity(s, dim).map_err(|e| e.to_string())
}

fn length(s: &str) -> Result<f64, String> {
    quantity(s, Dimension::Length)
}

fn time(s: &str) -> Result<f64, String> {
    quantity(s, Dimension::Time)
}

fn temperature(s: &str) -> Result<f64, String> {
    quantity(s, Dimension::Temperature)
}

fn pressure(s: &str) -> Result<f64, String> {
    quantity(s, Dimension::Pressure)
}

fn constraint_id(s: &str) -> Result<ConstraintId, String> {
    s.parse::<ConstraintId>().map_err(|e| {
        let known: Vec<&str> = ConstraintId::ALL.iter().map(|c| c.name()).collect();
        format!("{e} (known: {})", known.join(", "))
    })
}

/// `key=length` (or a bare length); `keys` lists the accepted keys.
fn key_length(s: &str, keys: &[&str], flag: &str) -> CliResult<f64> {
    let value = match s.split_once('=') {
        Some((k, v)) if keys.contains(&k.trim()) => v,
        Some((k, _)) => {
            return Err(usage(format!(
                "{flag}: unknown key `{k}` (expected {})",
                keys.join(" or ")
            )))
        }
        None => s,
    };
    length(value).map_err(|e| usage(format!("{flag}: `{s}`: {e}")))
}

/// Parses an angle: `2pi`, `pi/2`, `1.5pi/4`, `90deg`, `3rad`, `3`; `π` is
/// accepted for `pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim().replace('π', "pi");
    let err = || format!("cannot read angle `{s}` (try 2pi, pi/2, 90deg or 1.5rad)");
    if let Some(deg) = s.strip_suffix("deg") {
        return deg
            .trim()
            .parse::<f64>()
            .map(|d| d.to_radians())
            .map_err(|_| err());
    }
    let s = s.strip_suffix("rad").unwrap_or(&s).trim();
    let Some(i) = s.find("pi") else {
        return s.parse().map_err(|_| err());
    };
    let (head, tail) = (s[..i].trim().trim_end_matches('*'), s[i + 2..].trim());
    let coef: f64 = if head.is_empty() {
        1.0
    } else {
        head.parse().map_err(|_| err())?
    };
    let div: f64 = match tail.strip_prefix('/') {
        Some(d) => d.trim().parse().map_err(|_| err())?,
        None if tail.is_empty() => 1.0,
        None => return Err(err()),
    };
    Ok(coef * std::f64::consts::PI / div)
}

/// Where and how a command's result is written.
pub struct Sink<'a> {
    pub json: bool,
    pub out: Option<&'a Path>,
    pub stdout: &'a mut dyn Write,
}

impl Sink<'_> {
    pub fn emit(&mut self, table: &Table, doc: &Value) -> CliResult<()> {
        match self.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                write_to(self.json, table, doc, &mut w)?;
                w.flush()?;
            }
            None => write_to(self.json, table, doc, &mut *self.stdout)?,
        }
        Ok(())
    }
}

fn write_to(json: bool, table: &Table, doc: &Value, w: &mut dyn Write) -> CliResult<()> {
    if json {
        write_json(doc, w)?;
    } else {
        table.write_csv(w)?;
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Results go to `stdout` (or `--out`); diagnostics to stderr.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    eprint!("{}", e.render());
                    2
                }
            };
        }
    };
    match dispatch(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(hint) = hint(&e) {
                eprintln!("hint: {hint}");
            }
            e.exit_code()
        }
    }
}

fn hint(e: &CliError) -> Option<&'static str> {
    use cslwalk_core::Error as E;
    match e {
        CliError::Core(E::Crossover { .. }) => {
            Some("pass --regime short or --regime long to force one asymptote")
        }
        CliError::Core(E::Unsupported(_)) => {
            Some("see `cslwalk <command> --help` for supported combinations")
        }
        CliError::Core(E::NonConvergence { .. }) => {
            Some("the reported value is the best estimate reached")
        }
        _ => None,
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let mut sink = Sink {
        json: cli.common.json,
        out: cli.common.out.as_deref(),
        stdout,
    };
    if cli.constants {
        return commands::constants(&mut sink);
    }
    let precision = if cli.common.paper_format {
        Precision::Paper
    } else {
        Precision::Full
    };
    let Some(cmd) = &cli.command else {
        return Err(usage("no subcommand given; see --help".into()));
    };
    match cmd {
        Command::Table1 { csl } => commands::table1(&csl.params()?, precision, &mut sink),
        Command::Table2 { csl, density } => {
            commands::table2(&csl.params()?, *density, precision, &mut sink)
        }
        Command::Fig1(a) => commands::fig1(a, &mut sink),
        Command::Fig2(a) => commands::fig2(a, &mut sink),
        Command::Diffuse(a) => commands::diffuse(a, &mut sink),
        Command::Simulate(a) => commands::simulate(a, cli.common.seed, &mut sink),
        Command::Collide { body, env } => commands::collide(body, env, &mut sink),
    }
}
