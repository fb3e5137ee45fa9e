//! Subcommand implementations. Each returns the text to print on stdout;
//! `main` owns process exit codes.

use std::f64::consts::TAU;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use friction_phase::experiments::{figure_preset, run_sweep, Dataset};
use friction_phase::model::{self, DimensionlessTime, ModelParams};
use friction_phase::phase;
use friction_phase::quadrature::QuadratureSpec;
use friction_phase::qubit::BlochAngle;

use crate::config;
use crate::error::{CliError, CliResult};
use crate::number::{format_f64, parse_real};
use crate::output::{self, Format};

fn real(s: &str) -> Result<f64, String> {
    parse_real(s)
}

#[derive(Debug, Parser)]
#[command(
    name = "friction-phase",
    version,
    about = "Decoherence and geometric phase of a qubit moving past an imperfect mirror",
    long_about = "Decoherence and geometric phase of a qubit moving past an imperfect mirror.\n\n\
All quantities are dimensionless; times are in units of the inverse qubit gap, so one \
isolated period is 2pi. Exit status: 0 success, 2 usage or domain error, 3 I/O error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decoherence factor r(s) and optionally the decoherence time.
    Decoherence(DecoherenceArgs),
    /// Geometric phase after a given time.
    Phase(PhaseArgs),
    /// Regenerate a figure dataset (2 to 8).
    Figure(FigureArgs),
    /// Run a sweep described by a configuration file.
    #[command(after_long_help = config::GRAMMAR)]
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Vacuum coupling gamma0 (>= 0).
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub gamma0: f64,
    /// Dimensionless plate coupling lambda~ (>= 0).
    #[arg(long, value_parser = real, default_value = "0", allow_hyphen_values = true)]
    pub lambda: f64,
    /// Dimensionless plate frequency Omega~ (> 0).
    #[arg(long, value_parser = real, default_value = "0.03", allow_hyphen_values = true)]
    pub omega: f64,
    /// Velocity in units of c (0 <= v < 1).
    #[arg(long, value_parser = real, default_value = "0", allow_hyphen_values = true)]
    pub velocity: f64,
}

impl ModelArgs {
    fn params(&self) -> CliResult<ModelParams<f64>> {
        Ok(ModelParams::new(
            self.gamma0,
            self.lambda,
            self.omega,
            self.velocity,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecordFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("when").required(true).args(["time", "periods"])))]
pub struct DecoherenceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Evaluation time s (accepts a pi suffix, e.g. 0.5pi).
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub time: Option<f64>,
    /// Evaluation time in isolated periods (s = 2pi * periods).
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub periods: Option<f64>,
    /// Also solve Im S(s_D) = 1 for the decoherence time.
    #[arg(long)]
    pub solve_td: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: RecordFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Quadrature of cos^2 theta_t.
    Exact,
    /// First-order perturbative formula (one period).
    Approx,
    /// Kinematic phase from numerically diagonalised states.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuadratureChoice {
    AdaptiveSimpson,
    GaussLegendre,
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    /// Initial Bloch angle in radians, or with a pi suffix (0.25pi).
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub theta: f64,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: Method,
    /// Integration horizon (default one period, 2pi).
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub s_final: Option<f64>,
    /// Grid steps for the oracle.
    #[arg(long, default_value_t = 100_000)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "adaptive-simpson")]
    pub quadrature: QuadratureChoice,
    /// Quadrature tolerance.
    #[arg(long, value_parser = real, default_value = "1e-10")]
    pub tolerance: f64,
    /// Gauss-Legendre node count.
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: RecordFormat,
}

#[derive(Debug, Args)]
pub struct DatasetOutput {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<std::path::PathBuf>,
    /// Record the wall-clock time in the metadata (breaks byte-identical reruns).
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure number, 2 to 8.
    pub number: u32,
    #[command(flatten)]
    pub out: DatasetOutput,
    /// Print the preset as a sweep configuration file instead of running it.
    #[arg(long)]
    pub emit_config: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Configuration file (see `help sweep` for the grammar).
    pub config: std::path::PathBuf,
    #[command(flatten)]
    pub out: DatasetOutput,
}

fn record(format: RecordFormat, fields: &[(&str, String)]) -> String {
    match format {
        RecordFormat::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let values: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            format!("{}\n{}\n", header.join(","), values.join(","))
        }
        RecordFormat::Json => {
            let body: Vec<String> = fields.iter().map(|(k, v)| format!("\"{k}\":{v}")).collect();
            format!("{{{}}}\n", body.join(","))
        }
    }
}

fn json_string(format: RecordFormat, s: &str) -> String {
    match format {
        RecordFormat::Json => format!("\"{s}\""),
        RecordFormat::Csv => s.to_string(),
    }
}

pub fn cmd_decoherence(args: &DecoherenceArgs) -> CliResult<String> {
    let params = args.model.params()?;
    let s = match (args.time, args.periods) {
        (Some(t), _) => DimensionlessTime::new(t)?,
        (None, Some(p)) => DimensionlessTime::periods(p)
            .map_err(|_| CliError::Usage(format!("--periods must be finite and >= 0 (got {p})")))?,
        (None, None) => {
            return Err(CliError::Usage(
                "one of --time or --periods is required".into(),
            ))
        }
    };
    let r = model::decoherence_factor(&params, s);
    let mut fields = vec![
        ("gamma0", format_f64(params.gamma0())),
        ("lambda", format_f64(params.lambda_tilde())),
        ("omega", format_f64(params.omega_tilde())),
        ("velocity", format_f64(params.velocity())),
        ("time", format_f64(s.value())),
        (
            "im_influence_action",
            format_f64(model::im_influence_action(&params, s)),
        ),
        ("r", format_f64(r)),
    ];
    if args.solve_td {
        let td = model::decoherence_time(&params)?;
        fields.push(("s_d", format_f64(td.value())));
    }
    Ok(record(args.format, &fields))
}

pub fn cmd_phase(args: &PhaseArgs) -> CliResult<String> {
    let params = args.model.params()?;
    let theta = BlochAngle::new(args.theta)?;
    let s_final = match args.s_final {
        Some(s) => DimensionlessTime::new(s)
            .map_err(|_| CliError::Usage(format!("--s-final must be finite and > 0 (got {s})")))?,
        None => DimensionlessTime::new(TAU)?,
    };
    if s_final.value() <= 0.0 {
        return Err(CliError::Usage("--s-final must be > 0".into()));
    }
    let base = QuadratureSpec::<f64>::default().with_tolerance(args.tolerance);
    let quad = match args.quadrature {
        QuadratureChoice::AdaptiveSimpson => base,
        QuadratureChoice::GaussLegendre => QuadratureSpec {
            nodes: args.nodes,
            ..QuadratureSpec::gauss_legendre(args.nodes).with_tolerance(args.tolerance)
        },
    };
    let unitary = phase::unitary_gp(theta.value());
    let (method, value, error, near_degenerate) = match args.method {
        Method::Exact => {
            let r = phase::gp_exact(&params, theta, s_final, &quad)?;
            (
                "exact",
                r.phase,
                r.quadrature_error_estimate,
                r.near_degenerate,
            )
        }
        Method::Approx => (
            "approx",
            phase::gp_perturbative(&params, theta.value())?,
            0.0,
            false,
        ),
        Method::Oracle => {
            let fine = phase::gp_kinematic_oracle(&params, theta, s_final, args.steps)?;
            let coarse =
                phase::gp_kinematic_oracle(&params, theta, s_final, (args.steps / 2).max(2))?;
            let exact = phase::gp_exact(&params, theta, s_final, &quad)?;
            (
                "oracle",
                fine,
                phase::phase_distance(fine, coarse),
                exact.near_degenerate,
            )
        }
    };
    let fields = [
        ("method", json_string(args.format, method)),
        ("theta", format_f64(theta.value())),
        ("s_final", format_f64(s_final.value())),
        ("phase", format_f64(value)),
        ("normalized", format_f64(value / unitary)),
        ("unitary_gp", format_f64(unitary)),
        ("quad_error", format_f64(error)),
        ("near_degenerate", near_degenerate.to_string()),
    ];
    Ok(record(args.format, &fields))
}

fn stamp(data: &mut Dataset, enabled: bool) {
    if enabled {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        data.metadata.timestamp = Some(format!("unix:{secs}"));
    }
}

fn deliver(data: &Dataset, out: &DatasetOutput) -> CliResult<String> {
    let text = output::render(data, out.format);
    match &out.output {
        None => Ok(text),
        Some(path) => {
            write_file(path, &text)?;
            Ok(format!(
                "wrote {} rows to {}\n",
                data.rows.len(),
                path.display()
            ))
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn cmd_figure(args: &FigureArgs) -> CliResult<String> {
    let spec = figure_preset(args.number)?;
    if args.emit_config {
        let text = config::emit(&spec);
        return match &args.out.output {
            None => Ok(text),
            Some(path) => {
                write_file(path, &text)?;
                Ok(format!("wrote configuration to {}\n", path.display()))
            }
        };
    }
    let mut data = run_sweep(&spec)?;
    stamp(&mut data, args.out.timestamp);
    deliver(&data, &args.out)
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<String> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let spec = config::parse(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.config.display())))?;
    let mut data = run_sweep(&spec)?;
    stamp(&mut data, args.out.timestamp);
    deliver(&data, &args.out)
}

pub fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Decoherence(a) => cmd_decoherence(a),
        Command::Phase(a) => cmd_phase(a),
        Command::Figure(a) => cmd_figure(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}
