use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use phasebound_cli::commands::{self, SpectrumRequest};
use phasebound_cli::config::CurveConfig;
use phasebound_cli::curve::{self, CurveRequest, DkEntry, OutputFormat, RowStatus, XAxis};
use phasebound_cli::format::open_output;
use phasebound_cli::{init_threads, CliError};
use phasebound_core::PhaseWindow;

/// Least upper bounds on the success probability of quantum phase measurements.
#[derive(Parser)]
#[command(name = "phasebound", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound, concentration and optimal state for one precision pair.
    Bound(BoundArgs),
    /// Bound curves against concentration (xi) for several number precisions.
    Curve(CurveArgs),
    /// Canonical phase density of a state and its window probability.
    Distribution(DistributionArgs),
    /// Full spectrum of the discrete kernel or of the continuum operator.
    Spectrum(SpectrumArgs),
}

#[derive(Args)]
struct AngleUnits {
    /// Read angle arguments in degrees instead of radians.
    #[arg(long)]
    degrees: bool,
}

impl AngleUnits {
    fn radians(&self, x: f64) -> f64 {
        if self.degrees {
            x.to_radians()
        } else {
            x
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
struct BoundArgs {
    /// Phase precision.
    #[arg(long, allow_negative_numbers = true)]
    dalpha: f64,
    /// Number precision.
    #[arg(long)]
    dk: usize,
    /// Cross-check with power iteration and the POVM attainment path.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t)]
    format: ReportFormat,
    #[command(flatten)]
    units: AngleUnits,
}

#[derive(Args)]
struct CurveArgs {
    /// Preset file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated number precisions; `inf` selects the continuum limit.
    #[arg(long, value_delimiter = ',')]
    dk: Option<Vec<String>>,
    #[arg(long)]
    xi_start: Option<f64>,
    #[arg(long)]
    xi_stop: Option<f64>,
    #[arg(long)]
    xi_step: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Leading key column.
    #[arg(long, value_enum)]
    x_axis: Option<XAxis>,
    /// Output file (standard output if omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write a gnuplot script for the CSV output.
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

#[derive(Args)]
struct DistributionArgs {
    /// State file: {"offset": n, "re": [...], "im": [...]}.
    #[arg(long)]
    state: PathBuf,
    /// Window centre.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Window width (defaults to pi, or 180 with --degrees).
    #[arg(long, allow_negative_numbers = true)]
    dalpha: Option<f64>,
    /// Number of sample angles on [-pi, pi).
    #[arg(long, default_value_t = 512)]
    points: usize,
    /// Density CSV; the window probability goes to `<output>.window.json`.
    #[arg(long, short)]
    output: PathBuf,
    #[command(flatten)]
    units: AngleUnits,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, allow_negative_numbers = true)]
    dalpha: Option<f64>,
    #[arg(long)]
    dk: Option<usize>,
    /// Concentration of the continuum operator.
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<f64>,
    /// Gauss-Legendre nodes for the continuum form.
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    units: AngleUnits,
}

fn run_bound(args: BoundArgs) -> Result<(), CliError> {
    let report = commands::bound(args.units.radians(args.dalpha), args.dk, args.verify)?;
    let out = open_output(None)?;
    match args.format {
        ReportFormat::Text => report.write_text(out),
        ReportFormat::Json => report.write_json(out),
    }
}

fn run_curve(args: CurveArgs) -> Result<(), CliError> {
    let preset = match &args.config {
        Some(path) => CurveConfig::load(path)?,
        None => CurveConfig::default(),
    };
    let defaults = CurveRequest::default();
    let dk = match args.dk {
        Some(list) => list
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<DkEntry>, _>>()?,
        None => preset.dk.unwrap_or(defaults.dk),
    };
    let request = CurveRequest {
        dk,
        xi_start: args
            .xi_start
            .or(preset.xi_start)
            .unwrap_or(defaults.xi_start),
        xi_stop: args.xi_stop.or(preset.xi_stop).unwrap_or(defaults.xi_stop),
        xi_step: args.xi_step.or(preset.xi_step).unwrap_or(defaults.xi_step),
        format: args.format.or(preset.format).unwrap_or_default(),
        x_axis: args.x_axis.or(preset.x_axis).unwrap_or_default(),
    };
    let output = args.output.or(preset.output);
    let gnuplot = args.gnuplot.or(preset.gnuplot);

    let rows = curve::compute_curve(&request)?;
    let flagged = rows
        .iter()
        .filter(|r| r.status == RowStatus::DalphaExceeds2pi)
        .count();
    if flagged > 0 {
        eprintln!(
            "warning: {flagged} grid points need dalpha > 2pi and were flagged, not computed"
        );
    }
    let sink = open_output(output.as_deref())?;
    match request.format {
        OutputFormat::Csv => curve::write_csv(&rows, request.x_axis, sink)?,
        OutputFormat::Json => curve::write_json(&rows, request.x_axis, sink)?,
    }
    if let Some(script) = gnuplot {
        let data = match (&output, request.format) {
            (Some(path), OutputFormat::Csv) => path.display().to_string(),
            _ => {
                return Err(CliError::Input(
                    "--gnuplot needs CSV written to a file (--output)".into(),
                ))
            }
        };
        std::fs::write(script, curve::gnuplot_script(&data, &request))?;
    }
    Ok(())
}

fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".window.json");
    PathBuf::from(name)
}

fn run_distribution(args: DistributionArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.state)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.state.display())))?;
    let state = commands::parse_state(&text)?;
    let width = args.dalpha.map(|w| args.units.radians(w)).unwrap_or(PI);
    let window = PhaseWindow::new(args.units.radians(args.alpha), width)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let (samples, probability) = commands::distribution(&state, &window, args.points)?;
    commands::write_distribution_csv(&samples, open_output(Some(&args.output))?)?;
    let mut sidecar = open_output(Some(&sidecar_path(&args.output)))?;
    serde_json::to_writer_pretty(&mut sidecar, &probability)?;
    sidecar.write_all(b"\n")?;
    sidecar.flush()?;
    Ok(())
}

fn run_spectrum(args: SpectrumArgs) -> Result<(), CliError> {
    let discrete = args.dalpha.is_some() || args.dk.is_some();
    let continuum = args.xi.is_some() || args.nodes.is_some();
    let request = match (discrete, continuum) {
        (true, false) => match (args.dalpha, args.dk) {
            (Some(dalpha), Some(dk)) => SpectrumRequest::Discrete {
                dalpha: args.units.radians(dalpha),
                dk,
            },
            _ => {
                return Err(CliError::Input(
                    "discrete form needs both --dalpha and --dk".into(),
                ))
            }
        },
        (false, true) => match args.xi {
            Some(xi) => SpectrumRequest::Continuum {
                xi,
                nodes: args.nodes.unwrap_or(64),
            },
            None => return Err(CliError::Input("continuum form needs --xi".into())),
        },
        _ => {
            return Err(CliError::Input(
                "give exactly one of --dalpha/--dk or --xi/--nodes".into(),
            ))
        }
    };
    let table = commands::spectrum(request)?;
    commands::write_spectrum_csv(&table, open_output(args.output.as_deref())?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| match cli.command {
        Command::Bound(a) => run_bound(a),
        Command::Curve(a) => run_curve(a),
        Command::Distribution(a) => run_distribution(a),
        Command::Spectrum(a) => run_spectrum(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
