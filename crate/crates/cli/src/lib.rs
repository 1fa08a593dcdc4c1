//! Command-line front end: parse flags into an experiment sweep, run it, and
//! write the CSV table and an optional SVG plot.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use thiserror::Error;

use epr_core::experiment::{full_turn, DEFAULT_SWEEP_STEPS, DEFAULT_TRIALS};
use epr_core::sampling::DEFAULT_SEED;
use epr_core::{
    sweep_b, Angle, ExperimentConfig, MeasurementOrder, Mode, ProjectionRule, SweepResult,
};

pub mod plot;

pub use plot::render_plot;

pub const DEFAULT_CSV_PATH: &str = "./sweep.csv";
pub const CSV_HEADER: [&str; 3] = ["b_radians", "correlation_estimate", "correlation_predicted"];

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Clap(#[from] clap::Error),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Simulation(#[from] epr_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => EXIT_OK,
            CliError::Clap(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Simulation(_) | CliError::Io { .. } | CliError::Csv { .. } => EXIT_RUNTIME,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Joint,
    Separated,
}

fn parse_rule(s: &str) -> Result<ProjectionRule, String> {
    s.parse().map_err(|e: epr_core::Error| e.to_string())
}

fn parse_order(s: &str) -> Result<MeasurementOrder, String> {
    s.parse().map_err(|e: epr_core::Error| e.to_string())
}

/// Sweep the B-side measurement angle of a simulated EPR experiment on the
/// singlet state and compare the estimated correlation with its prediction.
#[derive(Debug, Parser)]
#[command(name = "epr-sim", version, allow_negative_numbers = true)]
struct Args {
    /// Sampling mode
    #[arg(long, value_enum)]
    mode: ModeArg,

    /// Projection rule for separated mode: luders | vonneumann | null
    #[arg(long, value_parser = parse_rule)]
    rule: Option<ProjectionRule>,

    /// Measurement order for separated mode: afirst | bfirst | random [default: afirst]
    #[arg(long, value_parser = parse_order)]
    order: Option<MeasurementOrder>,

    /// A-side measurement angle
    #[arg(long = "a", default_value_t = 0.0)]
    a: f64,

    /// First B angle of the sweep [default: 0]
    #[arg(long)]
    b_start: Option<f64>,

    /// Last B angle of the sweep [default: 2π]
    #[arg(long)]
    b_end: Option<f64>,

    /// Number of evenly spaced B angles, endpoints included
    #[arg(long, default_value_t = DEFAULT_SWEEP_STEPS)]
    steps: usize,

    /// Emissions per sweep point
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Read --a, --b-start and --b-end as degrees instead of radians
    #[arg(long)]
    degrees: bool,

    #[arg(long, default_value = DEFAULT_CSV_PATH)]
    csv: PathBuf,

    /// Write an SVG plot here; omitted or empty means no plot
    #[arg(long)]
    plot: Option<OsString>,
}

/// A fully validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRequest {
    pub config: ExperimentConfig,
    pub b_start: Angle,
    pub b_end: Angle,
    pub steps: usize,
    pub csv_path: PathBuf,
    pub plot_path: Option<PathBuf>,
}

impl RunRequest {
    /// Flags that parse back to this exact request (angles in radians).
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec!["--mode".to_owned(), self.config.mode.name().to_owned()];
        if let Mode::Separated { rule, order } = self.config.mode {
            args.extend([
                "--rule".into(),
                rule.to_string(),
                "--order".into(),
                order.to_string(),
            ]);
        }
        args.extend([
            "--a".into(),
            format!("{:?}", self.config.a.radians()),
            "--b-start".into(),
            format!("{:?}", self.b_start.radians()),
            "--b-end".into(),
            format!("{:?}", self.b_end.radians()),
            "--steps".into(),
            self.steps.to_string(),
            "--trials".into(),
            self.config.n_trials.to_string(),
            "--seed".into(),
            self.config.seed.to_string(),
            "--csv".into(),
            self.csv_path.display().to_string(),
        ]);
        if let Some(plot) = &self.plot_path {
            args.extend(["--plot".into(), plot.display().to_string()]);
        }
        args
    }

    pub fn run(&self) -> Result<SweepResult, CliError> {
        Ok(sweep_b(&self.config, self.b_start, self.b_end, self.steps)?)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses flags (without the program name) into a validated request.
pub fn parse_args<I, T>(argv: I) -> Result<RunRequest, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(
        std::iter::once(OsString::from("epr-sim")).chain(argv.into_iter().map(Into::into)),
    )?;

    let mode = match (args.mode, args.rule, args.order) {
        (ModeArg::Joint, Some(_), _) => {
            return Err(usage("--rule cannot be combined with --mode joint"))
        }
        (ModeArg::Joint, _, Some(_)) => {
            return Err(usage("--order cannot be combined with --mode joint"))
        }
        (ModeArg::Joint, None, None) => Mode::Joint,
        (ModeArg::Separated, None, _) => return Err(usage("--mode separated requires --rule")),
        (ModeArg::Separated, Some(rule), order) => Mode::Separated {
            rule,
            order: order.unwrap_or(MeasurementOrder::AFirst),
        },
    };

    let to_angle = |flag: &str, value: f64| {
        let angle = if args.degrees {
            Angle::from_degrees(value)
        } else {
            Angle::new(value)
        };
        angle.map_err(|e| usage(format!("--{flag}: {e}")))
    };
    let (default_start, default_end) = full_turn();
    let a = to_angle("a", args.a)?;
    let b_start = args
        .b_start
        .map(|v| to_angle("b-start", v))
        .transpose()?
        .unwrap_or(default_start);
    let b_end = args
        .b_end
        .map(|v| to_angle("b-end", v))
        .transpose()?
        .unwrap_or(default_end);

    if args.steps < 2 {
        return Err(usage(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }

    Ok(RunRequest {
        config: ExperimentConfig {
            mode,
            a,
            b: b_start,
            n_trials: args.trials,
            seed: args.seed,
        },
        b_start,
        b_end,
        steps: args.steps,
        csv_path: args.csv,
        plot_path: args.plot.filter(|p| !p.is_empty()).map(PathBuf::from),
    })
}

/// Rounds to 9 significant digits and prints the shortest decimal that
/// reads back as that rounded value; zero is always `0.0`.
pub fn format_sig9(x: f64) -> String {
    let rounded: f64 = format!("{x:.8e}")
        .parse()
        .expect("float formatting round-trips");
    if rounded == 0.0 {
        "0.0".to_owned()
    } else {
        format!("{rounded:?}")
    }
}

pub fn write_csv(result: &SweepResult, path: &Path) -> Result<(), CliError> {
    let csv_err = |source| CliError::Csv {
        path: path.to_owned(),
        source,
    };
    let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
    writer.write_record(CSV_HEADER).map_err(csv_err)?;
    for ((b, est), pred) in result
        .b_values
        .iter()
        .zip(&result.estimates)
        .zip(&result.predictions)
    {
        writer
            .write_record([
                format_sig9(b.radians()),
                format_sig9(*est),
                format_sig9(*pred),
            ])
            .map_err(csv_err)?;
    }
    writer.flush().map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Plain-text report of a finished sweep, ending with the flags that reproduce it.
pub fn summary(request: &RunRequest, result: &SweepResult) -> String {
    let (rule, order) = match result.mode {
        Mode::Joint => ("-".to_owned(), "-".to_owned()),
        Mode::Separated { rule, order } => (rule.to_string(), order.to_string()),
    };
    let mut out = String::new();
    let _ = writeln!(out, "mode: {}", result.mode.name());
    let _ = writeln!(out, "rule: {rule}");
    let _ = writeln!(out, "order: {order}");
    let _ = writeln!(out, "a: {} rad", result.a.radians());
    let _ = writeln!(
        out,
        "b: {} .. {} rad, {} points",
        request.b_start.radians(),
        request.b_end.radians(),
        result.len()
    );
    let _ = writeln!(out, "trials per point: {}", result.n_trials);
    let _ = writeln!(out, "seed: {}", result.seed);
    let _ = writeln!(
        out,
        "max |estimate - prediction|: {:.6}",
        result.max_abs_deviation()
    );
    let _ = writeln!(out, "csv: {}", request.csv_path.display());
    if let Some(plot) = &request.plot_path {
        let _ = writeln!(out, "plot: {}", plot.display());
    }
    let _ = writeln!(out, "flags: {}", request.to_args().join(" "));
    out
}

/// Parses, runs and writes outputs; the summary is returned for printing.
pub fn execute<I, T>(argv: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let request = parse_args(argv)?;
    let result = request.run()?;
    write_csv(&result, &request.csv_path)?;
    if let Some(plot) = &request.plot_path {
        render_plot(&result, plot)?;
    }
    Ok(summary(&request, &result))
}

/// Entry point used by the binary; returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match execute(argv) {
        Ok(report) => {
            print!("{report}");
            EXIT_OK
        }
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            CliError::Clap(e).exit_code()
        }
        Err(e) => {
            eprintln!("epr-sim: {e}");
            e.exit_code()
        }
    }
}
