//! The `jmspin` command line.
//!
//! Angles are given in degrees and converted once at parse time. Vectors are
//! comma-separated triples. CSV output is locale-independent with LF line
//! endings and fixed 9-decimal precision, so identical flags give
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::{BinaryObservable, BlochVector, ProblemInstance};
use crate::boundary::{self, Metric};
use crate::distances;
use crate::error::Error;
use crate::measurability::{self, FeasibilityOptions, DEFAULT_SEED, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const FIGURE_THETAS_DEG: [f64; 3] = [30.0, 60.0, 90.0];
pub const FIGURE_POINTS: usize = 200;

#[derive(Debug, Parser)]
#[command(
    name = "jmspin",
    version,
    about = "Approximate joint measurability of two qubit spin observables"
)]
pub struct Cli {
    /// Feasibility tolerance on the joint-POVM slack.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Seed for the randomized solver starts.
    #[arg(long, global = true, env = "JMSPIN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Iteration budget per simplex run of the feasibility solver.
    #[arg(long, global = true, default_value_t = 2000)]
    pub max_iterations: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether two binary observables are jointly measurable.
    Check {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        a: BlochVector,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        b: BlochVector,
        /// Also print the four joint effects in Pauli coordinates.
        #[arg(long)]
        witness: bool,
    },
    /// Distances of an approximation A from the sharp spin observable along p.
    Distance {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        a: BlochVector,
        /// Direction of the sharp observable.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector, default_value = "0,0,1")]
        p: BlochVector,
        /// Bloch vector of a state for the state-dependent rms noise.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        state: Option<BlochVector>,
    },
    /// Emit one boundary curve as CSV.
    Boundary {
        /// Angle between the spin directions, in degrees.
        #[arg(long)]
        theta: f64,
        #[arg(long, value_enum, default_value_t = MetricArg::Statistical)]
        metric: MetricArg,
        #[arg(long, default_value_t = FIGURE_POINTS)]
        points: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether a pair of distances is attainable by jointly measurable approximations.
    Region {
        #[arg(long)]
        theta: f64,
        #[arg(long, value_enum, default_value_t = MetricArg::Statistical)]
        metric: MetricArg,
        #[arg(long)]
        d1: f64,
        #[arg(long)]
        d2: f64,
    },
    /// Write the curves for 30°, 60° and 90° plus their symmetric markers.
    FigureData {
        #[arg(value_enum)]
        which: Figure,
        #[arg(long, default_value_t = FIGURE_POINTS)]
        points: usize,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Statistical,
    Rms,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Statistical => Metric::Statistical,
            MetricArg::Rms => Metric::Rms,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Statistical-distance curves.
    Fig2,
    /// Rms-distance curves.
    Fig4,
}

impl Figure {
    pub fn metric(self) -> Metric {
        match self {
            Figure::Fig2 => Metric::Statistical,
            Figure::Fig4 => Metric::Rms,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig4 => "fig4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Check,
    Distance,
    Boundary,
    Region,
    FigureData,
}

/// Validated settings shared by the curve-producing commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub theta_deg: f64,
    pub metric: Metric,
    pub n_points: usize,
    pub tol: f64,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.theta_deg > 0.0 && self.theta_deg <= 90.0) {
            return Err(CliError::invalid(format!(
                "--theta must lie in (0, 90] degrees, got {}",
                self.theta_deg
            )));
        }
        if self.n_points < 2 {
            return Err(CliError::invalid(format!(
                "--points must be at least 2, got {}",
                self.n_points
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(CliError::invalid(format!(
                "--tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }

    pub fn instance(&self) -> Result<ProblemInstance, CliError> {
        ProblemInstance::from_degrees(self.theta_deg).map_err(CliError::from)
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    pub fn io(context: &str, err: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{context}: {err}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::SolverDidNotConverge(_) | Error::NotJointlyMeasurable(_) => EXIT_SOLVER,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

/// Parses `x,y,z`, ignoring whitespace.
pub fn parse_vector(s: &str) -> Result<BlochVector, String> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let parts: Vec<&str> = cleaned.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got '{s}'"));
    }
    let mut xyz = [0.0; 3];
    for (slot, part) in xyz.iter_mut().zip(&parts) {
        *slot = part
            .parse::<f64>()
            .map_err(|e| format!("bad component '{part}' in '{s}': {e}"))?;
        if !slot.is_finite() {
            return Err(format!("non-finite component in '{s}'"));
        }
    }
    Ok(BlochVector::new(xyz[0], xyz[1], xyz[2]))
}

fn fmt_fixed(x: f64) -> String {
    // avoid "-0.000000000"
    let s = format!("{x:.9}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn boundary_csv(config: &RunConfig) -> Result<String, CliError> {
    config.validate()?;
    let instance = config.instance()?;
    let curve = boundary::boundary_curve(&instance, config.metric, config.n_points)?;
    let mut out = String::from("theta_deg,metric,d1,d2\n");
    for pt in &curve {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            config.theta_deg,
            config.metric,
            fmt_fixed(pt.d1),
            fmt_fixed(pt.d2)
        );
    }
    Ok(out)
}

/// Symmetric point of a figure: the symmetric optimum for the statistical metric,
/// `ω = θ/2` for the rms metric.
pub fn symmetric_marker(instance: &ProblemInstance, metric: Metric) -> (f64, f64) {
    match metric {
        Metric::Statistical => {
            let d = boundary::symmetric_optimum(instance).d_sym;
            (d, d)
        }
        Metric::Rms => {
            let d = 2.0 * (0.25 * instance.theta()).sin();
            (d, d)
        }
    }
}

pub fn figure_csv(
    which: Figure,
    theta_deg: f64,
    n_points: usize,
    tol: f64,
    seed: u64,
) -> Result<String, CliError> {
    let config = RunConfig {
        command: CommandKind::FigureData,
        theta_deg,
        metric: which.metric(),
        n_points,
        tol,
        seed,
        output_path: None,
    };
    config.validate()?;
    let instance = config.instance()?;
    let curve = boundary::boundary_curve(&instance, config.metric, n_points)?;
    let mut out = String::from("theta_deg,metric,kind,d1,d2\n");
    for pt in &curve {
        let _ = writeln!(
            out,
            "{},{},curve,{},{}",
            theta_deg,
            config.metric,
            fmt_fixed(pt.d1),
            fmt_fixed(pt.d2)
        );
    }
    let (m1, m2) = symmetric_marker(&instance, config.metric);
    let _ = writeln!(
        out,
        "{},{},marker,{},{}",
        theta_deg,
        config.metric,
        fmt_fixed(m1),
        fmt_fixed(m2)
    );
    Ok(out)
}

pub fn figure_file_name(which: Figure, theta_deg: f64) -> String {
    format!("{}_theta{}.csv", which.name(), theta_deg)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(&format!("writing {}", path.display()), e))
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io("writing standard output", e))
}

fn check(
    cli: &Cli,
    alpha: f64,
    a: BlochVector,
    beta: f64,
    b: BlochVector,
    witness: bool,
) -> Result<String, CliError> {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(CliError::invalid(format!(
            "--tol must be positive, got {}",
            cli.tol
        )));
    }
    let obs_a = BinaryObservable::new(alpha, a)?;
    let obs_b = BinaryObservable::new(beta, b)?;
    let opts = FeasibilityOptions {
        tol: cli.tol,
        seed: cli.seed,
        max_iterations: cli.max_iterations,
        ..FeasibilityOptions::default()
    };
    let margin = measurability::busch_margin(a, b);
    let (verdict, result) = measurability::decide(&obs_a, &obs_b, &opts)?;

    let mut out = String::new();
    let _ = writeln!(out, "verdict: {verdict}");
    let _ = writeln!(out, "busch_margin: {}", fmt_margin(margin));
    let _ = writeln!(out, "feasibility_slack: {}", fmt_margin(result.slack));
    if witness {
        match result.witness {
            Some(w) => {
                for (name, g) in ["G++", "G+-", "G-+", "G--"].iter().zip(w.effects()) {
                    let _ = writeln!(
                        out,
                        "{name}: scalar={:.12} vec={:.12} min_eigenvalue={:.3e}",
                        g.scalar,
                        g.vec,
                        g.min_eigenvalue()
                    );
                }
            }
            None => {
                let _ = writeln!(out, "witness: none");
            }
        }
    }
    Ok(out)
}

fn fmt_margin(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn distance(
    alpha: f64,
    a: BlochVector,
    p: BlochVector,
    state: Option<BlochVector>,
) -> Result<String, CliError> {
    let sharp_p = BinaryObservable::sharp(p)?;
    let obs = BinaryObservable::new(alpha, a)?;
    let report = distances::deviation_report(&sharp_p, &obs)?;
    let mut out = String::new();
    let _ = writeln!(out, "worst_case_deviation: {:.12}", report.worst);
    let _ = writeln!(out, "average_deviation: {:.12}", report.average);
    match report.statistical {
        Some(d) => {
            let _ = writeln!(out, "statistical_distance: {d:.12}");
        }
        None => {
            let _ = writeln!(out, "statistical_distance: undefined (alpha != 1)");
        }
    }
    let _ = writeln!(
        out,
        "rms_distance: {:.12}",
        distances::rms_distance(&sharp_p, &obs)?
    );
    if let Some(r) = state {
        let _ = writeln!(
            out,
            "rms_noise: {:.12}",
            distances::rms_noise(&sharp_p, &obs, r)?
        );
    }
    if let Ok((accuracy, unsharpness)) = distances::rms_decomposition(&sharp_p, &obs) {
        let _ = writeln!(out, "rms_accuracy_part: {accuracy:.12}");
        let _ = writeln!(out, "rms_unsharpness_part: {unsharpness:.12}");
    }
    Ok(out)
}

/// Runs a parsed command line, writing verdicts and CSV (when no output file
/// is given) to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Check {
            alpha,
            a,
            beta,
            b,
            witness,
        } => emit(stdout, &check(cli, *alpha, *a, *beta, *b, *witness)?),
        Command::Distance { alpha, a, p, state } => {
            emit(stdout, &distance(*alpha, *a, *p, *state)?)
        }
        Command::Boundary {
            theta,
            metric,
            points,
            out,
        } => {
            let config = RunConfig {
                command: CommandKind::Boundary,
                theta_deg: *theta,
                metric: (*metric).into(),
                n_points: *points,
                tol: cli.tol,
                seed: cli.seed,
                output_path: out.clone(),
            };
            let csv = boundary_csv(&config)?;
            match &config.output_path {
                Some(path) => write_file(path, &csv),
                None => emit(stdout, &csv),
            }
        }
        Command::Region {
            theta,
            metric,
            d1,
            d2,
        } => {
            let config = RunConfig {
                command: CommandKind::Region,
                theta_deg: *theta,
                metric: (*metric).into(),
                n_points: 2,
                tol: cli.tol,
                seed: cli.seed,
                output_path: None,
            };
            config.validate()?;
            if !(d1.is_finite() && d2.is_finite()) {
                return Err(CliError::invalid("distances must be finite"));
            }
            let instance = config.instance()?;
            let inside = boundary::region_membership(&instance, *d1, *d2, config.metric);
            let edge = boundary::boundary_value(&instance, d1.max(0.0), config.metric)?;
            let mut out = String::new();
            let _ = writeln!(out, "{}", if inside { "inside" } else { "outside" });
            let _ = writeln!(out, "boundary_d2: {}", fmt_fixed(edge));
            emit(stdout, &out)
        }
        Command::FigureData { which, points, out } => {
            fs::create_dir_all(out)
                .map_err(|e| CliError::io(&format!("creating {}", out.display()), e))?;
            for theta_deg in FIGURE_THETAS_DEG {
                let csv = figure_csv(*which, theta_deg, *points, cli.tol, cli.seed)?;
                write_file(&out.join(figure_file_name(*which, theta_deg)), &csv)?;
            }
            Ok(())
        }
    }
}
