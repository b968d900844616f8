use std::fmt;
use std::path::PathBuf;

use barycut::bench::{CutoffScale, TABLE_CUTOFFS};
use barycut::cutoff::Algorithm;
use barycut::error::Error;
use barycut::metric::{MetricSpec, Norm};
use barycut::scenarios::{DEFAULT_EXPECTED_POINTS, SCENARIO_IDS};
use clap::{ArgGroup, Parser};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Input(m) => write!(f, "input: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Parse { .. } => CliError::Input(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Solves a single instance by default; `--sweep`, `--report`, `--bench` and
/// `--generate` select the other modes.
#[derive(Parser, Debug)]
#[command(name = "barycut", version, about = "Barycenters with a distance cutoff and an optional empty location")]
#[command(group(ArgGroup::new("mode").args(["sweep", "bench", "report", "generate"])))]
#[command(group(ArgGroup::new("source").args(["input", "fixture"])))]
pub struct Cli {
    /// Points CSV ("x,y" or "x" per line, header optional).
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Scenario id(s) 1-6; comma-separated for --bench.
    #[arg(long, value_name = "IDS", value_delimiter = ',')]
    pub scenario: Vec<u8>,
    /// A built-in worked example as input.
    #[arg(long, value_name = "NAME")]
    pub fixture: Option<String>,
    /// Epsilon of the --fixture construction (its C is 1).
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    /// Norm: 1, 2 or inf.
    #[arg(long, default_value = "2")]
    pub p: String,
    /// Distance exponent [default: 1, or 2 with --bench].
    #[arg(long)]
    pub q: Option<f64>,
    /// Cutoff on powered distances; with --bench, a distance unless
    /// --cutoff-scale powered is given (comma-separated list allowed).
    #[arg(long = "C", value_name = "C", value_delimiter = ',')]
    pub cutoff: Vec<f64>,
    /// Empty-location cost per point, as a multiple of C.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value = "pruned")]
    pub algorithm: String,
    /// Print the breakpoints of the optimal value as a function of C.
    #[arg(long)]
    pub sweep: bool,
    /// Run the scenario benchmark.
    #[arg(long)]
    pub bench: bool,
    /// Print the reduction verdicts without solving.
    #[arg(long)]
    pub report: bool,
    /// Write the points of --scenario or --fixture as CSV.
    #[arg(long)]
    pub generate: bool,
    #[arg(long, default_value_t = 20)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Expected number of points per scenario pattern.
    #[arg(long, default_value_t = DEFAULT_EXPECTED_POINTS)]
    pub expected_points: f64,
    /// How --bench interprets C: radius (solver gets C^q) or powered.
    #[arg(long, default_value = "radius")]
    pub cutoff_scale: String,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Output file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Solve,
    Sweep,
    Report,
    Bench,
    Generate,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    File(PathBuf),
    Scenario(u8),
    Fixture(String, f64),
}

/// Validated flags.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Empty for --bench, which reads its scenarios from `scenarios`.
    pub source: Option<Source>,
    pub scenarios: Vec<u8>,
    pub metric: MetricSpec,
    pub cutoffs: Vec<f64>,
    pub alpha: Option<f64>,
    pub algorithm: Algorithm,
    pub replicates: usize,
    pub seed: u64,
    pub expected_points: f64,
    pub scale: CutoffScale,
    pub threads: usize,
    pub out: Option<PathBuf>,
}

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let command = if self.sweep {
            Command::Sweep
        } else if self.bench {
            Command::Bench
        } else if self.report {
            Command::Report
        } else if self.generate {
            Command::Generate
        } else {
            Command::Solve
        };
        let norm: Norm = self.p.parse().map_err(|_| usage(format!("--p must be 1, 2 or inf, got {}", self.p)))?;
        let q = self.q.unwrap_or(if command == Command::Bench { 2.0 } else { 1.0 });
        let metric = MetricSpec::new(norm, q)?;
        let algorithm: Algorithm = self.algorithm.parse()?;
        let scale: CutoffScale = self.cutoff_scale.parse()?;
        if self.threads == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        if let Some(a) = self.alpha {
            if !(a.is_finite() && a > 0.0 && a <= 1.0) {
                return Err(usage(format!("--alpha must lie in (0, 1], got {a}")));
            }
        }
        if let Some(c) = self.cutoff.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(usage(format!("--C must be positive, got {c}")));
        }
        if let Some(id) = self.scenario.iter().find(|id| !SCENARIO_IDS.contains(id)) {
            return Err(usage(format!("--scenario must be 1-6, got {id}")));
        }
        if !(self.expected_points.is_finite() && self.expected_points > 0.0) {
            return Err(usage("--expected-points must be positive"));
        }
        if algorithm == Algorithm::PrunedEmpty && self.alpha.is_none() && command != Command::Bench {
            return Err(usage("--algorithm pruned_empty needs --alpha"));
        }

        let source = match (self.input, self.fixture, self.scenario.as_slice()) {
            (Some(p), None, []) => Some(Source::File(p)),
            (None, Some(f), []) => Some(Source::Fixture(f, self.eps)),
            (None, None, [id]) => Some(Source::Scenario(*id)),
            (None, None, []) => None,
            (None, None, _) if command == Command::Bench => None,
            (None, None, _) => return Err(usage("only --bench accepts several scenarios")),
            _ => return Err(usage("give one of --input, --fixture, --scenario")),
        };

        let mut cutoffs = self.cutoff;
        match command {
            Command::Bench => {
                if source.as_ref().is_some_and(|s| !matches!(s, Source::Scenario(_))) {
                    return Err(usage("--bench draws its points from --scenario"));
                }
                if self.replicates == 0 {
                    return Err(usage("--replicates must be at least 1"));
                }
                if cutoffs.is_empty() {
                    cutoffs = TABLE_CUTOFFS.to_vec();
                }
            }
            Command::Generate => {
                if matches!(source, None | Some(Source::File(_))) {
                    return Err(usage("--generate needs --scenario or --fixture"));
                }
            }
            Command::Solve | Command::Report => {
                if source.is_none() {
                    return Err(usage("give one of --input, --fixture, --scenario"));
                }
                if cutoffs.len() != 1 {
                    return Err(usage("give exactly one --C"));
                }
            }
            Command::Sweep => {
                if source.is_none() {
                    return Err(usage("give one of --input, --fixture, --scenario"));
                }
            }
        }
        let scenarios = match (&command, self.scenario.is_empty()) {
            (Command::Bench, true) => vec![1],
            _ => self.scenario,
        };
        Ok(RunConfig {
            command,
            source,
            scenarios,
            metric,
            cutoffs,
            alpha: self.alpha,
            algorithm,
            replicates: self.replicates,
            seed: self.seed,
            expected_points: self.expected_points,
            scale,
            threads: self.threads,
            out: self.out,
        })
    }
}
