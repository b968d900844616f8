//! Skip fractions and relative running times of the three cutoff solvers on
//! random scenarios.
//!
//! For every `(scenario, C)` the same replicate clouds are solved by each
//! algorithm with the empty location priced at `α·C` per point. Reported per
//! algorithm:
//!
//! - `skip_fraction`: mean over replicates of `1 − evals / evals_baseline`,
//!   where `evals` counts objective evaluations at candidate locations;
//! - `rel_time`: summed wall time divided by the baseline's summed wall time
//!   (solves shorter than [`MIN_SAMPLE_SECONDS`] are repeated and averaged);
//! - `value_mean`: mean optimal value (identical across algorithms up to
//!   rounding).

use std::time::Instant;

use crate::cutoff::{solve_cutoff, Algorithm, SolveOptions};
use crate::error::{Error, Result};
use crate::metric::MetricSpec;
use crate::scenarios::{generate, ScenarioSpec, DEFAULT_EXPECTED_POINTS};

/// How a benchmark cutoff is handed to the solver.
///
/// The published comparison quotes cutoffs as distances (`q = 2` with
/// `C = 0.3` bounds squared distances at `0.09`); its skip fractions are only
/// reproduced under [`CutoffScale::Radius`], the default here.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CutoffScale {
    /// `C` bounds the powered distance `d^q` directly.
    Powered,
    /// `C` is a distance: the solver receives `C^q`.
    #[default]
    Radius,
}

impl CutoffScale {
    pub fn apply(self, c: f64, m: &MetricSpec) -> f64 {
        match self {
            CutoffScale::Powered => c,
            CutoffScale::Radius => m.pow(c),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CutoffScale::Powered => "powered",
            CutoffScale::Radius => "radius",
        }
    }
}

impl std::str::FromStr for CutoffScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<CutoffScale> {
        match s {
            "powered" => Ok(CutoffScale::Powered),
            "radius" => Ok(CutoffScale::Radius),
            _ => Err(Error::InvalidParameter(format!("unknown cutoff scale {s:?}"))),
        }
    }
}

/// The cutoffs of the published comparison.
pub const TABLE_CUTOFFS: [f64; 8] = [0.01, 0.02, 0.03, 0.05, 0.075, 0.1, 0.2, 0.3];

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub scenarios: Vec<u8>,
    pub cutoffs: Vec<f64>,
    pub replicates: usize,
    pub alpha: f64,
    pub metric: MetricSpec,
    pub seed: u64,
    pub expected_points: f64,
    pub threads: usize,
    pub scale: CutoffScale,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            scenarios: vec![1],
            cutoffs: TABLE_CUTOFFS.to_vec(),
            replicates: 20,
            alpha: 0.5,
            metric: MetricSpec::squared_euclidean(),
            seed: 0,
            expected_points: DEFAULT_EXPECTED_POINTS,
            threads: 1,
            scale: CutoffScale::Radius,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub scenario: u8,
    /// The cutoff as configured, before scaling.
    pub cutoff: f64,
    pub algorithm: Algorithm,
    pub skip_fraction: f64,
    pub rel_time: f64,
    pub value_mean: f64,
    /// Candidate evaluations summed over replicates.
    pub candidates: u64,
    /// Wall time summed over replicates.
    pub seconds: f64,
}

/// Shortest timed sample; faster solves are repeated and averaged.
pub const MIN_SAMPLE_SECONDS: f64 = 0.02;

const MAX_REPEATS: u32 = 1000;

fn timed_solve<T>(mut solve: impl FnMut() -> Result<T>) -> Result<(T, f64)> {
    let t0 = Instant::now();
    let mut repeats = 1;
    let mut out = solve()?;
    while t0.elapsed().as_secs_f64() < MIN_SAMPLE_SECONDS && repeats < MAX_REPEATS {
        out = solve()?;
        repeats += 1;
    }
    Ok((out, t0.elapsed().as_secs_f64() / f64::from(repeats)))
}

struct Tally {
    skip: f64,
    seconds: f64,
    value: f64,
    candidates: u64,
}

/// Runs the grid `scenarios × cutoffs`, emitting rows in that order with the
/// algorithms in [`Algorithm::ALL`] order.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    run_bench_with(cfg, |_| {})
}

/// Like [`run_bench`], calling `progress` with each row as it completes.
pub fn run_bench_with(cfg: &BenchConfig, mut progress: impl FnMut(&BenchRow)) -> Result<Vec<BenchRow>> {
    if cfg.replicates == 0 {
        return Err(Error::InvalidParameter("at least one replicate is needed".into()));
    }
    let specs = cfg
        .scenarios
        .iter()
        .map(|&id| ScenarioSpec::new(id, cfg.seed)?.with_expected_points(cfg.expected_points))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for spec in &specs {
        let clouds = (0..cfg.replicates as u64)
            .map(|r| generate(&spec.replicate(r)))
            .collect::<Result<Vec<_>>>()?;
        for &c in &cfg.cutoffs {
            let cutoff = cfg.scale.apply(c, &cfg.metric);
            let opts = Algorithm::ALL.map(|alg| {
                SolveOptions::new(alg).with_alpha(cfg.alpha).with_threads(cfg.threads)
            });
            // Warm-up, excluded from the timings.
            for o in &opts {
                solve_cutoff(&clouds[0], &cfg.metric, cutoff, o)?;
            }
            let mut tallies: Vec<Tally> = Algorithm::ALL
                .iter()
                .map(|_| Tally { skip: 0.0, seconds: 0.0, value: 0.0, candidates: 0 })
                .collect();
            for cloud in &clouds {
                let mut base_evals = 0;
                for (k, o) in opts.iter().enumerate() {
                    let (sol, dt) = timed_solve(|| solve_cutoff(cloud, &cfg.metric, cutoff, o))?;
                    let evals = sol.stats.candidates_evaluated;
                    if o.algorithm == Algorithm::Baseline {
                        base_evals = evals;
                    }
                    let t = &mut tallies[k];
                    t.skip += if base_evals == 0 { 0.0 } else { 1.0 - evals as f64 / base_evals as f64 };
                    t.seconds += dt;
                    t.value += sol.value;
                    t.candidates += evals;
                }
            }
            let base_seconds = tallies[0].seconds;
            let reps = cfg.replicates as f64;
            for (alg, t) in Algorithm::ALL.iter().zip(&tallies) {
                let row = BenchRow {
                    scenario: spec.id,
                    cutoff: c,
                    algorithm: *alg,
                    skip_fraction: t.skip / reps,
                    rel_time: if base_seconds > 0.0 { t.seconds / base_seconds } else { 1.0 },
                    value_mean: t.value / reps,
                    candidates: t.candidates,
                    seconds: t.seconds,
                };
                progress(&row);
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// Header of [`write_csv`].
pub const CSV_HEADER: [&str; 6] = ["scenario", "C", "algorithm", "skip_fraction", "rel_time", "value_mean"];

pub fn write_csv<W: std::io::Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.scenario.to_string(),
            r.cutoff.to_string(),
            r.algorithm.name().to_string(),
            format!("{:.6}", r.skip_fraction),
            format!("{:.6}", r.rel_time),
            format!("{:.9}", r.value_mean),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidParameter(format!("{other:?}")),
    }
}

/// Triples `pruned/pruned_empty/baseline` per `(scenario, C)` in the layout of
/// the published table: one line per cutoff, skip fractions then times.
pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    for chunk in rows.chunks(Algorithm::ALL.len()) {
        let get = |alg: Algorithm| chunk.iter().find(|r| r.algorithm == alg).expect("complete chunk");
        let (b, p, e) = (get(Algorithm::Baseline), get(Algorithm::Pruned), get(Algorithm::PrunedEmpty));
        out.push_str(&format!(
            "scenario {} C={:<6} skipped {:.3}/{:.3}/{:.0}  time {:.3}/{:.3}/{:.0}\n",
            b.scenario, b.cutoff, p.skip_fraction, e.skip_fraction, b.skip_fraction, p.rel_time, e.rel_time, b.rel_time
        ));
    }
    out
}
