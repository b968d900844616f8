use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::Instant;

use barycut::bench::{format_table, run_bench_with, write_csv, BenchConfig};
use barycut::cutoff::{solve_cutoff, SolveOptions};
use barycut::io::{read_points_file, write_points};
use barycut::metric::{Point, PointCloud};
use barycut::oracle::{fixture_with, FixtureParams};
use barycut::reductions::analyze;
use barycut::scenarios::{generate, ScenarioSpec, PRNG_NAME};
use barycut::sensitivity::{compute_g_alpha, compute_g_with, SweepOptions};

use crate::config::{CliError, Command, RunConfig, Source};

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let mut out: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cfg.command {
        Command::Solve => solve(cfg, &mut out)?,
        Command::Sweep => sweep(cfg, &mut out)?,
        Command::Report => report(cfg, &mut out)?,
        Command::Bench => bench(cfg, &mut out)?,
        Command::Generate => write_points(&load(cfg)?, true, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn load(cfg: &RunConfig) -> Result<PointCloud, CliError> {
    Ok(match cfg.source.as_ref().expect("validated source") {
        Source::File(path) => read_points_file(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        Source::Scenario(id) => {
            generate(&ScenarioSpec::new(*id, cfg.seed)?.with_expected_points(cfg.expected_points)?)?
        }
        Source::Fixture(name, eps) => fixture_with(name, &FixtureParams { eps: *eps, ..FixtureParams::default() })?.cloud,
    })
}

fn xy(p: &Point) -> (String, String) {
    match p.coords() {
        [x] => (x.to_string(), String::new()),
        c => (c[0].to_string(), c[1].to_string()),
    }
}

fn solve(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let a = load(cfg)?;
    let c = cfg.cutoffs[0];
    let mut opts = SolveOptions::new(cfg.algorithm).with_threads(cfg.threads);
    opts.alpha = cfg.alpha;
    let t0 = Instant::now();
    let sol = solve_cutoff(&a, &cfg.metric, c, &opts)?;
    let wall = t0.elapsed().as_secs_f64();
    let rep = analyze(&a, &cfg.metric, c, cfg.alpha)?;
    let fired: Vec<&str> = rep.fired().map(|f| f.id()).collect();
    writeln!(out, "n={}", a.len())?;
    writeln!(out, "p={}", cfg.metric.norm())?;
    writeln!(out, "q={}", cfg.metric.q())?;
    writeln!(out, "C={c}")?;
    writeln!(out, "alpha={}", cfg.alpha.map_or("none".to_string(), |x| x.to_string()))?;
    writeln!(out, "algorithm={}", cfg.algorithm)?;
    writeln!(out, "location={}", sol.location)?;
    writeln!(out, "value={}", sol.value)?;
    writeln!(out, "active={}", sol.active.len())?;
    writeln!(out, "pairs_total={}", sol.stats.pairs_total)?;
    writeln!(out, "pairs_examined={}", sol.stats.pairs_examined)?;
    writeln!(out, "points_skipped={}", sol.stats.points_skipped)?;
    writeln!(out, "candidates_evaluated={}", sol.stats.candidates_evaluated)?;
    writeln!(out, "reductions={}", if fired.is_empty() { "none".to_string() } else { fired.join(",") })?;
    writeln!(out, "recommendation={}", rep.recommended)?;
    writeln!(out, "wall_time_s={wall:.6}")?;
    Ok(())
}

fn report(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let a = load(cfg)?;
    let rep = analyze(&a, &cfg.metric, cfg.cutoffs[0], cfg.alpha)?;
    writeln!(out, "n={}", a.len())?;
    for v in &rep.verdicts {
        writeln!(out, "{}={}", v.condition, v.fired)?;
        if let Some(w) = v.witness {
            writeln!(out, "{}.witness={w}", v.condition)?;
        }
    }
    writeln!(out, "recommendation={}", rep.recommended)?;
    Ok(())
}

fn sweep(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let a = load(cfg)?;
    let opts = SweepOptions { algorithm: cfg.algorithm, threads: cfg.threads };
    if opts.algorithm == barycut::cutoff::Algorithm::PrunedEmpty {
        return Err(CliError::Usage("--sweep solves without the empty location; use baseline or pruned".into()));
    }
    let g = compute_g_with(&a, &cfg.metric, &opts)?;
    let crossing = match cfg.alpha {
        Some(alpha) => compute_g_alpha(&g, alpha)?.crossing,
        None => None,
    };
    writeln!(out, "C_break,g_value,slope,bary_x,bary_y,kind")?;
    let mut pending = crossing;
    for s in &g.segments {
        if let Some(c0) = pending.filter(|&c0| c0 < s.start) {
            crossing_row(out, &g, c0, cfg.alpha.expect("crossing needs alpha"))?;
            pending = None;
        }
        let (x, y) = xy(&s.barycenter);
        writeln!(out, "{},{},{},{x},{y},segment", s.start, s.value, s.slope)?;
    }
    if let Some(c0) = pending {
        crossing_row(out, &g, c0, cfg.alpha.expect("crossing needs alpha"))?;
    }
    Ok(())
}

fn crossing_row(out: &mut dyn Write, g: &barycut::sensitivity::SensitivityCurve, c0: f64, alpha: f64) -> io::Result<()> {
    let slope = g.segments[g.segments.partition_point(|s| s.start <= c0).saturating_sub(1)].slope;
    let (x, y) = xy(&g.barycenter_at(c0));
    writeln!(out, "{c0},{},{slope},{x},{y},crossing", alpha * g.n as f64 * c0)
}

fn bench(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let bc = BenchConfig {
        scenarios: cfg.scenarios.clone(),
        cutoffs: cfg.cutoffs.clone(),
        replicates: cfg.replicates,
        alpha: cfg.alpha.unwrap_or(0.5),
        metric: cfg.metric,
        seed: cfg.seed,
        expected_points: cfg.expected_points,
        threads: cfg.threads,
        scale: cfg.scale,
    };
    eprintln!(
        "# prng={PRNG_NAME} seed={} replicates={} alpha={} p={} q={} cutoff_scale={}",
        bc.seed,
        bc.replicates,
        bc.alpha,
        bc.metric.norm(),
        bc.metric.q(),
        bc.scale.name()
    );
    let rows = run_bench_with(&bc, |r| {
        eprintln!("# scenario {} C={} {} done", r.scenario, r.cutoff, r.algorithm);
    })?;
    write_csv(&rows, &mut *out)?;
    eprint!("{}", format_table(&rows));
    Ok(())
}
