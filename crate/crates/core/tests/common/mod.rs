#![allow(dead_code)]

use barycut::metric::{diameter, MetricSpec, Norm, PointCloud};
use rand::Rng;

pub const METRICS: [(Norm, f64); 3] = [(Norm::L2, 1.0), (Norm::L2, 2.0), (Norm::L1, 1.0)];
pub const ALPHAS: [f64; 3] = [0.25, 0.5, 0.9];

#[derive(Clone, Debug)]
pub struct Instance {
    pub cloud: PointCloud,
    pub metric: MetricSpec,
    pub cutoff: f64,
    pub alpha: f64,
}

/// `n` uniform in `[lo, hi]`, points uniform in the unit square, a metric
/// from [`METRICS`], `C` log-uniform in `[0.01, 2·diam^q]`, `α` from [`ALPHAS`].
pub fn random_instance<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> Instance {
    let n = rng.random_range(lo..=hi);
    let xy: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
    let cloud = PointCloud::from_xy(&xy).unwrap();
    let (norm, q) = METRICS[rng.random_range(0..METRICS.len())];
    let metric = MetricSpec::new(norm, q).unwrap();
    let top = (2.0 * metric.pow(diameter(&cloud, &metric))).max(0.02);
    let cutoff = (0.01f64.ln() + rng.random::<f64>() * (top.ln() - 0.01f64.ln())).exp();
    let alpha = ALPHAS[rng.random_range(0..ALPHAS.len())];
    Instance { cloud, metric, cutoff, alpha }
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Every fired reduction checked against the oracles; returns the violations.
pub fn reduction_violations(inst: &Instance) -> Vec<String> {
    use barycut::classic::solve_classic;
    use barycut::cutoff::{solve_cutoff, Algorithm, SolveOptions};
    use barycut::oracle::oracle_subsets;
    use barycut::reductions::{check_diam_shortcuts, check_theorem_2r0, check_tiny_C, decide_empty, DiamVerdict, EmptyVerdict};

    let (a, m, c, alpha) = (&inst.cloud, &inst.metric, inst.cutoff, inst.alpha);
    let n = a.len() as f64;
    let mut out = Vec::new();
    let z = solve_classic(a, m).unwrap().value;
    let zc = oracle_subsets(a, m, c, None).unwrap().value;
    let scale = z.abs().max(1.0);
    match check_diam_shortcuts(a, m, c).unwrap() {
        DiamVerdict::ClassicEqualsCutoff { solution_sets_equal } => {
            if (z - zc).abs() > 1e-9 * scale {
                out.push(format!("classic_equals_cutoff: Z*={z} Z*_C={zc}"));
            }
            if solution_sets_equal {
                let s = solve_cutoff(a, m, c, &SolveOptions::new(Algorithm::Pruned)).unwrap();
                let x = s.location.point().unwrap();
                let classic_at_x = barycut::metric::objective(&x.into(), a, m, None).unwrap();
                if s.active.len() != a.len() || (classic_at_x - z).abs() > 1e-9 * scale {
                    out.push(format!("solution sets: |active|={} value at x={classic_at_x}", s.active.len()));
                }
            }
        }
        DiamVerdict::StrictGap => {
            if zc >= z - 1e-12 * scale {
                out.push(format!("strict_gap: Z*={z} Z*_C={zc}"));
            }
        }
        DiamVerdict::Inconclusive => {}
    }
    if check_theorem_2r0(a, m, c).unwrap() && (z - zc).abs() > 1e-9 * scale {
        out.push(format!("enclosing_ball: Z*={z} Z*_C={zc}"));
    }
    if let Some(s) = check_tiny_C(a, m, c).unwrap() {
        if !close(s.value, zc, 1e-9) {
            out.push(format!("tiny_C: {} vs {zc}", s.value));
        }
    }
    let with_empty = oracle_subsets(a, m, c, Some(alpha)).unwrap();
    let e = n * alpha * c;
    match decide_empty(a, m, c, alpha).unwrap() {
        EmptyVerdict::EmptyOptimal => {
            if !close(with_empty.value, e, 1e-9) {
                out.push(format!("empty_optimal: oracle {} vs nαC {e}", with_empty.value));
            }
        }
        EmptyVerdict::EmptyExcluded => {
            if with_empty.is_empty() || with_empty.value >= e {
                out.push(format!("empty_excluded: oracle {} vs nαC {e}", with_empty.value));
            }
        }
        EmptyVerdict::Unknown => {}
    }
    out
}

/// Checks one sensitivity curve at `probes` random cutoffs; returns the
/// violations.
pub fn curve_violations<R: Rng>(rng: &mut R, inst: &Instance, probes: usize) -> Vec<String> {
    use barycut::cutoff::{solve_cutoff, Algorithm, SolveOptions};
    use barycut::sensitivity::compute_g;

    let (a, m) = (&inst.cloud, &inst.metric);
    let g = compute_g(a, m).unwrap();
    let n = a.len();
    let mut out = Vec::new();
    if g.segments[0].slope != n - 1 || g.segments[0].start != 0.0 {
        out.push(format!("first segment {:?}", g.segments[0]));
    }
    for w in g.segments.windows(2) {
        if w[1].slope >= w[0].slope {
            out.push(format!("slopes {} then {}", w[0].slope, w[1].slope));
        }
        let left = w[0].value + w[0].slope as f64 * (w[1].start - w[0].start);
        if (left - w[1].value).abs() > 1e-9 * w[1].value.abs().max(1.0) {
            out.push(format!("jump at {}: {left} vs {}", w[1].start, w[1].value));
        }
    }
    if g.solver_calls > n.saturating_sub(1) {
        out.push(format!("{} solver calls for n={n}", g.solver_calls));
    }
    let top = 2.0 * m.pow(diameter(a, m)).max(1e-3);
    for _ in 0..probes {
        let c = (1e-3f64.ln() + rng.random::<f64>() * (top.ln() - 1e-3f64.ln())).exp();
        let want = solve_cutoff(a, m, c, &SolveOptions::new(Algorithm::Pruned)).unwrap().value;
        let got = g.evaluate(c);
        if (got - want).abs() > 1e-7 * want.abs().max(1e-300) && (got - want).abs() > 1e-12 {
            out.push(format!("g({c}) = {got}, solver {want}"));
        }
    }
    out
}
