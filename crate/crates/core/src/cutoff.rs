//! Exact solvers for the barycenter problem with cutoff, with and without the
//! empty location.
//!
//! An optimal location `ξ` solves the classic problem on its own active set,
//! so it suffices to enumerate candidate active sets. In the plane every
//! active set fits in a ball of radius `r = C^(1/q)` pinned by two points, which
//! leaves `O(n²)` candidates: for each close pair, the (at most two) balls
//! through both points and the four sets obtained by keeping or dropping the
//! two pinning points. Under ℓ1 with `q = 1` the candidates are grid points
//! instead.
//!
//! [`Algorithm::Pruned`] drops a whole row `i` of the pair loop once the
//! points far from `a_i` alone cost at least the incumbent value;
//! [`Algorithm::PrunedEmpty`] starts that incumbent at the price `n·α·C` of
//! the empty location.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::classic::{self, Method};
use crate::error::{Error, Result};
use crate::index::NeighborIndex;
use crate::metric::{validate_alpha, validate_cutoff, ExtendedLocation, MetricSpec, Norm, Point, PointCloud};

/// Rows handed to the thread pool per batch when running in parallel.
const PARALLEL_CHUNK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Full candidate enumeration.
    Baseline,
    /// Enumeration with far-point row pruning.
    Pruned,
    /// Row pruning seeded with the empty location; requires `α`.
    PrunedEmpty,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Baseline, Algorithm::Pruned, Algorithm::PrunedEmpty];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Baseline => "baseline",
            Algorithm::Pruned => "pruned",
            Algorithm::PrunedEmpty => "pruned_empty",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    /// Empty-solution factor. Optional for the first two algorithms, in
    /// which case the empty location is compared after the search.
    pub alpha: Option<f64>,
    /// Worker threads for the row loop; `1` runs sequentially.
    pub threads: usize,
}

impl SolveOptions {
    pub fn new(algorithm: Algorithm) -> SolveOptions {
        SolveOptions { algorithm, alpha: None, threads: 1 }
    }

    pub fn with_alpha(mut self, alpha: f64) -> SolveOptions {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> SolveOptions {
        self.threads = threads;
        self
    }
}

/// Work counters of one solve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PruneStats {
    /// `n(n−1)/2`.
    pub pairs_total: u64,
    /// Pairs `(i, j)`, `i < j`, whose row was not pruned.
    pub pairs_examined: u64,
    /// Rows dropped by the pruning rule.
    pub points_skipped: u64,
    /// Objective evaluations at candidate locations.
    pub candidates_evaluated: u64,
}

/// Evidence for one pruned row: `(n − m)·C ≥ incumbent` at decision time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkipCertificate {
    pub index: usize,
    /// Upper bound on the points still in the candidate pool within powered
    /// distance `2^q·C`: the size of the `x` band around `a_i` when that
    /// already decides, the exact count otherwise.
    pub m: usize,
    /// `(n − m)·C`.
    pub bound: f64,
    pub incumbent: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutoffSolution {
    pub location: ExtendedLocation,
    pub value: f64,
    /// Indices within powered distance `C` of the location; empty for `∅`.
    pub active: Vec<usize>,
    pub stats: PruneStats,
    pub skips: Vec<SkipCertificate>,
}

impl CutoffSolution {
    pub fn is_empty(&self) -> bool {
        self.location.is_empty()
    }
}

/// Whether `v` replaces an incumbent of value `z`. The relative slack keeps
/// rounding noise of the subsolvers from reordering equal candidates.
#[inline]
pub(crate) fn improves(v: f64, z: f64) -> bool {
    if z.is_finite() {
        v < z - 1e-12 * z.abs()
    } else {
        v < z
    }
}

fn centers_raw(a: [f64; 2], b: [f64; 2], r: f64) -> ([[f64; 2]; 2], usize) {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let d = dx.hypot(dy);
    let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    if d > 2.0 * r * (1.0 + 1e-12) {
        return ([mid; 2], 0);
    }
    let h2 = r * r - d * d / 4.0;
    if h2 <= 0.0 {
        return ([mid; 2], 1);
    }
    let (ux, uy) = (-dy / d, dx / d);
    let h = h2.sqrt();
    ([[mid[0] + h * ux, mid[1] + h * uy], [mid[0] - h * ux, mid[1] - h * uy]], 2)
}

/// Centers of the Euclidean balls of radius `r` with `a` and `b` on their
/// boundary: none, one (when `‖a − b‖ = 2r`) or two.
pub fn ball_centers_l2(a: &Point, b: &Point, r: f64) -> Result<Vec<Point>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.dim() != 2 {
        return Err(Error::Unsupported("ball centers need planar points".into()));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    if a == b {
        return Err(Error::DegeneratePair);
    }
    let (cs, k) = centers_raw(a.raw(), b.raw(), r);
    Ok(cs[..k].iter().map(|&c| Point::from_raw(c, 2)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// Enumerate candidate active sets and solve the classic problem on each.
    Subsets,
    /// Evaluate grid points directly.
    Grid,
}

enum Candidate<'s> {
    Subset(&'s [usize]),
    Location([f64; 2]),
}

#[derive(Default)]
struct Scratch {
    neighbors: Vec<usize>,
    set: Vec<usize>,
    sub: Vec<usize>,
    gather: Vec<[f64; 2]>,
}

/// Everything the row loop needs about one instance.
struct Problem<'a> {
    pts: &'a [[f64; 2]],
    dim: usize,
    metric: MetricSpec,
    cutoff: f64,
    radius: f64,
    /// `2^q·C`, the pair guard.
    pair_limit: f64,
    mode: Mode,
    method: Method,
    index: NeighborIndex,
    group: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl<'a> Problem<'a> {
    fn new(a: &'a PointCloud, m: &MetricSpec, cutoff: f64, grid_only: bool) -> Result<Problem<'a>> {
        validate_cutoff(cutoff)?;
        let dim = a.dim();
        let method = classic::method(m, dim)?;
        let grid = method == Method::Median && (dim == 1 || m.norm() == Norm::L1);
        if grid_only && !grid {
            return Err(Error::Unsupported("grid candidates need p=1, q=1".into()));
        }
        let pts = a.raw();
        let (group, members) = coincident_groups(pts);
        Ok(Problem {
            pts,
            dim,
            metric: *m,
            cutoff,
            radius: m.root(cutoff),
            pair_limit: m.pow(2.0) * cutoff,
            mode: if grid { Mode::Grid } else { Mode::Subsets },
            method,
            index: NeighborIndex::new(pts),
            group,
            members,
        })
    }

    fn n(&self) -> usize {
        self.pts.len()
    }

    /// Indices `k` with `d^q(a_i, a_k) ≤ 2^q·C`, ascending.
    fn neighbors(&self, i: usize, out: &mut Vec<usize>) {
        out.clear();
        self.index
            .within(self.pts, self.pts[i], &self.metric, self.pair_limit, 2.0 * self.radius, out);
        out.sort_unstable();
    }

    /// Emits the candidates of row `i` in the fixed tie-break order. The
    /// neighbor list must already be in `sc.neighbors`.
    fn row_candidates(&self, i: usize, sc: &mut Scratch, emit: &mut dyn FnMut(Candidate<'_>)) {
        let pi = self.pts[i];
        let gi = self.group[i];
        match self.mode {
            Mode::Grid => {
                emit(Candidate::Location(pi));
                if self.dim == 2 {
                    for &j in sc.neighbors.iter().filter(|&&j| j > i && self.group[j] != gi) {
                        let pj = self.pts[j];
                        emit(Candidate::Location([pi[0], pj[1]]));
                        emit(Candidate::Location([pj[0], pi[1]]));
                    }
                }
            }
            Mode::Subsets => {
                emit(Candidate::Subset(std::slice::from_ref(&i)));
                let neighbors = std::mem::take(&mut sc.neighbors);
                for &j in neighbors.iter().filter(|&&j| j > i && self.group[j] != gi) {
                    let gj = self.group[j];
                    let (centers, k) = if self.dim == 1 {
                        ([[(pi[0] + self.pts[j][0]) / 2.0, 0.0]; 2], 1)
                    } else {
                        centers_raw(pi, self.pts[j], self.radius)
                    };
                    for c in &centers[..k] {
                        self.ball_set(i, j, *c, &mut sc.set);
                        emit(Candidate::Subset(&sc.set));
                        for drop in [[gi, gi], [gj, gj], [gi, gj]] {
                            sc.sub.clear();
                            sc.sub.extend(
                                sc.set.iter().copied().filter(|&k| !drop.contains(&self.group[k])),
                            );
                            if !sc.sub.is_empty() {
                                emit(Candidate::Subset(&sc.sub));
                            }
                        }
                    }
                }
                sc.neighbors = neighbors;
            }
        }
    }

    /// Points of the ball at `c` pinned by `a_i` and `a_j`, with both pinning
    /// groups forced in, ascending.
    fn ball_set(&self, i: usize, j: usize, c: [f64; 2], out: &mut Vec<usize>) {
        out.clear();
        if self.dim == 1 {
            let (lo, hi) = (self.pts[i][0].min(self.pts[j][0]), self.pts[i][0].max(self.pts[j][0]));
            out.extend(
                self.index
                    .band(c[0], (hi - lo) / 2.0)
                    .iter()
                    .copied()
                    .filter(|&k| (lo..=hi).contains(&self.pts[k][0])),
            );
        } else {
            self.index.within(self.pts, c, &self.metric, self.cutoff, self.radius, out);
        }
        out.extend_from_slice(&self.members[self.group[i]]);
        out.extend_from_slice(&self.members[self.group[j]]);
        out.sort_unstable();
        out.dedup();
    }

    fn evaluate(&self, cand: Candidate<'_>, gather: &mut Vec<[f64; 2]>) -> ([f64; 2], f64) {
        let x = match cand {
            Candidate::Location(x) => x,
            Candidate::Subset(s) => {
                gather.clear();
                gather.extend(s.iter().map(|&k| self.pts[k]));
                classic::solve_raw(gather, self.method).0
            }
        };
        (x, self.value(x))
    }

    fn value(&self, x: [f64; 2]) -> f64 {
        self.index.cut_value(self.pts, x, &self.metric, self.cutoff, self.radius)
    }

    fn active(&self, x: [f64; 2]) -> Vec<usize> {
        let mut out = Vec::new();
        self.index.within(self.pts, x, &self.metric, self.cutoff, self.radius, &mut out);
        out.sort_unstable();
        out
    }

    fn process_row(&self, i: usize, incumbent: f64, alive: &[bool], prune: bool) -> RowOutcome {
        if prune {
            // The band holds every neighbor, so testing its size first skips
            // the same rows without building the neighbor list.
            let m = self.index.band(self.pts[i][0], 2.0 * self.radius).len();
            let bound = (self.n() - m) as f64 * self.cutoff;
            if bound >= incumbent {
                return RowOutcome::Pruned(SkipCertificate { index: i, m, bound, incumbent });
            }
        }
        let mut sc = Scratch::default();
        self.neighbors(i, &mut sc.neighbors);
        if prune {
            let m = sc.neighbors.iter().filter(|&&k| alive[k]).count();
            let bound = (self.n() - m) as f64 * self.cutoff;
            if bound >= incumbent {
                return RowOutcome::Pruned(SkipCertificate { index: i, m, bound, incumbent });
            }
        }
        let mut best = None;
        let mut threshold = incumbent;
        let mut candidates = 0;
        let mut gather = std::mem::take(&mut sc.gather);
        self.row_candidates(i, &mut sc, &mut |cand| {
            let (x, v) = self.evaluate(cand, &mut gather);
            candidates += 1;
            if improves(v, threshold) {
                threshold = v;
                best = Some((x, v));
            }
        });
        RowOutcome::Searched { best, candidates }
    }
}

enum RowOutcome {
    Pruned(SkipCertificate),
    Searched { best: Option<([f64; 2], f64)>, candidates: u64 },
}

/// Group id per point (coincident points share one) and the sorted members of
/// each group.
fn coincident_groups(pts: &[[f64; 2]]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| {
        pts[a][0]
            .total_cmp(&pts[b][0])
            .then(pts[a][1].total_cmp(&pts[b][1]))
            .then(a.cmp(&b))
    });
    let mut group = vec![0; pts.len()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        if pos == 0 || pts[order[pos - 1]] != pts[i] {
            members.push(Vec::new());
        }
        group[i] = members.len() - 1;
        members.last_mut().expect("pushed").push(i);
    }
    for g in &mut members {
        g.sort_unstable();
    }
    (group, members)
}

/// Candidate active sets of the Euclidean enumeration, row by row: the
/// singleton `{i}` followed by, for every later close pair `(i, j)` and each
/// ball through both, the sets `S`, `S∖{i}`, `S∖{j}`, `S∖{i, j}` (empty sets
/// omitted). Coincident points are dropped together.
pub fn candidate_subsets_l2<'a>(
    a: &'a PointCloud,
    m: &MetricSpec,
    cutoff: f64,
) -> Result<impl Iterator<Item = Vec<usize>> + 'a> {
    if a.dim() == 2 && m.norm() != Norm::L2 {
        return Err(Error::Unsupported("ball enumeration needs the Euclidean norm".into()));
    }
    let problem = Problem::new(a, m, cutoff, false)?;
    if problem.mode != Mode::Subsets {
        return Err(Error::Unsupported("ball enumeration needs q=2 on the line".into()));
    }
    Ok((0..a.len()).flat_map(move |i| {
        let mut sc = Scratch::default();
        problem.neighbors(i, &mut sc.neighbors);
        let mut row = Vec::new();
        problem.row_candidates(i, &mut sc, &mut |cand| {
            if let Candidate::Subset(s) = cand {
                row.push(s.to_vec());
            }
        });
        row
    }))
}

/// The ℓ1 candidate grid: every intersection of a vertical and a horizontal
/// line through points of `a`, sorted by `(x, y)`. On the line, the distinct
/// points themselves.
pub fn candidate_points_l1(a: &PointCloud, m: &MetricSpec, cutoff: f64) -> Result<Vec<Point>> {
    validate_cutoff(cutoff)?;
    if m.q() != 1.0 || (a.dim() == 2 && m.norm() != Norm::L1) {
        return Err(Error::Unsupported("grid candidates need p=1, q=1".into()));
    }
    let uniq = |k: usize| {
        let mut v: Vec<f64> = a.raw().iter().map(|p| p[k]).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let xs = uniq(0);
    if a.dim() == 1 {
        return Ok(xs.into_iter().map(Point::on_line).collect());
    }
    let ys = uniq(1);
    Ok(xs.iter().flat_map(|&x| ys.iter().map(move |&y| Point::new(x, y))).collect())
}

/// Solves the cutoff problem, or the problem with empty location when
/// `opts.alpha` is set.
///
/// Supported: ℓ2 with `q ∈ {1, 2}` and ℓ1 with `q = 1` in the plane, and
/// `q ∈ {1, 2}` on the line.
pub fn solve_cutoff(
    a: &PointCloud,
    m: &MetricSpec,
    cutoff: f64,
    opts: &SolveOptions,
) -> Result<CutoffSolution> {
    if let Some(alpha) = opts.alpha {
        validate_alpha(alpha)?;
    }
    let problem = Problem::new(a, m, cutoff, false)?;
    let n = a.len();
    let empty_value = opts.alpha.map(|alpha| n as f64 * alpha * cutoff);
    let (mut best, mut z) = match opts.algorithm {
        Algorithm::PrunedEmpty => (None, empty_value.ok_or(Error::MissingAlpha)?),
        _ => (None, f64::INFINITY),
    };
    let prune = opts.algorithm != Algorithm::Baseline;
    let mut alive = vec![true; n];
    let mut stats = PruneStats { pairs_total: (n * (n - 1) / 2) as u64, ..PruneStats::default() };
    let mut skips = Vec::new();

    let pool = if opts.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };
    let chunk = if pool.is_some() { PARALLEL_CHUNK } else { 1 };

    let mut start = 0;
    while start < n {
        let end = (start + chunk).min(n);
        let outcomes: Vec<RowOutcome> = match &pool {
            None => (start..end).map(|i| problem.process_row(i, z, &alive, prune)).collect(),
            Some(pool) => pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map(|i| problem.process_row(i, z, &alive, prune))
                    .collect()
            }),
        };
        for (i, outcome) in (start..end).zip(outcomes) {
            match outcome {
                RowOutcome::Pruned(cert) => {
                    alive[i] = false;
                    stats.points_skipped += 1;
                    skips.push(cert);
                }
                RowOutcome::Searched { best: row_best, candidates } => {
                    stats.pairs_examined += (n - 1 - i) as u64;
                    stats.candidates_evaluated += candidates;
                    if let Some((x, v)) = row_best {
                        if improves(v, z) {
                            best = Some(x);
                            z = v;
                        }
                    }
                }
            }
        }
        start = end;
    }

    let finite = best.filter(|_| empty_value.map_or(true, |e| improves(z, e)));
    Ok(match finite {
        Some(x) => CutoffSolution {
            location: ExtendedLocation::Point(Point::from_raw(x, problem.dim)),
            value: z,
            active: problem.active(x),
            stats,
            skips,
        },
        None => CutoffSolution {
            location: ExtendedLocation::Empty,
            value: empty_value.expect("a finite candidate exists without alpha"),
            active: Vec::new(),
            stats,
            skips,
        },
    })
}
