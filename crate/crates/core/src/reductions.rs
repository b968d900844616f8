//! Geometry-only pre-checks that settle a cutoff instance, or part of it,
//! before any enumeration.
//!
//! With `r = C^(1/q)`:
//!
//! * the classic optimum already solves the cutoff problem when `diam ≤ r`,
//!   when `r ≥ 2·diam`, or when twice the smallest enclosing radius is at most
//!   `r`;
//! * the cutoff value is strictly below the classic one when `diam > 2r`;
//! * when `C < 2^(−q)·min d^q(a_i, a_j)` any data point is optimal with value
//!   `(n − 1)·C`;
//! * the empty location is optimal when no ball of radius `r` holds more than
//!   `(1 − α)·n` points, or when `α ≤ min{2^(−q)·diam^q/(n·C), 1/n}`;
//! * it is never optimal when `α` exceeds `(n−1)/n` times one of `1`,
//!   `mpd/C` or `diam^q/C`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classic;
use crate::cutoff::{CutoffSolution, PruneStats};
use crate::error::Result;
use crate::index::NeighborIndex;
use crate::metric::{diameter, mpd_normalized, validate_alpha, validate_cutoff, ExtendedLocation, MetricSpec, Norm, Point, PointCloud};

/// A ball `B(center, radius)` in the metric's norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnclosingBall {
    pub center: Point,
    pub radius: f64,
}

fn circle2(a: [f64; 2], b: [f64; 2]) -> ([f64; 2], f64) {
    let c = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    (c, (b[0] - a[0]).hypot(b[1] - a[1]) / 2.0)
}

fn circle3(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> ([f64; 2], f64) {
    let (bx, by) = (b[0] - a[0], b[1] - a[1]);
    let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
    let d = 2.0 * (bx * cy - by * cx);
    let scale = (bx.abs() + by.abs() + cx.abs() + cy.abs()).powi(2);
    if d.abs() <= 1e-14 * scale {
        // Collinear: the widest pair spans the others.
        return [circle2(a, b), circle2(a, c), circle2(b, c)]
            .into_iter()
            .max_by(|l, r| l.1.total_cmp(&r.1))
            .expect("three candidates");
    }
    let (b2, c2) = (bx * bx + by * by, cx * cx + cy * cy);
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    ([a[0] + ux, a[1] + uy], ux.hypot(uy))
}

fn outside(p: [f64; 2], c: ([f64; 2], f64)) -> bool {
    (p[0] - c.0[0]).hypot(p[1] - c.0[1]) > c.1 * (1.0 + 1e-12) + 1e-300
}

fn euclidean_ball(pts: &[[f64; 2]]) -> ([f64; 2], f64) {
    let mut p = pts.to_vec();
    // Fixed shuffle: expected linear time, reproducible output.
    p.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eb));
    let mut ball = (p[0], 0.0);
    for i in 1..p.len() {
        if !outside(p[i], ball) {
            continue;
        }
        ball = (p[i], 0.0);
        for j in 0..i {
            if !outside(p[j], ball) {
                continue;
            }
            ball = circle2(p[i], p[j]);
            for k in 0..j {
                if outside(p[k], ball) {
                    ball = circle3(p[i], p[j], p[k]);
                }
            }
        }
    }
    // Rounding in the circumcircle can leave a point a hair outside.
    let r = pts
        .iter()
        .map(|q| (q[0] - ball.0[0]).hypot(q[1] - ball.0[1]))
        .fold(ball.1, f64::max);
    (ball.0, r)
}

fn box_ball(us: impl Iterator<Item = [f64; 2]>) -> ([f64; 2], f64) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for u in us {
        for k in 0..2 {
            lo[k] = lo[k].min(u[k]);
            hi[k] = hi[k].max(u[k]);
        }
    }
    let c = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    (c, ((hi[0] - lo[0]) / 2.0).max((hi[1] - lo[1]) / 2.0))
}

/// Smallest ball containing `a` in the metric's norm. Exact for every norm:
/// ℓ2 by randomized incremental construction, ℓ∞ as the bounding box, ℓ1 as
/// the bounding box in the coordinates `(x + y, x − y)`.
pub fn smallest_enclosing_ball(a: &PointCloud, m: &MetricSpec) -> EnclosingBall {
    let pts = a.raw();
    let (c, r) = if a.dim() == 1 {
        let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p[0]), h.max(p[0])));
        ([(lo + hi) / 2.0, 0.0], (hi - lo) / 2.0)
    } else {
        match m.norm() {
            Norm::L2 => euclidean_ball(pts),
            Norm::LInf => box_ball(pts.iter().copied()),
            Norm::L1 => {
                let (u, r) = box_ball(pts.iter().map(|p| [p[0] + p[1], p[0] - p[1]]));
                ([(u[0] + u[1]) / 2.0, (u[0] - u[1]) / 2.0], r)
            }
        }
    };
    EnclosingBall { center: Point::from_raw(c, a.dim()), radius: r }
}

/// Whether `2·r_seb ≤ C^(1/q)`, which makes the classic optimum solve the
/// cutoff problem. Sufficient, not necessary.
pub fn check_theorem_2r0(a: &PointCloud, m: &MetricSpec, cutoff: f64) -> Result<bool> {
    validate_cutoff(cutoff)?;
    classic::method(m, a.dim())?;
    Ok(2.0 * smallest_enclosing_ball(a, m).radius <= m.root(cutoff))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiamVerdict {
    /// Equal optimal values; with `solution_sets_equal` the optimal sets
    /// coincide too (`r ≥ 2·diam`).
    ClassicEqualsCutoff { solution_sets_equal: bool },
    /// The cutoff optimum is strictly smaller.
    StrictGap,
    /// `r < diam ≤ 2r`: either outcome is possible.
    Inconclusive,
}

pub fn check_diam_shortcuts(a: &PointCloud, m: &MetricSpec, cutoff: f64) -> Result<DiamVerdict> {
    validate_cutoff(cutoff)?;
    let diam = diameter(a, m);
    let r = m.root(cutoff);
    Ok(if r >= 2.0 * diam {
        DiamVerdict::ClassicEqualsCutoff { solution_sets_equal: true }
    } else if diam <= r {
        DiamVerdict::ClassicEqualsCutoff { solution_sets_equal: false }
    } else if diam > 2.0 * r {
        DiamVerdict::StrictGap
    } else {
        DiamVerdict::Inconclusive
    })
}

fn min_pair_pow(a: &PointCloud, m: &MetricSpec) -> f64 {
    let pts = a.raw();
    let mut best = f64::INFINITY;
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            best = best.min(m.dist_pow_raw(p, q));
        }
    }
    best
}

/// The closed-form optimum `(a_1, (n − 1)·C)` when
/// `C < 2^(−q)·min_{i≠j} d^q(a_i, a_j)`. Coincident points make the minimum
/// zero, so the check never fires for them.
#[allow(non_snake_case)]
pub fn check_tiny_C(a: &PointCloud, m: &MetricSpec, cutoff: f64) -> Result<Option<CutoffSolution>> {
    validate_cutoff(cutoff)?;
    if cutoff >= min_pair_pow(a, m) / m.pow(2.0) {
        return Ok(None);
    }
    let n = a.len();
    Ok(Some(CutoffSolution {
        location: ExtendedLocation::Point(a.point(0)),
        value: (n - 1) as f64 * cutoff,
        active: vec![0],
        stats: PruneStats { pairs_total: (n * (n - 1) / 2) as u64, ..PruneStats::default() },
        skips: Vec::new(),
    }))
}

/// Most points of `a` inside one closed ball of radius `C^(1/q)`.
///
/// Centers are enumerated exhaustively (`O(n³)`): the data points and the
/// balls through every close pair for ℓ2; corner-anchored squares for ℓ∞, and
/// for ℓ1 in the rotated frame. Comparisons carry a `1e−12` relative slack so
/// the count never comes out low.
pub fn max_ball_coverage(a: &PointCloud, m: &MetricSpec, cutoff: f64) -> Result<usize> {
    validate_cutoff(cutoff)?;
    let r = m.root(cutoff);
    let slack = 1.0 + 1e-12;
    let pts = a.raw();
    if a.dim() == 1 || m.norm() != Norm::L2 {
        // Axis-aligned squares (intervals on the line) anchored at a lower-left
        // data coordinate in the frame where the ball is a square.
        let frame: Vec<[f64; 2]> = match (a.dim(), m.norm()) {
            (1, _) | (_, Norm::LInf) => pts.to_vec(),
            _ => pts.iter().map(|p| [p[0] + p[1], p[0] - p[1]]).collect(),
        };
        let side = 2.0 * r * slack;
        let mut best = 0;
        for xi in &frame {
            let column: Vec<f64> = frame
                .iter()
                .filter(|p| p[0] >= xi[0] && p[0] - xi[0] <= side)
                .map(|p| p[1])
                .collect();
            for yj in &column {
                let cnt = column.iter().filter(|&&y| y >= *yj && y - *yj <= side).count();
                best = best.max(cnt);
            }
        }
        return Ok(best);
    }
    let index = NeighborIndex::new(pts);
    let limit = cutoff * slack;
    let count_at = |c: [f64; 2], forced: [usize; 2]| {
        index
            .band(c[0], r)
            .iter()
            .filter(|&&k| {
                m.dist_pow_raw(c, pts[k]) <= limit || forced.iter().any(|&f| pts[f] == pts[k])
            })
            .count()
    };
    let mut best = 0;
    let mut near = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        best = best.max(count_at(p, [i, i]));
        near.clear();
        index.within(pts, p, m, m.pow(2.0) * cutoff * slack, 2.0 * r, &mut near);
        for &j in near.iter().filter(|&&j| j > i && pts[j] != p) {
            let mid = [(p[0] + pts[j][0]) / 2.0, (p[1] + pts[j][1]) / 2.0];
            let d = (pts[j][0] - p[0]).hypot(pts[j][1] - p[1]);
            let h = (r * r - d * d / 4.0).max(0.0).sqrt();
            let (ux, uy) = (-(pts[j][1] - p[1]) / d, (pts[j][0] - p[0]) / d);
            for s in [1.0, -1.0] {
                let c = [mid[0] + s * h * ux, mid[1] + s * h * uy];
                best = best.max(count_at(c, [i, j]));
            }
        }
    }
    Ok(best)
}

/// Which condition a verdict refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// `2·r_seb ≤ r`.
    EnclosingBall,
    /// `diam ≤ r`.
    DiameterWithinRadius,
    /// `r ≥ 2·diam`.
    RadiusCoversTwiceDiameter,
    /// `diam > 2r`.
    DiameterBeyondTwiceRadius,
    /// `C < 2^(−q)·min d^q`.
    TinyCutoff,
    /// No ball of radius `r` holds more than `(1 − α)·n` points.
    SparseBalls,
    /// `α ≤ min{2^(−q)·diam^q/(n·C), 1/n}`.
    SmallAlpha,
    /// `α > (n − 1)/n`.
    AlphaAboveMax,
    /// `α > mpd/C·(n − 1)/n`.
    AlphaAboveMpd,
    /// `α > diam^q/C·(n − 1)/n`.
    AlphaAboveDiameter,
}

impl Condition {
    pub fn id(self) -> &'static str {
        match self {
            Condition::EnclosingBall => "enclosing_ball",
            Condition::DiameterWithinRadius => "diam_within_radius",
            Condition::RadiusCoversTwiceDiameter => "radius_covers_twice_diam",
            Condition::DiameterBeyondTwiceRadius => "diam_beyond_twice_radius",
            Condition::TinyCutoff => "tiny_cutoff",
            Condition::SparseBalls => "sparse_balls",
            Condition::SmallAlpha => "small_alpha",
            Condition::AlphaAboveMax => "alpha_above_max",
            Condition::AlphaAboveMpd => "alpha_above_mpd",
            Condition::AlphaAboveDiameter => "alpha_above_diam",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Witness {
    Scalar(f64),
    Point(Point),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Scalar(v) => write!(f, "{v}"),
            Witness::Point(p) => write!(f, "({p})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub condition: Condition,
    pub fired: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmptyVerdict {
    EmptyOptimal,
    EmptyExcluded,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Recommendation {
    SolveClassicSuffices,
    EmptyIsOptimal,
    EmptyExcluded,
    MustSolveCutoff,
}

impl Recommendation {
    pub fn id(self) -> &'static str {
        match self {
            Recommendation::SolveClassicSuffices => "solve_classic_suffices",
            Recommendation::EmptyIsOptimal => "empty_is_optimal",
            Recommendation::EmptyExcluded => "empty_excluded",
            Recommendation::MustSolveCutoff => "must_solve_cutoff",
        }
    }
}

impl fmt::Display for Recommendation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

fn empty_verdicts(a: &PointCloud, m: &MetricSpec, cutoff: f64, alpha: f64) -> Result<Vec<Verdict>> {
    validate_cutoff(cutoff)?;
    validate_alpha(alpha)?;
    let n = a.len() as f64;
    let shrink = (n - 1.0) / n;
    let diam_q = m.pow(diameter(a, m));
    let mut out = Vec::new();
    let mut push = |condition, fired, witness| out.push(Verdict { condition, fired, witness: Some(witness) });
    push(Condition::AlphaAboveMax, alpha > shrink, Witness::Scalar(shrink));
    if a.len() >= 2 {
        let mpd_c = mpd_normalized(a, m, cutoff)?;
        push(Condition::AlphaAboveMpd, alpha > mpd_c * shrink, Witness::Scalar(mpd_c));
    }
    push(Condition::AlphaAboveDiameter, alpha > diam_q / cutoff * shrink, Witness::Scalar(diam_q / cutoff));
    let coverage = max_ball_coverage(a, m, cutoff)?;
    push(Condition::SparseBalls, coverage as f64 <= (1.0 - alpha) * n, Witness::Scalar(coverage as f64));
    let small = (diam_q / (m.pow(2.0) * n * cutoff)).min(1.0 / n);
    push(Condition::SmallAlpha, alpha <= small, Witness::Scalar(small));
    Ok(out)
}

fn classify(verdicts: &[Verdict]) -> EmptyVerdict {
    let fired = |c: Condition| verdicts.iter().any(|v| v.condition == c && v.fired);
    if fired(Condition::AlphaAboveMax) || fired(Condition::AlphaAboveMpd) || fired(Condition::AlphaAboveDiameter) {
        EmptyVerdict::EmptyExcluded
    } else if fired(Condition::SparseBalls) || fired(Condition::SmallAlpha) {
        EmptyVerdict::EmptyOptimal
    } else {
        EmptyVerdict::Unknown
    }
}

/// Decides from geometry alone whether the empty location is optimal, is
/// excluded, or neither is known.
pub fn decide_empty(a: &PointCloud, m: &MetricSpec, cutoff: f64, alpha: f64) -> Result<EmptyVerdict> {
    Ok(classify(&empty_verdicts(a, m, cutoff, alpha)?))
}

/// All verdicts for one instance plus the resulting advice.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionReport {
    pub verdicts: Vec<Verdict>,
    pub recommended: Recommendation,
}

impl ReductionReport {
    pub fn fired(&self) -> impl Iterator<Item = Condition> + '_ {
        self.verdicts.iter().filter(|v| v.fired).map(|v| v.condition)
    }

    pub fn has_fired(&self, c: Condition) -> bool {
        self.fired().any(|f| f == c)
    }
}

/// Runs every check. The enclosing-ball test is reported for any norm; the
/// empty-location tests only when `alpha` is given.
pub fn analyze(a: &PointCloud, m: &MetricSpec, cutoff: f64, alpha: Option<f64>) -> Result<ReductionReport> {
    validate_cutoff(cutoff)?;
    let r = m.root(cutoff);
    let diam = diameter(a, m);
    let ball = smallest_enclosing_ball(a, m);
    let mut verdicts = vec![
        Verdict {
            condition: Condition::EnclosingBall,
            fired: 2.0 * ball.radius <= r,
            witness: Some(Witness::Point(ball.center)),
        },
        Verdict {
            condition: Condition::DiameterWithinRadius,
            fired: diam <= r,
            witness: Some(Witness::Scalar(diam)),
        },
        Verdict {
            condition: Condition::RadiusCoversTwiceDiameter,
            fired: r >= 2.0 * diam,
            witness: Some(Witness::Scalar(r)),
        },
        Verdict {
            condition: Condition::DiameterBeyondTwiceRadius,
            fired: diam > 2.0 * r,
            witness: Some(Witness::Scalar(diam)),
        },
        Verdict {
            condition: Condition::TinyCutoff,
            fired: check_tiny_C(a, m, cutoff)?.is_some(),
            witness: Some(Witness::Scalar(min_pair_pow(a, m))),
        },
    ];
    let mut empty = EmptyVerdict::Unknown;
    if let Some(alpha) = alpha {
        let ev = empty_verdicts(a, m, cutoff, alpha)?;
        empty = classify(&ev);
        verdicts.extend(ev);
    }
    let classic_ok = verdicts[..3].iter().any(|v| v.fired);
    let recommended = match empty {
        EmptyVerdict::EmptyOptimal => Recommendation::EmptyIsOptimal,
        _ if classic_ok => Recommendation::SolveClassicSuffices,
        EmptyVerdict::EmptyExcluded => Recommendation::EmptyExcluded,
        _ => Recommendation::MustSolveCutoff,
    };
    Ok(ReductionReport { verdicts, recommended })
}
