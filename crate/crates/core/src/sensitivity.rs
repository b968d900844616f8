//! The optimal value `g(C)` of the cutoff problem as a function of `C`.
//!
//! For a fixed location `x`, `g_x(C) = Σ min{d_i, C}` is piecewise linear and
//! concave with integer slopes `n − |active|`. The optimal value `g` is the
//! lower envelope of finitely many such curves, so it is again piecewise
//! linear, concave, non-decreasing and has at most `n` pieces with distinct
//! slopes in `{0, …, n − 1}`.
//!
//! [`compute_g`] recovers all pieces from tangent lines. It starts from the
//! line of slope `n − 1` through the origin and the constant line at the
//! classic optimum, intersects neighbouring tangents, and solves the cutoff
//! problem at the intersection: either the intersection lies on `g` (no
//! pieces in between) or the solution yields a new tangent. Each call retires
//! at least one open slope, so at most `n − 1` solves are needed, counting
//! the classic one.

use crate::classic::solve_classic;
use crate::cutoff::{solve_cutoff, Algorithm, SolveOptions};
use crate::error::{Error, Result};
use crate::metric::{validate_alpha, ExtendedLocation, MetricSpec, Point, PointCloud};

/// `g_x` for one fixed location.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCurve {
    sorted: Vec<f64>,
    prefix: Vec<f64>,
}

impl PointCurve {
    /// The distances `d^q(x, a_i)` in nondecreasing order.
    pub fn sorted_dists(&self) -> &[f64] {
        &self.sorted
    }

    /// `Σ_{d_i ≤ C} d_i + (n − j)·C` with `j = |{i : d_i ≤ C}|`.
    pub fn evaluate(&self, cutoff: f64) -> f64 {
        let j = self.sorted.partition_point(|&d| d <= cutoff);
        self.prefix[j] + (self.sorted.len() - j) as f64 * cutoff
    }

    /// Distinct kink positions.
    pub fn kinks(&self) -> Vec<f64> {
        let mut k = self.sorted.clone();
        k.dedup();
        k
    }
}

pub fn curve_at_point(x: &Point, a: &PointCloud, m: &MetricSpec) -> Result<PointCurve> {
    a.check_dim(x)?;
    let mut sorted: Vec<f64> = a.raw().iter().map(|&p| m.dist_pow_raw(x.raw(), p)).collect();
    sorted.sort_by(f64::total_cmp);
    let mut prefix = Vec::with_capacity(sorted.len() + 1);
    prefix.push(0.0);
    for d in &sorted {
        prefix.push(prefix.last().expect("seeded") + d);
    }
    Ok(PointCurve { sorted, prefix })
}

/// A linear piece of `g`, valid from `start` up to the next piece's start.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub value: f64,
    pub slope: usize,
    /// A location optimal on the whole closed piece.
    pub barycenter: Point,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SensitivityCurve {
    pub n: usize,
    /// Pieces in increasing `start` order, slopes strictly decreasing.
    pub segments: Vec<Segment>,
    /// Solves spent, the classic one included.
    pub solver_calls: usize,
}

impl SensitivityCurve {
    fn segment_at(&self, cutoff: f64) -> &Segment {
        let k = self.segments.partition_point(|s| s.start <= cutoff);
        &self.segments[k.saturating_sub(1)]
    }

    /// `g(C)`.
    pub fn evaluate(&self, cutoff: f64) -> f64 {
        let s = self.segment_at(cutoff);
        s.value + s.slope as f64 * (cutoff - s.start)
    }

    /// An optimal location for cutoff `C`.
    pub fn barycenter_at(&self, cutoff: f64) -> Point {
        self.segment_at(cutoff).barycenter
    }

    /// Starts of all pieces after the first.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.segments.iter().skip(1).map(|s| s.start).collect()
    }

    /// `Z*`, the value of `g` once every point is active.
    pub fn plateau(&self) -> f64 {
        self.segments.last().expect("nonempty").value
    }
}

/// Options for [`compute_g_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    pub algorithm: Algorithm,
    /// Above `1`, independent slope ranges are explored concurrently.
    pub threads: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { algorithm: Algorithm::Pruned, threads: 1 }
    }
}

#[derive(Clone, Copy, Debug)]
struct Tangent {
    slope: usize,
    /// Value at `C = 0` of the line.
    intercept: f64,
    barycenter: Point,
}

impl Tangent {
    fn at(&self, c: f64) -> f64 {
        self.intercept + self.slope as f64 * c
    }
}

/// Relative tolerance of the "intersection lies on g" test.
pub const ON_CURVE_TOLERANCE: f64 = 1e-9;

struct Sweep<'a> {
    a: &'a PointCloud,
    m: &'a MetricSpec,
    opts: SolveOptions,
}

impl Sweep<'_> {
    /// Tangents strictly between `lo` (smaller slope) and `hi`, plus the
    /// number of solves spent finding them.
    fn explore(&self, lo: Tangent, hi: Tangent, parallel: bool) -> Result<(Vec<Tangent>, usize)> {
        if hi.slope - lo.slope < 2 {
            return Ok((Vec::new(), 0));
        }
        let c = (lo.intercept - hi.intercept) / (hi.slope - lo.slope) as f64;
        if !(c.is_finite() && c > 0.0) {
            return Ok((Vec::new(), 0));
        }
        let y = lo.at(c);
        let sol = solve_cutoff(self.a, self.m, c, &self.opts)?;
        let slope = self.a.len() - sol.active.len();
        let on_curve = (sol.value - y).abs() <= ON_CURVE_TOLERANCE * y.max(1.0)
            || sol.value > y
            || slope <= lo.slope
            || slope >= hi.slope;
        if on_curve {
            return Ok((Vec::new(), 1));
        }
        let mid = Tangent {
            slope,
            intercept: sol.value - slope as f64 * c,
            barycenter: sol.location.point().expect("no empty location without alpha"),
        };
        let (left, right) = if parallel {
            rayon::join(|| self.explore(lo, mid, true), || self.explore(mid, hi, true))
        } else {
            (self.explore(lo, mid, false), self.explore(mid, hi, false))
        };
        let ((mut l, cl), (r, cr)) = (left?, right?);
        l.push(mid);
        l.extend(r);
        Ok((l, 1 + cl + cr))
    }
}

/// Computes `g` on `(0, ∞)` with the default options.
pub fn compute_g(a: &PointCloud, m: &MetricSpec) -> Result<SensitivityCurve> {
    compute_g_with(a, m, &SweepOptions::default())
}

pub fn compute_g_with(a: &PointCloud, m: &MetricSpec, opts: &SweepOptions) -> Result<SensitivityCurve> {
    let n = a.len();
    let first = a.point(0);
    if n == 1 {
        // Validate the metric even though nothing needs solving.
        crate::classic::method(m, a.dim())?;
        return Ok(SensitivityCurve {
            n,
            segments: vec![Segment { start: 0.0, value: 0.0, slope: 0, barycenter: first }],
            solver_calls: 0,
        });
    }
    let classic = solve_classic(a, m)?;
    let flat = Tangent { slope: 0, intercept: classic.value, barycenter: classic.location };
    let steep = Tangent { slope: n - 1, intercept: 0.0, barycenter: first };
    let sweep = Sweep {
        a,
        m,
        opts: SolveOptions { algorithm: opts.algorithm, alpha: None, threads: 1 },
    };
    if opts.algorithm == Algorithm::PrunedEmpty {
        return Err(Error::InvalidParameter("the sweep solves the cutoff problem without the empty location".into()));
    }
    let (inner, calls) = if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| sweep.explore(flat, steep, true))?
    } else {
        sweep.explore(flat, steep, false)?
    };
    // Ascending slopes; the curve runs from the steepest line down.
    let mut tangents = vec![flat];
    tangents.extend(inner);
    tangents.push(steep);
    tangents.reverse();
    let mut segments = Vec::with_capacity(tangents.len());
    for (k, t) in tangents.iter().enumerate() {
        let start = if k == 0 {
            0.0
        } else {
            let prev = &tangents[k - 1];
            ((t.intercept - prev.intercept) / (prev.slope - t.slope) as f64).max(0.0)
        };
        segments.push(Segment { start, value: t.at(start), slope: t.slope, barycenter: t.barycenter });
    }
    Ok(SensitivityCurve { n, segments, solver_calls: 1 + calls })
}

/// `g^(α)(C) = min{g(C), α·n·C}`: the optimal value once the empty location
/// is allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaCurve {
    pub alpha: f64,
    /// The unique `C₀` with `g(C₀) = α·n·C₀` when `α < (n − 1)/n`; the empty
    /// location is optimal exactly on `(0, C₀]`.
    pub crossing: Option<f64>,
    pub base: SensitivityCurve,
}

impl AlphaCurve {
    pub fn evaluate(&self, cutoff: f64) -> f64 {
        let empty = self.alpha * self.base.n as f64 * cutoff;
        match self.crossing {
            Some(c0) if cutoff <= c0 => empty,
            _ => self.base.evaluate(cutoff),
        }
    }

    pub fn location_at(&self, cutoff: f64) -> ExtendedLocation {
        match self.crossing {
            Some(c0) if cutoff <= c0 => ExtendedLocation::Empty,
            _ => ExtendedLocation::Point(self.base.barycenter_at(cutoff)),
        }
    }
}

pub fn compute_g_alpha(curve: &SensitivityCurve, alpha: f64) -> Result<AlphaCurve> {
    validate_alpha(alpha)?;
    let n = curve.n as f64;
    let rate = alpha * n;
    let mut crossing = None;
    if alpha < (n - 1.0) / n {
        for (k, s) in curve.segments.iter().enumerate() {
            if (s.slope as f64) >= rate {
                continue;
            }
            let intercept = s.value - s.slope as f64 * s.start;
            let root = intercept / (rate - s.slope as f64);
            let end = curve.segments.get(k + 1).map_or(f64::INFINITY, |next| next.start);
            if root <= end {
                crossing = Some(root.max(s.start));
                break;
            }
        }
        assert!(crossing.is_some(), "a concave curve that levels off must cross α·n·C");
    }
    Ok(AlphaCurve { alpha, crossing, base: curve.clone() })
}
