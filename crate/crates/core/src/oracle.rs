//! Independent ground truth for small instances, and the worked examples used
//! throughout the test suites.
//!
//! [`oracle_subsets`] solves the classic problem on every nonempty subset and
//! keeps the best cutoff value: exponential, but it shares nothing with the
//! pair enumeration beyond the classic subsolver. [`oracle_grid`] scans a
//! uniform grid and is only a coarse cross-check.

use rayon::prelude::*;

use crate::classic;
use crate::cutoff::{CutoffSolution, PruneStats};
use crate::error::{Error, Result};
use crate::metric::{cut_sum, validate_alpha, validate_cutoff, CutoffSpec, ExtendedLocation, MetricSpec, Norm, Point, PointCloud};

/// Largest cloud [`oracle_subsets`] accepts.
pub const ORACLE_MAX_POINTS: usize = 14;

fn finish(
    a: &PointCloud,
    m: &MetricSpec,
    cutoff: f64,
    x: [f64; 2],
    value: f64,
    alpha: Option<f64>,
    evaluated: u64,
) -> CutoffSolution {
    let n = a.len();
    let stats = PruneStats {
        pairs_total: (n * (n - 1) / 2) as u64,
        candidates_evaluated: evaluated,
        ..PruneStats::default()
    };
    let empty = alpha.map(|al| n as f64 * al * cutoff);
    match empty {
        Some(e) if e <= value => CutoffSolution {
            location: ExtendedLocation::Empty,
            value: e,
            active: Vec::new(),
            stats,
            skips: Vec::new(),
        },
        _ => CutoffSolution {
            location: ExtendedLocation::Point(Point::from_raw(x, a.dim())),
            value,
            active: (0..n).filter(|&i| m.dist_pow_raw(x, a.raw()[i]) <= cutoff).collect(),
            stats,
            skips: Vec::new(),
        },
    }
}

/// Exhaustive optimum over all `2^n − 1` candidate active sets (and the empty
/// location when `alpha` is given). Ties go to the empty location, then to
/// the smallest subset bitmask.
pub fn oracle_subsets(
    a: &PointCloud,
    m: &MetricSpec,
    cutoff: f64,
    alpha: Option<f64>,
) -> Result<CutoffSolution> {
    validate_cutoff(cutoff)?;
    if let Some(al) = alpha {
        validate_alpha(al)?;
    }
    let n = a.len();
    if n > ORACLE_MAX_POINTS {
        return Err(Error::TooLarge { n, max: ORACLE_MAX_POINTS });
    }
    let method = classic::method(m, a.dim())?;
    let pts = a.raw();
    let total: u32 = (1u32 << n) - 1;
    let (value, _, x) = (1..=total)
        .into_par_iter()
        .map_init(Vec::new, |buf, mask| {
            buf.clear();
            buf.extend((0..n).filter(|&k| mask >> k & 1 == 1).map(|k| pts[k]));
            let (x, _) = classic::solve_raw(buf, method);
            (cut_sum(x, pts, m, cutoff), mask, x)
        })
        .reduce(
            || (f64::INFINITY, u32::MAX, [0.0; 2]),
            |l, r| if (r.0, r.1) < (l.0, l.1) { r } else { l },
        );
    Ok(finish(a, m, cutoff, x, value, alpha, total as u64))
}

/// Best cutoff value over a `resolution × resolution` grid spanning the
/// bounding box of `a` inflated by `C^(1/q)` (a single row on the line).
/// Grid nodes sit at fractions `k/(resolution − 1)`, so refining
/// `res → 2·res − 1` keeps every old node.
pub fn oracle_grid(a: &PointCloud, m: &MetricSpec, cutoff: f64, resolution: usize) -> Result<CutoffSolution> {
    validate_cutoff(cutoff)?;
    if resolution < 2 {
        return Err(Error::InvalidParameter("grid resolution must be at least 2".into()));
    }
    let pts = a.raw();
    let r = m.root(cutoff);
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k] - r);
            hi[k] = hi[k].max(p[k] + r);
        }
    }
    if a.dim() == 1 {
        (lo[1], hi[1]) = (0.0, 0.0);
    }
    let ny = if a.dim() == 1 { 1 } else { resolution };
    let coord = |k: usize, i: usize| {
        if hi[k] == lo[k] {
            lo[k]
        } else {
            lo[k] + (hi[k] - lo[k]) * (i as f64 / (resolution - 1) as f64)
        }
    };
    let (value, x) = (0..resolution * ny)
        .into_par_iter()
        .map(|t| {
            let x = [coord(0, t / ny), coord(1, t % ny)];
            (cut_sum(x, pts, m, cutoff), x)
        })
        .reduce(
            || (f64::INFINITY, [0.0; 2]),
            |l, r| if r.0 < l.0 { r } else { l },
        );
    Ok(finish(a, m, cutoff, x, value, None, (resolution * ny) as u64))
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// Stated with the published construction.
    Published,
    /// Immediate from the definitions.
    ByInspection,
    /// Computed independently (by hand or by [`oracle_subsets`]).
    Computed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Expected {
    Scalar(f64),
    Location(Point),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expectation {
    pub key: &'static str,
    pub value: Expected,
    pub basis: Basis,
}

/// A named construction with its metric, cutoff and known answers.
#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub cloud: PointCloud,
    pub metric: MetricSpec,
    pub cutoff: CutoffSpec,
    pub expected: Vec<Expectation>,
}

impl Fixture {
    /// The scalar expectation stored under `key`.
    pub fn scalar(&self, key: &str) -> Option<f64> {
        self.expected.iter().find(|e| e.key == key).and_then(|e| match e.value {
            Expected::Scalar(v) => Some(v),
            Expected::Location(_) => None,
        })
    }
}

/// Free parameters of the constructions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixtureParams {
    pub cutoff: f64,
    pub eps: f64,
    /// Exponent for the constructions that allow any `q`.
    pub q: f64,
    /// Size parameter: half the cloud for `chalfpluseps` (smallest valid
    /// value when `None`), number of centre copies for `xnotinxc1dim`.
    pub count: Option<usize>,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams { cutoff: 1.0, eps: 0.05, q: 1.0, count: None }
    }
}

pub const FIXTURE_NAMES: [&str; 9] = [
    "triangle",
    "triangleq2",
    "cminuseps",
    "chalfpluseps",
    "discontinuity",
    "xinxc1dim",
    "xnotinxc1dim",
    "xnotinxc1norm",
    "unitline",
];

/// Fixture with default parameters (`C = 1`, `ε = 0.05`, `q = 1`).
pub fn fixture(name: &str) -> Result<Fixture> {
    fixture_with(name, &FixtureParams::default())
}

pub fn fixture_with(name: &str, p: &FixtureParams) -> Result<Fixture> {
    use Basis::*;
    validate_cutoff(p.cutoff)?;
    if !(p.eps.is_finite() && p.eps > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {}", p.eps)));
    }
    let c = p.cutoff;
    let eps = p.eps;
    let exp = |key, v, basis| Expectation { key, value: Expected::Scalar(v), basis };
    let spec = |alpha| CutoffSpec::new(c, alpha);
    let fx = |name, cloud, metric, cutoff, expected| -> Result<Fixture> {
        Ok(Fixture { name, cloud, metric, cutoff, expected })
    };
    match name {
        "triangle" => {
            let h = 3f64.sqrt() * c / 2.0;
            fx(
                "triangle",
                PointCloud::from_xy(&[(-c / 2.0, h), (-c / 2.0, -h), (c, 0.0)])?,
                MetricSpec::euclidean(),
                spec(None)?,
                vec![
                    exp("classic_value", 3.0 * c, Published),
                    exp("cutoff_value", 2.0 * c, Published),
                    exp("value_at_eta", (3f64.sqrt() + 1.0) * c, Published),
                ],
            )
        }
        "triangleq2" => {
            let h = 3f64.sqrt() / 2.0;
            fx(
                "triangleq2",
                PointCloud::from_xy(&[(-0.5, h), (-0.5, -h), (1.0, 0.0)])?,
                MetricSpec::squared_euclidean(),
                CutoffSpec::new(1.0, None)?,
                vec![
                    exp("classic_value", 3.0, Published),
                    exp("value_at_xi", 3.0, Published),
                    exp("value_at_eta", 2.5, Published),
                ],
            )
        }
        "cminuseps" => {
            if eps >= c {
                return Err(Error::InvalidParameter("cminuseps needs epsilon < C".into()));
            }
            let m = MetricSpec::new(Norm::L2, p.q)?;
            fx(
                "cminuseps",
                PointCloud::from_line(&[0.0, m.root(c - eps)])?,
                m,
                spec(Some(0.5))?,
                vec![exp("cutoff_value", c - eps, Published), exp("mpd", c - eps, Published)],
            )
        }
        "chalfpluseps" => {
            let min = (c / (4.0 * eps) + 0.5).floor() as usize + 1;
            let half = p.count.unwrap_or(min.max(2));
            if half < min.max(2) {
                return Err(Error::InvalidParameter(format!("chalfpluseps needs at least {} points per side", min.max(2))));
            }
            let nf = half as f64;
            let delta = (2.0 * nf * (2.0 * nf - 1.0) * eps - nf * c) / (4.0 * (nf - 1.0));
            let mut xs = vec![-delta];
            xs.extend(std::iter::repeat(0.0).take(half - 1));
            xs.extend(std::iter::repeat(c).take(half - 1));
            xs.push(c + delta);
            fx(
                "chalfpluseps",
                PointCloud::from_line(&xs)?,
                MetricSpec::euclidean(),
                spec(Some(0.5))?,
                vec![
                    exp("delta", delta, Published),
                    exp("mpd", c / 2.0 + eps, Published),
                    exp("cutoff_value", nf * c + delta, Published),
                    exp("empty_value", nf * c, Published),
                ],
            )
        }
        "discontinuity" => fx(
            "discontinuity",
            PointCloud::from_line(&[0.0, 0.5, 5.0, 6.0, 7.0])?,
            MetricSpec::manhattan(),
            spec(None)?,
            vec![
                exp("breakpoint_1", 0.5, Computed),
                exp("breakpoint_2", 1.5, Published),
                exp("breakpoint_3", 5.25, Published),
                exp("value_at_breakpoint_1", 2.0, Computed),
                exp("value_at_breakpoint_2", 5.0, Computed),
                exp("value_at_breakpoint_3", 12.5, Computed),
                exp("value_at_c3", 8.0, Computed),
                exp("classic_value", 12.5, Computed),
                exp("alpha_half_crossing", 4.0, Computed),
            ],
        ),
        "xinxc1dim" => fx(
            "xinxc1dim",
            PointCloud::from_line(&[0.0, 0.0, c + eps, -(c + eps)])?,
            MetricSpec::euclidean(),
            spec(None)?,
            vec![
                exp("classic_value", 2.0 * (c + eps), Published),
                exp("cutoff_value", 2.0 * c, Published),
            ],
        ),
        "xnotinxc1dim" => {
            if eps >= c {
                return Err(Error::InvalidParameter("xnotinxc1dim needs epsilon < C".into()));
            }
            let copies = p.count.unwrap_or(2);
            if copies < 2 {
                return Err(Error::InvalidParameter("xnotinxc1dim needs at least 2 centre copies".into()));
            }
            let mut xs = vec![0.0; copies];
            xs.extend([c - eps, -(c - eps)]);
            fx(
                "xnotinxc1dim",
                PointCloud::from_line(&xs)?,
                MetricSpec::euclidean(),
                spec(None)?,
                vec![
                    exp("classic_value", 2.0 * (c - eps), Published),
                    exp("cutoff_value", 2.0 * (c - eps), Published),
                ],
            )
        }
        "xnotinxc1norm" => fx(
            "xnotinxc1norm",
            PointCloud::from_xy(&[
                (-eps / 2.0, eps / 2.0),
                (-eps / 2.0, -eps / 2.0),
                (0.0, 0.0),
                (c - eps / 4.0, eps / 4.0),
                (c - eps / 4.0, -eps / 4.0),
            ])?,
            MetricSpec::manhattan(),
            spec(None)?,
            vec![
                exp("classic_value", 2.0 * c + 2.0 * eps, Published),
                exp("value_at_eta", 2.0 * c + 1.5 * eps, Published),
            ],
        ),
        "unitline" => {
            let n = p.count.unwrap_or(5);
            let xs: Vec<f64> = (0..n).map(|k| k as f64).collect();
            fx(
                "unitline",
                PointCloud::from_line(&xs)?,
                MetricSpec::euclidean(),
                CutoffSpec::new(0.4, None)?,
                vec![exp("cutoff_value", (n as f64 - 1.0) * 0.4, ByInspection)],
            )
        }
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}
