//! Distance kernels, point clouds and objective evaluation.
//!
//! Every distance here is a *powered* norm distance `‖y − x‖ₚ^q`. The cutoff
//! variant caps it at `C`; the extended variant adds a distinguished empty
//! location that sits at constant distance `α·C` from every point.
//!
//! One-dimensional clouds are stored in the plane with `y = 0`, so every norm
//! reduces to `|x − y|` on them.

use std::fmt;

use crate::error::{Error, Result};

/// A location in R¹ or R².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    coords: [f64; 2],
    dim: u8,
}

impl Point {
    /// A point in the plane.
    ///
    /// # Panics
    ///
    /// Panics on non-finite coordinates; use [`Point::try_new`] for fallible
    /// construction.
    pub fn new(x: f64, y: f64) -> Point {
        assert!(x.is_finite() && y.is_finite(), "coordinates must be finite");
        Point { coords: [x, y], dim: 2 }
    }

    /// A point on the real line.
    pub fn on_line(x: f64) -> Point {
        assert!(x.is_finite(), "coordinates must be finite");
        Point { coords: [x, 0.0], dim: 1 }
    }

    pub fn try_new(coords: &[f64]) -> Result<Point> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        match *coords {
            [x] => Ok(Point { coords: [x, 0.0], dim: 1 }),
            [x, y] => Ok(Point { coords: [x, y], dim: 2 }),
            _ => Err(Error::UnsupportedDimension(coords.len())),
        }
    }

    pub(crate) fn from_raw(coords: [f64; 2], dim: usize) -> Point {
        debug_assert!(dim == 1 || dim == 2);
        Point { coords, dim: dim as u8 }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim()]
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    /// Second coordinate; `0` for points on the line.
    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    pub(crate) fn raw(&self) -> [f64; 2] {
        self.coords
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dim {
            1 => write!(f, "{}", self.coords[0]),
            _ => write!(f, "{},{}", self.coords[0], self.coords[1]),
        }
    }
}

/// Norm order `p ∈ {1, 2, ∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    L2,
    LInf,
}

impl Norm {
    #[inline]
    pub(crate) fn eval(self, dx: f64, dy: f64) -> f64 {
        match self {
            Norm::L1 => dx.abs() + dy.abs(),
            Norm::L2 => dx.hypot(dy),
            Norm::LInf => dx.abs().max(dy.abs()),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "1",
            Norm::L2 => "2",
            Norm::LInf => "inf",
        })
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Norm> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "l1" => Ok(Norm::L1),
            "2" | "l2" => Ok(Norm::L2),
            "inf" | "infinity" | "linf" | "max" => Ok(Norm::LInf),
            other => Err(Error::InvalidParameter(format!("unknown norm '{other}'"))),
        }
    }
}

/// Norm selector plus exponent `q ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSpec {
    norm: Norm,
    q: f64,
}

impl MetricSpec {
    pub fn new(norm: Norm, q: f64) -> Result<MetricSpec> {
        if !q.is_finite() || q < 1.0 {
            return Err(Error::InvalidParameter(format!("exponent q must be >= 1, got {q}")));
        }
        Ok(MetricSpec { norm, q })
    }

    /// Euclidean distance, `q = 1` (the Weber problem).
    pub const fn euclidean() -> MetricSpec {
        MetricSpec { norm: Norm::L2, q: 1.0 }
    }

    /// Squared Euclidean distance.
    pub const fn squared_euclidean() -> MetricSpec {
        MetricSpec { norm: Norm::L2, q: 2.0 }
    }

    /// Manhattan distance, `q = 1`.
    pub const fn manhattan() -> MetricSpec {
        MetricSpec { norm: Norm::L1, q: 1.0 }
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Raises an unexponentiated norm distance to the power `q`.
    #[inline]
    pub fn pow(&self, d: f64) -> f64 {
        if self.q == 1.0 {
            d
        } else if self.q == 2.0 {
            d * d
        } else {
            d.powf(self.q)
        }
    }

    /// Radius in norm units of a ball of powered radius `c`, i.e. `c^(1/q)`.
    #[inline]
    pub fn root(&self, c: f64) -> f64 {
        if self.q == 1.0 {
            c
        } else if self.q == 2.0 {
            c.sqrt()
        } else {
            c.powf(1.0 / self.q)
        }
    }

    #[inline]
    pub(crate) fn norm_dist(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        self.norm.eval(b[0] - a[0], b[1] - a[1])
    }

    #[inline]
    pub(crate) fn dist_pow_raw(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        if self.norm == Norm::L2 && self.q == 2.0 {
            dx * dx + dy * dy
        } else {
            self.pow(self.norm.eval(dx, dy))
        }
    }
}

pub(crate) fn validate_cutoff(c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("cutoff C must be positive and finite, got {c}")))
    }
}

pub(crate) fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must be positive and finite, got {alpha}")))
    }
}

/// Cutoff `C > 0` and, optionally, the empty-solution factor `α > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffSpec {
    cutoff: f64,
    alpha: Option<f64>,
}

impl CutoffSpec {
    pub fn new(cutoff: f64, alpha: Option<f64>) -> Result<CutoffSpec> {
        validate_cutoff(cutoff)?;
        if let Some(a) = alpha {
            validate_alpha(a)?;
        }
        Ok(CutoffSpec { cutoff, alpha })
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    /// Per-point price of the empty location, `α·C`.
    pub fn empty_cost(&self) -> Option<f64> {
        self.alpha.map(|a| a * self.cutoff)
    }
}

/// A point, or the empty location `∅`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedLocation {
    Point(Point),
    Empty,
}

impl ExtendedLocation {
    pub fn is_empty(&self) -> bool {
        matches!(self, ExtendedLocation::Empty)
    }

    pub fn point(&self) -> Option<Point> {
        match self {
            ExtendedLocation::Point(p) => Some(*p),
            ExtendedLocation::Empty => None,
        }
    }
}

impl From<Point> for ExtendedLocation {
    fn from(p: Point) -> Self {
        ExtendedLocation::Point(p)
    }
}

impl fmt::Display for ExtendedLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedLocation::Point(p) => p.fmt(f),
            ExtendedLocation::Empty => f.write_str("EMPTY"),
        }
    }
}

/// A nonempty, ordered set of demand points of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pts: Vec<[f64; 2]>,
    dim: usize,
}

impl PointCloud {
    pub fn new(points: Vec<Point>) -> Result<PointCloud> {
        let first = points.first().ok_or(Error::EmptyCloud)?;
        let dim = first.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, p.dim()));
        }
        Ok(PointCloud { pts: points.iter().map(Point::raw).collect(), dim })
    }

    /// Planar cloud from coordinate pairs.
    pub fn from_xy(xy: &[(f64, f64)]) -> Result<PointCloud> {
        xy.iter()
            .map(|&(x, y)| Point::try_new(&[x, y]))
            .collect::<Result<Vec<_>>>()
            .and_then(PointCloud::new)
    }

    /// One-dimensional cloud.
    pub fn from_line(xs: &[f64]) -> Result<PointCloud> {
        xs.iter()
            .map(|&x| Point::try_new(&[x]))
            .collect::<Result<Vec<_>>>()
            .and_then(PointCloud::new)
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    /// Always false; clouds are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> Point {
        Point::from_raw(self.pts[i], self.dim)
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.pts.iter().map(move |&c| Point::from_raw(c, self.dim))
    }

    pub fn to_points(&self) -> Vec<Point> {
        self.iter().collect()
    }

    /// The points selected by `idx`, in the given order.
    pub fn subset(&self, idx: &[usize]) -> Result<PointCloud> {
        if idx.is_empty() {
            return Err(Error::EmptySubset);
        }
        let pts = idx
            .iter()
            .map(|&i| {
                self.pts
                    .get(i)
                    .copied()
                    .ok_or(Error::IndexOutOfRange { index: i, len: self.len() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointCloud { pts, dim: self.dim })
    }

    pub(crate) fn raw(&self) -> &[[f64; 2]] {
        &self.pts
    }

    pub(crate) fn check_dim(&self, p: &Point) -> Result<()> {
        if p.dim() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(self.dim, p.dim()))
        }
    }
}

fn same_dim(x: &Point, y: &Point) -> Result<()> {
    if x.dim() == y.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(x.dim(), y.dim()))
    }
}

/// `‖y − x‖ₚ^q`.
pub fn dist_pow(x: &Point, y: &Point, m: &MetricSpec) -> Result<f64> {
    same_dim(x, y)?;
    Ok(m.dist_pow_raw(x.raw(), y.raw()))
}

/// `min{‖y − x‖ₚ^q, C}`.
pub fn dist_cut(x: &Point, y: &Point, m: &MetricSpec, cutoff: f64) -> Result<f64> {
    validate_cutoff(cutoff)?;
    Ok(dist_pow(x, y, m)?.min(cutoff))
}

/// Cutoff distance extended by the empty location.
pub fn dist_empty(
    x: &ExtendedLocation,
    y: &ExtendedLocation,
    m: &MetricSpec,
    cutoff: f64,
    alpha: f64,
) -> Result<f64> {
    validate_cutoff(cutoff)?;
    validate_alpha(alpha)?;
    match (x, y) {
        (ExtendedLocation::Empty, ExtendedLocation::Empty) => Ok(0.0),
        (ExtendedLocation::Empty, _) | (_, ExtendedLocation::Empty) => Ok(alpha * cutoff),
        (ExtendedLocation::Point(a), ExtendedLocation::Point(b)) => dist_cut(a, b, m, cutoff),
    }
}

/// `Σ min{d^q(x, a), C}` over the raw points.
#[inline]
pub(crate) fn cut_sum(x: [f64; 2], pts: &[[f64; 2]], m: &MetricSpec, cutoff: f64) -> f64 {
    pts.iter().map(|&a| m.dist_pow_raw(x, a).min(cutoff)).sum()
}

#[inline]
pub(crate) fn pow_sum(x: [f64; 2], pts: &[[f64; 2]], m: &MetricSpec) -> f64 {
    pts.iter().map(|&a| m.dist_pow_raw(x, a)).sum()
}

/// Objective value of `x` for the classic problem (`spec = None`), the cutoff
/// problem, or the problem with empty option, depending on `spec`.
pub fn objective(
    x: &ExtendedLocation,
    a: &PointCloud,
    m: &MetricSpec,
    spec: Option<&CutoffSpec>,
) -> Result<f64> {
    match (x, spec) {
        (ExtendedLocation::Empty, Some(s)) => {
            let cost = s.empty_cost().ok_or(Error::MissingAlpha)?;
            Ok(a.len() as f64 * cost)
        }
        (ExtendedLocation::Empty, None) => Err(Error::MissingAlpha),
        (ExtendedLocation::Point(p), None) => {
            a.check_dim(p)?;
            Ok(pow_sum(p.raw(), a.raw(), m))
        }
        (ExtendedLocation::Point(p), Some(s)) => {
            a.check_dim(p)?;
            Ok(cut_sum(p.raw(), a.raw(), m, s.cutoff()))
        }
    }
}

/// Partitions indices into points within powered distance `C` of `x`
/// (active, boundary inclusive) and the rest (constant).
pub fn active_const_split(
    x: &Point,
    a: &PointCloud,
    m: &MetricSpec,
    cutoff: f64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    validate_cutoff(cutoff)?;
    a.check_dim(x)?;
    let (active, constant): (Vec<usize>, Vec<usize>) =
        (0..a.len()).partition(|&i| m.dist_pow_raw(x.raw(), a.raw()[i]) <= cutoff);
    Ok((active, constant))
}

/// Largest unexponentiated pairwise distance; `0` for a singleton.
pub fn diameter(a: &PointCloud, m: &MetricSpec) -> f64 {
    let pts = a.raw();
    let mut best = 0.0_f64;
    for (i, &p) in pts.iter().enumerate() {
        for &r in &pts[i + 1..] {
            best = best.max(m.norm_dist(p, r));
        }
    }
    best
}

/// Mean cut distance over ordered pairs of distinct indices.
pub fn mpd(a: &PointCloud, m: &MetricSpec, cutoff: f64) -> Result<f64> {
    validate_cutoff(cutoff)?;
    let n = a.len();
    if n < 2 {
        return Err(Error::TooFewPoints);
    }
    let pts = a.raw();
    let mut sum = 0.0;
    for (i, &p) in pts.iter().enumerate() {
        for &r in &pts[i + 1..] {
            sum += m.dist_pow_raw(p, r).min(cutoff);
        }
    }
    Ok(2.0 * sum / (n * (n - 1)) as f64)
}

/// [`mpd`] as a fraction of `C`, in `[0, 1]`.
pub fn mpd_normalized(a: &PointCloud, m: &MetricSpec, cutoff: f64) -> Result<f64> {
    Ok(mpd(a, m, cutoff)? / cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn powered_distances() {
        let (o, a) = (p(0.0, 0.0), p(3.0, 4.0));
        assert_eq!(dist_pow(&o, &a, &MetricSpec::euclidean()).unwrap(), 5.0);
        assert_eq!(dist_pow(&o, &a, &MetricSpec::squared_euclidean()).unwrap(), 25.0);
        assert_eq!(dist_pow(&o, &a, &MetricSpec::manhattan()).unwrap(), 7.0);
        let linf = MetricSpec::new(Norm::LInf, 1.0).unwrap();
        assert_eq!(dist_pow(&o, &a, &linf).unwrap(), 4.0);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let err = dist_pow(&p(0.0, 0.0), &Point::on_line(1.0), &MetricSpec::euclidean());
        assert!(matches!(err, Err(Error::DimensionMismatch(2, 1))));
    }

    #[test]
    fn cut_distance() {
        let m = MetricSpec::euclidean();
        let (o, a) = (p(0.0, 0.0), p(3.0, 4.0));
        assert_eq!(dist_cut(&o, &a, &m, 10.0).unwrap(), 5.0);
        assert_eq!(dist_cut(&o, &a, &m, 2.0).unwrap(), 2.0);
        assert_eq!(dist_cut(&a, &a, &m, 0.3).unwrap(), 0.0);
        assert!(dist_cut(&o, &a, &m, 0.0).is_err());
    }

    #[test]
    fn empty_distance() {
        let m = MetricSpec::euclidean();
        let e = ExtendedLocation::Empty;
        let one = ExtendedLocation::Point(p(1.0, 1.0));
        assert_eq!(dist_empty(&e, &one, &m, 4.0, 0.5).unwrap(), 2.0);
        assert_eq!(dist_empty(&one, &e, &m, 4.0, 0.5).unwrap(), 2.0);
        assert_eq!(dist_empty(&e, &e, &m, 4.0, 0.5).unwrap(), 0.0);
        let (o, a) = (p(0.0, 0.0).into(), p(3.0, 4.0).into());
        assert_eq!(dist_empty(&o, &a, &m, 2.0, 0.5).unwrap(), 2.0);
    }

    fn triangle() -> PointCloud {
        let h = 3f64.sqrt() / 2.0;
        PointCloud::from_xy(&[(-0.5, h), (-0.5, -h), (1.0, 0.0)]).unwrap()
    }

    #[test]
    fn triangle_objectives() {
        let a = triangle();
        let spec = CutoffSpec::new(1.0, None).unwrap();
        let origin = p(0.0, 0.0).into();
        let eta = p(-0.5, 0.0).into();
        let m1 = MetricSpec::euclidean();
        assert!((objective(&origin, &a, &m1, Some(&spec)).unwrap() - 3.0).abs() < 1e-12);
        let v = objective(&eta, &a, &m1, Some(&spec)).unwrap();
        assert!((v - (3f64.sqrt() + 1.0)).abs() < 1e-12);
        let m2 = MetricSpec::squared_euclidean();
        assert!((objective(&eta, &a, &m2, Some(&spec)).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn empty_objective_requires_alpha() {
        let a = triangle();
        let m = MetricSpec::euclidean();
        let no_alpha = CutoffSpec::new(1.0, None).unwrap();
        let e = ExtendedLocation::Empty;
        assert!(matches!(objective(&e, &a, &m, Some(&no_alpha)), Err(Error::MissingAlpha)));
        assert!(matches!(objective(&e, &a, &m, None), Err(Error::MissingAlpha)));
        let with = CutoffSpec::new(2.0, Some(0.25)).unwrap();
        assert_eq!(objective(&e, &a, &m, Some(&with)).unwrap(), 1.5);
    }

    #[test]
    fn split_on_the_line() {
        let a = PointCloud::from_line(&[0.0, 0.5, 5.0, 6.0, 7.0]).unwrap();
        let m = MetricSpec::manhattan();
        let (act, con) = active_const_split(&Point::on_line(6.0), &a, &m, 1.5).unwrap();
        assert_eq!(act, vec![2, 3, 4]);
        assert_eq!(con, vec![0, 1]);
        let (act, con) = active_const_split(&Point::on_line(6.0), &a, &m, 100.0).unwrap();
        assert_eq!(act.len(), 5);
        assert!(con.is_empty());
        let (act, con) = active_const_split(&Point::on_line(100.0), &a, &m, 1.0).unwrap();
        assert!(act.is_empty());
        assert_eq!(con.len(), 5);
    }

    #[test]
    fn boundary_points_are_active() {
        let a = PointCloud::from_xy(&[(3.0, 4.0)]).unwrap();
        let (act, _) =
            active_const_split(&p(0.0, 0.0), &a, &MetricSpec::euclidean(), 5.0).unwrap();
        assert_eq!(act, vec![0]);
    }

    #[test]
    fn diameters() {
        let m = MetricSpec::euclidean();
        assert_eq!(diameter(&PointCloud::from_xy(&[(0.0, 0.0), (3.0, 4.0)]).unwrap(), &m), 5.0);
        assert_eq!(diameter(&PointCloud::from_xy(&[(1.0, 2.0)]).unwrap(), &m), 0.0);
        let line = PointCloud::from_line(&[0.0, 0.5, 5.0, 6.0, 7.0]).unwrap();
        assert_eq!(diameter(&line, &m), 7.0);
    }

    #[test]
    fn mean_pairwise_distance() {
        let m = MetricSpec::euclidean();
        let pair = PointCloud::from_line(&[0.0, 0.9]).unwrap();
        assert!((mpd(&pair, &m, 1.0).unwrap() - 0.9).abs() < 1e-15);
        let twins = PointCloud::from_xy(&[(1.0, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!(mpd(&twins, &m, 1.0).unwrap(), 0.0);
        let single = PointCloud::from_line(&[1.0]).unwrap();
        assert!(matches!(mpd(&single, &m, 1.0), Err(Error::TooFewPoints)));
        let far = PointCloud::from_line(&[0.0, 10.0]).unwrap();
        assert_eq!(mpd_normalized(&far, &m, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn cloud_construction() {
        assert!(matches!(PointCloud::new(vec![]), Err(Error::EmptyCloud)));
        assert!(matches!(
            PointCloud::new(vec![Point::on_line(1.0), Point::new(1.0, 2.0)]),
            Err(Error::DimensionMismatch(1, 2))
        ));
        assert!(matches!(Point::try_new(&[f64::NAN]), Err(Error::NonFinite)));
        assert!(matches!(Point::try_new(&[1.0, 2.0, 3.0]), Err(Error::UnsupportedDimension(3))));
        let a = PointCloud::from_xy(&[(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert!(matches!(a.subset(&[]), Err(Error::EmptySubset)));
        assert!(matches!(a.subset(&[2]), Err(Error::IndexOutOfRange { index: 2, len: 2 })));
    }

    #[test]
    fn metric_validation() {
        assert!(MetricSpec::new(Norm::L2, 0.5).is_err());
        assert!(MetricSpec::new(Norm::L2, f64::NAN).is_err());
        assert!(CutoffSpec::new(1.0, Some(0.0)).is_err());
        assert_eq!("inf".parse::<Norm>().unwrap(), Norm::LInf);
        assert!("3".parse::<Norm>().is_err());
    }
}
