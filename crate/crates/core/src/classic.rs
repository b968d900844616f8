//! The classic barycenter problem: minimize `Σ d^q(x, a)` over the plane.
//!
//! Three closed or iterative forms are supported:
//!
//! | norm | q | method |
//! |------|---|--------|
//! | ℓ2   | 2 | coordinate-wise mean |
//! | ℓ1   | 1 | coordinate-wise median |
//! | ℓ2   | 1 | Weiszfeld iteration |
//!
//! On the line every norm coincides, so one-dimensional clouds accept any norm
//! with `q ∈ {1, 2}`.

use crate::error::{Error, Result};
use crate::metric::{pow_sum, MetricSpec, Norm, Point, PointCloud};

/// Relative move size that ends a Weiszfeld run.
pub const WEISZFELD_TOLERANCE: f64 = 1e-12;
/// Iteration budget of a Weiszfeld run.
pub const WEISZFELD_MAX_ITER: usize = 10_000;

/// An optimal location of the classic problem.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicSolution {
    pub location: Point,
    pub value: f64,
    /// Weiszfeld iterations; `0` for closed forms.
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Method {
    Mean,
    Median,
    Weiszfeld,
}

pub(crate) fn method(m: &MetricSpec, dim: usize) -> Result<Method> {
    match (dim, m.norm(), m.q()) {
        (1, _, q) if q == 1.0 => Ok(Method::Median),
        (1, _, q) if q == 2.0 => Ok(Method::Mean),
        (2, Norm::L2, q) if q == 2.0 => Ok(Method::Mean),
        (2, Norm::L1, q) if q == 1.0 => Ok(Method::Median),
        (2, Norm::L2, q) if q == 1.0 => Ok(Method::Weiszfeld),
        (_, norm, q) => Err(Error::Unsupported(format!(
            "no barycenter solver for p={norm}, q={q} in {dim}-D"
        ))),
    }
}

/// Solves the classic problem on raw coordinates; returns location and
/// iteration count. `pts` must be nonempty.
pub(crate) fn solve_raw(pts: &[[f64; 2]], method: Method) -> ([f64; 2], usize) {
    debug_assert!(!pts.is_empty());
    match method {
        Method::Mean => (mean(pts), 0),
        Method::Median => (median(pts), 0),
        Method::Weiszfeld => weiszfeld(pts),
    }
}

fn mean(pts: &[[f64; 2]]) -> [f64; 2] {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p[0], sy + p[1]));
    [sx / n, sy / n]
}

fn median_of(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        (v[k - 1] + v[k]) / 2.0
    }
}

fn median(pts: &[[f64; 2]]) -> [f64; 2] {
    [
        median_of(pts.iter().map(|p| p[0]).collect()),
        median_of(pts.iter().map(|p| p[1]).collect()),
    ]
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

/// Tests whether data point `x` is a minimizer: the pull of the other points
/// must not exceed the multiplicity of `x`.
fn data_point_optimal(pts: &[[f64; 2]], x: [f64; 2], snap: f64) -> bool {
    let (mut rx, mut ry, mut w) = (0.0, 0.0, 0.0);
    for &a in pts {
        let d = dist(x, a);
        if d <= snap {
            w += 1.0;
        } else {
            rx += (a[0] - x[0]) / d;
            ry += (a[1] - x[1]) / d;
        }
    }
    rx.hypot(ry) <= w
}

fn weiszfeld(pts: &[[f64; 2]]) -> ([f64; 2], usize) {
    match pts {
        [a] => return (*a, 0),
        [a, b] => return ([(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0], 0),
        _ => {}
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let scale = (hi[0] - lo[0]).hypot(hi[1] - lo[1]);
    if scale == 0.0 {
        return (pts[0], 0);
    }
    let snap = 1e-14 * scale;
    let mut x = mean(pts);
    let mut iterations = 0;
    while iterations < WEISZFELD_MAX_ITER {
        iterations += 1;
        let (mut nx, mut ny, mut den, mut w) = (0.0, 0.0, 0.0, 0.0);
        for &a in pts {
            let d = dist(x, a);
            if d <= snap {
                w += 1.0;
            } else {
                nx += a[0] / d;
                ny += a[1] / d;
                den += 1.0 / d;
            }
        }
        if den == 0.0 {
            break;
        }
        let t = [nx / den, ny / den];
        let next = if w > 0.0 {
            // Sitting on a data point: Vardi-Zhang modified step.
            let r = den * dist(x, t);
            if r <= w {
                break;
            }
            let s = w / r;
            [(1.0 - s) * t[0] + s * x[0], (1.0 - s) * t[1] + s * x[1]]
        } else {
            t
        };
        let step = dist(x, next);
        x = next;
        if step <= WEISZFELD_TOLERANCE * scale {
            break;
        }
        // Convergence towards a data point is sublinear; test it directly.
        if iterations % 64 == 0 {
            let near = nearest(pts, x);
            if data_point_optimal(pts, near, snap) {
                x = near;
                break;
            }
        }
    }
    let near = nearest(pts, x);
    if near != x && data_point_optimal(pts, near, snap) {
        let f = |y: [f64; 2]| pts.iter().map(|&a| dist(y, a)).sum::<f64>();
        if f(near) <= f(x) {
            x = near;
        }
    }
    (x, iterations)
}

fn nearest(pts: &[[f64; 2]], x: [f64; 2]) -> [f64; 2] {
    *pts.iter()
        .min_by(|a, b| dist(x, **a).total_cmp(&dist(x, **b)))
        .expect("nonempty")
}

/// Solves the classic problem for the whole cloud.
pub fn solve_classic(a: &PointCloud, m: &MetricSpec) -> Result<ClassicSolution> {
    let method = method(m, a.dim())?;
    let (x, iterations) = solve_raw(a.raw(), method);
    Ok(ClassicSolution {
        location: Point::from_raw(x, a.dim()),
        value: pow_sum(x, a.raw(), m),
        iterations,
    })
}

/// Solves the classic problem for the points selected by `idx`; the value is
/// measured on that subset only.
pub fn solve_classic_subset(a: &PointCloud, idx: &[usize], m: &MetricSpec) -> Result<ClassicSolution> {
    solve_classic(&a.subset(idx)?, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_weber_point_is_the_center() {
        let h = 3f64.sqrt() / 2.0;
        let a = PointCloud::from_xy(&[(-0.5, h), (-0.5, -h), (1.0, 0.0)]).unwrap();
        let s = solve_classic(&a, &MetricSpec::euclidean()).unwrap();
        assert!(s.location.x().abs() < 1e-12 && s.location.y().abs() < 1e-12);
        assert!((s.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn singleton_and_pair() {
        let m = MetricSpec::euclidean();
        let one = PointCloud::from_xy(&[(0.3, 0.7)]).unwrap();
        let s = solve_classic(&one, &m).unwrap();
        assert_eq!(s.location, Point::new(0.3, 0.7));
        assert_eq!(s.value, 0.0);
        let two = PointCloud::from_xy(&[(0.0, 0.0), (3.0, 4.0)]).unwrap();
        for q in [1.0, 2.0] {
            let m = MetricSpec::new(Norm::L2, q).unwrap();
            let s = solve_classic(&two, &m).unwrap();
            assert!((s.value - 2f64.powf(1.0 - q) * 5f64.powf(q)).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_and_median() {
        let a = PointCloud::from_xy(&[(0.0, 0.0), (1.0, 5.0), (8.0, 1.0), (3.0, 2.0)]).unwrap();
        let s = solve_classic(&a, &MetricSpec::squared_euclidean()).unwrap();
        assert_eq!(s.location, Point::new(3.0, 2.0));
        let s = solve_classic(&a, &MetricSpec::manhattan()).unwrap();
        assert_eq!(s.location, Point::new(2.0, 1.5));
    }

    #[test]
    fn window_median_on_the_line() {
        let a = PointCloud::from_line(&[0.0, 0.5, 5.0, 6.0, 7.0]).unwrap();
        let s = solve_classic_subset(&a, &[2, 3, 4], &MetricSpec::manhattan()).unwrap();
        assert_eq!(s.location, Point::on_line(6.0));
        assert_eq!(s.value, 2.0);
        let s = solve_classic_subset(&a, &[3], &MetricSpec::manhattan()).unwrap();
        assert_eq!((s.location, s.value), (Point::on_line(6.0), 0.0));
        assert!(matches!(
            solve_classic_subset(&a, &[], &MetricSpec::manhattan()),
            Err(Error::EmptySubset)
        ));
    }

    #[test]
    fn unsupported_pairs() {
        let a = PointCloud::from_xy(&[(0.0, 0.0)]).unwrap();
        for m in [
            MetricSpec::new(Norm::L1, 2.0).unwrap(),
            MetricSpec::new(Norm::LInf, 1.0).unwrap(),
            MetricSpec::new(Norm::L2, 3.0).unwrap(),
        ] {
            assert!(matches!(solve_classic(&a, &m), Err(Error::Unsupported(_))));
        }
        let line = PointCloud::from_line(&[1.0]).unwrap();
        assert!(solve_classic(&line, &MetricSpec::new(Norm::LInf, 1.0).unwrap()).is_ok());
    }

    #[test]
    fn weiszfeld_stops_on_an_optimal_data_point() {
        // The heavy corner point attracts the whole mass.
        let a = PointCloud::from_xy(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
            .unwrap();
        let s = solve_classic(&a, &MetricSpec::euclidean()).unwrap();
        assert_eq!(s.location, Point::new(0.0, 0.0));
        assert!((s.value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn weiszfeld_collinear_points() {
        let a = PointCloud::from_xy(&[(0.0, 0.0), (1.0, 0.0), (5.0, 0.0)]).unwrap();
        let s = solve_classic(&a, &MetricSpec::euclidean()).unwrap();
        assert!((s.location.x() - 1.0).abs() < 1e-9 && s.location.y().abs() < 1e-9);
        assert!((s.value - 5.0).abs() < 1e-9);
    }
}
