//! Sorted-by-x index answering "which points lie within norm radius r" queries.
//!
//! Every supported norm dominates `|dx|`, so a ball of radius `r` only reaches
//! points in the vertical band `|x − cx| ≤ r`.

use crate::metric::MetricSpec;

pub(crate) struct NeighborIndex {
    xs: Vec<f64>,
    ids: Vec<usize>,
}

impl NeighborIndex {
    pub(crate) fn new(pts: &[[f64; 2]]) -> NeighborIndex {
        let mut ids: Vec<usize> = (0..pts.len()).collect();
        ids.sort_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]).then(a.cmp(&b)));
        let xs = ids.iter().map(|&i| pts[i][0]).collect();
        NeighborIndex { xs, ids }
    }

    /// Ids of points whose x coordinate is within `r` of `cx`, in x order.
    pub(crate) fn band(&self, cx: f64, r: f64) -> &[usize] {
        // Widen slightly so rounding in `d ≤ r` versus `d^q ≤ C` never drops
        // a point; callers apply the exact test.
        let r = r * (1.0 + 1e-9) + 1e-300;
        let lo = self.xs.partition_point(|&x| x < cx - r);
        let hi = self.xs.partition_point(|&x| x <= cx + r);
        &self.ids[lo..hi]
    }

    /// `Σ min{d^q(x, a), C}` over all points.
    pub(crate) fn cut_value(
        &self,
        pts: &[[f64; 2]],
        x: [f64; 2],
        m: &MetricSpec,
        cutoff: f64,
        radius: f64,
    ) -> f64 {
        let band = self.band(x[0], radius);
        let inner: f64 = band.iter().map(|&k| m.dist_pow_raw(x, pts[k]).min(cutoff)).sum();
        inner + (pts.len() - band.len()) as f64 * cutoff
    }

    /// Pushes the ids with `d^q(x, a) ≤ limit` onto `out`, unsorted.
    pub(crate) fn within(
        &self,
        pts: &[[f64; 2]],
        x: [f64; 2],
        m: &MetricSpec,
        limit: f64,
        radius: f64,
        out: &mut Vec<usize>,
    ) {
        out.extend(self.band(x[0], radius).iter().copied().filter(|&k| m.dist_pow_raw(x, pts[k]) <= limit));
    }
}
