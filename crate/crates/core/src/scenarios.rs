//! Random point patterns in the unit square for benchmarking.
//!
//! Every pattern is a union of components (rectangles, Gaussian clusters).
//! Each component draws a Poisson count with its share of the expected total,
//! then independent coordinates. Component `k` reads from stream `k` of a
//! ChaCha8 generator seeded with the `ScenarioSpec` seed, so a pattern depends only on
//! `(id, expected_points, seed)`.
//!
//! | id | components |
//! |----|------------|
//! | 1 | `[0,1]²` |
//! | 2 | `[0,0.5]²`, `[0.4,0.9]²` (overlap `0.1 × 0.1`) |
//! | 3 | `[0,1]²`, `[0.3,0.7]²` |
//! | 4 | `[0,1]²`, `[0.35,0.65]²` |
//! | 5 | `[0,0.5]×[0.25,0.75]`, `[0.3,0.9]×[0.25,0.75]` |
//! | 6 | 4 Gaussian clusters (σ = 0.025, 90% of the mass), uniform background |
//!
//! Cluster centres are uniform in the unit square and drawn per pattern;
//! cluster points are not clipped.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};

use crate::error::{Error, Result};
use crate::metric::PointCloud;

/// Recorded in benchmark output next to the seed.
pub const PRNG_NAME: &str = "chacha8-stream-per-component";

pub const SCENARIO_IDS: [u8; 6] = [1, 2, 3, 4, 5, 6];

pub const DEFAULT_EXPECTED_POINTS: f64 = 600.0;

pub const CLUSTER_SIGMA: f64 = 0.025;

const CLUSTERS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScenarioSpec {
    pub id: u8,
    pub expected_points: f64,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn new(id: u8, seed: u64) -> Result<ScenarioSpec> {
        ScenarioSpec { id, expected_points: DEFAULT_EXPECTED_POINTS, seed }.validated()
    }

    pub fn with_expected_points(mut self, expected: f64) -> Result<ScenarioSpec> {
        self.expected_points = expected;
        self.validated()
    }

    fn validated(self) -> Result<ScenarioSpec> {
        if !SCENARIO_IDS.contains(&self.id) {
            return Err(Error::InvalidParameter(format!("scenario id must be 1..=6, got {}", self.id)));
        }
        if !(self.expected_points.is_finite() && self.expected_points > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "expected point count must be positive, got {}",
                self.expected_points
            )));
        }
        Ok(self)
    }

    /// Seed of replicate `r` in a benchmark run starting at this seed.
    pub fn replicate(&self, r: u64) -> ScenarioSpec {
        ScenarioSpec { seed: self.seed.wrapping_add(r), ..*self }
    }
}

/// `[x0, x1] × [y0, y1]`.
pub type Rect = [f64; 4];

/// The rectangles of scenarios 1 to 5; empty for scenario 6.
pub fn rectangles(id: u8) -> &'static [Rect] {
    match id {
        1 => &[[0.0, 1.0, 0.0, 1.0]],
        2 => &[[0.0, 0.5, 0.0, 0.5], [0.4, 0.9, 0.4, 0.9]],
        3 => &[[0.0, 1.0, 0.0, 1.0], [0.3, 0.7, 0.3, 0.7]],
        4 => &[[0.0, 1.0, 0.0, 1.0], [0.35, 0.65, 0.35, 0.65]],
        5 => &[[0.0, 0.5, 0.25, 0.75], [0.3, 0.9, 0.25, 0.75]],
        _ => &[],
    }
}

fn stream(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

fn count(rng: &mut ChaCha8Rng, mean: f64) -> usize {
    let n: f64 = Poisson::new(mean).expect("validated mean").sample(rng);
    n as usize
}

fn uniform_in(rng: &mut ChaCha8Rng, r: &Rect, n: usize, out: &mut Vec<(f64, f64)>) {
    for _ in 0..n {
        let x = r[0] + (r[1] - r[0]) * rng.random::<f64>();
        let y = r[2] + (r[3] - r[2]) * rng.random::<f64>();
        out.push((x, y));
    }
}

/// Draws one pattern. A draw with no points at all is repeated with the
/// streams advanced, so the result is never empty.
pub fn generate(spec: &ScenarioSpec) -> Result<PointCloud> {
    let spec = spec.validated()?;
    let mut xy = Vec::new();
    if spec.id == 6 {
        let mut centers = stream(spec.seed, 0);
        let mut clusters: Vec<ChaCha8Rng> = (1..=CLUSTERS as u64).map(|k| stream(spec.seed, k)).collect();
        let mut background = stream(spec.seed, CLUSTERS as u64 + 1);
        let share = 0.9 * spec.expected_points / CLUSTERS as f64;
        let noise = Normal::new(0.0, CLUSTER_SIGMA).expect("positive sigma");
        while xy.is_empty() {
            for rng in clusters.iter_mut() {
                let (cx, cy): (f64, f64) = (centers.random(), centers.random());
                for _ in 0..count(rng, share) {
                    xy.push((cx + noise.sample(rng), cy + noise.sample(rng)));
                }
            }
            let k = count(&mut background, 0.1 * spec.expected_points);
            uniform_in(&mut background, &[0.0, 1.0, 0.0, 1.0], k, &mut xy);
        }
    } else {
        let rects = rectangles(spec.id);
        let mut rngs: Vec<ChaCha8Rng> = (0..rects.len() as u64).map(|k| stream(spec.seed, k)).collect();
        let share = spec.expected_points / rects.len() as f64;
        while xy.is_empty() {
            for (rng, r) in rngs.iter_mut().zip(rects) {
                let k = count(rng, share);
                uniform_in(rng, r, k, &mut xy);
            }
        }
    }
    PointCloud::from_xy(&xy)
}
