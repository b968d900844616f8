use barycut::scenarios::{generate, rectangles, ScenarioSpec};

#[test]
fn mean_count_is_the_expected_count() {
    let draws = 1000;
    let total: usize = (0..draws).map(|s| generate(&ScenarioSpec::new(1, s).unwrap()).unwrap().len()).sum();
    let mean = total as f64 / draws as f64;
    assert!((mean - 600.0).abs() <= 3.0 * (600.0f64 / draws as f64).sqrt(), "{mean}");
}

#[test]
fn half_the_mass_goes_to_the_inner_square() {
    let inner = rectangles(3)[1];
    let (mut inside, mut total) = (0usize, 0usize);
    for s in 0..100 {
        let a = generate(&ScenarioSpec::new(3, s).unwrap()).unwrap();
        total += a.len();
        inside += a
            .iter()
            .filter(|p| inner[0] <= p.x() && p.x() <= inner[1] && inner[2] <= p.y() && p.y() <= inner[3])
            .count();
    }
    // Half the points are drawn in the inner square; the uniform half lands
    // there with probability equal to its area.
    let area = (inner[1] - inner[0]) * (inner[3] - inner[2]);
    let p = 0.5 + 0.5 * area;
    let frac = inside as f64 / total as f64;
    let sd = (p * (1.0 - p) / total as f64).sqrt();
    assert!((frac - p).abs() <= 4.0 * sd, "{frac} vs {p}");
}

#[test]
fn cluster_scenario_concentrates_mass() {
    // With σ = 0.025 almost all cluster points sit near one of four centres,
    // so most points have many neighbours within 0.1.
    let a = generate(&ScenarioSpec::new(6, 4).unwrap()).unwrap();
    let pts = a.to_points();
    let crowded = pts
        .iter()
        .filter(|p| pts.iter().filter(|q| (p.x() - q.x()).hypot(p.y() - q.y()) < 0.1).count() > 50)
        .count();
    assert!(crowded as f64 > 0.8 * pts.len() as f64);
}
