use barycut::classic::solve_classic;
use barycut::cutoff::{solve_cutoff, Algorithm, SolveOptions};
use barycut::metric::{mpd, objective, ExtendedLocation, Point};
use barycut::oracle::{fixture, fixture_with, oracle_subsets, FixtureParams, FIXTURE_NAMES};
use barycut::sensitivity::{compute_g, compute_g_alpha};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn every_fixture_agrees_across_solvers() {
    for name in FIXTURE_NAMES {
        let f = fixture(name).unwrap();
        let (c, alpha) = (f.cutoff.cutoff(), f.cutoff.alpha());
        let want = oracle_subsets(&f.cloud, &f.metric, c, alpha).unwrap();
        for alg in Algorithm::ALL {
            let mut opts = SolveOptions::new(alg);
            opts.alpha = alpha;
            if alpha.is_none() && alg == Algorithm::PrunedEmpty {
                continue;
            }
            let got = solve_cutoff(&f.cloud, &f.metric, c, &opts).unwrap();
            assert!(close(got.value, want.value), "{name} {alg}: {} vs {}", got.value, want.value);
        }
        if let Some(v) = f.scalar("classic_value") {
            assert!(close(solve_classic(&f.cloud, &f.metric).unwrap().value, v), "{name}");
        }
        if let Some(v) = f.scalar("cutoff_value").filter(|_| name != "chalfpluseps") {
            assert!(close(want.value, v), "{name}: {} vs {v}", want.value);
        }
    }
}

#[test]
fn triangle() {
    let f = fixture("triangle").unwrap();
    let eta = ExtendedLocation::Point(Point::new(-0.5, 0.0));
    assert!(close(objective(&eta, &f.cloud, &f.metric, Some(&f.cutoff)).unwrap(), 3f64.sqrt() + 1.0));
    let s = solve_cutoff(&f.cloud, &f.metric, 1.0, &SolveOptions::new(Algorithm::Pruned)).unwrap();
    assert!(close(s.value, 2.0));
}

#[test]
fn triangle_squared() {
    let f = fixture("triangleq2").unwrap();
    let at = |p: Point| objective(&p.into(), &f.cloud, &f.metric, Some(&f.cutoff)).unwrap();
    assert!(close(at(Point::new(0.0, 0.0)), 3.0));
    assert!(close(at(Point::new(-0.5, 0.0)), 2.5));
    let s = solve_cutoff(&f.cloud, &f.metric, 1.0, &SolveOptions::new(Algorithm::Baseline)).unwrap();
    assert!(s.value <= 2.5 + 1e-12);
}

#[test]
fn c_minus_eps_keeps_a_finite_location() {
    let f = fixture_with("cminuseps", &FixtureParams { eps: 0.1, ..FixtureParams::default() }).unwrap();
    assert_eq!(f.cloud.to_points(), vec![Point::on_line(0.0), Point::on_line(0.9)]);
    let s = solve_cutoff(&f.cloud, &f.metric, 1.0, &SolveOptions::new(Algorithm::PrunedEmpty).with_alpha(0.5)).unwrap();
    assert!(!s.is_empty());
    assert!(close(s.value, 0.9));
    assert!(close(mpd(&f.cloud, &f.metric, 1.0).unwrap(), 0.9));
}

#[test]
fn c_half_plus_eps_prefers_the_empty_location() {
    let f = fixture("chalfpluseps").unwrap();
    let n = f.cloud.len() as f64 / 2.0;
    let delta = f.scalar("delta").unwrap();
    assert!(delta > 0.0);
    assert!(close(mpd(&f.cloud, &f.metric, 1.0).unwrap(), 0.55));
    let s = solve_cutoff(&f.cloud, &f.metric, 1.0, &SolveOptions::new(Algorithm::PrunedEmpty).with_alpha(0.5)).unwrap();
    assert!(s.is_empty());
    assert!(close(s.value, n));
    let finite = oracle_subsets(&f.cloud, &f.metric, 1.0, None).unwrap();
    assert!(close(finite.value, n + delta), "{} vs {}", finite.value, n + delta);
}

#[test]
fn discontinuity_sweep() {
    let f = fixture("discontinuity").unwrap();
    assert_eq!(f.cloud.to_points(), [0.0, 0.5, 5.0, 6.0, 7.0].map(Point::on_line).to_vec());
    let g = compute_g(&f.cloud, &f.metric).unwrap();
    let bp = g.breakpoints();
    assert_eq!(bp.len(), 3);
    for (k, got) in bp.iter().enumerate() {
        assert!(close(*got, f.scalar(&format!("breakpoint_{}", k + 1)).unwrap()));
    }
    assert!(close(g.evaluate(3.0), f.scalar("value_at_c3").unwrap()));
    let ga = compute_g_alpha(&g, 0.5).unwrap();
    assert!(close(ga.crossing.unwrap(), f.scalar("alpha_half_crossing").unwrap()));
}

#[test]
fn unknown_fixture() {
    assert!(fixture("nope").is_err());
}
