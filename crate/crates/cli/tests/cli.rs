use std::collections::HashMap;
use std::io::Write;
use std::process::{Command, Output};

fn barycut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_barycut")).args(args).output().expect("binary runs")
}

fn record(out: &Output) -> HashMap<String, String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter_map(|l| l.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
        .collect()
}

fn points_file(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

#[test]
fn solve_triangle_from_csv() {
    let h = 3f64.sqrt() / 2.0;
    let f = points_file(&format!("x,y\n-0.5,{h}\n-0.5,{}\n1,0\n", -h));
    let path = f.path().to_str().unwrap();
    let out = barycut(&["--input", path, "--p", "2", "--q", "1", "--C", "1", "--algorithm", "pruned"]);
    assert_eq!(out.status.code(), Some(0));
    let r = record(&out);
    assert!((r["value"].parse::<f64>().unwrap() - 2.0).abs() < 1e-9);
    for key in ["location", "active", "points_skipped", "candidates_evaluated", "reductions", "wall_time_s"] {
        assert!(r.contains_key(key), "{key}");
    }
}

#[test]
fn algorithms_agree() {
    let f = points_file("0,0\n0.3,0.1\n0.9,0.8\n0.85,0.75\n0.2,0.6\n0.21,0.58\n");
    let path = f.path().to_str().unwrap();
    let values: Vec<f64> = ["baseline", "pruned", "pruned_empty"]
        .iter()
        .map(|alg| {
            let out = barycut(&["--input", path, "--q", "2", "--C", "0.1", "--alpha", "0.9", "--algorithm", alg]);
            assert_eq!(out.status.code(), Some(0));
            record(&out)["value"].parse().unwrap()
        })
        .collect();
    assert!(values.iter().all(|v| (v - values[0]).abs() <= 1e-9 * values[0]));
}

#[test]
fn c_minus_eps_keeps_a_point() {
    let out = barycut(&["--fixture", "cminuseps", "--eps", "0.1", "--C", "1", "--alpha", "0.5", "--algorithm", "pruned_empty"]);
    let r = record(&out);
    assert_ne!(r["location"], "EMPTY");
    assert!((r["value"].parse::<f64>().unwrap() - 0.9).abs() < 1e-9);
}

#[test]
fn output_is_stable_apart_from_timing() {
    let args = ["--scenario", "6", "--seed", "3", "--q", "2", "--C", "0.002", "--alpha", "0.5"];
    let strip = |o: Output| {
        String::from_utf8(o.stdout).unwrap().lines().filter(|l| !l.starts_with("wall_time_s=")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(strip(barycut(&args)), strip(barycut(&args)));
}

#[test]
fn sweep_rows() {
    let out = barycut(&["--fixture", "discontinuity", "--p", "1", "--sweep"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let starts: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(starts, vec![0.0, 0.5, 1.5, 5.25]);

    let out = barycut(&["--fixture", "discontinuity", "--p", "1", "--sweep", "--alpha", "0.5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let crossing = text.lines().find(|l| l.ends_with(",crossing")).unwrap();
    assert!(crossing.starts_with("4,"), "{crossing}");

    let f = points_file("1,2\n");
    let out = barycut(&["--input", f.path().to_str().unwrap(), "--sweep"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("0,0,0,1,2,"));
}

#[test]
fn report_lists_every_condition() {
    let out = barycut(&["--fixture", "chalfpluseps", "--C", "1", "--alpha", "0.5", "--report"]);
    assert_eq!(out.status.code(), Some(0));
    let r = record(&out);
    for key in ["enclosing_ball", "tiny_cutoff", "sparse_balls", "small_alpha", "alpha_above_mpd", "recommendation"] {
        assert!(r.contains_key(key), "{key}");
    }
}

#[test]
fn generate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s2.csv");
    let out = barycut(&["--generate", "--scenario", "2", "--seed", "7", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let solved = barycut(&["--input", path.to_str().unwrap(), "--q", "2", "--C", "0.0001", "--alpha", "0.5"]);
    assert_eq!(solved.status.code(), Some(0));
    assert_eq!(record(&solved)["location"], "EMPTY");
}

#[test]
fn bench_writes_csv() {
    let out = barycut(&["--bench", "--scenario", "1,5", "--C", "0.01", "--replicates", "2", "--expected-points", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("scenario,C,algorithm,skip_fraction,rel_time,value_mean"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn exit_codes() {
    assert_eq!(barycut(&["--fixture", "triangle", "--q", "3", "--C", "1"]).status.code(), Some(64));
    assert_eq!(barycut(&["--bench", "--replicates", "0"]).status.code(), Some(64));
    assert_eq!(barycut(&["--fixture", "triangle"]).status.code(), Some(64));
    assert_eq!(barycut(&["--fixture", "triangle", "--C", "1", "--algorithm", "pruned_empty"]).status.code(), Some(64));
    assert_eq!(barycut(&["--fixture", "triangle", "--C", "-1"]).status.code(), Some(64));
    assert_eq!(barycut(&["--sweep", "--bench", "--scenario", "1"]).status.code(), Some(64));
    assert_eq!(barycut(&["--nonsense"]).status.code(), Some(64));
    assert_eq!(barycut(&["--input", "/definitely/missing.csv", "--C", "1"]).status.code(), Some(2));
    let bad = points_file("0,0\n1,zz\n");
    assert_eq!(barycut(&["--input", bad.path().to_str().unwrap(), "--C", "1"]).status.code(), Some(2));
    assert_eq!(barycut(&["--help"]).status.code(), Some(0));
}
