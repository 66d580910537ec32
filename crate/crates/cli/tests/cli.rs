use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn p12tsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_p12tsp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn write_hexa(dir: &Path) {
    fs::write(
        dir.join("hexa.inst"),
        "p12tsp 6\ne 0 2\ne 1 2\ne 1 5\ne 2 3\ne 3 4\ne 4 5\n",
    )
    .unwrap();
    fs::write(dir.join("hexa.tour"), "tour 6\n0 1 2 3 4 5\n").unwrap();
    fs::write(dir.join("hexa.opt"), "tour 6\n0 2 3 4 5 1\n").unwrap();
}

#[test]
fn three_opt_construction_certifies_as_expected() {
    let dir = TempDir::new().unwrap();
    let (inst, tour, reference) = (path(&dir, "i"), path(&dir, "t"), path(&dir, "r"));
    let out = p12tsp(&[
        "gen",
        "--family",
        "three-opt-lb",
        "--s",
        "12",
        "--out-instance",
        &inst,
        "--out-tour",
        &tour,
        "--out-reference",
        &reference,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("tour_cost=132"));

    let out = p12tsp(&[
        "certify",
        "--k",
        "3",
        "--instance",
        &inst,
        "--tour",
        &tour,
        "--expect",
        "optimal",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("verdict=optimal k=3 predicate=plain examined="));

    let out = p12tsp(&[
        "certify",
        "--k",
        "3",
        "--instance",
        &inst,
        "--tour",
        &tour,
        "--expect",
        "non-optimal",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn certificates_do_not_depend_on_workers() {
    let dir = TempDir::new().unwrap();
    let (inst, tour) = (path(&dir, "i"), path(&dir, "t"));
    let out = p12tsp(&[
        "gen",
        "--family",
        "random",
        "--n",
        "30",
        "--p",
        "0.3",
        "--seed",
        "5",
        "--out-instance",
        &inst,
        "--out-tour",
        &tour,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let one = p12tsp(&[
        "certify",
        "--instance",
        &inst,
        "--tour",
        &tour,
        "--plus-plus",
    ]);
    let four = p12tsp(&[
        "certify",
        "--instance",
        &inst,
        "--tour",
        &tour,
        "--plus-plus",
        "--workers",
        "4",
    ]);
    assert_eq!(stdout(&one), stdout(&four));
    assert!(stdout(&one).contains("\nwitness remove "));
}

#[test]
fn analyze_hexa_reports_property_four_failure() {
    let dir = TempDir::new().unwrap();
    write_hexa(dir.path());
    let report = path(&dir, "report.txt");
    let out = p12tsp(&[
        "analyze",
        "--instance",
        &path(&dir, "hexa.inst"),
        "--tour",
        &path(&dir, "hexa.tour"),
        "--optimal",
        &path(&dir, "hexa.opt"),
        "--report",
        &report,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&report).unwrap();
    for line in [
        "counters_total=5",
        "counters_good=2",
        "counters_bad=3",
        "bound_ok=true",
        "prop4=fail",
        "ratio=8/7",
    ] {
        assert!(text.lines().any(|l| l == line), "missing {line} in\n{text}");
    }
}

#[test]
fn analyze_without_optimal_uses_exact_solver() {
    let dir = TempDir::new().unwrap();
    write_hexa(dir.path());
    let out = p12tsp(&[
        "analyze",
        "--instance",
        &path(&dir, "hexa.inst"),
        "--tour",
        &path(&dir, "hexa.tour"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("cost_reference=7"));
}

#[test]
fn verify_lemmas_passes() {
    let out = p12tsp(&["verify-lemmas", "--max-i", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("slack residue=0 min=12 max=12"));
    assert!(text.contains("slack residue=1 min=0 max=0"));
    assert!(text.contains("dual_feasible=true"));
}

#[test]
fn gen_output_roundtrips_through_exact_and_solve() {
    let dir = TempDir::new().unwrap();
    let (inst, tour, reference, best) = (
        path(&dir, "i"),
        path(&dir, "t"),
        path(&dir, "r"),
        path(&dir, "b"),
    );
    let out = p12tsp(&[
        "gen",
        "--family",
        "two-opt-lb",
        "--n",
        "10",
        "--out-instance",
        &inst,
        "--out-tour",
        &tour,
        "--out-reference",
        &reference,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("tour_cost=14"));
    assert!(stdout(&out).contains("reference_cost=10"));

    let out = p12tsp(&["exact", "--instance", &inst, "--out-tour", &best]);
    assert_eq!(stdout(&out).trim(), "cost=10");
    let out = p12tsp(&[
        "certify",
        "--k",
        "2",
        "--instance",
        &inst,
        "--tour",
        &tour,
        "--expect",
        "optimal",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = p12tsp(&["solve", "--instance", &inst, "--tour", &tour, "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("start_cost=14"));
}

#[test]
fn sweep_is_deterministic_across_workers() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a"), path(&dir, "b"));
    let base = [
        "sweep", "--n-min", "6", "--n-max", "8", "--per-n", "4", "--p", "0.3,0.7", "--seed", "9",
    ];
    let one = p12tsp(&[&base[..], &["--report", &a]].concat());
    let three = p12tsp(&[&base[..], &["--report", &b, "--workers", "3"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(three.status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(stdout(&one).contains("violations_total=0"));
}

#[test]
fn complete_graph_sweep_has_unit_ratios() {
    let out = p12tsp(&[
        "sweep", "--n-min", "6", "--n-max", "7", "--per-n", "2", "--p", "1",
    ]);
    let text = stdout(&out);
    assert!(text.contains("max_ratio_3opt=1/1"));
    assert!(text.contains("max_ratio_3opt_pp=1/1"));
}

#[test]
fn errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "bad.inst");
    fs::write(&inst, "p12tsp 5\ne 0 1\ne 0 1\n").unwrap();
    fs::write(dir.path().join("t"), "tour 5\n0 1 2 3 4\n").unwrap();
    let out = p12tsp(&["certify", "--instance", &inst, "--tour", &path(&dir, "t")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(p12tsp(&["certify", "--k", "5"]).status.code(), Some(2));
    assert_eq!(p12tsp(&["sweep", "--n-max", "30"]).status.code(), Some(2));

    let big = path(&dir, "big");
    p12tsp(&[
        "gen",
        "--family",
        "three-opt-pp-lb",
        "--s",
        "4",
        "--out-instance",
        &big,
        "--out-tour",
        &path(&dir, "bt"),
    ]);
    let out = p12tsp(&["exact", "--instance", &big, "--limit", "20"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeding the exact-solver limit"));
}
