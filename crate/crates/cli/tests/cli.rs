//! The `cohepow` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

use cohepow_cli::recipe::Report;
use cohepow_core::cohesive::CohesiveApprox;
use cohepow_core::order::PrefixDump;
use serde_json::Value;

fn cohepow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohepow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_report(path: &Path) -> Report {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn empty_recipe_gives_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cohepow(&["suite", "empty", "--out-dir", out]);
    assert_eq!(code(&o), 0);
    let r = read_report(&dir.path().join("empty.json"));
    assert!(r.checks.is_empty() && r.passed);
    let csv = std::fs::read_to_string(dir.path().join("empty.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn std_power_recipe_passes_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cohepow(&["suite", "std-power", "--out-dir", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let path = dir.path().join("std-power.json");
    let r = read_report(&path);
    assert_eq!(r.checks.len(), 3);
    for c in &r.checks {
        assert!(c.met, "{}: {}", c.id, c.summary);
        assert_eq!(c.evidence["decided_yes"], c.evidence["verdicts"]);
    }
    // verdict records carry the full field set
    let sample = &r.checks[0].evidence["samples"][0];
    for key in [
        "operation",
        "inputs",
        "outcome",
        "cut",
        "counts",
        "budget",
        "cohesive_provenance",
    ] {
        assert!(sample.get(key).is_some(), "missing {key}");
    }
    assert!(dir.path().join("std-power-prefix.svg").exists());
    let csv = std::fs::read_to_string(dir.path().join("std-power.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);

    let replay = cohepow(&["replay", path.to_str().unwrap(), "--parallel"]);
    assert_eq!(
        code(&replay),
        0,
        "{}",
        String::from_utf8_lossy(&replay.stderr)
    );
}

#[test]
fn example_4_5_recipe_passes() {
    let o = cohepow(&["suite", "example-4-5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn unmet_expectation_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = dir.path().join("r.json");
    std::fs::write(
        &recipe,
        r#"{"name": "r", "checks": [
            {"id": "ax", "kind": "axioms", "bound": 20, "expect": {"outcome": "fail"}}]}"#,
    )
    .unwrap();
    assert_eq!(code(&cohepow(&["suite", recipe.to_str().unwrap()])), 1);
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"base": "N", "typo": 1}"#).unwrap();
    assert_eq!(
        code(&cohepow(&[
            "--config",
            bad.to_str().unwrap(),
            "suite",
            "empty"
        ])),
        2
    );
    assert_eq!(code(&cohepow(&["test", "axioms", "--base", "R"])), 2);
    assert_eq!(code(&cohepow(&["test", "nonsense"])), 2);
    assert_eq!(code(&cohepow(&["suite", "no-such-recipe.json"])), 2);
    assert_eq!(code(&cohepow(&["frobnicate"])), 2);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("out");
    std::fs::write(
        &cfg,
        format!(r#"{{"base": "Q", "budget": 300, "out_dir": {:?}}}"#, out),
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(code(&cohepow(&["--config", cfg, "test", "axioms"])), 0);
    let r = read_report(&out.join("test-axioms.json"));
    assert_eq!(
        (r.recipe.params.base.as_str(), r.recipe.params.budget),
        ("Q", 300)
    );

    let o = cohepow(&[
        "--config", cfg, "--budget", "400", "test", "axioms", "--base", "Z",
    ]);
    assert_eq!(code(&o), 0);
    let r = read_report(&out.join("test-axioms.json"));
    assert_eq!(
        (r.recipe.params.base.as_str(), r.recipe.params.budget),
        ("Z", 400)
    );
}

#[test]
fn test_suite_reads_a_window_file() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("window.json");
    let c =
        CohesiveApprox::injected((1..=128).filter(|x| x % 3 == 0).collect(), 128, "mult3").unwrap();
    std::fs::write(&w, c.to_json()).unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cohepow(&[
        "test",
        "std-power",
        "--base",
        "N",
        "--cohesive",
        w.to_str().unwrap(),
        "--out-dir",
        out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = read_report(&dir.path().join("test-std-power.json"));
    assert_eq!(r.checks[0].evidence["window"], Value::from(42));
}

#[test]
fn dump_writes_prefix_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("n.json");
    let svg = dir.path().join("n.svg");
    let o = cohepow(&[
        "dump",
        "--base",
        "N",
        "--horizon",
        "10",
        "--out",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let d: PrefixDump = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(d.elements, (0..=10).collect::<Vec<_>>());
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    // the sum's prefix lists ℕ* codes before ℕ codes
    let o = cohepow(&[
        "dump",
        "--base",
        "N*+N",
        "--horizon",
        "20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let d: PrefixDump = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let tags: Vec<u64> = d
        .elements
        .iter()
        .map(|&z| cohepow_core::clocked::left(z))
        .collect();
    assert!(tags.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn build_trace_replays_against_rebuild() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cohepow(&["build", "breaker", "--stages", "300", "--out-dir", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let trace = dir.path().join("breaker.jsonl");
    let o = cohepow(&[
        "replay",
        trace.to_str().unwrap(),
        "--against",
        "breaker:300",
        "--checkpoints",
        "100,200",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = cohepow(&["replay", trace.to_str().unwrap(), "--against", "N"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn dense_blocks_and_maximal_builds_pass_audits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for c in ["dense-blocks", "maximal"] {
        let o = cohepow(&["build", c, "--stages", "300", "--out-dir", out]);
        assert_eq!(code(&o), 0, "{c}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(dir.path().join(format!("{c}-summary.json")).exists());
    }
}
