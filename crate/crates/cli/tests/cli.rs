use std::path::PathBuf;
use std::process::{Command, Output};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(rel)
}

fn fondgr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fondgr"))
        .args(args)
        .env_remove("FONDGR_PLANNER")
        .output()
        .unwrap()
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn recognize_example_bundle() {
    let out = fondgr(&["recognize", "--bundle", s(&data("grid_bundle"))]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["best_names"], serde_json::json!(["phi1"]));
    assert_eq!(v["planner_calls"], 3);
}

#[test]
fn compile_writes_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let (domain, problem) = (data("tireworld_domain.pddl"), data("tireworld_grid.pddl"));
    for extra in [&[][..], &["--parametric"][..]] {
        let mut args = vec![
            "compile",
            "--domain",
            s(&domain),
            "--problem",
            s(&problem),
            "--goal",
            "F vAt_33",
            "--out",
            s(dir.path()),
        ];
        args.extend_from_slice(extra);
        let out = fondgr(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(files.len(), 2);
    }
}

#[test]
fn mixed_dialect_goal_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = fondgr(&[
        "compile",
        "--domain",
        s(&data("tireworld_domain.pddl")),
        "--problem",
        s(&data("tireworld_grid.pddl")),
        "--goal",
        "F (vAt_33 & O vAt_21)",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unsolvable_plan_exits_with_two() {
    let out = fondgr(&[
        "plan",
        "--domain",
        s(&data("tireworld_domain.pddl")),
        "--problem",
        s(&data("tireworld_trap.pddl")),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plan_prints_a_policy() {
    let out = fondgr(&[
        "plan",
        "--domain",
        s(&data("blocks_domain.pddl")),
        "--problem",
        s(&data("blocks_problem.pddl")),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.contains('\t')));
}

#[test]
fn bad_arguments_exit_with_one() {
    assert_eq!(fondgr(&["recognize"]).status.code(), Some(1));
    assert_eq!(fondgr(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"datasets": [{"name": "tw", "domain": "tireworld", "templates": ["eventually"], "problems": 3}],
            "levels": [10, 100]}"#,
    )
    .unwrap();
    let run = |name: &str| {
        let out_dir = dir.path().join(name);
        let out = fondgr(&["bench", "--config", s(&cfg), "--seed", "7", "--out", s(&out_dir), "--jobs", "1"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (
            std::fs::read(out_dir.join("bench.csv")).unwrap(),
            std::fs::read(out_dir.join("bench.json")).unwrap(),
        )
    };
    let a = run("a");
    assert_eq!(a, run("b"));
    assert!(String::from_utf8_lossy(&a.0).starts_with("dataset,level"));
}
