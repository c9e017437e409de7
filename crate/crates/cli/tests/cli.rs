use std::path::Path;
use std::process::Command;

use beauville_cli::{load_scenario, run_scenario, Report, Scenario, ScenarioKind, Status};

fn beauville() -> Command {
    Command::new(env!("CARGO_BIN_EXE_beauville"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn identity_suite_example() {
    // the identity suite runs, but the bracket of two 2×2 matrices on two
    // legs is singular, so the inverse-sum checks cannot pass
    let s = Scenario::build(
        ScenarioKind::IdentitySuite,
        1,
        &[("n", "2"), ("d", "2"), ("trials", "5")],
    )
    .unwrap();
    let r = run_scenario(&s, None);
    assert_eq!(
        r.checks
            .iter()
            .filter(|c| c.name.ends_with("last-leg expansion of [f_1..f_2]"))
            .count(),
        5
    );
    assert!(r
        .checks
        .iter()
        .filter(|c| c.anchor == beauville_cli::run::anchors::LAPLACE)
        .all(|c| c.status == Status::Pass));
    let bracket = r
        .checks
        .iter()
        .find(|c| c.name == "trial 0: bracket invertible")
        .unwrap();
    assert_eq!(bracket.status, Status::Fail);
    assert!(bracket.witness.as_ref().unwrap().contains("rank 2 of 4"));
}

#[test]
fn grassmann_example_passes() {
    let s = Scenario::build(
        ScenarioKind::Grassmann,
        7,
        &[("arity", "4"), ("dim", "6"), ("trials", "100")],
    )
    .unwrap();
    let r = run_scenario(&s, Some(2));
    assert_eq!(r.checks.len(), 100);
    assert!(r.passed());
}

#[test]
fn weyl_rational_example_passes() {
    let s = Scenario::build(
        ScenarioKind::WeylRational,
        3,
        &[
            ("N", "2"),
            ("T", "d1"),
            ("points", "[0, 1]"),
            ("trials", "1"),
        ],
    )
    .unwrap();
    let r = run_scenario(&s, None);
    assert!(r.passed(), "{}", r.to_json());
    assert!(r.checks.iter().any(|c| c.name == "trial 0: [H_1, H_2] = 0"));
}

#[test]
fn reports_are_deterministic_and_thread_independent() {
    for kind in [
        ScenarioKind::CorollaryLegs,
        ScenarioKind::ConeP1,
        ScenarioKind::HbarLocalization,
    ] {
        let s = Scenario::build(kind, 42, &[("trials", "4")]).unwrap();
        let mut a = run_scenario(&s, Some(1));
        let mut b = run_scenario(&s, Some(3));
        a.duration_ms = 0;
        b.duration_ms = 0;
        assert_eq!(a.to_json(), b.to_json());
    }
}

#[test]
fn every_kind_runs_with_defaults() {
    for kind in ScenarioKind::ALL {
        let s = Scenario::build(kind, 5, &[("trials", "1")]).unwrap();
        let r = run_scenario(&s, None);
        assert!(!r.checks.is_empty(), "{kind}");
        assert_eq!(r.scenario.kind, kind.name());
        let matrix = matches!(kind, ScenarioKind::SkewMatrix | ScenarioKind::IdentitySuite);
        assert_eq!(
            r.passed(),
            !matrix,
            "{kind}: {}",
            beauville_cli::summary_line(&r)
        );
    }
}

#[test]
fn run_writes_report_and_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "h.cfg",
        "# hyperplane\nkind = hyperplane\ng = 3\nseed = 9\ntrials = 4\n",
    );
    let out = dir.path().join("h.json");
    let status = beauville()
        .arg("run")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let r = Report::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.seed, 9);
    assert_eq!(r.version, beauville_cli::VERSION);
    assert!(r
        .checks
        .iter()
        .all(|c| c.status == Status::Pass && !c.anchor.is_empty()));

    let over = beauville()
        .arg("run")
        .arg(&cfg)
        .args(["--trials", "2", "--seed", "11"])
        .output()
        .unwrap();
    assert!(over.status.success());
    let r = Report::parse(&String::from_utf8(over.stdout).unwrap()).unwrap();
    assert_eq!(r.seed, 11);
    assert_eq!(r.scenario.params["trials"].to_string(), "2");

    let skew = write(
        dir.path(),
        "s.cfg",
        "kind = skew-matrix\nseed = 1\ntrials = 1\nretries = 2\n",
    );
    let o = beauville().arg("run").arg(&skew).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let r = Report::parse(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let w = r.failures().next().unwrap().witness.clone().unwrap();
    assert!(w.contains("all 3 draws rejected (seed 1, trial 0)"), "{w}");
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.cfg",
        "kind = grassmann\nseed = 1\narity = 7\n",
    );
    let o = beauville().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("field `arity`"), "{err}");

    let e = load_scenario(&dir.path().join("missing.cfg"), None, None).unwrap_err();
    assert!(matches!(e, beauville_cli::ConfigError::Io(_)));
}

#[test]
fn list_scenarios_names_every_kind() {
    let o = beauville().arg("list-scenarios").output().unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for k in ScenarioKind::ALL {
        assert!(text.contains(k.name()), "{}", k.name());
    }
}
