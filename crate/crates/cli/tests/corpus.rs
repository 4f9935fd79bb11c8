use std::path::{Path, PathBuf};
use std::process::Command;

use lipdouble::closure::Status;
use lipdouble_cli::report::{FastpathResult, TaskResult};
use lipdouble_cli::{read_report, report_json, run, CliError};

fn corpus_dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn lipdouble(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_lipdouble")).args(args).output().unwrap()
}

fn frozen(name: &str) -> TaskResult {
    read_report(&corpus_dir(name).join("report.json")).unwrap().outcome
}

fn aggregate(r: &TaskResult) -> Vec<Status> {
    match r {
        TaskResult::ClosureTest(v) => vec![v.status],
        TaskResult::CheckW(r) | TaskResult::CheckIla(r) => vec![r.aggregate],
        TaskResult::CheckIlmy(rs) => rs.iter().map(|r| r.aggregate).collect(),
        TaskResult::WhFastpath(FastpathResult::Certified { report }) => vec![report.aggregate],
        TaskResult::Grassmann(g) => vec![g.criterion.aggregate],
        TaskResult::CurveBilip(b) => vec![b.report.aggregate],
        _ => vec![],
    }
}

#[test]
fn frozen_verdicts() {
    use Status::*;
    let expected: &[(&str, &[Status])] = &[
        ("closure-arc", &[Fails]),
        ("closure-newton", &[Holds]),
        ("closure-dependence", &[Holds]),
        ("minors-fails", &[Fails]),
        ("minors-holds", &[Holds]),
        ("w-cusp", &[Fails]),
        ("w-product", &[Holds]),
        ("ila-product", &[Holds]),
        ("ila-cusp", &[Inconclusive]),
        ("ila-cusp-generic", &[Holds]),
        ("ilmy-cusp", &[Fails, Fails]),
        ("ilmy-product", &[Holds, Holds]),
        ("ilmy-cubic-fibers", &[Holds, Holds]),
        ("wh-cusp", &[Holds]),
        ("grassmann-linear", &[Holds]),
        ("grassmann-quadric", &[Holds]),
        ("curve-bilip-product", &[Holds]),
        ("curve-bilip-unit", &[Holds]),
        ("curve-bilip-fixture", &[Holds]),
    ];
    for (name, want) in expected {
        assert_eq!(aggregate(&frozen(name)), *want, "{name}");
    }
    match frozen("wh-weight-zero") {
        TaskResult::WhFastpath(FastpathResult::Inapplicable { reason }) => assert!(reason.contains("4*a1 + c1 = 0")),
        o => panic!("{o:?}"),
    }
}

#[test]
fn run_writes_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let src = corpus_dir("closure-newton");
    let out = lipdouble(&["run", src.join("task.json").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("task: closure-test"));
    let a = std::fs::read(dir.path().join("report.json")).unwrap();
    assert_eq!(a, std::fs::read(src.join("report.json")).unwrap());
    assert_eq!(std::fs::read(dir.path().join("report.txt")).unwrap(), std::fs::read(src.join("report.txt")).unwrap());
}

#[test]
fn seed_flag_overrides_the_task() {
    let task = lipdouble_cli::read_task(&corpus_dir("w-cusp").join("task.json")).unwrap();
    let mut seeded = task.clone();
    seeded.options.seed = Some(7);
    let a = report_json(&run(&seeded).unwrap());
    let b = report_json(&run(&seeded).unwrap());
    assert_eq!(a, b);
    assert!(a.contains("\"seed\": 7"));
}

fn write(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("task.json");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn malformed_polynomial_exits_2_with_caret() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), r#"{"task":"check-w","ring":{"z":["z1"],"y":["t"]},"family":["z1^2 + * t"]}"#);
    let out = lipdouble(&["run", p.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("family[0]"), "{err}");
    assert!(err.lines().any(|l| l.trim() == "^"), "{err}");
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        r#"{"task":"frobnicate"}"#,
        r#"{"task":"check-w","ring":{"z":["z1"],"y":["t"]},"family":["z1^2"],"extra":1}"#,
        r#"{"task":"check-w","ring":{"z":["z1"],"y":["t"]}}"#,
        r#"{"task":"closure-test","ring":{"z":["x"]},"ideal":["x"],"target":["x"],"options":{"point":[1,2]}}"#,
        r#"{"task":"closure-test","ring":{"z":["x"]},"ideal":["x^2"],"target":["x"],"options":{"closure":"strict"}}"#,
        "not json",
    ] {
        let p = write(dir.path(), text);
        let out = lipdouble(&["run", p.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{text}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = lipdouble(&["run", "/nonexistent/task.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn irreducibility_assertion_drops_the_rank_caveat() {
    let src = r#"{"task":"rank","ring":{"z":["z1","z2","z3"],"relations":["z1^2+z2^2+z3^2"]IRR},"module":{"rank":1,"generators":[["z1"],["z2"],["z3"]]}}"#;
    let plain = run(&lipdouble_cli::parse_task(&src.replace("IRR", "")).unwrap()).unwrap();
    let asserted = run(&lipdouble_cli::parse_task(&src.replace("IRR", r#","irreducible":true"#)).unwrap()).unwrap();
    match (plain.outcome, asserted.outcome) {
        (TaskResult::Rank(a), TaskResult::Rank(b)) => {
            assert_eq!(a.notes.len(), 1);
            assert!(b.notes.is_empty());
            assert_eq!((a.generic_rank, a.doubled_generic_rank), (b.generic_rank, b.doubled_generic_rank));
        }
        o => panic!("{o:?}"),
    }
}

#[test]
fn library_errors_classify() {
    let t = lipdouble_cli::parse_task(r#"{"task":"rank","ring":{"z":["z"]}}"#).unwrap();
    assert!(matches!(run(&t), Err(CliError::Input(_))));
    assert_eq!(CliError::Internal("x".into()).exit_code(), 3);
}

#[test]
fn verify_certificate_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(corpus_dir("closure-dependence").join("report.json")).unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, &text).unwrap();
    let out = lipdouble(&["verify-certificate", good.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("1 certificates checked, 0 failed"));

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let target = &mut v["outcome"]["result"]["query"]["target"][0];
    *target = serde_json::Value::String(format!("{} + 1", target.as_str().unwrap()));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let out = lipdouble(&["verify-certificate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}
