use std::path::PathBuf;
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recurrence")).args(args).output().expect("binary runs")
}

fn analyze(name: &str, extra: &[&str]) -> Output {
    let path = config(name);
    let mut args = vec!["analyze", "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    for (name, code) in [
        ("odometer.toml", 0),
        ("one-dot.toml", 0),
        ("finite-f2.toml", 0),
        ("invalid.toml", 2),
        ("too-deep.toml", 3),
        ("corrupted.toml", 4),
    ] {
        let out = analyze(name, &[]);
        assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(analyze("missing.toml", &[]).status.code(), Some(2));
}

#[test]
fn json_report_shape() {
    let out = analyze("odometer.toml", &["--format", "json"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["config", "system", "verdicts", "consistency", "equivalence", "version", "timing"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert_eq!(report["consistency"]["consistent"], true);
    let first = &report["verdicts"][0];
    assert_eq!(first["outcome"], "true");
    assert!(first["budget"]["radius"].is_u64());
}

#[test]
fn reports_repeat_under_a_fixed_seed() {
    let strip = |out: Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    let a = strip(analyze("thue-morse.toml", &["--seed", "9", "--format", "json"]));
    let b = strip(analyze("thue-morse.toml", &["--seed", "9", "--format", "json"]));
    assert_eq!(a, b);
    assert_eq!(a["config"]["seed"], 9);
}

#[test]
fn corrupted_run_names_the_violation() {
    let out = analyze("corrupted.toml", &["--format", "text"]);
    let text = stdout(&out);
    assert!(text.contains("consistent: false"), "{text}");
    assert!(text.contains("violation:"));
    assert!(text.contains("injected fault"));
}

#[test]
fn oracle_subcommands() {
    let cases: [(&[&str], &str); 4] = [
        (&["ball-count", "Z", "3"], "6"),
        (&["kset", "Z", "3"], "{1,2,4,5}"),
        (&["return-scan", "odometer:2", "3", "20"], "0,±8,±16"),
        (&["ball-count", "F2", "2"], "16"),
    ];
    for (args, expected) in cases {
        let mut full = vec!["oracle"];
        full.extend_from_slice(args);
        let out = run(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&out).trim(), expected, "{args:?}");
    }
    assert_eq!(run(&["oracle", "bogus"]).status.code(), Some(2));
}

#[test]
fn catalog_lists_every_entry() {
    let out = run(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["odometer-2", "thue-morse", "fibonacci", "one-dot", "finite-f2", "odometer-2-squared"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}
