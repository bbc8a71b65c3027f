use std::process::{Command, Output};

fn waring(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_waring"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("WARING_THREADS", t),
        None => cmd.env_remove("WARING_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SUBCOMMANDS: [&str; 14] = [
    "count", "ball", "weyl", "gauss", "vint", "hua", "bounds", "arcs", "circle", "singular", "mainterm", "cascade",
    "verify", "scan",
];

#[test]
fn count_example() {
    let o = waring(&["count", "-k", "2", "-d", "2", "-N", "25"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn singular_example_sum_meets_product() {
    let o = waring(&["singular", "-k", "2", "-d", "9", "-N", "50", "--Q", "1000", "--P", "50", "--format", "json"], None);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let sum = v["truncatedSum"].as_f64().unwrap();
    let product = v["eulerProduct"].as_f64().unwrap();
    assert!((sum - product).abs() < 1e-3, "{sum} vs {product}");
}

#[test]
fn scan_example_rows_and_trend() {
    let o = waring(
        &["scan", "-k", "2", "-d", "8", "--N-from", "500", "--N-to", "5000", "--step", "500", "--format", "csv"],
        None,
    );
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    let dev: Vec<f64> = lines[1..]
        .iter()
        .map(|l| (l.split(',').nth(12).unwrap().parse::<f64>().unwrap() - 1.0).abs())
        .collect();
    let med = |xs: &[f64]| {
        let mut v = xs.to_vec();
        v.sort_by(f64::total_cmp);
        v[2]
    };
    assert!(med(&dev[5..]) <= med(&dev[..5]));
}

#[test]
fn output_independent_of_runs_and_threads() {
    let cases: [&[&str]; 3] = [
        &["scan", "-k", "2", "-d", "6", "--N-from", "100", "--N-to", "400", "--step", "100", "--format", "csv"],
        &["singular", "-k", "2", "-d", "5", "-N", "30", "--pairs", "20", "--seed", "7", "--format", "json"],
        &["bounds", "--bound", "weyl_minor", "-k", "2", "-X", "300", "--format", "json"],
    ];
    for args in cases {
        let base = stdout(&waring(args, Some("1")));
        assert!(!base.is_empty());
        for t in ["1", "3", "8"] {
            assert_eq!(stdout(&waring(args, Some(t))), base, "{args:?} with {t} threads");
        }
        assert_eq!(stdout(&waring(args, None)), base);
    }
}

#[test]
fn help_lists_defaults() {
    for sub in SUBCOMMANDS {
        let o = waring(&[sub, "--help"], None);
        assert!(o.status.success(), "{sub}");
        let text = stdout(&o);
        assert!(text.contains("--format <FORMAT>") && text.contains("[default: pretty]"), "{sub}");
        assert!(text.contains("--seed <SEED>") && text.contains("[default: 0]"), "{sub}");
    }
    let text = stdout(&waring(&["verify", "--help"], None));
    for needle in ["[default: 1000]", "[default: 50]", "[default: 0.25]", "[default: 0.000000001]"] {
        assert!(text.contains(needle), "{needle}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(waring(&["--version"], None).status.code(), Some(0));
    assert_eq!(waring(&["count", "--bogus"], None).status.code(), Some(1));
    assert_eq!(waring(&["count", "-k", "1", "-d", "2", "-N", "5"], None).status.code(), Some(1));
    assert_eq!(waring(&["gauss", "-k", "2", "-a", "2", "-q", "4"], None).status.code(), Some(1));
    assert_eq!(waring(&["count", "-d", "2", "-N", "5"], Some("zero")).status.code(), Some(1));
    let o = waring(&["count", "-k", "2", "-d", "3", "-N", "5", "--coeffs", "1,2"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--coeffs"));
    // v panel budget exhausted: a computation failure
    let o = waring(&["vint", "-k", "2", "-X", "100000", "--theta", "0.3", "--tol", "1e-12"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn every_subcommand_runs() {
    let runs: [&[&str]; 14] = [
        &["count", "-k", "3", "-N", "100", "--coeffs", "1,2,3", "--brute", "--format", "json"],
        &["ball", "-k", "2", "-d", "3", "-N", "50"],
        &["weyl", "-k", "2", "-X", "10", "--xi", "0.1"],
        &["gauss", "-k", "2", "-a", "1", "-q", "5", "--direct"],
        &["vint", "-k", "3", "-X", "10", "--theta", "-0.001"],
        &["hua", "-k", "2", "-X", "8"],
        &["bounds", "--bound", "gauss_decay", "-k", "3", "--q-max", "50", "--format", "csv"],
        &["arcs", "-k", "2", "-X", "100", "--xi", "0.33", "--format", "json"],
        &["circle", "-k", "2", "-d", "4", "-N", "30", "--lo", "0", "--hi", "1", "--format", "json"],
        &["singular", "-k", "3", "-d", "9", "-N", "40", "--Q", "100", "--P", "20", "--format", "csv"],
        &["mainterm", "-k", "2", "-d", "4", "-N", "25", "--integral"],
        &["cascade", "-k", "2", "-d", "5", "-N", "1000", "--format", "json"],
        &["verify", "-k", "2", "-d", "5", "-N", "300", "--format", "csv"],
        &["scan", "-k", "2", "-d", "5", "--N-from", "10", "--N-to", "12"],
    ];
    for args in runs {
        let o = waring(args, None);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stdout.is_empty());
    }
    let o = waring(&["count", "-k", "3", "-N", "100", "--coeffs", "1,2,3", "--brute", "--format", "json"], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["agree"], serde_json::Value::Bool(true));
    let o = waring(&["circle", "-k", "2", "-d", "4", "-N", "30", "--lo", "0", "--hi", "1", "--format", "json"], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let exact: f64 = v["circleIntegral"].as_str().unwrap().parse().unwrap();
    assert!((v["arc"]["integral"]["re"].as_f64().unwrap() - exact).abs() < 1e-9);
    assert!((v["dftMean"]["re"].as_f64().unwrap() - exact).abs() < 0.5);
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("waring-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let o = waring(&["ball", "-k", "2", "-d", "2", "-N", "10", "--format", "json", "--output", path.to_str().unwrap()], None);
    assert!(o.status.success() && o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // |x|^2 + |y|^2 <= 10 has 37 integer points
    assert_eq!(v["latticeCount"], "37");
    std::fs::remove_dir_all(dir).unwrap();
}
