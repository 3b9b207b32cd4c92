use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SPEC: &str = r#"{
  "omega_o": 314.1592653589793,
  "phases": [
    {"envelope": {"kind": "sinusoidal", "amplitude": 1.0, "depth": 0.1, "frequency_hz": 2.0}},
    {"envelope": {"kind": "sinusoidal", "amplitude": 1.0, "depth": 0.1, "frequency_hz": 2.0}},
    {"envelope": {"kind": "sinusoidal", "amplitude": 1.0, "depth": 0.1, "frequency_hz": 2.0}}
  ]
}"#;

fn ifreq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifreq"))
        .args(args)
        .output()
        .expect("run ifreq")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn setup() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("am.json"), SPEC).unwrap();
    dir
}

// One full period of the 2 Hz envelope, since the DFT Hilbert transform
// treats the record as periodic.
fn short_grid() -> [&'static str; 4] {
    ["--sample-rate", "5000", "--duration", "0.5"]
}

#[test]
fn generate_writes_trace_and_sidecar() {
    let dir = setup();
    let spec = dir.path().join("am.json");
    let out = dir.path().join("g");
    let mut args = vec!["generate", "--spec", p(&spec), "--out-dir", p(&out)];
    args.extend(short_grid());
    let o = ifreq(&args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("t,va,vb,vc"));
    assert_eq!(lines.count(), 2500);
    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("trace.json")).unwrap()).unwrap();
    assert_eq!(side["n_samples"], 2500);
    assert_eq!(side["spec"]["omega_o"], 314.1592653589793);
}

#[test]
fn analyze_writes_one_row_per_sample() {
    let dir = setup();
    let spec = dir.path().join("am.json");
    let out = dir.path().join("a");
    let mut args = vec!["analyze", "--spec", p(&spec), "--out-dir", p(&out)];
    args.extend(short_grid());
    let o = ifreq(&args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = fs::read_to_string(out.join("analysis.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("t,edge,rho_h,omega_h,rho_m,omega_m,rho_geom,omega_biv,torsion")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2500);
    assert!(rows[0].split(',').nth(1) == Some("1"));
    assert!(rows[1000].split(',').nth(1) == Some("0"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("analysis.json")).unwrap()).unwrap();
    let w = summary["omega_h"]["median"].as_f64().unwrap();
    assert!((w - 314.1592653589793).abs() < 1e-3);
    assert!(summary["provenance"]
        .as_str()
        .unwrap()
        .starts_with("spec am.json sha256:"));
}

#[test]
fn format_flag_limits_outputs() {
    let dir = setup();
    let spec = dir.path().join("am.json");
    let out = dir.path().join("a");
    let mut args = vec![
        "analyze",
        "--spec",
        p(&spec),
        "--out-dir",
        p(&out),
        "--format",
        "json",
    ];
    args.extend(short_grid());
    assert_eq!(ifreq(&args).status.code(), Some(0));
    assert!(out.join("analysis.json").exists());
    assert!(!out.join("analysis.csv").exists());
}

#[test]
fn compare_reports_and_exits_by_verdict() {
    let dir = setup();
    let spec = dir.path().join("am.json");
    let out = dir.path().join("c");
    let mut args = vec![
        "compare",
        "--spec",
        p(&spec),
        "--out-dir",
        p(&out),
        "--frame",
        "ramp:314.1592653589793,0.25",
    ];
    args.extend(short_grid());
    let o = ifreq(&args);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("EQ13_ICF  holds"));
    let reports: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 6);
    assert_eq!(fs::read_to_string(out.join("report.txt")).unwrap(), stdout);
    let residuals = fs::read_to_string(out.join("residuals.csv")).unwrap();
    assert!(residuals
        .lines()
        .next()
        .unwrap()
        .starts_with("t,EQ7.phase,EQ7.frequency,EQ12.vector"));

    // Tightening the frequency tolerance below the discretization error
    // turns the geometric relation into a violation.
    args.extend(["--tol-icf", "1e-6", "--relations", "EQ15"]);
    let o = ifreq(&args);
    assert_eq!(
        o.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
}

#[test]
fn trace_input_estimates_nominal_frequency() {
    let dir = setup();
    let spec = dir.path().join("am.json");
    let g = dir.path().join("g");
    let mut args = vec!["generate", "--spec", p(&spec), "--out-dir", p(&g)];
    args.extend(short_grid());
    assert_eq!(ifreq(&args).status.code(), Some(0));
    let a = dir.path().join("a");
    let o = ifreq(&[
        "analyze",
        "--input",
        p(&g.join("trace.csv")),
        "--out-dir",
        p(&a),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.join("analysis.json")).unwrap()).unwrap();
    let w = summary["omega_o"].as_f64().unwrap();
    assert!((w - 314.159).abs() < 1.0, "{w}");
    assert!(summary["provenance"]
        .as_str()
        .unwrap()
        .starts_with("trace trace.csv sha256:"));
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let dir = setup();
    let spec = dir.path().join("am.json");
    let out = dir.path().join("x");
    let bad_trace = dir.path().join("bad.csv");
    let missing = dir.path().join("missing.csv");
    fs::write(&bad_trace, "t,va,vb,vc\n0,1,2,3\n0.1,1,2,3\n0.2,1,oops,3\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["analyze"],
        vec![
            "compare",
            "--spec",
            p(&spec),
            "--frame",
            "spin:1",
            "--out-dir",
            p(&out),
        ],
        vec![
            "compare",
            "--spec",
            p(&spec),
            "--relations",
            "EQ99",
            "--out-dir",
            p(&out),
        ],
        vec![
            "analyze",
            "--spec",
            p(&spec),
            "--format",
            "xml",
            "--out-dir",
            p(&out),
        ],
        vec!["analyze", "--input", p(&bad_trace), "--out-dir", p(&out)],
        vec!["analyze", "--input", p(&missing), "--out-dir", p(&out)],
        vec![
            "generate",
            "--spec",
            p(&spec),
            "--sample-rate",
            "-1",
            "--out-dir",
            p(&out),
        ],
        vec!["analyze", "--spec", p(&spec), "--input", p(&bad_trace)],
    ];
    for args in cases {
        let o = ifreq(&args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let o = ifreq(&["analyze", "--input", p(&bad_trace), "--out-dir", p(&out)]);
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("line 4"), "{stderr}");
}
