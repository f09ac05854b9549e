//! End-to-end tests of the binary: flag handling, output formats, and the
//! 0/1/2 exit-code contract.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jacobi-harmonics"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn kernel_point_three_representations_agree() {
    let out = run(&[
        "kernel", "--alpha", "-0.5", "--beta", "-0.5", "--t", "0.7", "--theta", "1.0", "--phi",
        "2.0", "--reps", "series,dk,closed",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,theta,phi,dt,dtheta,representation,value,est_error,disagreement"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for rep in ["series", "dk_integral", "closed_form"] {
        assert!(rows.iter().any(|r| r.contains(rep)), "missing {rep}");
    }
    // All three rows carry the same (tiny) disagreement value.
    let disagreement: f64 = rows[0].rsplit(',').next().unwrap().parse().unwrap();
    assert!(disagreement < 1e-10);
}

#[test]
fn kernel_missing_point_flags_is_config_error() {
    let out = run(&["kernel", "--alpha", "0.0", "--beta", "0.0", "--t", "0.7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kernel_unknown_flag_exits_2() {
    let out = run(&["kernel", "--alpha", "0.0", "--beta", "0.0", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kernel_tight_tolerance_fails_with_exit_1() {
    // series vs dk agree to ~1e-13 here; an absurd 1e-16 tolerance must trip
    // the disagreement check while still writing the rows.
    let out = run(&[
        "kernel", "--alpha", "0.0", "--beta", "0.0", "--t", "0.7", "--theta", "1.0", "--phi",
        "2.0", "--reps", "series,dk", "--tol", "1e-16",
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    assert!(stdout(&out).lines().count() > 1);
}

fn write_expansion(dir: &std::path::Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(text.as_bytes()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn apply_riesz_on_ground_state_is_zero() {
    let dir = std::env::temp_dir();
    let path = write_expansion(
        &dir,
        "cli_test_e0.json",
        r#"{"alpha":0.0,"beta":0.0,"n_max":0,"coeffs":[[1.0,0.0]]}"#,
    );
    let out = run(&[
        "apply",
        "--operator",
        "riesz",
        "--input",
        &path,
        "--order",
        "1",
        "--samples",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    for line in stdout(&out).lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let re: f64 = fields[1].parse().unwrap();
        let im: f64 = fields[2].parse().unwrap();
        assert_eq!((re, im), (0.0, 0.0), "R_1 e_0 must vanish identically");
    }
}

#[test]
fn apply_zero_gamma_is_check_failure() {
    let dir = std::env::temp_dir();
    let path = write_expansion(
        &dir,
        "cli_test_gamma.json",
        r#"{"alpha":0.0,"beta":0.0,"n_max":1,"coeffs":[[1.0,0.0],[1.0,0.0]]}"#,
    );
    let out = run(&[
        "apply",
        "--operator",
        "imaginary-power",
        "--input",
        &path,
        "--gamma",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn apply_malformed_input_is_config_error() {
    let dir = std::env::temp_dir();
    let path = write_expansion(&dir, "cli_test_bad.json", "not an expansion");
    let out = run(&["apply", "--operator", "semigroup", "--input", &path, "--t", "1.0"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn apply_semigroup_output_round_trips() {
    use jacobi_harmonics::ops::JacobiExpansion;
    let dir = std::env::temp_dir();
    let path = write_expansion(
        &dir,
        "cli_test_sg.json",
        r#"{"alpha":0.3,"beta":1.7,"n_max":2,"coeffs":[[1.0,0.0],[0.5,-0.5],[0.0,0.25]]}"#,
    );
    let out = run(&["apply", "--operator", "semigroup", "--input", &path, "--t", "0.5"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let result = JacobiExpansion::from_json(&stdout(&out)).expect("output parses back");
    assert_eq!(result.n_max(), 2);
    // e^{-tμ_0} scaling of the leading coefficient, μ_0 = (α+β+1)/2 = 1.5.
    let expected = (-0.5f64 * 1.5).exp();
    assert!((result.coeffs[0].re - expected).abs() < 1e-12);
}

#[test]
fn poly_table_has_expected_shape() {
    let out = run(&[
        "poly", "--alpha", "0.3", "--beta", "1.7", "--n-max", "4", "--points", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "n,theta,value");
    assert_eq!(text.lines().count(), 1 + 5 * 7);
}

#[test]
fn verify_single_category_passes_and_is_deterministic() {
    let args = ["verify", "--only", "trig", "--format", "json"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "{first:?}");
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "JSON output must be byte-identical");
    let text = stdout(&first);
    assert!(text.contains("trig/optimal-constant"));
    assert!(text.contains("\"passed\": true"));
}

#[test]
fn verify_rejects_bad_flags() {
    let out = run(&["verify", "--only", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--params", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--inject-fault", "smoothness"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--theta-points", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_table_format_renders() {
    let out = run(&["verify", "--only", "lem58"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.starts_with("estimate"));
    assert!(text.contains("lem58/gamma=1,lambda=0.5"));
    assert!(text.contains("pass"));
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join("cli_test_poly.csv");
    let _ = std::fs::remove_file(&path);
    let out = run(&[
        "poly", "--alpha", "0.0", "--beta", "0.0", "--n-max", "1", "--points", "3", "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("n,theta,value"));
}
