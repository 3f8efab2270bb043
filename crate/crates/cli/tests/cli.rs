//! End-to-end tests of the `sregular` binary: the exit-code contract,
//! byte-level determinism, and round-tripping of every emitted document.

use std::io::Write as _;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use slice_regular::{CanonicalRFT, MatrixH, PoleClass, Quaternion, RegularRational, ZeroSet};

fn sregular(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sregular"))
        .args(args)
        .output()
        .expect("spawn sregular")
}

fn sregular_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sregular"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn sregular");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().expect("wait for sregular")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const IDENTITY: &str = r#"{"a":[1,0,0,0],"c":[0,0,0,0],"b":[0,0,0,0],"d":[1,0,0,0]}"#;
/// The matrix of `(q - i)^{-*}`: zero numerator slope, denominator `q - i`.
const RECIP_SHIFT: &str = r#"{"a":[0,0,0,0],"c":[1,0,0,0],"b":[1,0,0,0],"d":[0,-1,0,0]}"#;

#[test]
fn verify_all_seed_7_exits_zero_and_repeats_byte_identical() {
    let first = sregular(&["verify", "all", "--seed", "7", "--trials", "200"]);
    let second = sregular(&["verify", "all", "--seed", "7", "--trials", "200"]);
    assert_eq!(code(&first), 0, "stderr: {:?}", first.stderr);
    assert_eq!(code(&second), 0);
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout);

    let report: Value = serde_json::from_str(&stdout_str(&first)).unwrap();
    assert_eq!(report["suite"], "all");
    assert_eq!(report["seed"], 7);
    assert_eq!(report["pass"], true);
    assert!(report["checks"].as_array().unwrap().len() > 30);
}

#[test]
fn verify_antihom_residuals_are_small() {
    let out = sregular(&["verify", "antihom", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    for check in report["checks"].as_array().unwrap() {
        assert_eq!(check["pass"], true);
        assert!(check["max_residual"].as_f64().unwrap() < 1e-9);
    }
}

#[test]
fn verify_unknown_suite_exits_2() {
    let out = sregular(&["verify", "nonsense", "--seed", "7"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_impossible_tolerance_exits_1_with_failing_report() {
    let out = sregular(&["verify", "algebra", "--seed", "7", "--trials", "20", "--tol", "1e-30"]);
    assert_eq!(code(&out), 1);
    let report: Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn eval_identity_matrix_returns_the_point() {
    let out = sregular(&["eval", IDENTITY, "--point", "[0,0,2,0]"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out).trim(), "[0.0,0.0,2.0,0.0]");
}

#[test]
fn eval_reciprocal_shift_at_2j() {
    let out = sregular(&["eval", RECIP_SHIFT, "--point", "[0,0,2,0]"]);
    assert_eq!(code(&out), 0);
    let v: Quaternion = serde_json::from_str(&stdout_str(&out)).unwrap();
    let expected = Quaternion::new(0.0, -1.0 / 3.0, -2.0 / 3.0, 0.0);
    assert!(v.dist(expected) < 1e-15);
}

#[test]
fn eval_on_pole_sphere_reports_the_sphere_and_exits_3() {
    let out = sregular(&["eval", RECIP_SHIFT, "--point", "[0,1,0,0]"]);
    assert_eq!(code(&out), 3);
    let report: Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["singular"], true);
    assert_eq!(report["locus"]["sphere"]["x"].as_f64().unwrap(), 0.0);
    assert_eq!(report["locus"]["sphere"]["y"].as_f64().unwrap(), 1.0);
}

#[test]
fn eval_quotient_document_matches_matrix_route() {
    let quotient = r#"{"den":{"coeffs":[[0,-1,0,0],[1,0,0,0]]},"num":{"coeffs":[[1,0,0,0]]}}"#;
    let a = sregular(&["eval", quotient, "--point", "[0.3,0.1,2,0.4]"]);
    let b = sregular(&["eval", RECIP_SHIFT, "--point", "[0.3,0.1,2,0.4]"]);
    assert_eq!(code(&a), 0);
    // Same evaluator underneath, so the bytes agree, not just the values.
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn eval_bad_json_exits_2() {
    assert_eq!(code(&sregular(&["eval", "{not json", "--point", "[0,0,0,0]"])), 2);
    assert_eq!(code(&sregular(&["eval", r#"{"mystery":1}"#, "--point", "[0,0,0,0]"])), 2);
    assert_eq!(code(&sregular(&["eval", IDENTITY, "--point", "[0,0]"])), 2);
}

#[test]
fn eval_reads_stdin_and_files() {
    let out = sregular_stdin(&["eval", "-", "--point", "[0,0,2,0]"], IDENTITY);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out).trim(), "[0.0,0.0,2.0,0.0]");

    let path = std::env::temp_dir().join(format!("sregular-eval-{}.json", std::process::id()));
    std::fs::write(&path, IDENTITY).unwrap();
    let out = sregular(&["eval", path.to_str().unwrap(), "--point", "[0,0,2,0]"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_str(&out).trim(), "[0.0,0.0,2.0,0.0]");

    let missing = sregular(&["eval", "/no/such/file.json", "--point", "[0,0,0,0]"]);
    assert_eq!(code(&missing), 4);
}

#[test]
fn compose_matches_the_library_product() {
    let m1 = r#"{"a":[0,1,0,0],"c":[0,0,0,0],"b":[1,0,0,0],"d":[1,0,0,0]}"#;
    let m2 = r#"{"a":[1,0,0,0],"c":[0,1,0,0],"b":[0,0,1,0],"d":[1,0,0,0]}"#;
    let out = sregular(&["compose", m1, m2]);
    assert_eq!(code(&out), 0);
    let got: MatrixH = serde_json::from_str(&stdout_str(&out)).unwrap();
    let a: MatrixH = serde_json::from_str(m1).unwrap();
    let b: MatrixH = serde_json::from_str(m2).unwrap();
    assert_eq!(got, a.mul(&b));
}

#[test]
fn act_output_round_trips_as_a_quotient() {
    let affine = r#"{"a":[0,1,0,0],"c":[0,0,0,0],"b":[1,0,0,0],"d":[1,0,0,0]}"#;
    let out = sregular(&["act", r#"{"coeffs":[[0,0,0,0],[1,0,0,0]]}"#, affine]);
    assert_eq!(code(&out), 0);
    let r: RegularRational = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(r.den().degree(), Some(0));

    let matrix_as_function = sregular(&["act", affine, affine]);
    assert_eq!(code(&matrix_as_function), 2);
}

#[test]
fn canonical_and_classify_round_trip() {
    let m = r#"{"a":[1,0,0,0],"c":[0,1,0,0],"b":[0,0,1,0],"d":[1,0,0,0]}"#;
    let can = sregular(&["canonical", m]);
    assert_eq!(code(&can), 0);
    let cf: CanonicalRFT = serde_json::from_str(&stdout_str(&can)).unwrap();
    match cf {
        CanonicalRFT::Pole { p, .. } => assert!((p.imag_norm() - 1.0).abs() < 1e-12),
        CanonicalRFT::Affine { .. } => panic!("expected a pole form"),
    }

    let cls = sregular(&["classify", m]);
    let pc: PoleClass = serde_json::from_str(&stdout_str(&cls)).unwrap();
    assert!(matches!(pc, PoleClass::SpherePole(_)));

    let affine = sregular(&["classify", IDENTITY]);
    let pc: PoleClass = serde_json::from_str(&stdout_str(&affine)).unwrap();
    assert!(matches!(pc, PoleClass::Affine));
}

#[test]
fn zeros_reports_the_known_sets() {
    let out = sregular(&["zeros", r#"{"coeffs":[[1,0,0,0],[0,0,0,0],[1,0,0,0]]}"#]);
    assert_eq!(code(&out), 0);
    let zs: ZeroSet = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(zs.isolated.is_empty());
    assert_eq!(zs.spheres.len(), 1);
    assert_eq!((zs.spheres[0].sphere.x(), zs.spheres[0].sphere.y()), (0.0, 1.0));

    // (q - i) * (q - j): only i is a zero.
    let out = sregular(&["zeros", r#"{"coeffs":[[0,0,0,1],[0,-1,-1,0],[1,0,0,0]]}"#]);
    let zs: ZeroSet = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(zs.spheres.is_empty());
    assert_eq!(zs.isolated.len(), 1);
    assert!(zs.isolated[0].point.dist(Quaternion::I) < 1e-8);

    assert_eq!(code(&sregular(&["zeros", RECIP_SHIFT])), 2);
}

#[test]
fn moebius_rotation_preserves_norm_across_a_grid() {
    let mat = sregular(&["moebius", "--a", "[0,0,0,0]", "--u", "[0,1,0,0]"]);
    assert_eq!(code(&mat), 0);
    let matrix = stdout_str(&mat);
    let out = sregular(&[
        "sample",
        matrix.trim(),
        "--grid",
        r#"{"plane":{"unit":[0,1,0,0],"lo":-1,"hi":1,"res":10}}"#,
    ]);
    assert_eq!(code(&out), 0);
    let rows: Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 100);
    for row in rows {
        assert_eq!(row["singular"], false);
        let input: Quaternion = serde_json::from_value(row["input"].clone()).unwrap();
        let output: Quaternion = serde_json::from_value(row["output"].clone()).unwrap();
        assert!((input.norm() - output.norm()).abs() < 1e-12);
    }
}

#[test]
fn moebius_needs_one_complete_parameter_pair() {
    assert_eq!(code(&sregular(&["moebius", "--a", "[0,0,0,0]"])), 2);
    assert_eq!(code(&sregular(&["moebius"])), 2);
    let both = sregular(&[
        "moebius", "--a", "[0,0,0,0]", "--u", "[0,1,0,0]", "--from", "[0,0,0,0]", "--to", "[0,0,0,0]",
    ]);
    assert_eq!(code(&both), 2);
    // An exterior point is a domain error, also 2.
    assert_eq!(code(&sregular(&["moebius", "--a", "[2,0,0,0]", "--u", "[0,1,0,0]"])), 2);
}

#[test]
fn moebius_map_pair_sends_from_to_to() {
    let mat = sregular(&["moebius", "--from", "[0.5,0,0,0]", "--to", "[0,0.5,0,0]"]);
    assert_eq!(code(&mat), 0);
    let out = sregular(&["eval", stdout_str(&mat).trim(), "--point", "[0.5,0,0,0]"]);
    let v: Quaternion = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(v.dist(Quaternion::new(0.0, 0.5, 0.0, 0.0)) < 1e-9);
}

#[test]
fn sample_pole_sphere_rows_are_all_singular() {
    let quotient = r#"{"den":{"coeffs":[[0,-1,0,0],[1,0,0,0]]},"num":{"coeffs":[[1,0,0,0]]}}"#;
    let out = sregular(&[
        "sample",
        quotient,
        "--grid",
        r#"{"sphere":{"x":0,"y":1,"res":25}}"#,
    ]);
    assert_eq!(code(&out), 0);
    let rows: Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 25);
    for row in rows {
        assert_eq!(row["singular"], true);
        assert!(row["output"].is_null());
    }
}

#[test]
fn sample_identity_csv_has_out_equal_in() {
    let out = sregular(&[
        "sample",
        r#"{"coeffs":[[0,0,0,0],[1,0,0,0]]}"#,
        "--grid",
        r#"{"plane":{"unit":[0,0,1,0],"lo":-2,"hi":2,"res":5}}"#,
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "in_w,in_x,in_y,in_z,out_w,out_x,out_y,out_z,singular"
    );
    let mut count = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 9);
        assert_eq!(&fields[0..4], &fields[4..8]);
        assert_eq!(fields[8], "false");
        count += 1;
    }
    assert_eq!(count, 25);
}

#[test]
fn sample_writes_files_and_maps_io_failures_to_4() {
    let path = std::env::temp_dir().join(format!("sregular-sample-{}.json", std::process::id()));
    let out = sregular(&[
        "sample",
        r#"{"coeffs":[[1,0,0,0]]}"#,
        "--grid",
        r#"{"sphere":{"x":0,"y":1,"res":4}}"#,
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let rows: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 4);
    std::fs::remove_file(&path).ok();

    let bad = sregular(&[
        "sample",
        r#"{"coeffs":[[1,0,0,0]]}"#,
        "--grid",
        r#"{"sphere":{"x":0,"y":1,"res":4}}"#,
        "--out",
        "/no-such-directory/rows.json",
    ]);
    assert_eq!(code(&bad), 4);
}

#[test]
fn sample_output_is_deterministic() {
    let args = [
        "sample",
        RECIP_SHIFT,
        "--grid",
        r#"{"plane":{"unit":[0,1,0,0],"lo":-2,"hi":2,"res":13}}"#,
    ];
    let a = sregular(&args);
    let b = sregular(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    // The grid crosses the pole at i: those rows are flagged, not fatal.
    let rows: Value = serde_json::from_str(&stdout_str(&a)).unwrap();
    let singular = rows
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["singular"] == true)
        .count();
    assert!(singular > 0);
}

#[test]
fn sample_bad_grid_spec_exits_2() {
    let out = sregular(&[
        "sample",
        r#"{"coeffs":[[1,0,0,0]]}"#,
        "--grid",
        r#"{"plane":{"unit":[0,1,0,0],"lo":1,"hi":-1,"res":5}}"#,
    ]);
    assert_eq!(code(&out), 2);
    let out = sregular(&[
        "sample",
        r#"{"coeffs":[[1,0,0,0]]}"#,
        "--grid",
        r#"{"cylinder":{"res":5}}"#,
    ]);
    assert_eq!(code(&out), 2);
}
