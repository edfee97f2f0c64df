//! End-to-end tests of the `entkit` binary: output formats, exit codes, and
//! byte-determinism of the CSV emission.

use std::process::{Command, Output};

fn entkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn gme_ghz_emits_known_row() {
    let out = entkit(&["gme", "--state", r#"{"type":"ghz","n":3}"#]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda_max,e_sin2,e_log2,converged,sweeps"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("0.7071068,0.5000000,1.0000000,true,"), "{row}");
}

#[test]
fn gme_determinant_value() {
    let out = entkit(&["gme", "--state", r#"{"type":"det","n":3}"#]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("2.5849625"));
}

#[test]
fn gme_product_state_is_unentangled() {
    let out = entkit(&["gme", "--state", r#"{"type":"dicke","n":3,"k":0}"#]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("1.0000000,0.0000000,0.0000000,"), "{row}");
}

#[test]
fn invalid_inputs_exit_2() {
    let out = entkit(&["gme", "--state", "not json"]);
    assert_eq!(out.status.code(), Some(2));

    // Mixed states are not accepted by gme.
    let out = entkit(&[
        "gme",
        "--state",
        r#"{"type":"dicke_mixture","n":2,"probs":[0.5,0.5,0]}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Out-of-range constructor parameters.
    let out = entkit(&["re", "--state", r#"{"type":"dicke","n":3,"k":7}"#]);
    assert_eq!(out.status.code(), Some(2));

    // Unknown figure ids are rejected by the parser.
    let out = entkit(&["figure", "--fig", "fig9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn re_two_qubit_mixture_matches_closed_form() {
    let out = entkit(&[
        "re",
        "--state",
        r#"{"type":"dicke_mixture","n":2,"probs":[0.5,0.5,0]}"#,
        "--starts",
        "6",
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("er_lower,f_upper,co_f,er_numeric"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "", "mixed state has no pure lower bound");
    assert_eq!(row[1], "0.1225562");
    assert_eq!(row[2], "0.1225562");
    let er: f64 = row[3].parse().unwrap();
    assert!((er - 0.1225562).abs() < 1e-3);
}

#[test]
fn re_separable_input_is_zero() {
    let out = entkit(&[
        "re",
        "--state",
        r#"{"type":"sigma_theta","n":2,"theta":0.785398}"#,
        "--starts",
        "4",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let er: f64 = row[3].parse().unwrap();
    assert!(er <= 1e-4, "er = {er}");
}

#[test]
fn re_no_numeric_leaves_column_empty() {
    let out = entkit(&[
        "re",
        "--state",
        r#"{"type":"dicke","n":4,"k":2}"#,
        "--no-numeric",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!(!row[0].is_empty(), "pure state gets the lower bound");
    assert!(!row[1].is_empty());
    assert!(row[3].is_empty());
}

#[test]
fn re_restricted_runs_on_dicke_mixtures() {
    let out = entkit(&[
        "re",
        "--state",
        r#"{"type":"dicke_mixture","n":3,"probs":[0.25,0.75,0,0]}"#,
        "--restrict",
        "dicke",
        "--starts",
        "6",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let er: f64 = row[3].parse().unwrap();
    // F_{3;0,1}(1/4), frozen from the closed form.
    assert!((er - 0.4338344).abs() < 1e-3, "er = {er}");
}

#[test]
fn figure_fig7_has_exact_header_and_zero_crossing() {
    let out = entkit(&["figure", "--fig", "fig7", "--grid", "21"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,f"));
    let at_half = lines.find(|l| l.starts_with("0.5000000")).unwrap();
    assert_eq!(at_half, "0.5000000,0.0000000");
}

#[test]
fn re_output_is_deterministic_for_fixed_seed() {
    let args = [
        "re",
        "--state",
        r#"{"type":"dicke_mixture","n":2,"probs":[0.3,0.7,0]}"#,
        "--starts",
        "3",
        "--seed",
        "42",
    ];
    let a = entkit(&args);
    let b = entkit(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn figure_output_is_deterministic() {
    let args = [
        "figure", "--fig", "fig6", "--grid", "31", "--seed", "7",
    ];
    let a = entkit(&args);
    let b = entkit(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "fixed seed must give identical bytes");
    let text = stdout(&a);
    assert_eq!(text.lines().next(), Some("s,epsilon,f"));
}

#[test]
fn figure_multi_family_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("fig3.csv");
    let out = entkit(&[
        "figure",
        "--fig",
        "fig3",
        "--grid",
        "11",
        "--no-numeric",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let main = std::fs::read_to_string(dir.path().join("fig3_rho_4_0_3.csv")).unwrap();
    assert!(main.starts_with("s,f,co_f,er_numeric\n"));
    let blowup = std::fs::read_to_string(dir.path().join("fig3_rho_4_0_3_blowup.csv")).unwrap();
    // The blow-up range stops at s = 0.01.
    let last = blowup.lines().last().unwrap();
    assert!(last.starts_with("0.0100000,"), "{last}");
}

#[test]
fn figure_fig1_endpoints_match_w_entanglement() {
    let out = entkit(&[
        "figure", "--fig", "fig1", "--grid", "5", "--no-numeric",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,e_log2,er_numeric"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[1], "1.1699250");
    assert!(first[2].is_empty());
}

#[test]
fn verify_monotone_passes() {
    let out = entkit(&["verify", "monotone"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("min f(4,x)"));
    assert!(text.contains("2/2 checks passed"));
}

#[test]
fn verify_saturation_passes() {
    let out = entkit(&["verify", "saturation"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("32/32 checks passed"));
}

#[test]
fn verify_plenio_vedral_passes() {
    let out = entkit(&["verify", "plenio_vedral"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("25/25 checks passed"));
}
