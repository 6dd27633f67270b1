use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mana-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn measure_strange_state() {
    let out = run(&["measure", "--state", "strange", "--measures", "mana"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "mana = 0.51082562\n");
}

#[test]
fn measure_in_base_two() {
    let out = run(&["measure", "--state", "strange", "--log-base", "2"]);
    assert_eq!(stdout(&out), "mana = 0.73696559\n");
}

#[test]
fn maximally_mixed_has_no_magic() {
    let out = run(&[
        "measure",
        "--state",
        "maxmixed",
        "--dim",
        "3",
        "--measures",
        "mana,l1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("mana = 0.00000000\n"), "{text}");
    assert!(text.contains("l1 = 1.00000000\n"), "{text}");
    assert!(text.contains("log_l1 = 0.00000000\n"), "{text}");
}

#[test]
fn stabilizer_state_file_has_zero_sre() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.json");
    let h = 1.0 / 3f64.sqrt();
    fs::write(
        &path,
        format!(r#"{{"dims":[3],"kind":"pure","data":[[{h},0],[{h},0],[{h},0]]}}"#),
    )
    .unwrap();
    let out = run(&[
        "measure",
        "--state-file",
        path.to_str().unwrap(),
        "--measures",
        "sre2,mana",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout(&out), "sre2 = 0.00000000\nmana = 0.00000000\n");
}

#[test]
fn json_report_parses() {
    let out = run(&[
        "measure",
        "--state",
        "t",
        "--measures",
        "mana,sre2",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn bad_input_exits_2_with_one_line() {
    for args in [
        &["measure", "--state", "nosuch"][..],
        &["measure", "--state", "strange", "--dim", "4"][..],
        &["measure", "--state", "strange", "--measures", "bogus"][..],
        &["verify", "prop9"][..],
        &["figure", "fig9"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn verify_exit_codes() {
    let ok = run(&["verify", "thm1", "--trials", "20", "--seed", "7"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("all 2 checks passed"));

    let red = run(&["verify", "prop2"]);
    assert_eq!(red.status.code(), Some(1));
    let err = String::from_utf8(red.stderr.clone()).unwrap();
    assert!(err.contains("negated index pattern"), "{err}");
    assert!(stdout(&red).contains("expected"));
}

#[test]
fn verify_json_report() {
    let out = run(&["verify", "additivity", "--trials", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["suite"], "additivity");
}

#[test]
fn figure_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&["figure", "fig4a", "--output", path.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(!text.contains('\r'));
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["p", "I", "m_l1", "m_sre2", "m_mana"]);
    let last = rows.last().unwrap();
    assert_eq!(last[0], 1.0);
    assert!((last[4] - (15.0f64 / 9.0).ln()).abs() < 1e-12);
}

#[test]
fn figure_to_unwritable_path_exits_2() {
    let out = run(&["figure", "fig3a", "--output", "/nonexistent/dir/out.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fig1_peak_is_ln_five_thirds() {
    let (header, rows) = parse_csv(&stdout(&run(&["figure", "fig1"])));
    assert_eq!(header, ["p", "lambda", "m_mana"]);
    assert_eq!(rows.len(), 101 * 101);
    let corner = rows.last().unwrap();
    assert_eq!(corner[0], 1.0);
    assert!((corner[1] - 0.5f64.sqrt()).abs() < 1e-15);
    assert!((corner[2] - (5.0f64 / 3.0).ln()).abs() < 1e-12);
}

#[test]
fn fig2_vanishes_below_the_branch_point() {
    let (header, rows) = parse_csv(&stdout(&run(&["figure", "fig2"])));
    assert_eq!(header, ["p", "theta", "m_mana"]);
    assert_eq!(rows.len(), 101 * 101);
    let mut zeros = 0;
    for row in &rows {
        let (p, theta) = (row[0], row[1]);
        assert!((0.0..=FRAC_PI_2).contains(&theta));
        if p <= 2.0 / (2.0 + 3.0 * (2.0 * theta).sin()) {
            assert_eq!(row[2], 0.0, "p = {p}, theta = {theta}");
            zeros += 1;
        }
    }
    assert!(zeros > 101 * 50);
}

#[test]
fn maximize_reports_unattained_bound() {
    let out = run(&["maximize", "--dim", "7", "--grid", "8", "--refine", "20"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("note: bound not certified attained"),
        "{text}"
    );
}

#[test]
fn maximize_qutrit_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.json");
    let out = run(&["maximize", "--dim", "3", "--json", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("best mana = 0.4613770443"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["argmax"].as_array().unwrap().len(), 18);
}
