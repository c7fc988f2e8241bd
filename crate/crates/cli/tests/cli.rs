use std::path::PathBuf;
use std::process::{Command, Output};

fn adiabat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adiabat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(out).trim()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("adiabat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Data rows of a CSV with `#` comments, keyed by the header.
fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .filter(|l| !l.starts_with("slope="))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i]).collect()
}

#[test]
fn evolve_resonance_minimum_fidelity() {
    let path = scratch("resonance.csv");
    let out = adiabat(&[
        "evolve",
        "--omega0",
        "1",
        "--omega",
        "-1",
        "--theta",
        "0.1",
        "--t-final",
        "125.66370614359172",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# adiabat "));
    assert!(!text.contains('\r'));
    let (header, rows) = read_csv(&text);
    assert_eq!(
        header,
        [
            "t",
            "re0",
            "im0",
            "re1",
            "im1",
            "fidelity",
            "deviation",
            "deviationEnvelope"
        ]
    );
    assert_eq!(rows.len(), 1000);
    let min = column(&header, &rows, "fidelity")
        .into_iter()
        .fold(1.0, f64::min);
    assert!((min - 0.04998).abs() < 1e-4, "{min}");
}

#[test]
fn evolve_flat_cone_and_slow_rotation() {
    let out = adiabat(&["evolve", "--omega", "2", "--theta", "0"]);
    let (header, rows) = read_csv(&stdout(&out));
    assert!(column(&header, &rows, "fidelity")
        .iter()
        .all(|f| (f - 1.0).abs() < 1e-10));

    let out = adiabat(&["evolve", "--omega0", "1", "--omega", "1", "--theta", "0.1"]);
    let (header, rows) = read_csv(&stdout(&out));
    let max = column(&header, &rows, "deviation")
        .into_iter()
        .fold(0.0, f64::max);
    assert!(max <= 0.0499791 + 1e-8);
    assert!(column(&header, &rows, "deviationEnvelope")
        .iter()
        .all(|e| (e - 0.0499791).abs() < 1e-7));
}

#[test]
fn criteria_reports() {
    let v = json(&adiabat(&[
        "criteria", "--omega0", "1", "--omega", "-1", "--theta", "0.1", "--json",
    ]));
    assert!((v["aPrioriValue"].as_f64().unwrap() - 0.0998334).abs() < 1e-7);
    assert!((v["aPosterioriEnvelope"].as_f64().unwrap() - 0.99875).abs() < 1e-5);
    assert_eq!(v["verdictAPriori"], true);
    assert_eq!(v["verdictAPosteriori"], false);
    for key in ["omegaBar", "beta", "aPrioriGeneric"] {
        assert!(v[key].is_f64(), "{key}");
    }

    let v = json(&adiabat(&[
        "criteria", "--omega0", "1", "--omega", "0", "--theta", "0.3", "--json",
    ]));
    assert_eq!(v["aPosterioriEnvelope"].as_f64().unwrap(), 0.0);
    assert_eq!(v["verdictAPriori"], true);
    assert_eq!(v["verdictAPosteriori"], true);

    let v = json(&adiabat(&[
        "criteria", "--omega0", "1", "--omega", "1", "--theta", "0.1", "--json",
    ]));
    assert!((v["aPosterioriEnvelope"].as_f64().unwrap() - 0.0499791).abs() < 1e-7);
    assert_eq!(v["verdictAPosteriori"], true);
}

#[test]
fn criteria_text_mode() {
    let out = adiabat(&["criteria", "--omega", "1", "--theta", "0.1"]);
    assert!(out.status.success());
    assert!(stdout(&out)
        .lines()
        .any(|l| l.starts_with("aPrioriValue=0.0998")));
}

#[test]
fn sweep_rows_show_a_priori_insufficiency() {
    let out = adiabat(&[
        "sweep",
        "--omega-min",
        "-1",
        "--omega-max",
        "1",
        "--omega-count",
        "3",
        "--theta-min",
        "0",
        "--theta-max",
        "0.1",
        "--theta-count",
        "2",
    ]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&stdout(&out));
    let omega = column(&header, &rows, "omega");
    let theta = column(&header, &rows, "theta");
    let a_priori = column(&header, &rows, "aPrioriValue");
    let min_fidelity = column(&header, &rows, "minFidelity");
    for i in 0..rows.len() {
        if theta[i] == 0.0 {
            assert_eq!(min_fidelity[i], 1.0);
        } else if omega[i] == -1.0 {
            assert!(a_priori[i] < 0.1 && min_fidelity[i] < 0.1);
        } else if omega[i] == 1.0 {
            assert!(min_fidelity[i] >= 0.9987);
        }
    }
}

#[test]
fn sweep_numeric_cross_check() {
    let out = adiabat(&[
        "sweep",
        "--mode",
        "both",
        "--omega-count",
        "3",
        "--theta-count",
        "3",
        "--horizon",
        "5",
    ]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&stdout(&out));
    assert!(column(&header, &rows, "maxAmplitudeError")
        .iter()
        .all(|e| *e < 1e-7));
}

#[test]
fn primed_reports() {
    let v = json(&adiabat(&[
        "primed", "--omega0", "1", "--omega", "1", "--theta", "0.1",
    ]));
    assert!((v["thetaPrime"].as_f64().unwrap() - 0.05).abs() < 1e-12);
    assert!((v["omegaPrime"].as_f64().unwrap() + 1.9975005).abs() < 1e-7);
    assert!((v["primedEnvelope"].as_f64().unwrap() - 0.1f64.sin()).abs() < 1e-10);

    let v = json(&adiabat(&[
        "primed", "--omega0", "1", "--omega", "0.05", "--theta", "0.5",
    ]));
    assert!((v["primedEnvelope"].as_f64().unwrap() - 0.4794).abs() < 1e-4);
    assert!((v["aPrioriValue"].as_f64().unwrap() - 0.0240).abs() < 1e-4);

    let v = json(&adiabat(&[
        "primed", "--omega0", "1", "--omega", "0", "--theta", "0.7",
    ]));
    assert_eq!(v["thetaPrime"].as_f64().unwrap(), 0.0);
    assert_eq!(v["omegaPrime"].as_f64().unwrap(), -1.0);
    assert!(v["maxResidual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn scaling_study() {
    let out = adiabat(&["scaling"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let slope: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("slope="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((0.8..=1.2).contains(&slope));

    let flat = stdout(&adiabat(&["scaling", "--theta", "0"]));
    assert!(flat.contains("slope=n/a"));
    let (header, rows) = read_csv(&flat);
    assert!(column(&header, &rows, "error").iter().all(|e| *e < 1e-10));

    let out = adiabat(&["scaling", "--eps", "0.1,0.02,0.01,0.005"]);
    let (header, rows) = read_csv(&stdout(&out));
    let errors = column(&header, &rows, "error");
    let ratio = errors[2] / errors[3];
    assert!((1.3..=3.0).contains(&ratio), "{ratio}");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| adiabat(args).status.code().unwrap();
    assert_eq!(code(&["criteria", "--omega", "0.5"]), 0);
    assert_eq!(code(&["criteria", "--nonsense"]), 2);
    assert_eq!(code(&["criteria", "--theta", "2.0"]), 2);
    assert_eq!(code(&["scaling", "--eps", "0.1,0.01"]), 2);
    assert_eq!(code(&["scaling", "--eps", "0.5,0.01,0.005"]), 2);
    assert_eq!(code(&["sweep", "--omega-count", "1"]), 2);
    assert_eq!(code(&["evolve", "--tol", "1e-3"]), 2);
    assert_eq!(code(&["evolve", "--out", "/nonexistent-dir/x.csv"]), 3);
    assert_eq!(code(&["criteria", "--omega", "-1", "--theta", "0"]), 4);
    assert_eq!(code(&["primed", "--omega", "-1", "--theta", "0"]), 4);
    assert_eq!(
        code(&[
            "primed",
            "--omega",
            "1",
            "--theta",
            "0.1",
            "--residual-bound",
            "1e-300"
        ]),
        5
    );
}

#[test]
fn json_errors_are_structured() {
    let out = adiabat(&["criteria", "--omega", "-1", "--theta", "0", "--json"]);
    let v = json(&out);
    assert_eq!(v["error"]["code"], "degenerate_input");
    assert!(v["error"]["message"].is_string());
    let v = json(&adiabat(&["criteria", "--bogus", "--json"]));
    assert_eq!(v["error"]["code"], "usage");
}

#[test]
fn closed_form_outputs_are_byte_identical() {
    for args in [
        &["criteria", "--omega", "-1", "--theta", "0.1", "--json"][..],
        &["sweep", "--omega-count", "17", "--theta-count", "9"][..],
        &["scaling", "--eps", "0.1,0.02,0.005"][..],
    ] {
        let a = adiabat(args);
        let b = adiabat(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
