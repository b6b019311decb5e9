use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polylam"))
}

#[test]
fn connect_prints_intervals_and_certificate() {
    let out = bin()
        .args(["connect", "--s", "0.2,0.3,0.5", "--lambda", "0.6666666666666666"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("A_alpha"));
    assert!(text.contains("n_squares: 9.166666666666"));
    assert!(text.contains("residual"));
}

#[test]
fn connect_without_lambda_prints_intervals_only() {
    let out = bin().args(["connect", "--s", "0.2,0.3,0.5"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("A_beta"));
    assert!(!text.contains("n_squares"));
}

#[test]
fn exit_codes() {
    let bad_input = bin().args(["connect", "--s", "0.3,0.2,0.5"]).output().unwrap();
    assert_eq!(bad_input.status.code(), Some(2));
    let degenerate = bin()
        .args(["connect", "--s", "0.2,0.3,0.5", "--lambda", "1.0"])
        .output()
        .unwrap();
    assert_eq!(degenerate.status.code(), Some(3));
    let usage = bin().args(["connect"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn t2_row_count_and_first_row() {
    let out = bin().args(["t2", "--s", "0.2,0.3,0.5", "--count", "10"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> =
        text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("branch")).collect();
    assert_eq!(rows.len(), 20);
    assert!(rows[0].starts_with("alpha,2.0000000000000001e-1,2.9999999999999999e-1"));
}

#[test]
fn deterministic_output() {
    let run = || {
        bin().args(["region", "--s", "0.2,0.3,0.5", "--count", "24", "--compare-nm"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn region_summary_ordering() {
    let out = bin()
        .args(["region", "--s", "0.2,0.3,0.5", "--count", "16", "--compare-nm"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let summary = text.lines().find(|l| l.starts_with("# summary")).unwrap();
    let doc: serde_json::Value =
        serde_json::from_str(summary.trim_start_matches("# summary ")).unwrap();
    assert_eq!(doc["inclusion_ok"], serde_json::Value::Bool(true));
    let u_a = doc["u_alpha"].as_f64().unwrap();
    let v_a = doc["v_alpha"].as_f64().unwrap();
    let v_b = doc["v_beta"].as_f64().unwrap();
    let u_b = doc["u_beta"].as_f64().unwrap();
    assert!(u_a < v_a && v_a < v_b && v_b < u_b);
    let first = text.lines().nth(2).unwrap();
    let boundary: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("arc") && !l.starts_with("nm_"))
        .collect();
    assert_eq!(first, boundary[0]);
    let coords = |row: &str| row.splitn(4, ',').nth(3).unwrap().to_owned();
    assert_eq!(coords(boundary[0]), coords(boundary[boundary.len() - 1]));
}

#[test]
fn laminate_json_shape() {
    let out = bin()
        .args(["laminate", "--s", "0.2,0.3,0.5", "--kmax", "4", "--p", "0.5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let p = doc["schedule"]["p"].as_f64().unwrap();
    let q = doc["schedule"]["q"].as_f64().unwrap();
    assert!((p - 0.5).abs() < 1e-12);
    let gens = doc["generations"].as_array().unwrap();
    assert_eq!(gens.len(), 5);
    for (k, g) in gens.iter().enumerate() {
        assert!(g["barycenter_drift"].as_f64().unwrap() < 1e-10);
        let mass = g["residual_mass"].as_f64().unwrap();
        let expect = (1.0 - p) * q.powi(k as i32);
        assert!((mass - expect).abs() < 1e-12);
    }
}

#[test]
fn polycrystal_round_trip_row() {
    let out = bin().args(["polycrystal", "--sigma", "4,2,1", "--count", "12"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let theta_line = text.lines().find(|l| l.starts_with("# theta")).unwrap();
    let theta: f64 = theta_line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!((2.0 * theta.powi(3) + 7.0 * theta * theta - 8.0).abs() < 1e-12);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("src"))
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 12);
    for (v, want) in rows[0][3..6].iter().zip([4.0, 2.0, 1.0]) {
        assert!((v - want).abs() < 1e-10 * want);
    }
    for row in &rows {
        assert!(row[6] >= -1e-9);
    }
}
