use std::process::{Command, Output};

fn blochmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blochmap")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn rotation_point_matches_known_values() {
    let out = blochmap(&[
        "rotation",
        "--delta",
        "1.5707963267948966",
        "--beta",
        "1.0471975511965976",
        "--schemes",
        "rho3,rho1,sigma1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "delta,rho3,rho1,sigma1");
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[1] - 0.58333).abs() < 1e-4);
    assert!((row[2] - 0.6111).abs() < 1e-4);
    assert!((row[3] - 2.0 / 3.0).abs() < 1e-9);
}

#[test]
fn invalid_delta_is_a_usage_error() {
    let out = blochmap(&["rotation", "--delta", "-1", "--beta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--delta"), "{err}");
}

#[test]
fn unknown_scheme_is_a_usage_error() {
    let out = blochmap(&["orthog", "--delta", "0.5", "--schemes", "rho9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn orthog_crossovers_report() {
    let out = blochmap(&["orthog", "--crossovers"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let find = |pair: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(pair))
            .unwrap_or_else(|| panic!("missing {pair} in {text}"))
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((find("identity/bit_flip") - 0.932197).abs() < 1e-3);
    assert!((find("rho1/sigma2") - 0.82).abs() < 2e-2);
}

#[test]
fn json_output_parses() {
    let out = blochmap(&[
        "orthog",
        "--sweep-delta",
        "0.2:1.4:5",
        "--schemes",
        "quantum_optimal,rho1",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let rows = parsed.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert!(row["quantum_optimal"].as_f64().unwrap() >= row["rho1"].as_f64().unwrap() - 1e-9);
        assert!(row["regime"].is_string());
    }
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["general", "--sweep-delta", "0:3.14159:7", "--alpha", "1.0", "--schemes", "rho1,sigma2"];
    let a = blochmap(&args);
    let b = blochmap(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains('\r'));
}

#[test]
fn baseline_sigma_symmetry() {
    let fid = |scheme: &str, alpha: f64| -> f64 {
        let out = blochmap(&["baseline", "--alpha", &alpha.to_string(), "--schemes", scheme]);
        assert!(out.status.success());
        stdout(&out).lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap()
    };
    for alpha in [0.3, 1.1, 2.0] {
        let s1 = fid("sigma1", alpha);
        let s2 = fid("sigma2", std::f64::consts::PI - alpha);
        assert!((s1 - s2).abs() < 1e-9, "{s1} vs {s2}");
    }
}

#[test]
fn universal_column_appears() {
    let out = blochmap(&[
        "general",
        "--delta",
        "3.141592653589793",
        "--sweep-alpha",
        "0:0.6:4",
        "--schemes",
        "quantum_optimal",
        "--compare-universal",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert!(header.ends_with("universal"), "{header}");
    // below the departure threshold the optimum equals the universal value
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let quantum: f64 = cells[1].parse().unwrap();
        let universal: f64 = cells.last().unwrap().parse().unwrap();
        assert!((quantum - universal).abs() < 1e-8);
    }
}
