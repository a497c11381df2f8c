use serde_json::Value;
use std::process::{Command, Output};

fn algres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algres")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = algres(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout));
    });
    (v, out.status.code().unwrap())
}

#[test]
fn classify_names_the_class() {
    let (v, code) = json(&["classify", "--curve", "S:8", "--form", "dx2^dx3 + 3*x3*dx1^dx3"]);
    assert_eq!(code, 0);
    assert_eq!(v["name"], "S^{1}_2");
    assert_eq!(v["moduli"]["c5"], "3");
    assert_eq!(v["moduli"]["c3"], "0");
}

#[test]
fn classify_from_coordinates() {
    let (v, code) = json(&["classify", "--curve", "S:7", "--coords", "0,0,1,0,0,1/2,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["name"], "S^{3}_r");
    assert_eq!(v["moduli"]["c6"], "1/2");
}

#[test]
fn relation_form_has_zero_coordinates() {
    let (v, code) = json(&["coords", "--curve", "S:6", "--form", "x2*dx2^dx3"]);
    assert_eq!(code, 0);
    assert_eq!(v["zero"], true);
    assert!(v["coords"].as_array().unwrap().iter().all(|c| c == "0"));
}

#[test]
fn closed_coordinates_of_theta_names() {
    let (v, _) = json(&["coords", "--closed", "--curve", "S:6", "--form", "theta3 - 2*theta5"]);
    let coords: Vec<&str> = v["coords"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(coords, ["0", "0", "1", "0", "-2", "0"]);
}

#[test]
fn bases_have_expected_dimensions() {
    for mu in [6u32, 7, 9] {
        let curve = format!("S:{mu}");
        let (full, _) = json(&["basis", "--curve", &curve]);
        let (closed, _) = json(&["closed-basis", "--curve", &curve]);
        assert_eq!(full["dim"], mu + 1);
        assert_eq!(closed["dim"], mu);
    }
}

#[test]
fn invariants_report() {
    let (v, code) = json(&["invariants", "--curve", "S:8:3", "--coords", "0,0,0,1,0,1,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["class"]["name"], "S^{4,1}");
    assert_eq!(v["realizable"], true);
    assert_eq!(v["ind"], 1);
    let (v, _) = json(&["invariants", "--curve", "S:8", "--coords", "0,0,0,1,0,1,0,0"]);
    assert_eq!(v["realizable"], false);
    let (v, code) = json(&["invariants", "--curve", "S:8:3", "--form", "dx1^dx3 + dx5^dx6"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["class"]["name"], "S^0");
}

#[test]
fn paper_tables_csv() {
    let out = algres(&["--format", "csv", "paper-tables", "--mu", "7"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["relations_mu7", "full_basis_mu7", "closed_basis_mu7", "classification_mu7", "tangency_mu7", "geometry_mu7", "action_mu7"] {
        assert!(text.contains(&format!("# {name}\n")), "missing {name}");
    }
    let block = text.split("# classification_mu7\n").nth(1).unwrap().split("\n\n").next().unwrap();
    let mut reader = csv::Reader::from_reader(block.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(&rows[0][0], "S^0");
    assert_eq!(&rows[11][0], "S^{7}");
    assert_eq!(&rows[11][5], "inf");
}

#[test]
fn check_relations_passes() {
    let out = algres(&["check-relations", "--mu", "6", "7", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("PASS").count(), 27);
    assert!(!text.contains("FAIL"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["--format", "json", "paper-tables", "--mu", "6"],
        vec!["--format", "csv", "action-table", "--curve", "S:9"],
        vec!["invariants", "--curve", "S:9:3", "--coords", "0,1,0,0,0,0,0,0,1"],
    ] {
        let a = algres(&args);
        let b = algres(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn curve_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cusp.json");
    std::fs::write(&path, r#"{"variables": ["x", "y"], "weights": [2, 3], "equations": ["y^2 - x^3"],
            "branches": [{"label": "B", "map": ["t^2", "t^3"]}]}"#).unwrap();
    let p = path.to_str().unwrap();
    let (v, code) = json(&["basis", "--curve", p]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["kind"], "full");
}

#[test]
fn exit_codes() {
    let (v, code) = json(&["classify", "--curve", "S:8", "--form", "dx1^"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    let (v, code) = json(&["classify", "--curve", "S:5", "--coords", "1"]);
    assert_eq!(code, 2);
    assert!(v["error"]["message"].as_str().unwrap().contains("mu"));
    let (_, code) = json(&["classify", "--curve", "S:8", "--coords", "1,2"]);
    assert_eq!(code, 2);
    let (_, code) = json(&["basis", "--curve", "/nonexistent/curve.json"]);
    assert_eq!(code, 2);
    let out = algres(&["classify"]);
    assert_eq!(out.status.code(), Some(2));
}
