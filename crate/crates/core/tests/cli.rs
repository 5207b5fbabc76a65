use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unitary-flips")).args(args).output().expect("binary runs")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn json(p: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(Path::new(p)).unwrap()).unwrap()
}

#[test]
fn canonical_class_one_at_rank_one() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "flip.json");
    let o = bin(&["canonical", "--n", "1", "--q", "3", "--class", "I", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tau"], "id");
    assert_eq!(v["matrix"], serde_json::json!([[[0, 0], [1, 0]], [[1, 0], [0, 0]]]));
}

#[test]
fn canonical_files_classify_back() {
    let dir = TempDir::new().unwrap();
    for class in ["I", "II", "III", "IV"] {
        let flip = path(&dir, &format!("{class}.json"));
        let report = path(&dir, &format!("{class}-report.json"));
        assert_eq!(bin(&["canonical", "--n", "2", "--q", "3", "--class", class, "--out", &flip]).status.code(), Some(0));
        assert_eq!(bin(&["classify", "--input", &flip, "--out", &report]).status.code(), Some(0));
        let r = json(&report);
        assert_eq!(r["class"], class);
        assert_eq!(r["basis"].as_array().unwrap().len(), 4);
    }
    // α = ω for the canonical class II flip.
    assert_eq!(json(&path(&dir, "II-report.json"))["scalar"], serde_json::json!([0, 1]));
}

#[test]
fn bad_parameters_and_inputs_map_to_exit_codes() {
    let dir = TempDir::new().unwrap();
    let o = bin(&["canonical", "--n", "1", "--q", "4", "--class", "I"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("q must be an odd prime"));
    assert_eq!(bin(&["canonical", "--n", "1", "--q", "3", "--class", "V"]).status.code(), Some(2));

    let identity = path(&dir, "id.json");
    std::fs::write(&identity, r#"{"q":3,"n":1,"tau":"id","matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#).unwrap();
    let o = bin(&["classify", "--input", &identity]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a flip"));

    let truncated = path(&dir, "cut.json");
    std::fs::write(&truncated, r#"{"q":3,"n":1,"tau":"id","matrix":[[[0,0],"#).unwrap();
    assert_eq!(bin(&["classify", "--input", &truncated]).status.code(), Some(4));
    assert_eq!(bin(&["classify", "--input", &path(&dir, "missing.json")]).status.code(), Some(4));
}

#[test]
fn geometry_reports() {
    let dir = TempDir::new().unwrap();
    let one = path(&dir, "one.json");
    let three = path(&dir, "three.json");
    bin(&["canonical", "--n", "2", "--q", "3", "--class", "I", "--out", &one]);
    bin(&["canonical", "--n", "2", "--q", "3", "--class", "III", "--out", &three]);

    let out = path(&dir, "g1.json");
    assert_eq!(bin(&["geometry", "--input", &one, "--variant", "full", "--out", &out]).status.code(), Some(0));
    assert_eq!(json(&out)["transversal"], true);

    let out = path(&dir, "g3.json");
    assert_eq!(bin(&["geometry", "--input", &three, "--variant", "plus", "--out", &out]).status.code(), Some(0));
    let g = json(&out);
    assert_eq!(g["transversal"], true);
    let lines = &g["disc_histogram"][1];
    assert_eq!(lines["non_square"], 0);
    assert!(lines["square"].as_u64().unwrap() > 0);

    assert_eq!(bin(&["geometry", "--input", &one, "--variant", "plus"]).status.code(), Some(5));
    assert_eq!(
        bin(&["geometry", "--input", &one, "--max-enumeration", "100"]).status.code(),
        Some(6)
    );
}

#[test]
fn verify_is_deterministic_and_guarded() {
    let dir = TempDir::new().unwrap();
    let a = path(&dir, "a.json");
    let b = path(&dir, "b.json");
    for out in [&a, &b] {
        let o = bin(&["verify", "--n", "2", "--q", "3", "--suite", "all", "--seed", "7", "--out", out]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let r = json(&a);
    assert_eq!(r["summary"]["failed"], 0);
    assert_eq!(r["seed"], 7);
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut unique = names.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), names.len());

    let out = path(&dir, "big.json");
    let o = bin(&["verify", "--n", "3", "--q", "3", "--suite", "building", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&out);
    let status = |name: &str| {
        r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()["status"].clone()
    };
    assert_eq!(status("opposite_iff_nondegenerate"), "skipped");
    assert_eq!(status("building_counts"), "skipped");
    assert_eq!(status("polar_laws"), "pass");
    assert_eq!(status("apartment"), "pass");
}
