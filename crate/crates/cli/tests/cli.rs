use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use symsys_core::SympSystem;

fn symsys(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symsys"))
        .current_dir(dir)
        .env_remove("SYMSYS_MAX_VECTORS")
        .args(args)
        .output()
        .unwrap()
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn construct_two_emits_seven_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let out = symsys(dir.path(), &["construct", "--which", "two", "--genus", "3", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["command"], "construct");
    assert_eq!(v["config"]["seed"], 0);
    assert_eq!(v["result"]["elements"].as_array().unwrap().len(), 7);
    let s: SympSystem = serde_json::from_value(v["result"].clone()).unwrap();
    assert!(s.check().unwrap().valid);
}

#[test]
fn emitted_systems_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    for which in ["one", "two"] {
        let out = symsys(dir.path(), &["construct", "--which", which, "--genus", "4", "--k", "5"]);
        let envelope = json_stdout(&out);
        let path = dir.path().join(format!("{which}.json"));
        std::fs::write(&path, &out.stdout).unwrap();
        let bare = dir.path().join(format!("{which}-bare.json"));
        std::fs::write(&bare, envelope["result"].to_string()).unwrap();
        for p in [&path, &bare] {
            let out = symsys(dir.path(), &["verify", p.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0));
            assert_eq!(json_stdout(&out)["result"]["valid"], true);
        }
        let original: SympSystem = serde_json::from_value(envelope["result"].clone()).unwrap();
        let again: SympSystem = serde_json::from_str(&std::fs::read_to_string(&bare).unwrap()).unwrap();
        assert_eq!(original, again);
    }
}

#[test]
fn invalid_system_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"genus":1,"k":2,"elements":[[1,0],[0,1]]}"#).unwrap();
    let out = symsys(dir.path(), &["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_stdout(&out)["result"]["valid"], false);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(symsys(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(symsys(dir.path(), &["search", "--g", "1"]).status.code(), Some(1));
    let path = dir.path().join("nok.json");
    std::fs::write(&path, r#"{"genus":1,"elements":[[1,0]]}"#).unwrap();
    assert_eq!(symsys(dir.path(), &["verify", path.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(symsys(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn verify_bounds_table_and_json_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = symsys(dir.path(), &["verify-bounds", "--gmax", "2", "--mmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 13);
    assert!(text.lines().skip(1).all(|l| l.split_whitespace().nth(6) == Some("match")));
    let artifact: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("symsys-verify-bounds.json")).unwrap()).unwrap();
    assert_eq!(artifact["result"]["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn search_respects_vector_budget_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let out = symsys(dir.path(), &["search", "--g", "2", "--m", "2", "--primitive", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["result"]["max_size"], 4);
    assert_eq!(v["result"]["exhaustive"], true);

    let refused = Command::new(env!("CARGO_BIN_EXE_symsys"))
        .current_dir(dir.path())
        .env("SYMSYS_MAX_VECTORS", "100")
        .args(["search", "--g", "2", "--m", "2"])
        .output()
        .unwrap();
    assert_eq!(refused.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("255"));
}

#[test]
fn polygon_matrix_is_all_twos() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("a.svg");
    let out = symsys(dir.path(), &["polygon", "--g", "12", "--k", "8", "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').skip(1).collect()).collect();
    assert_eq!(rows.len(), 21);
    for (a, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 21);
        for (b, x) in row.iter().enumerate() {
            assert_eq!(*x, if a == b { "0" } else { "2" });
        }
    }
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
    assert!(dir.path().join("symsys-polygon.json").exists());
}

#[test]
fn polygon_pair_and_minimal() {
    let dir = tempfile::tempdir().unwrap();
    let out = symsys(
        dir.path(),
        &["polygon", "--g", "12", "--k", "8", "--pair", "3,4,6,9", "--minimal", "--format", "json"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["result"]["crossings"], serde_json::json!([[0, 2], [2, 0]]));
    assert_eq!(v["result"]["curves"][1]["quad"], serde_json::json!([1, 6, 9, 12]));
    let bad = symsys(dir.path(), &["polygon", "--g", "12", "--k", "8", "--pair", "1,2,3,4"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn reduce_modes() {
    let dir = tempfile::tempdir().unwrap();
    let out = symsys(dir.path(), &["construct", "--which", "two", "--genus", "4", "--k", "4"]);
    let path = dir.path().join("s.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let p = path.to_str().unwrap();

    let genus = json_stdout(&symsys(dir.path(), &["reduce", p, "--mode", "genus"]));
    assert_eq!(genus["result"]["kind"], "genus");
    assert_eq!(genus["result"]["pairings_preserved"], true);
    assert_eq!(genus["result"]["output"]["genus"], 3);

    let parity = json_stdout(&symsys(dir.path(), &["reduce", p, "--mode", "parity"]));
    assert_eq!(parity["result"]["violations"], 0);

    let bound = json_stdout(&symsys(dir.path(), &["reduce", p, "--mode", "bound"]));
    assert_eq!(bound["result"]["certificate"]["certified_bound"], 9);

    // Every element is primitive, so halving does not apply.
    assert_eq!(symsys(dir.path(), &["reduce", p, "--mode", "power"]).status.code(), Some(1));

    let even = dir.path().join("even.json");
    std::fs::write(&even, r#"{"genus":1,"power":3,"elements":[[2,0],[0,2]]}"#).unwrap();
    let power = json_stdout(&symsys(dir.path(), &["reduce", even.to_str().unwrap(), "--mode", "power"]));
    assert_eq!(power["result"]["output"]["power"], 1);
    assert_eq!(power["result"]["output"]["elements"], serde_json::json!([[1, 0], [0, 1]]));
}

#[test]
fn normal_form_from_stdin_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.json");
    std::fs::write(&path, r#"{"genus":3,"power":2,"u":[0,0,0,2,0,1],"v":[0,1,2,2,2,0]}"#).unwrap();
    let out = symsys(dir.path(), &["normal-form", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["result"]["certified"], true);
    assert_eq!(v["result"]["b"], 2);
    assert_eq!(v["result"]["transform"]["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn csv_is_refused_where_undefined() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.json");
    std::fs::write(&path, r#"{"genus":1,"power":2,"u":[1,0],"v":[1,1]}"#).unwrap();
    let out = symsys(dir.path(), &["normal-form", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
}
