use std::process::Command;

use serde_json::Value;
use spinor::cli::{run, EXIT_OK, EXIT_PRECISION, EXIT_USAGE, EXIT_VERIFY};

fn json_of(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["spinor"];
    full.extend_from_slice(args);
    let out = run(full);
    let text = if out.stdout.is_empty() { &out.stderr } else { &out.stdout };
    (serde_json::from_str(text).unwrap_or(Value::Null), out.code)
}

const BINARY: &str = r#"{"schema":"spinor/1","field":{"kind":"Q2"},"M":[["1",0],["1",1]]}"#;

#[test]
fn every_document_carries_the_schema() {
    for args in [
        vec!["field-info"],
        vec!["validate", "--lattice", BINARY],
        vec!["invariants", "--lattice", BINARY],
        vec!["theta-plus", "--lattice", BINARY],
        vec!["gmap", "--a", "3", "--r", "-1"],
        vec!["selftest", "--rank", "1", "--count", "5"],
    ] {
        let (v, code) = json_of(&args);
        assert_eq!(code, EXIT_OK, "{args:?}");
        assert_eq!(v["schema"], "spinor/1", "{args:?}");
    }
}

#[test]
fn theta_plus_of_a_binary_lattice() {
    let (v, _) = json_of(&["theta-plus", "--lattice", BINARY]);
    assert_eq!(v["theta"]["name"], "N(14)");
    assert_eq!(v["theta"]["index"], 2);
    let text = run(["spinor", "--format", "text", "theta-plus", "--lattice", BINARY]);
    assert_eq!(text.stdout.trim(), "N(-2), index 2");
}

#[test]
fn exit_codes() {
    let bad = r#"{"M":[["1",0],["1",-3]]}"#;
    assert_eq!(json_of(&["validate", "--lattice", bad]).1, EXIT_VERIFY);
    assert_eq!(json_of(&["theta-plus", "--lattice", bad]).1, EXIT_USAGE);
    assert_eq!(json_of(&["theta-plus", "--lattice", "{not json"]).1, EXIT_USAGE);
    assert_eq!(json_of(&["--precision", "2", "field-info"]).1, EXIT_PRECISION);
    assert_eq!(run(["spinor", "no-such-command"]).code, EXIT_USAGE);
    let (err, code) = json_of(&["theta-rel", "--pair", BINARY, "--oracle"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(err["error"]["kind"], "usage");
}

#[test]
fn relative_with_oracle_and_explanation() {
    let pair = r#"{"M":[["1",0],["1",1]],"N":[["1",1],["1",2]]}"#;
    let (v, code) = json_of(&["theta-rel", "--pair", pair, "--explain", "--oracle", "--force"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["oracle"]["agree"], true);
    assert_eq!(v["branch"], "PropA-ClosedForm");
    assert!(v["invariants"]["R1"].as_bool().unwrap());
    let fabricated = r#"{"M":[["1",0],["1",4]],"N":[["3",0],["3",4]]}"#;
    let (v, code) = json_of(&["theta-rel", "--pair", fabricated, "--oracle", "--force"]);
    assert_eq!(code, EXIT_VERIFY);
    assert!(v["oracle"]["oracle"]["error"].as_str().unwrap().contains("inconsistent"));
}

#[test]
fn isometry_and_output_is_deterministic() {
    let h = r#"{"M":[["1",0],["7",-2]]}"#;
    let h2 = r#"{"M":[["3",0],["5",-2]]}"#;
    let (v, _) = json_of(&["isometric", "--lattice", h, "--other", h2]);
    assert_eq!(v["isometric"], true);
    let a = run(["spinor", "selftest", "--rank", "2", "--count", "30", "--seed", "4"]);
    let b = run(["spinor", "selftest", "--rank", "2", "--count", "30", "--seed", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn binary_reads_files_and_honours_the_precision_variable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lattice.json");
    std::fs::write(&path, BINARY).unwrap();
    let exe = env!("CARGO_BIN_EXE_spinor");
    let out = Command::new(exe).args(["invariants", "--lattice"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["invariants"]["R"], serde_json::json!([0, 1]));
    let out = Command::new(exe).env("SPINOR_PRECISION", "3").args(["field-info"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "precision");
}

#[test]
fn field_dump_reloads_as_a_table_model() {
    use spinor::dyadic::{build_field_model, FieldSpec};
    use spinor::field::{validate_model, FieldModel, ModelDump};
    use spinor::gmaps::gmap_report;
    use spinor::identities::default_grid;
    for field in ["q2", "q2(-1)", "q2(2)"] {
        let (v, _) = json_of(&["field-info", "--field", field]);
        let dump: ModelDump = serde_json::from_value(v["model"].clone()).unwrap();
        let table = FieldModel::from_dump(&dump).unwrap();
        assert!(validate_model(&table).all_passed(), "{field}");
        let built = build_field_model(&FieldSpec::parse(field).unwrap()).unwrap();
        for a in built.classes() {
            for r in default_grid(&built) {
                let x = serde_json::to_value(gmap_report(&built, a, r)).unwrap();
                let y = serde_json::to_value(gmap_report(&table, a, r)).unwrap();
                assert_eq!(x, y, "{field}");
            }
        }
    }
}
