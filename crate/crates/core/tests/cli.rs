use std::process::{Command, Output};

use serde_json::Value;

fn superfield(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superfield")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Checks a value against the subset of JSON Schema used by the report schema.
fn conforms(value: &Value, schema: &Value) -> Result<(), String> {
    if let Some(t) = schema.get("type") {
        let types: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        let actual = match value {
            Value::Null => "null",
            Value::Bool(_) => "boolean",
            Value::Number(n) if n.is_i64() || n.is_u64() => "integer",
            Value::Number(_) => "number",
            Value::String(_) => "string",
            Value::Array(_) => "array",
            Value::Object(_) => "object",
        };
        if !types.contains(&actual) {
            return Err(format!("expected {types:?}, found {actual}"));
        }
    }
    if let (Some(min), Some(v)) = (schema.get("minimum").and_then(Value::as_i64), value.as_i64()) {
        if v < min {
            return Err(format!("{v} below minimum {min}"));
        }
    }
    if let Value::Object(map) = value {
        let props = schema.get("properties").and_then(Value::as_object);
        for req in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            if !map.contains_key(req.as_str().unwrap()) {
                return Err(format!("missing {req}"));
            }
        }
        for (k, v) in map {
            match props.and_then(|p| p.get(k)) {
                Some(s) => conforms(v, s).map_err(|e| format!("{k}: {e}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("unexpected key {k}"))
                }
                None => {}
            }
        }
    }
    if let (Value::Array(items), Some(s)) = (value, schema.get("items")) {
        for v in items {
            conforms(v, s)?;
        }
    }
    Ok(())
}

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn dims_table_for_n2() {
    let o = superfield(&["dims", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.split_whitespace().eq(["-1", "2", "2", "2"])));
    assert!(text.lines().any(|l| l.split_whitespace().take(2).eq(["all", "8"])));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(superfield(&["dims", "--n", "0"]).status.code(), Some(2));
    assert_eq!(superfield(&["verify", "nonsense", "--n", "3"]).status.code(), Some(2));
    assert_eq!(superfield(&["bracket", "dxi1", "xi1*"]).status.code(), Some(2));
    assert_eq!(superfield(&["verify", "waction", "--n", "7"]).status.code(), Some(2));
    assert_eq!(superfield(&["dims"]).status.code(), Some(2));
}

#[test]
fn verification_reports_conform_to_schema() {
    let schema = schema();
    for args in [
        vec!["dims", "--n", "3", "--format", "json"],
        vec!["dims", "--n", "9", "--format", "json"],
        vec!["verify", "lemma11", "--n", "4", "--format", "json"],
        vec!["verify", "lemma21", "--n", "3", "--samples", "20", "--seed", "7", "--format", "json"],
        vec!["verify", "waction", "--n", "2", "--format", "json"],
        vec!["verify", "dhaction", "--n", "3", "--format", "json"],
        vec!["verify", "jacobi", "--n", "3", "--format", "json"],
    ] {
        let o = superfield(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        conforms(&v, &schema).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}

#[test]
fn seed_is_echoed() {
    let o = superfield(&["verify", "lemma21", "--n", "3", "--samples", "20", "--seed", "7", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["samples"], 20);
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    let text = stdout(&superfield(&["dims", "--n", "4"]));
    let json: Value = serde_json::from_str(&stdout(&superfield(&["dims", "--n", "4", "--format", "json"]))).unwrap();
    for layer in json["layers"].as_array().unwrap() {
        let row = [layer["k"].to_string(), layer["dimW"].to_string(), layer["dimH"].to_string(), layer["dimDH"].to_string()];
        assert!(text.lines().any(|l| l.split_whitespace().eq(row.iter().map(String::as_str))), "{row:?}");
    }
}

#[test]
fn bracket_examples() {
    assert_eq!(stdout(&superfield(&["bracket", "∂ξ1", "ξ1∂ξ1"])), "∂ξ1\n");
    assert_eq!(stdout(&superfield(&["bracket", "∂ξ1", "∂ξ2"])), "0\n");
    assert_eq!(stdout(&superfield(&["bracket", "E", "ξ1ξ2∂ξ1"])), "ξ1ξ2∂ξ1\n");
}

#[test]
fn custom_omega_and_out_file() {
    let dir = std::env::temp_dir().join(format!("superfield-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let omega = dir.join("omega.txt");
    std::fs::write(&omega, "3\n1 0 0\n0 2 0\n0 0 -1/3\n").unwrap();
    let out = dir.join("report.json");
    let o = superfield(&[
        "verify", "dhaction", "--n", "3", "--omega", omega.to_str().unwrap(), "--format", "json", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["omega"][2][2], "-1/3");
    let mismatch = superfield(&["dims", "--n", "4", "--omega", omega.to_str().unwrap()]);
    assert_eq!(mismatch.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn quotient_and_defect_commands() {
    let q = stdout(&superfield(&["quotient", "--n", "3", "x3^2*xi1"]));
    assert!(q.starts_with("normal form: -x2^2·ξ1 + -x1^2·ξ1"));
    let d = stdout(&superfield(&["defect", "--n", "3", "xi1*dxi2 - xi2*dxi1"]));
    assert!(d.contains("verdict: H"));
}
