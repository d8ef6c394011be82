use std::process::{Command, Output};

fn twistjf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistjf")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn validate_reports_every_relation() {
    let out = twistjf(&["validate", "--genus", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "validate");
    assert!(v["result"]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn pair_classifies_disjoint_and_crossing_curves() {
    let out = twistjf(&["pair", "--genus", "2", "--c1", "C1", "--c2", "C3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["ijf"]["case"], "zero");

    let out = twistjf(&["pair", "--genus", "2", "--c1", "C2", "--c2", "C3"]);
    let v = json(&out);
    assert_eq!(v["result"]["ijf"]["case"], "one");
    assert_eq!(v["result"]["braid"], true);

    let out = twistjf(&["pair", "--genus", "2", "--c1", "Sep1", "--c2", "Sep1 @ [C3]", "--cap", "3"]);
    let v = json(&out);
    assert_eq!(v["result"]["algebraic"], 0);
    assert_eq!(v["result"]["ijf"]["case"], "at_least");
}

#[test]
fn bad_input_exits_with_usage_code() {
    let out = twistjf(&["pair", "--genus", "2", "--c1", "C1 @ [C9]", "--c2", "C3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--c1"), "{err}");

    let out = twistjf(&["pair", "--genus", "2", "--c1", "Delta", "--c2", "C3"]);
    assert_eq!(out.status.code(), Some(2));

    let out = twistjf(&["validate", "--genus", "9"]);
    assert_eq!(out.status.code(), Some(2));

    let out = twistjf(&["scan", "--genus", "2"]);
    assert_eq!(out.status.code(), Some(2), "seed is required");
}

#[test]
fn csv_rows_carry_schema_and_genus() {
    let out = twistjf(&["scan", "--genus", "2", "--samples", "5", "--seed", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("schema,version,command,genus,index,c1,c2"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.starts_with("1,") && r.contains(",scan,2,")));
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("twistjf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.json");
    let out = twistjf(&["table", "--genus", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, twistjf(&["table", "--genus", "1"]).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn table_dir_overrides_builtin_tables() {
    let dir = std::env::temp_dir().join(format!("twistjf-tables-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = twistjf::TwistTable::builtin_fixture(1).unwrap();
    std::fs::write(dir.join("genus1.tbl"), good).unwrap();
    let out = twistjf(&["validate", "--genus", "1", "--table-dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // A left-handed C1 still parses but breaks the braid relation.
    let flipped = good
        .replacen("  x2 -> x2 x1^-1\n  inverse x2 -> x2 x1\n", "  x2 -> x2 x1\n  inverse x2 -> x2 x1^-1\n", 1);
    assert_ne!(flipped, good);
    std::fs::write(dir.join("genus1.tbl"), flipped).unwrap();
    let out = twistjf(&["validate", "--genus", "1", "--table-dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    std::fs::write(dir.join("genus1.tbl"), good.replacen("version 1", "version 2", 1)).unwrap();
    let out = twistjf(&["validate", "--genus", "1", "--table-dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn corollary_reports_non_detection() {
    let out = twistjf(&["corollary", "--cap", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let nd = &v["result"]["non_detection"];
    assert_eq!(nd["in_kernel"], true);
    assert_eq!(nd["commutator_nontrivial"], true);
    assert_eq!(nd["central"], false);
}
