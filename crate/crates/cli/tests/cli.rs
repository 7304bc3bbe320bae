use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirforms")).args(args).env_remove("DIRFORMS_PRECISION").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn construct_worked_example() {
    let o = run(&["construct", "--d", "1", "--a", "2", "--b", "1", "--n", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["A"]["2"], "48");
    assert_eq!(v["B"]["1"], "315/4");
    assert_eq!(v["D"], "2");
}

#[test]
fn table_d2_csv() {
    let o = run(&["table", "--d", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[1], "88,10,1.00176867,2,closed_with_slack,true,false");
}

#[test]
fn verify_passes() {
    let o = run(&["verify", "--d", "1", "--a", "9", "--b", "1", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["integrality"]["passed"], true);
        assert_eq!(row["reflection"], true);
    }
}

#[test]
fn malformed_series_names_field() {
    let dir = std::env::temp_dir().join(format!("dirforms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"d": 2, "coeffs_re": ["1"]}"#).unwrap();
    let o = run(&["eval", "--series", path.to_str().unwrap(), "--a", "4", "--b", "1", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("coeffs_re"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bound", "--d", "1", "--a", "9", "--b", "1", "--precision", "5"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "--d", "1", "--a", "2", "--b", "1", "--n", "1", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_dirforms"))
        .args(["bound", "--d", "1", "--a", "9", "--b", "1"])
        .env("DIRFORMS_PRECISION", "12")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["beta"], "36.0218266946");
}

#[test]
fn output_is_reproducible() {
    let args = ["saddle", "--d", "2", "--a", "88", "--b", "10", "--precision", "20"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn eval_zeta_worked_value() {
    let o = run(&["eval", "--series", "zeta", "--a", "2", "--b", "1", "--n", "1", "--precision", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["reports"][0]["I_tail"].as_str().unwrap().starts_with("0.20683520"));
}

#[test]
fn help_describes_subcommands() {
    let o = run(&["--help"]);
    let text = stdout(&o);
    for sub in ["construct", "verify", "eval", "saddle", "bound", "table", "search", "demo"] {
        assert!(text.contains(sub), "{sub}");
    }
}
