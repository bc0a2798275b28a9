use std::process::{Command, Output};

fn permx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permx"))
        .args(args)
        .env_remove("PERMX_BUDGET")
        .output()
        .expect("permx runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = permx(&all);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&out)))
}

#[test]
fn contains_prints_true() {
    let out = permx(&["contains", "--host", "42153", "--pattern", "312"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "true\n");
    let v = json(&["contains", "--host", "42153", "--pattern", "123"]);
    assert_eq!(v["contains"], false);
}

#[test]
fn count_is_a_string() {
    let v = json(&["count-av", "--pattern", "123", "--n", "4"]);
    assert_eq!(v["count"], "14");
    assert_eq!(v["pattern"], "123");
    let out = permx(&["count-av", "--pattern", "132", "--n", "5", "--format", "csv"]);
    assert_eq!(stdout(&out), "n,count\n5,42\n");
}

#[test]
fn alpha_value() {
    let out = permx(&["bounds", "alpha", "--a", "1", "--c", "2"]);
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 122.7226).abs() < 1e-3);
    let e = json(&["bounds", "exponent", "--a", "1", "--c", "2"]);
    assert!((e["exponent"].as_f64().unwrap() - 2.0 * v).abs() < 1e-5);
}

#[test]
fn structural_commands() {
    let run = |args: &[&str]| stdout(&permx(args)).trim().to_string();
    assert_eq!(run(&["sum", "--left", "12", "--right", "21"]), "1243");
    assert_eq!(run(&["skew", "--left", "12", "--right", "21"]), "3421");
    assert_eq!(run(&["inflate", "--skeleton", "2413", "--blocks", "1", "132", "321", "12"]), "479832156");
    assert_eq!(run(&["transform", "--perm", "42153", "--op", "inverse"]), "32514");
    let v = json(&["decompose", "--perm", "479832156", "--c", "4"]);
    assert_eq!(v["decompositions"][0]["skeleton"], "2413");
}

#[test]
fn matrix_contains_reads_json() {
    let host = r#"{"rows":2,"cols":3,"ones":[[1,3],[2,1]]}"#;
    let v = json(&["matrix-contains", "--host", host, "--pattern", "I2"]);
    assert_eq!(v["contains"], false);
    let v = json(&["matrix-contains", "--host", host, "--pattern", "12"]);
    assert_eq!(v["contains"], true);
}

#[test]
fn merge_commands() {
    let v = json(&["merge-check", "--host", "2143", "--red", "12", "--blue", "12"]);
    assert_eq!(v["member"], true);
    assert_eq!(v["coloring"], serde_json::json!(["red", "red", "blue", "blue"]));
    let v = json(&["merge-check", "--host", "123", "--red", "12", "--blue", "12"]);
    assert_eq!(v["member"], false);
    let v = json(&["verify-jv", "--a", "1", "--b", "1", "--c", "1", "--n", "6"]);
    assert_eq!((v["pass"].clone(), v["checked"].clone()), (true.into(), 132.into()));
    let v = json(&["merge-count", "--red", "12", "--blue", "12", "--n", "4"]);
    assert_eq!(v["lhs"], "14");
}

#[test]
fn extremal_commands() {
    let v = json(&["exfn", "--pattern", "I2", "--n", "3"]);
    assert_eq!((v["value"].clone(), v["proven_optimal"].clone()), (5.into(), true.into()));
    let v = json(&["fpts", "--pattern", "I2", "--t", "3", "--s", "2"]);
    assert_eq!(v["value"], 2);
    assert_eq!(v["witness"]["ones"], serde_json::json!([[1, 2], [1, 3], [2, 1], [2, 2]]));
    let v = json(&["gpts", "--pattern", "I2", "--t", "3", "--s", "2"]);
    assert_eq!(v["value"], 2);
    let v = json(&["fpts", "--pattern", "I2", "--t", "3", "--s", "1"]);
    assert_eq!(v["value"], "unbounded");
    let v = json(&["check-lemma21", "--pattern", "I2", "--a", "1", "--t", "3", "--s", "3"]);
    assert_eq!((v["lhs"].clone(), v["rhs"].clone()), (1.into(), "6".into()));
}

#[test]
fn exit_codes() {
    // zero row weight
    assert_eq!(permx(&["fpts", "--pattern", "I2", "--t", "3", "--s", "0"]).status.code(), Some(2));
    assert_eq!(permx(&["contains", "--host", "1123", "--pattern", "1"]).status.code(), Some(2));
    assert_eq!(permx(&["bounds", "lemma21", "--k", "2", "--a", "1", "--t", "5", "--s", "2"]).status.code(), Some(2));
    let out = permx(&["count-av", "--pattern", "123", "--n", "13"]);
    assert_eq!(out.status.code(), Some(3));
    let out = permx(&["exfn", "--pattern", "132", "--n", "5", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let out = permx(&["fpts", "--pattern", "I2", "--t", "7", "--s", "2", "--n-cap", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(permx(&["bogus"]).status.code(), Some(2));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_permx"))
        .args(["exfn", "--pattern", "132", "--n", "5"])
        .env("PERMX_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_permx"))
        .args(["exfn", "--pattern", "132", "--n", "5", "--budget", "100000000"])
        .env("PERMX_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bound_evaluators() {
    assert_eq!(json(&["bounds", "mt", "--k", "2"])["coefficient"], "192");
    assert_eq!(json(&["bounds", "lemma21", "--k", "3", "--a", "2", "--t", "100", "--s", "10"])["bound"], "900");
    let v = json(&[
        "bounds", "lemma22-rhs", "--k", "2", "--a", "1", "--c", "2", "--t", "8", "--s", "6", "--x", "0.6",
        "--y", "0.5", "--f-sub", "3",
    ]);
    assert_eq!(v["rhs"], "14");
    let v = json(&["bounds", "fox-rhs", "--table", "1:1,2:3,3:5", "--t", "3", "--s", "3", "--n", "2", "--f", "1", "--g", "1"]);
    assert_eq!(v["rhs"], "29");
    let out = permx(&["bounds", "fox-rhs", "--table", "1:1", "--t", "3", "--s", "3", "--n", "2", "--f", "1", "--g", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&["bounds", "cibulka", "--c-val", "10"]);
    assert_eq!(v, serde_json::json!({"relation": "L = O(c^2)", "square": "100", "certified": false}));
}

#[test]
fn schedule_outputs() {
    let v = json(&["bounds", "schedule", "--k", "100", "--a", "2", "--c", "2"]);
    assert_eq!(v["R_A"], 160);
    assert_eq!(v["states"].as_array().unwrap().len(), 163);
    let out = permx(&["bounds", "certify", "--k", "1000000", "--a", "1,2", "--c", "2,3", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.starts_with("k,a,c,check,holds,lhs,rhs,step\n"));
    assert_eq!(text.lines().count(), 1 + 4 * 16);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&["bounds", "crude", "--k", "1000000", "--a", "2", "--c", "2"]);
    assert!(v["log2_bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = ["fpts", "--pattern", "132", "--t", "5", "--s", "3", "--format", "json"];
    assert_eq!(permx(&args).stdout, permx(&args).stdout);
    let args = ["bounds", "certify", "--k", "1000", "--a", "1", "--c", "3", "--format", "json"];
    assert_eq!(permx(&args).stdout, permx(&args).stdout);
}

#[test]
fn timing_only_on_request() {
    let plain = json(&["exfn", "--pattern", "I2", "--n", "2"]);
    assert!(plain.get("wall_ms").is_none());
    let timed = json(&["exfn", "--pattern", "I2", "--n", "2", "--timing"]);
    assert!(timed["wall_ms"].as_f64().is_some());
}

#[test]
fn selftest_subset() {
    let out = permx(&["selftest", "--only", "2,12", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], 2);
    let out = permx(&["selftest", "--only", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("[FAIL]  9"));
}
