use khlee::cli::run_args;
use serde_json::{json, Value};

fn run(args: &[&str]) -> (i32, Value) {
    let mut v = vec!["khlee"];
    v.extend_from_slice(args);
    v.push("--no-meta");
    let (code, out) = run_args(v);
    let j = serde_json::from_str(out.trim()).unwrap_or_else(|e| panic!("{e}: {out}"));
    (code, j)
}

#[test]
fn s_trefoil() {
    let (code, j) = run(&["s", "--builtin", "trefoil+"]);
    assert_eq!(code, 0);
    assert_eq!(j["s"], 2);
    assert_eq!(j["free_gen_q_degrees"], json!([1, 3]));
}

#[test]
fn s_all_hopf() {
    let (_, j) = run(&["s", "--all", "--builtin", "hopf+"]);
    let s: Vec<i64> = j["reports"].as_array().unwrap().iter().map(|r| r["s"].as_i64().unwrap()).collect();
    assert_eq!(s, vec![1, -1]);
}

#[test]
fn input_kinds() {
    let (_, j) = run(&["s", "--braid", "braid 2: 1 1 1"]);
    assert_eq!(j["s"], 2);
    let (_, j) = run(&["s", "--pd", "PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]"]);
    assert_eq!(j["s"], -2);
    let (_, j) = run(&["s", "--builtin", "T(3,3)"]);
    assert_eq!(j["s"], 4);
    let (_, j) = run(&["ssr-s", "--ssr", r#"{"strands":2,"orient":"ud","braid":[],"handles":[[1,2]]}"#]);
    assert_eq!((j["s_minus"].clone(), j["s_plus"].clone()), (json!(-1), json!(1)));
}

#[test]
fn kh_and_lee() {
    let (_, j) = run(&["kh", "--builtin", "trefoil+"]);
    assert_eq!(j["free"], json!([[0, 1], [0, 3]]));
    assert_eq!(j["torsion"], json!([[3, 9, 1]]));
    assert_eq!(j["t0_total"], 4);
    let (_, j) = run(&["lee", "--builtin", "hopf+", "--engine", "both"]);
    assert_eq!(j["levels"], json!([0, 2]));
    assert_eq!(j["t1_total"], 4);
}

#[test]
fn ssr_commands() {
    let (code, j) = run(&["ssr-s", "--builtin", "Wh+"]);
    assert_eq!(code, 0);
    assert_eq!((j["s_minus"].as_i64(), j["s_plus"].as_i64()), (Some(0), Some(2)));
    assert_eq!((j["gDS_lower"].as_i64(), j["gSD_lower"].as_i64()), (Some(0), Some(1)));
    let (_, j) = run(&["stab", "--builtin", "Wh+", "--kmax", "4"]);
    assert_eq!(j["stabilized"], true);
    assert_eq!(j["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn stab_raw_for_cables() {
    let (code, j) = run(&["stab", "--builtin", "C(2,1)", "--kmax", "2"]);
    assert_eq!(code, 2);
    assert_eq!(j["error"]["kind"], "NotNullHomologous");
    let (code, j) = run(&["stab", "--raw", "--builtin", "C(2,1)", "--kmax", "2"]);
    assert_eq!(code, 0);
    for r in j["rows"].as_array().unwrap() {
        assert_eq!(r["shifted"], 0);
    }
}

#[test]
fn errors() {
    let (code, j) = run(&["s", "--builtin", "nope"]);
    assert_eq!((code, j["error"]["kind"].as_str()), (2, Some("ParseError")));
    let (code, j) = run(&["s", "--builtin", "T(4,4)", "--limit", "10"]);
    assert_eq!((code, j["error"]["kind"].as_str()), (2, Some("ResourceLimit")));
    let (code, j) = run(&["s", "--builtin", "Wh+"]);
    assert_eq!((code, j["error"]["kind"].as_str()), (2, Some("Invalid")));
    let (code, j) = run(&["s"]);
    assert_eq!((code, j["error"]["kind"].as_str()), (2, Some("Invalid")));
    let (code, j) = run(&["s", "--pd", "PD[X(1,2,3)]"]);
    assert_eq!((code, j["error"]["kind"].as_str()), (2, Some("ParseError")));
}

#[test]
fn meta_and_table() {
    let (_, out) = run_args(["khlee", "s", "--builtin", "unknot"]);
    let j: Value = serde_json::from_str(out.trim()).unwrap();
    assert!(j["meta"]["version"].is_string());
    let (code, out) = run_args(["khlee", "s", "--builtin", "trefoil+", "--table"]);
    assert_eq!(code, 0);
    assert!(out.contains("s = 2"));
}

#[test]
fn unknown_flag() {
    let (code, _) = run_args(["khlee", "s", "--frobnicate"]);
    assert_eq!(code, 2);
}
