use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn lratio(args: &[&str]) -> (i32, Value) {
    lratio_env(args, &[])
}

fn lratio_env(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_lratio"))
        .args(args)
        .envs(env.iter().copied())
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("UTF-8 output");
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {stdout}"));
    (out.status.code().expect("exit code"), v)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn identity_is_not_lorentzian() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "id.json", r#"{"n": 2, "scalar": "rational", "entries": [["1/1", "0/1"], ["0/1", "1/1"]]}"#);
    let (code, v) = lratio(&["lorentzian", "check", "--matrix", s(&m)]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "lorentzian check");
    assert_eq!(v["results"]["lorentzian"], false);
    assert_eq!(v["results"]["signature"]["n_pos"], 2);
    assert_eq!(v["inputs"]["files"].as_object().unwrap().len(), 1);
}

#[test]
fn facet_and_orbit_counts() {
    for (n, total, orbits) in [(3, 3, 1), (4, 12, 1), (5, 40, 2), (6, 210, 4)] {
        let ns = n.to_string();
        let (code, v) = lratio(&["cutcone", "facets", "--n", &ns, "--orbits"]);
        assert_eq!(code, 0);
        assert_eq!(v["results"]["total"], total);
        assert_eq!(v["results"]["facets"].as_array().unwrap().len(), total);
        assert_eq!(v["results"]["orbits"]["orbits"].as_array().unwrap().len(), orbits);
    }
    let (_, v) = lratio(&["cutcone", "facets", "--n", "5", "--orbits"]);
    let mut sizes: Vec<u64> = v["results"]["orbits"]["sizes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    sizes.sort_unstable();
    assert_eq!(sizes, [10, 30]);
}

#[test]
fn facets_written_to_file_feed_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let facets = dir.path().join("f4.json");
    let (code, v) = lratio(&["cutcone", "facets", "--n", "4", "--out", s(&facets)]);
    assert_eq!(code, 0);
    assert!(v["results"].get("facets").is_none());
    // AF ratio alpha^{12} on 4 points
    let r = write(dir.path(), "af.json", r#"{"n": 4, "offdiag": {"1,2": -2}}"#);
    let (code, v) = lratio(&["ratio", "decompose", "--ratio", s(&r), "--basis", s(&facets)]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["decomposable"], true);
    let total: i64 = v["results"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["coefficient"].as_i64().unwrap())
        .sum();
    assert_eq!(total, 2);
}

#[test]
fn ratio_commands() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "tri.json", r#"{"n": 3, "offdiag": {"1,2": "1/1", "1,3": "-1/1", "2,3": "-1/1"}}"#);
    let bad = write(dir.path(), "bad.json", r#"{"n": 3, "offdiag": {"1,2": 1}}"#);
    let m = write(
        dir.path(),
        "m.json",
        r#"{"n": 3, "entries": [[2, 3, 5], [3, 2, 5], [5, 5, 2]]}"#,
    );
    let (code, v) = lratio(&["ratio", "check", "--ratio", s(&tri)]);
    assert_eq!((code, &v["results"]["bounded"]), (0, &Value::Bool(true)));
    let (code, v) = lratio(&["ratio", "check", "--ratio", s(&bad)]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["bounded"], false);
    assert_eq!(v["results"]["violating_subset"], serde_json::json!([2]));
    // p12 p33 / (p13 p23) = 3 * 2 / 25
    let (code, v) = lratio(&["ratio", "eval", "--ratio", s(&tri), "--matrix", s(&m)]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["exact"], "6/25");
    let (_, v) = lratio(&["ratio", "normalize", "--ratio", s(&tri)]);
    assert_eq!(v["results"]["ratio"]["offdiag"]["1,2"], "1/1");
    let (code, v) = lratio(&["ratio", "normalize", "--ratio", s(&bad)]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "domain");
}

#[test]
fn metric_commands() {
    let dir = tempfile::tempdir().unwrap();
    let square = write(
        dir.path(),
        "sq.json",
        r#"{"n": 4, "offdiag": {"1,2": 1, "1,3": 2, "1,4": 1, "2,3": 1, "2,4": 2, "3,4": 1}}"#,
    );
    let (code, v) = lratio(&["metric", "delta", "--metric", s(&square)]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["delta"], "1/1");
    assert_eq!(v["results"]["four_point"], false);
    let (code, v) = lratio(&["metric", "treeapprox", "--metric", s(&square), "--basepoint", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["is_tree"], true);
    assert_eq!(v["results"]["basepoint"], 2);
    let tree = write(
        dir.path(),
        "t.json",
        r#"{"leaves": [0, 1, 2], "edges": [{"u": 0, "v": 3, "len": "1/2"}, {"u": 1, "v": 3, "len": "1/1"}, {"u": 2, "v": 3, "len": "3/1"}]}"#,
    );
    let (code, v) = lratio(&["metric", "decompose", "--tree", s(&tree)]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["resums"], true);
    assert_eq!(v["results"]["decomposition"]["terms"].as_array().unwrap().len(), 3);
    let (code, v) = lratio(&["metric", "check", "--p", "2", "--tree", s(&tree)]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["in_delta_tp"], true);
    let (code, v) = lratio(&["metric", "decompose", "--metric", s(&square)]);
    assert_eq!(code, 2);
    assert!(v["error"]["message"].as_str().unwrap().contains("four-point"));
}

#[test]
fn constants() {
    let (code, v) = lratio(&["constant", "n3", "--a", "1", "--b", "0", "--c", "0", "--verify"]);
    assert_eq!(code, 0);
    assert!((v["results"]["constant"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["results"]["verify"]["agrees"], true);
    let (_, v) = lratio(&["constant", "n3", "--a", "1/3", "--b", "1/3", "--c", "1/3"]);
    assert_eq!(v["results"]["constant"], 1.0);
    let (code, v) = lratio(&["constant", "tp", "--p", "1", "--a", "3", "--b", "1", "--c", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["constant"], 8.0);
    let (code, v) = lratio(&["constant", "n3", "--a", "1/2", "--b", "1/2", "--c", "1/2"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "domain");
}

#[test]
fn results_are_reproducible_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let pent = write(
        dir.path(),
        "p.json",
        r#"{"n": 5, "offdiag": {"1,2": 1, "1,3": 1, "2,3": 1, "4,5": 1, "1,4": -1, "2,4": -1, "3,4": -1, "1,5": -1, "2,5": -1, "3,5": -1}}"#,
    );
    let args = ["constant", "estimate", "--ratio", s(&pent), "--iters", "2000", "--seed", "17"];
    let (code, a) = lratio(&args);
    assert_eq!(code, 0);
    let mut more = args.to_vec();
    more.extend(["--threads", "1"]);
    let (_, b) = lratio(&more);
    assert_eq!(a["results"].to_string(), b["results"].to_string());
    assert_eq!(a["seed"], 17);
    let v = a["results"]["empirical_sup"].as_f64().unwrap();
    assert!(v <= 4.0 && v > 3.99);

    let (code, a) = lratio(&["reproduce", "--criterion", "9", "--criterion", "1"]);
    assert_eq!(code, 0);
    let (_, b) = lratio(&["reproduce", "--criterion", "9", "--criterion", "1"]);
    assert_eq!(a["results"].to_string(), b["results"].to_string());
    assert_eq!(a["results"]["passed"], 2);
}

#[test]
fn subfree_over_all_facets() {
    let (code, v) = lratio(&["conjecture", "subfree", "--n", "4", "--all"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["checked"], 12);
    assert_eq!(v["results"]["holds_all"], true);
    let (code, v) = lratio(&["conjecture", "subfree", "--n", "4", "--facet-index", "13"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "usage");
}

#[test]
fn errors_are_structured() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<(Vec<String>, i32, &str)> = vec![
        (vec!["nonsense".into()], 2, "usage"),
        (vec!["cutcone".into(), "facets".into()], 2, "usage"),
        (vec!["reproduce".into()], 2, "usage"),
        (vec!["lorentzian".into(), "check".into(), "--matrix".into(), "/nonexistent/m.json".into()], 2, "io"),
        (vec!["cutcone".into(), "facets".into(), "--n".into(), "12".into()], 2, "capability"),
        (vec!["reproduce".into(), "--criterion".into(), "42".into()], 2, "domain"),
    ];
    for (args, status, code) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (got, v) = lratio(&args);
        assert_eq!((got, v["error"]["code"].as_str().unwrap()), (status, code), "{args:?}");
        assert!(v["error"]["message"].is_string());
        assert!(v["error"]["context"].is_object());
    }
    let bad = write(dir.path(), "bad.json", "{\"n\": 2, \"entries\": [[1, 2], [3, 1]]}");
    let (got, v) = lratio(&["lorentzian", "check", "--matrix", s(&bad)]);
    assert_eq!((got, v["error"]["code"].as_str().unwrap()), (2, "structural"));
    let garbage = write(dir.path(), "garbage.json", "{ not json");
    let (got, v) = lratio(&["lorentzian", "check", "--matrix", s(&garbage)]);
    assert_eq!((got, v["error"]["code"].as_str().unwrap()), (2, "parse"));
}

#[test]
fn enumeration_honours_the_memory_cap() {
    let (code, v) = lratio_env(&["cutcone", "facets", "--n", "7"], &[("LR_RESOURCE_LIMIT_MB", "1")]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["code"], "resource_limit");
    assert!(v["error"]["context"]["progress"]["rays"].as_u64().unwrap() > 0);
}
