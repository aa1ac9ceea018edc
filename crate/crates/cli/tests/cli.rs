use std::process::{Command, Output};

use serde_json::Value;

const Q2: &str = r#"{"minpoly":"x^2-2"}"#;
const WORKED: &str = r#"{"diagonal":[["-1","1"],["-1","1"],"-1"]}"#;

fn k3rm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3rm"))
        .args(args)
        .env_remove("K3RM_SEARCH_BOUND")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn ok(args: &[&str]) -> Value {
    let out = k3rm(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    json(&out)["result"].clone()
}

#[test]
fn field_reports_order_discriminant() {
    let r = ok(&["field", "--minpoly", "x^2-2", "--json"]);
    assert_eq!(r["degree"], 2);
    assert_eq!(r["disc_order"], "8");
    let r = ok(&["field", "--minpoly", r#"["-5","0","1"]"#]);
    assert_eq!((r["disc_order"].as_str(), r["disc_maximal"].as_str()), (Some("20"), Some("5")));
}

#[test]
fn catalog_lists_seven_fields() {
    let r = ok(&["field", "--catalog"]);
    let degrees: Vec<u64> = r["fields"].as_array().unwrap().iter().map(|f| f["degree"].as_u64().unwrap()).collect();
    assert_eq!(degrees, vec![2, 2, 3, 3, 4, 5, 6]);
}

#[test]
fn hilbert_symbols() {
    assert_eq!(ok(&["hilbert", "-a", "1", "-b", "7", "-v", "inf"])["symbol"], 1);
    assert_eq!(ok(&["hilbert", "-a", "-1", "-b", "-1", "-v", "2"])["symbol"], -1);
    let ram = ok(&["hilbert", "-a", "-1", "-b", "-1"]);
    assert_eq!(ram["ramification"], serde_json::json!([2, "inf"]));
}

#[test]
fn worked_example_end_to_end() {
    let r = ok(&["corestrict", "--field", Q2, "--form", WORKED, "--json"]);
    assert_eq!(r["det"], "512");
    assert_eq!(r["signature"], serde_json::json!([2, 4]));
    assert_eq!(r["embeddability"]["verdict"], "Embeds");
    assert_eq!(r["elementary_divisors"], serde_json::json!(["2", "2", "2", "4", "4", "4"]));

    let r = ok(&["dict", "k3-to-av", "--field", Q2, "--form", WORKED]);
    assert_eq!(r["ks_dim"], 4);
    assert_eq!(r["b_cor"], serde_json::json!([-1, -1]));
    assert_eq!(r["cor_class"], serde_json::json!([2, "inf"]));

    let r = ok(&["cor-class", "--field", "x^2-2", "--alpha", "a-1", "--beta", "[\"-1\",\"1\"]"]);
    assert_eq!(r["representative"], serde_json::json!([-1, -1]));
}

#[test]
fn clifford_and_rep() {
    let r = ok(&["clifford", "--form", r#"{"diagonal":[1,1,1]}"#, "--even", "--table"]);
    assert_eq!(r["even_part"]["ramification"], serde_json::json!([2, "inf"]));
    assert_eq!(r["table"].as_array().unwrap().len(), 64);
    let r = ok(&["rep", "--d", "2", "--op", "wedge2", "--json"]);
    assert_eq!(r["decomposition"], serde_json::json!({"(2,0)": 1, "(0,2)": 1}));
    let r = ok(&["rep", "--d", "2", "--op", "decompose", "--highest", "2,2", "--hodge", "2"]);
    assert_eq!(r["hodge"][0]["hodge"], serde_json::json!([3, 3, 3]));
}

#[test]
fn fourfold_analysis_reports() {
    let r = ok(&["dict", "av-to-k3", "--form", r#"{"diagonal":[1,1,1,2]}"#]);
    assert_eq!(r["center_radicand"], "2");
    assert_eq!(r["k3_type"], false);
}

#[test]
fn envelope_echoes_input() {
    let out = k3rm(&["corestrict", "--field", Q2, "--form", WORKED, "--double"]);
    let v = json(&out);
    assert_eq!(v["command"], "corestrict");
    assert_eq!(v["input"]["form"], serde_json::from_str::<Value>(WORKED).unwrap());
    assert_eq!(v["input"]["double"], true);
    assert!(v["version"].is_string());
}

#[test]
fn domain_errors_exit_two_with_json() {
    for args in [
        vec!["field", "--minpoly", "x^2+1"],
        vec!["field", "--minpoly", "x^2-4"],
        vec!["hilbert", "-a", "0", "-b", "1", "-v", "3"],
        vec!["hilbert", "-a", "1", "-b", "1", "-v", "4"],
        vec!["cor-class", "--field", "x^3-3x-1", "--alpha", "a", "--beta", "a"],
        vec!["dict", "av-to-k3", "--form", r#"{"diagonal":[1,1,1,1]}"#],
        vec!["rep", "--d", "2", "--op", "sym2", "--highest", "1,1", "--hodge", "1"],
    ] {
        let out = k3rm(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(json(&out)["error"].is_string(), "{args:?}");
    }
}

#[test]
fn usage_errors_exit_one_with_json() {
    for args in [
        vec!["frobnicate"],
        vec!["field"],
        vec!["hilbert", "-a", "1"],
        vec!["form", "--form", "/nonexistent/q.json"],
        vec!["form", "--form", "{not json"],
        vec!["rep", "--d", "9"],
    ] {
        let out = k3rm(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(json(&out)["error"].is_string(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(k3rm(&["--help"]).status.code(), Some(0));
}

#[test]
fn selftest_passes_and_is_deterministic() {
    let a = k3rm(&["selftest", "--suite", "paper-identities", "--seed", "7", "--json"]);
    let b = k3rm(&["selftest", "--suite", "paper-identities", "--seed", "7", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["result"]["failed"], 0);
}

#[test]
fn search_bound_from_environment() {
    let run = |bound: &str| {
        Command::new(env!("CARGO_BIN_EXE_k3rm"))
            .args(["hilbert", "--class", "101,103"])
            .env("K3RM_SEARCH_BOUND", bound)
            .output()
            .unwrap()
    };
    let out = run("50");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "SearchExhausted");
    let out = run("20000");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["search_bound"], 20000);

    let r = ok(&["hilbert", "--class", "2,inf"]);
    assert_eq!(r["representative"], serde_json::json!([-1, -1]));
    let out = k3rm(&["hilbert", "--class", "2"]);
    assert_eq!(json(&out)["error"], "OddRamification");
}
