use std::process::Command;

use serde_json::Value;

fn ffminden(args: &str) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ffminden")).args(args.split_whitespace()).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &str) -> Value {
    let (code, out, err) = ffminden(args);
    assert_eq!(code, 0, "{args}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn same_dist_verdict() {
    let v = json("verify same-dist -q 2 -m 1 -n 2 --set all-monic");
    assert_eq!(v["verdict"], "exact-match");
    assert_eq!(v["context"]["moduli"].as_array().unwrap().len(), 4);
    assert_eq!(v["reproducibility"]["config"]["command"], "verify same-dist");
}

#[test]
fn lacunary_law_table() {
    let v = json("dist continuous -q 2 -m 1 -n 3 --set powers:x --stat qmin");
    let rows: Vec<(String, String)> = v["outcomes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["outcome"].as_str().unwrap().to_string(), r["continuous"]["count"].as_str().unwrap().to_string()))
        .collect();
    let want = [("1", "1"), ("x", "1"), ("x^2", "2"), ("x^3", "4")];
    assert_eq!(rows, want.map(|(a, b)| (a.to_string(), b.to_string())));
    assert_eq!(v["outcomes"][0]["continuous"]["total"], "8");
}

#[test]
fn single_point() {
    let v = json("minden --tail [0,1] -q 2 -n 2 --set all-monic");
    assert_eq!(v["degree"], 2);
    assert_eq!(v["denominator"], "x^2");
    assert_eq!(v["numerator"], "1");
    let v = json("minden --a x --N x^2+1 -q 3 --set all-monic");
    assert_eq!(v["tail"], "[1,0]");
    assert_eq!(v["denominator"], "x");
    assert_eq!(v["degree"], 1);
    let v = json("minden --tail [1,1];[0,1] -q 2 --set powers:x+1");
    assert_eq!(v["context"]["m"], 2);
}

#[test]
fn farey_listing() {
    let v = json("farey list -q 2 -m 1 -k 1");
    let fr: Vec<&str> = v["fractions"].as_array().unwrap().iter().map(|f| f["fraction"].as_str().unwrap()).collect();
    assert_eq!(fr, ["0/1", "1/x", "1/(x+1)"]);
    let v = json("farey count -q 2 -m 2 -k 1");
    assert_eq!(v["counts"][1]["count"], "7");
    let v = json("farey balls -q 2 -m 1 -n 2");
    assert_eq!(v["levels"][1]["covered"], 3);
    assert_eq!(v["full"], true);
    let v = json("farey separated -q 2 -m 1 -n 2");
    assert_eq!(v["sum"], 4);
}

#[test]
fn expectations() {
    let v = json("expect -q 2 -n 2");
    assert_eq!(v["continuous"], "1");
    assert_eq!(v["verdict"], "exact-match");
    let v = json("expect -q 2 -n 1 --N x");
    assert_eq!(v["continuous"], "1/2");
}

#[test]
fn mismatch_exits_one() {
    let (code, out, _) = ffminden("verify farey-regime -q 2 -m 1 -n 2 --set irreducible");
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "mismatch");
}

#[test]
fn usage_errors_exit_two_with_token() {
    let (code, _, err) = ffminden("dist continuous -q 2 -n 2 --set powers:3");
    assert_eq!(code, 2);
    assert!(err.contains("grammar:"));
    let (code, _, err) = ffminden("dist continuous -q 2 -n 2 --N x^3");
    assert_eq!(code, 0, "{err}");
    let (code, _, err) = ffminden("dist discrete -q 2 -n 2 --N x^3");
    assert_eq!(code, 2);
    assert!(err.contains("x^3"), "{err}");
    let (code, _, err) = ffminden("dist continuous -q 5 -m 2 -n 6");
    assert_eq!(code, 2);
    assert!(err.contains("budget"), "{err}");
    assert_eq!(ffminden("verify nonsense -n 2").0, 2);
    assert_eq!(ffminden("dist continuous -q 2 -n 0").0, 2);
}

#[test]
fn formats_and_timing() {
    let (code, csv, _) = ffminden("verify lacunary -q 2 -n 3 --set powers:x --out csv");
    assert_eq!(code, 0);
    assert!(csv.starts_with("outcome,continuous,discrete[N=x^3],formula,status\n1,1/8,1/8,1/8,match\n"));
    assert!(csv.contains("# verdict: exact-match\n"));
    assert!(csv.contains("# ordering: "));
    let (_, pretty, _) = ffminden("verify formulas -q 2 -n 2 --out pretty --qmin-law-variant corrected");
    assert!(pretty.contains("verdict: exact-match"));
    let timed = json("dist continuous -q 2 -n 2 --timing");
    assert!(timed["elapsed_ms"].is_u64());
    assert!(json("dist continuous -q 2 -n 2").get("elapsed_ms").is_none());
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in ["verify qmin-equals -q 3 -n 3 --set degrees:even", "farey balls -q 3 -m 2 -n 2 --set powers:x+1"] {
        let first = ffminden(&format!("{args} --workers 1"));
        assert_eq!(first, ffminden(&format!("{args} --workers 1")));
        assert_eq!(first, ffminden(&format!("{args} --workers 4")));
    }
}
