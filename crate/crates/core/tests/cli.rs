use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str], window: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_graded-hecke"));
    cmd.args(args).env_remove("GRADED_HECKE_WINDOW");
    if let Some(w) = window {
        cmd.env("GRADED_HECKE_WINDOW", w);
    }
    cmd.output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = bin(args, None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn kl_of_longest_element_in_a2() {
    let v = json(&["kl", "A2", "sts"]);
    let coeffs: Vec<(String, String)> = v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["x"].as_str().unwrap().to_string(), c["poly"].as_str().unwrap().to_string()))
        .collect();
    let want = [("e", "v^3"), ("s", "v^2"), ("t", "v^2"), ("st", "v"), ("ts", "v"), ("sts", "1")];
    assert_eq!(coeffs, want.map(|(a, b)| (a.to_string(), b.to_string())));
}

#[test]
fn mixed_demo_dimensions() {
    let v = json(&["mixed-demo"]);
    assert_eq!((v["over_pt1"].as_u64(), v["over_pt2"].as_u64()), (Some(2), Some(1)));
}

#[test]
fn braid_relation_and_rouquier_dump() {
    assert_eq!(json(&["homotopy-eq", "A2", "s t s", "t s t"])["homotopy_equivalent"], true);
    assert_eq!(json(&["homotopy-eq", "A2", "s", "t"])["homotopy_equivalent"], false);
    let r = json(&["rouquier", "A2", "s t s"]);
    assert!(r["terms"].as_array().is_some_and(|t| !t.is_empty()));
    assert_eq!(json(&["kclass", "A2", "s -t s"])["agree"], true);
}

#[test]
fn decompose_and_homrank() {
    let d = json(&["decompose", "A1", "ss"]);
    assert_eq!(d["split_verified"], true);
    assert_eq!(d["summands"].as_array().unwrap().len(), 2);
    assert_eq!(json(&["homrank", "B2", "st", "ts"])["agree"], true);
}

#[test]
fn homfly_of_trefoil() {
    let v = json(&["homfly", "2", "s1 s1 s1"]);
    assert_eq!(v["homfly_pt"], "-a^-4 + 2a^-2 + a^-2*z^2");
    let h = json(&["homfly", "2", "s1", "--homology"]);
    assert!(h["entries"].as_array().is_some_and(|e| !e.is_empty()));
    assert!(h["euler"].as_str().is_some_and(|e| e.contains("(1 - v^2)^2")));
}

#[test]
fn output_is_deterministic() {
    for args in [&["homfly", "3", "s1 -s2", "--homology"][..], &["weight-suite", "--samples", "10"], &["rouquier", "A2", "s -t"]] {
        let (a, b) = (bin(args, None), bin(args, None));
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn formats() {
    let csv = bin(&["kl", "A1", "s", "--format", "csv"], None);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "x,poly\ne,v\ns,1\n");
    let pretty = bin(&["mixed-demo", "--format", "pretty"], None);
    assert!(String::from_utf8(pretty.stdout).unwrap().starts_with("base  graded_hom_dim\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&[], None).status.code(), Some(2));
    assert_eq!(bin(&["kl", "A2"], None).status.code(), Some(2));
    assert_eq!(bin(&["kl", "A2", "sts", "--bogus"], None).status.code(), Some(2));
    assert_eq!(bin(&["kl", "Q7", "s"], None).status.code(), Some(2));
    assert_eq!(bin(&["rouquier", "A2", "s x"], None).status.code(), Some(2));
    assert_eq!(bin(&["homfly", "2", "s2"], None).status.code(), Some(2));
    let out = bin(&["rouquier", "B2", "s"], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("type A"));
}

#[test]
fn window_override() {
    assert_eq!(bin(&["homrank", "A2", "sts", "sts"], Some("1")).status.code(), Some(3));
    assert_eq!(bin(&["homfly", "2", "s1", "--homology"], Some("1")).status.code(), Some(3));
    let wide = bin(&["homfly", "2", "s1", "--homology"], Some("40"));
    let v: Value = serde_json::from_slice(&wide.stdout).unwrap();
    assert_eq!(v["window"][1].as_i64().unwrap() - v["window"][0].as_i64().unwrap(), 40);
}
