use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn tnlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tnlab")).args(args).env_remove("TNLAB_FIXTURES").output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = tnlab(&all);
    let v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap(), v)
}

fn corpus() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|p| p.file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

/// Every other test relies on the corpus being valid.
fn assert_valid(name: &str) {
    let (code, v) = json(&["validate", name]);
    assert_eq!(code, 0, "{} does not validate: {}", name, v);
    assert_eq!(v["results"]["valid"], Value::Bool(true));
}

#[test]
fn every_fixture_validates() {
    let names = corpus();
    assert!(names.len() >= 7);
    for n in &names {
        assert_valid(n);
    }
}

#[test]
fn case2_even_has_multiplicity_one() {
    assert_valid("nt2_case2_even");
    let (code, v) = json(&["multiplicity", "fixtures/nt2_case2_even.json"]);
    let (code2, v2) = json(&["multiplicity", "nt2_case2_even"]);
    assert_eq!((code, code2), (0, 0));
    assert_eq!(v["results"], v2["results"]);
    assert_eq!(v["results"]["m_eta"], "1");
    let class = &v["results"]["classes"][0];
    assert_eq!(class["agree"], true);
    assert_eq!(class["m_dual"], "1");
    assert_eq!(class["m_automorphic"], "1");
    for h in class["hasse"].as_array().unwrap() {
        assert_eq!(h["tn_product"], "0");
    }
}

#[test]
fn case2_odd_and_case1() {
    for (name, m) in [("nt2_case2_odd", "0"), ("nt2_case1", "1")] {
        assert_valid(name);
        let (code, v) = json(&["multiplicity", name]);
        assert_eq!(code, 0);
        assert_eq!(v["results"]["m_eta"], m, "{}", name);
        assert_eq!(v["results"]["classes"][0]["agree"], true);
    }
}

#[test]
fn functor_pairing_vanishes() {
    assert_valid("nt2_functor");
    let (code, v) = json(&["pairing", "--kind", "functor", "fixtures/nt2_functor.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["value"], "0");
}

#[test]
fn tate_minus_one_of_the_norm_torus() {
    assert_valid("normtorus");
    let (code, v) = json(&["cohomology", "--tate", "-1", "fixtures/normtorus.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["result"]["group"], "Z/2");
    let out = tnlab(&["cohomology", "--tate", "-1", "normtorus"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("Ĥ^-1(G, X)  Z/2"));
}

#[test]
fn pairings_on_the_norm_torus() {
    assert_valid("normtorus");
    for (kind, val) in [("kottwitz", "1/2"), ("tn", "1/2"), ("langlands", "0")] {
        let (code, v) = json(&["pairing", "--kind", kind, "normtorus"]);
        assert_eq!(code, 0, "{}", v);
        assert_eq!(v["results"]["value"], val, "{}", kind);
    }
    let (_, h) = json(&["cohomology", "--hyper", "normtorus"]);
    assert_eq!(h["results"]["h0"]["group"], "0");
    assert_eq!(h["results"]["h1"]["group"], "Z/2 x Z");
}

#[test]
fn nonsplit_packet_is_one_member_of_degree_two() {
    assert_valid("nonsplit_local");
    let (code, v) = json(&["llc", "nonsplit_local"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["alpha_split"], false);
    let packet = v["results"]["packet"].as_array().unwrap();
    assert_eq!(packet.len(), 1);
    assert_eq!(packet[0]["degree"], 2);
    assert_eq!(packet[0]["kaletha_agrees"], true);
    assert_eq!(packet[0]["relation_holds"], true);
    assert_eq!(packet[0]["round_trip"], true);
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        &["multiplicity", "nt2_case2_even"][..],
        &["llc", "nonsplit_local"][..],
        &["--format", "json", "multiplicity", "nt2_case1"][..],
    ] {
        let a = tnlab(args);
        let b = tnlab(args);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn json_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = tnlab(&["--format", "json", "--json", path.to_str().unwrap(), "llc", "nt2_local"]);
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["support"], 3);
    assert_eq!(v["fixture"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn support_exhaustion_exits_three() {
    assert_valid("split_langlands");
    let (code, v) = json(&["--support", "0", "pairing", "--kind", "langlands", "split_langlands"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "error");
    assert_eq!(v["support"], 0);
    assert_eq!(v["fixture"]["path"], "split_langlands");
    let (code, v) = json(&["pairing", "--kind", "langlands", "split_langlands"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["value"], "5/7");
}

#[test]
fn fixture_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixtures().join("normtorus.json"), dir.path().join("elsewhere.json")).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tnlab"))
        .args(["cohomology", "--tate", "-1", "elsewhere"])
        .env("TNLAB_FIXTURES", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("Z/2"));
}

fn write_variant(dir: &Path, name: &str, edit: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v: Value = serde_json::from_slice(&std::fs::read(fixtures().join("nt2_case2_even.json")).unwrap()).unwrap();
    edit(&mut v);
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_vec_pretty(&v).unwrap()).unwrap();
    p
}

#[test]
fn invalid_instances_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // an odd number of twisted places violates the Kottwitz sum
    let odd = write_variant(dir.path(), "odd.json", |v| {
        v["global"]["places"][1].as_object_mut().unwrap().remove("twist");
    });
    let (code, v) = json(&["validate", odd.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["results"]["valid"], false);
    let (code, _) = json(&["multiplicity", odd.to_str().unwrap()]);
    assert_eq!(code, 2);

    let bad = write_variant(dir.path(), "bad.json", |v| v["global"]["places"][0]["twist"] = serde_json::json!([[1], [1]]));
    let (code, v) = json(&["multiplicity", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("place v1"), "{}", v);

    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{\"version\": 1, \"galois\": ").unwrap();
    assert_eq!(tnlab(&["validate", garbled.to_str().unwrap()]).status.code(), Some(2));

    let wrong = write_variant(dir.path(), "v2.json", |v| v["version"] = 2.into());
    assert_eq!(tnlab(&["validate", wrong.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(tnlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn nearly_equivalent_classes_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let twice = write_variant(dir.path(), "twice.json", |v| {
        let mut a = v["global"].clone();
        a["orbit"] = "first".into();
        let mut b = a.clone();
        b["orbit"] = "second".into();
        v["global"] = Value::Array(vec![a, b]);
    });
    let (code, v) = json(&["multiplicity", twice.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("nearly equivalent"), "{}", v);
}

#[test]
fn catalog_matches_the_library_rendering() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../tnlab-core/tests/golden");
    for (args, file) in [
        (&["catalog", "dir3", "--minus-one-norm", "false"][..], "catalog_dir3.txt"),
        (&["catalog", "dir4", "--a-norm", "true"][..], "catalog_dir4.txt"),
        (&["catalog", "semidirect", "--y-norm", "false"][..], "catalog_semidirect_nonnorm.txt"),
    ] {
        let (code, v) = json(args);
        assert_eq!(code, 0);
        let expected = std::fs::read_to_string(golden.join(file)).unwrap();
        assert_eq!(v["results"]["text"], expected.as_str());
    }
    let (code, _) = json(&["catalog", "dir4"]);
    assert_eq!(code, 2);
}
