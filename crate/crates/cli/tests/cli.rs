use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn grpkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grpkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const PATH3: &str = r#"{"mode":"coxeter","vertices":[{"id":"a"},{"id":"b"},{"id":"c"}],
 "edges":[{"u":"a","v":"b","m":2},{"u":"b","v":"c","m":2}]}"#;

const EDGE_POINT: &str = r#"{"mode":"coxeter","vertices":[{"id":"a"},{"id":"b"},{"id":"c"}],
 "edges":[{"u":"a","v":"b","m":2}]}"#;

#[test]
fn vn_word_is_the_nine_cycle() {
    let out = grpkit(&["vn", "--n", "3", "--word", "b1 b2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cycles = v["cycles"].as_array().unwrap();
    assert_eq!(cycles.len(), 1);
    let cyc: Vec<&str> = cycles[0].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(cyc, ["00", "01", "02", "10", "11", "12", "20", "21", "22"]);
}

#[test]
fn vn_random_respects_the_seed() {
    let a = grpkit(&["vn", "--n", "3", "--random", "5", "--seed", "9"]);
    let b = grpkit(&["vn", "--n", "3", "--random", "5", "--seed", "9"]);
    let c = grpkit(&["vn", "--n", "3", "--random", "5", "--seed", "10"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn claim_chain_report() {
    let out = grpkit(&["verify-thm41", "--n", "3", "--depth", "2", "--max-k", "2", "--max-m", "3", "--max-p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], Value::Bool(true));
}

#[test]
fn graph_summary_and_words() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p3.json", PATH3);
    let out = grpkit(&["graph", s(&g), "--word", "c b a", "--equal", "c a b", "--retract", "a,b"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["normal_form"], "b c a");
    assert_eq!(v["equal"], true);
    assert_eq!(v["retraction"], "a b");
    assert_eq!(v["t0"], true);
    assert_eq!(v["join"]["verdict"], "split");
}

#[test]
fn reconstruct_round_trip() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p3.json", PATH3);
    let poset = dir.path().join("poset.json");
    let out = grpkit(&["reconstruct", s(&g), "--output", s(&poset)]);
    assert_eq!(out.status.code(), Some(0));
    let back = grpkit(&["reconstruct", s(&poset)]);
    assert_eq!(back.status.code(), Some(0));
    let v = json(&back);
    assert_eq!(v["mode"], "product");
    assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(v["edges"].as_array().unwrap().len(), 2);
}

#[test]
fn fingerprints_compare_and_ignore_job_count() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.json", PATH3);
    let ep = write(&dir, "ep.json", EDGE_POINT);
    let f1 = dir.path().join("f1.json");
    let f1b = dir.path().join("f1b.json");
    let f2 = dir.path().join("f2.json");
    let f3 = dir.path().join("f3.json");
    for (input, out, jobs, order) in [(&p3, &f1, "1", "48"), (&p3, &f1b, "3", "48"), (&ep, &f2, "2", "48"), (&p3, &f3, "1", "24")] {
        let o = grpkit(&["fingerprint", s(input), "--deg", "4", "--order", order, "--jobs", jobs, "--output", s(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(fs::read(&f1).unwrap(), fs::read(&f1b).unwrap());
    assert_eq!(grpkit(&["compare", s(&f1), s(&f1b)]).status.code(), Some(0));
    let differ = grpkit(&["compare", s(&f1), s(&f2)]);
    assert_eq!(differ.status.code(), Some(3));
    assert_eq!(json(&differ)["verdict"], "differ");
    assert_eq!(grpkit(&["compare", s(&f1), s(&f3)]).status.code(), Some(4));
}

#[test]
fn separate_endpoints_of_a_path() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p3.json", PATH3);
    let out = grpkit(&["separate", s(&g), "--a", "a", "--b", "c"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["retraction"][0], "a");
    let same = grpkit(&["separate", s(&g), "--a", "a", "--b", "a"]);
    assert_eq!(same.status.code(), Some(2));
}

#[test]
fn fibre_spec_and_mutation() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "spec.json",
        r#"{"factors":[{"generators":["a","b"],"relators":["a^2","b^2"]},
                       {"generators":["a","b"],"relators":["a^2","b^2"]}],
            "target":{"kind":"permutation","degree":4,"generators":[[2,1,3,4],[1,2,4,3]]},
            "images":[[[2,1,3,4],[1,2,4,3]],[[2,1,3,4],[1,2,4,3]]]}"#,
    );
    let out = grpkit(&["fibre", s(&spec)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["index"], 4);
    assert_eq!(v["checklist"]["passed"], false);
    let bad = grpkit(&["fibre", s(&spec), "--omit-kernel"]);
    assert_eq!(bad.status.code(), Some(3));
    let vn = grpkit(&["fibre", "--vn", "4", "--depth", "1"]);
    assert_eq!(vn.status.code(), Some(0));
    assert_eq!(json(&vn)["checklist"]["passed"], true);
}

#[test]
fn collapse_a_module() {
    let dir = TempDir::new().unwrap();
    let g = write(
        &dir,
        "g.json",
        r#"{"mode":"product","vertices":[{"id":"a","group":"C2"},{"id":"b","group":"C3"},{"id":"c","group":"C2"}],
            "edges":[{"u":"a","v":"b"}]}"#,
    );
    let mods = grpkit(&["collapse", s(&g)]);
    assert_eq!(mods.status.code(), Some(0));
    let out = grpkit(&["collapse", s(&g), "--module", "a,b"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["vertices"].as_array().unwrap().len(), 2);
}

#[test]
fn malformed_input_reports_the_line() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "bad.json", "{\n  \"mode\": \"coxeter\",\n  \"vertices\": [,]\n}");
    let out = grpkit(&["reconstruct", s(&g)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json:3:"), "{err}");
    assert_eq!(grpkit(&["no-such-command"]).status.code(), Some(2));
}
