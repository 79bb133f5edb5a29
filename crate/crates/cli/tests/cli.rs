use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn slicing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slicing")).args(args).output().expect("run slicing")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn table(dir: &Path) -> String {
    let path = dir.join("knots.csv");
    fs::write(
        &path,
        "name,determinant,signature,two_bridge_p,two_bridge_q,slice_genus\n\
         five_two,7,-2,7,3,1\n\
         mystery,15,-2,,,\n",
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&slicing(&["slice-check", "7_4", "--p", "0", "--n", "1"])), 0);
    assert_eq!(code(&slicing(&["slice-check", "--two-bridge", "1/1", "--p", "0", "--n", "0"])), 1);
    assert_eq!(code(&slicing(&["slice-check", "no_such_knot"])), 2);
    assert_eq!(code(&slicing(&["slice-check", "--two-bridge", "15/6"])), 2);
    assert_eq!(code(&slicing(&["enum-forms", "--rank", "3", "--det", "15", "--n-even", "0"])), 2);
    assert_eq!(code(&slicing(&["frobnicate"])), 2);
    assert_eq!(code(&slicing(&["slice-check", "7_4", "--p", "many"])), 2);
}

#[test]
fn summary_names_the_conclusion() {
    let o = slicing(&["slice-check", "7_4", "--p", "0", "--n", "1"]);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("[[2,1],[1,8]]"), "{out}");
    assert!(out.trim_end().ends_with("conclusion: obstructed"), "{out}");
}

#[test]
fn json_reports() {
    let r = json(&slicing(&["slice-check", "7_4", "--p", "0", "--n", "1", "--json"]));
    assert_eq!(r["conclusion"], "Obstructed");
    assert_eq!(r["forms"].as_array().unwrap().len(), 1);

    let f = json(&slicing(&["enum-forms", "--rank", "2", "--det", "15", "--n-even", "1", "--json"]));
    assert_eq!(f.as_array().map(|a| a.len()).or(f["forms"].as_array().map(|a| a.len())), Some(1));

    let d = json(&slicing(&["dinv", "--lens", "3/1", "--verify", "--json"]));
    assert!(d.to_string().contains("1/2"), "{d}");

    let e = json(&slicing(&["embed", "--l-n-dual", "1", "--dim", "7", "--json"]));
    assert!(e.to_string().contains("complement"), "{e}");
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = slicing(&["slice-check", "7_4", "--p", "0", "--n", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["knot"], "7_4");
}

#[test]
fn warm_cache_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let args = ["slice-check", "--two-bridge", "15/4", "--p", "0", "--n", "1", "--json", "--cache-dir", cache];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_ms");
        serde_json::to_string(&v).unwrap()
    };
    let cold = strip(json(&slicing(&args)));
    for kind in ["forms", "dtable"] {
        let n = fs::read_dir(dir.path().join("cache").join(kind)).unwrap().count();
        assert!(n > 0, "no {kind} entries");
    }
    let warm = strip(json(&slicing(&args)));
    assert_eq!(cold, warm);
}

#[test]
fn ingest_and_table_lookup() {
    let dir = tempfile::tempdir().unwrap();
    let t = table(dir.path());
    assert_eq!(code(&slicing(&["ingest", &t])), 0);
    assert_eq!(code(&slicing(&["slice-check", "five_two", "--table", &t, "--p", "0", "--n", "1"])), 1);

    // No two-bridge data: only the form listing is possible.
    assert_eq!(code(&slicing(&["slice-check", "mystery", "--table", &t, "--n", "1"])), 2);
    let o = slicing(&["slice-check", "mystery", "--table", &t, "--n", "1", "--forms-only", "--json"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o).to_string().contains("\"2\""));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "name,determinant,signature,two_bridge_p,two_bridge_q,slice_genus\nx,15,0,,,\n").unwrap();
    let o = slicing(&["ingest", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 2"));
}

#[test]
fn kn_family() {
    let o = slicing(&["kn", "--n", "1", "--check-donaldson", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["donaldson"]["obstructed"], true);
    assert_eq!(code(&slicing(&["kn", "--n", "1", "--check-donaldson", "--k", "0"])), 1);
}
