use std::process::{Command, Output};

use serde_json::Value;
use subgap::field::PrimeField;
use subgap::report::csv_cell;
use subgap::setops::rep_profile;
use subgap::structure::{generate_gap, GapDescription};
use subgap::verifier::classify_subgroup;

fn subgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subgap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn subgroup_prints_elements() {
    let o = subgap(&["subgroup", "-p", "13", "-k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 5 8 12\n");

    let o = subgap(&["subgroup", "--prime", "13", "--exponent", "1"]);
    assert_eq!(stdout(&o), "1 2 3 4 5 6 7 8 9 10 11 12\n");

    let o = subgap(&["subgroup", "-p", "13", "-k", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "p,k,t,elements\n13,3,4,1 5 8 12\n");
}

#[test]
fn subgroup_validation_errors() {
    let o = subgap(&["subgroup", "-p", "12", "-k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p must be prime"));

    let o = subgap(&["subgroup", "-p", "13", "-k", "5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = subgap(&["subgroup", "-p", "13"]);
    assert_eq!(o.status.code(), Some(2));

    let o = subgap(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gap_check_matches_library() {
    for (p, k) in [(13u64, 3u64), (17, 2), (13, 2), (13, 1), (13, 12), (97, 24)] {
        let o = subgap(&["gap-check", "-p", &p.to_string(), "-k", &k.to_string(), "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let f = PrimeField::new(p).unwrap();
        let v = classify_subgroup(&f, k).unwrap();
        assert_eq!(doc["is_gap"], v.is_gap);
        assert_eq!(doc["expected"], v.expected);
        assert_eq!(doc["method"], v.method.to_string());
        assert_eq!(doc["t"], v.t);
        if v.is_gap {
            let w = v.witness.unwrap();
            assert_eq!(doc["witness_a"], w.a);
            let diffs: Vec<u64> = serde_json::from_value(doc["witness_diffs"].clone()).unwrap();
            let lengths: Vec<u64> = serde_json::from_value(doc["witness_lengths"].clone()).unwrap();
            let g = GapDescription::new(&f, w.a, diffs, lengths).unwrap();
            assert_eq!(generate_gap(&g, &f).unwrap().0, f.subgroup(k).unwrap());
        } else {
            assert!(doc["witness_a"].is_null());
        }
    }
}

#[test]
fn gap_check_human() {
    let o = subgap(&["gap-check", "-p", "13", "-k", "3"]);
    let s = stdout(&o);
    assert!(s.contains("is_gap=true"), "{s}");
    assert!(s.contains("witness_a=1 witness_diffs=4 7 witness_lengths=2 2"), "{s}");

    let s = stdout(&subgap(&["gap-check", "-p", "17", "-k", "2"]));
    assert!(s.contains("is_gap=false") && s.contains("method=BINARY_PEEL"), "{s}");

    let s = stdout(&subgap(&["gap-check", "-p", "13", "-k", "2"]));
    assert!(s.contains("is_gap=false") && s.contains("method=POWER_OF_TWO_FILTER"), "{s}");
}

#[test]
fn rc_tables() {
    let s = stdout(&subgap(&["rc", "-p", "13", "-k", "3"]));
    assert!(s.contains("r(0)=4\n"), "{s}");
    assert!(s.contains("max nonzero r = 2 at c=4\n"), "{s}");

    // A_3 = {1, 6} mod 7: 1+6 and 6+1 give 0, 1+1 = 2, 6+6 = 5
    let s = stdout(&subgap(&["rc", "-p", "7", "-k", "3", "--format", "csv"]));
    assert_eq!(s, "c,r\n0,2\n2,1\n5,1\n");

    let s = stdout(&subgap(&["rc", "-p", "13", "-k", "12", "--format", "csv"]));
    assert_eq!(s, "c,r\n2,1\n");

    let o = subgap(&["rc", "-p", "31", "-k", "5", "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let f = PrimeField::new(31).unwrap();
    let prof = rep_profile(&f.subgroup(5).unwrap());
    for row in doc["rows"].as_array().unwrap() {
        let c = row["c"].as_u64().unwrap();
        assert_eq!(row["r"], prof.r(c));
    }
    let (c, r) = prof.max_nonzero();
    assert_eq!((doc["max_c"].clone(), doc["max_r"].clone()), (c.into(), r.into()));
}

#[test]
fn verify_theorem_json() {
    let o = subgap(&["verify", "theorem", "--p-max", "499", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&str> = doc.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["suite", "params", "entries", "violations", "timing"]);
    assert_eq!(doc["suite"], "theorem");
    assert!(doc["violations"].as_array().unwrap().is_empty());
}

#[test]
fn verify_doubling_guard() {
    let o = subgap(&["verify", "doubling", "--t", "4", "--p-min", "82", "--p-max", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let o = subgap(&["verify", "doubling", "--t", "4", "--p-min", "50", "--p-max", "80"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("range below 3^t"));
}

#[test]
fn verify_exit_code_signals_violations() {
    // the quadratic residues mod 17 have r(3) = 4 = t/2
    let o = subgap(&["verify", "rc", "--t", "8", "--p-max", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("VIOLATION p=17 k=2"));
    let o = subgap(&["verify", "rc", "--t", "8", "--p-max", "100", "--k-min", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn cost_guards_are_explicit() {
    let o = subgap(&["verify", "hp", "--p-max", "47"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cost guard"));
    let o = subgap(&["verify", "chen-yan", "--p-min", "211", "--p-max", "211", "--guard", "211"]);
    assert_eq!(o.status.code(), Some(0));
}

fn csv_matches_json(args: &[&str]) {
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let doc: Value = serde_json::from_str(&stdout(&subgap(&json_args))).unwrap();
    let csv_text = stdout(&subgap(&csv_args));
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(rows.len(), entries.len(), "{args:?}");
    for (row, entry) in rows.iter().zip(entries) {
        let obj = entry.as_object().unwrap();
        assert_eq!(obj.len(), header.len(), "{args:?}");
        for (col, cell) in header.iter().zip(row.iter()) {
            assert_eq!(csv_cell(&obj[col]), cell, "{args:?} column {col}");
        }
    }
}

#[test]
fn csv_and_json_carry_the_same_data() {
    csv_matches_json(&["verify", "theorem", "--p-max", "60"]);
    csv_matches_json(&["verify", "gmr", "--trials", "40", "--seed", "3"]);
    csv_matches_json(&["verify", "hasse-weil", "--p-max", "31", "--k-max", "6"]);
    csv_matches_json(&["verify", "oracle", "--p-max", "23"]);
    csv_matches_json(&["verify", "lemma55", "--p-max", "300"]);
    csv_matches_json(&["verify", "chen-yan", "--p-max", "41"]);
}

#[test]
fn reports_are_reproducible() {
    let strip = |o: Output| {
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    let args = ["verify", "gmr", "--seed", "11", "--trials", "200", "--format", "json"];
    let a = strip(subgap(&args));
    let mut with_jobs = args.to_vec();
    with_jobs.extend(["--jobs", "3"]);
    let b = strip(subgap(&with_jobs));
    assert_eq!(a, b);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("subgap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mattarei.csv");
    let o = subgap(&[
        "verify", "mattarei", "--p-max", "60", "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("p,k,t,max_c,max_r,lhs,rhs,holds\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}
