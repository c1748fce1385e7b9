mod common;

use common::{code, data, report, run, schema, schema_errors};
use cyclehom_core::limits::parse_system;
use serde_json::{json, Value};

fn all_reports() -> Vec<Value> {
    let (stat, s2222, h3, h5) = (data("stationary.sys"), data("stationary-2222.sys"), data("h1-3.sys"), data("h1-5.sys"));
    let (z2, aut, kappa, per) = (data("outgroup-z2.sys"), data("outgroup-aut.sys"), data("kappa-positive.sys"), data("periodic-3121.sys"));
    let dg = data("four-cycle.dg");
    let runs: Vec<Vec<&str>> = vec![
        vec!["invariants", &stat],
        vec!["invariants", &per, "--horizon", "6"],
        vec!["invariants", &kappa],
        vec!["homrange", "10", "2", "10", "2"],
        vec!["homrange", "3", "1", "0", "4"],
        vec!["compose", "1", "1", "1", "1", "3", "1", "2", "1"],
        vec!["jointscale", &stat, "--stage", "1"],
        vec!["compare", &stat, &s2222],
        vec!["compare", &h3, &h5],
        vec!["hr-check", &per, "--horizon", "4"],
        vec!["outgroup", &z2],
        vec!["outgroup", &aut],
        vec!["lattice"],
        vec!["homology", &dg],
        vec!["homology", &dg, "--full", "--dim", "2"],
        vec!["verify", "--lemma", "6.2", "--samples", "50"],
        vec!["verify", "--lemma", "6.5", "--samples", "50"],
        vec!["verify", "--lemma", "factorization"],
        vec!["verify", "--lemma", "upper-rank", "--samples", "50"],
        vec!["verify", "--lemma", "rigid-recovery", "--samples", "20"],
        vec!["verify", "--lemma", "equirank", "--samples", "20"],
        vec!["examples", "stationary"],
        vec!["examples", "hr-asymmetric", "--count", "3"],
        vec!["examples", "standard-index2", "--factors", "2,3,5"],
    ];
    runs.iter().map(|a| report(a, 0)).collect()
}

#[test]
fn reports_match_schema() {
    let v = schema();
    for r in all_reports() {
        let errs = schema_errors(&v, &r);
        assert!(errs.is_empty(), "{}: {errs:?}", r["command"]);
        assert_eq!(r["metadata"]["report_version"], "1");
    }
}

#[test]
fn schema_rejects_malformed() {
    let v = schema();
    let good = report(&["homrange", "6", "2", "6", "2"], 0);
    assert!(schema_errors(&v, &good).is_empty());
    let mut extra = good.clone();
    extra["surprise"] = json!(1);
    assert!(!schema_errors(&v, &extra).is_empty());
    let mut missing = good.clone();
    missing["results"].as_object_mut().unwrap().remove("range");
    assert!(!schema_errors(&v, &missing).is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["lattice"])), 0);
    assert_eq!(code(&run(&["invariants", &data("bad-syntax.sys")])), 2);
    assert_eq!(code(&run(&["invariants", &data("bad-fit.sys")])), 2);
    assert_eq!(code(&run(&["invariants", &data("finite.sys")])), 2);
    assert_eq!(code(&run(&["invariants", &data("missing.sys")])), 2);
    assert_eq!(code(&run(&["homology", &data("bad.dg")])), 2);
    assert_eq!(code(&run(&["homrange", "6", "2", "1", "1"])), 2);
    assert_eq!(code(&run(&["verify", "--lemma", "6.2", "--samples", "0"])), 2);
    assert_eq!(code(&run(&["no-such-command"])), 2);
    assert_eq!(code(&run(&["verify", "--lemma", "6.5", "--samples", "5", "--margin", "-1"])), 2);
    // a rigidity tolerance below rounding error makes the check fail, not error
    let r = report(&["verify", "--lemma", "factorization", "--rigidity-tol", "1e-30"], 1);
    assert_eq!(r["results"]["passed"], false);
}

#[test]
fn error_messages_name_the_line() {
    let out = run(&["invariants", &data("bad-syntax.sys")]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");
    let out = run(&["homology", &data("bad.dg")]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn homrange_values() {
    let r = report(&["homrange", "10", "2", "10", "2"], 0);
    assert_eq!(r["results"]["range"], json!([4, 8, 12]));
    assert_eq!(r["results"]["contains_zero"], false);
    let big = report(&["homrange", "100000000000000000000", "0", "100000000000000000000", "0"], 0);
    assert_eq!(big["results"]["low"].to_string(), "100000000000000000000");
}

#[test]
fn compose_is_functorial() {
    let r = report(&["compose", "1", "1", "1", "1", "3", "1", "2", "1"], 0);
    let res = &r["results"];
    assert_eq!(res["functorial"], true);
    assert_eq!(res["h1"], json!(0));
    assert_eq!(res["multiplicity"], json!(28));
}

#[test]
fn factorization_report() {
    let r = report(&["verify", "--lemma", "factorization", "--validation-tol", "1e-12"], 0);
    let res = &r["results"];
    for key in ["phi_valid", "composite_valid", "composite_rigid", "passed"] {
        assert_eq!(res[key], true, "{key}");
    }
    assert_eq!(res["locally_regular_phi"], false);
    assert_eq!(res["composite_h1"], json!(0));
    assert_eq!(res["composite_signature"], json!([1, 1, 1, 1]));
}

#[test]
fn lattice_report() {
    let r = report(&["lattice"], 0);
    let res = &r["results"];
    assert_eq!(res["count"], json!(13));
    assert_eq!(res["nodes"].as_array().unwrap().len(), 13);
    assert_eq!(res["star_is_order_automorphism"], true);
}

#[test]
fn compare_and_outgroup() {
    let iso = report(&["compare", &data("stationary.sys"), &data("stationary-2222.sys")], 0);
    assert_eq!(iso["results"]["verdict"], "isomorphic");
    assert_eq!(iso["results"]["witness_verified"], true);
    let dist = report(&["compare", &data("h1-3.sys"), &data("h1-5.sys")], 0);
    assert_eq!(dist["results"]["verdict"], "distinguished");
    assert_eq!(dist["results"]["reason"]["invariant"], "h1");
    assert_eq!(report(&["outgroup", &data("outgroup-z2.sys")], 0)["results"]["group"]["kind"], "z2");
    assert_eq!(report(&["outgroup", &data("outgroup-aut.sys")], 0)["results"]["group"]["kind"], "aut_h1");
}

#[test]
fn homology_of_four_cycle() {
    let r = report(&["homology", &data("four-cycle.dg")], 0);
    assert_eq!(r["results"]["homology"][1], json!({ "dim": 1, "betti": 1, "torsion": [] }));
}

#[test]
fn examples_round_trip() {
    let dir = std::env::temp_dir().join(format!("cyclehom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (kind, extra) in [("stationary", vec![]), ("hr-asymmetric", vec!["--count", "3"])] {
        let path = dir.join(format!("{kind}.sys"));
        let p = path.to_string_lossy().into_owned();
        let mut args = vec!["examples", kind, "--out", &p];
        args.extend(extra);
        let r = report(&args, 0);
        let text = r["results"]["text"].as_str().unwrap();
        let parsed = parse_system(text).unwrap();
        assert_eq!(parse_system(&parsed.to_text()).unwrap(), parsed);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    }
    let _ = std::fs::remove_dir_all(&dir);
    assert_eq!(code(&run(&["examples", "standard-index2", "--out", "x"])), 2);
}

#[test]
fn verify_is_deterministic() {
    for lemma in ["6.2", "6.5", "upper-rank", "rigid-recovery", "equirank"] {
        let args = ["verify", "--lemma", lemma, "--samples", "40", "--seed", "11"];
        let a = run(&args);
        let b = run(&args);
        assert_eq!(code(&a), 0, "{lemma}");
        assert_eq!(a.stdout, b.stdout, "{lemma}");
    }
}

#[test]
fn broken_pipe_is_quiet() {
    use std::io::Read;
    use std::process::{Command, Stdio};
    let mut child = Command::new(env!("CARGO_BIN_EXE_cyclehom"))
        .args(["invariants", &data("kappa-positive.sys")])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let mut err = String::new();
    child.stderr.take().unwrap().read_to_string(&mut err).unwrap();
    child.wait().unwrap();
    assert!(!err.contains("panicked"), "{err}");
}
