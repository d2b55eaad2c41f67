use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

use ntuple_core::group::{catalog, subgroup_closure, FiniteAction};
use ntuple_core::io::{ActionSpec, GroupSpec};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_ntuple"))
        .args(args)
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("exit code");
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, report)
}

fn run_file(args: &[&str], file: &str) -> (i32, Value) {
    let path = data(file);
    let mut all: Vec<&str> = args.to_vec();
    all.push(path.to_str().unwrap());
    run(&all)
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn trivial_group_validates() {
    let (code, r) = run_file(&["group", "validate"], "trivial.json");
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["details"]["order"], 1);
}

#[test]
fn non_associative_loop_fails_with_witness() {
    let (code, r) = run_file(&["group", "validate"], "loop5.json");
    assert_eq!(code, 1);
    assert_eq!(r["verdict"], "fail");
    assert_eq!(r["witnesses"][0]["kind"], "NonAssociative");
}

#[test]
fn input_errors_exit_2() {
    let (code, r) = run_file(&["group", "validate"], "malformed.json");
    assert_eq!(code, 2);
    assert_eq!(r["verdict"], "error");
    let (code, _) = run(&["group", "frobnicate"]);
    assert_eq!(code, 2);
    let (code, _) = run_file(&["group", "validate"], "does-not-exist.json");
    assert_eq!(code, 2);
}

#[test]
fn q8_triple_fails_at_the_lower_level() {
    let (code, r) = run_file(&["ntuple", "verify", "--subgroups", "i,j,k"], "q8.json");
    assert_eq!(code, 1);
    let w = r["witnesses"].as_array().unwrap();
    assert_eq!(w.len(), 3);
    assert_eq!(w[0]["level"], 2);
    assert_eq!(w[0]["ambient"], serde_json::json!(["1", "-1", "i", "-i"]));
    assert_eq!(
        w[0]["members"],
        serde_json::json!([["1", "-1"], ["1", "-1"]])
    );
    assert_eq!(w[0]["failures"][0]["kind"], "not_generating");
    assert_eq!(r["details"]["trace"]["verdict"], false);
    assert_eq!(r["details"]["trace"]["children"][0]["verdict"], false);
}

#[test]
fn q8_double_passes() {
    let (code, r) = run_file(&["dpg", "verify"], "q8_ij.json");
    assert_eq!(code, 0);
    assert_eq!(r["details"]["core_order"], 2);
    assert_eq!(r["details"]["quotients"], serde_json::json!([2, 2]));
    assert_eq!(r["details"]["exact_sequence"]["exact"], true);
    let (code, r) = run_file(&["dpg", "verify", "--subgroups", "i,j"], "q8.json");
    assert_eq!(code, 0);
    assert_eq!(r["details"]["vacant"], false);
    let (code, r) = run_file(&["dpg", "verify"], "z4_twice.json");
    assert_eq!(code, 1);
    assert_eq!(r["witnesses"][0]["kind"], "NotGenerating");
}

#[test]
fn dressing_report() {
    let (code, r) = run_file(&["dpg", "dressing"], "q8_ij.json");
    assert_eq!(code, 0);
    assert_eq!(r["details"]["semidirect_order"], 16);
    assert_eq!(r["details"]["product_map_kernel_order"], 2);
    assert!(r["theory_assertions"]
        .as_array()
        .unwrap()
        .iter()
        .all(|a| a["holds"] == true));
}

#[test]
fn pipeline_from_translations() {
    let q8 = catalog::quaternion();
    let sub = |l: &str| subgroup_closure(&q8, &[q8.find_label(l).unwrap()]).unwrap();
    let spec = |a: FiniteAction| ActionSpec {
        group: GroupSpec::from_group(a.group()),
        points: a.points(),
        act: a.rows(),
        side: a.side(),
    };
    let file = serde_json::json!({
        "points": 8,
        "rho": spec(FiniteAction::right_translation(&sub("i"))),
        "rho_prime": spec(FiniteAction::right_translation(&sub("j"))),
    });
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pipeline_q8.json");
    std::fs::write(&path, file.to_string()).unwrap();
    let (code, r) = run(&["dpg", "gamma-from-actions", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let d = &r["details"];
    assert_eq!(d["gamma_order"], 8);
    assert_eq!(d["free"], true);
    assert_eq!(
        (d["m"].clone(), d["m_prime"].clone(), d["m0"].clone()),
        (2.into(), 2.into(), 1.into())
    );
}

#[test]
fn groupoid_commands() {
    let (code, r) = run_file(&["groupoid", "gauge"], "z2_on_4.json");
    assert_eq!(code, 0);
    assert_eq!(r["details"]["groupoid"]["objects"], 2);
    assert_eq!(r["details"]["groupoid"]["arrows"], 8);
    let (code, r) = run_file(&["groupoid", "gauge"], "z2_fixing.json");
    assert_eq!(code, 1);
    assert_eq!(r["witnesses"][0]["kind"], "ActionNotFree");
    let (code, r) = run_file(&["groupoid", "quotient"], "klein_gauge.json");
    assert_eq!(code, 0);
    assert_eq!(r["details"]["quotient"]["arrows"], 4);
    let (code, r) = run_file(&["groupoid", "split"], "klein_gauge.json");
    assert_eq!(code, 0);
    assert_eq!(r["details"]["fiber_pairs"].as_array().unwrap().len(), 8);
    let (code, r) = run_file(&["groupoid", "mult-function"], "klein_gauge.json");
    assert_eq!(code, 0);
    assert_eq!(r["details"]["b"].as_array().unwrap().len(), 4);
}

#[test]
fn graded_commands() {
    let (code, r) = run_file(&["graded", "check-morphism"], "graded_square.json");
    assert_eq!(code, 0);
    assert_eq!(r["details"]["graded"], true);
    let (code, r) = run_file(&["graded", "check-morphism"], "not_graded.json");
    assert_eq!(code, 1);
    assert_eq!(r["witnesses"][0]["target"], 1);
    assert_eq!(r["witnesses"][0]["monomial_degree"], serde_json::json!([1]));
    let (code, _) = run_file(&["graded", "check-compat"], "compat_graded.json");
    assert_eq!(code, 0);
    let (code, r) = run_file(&["graded", "check-compat"], "compat_skew.json");
    assert_eq!(code, 1);
    assert_eq!(r["details"]["brackets_vanish"], false);
    let (code, r) = run_file(&["graded", "weights", "--weight", "2"], "weights.json");
    assert_eq!(code, 0);
    assert_eq!(r["details"]["components"][0]["weight"], 2);
    let (code, _) = run_file(&["graded", "weights", "--weight", "1"], "weights.json");
    assert_eq!(code, 1);
}

#[test]
fn p54_report_and_determinism() {
    let sig = data("d111.json");
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("p54.json");
    let args = [
        "aut",
        "verify-p54",
        "--sig",
        sig.to_str().unwrap(),
        "--field",
        "Fp:3",
        "--out",
        out.to_str().unwrap(),
    ];
    let (code, r) = run(&args);
    assert_eq!(code, 0);
    let d = &r["details"];
    assert_eq!(d["gamma_order"], 24);
    assert_eq!(d["gi_orders"], serde_json::json!([12, 12]));
    assert_eq!(d["intersections"][0]["order"], 6);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(without_timing(written), without_timing(r.clone()));
    let (_, again) = run(&args);
    assert_eq!(without_timing(again), without_timing(r));
}

#[test]
fn enumeration_cap_is_an_input_error() {
    let sig = data("d111.json");
    let (code, r) = run(&[
        "aut",
        "enumerate",
        "--sig",
        sig.to_str().unwrap(),
        "--field",
        "Fp:3",
        "--max-candidates",
        "10",
    ]);
    assert_eq!(code, 2);
    assert!(r["details"]["error"].as_str().unwrap().contains("81"));
    let (code, r) = run(&[
        "aut",
        "enumerate",
        "--sig",
        sig.to_str().unwrap(),
        "--field",
        "Fp:2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["details"]["order"], 2);
}

#[test]
fn cocycle_commands() {
    let (code, _) = run_file(&["cocycle", "check"], "z3_cocycle.json");
    assert_eq!(code, 0);
    let (code, r) = run_file(&["cocycle", "check"], "z3_broken.json");
    assert_eq!(code, 1);
    assert_eq!(r["witnesses"][0]["violation"]["law"], "not_multiplicative");
    let (a, b) = (data("z3_cocycle.json"), data("z3_trivial.json"));
    let (code, r) = run(&[
        "cocycle",
        "cohomologous",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["details"]["lambda"], serde_json::json!(["0", "1", "2"]));
    let (a, b) = (data("z3_loop.json"), data("z3_loop_trivial.json"));
    let (code, r) = run(&[
        "cocycle",
        "cohomologous",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert_eq!(r["witnesses"][0]["kind"], "exhaustive search");
}

#[test]
fn frame_and_associated_bundles() {
    let (code, r) = run_file(&["cocycle", "frame"], "aut_cocycle.json");
    assert_eq!(code, 0);
    assert_eq!(r["details"]["group_order"], 24);
    let (code, r) = run_file(&["cocycle", "associate"], "aut_cocycle.json");
    assert_eq!(code, 0);
    assert_eq!(r["details"]["corners_commute"], true);
    // y -> 2y swaps the two nonzero values of the first factor.
    assert_eq!(
        r["details"]["rho_quotient"]["values"][0]["element"],
        serde_json::json!([0, 2, 1])
    );
}

#[test]
fn second_order_transition() {
    let (code, r) = run_file(&["cocycle", "t2"], "t2_square.json");
    assert_eq!(code, 0);
    assert_eq!(r["details"]["graded"], true);
    assert_eq!(r["details"]["vector_bundle_transition"], false);
    assert_eq!(
        r["details"]["transition"]["terms"]
            .as_array()
            .unwrap()
            .len(),
        7
    );
}
