use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metaplectic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn analyze_mp4_example() {
    let d = json(&["analyze", "rho2:1 + chi_a:2"]);
    assert_eq!(d["component_group_rank"], 2);
    assert_eq!(d["x_psi"], "10");
    assert_eq!(d["z"], "11");
    assert_eq!(d["descent"]["splittings"], 4);
    assert_eq!(d["descent"]["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn analyze_unramified_principal() {
    let d = json(&["analyze", "one:4"]);
    assert_eq!(d["classification"]["principal"], true);
    assert_eq!(d["spherical_member_expected"], true);
}

#[test]
fn markdown_is_the_default() {
    let out = run(&["analyze", "one:2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# "));
    assert!(text.contains("```json"));
}

#[test]
fn odd_multiplicity_orthogonal_summand_is_rejected() {
    let out = run(&["analyze", "chi_a:3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ConsistencyError"));
}

#[test]
fn unknown_constituent_is_an_input_error() {
    let out = run(&["analyze", "nowhere:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_parameter_is_a_usage_error() {
    let out = run(&["analyze", "rho2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("UsageError"));
}

#[test]
fn principal_two_place_multiplicity() {
    let path = data("principal_two_place.json");
    let d = json(&["multiplicity", "--scenario", path.to_str().unwrap()]);
    assert_eq!(d["nu"], "0");
    assert_eq!(d["epsilon_psi"], "0");
    let members = d["members"]["members"].as_array().unwrap();
    let mut got: Vec<(String, String, u64)> = members
        .iter()
        .map(|m| {
            let labels = m["labels"].as_array().unwrap();
            (
                labels[0].as_str().unwrap().to_string(),
                labels[1].as_str().unwrap().to_string(),
                m["multiplicity"].as_u64().unwrap(),
            )
        })
        .collect();
    got.sort();
    assert_eq!(
        got,
        vec![
            ("omega_minus".to_string(), "omega_minus".to_string(), 1),
            ("omega_plus".to_string(), "omega_plus".to_string(), 1),
        ]
    );
    let e = &d["enlargement"];
    assert_eq!(e["added_places_unramified"], true);
    assert_eq!(e["constraint_projection_ok"], true);
    assert_eq!(e["members_projection_ok"], true);
    assert_eq!(d["factorization_mismatches"], 0);
    assert_eq!(d["coefficient_identity_holds"], true);
}

#[test]
fn saito_kurokawa_multiplicity() {
    let path = data("saito_kurokawa.json");
    let d = json(&["multiplicity", "--scenario", path.to_str().unwrap()]);
    assert_eq!(d["epsilon_art"], "11");
    assert_eq!(d["nu"], "00");
    assert_eq!(d["constraint_set"]["tuples"].as_array().unwrap().len(), 4);
    let labels: Vec<Vec<&str>> = d["members"]["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["labels"].as_array().unwrap().iter().map(|l| l.as_str().unwrap()).collect())
        .collect();
    assert_eq!(labels.len(), 2);
    assert!(labels.contains(&vec!["sigma_plus", "theta"]));
    assert!(labels.contains(&vec!["theta", "sigma_plus"]));
}

#[test]
fn missing_localization_exits_with_input_status() {
    let path = data("missing_localization.json");
    let out = run(&["multiplicity", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("MissingLocalization"));
}

#[test]
fn missing_scenario_file_is_an_input_error() {
    let out = run(&["multiplicity", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn multiplicity_without_scenario_is_a_usage_error() {
    assert_eq!(run(&["multiplicity"]).status.code(), Some(2));
}

#[test]
fn every_casebook_case_exits_cleanly() {
    for case in metaplectic_cli::casebook::CASES {
        let d = json(&["casebook", case]);
        assert_eq!(d["ok"], true, "{case}");
    }
}

#[test]
fn unknown_casebook_case_is_rejected() {
    assert_eq!(run(&["casebook", "nope"]).status.code(), Some(2));
}

#[test]
fn validate_builtin_catalogs() {
    for name in metaplectic_cli::scenario::BUILTIN_NAMES {
        let cat = format!("builtin:{name}");
        let out = run(&["validate", "--catalog", &cat, "--max-n", "2"]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let out = run(&["validate", "--max-n", "3", "--seed", "7"]);
    assert!(out.status.success());
}

#[test]
fn json_output_is_deterministic() {
    let path = data("saito_kurokawa.json");
    let args = ["multiplicity", "--scenario", path.to_str().unwrap(), "--format", "json"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert_eq!(a, b);
    let args = ["validate", "--max-n", "2", "--seed", "11", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
