//! End-to-end runs of the binary against the fixture documents, checking
//! exit codes and report contents.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn vgroups(args: &[&str]) -> Output {
    let resolved: Vec<String> = args
        .iter()
        .map(|a| {
            if a.ends_with(".json") {
                fixture(a).to_string_lossy().into_owned()
            } else {
                (*a).to_string()
            }
        })
        .collect();
    Command::new(env!("CARGO_BIN_EXE_vgroups"))
        .args(&resolved)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn validate_accepts_the_two_chain() {
    let out = vgroups(&["validate", "q_two.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["command"], "validate");
    assert_eq!(r["data"]["kind"], "quantale");
    assert_eq!(r["claims"][0]["holds"], true);
    assert_eq!(r["claims"][0]["witnesses"], serde_json::json!([]));
}

#[test]
fn validate_flags_a_tensor_that_breaks_the_laws() {
    let out = vgroups(&["validate", "q_bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["claims"][0]["holds"], false);
    assert!(!r["claims"][0]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn unknown_labels_are_rejected_without_a_report() {
    let out = vgroups(&["validate", "bad_label.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_verbs_are_rejected_before_any_file_access() {
    let out = vgroups(&["frobnicate", "q_two.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn equivalence_holds_with_every_condition_false_over_the_codiscrete_base() {
    let out = vgroups(&[
        "equivalence",
        "--kernel",
        "z3_disc.json",
        "--base",
        "z2_codisc.json",
        "--action",
        "neg.json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["claims"][0]["holds"], true);
    assert_eq!(r["data"]["split_extension"], false);
    assert_eq!(r["data"]["twist_vfunctor"], false);
    assert_eq!(r["data"]["corestricts"], false);
    assert_eq!(r["data"]["base_idempotent"], true);
}

#[test]
fn action_rep_counts_classes_and_homs_on_the_discrete_pair() {
    let out = vgroups(&["action-rep", "--kernel", "z3_disc.json", "--base", "z2_disc.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["data"]["classes"], 2);
    assert_eq!(r["data"]["homs"], 2);
    assert_eq!(r["claims"][0]["holds"], true);
}

#[test]
fn vaut_of_the_discrete_three_cycle() {
    let out = vgroups(&["vaut", "--kernel", "z3_disc.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["data"]["size"], 2);
    let autos = r["data"]["automorphisms"].as_array().unwrap();
    assert!(autos.contains(&serde_json::json!(["0", "2", "1"])));
}

#[test]
fn compatible_structures_collapse_on_discrete_ends() {
    let out = vgroups(&[
        "structures",
        "--kernel",
        "z2_disc.json",
        "--base",
        "z2_disc.json",
        "--action",
        "triv2.json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["data"]["count"], 1);
    assert_eq!(
        r["data"]["carrier"],
        serde_json::json!(["(0,0)", "(0,1)", "(1,0)", "(1,1)"])
    );
}

#[test]
fn the_semidirect_point_is_strong_along_the_identity() {
    let out = vgroups(&[
        "strong",
        "--kernel",
        "z3_disc.json",
        "--base",
        "z2_disc.json",
        "--action",
        "neg.json",
        "--h",
        "h_id.json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["claims"][0]["holds"], true);
}

#[test]
fn pullback_along_the_identity_stays_in_the_product_class() {
    let out = vgroups(&[
        "pullback",
        "--kernel",
        "z3_disc.json",
        "--base",
        "z2_disc.json",
        "--action",
        "neg.json",
        "--h",
        "h_id.json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["data"]["size"], 6);
    assert_eq!(r["data"]["kernel"], 3);
    assert_eq!(r["data"]["in_product_class"], true);
    assert_eq!(r["claims"], serde_json::json!([]));
}

#[test]
fn extension_along_the_identity_has_one_member_per_value_element() {
    let out = vgroups(&["kan", "--h", "h_id.json", "--psi", "psi_neg.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["data"]["size"], 3);
    assert_eq!(r["claims"][0]["holds"], true);
    let members = r["data"]["members"].as_array().unwrap();
    assert!(members.contains(&serde_json::json!({"0": "1", "1": "2"})));
}

#[test]
fn extension_into_a_codiscrete_base_reports_the_failed_enrichment() {
    let out = vgroups(&["kan", "--h", "h_gap.json", "--psi", "psi_triv.json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["claims"][0]["holds"], false);
    assert_eq!(r["data"]["size"], 4);
}

#[test]
fn adjoint_check_on_the_cofree_and_identity_fixtures() {
    let out = vgroups(&[
        "adjoint-check",
        "--h",
        "h_into.json",
        "--psi",
        "psi_triv.json",
        "--phi",
        "phi_triv.json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["data"]["left_count"], 2);
    assert_eq!(r["data"]["right_count"], 2);
    assert!(r["claims"].as_array().unwrap().iter().all(|c| c["holds"] == true));

    let out = vgroups(&[
        "adjoint-check",
        "--h",
        "h_id.json",
        "--psi",
        "psi_neg.json",
        "--phi",
        "psi_neg.json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["data"]["left_count"], 3);
    assert_eq!(r["data"]["right_count"], 3);
}

#[test]
fn caps_stop_enumeration_with_a_distinct_exit_code() {
    let out = vgroups(&["kan", "--h", "h_id.json", "--psi", "psi_neg.json", "--cap", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn mismatched_functor_and_map_are_bad_input() {
    let out = vgroups(&["kan", "--h", "h_into.json", "--psi", "psi_neg.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let out = vgroups(&[
        "validate",
        "q_two.json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let r: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["command"], "validate");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let invocations: Vec<Vec<&str>> = vec![
        vec!["validate", "q_two.json"],
        vec![
            "equivalence",
            "--kernel",
            "z3_disc.json",
            "--base",
            "z2_codisc.json",
            "--action",
            "neg.json",
        ],
        vec!["action-rep", "--kernel", "z3_disc.json", "--base", "z2_disc.json"],
        vec!["vaut", "--kernel", "z3_disc.json"],
        vec!["kan", "--h", "h_id.json", "--psi", "psi_neg.json"],
        vec![
            "adjoint-check",
            "--h",
            "h_into.json",
            "--psi",
            "psi_triv.json",
            "--phi",
            "phi_triv.json",
        ],
        vec![
            "pullback",
            "--kernel",
            "z3_disc.json",
            "--base",
            "z2_disc.json",
            "--action",
            "neg.json",
            "--h",
            "h_id.json",
        ],
    ];
    for args in &invocations {
        let first = vgroups(args);
        let second = vgroups(args);
        assert_eq!(first.status.code(), second.status.code(), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert!(!first.stdout.is_empty(), "{args:?}");
    }
}
