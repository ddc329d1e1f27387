//! The command-line half of the acceptance gate: reports must be
//! canonical, so repeated runs of the same invocation are byte-identical.

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
            if a.ends_with(".json") && !a.starts_with('/') {
                fixture(a).to_string_lossy().into_owned()
            } else {
                (*a).to_string()
            }
        })
        .collect();
    Command::new(env!("CARGO_BIN_EXE_vgroups"))
        .args(&resolved)
        .output()
        .expect("the binary runs")
}

#[test]
fn criterion_9_reports_are_deterministic_across_runs() {
    let run = || -> Result<(), String> {
        let invocations: Vec<Vec<&str>> = vec![
            vec!["validate", "q_two.json"],
            vec!["validate", "z2_codisc.json"],
            vec!["validate", "q_bad.json"],
            vec!["vaut", "--kernel", "z3_disc.json"],
            vec![
                "equivalence",
                "--kernel",
                "z3_disc.json",
                "--base",
                "z2_codisc.json",
                "--action",
                "neg.json",
            ],
            vec![
                "structures",
                "--kernel",
                "z2_disc.json",
                "--base",
                "z2_disc.json",
                "--action",
                "triv2.json",
            ],
            vec![
                "strong",
                "--kernel",
                "z3_disc.json",
                "--base",
                "z2_disc.json",
                "--action",
                "neg.json",
                "--h",
                "h_id.json",
            ],
            vec!["action-rep", "--kernel", "z3_disc.json", "--base", "z2_disc.json"],
            vec!["kan", "--h", "h_id.json", "--psi", "psi_neg.json"],
            vec!["kan", "--h", "h_gap.json", "--psi", "psi_triv.json"],
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
            for _ in 0..2 {
                let again = vgroups(args);
                if first.status.code() != again.status.code() {
                    return Err(format!("exit code drifted for {args:?}"));
                }
                if first.stdout != again.stdout {
                    return Err(format!("stdout drifted for {args:?}"));
                }
                if first.stderr != again.stderr {
                    return Err(format!("stderr drifted for {args:?}"));
                }
            }
        }

        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let path = dir.path().join("report.json");
        let plain = vgroups(&["vaut", "--kernel", "z3_disc.json"]);
        let written = vgroups(&[
            "vaut",
            "--kernel",
            "z3_disc.json",
            "--out",
            path.to_str().expect("temp path is unicode"),
        ]);
        if written.status.code() != plain.status.code() {
            return Err("writing to a file changed the exit code".into());
        }
        let bytes = std::fs::read(&path).map_err(|e| e.to_string())?;
        if bytes != plain.stdout {
            return Err("the written report differs from the printed one".into());
        }
        Ok(())
    };
    let outcome = run();
    match &outcome {
        Ok(()) => println!("criterion 9: PASS"),
        Err(detail) => println!("criterion 9: FAIL {detail}"),
    }
    if let Err(detail) = outcome {
        panic!("criterion 9: {detail}");
    }
}
