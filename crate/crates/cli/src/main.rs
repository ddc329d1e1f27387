//! Batch front end: load documents, run one check or construction, print a
//! canonical report.
//!
//! Reports are JSON objects with three fields: `command`, `claims` and
//! `data`. Every claim carries its verdict and any witnesses; the exit
//! status is 0 when all claims hold, 1 when at least one fails, 2 for
//! input that does not assemble into lawful objects of the right kinds,
//! and 3 when an enumeration cap is exceeded. Reports are key-sorted and
//! byte-identical across runs on the same input.

use std::path::{Path, PathBuf};
use std::process;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use vgroups::doc::{
    action_maps, load_map, load_point, load_vgroup, validate_document, LoadedMap,
};
use vgroups::grp::GroupAction;
use vgroups::kan::{adjunction_check, extension_members, r_h, EnrichedFunctor};
use vgroups::points::{
    action_to_point, check_equivalence, compatible_structures, has_product_structure,
    is_strong_point, pullback_point, representability_check, SplitPoint,
};
use vgroups::report::CheckResult;
use vgroups::vgrp::{vaut, VGroup};
use vgroups::vstruct::StructureMatrix;
use vgroups::{Error, Result};

#[derive(Parser)]
#[command(name = "vgroups", version, about = "Checks and constructions for quantale-valued group structures")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Write the report to this path instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Verb {
    /// Check the laws of a single document of any kind.
    Validate {
        /// The document to check.
        input: Option<PathBuf>,
        /// Alias for the positional input.
        #[arg(long, conflicts_with = "input")]
        quantale: Option<PathBuf>,
    },
    /// Compute the automorphism object of a valued group.
    Vaut {
        /// The valued group.
        #[arg(long)]
        kernel: PathBuf,
    },
    /// Check that the three conditions for an action to define a
    /// product-structure point agree on an instance.
    Equivalence {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        action: PathBuf,
    },
    /// Enumerate the structures on a semidirect carrier that restrict to
    /// the kernel and project to the base.
    Structures {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        action: PathBuf,
        /// Bound on enumerated candidates.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
    /// Decide whether a point is strong along a base change.
    Strong {
        /// A point document; alternatively give --kernel, --base, --action.
        point: Option<PathBuf>,
        #[arg(long)]
        kernel: Option<PathBuf>,
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long)]
        action: Option<PathBuf>,
        /// Base-change document whose target is the point's base.
        #[arg(long)]
        h: PathBuf,
        /// Bound on structure candidates searched on the pullback carrier.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
    /// Count iso classes of product-structure points against
    /// homomorphisms into the automorphism object, with the pairing.
    ActionRep {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        base: PathBuf,
    },
    /// Compute the extension of a functor along a base change.
    Kan {
        /// Base-change document from the functor's base into the new base.
        #[arg(long)]
        h: PathBuf,
        /// The functor to extend.
        #[arg(long)]
        psi: PathBuf,
        /// Bound on carrier candidates.
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
    /// Compare the two hom-sets of the extension adjunction.
    AdjointCheck {
        #[arg(long)]
        h: PathBuf,
        /// The functor being extended, over the map's source.
        #[arg(long)]
        psi: PathBuf,
        /// The test functor over the map's target.
        #[arg(long)]
        phi: PathBuf,
        /// Bound on candidate transformation components.
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Compute the pullback of a point along a base change.
    Pullback {
        /// A point document; alternatively give --kernel, --base, --action.
        point: Option<PathBuf>,
        #[arg(long)]
        kernel: Option<PathBuf>,
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long)]
        action: Option<PathBuf>,
        #[arg(long)]
        h: PathBuf,
    },
}

#[derive(Serialize)]
struct Envelope {
    command: &'static str,
    claims: Vec<CheckResult>,
    data: Value,
}

fn main() {
    let cli = Cli::parse();
    let Format::Json = cli.format;
    let command = verb_name(&cli.verb);
    match run(&cli.verb) {
        Ok(envelope) => {
            let code = if envelope.claims.iter().all(|c| c.holds) {
                0
            } else {
                1
            };
            emit(&envelope, cli.out.as_deref());
            process::exit(code);
        }
        Err(e) => match severity(&e) {
            Severity::FailedClaim => {
                emit(&claim_from_error(command, e), cli.out.as_deref());
                process::exit(1);
            }
            Severity::BadInput => {
                eprintln!("vgroups: {e}");
                process::exit(2);
            }
            Severity::Cap => {
                eprintln!("vgroups: {e}");
                process::exit(3);
            }
        },
    }
}

fn verb_name(verb: &Verb) -> &'static str {
    match verb {
        Verb::Validate { .. } => "validate",
        Verb::Vaut { .. } => "vaut",
        Verb::Equivalence { .. } => "equivalence",
        Verb::Structures { .. } => "structures",
        Verb::Strong { .. } => "strong",
        Verb::ActionRep { .. } => "action-rep",
        Verb::Kan { .. } => "kan",
        Verb::AdjointCheck { .. } => "adjoint-check",
        Verb::Pullback { .. } => "pullback",
    }
}

enum Severity {
    FailedClaim,
    BadInput,
    Cap,
}

fn severity(e: &Error) -> Severity {
    match e {
        Error::CapExceeded { .. } => Severity::Cap,
        Error::Malformed(_)
        | Error::Parse(_)
        | Error::Io(_)
        | Error::UnknownBuiltin(_)
        | Error::BadSize(_)
        | Error::SizeMismatch { .. }
        | Error::MismatchedQuantale
        | Error::NonCartesian => Severity::BadInput,
        _ => Severity::FailedClaim,
    }
}

fn claim_from_error(command: &'static str, e: Error) -> Envelope {
    let (claim, law, witness) = match e {
        Error::PropertyFailure { claim, witness } => (claim, "property".to_string(), witness),
        Error::NotVHom(msg) => (
            "the given maps are structure-preserving homomorphisms".to_string(),
            "structure-preservation".to_string(),
            msg,
        ),
        Error::NotAPoint => (
            "the projection splits along the section".to_string(),
            "splitting".to_string(),
            e.to_string(),
        ),
        Error::NotProductPoint => (
            "the point carries the product structure".to_string(),
            "class-membership".to_string(),
            e.to_string(),
        ),
        other => (
            "the inputs assemble into lawful objects".to_string(),
            "laws".to_string(),
            other.to_string(),
        ),
    };
    let mut result = CheckResult::holds(claim);
    result.holds = false;
    result.witnesses = vec![vgroups::report::Violation::new(law, vec![witness])];
    Envelope {
        command,
        claims: vec![result],
        data: Value::Null,
    }
}

/// Serializes through `Value` so every object's keys come out sorted.
fn emit(envelope: &Envelope, out: Option<&Path>) {
    let value = serde_json::to_value(envelope).expect("report serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("report prints");
    text.push('\n');
    match out {
        None => print!("{text}"),
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("vgroups: cannot write {}: {e}", path.display());
                process::exit(2);
            }
        }
    }
}

fn run(verb: &Verb) -> Result<Envelope> {
    match verb {
        Verb::Validate { input, quantale } => {
            let path = input
                .as_ref()
                .or(quantale.as_ref())
                .ok_or_else(|| Error::Malformed("a document path is required".into()))?;
            let checked = validate_document(path)?;
            let claim = format!("the {} satisfies its laws", checked.kind);
            let result = if checked.report.is_valid() {
                CheckResult::holds(claim)
            } else {
                CheckResult::fails(claim, checked.report.violations)
            };
            Ok(Envelope {
                command: "validate",
                claims: vec![result],
                data: json!({ "kind": checked.kind }),
            })
        }
        Verb::Vaut { kernel } => {
            let x = load_vgroup(kernel)?;
            let va = vaut(&x.vgroup)?;
            let autos: Vec<Vec<&str>> = va
                .perms()
                .iter()
                .map(|p| p.iter().map(|&i| x.labels[i].as_str()).collect())
                .collect();
            Ok(Envelope {
                command: "vaut",
                claims: vec![CheckResult::holds(
                    "the automorphisms form a valued group",
                )],
                data: json!({
                    "size": va.size(),
                    "automorphisms": autos,
                    "structure": structure_labels(va.vgroup().structure()),
                }),
            })
        }
        Verb::Equivalence {
            kernel,
            base,
            action,
        } => {
            let (x, y, act) = load_action_instance(kernel, base, action)?;
            let report = check_equivalence(&x.vgroup, &y.vgroup, &act)?;
            let claim = CheckResult::holds(
                "the split-extension, twist and corestriction verdicts agree",
            );
            let claim = CheckResult {
                holds: report.consistent,
                ..claim
            };
            Ok(Envelope {
                command: "equivalence",
                claims: vec![claim],
                data: serde_json::to_value(&report)?,
            })
        }
        Verb::Structures {
            kernel,
            base,
            action,
            cap,
        } => {
            let (x, y, act) = load_action_instance(kernel, base, action)?;
            let list = compatible_structures(&x.vgroup, &y.vgroup, &act, *cap)?;
            let carrier = pair_labels(&x.labels, &y.labels);
            let matrices: Vec<Vec<Vec<&str>>> =
                list.iter().map(|s| matrix_labels(s)).collect();
            Ok(Envelope {
                command: "structures",
                claims: vec![CheckResult::holds(
                    "every compatible structure dominates the product structure",
                )],
                data: json!({
                    "carrier": carrier,
                    "count": list.len(),
                    "structures": matrices,
                }),
            })
        }
        Verb::Strong {
            point,
            kernel,
            base,
            action,
            h,
            cap,
        } => {
            let (p, _, _) = resolve_point(point, kernel, base, action)?;
            let m = base_change_into(&p, h)?;
            let strong = is_strong_point(&p, &m.source.vgroup, &m.map, *cap)?;
            let claim = "the point is strong along the given base change";
            let result = if strong {
                CheckResult::holds(claim)
            } else {
                CheckResult::fails(claim, vec![])
            };
            Ok(Envelope {
                command: "strong",
                claims: vec![result],
                data: json!({ "total": p.total().size(), "new_base": m.source.vgroup.size() }),
            })
        }
        Verb::ActionRep { kernel, base } => {
            let x = load_vgroup(kernel)?;
            let y = load_vgroup(base)?;
            let report = representability_check(&y.vgroup, &x.vgroup)?;
            let claim = CheckResult {
                holds: report.bijection,
                ..CheckResult::holds(
                    "iso classes correspond to homomorphisms into the automorphism object",
                )
            };
            Ok(Envelope {
                command: "action-rep",
                claims: vec![claim],
                data: json!({
                    "classes": report.left_count,
                    "homs": report.right_count,
                    "pairing": report.pairing,
                }),
            })
        }
        Verb::Kan { h, psi, cap } => {
            let m = load_map(h)?;
            let psi = load_functor_checked(psi, &m.source.vgroup, "source")?;
            let members = extension_members(&m.target.vgroup, &m.map, &psi.functor, *cap)?;
            let member_tables: Vec<Value> = members
                .iter()
                .map(|u| {
                    Value::Object(
                        m.target
                            .labels
                            .iter()
                            .zip(u.iter().map(|&z| psi.value_labels[z].clone()))
                            .map(|(y, z)| (y.clone(), Value::String(z)))
                            .collect(),
                    )
                })
                .collect();
            let claim = "the extension is a lawful enriched functor";
            match r_h(&m.target.vgroup, &m.map, &psi.functor, *cap) {
                Ok(rh) => {
                    let assignment: Value = Value::Object(
                        m.target
                            .labels
                            .iter()
                            .enumerate()
                            .map(|(y, l)| (l.clone(), json!(rh.map_of(y))))
                            .collect(),
                    );
                    Ok(Envelope {
                        command: "kan",
                        claims: vec![CheckResult::holds(claim)],
                        data: json!({
                            "assignment": assignment,
                            "members": member_tables,
                            "size": members.len(),
                            "structure": matrix_labels(rh.value().structure()),
                        }),
                    })
                }
                Err(Error::PropertyFailure { claim: c, witness }) => Ok(Envelope {
                    command: "kan",
                    claims: vec![CheckResult::fails(
                        claim,
                        vec![vgroups::report::Violation::new(c, vec![witness])],
                    )],
                    data: json!({ "members": member_tables, "size": members.len() }),
                }),
                Err(e) => Err(e),
            }
        }
        Verb::AdjointCheck { h, psi, phi, cap } => {
            let m = load_map(h)?;
            let psi = load_functor_checked(psi, &m.source.vgroup, "source")?;
            let phi = load_functor_checked(phi, &m.target.vgroup, "target")?;
            let report = adjunction_check(&m.map, &phi.functor, &psi.functor, *cap)?;
            let claims = vec![
                CheckResult {
                    holds: report.bijection,
                    ..CheckResult::holds("transposition is a bijection between the hom-sets")
                },
                CheckResult {
                    holds: report.triangle,
                    ..CheckResult::holds("evaluating each transpose at zero recovers the original")
                },
                CheckResult {
                    holds: report.transpose_unique,
                    ..CheckResult::holds("each transform factors uniquely through the extension")
                },
            ];
            Ok(Envelope {
                command: "adjoint-check",
                claims,
                data: json!({
                    "left_count": report.left_count,
                    "pairing": report.pairing,
                    "right_count": report.right_count,
                }),
            })
        }
        Verb::Pullback {
            point,
            kernel,
            base,
            action,
            h,
        } => {
            let (p, total_labels, _) = resolve_point(point, kernel, base, action)?;
            let m = base_change_into(&p, h)?;
            let pulled = pullback_point(&p, &m.source.vgroup, &m.map)?;
            let mut carrier = Vec::with_capacity(pulled.total().size());
            for (c, cl) in m.source.labels.iter().enumerate() {
                for (a, al) in total_labels.iter().enumerate() {
                    if m.map[c] == p.proj()[a] {
                        carrier.push(format!("({cl},{al})"));
                    }
                }
            }
            debug_assert_eq!(carrier.len(), pulled.total().size());
            Ok(Envelope {
                command: "pullback",
                claims: vec![],
                data: json!({
                    "carrier": carrier,
                    "in_product_class": has_product_structure(&pulled),
                    "kernel": pulled.kernel().size(),
                    "size": pulled.total().size(),
                    "structure": matrix_labels(pulled.total().structure()),
                }),
            })
        }
    }
}

struct LoadedFunctorChecked {
    functor: EnrichedFunctor,
    value_labels: Vec<String>,
}

fn load_functor_checked(
    path: &Path,
    expected_base: &VGroup,
    side: &str,
) -> Result<LoadedFunctorChecked> {
    let loaded = vgroups::doc::load_functor(path)?;
    if loaded.functor.domain() != expected_base {
        return Err(Error::Malformed(format!(
            "the functor's base does not match the map's {side}"
        )));
    }
    Ok(LoadedFunctorChecked {
        functor: loaded.functor,
        value_labels: loaded.value_labels,
    })
}

fn load_action_instance(
    kernel: &Path,
    base: &Path,
    action: &Path,
) -> Result<(
    vgroups::doc::LoadedVGroup,
    vgroups::doc::LoadedVGroup,
    GroupAction,
)> {
    let x = load_vgroup(kernel)?;
    let y = load_vgroup(base)?;
    let maps = action_maps(action, &y.labels, &x.labels)?;
    let act = GroupAction::new(y.vgroup.group().clone(), x.vgroup.group().clone(), maps)?;
    Ok((x, y, act))
}

/// A point given either as a document or as a kernel/base/action triple,
/// together with labels for its total and base carriers.
fn resolve_point(
    point: &Option<PathBuf>,
    kernel: &Option<PathBuf>,
    base: &Option<PathBuf>,
    action: &Option<PathBuf>,
) -> Result<(SplitPoint, Vec<String>, Vec<String>)> {
    if let Some(path) = point {
        let loaded = load_point(path)?;
        return Ok((loaded.point, loaded.total_labels, loaded.base_labels));
    }
    match (kernel, base, action) {
        (Some(k), Some(b), Some(a)) => {
            let (x, y, act) = load_action_instance(k, b, a)?;
            let p = action_to_point(&x.vgroup, &y.vgroup, &act)?;
            Ok((p, pair_labels(&x.labels, &y.labels), y.labels))
        }
        _ => Err(Error::Malformed(
            "give a point document or all of --kernel, --base, --action".into(),
        )),
    }
}

fn base_change_into(p: &SplitPoint, h: &Path) -> Result<LoadedMap> {
    let m = load_map(h)?;
    if m.target.vgroup != *p.base() {
        return Err(Error::Malformed(
            "the map's target does not match the point's base".into(),
        ));
    }
    Ok(m)
}

fn pair_labels(x: &[String], y: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for xl in x {
        for yl in y {
            out.push(format!("({xl},{yl})"));
        }
    }
    out
}

fn matrix_labels(s: &StructureMatrix) -> Vec<Vec<&str>> {
    let q = s.quantale();
    (0..s.size())
        .map(|i| (0..s.size()).map(|j| q.label(s.get(i, j))).collect())
        .collect()
}

fn structure_labels(s: &StructureMatrix) -> Value {
    json!(matrix_labels(s))
}
