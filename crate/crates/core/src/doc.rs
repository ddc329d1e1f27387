//! JSON documents for every object the library works with, with all tables
//! written in element labels rather than indices.
//!
//! Documents reference each other either inline or by a path relative to
//! the referencing file. A quantale reference may also be the name of a
//! built-in ("two", "diamond", "chain_meet_3", "chain_trunc_sum_4").
//! Loaders resolve labels to indices, hand the index tables to the module
//! constructors, and keep the labels around so reports can speak the same
//! vocabulary as the input files.
//!
//! Document kinds are recognized by their fields, so a file does not need
//! to announce what it is: a quantale has `tensor` and `unit`, a point has
//! `total` and `f`, a functor has `assignment`, a base-change map has
//! `map` and `source`, an action has `maps`, a valued group has `group`
//! and `structure`, a bare structure has `matrix`, and a bare group has
//! `elements` and `table`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grp::{validate_group_table, FiniteGroup, GroupAction};
use crate::kan::EnrichedFunctor;
use crate::points::{make_point, SplitPoint};
use crate::quantale::{builtin, validate_tables, Quantale};
use crate::report::ValidationReport;
use crate::vgrp::{check_vgroup, check_vhom, VGroup};
use crate::vstruct::StructureMatrix;

/// Either a path to another document or the document written in place.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DocRef<T> {
    Path(String),
    Inline(T),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantaleDoc {
    pub name: String,
    pub elements: Vec<String>,
    /// Pairs [lower, upper]; reflexive and transitive closure is implied.
    pub leq: Vec<[String; 2]>,
    pub tensor: Vec<Vec<String>>,
    pub unit: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDoc {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureDoc {
    pub quantale: DocRef<QuantaleDoc>,
    pub carrier: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VGroupDoc {
    pub quantale: DocRef<QuantaleDoc>,
    pub group: GroupDoc,
    /// Entry at (row, column) is the structure value from row to column,
    /// in the order of `group.elements`.
    pub structure: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointDoc {
    pub total: DocRef<VGroupDoc>,
    pub base: DocRef<VGroupDoc>,
    /// Projection, total label to base label.
    pub f: BTreeMap<String, String>,
    /// Section, base label to total label.
    pub s: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionDoc {
    /// The acting valued group; optional when the caller supplies it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actor: Option<DocRef<VGroupDoc>>,
    /// The valued group acted on; optional when the caller supplies it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<DocRef<VGroupDoc>>,
    /// Actor label to the permutation it induces, as the images of the
    /// target's elements in element order.
    pub maps: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapDoc {
    pub source: DocRef<VGroupDoc>,
    pub target: DocRef<VGroupDoc>,
    pub map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctorDoc {
    pub base: DocRef<VGroupDoc>,
    pub value: DocRef<VGroupDoc>,
    /// Base label to the permutation assigned to it, as the images of the
    /// value's elements in element order.
    pub assignment: BTreeMap<String, Vec<String>>,
}

/// A valued group together with the element labels of its input document.
#[derive(Debug, Clone)]
pub struct LoadedVGroup {
    pub vgroup: VGroup,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct LoadedPoint {
    pub point: SplitPoint,
    pub total_labels: Vec<String>,
    pub base_labels: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct LoadedMap {
    pub source: LoadedVGroup,
    pub target: LoadedVGroup,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct LoadedFunctor {
    pub functor: EnrichedFunctor,
    pub base_labels: Vec<String>,
    pub value_labels: Vec<String>,
}

fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn parent_dir(path: &Path) -> PathBuf {
    path.parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn index_in(labels: &[String], label: &str, what: &str) -> Result<usize> {
    labels
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| Error::Malformed(format!("unknown {what} `{label}`")))
}

fn check_distinct(labels: &[String], what: &str) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::Malformed(format!("duplicate {what} `{l}`")));
        }
    }
    Ok(())
}

fn builtin_name_parts(s: &str) -> Option<(&'static str, usize)> {
    match s {
        "two" => Some(("two", 2)),
        "diamond" => Some(("diamond", 4)),
        _ => {
            if let Some(n) = s.strip_prefix("chain_meet_") {
                n.parse().ok().map(|k| ("chain_meet", k))
            } else if let Some(n) = s.strip_prefix("chain_trunc_sum_") {
                n.parse().ok().map(|k| ("chain_trunc_sum", k))
            } else {
                None
            }
        }
    }
}

/// Index tables of a quantale document, before any law checking.
pub fn quantale_tables(doc: &QuantaleDoc) -> Result<(Vec<(usize, usize)>, Vec<Vec<usize>>, usize)> {
    check_distinct(&doc.elements, "element")?;
    let n = doc.elements.len();
    let mut pairs = Vec::with_capacity(doc.leq.len());
    for [lo, hi] in &doc.leq {
        pairs.push((
            index_in(&doc.elements, lo, "element")?,
            index_in(&doc.elements, hi, "element")?,
        ));
    }
    if doc.tensor.len() != n {
        return Err(Error::Malformed(format!(
            "tensor table has {} rows, expected {n}",
            doc.tensor.len()
        )));
    }
    let mut tensor = Vec::with_capacity(n);
    for row in &doc.tensor {
        if row.len() != n {
            return Err(Error::Malformed(format!(
                "tensor row has {} entries, expected {n}",
                row.len()
            )));
        }
        let indexed: Result<Vec<usize>> = row
            .iter()
            .map(|l| index_in(&doc.elements, l, "element"))
            .collect();
        tensor.push(indexed?);
    }
    let unit = index_in(&doc.elements, &doc.unit, "element")?;
    Ok((pairs, tensor, unit))
}

fn build_quantale(doc: &QuantaleDoc) -> Result<Arc<Quantale>> {
    let (pairs, tensor, unit) = quantale_tables(doc)?;
    Quantale::build(&doc.name, doc.elements.clone(), &pairs, tensor, unit)
}

fn resolve_quantale(r: &DocRef<QuantaleDoc>, dir: &Path) -> Result<Arc<Quantale>> {
    match r {
        DocRef::Inline(doc) => build_quantale(doc),
        DocRef::Path(s) => {
            if let Some((name, size)) = builtin_name_parts(s) {
                return builtin(name, size);
            }
            let path = dir.join(s);
            let doc: QuantaleDoc = serde_json::from_value(read_json(&path)?)?;
            build_quantale(&doc)
        }
    }
}

pub fn load_quantale(path: &Path) -> Result<Arc<Quantale>> {
    let doc: QuantaleDoc = serde_json::from_value(read_json(path)?)?;
    build_quantale(&doc)
}

fn group_table(doc: &GroupDoc) -> Result<Vec<Vec<usize>>> {
    check_distinct(&doc.elements, "group element")?;
    let n = doc.elements.len();
    if doc.table.len() != n {
        return Err(Error::Malformed(format!(
            "group table has {} rows, expected {n}",
            doc.table.len()
        )));
    }
    let mut table = Vec::with_capacity(n);
    for row in &doc.table {
        if row.len() != n {
            return Err(Error::Malformed(format!(
                "group table row has {} entries, expected {n}",
                row.len()
            )));
        }
        let indexed: Result<Vec<usize>> = row
            .iter()
            .map(|l| index_in(&doc.elements, l, "group element"))
            .collect();
        table.push(indexed?);
    }
    Ok(table)
}

fn structure_rows(matrix: &[Vec<String>], n: usize, q: &Arc<Quantale>) -> Result<Vec<Vec<usize>>> {
    if matrix.len() != n {
        return Err(Error::Malformed(format!(
            "structure has {} rows, expected {n}",
            matrix.len()
        )));
    }
    let mut rows = Vec::with_capacity(n);
    for row in matrix {
        if row.len() != n {
            return Err(Error::Malformed(format!(
                "structure row has {} entries, expected {n}",
                row.len()
            )));
        }
        let indexed: Result<Vec<usize>> = row
            .iter()
            .map(|l| {
                q.index_of(l)
                    .ok_or_else(|| Error::Malformed(format!("unknown quantale element `{l}`")))
            })
            .collect();
        rows.push(indexed?);
    }
    Ok(rows)
}

fn assemble_vgroup(doc: &VGroupDoc, dir: &Path) -> Result<LoadedVGroup> {
    let q = resolve_quantale(&doc.quantale, dir)?;
    let table = group_table(&doc.group)?;
    let group = FiniteGroup::new(table)?;
    let rows = structure_rows(&doc.structure, group.size(), &q)?;
    let structure = StructureMatrix::new(&q, rows)?;
    let vgroup = VGroup::new(group, structure)?;
    Ok(LoadedVGroup {
        vgroup,
        labels: doc.group.elements.clone(),
    })
}

fn resolve_vgroup(r: &DocRef<VGroupDoc>, dir: &Path) -> Result<LoadedVGroup> {
    match r {
        DocRef::Inline(doc) => assemble_vgroup(doc, dir),
        DocRef::Path(s) => {
            let path = dir.join(s);
            let doc: VGroupDoc = serde_json::from_value(read_json(&path)?)?;
            assemble_vgroup(&doc, &parent_dir(&path))
        }
    }
}

/// Loads a valued-group document and rejects any law violation in it.
pub fn load_vgroup(path: &Path) -> Result<LoadedVGroup> {
    let doc: VGroupDoc = serde_json::from_value(read_json(path)?)?;
    assemble_vgroup(&doc, &parent_dir(path))
}

fn label_map(
    entries: &BTreeMap<String, String>,
    from: &[String],
    to: &[String],
    what: &str,
) -> Result<Vec<usize>> {
    let mut map = Vec::with_capacity(from.len());
    for l in from {
        let image = entries
            .get(l)
            .ok_or_else(|| Error::Malformed(format!("{what} is missing `{l}`")))?;
        map.push(index_in(to, image, "label")?);
    }
    if entries.len() != from.len() {
        let stray = entries
            .keys()
            .find(|k| !from.contains(k))
            .expect("some key is not a domain label");
        return Err(Error::Malformed(format!("{what} names unknown `{stray}`")));
    }
    Ok(map)
}

fn permutation_table(
    entries: &BTreeMap<String, Vec<String>>,
    keys: &[String],
    values: &[String],
    what: &str,
) -> Result<Vec<Vec<usize>>> {
    let mut maps = Vec::with_capacity(keys.len());
    for l in keys {
        let images = entries
            .get(l)
            .ok_or_else(|| Error::Malformed(format!("{what} is missing `{l}`")))?;
        if images.len() != values.len() {
            return Err(Error::Malformed(format!(
                "{what} at `{l}` lists {} images, expected {}",
                images.len(),
                values.len()
            )));
        }
        let indexed: Result<Vec<usize>> = images
            .iter()
            .map(|v| index_in(values, v, "label"))
            .collect();
        maps.push(indexed?);
    }
    if entries.len() != keys.len() {
        let stray = entries
            .keys()
            .find(|k| !keys.contains(k))
            .expect("some key is not a domain label");
        return Err(Error::Malformed(format!("{what} names unknown `{stray}`")));
    }
    Ok(maps)
}

/// Loads a point document: both valued groups, the projection and the
/// section, assembled and validated as a split extension with its kernel.
pub fn load_point(path: &Path) -> Result<LoadedPoint> {
    let doc: PointDoc = serde_json::from_value(read_json(path)?)?;
    let dir = parent_dir(path);
    let total = resolve_vgroup(&doc.total, &dir)?;
    let base = resolve_vgroup(&doc.base, &dir)?;
    let f = label_map(&doc.f, &total.labels, &base.labels, "projection")?;
    let s = label_map(&doc.s, &base.labels, &total.labels, "section")?;
    let point = make_point(&total.vgroup, &base.vgroup, &f, &s)?;
    Ok(LoadedPoint {
        point,
        total_labels: total.labels,
        base_labels: base.labels,
    })
}

/// Reads the permutation table of an action document against the given
/// actor and target, ignoring the document's own references when present.
pub fn action_maps(
    path: &Path,
    actor_labels: &[String],
    target_labels: &[String],
) -> Result<Vec<Vec<usize>>> {
    let doc: ActionDoc = serde_json::from_value(read_json(path)?)?;
    permutation_table(&doc.maps, actor_labels, target_labels, "action")
}

/// Loads a base-change document: two valued groups and a map between their
/// carriers, required to be a structure-preserving homomorphism.
pub fn load_map(path: &Path) -> Result<LoadedMap> {
    let doc: MapDoc = serde_json::from_value(read_json(path)?)?;
    let dir = parent_dir(path);
    let source = resolve_vgroup(&doc.source, &dir)?;
    let target = resolve_vgroup(&doc.target, &dir)?;
    let map = label_map(&doc.map, &source.labels, &target.labels, "map")?;
    if !check_vhom(&map, &source.vgroup, &target.vgroup)? {
        return Err(Error::NotVHom(
            "map is not a structure-preserving homomorphism".into(),
        ));
    }
    Ok(LoadedMap {
        source,
        target,
        map,
    })
}

/// Loads a functor document: base, value and the assignment table.
pub fn load_functor(path: &Path) -> Result<LoadedFunctor> {
    let doc: FunctorDoc = serde_json::from_value(read_json(path)?)?;
    let dir = parent_dir(path);
    let base = resolve_vgroup(&doc.base, &dir)?;
    let value = resolve_vgroup(&doc.value, &dir)?;
    let maps = permutation_table(&doc.assignment, &base.labels, &value.labels, "assignment")?;
    let functor = EnrichedFunctor::new(base.vgroup, value.vgroup, maps)?;
    Ok(LoadedFunctor {
        functor,
        base_labels: base.labels,
        value_labels: value.labels,
    })
}

/// What a document turned out to describe, with the outcome of checking
/// the laws that apply to that kind of document.
#[derive(Debug, Clone)]
pub struct Validated {
    pub kind: &'static str,
    pub report: ValidationReport,
}

fn has_keys(v: &serde_json::Value, keys: &[&str]) -> bool {
    keys.iter().all(|k| v.get(k).is_some())
}

fn violation_from(e: Error, law: &str) -> ValidationReport {
    let mut report = ValidationReport::default();
    report.push(law, vec![e.to_string()]);
    report
}

/// Recognizes a document by its fields and runs the full law check for
/// that kind. Shape problems (unknown labels, missing fields, ragged
/// tables) are errors; law violations land in the returned report.
pub fn validate_document(path: &Path) -> Result<Validated> {
    let value = read_json(path)?;
    let dir = parent_dir(path);
    if has_keys(&value, &["tensor", "unit"]) {
        let doc: QuantaleDoc = serde_json::from_value(value)?;
        let (pairs, tensor, unit) = quantale_tables(&doc)?;
        let report = validate_tables(&doc.elements, &pairs, &tensor, unit)?;
        return Ok(Validated {
            kind: "quantale",
            report,
        });
    }
    if has_keys(&value, &["total", "f"]) {
        let doc: PointDoc = serde_json::from_value(value)?;
        let total = resolve_vgroup(&doc.total, &dir)?;
        let base = resolve_vgroup(&doc.base, &dir)?;
        let f = label_map(&doc.f, &total.labels, &base.labels, "projection")?;
        let s = label_map(&doc.s, &base.labels, &total.labels, "section")?;
        let mut report = ValidationReport::default();
        if !check_vhom(&f, &total.vgroup, &base.vgroup)? {
            report.push("projection", vec![]);
        }
        if !check_vhom(&s, &base.vgroup, &total.vgroup)? {
            report.push("section", vec![]);
        }
        for (b, &st) in s.iter().enumerate() {
            if f[st] != b {
                report.push("splitting", vec![base.labels[b].clone()]);
            }
        }
        return Ok(Validated {
            kind: "point",
            report,
        });
    }
    if has_keys(&value, &["assignment"]) {
        let doc: FunctorDoc = serde_json::from_value(value)?;
        let base = resolve_vgroup(&doc.base, &dir)?;
        let val = resolve_vgroup(&doc.value, &dir)?;
        let maps = permutation_table(&doc.assignment, &base.labels, &val.labels, "assignment")?;
        let report = match EnrichedFunctor::new(base.vgroup, val.vgroup, maps) {
            Ok(_) => ValidationReport::default(),
            Err(e @ (Error::Invalid(_) | Error::NotVHom(_))) => violation_from(e, "assignment"),
            Err(e) => return Err(e),
        };
        return Ok(Validated {
            kind: "functor",
            report,
        });
    }
    if has_keys(&value, &["map", "source"]) {
        let doc: MapDoc = serde_json::from_value(value)?;
        let source = resolve_vgroup(&doc.source, &dir)?;
        let target = resolve_vgroup(&doc.target, &dir)?;
        let map = label_map(&doc.map, &source.labels, &target.labels, "map")?;
        let mut report = ValidationReport::default();
        if !check_vhom(&map, &source.vgroup, &target.vgroup)? {
            report.push("structure-preserving homomorphism", vec![]);
        }
        return Ok(Validated {
            kind: "map",
            report,
        });
    }
    if has_keys(&value, &["maps"]) {
        let doc: ActionDoc = serde_json::from_value(value)?;
        let (actor, target) = match (&doc.actor, &doc.target) {
            (Some(a), Some(t)) => (resolve_vgroup(a, &dir)?, resolve_vgroup(t, &dir)?),
            _ => {
                return Err(Error::Malformed(
                    "standalone action document needs actor and target references".into(),
                ))
            }
        };
        let maps = permutation_table(&doc.maps, &actor.labels, &target.labels, "action")?;
        let report = match GroupAction::new(
            actor.vgroup.group().clone(),
            target.vgroup.group().clone(),
            maps,
        ) {
            Ok(_) => ValidationReport::default(),
            Err(e @ Error::Invalid(_)) => violation_from(e, "action"),
            Err(e) => return Err(e),
        };
        return Ok(Validated {
            kind: "action",
            report,
        });
    }
    if has_keys(&value, &["group", "structure"]) {
        let doc: VGroupDoc = serde_json::from_value(value)?;
        let q = resolve_quantale(&doc.quantale, &dir)?;
        let table = group_table(&doc.group)?;
        let group_report = validate_group_table(&table)?;
        if !group_report.is_valid() {
            return Ok(Validated {
                kind: "vgroup",
                report: group_report,
            });
        }
        let group = FiniteGroup::new(table)?;
        let rows = structure_rows(&doc.structure, group.size(), &q)?;
        let structure = StructureMatrix::new(&q, rows)?;
        return Ok(Validated {
            kind: "vgroup",
            report: check_vgroup(&group, &structure)?,
        });
    }
    if has_keys(&value, &["matrix", "carrier"]) {
        let doc: StructureDoc = serde_json::from_value(value)?;
        check_distinct(&doc.carrier, "carrier label")?;
        let q = resolve_quantale(&doc.quantale, &dir)?;
        let rows = structure_rows(&doc.matrix, doc.carrier.len(), &q)?;
        let structure = StructureMatrix::new(&q, rows)?;
        return Ok(Validated {
            kind: "structure",
            report: structure.validate(),
        });
    }
    if has_keys(&value, &["elements", "table"]) {
        let doc: GroupDoc = serde_json::from_value(value)?;
        let table = group_table(&doc)?;
        return Ok(Validated {
            kind: "group",
            report: validate_group_table(&table)?,
        });
    }
    Err(Error::Malformed(
        "document does not match any known kind".into(),
    ))
}
