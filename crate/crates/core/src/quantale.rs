//! Finite commutative quantales: a complete lattice given by its order
//! relation plus a commutative monoid tensor that preserves joins.
//!
//! The order is supplied as a relation on element indices and closed
//! transitively on construction. Join and meet tables are derived and cached;
//! a missing join or meet is a validation failure, not a panic. Validation
//! walks every law over all tuples and reports the lexicographically first
//! witness per violated law.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::ValidationReport;

const NO_ENTRY: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct Quantale {
    name: String,
    labels: Vec<String>,
    n: usize,
    /// Row-major: leq[u * n + v] holds when u is below v.
    leq: Vec<bool>,
    tensor: Vec<usize>,
    unit: usize,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
    frame_distributive: bool,
}

impl PartialEq for Quantale {
    fn eq(&self, other: &Self) -> bool {
        // The name is metadata; two quantales are the same when their tables are.
        self.labels == other.labels
            && self.leq == other.leq
            && self.tensor == other.tensor
            && self.unit == other.unit
    }
}

impl Eq for Quantale {}

impl Quantale {
    /// Builds and validates a quantale from raw tables. `leq_pairs` lists
    /// (lower, upper) index pairs; reflexivity and transitivity are added
    /// here. Order, lattice and monoid law violations are fatal. Failure of
    /// the join-over-meet distributivity is recorded on the instance instead
    /// of rejecting it, since no downstream check depends on it.
    pub fn build(
        name: &str,
        labels: Vec<String>,
        leq_pairs: &[(usize, usize)],
        tensor: Vec<Vec<usize>>,
        unit: usize,
    ) -> Result<Arc<Quantale>> {
        let (tables, report) = run_validation(&labels, leq_pairs, &tensor, unit)?;
        let hard: Vec<_> = report
            .violations
            .iter()
            .filter(|v| v.law != "join-meet-distributive")
            .collect();
        if let Some(v) = hard.first() {
            return Err(Error::Invalid(format!(
                "quantale `{}` fails {} at ({})",
                name,
                v.law,
                v.witness.join(", ")
            )));
        }
        let frame_distributive = report.is_valid();
        Ok(Arc::new(Quantale {
            name: name.to_string(),
            labels,
            n: tables.n,
            leq: tables.leq,
            tensor: tables.tensor,
            unit,
            join: tables.join,
            meet: tables.meet,
            bottom: tables.bottom,
            top: tables.top,
            frame_distributive,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, u: usize, v: usize) -> bool {
        self.leq[u * self.n + v]
    }

    pub fn tensor(&self, u: usize, v: usize) -> usize {
        self.tensor[u * self.n + v]
    }

    pub fn join(&self, u: usize, v: usize) -> usize {
        self.join[u * self.n + v]
    }

    pub fn meet(&self, u: usize, v: usize) -> usize {
        self.meet[u * self.n + v]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Meet of a sequence of elements; the empty meet is the top element.
    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// True when join-over-meet distributivity held at build time.
    pub fn frame_distributive(&self) -> bool {
        self.frame_distributive
    }

    pub fn tensor_idempotent(&self) -> bool {
        (0..self.n).all(|u| self.tensor(u, u) == u)
    }

    /// Re-runs the validator on the stored tables.
    pub fn validation_report(&self) -> ValidationReport {
        let pairs = self.leq_pairs();
        let tensor_rows: Vec<Vec<usize>> = (0..self.n)
            .map(|u| (0..self.n).map(|v| self.tensor(u, v)).collect())
            .collect();
        run_validation(&self.labels, &pairs, &tensor_rows, self.unit)
            .expect("stored tables are shape-correct")
            .1
    }

    fn leq_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if self.leq(u, v) {
                    pairs.push((u, v));
                }
            }
        }
        pairs
    }
}

/// Tensor agrees with binary meet and the unit is the top element.
pub fn is_cartesian(q: &Quantale) -> bool {
    if q.unit() != q.top() {
        return false;
    }
    (0..q.size()).all(|u| (0..q.size()).all(|v| q.tensor(u, v) == q.meet(u, v)))
}

/// The unit is the top element.
pub fn is_integral(q: &Quantale) -> bool {
    q.unit() == q.top()
}

/// If the tensor is idempotent and the unit is the top element, the tensor
/// must coincide with binary meet. Returns the check outcome with any
/// counterexample pair; a quantale that misses the hypotheses passes
/// vacuously.
pub fn lemma_idpt_check(q: &Quantale) -> crate::report::CheckResult {
    let claim = "idempotent tensor with top unit forces tensor = meet";
    if !(q.tensor_idempotent() && is_integral(q)) {
        return crate::report::CheckResult::holds(claim);
    }
    for u in 0..q.size() {
        for v in 0..q.size() {
            if q.tensor(u, v) != q.meet(u, v) {
                return crate::report::CheckResult::fails(
                    claim,
                    vec![crate::report::Violation::new(
                        "tensor-meet-mismatch",
                        vec![q.label(u).to_string(), q.label(v).to_string()],
                    )],
                );
            }
        }
    }
    crate::report::CheckResult::holds(claim)
}

/// The stock quantales used throughout the test suites.
///
/// * `two`: the two-element lattice with tensor = meet (size must be 2)
/// * `chain_meet`: a k-chain with tensor = min and unit = top
/// * `chain_trunc_sum`: a k-chain of levels 0..k-1 ordered downward, so that
///   level 0 is top and unit, with tensor = level sum truncated at the bottom
/// * `diamond`: bottom, two incomparable middles, top, tensor = meet (size 4)
pub fn builtin(name: &str, size: usize) -> Result<Arc<Quantale>> {
    if size < 1 {
        return Err(Error::BadSize(size));
    }
    match name {
        "two" => {
            if size != 2 {
                return Err(Error::BadSize(size));
            }
            Quantale::build(
                "two",
                vec!["bot".into(), "top".into()],
                &[(0, 1)],
                vec![vec![0, 0], vec![0, 1]],
                1,
            )
        }
        "chain_meet" => {
            let labels: Vec<String> = (0..size).map(|i| i.to_string()).collect();
            let pairs: Vec<(usize, usize)> = (0..size.saturating_sub(1)).map(|i| (i, i + 1)).collect();
            let tensor: Vec<Vec<usize>> = (0..size)
                .map(|u| (0..size).map(|v| u.min(v)).collect())
                .collect();
            Quantale::build(&format!("chain_meet_{size}"), labels, &pairs, tensor, size - 1)
        }
        "chain_trunc_sum" => {
            // Index i carries level i; larger levels sit lower in the order.
            let labels: Vec<String> = (0..size).map(|i| i.to_string()).collect();
            let pairs: Vec<(usize, usize)> = (0..size.saturating_sub(1)).map(|i| (i + 1, i)).collect();
            let tensor: Vec<Vec<usize>> = (0..size)
                .map(|u| (0..size).map(|v| (u + v).min(size - 1)).collect())
                .collect();
            Quantale::build(&format!("chain_trunc_sum_{size}"), labels, &pairs, tensor, 0)
        }
        "diamond" => {
            if size != 4 {
                return Err(Error::BadSize(size));
            }
            let meet = |u: usize, v: usize| -> usize {
                if u == v {
                    u
                } else if u == 3 {
                    v
                } else if v == 3 {
                    u
                } else {
                    0
                }
            };
            let tensor: Vec<Vec<usize>> = (0..4).map(|u| (0..4).map(|v| meet(u, v)).collect()).collect();
            Quantale::build(
                "diamond",
                vec!["bot".into(), "l".into(), "r".into(), "top".into()],
                &[(0, 1), (0, 2), (1, 3), (2, 3)],
                tensor,
                3,
            )
        }
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// Validates raw tables without constructing anything, reporting one minimal
/// witness per violated law. Shape problems are errors, law failures are not.
pub fn validate_tables(
    labels: &[String],
    leq_pairs: &[(usize, usize)],
    tensor: &[Vec<usize>],
    unit: usize,
) -> Result<ValidationReport> {
    run_validation(labels, leq_pairs, tensor, unit).map(|(_, report)| report)
}

/// All quantale structures on the lattice described by `labels` and
/// `leq_pairs`: every choice of unit and commutative tensor that passes the
/// full validator, in ascending (unit, table) order. The lattice itself must
/// be well formed or an error is returned.
pub fn enumerate_quantales(labels: &[String], leq_pairs: &[(usize, usize)]) -> Result<Vec<Arc<Quantale>>> {
    let n = labels.len();
    if n == 0 {
        return Err(Error::Malformed("empty element list".into()));
    }
    // Check the order alone first by pairing it with a throwaway tensor.
    let trivial: Vec<Vec<usize>> = vec![vec![0; n]; n];
    let (tables, order_report) = run_validation(labels, leq_pairs, &trivial, 0)?;
    for v in &order_report.violations {
        if matches!(
            v.law.as_str(),
            "leq-antisymmetric" | "join-exists" | "meet-exists" | "bottom-exists" | "top-exists"
        ) {
            return Err(Error::Invalid(format!(
                "not a lattice: {} at ({})",
                v.law,
                v.witness.join(", ")
            )));
        }
    }
    let bottom = tables.bottom;

    let mut found = Vec::new();
    for unit in 0..n {
        // Entries with the unit or bottom are forced; the rest are free,
        // symmetric and enumerated in ascending order.
        let free: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != unit && v != unit && u != bottom && v != bottom)
            .collect();
        let mut values = vec![0usize; free.len()];
        loop {
            let mut tensor = vec![vec![0usize; n]; n];
            for u in 0..n {
                tensor[unit][u] = u;
                tensor[u][unit] = u;
                tensor[bottom][u] = bottom;
                tensor[u][bottom] = bottom;
            }
            for (slot, &(u, v)) in free.iter().enumerate() {
                tensor[u][v] = values[slot];
                tensor[v][u] = values[slot];
            }
            if let Ok(q) = Quantale::build(
                &format!("enum_{}_{}", labels.len(), found.len()),
                labels.to_vec(),
                leq_pairs,
                tensor,
                unit,
            ) {
                found.push(q);
            }
            // Advance the odometer.
            let mut i = free.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                values[i] += 1;
                if values[i] < n {
                    break;
                }
                values[i] = 0;
            }
            if free.is_empty() || (i == 0 && values[0] == 0 && values.iter().all(|&v| v == 0)) {
                break;
            }
        }
    }
    Ok(found)
}

struct DerivedTables {
    n: usize,
    leq: Vec<bool>,
    tensor: Vec<usize>,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

fn run_validation(
    labels: &[String],
    leq_pairs: &[(usize, usize)],
    tensor: &[Vec<usize>],
    unit: usize,
) -> Result<(DerivedTables, ValidationReport)> {
    let n = labels.len();
    if n == 0 {
        return Err(Error::Malformed("empty element list".into()));
    }
    if unit >= n {
        return Err(Error::Malformed(format!("unit index {unit} out of range")));
    }
    if tensor.len() != n {
        return Err(Error::Malformed(format!(
            "tensor table has {} rows, expected {n}",
            tensor.len()
        )));
    }
    for (i, row) in tensor.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Malformed(format!(
                "tensor row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for &e in row {
            if e >= n {
                return Err(Error::Malformed(format!("tensor entry {e} out of range")));
            }
        }
    }
    for &(u, v) in leq_pairs {
        if u >= n || v >= n {
            return Err(Error::Malformed(format!("order pair ({u}, {v}) out of range")));
        }
    }

    let mut leq = vec![false; n * n];
    for u in 0..n {
        leq[u * n + u] = true;
    }
    for &(u, v) in leq_pairs {
        leq[u * n + v] = true;
    }
    // Transitive closure.
    for k in 0..n {
        for u in 0..n {
            if leq[u * n + k] {
                for v in 0..n {
                    if leq[k * n + v] {
                        leq[u * n + v] = true;
                    }
                }
            }
        }
    }

    let mut report = ValidationReport::default();
    let le = |u: usize, v: usize| leq[u * n + v];
    let name = |u: usize| labels[u].to_string();

    'anti: for u in 0..n {
        for v in 0..n {
            if u != v && le(u, v) && le(v, u) {
                report.push("leq-antisymmetric", vec![name(u), name(v)]);
                break 'anti;
            }
        }
    }

    // Joins and meets, recording the first missing pair of each kind.
    let mut join = vec![NO_ENTRY; n * n];
    let mut meet = vec![NO_ENTRY; n * n];
    let mut join_missing = None;
    let mut meet_missing = None;
    for u in 0..n {
        for v in 0..n {
            let ubs: Vec<usize> = (0..n).filter(|&w| le(u, w) && le(v, w)).collect();
            if let Some(&j) = ubs.iter().find(|&&w| ubs.iter().all(|&x| le(w, x))) {
                join[u * n + v] = j;
            } else if join_missing.is_none() {
                join_missing = Some((u, v));
            }
            let lbs: Vec<usize> = (0..n).filter(|&w| le(w, u) && le(w, v)).collect();
            if let Some(&m) = lbs.iter().find(|&&w| lbs.iter().all(|&x| le(x, w))) {
                meet[u * n + v] = m;
            } else if meet_missing.is_none() {
                meet_missing = Some((u, v));
            }
        }
    }
    if let Some((u, v)) = join_missing {
        report.push("join-exists", vec![name(u), name(v)]);
    }
    if let Some((u, v)) = meet_missing {
        report.push("meet-exists", vec![name(u), name(v)]);
    }

    let bottom = (0..n).find(|&b| (0..n).all(|u| le(b, u)));
    let top = (0..n).find(|&t| (0..n).all(|u| le(u, t)));
    if bottom.is_none() {
        report.push("bottom-exists", vec![]);
    }
    if top.is_none() {
        report.push("top-exists", vec![]);
    }

    let t = |u: usize, v: usize| tensor[u][v];

    if let Some(u) = (0..n).find(|&u| t(unit, u) != u || t(u, unit) != u) {
        report.push("tensor-unit", vec![name(u)]);
    }
    'comm: for u in 0..n {
        for v in 0..n {
            if t(u, v) != t(v, u) {
                report.push("tensor-commutative", vec![name(u), name(v)]);
                break 'comm;
            }
        }
    }
    'assoc: for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                if t(t(u, v), w) != t(u, t(v, w)) {
                    report.push("tensor-associative", vec![name(u), name(v), name(w)]);
                    break 'assoc;
                }
            }
        }
    }
    if let Some(b) = bottom {
        if let Some(u) = (0..n).find(|&u| t(u, b) != b) {
            report.push("tensor-bottom", vec![name(u)]);
        }
    }
    'dist: for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                let vw = join[v * n + w];
                if vw == NO_ENTRY {
                    continue;
                }
                let rhs_parts = join[t(u, v) * n + t(u, w)];
                if rhs_parts == NO_ENTRY {
                    continue;
                }
                if t(u, vw) != rhs_parts {
                    report.push("tensor-join", vec![name(u), name(v), name(w)]);
                    break 'dist;
                }
            }
        }
    }
    'mono: for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                if le(v, w) && !le(t(u, v), t(u, w)) {
                    report.push("tensor-monotone", vec![name(u), name(v), name(w)]);
                    break 'mono;
                }
            }
        }
    }
    'frame: for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                let vw = meet[v * n + w];
                if vw == NO_ENTRY || join[u * n + vw] == NO_ENTRY {
                    continue;
                }
                let uv = join[u * n + v];
                let uw = join[u * n + w];
                if uv == NO_ENTRY || uw == NO_ENTRY || meet[uv * n + uw] == NO_ENTRY {
                    continue;
                }
                if join[u * n + vw] != meet[uv * n + uw] {
                    report.push("join-meet-distributive", vec![name(u), name(v), name(w)]);
                    break 'frame;
                }
            }
        }
    }

    let flat_tensor: Vec<usize> = tensor.iter().flat_map(|row| row.iter().copied()).collect();
    Ok((
        DerivedTables {
            n,
            leq,
            tensor: flat_tensor,
            join,
            meet,
            bottom: bottom.unwrap_or(0),
            top: top.unwrap_or(0),
        },
        report,
    ))
}
