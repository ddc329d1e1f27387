//! Quantale-valued structures on finite carriers.
//!
//! A `StructureMatrix` assigns an element of a fixed quantale to every
//! ordered pair of carrier indices. The two laws of interest are
//! reflexivity, the unit sits below every diagonal entry, and transitivity,
//! composing along a middle point never exceeds the direct entry. Carrier
//! elements appear in witnesses as their index rendered in decimal.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quantale::Quantale;
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureMatrix {
    quantale: Arc<Quantale>,
    n: usize,
    entries: Vec<usize>,
}

/// Canonical index of the pair (x, y) in a product carrier, x-major.
pub fn pair_index(x: usize, y: usize, y_size: usize) -> usize {
    x * y_size + y
}

/// Inverse of [`pair_index`].
pub fn unpair(idx: usize, y_size: usize) -> (usize, usize) {
    (idx / y_size, idx % y_size)
}

impl StructureMatrix {
    pub fn new(quantale: &Arc<Quantale>, rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed(format!(
                    "structure row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Self::from_flat(quantale, n, entries)
    }

    pub fn from_flat(quantale: &Arc<Quantale>, n: usize, entries: Vec<usize>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Malformed(format!(
                "structure has {} entries, expected {}",
                entries.len(),
                n * n
            )));
        }
        if let Some(&e) = entries.iter().find(|&&e| e >= quantale.size()) {
            return Err(Error::Malformed(format!("structure entry {e} out of range")));
        }
        Ok(StructureMatrix {
            quantale: Arc::clone(quantale),
            n,
            entries,
        })
    }

    /// Unit on the diagonal, bottom elsewhere.
    pub fn discrete(quantale: &Arc<Quantale>, n: usize) -> Self {
        let unit = quantale.unit();
        let bottom = quantale.bottom();
        let entries = (0..n * n)
            .map(|p| if p / n == p % n { unit } else { bottom })
            .collect();
        StructureMatrix {
            quantale: Arc::clone(quantale),
            n,
            entries,
        }
    }

    /// Top everywhere.
    pub fn codiscrete(quantale: &Arc<Quantale>, n: usize) -> Self {
        StructureMatrix {
            quantale: Arc::clone(quantale),
            n,
            entries: vec![quantale.top(); n * n],
        }
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.quantale
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.entries[x * self.n + y]
    }

    pub(crate) fn set(&mut self, x: usize, y: usize, v: usize) {
        debug_assert!(v < self.quantale.size());
        self.entries[x * self.n + y] = v;
    }

    pub fn same_quantale(&self, other: &StructureMatrix) -> bool {
        Arc::ptr_eq(&self.quantale, &other.quantale) || *self.quantale == *other.quantale
    }

    /// Every reflexivity and transitivity violation, in carrier index order.
    pub fn validate(&self) -> ValidationReport {
        let q = &self.quantale;
        let mut report = ValidationReport::default();
        for x in 0..self.n {
            if !q.leq(q.unit(), self.get(x, x)) {
                report.push("reflexivity", vec![x.to_string()]);
            }
        }
        for x in 0..self.n {
            for y in 0..self.n {
                for z in 0..self.n {
                    let composed = q.tensor(self.get(x, y), self.get(y, z));
                    if !q.leq(composed, self.get(x, z)) {
                        report.push(
                            "transitivity",
                            vec![x.to_string(), y.to_string(), z.to_string()],
                        );
                    }
                }
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| self.get(x, y) == self.get(y, x)))
    }

    /// Entrywise comparison in the quantale order; sizes must agree.
    pub fn leq_entrywise(&self, other: &StructureMatrix) -> Result<bool> {
        if !self.same_quantale(other) {
            return Err(Error::MismatchedQuantale);
        }
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(&u, &v)| self.quantale.leq(u, v)))
    }
}

/// First pair where `map` fails to be structure-preserving from `a` to `b`,
/// meaning a(x, x') must sit below b(map(x), map(x')).
pub fn vfunctor_violation(
    map: &[usize],
    a: &StructureMatrix,
    b: &StructureMatrix,
) -> Result<Option<(usize, usize)>> {
    if !a.same_quantale(b) {
        return Err(Error::MismatchedQuantale);
    }
    if map.len() != a.size() {
        return Err(Error::SizeMismatch {
            expected: a.size(),
            found: map.len(),
        });
    }
    if let Some(&i) = map.iter().find(|&&i| i >= b.size()) {
        return Err(Error::Malformed(format!("map image {i} out of range")));
    }
    let q = a.quantale();
    for x in 0..a.size() {
        for x2 in 0..a.size() {
            if !q.leq(a.get(x, x2), b.get(map[x], map[x2])) {
                return Ok(Some((x, x2)));
            }
        }
    }
    Ok(None)
}

pub fn check_vfunctor(map: &[usize], a: &StructureMatrix, b: &StructureMatrix) -> Result<bool> {
    vfunctor_violation(map, a, b).map(|v| v.is_none())
}

/// Structure on the product carrier: entry at ((x,y),(x',y')) is
/// a(x,x') ⊗ b(y,y'), with pairs indexed x-major via [`pair_index`].
pub fn tensor_structure(a: &StructureMatrix, b: &StructureMatrix) -> Result<StructureMatrix> {
    if !a.same_quantale(b) {
        return Err(Error::MismatchedQuantale);
    }
    let q = a.quantale();
    let n = a.size() * b.size();
    let mut out = StructureMatrix {
        quantale: Arc::clone(q),
        n,
        entries: vec![0; n * n],
    };
    for x in 0..a.size() {
        for y in 0..b.size() {
            for x2 in 0..a.size() {
                for y2 in 0..b.size() {
                    out.set(
                        pair_index(x, y, b.size()),
                        pair_index(x2, y2, b.size()),
                        q.tensor(a.get(x, x2), b.get(y, y2)),
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Structure on a list of maps into the carrier of `b`: the entry at (f, g)
/// is the meet over the shared domain of b(f(x), g(x)). An empty domain
/// yields the empty meet, which is the top element.
pub fn exponential_structure(maps: &[Vec<usize>], b: &StructureMatrix) -> Result<StructureMatrix> {
    let dom = maps.first().map(|m| m.len()).unwrap_or(0);
    for m in maps {
        if m.len() != dom {
            return Err(Error::SizeMismatch {
                expected: dom,
                found: m.len(),
            });
        }
        if let Some(&i) = m.iter().find(|&&i| i >= b.size()) {
            return Err(Error::Malformed(format!("map image {i} out of range")));
        }
    }
    let q = b.quantale();
    let k = maps.len();
    let mut out = StructureMatrix {
        quantale: Arc::clone(q),
        n: k,
        entries: vec![q.top(); k * k],
    };
    for (i, f) in maps.iter().enumerate() {
        for (j, g) in maps.iter().enumerate() {
            let value = q.meet_all((0..dom).map(|x| b.get(f[x], g[x])));
            out.set(i, j, value);
        }
    }
    Ok(out)
}

/// Structure on the product carrier with the entrywise meet instead of the
/// tensor: the entry at ((x,y),(x',y')) is a(x,x') ∧ b(y,y'). This is the
/// limit structure of a product or pullback.
pub fn meet_structure(a: &StructureMatrix, b: &StructureMatrix) -> Result<StructureMatrix> {
    if !a.same_quantale(b) {
        return Err(Error::MismatchedQuantale);
    }
    let q = a.quantale();
    let n = a.size() * b.size();
    let mut out = StructureMatrix {
        quantale: Arc::clone(q),
        n,
        entries: vec![0; n * n],
    };
    for x in 0..a.size() {
        for y in 0..b.size() {
            for x2 in 0..a.size() {
                for y2 in 0..b.size() {
                    out.set(
                        pair_index(x, y, b.size()),
                        pair_index(x2, y2, b.size()),
                        q.meet(a.get(x, x2), b.get(y, y2)),
                    );
                }
            }
        }
    }
    Ok(out)
}

/// All structures on an `n`-element carrier lying entrywise between the
/// optional bounds, in lexicographic order of their row-major entry vector.
/// Backtracks entry by entry, discarding a partial assignment as soon as a
/// fully-assigned reflexivity or transitivity instance fails. `cap` bounds
/// the number of completed candidates.
pub fn enumerate_structures(
    q: &Arc<Quantale>,
    n: usize,
    lower: Option<&StructureMatrix>,
    upper: Option<&StructureMatrix>,
    cap: usize,
) -> Result<Vec<StructureMatrix>> {
    if n == 0 {
        return Err(Error::BadSize(0));
    }
    for bound in [lower, upper].into_iter().flatten() {
        if bound.size() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: bound.size(),
            });
        }
        if !(Arc::ptr_eq(bound.quantale(), q) || **bound.quantale() == **q) {
            return Err(Error::MismatchedQuantale);
        }
    }

    let total = n * n;
    let mut entries = vec![0usize; total];
    let mut found = Vec::new();
    let mut stack: Vec<std::ops::Range<usize>> = Vec::with_capacity(total + 1);
    stack.push(0..q.size());

    // Entry `p` encodes the pair (p / n, p % n); entries below the current
    // depth are assigned. A candidate value must respect the bounds, keep the
    // diagonal reflexive and keep every transitivity instance whose three
    // entries are now all known.
    let admissible = |entries: &[usize], p: usize, v: usize| -> bool {
        let (i, j) = (p / n, p % n);
        if let Some(lo) = lower {
            if !q.leq(lo.get(i, j), v) {
                return false;
            }
        }
        if let Some(hi) = upper {
            if !q.leq(v, hi.get(i, j)) {
                return false;
            }
        }
        if i == j && !q.leq(q.unit(), v) {
            return false;
        }
        let at = |x: usize, y: usize| -> Option<usize> {
            let pos = x * n + y;
            if pos < p {
                Some(entries[pos])
            } else if pos == p {
                Some(v)
            } else {
                None
            }
        };
        for z in 0..n {
            // (i, j) as the first leg, the middle leg, and the direct entry.
            if let (Some(b), Some(c)) = (at(j, z), at(i, z)) {
                if !q.leq(q.tensor(v, b), c) {
                    return false;
                }
            }
            if let (Some(a), Some(c)) = (at(z, i), at(z, j)) {
                if !q.leq(q.tensor(a, v), c) {
                    return false;
                }
            }
            if let (Some(a), Some(b)) = (at(i, z), at(z, j)) {
                if !q.leq(q.tensor(a, b), v) {
                    return false;
                }
            }
        }
        true
    };

    while !stack.is_empty() {
        let depth = stack.len() - 1;
        match stack.last_mut().unwrap().next() {
            None => {
                stack.pop();
            }
            Some(v) => {
                if !admissible(&entries, depth, v) {
                    continue;
                }
                entries[depth] = v;
                if depth + 1 == total {
                    if found.len() >= cap {
                        return Err(Error::CapExceeded {
                            cap,
                            during: "structure enumeration".into(),
                        });
                    }
                    found.push(StructureMatrix {
                        quantale: Arc::clone(q),
                        n,
                        entries: entries.clone(),
                    });
                } else {
                    stack.push(0..q.size());
                }
            }
        }
    }
    Ok(found)
}
