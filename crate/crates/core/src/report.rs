//! Violation reports shared by the validators.
//!
//! A validator never panics on bad laws; it collects witnesses and lets the
//! caller decide. Witness entries are element labels, in the order the law
//! quantifies them.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: String,
    pub witness: Vec<String>,
}

impl Violation {
    pub fn new(law: impl Into<String>, witness: Vec<String>) -> Self {
        Violation {
            law: law.into(),
            witness,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, law: &str, witness: Vec<String>) {
        self.violations.push(Violation::new(law, witness));
    }

    /// First violation, if any, formatted for an error message.
    pub fn first_summary(&self) -> Option<String> {
        self.violations
            .first()
            .map(|v| format!("{} at ({})", v.law, v.witness.join(", ")))
    }
}

/// Outcome of checking a single closed claim.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub claim: String,
    pub holds: bool,
    pub witnesses: Vec<Violation>,
}

impl CheckResult {
    pub fn holds(claim: impl Into<String>) -> Self {
        CheckResult {
            claim: claim.into(),
            holds: true,
            witnesses: Vec::new(),
        }
    }

    pub fn fails(claim: impl Into<String>, witnesses: Vec<Violation>) -> Self {
        CheckResult {
            claim: claim.into(),
            holds: false,
            witnesses,
        }
    }
}

/// Verdicts for the three split-extension conditions on one action:
/// the product structure making the semidirect sum compatible, the paired
/// self-map of the product being structure-preserving, and the action
/// corestricting to the structure-preserving automorphism object.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub base_idempotent: bool,
    pub split_extension: bool,
    pub twist_vfunctor: bool,
    pub corestricts: bool,
    /// True when the verdicts agree as far as they are required to:
    /// the first two always, all three when the base structure is idempotent.
    pub consistent: bool,
}

/// Two finite hom-sets with an explicit matching between them.
#[derive(Debug, Clone, Serialize)]
pub struct BijectionReport {
    pub left_count: usize,
    pub right_count: usize,
    /// pairing[i] = j matches left element i with right element j.
    pub pairing: Vec<usize>,
    pub bijection: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdjunctionReport {
    pub left_count: usize,
    pub right_count: usize,
    /// Index into the right-hand homs for each left-hand hom, via transpose.
    pub pairing: Vec<usize>,
    pub bijection: bool,
    pub triangle: bool,
    pub transpose_unique: bool,
}
