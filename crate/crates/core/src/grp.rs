//! Finite groups as Cayley tables, written additively; the groups are not
//! assumed abelian. Homomorphism and automorphism enumeration is by brute
//! force, which is the point: results here serve as oracles for everything
//! built on top.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::vstruct::pair_index;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    size: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from its operation table, rejecting tables that fail
    /// any group law.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let report = validate_group_table(&table)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::Invalid(format!(
                "not a group: {} at ({})",
                v.law,
                v.witness.join(", ")
            )));
        }
        let n = table.len();
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| flat[e * n + x] == x && flat[x * n + e] == x))
            .expect("validated");
        let inverse = (0..n)
            .map(|x| (0..n).find(|&y| flat[x * n + y] == identity).expect("validated"))
            .collect();
        Ok(FiniteGroup {
            size: n,
            table: flat,
            identity,
            inverse,
        })
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        FiniteGroup {
            size: n,
            table: (0..n).flat_map(|x| (0..n).map(move |y| (x + y) % n)).collect(),
            identity: 0,
            inverse: (0..n).map(|x| (n - x) % n).collect(),
        }
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn neg(&self, x: usize) -> usize {
        self.inverse[x]
    }

    /// x + y - x.
    pub fn conjugate(&self, x: usize, y: usize) -> usize {
        self.add(self.add(x, y), self.neg(x))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|x| (0..self.size).all(|y| self.add(x, y) == self.add(y, x)))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// The subgroup on the given elements, re-indexed densely in the order
    /// given. Fails when the subset is not closed under the operation and
    /// inverses or misses the identity.
    pub fn induced_subgroup(&self, elements: &[usize]) -> Result<FiniteGroup> {
        let position = |a: usize| elements.iter().position(|&e| e == a);
        if position(self.identity).is_none() {
            return Err(Error::Invalid("subset misses the identity".into()));
        }
        let mut table = vec![vec![0usize; elements.len()]; elements.len()];
        for (i, &x) in elements.iter().enumerate() {
            for (j, &y) in elements.iter().enumerate() {
                table[i][j] = position(self.add(x, y)).ok_or_else(|| {
                    Error::Invalid(format!("subset not closed at ({x}, {y})"))
                })?;
            }
        }
        FiniteGroup::new(table)
    }

    /// Conjugation orbits, each listed ascending, ordered by least member.
    pub fn conjugacy_class_of(&self, x: usize) -> Vec<usize> {
        let mut class: Vec<usize> = self.elements().map(|g| self.conjugate(g, x)).collect();
        class.sort_unstable();
        class.dedup();
        class
    }

    /// All subgroups as ascending element lists, ordered by size then
    /// lexicographically.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.size;
        let mut out = Vec::new();
        for mask in 0u64..(1 << n) {
            if mask & (1 << self.identity) == 0 {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|&x| mask & (1 << x) != 0).collect();
            let closed = members.iter().all(|&x| {
                mask & (1 << self.neg(x)) != 0
                    && members.iter().all(|&y| mask & (1 << self.add(x, y)) != 0)
            });
            if closed {
                out.push(members);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }
}

/// The partition of a group into conjugation orbits, classes ordered by
/// their least member.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.size()];
    let mut classes = Vec::new();
    for x in g.elements() {
        if seen[x] {
            continue;
        }
        let class = g.conjugacy_class_of(x);
        for &y in &class {
            seen[y] = true;
        }
        classes.push(class);
    }
    classes
}

/// One witness per violated group law; shape problems are errors.
pub fn validate_group_table(table: &[Vec<usize>]) -> Result<ValidationReport> {
    let n = table.len();
    if n == 0 {
        return Err(Error::Malformed("empty operation table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Malformed(format!(
                "operation row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        if let Some(&e) = row.iter().find(|&&e| e >= n) {
            return Err(Error::Malformed(format!("operation entry {e} out of range")));
        }
    }

    let mut report = ValidationReport::default();
    let add = |x: usize, y: usize| table[x][y];

    'assoc: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if add(add(x, y), z) != add(x, add(y, z)) {
                    report.push(
                        "associativity",
                        vec![x.to_string(), y.to_string(), z.to_string()],
                    );
                    break 'assoc;
                }
            }
        }
    }
    let identity = (0..n).find(|&e| (0..n).all(|x| add(e, x) == x && add(x, e) == x));
    match identity {
        None => report.push("identity-exists", vec![]),
        Some(e) => {
            if let Some(x) = (0..n).find(|&x| {
                !(0..n).any(|y| add(x, y) == e && add(y, x) == e)
            }) {
                report.push("inverse-exists", vec![x.to_string()]);
            }
        }
    }
    Ok(report)
}

/// All bijective endomorphisms, as image vectors in lexicographic order.
pub fn automorphisms(g: &FiniteGroup) -> Vec<Vec<usize>> {
    isomorphisms(g, g)
}

/// All group isomorphisms from `g` to `h`, as image vectors in
/// lexicographic order; empty when none exist.
pub fn isomorphisms(g: &FiniteGroup, h: &FiniteGroup) -> Vec<Vec<usize>> {
    if g.size() != h.size() {
        return Vec::new();
    }
    (0..h.size())
        .permutations(g.size())
        .filter(|p| is_hom(g, h, p))
        .collect()
}

pub fn is_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    !isomorphisms(g, h).is_empty()
}

pub fn is_hom(g: &FiniteGroup, h: &FiniteGroup, map: &[usize]) -> bool {
    map.len() == g.size()
        && map.iter().all(|&i| i < h.size())
        && (0..g.size()).all(|x| {
            (0..g.size()).all(|y| h.add(map[x], map[y]) == map[g.add(x, y)])
        })
}

/// All homomorphisms from `g` to `h` as image vectors, lexicographically.
pub fn group_homs(g: &FiniteGroup, h: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut map = vec![0usize; g.size()];
    loop {
        if is_hom(g, h, &map) {
            out.push(map.clone());
        }
        let mut i = g.size();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            map[i] += 1;
            if map[i] < h.size() {
                break;
            }
            map[i] = 0;
        }
    }
}

/// An action of `actor` on `target` by automorphisms: one permutation per
/// actor element, compatible with the actor's addition on the left, so that
/// applying the map of y after the map of y' equals the map of y + y'.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    actor: FiniteGroup,
    target: FiniteGroup,
    maps: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(actor: FiniteGroup, target: FiniteGroup, maps: Vec<Vec<usize>>) -> Result<Self> {
        if maps.len() != actor.size() {
            return Err(Error::SizeMismatch {
                expected: actor.size(),
                found: maps.len(),
            });
        }
        for (y, m) in maps.iter().enumerate() {
            if !is_hom(&target, &target, m) || !is_permutation(m) {
                return Err(Error::Invalid(format!(
                    "map of actor element {y} is not an automorphism"
                )));
            }
        }
        let id: Vec<usize> = target.elements().collect();
        if maps[actor.identity()] != id {
            return Err(Error::Invalid("identity must act as the identity map".into()));
        }
        for y in actor.elements() {
            for y2 in actor.elements() {
                let composed: Vec<usize> = target.elements().map(|x| maps[y][maps[y2][x]]).collect();
                if composed != maps[actor.add(y, y2)] {
                    return Err(Error::Invalid(format!(
                        "action is not compatible with addition at ({y}, {y2})"
                    )));
                }
            }
        }
        Ok(GroupAction {
            actor,
            target,
            maps,
        })
    }

    pub fn trivial(actor: FiniteGroup, target: FiniteGroup) -> GroupAction {
        let id: Vec<usize> = target.elements().collect();
        GroupAction {
            maps: vec![id; actor.size()],
            actor,
            target,
        }
    }

    pub fn actor(&self) -> &FiniteGroup {
        &self.actor
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn apply(&self, y: usize, x: usize) -> usize {
        self.maps[y][x]
    }

    pub fn map_of(&self, y: usize) -> &[usize] {
        &self.maps[y]
    }

    pub fn is_trivial(&self) -> bool {
        let id: Vec<usize> = self.target.elements().collect();
        self.maps.iter().all(|m| *m == id)
    }
}

fn is_permutation(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    for &i in map {
        if i >= map.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// The automorphisms of `g` as an abstract group under composition, paired
/// with the list realizing each abstract element as a permutation. Element
/// i then j composes to the element whose permutation applies j first.
pub fn automorphism_group(g: &FiniteGroup) -> (FiniteGroup, Vec<Vec<usize>>) {
    let auts = automorphisms(g);
    let index_of = |p: &Vec<usize>| auts.iter().position(|q| q == p).expect("closed");
    let table: Vec<Vec<usize>> = auts
        .iter()
        .map(|f| {
            auts.iter()
                .map(|gg| {
                    let composed: Vec<usize> = (0..g.size()).map(|x| f[gg[x]]).collect();
                    index_of(&composed)
                })
                .collect()
        })
        .collect();
    (FiniteGroup::new(table).expect("composition of automorphisms"), auts)
}

/// Every action of `actor` on `target`, one per homomorphism into the
/// automorphism group, in the hom enumeration order.
pub fn all_actions(actor: &FiniteGroup, target: &FiniteGroup) -> Vec<GroupAction> {
    let (aut, perms) = automorphism_group(target);
    group_homs(actor, &aut)
        .into_iter()
        .map(|h| GroupAction {
            actor: actor.clone(),
            target: target.clone(),
            maps: h.into_iter().map(|i| perms[i].clone()).collect(),
        })
        .collect()
}

/// The group on pairs (x, y), x-major, with (x, y) + (x', y') given by
/// twisting x' through the action of y before adding on the left.
pub fn semidirect_group(x: &FiniteGroup, y: &FiniteGroup, action: &GroupAction) -> Result<FiniteGroup> {
    if action.actor() != y || action.target() != x {
        return Err(Error::Invalid("action does not match the given groups".into()));
    }
    let n = x.size() * y.size();
    let mut table = vec![vec![0usize; n]; n];
    for x1 in x.elements() {
        for y1 in y.elements() {
            for x2 in x.elements() {
                for y2 in y.elements() {
                    table[pair_index(x1, y1, y.size())][pair_index(x2, y2, y.size())] = pair_index(
                        x.add(x1, action.apply(y1, x2)),
                        y.add(y1, y2),
                        y.size(),
                    );
                }
            }
        }
    }
    FiniteGroup::new(table)
}

pub fn direct_product(x: &FiniteGroup, y: &FiniteGroup) -> FiniteGroup {
    semidirect_group(x, y, &GroupAction::trivial(y.clone(), x.clone())).expect("trivial action")
}

pub fn klein_four() -> FiniteGroup {
    direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))
}

/// One group per isomorphism class of each order up to `max_order`, which
/// must be at most 5; ordered by size, cyclic before the Klein group.
pub fn small_groups(max_order: usize) -> Vec<FiniteGroup> {
    assert!(max_order <= 5, "classification table stops at order 5");
    let mut out = Vec::new();
    for n in 1..=max_order {
        out.push(FiniteGroup::cyclic(n));
        if n == 4 {
            out.push(klein_four());
        }
    }
    out
}

/// Splits a point into its kernel data: the projection `f` from `a` onto
/// `b` must be split by the section `s`. Returns the kernel as a group of
/// its own, the embedding sending each kernel index to its element of `a`,
/// and the conjugation action of `b` on the kernel through `s`. The
/// reassembly map (x, beta) to k(x) + s(beta) is checked to be a group
/// isomorphism from the semidirect product onto `a` before returning.
pub fn action_from_point(
    a: &FiniteGroup,
    b: &FiniteGroup,
    f: &[usize],
    s: &[usize],
) -> Result<(FiniteGroup, Vec<usize>, GroupAction)> {
    if !is_hom(a, b, f) {
        return Err(Error::NotVHom("projection is not a homomorphism".into()));
    }
    if !is_hom(b, a, s) {
        return Err(Error::NotVHom("section is not a homomorphism".into()));
    }
    if (0..b.size()).any(|beta| f[s[beta]] != beta) {
        return Err(Error::NotAPoint);
    }

    let embedding: Vec<usize> = a.elements().filter(|&x| f[x] == b.identity()).collect();
    let kernel = a.induced_subgroup(&embedding)?;
    let position = |elt: usize| -> Result<usize> {
        embedding
            .iter()
            .position(|&e| e == elt)
            .ok_or_else(|| Error::Invalid("conjugate leaves the kernel".into()))
    };
    let mut maps = Vec::with_capacity(b.size());
    for beta in b.elements() {
        let mut m = Vec::with_capacity(kernel.size());
        for &x in &embedding {
            m.push(position(a.conjugate(s[beta], x))?);
        }
        maps.push(m);
    }
    let action = GroupAction::new(b.clone(), kernel.clone(), maps)?;

    // Reassemble and compare against `a` through the canonical map.
    let semi = semidirect_group(&kernel, b, &action)?;
    let canonical: Vec<usize> = (0..semi.size())
        .map(|p| {
            let (xi, beta) = crate::vstruct::unpair(p, b.size());
            a.add(embedding[xi], s[beta])
        })
        .collect();
    if !is_permutation(&canonical) || !is_hom(&semi, a, &canonical) {
        return Err(Error::Invalid("reassembly is not an isomorphism".into()));
    }
    Ok((kernel, embedding, action))
}

/// The canonical carrier bijection from kernel-by-base pairs onto the total
/// group of a point, (x, beta) at pair index to k(x) + s(beta).
pub fn canonical_pairing(
    a: &FiniteGroup,
    b_size: usize,
    embedding: &[usize],
    s: &[usize],
) -> Vec<usize> {
    (0..embedding.len() * b_size)
        .map(|p| {
            let (xi, beta) = crate::vstruct::unpair(p, b_size);
            a.add(embedding[xi], s[beta])
        })
        .collect()
}
