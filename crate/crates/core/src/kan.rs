//! Functors from a one-object enriched base into valued groups, and the
//! right extension along a base change.
//!
//! A valued group (Y, b) acts as a one-object enriched category whose
//! endomorphisms are the elements of Y. A functor out of it picks a value
//! (Z, c) and assigns to each y a structure-preserving automorphism ψ_y,
//! functorially and with b(y, y') bounded by the pointwise meet
//! ⋀_z c(ψ_y(z), ψ_{y'}(z)). Product-structure points over Y correspond to
//! such functors by [`point_to_functor`] and [`functor_to_point`].
//!
//! For a base change h: X → Y, [`l_h`] precomposes a functor over Y down to
//! X. Its right adjoint [`r_h`] is computed from an explicit carrier: all
//! maps u: Y → Z satisfying ψ_x(u(y)) = u(h(x) + y), with pointwise
//! addition, the pointwise-meet structure, and right translation as the
//! assignment. The carrier always forms a valued group and translation
//! always preserves its structure exactly, but the translation assignment
//! need not be enriched over Y; [`r_h`] validates the full output and
//! reports that failure distinctly instead of returning an unlawful
//! functor. [`transpose`] and [`adjunction_check`] verify the adjunction on
//! instances where the output is lawful.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grp::{group_homs, FiniteGroup, GroupAction};
use crate::points::{action_to_point, has_product_structure, pullback_point, SplitPoint};
use crate::report::{AdjunctionReport, CheckResult, Violation};
use crate::vgrp::{check_vhom, VGroup};
use crate::vstruct::{check_vfunctor, exponential_structure};

/// A functor from the one-object base (Y, b) into valued groups: a value
/// (Z, c) and one structure-preserving automorphism of it per element of Y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnrichedFunctor {
    domain: VGroup,
    value: VGroup,
    action: GroupAction,
}

impl EnrichedFunctor {
    /// Validates the assignment: each map must be an automorphism of the
    /// value preserving its structure in both directions, the maps must
    /// compose along the domain's addition with the identity at zero, and
    /// b(y, y') ≤ ⋀_z c(ψ_y(z), ψ_{y'}(z)) must hold throughout.
    pub fn new(domain: VGroup, value: VGroup, maps: Vec<Vec<usize>>) -> Result<Self> {
        if !domain.structure().same_quantale(value.structure()) {
            return Err(Error::MismatchedQuantale);
        }
        let action = GroupAction::new(domain.group().clone(), value.group().clone(), maps)?;
        let c = value.structure();
        for y in 0..domain.size() {
            let m = action.map_of(y);
            let mut inverse = vec![0; m.len()];
            for (z, &w) in m.iter().enumerate() {
                inverse[w] = z;
            }
            if !check_vfunctor(m, c, c)? || !check_vfunctor(&inverse, c, c)? {
                return Err(Error::Invalid(format!(
                    "assignment at {y} does not preserve the value structure in both directions"
                )));
            }
        }
        let q = domain.quantale();
        for y in 0..domain.size() {
            for y2 in 0..domain.size() {
                let bound = q.meet_all(
                    (0..value.size()).map(|z| c.get(action.apply(y, z), action.apply(y2, z))),
                );
                if !q.leq(domain.structure().get(y, y2), bound) {
                    return Err(Error::Invalid(format!(
                        "assignment is not enriched at ({y}, {y2})"
                    )));
                }
            }
        }
        Ok(EnrichedFunctor {
            domain,
            value,
            action,
        })
    }

    /// The functor fixing every element of the value.
    pub fn constant(domain: &VGroup, value: &VGroup) -> Result<Self> {
        let id: Vec<usize> = (0..value.size()).collect();
        EnrichedFunctor::new(
            domain.clone(),
            value.clone(),
            vec![id; domain.size()],
        )
    }

    pub fn domain(&self) -> &VGroup {
        &self.domain
    }

    pub fn value(&self) -> &VGroup {
        &self.value
    }

    pub fn map_of(&self, y: usize) -> &[usize] {
        self.action.map_of(y)
    }

    pub fn apply(&self, y: usize, z: usize) -> usize {
        self.action.apply(y, z)
    }

    pub fn maps(&self) -> Vec<Vec<usize>> {
        (0..self.domain.size())
            .map(|y| self.action.map_of(y).to_vec())
            .collect()
    }
}

/// A natural transformation between two functors over the same base: one
/// structure-preserving homomorphism between the values commuting with
/// every assignment map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTransform {
    source: EnrichedFunctor,
    target: EnrichedFunctor,
    component: Vec<usize>,
}

impl NatTransform {
    pub fn new(
        source: EnrichedFunctor,
        target: EnrichedFunctor,
        component: Vec<usize>,
    ) -> Result<Self> {
        if source.domain != target.domain {
            return Err(Error::Invalid(
                "transformation between functors over different bases".into(),
            ));
        }
        if !check_vhom(&component, &source.value, &target.value)? {
            return Err(Error::NotVHom(
                "component is not structure-preserving".into(),
            ));
        }
        for y in 0..source.domain.size() {
            for z in 0..source.value.size() {
                if component[source.apply(y, z)] != target.apply(y, component[z]) {
                    return Err(Error::Invalid(format!(
                        "component is not natural at ({y}, {z})"
                    )));
                }
            }
        }
        Ok(NatTransform {
            source,
            target,
            component,
        })
    }

    pub fn source(&self) -> &EnrichedFunctor {
        &self.source
    }

    pub fn target(&self) -> &EnrichedFunctor {
        &self.target
    }

    pub fn component(&self) -> &[usize] {
        &self.component
    }
}

/// All natural transformation components from one functor to another, in
/// lexicographic order: carrier maps between the values filtered by the
/// homomorphism, structure and naturality conditions. `cap` bounds the
/// number of candidate maps, which is |target value| ^ |source value|.
pub fn nat_transforms(
    source: &EnrichedFunctor,
    target: &EnrichedFunctor,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    if source.domain != target.domain {
        return Err(Error::Invalid(
            "transformation between functors over different bases".into(),
        ));
    }
    let space = (target.value.size() as u128).saturating_pow(source.value.size() as u32);
    if space > cap as u128 {
        return Err(Error::CapExceeded {
            cap,
            during: "enumerating transformation components".into(),
        });
    }
    let mut out = Vec::new();
    for h in group_homs(source.value.group(), target.value.group()) {
        if !check_vfunctor(&h, source.value.structure(), target.value.structure())? {
            continue;
        }
        let natural = (0..source.domain.size()).all(|y| {
            (0..source.value.size()).all(|z| h[source.apply(y, z)] == target.apply(y, h[z]))
        });
        if natural {
            out.push(h);
        }
    }
    Ok(out)
}

/// The functor carried by a product-structure point: the base acts on the
/// kernel by the point's conjugation action.
pub fn point_to_functor(p: &SplitPoint) -> Result<EnrichedFunctor> {
    if !has_product_structure(p) {
        return Err(Error::NotProductPoint);
    }
    let maps: Vec<Vec<usize>> = (0..p.base().size())
        .map(|y| p.action().map_of(y).to_vec())
        .collect();
    EnrichedFunctor::new(p.base().clone(), p.kernel().clone(), maps)
}

/// The point carried by a functor: the semidirect sum of the value by the
/// base under the assignment action, with the product structure.
pub fn functor_to_point(f: &EnrichedFunctor) -> Result<SplitPoint> {
    let action = GroupAction::new(
        f.domain.group().clone(),
        f.value.group().clone(),
        f.maps(),
    )?;
    action_to_point(&f.value, &f.domain, &action)
}

/// Precomposition along a base change h: X → Y. The value is unchanged and
/// the assignment at x becomes the assignment at h(x).
pub fn l_h(domain2: &VGroup, h: &[usize], phi: &EnrichedFunctor) -> Result<EnrichedFunctor> {
    if !check_vhom(h, domain2, &phi.domain)? {
        return Err(Error::NotVHom(
            "base change is not structure-preserving".into(),
        ));
    }
    let maps: Vec<Vec<usize>> = (0..domain2.size())
        .map(|x| phi.map_of(h[x]).to_vec())
        .collect();
    EnrichedFunctor::new(domain2.clone(), phi.value.clone(), maps)
}

/// The carrier of the right extension along h: X → Y of a functor over X:
/// every map u from the new base into the value with ψ_x(u(y)) = u(h(x)+y)
/// for all x and y, in lexicographic order of the value tables. `cap`
/// bounds the |Z| ^ |Y| candidate maps.
pub fn extension_members(
    domain2: &VGroup,
    h: &[usize],
    psi: &EnrichedFunctor,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    if !check_vhom(h, psi.domain(), domain2)? {
        return Err(Error::NotVHom(
            "base change is not structure-preserving".into(),
        ));
    }
    let ysize = domain2.size();
    let zsize = psi.value.size();
    let space = (zsize as u128).saturating_pow(ysize as u32);
    if space > cap as u128 {
        return Err(Error::CapExceeded {
            cap,
            during: "enumerating extension carrier candidates".into(),
        });
    }
    let yg = domain2.group();
    let mut out = Vec::new();
    let mut u = vec![0usize; ysize];
    loop {
        let equivariant = (0..psi.domain.size()).all(|x| {
            (0..ysize).all(|y| psi.apply(x, u[y]) == u[yg.add(h[x], y)])
        });
        if equivariant {
            out.push(u.clone());
        }
        let mut i = ysize;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            u[i] += 1;
            if u[i] < zsize {
                break;
            }
            u[i] = 0;
        }
    }
}

/// The right extension along h: X → Y: the equivariant-map carrier with
/// pointwise addition, the pointwise-meet structure ω(u, v) =
/// ⋀_y c(u(y), v(y)), and right translation ψ̃_{y₀}(u)(y) = u(y + y₀) as
/// the assignment. The output is validated in full; when the translation
/// assignment fails to be enriched over the new base the error reports a
/// failed established property rather than returning the unlawful functor.
pub fn r_h(
    domain2: &VGroup,
    h: &[usize],
    psi: &EnrichedFunctor,
    cap: usize,
) -> Result<EnrichedFunctor> {
    let members = extension_members(domain2, h, psi, cap)?;
    let index: HashMap<&[usize], usize> = members
        .iter()
        .enumerate()
        .map(|(i, u)| (u.as_slice(), i))
        .collect();
    let position = |u: &[usize]| -> Result<usize> {
        index.get(u).copied().ok_or_else(|| {
            Error::property(
                "extension carrier is closed under the induced operations",
                "escaped",
            )
        })
    };
    let m = members.len();
    let yg = domain2.group();
    let zg = psi.value.group();
    let mut table = vec![vec![0usize; m]; m];
    for (i, u) in members.iter().enumerate() {
        for (j, v) in members.iter().enumerate() {
            let sum: Vec<usize> = (0..domain2.size()).map(|y| zg.add(u[y], v[y])).collect();
            table[i][j] = position(&sum)?;
        }
    }
    let group = FiniteGroup::new(table)?;
    let omega = exponential_structure(&members, psi.value.structure())?;
    let value = VGroup::new(group, omega)?;
    let mut maps = Vec::with_capacity(domain2.size());
    for y0 in 0..domain2.size() {
        let mut map = Vec::with_capacity(m);
        for u in &members {
            let translated: Vec<usize> =
                (0..domain2.size()).map(|y| u[yg.add(y, y0)]).collect();
            map.push(position(&translated)?);
        }
        maps.push(map);
    }
    EnrichedFunctor::new(domain2.clone(), value, maps).map_err(|e| {
        Error::property(
            "the extension carrier admits the translation assignment as an enriched functor",
            e.to_string(),
        )
    })
}

/// The counit of the extension: evaluation of each carrier member at the
/// zero of the new base, as a transformation from the precomposed
/// extension back to the original functor.
pub fn counit(
    domain2: &VGroup,
    h: &[usize],
    psi: &EnrichedFunctor,
    cap: usize,
) -> Result<NatTransform> {
    let rh = r_h(domain2, h, psi, cap)?;
    let members = extension_members(domain2, h, psi, cap)?;
    let precomposed = l_h(psi.domain(), h, &rh)?;
    let y0 = domain2.group().identity();
    let component: Vec<usize> = members.iter().map(|u| u[y0]).collect();
    NatTransform::new(precomposed, psi.clone(), component)
}

fn transpose_component(
    phi: &EnrichedFunctor,
    alpha: &[usize],
    members: &[Vec<usize>],
) -> Result<Vec<usize>> {
    let ysize = phi.domain().size();
    let mut component = Vec::with_capacity(phi.value().size());
    for s in 0..phi.value().size() {
        let u: Vec<usize> = (0..ysize).map(|y| alpha[phi.apply(y, s)]).collect();
        let idx = members.iter().position(|v| *v == u).ok_or_else(|| {
            Error::property(
                "the transposed component lands in the extension carrier",
                format!("source element {s}"),
            )
        })?;
        component.push(idx);
    }
    Ok(component)
}

/// The transform φ → r_h(ψ) matched to a transform l_h(φ) → ψ: the
/// component sends s to the map y ↦ α(φ_y(s)). The triangle identity
/// (evaluating the transpose at zero recovers α) and its uniqueness among
/// all transforms into the extension are verified before returning.
pub fn transpose(
    h: &[usize],
    phi: &EnrichedFunctor,
    psi: &EnrichedFunctor,
    alpha: &NatTransform,
    cap: usize,
) -> Result<NatTransform> {
    let precomposed = l_h(psi.domain(), h, phi)?;
    if *alpha.source() != precomposed || *alpha.target() != *psi {
        return Err(Error::Invalid(
            "transform does not run from the precomposed functor to the extension input".into(),
        ));
    }
    let rh = r_h(phi.domain(), h, psi, cap)?;
    let members = extension_members(phi.domain(), h, psi, cap)?;
    let component = transpose_component(phi, alpha.component(), &members)?;
    let out = NatTransform::new(phi.clone(), rh.clone(), component)?;

    let y0 = phi.domain().group().identity();
    for s in 0..phi.value().size() {
        if members[out.component()[s]][y0] != alpha.component()[s] {
            return Err(Error::property(
                "evaluating the transpose at zero recovers the original transform",
                format!("component {s}"),
            ));
        }
    }
    let mut factorizations = 0;
    for beta in nat_transforms(phi, &rh, cap)? {
        let recovers = (0..phi.value().size())
            .all(|s| members[beta[s]][y0] == alpha.component()[s]);
        if recovers {
            factorizations += 1;
        }
    }
    if factorizations != 1 {
        return Err(Error::property(
            "exactly one transform into the extension recovers the original",
            format!("{factorizations} candidates"),
        ));
    }
    Ok(out)
}

/// Enumerates both hom-sets of the adjunction for one base change and one
/// functor on each side, and verifies that transposition and evaluation at
/// zero are mutually inverse bijections between them.
pub fn adjunction_check(
    h: &[usize],
    phi: &EnrichedFunctor,
    psi: &EnrichedFunctor,
    cap: usize,
) -> Result<AdjunctionReport> {
    let precomposed = l_h(psi.domain(), h, phi)?;
    let left = nat_transforms(&precomposed, psi, cap)?;
    let rh = r_h(phi.domain(), h, psi, cap)?;
    let members = extension_members(phi.domain(), h, psi, cap)?;
    let right = nat_transforms(phi, &rh, cap)?;
    let y0 = phi.domain().group().identity();

    let evaluate = |beta: &[usize]| -> Vec<usize> {
        beta.iter().map(|&w| members[w][y0]).collect()
    };

    let mut pairing = Vec::with_capacity(left.len());
    let mut forward_total = true;
    let mut triangle = true;
    for alpha in &left {
        match transpose_component(phi, alpha, &members) {
            Ok(component) => match right.iter().position(|r| *r == component) {
                Some(j) => {
                    pairing.push(j);
                    if evaluate(&right[j]) != *alpha {
                        triangle = false;
                    }
                }
                None => forward_total = false,
            },
            Err(_) => forward_total = false,
        }
        if !forward_total {
            break;
        }
    }

    let mut backward = Vec::with_capacity(right.len());
    let mut backward_total = true;
    for beta in &right {
        match left.iter().position(|l| *l == evaluate(beta)) {
            Some(i) => backward.push(i),
            None => {
                backward_total = false;
                break;
            }
        }
    }
    let unique = backward_total && {
        let mut seen = vec![false; left.len()];
        backward.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
    };
    let mutually_inverse = forward_total
        && backward_total
        && left.len() == right.len()
        && pairing.iter().enumerate().all(|(i, &j)| backward[j] == i);
    let bijection = mutually_inverse && triangle;
    if !bijection {
        pairing.clear();
    }
    Ok(AdjunctionReport {
        left_count: left.len(),
        right_count: right.len(),
        pairing,
        bijection,
        triangle,
        transpose_unique: unique,
    })
}

/// Pulling a product-structure point back along a base change and reading
/// off its functor must agree with precomposing the functor of the
/// original point.
pub fn change_of_base_correspondence(
    p: &SplitPoint,
    domain2: &VGroup,
    h: &[usize],
) -> Result<CheckResult> {
    let claim = "pulling back the point agrees with precomposing its functor";
    let pulled = point_to_functor(&pullback_point(p, domain2, h)?)?;
    let precomposed = l_h(domain2, h, &point_to_functor(p)?)?;
    if pulled == precomposed {
        return Ok(CheckResult::holds(claim));
    }
    let mut witnesses = Vec::new();
    if pulled.value() != precomposed.value() {
        witnesses.push(Violation::new("value", vec![]));
    }
    for y in 0..domain2.size() {
        if pulled.map_of(y) != precomposed.map_of(y) {
            witnesses.push(Violation::new("assignment", vec![y.to_string()]));
        }
    }
    if witnesses.is_empty() {
        witnesses.push(Violation::new("domain", vec![]));
    }
    Ok(CheckResult::fails(claim, witnesses))
}
