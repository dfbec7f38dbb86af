//! Structural invariants of finite p-groups.

use serde::Serialize;
use thiserror::Error;

use crate::pc::is_prime;
use crate::table::{Element, GroupTable, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("group of order {order} is not a {p}-group")]
    NotPGroup { order: usize, p: u64 },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("a non-abelian group is required")]
    NonAbelianRequired,
    #[error("derived subgroup is not cyclic")]
    DerivedNotCyclic,
    #[error("decomposition G = H·C_G(H) failed: {0}")]
    DecompositionFailed(String),
}

/// The prime `p` with `n = p^k`, `k ≥ 1`, by trial division.
pub fn prime_of_order(n: usize) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    (m == 1).then_some(p as u64)
}

fn check_p_group(g: &GroupTable, p: u64) -> Result<(), StructureError> {
    if !is_prime(p) {
        return Err(StructureError::NotPrime(p));
    }
    if g.order() != 1 && prime_of_order(g.order()) != Some(p) {
        return Err(StructureError::NotPGroup { order: g.order(), p });
    }
    Ok(())
}

/// `Z(G)`.
pub fn center(g: &GroupTable) -> Subgroup {
    let all: Vec<Element> = g.elements().collect();
    g.centralizer(&all)
}

/// Subgroup generated by `[x, y]` for `x ∈ a`, `y ∈ b`.
pub fn commutator_subgroup(g: &GroupTable, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut seen = vec![false; g.order()];
    for &x in a.members() {
        for &y in b.members() {
            seen[g.commutator(x, y)] = true;
        }
    }
    let gens: Vec<Element> = (0..g.order()).filter(|&c| seen[c]).collect();
    g.generated_subgroup(&gens)
}

/// `G' = [G, G]`.
pub fn derived_subgroup(g: &GroupTable) -> Subgroup {
    commutator_subgroup(g, &g.whole(), &g.whole())
}

/// Lower central series `G = γ₁ ⊇ γ₂ ⊇ …`, stopping at the first repeat.
pub fn lower_central_series(g: &GroupTable) -> Vec<Subgroup> {
    let whole = g.whole();
    let mut series = vec![whole.clone()];
    loop {
        let next = commutator_subgroup(g, series.last().unwrap(), &whole);
        if next.len() == series.last().unwrap().len() {
            return series;
        }
        series.push(next);
    }
}

/// Nilpotency class, or `None` if the lower central series stalls above 1.
pub fn nilpotency_class(g: &GroupTable) -> Option<usize> {
    let series = lower_central_series(g);
    series.last().unwrap().is_trivial().then(|| series.len() - 1)
}

/// `℧₁(G) = ⟨x^p⟩`.
pub fn agemo1(g: &GroupTable, p: u64) -> Subgroup {
    let mut seen = vec![false; g.order()];
    for x in g.elements() {
        seen[g.power(x, p as i64)] = true;
    }
    let gens: Vec<Element> = (0..g.order()).filter(|&c| seen[c]).collect();
    g.generated_subgroup(&gens)
}

/// `Φ(G) = G'·G^p`, valid for finite p-groups.
pub fn frattini(g: &GroupTable, p: u64) -> Subgroup {
    let d = derived_subgroup(g);
    let a = agemo1(g, p);
    let gens: Vec<Element> = d.members().iter().chain(a.members()).copied().collect();
    g.generated_subgroup(&gens)
}

/// `Ω₁(Z(G)) = {z ∈ Z(G) : z^p = 1}`.
pub fn omega1_center(g: &GroupTable, p: u64) -> Subgroup {
    let z = center(g);
    let mask = g.elements().map(|x| z.contains(x) && g.power(x, p as i64) == 0).collect();
    Subgroup::from_mask(mask)
}

/// A generator of `s` if `s` is cyclic.
pub fn is_cyclic(g: &GroupTable, s: &Subgroup) -> Option<Element> {
    s.members().iter().copied().find(|&x| g.element_order(x) == s.len())
}

/// Exponent of `G/S`: least `k` with `x^k ∈ S` for every `x`.
pub fn quotient_exponent_mod(g: &GroupTable, s: &Subgroup) -> Result<usize, StructureError> {
    if !g.is_normal(s) {
        return Err(StructureError::NotNormal);
    }
    let coset_order = |x: Element| {
        let mut k = 1;
        let mut y = x;
        while !s.contains(y) {
            y = g.mul(y, x);
            k += 1;
        }
        k
    };
    Ok(g.elements().map(coset_order).fold(1, lcm))
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// `Φ(G) = C_G(Z(Φ(G)))`.
pub fn ds_condition(g: &GroupTable, p: u64) -> bool {
    let phi = frattini(g, p);
    let phi_group = g.subgroup_as_group(&phi);
    let z_phi: Vec<Element> =
        center(&phi_group.table).members().iter().map(|&x| phi_group.embedding.apply(x)).collect();
    g.centralizer(&z_phi) == phi
}

/// Lexicographically least pair `(a, b)` whose commutator generates `G'`.
///
/// Requires `G` non-abelian with `G'` cyclic.
pub fn find_commutator_generators(g: &GroupTable) -> Result<(Element, Element), StructureError> {
    if g.is_abelian() {
        return Err(StructureError::NonAbelianRequired);
    }
    let d = derived_subgroup(g);
    if is_cyclic(g, &d).is_none() {
        return Err(StructureError::DerivedNotCyclic);
    }
    g.elements()
        .find_map(|a| g.elements().find(|&b| g.element_order(g.commutator(a, b)) == d.len()).map(|b| (a, b)))
        .ok_or(StructureError::DerivedNotCyclic)
}

/// `H = ⟨a, b⟩`, `K = C_G(H)`, with `HK = G` checked by counting and by
/// the explicit product set.
pub fn decompose_hk(g: &GroupTable, a: Element, b: Element) -> Result<(Subgroup, Subgroup), StructureError> {
    let h = g.generated_subgroup(&[a, b]);
    let k = g.centralizer(&[a, b]);
    let meet = h.intersection(&k);
    if h.len() * k.len() / meet.len() != g.order() {
        return Err(StructureError::DecompositionFailed(format!(
            "|H||K|/|H∩K| = {}·{}/{} ≠ {}",
            h.len(),
            k.len(),
            meet.len(),
            g.order()
        )));
    }
    if let Some(x) = g.product_set(&h, &k).iter().position(|&m| !m) {
        return Err(StructureError::DecompositionFailed(format!("{} is not in HK", g.label(x))));
    }
    Ok((h, k))
}

/// Greedy minimal generating set: each element is the smallest index outside
/// the subgroup generated by `Φ(G)` and the previous picks.
pub fn burnside_basis(g: &GroupTable, p: u64) -> Vec<Element> {
    let phi = frattini(g, p);
    let mut span = phi.clone();
    let mut basis = vec![];
    while let Some(x) = g.elements().find(|&x| !span.contains(x)) {
        basis.push(x);
        let gens: Vec<Element> = phi.members().iter().chain(&basis).copied().collect();
        span = g.generated_subgroup(&gens);
    }
    basis
}

fn log_p(n: usize, p: u64) -> u32 {
    let mut k = 0;
    let mut m = n;
    while m > 1 {
        m /= p as usize;
        k += 1;
    }
    k
}

/// Everything the construction pipeline needs to know about `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupProfile {
    pub prime: u64,
    pub order: usize,
    pub nilpotency_class: usize,
    pub abelian: bool,
    pub derived: Subgroup,
    pub center: Subgroup,
    pub frattini: Subgroup,
    pub omega1_center: Subgroup,
    pub center_cyclic: bool,
    pub derived_cyclic: bool,
    /// `|G'| = p^n`, present only when `G'` is cyclic.
    pub n: Option<u32>,
    pub quotient_exponent: usize,
    pub ds_condition: bool,
    pub commutator_pair: Option<(Element, Element)>,
}

pub fn profile(g: &GroupTable, p: u64) -> Result<GroupProfile, StructureError> {
    check_p_group(g, p)?;
    let derived = derived_subgroup(g);
    let center = center(g);
    let derived_cyclic = is_cyclic(g, &derived).is_some();
    let abelian = derived.is_trivial();
    Ok(GroupProfile {
        prime: p,
        order: g.order(),
        nilpotency_class: nilpotency_class(g).expect("p-groups are nilpotent"),
        abelian,
        frattini: frattini(g, p),
        omega1_center: omega1_center(g, p),
        center_cyclic: is_cyclic(g, &center).is_some(),
        derived_cyclic,
        n: derived_cyclic.then(|| log_p(derived.len(), p)),
        quotient_exponent: quotient_exponent_mod(g, &center).expect("the center is normal"),
        ds_condition: ds_condition(g, p),
        commutator_pair: if derived_cyclic && !abelian { find_commutator_generators(g).ok() } else { None },
        derived,
        center,
    })
}
