//! Automorphisms as certified permutations of element indices.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::structure::{center, lcm};
use crate::table::{Element, GroupTable, InducedGroup, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("permutation has length {len}, group has order {order}")]
    WrongLength { len: usize, order: usize },
    #[error("{gens} generators but {images} images")]
    ImageCountMismatch { gens: usize, images: usize },
    #[error("element index {0} out of range")]
    OutOfRange(usize),
    #[error("map is not a bijection (value {0} is hit twice)")]
    NotBijective(Element),
    #[error("map does not fix the identity")]
    MovesIdentity,
    #[error("not a homomorphism: {witness}")]
    NotAHomomorphism { witness: String },
    #[error("generators reach {reached} of {order} elements")]
    DoesNotGenerate { reached: usize, order: usize },
    #[error("HK is not the whole group ({missing} is missing)")]
    NotAProduct { missing: Element },
    #[error("[{h},{k}] != 1 for h in H, k in K")]
    FactorsDontCommute { h: Element, k: Element },
    #[error("automorphism of H moves {0}, which lies in H ∩ K")]
    FixedSetViolation(Element),
    #[error("extension is not well defined at {0}")]
    IllDefined(Element),
    #[error("M is not a maximal subgroup of index p")]
    NotMaximal,
    #[error("coset element lies in M")]
    BadCosetElement,
    #[error("z is not a central element of order p")]
    NotCentralOrderP,
}

/// A permutation of element indices that respects multiplication.
///
/// Only obtainable through constructors that check multiplicativity on all
/// pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    perm: Vec<Element>,
}

/// Serialized form: the permutation plus the fingerprint of its group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutomorphismRecord {
    pub group: String,
    pub perm: Vec<Element>,
}

impl Automorphism {
    pub fn new(g: &GroupTable, perm: Vec<Element>) -> Result<Automorphism, AutError> {
        Self::new_with(g, perm, Execution::default())
    }

    pub fn new_with(g: &GroupTable, perm: Vec<Element>, exec: Execution) -> Result<Automorphism, AutError> {
        let n = g.order();
        if perm.len() != n {
            return Err(AutError::WrongLength { len: perm.len(), order: n });
        }
        let mut hit = vec![false; n];
        for &y in &perm {
            if y >= n {
                return Err(AutError::OutOfRange(y));
            }
            if std::mem::replace(&mut hit[y], true) {
                return Err(AutError::NotBijective(y));
            }
        }
        if perm[0] != 0 {
            return Err(AutError::MovesIdentity);
        }
        if let Some((x, y)) =
            exec.find_first(n, |x| (0..n).find(|&y| perm[g.mul(x, y)] != g.mul(perm[x], perm[y])).map(|y| (x, y)))
        {
            return Err(AutError::NotAHomomorphism {
                witness: format!("f({}*{}) != f({})*f({})", g.label(x), g.label(y), g.label(x), g.label(y)),
            });
        }
        Ok(Automorphism { perm })
    }

    pub fn identity(g: &GroupTable) -> Automorphism {
        Automorphism { perm: g.elements().collect() }
    }

    /// The unique automorphism sending `gens[i]` to `images[i]`, if any.
    ///
    /// Values are propagated breadth-first along right multiplication by the
    /// generators; every edge is checked, so a conflict names two words for
    /// the same element with different images.
    pub fn from_generator_images(
        g: &GroupTable,
        gens: &[Element],
        images: &[Element],
    ) -> Result<Automorphism, AutError> {
        if gens.len() != images.len() {
            return Err(AutError::ImageCountMismatch { gens: gens.len(), images: images.len() });
        }
        if let Some(&x) = gens.iter().chain(images).find(|&&x| x >= g.order()) {
            return Err(AutError::OutOfRange(x));
        }
        let n = g.order();
        let mut map: Vec<Option<Element>> = vec![None; n];
        // (predecessor, generator slot) for reconstructing words
        let mut parent: Vec<Option<(Element, usize)>> = vec![None; n];
        map[0] = Some(0);
        let mut queue = VecDeque::from([0]);
        let word = |parent: &[Option<(Element, usize)>], mut x: Element| {
            let mut w = vec![];
            while let Some((prev, k)) = parent[x] {
                w.push(g.label(gens[k]));
                x = prev;
            }
            w.reverse();
            if w.is_empty() {
                "1".to_string()
            } else {
                w.join("*")
            }
        };
        while let Some(w) = queue.pop_front() {
            let fw = map[w].unwrap();
            for (k, (&x, &y)) in gens.iter().zip(images).enumerate() {
                let target = g.mul(w, x);
                let value = g.mul(fw, y);
                match map[target] {
                    None => {
                        map[target] = Some(value);
                        parent[target] = Some((w, k));
                        queue.push_back(target);
                    }
                    Some(v) if v != value => {
                        return Err(AutError::NotAHomomorphism {
                            witness: format!(
                                "{} and {}*{} are both {} but map to {} and {}",
                                word(&parent, target),
                                word(&parent, w),
                                g.label(x),
                                g.label(target),
                                g.label(v),
                                g.label(value)
                            ),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
        let reached = map.iter().filter(|m| m.is_some()).count();
        if reached != n {
            return Err(AutError::DoesNotGenerate { reached, order: n });
        }
        Automorphism::new(g, map.into_iter().map(Option::unwrap).collect())
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.perm[x]
    }

    pub fn perm(&self) -> &[Element] {
        &self.perm
    }

    /// `x ↦ other(self(x))`.
    pub fn then(&self, other: &Automorphism) -> Automorphism {
        Automorphism { perm: self.perm.iter().map(|&y| other.perm[y]).collect() }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut perm = vec![0; self.perm.len()];
        for (x, &y) in self.perm.iter().enumerate() {
            perm[y] = x;
        }
        Automorphism { perm }
    }

    pub fn pow(&self, k: u64) -> Automorphism {
        let mut acc = Automorphism { perm: (0..self.perm.len()).collect() };
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// Least `k ≥ 1` with `f^k = 1`: the lcm of the cycle lengths.
    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.perm.len()];
        let mut ord = 1;
        for start in 0..self.perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.perm[x];
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }

    pub fn fixes_pointwise(&self, s: &Subgroup) -> bool {
        s.members().iter().all(|&x| self.perm[x] == x)
    }

    pub fn record(&self, g: &GroupTable) -> AutomorphismRecord {
        AutomorphismRecord { group: g.fingerprint(), perm: self.perm.clone() }
    }
}

/// `x ↦ g⁻¹ x g`.
pub fn inner_automorphism(g: &GroupTable, by: Element) -> Automorphism {
    Automorphism { perm: g.elements().map(|x| g.conjugate(x, by)).collect() }
}

/// One representative per coset of `Z(G)`, smallest index first.
pub fn center_transversal(g: &GroupTable) -> Vec<Element> {
    let z = center(g);
    let mut covered = vec![false; g.order()];
    let mut reps = vec![];
    for x in g.elements() {
        if covered[x] {
            continue;
        }
        reps.push(x);
        for &c in z.members() {
            covered[g.mul(x, c)] = true;
        }
    }
    reps
}

/// All inner automorphisms, one per coset of the center.
pub fn inner_automorphisms(g: &GroupTable) -> Vec<Automorphism> {
    center_transversal(g).into_iter().map(|x| inner_automorphism(g, x)).collect()
}

/// A conjugating element if `f` is inner.
pub fn is_inner(g: &GroupTable, f: &Automorphism) -> Option<Element> {
    center_transversal(g)
        .into_iter()
        .find(|&by| g.elements().all(|x| f.apply(x) == g.conjugate(x, by)))
}

/// Extends an automorphism of `H` to `G = HK` by `hk ↦ f_H(h)·k`.
///
/// Requires `[H, K] = 1` and that `f_H` fixes `H ∩ K` pointwise. The value
/// at every element is checked to be independent of its factorization.
pub fn extend_product(
    g: &GroupTable,
    h: &Subgroup,
    k: &Subgroup,
    induced_h: &InducedGroup,
    f_h: &Automorphism,
) -> Result<Automorphism, AutError> {
    if let Some(missing) = g.product_set(h, k).iter().position(|&m| !m) {
        return Err(AutError::NotAProduct { missing });
    }
    for &x in h.members() {
        if let Some(&y) = k.members().iter().find(|&&y| !g.commutes(x, y)) {
            return Err(AutError::FactorsDontCommute { h: x, k: y });
        }
    }
    let emb = &induced_h.embedding;
    let phi = |x: Element| emb.apply(f_h.apply(emb.preimage(x).expect("h lies in H")));
    if let Some(&x) = h.intersection(k).members().iter().find(|&&x| phi(x) != x) {
        return Err(AutError::FixedSetViolation(x));
    }
    let mut perm: Vec<Option<Element>> = vec![None; g.order()];
    for &x in h.members() {
        let fx = phi(x);
        for &y in k.members() {
            let at = g.mul(x, y);
            let value = g.mul(fx, y);
            match perm[at] {
                None => perm[at] = Some(value),
                Some(v) if v != value => return Err(AutError::IllDefined(at)),
                Some(_) => {}
            }
        }
    }
    Automorphism::new(g, perm.into_iter().map(|v| v.expect("HK = G")).collect())
}

/// `m·g^i ↦ m·g^i·z^i` for `m ∈ M`, `0 ≤ i < p`.
///
/// `M` must have index `p`, `g ∉ M`, and `z` must be central of order `p`.
pub fn remark4_map(
    g: &GroupTable,
    p: u64,
    m: &Subgroup,
    coset: Element,
    z: Element,
) -> Result<Automorphism, AutError> {
    let p = p as usize;
    if !g.is_subgroup(m) || m.len() * p != g.order() {
        return Err(AutError::NotMaximal);
    }
    if m.contains(coset) {
        return Err(AutError::BadCosetElement);
    }
    if g.element_order(z) != p || !g.elements().all(|x| g.commutes(x, z)) {
        return Err(AutError::NotCentralOrderP);
    }
    let inv_powers: Vec<Element> = (0..p as i64).map(|i| g.power(coset, -i)).collect();
    let perm = g
        .elements()
        .map(|x| {
            let i = (0..p).find(|&i| m.contains(g.mul(x, inv_powers[i]))).expect("g^0..g^{p-1} is a transversal");
            g.mul(x, g.power(z, i as i64))
        })
        .collect();
    Automorphism::new(g, perm)
}
