//! Brute-force enumeration of `Aut(G)` for small groups.
//!
//! Backtracks over images of a minimal generating tuple. A partial
//! assignment `x_1..x_k ↦ y_1..y_k` is kept only if it extends to an
//! injective homomorphism on `⟨x_1..x_k⟩`, checked on every edge of the
//! subgroup's Cayley graph. The first level of the tree is split across
//! workers; results are sorted afterwards so the output does not depend on
//! scheduling.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;
use thiserror::Error;

use crate::automorphism::{inner_automorphisms, AutError, Automorphism};
use crate::exec::Execution;
use crate::structure::{burnside_basis, frattini, omega1_center, prime_of_order};
use crate::table::{Element, GroupTable};

/// Default cap on search nodes.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration stopped after {nodes} nodes before exhausting the search tree")]
    IncompleteEnumeration { nodes: u64 },
    #[error("no noninner automorphism of order p fixes Φ(G) or Ω₁(Z(G)) pointwise")]
    NoWitnessFound,
    #[error("enumerated map failed re-verification: {0}")]
    InvalidMap(AutError),
}

#[derive(Debug, Clone)]
pub struct AutEnumeration {
    pub generating_set: Vec<Element>,
    /// Sorted lexicographically by permutation.
    pub automorphisms: Vec<Automorphism>,
    pub complete: bool,
    pub nodes: u64,
}

impl AutEnumeration {
    pub fn contains(&self, f: &Automorphism) -> bool {
        self.automorphisms.binary_search(f).is_ok()
    }
}

/// `Φ(G)`-based minimal generating tuple for p-groups; greedy otherwise.
fn generating_tuple(g: &GroupTable) -> Vec<Element> {
    match prime_of_order(g.order()) {
        Some(p) => burnside_basis(g, p),
        None => {
            let mut gens = vec![];
            let mut span = g.trivial_subgroup();
            while let Some(x) = g.elements().find(|&x| !span.contains(x)) {
                gens.push(x);
                span = g.generated_subgroup(&gens);
            }
            gens
        }
    }
}

/// Breadth-first spanning data for `⟨x_1..x_k⟩`.
struct Level {
    /// Elements in BFS order, root first, with `(parent, generator slot)`.
    order: Vec<(Element, Element, usize)>,
    /// Every edge `(w, j, w·x_j)` inside the subgroup.
    edges: Vec<(Element, usize, Element)>,
}

impl Level {
    fn build(g: &GroupTable, gens: &[Element]) -> Level {
        let mut seen = vec![false; g.order()];
        seen[0] = true;
        let mut order = vec![(0, 0, usize::MAX)];
        let mut edges = vec![];
        let mut head = 0;
        while head < order.len() {
            let w = order[head].0;
            head += 1;
            for (j, &x) in gens.iter().enumerate() {
                let wx = g.mul(w, x);
                if !seen[wx] {
                    seen[wx] = true;
                    order.push((wx, w, j));
                } else {
                    edges.push((w, j, wx));
                }
            }
        }
        Level { order, edges }
    }

    /// Whether `images` extend to an injective homomorphism on the subgroup,
    /// written into `map`. `stamp` marks images already used.
    fn extend(&self, g: &GroupTable, images: &[Element], map: &mut [Element], stamp: &mut [u64], tick: u64) -> bool {
        for &(e, parent, j) in &self.order {
            let v = if j == usize::MAX { 0 } else { g.mul(map[parent], images[j]) };
            if stamp[v] == tick {
                return false;
            }
            stamp[v] = tick;
            map[e] = v;
        }
        self.edges.iter().all(|&(w, j, wx)| map[wx] == g.mul(map[w], images[j]))
    }
}

struct Search<'a> {
    g: &'a GroupTable,
    levels: Vec<Level>,
    candidates: Vec<Vec<Element>>,
    budget: u64,
    nodes: &'a AtomicU64,
}

impl Search<'_> {
    fn dfs(&self, images: &mut Vec<Element>, out: &mut Vec<Vec<Element>>, scratch: &mut (Vec<Element>, Vec<u64>, u64)) -> bool {
        let k = images.len();
        if k == self.levels.len() {
            out.push(scratch.0.clone());
            return true;
        }
        for &y in &self.candidates[k] {
            if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
                return false;
            }
            images.push(y);
            scratch.2 += 1;
            let (map, stamp, tick) = scratch;
            let ok = self.levels[k].extend(self.g, images, map, stamp, *tick);
            let finished = !ok || self.dfs(images, out, scratch);
            images.pop();
            if !finished {
                return false;
            }
        }
        true
    }
}

pub fn enumerate_automorphisms(g: &GroupTable, budget: u64) -> Result<AutEnumeration, OracleError> {
    enumerate_automorphisms_with(g, budget, Execution::default())
}

/// Enumerates `Aut(G)` within `budget` search nodes.
///
/// Only a failed post-hoc verification is an error; running out of budget
/// returns what was found with `complete = false`.
pub fn enumerate_automorphisms_with(
    g: &GroupTable,
    budget: u64,
    exec: Execution,
) -> Result<AutEnumeration, OracleError> {
    let gens = generating_tuple(g);
    let n = g.order();
    if gens.is_empty() {
        return Ok(AutEnumeration {
            generating_set: gens,
            automorphisms: vec![Automorphism::identity(g)],
            complete: true,
            nodes: 0,
        });
    }
    let orders: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    let nodes = AtomicU64::new(0);
    let search = Search {
        g,
        levels: (1..=gens.len()).map(|k| Level::build(g, &gens[..k])).collect(),
        candidates: gens.iter().map(|&x| g.elements().filter(|&y| orders[y] == orders[x]).collect()).collect(),
        budget,
        nodes: &nodes,
    };
    let branches = exec.map_slice(&search.candidates[0], |&y| {
        let mut out = vec![];
        if search.nodes.fetch_add(1, Ordering::Relaxed) >= search.budget {
            return (out, false);
        }
        let mut scratch = (vec![0; n], vec![0u64; n], 1u64);
        let mut images = vec![y];
        let done = !search.levels[0].extend(g, &images, &mut scratch.0, &mut scratch.1, 1)
            || search.dfs(&mut images, &mut out, &mut scratch);
        (out, done)
    });
    let complete = branches.iter().all(|(_, done)| *done);
    let mut perms: Vec<Vec<Element>> = branches.into_iter().flat_map(|(out, _)| out).collect();
    perms.sort();
    let automorphisms = exec
        .map_slice(&perms, |p| Automorphism::new_with(g, p.clone(), Execution::Sequential))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(OracleError::InvalidMap)?;
    Ok(AutEnumeration {
        generating_set: gens,
        automorphisms,
        complete,
        nodes: nodes.load(Ordering::Relaxed).min(budget),
    })
}

/// Automorphisms that are noninner, of order exactly `p`, and fix `Φ(G)` or
/// `Ω₁(Z(G))` pointwise. Keeps the enumeration's order.
pub fn theorem_witnesses(g: &GroupTable, p: u64, e: &AutEnumeration) -> Result<Vec<Automorphism>, OracleError> {
    if !e.complete {
        return Err(OracleError::IncompleteEnumeration { nodes: e.nodes });
    }
    let inner: HashSet<Automorphism> = inner_automorphisms(g).into_iter().collect();
    let phi = frattini(g, p);
    let omega = omega1_center(g, p);
    Ok(e.automorphisms
        .iter()
        .filter(|f| {
            f.order() == p as usize
                && !inner.contains(*f)
                && (f.fixes_pointwise(&phi) || f.fixes_pointwise(&omega))
        })
        .cloned()
        .collect())
}

/// Least theorem witness in lexicographic order of permutations.
pub fn search_fallback(g: &GroupTable, p: u64, budget: u64) -> Result<Automorphism, OracleError> {
    search_fallback_with(g, p, budget, Execution::default())
}

pub fn search_fallback_with(g: &GroupTable, p: u64, budget: u64, exec: Execution) -> Result<Automorphism, OracleError> {
    let e = enumerate_automorphisms_with(g, budget, exec)?;
    theorem_witnesses(g, p, &e)?.into_iter().next().ok_or(OracleError::NoWitnessFound)
}

/// Summary of an oracle run for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub group: String,
    pub aut_count: usize,
    pub inn_count: usize,
    pub witness_count: Option<usize>,
    pub least_witness_perm: Option<Vec<Element>>,
    pub complete: bool,
}

pub fn oracle_report(g: &GroupTable, p: u64, e: &AutEnumeration) -> OracleReport {
    let witnesses = theorem_witnesses(g, p, e).ok();
    OracleReport {
        group: g.fingerprint(),
        aut_count: e.automorphisms.len(),
        inn_count: inner_automorphisms(g).len(),
        witness_count: witnesses.as_ref().map(Vec::len),
        least_witness_perm: witnesses.and_then(|w| w.first().map(|f| f.perm().to_vec())),
        complete: e.complete,
    }
}
