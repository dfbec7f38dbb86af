//! Brute-force references for integration tests. Nothing here calls the
//! library's subgroup or structure code; only raw table multiplication.
#![allow(dead_code)]

use pgroup_core::corpus::{CorpusEntry, CORPUS};
use pgroup_core::table::GroupTable;

pub fn corpus_groups() -> Vec<(&'static CorpusEntry, GroupTable)> {
    CORPUS.iter().map(|e| (e, e.load().unwrap_or_else(|err| panic!("{}: {err}", e.name)))).collect()
}

/// Non-abelian corpus entries, which the pipeline must accept.
pub fn class2_groups() -> Vec<(&'static CorpusEntry, GroupTable)> {
    corpus_groups().into_iter().filter(|(e, _)| e.expected.case_tag.is_some()).collect()
}

pub fn closure(g: &GroupTable, gens: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; g.order()];
    mask[0] = true;
    let mut stack = vec![0];
    while let Some(w) = stack.pop() {
        for &x in gens {
            let wx = g.mul(w, x);
            if !mask[wx] {
                mask[wx] = true;
                stack.push(wx);
            }
        }
    }
    mask
}

pub fn pow(g: &GroupTable, x: usize, k: u64) -> usize {
    (0..k).fold(0, |acc, _| g.mul(acc, x))
}

pub fn inverse(g: &GroupTable, x: usize) -> usize {
    (0..g.order()).find(|&y| g.mul(x, y) == 0).unwrap()
}

pub fn order(g: &GroupTable, x: usize) -> usize {
    let mut acc = x;
    let mut k = 1;
    while acc != 0 {
        acc = g.mul(acc, x);
        k += 1;
    }
    k
}

/// `x⁻¹y⁻¹xy`
pub fn comm(g: &GroupTable, x: usize, y: usize) -> usize {
    g.mul(g.mul(inverse(g, x), inverse(g, y)), g.mul(x, y))
}

pub fn center(g: &GroupTable) -> Vec<usize> {
    g.elements().filter(|&z| g.elements().all(|x| g.mul(x, z) == g.mul(z, x))).collect()
}

fn subsets(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut vec![], f);
}

/// Smallest size of a generating set, by exhaustive search.
pub fn min_generators(g: &GroupTable) -> usize {
    (0..=g.order())
        .find(|&k| {
            let mut found = false;
            subsets(g.order(), k, &mut |s| found = found || closure(g, s).iter().all(|&m| m));
            found
        })
        .unwrap()
}

/// Elements `x` such that no `d−1` elements generate `G` together with `x`,
/// where `d` is the minimal number of generators. For p-groups these are
/// exactly the nongenerators.
pub fn frattini_by_nongenerators(g: &GroupTable) -> Vec<usize> {
    let d = min_generators(g);
    if d == 0 {
        return vec![0];
    }
    let mut generator = vec![false; g.order()];
    subsets(g.order(), d - 1, &mut |s| {
        let span = closure(g, s);
        for x in g.elements() {
            if generator[x] || span[x] {
                continue;
            }
            let mut gens = s.to_vec();
            gens.push(x);
            if closure(g, &gens).iter().all(|&m| m) {
                generator[x] = true;
            }
        }
    });
    g.elements().filter(|&x| !generator[x]).collect()
}

pub fn from_rule(n: usize, mul: impl Fn(usize, usize) -> usize) -> GroupTable {
    let table = (0..n).map(|x| (0..n).map(|y| mul(x, y)).collect()).collect();
    GroupTable::validate(table, None).unwrap()
}

/// Dihedral group of order `2n`; `s^f r^k` has index `k + n·f`.
pub fn dihedral(n: usize) -> GroupTable {
    from_rule(2 * n, |x, y| {
        let (k1, f1) = (x % n, x / n);
        let (k2, f2) = (y % n, y / n);
        // s^f1 r^k1 s^f2 r^k2 = s^(f1+f2) r^(±k1 + k2)
        let k = if f2 == 1 { (n - k1 + k2) % n } else { (k1 + k2) % n };
        k + n * ((f1 + f2) % 2)
    })
}

/// The same group with element `x` renamed to `perm[x]`; `perm[0]` must be 0.
pub fn relabel(g: &GroupTable, perm: &[usize]) -> GroupTable {
    let mut back = vec![0; perm.len()];
    for (x, &y) in perm.iter().enumerate() {
        back[y] = x;
    }
    from_rule(g.order(), |a, b| perm[g.mul(back[a], back[b])])
}
