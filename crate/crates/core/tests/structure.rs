mod common;

use common::*;
use pgroup_core::structure::{
    center as lib_center, decompose_hk, derived_subgroup, find_commutator_generators, frattini, nilpotency_class,
    profile, StructureError,
};

#[test]
fn frattini_matches_nongenerators() {
    for (e, g) in corpus_groups().into_iter().filter(|(_, g)| g.order() <= 32) {
        let p = e.expected.p.unwrap();
        assert_eq!(frattini(&g, p).members(), frattini_by_nongenerators(&g), "{}", e.name);
    }
}

#[test]
fn centers_match_brute_force() {
    for (e, g) in corpus_groups() {
        assert_eq!(lib_center(&g).members(), center(&g), "{}", e.name);
    }
}

#[test]
fn derived_subgroup_is_generated_by_commutators() {
    for (e, g) in corpus_groups() {
        let comms: Vec<usize> = g.elements().flat_map(|x| g.elements().map(move |y| (x, y))).map(|(x, y)| comm(&g, x, y)).collect();
        let mask = closure(&g, &comms);
        let expected: Vec<usize> = g.elements().filter(|&x| mask[x]).collect();
        assert_eq!(derived_subgroup(&g).members(), expected, "{}", e.name);
    }
}

#[test]
fn class_three_is_detected() {
    let d16 = dihedral(8);
    assert_eq!(nilpotency_class(&d16), Some(3));
    let prof = profile(&d16, 2).unwrap();
    assert_eq!(prof.n, Some(2));
    assert_eq!(profile(&dihedral(3), 2), Err(StructureError::NotPGroup { order: 6, p: 2 }));
}

/// `G = ⟨a,b⟩·C_G(⟨a,b⟩)` element for element, for every corpus group with
/// cyclic `G'`.
#[test]
fn hk_product_is_everything() {
    for (e, g) in class2_groups() {
        let Ok((a, b)) = find_commutator_generators(&g) else { continue };
        let (h, k) = decompose_hk(&g, a, b).unwrap();
        let mut seen = vec![false; g.order()];
        for &x in h.members() {
            for &y in k.members() {
                seen[g.mul(x, y)] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "{}", e.name);
        assert!(k.members().iter().all(|&y| g.mul(a, y) == g.mul(y, a) && g.mul(b, y) == g.mul(y, b)));
    }
}

/// `|[x,y]| = 2ⁿ` and `x^{m2ⁿ} = y^{−2ⁿ}` give `|xᵐy| = 2^{n+1}` for odd `m`
/// and `2ⁿ` for even `m`.
#[test]
fn order_law_exhaustive() {
    let mut checked = 0;
    for (e, g) in class2_groups().into_iter().filter(|(e, g)| e.expected.p == Some(2) && g.order() <= 64) {
        for x in g.elements() {
            for y in g.elements() {
                let c = order(&g, comm(&g, x, y));
                if c == 1 {
                    continue;
                }
                let q = c as u64;
                let target = inverse(&g, pow(&g, y, q));
                let ox = order(&g, x) as u64;
                for m in 0..ox {
                    if pow(&g, x, m * q) != target {
                        continue;
                    }
                    let o = order(&g, g.mul(pow(&g, x, m), y));
                    let want = if m % 2 == 1 { 2 * c } else { c };
                    assert_eq!(o, want, "{}: x={x} y={y} m={m}", e.name);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000, "{checked}");
}
