mod common;

use common::*;
use pgroup_core::automorphism::{inner_automorphism, Automorphism};
use pgroup_core::exec::Execution;
use pgroup_core::oracle::{enumerate_automorphisms, enumerate_automorphisms_with, search_fallback, theorem_witnesses, DEFAULT_BUDGET};
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn is_automorphism(g: &pgroup_core::table::GroupTable, f: &Automorphism) -> bool {
    g.elements().all(|x| g.elements().all(|y| f.apply(g.mul(x, y)) == g.mul(f.apply(x), f.apply(y))))
}

#[test]
fn enumerations_are_complete_and_sound() {
    for (e, g) in corpus_groups().into_iter().filter(|(_, g)| g.order() <= 64) {
        let en = enumerate_automorphisms(&g, DEFAULT_BUDGET).unwrap();
        assert!(en.complete, "{}", e.name);
        assert!(en.automorphisms.windows(2).all(|w| w[0] < w[1]));
        assert!(en.automorphisms.iter().any(|f| f.is_identity()));
        for f in &en.automorphisms {
            assert!(is_automorphism(&g, f), "{}", e.name);
        }
        for x in g.elements() {
            assert!(en.contains(&inner_automorphism(&g, x)), "{}", e.name);
        }
        let inn = g.order() / center(&g).len();
        assert_eq!(en.automorphisms.len() % inn, 0, "{}", e.name);
    }
}

#[test]
fn known_counts() {
    let count = |name: &str| {
        let g = pgroup_core::corpus::find(name).unwrap().load().unwrap();
        enumerate_automorphisms(&g, DEFAULT_BUDGET).unwrap().automorphisms.len()
    };
    assert_eq!(count("q8"), 24);
    assert_eq!(count("d8"), 8);
    assert_eq!(count("heis_z2"), 8);
    assert_eq!(count("z2"), 1);
    assert_eq!(count("z8"), 4);
    assert_eq!(count("m16"), 16);
}

#[test]
fn counts_survive_relabeling() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for name in ["q8", "m16", "q8_x_z4", "es27"] {
        let entry = pgroup_core::corpus::find(name).unwrap();
        let g = entry.load().unwrap();
        let mut perm: Vec<usize> = (1..g.order()).collect();
        perm.shuffle(&mut rng);
        perm.insert(0, 0);
        let h = relabel(&g, &perm);
        let a = enumerate_automorphisms(&g, DEFAULT_BUDGET).unwrap();
        let b = enumerate_automorphisms(&h, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.automorphisms.len(), b.automorphisms.len(), "{name}");
        let p = entry.expected.p.unwrap();
        assert_eq!(
            theorem_witnesses(&g, p, &a).unwrap().len(),
            theorem_witnesses(&h, p, &b).unwrap().len(),
            "{name}"
        );
    }
}

#[test]
fn sequential_and_parallel_agree() {
    for name in ["es32_plus", "w_b", "es27"] {
        let g = pgroup_core::corpus::find(name).unwrap().load().unwrap();
        let a = enumerate_automorphisms_with(&g, DEFAULT_BUDGET, Execution::Sequential).unwrap();
        let b = enumerate_automorphisms_with(&g, DEFAULT_BUDGET, Execution::Parallel).unwrap();
        assert_eq!(a.automorphisms, b.automorphisms, "{name}");
    }
}

#[test]
fn fallback_witnesses_for_small_groups() {
    for name in ["q8", "m16", "es32_plus", "es32_minus"] {
        let g = pgroup_core::corpus::find(name).unwrap().load().unwrap();
        let f = search_fallback(&g, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(f.order(), 2, "{name}");
        assert!(is_automorphism(&g, &f));
        assert!(g.elements().all(|x| f != inner_automorphism(&g, x)), "{name}");
    }
}
