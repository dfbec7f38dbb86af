mod common;

use common::*;
use pgroup_core::automorphism::{inner_automorphism, Automorphism};
use pgroup_core::construction::{
    certify, construct_noninner, construct_noninner_with, resolve_power_relation, CaseTag, ConstructionError,
    ConstructionOptions, FixedSet, NoninnerCertificate, Orientation, Verified, Witnesses,
};
use pgroup_core::corpus::find;
use pgroup_core::exec::Execution;
use pgroup_core::oracle::{enumerate_automorphisms, theorem_witnesses, DEFAULT_BUDGET};
use pgroup_core::structure::{frattini, omega1_center};
use pgroup_core::table::GroupTable;

fn group(name: &str) -> GroupTable {
    find(name).unwrap().load().unwrap()
}

fn bare(f: Automorphism, fixed_set: FixedSet) -> NoninnerCertificate {
    NoninnerCertificate {
        case_tag: CaseTag::SearchFallback,
        fixed_set,
        witnesses: Witnesses::default(),
        automorphism: f,
        verified: Verified::default(),
        attempted_case: None,
        claims: vec![],
        fallback_reason: None,
        anomalies: vec![],
    }
}

/// Subgroup generated by `gens`, as a mask.
fn span(g: &GroupTable, gens: &[usize]) -> Vec<bool> {
    closure(g, gens)
}

#[test]
fn every_class_two_entry_gets_a_verified_certificate() {
    for (e, g) in class2_groups() {
        let p = e.expected.p.unwrap();
        let cert = construct_noninner(&g, p).unwrap();
        assert!(cert.verified.all(), "{}: {:?}", e.name, cert.verified);
        assert!(cert.anomalies.is_empty(), "{}", e.name);
        assert_eq!(Some(cert.case_tag), e.expected.case_tag, "{}", e.name);
        let f = &cert.automorphism;
        assert_eq!(order_of_map(f), p as usize, "{}", e.name);
        assert!(g.elements().all(|x| g.elements().all(|y| f.apply(g.mul(x, y)) == g.mul(f.apply(x), f.apply(y)))));
        assert!(g.elements().all(|x| *f != inner_automorphism(&g, x)), "{}", e.name);
        let phi = frattini_by_nongenerators_or_lib(&g, p);
        let fixes_phi = phi.iter().all(|&x| f.apply(x) == x);
        let omega: Vec<usize> = center(&g).into_iter().filter(|&z| pow(&g, z, p) == 0).collect();
        let fixes_omega = omega.iter().all(|&x| f.apply(x) == x);
        assert!(fixes_phi || fixes_omega, "{}", e.name);
    }
}

fn order_of_map(f: &Automorphism) -> usize {
    let mut k = 1;
    let mut h = f.clone();
    while !h.is_identity() {
        h = h.then(f);
        k += 1;
    }
    k
}

fn frattini_by_nongenerators_or_lib(g: &GroupTable, p: u64) -> Vec<usize> {
    if g.order() <= 32 {
        frattini_by_nongenerators(g)
    } else {
        frattini(g, p).members().to_vec()
    }
}

#[test]
fn heis_z4_takes_case_a_with_i_zero() {
    let g = group("heis_z4");
    let cert = construct_noninner(&g, 2).unwrap();
    assert_eq!(cert.case_tag, CaseTag::CaseAEvenI);
    assert_eq!(cert.witnesses.i, Some(0));
    assert_eq!(cert.witnesses.n, Some(2));
    assert_eq!(cert.witnesses.orientation, Some(Orientation::First));
    let en = enumerate_automorphisms(&g, DEFAULT_BUDGET).unwrap();
    assert!(theorem_witnesses(&g, 2, &en).unwrap().contains(&cert.automorphism));
}

#[test]
fn mirrored_orientation() {
    let g = group("heis_z4_mirror");
    let cert = construct_noninner(&g, 2).unwrap();
    assert_eq!(cert.case_tag, CaseTag::CaseAEvenI);
    assert_eq!(cert.witnesses.orientation, Some(Orientation::Second));
    assert!(cert.verified.all());
}

#[test]
fn power_relation_resolution() {
    let g = group("heis_z4");
    let (a, b) = (g.find_label("a").unwrap(), g.find_label("b").unwrap());
    assert_eq!(resolve_power_relation(&g, a, b, 2), Ok((Orientation::First, 0)));
    let g = group("w_c");
    let (a, b) = (g.find_label("a").unwrap(), g.find_label("b").unwrap());
    assert_eq!(resolve_power_relation(&g, a, b, 2), Ok((Orientation::First, 1)));
    let g = group("heis_z4_mirror");
    let (a, b) = (g.find_label("a").unwrap(), g.find_label("b").unwrap());
    assert_eq!(resolve_power_relation(&g, a, b, 2), Ok((Orientation::Second, 0)));
}

#[test]
fn case_b_intermediate_claims() {
    let g = group("w_b");
    let cert = construct_noninner(&g, 2).unwrap();
    assert_eq!(cert.case_tag, CaseTag::CaseBPower);
    let w = &cert.witnesses;
    let (a, b, n) = (w.a.unwrap(), w.b.unwrap(), w.n.unwrap());
    let q = 1u64 << n;
    assert_eq!(w.i.unwrap() % 2, 1);
    assert_eq!(w.j.unwrap() % 2, 0);
    let d = w.d.unwrap();
    assert_eq!(order(&g, d), q as usize);
    let h = span(&g, &[a, b]);
    let z_h: Vec<usize> = g.elements().filter(|&z| h[z] && g.elements().filter(|&x| h[x]).all(|x| g.mul(x, z) == g.mul(z, x))).collect();
    assert!(!z_h.contains(&pow(&g, d, q / 2)));
    assert!(z_h.iter().all(|z| center(&g).contains(z)));
    assert!(cert.claims_hold());
}

#[test]
fn case_c_intermediate_claims() {
    let g = group("w_c");
    let cert = construct_noninner(&g, 2).unwrap();
    assert_eq!(cert.case_tag, CaseTag::CaseCGeneric);
    let w = &cert.witnesses;
    let (a, b) = (w.a.unwrap(), w.b.unwrap());
    let e = w.e.unwrap();
    assert_eq!(order(&g, e), 2);
    let h = span(&g, &[a, b]);
    let commutes_with_h = g.elements().filter(|&x| h[x]).all(|x| g.mul(x, e) == g.mul(e, x));
    assert!(!commutes_with_h);
    assert_eq!(cert.automorphism.apply(a), g.mul(a, e));
    assert_eq!(cert.automorphism.apply(b), g.mul(b, e));
}

#[test]
fn central_twist_fixes_a_maximal_subgroup() {
    for name in ["d8_x_z2", "q8_x_z4"] {
        let g = group(name);
        let cert = construct_noninner(&g, 2).unwrap();
        assert_eq!(cert.case_tag, CaseTag::Remark4);
        assert_eq!(cert.fixed_set, FixedSet::MaximalSubgroup);
        let m = cert.witnesses.m.clone().unwrap();
        assert_eq!(m.len() * 2, g.order());
        assert!(m.iter().all(|&x| cert.automorphism.apply(x) == x));
        assert!(frattini(&g, 2).members().iter().all(|x| m.contains(x)));
        let z = cert.witnesses.z.unwrap();
        let comms: Vec<usize> = g.elements().flat_map(|x| g.elements().map(move |y| (x, y))).map(|(x, y)| comm(&g, x, y)).collect();
        assert!(!closure(&g, &comms)[z]);
    }
}

#[test]
fn fallbacks_record_their_reason() {
    let cert = construct_noninner(&group("q8"), 2).unwrap();
    assert_eq!(cert.case_tag, CaseTag::SearchFallback);
    assert_eq!(cert.fallback_reason.as_deref(), Some("p = 2 and n = 1"));
    assert_eq!(cert.fixed_set, FixedSet::Frattini);
    let cert = construct_noninner(&group("es27"), 3).unwrap();
    assert_eq!(cert.fallback_reason.as_deref(), Some("p = 3 is odd"));
    assert_eq!(cert.automorphism.order(), 3);
}

#[test]
fn preconditions() {
    let d16 = dihedral(8);
    assert!(matches!(construct_noninner(&d16, 2), Err(ConstructionError::PreconditionViolated(_))));
    assert!(matches!(construct_noninner(&group("z8"), 2), Err(ConstructionError::PreconditionViolated(_))));
    assert!(matches!(construct_noninner(&dihedral(3), 2), Err(ConstructionError::PreconditionViolated(_))));
    assert!(matches!(construct_noninner(&group("q8"), 3), Err(ConstructionError::PreconditionViolated(_))));
}

#[test]
fn certify_recomputes_flags() {
    let g = group("q8");
    let cert = certify(&g, 2, bare(Automorphism::identity(&g), FixedSet::Frattini));
    assert_eq!(
        cert.verified,
        Verified { is_automorphism: true, order_equals_p: false, is_noninner: false, fixes_declared_set: true }
    );
    let i = g.find_label("i").unwrap();
    let cert = certify(&g, 2, bare(inner_automorphism(&g, i), FixedSet::Omega1Center));
    assert_eq!(
        cert.verified,
        Verified { is_automorphism: true, order_equals_p: true, is_noninner: false, fixes_declared_set: true }
    );
    let mut lie = construct_noninner(&group("heis_z4"), 2).unwrap();
    lie.verified = Verified::default();
    assert!(certify(&group("heis_z4"), 2, lie).verified.all());
}

#[test]
fn fixed_set_is_honest() {
    for (e, g) in class2_groups() {
        let p = e.expected.p.unwrap();
        let cert = construct_noninner(&g, p).unwrap();
        let f = &cert.automorphism;
        match cert.fixed_set {
            FixedSet::Frattini => assert!(f.fixes_pointwise(&frattini(&g, p))),
            FixedSet::Omega1Center => {
                assert!(f.fixes_pointwise(&omega1_center(&g, p)));
                assert!(!f.fixes_pointwise(&frattini(&g, p)));
            }
            FixedSet::MaximalSubgroup => assert_eq!(cert.case_tag, CaseTag::Remark4),
        }
    }
}

#[test]
fn certificates_are_deterministic() {
    for name in ["q8", "heis_z4", "w_b", "q8_x_z4", "es27"] {
        let g = group(name);
        let p = find(name).unwrap().expected.p.unwrap();
        let seq = ConstructionOptions { exec: Execution::Sequential, ..ConstructionOptions::default() };
        let a = construct_noninner(&g, p).unwrap().to_json();
        let b = construct_noninner(&g, p).unwrap().to_json();
        let c = construct_noninner_with(&g, p, seq).unwrap().to_json();
        assert_eq!(a, b, "{name}");
        assert_eq!(a, c, "{name}");
    }
}

#[test]
fn certificate_json_keys_in_schema_order() {
    let json = construct_noninner(&group("w_c"), 2).unwrap().to_json();
    let keys = ["\"case_tag\"", "\"fixed_set\"", "\"witnesses\"", "\"perm\"", "\"verified\""];
    let positions: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{json}");
    assert!(json.starts_with("{\"case_tag\":\"CASE_C_GENERIC\",\"fixed_set\":"));
}
