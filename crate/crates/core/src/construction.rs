//! Construction of a noninner automorphism of order `p` for class-2 p-groups.
//!
//! The pipeline tries, in order:
//!
//! 1. the central-twist map `m·g^i ↦ m·g^i·z^i` when `Z(G)` is noncyclic and
//!    some `z ∈ Ω₁(Z(G))` lies outside `G'`;
//! 2. for `p = 2` with `G'` cyclic of order `2ⁿ`, `n ≥ 2`, an explicit
//!    automorphism of `H = ⟨a, b⟩` extended to `G = H·C_G(H)`;
//! 3. exhaustive search.
//!
//! Whatever branch produces the map, [`certify`] recomputes every claimed
//! property from the Cayley table.

use serde::Serialize;
use thiserror::Error;

use crate::automorphism::{extend_product, is_inner, remark4_map, AutError, Automorphism};
use crate::exec::Execution;
use crate::oracle::{self, OracleError, DEFAULT_BUDGET};
use crate::structure::{
    burnside_basis, center, decompose_hk, derived_subgroup, ds_condition, find_commutator_generators, frattini,
    is_cyclic, nilpotency_class, omega1_center, prime_of_order,
};
use crate::table::{Element, GroupTable, Subgroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseTag {
    Remark4,
    CaseAEvenI,
    CaseBPower,
    CaseCGeneric,
    SearchFallback,
}

impl CaseTag {
    pub const ALL: [CaseTag; 5] =
        [CaseTag::Remark4, CaseTag::CaseAEvenI, CaseTag::CaseBPower, CaseTag::CaseCGeneric, CaseTag::SearchFallback];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Remark4 => "REMARK4",
            CaseTag::CaseAEvenI => "CASE_A_EVEN_I",
            CaseTag::CaseBPower => "CASE_B_POWER",
            CaseTag::CaseCGeneric => "CASE_C_GENERIC",
            CaseTag::SearchFallback => "SEARCH_FALLBACK",
        }
    }

    pub fn parse(s: &str) -> Option<CaseTag> {
        CaseTag::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FixedSet {
    Frattini,
    Omega1Center,
    MaximalSubgroup,
}

impl FixedSet {
    pub fn as_str(self) -> &'static str {
        match self {
            FixedSet::Frattini => "FRATTINI",
            FixedSet::Omega1Center => "OMEGA1_CENTER",
            FixedSet::MaximalSubgroup => "MAXIMAL_SUBGROUP",
        }
    }
}

/// Which way the power relation in `Z(H)` was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Orientation {
    /// `a^{2ⁿi} = b^{2ⁿ}`
    First,
    /// `a^{2ⁿ} = b^{2ⁿi}`
    Second,
}

/// Elements and integers the construction used, as indices into `G`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Orientation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<Element>>,
}

/// An intermediate claim checked during a case construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Verified {
    pub is_automorphism: bool,
    pub order_equals_p: bool,
    pub is_noninner: bool,
    pub fixes_declared_set: bool,
}

impl Verified {
    pub fn all(&self) -> bool {
        self.is_automorphism && self.order_equals_p && self.is_noninner && self.fixes_declared_set
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoninnerCertificate {
    pub case_tag: CaseTag,
    pub fixed_set: FixedSet,
    pub witnesses: Witnesses,
    #[serde(serialize_with = "serialize_perm", rename = "perm")]
    pub automorphism: Automorphism,
    pub verified: Verified,
    /// Case that was attempted before falling back, if any.
    pub attempted_case: Option<CaseTag>,
    pub claims: Vec<Claim>,
    pub fallback_reason: Option<String>,
    pub anomalies: Vec<String>,
}

fn serialize_perm<S: serde::Serializer>(f: &Automorphism, s: S) -> Result<S::Ok, S::Error> {
    f.perm().serialize(s)
}

impl NoninnerCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn claims_hold(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("search fallback failed: {0}")]
    Search(OracleError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("neither a^(2^n i) = b^(2^n) nor a^(2^n) = b^(2^n i) holds for any i")]
    RelationNotFound,
}

#[derive(Debug, Clone, Copy)]
pub struct ConstructionOptions {
    pub budget: u64,
    pub exec: Execution,
}

impl Default for ConstructionOptions {
    fn default() -> Self {
        ConstructionOptions { budget: DEFAULT_BUDGET, exec: Execution::default() }
    }
}

/// Smallest `i ≥ 0` with `a^{2ⁿi} = b^{2ⁿ}`, else smallest with
/// `a^{2ⁿ} = b^{2ⁿi}`.
pub fn resolve_power_relation(
    h: &GroupTable,
    a: Element,
    b: Element,
    n: u32,
) -> Result<(Orientation, u64), RelationError> {
    let q = 1i64 << n;
    let (aq, bq) = (h.power(a, q), h.power(b, q));
    let search = |x: Element, target: Element| {
        (0..h.element_order(x) as u64).find(|&i| h.power(x, i as i64) == target)
    };
    if let Some(i) = search(aq, bq) {
        return Ok((Orientation::First, i));
    }
    if let Some(i) = search(bq, aq) {
        return Ok((Orientation::Second, i));
    }
    Err(RelationError::RelationNotFound)
}

/// Recomputes all four verification flags from scratch.
pub fn certify(g: &GroupTable, p: u64, mut cert: NoninnerCertificate) -> NoninnerCertificate {
    let f = &cert.automorphism;
    let is_automorphism = Automorphism::new(g, f.perm().to_vec()).is_ok();
    let declared = match cert.fixed_set {
        FixedSet::Frattini => Some(frattini(g, p)),
        FixedSet::Omega1Center => Some(omega1_center(g, p)),
        FixedSet::MaximalSubgroup => cert.witnesses.m.as_ref().map(|m| Subgroup::from_members(g.order(), m)),
    };
    let fixes_declared_set = match (&declared, cert.fixed_set) {
        (Some(s), FixedSet::MaximalSubgroup) => {
            g.is_subgroup(s) && s.len() * p as usize == g.order() && f.fixes_pointwise(s)
        }
        (Some(s), _) => f.fixes_pointwise(s),
        (None, _) => false,
    };
    cert.verified = Verified {
        is_automorphism,
        order_equals_p: is_automorphism && f.order() as u64 == p,
        is_noninner: is_automorphism && is_inner(g, f).is_none(),
        fixes_declared_set,
    };
    cert
}

fn check_preconditions(g: &GroupTable, p: u64) -> Result<(), ConstructionError> {
    let bad = |m: String| Err(ConstructionError::PreconditionViolated(m));
    if prime_of_order(g.order()) != Some(p) {
        return bad(format!("group of order {} is not a {p}-group", g.order()));
    }
    if g.is_abelian() {
        return bad("group is abelian".into());
    }
    match nilpotency_class(g) {
        Some(2) => Ok(()),
        Some(c) => bad(format!("nilpotency class is {c}, not 2")),
        None => bad("group is not nilpotent".into()),
    }
}

struct Attempt {
    tag: CaseTag,
    witnesses: Witnesses,
    claims: Vec<Claim>,
    result: Result<(Automorphism, FixedSet), String>,
}

fn fixed_set_for(g: &GroupTable, p: u64, f: &Automorphism) -> FixedSet {
    if f.fixes_pointwise(&frattini(g, p)) {
        FixedSet::Frattini
    } else {
        FixedSet::Omega1Center
    }
}

fn twist_attempt(g: &GroupTable, p: u64) -> Option<Attempt> {
    let z_g = center(g);
    if is_cyclic(g, &z_g).is_some() {
        return None;
    }
    let derived = derived_subgroup(g);
    let z = omega1_center(g, p).members().iter().copied().find(|&z| !derived.contains(z))?;
    let basis = burnside_basis(g, p);
    let coset = basis[0];
    let gens: Vec<Element> = frattini(g, p).members().iter().chain(&basis[1..]).copied().collect();
    let m = g.generated_subgroup(&gens);
    let witnesses = Witnesses { z: Some(z), g: Some(coset), m: Some(m.members().to_vec()), ..Witnesses::default() };
    let result = remark4_map(g, p, &m, coset, z)
        .map(|f| (f, FixedSet::MaximalSubgroup))
        .map_err(|e| format!("central twist: {e}"));
    Some(Attempt { tag: CaseTag::Remark4, witnesses, claims: vec![], result })
}

/// The explicit automorphism of `H = ⟨a, b⟩` for `p = 2`, `n ≥ 2`, extended
/// to `G`.
fn case_attempt(g: &GroupTable, p: u64, a: Element, b: Element, n: u32) -> Attempt {
    let mut w = Witnesses { a: Some(a), b: Some(b), n: Some(n), ..Witnesses::default() };
    let mut claims = vec![];
    let mut tag = CaseTag::CaseAEvenI;
    let result = (|| {
        let (h, k) = decompose_hk(g, a, b).map_err(|e| e.to_string())?;
        let induced = g.subgroup_as_group(&h);
        let (ht, emb) = (&induced.table, &induced.embedding);
        let local = |x: Element| emb.preimage(x).expect("element of H");
        let (la, lb) = (local(a), local(b));
        let z_h = center(ht);
        let z_g = center(g);
        if let Some(&x) = z_h.members().iter().find(|&&x| !z_g.contains(emb.apply(x))) {
            return Err(format!("Z(H) is not inside Z(G): {}", g.label(emb.apply(x))));
        }
        let (orientation, i) = resolve_power_relation(ht, la, lb, n).map_err(|e| e.to_string())?;
        w.orientation = Some(orientation);
        w.i = Some(i);
        let q = 1i64 << n;
        let half = q / 2;
        let i_s = i as i64;
        let mut claim = |name: &str, holds: bool| claims.push(Claim { name: name.to_string(), holds });

        let (gens, images) = if i % 2 == 0 {
            tag = CaseTag::CaseAEvenI;
            let (x, y) = if orientation == Orientation::First { (la, lb) } else { (lb, la) };
            let c = ht.mul(ht.power(x, -i_s), y);
            w.c = Some(emb.apply(c));
            (vec![x, c], vec![ht.mul(x, ht.power(c, half)), c])
        } else if z_h.contains(ht.commutator(la, lb)) && ht.generated_subgroup(&[ht.power(la, q)]).contains(ht.commutator(la, lb)) {
            tag = CaseTag::CaseBPower;
            let c = ht.mul(ht.power(la, -i_s), lb);
            w.c = Some(emb.apply(c));
            claim("|c| = 2^(n+1)", ht.element_order(c) == 2 * q as usize);
            let cq = ht.power(c, q);
            let aq = ht.power(la, q);
            let j = (0..ht.element_order(aq) as u64)
                .find(|&j| ht.power(aq, j as i64) == cq)
                .ok_or_else(|| "no j with a^(2^n j) = c^(2^n)".to_string())?;
            w.j = Some(j);
            claim("j even", j % 2 == 0);
            let d = ht.mul(ht.power(la, -(j as i64)), c);
            w.d = Some(emb.apply(d));
            claim("|d| = 2^n", ht.element_order(d) == q as usize);
            claim("d^(2^(n-1)) not in Z(H)", !z_h.contains(ht.power(d, half)));
            (vec![la, d], vec![ht.mul(la, ht.power(d, half)), d])
        } else {
            tag = CaseTag::CaseCGeneric;
            let e = ht.mul(ht.power(la, -half * i_s), ht.power(lb, half));
            w.e = Some(emb.apply(e));
            claim("Z(H) = H'", z_h == ht.generated_subgroup(&[ht.commutator(la, lb)]));
            claim("|e| = 2", ht.element_order(e) == 2);
            claim("e not in Z(H)", !z_h.contains(e));
            (vec![la, lb], vec![ht.mul(la, e), ht.mul(lb, e)])
        };
        if let Some(c) = claims.iter().find(|c| !c.holds) {
            return Err(format!("claim failed: {}", c.name));
        }
        let f_h = Automorphism::from_generator_images(ht, &gens, &images).map_err(|e: AutError| e.to_string())?;
        if !f_h.fixes_pointwise(&z_h) {
            return Err("map on H moves Z(H)".into());
        }
        let f = extend_product(g, &h, &k, &induced, &f_h).map_err(|e| format!("extension: {e}"))?;
        Ok((f.clone(), fixed_set_for(g, p, &f)))
    })();
    Attempt { tag, witnesses: w, claims, result }
}

/// Produces a verified certificate, falling back to search whenever a
/// constructive branch does not apply or does not verify.
pub fn construct_noninner(g: &GroupTable, p: u64) -> Result<NoninnerCertificate, ConstructionError> {
    construct_noninner_with(g, p, ConstructionOptions::default())
}

pub fn construct_noninner_with(
    g: &GroupTable,
    p: u64,
    opts: ConstructionOptions,
) -> Result<NoninnerCertificate, ConstructionError> {
    check_preconditions(g, p)?;
    let mut anomalies = vec![];
    let mut attempted = None;
    let mut kept_claims = vec![];
    let mut kept_witnesses = Witnesses::default();

    let (attempt, skip_reason) = match twist_attempt(g, p) {
        Some(a) => (Some(a), String::new()),
        None => {
            let derived = derived_subgroup(g);
            if is_cyclic(g, &derived).is_none() {
                (None, "G' is not cyclic".to_string())
            } else if p != 2 {
                (None, format!("p = {p} is odd"))
            } else {
                let n = derived.len().trailing_zeros();
                let (a, b) = find_commutator_generators(g).expect("G' is cyclic and nontrivial");
                if n >= 2 {
                    (Some(case_attempt(g, p, a, b, n)), String::new())
                } else {
                    if ds_condition(g, p) {
                        anomalies.push("THEOREM_VIOLATION: n = 1 while Φ(G) = C_G(Z(Φ(G)))".to_string());
                    }
                    kept_witnesses = Witnesses { a: Some(a), b: Some(b), n: Some(n), ..Witnesses::default() };
                    (None, "p = 2 and n = 1".to_string())
                }
            }
        }
    };
    let reason = match attempt {
        None => skip_reason,
        Some(Attempt { tag, witnesses, claims, result }) => {
            attempted = Some(tag);
            kept_claims = claims;
            kept_witnesses = witnesses;
            match result {
                Ok((f, fixed_set)) => {
                    let cert = certify(
                        g,
                        p,
                        NoninnerCertificate {
                            case_tag: tag,
                            fixed_set,
                            witnesses: kept_witnesses.clone(),
                            automorphism: f,
                            verified: Verified::default(),
                            attempted_case: None,
                            claims: kept_claims.clone(),
                            fallback_reason: None,
                            anomalies: anomalies.clone(),
                        },
                    );
                    if cert.verified.all() {
                        return Ok(cert);
                    }
                    format!("{tag} map failed verification: {:?}", cert.verified)
                }
                Err(stage) => format!("{tag} construction failed: {stage}"),
            }
        }
    };

    let f = oracle::search_fallback_with(g, p, opts.budget, opts.exec).map_err(|e| match e {
        OracleError::NoWitnessFound => ConstructionError::TheoremViolation(e.to_string()),
        e => ConstructionError::Search(e),
    })?;
    let fixed_set = fixed_set_for(g, p, &f);
    Ok(certify(
        g,
        p,
        NoninnerCertificate {
            case_tag: CaseTag::SearchFallback,
            fixed_set,
            witnesses: kept_witnesses,
            automorphism: f,
            verified: Verified::default(),
            attempted_case: attempted,
            claims: kept_claims,
            fallback_reason: Some(reason),
            anomalies,
        },
    ))
}
