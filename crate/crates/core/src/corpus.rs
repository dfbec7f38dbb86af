//! Built-in presentations and the self-test that runs the pipeline on them.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::construction::{construct_noninner_with, CaseTag, ConstructionError, ConstructionOptions, Verified};
use crate::exec::Execution;
use crate::oracle::{enumerate_automorphisms_with, theorem_witnesses};
use crate::pc::{PcError, PcPresentation};
use crate::structure::profile;
use crate::table::GroupTable;

/// Profile fields an entry is expected to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Expected {
    pub p: Option<u64>,
    pub order: Option<usize>,
    pub class: Option<usize>,
    pub n: Option<u32>,
    /// `None` means the pipeline must reject the group as out of scope.
    pub case_tag: Option<CaseTag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub source: &'static str,
    pub expected: Expected,
}

impl CorpusEntry {
    pub fn presentation(&self) -> Result<PcPresentation, PcError> {
        PcPresentation::parse(self.source)
    }

    pub fn load(&self) -> Result<GroupTable, PcError> {
        Ok(self.presentation()?.to_cayley()?.0)
    }
}

macro_rules! entry {
    ($name:literal, $desc:literal, $p:expr, $order:expr, $class:expr, $n:expr, $case:expr) => {
        CorpusEntry {
            name: $name,
            description: $desc,
            source: include_str!(concat!("../corpus/", $name, ".pc")),
            expected: Expected { p: Some($p), order: Some($order), class: Some($class), n: Some($n), case_tag: $case },
        }
    };
}

use CaseTag::*;

pub const CORPUS: &[CorpusEntry] = &[
    entry!("d8", "dihedral, order 8", 2, 8, 2, 1, Some(SearchFallback)),
    entry!("q8", "quaternion, order 8", 2, 8, 2, 1, Some(SearchFallback)),
    entry!("m16", "modular, order 16", 2, 16, 2, 1, Some(SearchFallback)),
    entry!("es32_plus", "extraspecial 2^(1+4), plus type", 2, 32, 2, 1, Some(SearchFallback)),
    entry!("es32_minus", "extraspecial 2^(1+4), minus type", 2, 32, 2, 1, Some(SearchFallback)),
    entry!("heis_z2", "Heisenberg over Z/2", 2, 8, 2, 1, Some(SearchFallback)),
    entry!("heis_z4", "Heisenberg over Z/4", 2, 64, 2, 2, Some(CaseAEvenI)),
    entry!("heis_z4_mirror", "a^4 = 1, b^4 = [b,a]", 2, 64, 2, 2, Some(CaseAEvenI)),
    entry!("heis_z4_cz8", "Heisenberg type, center Z/8", 2, 128, 2, 2, Some(CaseAEvenI)),
    entry!("w_b", "a^4 = b^4 = [b,a]", 2, 64, 2, 2, Some(CaseBPower)),
    entry!("w_c", "a^4 = b^4 = [b,a]^2", 2, 64, 2, 2, Some(CaseCGeneric)),
    entry!("d8_x_z2", "D8 x Z/2", 2, 16, 2, 1, Some(Remark4)),
    entry!("q8_x_z4", "Q8 x Z/4", 2, 32, 2, 1, Some(Remark4)),
    entry!("es27", "extraspecial 3^(1+2), exponent 3", 3, 27, 2, 1, Some(SearchFallback)),
    entry!("es125", "extraspecial 5^(1+2), exponent 5", 5, 125, 2, 1, Some(SearchFallback)),
    entry!("z2", "cyclic, order 2", 2, 2, 1, 0, None),
    entry!("z8", "cyclic, order 8", 2, 8, 1, 0, None),
];

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub construction: ConstructionOptions,
    /// Oracle cross-checks run only up to this order.
    pub oracle_max_order: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { construction: ConstructionOptions::default(), oracle_max_order: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub complete: bool,
    pub aut_count: usize,
    pub witness_count: usize,
    pub contains_certificate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub group: Option<String>,
    pub p: Option<u64>,
    pub order: Option<usize>,
    pub class: Option<usize>,
    pub n: Option<u32>,
    pub case_tag: Option<CaseTag>,
    pub verified: Option<Verified>,
    pub claims_hold: Option<bool>,
    pub oracle: Option<OracleCheck>,
    pub mismatches: Vec<String>,
    pub theorem_violation: bool,
    pub pass: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn check<T: PartialEq + std::fmt::Debug>(out: &mut Vec<String>, what: &str, expected: Option<T>, actual: Option<T>) {
    if let Some(e) = expected {
        if actual.as_ref() != Some(&e) {
            out.push(format!("{what}: expected {e:?}, got {actual:?}"));
        }
    }
}

/// Loads, profiles and runs the pipeline on one entry, comparing against the
/// expected fields. Small groups are cross-checked against the oracle.
pub fn run_entry(entry: &CorpusEntry, opts: RunOptions) -> EntryReport {
    let start = Instant::now();
    let mut report = EntryReport {
        name: entry.name.to_string(),
        group: None,
        p: None,
        order: None,
        class: None,
        n: None,
        case_tag: None,
        verified: None,
        claims_hold: None,
        oracle: None,
        mismatches: vec![],
        theorem_violation: false,
        pass: false,
        elapsed: Duration::ZERO,
    };
    let exec = opts.construction.exec;
    let presentation = match entry.presentation() {
        Ok(p) => p,
        Err(e) => {
            report.mismatches.push(format!("parse: {e}"));
            report.elapsed = start.elapsed();
            return report;
        }
    };
    let g = match presentation.to_cayley_with(exec) {
        Ok((g, _)) => g,
        Err(e) => {
            report.mismatches.push(format!("presentation: {e}"));
            report.elapsed = start.elapsed();
            return report;
        }
    };
    let p = presentation.prime();
    report.group = Some(g.fingerprint());
    match profile(&g, p) {
        Ok(prof) => {
            report.p = Some(prof.prime);
            report.order = Some(prof.order);
            report.class = Some(prof.nilpotency_class);
            report.n = prof.n;
        }
        Err(e) => report.mismatches.push(format!("profile: {e}")),
    }
    let ex = entry.expected;
    check(&mut report.mismatches, "p", ex.p, report.p);
    check(&mut report.mismatches, "order", ex.order, report.order);
    check(&mut report.mismatches, "class", ex.class, report.class);
    check(&mut report.mismatches, "n", ex.n, report.n);

    let mut certificate = None;
    match construct_noninner_with(&g, p, opts.construction) {
        Ok(cert) => {
            report.case_tag = Some(cert.case_tag);
            report.verified = Some(cert.verified);
            report.claims_hold = Some(cert.claims_hold());
            if !cert.verified.all() {
                report.mismatches.push(format!("certificate not verified: {:?}", cert.verified));
            }
            if !cert.claims_hold() {
                report.mismatches.push("intermediate claim failed".into());
            }
            if !cert.anomalies.is_empty() {
                report.theorem_violation = true;
                report.mismatches.extend(cert.anomalies.iter().cloned());
            }
            match ex.case_tag {
                Some(t) if t != cert.case_tag => {
                    report.mismatches.push(format!("case_tag: expected {t}, got {}", cert.case_tag))
                }
                None => report.mismatches.push("expected the pipeline to reject this group".into()),
                _ => {}
            }
            certificate = Some(cert);
        }
        Err(ConstructionError::PreconditionViolated(why)) => {
            if ex.case_tag.is_some() {
                report.mismatches.push(format!("precondition violated: {why}"));
            }
        }
        Err(e) => {
            report.theorem_violation = matches!(e, ConstructionError::TheoremViolation(_));
            report.mismatches.push(e.to_string());
        }
    }

    if let Some(cert) = &certificate {
        if g.order() <= opts.oracle_max_order {
            match enumerate_automorphisms_with(&g, opts.construction.budget, exec) {
                Ok(e) => {
                    let witnesses = theorem_witnesses(&g, p, &e).unwrap_or_default();
                    let check = OracleCheck {
                        complete: e.complete,
                        aut_count: e.automorphisms.len(),
                        witness_count: witnesses.len(),
                        contains_certificate: e.contains(&cert.automorphism),
                    };
                    if !check.complete {
                        report.mismatches.push("oracle enumeration incomplete".into());
                    }
                    if check.witness_count == 0 {
                        report.mismatches.push("oracle found no witness".into());
                    }
                    if !check.contains_certificate {
                        report.mismatches.push("certificate not in the enumeration".into());
                    }
                    report.oracle = Some(check);
                }
                Err(e) => report.mismatches.push(format!("oracle: {e}")),
            }
        }
    }
    report.pass = report.mismatches.is_empty();
    report.elapsed = start.elapsed();
    report
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub entries: Vec<EntryReport>,
    /// Number of entries per case tag, in tag order.
    pub case_coverage: Vec<(CaseTag, usize)>,
    pub all_pass: bool,
}

impl CorpusReport {
    pub fn covers_every_case(&self) -> bool {
        self.case_coverage.iter().all(|&(_, k)| k > 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run_entries(entries: &[CorpusEntry], opts: RunOptions) -> CorpusReport {
    let outer = opts.construction.exec;
    let inner = RunOptions {
        construction: ConstructionOptions { exec: Execution::Sequential, ..opts.construction },
        ..opts
    };
    let reports = outer.map_slice(entries, |e| run_entry(e, inner));
    let case_coverage = CaseTag::ALL
        .iter()
        .map(|&t| (t, reports.iter().filter(|r| r.pass && r.case_tag == Some(t)).count()))
        .collect();
    let all_pass = reports.iter().all(|r| r.pass);
    CorpusReport { entries: reports, case_coverage, all_pass }
}

/// Runs every built-in entry; reports come back in corpus order.
pub fn run_all(opts: RunOptions) -> CorpusReport {
    run_entries(CORPUS, opts)
}
