//! `pgroup`: profiles, noninner automorphisms and corpus runs for finite
//! class-2 p-groups.

mod load;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use pgroup_core::construction::{construct_noninner_with, ConstructionError, ConstructionOptions, NoninnerCertificate};
use pgroup_core::corpus::{self, CorpusReport, RunOptions};
use pgroup_core::exec::Execution;
use pgroup_core::oracle::{enumerate_automorphisms_with, oracle_report, OracleReport, DEFAULT_BUDGET};
use pgroup_core::pc::AssociativityCheck;
use pgroup_core::structure::{burnside_basis, profile, GroupProfile};
use pgroup_core::table::{GroupTable, Subgroup};

use load::{load, read_presentation, Format};

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Precondition(String),
    TheoremViolation(String),
    /// A report that must still reach stdout before the error.
    WithReport(String, Box<CliError>),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 1,
            CliError::Precondition(_) => 2,
            CliError::TheoremViolation(_) => 3,
            CliError::WithReport(_, e) => e.code(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "error: {m}"),
            CliError::Parse(m) => write!(f, "error: {m}"),
            CliError::Precondition(m) => write!(f, "precondition violated: {m}"),
            CliError::TheoremViolation(m) => write!(f, "THEOREM_VIOLATION: {m}"),
            CliError::WithReport(_, e) => e.fmt(f),
        }
    }
}

#[derive(Parser)]
#[command(name = "pgroup", version, about = "Noninner automorphisms of finite class-2 p-groups")]
struct Cli {
    /// Run every loop on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the structural profile of a group.
    Info {
        /// corpus:<name>, pc:<path>, cayley:<path> or a file path
        source: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        json: bool,
    },
    /// Construct and certify a noninner automorphism of order p.
    Noninner {
        source: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        json: bool,
        /// Also check the result against exhaustive enumeration of Aut(G).
        #[arg(long)]
        verify_oracle: bool,
    },
    /// List the built-in corpus, or run the pipeline on all of it.
    Corpus {
        #[arg(long)]
        run_all: bool,
        #[arg(long)]
        json: bool,
    },
    /// Parse a presentation file and check its consistency.
    Parse {
        path: String,
        /// Write the Cayley table to this file.
        #[arg(long)]
        emit_cayley: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn budget() -> Result<u64, CliError> {
    match std::env::var("PGROUP_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Parse(format!("PGROUP_BUDGET={v} is not a node count"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn labels(g: &GroupTable, s: &Subgroup) -> String {
    let names: Vec<String> = s.members().iter().map(|&x| g.label(x)).collect();
    format!("{{{}}}", names.join(", "))
}

#[derive(Serialize)]
struct InfoOutput<'a> {
    group: String,
    profile: &'a GroupProfile,
}

fn cmd_info(source: &str, format: Option<Format>, json: bool, exec: Execution) -> Result<String, CliError> {
    let loaded = load(source, format, exec)?;
    let p = loaded.prime()?;
    let g = &loaded.table;
    let prof = profile(g, p).map_err(|e| CliError::Precondition(e.to_string()))?;
    if json {
        return Ok(to_json(&InfoOutput { group: g.fingerprint(), profile: &prof }));
    }
    let mut out = String::new();
    let yn = |b: bool| if b { "yes" } else { "no" };
    writeln!(out, "group        {}", g.fingerprint()).unwrap();
    writeln!(out, "order        {} (p = {p})", prof.order).unwrap();
    writeln!(out, "class        {}", prof.nilpotency_class).unwrap();
    writeln!(out, "abelian      {}", yn(prof.abelian)).unwrap();
    writeln!(out, "center       order {}, cyclic: {}", prof.center.len(), yn(prof.center_cyclic)).unwrap();
    writeln!(out, "derived      order {}, cyclic: {}", prof.derived.len(), yn(prof.derived_cyclic)).unwrap();
    if let Some(n) = prof.n {
        writeln!(out, "n            {n}").unwrap();
    }
    writeln!(out, "frattini     order {} {}", prof.frattini.len(), labels(g, &prof.frattini)).unwrap();
    writeln!(out, "omega1(Z)    order {} {}", prof.omega1_center.len(), labels(g, &prof.omega1_center)).unwrap();
    writeln!(out, "exp G/Z      {}", prof.quotient_exponent).unwrap();
    writeln!(out, "DS           {}", yn(prof.ds_condition)).unwrap();
    if let Some((a, b)) = prof.commutator_pair {
        writeln!(out, "pair         a = {}, b = {}", g.label(a), g.label(b)).unwrap();
    }
    Ok(out)
}

#[derive(Serialize)]
struct OracleCheck {
    #[serde(flatten)]
    report: OracleReport,
    contains_certificate: bool,
}

#[derive(Serialize)]
struct NoninnerOutput<'a> {
    group: String,
    prime: u64,
    order: usize,
    certificate: &'a NoninnerCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<&'a OracleCheck>,
}

fn describe_certificate(g: &GroupTable, p: u64, cert: &NoninnerCertificate) -> String {
    let mut out = String::new();
    let w = &cert.witnesses;
    let yn = |b: bool| if b { "yes" } else { "NO" };
    writeln!(out, "case         {}", cert.case_tag).unwrap();
    writeln!(out, "fixed set    {}", cert.fixed_set.as_str()).unwrap();
    let mut parts = vec![];
    for (name, x) in [("a", w.a), ("b", w.b), ("c", w.c), ("d", w.d), ("e", w.e), ("z", w.z), ("g", w.g)] {
        if let Some(x) = x {
            parts.push(format!("{name} = {}", g.label(x)));
        }
    }
    if let Some(n) = w.n {
        parts.push(format!("n = {n}"));
    }
    if let Some(i) = w.i {
        parts.push(format!("i = {i}"));
    }
    if let Some(j) = w.j {
        parts.push(format!("j = {j}"));
    }
    if let Some(o) = w.orientation {
        parts.push(format!("orientation = {o:?}"));
    }
    if let Some(m) = &w.m {
        parts.push(format!("|M| = {}", m.len()));
    }
    if !parts.is_empty() {
        writeln!(out, "witnesses    {}", parts.join(", ")).unwrap();
    }
    let images: Vec<String> = burnside_basis(g, p)
        .into_iter()
        .map(|x| format!("{} -> {}", g.label(x), g.label(cert.automorphism.apply(x))))
        .collect();
    writeln!(out, "map          {}", images.join(", ")).unwrap();
    let v = cert.verified;
    writeln!(
        out,
        "verified     automorphism: {}, order p: {}, noninner: {}, fixes set: {}",
        yn(v.is_automorphism),
        yn(v.order_equals_p),
        yn(v.is_noninner),
        yn(v.fixes_declared_set)
    )
    .unwrap();
    for c in &cert.claims {
        writeln!(out, "claim        {}: {}", c.name, yn(c.holds)).unwrap();
    }
    if let Some(r) = &cert.fallback_reason {
        writeln!(out, "fallback     {r}").unwrap();
    }
    for a in &cert.anomalies {
        writeln!(out, "anomaly      {a}").unwrap();
    }
    out
}

fn cmd_noninner(
    source: &str,
    format: Option<Format>,
    json: bool,
    verify_oracle: bool,
    exec: Execution,
) -> Result<String, CliError> {
    let loaded = load(source, format, exec)?;
    let p = loaded.prime()?;
    let g = &loaded.table;
    let opts = ConstructionOptions { budget: budget()?, exec };
    let cert = construct_noninner_with(g, p, opts).map_err(|e| match e {
        ConstructionError::PreconditionViolated(m) => CliError::Precondition(m),
        ConstructionError::TheoremViolation(m) => CliError::TheoremViolation(m),
        e @ ConstructionError::Search(_) => CliError::Io(e.to_string()),
    })?;
    let oracle = if verify_oracle {
        let e = enumerate_automorphisms_with(g, opts.budget, exec).map_err(|e| CliError::Io(e.to_string()))?;
        if !e.complete {
            return Err(CliError::Io(format!("oracle enumeration stopped after {} nodes", e.nodes)));
        }
        Some(OracleCheck { report: oracle_report(g, p, &e), contains_certificate: e.contains(&cert.automorphism) })
    } else {
        None
    };
    let out = if json {
        to_json(&NoninnerOutput {
            group: g.fingerprint(),
            prime: p,
            order: g.order(),
            certificate: &cert,
            oracle: oracle.as_ref(),
        })
    } else {
        let mut out = describe_certificate(g, p, &cert);
        if let Some(o) = &oracle {
            writeln!(
                out,
                "oracle       |Aut| = {}, |Inn| = {}, witnesses = {}, contains certificate: {}",
                o.report.aut_count,
                o.report.inn_count,
                o.report.witness_count.unwrap_or(0),
                if o.contains_certificate { "yes" } else { "NO" }
            )
            .unwrap();
        }
        out
    };
    let fail = |why: String| Err(CliError::WithReport(out.clone(), Box::new(CliError::TheoremViolation(why))));
    if !cert.anomalies.is_empty() {
        return fail(cert.anomalies.join("; "));
    }
    if !cert.verified.all() {
        return fail("certificate did not verify".into());
    }
    if let Some(o) = &oracle {
        if o.report.witness_count.unwrap_or(0) == 0 || !o.contains_certificate {
            return fail("oracle disagrees with the certificate".into());
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct ListRow {
    name: &'static str,
    description: &'static str,
    p: Option<u64>,
    order: Option<usize>,
    class: Option<usize>,
    n: Option<u32>,
    expected_case: Option<String>,
}

fn matrix(report: &CorpusReport) -> String {
    let mut out = format!(
        "{:<16} {:>5} {:>2}  {:<16} {:<5} {:<6} {:<10} {:<5} {:>9}\n",
        "name", "order", "p", "case", "flags", "claims", "oracle", "pass", "time"
    );
    let mark = |b: Option<bool>| match b {
        Some(true) => "ok",
        Some(false) => "FAIL",
        None => "-",
    };
    for r in &report.entries {
        let oracle = match &r.oracle {
            Some(o) if o.contains_certificate && o.witness_count > 0 => format!("{}/{}", o.witness_count, o.aut_count),
            Some(_) => "FAIL".to_string(),
            None => "-".to_string(),
        };
        writeln!(
            out,
            "{:<16} {:>5} {:>2}  {:<16} {:<5} {:<6} {:<10} {:<5} {:>7.1}ms",
            r.name,
            r.order.map_or("?".into(), |o| o.to_string()),
            r.p.map_or("?".into(), |p| p.to_string()),
            r.case_tag.map_or("(rejected)".into(), |t| t.to_string()),
            mark(r.verified.map(|v| v.all())),
            mark(r.claims_hold.filter(|_| r.case_tag.is_some())),
            oracle,
            if r.pass { "PASS" } else { "FAIL" },
            r.elapsed.as_secs_f64() * 1e3
        )
        .unwrap();
        for m in &r.mismatches {
            writeln!(out, "    {m}").unwrap();
        }
    }
    let coverage: Vec<String> = report.case_coverage.iter().map(|(t, k)| format!("{t}: {k}")).collect();
    writeln!(out, "coverage     {}", coverage.join(", ")).unwrap();
    out
}

fn cmd_corpus(run_all: bool, json: bool, exec: Execution) -> Result<String, CliError> {
    if !run_all {
        let rows: Vec<ListRow> = corpus::CORPUS
            .iter()
            .map(|e| ListRow {
                name: e.name,
                description: e.description,
                p: e.expected.p,
                order: e.expected.order,
                class: e.expected.class,
                n: e.expected.n,
                expected_case: e.expected.case_tag.map(|t| t.to_string()),
            })
            .collect();
        if json {
            return Ok(to_json(&rows));
        }
        let mut out = String::new();
        for r in rows {
            writeln!(
                out,
                "{:<16} {:>4}  {:<36} {}",
                r.name,
                r.order.unwrap_or(0),
                r.description,
                r.expected_case.as_deref().unwrap_or("(rejected)")
            )
            .unwrap();
        }
        return Ok(out);
    }
    let opts = RunOptions { construction: ConstructionOptions { budget: budget()?, exec }, ..RunOptions::default() };
    let report = corpus::run_all(opts);
    let out = if json { report.to_json() } else { matrix(&report) };
    if report.entries.iter().any(|r| r.theorem_violation) {
        let e = CliError::TheoremViolation("corpus entry contradicts the theorem".into());
        return Err(CliError::WithReport(out, Box::new(e)));
    }
    if !report.all_pass {
        return Err(CliError::WithReport(out, Box::new(CliError::Io("corpus self-test failed".into()))));
    }
    Ok(out)
}

#[derive(Serialize)]
struct ParseOutput<'a> {
    path: &'a str,
    prime: u64,
    generators: &'a [String],
    relative_orders: &'a [u64],
    order: usize,
    associativity: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    emitted: Option<&'a str>,
}

fn cmd_parse(path: &str, emit: Option<&str>, json: bool, exec: Execution) -> Result<String, CliError> {
    let pres = read_presentation(path)?;
    let report = pres.check_consistency_with(exec).map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
    if let Some(out_path) = emit {
        let (table, _) = pres.to_cayley_with(exec).map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
        let text = serde_json::to_string(&table.to_cayley_file()).expect("table serializes");
        std::fs::write(out_path, text + "\n").map_err(|e| CliError::Io(format!("{out_path}: {e}")))?;
    }
    let out = ParseOutput {
        path,
        prime: pres.prime(),
        generators: pres.generators(),
        relative_orders: pres.relative_orders(),
        order: report.order,
        associativity: match report.associativity {
            AssociativityCheck::AllTriples => "all-triples",
            AssociativityCheck::GeneratorTriples => "generator-triples",
        },
        emitted: emit,
    };
    if json {
        return Ok(to_json(&out));
    }
    let mut s = format!("{path}: consistent, order {} ({} associativity check)\n", out.order, out.associativity);
    if let Some(e) = emit {
        writeln!(s, "wrote {e}").unwrap();
    }
    Ok(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    let result = match &cli.command {
        Command::Info { source, format, json } => cmd_info(source, *format, *json, exec),
        Command::Noninner { source, format, json, verify_oracle } => {
            cmd_noninner(source, *format, *json, *verify_oracle, exec)
        }
        Command::Corpus { run_all, json } => cmd_corpus(*run_all, *json, exec),
        Command::Parse { path, emit_cayley, json } => cmd_parse(path, emit_cayley.as_deref(), *json, exec),
    };
    let emit = |out: &str| {
        print!("{out}");
        if !out.ends_with('\n') {
            println!();
        }
    };
    match result {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::WithReport(out, _) = &e {
                emit(out);
            }
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
