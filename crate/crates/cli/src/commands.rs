use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

use binvar::algebra::BigRational;
use binvar::forms::{catalog_for, evaluate_expr, parse_form_literal, Catalog, CovariantExpr};
use binvar::nullcone::{is_nullform, root_multiplicity_max, verify_lemma_expansions};
use binvar::pipeline::{certify_hsop, find_basic_invariants, PipelineConfig, Session, Verdict};
use binvar::series::{default_seed, ecriture_minimale_search, poincare_series, DegreeSequence};

use crate::{Cli, Command, Global, HsopCommand, NullconeCommand};

pub struct Output {
    pub text: String,
    pub code: u8,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn ok(text: String) -> Result<Output, CliError> {
    Ok(Output { text, code: 0 })
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
fn int_value(v: &impl std::fmt::Display) -> Value {
    let s = v.to_string();
    s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
}

fn catalog_or_empty(n: u32) -> Catalog {
    catalog_for(n).unwrap_or_else(|_| Catalog::empty(n))
}

fn check_order(n: u32) -> Result<(), CliError> {
    if n == 0 {
        return Err(usage("the order n must be positive"));
    }
    Ok(())
}

fn config(g: &Global, n: u32) -> Result<PipelineConfig, CliError> {
    if g.prime <= 2 * n + 1 || g.prime % 2 == 0 || !binvar::algebra::is_prime(g.prime as u64) {
        return Err(usage(format!("--prime must be an odd prime above {}", 2 * n + 1)));
    }
    Ok(PipelineConfig { prime: g.prime, ..PipelineConfig::with_seed(g.seed) }.cache_from_env())
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Poincare { n, max_degree } => poincare(g, *n, *max_degree),
        Command::Ecriture { n, from } => ecriture(g, *n, from.as_deref()),
        Command::Nullcone { command: NullconeCommand::Test { n, form, a_convention } } => {
            nullcone_test(g, *n, form, *a_convention)
        }
        Command::Nullcone { command: NullconeCommand::VerifyLemmas } | Command::VerifyLemmas => verify_lemmas(g),
        Command::Catalog { n } => catalog(g, *n),
        Command::Eval { n, expr, form, a_convention } => eval(g, *n, expr, form, *a_convention),
        Command::Basis { n, max_degree, expect } => basis(g, *n, *max_degree, expect.as_deref()),
        Command::Hsop { command: HsopCommand::Check { n, set, names, membership_degrees, trials } } => {
            hsop_check(g, *n, set, names.as_deref(), membership_degrees, *trials)
        }
    }
}

fn poincare(g: &Global, n: u32, max_degree: u32) -> Result<Output, CliError> {
    check_order(n)?;
    let table = poincare_series(n, max_degree);
    if g.json {
        let mut dims = Map::new();
        for (d, v) in table.dims().iter().enumerate() {
            dims.insert(d.to_string(), int_value(v));
        }
        return ok(to_json(&json!({ "n": n, "max_degree": max_degree, "dims": dims })));
    }
    let mut out = String::new();
    if g.csv {
        out.push_str("degree,dim\n");
    }
    for (d, v) in table.dims().iter().enumerate() {
        if g.csv {
            let _ = writeln!(out, "{d},{v}");
        } else {
            let _ = writeln!(out, "{d:>4}  {v}");
        }
    }
    ok(out)
}

fn ecriture(g: &Global, n: u32, from: Option<&str>) -> Result<Output, CliError> {
    check_order(n)?;
    let seed = match from {
        Some(text) => Some(text.replace(['(', ')'], "").parse::<DegreeSequence>().map_err(usage)?),
        None => None,
    };
    if seed.is_none() && default_seed(n).is_none() {
        return Err(usage(format!("no known parameter degrees for n = {n}; pass --from")));
    }
    let mut rows = ecriture_minimale_search(n, seed.as_ref()).map_err(failed)?;
    // the customary table lists the shortest numerator first
    rows.sort_by(|a, b| a.numerator_degree().cmp(&b.numerator_degree()).then_with(|| a.degrees().cmp(b.degrees())));
    if g.json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "degrees": r.degrees().degrees(),
                    "numerator_degree": r.numerator_degree(),
                    "product": int_value(&r.degrees().product()),
                    "numerator": r.rational.numerator().iter().map(int_value).collect::<Vec<_>>(),
                })
            })
            .collect();
        return ok(to_json(&rows));
    }
    let mut out = String::new();
    if g.csv {
        out.push_str("numerator_degree,degrees,product\n");
    }
    for r in &rows {
        let degs: Vec<String> = r.degrees().degrees().iter().map(u32::to_string).collect();
        if g.csv {
            let _ = writeln!(out, "{},\"{}\",{}", r.numerator_degree(), degs.join(", "), r.degrees().product());
        } else {
            let _ = writeln!(out, "{:>4}  {}", r.numerator_degree(), degs.join(", "));
        }
    }
    ok(out)
}

fn nullcone_test(g: &Global, n: u32, form: &str, a_convention: bool) -> Result<Output, CliError> {
    let f = parse_form_literal(form, a_convention).map_err(usage)?;
    if f.order() != n {
        return Err(usage(format!("form has order {}, expected {n}", f.order())));
    }
    let report = root_multiplicity_max(&f);
    let nullform = is_nullform(&f);
    if g.json {
        return ok(to_json(&json!({
            "multiplicity": report.max_multiplicity,
            "is_nullform": nullform,
            "witness": report.witness.to_string(),
            "zero_form": report.zero_form,
        })));
    }
    ok(format!(
        "multiplicity {}\nnullform {}\nwitness {}\n",
        report.max_multiplicity, nullform, report.witness
    ))
}

fn verify_lemmas(g: &Global) -> Result<Output, CliError> {
    let report = verify_lemma_expansions();
    let code = if report.all_passed() { 0 } else { 1 };
    let text = if g.json {
        to_json(&report)
    } else {
        let mut out = String::new();
        for c in &report.checks {
            let _ = writeln!(out, "{}  {} / {}", if c.passed { "pass" } else { "FAIL" }, c.lemma, c.item);
            if !c.passed {
                let _ = writeln!(out, "      expected {}\n      found    {}", c.expected, c.found);
            }
        }
        let passed = report.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{passed}/{} checks passed", report.checks.len());
        out
    };
    Ok(Output { text, code })
}

fn catalog(g: &Global, n: u32) -> Result<Output, CliError> {
    let cat = catalog_for(n).map_err(usage)?;
    let hsop: Vec<&str> = cat.hsop().iter().map(|e| e.name.as_str()).collect();
    if g.json {
        let entries: Vec<Value> = cat
            .entries()
            .iter()
            .map(|e| json!({ "name": e.name, "order": e.order, "degree": e.degree, "definition": e.expr.to_string() }))
            .collect();
        let sets: Map<String, Value> = cat
            .set_names()
            .into_iter()
            .map(|s| {
                let members: Vec<&str> = cat.set(s).unwrap_or_default().iter().map(|e| e.name.as_str()).collect();
                (s.to_string(), json!(members))
            })
            .collect();
        return ok(to_json(&json!({ "n": n, "entries": entries, "sets": sets })));
    }
    let mut out = String::new();
    if g.csv {
        out.push_str("name,order,degree,definition\n");
        for e in cat.entries() {
            let _ = writeln!(out, "{},{},{},\"{}\"", e.name, e.order, e.degree, e.expr);
        }
        return ok(out);
    }
    for e in cat.entries() {
        let _ = writeln!(out, "{:<6} order {:>2}  degree {:>2}  {}", e.name, e.order, e.degree, e.expr);
    }
    let _ = writeln!(out, "parameter system: {}", hsop.join(", "));
    ok(out)
}

fn eval(g: &Global, n: u32, expr: &str, form: &str, a_convention: bool) -> Result<Output, CliError> {
    let cat = catalog_or_empty(n);
    let e = CovariantExpr::parse(expr, &cat).map_err(usage)?;
    let f = parse_form_literal(form, a_convention).map_err(usage)?;
    if f.order() != n {
        return Err(usage(format!("form has order {}, expected {n}", f.order())));
    }
    let value = evaluate_expr::<BigRational>(&e, &f, &cat).map_err(failed)?;
    let text = value.to_polynomial_string();
    if g.json {
        return ok(to_json(&json!({
            "expr": e.to_string(),
            "order": e.order(),
            "degree": e.degree(),
            "value": text,
        })));
    }
    ok(text + "\n")
}

/// Parses "4:2,8:5" into sorted `(degree, count)` pairs.
fn parse_expect(text: &str) -> Result<Vec<(u32, usize)>, CliError> {
    let mut out = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (d, k) = item.split_once(':').ok_or_else(|| usage(format!("bad --expect item `{item}`")))?;
            let d = d.trim().parse().map_err(|_| usage(format!("bad degree in `{item}`")))?;
            let k = k.trim().parse().map_err(|_| usage(format!("bad count in `{item}`")))?;
            Ok((d, k))
        })
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_unstable();
    out.retain(|(_, k)| *k > 0);
    Ok(out)
}

fn basis(g: &Global, n: u32, max_degree: u32, expect: Option<&str>) -> Result<Output, CliError> {
    check_order(n)?;
    let expected = expect.map(parse_expect).transpose()?;
    let cat = catalog_or_empty(n);
    let mut session = Session::new(&cat, config(g, n)?).map_err(usage)?;
    let (table, records) = find_basic_invariants(&mut session, max_degree).map_err(failed)?;
    let mismatch = expected.as_ref().is_some_and(|e| *e != table.nonzero());
    let code = u8::from(mismatch);
    let text = if g.json {
        to_json(&json!({
            "table": table,
            "total": table.total(),
            "basis": records,
            "matches_expected": expected.as_ref().map(|_| !mismatch),
        }))
    } else if g.csv {
        table.to_csv()
    } else {
        let mut out = String::from("   m   d_m   dim  products\n");
        for e in &table.entries {
            let _ = writeln!(out, "{:>4}  {:>4}  {:>4}  {:>8}", e.degree, e.d_m, e.dim, e.product_rank);
        }
        let _ = writeln!(out, "total {}", table.total());
        if mismatch {
            let _ = writeln!(out, "MISMATCH: expected {:?}", expected.unwrap_or_default());
        }
        out
    };
    Ok(Output { text, code })
}

fn hsop_check(
    g: &Global,
    n: u32,
    set: &str,
    names: Option<&str>,
    membership_degrees: &[u32],
    trials: usize,
) -> Result<Output, CliError> {
    let cat = catalog_for(n).map_err(usage)?;
    let members: Vec<String> = match names {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => cat
            .set(set)
            .ok_or_else(|| usage(format!("unknown set `{set}`; known: {}", cat.set_names().join(", "))))?
            .iter()
            .map(|e| e.name.clone())
            .collect(),
    };
    let candidates = members
        .iter()
        .map(|m| Ok((m.clone(), cat.reference(m).map_err(usage)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut session = Session::new(&cat, config(g, n)?).map_err(usage)?;
    let report = certify_hsop(&mut session, &candidates, membership_degrees, trials).map_err(failed)?;
    let code = u8::from(report.verdict == Verdict::Refuted);
    let text = if g.json {
        to_json(&report)
    } else {
        let mut out = String::new();
        let names: Vec<&str> = report.candidates.iter().map(|(n, _)| n.as_str()).collect();
        let _ = writeln!(out, "candidates  {}", names.join(", "));
        let _ = writeln!(out, "jacobian    {:?} (need {})", report.jacobian_ranks, report.expected_count);
        if let Some(s) = &report.nullcone {
            let _ = writeln!(out, "nullforms   {}/{} all vanish", s.nullform_all_vanish, s.nullform_trials);
            let _ = writeln!(out, "generic     {}/{} all vanish", s.generic_all_vanish, s.generic_trials);
        }
        for m in &report.membership {
            let a = m.a_i_expected.map_or("-".to_string(), |a| a.to_string());
            let _ = writeln!(out, "degree {:>3}  dim(I∩H) {:>5}  a {:>5}  dim I {:>5}", m.degree, m.dim_cap_h, a, m.dim);
        }
        for r in &report.reasons {
            let _ = writeln!(out, "reason      {r}");
        }
        let _ = writeln!(out, "verdict     {}", report.verdict);
        out
    };
    Ok(Output { text, code })
}
