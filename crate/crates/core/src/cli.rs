//! Command dispatch and report emission for the `idpv` binary.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::idmodule::{check_cocycle, check_module_iteration, validate_cover, validate_module, IdModuleSpec};
use crate::idring::{check_homomorphism, check_iteration_rule, BaseElem, RingKind};
use crate::manifest::{bounds_map, parse_manifest, Overrides, Problem};
use crate::poly::Poly;
use crate::pvgalois::{
    check_id_stable_ideal, diagonal_invariants, evaluate, mine_relations, pv_generators, required_order,
    stabilizer_equations, tensor_constants_check, PvPresentation, RelationSet, SymPoly,
};
use crate::report::CheckReport;
use crate::ring::RingElem;
use crate::scalars::Scalar;
use crate::series::TruncSeries;
use crate::solver::{fundamental_matrix, verify_constant_basis};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Solve,
    Pv,
    Galois,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Solve => "solve",
            Command::Pv => "pv",
            Command::Galois => "galois",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

/// A finished command: canonical report plus process exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => render_text(&self.report),
        }
    }
}

/// Named checks in a fixed order.
#[derive(Default)]
struct Checks(Vec<(String, CheckReport)>);

impl Checks {
    fn add(&mut self, name: &str, r: CheckReport) {
        self.0.push((name.to_string(), r));
    }

    fn passed(&self) -> bool {
        self.0.iter().all(|(_, r)| r.passed())
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|(n, r)| {
                    let mut v = r.to_json();
                    v["name"] = json!(n);
                    v
                })
                .collect(),
        )
    }
}

/// Read, parse and run; input errors become exit code 2.
pub fn run_path(command: Command, path: &str, overrides: &Overrides) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return input_error(command, &Error::Semantic(format!("cannot read {path}: {e}"))),
    };
    run_text(command, &text, overrides)
}

pub fn run_text(command: Command, text: &str, overrides: &Overrides) -> Outcome {
    let result = parse_manifest(text).and_then(|m| {
        let problem = m.build()?.with_overrides(overrides)?;
        let mut inputs = serde_json::to_value(&m).expect("manifest serializes");
        inputs["bounds"] = json!(bounds_map(&problem.bounds));
        inputs["point"] = json!(problem.point.to_string());
        Ok((problem, inputs))
    });
    let (problem, inputs) = match result {
        Ok(x) => x,
        Err(e) => return input_error(command, &e),
    };
    match run(command, &problem) {
        Ok((checks, payload, cert)) => {
            let passed = checks.passed();
            Outcome {
                report: json!({
                    "command": command.name(),
                    "inputs": inputs,
                    "certification": cert,
                    "checks": checks.to_json(),
                    "payload": payload,
                    "passed": passed,
                }),
                exit_code: if passed { 0 } else { 1 },
            }
        }
        Err(e) => input_error(command, &e),
    }
}

fn input_error(command: Command, e: &Error) -> Outcome {
    Outcome {
        report: json!({
            "command": command.name(),
            "error": e.to_string(),
            "error_kind": error_kind(e),
            "passed": false,
        }),
        exit_code: 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidField(_) => "InvalidField",
        Error::CharDivision { .. } => "CharDivision",
        Error::NotAUnit => "NotAUnit",
        Error::OrderMismatch(_) => "OrderMismatch",
        Error::RootObstruction { .. } => "RootObstruction",
        Error::SingularAtOrigin => "SingularAtOrigin",
        Error::ShiftUnavailable => "ShiftUnavailable",
        Error::BadPoint(_) => "BadPoint",
        Error::ZeroInput => "ZeroInput",
        Error::SpanNotClosed(_) => "SpanNotClosed",
        Error::CharNotZero(_) => "CharNotZero",
        Error::BaseMismatch(_) => "BaseMismatch",
        Error::InsufficientOrder { .. } => "InsufficientOrder",
        Error::ReductionOverflow(_) => "ReductionOverflow",
        Error::NotDiagonal(_) => "NotDiagonal",
        Error::Parse { .. } => "ParseError",
        Error::Semantic(_) => "SemanticError",
    }
}

fn run(command: Command, p: &Problem) -> Result<(Checks, Value, Value)> {
    match command {
        Command::Check => run_check(p),
        Command::Solve => run_solve(p),
        Command::Pv => run_pv(p),
        Command::Galois => run_galois(p),
    }
}

fn coeff_strings(s: &TruncSeries<Scalar>) -> Vec<String> {
    s.coeffs().iter().map(|c| c.to_string()).collect()
}

fn sample_elements(p: &Problem) -> Result<Vec<BaseElem>> {
    let base = &p.base;
    let mut out = ["t", "t^2 + 1", "t^5 - 3*t + 2"]
        .iter()
        .map(|s| base.from_poly(Poly::parse(s, p.field)?))
        .collect::<Result<Vec<_>>>()?;
    if let RingKind::Localized { inverted } = base.kind() {
        for i in 0..inverted.len() {
            let inv = base.inverse_of_generator(i)?;
            out.push(inv.mul(&out[1]));
            out.push(inv);
        }
    }
    Ok(out)
}

fn run_check(p: &Problem) -> Result<(Checks, Value, Value)> {
    let k = p.bounds.k;
    let m = p.module(k)?;
    let mut checks = Checks::default();
    let samples = sample_elements(p)?;
    checks.add("iteration rule", check_iteration_rule(&p.base, &samples, k));
    let mut hom = CheckReport::new();
    for w in samples.windows(2) {
        hom.merge(check_homomorphism(&p.base, &w[0], &w[1], k));
    }
    checks.add("homomorphism", hom);
    checks.add("module validity", validate_module(&m));
    let mut notes = Vec::new();
    match check_cocycle(&m, k / 2, k - k / 2) {
        Ok(r) => checks.add("cocycle", r),
        Err(Error::ShiftUnavailable) => notes.push("cocycle skipped: exact t-shift unavailable on a series base"),
        Err(e) => return Err(e),
    }
    checks.add("module iteration", check_module_iteration(&m, k)?);
    if let Some(c) = p.cover(m.rank())? {
        checks.add("cover", validate_cover(&c, &m));
    }
    let cert = json!({"K": k});
    Ok((checks, json!({"rank": m.rank(), "notes": notes}), cert))
}

fn run_solve(p: &Problem) -> Result<(Checks, Value, Value)> {
    let (n, k) = (p.bounds.n, p.bounds.k);
    let m = p.module(n.max(k))?;
    let f = fundamental_matrix(&m, &p.point, n)?;
    let mut checks = Checks::default();
    checks.add("constant basis", verify_constant_basis(&m, &f, k.min(n))?);
    let payload = json!({
        "F": f.f.iter().map(|row| row.iter().map(coeff_strings).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "det_inverse": coeff_strings(&f.det_inverse()?),
    });
    let cert = json!({"point": p.point.to_string(), "N": n, "K": k.min(n)});
    Ok((checks, payload, cert))
}

/// Presentation whose order is raised, if needed, to what mining at `(d, e)` requires.
fn presentation(p: &Problem, m_order: usize, cover: bool) -> Result<(IdModuleSpec, PvPresentation)> {
    let (d, e) = (p.bounds.d, p.bounds.e);
    let mut n = p.bounds.n;
    loop {
        let m = p.module(n.max(m_order))?;
        let c = if cover { p.cover(m.rank())? } else { None };
        let pres = pv_generators(&m, c.as_ref(), &p.point, n)?;
        let need = required_order(&pres, d, e);
        if pres.order >= need {
            return Ok((m, pres));
        }
        n += need - pres.order;
    }
}

fn relations_json(rs: &RelationSet) -> Value {
    let coeffs: Vec<Value> = rs
        .relations
        .iter()
        .map(|r| {
            Value::Array(
                r.terms()
                    .iter()
                    .map(|(exps, c)| json!({"monomial": exps, "coefficients": c.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>()}))
                    .collect(),
            )
        })
        .collect();
    json!({
        "symbols": rs.symbols,
        "polynomials": rs.render(),
        "coefficients": coeffs,
        "d": rs.degree,
        "e": rs.coeff_degree,
        "certified_order": rs.certified_order,
        "kernel_dimension": rs.kernel_dim,
    })
}

fn presentation_json(p: &PvPresentation) -> Value {
    json!({
        "symbols": p.symbols,
        "images": p.images.iter().map(coeff_strings).collect::<Vec<_>>(),
        "point": p.point.to_string(),
        "order": p.order,
    })
}

/// Re-evaluate every relation from scratch on the images.
fn vanishing(rs: &RelationSet, p: &PvPresentation) -> CheckReport {
    let mut r = CheckReport::new();
    for (i, rel) in rs.relations.iter().enumerate() {
        let v = evaluate(rel, p);
        let name = rel.render(&rs.symbols);
        r.compare("relation vanishes", &name, &[i], v.is_zero(), || format!("{:?}", coeff_strings(&v)), || "0".into());
    }
    r
}

fn run_pv(p: &Problem) -> Result<(Checks, Value, Value)> {
    let k = p.bounds.k;
    let (d, e) = (p.bounds.d, p.bounds.e);
    let (m, free) = presentation(p, k, false)?;
    let rs = mine_relations(&free, d, e)?;
    let mut checks = Checks::default();
    checks.add("relations vanish", vanishing(&rs, &free));
    checks.add("theta-stable ideal", check_id_stable_ideal(&rs, &m, &free, k)?);
    let mut payload = json!({
        "presentation": presentation_json(&free),
        "relations": relations_json(&rs),
    });
    let cover_nontrivial = p.cover(m.rank())?.map(|c| !c.is_trivial()).unwrap_or(false);
    if cover_nontrivial {
        let (_, local) = presentation(p, k, true)?;
        let local_rs = mine_relations(&local, d, e)?;
        checks.add("cover relations vanish", vanishing(&local_rs, &local));
        let glued = local.glued_free()?;
        let glued_rs = mine_relations(&glued, d, e)?;
        let mut same = CheckReport::new();
        for (from, to, label) in [(&glued_rs, &rs, "glued in free"), (&rs, &glued_rs, "free in glued")] {
            for (i, r) in from.relations.iter().enumerate() {
                same.compare("cover gluing", label, &[i], to.contains(r), || r.render(&from.symbols), || {
                    "member of the other relation span".into()
                });
            }
        }
        checks.add("cover gluing", same);
        payload["cover"] = json!({
            "presentation": presentation_json(&local),
            "relations": relations_json(&local_rs),
        });
    }
    let cert = json!({"point": p.point.to_string(), "N": free.order, "K": k, "d": d, "e": e});
    Ok((checks, payload, cert))
}

fn run_galois(p: &Problem) -> Result<(Checks, Value, Value)> {
    let b = p.bounds;
    let (m, free) = presentation(p, b.k, false)?;
    let rs = mine_relations(&free, b.d, b.e)?;
    let g = stabilizer_equations(&rs, &free, b.d_z)?;
    let mut checks = Checks::default();
    let mut ident = CheckReport::new();
    let r = free.rank;
    for (i, eq) in g.equations.iter().enumerate() {
        let val = eq.terms().iter().fold(p.field.zero(), |acc, (exps, c)| {
            // Z = 1, w = 1: a monomial survives only if every off-diagonal exponent vanishes
            let off = (0..r * r).any(|v| v / r != v % r && exps[v] > 0);
            if off {
                acc
            } else {
                &acc + c
            }
        });
        ident.compare("identity satisfies equations", &render_eq(eq, &g.variables), &[i], val.is_zero(), || {
            val.to_string()
        }, || "0".into());
    }
    checks.add("identity in group", ident);
    let rendered = g.render();
    let mut payload = json!({
        "relations": relations_json(&rs),
        "group_equations": {
            "variables": g.variables,
            "equations": g.equations.iter().map(|e| render_eq(e, &g.variables)).collect::<Vec<_>>(),
            "coefficients": g.equations.iter().map(|e| e.terms().iter().map(|(x, c)| json!({"monomial": x, "coefficient": c.to_string()})).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "reduced": rendered,
            "summary": if r == 1 && g.diagonal.is_none() {
                "no equations found up to the degree bound".to_string()
            } else {
                format!("{} equation(s)", rendered.len())
            },
        },
    });
    if r == 1 {
        let tc = tensor_constants_check(&m, &free, &rs, b.d, b.k)?;
        let mut rep = CheckReport::new();
        rep.compare("tensor constants are powers of Z", "Z", &[tc.degree as usize], tc.powers_constant, || {
            "some Z^a not constant".into()
        }, || "all constant".into());
        rep.compare("tensor constants dimension", "Z", &[tc.degree as usize], tc.dimension == tc.expected, || {
            tc.dimension.to_string()
        }, || tc.expected.to_string());
        checks.add("tensor constants", rep);
        payload["tensor_constants"] = serde_json::to_value(&tc).expect("serializes");
        if p.subgroup.is_some() {
            let inv = diagonal_invariants(&rs, &m, &free, &g, p.subgroup)?;
            payload["invariants"] = serde_json::to_value(&inv).expect("serializes");
        }
    } else if p.subgroup.is_some() {
        return Err(Error::NotDiagonal(format!("rank {r} module")));
    }
    let cert = json!({"point": p.point.to_string(), "N": free.order, "K": b.k, "d": b.d, "e": b.e, "d_z": b.d_z});
    Ok((checks, payload, cert))
}

fn render_eq(e: &SymPoly<Scalar>, vars: &[String]) -> String {
    crate::pvgalois::galois::render_scalar_poly(e, vars)
}

fn render_text(report: &Value) -> String {
    let mut out = String::new();
    let cmd = report["command"].as_str().unwrap_or("?");
    if let Some(err) = report.get("error") {
        let _ = writeln!(out, "{cmd}: input error ({}): {}", report["error_kind"].as_str().unwrap_or(""), err.as_str().unwrap_or(""));
        return out;
    }
    let _ = writeln!(out, "{cmd}: {}", if report["passed"] == json!(true) { "PASS" } else { "FAIL" });
    if let Some(cert) = report["certification"].as_object() {
        let parts: Vec<String> = cert.iter().map(|(k, v)| format!("{k}={}", v.as_str().map(String::from).unwrap_or_else(|| v.to_string()))).collect();
        let _ = writeln!(out, "certified at {}", parts.join(", "));
    }
    for c in report["checks"].as_array().into_iter().flatten() {
        let mark = if c["passed"] == json!(true) { "ok  " } else { "FAIL" };
        let _ = writeln!(out, "  [{mark}] {} ({} identities)", c["name"].as_str().unwrap_or(""), c["checked"]);
        for v in c["violations"].as_array().into_iter().flatten().take(10) {
            let _ = writeln!(
                out,
                "         {} {} {}: {} != {}",
                v["law"].as_str().unwrap_or(""),
                v["sample"].as_str().unwrap_or(""),
                v["indices"],
                v["lhs"].as_str().unwrap_or(""),
                v["rhs"].as_str().unwrap_or("")
            );
        }
    }
    let payload = &report["payload"];
    if let Some(rels) = payload["relations"]["polynomials"].as_array() {
        let _ = writeln!(out, "relations:");
        for r in rels {
            let _ = writeln!(out, "  {}", r.as_str().unwrap_or(""));
        }
    }
    if let Some(g) = payload.get("group_equations") {
        let _ = writeln!(out, "group: {}", g["summary"].as_str().unwrap_or(""));
        for e in g["reduced"].as_array().into_iter().flatten() {
            let _ = writeln!(out, "  {}", e.as_str().unwrap_or(""));
        }
    }
    if let Some(tc) = payload.get("tensor_constants") {
        let _ = writeln!(out, "tensor constants: dimension {} (expected {})", tc["dimension"], tc["expected"]);
    }
    if let Some(inv) = payload.get("invariants") {
        let _ = writeln!(out, "invariant generators: {}", inv["generators"]);
        let _ = writeln!(out, "invariant relations: {}", inv["relations"]);
    }
    if let Some(f) = payload.get("F") {
        let _ = writeln!(out, "F: {f}");
    }
    out
}
