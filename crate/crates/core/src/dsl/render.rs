use std::collections::BTreeSet;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::workspace::Workspace;
use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, ExtMonomial, Generator, GeneratorSet};
use crate::jetcalc::JetContext;
use crate::jetpde::{JetPolynomial, JetVar};
use crate::ratpoly::{Monomial, Poly, Polynomial, Rational, Variable, VariableId};

/// Version tag written into every JSON document.
pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            _ => Err(Error::Parse {
                position: 0,
                expected: "text, json or latex".into(),
            }),
        }
    }
}

pub fn render_form(w: &DifferentialForm, format: Format) -> String {
    match format {
        Format::Text => w.to_string(),
        Format::Json => serde_json::to_string_pretty(&form_to_json(w)).expect("json"),
        Format::Latex => latex_form(w),
    }
}

pub fn render_jet(p: &JetPolynomial, format: Format) -> String {
    match format {
        Format::Text => p.to_string(),
        Format::Json => serde_json::to_string_pretty(&jet_to_json(p)).expect("json"),
        Format::Latex => latex_poly(p, latex_jet_var),
    }
}

fn params_of<V: Variable>(polys: impl IntoIterator<Item = Poly<V>>) -> Vec<String> {
    let set: BTreeSet<String> = polys
        .into_iter()
        .flat_map(|p| {
            p.variables()
                .into_iter()
                .filter(Variable::is_parameter)
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
        })
        .collect();
    set.into_iter().collect()
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    monomial: Vec<String>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct FormDoc {
    schema_version: u64,
    kind: String,
    n: usize,
    generators: Vec<String>,
    params: Vec<String>,
    degree: usize,
    terms: Vec<TermDoc>,
}

pub fn form_to_json(w: &DifferentialForm) -> Value {
    let gens = w.gens();
    let doc = FormDoc {
        schema_version: SCHEMA_VERSION,
        kind: "form".into(),
        n: w.n(),
        generators: gens.generators().iter().map(Generator::to_string).collect(),
        params: params_of(w.terms().map(|(_, c)| c.clone())),
        degree: w.degree(),
        terms: w
            .terms()
            .map(|(m, c)| TermDoc {
                monomial: m
                    .generators(&gens)
                    .iter()
                    .map(Generator::to_string)
                    .collect(),
                coeff: c.to_string(),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("json")
}

fn check_version(v: &Value, kind: &str) -> Result<()> {
    let version = v.get("schema_version").and_then(Value::as_u64);
    if version != Some(SCHEMA_VERSION) {
        return Err(Error::Document(format!(
            "unsupported schema_version {version:?}"
        )));
    }
    let found = v.get("kind").and_then(Value::as_str);
    if found != Some(kind) {
        return Err(Error::Document(format!(
            "expected kind `{kind}`, found {found:?}"
        )));
    }
    Ok(())
}

/// Reads a form document written by [`form_to_json`].
pub fn form_from_json(v: &Value) -> Result<DifferentialForm> {
    check_version(v, "form")?;
    let doc: FormDoc =
        serde_json::from_value(v.clone()).map_err(|e| Error::Document(e.to_string()))?;
    if !(1..=crate::exterior::MAX_BASE_DIM).contains(&doc.n) {
        return Err(Error::Document(format!("dimension {} out of range", doc.n)));
    }
    let has = |name: &str| doc.generators.iter().any(|g| g == name);
    let gens = GeneratorSet::new(doc.n, has("du"), has("de"), has("dphi"));
    let expected: Vec<String> = gens.generators().iter().map(Generator::to_string).collect();
    if expected != doc.generators {
        return Err(Error::Document(format!(
            "generator list {:?} is not canonical",
            doc.generators
        )));
    }
    let ctx = JetContext::with_max_dim(doc.n.max(2), crate::exterior::MAX_BASE_DIM)?;
    let ws = Workspace::with_context(ctx).with_params(doc.params.iter().map(String::as_str))?;
    let by_name: Vec<(String, Generator)> = gens
        .generators()
        .into_iter()
        .map(|g| (g.to_string(), g))
        .collect();
    let mut terms = Vec::new();
    for t in &doc.terms {
        let seq = t
            .monomial
            .iter()
            .map(|s| {
                by_name
                    .iter()
                    .find(|(n, _)| n == s)
                    .map(|(_, g)| *g)
                    .ok_or_else(|| Error::Document(format!("unknown generator `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let (m, sign) = ExtMonomial::from_sequence(&gens, &seq)
            .ok_or_else(|| Error::Document(format!("repeated generator in {:?}", t.monomial)))?;
        let c = ws.parse_polynomial(&t.coeff)?;
        terms.push((m, if sign < 0 { -c } else { c }));
    }
    DifferentialForm::from_terms(gens, doc.degree, terms)
}

pub fn jet_to_json(p: &JetPolynomial) -> Value {
    let fields = crate::jetpde::fields_of(p);
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "jet_polynomial",
        "fields": fields,
        "params": params_of([p.clone()]),
        "text": p.to_string(),
    })
}

/// Reads a jet-polynomial document; `n` bounds the indices.
pub fn jet_from_json(v: &Value, n: usize) -> Result<JetPolynomial> {
    check_version(v, "jet_polynomial")?;
    let text = v
        .get("text")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Document("missing `text`".into()))?;
    let params: Vec<&str> = v
        .get("params")
        .and_then(Value::as_array)
        .map(|a| a.iter().filter_map(Value::as_str).collect())
        .unwrap_or_default();
    let ctx = JetContext::with_max_dim(n.max(2), crate::exterior::MAX_BASE_DIM)?;
    Workspace::with_context(ctx)
        .with_params(params)?
        .parse_jet(text)
}

fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn latex_name(name: &str) -> String {
    const GREEK: &[&str] = &[
        "alpha", "beta", "gamma", "eta", "lambda", "mu", "nu", "phi", "psi", "chi", "theta", "rho",
        "sigma", "tau", "xi",
    ];
    if GREEK.contains(&name) {
        format!("\\{name}")
    } else if name.chars().count() == 1 {
        name.to_string()
    } else {
        format!("\\mathrm{{{name}}}")
    }
}

fn latex_chart_var(v: &VariableId) -> String {
    match v {
        VariableId::BaseCoord(mu) => format!("q^{{{mu}}}"),
        VariableId::Fiber => "u".into(),
        VariableId::Momentum(mu) => format!("p_{{{mu}}}"),
        VariableId::Energy => "e".into(),
        VariableId::Field => "\\phi".into(),
        VariableId::Parameter(name) => latex_name(name),
    }
}

fn latex_jet_var(v: &JetVar) -> String {
    match v {
        JetVar::Coord(mu) => format!("q^{{{mu}}}"),
        JetVar::Param(name) => latex_name(name),
        JetVar::Sym(s) => {
            let base = latex_name(s.field());
            let ix: Vec<usize> = s.indices().collect();
            if ix.is_empty() {
                base
            } else if ix.iter().all(|&i| i < 10) {
                format!(
                    "{base}_{{{}}}",
                    ix.iter().map(usize::to_string).collect::<String>()
                )
            } else {
                format!(
                    "{base}_{{{}}}",
                    ix.iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                )
            }
        }
    }
}

fn latex_monomial<V: Variable>(m: &Monomial<V>, var: fn(&V) -> String) -> String {
    let params = m.pairs().iter().filter(|(v, _)| v.is_parameter());
    let others = m.pairs().iter().filter(|(v, _)| !v.is_parameter());
    params
        .chain(others)
        .map(|(v, e)| {
            let s = var(v);
            match *e {
                1 => s,
                e if s.contains('^') => format!("{{{s}}}^{{{e}}}"),
                e => format!("{s}^{{{e}}}"),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn latex_polynomial(p: &Polynomial) -> String {
    latex_poly(p, latex_chart_var)
}

fn latex_poly<V: Variable>(p: &Poly<V>, var: fn(&V) -> String) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let sign = if c.is_negative() { "-" } else { "+" };
        if i > 0 {
            out.push_str(&format!(" {sign} "));
        } else if c.is_negative() {
            out.push('-');
        }
        let abs = c.abs();
        let mono = latex_monomial(m, var);
        if m.is_one() {
            out.push_str(&latex_rational(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{} {mono}", latex_rational(&abs)));
        }
    }
    out
}

/// `d^{I}_{J}` for monomials in `dq` and `dp` only; explicit wedges otherwise.
pub fn latex_monomial_form(gens: &GeneratorSet, m: ExtMonomial) -> String {
    let gs = m.generators(gens);
    let join = |ix: &[usize]| {
        if ix.iter().all(|&i| i < 10) {
            ix.iter().map(usize::to_string).collect::<String>()
        } else {
            ix.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(",")
        }
    };
    let qs: Vec<usize> = gs
        .iter()
        .filter_map(|g| {
            if let Generator::DQ(mu) = g {
                Some(*mu as usize)
            } else {
                None
            }
        })
        .collect();
    let ps: Vec<usize> = gs
        .iter()
        .filter_map(|g| {
            if let Generator::DP(mu) = g {
                Some(*mu as usize)
            } else {
                None
            }
        })
        .collect();
    if qs.len() + ps.len() == gs.len() {
        return match (qs.is_empty(), ps.is_empty()) {
            (true, true) => "1".into(),
            (false, true) => format!("d^{{{}}}", join(&qs)),
            (true, false) => format!("d_{{{}}}", join(&ps)),
            (false, false) => format!("d^{{{}}}_{{{}}}", join(&qs), join(&ps)),
        };
    }
    gs.iter()
        .map(|g| match g {
            Generator::DQ(mu) => format!("d^{{{mu}}}"),
            Generator::DP(mu) => format!("d_{{{mu}}}"),
            Generator::DU => "\\mathrm{d}u".into(),
            Generator::DE => "\\mathrm{d}e".into(),
            Generator::DPhi => "\\mathrm{d}\\phi".into(),
        })
        .collect::<Vec<_>>()
        .join("\\wedge ")
}

/// Terms with equal coefficients are collected, in order of first occurrence:
/// `-d^{1234} + \frac{1}{3}(d^{12}_{12}+d^{34}_{34}) - ...`.
pub fn latex_form(w: &DifferentialForm) -> String {
    if w.is_zero() {
        return "0".into();
    }
    if w.degree() == 0 {
        return latex_poly(&w.coefficient(ExtMonomial::ONE), latex_chart_var);
    }
    let gens = w.gens();
    let mut groups: Vec<(Polynomial, Vec<String>)> = Vec::new();
    for (m, c) in w.terms() {
        let mono = latex_monomial_form(&gens, m);
        match groups.iter_mut().find(|(k, _)| k == c) {
            Some((_, v)) => v.push(mono),
            None => groups.push((c.clone(), vec![mono])),
        }
    }
    let mut out = String::new();
    for (i, (c, monos)) in groups.iter().enumerate() {
        let body = if monos.len() == 1 {
            monos[0].clone()
        } else {
            format!("({})", monos.join("+"))
        };
        let (neg, coeff) = match c.as_constant() {
            Some(r) => {
                let abs = r.abs();
                (
                    r.is_negative(),
                    if abs.is_one() {
                        String::new()
                    } else {
                        latex_rational(&abs)
                    },
                )
            }
            None if c.len() == 1 => {
                let (m, r) = c.terms().next().expect("one term");
                let abs = r.abs();
                let mono = latex_monomial(m, latex_chart_var);
                let s = if abs.is_one() {
                    mono
                } else {
                    format!("{} {mono}", latex_rational(&abs))
                };
                (r.is_negative(), s + " ")
            }
            None => (
                false,
                format!("\\left({}\\right) ", latex_poly(c, latex_chart_var)),
            ),
        };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&coeff);
        out.push_str(&body);
    }
    out
}
