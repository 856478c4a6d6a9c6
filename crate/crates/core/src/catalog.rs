//! Built-in Monge–Ampère equations with their representing forms, validated
//! once on first use.

use std::sync::OnceLock;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Deserialize;

use crate::dsl::Workspace;
use crate::error::{Error, Result};
use crate::exterior::DifferentialForm;
use crate::jetpde::{extract_pde, JetPolynomial};
use crate::ratpoly::{Poly, Rational, Variable};
use crate::variational::Diagnostic;

const CATALOG_JSON: &str = include_str!("../data/catalog.json");

#[derive(Deserialize)]
struct RawCatalog {
    schema_version: u64,
    kind: String,
    entries: Vec<RawEntry>,
}

#[derive(Deserialize)]
struct RawEntry {
    name: String,
    title: String,
    n: usize,
    params: Vec<String>,
    lhs: String,
    form: String,
    #[serde(default)]
    printed: RawPrinted,
    errata: Vec<String>,
}

#[derive(Deserialize, Default)]
struct RawPrinted {
    lhs: Option<String>,
    form: Option<String>,
    effective: Option<String>,
}

/// Values as they were published, kept to report where they disagree with
/// the computed ones.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Printed {
    pub lhs: Option<JetPolynomial>,
    pub form: Option<DifferentialForm>,
    pub effective: Option<DifferentialForm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub title: String,
    pub n: usize,
    pub params: Vec<String>,
    pub lhs: JetPolynomial,
    /// A representing form with `extract_pde(form) = k * lhs`.
    pub form: DifferentialForm,
    pub effective: DifferentialForm,
    pub k: Rational,
    pub printed: Printed,
    pub errata: Vec<String>,
}

/// `k` with `a = k * b`, `k != 0`.
pub fn multiple_of<V: Variable>(a: &Poly<V>, b: &Poly<V>) -> Option<Rational> {
    let (m, c) = b.leading()?;
    let k = a.coefficient(m) / c;
    (!k.is_zero() && *a == b.scale(&k)).then_some(k)
}

/// `k` with `a = k * b` for forms, `k != 0`.
pub fn form_multiple_of(a: &DifferentialForm, b: &DifferentialForm) -> Option<Rational> {
    let (m, c) = b.terms().next()?;
    let ratio = a.coefficient(m);
    let k = multiple_of(&ratio, c)?;
    (*a == b.scale_rational(&k)).then_some(k)
}

impl CatalogEntry {
    pub fn workspace(&self) -> Workspace {
        Workspace::new(self.n)
            .and_then(|w| w.with_params(self.params.iter().map(String::as_str)))
            .expect("validated catalog entry")
    }

    fn load(raw: RawEntry) -> Result<Self> {
        let ws = Workspace::new(raw.n)?.with_params(raw.params.iter().map(String::as_str))?;
        let ctx = ws.context();
        let lhs = ws.parse_jet(&raw.lhs)?;
        let form = ws.parse_form(&raw.form)?;
        let k = multiple_of(&extract_pde(ctx, &form)?, &lhs).ok_or_else(|| {
            Error::Invariant(format!(
                "catalog entry `{}` does not extract to a multiple of its equation",
                raw.name
            ))
        })?;
        let effective = ctx.effective_part(&ctx.project(&form)?)?;
        let printed = Printed {
            lhs: raw
                .printed
                .lhs
                .as_deref()
                .map(|s| ws.parse_jet(s))
                .transpose()?,
            form: raw
                .printed
                .form
                .as_deref()
                .map(|s| ws.parse_form(s))
                .transpose()?,
            effective: raw
                .printed
                .effective
                .as_deref()
                .map(|s| ws.parse_form(s))
                .transpose()?,
        };
        Ok(CatalogEntry {
            name: raw.name,
            title: raw.title,
            n: raw.n,
            params: raw.params,
            lhs,
            form,
            effective,
            k,
            printed,
            errata: raw.errata,
        })
    }

    /// Rechecks the entry and compares every printed value with the
    /// computed one.
    pub fn validate(&self) -> Result<Vec<Diagnostic>> {
        let ws = self.workspace();
        let ctx = ws.context();
        let mut out = Vec::new();
        let mut push = |test: &str, passed: bool, detail: String| {
            out.push(Diagnostic {
                test: test.into(),
                passed,
                detail,
            });
        };

        let extracted = extract_pde(ctx, &self.form)?;
        let k = multiple_of(&extracted, &self.lhs);
        push(
            "representing form",
            k.is_some(),
            match &k {
                Some(k) => format!("extracts to {k} * ({})", self.lhs),
                None => format!("extracts to {extracted}"),
            },
        );
        let eff_ok = ctx.is_effective(&self.effective)?.is_effective();
        let eff_k = multiple_of(&extract_pde(ctx, &self.effective)?, &self.lhs);
        push(
            "effective part",
            eff_ok && eff_k.is_some(),
            format!(
                "{} ; effective: {eff_ok}, multiple of the equation: {}",
                self.effective,
                fmt_k(&eff_k)
            ),
        );

        if let Some(printed) = &self.printed.lhs {
            let k = multiple_of(&extracted, printed);
            push(
                "printed equation",
                k.is_some(),
                match k {
                    Some(k) => format!("form extracts to {k} * ({printed})"),
                    None => format!("form extracts to {extracted}, not a multiple of {printed}"),
                },
            );
        }
        if let Some(printed) = &self.printed.form {
            let got = extract_pde(ctx, printed)?;
            let k = multiple_of(&got, &self.lhs);
            push(
                "printed form",
                k.is_some(),
                match k {
                    Some(k) => format!("{printed} extracts to {k} * ({})", self.lhs),
                    None => format!("{printed} extracts to {got}, not a multiple of the equation"),
                },
            );
        }
        if let Some(printed) = &self.printed.effective {
            let same = form_multiple_of(printed, &self.effective);
            let detail = match &same {
                Some(k) if k == &Rational::from_integer(1.into()) => {
                    "equals the computed effective part".to_string()
                }
                Some(k) => format!("equals {k} times the computed effective part"),
                None => {
                    let printed_eff = ctx.is_effective(printed)?.is_effective();
                    let got = extract_pde(ctx, printed)?;
                    format!(
                        "differs from the computed effective part by {}; printed row effective: {printed_eff}; extracts to {got}",
                        printed - &self.effective
                    )
                }
            };
            push("printed effective part", same.is_some(), detail);
        }
        Ok(out)
    }
}

fn fmt_k(k: &Option<Rational>) -> String {
    k.as_ref().map_or("no".into(), |k| format!("k = {k}"))
}

fn load_all() -> Result<Vec<CatalogEntry>> {
    let raw: RawCatalog =
        serde_json::from_str(CATALOG_JSON).map_err(|e| Error::Document(format!("catalog: {e}")))?;
    if raw.schema_version != 1 || raw.kind != "catalog" {
        return Err(Error::Document("catalog: unsupported schema".into()));
    }
    raw.entries
        .into_par_iter()
        .map(CatalogEntry::load)
        .collect()
}

static CATALOG: OnceLock<Result<Vec<CatalogEntry>>> = OnceLock::new();

/// All entries, loaded and validated on first call.
pub fn entries() -> Result<&'static [CatalogEntry]> {
    CATALOG
        .get_or_init(load_all)
        .as_deref()
        .map_err(Clone::clone)
}

pub fn names() -> Result<Vec<&'static str>> {
    Ok(entries()?.iter().map(|e| e.name.as_str()).collect())
}

pub fn catalog(name: &str) -> Result<&'static CatalogEntry> {
    entries()?
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownEquation(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag<'a>(d: &'a [Diagnostic], test: &str) -> &'a Diagnostic {
        d.iter().find(|x| x.test == test).unwrap()
    }

    #[test]
    fn loads_every_entry() {
        assert_eq!(
            names().unwrap(),
            [
                "plebanski1",
                "plebanski2",
                "grant",
                "husain",
                "klein-gordon",
                "wave1d"
            ]
        );
        for e in entries().unwrap() {
            let d = e.validate().unwrap();
            assert!(diag(&d, "representing form").passed, "{}", e.name);
            assert!(diag(&d, "effective part").passed, "{}", e.name);
        }
    }

    #[test]
    fn lhs_examples() {
        let e = catalog("plebanski2").unwrap();
        assert_eq!(
            e.lhs,
            e.workspace()
                .parse_jet("phi_11*phi_22 - phi_12^2 + phi_13 + phi_24")
                .unwrap()
        );
        let g = catalog("grant").unwrap();
        assert_eq!(
            g.lhs,
            g.workspace()
                .parse_jet("phi_11 + phi_24*phi_13 - phi_23*phi_14")
                .unwrap()
        );
        let w = catalog("wave1d").unwrap();
        assert_eq!(w.lhs, w.workspace().parse_jet("phi_11 - c*phi_22").unwrap());
        assert!(matches!(catalog("kdv"), Err(Error::UnknownEquation(_))));
    }

    #[test]
    fn printed_discrepancies() {
        let failing = |name: &str| -> Vec<String> {
            catalog(name)
                .unwrap()
                .validate()
                .unwrap()
                .into_iter()
                .filter(|d| !d.passed)
                .map(|d| d.test)
                .collect()
        };
        assert_eq!(failing("plebanski1"), ["printed form"]);
        assert_eq!(failing("grant"), ["printed form"]);
        assert_eq!(failing("plebanski2"), ["printed effective part"]);
        assert_eq!(failing("husain"), ["printed effective part"]);
        assert_eq!(failing("klein-gordon"), ["printed equation"]);
        assert!(failing("wave1d").is_empty());
    }

    #[test]
    fn grant_printed_form_extraction() {
        let g = catalog("grant").unwrap();
        let ws = g.workspace();
        let got = extract_pde(ws.context(), g.printed.form.as_ref().unwrap()).unwrap();
        assert_eq!(
            got,
            ws.parse_jet("phi_11 - phi_13*phi_24 + phi_14*phi_23")
                .unwrap()
        );
    }

    #[test]
    fn multiples() {
        let ws = Workspace::new(2).unwrap();
        let a = ws.parse_jet("2*phi_11 - 4*phi").unwrap();
        let b = ws.parse_jet("phi_11 - 2*phi").unwrap();
        assert_eq!(multiple_of(&a, &b), Some(Rational::from_integer(2.into())));
        assert_eq!(multiple_of(&b, &ws.parse_jet("phi_11").unwrap()), None);
        assert_eq!(multiple_of(&JetPolynomial::zero(), &b), None);
    }
}
