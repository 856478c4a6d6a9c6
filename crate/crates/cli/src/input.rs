use jetforms::catalog::{catalog, CatalogEntry};
use jetforms::dsl::{form_from_json, jet_from_json, Workspace};
use jetforms::exterior::DifferentialForm;
use jetforms::jetpde::JetPolynomial;
use jetforms::variational::VariationalVerdict;
use jetforms::{Error, Result};
use serde_json::Value;

pub const DEFAULT_N: usize = 4;

pub enum Arg {
    Text(String),
    Doc(Value),
    Catalog(&'static CatalogEntry, bool),
}

pub fn classify(raw: &str) -> Result<Arg> {
    if let Some(path) = raw.strip_prefix('@') {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Document(format!("{path}: {e}")))?;
        let v = serde_json::from_str(&text).map_err(|e| Error::Document(format!("{path}: {e}")))?;
        return Ok(Arg::Doc(v));
    }
    if let Some(rest) = raw.strip_prefix("catalog:") {
        let (name, effective) = match rest.strip_suffix(":effective") {
            Some(name) => (name, true),
            None => (rest, false),
        };
        return Ok(Arg::Catalog(catalog(name)?, effective));
    }
    Ok(Arg::Text(raw.to_string()))
}

fn doc_params(v: &Value) -> Vec<String> {
    v.get("params")
        .and_then(Value::as_array)
        .map(|a| {
            a.iter()
                .filter_map(Value::as_str)
                .map(String::from)
                .collect()
        })
        .unwrap_or_default()
}

impl Arg {
    fn dimension(&self) -> Option<usize> {
        match self {
            Arg::Text(_) => None,
            Arg::Doc(v) => v.get("n").and_then(Value::as_u64).map(|n| n as usize),
            Arg::Catalog(e, _) => Some(e.n),
        }
    }

    fn params(&self) -> Vec<String> {
        match self {
            Arg::Text(_) => Vec::new(),
            Arg::Doc(v) => doc_params(v),
            Arg::Catalog(e, _) => e.params.clone(),
        }
    }

    pub fn form(&self, ws: &Workspace) -> Result<DifferentialForm> {
        match self {
            Arg::Text(t) => ws.parse_form(t),
            Arg::Catalog(e, effective) => Ok(if *effective {
                e.effective.clone()
            } else {
                e.form.clone()
            }),
            Arg::Doc(v) => {
                let w = match v.get("kind").and_then(Value::as_str) {
                    Some("form") => form_from_json(v)?,
                    Some("variational_verdict") => VariationalVerdict::from_json(v)?.effective,
                    _ => {
                        return Err(Error::Document(
                            "expected a form or verdict document".into(),
                        ))
                    }
                };
                if w.n() != ws.n() {
                    return Err(Error::Dimension(format!(
                        "document has n = {}, workspace has n = {}",
                        w.n(),
                        ws.n()
                    )));
                }
                Ok(w)
            }
        }
    }

    pub fn jet(&self, ws: &Workspace) -> Result<JetPolynomial> {
        match self {
            Arg::Text(t) => ws.parse_jet(t),
            Arg::Catalog(e, _) => Ok(e.lhs.clone()),
            Arg::Doc(v) => jet_from_json(v, ws.n()),
        }
    }
}

/// Dimension from the flag, else from the arguments, else the default;
/// parameters from the flag and every argument.
pub fn workspace(n: Option<usize>, params: &[String], args: &[&Arg]) -> Result<Workspace> {
    let n = n
        .or_else(|| args.iter().find_map(|a| a.dimension()))
        .unwrap_or(DEFAULT_N);
    let mut ws = Workspace::new(n)?;
    for p in params
        .iter()
        .cloned()
        .chain(args.iter().flat_map(|a| a.params()))
    {
        if !ws.has_param(&p) {
            ws.declare_param(&p)?;
        }
    }
    Ok(ws)
}
