use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ratpoly::{Monomial, Poly, Polynomial, Variable, VariableId};

/// Default name of the unknown function.
pub const DEFAULT_FIELD: &str = "phi";

/// `f_{i_1 .. i_k}`: a partial derivative of a field, indices sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetSymbol {
    field: Arc<str>,
    multi: Vec<u8>,
}

impl JetSymbol {
    pub fn new(field: &str, indices: &[usize]) -> Self {
        let mut multi: Vec<u8> = indices.iter().map(|&i| i as u8).collect();
        multi.sort_unstable();
        JetSymbol {
            field: field.into(),
            multi,
        }
    }

    pub fn field(&self) -> &str {
        &self.field
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.multi.iter().map(|&i| i as usize)
    }

    pub fn order(&self) -> usize {
        self.multi.len()
    }

    /// The symbol differentiated once more by `q^mu`.
    pub fn raised(&self, mu: usize) -> Self {
        let mut multi = self.multi.clone();
        let at = multi.partition_point(|&i| (i as usize) <= mu);
        multi.insert(at, mu as u8);
        JetSymbol {
            field: self.field.clone(),
            multi,
        }
    }
}

impl fmt::Display for JetSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field)?;
        if self.multi.is_empty() {
            return Ok(());
        }
        f.write_str("_")?;
        if self.multi.iter().all(|&i| i < 10) {
            for i in &self.multi {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.multi.iter().map(u8::to_string).collect();
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

/// Variables of jet polynomials: base coordinates, jet symbols, parameters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JetVar {
    Coord(u8),
    Sym(JetSymbol),
    Param(Arc<str>),
}

impl JetVar {
    pub fn sym(field: &str, indices: &[usize]) -> Self {
        JetVar::Sym(JetSymbol::new(field, indices))
    }

    pub fn coord(mu: usize) -> Self {
        JetVar::Coord(mu as u8)
    }

    pub fn param(name: &str) -> Self {
        JetVar::Param(name.into())
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetVar::Coord(mu) => write!(f, "q{mu}"),
            JetVar::Sym(s) => s.fmt(f),
            JetVar::Param(name) => f.write_str(name),
        }
    }
}

impl Variable for JetVar {
    fn is_parameter(&self) -> bool {
        matches!(self, JetVar::Param(_))
    }
}

pub type JetPolynomial = Poly<JetVar>;

/// `f_{indices}` as a polynomial.
pub fn jet(field: &str, indices: &[usize]) -> JetPolynomial {
    Poly::var(JetVar::sym(field, indices))
}

/// Highest derivative order of `field` occurring in `p` (0 when absent).
pub fn order_in(p: &JetPolynomial, field: &str) -> usize {
    p.variables()
        .iter()
        .filter_map(|v| match v {
            JetVar::Sym(s) if s.field() == field => Some(s.order()),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// Fields with at least one symbol in `p`, sorted.
pub fn fields_of(p: &JetPolynomial) -> Vec<String> {
    let mut out: Vec<String> = p
        .variables()
        .iter()
        .filter_map(|v| match v {
            JetVar::Sym(s) => Some(s.field().to_string()),
            _ => None,
        })
        .collect();
    out.dedup();
    out.sort();
    out.dedup();
    out
}

/// Prolongation of a chart polynomial: `u -> f`, `p_mu -> f_mu`.
pub fn prolong(p: &Polynomial, field: &str) -> Result<JetPolynomial> {
    let mut bad = None;
    let out = p.substitute(|v| match v {
        VariableId::BaseCoord(mu) => Poly::var(JetVar::Coord(*mu)),
        VariableId::Fiber => jet(field, &[]),
        VariableId::Momentum(mu) => jet(field, &[*mu as usize]),
        VariableId::Parameter(name) => Poly::var(JetVar::Param(name.clone())),
        other => {
            bad = Some(other.to_string());
            Poly::zero()
        }
    });
    match bad {
        Some(v) => Err(Error::NotAJetVariable(v)),
        None => Ok(out),
    }
}

/// Splits `p` by monomials in the parameters.
pub fn split_parameters(
    p: &JetPolynomial,
) -> std::collections::BTreeMap<Monomial<JetVar>, JetPolynomial> {
    p.split_by(JetVar::is_parameter)
}
