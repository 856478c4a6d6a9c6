use std::collections::{BTreeMap, BTreeSet};

use num_traits::{ToPrimitive, Zero};

use super::parser::{parse, split_indexed, BinOp, Expr, Node};
use crate::error::{Error, Result};
use crate::exterior::{dqp, DifferentialForm, Generator, GeneratorSet};
use crate::jetcalc::JetContext;
use crate::jetpde::{JetPolynomial, JetVar};
use crate::ratpoly::{Poly, Polynomial, Rational, Variable, VariableId};
use crate::variational::VariationalVerdict;

/// A named value held by a [`Workspace`].
#[derive(Debug, Clone, PartialEq)]
pub enum Binding {
    Form(DifferentialForm),
    Jet(JetPolynomial),
    Verdict(Box<VariationalVerdict>),
}

/// Dimension, declared parameters and named values shared by parsed input.
#[derive(Debug, Clone)]
pub struct Workspace {
    ctx: JetContext,
    params: BTreeSet<String>,
    bindings: BTreeMap<String, Binding>,
}

const RESERVED: &[&str] = &[
    "u", "e", "phi", "du", "de", "dphi", "beta", "Omega", "contact", "d",
];

fn is_indexed(name: &str, prefix: &str) -> bool {
    name.strip_prefix(prefix)
        .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
}

fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
        || ["q", "p", "dq", "dp"].iter().any(|p| is_indexed(name, p))
        || name.starts_with("beta_")
}

impl Workspace {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self::with_context(JetContext::new(n)?))
    }

    pub fn with_context(ctx: JetContext) -> Self {
        Workspace {
            ctx,
            params: BTreeSet::new(),
            bindings: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    pub fn context(&self) -> &JetContext {
        &self.ctx
    }

    /// Declares a constant parameter such as `m` or `c`.
    pub fn declare_param(&mut self, name: &str) -> Result<()> {
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric())
            && !is_reserved(name);
        if !valid {
            return Err(Error::Parse {
                position: 0,
                expected: format!("parameter name, got `{name}`"),
            });
        }
        self.params.insert(name.to_string());
        Ok(())
    }

    pub fn with_params<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        for n in names {
            self.declare_param(n)?;
        }
        Ok(self)
    }

    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.params.iter().map(String::as_str)
    }

    pub fn has_param(&self, name: &str) -> bool {
        self.params.contains(name)
    }

    /// Binds `name`; forms must live over this workspace's dimension and
    /// use only declared parameters.
    pub fn bind(&mut self, name: &str, value: Binding) -> Result<()> {
        let mut used: Vec<String> = Vec::new();
        match &value {
            Binding::Form(w) => {
                if w.n() != self.n() {
                    return Err(Error::Dimension(format!(
                        "`{name}` has dimension {}, workspace has {}",
                        w.n(),
                        self.n()
                    )));
                }
                for (_, c) in w.terms() {
                    used.extend(
                        c.variables()
                            .into_iter()
                            .filter(Variable::is_parameter)
                            .map(|v| v.to_string()),
                    );
                }
            }
            Binding::Jet(p) => {
                used.extend(
                    p.variables()
                        .into_iter()
                        .filter(Variable::is_parameter)
                        .map(|v| v.to_string()),
                );
            }
            Binding::Verdict(_) => {}
        }
        if let Some(p) = used.into_iter().find(|p| !self.params.contains(p)) {
            return Err(Error::UnknownParameter(p));
        }
        self.bindings.insert(name.to_string(), value);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.bindings.get(name)
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&str, &Binding)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Parses a form expression. The generator set is the jet chart unless
    /// `de` / `e` (adds `de`) or `dphi` / `phi` (phase space) occur.
    pub fn parse_form(&self, text: &str) -> Result<DifferentialForm> {
        let node = parse(text)?;
        let mut names = Vec::new();
        node.idents(&mut names);
        let n = self.n();
        let mut gens = GeneratorSet::jet(n);
        let mut bound = Vec::new();
        for name in &names {
            match name.as_str() {
                "dphi" | "phi" => gens = GeneratorSet::phase_space(n),
                "de" | "e" if gens.has_du() => gens = GeneratorSet::jet_with_energy(n),
                other => {
                    if let Some(Binding::Form(w)) = self.bindings.get(other) {
                        bound.push(w.gens());
                    }
                }
            }
        }
        for b in bound {
            if !gens.contains(&b) {
                gens = b;
            }
        }
        let w = FormEval { ws: self, gens }.eval(&node)?;
        Ok(w)
    }

    /// Parses a polynomial in the chart coordinates and parameters.
    pub fn parse_polynomial(&self, text: &str) -> Result<Polynomial> {
        let node = parse(text)?;
        let gens = GeneratorSet::new(self.n(), true, true, true);
        let w = FormEval { ws: self, gens }.eval(&node)?;
        w.as_scalar().ok_or(Error::Parse {
            position: 0,
            expected: "a polynomial (degree 0)".into(),
        })
    }

    /// Parses a jet polynomial such as `phi_11*phi_22 - phi_12^2 + c*q1`.
    pub fn parse_jet(&self, text: &str) -> Result<JetPolynomial> {
        let node = parse(text)?;
        JetEval { ws: self }.eval(&node)
    }
}

struct FormEval<'a> {
    ws: &'a Workspace,
    gens: GeneratorSet,
}

fn index_of(name: &str, prefix: &str, n: usize, pos: usize) -> Result<Option<usize>> {
    if !is_indexed(name, prefix) {
        return Ok(None);
    }
    let mu: usize = name[prefix.len()..].parse().map_err(|_| Error::Parse {
        position: pos,
        expected: "index".into(),
    })?;
    if mu == 0 || mu > n {
        return Err(Error::Dimension(format!("`{name}` outside dimension {n}")));
    }
    Ok(Some(mu))
}

fn literal_exponent(node: &Node) -> Option<u32> {
    match &node.expr {
        Expr::Num(k) => k.to_u32(),
        _ => None,
    }
}

fn constant_of(w: &DifferentialForm) -> Option<Rational> {
    if w.degree() != 0 {
        return None;
    }
    w.as_scalar()?.as_constant()
}

impl FormEval<'_> {
    fn scalar(&self, p: Polynomial) -> Result<DifferentialForm> {
        DifferentialForm::scalar(self.gens, p)
    }

    fn jet_object(&self, w: &DifferentialForm) -> Result<DifferentialForm> {
        if w.gens() == self.gens {
            Ok(w.clone())
        } else {
            w.extend_to(self.gens)
        }
    }

    fn ident(&self, name: &str, pos: usize) -> Result<DifferentialForm> {
        let n = self.ws.n();
        let g = self.gens;
        let ctx = &self.ws.ctx;
        if let Some(mu) = index_of(name, "dq", n, pos)? {
            return DifferentialForm::generator(g, Generator::dq(mu));
        }
        if let Some(mu) = index_of(name, "dp", n, pos)? {
            return DifferentialForm::generator(g, Generator::dp(mu));
        }
        if let Some(mu) = index_of(name, "q", n, pos)? {
            return self.scalar(Polynomial::var(VariableId::q(mu)));
        }
        if let Some(mu) = index_of(name, "p", n, pos)? {
            return self.scalar(Polynomial::var(VariableId::p(mu)));
        }
        if let Some(rest) = name.strip_prefix("beta_") {
            let mu: usize = rest.parse().map_err(|_| Error::Parse {
                position: pos,
                expected: "index after beta_".into(),
            })?;
            if mu == 0 || mu > n {
                return Err(Error::Dimension(format!("`{name}` outside dimension {n}")));
            }
            return self.jet_object(ctx.beta_mu(mu));
        }
        match name {
            "du" => DifferentialForm::generator(g, Generator::DU),
            "de" => DifferentialForm::generator(g, Generator::DE),
            "dphi" => DifferentialForm::generator(g, Generator::DPhi),
            "u" => self.scalar(Polynomial::var(VariableId::Fiber)),
            "e" => self.scalar(Polynomial::var(VariableId::Energy)),
            "phi" => self.scalar(Polynomial::var(VariableId::Field)),
            "beta" => self.jet_object(ctx.beta()),
            "contact" => self.jet_object(ctx.contact()),
            "Omega" => (1..=n).try_fold(DifferentialForm::zero(g, 2), |acc, mu| {
                Ok(&acc + &dqp(g, &[mu], &[mu])?)
            }),
            _ if self.ws.params.contains(name) => {
                self.scalar(Polynomial::var(VariableId::param(name)))
            }
            _ => match self.ws.bindings.get(name) {
                Some(Binding::Form(w)) => self.jet_object(w),
                _ => Err(Error::UnknownParameter(name.to_string())),
            },
        }
    }

    fn eval(&self, node: &Node) -> Result<DifferentialForm> {
        match &node.expr {
            Expr::Num(k) => Ok(DifferentialForm::constant(
                self.gens,
                Rational::from_integer(k.clone()),
            )),
            Expr::Ident(name) => self.ident(name, node.pos),
            Expr::Short(qs, ps) => {
                let n = self.ws.n();
                if let Some(bad) = qs.iter().chain(ps).find(|&&i| i == 0 || i > n) {
                    return Err(Error::Dimension(format!(
                        "index {bad} outside dimension {n}"
                    )));
                }
                dqp(self.gens, qs, ps)
            }
            Expr::Neg(a) => Ok(-self.eval(a)?),
            Expr::Bin(op, a, b) => {
                let left = self.eval(a)?;
                if *op == BinOp::Caret {
                    if let Some(k) = literal_exponent(b) {
                        let base = left.as_scalar().filter(|_| left.degree() == 0).ok_or(
                            Error::Parse {
                                position: node.pos,
                                expected: "a degree-0 base for a power".into(),
                            },
                        )?;
                        return self.scalar(base.pow(k));
                    }
                }
                let right = self.eval(b)?;
                match op {
                    BinOp::Add => left.checked_add(&right),
                    BinOp::Sub => left.checked_add(&-right),
                    BinOp::Mul | BinOp::Caret => left.wedge(&right),
                    BinOp::Div => {
                        let c =
                            constant_of(&right)
                                .filter(|c| !c.is_zero())
                                .ok_or(Error::Parse {
                                    position: node.pos,
                                    expected: "a nonzero constant divisor".into(),
                                })?;
                        Ok(left.scale_rational(&c.recip()))
                    }
                }
            }
        }
    }
}

struct JetEval<'a> {
    ws: &'a Workspace,
}

impl JetEval<'_> {
    fn ident(&self, name: &str, pos: usize) -> Result<JetPolynomial> {
        let n = self.ws.n();
        if let Some(mu) = index_of(name, "q", n, pos)? {
            return Ok(Poly::var(JetVar::coord(mu)));
        }
        if self.ws.params.contains(name) {
            return Ok(Poly::var(JetVar::param(name)));
        }
        if let Some(Binding::Jet(p)) = self.ws.bindings.get(name) {
            return Ok(p.clone());
        }
        let (field, ix) = split_indexed(name).ok_or(Error::Parse {
            position: pos,
            expected: "jet symbol".into(),
        })?;
        if let Some(bad) = ix.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::Dimension(format!(
                "index {bad} of `{name}` outside dimension {n}"
            )));
        }
        if field != crate::jetpde::DEFAULT_FIELD && (is_reserved(field) || field == "q") {
            return Err(Error::Parse {
                position: pos,
                expected: "jet symbol".into(),
            });
        }
        Ok(crate::jetpde::jet(field, &ix))
    }

    fn eval(&self, node: &Node) -> Result<JetPolynomial> {
        match &node.expr {
            Expr::Num(k) => Ok(Poly::constant(Rational::from_integer(k.clone()))),
            Expr::Ident(name) => self.ident(name, node.pos),
            Expr::Short(..) => Err(Error::Parse {
                position: node.pos,
                expected: "jet polynomial term".into(),
            }),
            Expr::Neg(a) => Ok(-self.eval(a)?),
            Expr::Bin(op, a, b) => {
                let left = self.eval(a)?;
                if *op == BinOp::Caret {
                    let k = literal_exponent(b).ok_or(Error::Parse {
                        position: b.pos,
                        expected: "integer exponent".into(),
                    })?;
                    return Ok(left.pow(k));
                }
                let right = self.eval(b)?;
                match op {
                    BinOp::Add => Ok(&left + &right),
                    BinOp::Sub => Ok(&left - &right),
                    BinOp::Mul => Ok(&left * &right),
                    BinOp::Div => {
                        let c =
                            right
                                .as_constant()
                                .filter(|c| !c.is_zero())
                                .ok_or(Error::Parse {
                                    position: node.pos,
                                    expected: "a nonzero constant divisor".into(),
                                })?;
                        Ok(left.scale(&c.recip()))
                    }
                    BinOp::Caret => unreachable!(),
                }
            }
        }
    }
}
