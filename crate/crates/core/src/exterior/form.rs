use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed};

use super::{ExtMonomial, Generator, GeneratorSet};
use crate::error::{Error, Result};
use crate::ratpoly::{Polynomial, Rational, VariableId};

/// A homogeneous differential form with polynomial coefficients.
///
/// Terms are kept in canonical monomial order with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DifferentialForm {
    gens: GeneratorSet,
    degree: usize,
    terms: BTreeMap<ExtMonomial, Polynomial>,
}

fn check_coefficient(gens: &GeneratorSet, p: &Polynomial) -> Result<()> {
    for v in p.variables() {
        if let Some(g) = Generator::of_variable(&v) {
            if !gens.has(g) {
                return Err(Error::ForeignVariable {
                    variable: v.to_string(),
                    set: *gens,
                });
            }
        }
    }
    Ok(())
}

impl DifferentialForm {
    pub fn zero(gens: GeneratorSet, degree: usize) -> Self {
        DifferentialForm {
            gens,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A 0-form.
    pub fn scalar(gens: GeneratorSet, f: Polynomial) -> Result<Self> {
        Self::monomial(gens, &[], f)
    }

    pub fn constant(gens: GeneratorSet, c: Rational) -> Self {
        Self::scalar(gens, Polynomial::constant(c)).expect("constants are valid coefficients")
    }

    pub fn generator(gens: GeneratorSet, g: Generator) -> Result<Self> {
        Self::monomial(gens, &[g], Polynomial::one())
    }

    /// `coeff * g_1 ^ .. ^ g_k` for an arbitrary generator sequence.
    pub fn monomial(gens: GeneratorSet, seq: &[Generator], coeff: Polynomial) -> Result<Self> {
        for g in seq {
            gens.check(*g)?;
        }
        check_coefficient(&gens, &coeff)?;
        let mut out = Self::zero(gens, seq.len());
        if let Some((mono, sign)) = ExtMonomial::from_sequence(&gens, seq) {
            let c = if sign < 0 { -coeff } else { coeff };
            out.add_term(mono, c);
        }
        Ok(out)
    }

    /// Builds a form from canonical monomials; all must share one degree.
    pub fn from_terms(
        gens: GeneratorSet,
        degree: usize,
        terms: impl IntoIterator<Item = (ExtMonomial, Polynomial)>,
    ) -> Result<Self> {
        let allowed = gens.mask();
        let mut out = Self::zero(gens, degree);
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: m.degree(),
                });
            }
            if m.bits() & !allowed != 0 {
                return Err(Error::UnknownGenerator {
                    generator: format!("{:#b}", m.bits()),
                    set: gens,
                });
            }
            check_coefficient(&gens, &c)?;
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub(crate) fn add_term(&mut self, m: ExtMonomial, c: Polynomial) {
        debug_assert_eq!(m.degree(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn gens(&self) -> GeneratorSet {
        self.gens
    }

    pub fn n(&self) -> usize {
        self.gens.n()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (ExtMonomial, &Polynomial)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, m: ExtMonomial) -> Polynomial {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// Coefficient of `g_1 ^ .. ^ g_k` as written (sign of the ordering applied).
    pub fn component(&self, seq: &[Generator]) -> Polynomial {
        match ExtMonomial::from_sequence(&self.gens, seq) {
            Some((m, s)) if s < 0 => -self.coefficient(m),
            Some((m, _)) => self.coefficient(m),
            None => Polynomial::zero(),
        }
    }

    /// The coefficient of a 0-form.
    pub fn as_scalar(&self) -> Option<Polynomial> {
        (self.degree == 0).then(|| self.coefficient(ExtMonomial::ONE))
    }

    /// True when every coefficient is free of chart variables (parameters allowed).
    pub fn has_constant_coefficients(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.variables().iter().all(VariableId::is_parameter))
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.gens != other.gens {
            return Err(Error::GeneratorSetMismatch {
                left: self.gens,
                right: other.gens,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `f`.
    ///
    /// Panics if `f` depends on a coordinate foreign to the generator set.
    pub fn scale(&self, f: &Polynomial) -> Self {
        check_coefficient(&self.gens, f).expect("scaling by a foreign coefficient");
        let mut out = Self::zero(self.gens, self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, c * f);
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.gens, self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, c.scale(r));
        }
        out
    }

    /// Maps every coefficient, keeping monomials.
    pub fn map_coefficients(&self, mut f: impl FnMut(&Polynomial) -> Polynomial) -> Self {
        let mut out = Self::zero(self.gens, self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = Self::zero(self.gens, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, s)) = ma.wedge(*mb) {
                    let c = ca * cb;
                    out.add_term(m, if s < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Interior product with the coordinate direction dual to `g`.
    pub fn contract(&self, g: Generator) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeZero);
        }
        self.gens.check(g)?;
        Ok(self.contract_index(self.gens.index(g)))
    }

    pub(crate) fn contract_index(&self, idx: usize) -> Self {
        let mut out = Self::zero(self.gens, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            if let Some((r, s)) = m.contract_index(idx) {
                out.add_term(r, if s < 0 { -c } else { c.clone() });
            }
        }
        out
    }

    /// Exterior derivative. Parameters are constants.
    pub fn ext_d(&self) -> Self {
        let mut out = Self::zero(self.gens, self.degree + 1);
        for (m, c) in &self.terms {
            for v in c.variables() {
                let Some(g) = Generator::of_variable(&v) else {
                    continue;
                };
                assert!(
                    self.gens.has(g),
                    "coefficient variable {v} foreign to {}",
                    self.gens
                );
                // d(c m) = sum dc/dv dv ^ m; dv moves to the front of m.
                let idx = self.gens.index(g);
                if m.contains_index(idx) {
                    continue;
                }
                let below = (m.bits() & ((1u32 << idx) - 1)).count_ones();
                let dc = c.diff(&v);
                let mono = ExtMonomial(m.bits() | (1 << idx));
                out.add_term(mono, if below % 2 == 1 { -dc } else { dc });
            }
        }
        out
    }

    /// Re-expresses the form over `target`, which must have the same base
    /// and every generator the form actually uses.
    pub fn extend_to(&self, target: GeneratorSet) -> Result<Self> {
        let missing = self
            .gens
            .generators()
            .into_iter()
            .any(|g| !target.has(g) && self.mentions(g));
        if target.n() != self.gens.n() || missing {
            return Err(Error::GeneratorSetMismatch {
                left: self.gens,
                right: target,
            });
        }
        let mut out = Self::zero(target, self.degree);
        for (m, c) in &self.terms {
            let seq = m.generators(&self.gens);
            let (tm, s) = ExtMonomial::from_sequence(&target, &seq).expect("distinct generators");
            out.add_term(tm, if s < 0 { -c } else { c.clone() });
        }
        Ok(out)
    }

    /// True when some monomial contains the generator `g`.
    pub fn mentions(&self, g: Generator) -> bool {
        if !self.gens.has(g) {
            return false;
        }
        let idx = self.gens.index(g);
        self.terms.keys().any(|m| m.contains_index(idx))
    }

    /// Text form of one monomial, e.g. `dq1^dp2`.
    pub fn monomial_text(&self, m: ExtMonomial) -> String {
        if m.degree() == 0 {
            return "1".into();
        }
        m.generators(&self.gens)
            .iter()
            .map(Generator::to_string)
            .collect::<Vec<_>>()
            .join("^")
    }
}

impl Add for &DifferentialForm {
    type Output = DifferentialForm;
    /// Panics on mismatched generator sets or degrees.
    fn add(self, rhs: &DifferentialForm) -> DifferentialForm {
        self.checked_add(rhs).expect("adding incompatible forms")
    }
}

impl Sub for &DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: &DifferentialForm) -> DifferentialForm {
        self.checked_add(&-rhs)
            .expect("subtracting incompatible forms")
    }
}

impl Add for DifferentialForm {
    type Output = DifferentialForm;
    fn add(self, rhs: DifferentialForm) -> DifferentialForm {
        &self + &rhs
    }
}

impl Sub for DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: DifferentialForm) -> DifferentialForm {
        &self - &rhs
    }
}

impl Neg for &DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> DifferentialForm {
        self.map_coefficients(|c| -c)
    }
}

impl Neg for DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> DifferentialForm {
        -&self
    }
}

/// Plain-text rendering, parseable by the form DSL.
impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        if self.degree == 0 {
            return write!(f, "{}", self.coefficient(ExtMonomial::ONE));
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono = self.monomial_text(*m);
            let (neg, body) = match c.as_constant() {
                Some(r) => {
                    let abs = r.abs();
                    let body = if abs.is_one() {
                        mono
                    } else {
                        format!("{abs}*{mono}")
                    };
                    (r.is_negative(), body)
                }
                None if c.len() == 1 => {
                    let (pm, pc) = c.terms().next().expect("one term");
                    let abs = pc.abs();
                    let body = if abs.is_one() {
                        format!("{pm}*{mono}")
                    } else {
                        format!("{abs}*{pm}*{mono}")
                    };
                    (pc.is_negative(), body)
                }
                None => (false, format!("({c})*{mono}")),
            };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            f.write_str(&body)?;
        }
        Ok(())
    }
}
