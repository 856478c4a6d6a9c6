use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::{Rational, VariableId};
use crate::error::{Error, Result};

/// Variable type usable in a [`Poly`].
pub trait Variable: Ord + Clone + fmt::Debug + fmt::Display {
    /// Parameters are printed before ordinary variables inside a term.
    fn is_parameter(&self) -> bool {
        false
    }
}

impl Variable for VariableId {
    fn is_parameter(&self) -> bool {
        VariableId::is_parameter(self)
    }
}

/// A power product: sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial<V>(Vec<(V, u32)>);

impl<V: Variable> Monomial<V> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: V) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary pairs, merging repeated variables.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (V, u32)>) -> Self {
        let mut map: BTreeMap<V, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn pairs(&self) -> &[(V, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &V) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    fn lower(&self, v: &V) -> Option<(u32, Self)> {
        let i = self.0.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let e = self.0[i].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(i);
        } else {
            out[i].1 -= 1;
        }
        Some((e, Monomial(out)))
    }
}

/// Graded lexicographic order: total degree first, then the dense exponent
/// vectors compared in variable order.
impl<V: Variable> Ord for Monomial<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        let by_degree = self.degree().cmp(&other.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.0.cmp(&b.0) {
                // `a` carries a positive power of an earlier variable.
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match a.1.cmp(&b.1) {
                    Ordering::Equal => {}
                    o => return o,
                },
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl<V: Variable> PartialOrd for Monomial<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<V: Variable> fmt::Display for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let params = self.0.iter().filter(|(v, _)| v.is_parameter());
        let others = self.0.iter().filter(|(v, _)| !v.is_parameter());
        for (i, (v, e)) in params.chain(others).enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// No zero coefficient is ever stored, so structural equality is
/// mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<V: Variable> {
    terms: BTreeMap<Monomial<V>, Rational>,
}

/// Polynomial over the chart variables and parameters.
pub type Polynomial = Poly<VariableId>;

impl<V: Variable> Default for Poly<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Variable> Poly<V> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn var(v: V) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial<V>) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial<V>, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial<V>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// True when no variable (parameters included) occurs.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial<V>, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial<V>, Rational)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial<V>) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial<V>, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<V> {
        self.terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, mono: &Monomial<V>) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.mul(mono), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn diff(&self, v: &V) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(v) {
                out.add_term(lowered, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Exact evaluation; every occurring variable needs a value.
    pub fn eval(&self, assignment: &BTreeMap<V, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.pairs() {
                let x = assignment
                    .get(v)
                    .ok_or_else(|| Error::MissingAssignment(v.to_string()))?;
                t *= num_traits::pow(x.clone(), *e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Replaces every variable by a polynomial in another variable type.
    pub fn substitute<W: Variable>(&self, mut f: impl FnMut(&V) -> Poly<W>) -> Poly<W> {
        let mut cache: BTreeMap<V, Poly<W>> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (v, e) in m.pairs() {
                let image = cache.entry(v.clone()).or_insert_with(|| f(v));
                t = &t * &image.pow(*e);
            }
            out += &t;
        }
        out
    }

    /// Substitutes only the variables for which `f` returns `Some`.
    pub fn substitute_some(&self, mut f: impl FnMut(&V) -> Option<Poly<V>>) -> Self {
        self.substitute(|v| f(v).unwrap_or_else(|| Poly::var(v.clone())))
    }

    /// Splits off the part that only involves variables selected by `pred`:
    /// returns `key monomial -> remaining polynomial`.
    pub fn split_by(&self, mut pred: impl FnMut(&V) -> bool) -> BTreeMap<Monomial<V>, Poly<V>> {
        let mut out: BTreeMap<Monomial<V>, Poly<V>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (key, rest): (Vec<_>, Vec<_>) =
                m.pairs().iter().cloned().partition(|(v, _)| pred(v));
            out.entry(Monomial(key))
                .or_default()
                .add_term(Monomial(rest), c.clone());
        }
        out
    }

    /// Exact division, `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem -= &divisor.mul_monomial(&qc, &qm);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Content-normalized copy: leading coefficient 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => Self::zero(),
        }
    }
}

impl<V: Variable> fmt::Display for Poly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<V: Variable> AddAssign<&Poly<V>> for Poly<V> {
    fn add_assign(&mut self, rhs: &Poly<V>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<V: Variable> SubAssign<&Poly<V>> for Poly<V> {
    fn sub_assign(&mut self, rhs: &Poly<V>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<V: Variable> Add for &Poly<V> {
    type Output = Poly<V>;
    fn add(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<V: Variable> Sub for &Poly<V> {
    type Output = Poly<V>;
    fn sub(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<V: Variable> Mul for &Poly<V> {
    type Output = Poly<V>;
    fn mul(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl<V: Variable> Neg for &Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl<V: Variable> $tr for Poly<V> {
            type Output = Poly<V>;
            fn $f(self, rhs: Poly<V>) -> Poly<V> { (&self).$f(&rhs) }
        }
        impl<V: Variable> $tr<&Poly<V>> for Poly<V> {
            type Output = Poly<V>;
            fn $f(self, rhs: &Poly<V>) -> Poly<V> { (&self).$f(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<V: Variable> Neg for Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        -&self
    }
}

impl<V: Variable> Zero for Poly<V> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<V: Variable> One for Poly<V> {
    fn one() -> Self {
        Poly::one()
    }
}
