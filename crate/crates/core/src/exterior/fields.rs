use std::collections::BTreeMap;

use super::{DifferentialForm, Generator};
use crate::error::{Error, Result};
use crate::ratpoly::Polynomial;

/// Vector field `sum_g f_g d/dg` with polynomial components.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyVectorField {
    components: BTreeMap<Generator, Polynomial>,
}

impl PolyVectorField {
    pub fn new() -> Self {
        Self::default()
    }

    /// The coordinate field dual to `g`.
    pub fn coordinate(g: Generator) -> Self {
        Self::new().with(g, Polynomial::one())
    }

    pub fn with(mut self, g: Generator, f: Polynomial) -> Self {
        let entry = self.components.entry(g).or_default();
        *entry += &f;
        if entry.is_zero() {
            self.components.remove(&g);
        }
        self
    }

    pub fn components(&self) -> impl Iterator<Item = (Generator, &Polynomial)> {
        self.components.iter().map(|(g, f)| (*g, f))
    }

    /// `V ⌟ a`, linear over polynomials in both arguments.
    pub fn contract(&self, a: &DifferentialForm) -> Result<DifferentialForm> {
        if a.degree() == 0 {
            return Err(Error::DegreeZero);
        }
        let gens = a.gens();
        let mut out = DifferentialForm::zero(gens, a.degree() - 1);
        for (g, f) in &self.components {
            gens.check(*g)?;
            let part = a.contract_index(gens.index(*g));
            out = &out + &part.scale(f);
        }
        Ok(out)
    }
}

/// Bivector `sum w (A ∧ B)` with polynomial weights.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyBiVector {
    pairs: Vec<(Generator, Generator, Polynomial)>,
}

impl PolyBiVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, a: Generator, b: Generator, w: Polynomial) -> Self {
        assert_ne!(a, b, "bivector pair needs distinct directions");
        self.pairs.push((a, b, w));
        self
    }

    pub fn pairs(&self) -> &[(Generator, Generator, Polynomial)] {
        &self.pairs
    }

    /// `(A ∧ B) ⌟ a = B ⌟ (A ⌟ a)`, summed with weights; zero below degree 2.
    pub fn contract(&self, a: &DifferentialForm) -> Result<DifferentialForm> {
        let gens = a.gens();
        if a.degree() < 2 {
            return Ok(DifferentialForm::zero(gens, 0));
        }
        let mut out = DifferentialForm::zero(gens, a.degree() - 2);
        for (x, y, w) in &self.pairs {
            gens.check(*x)?;
            gens.check(*y)?;
            let part = a
                .contract_index(gens.index(*x))
                .contract_index(gens.index(*y));
            out = &out + &part.scale(w);
        }
        Ok(out)
    }
}
