//! Contact geometry of a Darboux chart `(q^mu, u, p_mu)` on the first jet space.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::{
    dqp, DifferentialForm, ExtMonomial, Generator, GeneratorSet, PolyBiVector, PolyVectorField,
};
use crate::ratpoly::{rat, solve_many, Matrix, Monomial, Polynomial, Rational, VariableId};

/// Default upper bound on the base dimension accepted by [`JetContext::new`].
pub const DEFAULT_MAX_DIM: usize = 6;

/// The distinguished objects of the chart: contact form, Reeb field,
/// symplectic 2-form, its dual bivector and the volume forms on the base.
#[derive(Debug, Clone)]
pub struct JetContext {
    n: usize,
    gens: GeneratorSet,
    contact: DifferentialForm,
    reeb: PolyVectorField,
    omega: DifferentialForm,
    x_omega: PolyBiVector,
    beta: DifferentialForm,
    beta_mu: Vec<DifferentialForm>,
}

/// Outcome of [`JetContext::is_effective`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Effectivity {
    Effective,
    /// `chi ⌟ a`, nonzero.
    ReebWitness(DifferentialForm),
    /// `⊥a`, nonzero.
    BottomWitness(DifferentialForm),
}

impl Effectivity {
    pub fn is_effective(&self) -> bool {
        matches!(self, Effectivity::Effective)
    }

    pub fn witness(&self) -> Option<&DifferentialForm> {
        match self {
            Effectivity::Effective => None,
            Effectivity::ReebWitness(w) | Effectivity::BottomWitness(w) => Some(w),
        }
    }
}

impl JetContext {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_max_dim(n, DEFAULT_MAX_DIM)
    }

    /// Like [`JetContext::new`] with a custom upper bound on `n`.
    pub fn with_max_dim(n: usize, max: usize) -> Result<Self> {
        let max = max.min(crate::exterior::MAX_BASE_DIM);
        if !(2..=max).contains(&n) {
            return Err(Error::DimensionOutOfRange { n, min: 2, max });
        }
        let gens = GeneratorSet::jet(n);
        let mut contact = DifferentialForm::generator(gens, Generator::DU)?;
        for mu in 1..=n {
            let p = Polynomial::var(VariableId::p(mu));
            contact = &contact - &DifferentialForm::generator(gens, Generator::dq(mu))?.scale(&p);
        }
        let omega = contact.ext_d();
        let x_omega = (1..=n).fold(PolyBiVector::new(), |b, mu| {
            b.with(Generator::dq(mu), Generator::dp(mu), Polynomial::one())
        });
        let all: Vec<usize> = (1..=n).collect();
        let beta = dqp(gens, &all, &[])?;
        let beta_mu = (1..=n)
            .map(|mu| beta.contract(Generator::dq(mu)))
            .collect::<Result<Vec<_>>>()?;
        Ok(JetContext {
            n,
            gens,
            contact,
            reeb: PolyVectorField::coordinate(Generator::DU),
            omega,
            x_omega,
            beta,
            beta_mu,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> GeneratorSet {
        self.gens
    }

    pub fn contact(&self) -> &DifferentialForm {
        &self.contact
    }

    pub fn reeb(&self) -> &PolyVectorField {
        &self.reeb
    }

    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    pub fn x_omega(&self) -> &PolyBiVector {
        &self.x_omega
    }

    pub fn beta(&self) -> &DifferentialForm {
        &self.beta
    }

    /// `beta_mu = d/dq^mu ⌟ beta`, for `mu` in `1..=n`.
    pub fn beta_mu(&self, mu: usize) -> &DifferentialForm {
        &self.beta_mu[mu - 1]
    }

    fn own(&self, a: &DifferentialForm) -> Result<()> {
        if a.gens() != self.gens {
            return Err(Error::GeneratorSetMismatch {
                left: self.gens,
                right: a.gens(),
            });
        }
        Ok(())
    }

    /// `chi ⌟ a`, with the convention that it vanishes on 0-forms.
    pub fn contract_reeb(&self, a: &DifferentialForm) -> Result<DifferentialForm> {
        self.own(a)?;
        if a.degree() == 0 {
            return Ok(DifferentialForm::zero(self.gens, 0));
        }
        self.reeb.contract(a)
    }

    /// `p(a) = a - c ^ (chi ⌟ a)`.
    pub fn project(&self, a: &DifferentialForm) -> Result<DifferentialForm> {
        if a.degree() == 0 {
            self.own(a)?;
            return Ok(a.clone());
        }
        let r = self.contract_reeb(a)?;
        Ok(a - &self.contact.wedge(&r)?)
    }

    pub fn d_p(&self, a: &DifferentialForm) -> Result<DifferentialForm> {
        self.own(a)?;
        self.project(&a.ext_d())
    }

    pub fn bottom(&self, a: &DifferentialForm) -> Result<DifferentialForm> {
        self.own(a)?;
        self.x_omega.contract(a)
    }

    /// Lie derivative along the Reeb field, by the Cartan formula.
    pub fn lie_reeb(&self, a: &DifferentialForm) -> Result<DifferentialForm> {
        self.own(a)?;
        let first = self.contract_reeb(&a.ext_d())?;
        if a.degree() == 0 {
            return Ok(first);
        }
        Ok(&first + &self.contract_reeb(a)?.ext_d())
    }

    pub fn is_effective(&self, a: &DifferentialForm) -> Result<Effectivity> {
        self.own(a)?;
        if a.degree() > self.n {
            return Err(Error::DegreeTooHigh {
                degree: a.degree(),
                n: self.n,
            });
        }
        let r = self.contract_reeb(a)?;
        if !r.is_zero() {
            return Ok(Effectivity::ReebWitness(r));
        }
        let b = self.bottom(a)?;
        if !b.is_zero() {
            return Ok(Effectivity::BottomWitness(b));
        }
        Ok(Effectivity::Effective)
    }

    fn check_decomposable(&self, a: &DifferentialForm) -> Result<()> {
        self.own(a)?;
        if a.degree() > self.n {
            return Err(Error::DegreeTooHigh {
                degree: a.degree(),
                n: self.n,
            });
        }
        if !self.contract_reeb(a)?.is_zero() {
            return Err(Error::NotDegenerateAlongReeb);
        }
        Ok(())
    }

    /// The effective part `a_e` in `a = a_e + x ^ Omega`.
    ///
    /// `a` must satisfy `chi ⌟ a = 0`; compose with [`JetContext::project`]
    /// first otherwise.
    pub fn effective_part(&self, a: &DifferentialForm) -> Result<DifferentialForm> {
        Ok(self.hodge_lepage(a)?.0)
    }

    /// The residual `x` with `a = a_e + x ^ Omega`, for `2 <= deg a <= n`.
    pub fn hodge_lepage_residual(&self, a: &DifferentialForm) -> Result<DifferentialForm> {
        if a.degree() < 2 {
            return Err(Error::WrongDegree {
                expected: 2,
                found: a.degree(),
            });
        }
        Ok(self.hodge_lepage(a)?.1)
    }

    /// `(a_e, x)`; `x` is the zero 0-form below degree 2.
    pub fn hodge_lepage(
        &self,
        a: &DifferentialForm,
    ) -> Result<(DifferentialForm, DifferentialForm)> {
        self.check_decomposable(a)?;
        let x = match a.degree() {
            0 | 1 => return Ok((a.clone(), DifferentialForm::zero(self.gens, 0))),
            2 => self.bottom(a)?.scale_rational(&rat(1, self.n as i64)),
            4 => {
                let n = self.n as i64;
                let b = self.bottom(a)?;
                let bb = self.bottom(&b)?.as_scalar().expect("0-form");
                let lead = b.scale_rational(&rat(1, n - 2));
                let tail = self
                    .omega
                    .scale(&bb)
                    .scale_rational(&rat(1, 2 * (n - 1) * (n - 2)));
                &lead - &tail
            }
            _ => self.residual_by_solve(a)?,
        };
        self.finish(a, x)
    }

    /// Effective part computed by the linear solver at every degree.
    pub fn effective_part_by_solve(&self, a: &DifferentialForm) -> Result<DifferentialForm> {
        self.check_decomposable(a)?;
        if a.degree() < 2 {
            return Ok(a.clone());
        }
        let x = self.residual_by_solve(a)?;
        Ok(self.finish(a, x)?.0)
    }

    fn finish(
        &self,
        a: &DifferentialForm,
        x: DifferentialForm,
    ) -> Result<(DifferentialForm, DifferentialForm)> {
        let eff = a - &x.wedge(&self.omega)?;
        if !self.bottom(&eff)?.is_zero() {
            return Err(Error::NoResidual);
        }
        Ok((eff, x))
    }

    /// Solves `⊥(x ^ Omega) = ⊥a` for `x` without `du`, one coefficient
    /// monomial at a time.
    fn residual_by_solve(&self, a: &DifferentialForm) -> Result<DifferentialForm> {
        let j = a.degree() - 2;
        let du = self.gens.index(Generator::DU);
        let basis: Vec<ExtMonomial> = self
            .gens
            .monomials(j)
            .into_iter()
            .filter(|m| !m.contains_index(du))
            .collect();
        let pos: BTreeMap<ExtMonomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();

        let size = basis.len();
        let mut t = Matrix::zeros(size, size);
        for (col, m) in basis.iter().enumerate() {
            let unit = DifferentialForm::from_terms(self.gens, j, [(*m, Polynomial::one())])?;
            let image = self.bottom(&unit.wedge(&self.omega)?)?;
            for (row_m, c) in image.terms() {
                let row = *pos.get(&row_m).ok_or(Error::NoResidual)?;
                t[(row, col)] = c.as_constant().ok_or(Error::NoResidual)?;
            }
        }

        let bottom = self.bottom(a)?;
        let mut by_mono: BTreeMap<Monomial<VariableId>, Vec<Rational>> = BTreeMap::new();
        for (m, c) in bottom.terms() {
            let row = *pos.get(&m).ok_or(Error::NoResidual)?;
            for (pm, r) in c.terms() {
                by_mono
                    .entry(pm.clone())
                    .or_insert_with(|| vec![rat(0, 1); size])[row] = r.clone();
            }
        }
        let keys: Vec<Monomial<VariableId>> = by_mono.keys().cloned().collect();
        let rhs: Vec<Vec<Rational>> = by_mono.into_values().collect();
        let sols = solve_many(&t, &rhs).ok_or(Error::NoResidual)?;

        let mut x = DifferentialForm::zero(self.gens, j);
        for (pm, sol) in keys.iter().zip(sols) {
            let terms = basis
                .iter()
                .zip(sol)
                .filter(|(_, r)| !num_traits::Zero::is_zero(r))
                .map(|(m, r)| (*m, Polynomial::term(r, pm.clone())));
            x = &x + &DifferentialForm::from_terms(self.gens, j, terms)?;
        }
        Ok(x)
    }
}
