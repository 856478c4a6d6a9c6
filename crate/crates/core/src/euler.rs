//! The Euler operator `E = d_p ⊥ d_p + L_chi` on `n`-forms.

use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, Generator};
use crate::jetcalc::JetContext;
use crate::ratpoly::{Polynomial, VariableId};

/// Sign `s` in `extract_pde(E(L beta)) = s * (dL/dphi - D_mu dL/dphi_mu)`.
///
/// Fixed by the one-dimensional wave Lagrangian `(-p1^2 + c p2^2)/2`, whose
/// Euler form `-dq2^dp1 - c dq1^dp2` pulls back to `phi_11 - c phi_22`.
pub const EULER_LAGRANGE_SIGN: i64 = 1;

/// A Lagrangian density `L(q, u, p)` on the chart, paired with `beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstOrderLagrangian {
    l: Polynomial,
    n: usize,
}

impl FirstOrderLagrangian {
    pub fn new(ctx: &JetContext, l: Polynomial) -> Result<Self> {
        let n = ctx.n();
        for v in l.variables() {
            let ok = match &v {
                VariableId::BaseCoord(mu) | VariableId::Momentum(mu) => {
                    (1..=n).contains(&(*mu as usize))
                }
                VariableId::Fiber | VariableId::Parameter(_) => true,
                VariableId::Energy | VariableId::Field => false,
            };
            if !ok {
                return Err(Error::ForeignVariable {
                    variable: v.to_string(),
                    set: ctx.gens(),
                });
            }
        }
        let out = FirstOrderLagrangian { l, n };
        if !ctx.is_effective(&out.form(ctx))?.is_effective() {
            return Err(Error::Invariant("L beta is not effective".into()));
        }
        Ok(out)
    }

    pub fn density(&self) -> &Polynomial {
        &self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `L beta`.
    pub fn form(&self, ctx: &JetContext) -> DifferentialForm {
        ctx.beta().scale(&self.l)
    }
}

/// `E(w) = d_p(⊥(d_p w)) + L_chi w`, straight from the definition.
pub fn euler(ctx: &JetContext, w: &DifferentialForm) -> Result<DifferentialForm> {
    if w.degree() != ctx.n() {
        return Err(Error::WrongDegree {
            expected: ctx.n(),
            found: w.degree(),
        });
    }
    let inner = ctx.bottom(&ctx.d_p(w)?)?;
    Ok(&ctx.d_p(&inner)? + &ctx.lie_reeb(w)?)
}

/// Closed coordinate form of `E(L beta)`:
///
/// `(-1)^n L_{p_mu p_nu} beta_mu ^ dp_nu - (L_{q^mu p_mu} + p_mu L_{u p_mu} - L_u) beta`.
pub fn euler_first_order(ctx: &JetContext, lag: &FirstOrderLagrangian) -> DifferentialForm {
    let n = ctx.n();
    let g = ctx.gens();
    let l = lag.density();
    let u = VariableId::Fiber;
    let l_u = l.diff(&u);
    let sign = if n % 2 == 0 {
        Polynomial::one()
    } else {
        -Polynomial::one()
    };

    let mut out = DifferentialForm::zero(g, n);
    let mut scalar = -l_u.clone();
    for mu in 1..=n {
        let l_p = l.diff(&VariableId::p(mu));
        scalar += &l_p.diff(&VariableId::q(mu));
        scalar += &(&Polynomial::var(VariableId::p(mu)) * &l_p.diff(&u));
        for nu in 1..=n {
            let b = l_p.diff(&VariableId::p(nu));
            if b.is_zero() {
                continue;
            }
            let dp = DifferentialForm::generator(g, Generator::dp(nu)).expect("dp in jet chart");
            let t = ctx.beta_mu(mu).wedge(&dp).expect("same chart");
            out = &out + &t.scale(&(&sign * &b));
        }
    }
    &out - &ctx.beta().scale(&scalar)
}
