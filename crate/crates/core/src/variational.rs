//! The first-order necessary condition: an effective `n`-form can only come
//! from a first-order Lagrangian if, up to a constant `k`, it has the shape of
//! `E(L beta)`. When it does, `L` is searched for by exact linear algebra.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::dsl::{Workspace, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::euler::{euler_first_order, FirstOrderLagrangian};
use crate::exterior::{DifferentialForm, ExtMonomial, Generator};
use crate::jetcalc::JetContext;
use crate::ratpoly::{
    nullspace_cancellable, CancelToken, Matrix, Monomial, Polynomial, Rational, VariableId,
};

/// One structural test and its outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub test: String,
    pub passed: bool,
    pub detail: String,
}

impl Diagnostic {
    fn new(test: &str, passed: bool, detail: impl Into<String>) -> Self {
        Diagnostic {
            test: test.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    /// The effective form has a term no `E(L beta)` can have; the witness is
    /// that term with its coefficient.
    NotVariationalFirstOrder { witness: DifferentialForm },
    /// `k * effective = E(L beta)`. `null_lagrangians` spans the Lagrangians
    /// of the searched degree with vanishing Euler form.
    ReconstructionFound {
        lagrangian: Polynomial,
        k: Rational,
        null_lagrangians: Vec<Polynomial>,
    },
    /// Shape test passed, but no `L` of this total degree exists.
    InconclusiveAtDegree(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariationalVerdict {
    pub status: Status,
    /// The normalized input: effective part of the projection.
    pub effective: DifferentialForm,
    pub diagnostics: Vec<Diagnostic>,
}

/// Result of [`structural_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructuralCheck {
    Pass {
        effective: DifferentialForm,
        diagnostics: Vec<Diagnostic>,
    },
    Fail(VariationalVerdict),
}

impl StructuralCheck {
    pub fn passed(&self) -> bool {
        matches!(self, StructuralCheck::Pass { .. })
    }
}

/// `(-1)^{mu-1} (-1)^n`: turns the coefficient of the canonical monomial of
/// `beta_mu ^ dp_nu` into the Hessian entry `L_{p_mu p_nu}`.
fn hessian_sign(n: usize, mu: usize) -> Rational {
    if (mu - 1 + n) % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Classifies a canonical monomial as `beta` (None) or `beta_mu ^ dp_nu`.
fn shape(ctx: &JetContext, m: ExtMonomial) -> std::result::Result<Option<(usize, usize)>, ()> {
    let n = ctx.n();
    let gens = ctx.gens();
    let gs = m.generators(&gens);
    let qs: BTreeSet<usize> = gs
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
    match (qs.len(), ps.len()) {
        (q, 0) if q == n => Ok(None),
        (q, 1) if q == n - 1 => {
            let mu = (1..=n)
                .find(|i| !qs.contains(i))
                .expect("one missing index");
            Ok(Some((mu, ps[0])))
        }
        _ => Err(()),
    }
}

fn single_term(w: &DifferentialForm, m: ExtMonomial) -> DifferentialForm {
    DifferentialForm::from_terms(w.gens(), w.degree(), [(m, w.coefficient(m))]).expect("term of w")
}

/// Normalizes `w` (projection, effective part) and tests whether it has the
/// shape of an Euler form `E(L beta)`.
pub fn structural_check(ctx: &JetContext, w: &DifferentialForm) -> Result<StructuralCheck> {
    let n = ctx.n();
    if w.degree() != n {
        return Err(Error::WrongDegree {
            expected: n,
            found: w.degree(),
        });
    }
    let mut diagnostics = Vec::new();
    let projected = ctx.project(w)?;
    diagnostics.push(Diagnostic::new(
        "projection",
        true,
        if &projected == w {
            "input is degenerate along the Reeb field"
        } else {
            "projected onto the Cartan distribution"
        },
    ));
    let effective = ctx.effective_part(&projected)?;
    diagnostics.push(Diagnostic::new(
        "effective part",
        true,
        if effective == projected {
            "input is effective"
        } else {
            "replaced by its effective part"
        },
    ));

    let fail = |witness: DifferentialForm,
                mut diagnostics: Vec<Diagnostic>,
                test: &str,
                detail: String| {
        diagnostics.push(Diagnostic::new(test, false, detail));
        StructuralCheck::Fail(VariationalVerdict {
            status: Status::NotVariationalFirstOrder { witness },
            effective: effective.clone(),
            diagnostics,
        })
    };

    let mut hessian: BTreeMap<(usize, usize), (Polynomial, ExtMonomial)> = BTreeMap::new();
    for (m, c) in effective.terms() {
        match shape(ctx, m) {
            Err(()) => {
                let witness = single_term(&effective, m);
                let detail = format!("term {witness} is neither beta nor beta_mu^dp_nu");
                return Ok(fail(witness, diagnostics, "shape", detail));
            }
            Ok(None) => {}
            Ok(Some((mu, nu))) => {
                hessian.insert((mu, nu), (c.scale(&hessian_sign(n, mu)), m));
            }
        }
    }
    diagnostics.push(Diagnostic::new(
        "shape",
        true,
        "only beta and beta_mu^dp_nu terms",
    ));

    let entry = |mu: usize, nu: usize| {
        hessian
            .get(&(mu, nu))
            .map(|(b, _)| b.clone())
            .unwrap_or_default()
    };
    for (&(mu, nu), (b, m)) in &hessian {
        if *b != entry(nu, mu) {
            let witness = single_term(&effective, *m);
            let detail = format!("coefficient matrix not symmetric at ({mu},{nu})");
            return Ok(fail(witness, diagnostics, "symmetry", detail));
        }
    }
    diagnostics.push(Diagnostic::new(
        "symmetry",
        true,
        "coefficient matrix is symmetric",
    ));

    for (&(mu, nu), (b, m)) in &hessian {
        for xi in 1..=n {
            let d = b.diff(&VariableId::p(xi));
            if d != entry(mu, xi).diff(&VariableId::p(nu))
                || d != entry(xi, nu).diff(&VariableId::p(mu))
            {
                let witness = single_term(&effective, *m);
                let detail = format!("d/dp{xi} of entry ({mu},{nu}) breaks total symmetry");
                return Ok(fail(witness, diagnostics, "integrability", detail));
            }
        }
    }
    diagnostics.push(Diagnostic::new(
        "integrability",
        true,
        "momentum derivatives are totally symmetric",
    ));
    Ok(StructuralCheck::Pass {
        effective,
        diagnostics,
    })
}

/// Monomials in `q, u, p` of total degree at most `d`, ascending.
pub fn chart_monomials(n: usize, d: u32) -> Vec<Monomial<VariableId>> {
    let mut vars: Vec<VariableId> = (1..=n).map(VariableId::q).collect();
    vars.push(VariableId::Fiber);
    vars.extend((1..=n).map(VariableId::p));
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![(Monomial::<VariableId>::one(), 0usize)];
    for _ in 0..d {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (i, v) in vars.iter().enumerate().skip(*start) {
                let mm = m.mul(&Monomial::var(v.clone()));
                out.push(mm.clone());
                next.push((mm, i));
            }
        }
        frontier = next;
    }
    out.sort();
    out
}

pub fn reconstruct(
    ctx: &JetContext,
    w: &DifferentialForm,
    degree: u32,
) -> Result<VariationalVerdict> {
    reconstruct_cancellable(ctx, w, degree, None)
}

/// Solves `k * w_e = E(L beta)` for a polynomial `L` of total degree at most
/// `degree` and a constant `k`, preferring `k = 1`.
pub fn reconstruct_cancellable(
    ctx: &JetContext,
    w: &DifferentialForm,
    degree: u32,
    cancel: Option<&CancelToken>,
) -> Result<VariationalVerdict> {
    let (effective, mut diagnostics) = match structural_check(ctx, w)? {
        StructuralCheck::Fail(v) => return Ok(v),
        StructuralCheck::Pass {
            effective,
            diagnostics,
        } => (effective, diagnostics),
    };

    // Parameters are constants for the Euler operator, so each parameter
    // monomial gets its own Lagrangian component, all sharing one k.
    let mut parts: BTreeMap<Monomial<VariableId>, BTreeMap<ExtMonomial, Polynomial>> =
        BTreeMap::new();
    for (m, c) in effective.terms() {
        for (pm, rest) in c.split_by(VariableId::is_parameter) {
            parts.entry(pm).or_default().insert(m, rest);
        }
    }
    if parts.is_empty() {
        parts.insert(Monomial::one(), BTreeMap::new());
    }

    let basis = chart_monomials(ctx.n(), degree);
    let images: Vec<DifferentialForm> = basis
        .iter()
        .map(|m| {
            let l = Polynomial::term(Rational::one(), m.clone());
            Ok(euler_first_order(ctx, &FirstOrderLagrangian::new(ctx, l)?))
        })
        .collect::<Result<_>>()?;

    let part_keys: Vec<Monomial<VariableId>> = parts.keys().cloned().collect();
    let cols = part_keys.len() * basis.len() + 1;
    let k_col = cols - 1;
    let mut rows: BTreeMap<(usize, ExtMonomial, Monomial<VariableId>), usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
    for (pi, key) in part_keys.iter().enumerate() {
        for (j, img) in images.iter().enumerate() {
            for (m, c) in img.terms() {
                for (cm, r) in c.terms() {
                    let next = rows.len();
                    let row = *rows.entry((pi, m, cm.clone())).or_insert(next);
                    entries.push((row, pi * basis.len() + j, r.clone()));
                }
            }
        }
        for (m, c) in &parts[key] {
            for (cm, r) in c.terms() {
                let next = rows.len();
                let row = *rows.entry((pi, *m, cm.clone())).or_insert(next);
                entries.push((row, k_col, -r.clone()));
            }
        }
    }
    let mut a = Matrix::zeros(rows.len(), cols);
    for (i, j, r) in entries {
        a[(i, j)] += r;
    }
    let kernel = nullspace_cancellable(&a, cancel)?;

    let assemble = |v: &[Rational]| -> Polynomial {
        let mut l = Polynomial::zero();
        for (pi, key) in part_keys.iter().enumerate() {
            for (j, m) in basis.iter().enumerate() {
                let x = &v[pi * basis.len() + j];
                if !x.is_zero() {
                    l.add_term(key.mul(m), x.clone());
                }
            }
        }
        l
    };

    let particular = kernel.iter().find(|v| !v[k_col].is_zero());
    let Some(particular) = particular else {
        diagnostics.push(Diagnostic::new(
            "reconstruction",
            false,
            format!("no Lagrangian of degree <= {degree}"),
        ));
        return Ok(VariationalVerdict {
            status: Status::InconclusiveAtDegree(degree),
            effective,
            diagnostics,
        });
    };
    let k = particular[k_col].clone();
    let scaled: Vec<Rational> = particular.iter().map(|x| x / &k).collect();
    let lagrangian = assemble(&scaled);
    let k = Rational::one();

    let check = euler_first_order(ctx, &FirstOrderLagrangian::new(ctx, lagrangian.clone())?);
    if check != effective.scale_rational(&k) {
        return Err(Error::Invariant(
            "reconstructed Lagrangian does not reproduce the form".into(),
        ));
    }
    let mut null_lagrangians = Vec::new();
    for v in kernel.iter().filter(|v| v[k_col].is_zero()) {
        let l = assemble(v);
        if !euler_first_order(ctx, &FirstOrderLagrangian::new(ctx, l.clone())?).is_zero() {
            return Err(Error::Invariant(
                "null direction with nonzero Euler form".into(),
            ));
        }
        null_lagrangians.push(l);
    }
    diagnostics.push(Diagnostic::new(
        "reconstruction",
        true,
        format!(
            "found with {} null-Lagrangian directions",
            null_lagrangians.len()
        ),
    ));
    Ok(VariationalVerdict {
        status: Status::ReconstructionFound {
            lagrangian,
            k,
            null_lagrangians,
        },
        effective,
        diagnostics,
    })
}

fn params_in(polys: &[&Polynomial]) -> Vec<String> {
    let set: BTreeSet<String> = polys
        .iter()
        .flat_map(|p| p.variables())
        .filter(VariableId::is_parameter)
        .map(|v| v.to_string())
        .collect();
    set.into_iter().collect()
}

impl VariationalVerdict {
    pub fn status_name(&self) -> &'static str {
        match self.status {
            Status::NotVariationalFirstOrder { .. } => "not_variational_first_order",
            Status::ReconstructionFound { .. } => "reconstruction_found",
            Status::InconclusiveAtDegree(_) => "inconclusive_at_degree",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut polys: Vec<&Polynomial> = self.effective.terms().map(|(_, c)| c).collect();
        let (witness, lagrangian, k, nulls, degree) = match &self.status {
            Status::NotVariationalFirstOrder { witness } => (
                Value::String(witness.to_string()),
                Value::Null,
                Value::Null,
                Vec::new(),
                Value::Null,
            ),
            Status::ReconstructionFound {
                lagrangian,
                k,
                null_lagrangians,
            } => {
                polys.push(lagrangian);
                polys.extend(null_lagrangians.iter());
                let nulls = null_lagrangians
                    .iter()
                    .map(|l| Value::String(l.to_string()))
                    .collect();
                (
                    Value::Null,
                    Value::String(lagrangian.to_string()),
                    Value::String(k.to_string()),
                    nulls,
                    Value::Null,
                )
            }
            Status::InconclusiveAtDegree(d) => {
                (Value::Null, Value::Null, Value::Null, Vec::new(), json!(d))
            }
        };
        json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "variational_verdict",
            "n": self.effective.n(),
            "params": params_in(&polys),
            "status": self.status_name(),
            "witness": witness,
            "lagrangian": lagrangian,
            "k": k,
            "degree": degree,
            "null_lagrangians": nulls,
            "effective": self.effective.to_string(),
            "diagnostics": self.diagnostics.iter().map(|d| json!({
                "test": d.test,
                "passed": d.passed,
                "detail": d.detail,
            })).collect::<Vec<_>>(),
        })
    }

    /// Reads a document written by [`VariationalVerdict::to_json`].
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Document(format!("verdict: missing or invalid `{what}`"));
        if v.get("schema_version").and_then(Value::as_u64) != Some(SCHEMA_VERSION)
            || v.get("kind").and_then(Value::as_str) != Some("variational_verdict")
        {
            return Err(Error::Document(
                "not a version 1 variational verdict".into(),
            ));
        }
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("n"))? as usize;
        let params: Vec<&str> = v
            .get("params")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("params"))?
            .iter()
            .filter_map(Value::as_str)
            .collect();
        let ctx = JetContext::with_max_dim(n, crate::exterior::MAX_BASE_DIM)?;
        let ws = Workspace::with_context(ctx).with_params(params)?;
        let text = |key: &str| v.get(key).and_then(Value::as_str).ok_or_else(|| bad(key));
        let effective = ws.parse_form(text("effective")?)?;
        let status = match text("status")? {
            "not_variational_first_order" => Status::NotVariationalFirstOrder {
                witness: ws.parse_form(text("witness")?)?,
            },
            "reconstruction_found" => Status::ReconstructionFound {
                lagrangian: ws.parse_polynomial(text("lagrangian")?)?,
                k: crate::ratpoly::parse_rational(text("k")?).ok_or_else(|| bad("k"))?,
                null_lagrangians: v
                    .get("null_lagrangians")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("null_lagrangians"))?
                    .iter()
                    .map(|s| {
                        ws.parse_polynomial(s.as_str().ok_or_else(|| bad("null_lagrangians"))?)
                    })
                    .collect::<Result<_>>()?,
            },
            "inconclusive_at_degree" => Status::InconclusiveAtDegree(
                v.get("degree")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| bad("degree"))? as u32,
            ),
            _ => return Err(bad("status")),
        };
        let diagnostics = v
            .get("diagnostics")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("diagnostics"))?
            .iter()
            .map(|d| {
                Ok(Diagnostic {
                    test: d
                        .get("test")
                        .and_then(Value::as_str)
                        .ok_or_else(|| bad("test"))?
                        .into(),
                    passed: d
                        .get("passed")
                        .and_then(Value::as_bool)
                        .ok_or_else(|| bad("passed"))?,
                    detail: d
                        .get("detail")
                        .and_then(Value::as_str)
                        .ok_or_else(|| bad("detail"))?
                        .into(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(VariationalVerdict {
            status,
            effective,
            diagnostics,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rat;

    fn ws(n: usize) -> Workspace {
        Workspace::new(n).unwrap().with_params(["m", "c"]).unwrap()
    }

    const P1E: &str = "-beta + 1/3*(d[1,2;1,2] + d[3,4;3,4]) - 1/6*(d[1,3;1,3] + d[1,4;1,4] + d[2,3;2,3] + d[2,4;2,4])";
    const KG: &str = "m^2*u*beta - beta_1^dp1 + beta_2^dp2 + beta_3^dp3 + beta_4^dp4";

    #[test]
    fn plebanski_one_witness() {
        let w = ws(4);
        let StructuralCheck::Fail(v) =
            structural_check(w.context(), &w.parse_form(P1E).unwrap()).unwrap()
        else {
            panic!("expected failure")
        };
        let Status::NotVariationalFirstOrder { witness } = &v.status else {
            panic!()
        };
        assert_eq!(witness, &w.parse_form("1/3*d[1,2;1,2]").unwrap());
    }

    #[test]
    fn wave_reconstruction() {
        let w = ws(2);
        let form = w.parse_form("-c*dq1^dp2 - dq2^dp1").unwrap();
        assert!(structural_check(w.context(), &form).unwrap().passed());
        let v = reconstruct(w.context(), &form, 2).unwrap();
        let Status::ReconstructionFound {
            lagrangian,
            k,
            null_lagrangians,
        } = &v.status
        else {
            panic!("{v:?}")
        };
        assert_eq!(k, &rat(1, 1));
        assert_eq!(
            lagrangian,
            &w.parse_polynomial("1/2*(-p1^2 + c*p2^2)").unwrap()
        );
        assert!(!null_lagrangians.is_empty());
    }

    #[test]
    fn klein_gordon_reconstruction() {
        let w = ws(4);
        let v = reconstruct(w.context(), &w.parse_form(KG).unwrap(), 2).unwrap();
        let Status::ReconstructionFound { lagrangian, .. } = &v.status else {
            panic!("{v:?}")
        };
        assert_eq!(
            lagrangian,
            &w.parse_polynomial("1/2*(-p1^2 + p2^2 + p3^2 + p4^2 + m^2*u^2)")
                .unwrap()
        );
    }

    #[test]
    fn effective_parts_are_symmetric() {
        // The bottom of beta_mu^dp_nu is antisymmetric in (mu, nu), so the
        // effective part never fails the symmetry test.
        let w = ws(3);
        for (mu, nu) in [(1, 2), (2, 3), (1, 3)] {
            let a = w.parse_form(&format!("beta_{mu}^dp{nu}")).unwrap();
            let check = structural_check(w.context(), &a).unwrap();
            assert!(check.passed(), "{check:?}");
        }
    }

    #[test]
    fn non_integrable() {
        let w = ws(2);
        // B_11 = p2: dB_11/dp2 = 1 but dB_12/dp1 = 0.
        let nonint = w.parse_form("p2*dq2^dp1").unwrap();
        let StructuralCheck::Fail(v) = structural_check(w.context(), &nonint).unwrap() else {
            panic!()
        };
        assert_eq!(v.diagnostics.last().unwrap().test, "integrability");
    }

    #[test]
    fn inconclusive_when_degree_too_small() {
        let w = ws(2);
        let v = reconstruct(
            w.context(),
            &w.parse_form("-c*dq1^dp2 - dq2^dp1").unwrap(),
            1,
        )
        .unwrap();
        assert_eq!(v.status, Status::InconclusiveAtDegree(1));
    }

    #[test]
    fn null_lagrangians_at_zero_form() {
        let w = ws(2);
        let zero = DifferentialForm::zero(w.context().gens(), 2);
        let v = reconstruct(w.context(), &zero, 2).unwrap();
        let Status::ReconstructionFound {
            lagrangian,
            null_lagrangians,
            ..
        } = &v.status
        else {
            panic!()
        };
        assert!(lagrangian.is_zero());
        let p1 = w.parse_polynomial("p1").unwrap();
        let span = null_lagrangians.iter().any(|l| l == &p1);
        assert!(span, "{null_lagrangians:?}");
    }

    #[test]
    fn verdict_json_round_trip() {
        let w = ws(4);
        for (text, d) in [(P1E, 2), (KG, 2), (KG, 1)] {
            let v = reconstruct(w.context(), &w.parse_form(text).unwrap(), d).unwrap();
            assert_eq!(VariationalVerdict::from_json(&v.to_json()).unwrap(), v);
        }
    }

    #[test]
    fn cancellation() {
        let w = ws(4);
        let token = CancelToken::new();
        token.cancel();
        let r = reconstruct_cancellable(w.context(), &w.parse_form(KG).unwrap(), 2, Some(&token));
        assert_eq!(r, Err(Error::Cancelled));
    }
}
