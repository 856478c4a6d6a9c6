use std::collections::BTreeMap;

use super::symbols::{jet, order_in, prolong, JetPolynomial, JetVar, DEFAULT_FIELD};
use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, Generator};
use crate::jetcalc::JetContext;
use crate::ratpoly::Poly;

/// `(j^1 f)^* w / beta` for an `n`-form `w` on the chart.
///
/// `du -> f_nu dq^nu`, `dp_mu -> f_{mu nu} dq^nu`.
pub fn extract_pde(ctx: &JetContext, w: &DifferentialForm) -> Result<JetPolynomial> {
    extract_pde_for(ctx, w, DEFAULT_FIELD)
}

pub fn extract_pde_for(
    ctx: &JetContext,
    w: &DifferentialForm,
    field: &str,
) -> Result<JetPolynomial> {
    let g = w.gens();
    if g.has(Generator::DE) || g.has(Generator::DPhi) {
        return Err(Error::ExtendedGeneratorPresent);
    }
    if g != ctx.gens() {
        return Err(Error::GeneratorSetMismatch {
            left: ctx.gens(),
            right: g,
        });
    }
    let n = ctx.n();
    if w.degree() != n {
        return Err(Error::WrongDegree {
            expected: n,
            found: w.degree(),
        });
    }
    let full = (1u32 << n) - 1;
    let mut out = JetPolynomial::zero();
    for (m, c) in w.terms() {
        let coeff = prolong(c, field)?;
        // Partial wedge products of pulled-back generators, keyed by the set of
        // dq's used so far.
        let mut acc: BTreeMap<u32, JetPolynomial> = BTreeMap::from([(0, JetPolynomial::one())]);
        for gen in m.generators(&g) {
            let row: Vec<(usize, JetPolynomial)> = match gen {
                Generator::DQ(mu) => vec![(mu as usize, JetPolynomial::one())],
                Generator::DU => (1..=n).map(|nu| (nu, jet(field, &[nu]))).collect(),
                Generator::DP(mu) => (1..=n)
                    .map(|nu| (nu, jet(field, &[mu as usize, nu])))
                    .collect(),
                Generator::DE | Generator::DPhi => return Err(Error::ExtendedGeneratorPresent),
            };
            let mut next: BTreeMap<u32, JetPolynomial> = BTreeMap::new();
            for (mask, p) in &acc {
                for (nu, e) in &row {
                    let bit = 1u32 << (nu - 1);
                    if mask & bit != 0 {
                        continue;
                    }
                    let above = (mask >> nu).count_ones();
                    let mut t = p * e;
                    if above % 2 == 1 {
                        t = -t;
                    }
                    *next.entry(mask | bit).or_default() += &t;
                }
            }
            acc = next;
        }
        if let Some(p) = acc.get(&full) {
            out += &(&coeff * p);
        }
    }
    Ok(out)
}

/// Total derivative `D_mu`.
pub fn total_derivative(p: &JetPolynomial, mu: usize) -> JetPolynomial {
    let mut out = JetPolynomial::zero();
    for v in p.variables() {
        match &v {
            JetVar::Coord(nu) if *nu as usize == mu => out += &p.diff(&v),
            JetVar::Sym(s) => out += &(&p.diff(&v) * &Poly::var(JetVar::Sym(s.raised(mu)))),
            _ => {}
        }
    }
    out
}

fn total_derivative_multi(
    p: &JetPolynomial,
    indices: impl IntoIterator<Item = usize>,
) -> JetPolynomial {
    indices
        .into_iter()
        .fold(p.clone(), |acc, mu| total_derivative(&acc, mu))
}

/// Euler-Lagrange expressions `sum_I (-1)^|I| D_I dL/df_I`, one per field,
/// summing over sorted multi-indices `I` of order at most 2.
pub fn euler_lagrange_fields(l: &JetPolynomial, fields: &[&str]) -> Result<Vec<JetPolynomial>> {
    for f in fields {
        let order = order_in(l, f);
        if order > 2 {
            return Err(Error::OrderTooHigh {
                field: f.to_string(),
                order,
            });
        }
    }
    let vars = l.variables();
    Ok(fields
        .iter()
        .map(|f| {
            let mut out = JetPolynomial::zero();
            for v in &vars {
                let JetVar::Sym(s) = v else { continue };
                if s.field() != *f {
                    continue;
                }
                let t = total_derivative_multi(&l.diff(v), s.indices());
                if s.order() % 2 == 0 {
                    out += &t;
                } else {
                    out -= &t;
                }
            }
            out
        })
        .collect())
}

/// Replaces every symbol `a_I` by `D_I expr`.
pub fn substitute_field(p: &JetPolynomial, field: &str, expr: &JetPolynomial) -> JetPolynomial {
    p.substitute(|v| match v {
        JetVar::Sym(s) if s.field() == field => total_derivative_multi(expr, s.indices()),
        other => Poly::var(other.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::dqp;
    use crate::ratpoly::{rat, Polynomial, VariableId};

    fn phi(ix: &[usize]) -> JetPolynomial {
        jet("phi", ix)
    }

    fn psi(ix: &[usize]) -> JetPolynomial {
        jet("psi", ix)
    }

    fn half(p: JetPolynomial) -> JetPolynomial {
        p.scale(&rat(1, 2))
    }

    #[test]
    fn plebanski_one_extraction() {
        let ctx = JetContext::new(4).unwrap();
        let w = &dqp(ctx.gens(), &[1, 2], &[1, 2]).unwrap() - ctx.beta();
        let expected = &(&(&phi(&[1, 3]) * &phi(&[2, 4])) - &(&phi(&[1, 4]) * &phi(&[2, 3])))
            - &JetPolynomial::one();
        assert_eq!(extract_pde(&ctx, &w).unwrap(), expected);
    }

    #[test]
    fn contact_ideal_is_annihilated() {
        let ctx = JetContext::new(3).unwrap();
        let a = dqp(ctx.gens(), &[2], &[1])
            .unwrap()
            .scale(&Polynomial::var(VariableId::Fiber));
        let w = ctx.contact().wedge(&a).unwrap();
        assert!(extract_pde(&ctx, &w).unwrap().is_zero());
    }

    #[test]
    fn extraction_errors() {
        let ctx = JetContext::new(2).unwrap();
        assert!(matches!(
            extract_pde(&ctx, ctx.contact()),
            Err(Error::WrongDegree { .. })
        ));
        let ext = ctx
            .beta()
            .extend_to(crate::exterior::GeneratorSet::jet_with_energy(2))
            .unwrap();
        assert_eq!(
            extract_pde(&ctx, &ext),
            Err(Error::ExtendedGeneratorPresent)
        );
    }

    /// Pullback oracle: the determinant of the `n x n` matrix of pulled-back
    /// 1-forms, expanded by cofactors.
    #[test]
    fn extraction_matches_determinant_oracle() {
        let ctx = JetContext::new(3).unwrap();
        let g = ctx.gens();
        let seq = [Generator::DU, Generator::dp(2), Generator::dq(3)];
        let w = DifferentialForm::monomial(g, &seq, Polynomial::one()).unwrap();
        let rows: Vec<Vec<JetPolynomial>> = vec![
            (1..=3).map(|nu| phi(&[nu])).collect(),
            (1..=3).map(|nu| phi(&[2, nu])).collect(),
            (1..=3)
                .map(|nu| {
                    if nu == 3 {
                        JetPolynomial::one()
                    } else {
                        JetPolynomial::zero()
                    }
                })
                .collect(),
        ];
        fn det(m: &[Vec<JetPolynomial>]) -> JetPolynomial {
            if m.len() == 1 {
                return m[0][0].clone();
            }
            let mut out = JetPolynomial::zero();
            for j in 0..m.len() {
                let minor: Vec<Vec<JetPolynomial>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let t = &m[0][j] * &det(&minor);
                if j % 2 == 0 {
                    out += &t;
                } else {
                    out -= &t;
                }
            }
            out
        }
        assert_eq!(extract_pde(&ctx, &w).unwrap(), det(&rows));
    }

    #[test]
    fn total_derivative_examples() {
        assert_eq!(total_derivative(&phi(&[1]), 1), phi(&[1, 1]));
        let q1 = Poly::var(JetVar::coord(1));
        assert_eq!(total_derivative(&(&phi(&[]) * &q1), 2), &phi(&[2]) * &q1);
        let p = &phi(&[1]) * &phi(&[2, 2]);
        let expected = &(&phi(&[1, 1]) * &phi(&[2, 2])) + &(&phi(&[1]) * &phi(&[1, 2, 2]));
        assert_eq!(total_derivative(&p, 1), expected);
        assert_eq!(total_derivative(&q1, 1), JetPolynomial::one());
    }

    #[test]
    fn wave_euler_lagrange() {
        let c = Poly::var(JetVar::param("c"));
        let l = half(&(&c * &(&phi(&[2]) * &phi(&[2]))) - &(&phi(&[1]) * &phi(&[1])));
        let el = euler_lagrange_fields(&l, &["phi"]).unwrap();
        assert_eq!(el[0], &phi(&[1, 1]) - &(&c * &phi(&[2, 2])));
    }

    fn two_field_lagrangian() -> JetPolynomial {
        let a = &(&psi(&[]) * &phi(&[1])) * &phi(&[2, 2]);
        let b = half(&phi(&[1]) * &phi(&[3]));
        let c = half(&(&psi(&[]) * &psi(&[])) * &phi(&[2, 2]));
        let d = half(&phi(&[2]) * &phi(&[4]));
        &(&(&a + &b) - &c) + &d
    }

    #[test]
    fn two_field_system() {
        let l = two_field_lagrangian();
        let el = euler_lagrange_fields(&l, &["phi", "psi"]).unwrap();
        assert_eq!(el[1], &phi(&[2, 2]) * &(&phi(&[1]) - &psi(&[])));
        let reduced = substitute_field(&el[0], "psi", &phi(&[1]));
        let heavenly = &(&(&(&phi(&[1, 1]) * &phi(&[2, 2])) - &(&phi(&[1, 2]) * &phi(&[1, 2])))
            + &phi(&[1, 3]))
            + &phi(&[2, 4]);
        assert_eq!(reduced, -heavenly);
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(
            substitute_field(&psi(&[2]), "psi", &phi(&[1])),
            phi(&[1, 2])
        );
        let p = &psi(&[]) * &psi(&[2, 2]);
        assert_eq!(
            substitute_field(&p, "psi", &phi(&[1])),
            &phi(&[1]) * &phi(&[1, 2, 2])
        );
        let line = &(&(&(&psi(&[1]) * &phi(&[2, 2])) - &(&psi(&[2]) * &psi(&[2]))) + &psi(&[3]))
            + &phi(&[2, 4]);
        let heavenly = &(&(&(&phi(&[1, 1]) * &phi(&[2, 2])) - &(&phi(&[1, 2]) * &phi(&[1, 2])))
            + &phi(&[1, 3]))
            + &phi(&[2, 4]);
        assert_eq!(substitute_field(&line, "psi", &phi(&[1])), heavenly);
    }

    #[test]
    fn order_too_high() {
        let l = phi(&[1, 1, 2]);
        assert_eq!(
            euler_lagrange_fields(&l, &["phi"]),
            Err(Error::OrderTooHigh {
                field: "phi".into(),
                order: 3
            })
        );
    }
}
