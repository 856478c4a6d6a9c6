//! Proptest strategies shared by the unit tests.

use proptest::prelude::*;

use crate::exterior::{DifferentialForm, ExtMonomial, GeneratorSet};
use crate::ratpoly::{rat, Monomial, Polynomial, VariableId};

/// Chart variables of the first jet space of dimension `n`.
pub fn chart_vars(n: usize) -> Vec<VariableId> {
    let mut v: Vec<VariableId> = (1..=n).map(VariableId::q).collect();
    v.push(VariableId::Fiber);
    v.extend((1..=n).map(VariableId::p));
    v
}

pub fn poly_in(
    vars: Vec<VariableId>,
    max_terms: usize,
    max_deg: u32,
) -> impl Strategy<Value = Polynomial> {
    let nv = vars.len();
    prop::collection::vec(
        (
            -5i64..=5,
            1i64..=3,
            prop::collection::vec((0..nv, 0..=max_deg), 0..=max_deg as usize),
        ),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        let mut p = Polynomial::zero();
        for (num, den, factors) in terms {
            let mut deg = 0;
            let mut pairs = Vec::new();
            for (i, e) in factors {
                if deg + e > max_deg {
                    continue;
                }
                deg += e;
                pairs.push((vars[i].clone(), e));
            }
            p.add_term(Monomial::from_pairs(pairs), rat(num, den));
        }
        p
    })
}

pub fn poly(n: usize) -> impl Strategy<Value = Polynomial> {
    poly_in(chart_vars(n), 3, 2)
}

/// Homogeneous form of the given degree on `gens` with polynomial coefficients
/// in the jet chart variables.
pub fn form(
    gens: GeneratorSet,
    degree: usize,
    max_terms: usize,
) -> impl Strategy<Value = DifferentialForm> {
    let monos = gens.monomials(degree);
    let n = gens.n();
    let count = monos.len();
    prop::collection::vec(
        (0..count.max(1), poly_in(chart_vars(n), 2, 2)),
        0..=max_terms,
    )
    .prop_map(move |picks| {
        let terms: Vec<(ExtMonomial, Polynomial)> = if count == 0 {
            Vec::new()
        } else {
            picks.into_iter().map(|(i, c)| (monos[i], c)).collect()
        };
        DifferentialForm::from_terms(gens, degree, terms).expect("valid random form")
    })
}

/// Form without `du`, i.e. degenerate along the Reeb field.
pub fn reeb_free_form(
    n: usize,
    degree: usize,
    max_terms: usize,
) -> impl Strategy<Value = DifferentialForm> {
    let gens = GeneratorSet::jet(n);
    let monos: Vec<ExtMonomial> = gens
        .monomials(degree)
        .into_iter()
        .filter(|m| !m.contains_index(n))
        .collect();
    let count = monos.len();
    prop::collection::vec(
        (0..count.max(1), poly_in(chart_vars(n), 2, 2)),
        0..=max_terms,
    )
    .prop_map(move |picks| {
        let terms: Vec<(ExtMonomial, Polynomial)> = if count == 0 {
            Vec::new()
        } else {
            picks.into_iter().map(|(i, c)| (monos[i], c)).collect()
        };
        DifferentialForm::from_terms(gens, degree, terms).expect("valid random form")
    })
}

/// Reeb-free form with constant rational coefficients.
pub fn constant_form(
    n: usize,
    degree: usize,
    max_terms: usize,
) -> impl Strategy<Value = DifferentialForm> {
    let gens = GeneratorSet::jet(n);
    let monos: Vec<ExtMonomial> = gens
        .monomials(degree)
        .into_iter()
        .filter(|m| !m.contains_index(n))
        .collect();
    let count = monos.len();
    prop::collection::vec((0..count, -5i64..=5, 1i64..=3), 0..=max_terms).prop_map(move |picks| {
        let terms = picks
            .into_iter()
            .map(|(i, a, b)| (monos[i], Polynomial::constant(rat(a, b))));
        DifferentialForm::from_terms(gens, degree, terms).expect("valid random form")
    })
}
