use proptest::prelude::*;

use super::*;
use crate::ratpoly::{rat, Polynomial, VariableId};
use crate::test_support::{form, poly};

fn one_form(gens: GeneratorSet, g: Generator) -> DifferentialForm {
    DifferentialForm::generator(gens, g).unwrap()
}

fn omega(gens: GeneratorSet) -> DifferentialForm {
    let n = gens.n();
    (1..=n).fold(DifferentialForm::zero(gens, 2), |acc, mu| {
        &acc + &dqp(gens, &[mu], &[mu]).unwrap()
    })
}

fn x_omega(n: usize) -> PolyBiVector {
    (1..=n).fold(PolyBiVector::new(), |b, mu| {
        b.with(Generator::dq(mu), Generator::dp(mu), Polynomial::one())
    })
}

/// Component `w(e_{s_1}, .., e_{s_k})` read off by sorting `seq` by hand.
fn eval_on(w: &DifferentialForm, seq: &[Generator]) -> Polynomial {
    let gens = w.gens();
    let mut idx: Vec<usize> = seq.iter().map(|g| gens.index(*g)).collect();
    let mut sign = 1i64;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] == idx[j + 1] {
                return Polynomial::zero();
            }
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if idx.windows(2).any(|p| p[0] == p[1]) {
        return Polynomial::zero();
    }
    let bits = idx.iter().fold(0u32, |m, i| m | (1 << i));
    w.coefficient(ExtMonomial(bits)).scale(&rat(sign, 1))
}

#[test]
fn repeated_generator_vanishes() {
    let g = GeneratorSet::jet(2);
    let dq1 = one_form(g, Generator::dq(1));
    assert!(dq1.wedge(&dq1).unwrap().is_zero());
}

#[test]
fn interleaved_wedge_sign() {
    let g = GeneratorSet::jet(2);
    let a = dqp(g, &[1], &[1]).unwrap();
    let b = dqp(g, &[2], &[2]).unwrap();
    assert_eq!(a.wedge(&b).unwrap(), -dqp(g, &[1, 2], &[1, 2]).unwrap());
}

#[test]
fn omega_squared_in_four_dimensions() {
    let g = GeneratorSet::jet(4);
    let om = omega(g);
    let mut expected = DifferentialForm::zero(g, 4);
    for mu in 1..=4 {
        for nu in mu + 1..=4 {
            expected = &expected
                + &dqp(g, &[mu, nu], &[mu, nu])
                    .unwrap()
                    .scale_rational(&rat(-2, 1));
        }
    }
    assert_eq!(om.wedge(&om).unwrap(), expected);
}

#[test]
fn wedge_rejects_mixed_generator_sets() {
    let a = one_form(GeneratorSet::jet(2), Generator::dq(1));
    let b = one_form(GeneratorSet::jet_with_energy(2), Generator::dq(1));
    assert!(matches!(
        a.wedge(&b),
        Err(crate::Error::GeneratorSetMismatch { .. })
    ));
}

#[test]
fn reeb_contraction_of_contact_form() {
    let g = GeneratorSet::jet(3);
    let mut contact = one_form(g, Generator::DU);
    for mu in 1..=3 {
        let p = Polynomial::var(VariableId::p(mu));
        contact = &contact - &one_form(g, Generator::dq(mu)).scale(&p);
    }
    let r = PolyVectorField::coordinate(Generator::DU)
        .contract(&contact)
        .unwrap();
    assert_eq!(r, DifferentialForm::constant(g, rat(1, 1)));
}

#[test]
fn contraction_examples() {
    let g = GeneratorSet::jet(3);
    let beta = dqp(g, &[1, 2, 3], &[]).unwrap();
    let b1 = PolyVectorField::coordinate(Generator::dq(1))
        .contract(&beta)
        .unwrap();
    assert_eq!(b1, dqp(g, &[2, 3], &[]).unwrap());

    let g2 = GeneratorSet::jet(2);
    let w = dqp(g2, &[2], &[1, 2]).unwrap();
    let r = PolyVectorField::coordinate(Generator::dp(1))
        .contract(&w)
        .unwrap();
    assert_eq!(r, -dqp(g2, &[2], &[2]).unwrap());

    let zero_form = DifferentialForm::constant(g2, rat(3, 1));
    assert_eq!(
        PolyVectorField::coordinate(Generator::dq(1)).contract(&zero_form),
        Err(crate::Error::DegreeZero)
    );
}

#[test]
fn bivector_examples() {
    let g = GeneratorSet::jet(4);
    let x = x_omega(4);
    assert_eq!(
        x.contract(&omega(g)).unwrap(),
        DifferentialForm::constant(g, rat(4, 1))
    );
    let expected = -(&dqp(g, &[1], &[1]).unwrap() + &dqp(g, &[2], &[2]).unwrap());
    assert_eq!(
        x.contract(&dqp(g, &[1, 2], &[1, 2]).unwrap()).unwrap(),
        expected
    );
    assert!(x
        .contract(&dqp(g, &[1, 2, 3, 4], &[]).unwrap())
        .unwrap()
        .is_zero());
    assert!(x
        .contract(&one_form(g, Generator::dp(1)))
        .unwrap()
        .is_zero());
}

#[test]
fn exterior_derivative_examples() {
    let g = GeneratorSet::jet(4);
    let mut contact = one_form(g, Generator::DU);
    for mu in 1..=4 {
        contact =
            &contact - &one_form(g, Generator::dq(mu)).scale(&Polynomial::var(VariableId::p(mu)));
    }
    assert_eq!(contact.ext_d(), omega(g));

    let m = Polynomial::var(VariableId::param("m"));
    let u = Polynomial::var(VariableId::Fiber);
    let beta = dqp(g, &[1, 2, 3, 4], &[]).unwrap();
    let w = beta.scale(&(&(&m * &m) * &u));
    let expected = one_form(g, Generator::DU)
        .wedge(&beta)
        .unwrap()
        .scale(&(&m * &m));
    assert_eq!(w.ext_d(), expected);

    assert!(omega(g).ext_d().is_zero());
}

#[test]
fn extension_keeps_canonical_order() {
    let g = GeneratorSet::jet(2);
    let w = dqp(g, &[1], &[2]).unwrap();
    let e = w.extend_to(GeneratorSet::jet_with_energy(2)).unwrap();
    assert_eq!(e.to_string(), "dq1^dp2");
    assert_eq!(
        w.extend_to(GeneratorSet::phase_space(2))
            .unwrap()
            .to_string(),
        "dq1^dp2"
    );
    let du = DifferentialForm::generator(g, Generator::DU).unwrap();
    assert!(du.extend_to(GeneratorSet::phase_space(2)).is_err());
    assert!(w.extend_to(GeneratorSet::jet(3)).is_err());
}

#[test]
fn foreign_coefficients_are_rejected() {
    let g = GeneratorSet::phase_space(2);
    let u = Polynomial::var(VariableId::Fiber);
    assert!(matches!(
        DifferentialForm::scalar(g, u),
        Err(crate::Error::ForeignVariable { .. })
    ));
}

fn jet_form(n: usize, k: usize) -> impl Strategy<Value = DifferentialForm> {
    form(GeneratorSet::jet(n), k, 4)
}

fn sign(k: usize, l: usize) -> Polynomial {
    Polynomial::from_int(if (k * l) % 2 == 0 { 1 } else { -1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graded_anticommutativity(
        (k, l, a, b) in (0usize..4, 0usize..4).prop_flat_map(|(k, l)| (Just(k), Just(l), jet_form(3, k), jet_form(3, l)))
    ) {
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(&sign(k, l)));
    }

    #[test]
    fn wedge_is_associative(a in jet_form(3, 1), b in jet_form(3, 2), c in jet_form(3, 2)) {
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn d_squared_vanishes(a in jet_form(3, 1), b in jet_form(3, 2)) {
        prop_assert!(a.ext_d().ext_d().is_zero());
        prop_assert!(b.ext_d().ext_d().is_zero());
    }

    #[test]
    fn d_is_a_graded_derivation(a in jet_form(2, 1), b in jet_form(2, 2)) {
        let lhs = a.wedge(&b).unwrap().ext_d();
        let rhs = &a.ext_d().wedge(&b).unwrap() - &a.wedge(&b.ext_d()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_leibniz(
        a in jet_form(3, 2), b in jet_form(3, 2),
        f in poly(3), h in poly(3), which in 0usize..7
    ) {
        let gens = GeneratorSet::jet(3);
        let g1 = gens.generator_at(which);
        let g2 = gens.generator_at((which + 3) % 7);
        let v = PolyVectorField::new().with(g1, f).with(g2, h);
        let lhs = v.contract(&a.wedge(&b).unwrap()).unwrap();
        let rhs = &v.contract(&a).unwrap().wedge(&b).unwrap()
            + &a.wedge(&v.contract(&b).unwrap()).unwrap().scale(&sign(2, 1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_matches_component_evaluation(w in jet_form(3, 3), f in poly(3), which in 0usize..7) {
        let gens = GeneratorSet::jet(3);
        let g = gens.generator_at(which);
        let v = PolyVectorField::new().with(g, f.clone());
        let c = v.contract(&w).unwrap();
        for m in gens.monomials(2) {
            let rest = m.generators(&gens);
            let mut seq = vec![g];
            seq.extend(rest.iter().copied());
            prop_assert_eq!(c.coefficient(m), &f * &eval_on(&w, &seq));
        }
    }

    #[test]
    fn bottom_matches_component_evaluation(w in jet_form(3, 4)) {
        let gens = GeneratorSet::jet(3);
        let b = x_omega(3).contract(&w).unwrap();
        for m in gens.monomials(2) {
            let rest = m.generators(&gens);
            let mut expected = Polynomial::zero();
            for mu in 1..=3 {
                let mut seq = vec![Generator::dq(mu), Generator::dp(mu)];
                seq.extend(rest.iter().copied());
                expected += &eval_on(&w, &seq);
            }
            prop_assert_eq!(b.coefficient(m), expected);
        }
    }

}
