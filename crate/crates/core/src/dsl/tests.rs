use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::exterior::{dqp, DifferentialForm, Generator, GeneratorSet};
use crate::ratpoly::{Polynomial, VariableId};
use crate::test_support::form;

fn ws(n: usize) -> Workspace {
    Workspace::new(n).unwrap().with_params(["m", "c"]).unwrap()
}

#[test]
fn shorthand_and_named_objects() {
    let w = ws(4);
    let g = w.context().gens();
    let p1 = w.parse_form("d[1,2;1,2] - beta").unwrap();
    assert_eq!(p1, &dqp(g, &[1, 2], &[1, 2]).unwrap() - w.context().beta());
    assert_eq!(&w.parse_form("Omega").unwrap(), w.context().omega());
    assert_eq!(&w.parse_form("contact").unwrap(), w.context().contact());
    assert_eq!(&w.parse_form("beta_2").unwrap(), w.context().beta_mu(2));
    assert!(w.parse_form("dq1^dq1").unwrap().is_zero());
}

#[test]
fn klein_gordon_form() {
    let w = ws(4);
    let kg = w
        .parse_form("(m^2*u)*beta - beta_1^dp1 + beta_2^dp2 + beta_3^dp3 + beta_4^dp4")
        .unwrap();
    let ctx = w.context();
    let m = Polynomial::var(VariableId::param("m"));
    let mut expected = ctx
        .beta()
        .scale(&(&(&m * &m) * &Polynomial::var(VariableId::Fiber)));
    for mu in 1..=4 {
        let t = ctx
            .beta_mu(mu)
            .wedge(&DifferentialForm::generator(ctx.gens(), Generator::dp(mu)).unwrap())
            .unwrap();
        expected = if mu == 1 {
            &expected - &t
        } else {
            &expected + &t
        };
    }
    assert_eq!(kg, expected);
}

#[test]
fn precedence() {
    let w = ws(2);
    assert_eq!(
        w.parse_polynomial("-p1^2").unwrap(),
        -(&Polynomial::var(VariableId::p(1)) * &Polynomial::var(VariableId::p(1)))
    );
    assert_eq!(
        w.parse_form("2*dq1^dp1").unwrap(),
        w.parse_form("2*(dq1^dp1)").unwrap()
    );
    assert_eq!(
        w.parse_form("dq1*dp1").unwrap(),
        w.parse_form("dq1^dp1").unwrap()
    );
    assert_eq!(
        w.parse_polynomial("1/2*c - 1/3/2").unwrap(),
        w.parse_polynomial("(3*c - 1)/6").unwrap()
    );
}

#[test]
fn errors() {
    let w = ws(2);
    assert!(matches!(w.parse_form("dq3"), Err(Error::Dimension(_))));
    assert!(matches!(w.parse_form("d[1;3]"), Err(Error::Dimension(_))));
    assert_eq!(
        w.parse_form("k*dq1"),
        Err(Error::UnknownParameter("k".into()))
    );
    assert!(matches!(
        w.parse_form("dq1 + dq1^dq2"),
        Err(Error::DegreeMismatch { .. })
    ));
    assert!(matches!(w.parse_form("dq1^2"), Err(Error::Parse { .. })));
    assert!(matches!(w.parse_form("dq1/u"), Err(Error::Parse { .. })));
    assert!(matches!(w.parse_form("dq1/0"), Err(Error::Parse { .. })));
    assert!(matches!(
        w.parse_form("dq1 +"),
        Err(Error::Parse { position: 5, .. })
    ));
    assert!(matches!(
        w.parse_polynomial("dq1"),
        Err(Error::Parse { .. })
    ));
    let mut w = ws(2);
    assert!(w.declare_param("p1").is_err());
    assert!(w.declare_param("beta").is_err());
}

#[test]
fn extended_generator_sets() {
    let w = ws(2);
    let a = w.parse_form("de^beta + contact^dq1^dp1").unwrap();
    assert_eq!(a.gens(), GeneratorSet::jet_with_energy(2));
    let b = w.parse_form("de^beta + dp1^dphi^beta_1").unwrap();
    assert_eq!(b.gens(), GeneratorSet::phase_space(2));
    assert!(matches!(
        w.parse_form("dphi^du"),
        Err(Error::UnknownGenerator { .. })
    ));
}

#[test]
fn bindings_resolve() {
    let mut w = ws(2);
    let wave = w.parse_form("-c*dq1^dp2 - dq2^dp1").unwrap();
    w.bind("wave", Binding::Form(wave.clone())).unwrap();
    assert_eq!(
        w.parse_form("2*wave").unwrap(),
        wave.scale_rational(&crate::ratpoly::rat(2, 1))
    );
    let other = Workspace::new(3).unwrap().parse_form("beta").unwrap();
    assert!(matches!(
        w.bind("x", Binding::Form(other)),
        Err(Error::Dimension(_))
    ));
    let jet = w.parse_jet("phi_11 - c*phi_22").unwrap();
    w.bind("lhs", Binding::Jet(jet.clone())).unwrap();
    assert_eq!(
        w.parse_jet("lhs + phi").unwrap(),
        &jet + &crate::jetpde::jet("phi", &[])
    );
}

#[test]
fn jet_parsing() {
    let w = ws(4);
    let p = w
        .parse_jet("phi_11*phi_22 - phi_12^2 + phi_13 + phi_24")
        .unwrap();
    assert_eq!(p.len(), 4);
    assert_eq!(
        w.parse_jet("phi_21").unwrap(),
        w.parse_jet("phi_12").unwrap()
    );
    assert!(matches!(w.parse_jet("phi_15"), Err(Error::Dimension(_))));
    assert!(matches!(w.parse_jet("dq1"), Err(Error::Parse { .. })));
    assert!(matches!(w.parse_jet("d[1;1]"), Err(Error::Parse { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(a in form(GeneratorSet::jet(3), 2, 5)) {
        // "0" carries no degree.
        prop_assume!(!a.is_zero());
        let w = Workspace::new(3).unwrap();
        prop_assert_eq!(w.parse_form(&render_form(&a, Format::Text)).unwrap(), a);
    }

    #[test]
    fn json_round_trip(a in form(GeneratorSet::jet(4), 3, 5)) {
        let doc = render_form(&a, Format::Json);
        let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        prop_assert_eq!(form_from_json(&v).unwrap(), a);
    }

    #[test]
    fn polynomial_round_trip(p in crate::test_support::poly(3)) {
        let w = Workspace::new(3).unwrap();
        prop_assert_eq!(w.parse_polynomial(&p.to_string()).unwrap(), p);
    }
}
