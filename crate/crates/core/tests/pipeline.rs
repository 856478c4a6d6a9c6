use jetforms::catalog::{entries, multiple_of};
use jetforms::dsl::{form_from_json, form_to_json, render_form, Format, Workspace};
use jetforms::euler::{euler, euler_first_order, FirstOrderLagrangian};
use jetforms::jetpde::{extract_pde, synthesize_form};
use jetforms::msympl::check_multisymplectic;
use jetforms::variational::{reconstruct, Status, VariationalVerdict};
use proptest::prelude::*;

#[test]
fn catalog_forms_represent_their_equations() {
    for e in entries().unwrap() {
        let ctx = e.workspace().context().clone();
        assert!(
            ctx.is_effective(&e.effective).unwrap().is_effective(),
            "{}",
            e.name
        );
        let k = multiple_of(&extract_pde(&ctx, &e.effective).unwrap(), &e.lhs);
        assert!(k.is_some(), "{}", e.name);
    }
}

#[test]
fn synthesized_forms_extract_back() {
    for e in entries().unwrap() {
        let ctx = e.workspace().context().clone();
        let w = synthesize_form(&ctx, &e.lhs, 2).unwrap();
        assert_eq!(extract_pde(&ctx, &w).unwrap(), e.lhs, "{}", e.name);
    }
}

#[test]
fn reconstructed_lagrangians_reproduce_the_form() {
    for name in ["klein-gordon", "wave1d"] {
        let e = jetforms::catalog::catalog(name).unwrap();
        let ctx = e.workspace().context().clone();
        let v = reconstruct(&ctx, &e.effective, 2).unwrap();
        let Status::ReconstructionFound { lagrangian, k, .. } = &v.status else {
            panic!("{name}: {}", v.status_name())
        };
        let lag = FirstOrderLagrangian::new(&ctx, lagrangian.clone()).unwrap();
        assert_eq!(
            euler_first_order(&ctx, &lag),
            e.effective.scale_rational(k),
            "{name}"
        );
        assert_eq!(
            euler(&ctx, &lag.form(&ctx)).unwrap(),
            e.effective.scale_rational(k),
            "{name}"
        );
        let back = VariationalVerdict::from_json(&v.to_json()).unwrap();
        assert_eq!(back.to_json(), v.to_json());
    }
}

#[test]
fn reports_serialize() {
    let e = jetforms::catalog::catalog("plebanski2").unwrap();
    let r = check_multisymplectic(e.workspace().context(), &e.effective, 4, 7).unwrap();
    let doc = r.to_json();
    assert_eq!(doc["verdict"], serde_json::json!(r.verdict));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_and_json_round_trip(a in -9i64..=9, b in 1i64..=5, i in 1usize..=3, j in 1usize..=3) {
        let ws = Workspace::new(3).unwrap().with_params(["m"]).unwrap();
        let text = format!("{a}/{b}*m*q{i}*dq{i}^dp{j} + p{j}^2*Omega");
        let w = ws.parse_form(&text).unwrap();
        prop_assert_eq!(ws.parse_form(&render_form(&w, Format::Text)).unwrap(), w.clone());
        prop_assert_eq!(form_from_json(&form_to_json(&w)).unwrap(), w);
    }
}
