mod common;

use lca_core::families::{make_cl2, make_v};
use lca_core::ideal::{ideal_generated_by, is_graded_ideal, Component, GradedSubmodule};
use lca_core::{Bindings, ConformalAlgebra, Element, Execution, ParamPoly, Scalar};
use proptest::prelude::*;

fn algebras() -> Vec<ConformalAlgebra> {
    let (b, s) = (ParamPoly::param("b"), ParamPoly::param("s"));
    let bind = |pairs: &[(&str, Scalar)]| -> Bindings {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    };
    vec![
        make_v(&s, -4..=4)
            .unwrap()
            .instantiate(&bind(&[("s", Scalar::one())])),
        make_v(&s, -4..=4)
            .unwrap()
            .instantiate(&bind(&[("s", Scalar::zero())])),
        make_cl2(&b, &s, -4..=4)
            .unwrap()
            .instantiate(&bind(&[("b", Scalar::new(1, 2)), ("s", Scalar::one())])),
        make_cl2(&b, &s, -4..=4)
            .unwrap()
            .instantiate(&bind(&[("b", Scalar::one()), ("s", Scalar::new(-1, 2))])),
    ]
}

proptest! {
    #![proptest_config(common::config(16))]

    #[test]
    fn closures_are_ideals(which in 0usize..4, g in 0usize..9, a in -3i64..=3, c in 0u32..=1) {
        let alg = &algebras()[which];
        let f = if c == 0 { ParamPoly::one() } else { ParamPoly::p("d") + ParamPoly::int(a) };
        let closure = ideal_generated_by(alg, &Element::term(g, f.clone()), Execution::Parallel).unwrap();
        prop_assert!(closure.converged);
        prop_assert!(closure.submodule.contains(alg.grade(g), &f));
        let r = is_graded_ideal(alg, &closure.submodule, Execution::Parallel).unwrap();
        prop_assert!(r.closed, "{:?}", r.witnesses);
    }
}

#[test]
fn closure_is_minimal_within_the_scl2_pattern() {
    let alg = &algebras()[3];
    let m = alg.index_of("L-2").unwrap();
    let q = ParamPoly::p("d - 1");
    let mut pattern = GradedSubmodule::full(alg);
    pattern.set(-2, Component::Principal(q.clone()));
    assert!(
        is_graded_ideal(alg, &pattern, Execution::Parallel)
            .unwrap()
            .closed
    );
    for seed in [
        Element::term(m, q.clone()),
        Element::generator(alg.index_of("L3").unwrap()),
    ] {
        let c = ideal_generated_by(alg, &seed, Execution::Parallel).unwrap();
        assert!(c.submodule.is_subset(&pattern));
    }
}
