//! Cross-module checks: family structure polynomials against the functional
//! equation solver, and GD round trips.

use lca_core::conformal::spectral_data;
use lca_core::families::{make_cl1, make_cl2, make_scl2, make_v, make_vir};
use lca_core::feq::{solve_feq, SolverMode, SpectralTriple};
use lca_core::{Bindings, ConformalAlgebra, Degree, ParamPoly, Scalar};

fn bind(pairs: &[(&str, Scalar)]) -> Bindings {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Every nonzero instantiated `p_{i,j}` lies in the solution space of the
/// triple read off from `p_{0,i}`, `p_{0,j}` and `p_{0,i+j}`.
fn assert_in_solution_space(alg: &ConformalAlgebra, bindings: &Bindings) -> usize {
    let sp = spectral_data(alg, bindings).unwrap();
    assert!(sp.uniform_c);
    let inst = alg.instantiate(bindings);
    let mut checked = 0;
    for (u, v, terms) in inst.entries() {
        for (w, p) in terms {
            let e = |i: usize| &sp.entries[&inst.grade(i)];
            let t = SpectralTriple::new(
                e(u).a.clone(),
                e(u).b.clone(),
                e(v).a.clone(),
                e(v).b.clone(),
                e(*w).a.clone(),
                e(*w).b.clone(),
            );
            let Degree::Finite(k) = p.formal_degree() else {
                continue;
            };
            let sol = solve_feq(&t, SolverMode::Full(k)).unwrap();
            assert!(
                sol.contains(p),
                "{} {} -> {}: {p} not a solution for {t}",
                inst.generator(u).name,
                inst.generator(v).name,
                inst.generator(*w).name
            );
            checked += 1;
        }
    }
    checked
}

#[test]
fn family_polynomials_solve_the_functional_equation() {
    let one = Scalar::one();
    let s = ParamPoly::param("s");
    let b = ParamPoly::param("b");
    let mut total = assert_in_solution_space(&make_vir(), &Bindings::new());
    total += assert_in_solution_space(
        &make_v(&s, -4..=4).unwrap(),
        &bind(&[("s", Scalar::new(2, 3))]),
    );
    total += assert_in_solution_space(&make_cl1(&s, 4).unwrap(), &bind(&[("s", one.clone())]));
    total += assert_in_solution_space(
        &make_cl2(&b, &s, -4..=4).unwrap(),
        &bind(&[("b", Scalar::new(1, 2)), ("s", Scalar::new(-1, 1))]),
    );
    total += assert_in_solution_space(
        &make_scl2(&one, &s, -5..=5).unwrap(),
        &bind(&[("s", Scalar::new(3, 2))]),
    );
    assert!(total > 100);
}
