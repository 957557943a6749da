//! One PASS/FAIL line per acceptance criterion.
//!
//! `LCA_TEST_SEED` overrides the mutation seed.

mod common;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use lca_core::conformal::{check_jacobi, check_skew, degree_relation_check, spectral_data};
use lca_core::families::{make_cl1, make_cl2, make_scl2, make_scl2_literal, make_v, make_vir};
use lca_core::feq::{
    factor_check, factorization_triples, reproduce_table, solve_feq, SolverMode, TargetWeight,
};
use lca_core::gd::{self, GDAlgebra};
use lca_core::ideal::{simplicity_probe, Component};
use lca_core::{conformal, Bindings, ConformalAlgebra, Execution, Monomial, ParamPoly, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SCL2_B: [(i64, i64); 4] = [(1, 2), (1, 1), (3, 2), (-1, 1)];

struct Outcome {
    id: usize,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn s() -> ParamPoly {
    ParamPoly::param("s")
}
fn b() -> ParamPoly {
    ParamPoly::param("b")
}
fn q(n: i64, d: i64) -> Scalar {
    Scalar::new(n, d)
}
fn bind(pairs: &[(&str, Scalar)]) -> Bindings {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn families() -> Vec<(String, ConformalAlgebra)> {
    let mut out = vec![
        ("Vir".to_string(), make_vir()),
        ("V(s)".to_string(), make_v(&s(), -6..=6).unwrap()),
        ("CL1(s)".to_string(), make_cl1(&s(), 6).unwrap()),
        (
            "CL2(b,s)".to_string(),
            make_cl2(&b(), &s(), -6..=6).unwrap(),
        ),
    ];
    for (n, d) in SCL2_B {
        out.push((
            format!("SCL2({},s)", q(n, d)),
            make_scl2(&q(n, d), &s(), -6..=6).unwrap(),
        ));
    }
    out
}

fn family_verification(exec: Execution, log: &mut String) -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    for (name, alg) in families() {
        let skew = check_skew(&alg);
        let jac = check_jacobi(&alg, exec);
        let pass = skew.passed() && jac.certified();
        ok &= pass;
        writeln!(
            log,
            "  {name}: skew checked={} skipped={} violations={}; jacobi checked={} skipped={} violations={}",
            skew.checked,
            skew.skipped,
            skew.violations.len(),
            jac.checked,
            jac.skipped,
            jac.violations.len()
        )
        .unwrap();
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(60);
    Outcome {
        id: 1,
        title: "family skew/Jacobi verification",
        passed: ok && fast,
        detail: format!("all zero residuals: {ok}; under 60 s: {fast}"),
    }
}

fn table_reproduction(log: &mut String) -> Outcome {
    let mut ok = true;
    let mut listed = 0;
    for w in [TargetWeight::Nonzero, TargetWeight::Zero] {
        let r = reproduce_table(w);
        ok &= r.passed();
        listed += r
            .outcomes
            .iter()
            .filter(|o| o.case.expected.is_some())
            .count();
        for line in r.to_string().lines() {
            writeln!(log, "  {line}").unwrap();
        }
    }
    Outcome {
        id: 2,
        title: "top-degree solution tables",
        passed: ok && listed == 14,
        detail: format!("{listed} listed cases plus off-table choices"),
    }
}

fn scl2_oracle(log: &mut String) -> Outcome {
    let mut ok = true;
    for (n, d) in SCL2_B {
        let bq = q(n, d);
        let oracle = make_scl2(&bq, &s(), -6..=6).unwrap();
        let literal = make_scl2_literal(&bq, &s(), -6..=6).unwrap();
        let diff = conformal::table_diff(&oracle, &literal);
        ok &= diff.is_empty();
        writeln!(log, "  b={bq}: {} mismatching entries", diff.len()).unwrap();
        for m in diff.iter().take(5) {
            writeln!(log, "    {m}").unwrap();
        }
    }
    Outcome {
        id: 3,
        title: "SCL2 ideal construction equals closed formulas",
        passed: ok,
        detail: "b in {1/2, 1, 3/2, -1}, s symbolic, window -6..6".into(),
    }
}

fn gd_round_trip(log: &mut String) -> Outcome {
    let a1 = gd::make_a1(6);
    let g1 = GDAlgebra::new(a1.clone(), gd::s_bracket(&a1, &s())).unwrap();
    let a2 = gd::make_a2(&b(), -6..=6);
    let g2 = GDAlgebra::new(a2.clone(), gd::s_bracket(&a2, &s())).unwrap();
    let compat = gd::check_gd(&g1).passed() && gd::check_gd(&g2).passed();
    let q1 = gd::quadratic_from_gd(&g1).unwrap();
    let q2 = gd::quadratic_from_gd(&g2).unwrap();
    let cl1 = q1 == make_cl1(&s(), 6).unwrap();
    let cl2 = q2 == make_cl2(&b(), &-s(), -6..=6).unwrap();
    let inv = gd::gd_from_quadratic(&q1).as_ref() == Ok(&g1)
        && gd::gd_from_quadratic(&q2).as_ref() == Ok(&g2);
    writeln!(
        log,
        "  compatibility zero: {compat}; A1 -> CL1(s): {cl1}; A2(b) -> CL2(b,-s): {cl2}; inverse: {inv}"
    )
    .unwrap();
    Outcome {
        id: 4,
        title: "GD correspondence round trip",
        passed: compat && cl1 && cl2 && inv,
        detail: "symbolic in s and b".into(),
    }
}

fn degree_relations(log: &mut String) -> Outcome {
    let one = Scalar::one();
    let cases: Vec<(String, ConformalAlgebra, Vec<Bindings>)> = {
        let sb = |vals: [Scalar; 3]| -> Vec<Bindings> {
            vals.into_iter().map(|v| bind(&[("s", v)])).collect()
        };
        let mut v = vec![
            ("Vir".to_string(), make_vir(), vec![Bindings::new(); 3]),
            (
                "V(s)".to_string(),
                make_v(&s(), -6..=6).unwrap(),
                sb([q(0, 1), q(1, 1), q(-5, 3)]),
            ),
            (
                "CL1(s)".to_string(),
                make_cl1(&s(), 6).unwrap(),
                sb([q(0, 1), q(1, 1), q(7, 2)]),
            ),
            (
                "CL2(b,s)".to_string(),
                make_cl2(&b(), &s(), -6..=6).unwrap(),
                vec![
                    bind(&[("b", one.clone()), ("s", q(0, 1))]),
                    bind(&[("b", q(1, 2)), ("s", one.clone())]),
                    bind(&[("b", q(-2, 3)), ("s", q(5, 4))]),
                ],
            ),
        ];
        for (n, d) in SCL2_B {
            v.push((
                format!("SCL2({},s)", q(n, d)),
                make_scl2(&q(n, d), &s(), -6..=6).unwrap(),
                sb([q(0, 1), q(1, 1), q(-3, 2)]),
            ));
        }
        v
    };
    let mut ok = true;
    for (name, alg, bindings) in cases {
        let mut checked = 0;
        let mut violations = 0;
        for bnd in &bindings {
            match spectral_data(&alg, bnd).and_then(|sp| degree_relation_check(&alg, &sp, bnd)) {
                Ok(r) => {
                    checked += r.checked;
                    violations += r.violations.len();
                }
                Err(e) => {
                    ok = false;
                    writeln!(log, "  {name}: {e}").unwrap();
                }
            }
        }
        ok &= violations == 0 && checked > 0;
        writeln!(log, "  {name}: checked={checked} violations={violations}").unwrap();
    }
    Outcome {
        id: 5,
        title: "degree and shift relations",
        passed: ok,
        detail: "3 bindings per family".into(),
    }
}

fn factorization(log: &mut String) -> Outcome {
    let mut ok = true;
    let mut triples = 0;
    for t in factorization_triples() {
        let k = t.expected_degree().unwrap();
        let sol = solve_feq(&t, SolverMode::Full(k + 2)).unwrap();
        let factored: Vec<_> = sol.basis.iter().map(|p| factor_check(p, &t)).collect();
        let good = !sol.basis.is_empty() && factored.iter().all(Result::is_ok);
        ok &= good;
        triples += usize::from(good);
        let quotients: Vec<String> = factored
            .iter()
            .map(|r| match r {
                Ok(f) => f.to_string(),
                Err(e) => e.to_string(),
            })
            .collect();
        writeln!(
            log,
            "  {t}: dim={} quotients [{}]",
            sol.dimension(),
            quotients.join("; ")
        )
        .unwrap();
    }
    Outcome {
        id: 6,
        title: "factorization through d + b_ij",
        passed: ok && triples >= 5,
        detail: format!("{triples} triples"),
    }
}

fn non_simplicity(exec: Execution, log: &mut String) -> Outcome {
    let cl2 = make_cl2(&b(), &s(), -6..=6).unwrap();
    let v = make_v(&s(), -6..=6).unwrap();
    let half =
        simplicity_probe(&cl2, -2..=2, &bind(&[("b", q(1, 2)), ("s", q(1, 1))]), exec).unwrap();
    let third =
        simplicity_probe(&cl2, -2..=2, &bind(&[("b", q(1, 3)), ("s", q(1, 1))]), exec).unwrap();
    let v1 = simplicity_probe(&v, -2..=2, &bind(&[("s", q(1, 1))]), exec).unwrap();
    let l0 = half.seeds.iter().find(|o| o.seed == "L0").unwrap();
    let expected = vec![(-1, Component::Principal(ParamPoly::p("d + 2")))];
    let found = l0.deficient == expected;
    for (name, r) in [("CL2(1/2,1)", &half), ("CL2(1/3,1)", &third), ("V(1)", &v1)] {
        for o in &r.seeds {
            writeln!(log, "  {name} seed {}: {}", o.seed, o.closure.submodule).unwrap();
        }
    }
    Outcome {
        id: 7,
        title: "non-simplicity evidence at truncation",
        passed: found && !third.found_proper_closure() && !v1.found_proper_closure(),
        detail: "CL2(1/2,1) proper from L0; V(1) and CL2(1/3,1) none".into(),
    }
}

fn random_monomial(rng: &mut ChaCha8Rng) -> ParamPoly {
    let deg = rng.gen_range(0..=2u32);
    let a = rng.gen_range(0..=deg);
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-5..=5);
    }
    let den = rng.gen_range(1..=3);
    ParamPoly::term(Monomial::formal(a, deg - a, 0), Scalar::new(num, den))
}

fn mutation(exec: Execution, log: &mut String) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(common::seed());
    let mut ok = true;
    for (name, alg) in families() {
        let pairs: Vec<(usize, usize, usize)> = (0..alg.len())
            .flat_map(|u| (0..alg.len()).map(move |v| (u, v)))
            .filter_map(|(u, v)| {
                alg.decidable(u, v)
                    .then(|| alg.by_grade(alg.grade(u) + alg.grade(v)).map(|w| (u, v, w)))
                    .flatten()
            })
            .collect();
        let mut caught = 0;
        for _ in 0..20 {
            let (u, v, w) = pairs[rng.gen_range(0..pairs.len())];
            let mut broken = alg.clone();
            let old = alg.coefficient(u, v, w);
            broken
                .set(u, v, w, &old + &random_monomial(&mut rng))
                .unwrap();
            let detected =
                !check_skew(&broken).passed() || !check_jacobi(&broken, exec).violations.is_empty();
            caught += usize::from(detected);
        }
        ok &= caught == 20;
        writeln!(log, "  {name}: {caught}/20 perturbations detected").unwrap();
    }
    Outcome {
        id: 8,
        title: "mutation sensitivity",
        passed: ok,
        detail: format!("seed {:#x}", common::seed()),
    }
}

fn suite(exec: Execution) -> (Vec<Outcome>, String) {
    let mut logs = vec![String::new(); 8];
    let outcomes = vec![
        family_verification(exec, &mut logs[0]),
        table_reproduction(&mut logs[1]),
        scl2_oracle(&mut logs[2]),
        gd_round_trip(&mut logs[3]),
        degree_relations(&mut logs[4]),
        factorization(&mut logs[5]),
        non_simplicity(exec, &mut logs[6]),
        mutation(exec, &mut logs[7]),
    ];
    let mut report = String::new();
    for (o, log) in outcomes.iter().zip(&logs) {
        writeln!(
            report,
            "[{}] {}: {}",
            o.id,
            o.title,
            if o.passed { "pass" } else { "fail" }
        )
        .unwrap();
        report.push_str(log);
    }
    (outcomes, report)
}

#[test]
fn acceptance() {
    let (outcomes, first) = suite(Execution::Parallel);
    let (_, second) = suite(Execution::Parallel);
    let (_, sequential) = suite(Execution::Sequential);
    let deterministic = first == second && first == sequential;

    println!("{first}");
    let mut all = true;
    for o in &outcomes {
        all &= o.passed;
        println!(
            "{} criterion {}: {} ({})",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            o.detail
        );
    }
    println!(
        "{} criterion 9: determinism (two parallel runs and one sequential run byte-identical)",
        if deterministic { "PASS" } else { "FAIL" }
    );
    assert!(all && deterministic, "acceptance criteria failed");
}
