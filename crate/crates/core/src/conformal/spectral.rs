//! Diagnostics for algebras with one generator per grade and a Virasoro
//! grade-zero part: the affine action `p_{0,i} = c(∂ + a_i λ + b_i)`, the
//! degree relations it forces on every structure polynomial, and the
//! degree classification of `p_{k,−k}`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::ConformalAlgebra;
use crate::poly::{Bindings, Degree, Monomial};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("diagnostics need exactly one generator per grade")]
    NotOnePerGrade,
    #[error("no generator of grade 0")]
    NoGradeZero,
    #[error("p_(0,{0}) is not of the form c(d + a*x + b)")]
    NotAffine(i64),
    #[error("p_(0,{0}) vanishes; the components it annihilates span a proper ideal")]
    ZeroAction(i64),
    #[error("p_(0,{0}) still depends on parameters {1:?}; bind them first")]
    Unbound(i64, Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralEntry {
    pub c: Scalar,
    pub a: Scalar,
    pub b: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralData {
    pub entries: BTreeMap<i64, SpectralEntry>,
    /// Whether the same `c` appears at every grade.
    pub uniform_c: bool,
}

fn grade_map(alg: &ConformalAlgebra) -> Result<(BTreeMap<i64, usize>, usize), SpectralError> {
    let by_grade = alg.one_per_grade().ok_or(SpectralError::NotOnePerGrade)?;
    let zero = *by_grade.get(&0).ok_or(SpectralError::NoGradeZero)?;
    Ok((by_grade, zero))
}

pub fn spectral_data(
    alg: &ConformalAlgebra,
    bindings: &Bindings,
) -> Result<SpectralData, SpectralError> {
    let (by_grade, zero) = grade_map(alg)?;
    let mut entries = BTreeMap::new();
    for (&i, &gen) in &by_grade {
        let p = alg.coefficient(zero, gen, gen).instantiate(bindings);
        if p.is_zero() {
            return Err(SpectralError::ZeroAction(i));
        }
        if p.has_params() {
            return Err(SpectralError::Unbound(i, p.params().into_iter().collect()));
        }
        if p.formal_degree() > Degree::Finite(1) || p.mentions(&crate::FormalVar::Mu) {
            return Err(SpectralError::NotAffine(i));
        }
        let c = p.coeff(&Monomial::formal(1, 0, 0));
        let Some(inv) = c.recip() else {
            return Err(SpectralError::NotAffine(i));
        };
        let a = &p.coeff(&Monomial::formal(0, 1, 0)) * &inv;
        let b = &p.coeff(&Monomial::one()) * &inv;
        entries.insert(i, SpectralEntry { c, a, b });
    }
    let cs: BTreeSet<&Scalar> = entries.values().map(|e| &e.c).collect();
    Ok(SpectralData {
        uniform_c: cs.len() <= 1,
        entries,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Relation {
    /// `a_i + a_j = a_{i+j} + deg p_{i,j} + 1`
    Degree,
    /// `b_i + b_j = b_{i+j}`
    Shift,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeViolation {
    pub left: i64,
    pub right: i64,
    pub relation: Relation,
    /// Left side minus right side of the failing relation.
    pub defect: Scalar,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeReport {
    pub checked: usize,
    pub violations: Vec<DegreeViolation>,
}

/// Checks both relations on every ordered pair with a nonzero structure
/// polynomial whose target grade is in the window.
pub fn degree_relation_check(
    alg: &ConformalAlgebra,
    spectral: &SpectralData,
    bindings: &Bindings,
) -> Result<DegreeReport, SpectralError> {
    let (by_grade, _) = grade_map(alg)?;
    let mut report = DegreeReport::default();
    for (&i, &u) in &by_grade {
        for (&j, &v) in &by_grade {
            let Some(&w) = by_grade.get(&(i + j)) else {
                continue;
            };
            let p = alg.coefficient(u, v, w).instantiate(bindings);
            let Degree::Finite(deg) = p.formal_degree() else {
                continue;
            };
            report.checked += 1;
            let (ei, ej, ek) = (
                &spectral.entries[&i],
                &spectral.entries[&j],
                &spectral.entries[&(i + j)],
            );
            let defect_a = &(&ei.a + &ej.a) - &(&ek.a + &Scalar::from_int(deg as i64 + 1));
            if !defect_a.is_zero() {
                report.violations.push(DegreeViolation {
                    left: i,
                    right: j,
                    relation: Relation::Degree,
                    defect: defect_a,
                });
            }
            let defect_b = &(&ei.b + &ej.b) - &ek.b;
            if !defect_b.is_zero() {
                report.violations.push(DegreeViolation {
                    left: i,
                    right: j,
                    relation: Relation::Shift,
                    defect: defect_b,
                });
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportClassification {
    pub i0: BTreeSet<i64>,
    pub i1: BTreeSet<i64>,
    pub i2: BTreeSet<i64>,
    /// Positive grades with `deg p_{k,−k} > 2`, or with `−k` missing from
    /// the window.
    pub unclassified: BTreeSet<i64>,
}

/// Sorts each positive grade `k` with `p_{k,−k} ≠ 0` by the degree of
/// `p_{k,−k}`.
pub fn classify_support(
    alg: &ConformalAlgebra,
    bindings: &Bindings,
) -> Result<SupportClassification, SpectralError> {
    let (by_grade, zero) = grade_map(alg)?;
    let mut out = SupportClassification::default();
    for (&k, &u) in by_grade.range(1..) {
        let Some(&v) = by_grade.get(&-k) else {
            out.unclassified.insert(k);
            continue;
        };
        let p = alg.coefficient(u, v, zero).instantiate(bindings);
        match p.formal_degree() {
            Degree::MinusInfinity => {}
            Degree::Finite(0) => {
                out.i0.insert(k);
            }
            Degree::Finite(1) => {
                out.i1.insert(k);
            }
            Degree::Finite(2) => {
                out.i2.insert(k);
            }
            Degree::Finite(_) => {
                out.unclassified.insert(k);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::Generator;
    use crate::families;
    use crate::poly::ParamPoly;

    fn bind(pairs: &[(&str, Scalar)]) -> Bindings {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    }

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::new(n, d)
    }

    #[test]
    fn virasoro_spectrum() {
        let sd = spectral_data(&families::make_vir(), &Bindings::new()).unwrap();
        assert_eq!(
            sd.entries[&0],
            SpectralEntry {
                c: q(1, 1),
                a: q(2, 1),
                b: q(0, 1)
            }
        );
        assert!(sd.uniform_c);
    }

    #[test]
    fn cl1_spectrum_at_s_one() {
        let alg = families::make_cl1(&ParamPoly::param("s"), 5).unwrap();
        let sd = spectral_data(&alg, &bind(&[("s", q(1, 1))])).unwrap();
        for j in -1..=5 {
            let e = &sd.entries[&j];
            assert_eq!((&e.c, &e.a, &e.b), (&q(1, 1), &q(j + 2, 1), &q(j, 1)));
        }
        assert!(sd.uniform_c);
    }

    #[test]
    fn cl2_spectrum() {
        let alg =
            families::make_cl2(&ParamPoly::param("b"), &ParamPoly::param("s"), -4..=4).unwrap();
        let sd = spectral_data(&alg, &bind(&[("b", q(1, 1)), ("s", q(0, 1))])).unwrap();
        for j in -4..=4 {
            let e = &sd.entries[&j];
            assert_eq!((&e.c, &e.a, &e.b), (&q(1, 1), &q(j + 2, 1), &q(0, 1)));
        }
        let sd = spectral_data(&alg, &bind(&[("b", q(1, 1)), ("s", q(1, 1))])).unwrap();
        for j in -4..=4 {
            assert_eq!(sd.entries[&j].b, q(-j, 1));
        }
    }

    #[test]
    fn v_spectrum_needs_bindings() {
        let alg = families::make_v(&ParamPoly::param("s"), -2..=2).unwrap();
        assert!(matches!(
            spectral_data(&alg, &Bindings::new()),
            Err(SpectralError::Unbound(..))
        ));
        let sd = spectral_data(&alg, &bind(&[("s", q(1, 1))])).unwrap();
        for j in -2..=2 {
            assert_eq!(
                (&sd.entries[&j].a, &sd.entries[&j].b),
                (&q(2, 1), &q(-j, 1))
            );
        }
    }

    #[test]
    fn spectral_errors() {
        let mut alg =
            ConformalAlgebra::new([], vec![Generator::new("L0", 0), Generator::new("L1", 1)])
                .unwrap();
        alg.set(0, 0, 0, ParamPoly::p("d + 2*x")).unwrap();
        assert_eq!(
            spectral_data(&alg, &Bindings::new()),
            Err(SpectralError::ZeroAction(1))
        );
        alg.set(0, 1, 1, ParamPoly::p("x^2")).unwrap();
        assert_eq!(
            spectral_data(&alg, &Bindings::new()),
            Err(SpectralError::NotAffine(1))
        );
        alg.set(0, 1, 1, ParamPoly::p("3*x + 1")).unwrap();
        assert_eq!(
            spectral_data(&alg, &Bindings::new()),
            Err(SpectralError::NotAffine(1))
        );
        let cur = ConformalAlgebra::new([], vec![Generator::new("e", 0), Generator::new("f", 0)])
            .unwrap();
        assert_eq!(
            spectral_data(&cur, &Bindings::new()),
            Err(SpectralError::NotOnePerGrade)
        );
    }

    #[test]
    fn non_uniform_c_is_reported_not_rejected() {
        let mut alg =
            ConformalAlgebra::new([], vec![Generator::new("L0", 0), Generator::new("L1", 1)])
                .unwrap();
        alg.set(0, 0, 0, ParamPoly::p("d + 2*x")).unwrap();
        alg.set(0, 1, 1, ParamPoly::p("2*d + 2*x")).unwrap();
        let sd = spectral_data(&alg, &Bindings::new()).unwrap();
        assert!(!sd.uniform_c);
        assert_eq!(sd.entries[&1].a, q(1, 1));
    }

    #[test]
    fn degree_relations_on_cl1() {
        let alg = families::make_cl1(&ParamPoly::param("s"), 4).unwrap();
        let b = bind(&[("s", q(1, 1))]);
        let sd = spectral_data(&alg, &b).unwrap();
        let report = degree_relation_check(&alg, &sd, &b).unwrap();
        assert!(report.checked > 0);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn degree_relations_on_scl2_constant_pairs() {
        let alg = families::make_scl2(&q(1, 1), &ParamPoly::param("s"), -6..=6).unwrap();
        let b = bind(&[("s", q(1, 1))]);
        let sd = spectral_data(&alg, &b).unwrap();
        assert_eq!(
            (&sd.entries[&-2].a, &sd.entries[&-2].b),
            (&q(1, 1), &q(2, 1))
        );
        let report = degree_relation_check(&alg, &sd, &b).unwrap();
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        // (1, −3) lands on the rescaled generator with a constant coefficient.
        let (l1, l3, m) = (
            alg.index_of("L1").unwrap(),
            alg.index_of("L-3").unwrap(),
            alg.index_of("M").unwrap(),
        );
        assert_eq!(
            alg.coefficient(l1, l3, m).formal_degree(),
            Degree::Finite(0)
        );
    }

    #[test]
    fn degree_relation_violation_is_flagged() {
        // p_{0,1} = ∂ + 3λ gives a_1 = 3, p_{0,2} = ∂ + 2λ gives a_2 = 2;
        // p_{1,1} = ∂ + 2λ would need 3 + 3 = 2 + 1 + 1.
        let mut alg = ConformalAlgebra::new(
            [],
            vec![
                Generator::new("L0", 0),
                Generator::new("L1", 1),
                Generator::new("L2", 2),
            ],
        )
        .unwrap();
        alg.set(0, 0, 0, ParamPoly::p("d + 2*x")).unwrap();
        alg.set(0, 1, 1, ParamPoly::p("d + 3*x")).unwrap();
        alg.set(0, 2, 2, ParamPoly::p("d + 2*x")).unwrap();
        alg.set(1, 1, 2, ParamPoly::p("d + 2*x")).unwrap();
        let sd = spectral_data(&alg, &Bindings::new()).unwrap();
        let report = degree_relation_check(&alg, &sd, &Bindings::new()).unwrap();
        assert!(report.violations.iter().any(|v| v.left == 1
            && v.right == 1
            && v.relation == Relation::Degree
            && v.defect == q(2, 1)));
    }

    #[test]
    fn support_classification() {
        let v1 = families::make_v(&ParamPoly::param("s"), -5..=5).unwrap();
        let c = classify_support(&v1, &bind(&[("s", q(1, 1))])).unwrap();
        assert_eq!(c.i1, (1..=5).collect());
        assert!(c.i0.is_empty() && c.i2.is_empty() && c.unclassified.is_empty());

        let scl2 = families::make_scl2(&q(1, 1), &ParamPoly::param("s"), -6..=6).unwrap();
        let c = classify_support(&scl2, &bind(&[("s", q(1, 1))])).unwrap();
        assert_eq!(c.i2, BTreeSet::from([2]));
        assert_eq!(c.i1, BTreeSet::from([1, 3, 4, 5, 6]));
        assert!(c.i0.is_empty());

        let vir = classify_support(&families::make_vir(), &Bindings::new()).unwrap();
        assert_eq!(vir, SupportClassification::default());

        let cl1 = families::make_cl1(&ParamPoly::param("s"), 3).unwrap();
        let c = classify_support(&cl1, &bind(&[("s", q(0, 1))])).unwrap();
        assert_eq!(c.i1, BTreeSet::from([1]));
        assert_eq!(c.unclassified, BTreeSet::from([2, 3]));
    }
}
