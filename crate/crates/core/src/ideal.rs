//! Graded C[∂]-submodules of a conformal algebra with one generator per
//! grade: ideal membership, closure of a seed, and a truncated simplicity
//! probe.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use thiserror::Error;

use crate::conformal::{bracket, ConformalAlgebra, Element};
use crate::exec::Execution;
use crate::poly::{Bindings, FormalVar, ParamPoly};

/// The part of a graded submodule at one grade: all of `C[∂]L_i`,
/// `C[∂]q(∂)L_i`, or nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    Full,
    Principal(ParamPoly),
    Zero,
}

impl Component {
    /// Normalizes `q` to be monic in ∂; constants give `Full`, zero gives
    /// `Zero`. `None` if `q` involves λ or μ or its ∂-leading coefficient is
    /// not a rational.
    pub fn principal(q: &ParamPoly) -> Option<Component> {
        if q.is_zero() {
            return Some(Component::Zero);
        }
        if q.mentions(&FormalVar::Lam) || q.mentions(&FormalVar::Mu) {
            return None;
        }
        let monic = q.monic_in(&FormalVar::Del)?;
        if monic == ParamPoly::one() {
            Some(Component::Full)
        } else {
            Some(Component::Principal(monic))
        }
    }

    fn generator(&self) -> Option<ParamPoly> {
        match self {
            Component::Full => Some(ParamPoly::one()),
            Component::Principal(q) => Some(q.clone()),
            Component::Zero => None,
        }
    }

    /// Remainder of `p` modulo this component, as a polynomial in ∂ with
    /// everything else treated as coefficients. Zero iff `p` is a member.
    pub fn remainder(&self, p: &ParamPoly) -> ParamPoly {
        match self {
            Component::Full => ParamPoly::zero(),
            Component::Zero => p.clone(),
            Component::Principal(q) => {
                p.div_rem_monic(&FormalVar::Del, q)
                    .expect("components are monic in d")
                    .1
            }
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Full => f.write_str("full"),
            Component::Zero => f.write_str("zero"),
            Component::Principal(q) => write!(f, "{q}"),
        }
    }
}

/// A graded submodule given per grade; grades not listed are `Zero`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedSubmodule {
    components: BTreeMap<i64, Component>,
}

impl GradedSubmodule {
    pub fn zero() -> Self {
        GradedSubmodule::default()
    }

    /// The whole algebra.
    pub fn full(alg: &ConformalAlgebra) -> Self {
        let mut s = GradedSubmodule::zero();
        for g in alg.window() {
            s.set(*g, Component::Full);
        }
        s
    }

    pub fn set(&mut self, grade: i64, c: Component) {
        let c = match c {
            Component::Principal(q) => {
                Component::principal(&q).expect("principal generator must be a d-polynomial")
            }
            other => other,
        };
        if c == Component::Zero {
            self.components.remove(&grade);
        } else {
            self.components.insert(grade, c);
        }
    }

    pub fn with(mut self, grade: i64, c: Component) -> Self {
        self.set(grade, c);
        self
    }

    pub fn get(&self, grade: i64) -> &Component {
        self.components.get(&grade).unwrap_or(&Component::Zero)
    }

    /// Nonzero components in grade order.
    pub fn components(&self) -> impl Iterator<Item = (i64, &Component)> {
        self.components.iter().map(|(g, c)| (*g, c))
    }

    pub fn contains(&self, grade: i64, p: &ParamPoly) -> bool {
        self.get(grade).remainder(p).is_zero()
    }

    /// Inclusion grade by grade.
    pub fn is_subset(&self, other: &GradedSubmodule) -> bool {
        self.components.iter().all(|(g, c)| match c {
            Component::Zero => true,
            Component::Full => other.get(*g) == &Component::Full,
            Component::Principal(q) => other.contains(*g, q),
        })
    }
}

impl fmt::Display for GradedSubmodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(g, c)| format!("{g}: {c}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("expected exactly one generator per grade")]
    NotOnePerGrade,
    #[error("coefficient {0} still involves parameters; instantiate them first")]
    Symbolic(ParamPoly),
    #[error("seed coefficient {0} involves λ or μ")]
    BadSeed(ParamPoly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealWitness {
    pub ambient: String,
    /// Generator of the submodule, e.g. `(d + 2)*L-2`.
    pub member: String,
    pub target: String,
    pub residual: ParamPoly,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdealReport {
    pub closed: bool,
    pub checked: usize,
    pub skipped: usize,
    pub witnesses: Vec<IdealWitness>,
}

fn grade_index(alg: &ConformalAlgebra) -> Result<BTreeMap<i64, usize>, IdealError> {
    let mut idx = BTreeMap::new();
    for (i, g) in alg.generators().iter().enumerate() {
        if idx.insert(g.grade, i).is_some() {
            return Err(IdealError::NotOnePerGrade);
        }
    }
    Ok(idx)
}

fn member_name(q: &ParamPoly, name: &str) -> String {
    if *q == ParamPoly::one() {
        name.to_string()
    } else {
        format!("({q})*{name}")
    }
}

/// Checks `[a_λ m] ∈ sub[λ]` for every generator `a` of the algebra and
/// every generator `m` of `sub`, at every decidable target.
pub fn is_graded_ideal(
    alg: &ConformalAlgebra,
    sub: &GradedSubmodule,
    exec: Execution,
) -> Result<IdealReport, IdealError> {
    let by_grade = grade_index(alg)?;
    let mut pairs = Vec::new();
    for (g, c) in sub.components() {
        let (Some(&m), Some(q)) = (by_grade.get(&g), c.generator()) else {
            continue;
        };
        for a in 0..alg.len() {
            pairs.push((a, m, q.clone()));
        }
    }
    let results = exec.map(&pairs, |(a, m, q)| {
        let res = bracket(alg, &Element::generator(*a), &Element::term(*m, q.clone())).ok()?;
        let witnesses: Vec<IdealWitness> = res
            .coeffs
            .iter()
            .filter_map(|(w, p)| {
                let r = sub.get(alg.grade(*w)).remainder(p);
                (!r.is_zero()).then(|| IdealWitness {
                    ambient: alg.generator(*a).name.clone(),
                    member: member_name(q, &alg.generator(*m).name),
                    target: alg.generator(*w).name.clone(),
                    residual: r,
                })
            })
            .collect();
        Some(witnesses)
    });
    let mut report = IdealReport::default();
    for r in results {
        match r {
            Some(w) => {
                report.checked += 1;
                report.witnesses.extend(w);
            }
            None => report.skipped += 1,
        }
    }
    report.closed = report.witnesses.is_empty();
    Ok(report)
}

pub const CLOSURE_ITERATION_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub submodule: GradedSubmodule,
    /// Rounds of bracketing performed.
    pub iterations: usize,
    /// False if the iteration limit was hit; `submodule` is then partial.
    pub converged: bool,
    /// Some bracket left the window, so components are lower bounds; most
    /// affected are the window's end grades listed here.
    pub truncated: bool,
    pub boundary: Vec<i64>,
}

fn gcd_into(acc: &mut Option<ParamPoly>, p: &ParamPoly) -> Result<bool, IdealError> {
    let mut changed = false;
    for c in p.coefficients_in(&FormalVar::Lam) {
        if c.is_zero() {
            continue;
        }
        let next = match acc {
            None => c.gcd_univariate(&ParamPoly::zero(), &FormalVar::Del),
            Some(q) => q.gcd_univariate(&c, &FormalVar::Del),
        }
        .ok_or_else(|| IdealError::Symbolic(c.clone()))?;
        if acc.as_ref() != Some(&next) {
            *acc = Some(next);
            changed = true;
        }
    }
    Ok(changed)
}

/// The least graded submodule containing `seed` that is closed under
/// bracketing with every generator, within the window. Parameters must be
/// instantiated.
pub fn ideal_generated_by(
    alg: &ConformalAlgebra,
    seed: &Element,
    exec: Execution,
) -> Result<Closure, IdealError> {
    let by_grade = grade_index(alg)?;
    let mut gens: BTreeMap<usize, Option<ParamPoly>> = (0..alg.len()).map(|i| (i, None)).collect();
    for (i, f) in &seed.coeffs {
        if f.mentions(&FormalVar::Lam) || f.mentions(&FormalVar::Mu) {
            return Err(IdealError::BadSeed(f.clone()));
        }
        gcd_into(gens.get_mut(i).expect("seed uses known generators"), f)?;
    }
    let mut truncated = false;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < CLOSURE_ITERATION_LIMIT {
        iterations += 1;
        let mut work = Vec::new();
        for (m, q) in &gens {
            if let Some(q) = q {
                for a in 0..alg.len() {
                    work.push((a, *m, q.clone()));
                }
            }
        }
        let landed = exec.map(&work, |(a, m, q)| {
            bracket(alg, &Element::generator(*a), &Element::term(*m, q.clone())).ok()
        });
        let mut changed = false;
        for res in landed {
            let Some(res) = res else {
                truncated = true;
                continue;
            };
            for (w, p) in &res.coeffs {
                changed |= gcd_into(gens.get_mut(w).unwrap(), p)?;
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }
    let mut submodule = GradedSubmodule::zero();
    for (i, q) in gens {
        if let Some(q) = q {
            submodule.set(
                alg.grade(i),
                Component::principal(&q).expect("gcds are d-polynomials"),
            );
        }
    }
    let boundary = match (by_grade.keys().next(), by_grade.keys().next_back()) {
        (Some(lo), Some(hi)) if truncated => vec![*lo, *hi],
        _ => vec![],
    };
    Ok(Closure {
        submodule,
        iterations,
        converged,
        truncated,
        boundary,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedOutcome {
    pub seed: String,
    pub closure: Closure,
    /// Grades of the core window where the closure is not `Full`.
    pub deficient: Vec<(i64, Component)>,
}

/// Result of [`simplicity_probe`]. This is evidence at truncation, not a
/// proof either way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub core: Vec<i64>,
    pub seeds: Vec<SeedOutcome>,
}

impl ProbeReport {
    /// Some seed generated a proper submodule on the core window.
    pub fn found_proper_closure(&self) -> bool {
        self.seeds.iter().any(|s| !s.deficient.is_empty())
    }
}

/// Closes each single generator `L_i`, `i` in `core`, and reports the core
/// grades where the closure is not everything.
pub fn simplicity_probe(
    alg: &ConformalAlgebra,
    core: RangeInclusive<i64>,
    bindings: &Bindings,
    exec: Execution,
) -> Result<ProbeReport, IdealError> {
    let alg = alg.instantiate(bindings);
    let by_grade = grade_index(&alg)?;
    let core: Vec<i64> = core.filter(|g| by_grade.contains_key(g)).collect();
    let mut seeds = Vec::new();
    for g in &core {
        let i = by_grade[g];
        let closure = ideal_generated_by(&alg, &Element::generator(i), exec)?;
        let deficient = core
            .iter()
            .map(|h| (*h, closure.submodule.get(*h).clone()))
            .filter(|(_, c)| c != &Component::Full)
            .collect();
        seeds.push(SeedOutcome {
            seed: alg.generator(i).name.clone(),
            closure,
            deficient,
        });
    }
    Ok(ProbeReport { core, seeds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::scalar::Scalar;

    fn p(s: &str) -> ParamPoly {
        ParamPoly::p(s)
    }

    fn bind(pairs: &[(&str, Scalar)]) -> Bindings {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    }

    fn scl2_pattern(window: RangeInclusive<i64>, m: i64, q: &str) -> GradedSubmodule {
        let mut s = GradedSubmodule::zero();
        for g in window {
            s.set(g, Component::Full);
        }
        s.with(m, Component::Principal(p(q)))
    }

    #[test]
    fn component_normalization() {
        assert_eq!(Component::principal(&p("3")), Some(Component::Full));
        assert_eq!(Component::principal(&p("0")), Some(Component::Zero));
        assert_eq!(
            Component::principal(&p("2*d + 4")),
            Some(Component::Principal(p("d + 2")))
        );
        assert_eq!(Component::principal(&p("d + x")), None);
    }

    #[test]
    fn scl2_pattern_is_an_ideal() {
        let b = ParamPoly::one();
        let s = ParamPoly::param("s");
        let cl2 = families::make_cl2(&b, &s, -5..=5).unwrap();
        let sub = scl2_pattern(-5..=5, -2, "d + 2*s");
        let r = is_graded_ideal(&cl2, &sub, Execution::Sequential).unwrap();
        assert!(r.closed, "{:?}", r.witnesses);
        assert!(r.checked > 0);
        let r = is_graded_ideal(&cl2, &GradedSubmodule::full(&cl2), Execution::Parallel).unwrap();
        assert!(r.closed);
        // Dropping the factor at -2 to a smaller principal piece breaks it.
        let smaller = scl2_pattern(-5..=5, -2, "(d + 2*s)*(d + 1)");
        assert!(
            !is_graded_ideal(&cl2, &smaller, Execution::Sequential)
                .unwrap()
                .closed
        );
    }

    #[test]
    fn single_grade_is_not_an_ideal() {
        let v0 = families::make_v(&ParamPoly::zero(), -3..=3).unwrap();
        let sub = GradedSubmodule::zero().with(0, Component::Full);
        let r = is_graded_ideal(&v0, &sub, Execution::Sequential).unwrap();
        assert!(!r.closed);
        assert!(r.witnesses.iter().any(|w| w.ambient == "L1"
            && w.member == "L0"
            && w.target == "L1"
            && w.residual == p("d + 2*x")));
    }

    #[test]
    fn closure_of_l1_in_v0() {
        let v0 = families::make_v(&ParamPoly::zero(), -4..=4).unwrap();
        let c = ideal_generated_by(
            &v0,
            &Element::generator(v0.index_of("L1").unwrap()),
            Execution::Parallel,
        )
        .unwrap();
        assert!(c.converged);
        for g in -4..=4 {
            assert_eq!(c.submodule.get(g), &Component::Full, "grade {g}");
        }
        assert!(c.truncated);
        assert_eq!(c.boundary, vec![-4, 4]);
        let zero = ideal_generated_by(&v0, &Element::default(), Execution::Parallel).unwrap();
        assert_eq!(zero.submodule, GradedSubmodule::zero());
    }

    #[test]
    fn closure_recovers_scl2_pattern() {
        let cl2 = families::make_cl2(&ParamPoly::one(), &ParamPoly::one(), -5..=5).unwrap();
        let m = cl2.index_of("L-2").unwrap();
        let c =
            ideal_generated_by(&cl2, &Element::term(m, p("d + 2")), Execution::Parallel).unwrap();
        assert_eq!(c.submodule, scl2_pattern(-5..=5, -2, "d + 2"));
        let closed = is_graded_ideal(&cl2, &c.submodule, Execution::Parallel).unwrap();
        assert!(closed.closed);
        assert!(c.submodule.is_subset(&scl2_pattern(-5..=5, -2, "d + 2")));
        assert!(!GradedSubmodule::full(&cl2).is_subset(&c.submodule));
    }

    #[test]
    fn symbolic_closure_is_rejected() {
        let cl2 = families::make_cl2(&ParamPoly::one(), &ParamPoly::param("s"), -3..=3).unwrap();
        let r = ideal_generated_by(&cl2, &Element::generator(0), Execution::Sequential);
        assert!(matches!(r, Err(IdealError::Symbolic(_))));
    }

    #[test]
    fn probes() {
        let (b, s) = (ParamPoly::param("b"), ParamPoly::param("s"));
        let cl2 = families::make_cl2(&b, &s, -6..=6).unwrap();
        let half = bind(&[("b", Scalar::new(1, 2)), ("s", Scalar::one())]);
        let r = simplicity_probe(&cl2, -2..=2, &half, Execution::Parallel).unwrap();
        assert!(r.found_proper_closure());
        let l0 = r.seeds.iter().find(|o| o.seed == "L0").unwrap();
        assert_eq!(l0.deficient, vec![(-1, Component::Principal(p("d + 2")))]);

        let third = bind(&[("b", Scalar::new(1, 3)), ("s", Scalar::one())]);
        let r = simplicity_probe(&cl2, -2..=2, &third, Execution::Parallel).unwrap();
        assert!(!r.found_proper_closure(), "{:?}", r.seeds);

        let v = families::make_v(&s, -6..=6).unwrap();
        let r = simplicity_probe(
            &v,
            -2..=2,
            &bind(&[("s", Scalar::one())]),
            Execution::Parallel,
        )
        .unwrap();
        assert!(!r.found_proper_closure());

        let r = simplicity_probe(
            &families::make_vir(),
            0..=0,
            &Bindings::new(),
            Execution::Parallel,
        )
        .unwrap();
        assert!(!r.found_proper_closure());
    }
}
