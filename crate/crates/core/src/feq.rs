//! Polynomial solutions `p(∂,λ)` of the functional equation that the
//! Jacobi identity on `(L_0, L_i, L_j)` imposes on a structure polynomial:
//!
//! `(−λ−μ+a_iλ+b_i) p(∂,λ+μ) = p(∂+λ,μ)(∂+a_ijλ+b_ij) − (∂+μ+a_jλ+b_j) p(∂,μ)`.

use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exec::Execution;
use crate::linalg;
use crate::poly::{Degree, FormalVar, Monomial, ParamPoly};
use crate::scalar::Scalar;

pub const MAX_FULL_DEGREE: u32 = 12;
pub const MAX_TOP_DEGREE: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralTriple {
    pub ai: Scalar,
    pub bi: Scalar,
    pub aj: Scalar,
    pub bj: Scalar,
    pub aij: Scalar,
    pub bij: Scalar,
}

impl SpectralTriple {
    pub fn new(ai: Scalar, bi: Scalar, aj: Scalar, bj: Scalar, aij: Scalar, bij: Scalar) -> Self {
        SpectralTriple {
            ai,
            bi,
            aj,
            bj,
            aij,
            bij,
        }
    }

    pub fn ints(v: [i64; 6]) -> Self {
        let [ai, bi, aj, bj, aij, bij] = v.map(Scalar::from_int);
        SpectralTriple::new(ai, bi, aj, bj, aij, bij)
    }

    /// The degree a nonzero solution must have, if any.
    pub fn expected_degree(&self) -> Option<u32> {
        let d = (&self.ai + &self.aj) - &self.aij - Scalar::one();
        d.to_i64()
            .filter(|v| *v >= 0 && d.is_integer())
            .map(|v| v as u32)
    }
}

impl fmt::Display for SpectralTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(a_i={}, b_i={}, a_j={}, b_j={}, a_ij={}, b_ij={})",
            self.ai, self.bi, self.aj, self.bj, self.aij, self.bij
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverMode {
    /// All solutions of formal degree at most `D`.
    Full(u32),
    /// Homogeneous solutions of degree `k` of the top-degree equation.
    Homogeneous(u32),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeqError {
    #[error("degree {requested} exceeds the limit {max}")]
    DegreeGuard { requested: u32, max: u32 },
    #[error("factorization needs a_ij = 0 and a solution of degree at least 1: {0}")]
    FactorPrecondition(String),
    #[error("solution is not divisible by d + b_ij; remainder {remainder}")]
    NotDivisible { remainder: ParamPoly },
    #[error("quotient {quotient} does not solve the equation with a_ij = 1")]
    QuotientNotSolution { quotient: ParamPoly },
}

/// A basis of a solution space together with its reduced row-echelon form
/// in the coordinates `columns` (monomials in ∂, λ, descending canonical
/// order). Basis element `k` is echelon row `k` read as a polynomial, so
/// each is monic in its leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionBasis {
    pub basis: Vec<ParamPoly>,
    pub columns: Vec<Monomial>,
    pub echelon: Vec<Vec<Scalar>>,
}

impl SolutionBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// SHA-256 over the canonical text of the echelon rows.
    pub fn echelon_hash(&self) -> String {
        let mut h = Sha256::new();
        for (i, row) in self.echelon.iter().enumerate() {
            if i > 0 {
                h.update(b"\n");
            }
            let cells: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| format!("{m}:{c}"))
                .collect();
            h.update(cells.join(",").as_bytes());
        }
        hex::encode(h.finalize())
    }

    /// Whether `p` lies in the span.
    pub fn contains(&self, p: &ParamPoly) -> bool {
        let mut rest = p.clone();
        for b in &self.basis {
            let Some((lead, _)) = b.leading_term() else {
                continue;
            };
            let c = rest.coeff(lead);
            if !c.is_zero() {
                rest -= &b.scale(&c);
            }
        }
        rest.is_zero()
    }
}

fn d() -> ParamPoly {
    ParamPoly::del()
}
fn l() -> ParamPoly {
    ParamPoly::lam()
}
fn m() -> ParamPoly {
    ParamPoly::mu()
}
fn c(s: &Scalar) -> ParamPoly {
    ParamPoly::constant(s.clone())
}

fn subst(p: &ParamPoly, subs: &[(FormalVar, ParamPoly)]) -> ParamPoly {
    p.substitute_all(subs)
        .expect("only formal variables are substituted")
}

/// Right side minus left side of the equation for `p(∂,λ)`.
pub fn feq_residual(p: &ParamPoly, t: &SpectralTriple) -> ParamPoly {
    let left_factor = -l() - m() + &l() * &c(&t.ai) + c(&t.bi);
    let lhs = &left_factor * &subst(p, &[(FormalVar::Lam, l() + m())]);
    let shifted = subst(p, &[(FormalVar::Del, d() + l()), (FormalVar::Lam, m())]);
    let at_mu = subst(p, &[(FormalVar::Lam, m())]);
    let rhs = &shifted * &(d() + &l() * &c(&t.aij) + c(&t.bij))
        - &(d() + m() + &l() * &c(&t.aj) + c(&t.bj)) * &at_mu;
    rhs - lhs
}

/// The top-degree part of [`feq_residual`] for homogeneous `p`:
/// `p(∂+λ,μ)(∂+a_ijλ) − (∂+μ+a_jλ)p(∂,μ) − ((a_i−1)λ−μ)p(∂,λ+μ)`.
pub fn top_residual(p: &ParamPoly, ai: &Scalar, aj: &Scalar, aij: &Scalar) -> ParamPoly {
    let left_factor = &l() * &c(&(ai - &Scalar::one())) - m();
    let lhs = &left_factor * &subst(p, &[(FormalVar::Lam, l() + m())]);
    let shifted = subst(p, &[(FormalVar::Del, d() + l()), (FormalVar::Lam, m())]);
    let at_mu = subst(p, &[(FormalVar::Lam, m())]);
    let rhs = &shifted * &(d() + &l() * &c(aij)) - &(d() + m() + &l() * &c(aj)) * &at_mu;
    rhs - lhs
}

/// Monomials `∂^aλ^b` with `a + b` in `degrees`, descending canonical order.
fn unknowns(degrees: impl Iterator<Item = u32>) -> Vec<Monomial> {
    let mut cols: Vec<Monomial> = degrees
        .flat_map(|n| (0..=n).map(move |a| Monomial::formal(a, n - a, 0)))
        .collect();
    cols.sort();
    cols.reverse();
    cols
}

fn solve_linear(
    columns: Vec<Monomial>,
    residual: impl Fn(&ParamPoly) -> ParamPoly + Sync,
) -> SolutionBasis {
    let images = Execution::default().map(&columns, |mono| {
        residual(&ParamPoly::term(mono.clone(), Scalar::one()))
    });
    let mut equations: BTreeMap<Monomial, Vec<Scalar>> = BTreeMap::new();
    for (col, image) in images.iter().enumerate() {
        for (mono, coeff) in image.terms() {
            equations
                .entry(mono.clone())
                .or_insert_with(|| vec![Scalar::zero(); columns.len()])[col] = coeff.clone();
        }
    }
    let rows: Vec<Vec<Scalar>> = equations.into_values().collect();
    let kernel = linalg::nullspace(&rows, columns.len());
    let (echelon, _) = linalg::rref(&kernel, columns.len());
    let basis = echelon
        .iter()
        .map(|row| {
            columns
                .iter()
                .zip(row)
                .filter(|(_, c)| !c.is_zero())
                .fold(ParamPoly::zero(), |acc, (mono, c)| {
                    acc + ParamPoly::term(mono.clone(), c.clone())
                })
        })
        .collect();
    SolutionBasis {
        basis,
        columns,
        echelon,
    }
}

/// Exact solution space in the given mode.
pub fn solve_feq(t: &SpectralTriple, mode: SolverMode) -> Result<SolutionBasis, FeqError> {
    match mode {
        SolverMode::Full(max) => {
            if max > MAX_FULL_DEGREE {
                return Err(FeqError::DegreeGuard {
                    requested: max,
                    max: MAX_FULL_DEGREE,
                });
            }
            Ok(solve_linear(unknowns(0..=max), |p| feq_residual(p, t)))
        }
        SolverMode::Homogeneous(k) => solve_feq_top(&t.ai, &t.aj, &t.aij, k),
    }
}

/// Homogeneous degree-`k` solutions of the top-degree equation.
pub fn solve_feq_top(
    ai: &Scalar,
    aj: &Scalar,
    aij: &Scalar,
    k: u32,
) -> Result<SolutionBasis, FeqError> {
    if k > MAX_TOP_DEGREE {
        return Err(FeqError::DegreeGuard {
            requested: k,
            max: MAX_TOP_DEGREE,
        });
    }
    Ok(solve_linear(unknowns(k..=k), |p| {
        top_residual(p, ai, aj, aij)
    }))
}

/// For a solution with `a_ij = 0` and degree ≥ 1, returns `f` with
/// `p = (∂+b_ij) f` after checking that `f` solves the equation with
/// `a_ij = 1`.
pub fn factor_check(sol: &ParamPoly, t: &SpectralTriple) -> Result<ParamPoly, FeqError> {
    if !t.aij.is_zero() {
        return Err(FeqError::FactorPrecondition(format!("a_ij = {}", t.aij)));
    }
    match sol.formal_degree() {
        Degree::Finite(k) if k >= 1 => {}
        _ => {
            return Err(FeqError::FactorPrecondition(format!(
                "solution {sol} has degree below 1"
            )))
        }
    }
    let q = d() + c(&t.bij);
    let (f, rem) = sol
        .div_rem_monic(&FormalVar::Del, &q)
        .expect("d + b_ij is monic in d");
    if !rem.is_zero() {
        return Err(FeqError::NotDivisible { remainder: rem });
    }
    let shifted = SpectralTriple {
        aij: Scalar::one(),
        ..t.clone()
    };
    if !feq_residual(&f, &shifted).is_zero() {
        return Err(FeqError::QuotientNotSolution { quotient: f });
    }
    Ok(f)
}

/// Which of the two top-degree tables: `a_ij ≠ 0` or `a_ij = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetWeight {
    Nonzero,
    Zero,
}

impl fmt::Display for TargetWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetWeight::Nonzero => "a_ij != 0",
            TargetWeight::Zero => "a_ij = 0",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableCase {
    pub label: &'static str,
    pub ai: Scalar,
    pub aj: Scalar,
    pub aij: Scalar,
    pub k: u32,
    /// Printed formula evaluated at these a-values; `None` for choices that
    /// must have no solution.
    pub expected: Option<ParamPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseOutcome {
    pub case: TableCase,
    pub found: Vec<ParamPoly>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableReport {
    pub weight: TargetWeight,
    pub outcomes: Vec<CaseOutcome>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "table {}", self.weight)?;
        for o in &self.outcomes {
            let c = &o.case;
            let expected = c
                .expected
                .as_ref()
                .map_or("none".to_string(), ToString::to_string);
            let found: Vec<String> = o.found.iter().map(ToString::to_string).collect();
            writeln!(
                f,
                "{} {} a_i={} a_j={} a_ij={} k={} expected [{}] found [{}]",
                if o.passed { "PASS" } else { "FAIL" },
                c.label,
                c.ai,
                c.aj,
                c.aij,
                c.k,
                expected,
                found.join("; ")
            )?;
        }
        Ok(())
    }
}

fn q(n: i64, dd: i64) -> Scalar {
    Scalar::new(n, dd)
}

fn case(
    label: &'static str,
    ai: Scalar,
    aj: Scalar,
    k: u32,
    expected: impl FnOnce(&Scalar, &Scalar) -> Option<ParamPoly>,
) -> TableCase {
    let aij = &ai + &aj - Scalar::from_int(k as i64 + 1);
    let expected = expected(&ai, &aij);
    TableCase {
        label,
        ai,
        aj,
        aij,
        k,
        expected,
    }
}

/// The listed cases with the a-values used for each, followed by
/// neighbouring choices outside the table.
pub fn table_cases(weight: TargetWeight) -> Vec<TableCase> {
    let p = ParamPoly::p;
    let i = Scalar::from_int;
    match weight {
        TargetWeight::Nonzero => vec![
            case("1a", i(3), i(2), 0, |_, _| Some(p("1"))),
            case("1b", i(3), i(2), 1, |ai, aij| {
                let r = aij / &(Scalar::one() - ai);
                Some(d() - &l() * &c(&r))
            }),
            case("1c", i(3), i(1), 2, |ai, aij| {
                let den = Scalar::one() - ai;
                let r1 = (Scalar::one() + aij * &i(2)) / den.clone();
                let r2 = aij / &den;
                Some(p("d^2") - &p("d*x") * &c(&r1) - &p("x^2") * &c(&r2))
            }),
            case("1d", q(5, 3), q(5, 3), 3, |_, _| {
                Some(p("d^3 + 3/2*d^2*x - 3/2*d*x^2 - x^3"))
            }),
            case("2a", i(1), i(2), 0, |_, _| Some(p("1"))),
            case("2b", i(1), i(3), 1, |_, _| Some(p("x"))),
            case("2c", i(1), i(4), 2, |_, aij| {
                Some(&l() * &(d() - &l() * &c(aij)))
            }),
            case("2d", i(1), i(1), 3, |_, _| Some(p("x*(d + x)*(d + 2*x)"))),
            case("off-2", i(3), i(2), 2, |_, _| None),
            case("off-3", i(2), i(3), 3, |_, _| None),
            case("off-3'", i(1), i(2), 3, |_, _| None),
        ],
        TargetWeight::Zero => vec![
            case("1", i(2), i(-1), 0, |_, _| Some(p("1"))),
            case("2", i(3), i(-1), 1, |_, _| Some(p("d"))),
            case("3", i(3), i(0), 2, |ai, _| {
                let r = Scalar::one() / (Scalar::one() - ai);
                Some(p("d^2") - &p("d*x") * &c(&r))
            }),
            case("4", i(1), i(2), 2, |_, _| Some(p("d*x"))),
            case("5", i(1), i(3), 3, |_, _| Some(p("d*x*(d - x)"))),
            case("6", i(3), i(1), 3, |_, _| {
                Some(p("d^3 + 3/2*d^2*x + 1/2*d*x^2"))
            }),
            case("off-3", i(2), i(2), 3, |_, _| None),
            case("off-3'", i(4), i(0), 3, |_, _| None),
        ],
    }
}

/// Solves every case of the table and compares up to scalars.
pub fn reproduce_table(weight: TargetWeight) -> TableReport {
    let cases = table_cases(weight);
    let outcomes = Execution::default().map(&cases, |c| {
        let found = solve_feq_top(&c.ai, &c.aj, &c.aij, c.k)
            .expect("table degrees are within the guard")
            .basis;
        let passed = match &c.expected {
            Some(e) => found.len() == 1 && found[0] == e.normalize_leading(),
            None => found.is_empty(),
        };
        CaseOutcome {
            case: c.clone(),
            found,
            passed,
        }
    });
    TableReport { weight, outcomes }
}

/// Triples with `a_ij = 0` whose solutions have degree ≥ 1, used to
/// exercise [`factor_check`].
pub fn factorization_triples() -> Vec<SpectralTriple> {
    [
        [3, 0, -1, 0, 0, 0],
        [3, 1, 0, 1, 0, 2],
        [1, 0, 2, 0, 0, 0],
        [1, 1, 3, -1, 0, 0],
        [3, 2, 1, -1, 0, 1],
        [2, 1, 0, 1, 0, 2],
        [1, 1, 2, 1, 0, 2],
    ]
    .into_iter()
    .map(SpectralTriple::ints)
    .collect()
}
