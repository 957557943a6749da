//! Constructors for the graded families: Vir, Cur g, V(s), CL₁(s),
//! CL₂(b,s) and SCL₂(b,s).
//!
//! SCL₂ is built twice. [`make_scl2`] computes every bracket inside CL₂
//! and rewrites it in the basis `{L_i : i ≠ −2b} ∪ {M = (∂+2s)L_{−2b}}`;
//! [`make_scl2_literal`] transcribes the closed formulas directly. The two
//! are expected to agree entry by entry.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;
use std::str::FromStr;

use thiserror::Error;

use crate::conformal::{bracket, AlgebraError, ConformalAlgebra, Element, Generator};
use crate::gd::{check_lie, LieStructure};
use crate::poly::{ParamPoly, PolyError};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("window {0}..{1} is empty")]
    EmptyWindow(i64, i64),
    #[error("parameter value `{0}` must not involve d, x or y")]
    FormalParameter(ParamPoly),
    #[error("SCL2 needs b != 0 with 2b an integer, got {0}")]
    InvalidB(Scalar),
    #[error("window must contain grade {0}")]
    WindowMissing(i64),
    #[error("CL1 needs N >= -1, got {0}")]
    InvalidN(i64),
    #[error("[{left} {right}] landing on M is not divisible by d + 2s (remainder {remainder})")]
    RewriteFailed {
        left: String,
        right: String,
        remainder: ParamPoly,
    },
    #[error("structure constants do not form a Lie algebra: {0}")]
    NotALieAlgebra(String),
    #[error("family {0} needs {1}")]
    MissingInput(FamilyKind, &'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Name of the grade-`i` generator in the graded families.
pub fn grade_name(i: i64) -> String {
    format!("L{i}")
}

/// Name of the rescaled generator `(∂+2s)L_{−2b}` in SCL₂.
pub const RESCALED: &str = "M";

fn check_param(p: &ParamPoly) -> Result<(), FamilyError> {
    if p.is_formal_free() {
        Ok(())
    } else {
        Err(FamilyError::FormalParameter(p.clone()))
    }
}

fn params_of(ps: &[&ParamPoly]) -> BTreeSet<String> {
    ps.iter().flat_map(|p| p.params()).collect()
}

fn graded(
    window: &RangeInclusive<i64>,
    params: BTreeSet<String>,
    name: impl Fn(i64) -> String,
) -> Result<ConformalAlgebra, FamilyError> {
    if window.is_empty() {
        return Err(FamilyError::EmptyWindow(*window.start(), *window.end()));
    }
    let gens = window.clone().map(|i| Generator::new(name(i), i)).collect();
    Ok(ConformalAlgebra::new(params, gens)?)
}

/// Fills every in-window pair of a one-generator-per-grade algebra whose
/// generators are listed in grade order starting at `window.start()`.
fn fill(
    alg: &mut ConformalAlgebra,
    window: &RangeInclusive<i64>,
    p: impl Fn(i64, i64) -> ParamPoly,
) -> Result<(), FamilyError> {
    let lo = *window.start();
    for i in window.clone() {
        for j in window.clone() {
            if window.contains(&(i + j)) {
                let (u, v, w) = ((i - lo) as usize, (j - lo) as usize, (i + j - lo) as usize);
                alg.set(u, v, w, p(i, j))?;
            }
        }
    }
    Ok(())
}

fn int(n: i64) -> ParamPoly {
    ParamPoly::int(n)
}

/// `[L_λ L] = (∂+2λ)L`.
pub fn make_vir() -> ConformalAlgebra {
    let mut alg = ConformalAlgebra::new([], vec![Generator::new("L", 0)]).expect("one generator");
    alg.set(0, 0, 0, ParamPoly::p("d + 2*x"))
        .expect("grade 0 in window");
    alg
}

/// The current algebra: constant brackets `[x_λ y] = [x, y]`, all in grade 0.
pub fn make_current(lie: &LieStructure) -> Result<ConformalAlgebra, FamilyError> {
    let report = check_lie(lie);
    if let Some(v) = report.violations.first() {
        return Err(FamilyError::NotALieAlgebra(v.to_string()));
    }
    let table = lie.table();
    let gens = table
        .basis()
        .iter()
        .map(|b| Generator::new(b.name.clone(), 0))
        .collect();
    let mut alg = ConformalAlgebra::new(table.params(), gens)?;
    for (u, v, terms) in table.entries() {
        alg.set_bracket(u, v, terms.to_vec())?;
    }
    Ok(alg)
}

/// `[L_i λ L_j] = (∂ + 2λ + s(i−j)) L_{i+j}`.
pub fn make_v(s: &ParamPoly, window: RangeInclusive<i64>) -> Result<ConformalAlgebra, FamilyError> {
    check_param(s)?;
    let mut alg = graded(&window, params_of(&[s]), grade_name)?;
    let base = ParamPoly::p("d + 2*x");
    fill(&mut alg, &window, |i, j| &base + &(s * &int(i - j)))?;
    Ok(alg)
}

/// `[L_i λ L_j] = ((i+1)∂ + (i+j+2)λ + s(j−i)) L_{i+j}` on grades `−1..=n`.
pub fn make_cl1(s: &ParamPoly, n: i64) -> Result<ConformalAlgebra, FamilyError> {
    check_param(s)?;
    if n < -1 {
        return Err(FamilyError::InvalidN(n));
    }
    let window = -1..=n;
    let mut alg = graded(&window, params_of(&[s]), grade_name)?;
    let (d, x) = (ParamPoly::del(), ParamPoly::lam());
    fill(&mut alg, &window, |i, j| {
        &d * &int(i + 1) + &x * &int(i + j + 2) + s * &int(j - i)
    })?;
    Ok(alg)
}

fn cl2_poly(b: &ParamPoly, s: &ParamPoly, i: i64, j: i64) -> ParamPoly {
    let (d, x) = (ParamPoly::del(), ParamPoly::lam());
    &d * &(b + &int(i)) + &x * &(&(b * &int(2)) + &int(i + j)) + s * &int(i - j)
}

/// `[L_i λ L_j] = ((i+b)∂ + (i+j+2b)λ + s(i−j)) L_{i+j}`.
pub fn make_cl2(
    b: &ParamPoly,
    s: &ParamPoly,
    window: RangeInclusive<i64>,
) -> Result<ConformalAlgebra, FamilyError> {
    check_param(b)?;
    check_param(s)?;
    let mut alg = graded(&window, params_of(&[b, s]), grade_name)?;
    fill(&mut alg, &window, |i, j| cl2_poly(b, s, i, j))?;
    Ok(alg)
}

/// Grade of `M` (that is `−2b`) after validating `b` and the window.
fn scl2_grade(b: &Scalar, window: &RangeInclusive<i64>) -> Result<i64, FamilyError> {
    let two_b = (b * &Scalar::from_int(2))
        .to_i64()
        .filter(|v| *v != 0)
        .ok_or_else(|| FamilyError::InvalidB(b.clone()))?;
    let m = -two_b;
    for g in [m, 2 * m] {
        if !window.contains(&g) {
            return Err(FamilyError::WindowMissing(g));
        }
    }
    Ok(m)
}

fn scl2_shell(
    b: &Scalar,
    s: &ParamPoly,
    window: &RangeInclusive<i64>,
) -> Result<(ConformalAlgebra, i64), FamilyError> {
    check_param(s)?;
    let m = scl2_grade(b, window)?;
    let alg = graded(window, params_of(&[s]), |i| {
        if i == m {
            RESCALED.to_string()
        } else {
            grade_name(i)
        }
    })?;
    Ok((alg, m))
}

/// SCL₂(b,s) as the graded ideal of CL₂(b,s) spanned by `L_i` (`i ≠ −2b`)
/// and `M = (∂+2s)L_{−2b}`. Each bracket is evaluated in CL₂ by
/// sesquilinearity; coefficients landing on grade `−2b` are divided by
/// `∂+2s` to express them through `M`.
pub fn make_scl2(
    b: &Scalar,
    s: &ParamPoly,
    window: RangeInclusive<i64>,
) -> Result<ConformalAlgebra, FamilyError> {
    let (mut alg, m) = scl2_shell(b, s, &window)?;
    let ambient = make_cl2(&ParamPoly::constant(b.clone()), s, window.clone())?;
    let lo = *window.start();
    let m_idx = (m - lo) as usize;
    let shift = ParamPoly::del() + s * &int(2);
    let element = |i: usize| {
        if i == m_idx {
            Element::term(i, shift.clone())
        } else {
            Element::generator(i)
        }
    };
    for u in 0..alg.len() {
        for v in 0..alg.len() {
            if !ambient.decidable(u, v) {
                continue;
            }
            let value = bracket(&ambient, &element(u), &element(v))
                .expect("decidable pairs have in-window brackets");
            let mut terms = Vec::new();
            for (w, c) in value.coeffs {
                if w == m_idx {
                    let q = c.exact_divide(&shift).map_err(|e| match e {
                        PolyError::NotDivisible { remainder } => FamilyError::RewriteFailed {
                            left: alg.generator(u).name.clone(),
                            right: alg.generator(v).name.clone(),
                            remainder,
                        },
                        other => unreachable!("divisor is nonzero: {other}"),
                    })?;
                    terms.push((w, q));
                } else {
                    terms.push((w, c));
                }
            }
            alg.set_bracket(u, v, terms)?;
        }
    }
    Ok(alg)
}

/// SCL₂(b,s) from its closed bracket formulas:
///
/// * `[L_0 λ M] = b(∂+λ+2s) M`
/// * `[M λ M] = −b(−λ+2s)(∂+λ+2s)(∂+2λ) L_{−4b}`
/// * `[L_i λ M] = (∂+λ+2s)((i+b)∂ + iλ + s(i+2b)) L_{i−2b}` for `i ∉ {0, −2b}`
/// * `[L_i λ L_j] = ((i+b)∂ + (i+j+2b)λ + s(i−j)) L_{i+j}` if `i+j ≠ −2b`
/// * `[L_i λ L_j] = (i−j)/2 · M` if `i+j = −2b`, `i, j ≠ 0`
///
/// `[M λ L_j]` is not listed separately; it is the skew-symmetric partner
/// `−p_{j,M}(∂, −∂−λ)`.
pub fn make_scl2_literal(
    b: &Scalar,
    s: &ParamPoly,
    window: RangeInclusive<i64>,
) -> Result<ConformalAlgebra, FamilyError> {
    let (mut alg, m) = scl2_shell(b, s, &window)?;
    let lo = *window.start();
    let idx = |g: i64| (g - lo) as usize;
    let bp = ParamPoly::constant(b.clone());
    let (d, x) = (ParamPoly::del(), ParamPoly::lam());
    let s2 = s * &int(2);
    let shifted = &(&d + &x) + &s2; // ∂+λ+2s
    let left_m = &(-&x) + &s2; // −λ+2s

    let right_m = |i: i64| -> ParamPoly {
        if i == 0 {
            &bp * &shifted
        } else {
            let inner = &d * &(&bp + &int(i)) + &x * &int(i) + s * &(&int(i) + &(&bp * &int(2)));
            &shifted * &inner
        }
    };

    for i in window.clone() {
        for j in window.clone() {
            let t = i + j;
            if !window.contains(&t) {
                continue;
            }
            let p = match (i == m, j == m) {
                (true, true) => -&(&(&(&bp * &left_m) * &shifted) * &ParamPoly::p("d + 2*x")),
                (false, true) => right_m(i),
                (true, false) => -&right_m(j)
                    .substitute(&crate::FormalVar::Lam, &(-&d - &x))
                    .expect("λ is a bracket variable"),
                (false, false) if t == m => ParamPoly::constant(Scalar::new(i - j, 2)),
                (false, false) => cl2_poly(&bp, s, i, j),
            };
            alg.set(idx(i), idx(j), idx(t), p)?;
        }
    }
    Ok(alg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilyKind {
    Vir,
    Cur,
    V,
    CL1,
    CL2,
    SCL2,
    SCL2Literal,
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FamilyKind::Vir => "Vir",
            FamilyKind::Cur => "Cur",
            FamilyKind::V => "V",
            FamilyKind::CL1 => "CL1",
            FamilyKind::CL2 => "CL2",
            FamilyKind::SCL2 => "SCL2",
            FamilyKind::SCL2Literal => "SCL2Literal",
        };
        f.write_str(s)
    }
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "vir" => FamilyKind::Vir,
            "cur" => FamilyKind::Cur,
            "v" => FamilyKind::V,
            "cl1" => FamilyKind::CL1,
            "cl2" => FamilyKind::CL2,
            "scl2" => FamilyKind::SCL2,
            "scl2literal" | "scl2-literal" => FamilyKind::SCL2Literal,
            other => return Err(format!("unknown family `{other}`")),
        })
    }
}

/// A family together with its parameters and truncation.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub s: ParamPoly,
    pub b: ParamPoly,
    pub window: RangeInclusive<i64>,
    /// Top grade for CL₁.
    pub n: i64,
    /// Structure constants for Cur.
    pub lie: Option<LieStructure>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind) -> Self {
        FamilySpec {
            kind,
            s: ParamPoly::param("s"),
            b: ParamPoly::param("b"),
            window: -6..=6,
            n: 6,
            lie: None,
        }
    }

    pub fn build(&self) -> Result<ConformalAlgebra, FamilyError> {
        let rational_b = || {
            check_param(&self.b)?;
            self.b
                .as_scalar()
                .ok_or(FamilyError::MissingInput(self.kind, "a rational b"))
        };
        match self.kind {
            FamilyKind::Vir => Ok(make_vir()),
            FamilyKind::Cur => make_current(self.lie.as_ref().ok_or(FamilyError::MissingInput(
                self.kind,
                "Lie structure constants",
            ))?),
            FamilyKind::V => make_v(&self.s, self.window.clone()),
            FamilyKind::CL1 => make_cl1(&self.s, self.n),
            FamilyKind::CL2 => make_cl2(&self.b, &self.s, self.window.clone()),
            FamilyKind::SCL2 => make_scl2(&rational_b()?, &self.s, self.window.clone()),
            FamilyKind::SCL2Literal => {
                make_scl2_literal(&rational_b()?, &self.s, self.window.clone())
            }
        }
    }
}
