//! Z-graded Lie conformal algebras that are free over C[∂] on finitely many
//! generators, given by a structure table
//! `(u, v) ↦ Σ_w p^w_{u,v}(∂, λ) w`.
//!
//! A bracket whose target grade lies outside the algebra's window is
//! undecidable at this truncation, not zero. Checks skip and count such
//! pairs and triples.

mod axioms;
mod spectral;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::poly::{Bindings, FormalVar, ParamPoly};

pub use axioms::{
    bracket, check_jacobi, check_skew, jacobi_residual, JacobiReport, JacobiViolation, SkewReport,
    SkewViolation,
};
pub use spectral::{
    classify_support, degree_relation_check, spectral_data, DegreeReport, DegreeViolation,
    Relation, SpectralData, SpectralEntry, SpectralError, SupportClassification,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub name: String,
    pub grade: i64,
}

impl Generator {
    pub fn new(name: impl Into<String>, grade: i64) -> Self {
        Generator {
            name: name.into(),
            grade,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error(
        "bracket [{left} {right}] targets `{target}` of grade {found}, expected grade {expected}"
    )]
    GradeMismatch {
        left: String,
        right: String,
        target: String,
        expected: i64,
        found: i64,
    },
    #[error("bracket [{left} {right}] lands on grade {grade}, which is outside the window")]
    OutOfWindow {
        left: String,
        right: String,
        grade: i64,
    },
    #[error(
        "structure polynomial for [{left} {right}] uses `y`; only d, x and parameters are allowed"
    )]
    UsesMu { left: String, right: String },
    #[error("parameter `{param}` in [{left} {right}] is not declared")]
    UndeclaredParam {
        left: String,
        right: String,
        param: String,
    },
}

/// Sparse sum over generators with polynomial coefficients.
pub type Terms = Vec<(usize, ParamPoly)>;

fn normalize(terms: impl IntoIterator<Item = (usize, ParamPoly)>) -> Terms {
    let mut acc: BTreeMap<usize, ParamPoly> = BTreeMap::new();
    for (w, p) in terms {
        *acc.entry(w).or_default() += &p;
    }
    acc.into_iter().filter(|(_, p)| !p.is_zero()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalAlgebra {
    params: BTreeSet<String>,
    generators: Vec<Generator>,
    table: BTreeMap<(usize, usize), Terms>,
    window: BTreeSet<i64>,
    index: BTreeMap<String, usize>,
}

impl ConformalAlgebra {
    /// An algebra with the given generators and every bracket zero. The
    /// window is the set of generator grades.
    pub fn new(
        params: impl IntoIterator<Item = String>,
        generators: Vec<Generator>,
    ) -> Result<Self, AlgebraError> {
        let mut index = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(ConformalAlgebra {
            params: params.into_iter().collect(),
            window: generators.iter().map(|g| g.grade).collect(),
            generators,
            table: BTreeMap::new(),
            index,
        })
    }

    /// Sets `[u_λ v] = Σ terms`, replacing any previous value. Terms must be
    /// polynomials in ∂, λ and declared parameters on targets of grade
    /// `grade(u) + grade(v)`.
    pub fn set_bracket(&mut self, u: usize, v: usize, terms: Terms) -> Result<(), AlgebraError> {
        let (gu, gv) = (&self.generators[u], &self.generators[v]);
        let expected = gu.grade + gv.grade;
        if !self.window.contains(&expected) {
            if terms.iter().all(|(_, p)| p.is_zero()) {
                return Ok(());
            }
            return Err(AlgebraError::OutOfWindow {
                left: gu.name.clone(),
                right: gv.name.clone(),
                grade: expected,
            });
        }
        for (w, p) in &terms {
            let gw = &self.generators[*w];
            if gw.grade != expected && !p.is_zero() {
                return Err(AlgebraError::GradeMismatch {
                    left: gu.name.clone(),
                    right: gv.name.clone(),
                    target: gw.name.clone(),
                    expected,
                    found: gw.grade,
                });
            }
            if p.mentions(&FormalVar::Mu) {
                return Err(AlgebraError::UsesMu {
                    left: gu.name.clone(),
                    right: gv.name.clone(),
                });
            }
            if let Some(param) = p.params().into_iter().find(|x| !self.params.contains(x)) {
                return Err(AlgebraError::UndeclaredParam {
                    left: gu.name.clone(),
                    right: gv.name.clone(),
                    param,
                });
            }
        }
        let terms = normalize(terms);
        if terms.is_empty() {
            self.table.remove(&(u, v));
        } else {
            self.table.insert((u, v), terms);
        }
        Ok(())
    }

    /// `[u_λ v] = p · w` for single-target brackets.
    pub fn set(&mut self, u: usize, v: usize, w: usize, p: ParamPoly) -> Result<(), AlgebraError> {
        self.set_bracket(u, v, vec![(w, p)])
    }

    pub fn params(&self) -> &BTreeSet<String> {
        &self.params
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn window(&self) -> &BTreeSet<i64> {
        &self.window
    }

    pub fn grade(&self, i: usize) -> i64 {
        self.generators[i].grade
    }

    /// True when the target grade of `[u_λ v]` is inside the window.
    pub fn decidable(&self, u: usize, v: usize) -> bool {
        self.window.contains(&(self.grade(u) + self.grade(v)))
    }

    /// The structure terms of `[u_λ v]`, or `None` when undecidable.
    pub fn structure(&self, u: usize, v: usize) -> Option<&[(usize, ParamPoly)]> {
        if !self.decidable(u, v) {
            return None;
        }
        Some(self.table.get(&(u, v)).map_or(&[], Vec::as_slice))
    }

    /// Coefficient `p^w_{u,v}`; zero if absent or undecidable.
    pub fn coefficient(&self, u: usize, v: usize, w: usize) -> ParamPoly {
        self.table
            .get(&(u, v))
            .and_then(|ts| ts.iter().find(|(t, _)| *t == w))
            .map(|(_, p)| p.clone())
            .unwrap_or_default()
    }

    /// Nonzero table entries in `(left, right)` index order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &[(usize, ParamPoly)])> {
        self.table.iter().map(|((u, v), t)| (*u, *v, t.as_slice()))
    }

    /// The generator of grade `g` when there is exactly one.
    pub fn by_grade(&self, g: i64) -> Option<usize> {
        let mut it = self
            .generators
            .iter()
            .enumerate()
            .filter(|(_, x)| x.grade == g);
        let first = it.next()?.0;
        it.next().is_none().then_some(first)
    }

    /// Grade → generator map when every grade carries exactly one generator.
    pub fn one_per_grade(&self) -> Option<BTreeMap<i64, usize>> {
        let mut out = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if out.insert(g.grade, i).is_some() {
                return None;
            }
        }
        Some(out)
    }

    /// Substitutes rational values for bound parameters everywhere.
    pub fn instantiate(&self, bindings: &Bindings) -> ConformalAlgebra {
        let mut out = self.clone();
        out.params.retain(|p| !bindings.contains_key(p));
        out.table = self
            .table
            .iter()
            .map(|(k, ts)| {
                (
                    *k,
                    normalize(ts.iter().map(|(w, p)| (*w, p.instantiate(bindings)))),
                )
            })
            .filter(|(_, ts)| !ts.is_empty())
            .collect();
        out
    }

    /// Sort key used for deterministic reports.
    pub(crate) fn key(&self, idx: &[usize]) -> (Vec<i64>, Vec<String>) {
        (
            idx.iter().map(|&i| self.grade(i)).collect(),
            idx.iter()
                .map(|&i| self.generators[i].name.clone())
                .collect(),
        )
    }
}

/// One difference between two structure tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMismatch {
    pub left: String,
    pub right: String,
    pub target: String,
    pub expected: ParamPoly,
    pub found: ParamPoly,
}

impl fmt::Display for TableMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} {}] on {}: expected {}, found {}",
            self.left, self.right, self.target, self.expected, self.found
        )
    }
}

/// Entry-by-entry comparison by generator name. Generators present in only
/// one algebra are reported with zero on the other side.
pub fn table_diff(expected: &ConformalAlgebra, found: &ConformalAlgebra) -> Vec<TableMismatch> {
    let collect = |alg: &ConformalAlgebra| -> BTreeMap<(String, String, String), ParamPoly> {
        alg.entries()
            .flat_map(|(u, v, ts)| {
                ts.iter().map(move |(w, p)| {
                    (
                        (
                            alg.generator(u).name.clone(),
                            alg.generator(v).name.clone(),
                            alg.generator(*w).name.clone(),
                        ),
                        p.clone(),
                    )
                })
            })
            .collect()
    };
    let (a, b) = (collect(expected), collect(found));
    let keys: BTreeSet<_> = a.keys().chain(b.keys()).cloned().collect();
    keys.into_iter()
        .filter_map(|k| {
            let e = a.get(&k).cloned().unwrap_or_default();
            let f = b.get(&k).cloned().unwrap_or_default();
            (e != f).then_some(TableMismatch {
                left: k.0,
                right: k.1,
                target: k.2,
                expected: e,
                found: f,
            })
        })
        .collect()
}

/// `Σ f_u(∂) u`, an element of the free C[∂]-module.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element {
    pub coeffs: BTreeMap<usize, ParamPoly>,
}

impl Element {
    pub fn generator(u: usize) -> Self {
        Element::term(u, ParamPoly::one())
    }

    pub fn term(u: usize, f: ParamPoly) -> Self {
        let mut coeffs = BTreeMap::new();
        if !f.is_zero() {
            coeffs.insert(u, f);
        }
        Element { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplies every coefficient by ∂.
    pub fn del(&self) -> Element {
        self.mul_poly(&ParamPoly::del())
    }

    pub fn mul_poly(&self, f: &ParamPoly) -> Element {
        Element {
            coeffs: self
                .coeffs
                .iter()
                .map(|(u, c)| (*u, c * f))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut coeffs = self.coeffs.clone();
        for (u, c) in &other.coeffs {
            *coeffs.entry(*u).or_default() += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Element { coeffs }
    }
}

/// A λ-bracket value `Σ g_w(∂, λ) w`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaElement {
    pub coeffs: BTreeMap<usize, ParamPoly>,
}

impl LambdaElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, w: usize) -> ParamPoly {
        self.coeffs.get(&w).cloned().unwrap_or_default()
    }

    pub fn mul_poly(&self, f: &ParamPoly) -> LambdaElement {
        LambdaElement {
            coeffs: self
                .coeffs
                .iter()
                .map(|(u, c)| (*u, c * f))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }
}
