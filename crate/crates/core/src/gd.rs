//! Novikov, Lie and Gel'fand-Dorfman algebras on a finite (truncated)
//! basis, and the correspondence with quadratic conformal algebras
//! `[a_λ b] = ∂(b∘a) + [b,a] + λ(a∘b + b∘a)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;

use thiserror::Error;

use crate::conformal::{AlgebraError, ConformalAlgebra, Generator, Terms};
use crate::exec::Execution;
use crate::families::grade_name;
use crate::poly::{Monomial, ParamPoly};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasisElem {
    pub name: String,
    pub grade: i64,
}

impl BasisElem {
    pub fn new(name: impl Into<String>, grade: i64) -> Self {
        BasisElem {
            name: name.into(),
            grade,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("duplicate basis element `{0}`")]
    Duplicate(String),
    #[error("structure constant for ({0}, {1}) involves d, x or y")]
    NotConstant(String, String),
}

type Vector = BTreeMap<usize, ParamPoly>;

/// A bilinear product on a finite basis with constants in Q[params]. Pairs
/// whose product leaves the truncation are listed as undecidable; absent
/// entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTable {
    basis: Vec<BasisElem>,
    table: BTreeMap<(usize, usize), Terms>,
    undecidable: BTreeSet<(usize, usize)>,
}

impl StructureTable {
    pub fn new(basis: Vec<BasisElem>) -> Result<Self, TableError> {
        let mut seen = BTreeSet::new();
        for b in &basis {
            if !seen.insert(&b.name) {
                return Err(TableError::Duplicate(b.name.clone()));
            }
        }
        Ok(StructureTable {
            basis,
            table: BTreeMap::new(),
            undecidable: BTreeSet::new(),
        })
    }

    pub fn set_terms(&mut self, u: usize, v: usize, terms: Terms) -> Result<(), TableError> {
        if terms.iter().any(|(_, p)| !p.is_formal_free()) {
            return Err(TableError::NotConstant(
                self.basis[u].name.clone(),
                self.basis[v].name.clone(),
            ));
        }
        let mut acc: Vector = BTreeMap::new();
        for (w, p) in terms {
            *acc.entry(w).or_default() += &p;
        }
        let terms: Terms = acc.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        self.undecidable.remove(&(u, v));
        if terms.is_empty() {
            self.table.remove(&(u, v));
        } else {
            self.table.insert((u, v), terms);
        }
        Ok(())
    }

    pub fn set(&mut self, u: usize, v: usize, w: usize, c: ParamPoly) -> Result<(), TableError> {
        self.set_terms(u, v, vec![(w, c)])
    }

    pub fn mark_undecidable(&mut self, u: usize, v: usize) {
        self.table.remove(&(u, v));
        self.undecidable.insert((u, v));
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    /// Parameters occurring in the structure constants.
    pub fn params(&self) -> BTreeSet<String> {
        self.table
            .values()
            .flat_map(|ts| ts.iter().flat_map(|(_, p)| p.params()))
            .collect()
    }

    pub fn is_decidable(&self, u: usize, v: usize) -> bool {
        !self.undecidable.contains(&(u, v))
    }

    pub fn undecidable(&self) -> &BTreeSet<(usize, usize)> {
        &self.undecidable
    }

    pub fn product(&self, u: usize, v: usize) -> Option<&[(usize, ParamPoly)]> {
        if !self.is_decidable(u, v) {
            return None;
        }
        Some(self.table.get(&(u, v)).map_or(&[], Vec::as_slice))
    }

    pub fn coefficient(&self, u: usize, v: usize, w: usize) -> ParamPoly {
        self.table
            .get(&(u, v))
            .and_then(|ts| ts.iter().find(|(t, _)| *t == w))
            .map(|(_, p)| p.clone())
            .unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &[(usize, ParamPoly)])> {
        self.table.iter().map(|((u, v), t)| (*u, *v, t.as_slice()))
    }

    /// Bilinear extension to vectors; `None` if an undecidable pair is hit.
    fn apply(&self, x: &Vector, y: &Vector) -> Option<Vector> {
        let mut out: Vector = BTreeMap::new();
        for (u, a) in x {
            for (v, b) in y {
                let ab = a * b;
                for (w, c) in self.product(*u, *v)? {
                    *out.entry(*w).or_default() += &(&ab * c);
                }
            }
        }
        out.retain(|_, p| !p.is_zero());
        Some(out)
    }
}

/// A product `∘` expected to be left-symmetric and right-commutative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovAlgebra(StructureTable);

/// A bracket expected to be antisymmetric and to satisfy Jacobi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieStructure(StructureTable);

impl NovikovAlgebra {
    pub fn from_table(t: StructureTable) -> Self {
        NovikovAlgebra(t)
    }
    pub fn table(&self) -> &StructureTable {
        &self.0
    }
}

impl LieStructure {
    pub fn from_table(t: StructureTable) -> Self {
        LieStructure(t)
    }
    pub fn table(&self) -> &StructureTable {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GDAlgebra {
    pub nov: NovikovAlgebra,
    pub lie: LieStructure,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GdError {
    #[error("Novikov product and Lie bracket are on different bases")]
    BasisMismatch,
    #[error("not a Gel'fand-Dorfman algebra: {0}")]
    NotGD(IdentityViolation),
    #[error("[{0} {1}] is not affine in d and x")]
    NotQuadratic(String, String),
    #[error("x-coefficient of [{0} {1}] differs from the symmetrized product")]
    InconsistentStar(String, String),
    #[error("pair ({0}, {1}) is truncated but its target grade is inside the window")]
    UngradedTruncation(String, String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Table(#[from] TableError),
}

impl GDAlgebra {
    pub fn new(nov: NovikovAlgebra, lie: LieStructure) -> Result<Self, GdError> {
        if nov.0.basis != lie.0.basis {
            return Err(GdError::BasisMismatch);
        }
        Ok(GDAlgebra { nov, lie })
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.nov.0.basis
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Identity {
    LeftSymmetry,
    RightCommutativity,
    Antisymmetry,
    Jacobi,
    Compatibility,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::LeftSymmetry => "left-symmetry",
            Identity::RightCommutativity => "right-commutativity",
            Identity::Antisymmetry => "antisymmetry",
            Identity::Jacobi => "jacobi",
            Identity::Compatibility => "compatibility",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityViolation {
    pub identity: Identity,
    /// Basis names (two for antisymmetry, three otherwise).
    pub args: Vec<String>,
    pub residual: Vec<(String, ParamPoly)>,
}

impl fmt::Display for IdentityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails on ({})", self.identity, self.args.join(", "))?;
        for (w, p) in &self.residual {
            write!(f, "; {w}: {p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    /// Number of (identity, arguments) instances evaluated.
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<IdentityViolation>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(&mut self, other: IdentityReport) {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.violations.extend(other.violations);
    }
}

fn unit(i: usize) -> Vector {
    BTreeMap::from([(i, ParamPoly::one())])
}

fn combine(parts: &[(i64, &Vector)]) -> Vector {
    let mut out: Vector = BTreeMap::new();
    for (sign, v) in parts {
        let k = ParamPoly::int(*sign);
        for (w, p) in *v {
            *out.entry(*w).or_default() += &(p * &k);
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

type Evaluator<'a> = dyn Fn(&[usize]) -> Vec<(Identity, Option<Vector>)> + Sync + Send + 'a;

/// Evaluates `eval` on every tuple and collects nonzero residuals in tuple
/// order.
fn run(basis: &[BasisElem], arity: usize, eval: &Evaluator<'_>, exec: Execution) -> IdentityReport {
    let n = basis.len();
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..arity {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    let results = exec.map(&tuples, |t| eval(t));
    let mut report = IdentityReport::default();
    for (t, outs) in tuples.iter().zip(results) {
        for (identity, res) in outs {
            let Some(res) = res else {
                report.skipped += 1;
                continue;
            };
            report.checked += 1;
            if !res.is_empty() {
                report.violations.push(IdentityViolation {
                    identity,
                    args: t.iter().map(|&i| basis[i].name.clone()).collect(),
                    residual: res
                        .into_iter()
                        .map(|(w, p)| (basis[w].name.clone(), p))
                        .collect(),
                });
            }
        }
    }
    report
}

/// Left-symmetry and right-commutativity on all ordered triples.
pub fn check_novikov(n: &NovikovAlgebra) -> IdentityReport {
    let t = &n.0;
    let eval = |abc: &[usize]| {
        let (a, b, c) = (unit(abc[0]), unit(abc[1]), unit(abc[2]));
        let op = |x: &Vector, y: &Vector| t.apply(x, y);
        let left_sym = (|| {
            let ab_c = op(&op(&a, &b)?, &c)?;
            let a_bc = op(&a, &op(&b, &c)?)?;
            let ba_c = op(&op(&b, &a)?, &c)?;
            let b_ac = op(&b, &op(&a, &c)?)?;
            Some(combine(&[(1, &ab_c), (-1, &a_bc), (-1, &ba_c), (1, &b_ac)]))
        })();
        let right_comm = (|| {
            let ab_c = op(&op(&a, &b)?, &c)?;
            let ac_b = op(&op(&a, &c)?, &b)?;
            Some(combine(&[(1, &ab_c), (-1, &ac_b)]))
        })();
        vec![
            (Identity::LeftSymmetry, left_sym),
            (Identity::RightCommutativity, right_comm),
        ]
    };
    run(&t.basis, 3, &eval, Execution::Parallel)
}

/// Antisymmetry on all ordered pairs, then Jacobi on all ordered triples.
pub fn check_lie(l: &LieStructure) -> IdentityReport {
    let t = &l.0;
    let anti = |ab: &[usize]| {
        let (a, b) = (unit(ab[0]), unit(ab[1]));
        let res = (|| Some(combine(&[(1, &t.apply(&a, &b)?), (1, &t.apply(&b, &a)?)])))();
        vec![(Identity::Antisymmetry, res)]
    };
    let jacobi = |abc: &[usize]| {
        let (a, b, c) = (unit(abc[0]), unit(abc[1]), unit(abc[2]));
        let br = |x: &Vector, y: &Vector| t.apply(x, y);
        let res = (|| {
            let x = br(&a, &br(&b, &c)?)?;
            let y = br(&b, &br(&c, &a)?)?;
            let z = br(&c, &br(&a, &b)?)?;
            Some(combine(&[(1, &x), (1, &y), (1, &z)]))
        })();
        vec![(Identity::Jacobi, res)]
    };
    let mut report = run(&t.basis, 2, &anti, Execution::Parallel);
    report.merge(run(&t.basis, 3, &jacobi, Execution::Parallel));
    report
}

/// `[a∘b, c] − [a∘c, b] + [a,b]∘c − [a,c]∘b − a∘[b,c] = 0` on all ordered
/// triples.
pub fn check_gd(g: &GDAlgebra) -> IdentityReport {
    let (n, l) = (&g.nov.0, &g.lie.0);
    let eval = |abc: &[usize]| {
        let (a, b, c) = (unit(abc[0]), unit(abc[1]), unit(abc[2]));
        let circ = |x: &Vector, y: &Vector| n.apply(x, y);
        let br = |x: &Vector, y: &Vector| l.apply(x, y);
        let res = (|| {
            let t1 = br(&circ(&a, &b)?, &c)?;
            let t2 = br(&circ(&a, &c)?, &b)?;
            let t3 = circ(&br(&a, &b)?, &c)?;
            let t4 = circ(&br(&a, &c)?, &b)?;
            let t5 = circ(&a, &br(&b, &c)?)?;
            Some(combine(&[
                (1, &t1),
                (-1, &t2),
                (1, &t3),
                (-1, &t4),
                (-1, &t5),
            ]))
        })();
        vec![(Identity::Compatibility, res)]
    };
    run(g.basis(), 3, &eval, Execution::Parallel)
}

fn graded_basis(window: &RangeInclusive<i64>) -> Vec<BasisElem> {
    window
        .clone()
        .map(|i| BasisElem::new(grade_name(i), i))
        .collect()
}

fn graded_product(
    window: RangeInclusive<i64>,
    coeff: impl Fn(i64, i64) -> ParamPoly,
) -> StructureTable {
    let lo = *window.start();
    let mut t = StructureTable::new(graded_basis(&window)).expect("distinct grades");
    for i in window.clone() {
        for j in window.clone() {
            let (u, v) = ((i - lo) as usize, (j - lo) as usize);
            if window.contains(&(i + j)) {
                t.set(u, v, (i + j - lo) as usize, coeff(i, j))
                    .expect("constants are formal-free");
            } else {
                t.mark_undecidable(u, v);
            }
        }
    }
    t
}

/// `L_i ∘ L_j = (j+1) L_{i+j}` on `−1..=n`.
pub fn make_a1(n: i64) -> NovikovAlgebra {
    NovikovAlgebra(graded_product(-1..=n, |_, j| ParamPoly::int(j + 1)))
}

/// `L_α ∘ L_β = (β+b) L_{α+β}` with α, β in the window.
pub fn make_a2(b: &ParamPoly, window: RangeInclusive<i64>) -> NovikovAlgebra {
    NovikovAlgebra(graded_product(window, |_, j| b + &ParamPoly::int(j)))
}

/// Name of `L_{(α,n)}` in A₃.
pub fn a3_name(alpha: i64, n: i64) -> String {
    format!("L({alpha},{n})")
}

/// `L_{α,i} ∘ L_{β,j} = (β+b) L_{α+β,i+j} + j L_{α+β,i+j−1}` with α, β in
/// the window and second index in `0..=m`.
pub fn make_a3(b: &ParamPoly, window: RangeInclusive<i64>, m: i64) -> NovikovAlgebra {
    let mut basis = Vec::new();
    for alpha in window.clone() {
        for k in 0..=m {
            basis.push(BasisElem::new(a3_name(alpha, k), alpha));
        }
    }
    let width = (m + 1) as usize;
    let lo = *window.start();
    let idx = |alpha: i64, k: i64| (alpha - lo) as usize * width + k as usize;
    let mut t = StructureTable::new(basis).expect("distinct names");
    for alpha in window.clone() {
        for i in 0..=m {
            for beta in window.clone() {
                for j in 0..=m {
                    let (u, v) = (idx(alpha, i), idx(beta, j));
                    if !window.contains(&(alpha + beta)) || i + j > m {
                        t.mark_undecidable(u, v);
                        continue;
                    }
                    let mut terms = vec![(idx(alpha + beta, i + j), b + &ParamPoly::int(beta))];
                    if j > 0 {
                        terms.push((idx(alpha + beta, i + j - 1), ParamPoly::int(j)));
                    }
                    t.set_terms(u, v, terms).expect("constants are formal-free");
                }
            }
        }
    }
    NovikovAlgebra(t)
}

/// `[L_i, L_j] = s(i−j) L_{i+j}` on the basis of a graded Novikov algebra
/// with one element per grade, truncated the same way.
pub fn s_bracket(nov: &NovikovAlgebra, s: &ParamPoly) -> LieStructure {
    let base = &nov.0;
    let mut t = StructureTable::new(base.basis.clone()).expect("basis already validated");
    let by_grade: BTreeMap<i64, usize> = base
        .basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.grade, i))
        .collect();
    for (u, bu) in base.basis.iter().enumerate() {
        for (v, bv) in base.basis.iter().enumerate() {
            match by_grade.get(&(bu.grade + bv.grade)) {
                Some(&w) => t
                    .set(u, v, w, s * &ParamPoly::int(bu.grade - bv.grade))
                    .expect("s is formal-free"),
                None => t.mark_undecidable(u, v),
            }
        }
    }
    LieStructure(t)
}

/// sl₂ with `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
pub fn sl2() -> LieStructure {
    let mut t = StructureTable::new(vec![
        BasisElem::new("h", 0),
        BasisElem::new("e", 0),
        BasisElem::new("f", 0),
    ])
    .expect("distinct names");
    let c = ParamPoly::int;
    for (u, v, w, k) in [
        (0, 1, 1, 2),
        (1, 0, 1, -2),
        (0, 2, 2, -2),
        (2, 0, 2, 2),
        (1, 2, 0, 1),
        (2, 1, 0, -1),
    ] {
        t.set(u, v, w, c(k)).expect("constants");
    }
    LieStructure(t)
}

/// The quadratic conformal algebra `[a_λ b] = ∂(b∘a) + [b,a] + λ(a∘b + b∘a)`
/// on the same basis. Refuses input that fails any of the Novikov, Lie or
/// compatibility identities.
pub fn quadratic_from_gd(g: &GDAlgebra) -> Result<ConformalAlgebra, GdError> {
    for report in [check_novikov(&g.nov), check_lie(&g.lie), check_gd(g)] {
        if let Some(v) = report.violations.into_iter().next() {
            return Err(GdError::NotGD(v));
        }
    }
    let (n, l) = (&g.nov.0, &g.lie.0);
    let params: BTreeSet<String> = n.params().into_iter().chain(l.params()).collect();
    let gens = g
        .basis()
        .iter()
        .map(|b| Generator::new(b.name.clone(), b.grade))
        .collect();
    let mut alg = ConformalAlgebra::new(params, gens)?;
    let (d, x) = (ParamPoly::del(), ParamPoly::lam());
    for u in 0..alg.len() {
        for v in 0..alg.len() {
            let (Some(vu), Some(uv), Some(br)) =
                (n.product(v, u), n.product(u, v), l.product(v, u))
            else {
                if alg.decidable(u, v) {
                    return Err(GdError::UngradedTruncation(
                        alg.generator(u).name.clone(),
                        alg.generator(v).name.clone(),
                    ));
                }
                continue;
            };
            let mut terms: Terms = Vec::new();
            terms.extend(vu.iter().map(|(w, c)| (*w, c * &d)));
            terms.extend(br.iter().cloned());
            terms.extend(vu.iter().map(|(w, c)| (*w, c * &x)));
            terms.extend(uv.iter().map(|(w, c)| (*w, c * &x)));
            alg.set_bracket(u, v, terms)?;
        }
    }
    Ok(alg)
}

/// Pairs whose structure polynomial is not of the form `u∂ + vλ + w`.
pub fn quadratic_obstructions(alg: &ConformalAlgebra) -> Vec<(String, String)> {
    alg.entries()
        .filter(|(_, _, ts)| ts.iter().any(|(_, p)| !is_affine(p)))
        .map(|(u, v, _)| (alg.generator(u).name.clone(), alg.generator(v).name.clone()))
        .collect()
}

fn is_affine(p: &ParamPoly) -> bool {
    p.terms()
        .all(|(m, _)| m.formal_degree() <= 1 && m.exponent(&crate::FormalVar::Mu) == 0)
}

/// Splits `p = U∂ + Vλ + W` with `U, V, W ∈ Q[params]`.
fn affine_parts(p: &ParamPoly) -> (ParamPoly, ParamPoly, ParamPoly) {
    let mut parts = [ParamPoly::zero(), ParamPoly::zero(), ParamPoly::zero()];
    for (m, c) in p.terms() {
        let (slot, var) = if m.exponent(&crate::FormalVar::Del) == 1 {
            (0, Some(crate::FormalVar::Del))
        } else if m.exponent(&crate::FormalVar::Lam) == 1 {
            (1, Some(crate::FormalVar::Lam))
        } else {
            (2, None)
        };
        let rest = match var {
            Some(v) => m.div(&Monomial::of(&v, 1)).expect("exponent is one"),
            None => m.clone(),
        };
        parts[slot] += &ParamPoly::term(rest, c.clone());
    }
    let [u, v, w] = parts;
    (u, v, w)
}

/// Inverse of [`quadratic_from_gd`]: reads `b∘a` from the ∂-coefficient and
/// `[b,a]` from the constant term of `[a_λ b]`, and checks that the
/// λ-coefficient equals `a∘b + b∘a`.
pub fn gd_from_quadratic(alg: &ConformalAlgebra) -> Result<GDAlgebra, GdError> {
    if let Some((u, v)) = quadratic_obstructions(alg).into_iter().next() {
        return Err(GdError::NotQuadratic(u, v));
    }
    let basis: Vec<BasisElem> = alg
        .generators()
        .iter()
        .map(|g| BasisElem::new(g.name.clone(), g.grade))
        .collect();
    let mut nov = StructureTable::new(basis.clone())?;
    let mut lie = StructureTable::new(basis)?;
    let n = alg.len();
    let mut lam: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    for u in 0..n {
        for v in 0..n {
            let Some(terms) = alg.structure(u, v) else {
                nov.mark_undecidable(v, u);
                lie.mark_undecidable(v, u);
                continue;
            };
            let (mut circ, mut br, mut star) = (Vec::new(), Vec::new(), Vector::new());
            for (w, p) in terms {
                let (du, lv, cw) = affine_parts(p);
                circ.push((*w, du));
                br.push((*w, cw));
                star.insert(*w, lv);
            }
            nov.set_terms(v, u, circ)?;
            lie.set_terms(v, u, br)?;
            star.retain(|_, p| !p.is_zero());
            lam.insert((u, v), star);
        }
    }
    for ((u, v), star) in lam {
        let expected = combine(&[
            (
                1,
                &nov.product(u, v).unwrap_or(&[]).iter().cloned().collect(),
            ),
            (
                1,
                &nov.product(v, u).unwrap_or(&[]).iter().cloned().collect(),
            ),
        ]);
        if star != expected {
            return Err(GdError::InconsistentStar(
                alg.generator(u).name.clone(),
                alg.generator(v).name.clone(),
            ));
        }
    }
    GDAlgebra::new(NovikovAlgebra(nov), LieStructure(lie))
}
