//! Multivariate polynomials over Q in the bracket variables ∂, λ, μ and
//! named parameters.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is the
//! canonical graded-lexicographic order (∂ > λ > μ > parameters sorted by
//! name). Zero coefficients are never stored, so structural equality is
//! polynomial equality.

mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

pub use parse::{parse_poly, PolyParseError};

use crate::scalar::Scalar;

/// Rational values for (some of) the parameters.
pub type Bindings = BTreeMap<String, Scalar>;

/// A polynomial variable: one of the three bracket variables or a parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormalVar {
    /// ∂, written `d`.
    Del,
    /// λ, written `x`.
    Lam,
    /// μ, written `y`.
    Mu,
    Param(String),
}

impl FormalVar {
    pub fn param(name: impl Into<String>) -> Self {
        FormalVar::Param(name.into())
    }

    pub fn is_formal(&self) -> bool {
        !matches!(self, FormalVar::Param(_))
    }

    fn slot(&self) -> Option<usize> {
        match self {
            FormalVar::Del => Some(0),
            FormalVar::Lam => Some(1),
            FormalVar::Mu => Some(2),
            FormalVar::Param(_) => None,
        }
    }
}

impl fmt::Display for FormalVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormalVar::Del => f.write_str("d"),
            FormalVar::Lam => f.write_str("x"),
            FormalVar::Mu => f.write_str("y"),
            FormalVar::Param(p) => f.write_str(p),
        }
    }
}

/// Degree in the bracket variables; the zero polynomial has degree −∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::MinusInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A power product. Exponents of ∂, λ, μ are stored inline; parameter
/// exponents are kept sorted by name with no zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    formal: [u32; 3],
    params: Vec<(String, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn of(var: &FormalVar, exp: u32) -> Self {
        let mut m = Monomial::one();
        m.set(var, exp);
        m
    }

    /// ∂^a λ^b μ^c.
    pub fn formal(del: u32, lam: u32, mu: u32) -> Self {
        Monomial {
            formal: [del, lam, mu],
            params: Vec::new(),
        }
    }

    pub fn exponent(&self, var: &FormalVar) -> u32 {
        match var {
            FormalVar::Param(name) => self
                .params
                .binary_search_by(|(n, _)| n.as_str().cmp(name))
                .map(|i| self.params[i].1)
                .unwrap_or(0),
            v => self.formal[v.slot().unwrap()],
        }
    }

    fn set(&mut self, var: &FormalVar, exp: u32) {
        match var {
            FormalVar::Param(name) => {
                match self.params.binary_search_by(|(n, _)| n.as_str().cmp(name)) {
                    Ok(i) if exp == 0 => {
                        self.params.remove(i);
                    }
                    Ok(i) => self.params[i].1 = exp,
                    Err(_) if exp == 0 => {}
                    Err(i) => self.params.insert(i, (name.clone(), exp)),
                }
            }
            v => self.formal[v.slot().unwrap()] = exp,
        }
    }

    pub fn is_one(&self) -> bool {
        self.formal == [0, 0, 0] && self.params.is_empty()
    }

    /// Sum of the ∂, λ, μ exponents; parameters carry weight zero.
    pub fn formal_degree(&self) -> u32 {
        self.formal.iter().sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.formal_degree() + self.params.iter().map(|(_, e)| e).sum::<u32>()
    }

    pub fn has_formal(&self) -> bool {
        self.formal_degree() > 0
    }

    /// Iterates `(variable, exponent)` over the nonzero exponents in
    /// canonical variable order.
    pub fn vars(&self) -> impl Iterator<Item = (FormalVar, u32)> + '_ {
        [FormalVar::Del, FormalVar::Lam, FormalVar::Mu]
            .into_iter()
            .zip(self.formal)
            .filter(|(_, e)| *e > 0)
            .chain(
                self.params
                    .iter()
                    .map(|(n, e)| (FormalVar::Param(n.clone()), *e)),
            )
    }

    pub fn param_names(&self) -> impl Iterator<Item = &str> {
        self.params.iter().map(|(n, _)| n.as_str())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let formal = [
            self.formal[0] + other.formal[0],
            self.formal[1] + other.formal[1],
            self.formal[2] + other.formal[2],
        ];
        let mut params = Vec::with_capacity(self.params.len() + other.params.len());
        let (mut i, mut j) = (0, 0);
        while i < self.params.len() && j < other.params.len() {
            let (a, b) = (&self.params[i], &other.params[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    params.push(a.clone());
                    i += 1;
                }
                Ordering::Greater => {
                    params.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    params.push((a.0.clone(), a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        params.extend_from_slice(&self.params[i..]);
        params.extend_from_slice(&other.params[j..]);
        Monomial { formal, params }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.clone();
        for k in 0..3 {
            out.formal[k] = self.formal[k].checked_sub(other.formal[k])?;
        }
        for (name, e) in &other.params {
            let have = self.exponent(&FormalVar::Param(name.clone()));
            out.set(&FormalVar::Param(name.clone()), have.checked_sub(*e)?);
        }
        Some(out)
    }

    /// Splits off the exponent of `var`, returning it with the remaining
    /// monomial.
    fn split(&self, var: &FormalVar) -> (u32, Monomial) {
        let e = self.exponent(var);
        let mut rest = self.clone();
        rest.set(var, 0);
        (e, rest)
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let c = self.formal.cmp(&other.formal);
        if c != Ordering::Equal {
            return c;
        }
        // Parameters: an alphabetically earlier name is the larger variable.
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.params.get(i), other.params.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match a.1.cmp(&b.1) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        c => return c,
                    },
                },
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.vars() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("cannot substitute for parameter `{0}`; only d, x, y may be substituted")]
    SubstituteParam(String),
    #[error("leading part of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not exactly divisible (remainder {remainder})")]
    NotDivisible { remainder: ParamPoly },
    #[error("divisor is not monic in {0}")]
    NotMonic(FormalVar),
}

/// A polynomial in ∂, λ, μ and parameters with rational coefficients, in
/// canonical normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        ParamPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        ParamPoly::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        ParamPoly::constant(Scalar::from_int(n))
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamPoly { terms }
    }

    pub fn var(v: FormalVar) -> Self {
        ParamPoly::term(Monomial::of(&v, 1), Scalar::one())
    }

    pub fn del() -> Self {
        ParamPoly::var(FormalVar::Del)
    }

    pub fn lam() -> Self {
        ParamPoly::var(FormalVar::Lam)
    }

    pub fn mu() -> Self {
        ParamPoly::var(FormalVar::Mu)
    }

    pub fn param(name: &str) -> Self {
        ParamPoly::var(FormalVar::param(name))
    }

    /// Parses the textual grammar; panics on malformed input. Intended for
    /// literals in constructors and tests.
    pub fn p(text: &str) -> Self {
        parse_poly(text).unwrap_or_else(|e| panic!("bad polynomial literal {text:?}: {e}"))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Largest term in the canonical order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// The rational value of a constant polynomial.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// True when no ∂, λ, μ occurs (parameters may).
    pub fn is_formal_free(&self) -> bool {
        self.terms.keys().all(|m| !m.has_formal())
    }

    pub fn mentions(&self, var: &FormalVar) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.param_names().map(str::to_string))
            .collect()
    }

    pub fn has_params(&self) -> bool {
        self.terms.keys().any(|m| !m.params.is_empty())
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (tm, tc) in &self.terms {
            out.add_term(tm.mul(m), tc * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Maximal total exponent of ∂, λ, μ over the terms.
    pub fn formal_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::formal_degree)
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    /// Sum of the terms of maximal formal degree.
    pub fn leading_homogeneous(&self) -> Result<ParamPoly, PolyError> {
        let Degree::Finite(top) = self.formal_degree() else {
            return Err(PolyError::ZeroPolynomial);
        };
        Ok(self.filter_terms(|m| m.formal_degree() == top))
    }

    /// The homogeneous component of formal degree `k`.
    pub fn formal_component(&self, k: u32) -> ParamPoly {
        self.filter_terms(|m| m.formal_degree() == k)
    }

    fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> ParamPoly {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Replaces every occurrence of the bracket variable `v` by `r`.
    pub fn substitute(&self, v: &FormalVar, r: &ParamPoly) -> Result<ParamPoly, PolyError> {
        self.substitute_all(&[(v.clone(), r.clone())])
    }

    /// Simultaneous substitution of bracket variables.
    pub fn substitute_all(&self, subs: &[(FormalVar, ParamPoly)]) -> Result<ParamPoly, PolyError> {
        if let Some((FormalVar::Param(name), _)) = subs.iter().find(|(v, _)| !v.is_formal()) {
            return Err(PolyError::SubstituteParam(name.clone()));
        }
        let mut powers: Vec<Vec<ParamPoly>> = vec![vec![ParamPoly::one()]; subs.len()];
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let mut factor = ParamPoly::one();
            for (k, (v, r)) in subs.iter().enumerate() {
                let (e, r_rest) = rest.split(v);
                rest = r_rest;
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[k];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * r;
                    cache.push(next);
                }
                factor = &factor * &cache[e as usize];
            }
            for (fm, fc) in factor.terms {
                out.add_term(fm.mul(&rest), fc * c.clone());
            }
        }
        Ok(out)
    }

    /// Replaces each bound parameter by its value; unbound ones remain.
    pub fn instantiate(&self, bindings: &Bindings) -> ParamPoly {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let mut coeff = c.clone();
            for (name, value) in bindings {
                let var = FormalVar::Param(name.clone());
                let (e, r) = rest.split(&var);
                if e > 0 {
                    coeff = coeff * value.pow(e);
                    rest = r;
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    /// Exact quotient `self / q` using multivariate division in the
    /// canonical order.
    pub fn exact_divide(&self, q: &ParamPoly) -> Result<ParamPoly, PolyError> {
        let (lm, lc) = q.leading_term().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero();
        let mut leftover = ParamPoly::zero();
        while let Some((m, c)) = rem.leading_term() {
            let (m, c) = (m.clone(), c.clone());
            match m.div(lm) {
                Some(qm) => {
                    let qc = &c / lc;
                    rem -= &q.mul_monomial(&qm, &qc);
                    quot.add_term(qm, qc);
                }
                None => {
                    rem.terms.remove(&m);
                    leftover.add_term(m, c);
                }
            }
        }
        if leftover.is_zero() {
            Ok(quot)
        } else {
            Err(PolyError::NotDivisible {
                remainder: leftover,
            })
        }
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `var`:
    /// entry `k` multiplies `var^k`.
    pub fn coefficients_in(&self, var: &FormalVar) -> Vec<ParamPoly> {
        let mut out: Vec<ParamPoly> = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(var);
            let e = e as usize;
            if out.len() <= e {
                out.resize(e + 1, ParamPoly::zero());
            }
            out[e].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coefficients_in(var: &FormalVar, coeffs: &[ParamPoly]) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            out += &c.mul_monomial(&Monomial::of(var, k as u32), &Scalar::one());
        }
        out
    }

    /// Degree in the single variable `var` (`None` for zero).
    pub fn degree_in(&self, var: &FormalVar) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(var)).max()
    }

    /// Division with remainder by a divisor monic in `var`, treating every
    /// other variable as a coefficient.
    pub fn div_rem_monic(
        &self,
        var: &FormalVar,
        q: &ParamPoly,
    ) -> Result<(ParamPoly, ParamPoly), PolyError> {
        let qc = q.coefficients_in(var);
        let Some(lead) = qc.last() else {
            return Err(PolyError::DivisionByZero);
        };
        if lead != &ParamPoly::one() {
            return Err(PolyError::NotMonic(var.clone()));
        }
        let n = qc.len() - 1;
        let mut rc = self.coefficients_in(var);
        let mut quot = vec![ParamPoly::zero(); rc.len().saturating_sub(n).max(1)];
        while rc.len() > n {
            let top = rc.len() - 1;
            let c = rc[top].clone();
            if !c.is_zero() {
                let shift = top - n;
                for (k, qk) in qc.iter().enumerate() {
                    rc[shift + k] -= &(&c * qk);
                }
                quot[shift] = c;
            }
            rc.pop();
        }
        Ok((
            ParamPoly::from_coefficients_in(var, &quot),
            ParamPoly::from_coefficients_in(var, &rc),
        ))
    }

    /// Divides by the leading coefficient so the leading term is monic.
    /// Returns zero unchanged.
    pub fn normalize_leading(&self) -> ParamPoly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.recip().unwrap()),
            None => ParamPoly::zero(),
        }
    }

    /// Monic normalization with respect to the single variable `var`. Only
    /// defined when the leading coefficient in `var` is a nonzero rational.
    pub fn monic_in(&self, var: &FormalVar) -> Option<ParamPoly> {
        let coeffs = self.coefficients_in(var);
        let lead = coeffs.last()?.as_scalar()?;
        Some(self.scale(&lead.recip()?))
    }

    /// Monic gcd of two polynomials in the single variable `var` with
    /// rational coefficients. `None` if a coefficient involves anything
    /// other than `var`.
    pub fn gcd_univariate(&self, other: &ParamPoly, var: &FormalVar) -> Option<ParamPoly> {
        let to_vec = |p: &ParamPoly| -> Option<Vec<Scalar>> {
            p.coefficients_in(var)
                .iter()
                .map(ParamPoly::as_scalar)
                .collect()
        };
        let mut a = trim(to_vec(self)?);
        let mut b = trim(to_vec(other)?);
        while !b.is_empty() {
            let r = rem_univariate(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            return Some(ParamPoly::zero());
        }
        let lead = a.last().unwrap().recip().unwrap();
        let coeffs: Vec<ParamPoly> = a.iter().map(|c| ParamPoly::constant(c * &lead)).collect();
        Some(ParamPoly::from_coefficients_in(var, &coeffs))
    }
}

fn trim(mut v: Vec<Scalar>) -> Vec<Scalar> {
    while v.last().is_some_and(Scalar::is_zero) {
        v.pop();
    }
    v
}

fn rem_univariate(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap();
    while r.len() >= b.len() {
        let c = r.last().unwrap() / lb;
        let shift = r.len() - b.len();
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &(&c * bk);
        }
        r.pop();
        r = trim(r);
    }
    r
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl From<Scalar> for ParamPoly {
    fn from(c: Scalar) -> Self {
        ParamPoly::constant(c)
    }
}

impl From<i64> for ParamPoly {
    fn from(n: i64) -> Self {
        ParamPoly::int(n)
    }
}

impl AddAssign<&ParamPoly> for ParamPoly {
    fn add_assign(&mut self, rhs: &ParamPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&ParamPoly> for ParamPoly {
    fn sub_assign(&mut self, rhs: &ParamPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: ParamPoly) -> ParamPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: &ParamPoly) -> ParamPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<ParamPoly> for &ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: ParamPoly) -> ParamPoly {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}
