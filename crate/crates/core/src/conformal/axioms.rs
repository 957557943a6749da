use std::collections::BTreeMap;

use thiserror::Error;

use super::{ConformalAlgebra, Element, LambdaElement};
use crate::exec::Execution;
use crate::poly::{FormalVar, ParamPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("bracket [{0} {1}] lands outside the window")]
    OutOfWindow(String, String),
    #[error("Jacobi identity on ({0}, {1}, {2}) needs a bracket outside the window")]
    OutOfWindowTriple(String, String, String),
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

fn subst(p: &ParamPoly, subs: &[(FormalVar, ParamPoly)]) -> ParamPoly {
    p.substitute_all(subs)
        .expect("only bracket variables are substituted")
}

/// `[a_λ b]` extended from the table by sesquilinearity:
/// `[f(∂)u_λ g(∂)v] = f(−λ) g(∂+λ) [u_λ v]`.
pub fn bracket(
    alg: &ConformalAlgebra,
    a: &Element,
    b: &Element,
) -> Result<LambdaElement, BracketError> {
    let mut acc: BTreeMap<usize, ParamPoly> = BTreeMap::new();
    for (&u, f) in &a.coeffs {
        let f_left = subst(f, &[(FormalVar::Del, -l())]);
        for (&v, g) in &b.coeffs {
            let terms = alg.structure(u, v).ok_or_else(|| {
                BracketError::OutOfWindow(
                    alg.generator(u).name.clone(),
                    alg.generator(v).name.clone(),
                )
            })?;
            if terms.is_empty() {
                continue;
            }
            let g_right = subst(g, &[(FormalVar::Del, d() + l())]);
            let factor = &f_left * &g_right;
            for (w, p) in terms {
                *acc.entry(*w).or_default() += &(&factor * p);
            }
        }
    }
    acc.retain(|_, p| !p.is_zero());
    Ok(LambdaElement { coeffs: acc })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewViolation {
    pub left: String,
    pub right: String,
    pub target: String,
    /// `p^w_{u,v}(∂,λ) + p^w_{v,u}(∂,−∂−λ)`.
    pub residual: ParamPoly,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SkewReport {
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<SkewViolation>,
}

impl SkewReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Skew-symmetry `[a_λ b] = −[b_{−λ−∂} a]` on every unordered pair of
/// generators, coefficient by coefficient.
pub fn check_skew(alg: &ConformalAlgebra) -> SkewReport {
    let n = alg.len();
    let flip = [(FormalVar::Lam, -d() - l())];
    let mut report = SkewReport::default();
    let mut found = Vec::new();
    for u in 0..n {
        for v in u..n {
            let (Some(uv), Some(vu)) = (alg.structure(u, v), alg.structure(v, u)) else {
                report.skipped += 1;
                continue;
            };
            report.checked += 1;
            let mut res: BTreeMap<usize, ParamPoly> = BTreeMap::new();
            for (w, p) in uv {
                *res.entry(*w).or_default() += p;
            }
            for (w, p) in vu {
                *res.entry(*w).or_default() += &subst(p, &flip);
            }
            for (w, r) in res {
                if !r.is_zero() {
                    found.push((alg.key(&[u, v, w]), u, v, w, r));
                }
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    report.violations = found
        .into_iter()
        .map(|(_, u, v, w, residual)| SkewViolation {
            left: alg.generator(u).name.clone(),
            right: alg.generator(v).name.clone(),
            target: alg.generator(w).name.clone(),
            residual,
        })
        .collect();
    report
}

/// Residual of `[u_λ [v_μ w]] − [[u_λ v]_{λ+μ} w] − [v_μ [u_λ w]]` per
/// target generator. Every target reached by any of the three terms is
/// present in the map; the identity holds iff every value is zero.
pub fn jacobi_residual(
    alg: &ConformalAlgebra,
    u: usize,
    v: usize,
    w: usize,
) -> Result<BTreeMap<usize, ParamPoly>, BracketError> {
    let undecided = || {
        BracketError::OutOfWindowTriple(
            alg.generator(u).name.clone(),
            alg.generator(v).name.clone(),
            alg.generator(w).name.clone(),
        )
    };
    let get = |a: usize, b: usize| alg.structure(a, b).ok_or_else(undecided);

    // Every structure lookup happens before any polynomial work so that an
    // undecidable triple is rejected cheaply.
    let vw = get(v, w)?;
    let uv = get(u, v)?;
    let uw = get(u, w)?;
    for (t, _) in vw {
        get(u, *t)?;
    }
    for (t, _) in uv {
        get(*t, w)?;
    }
    for (t, _) in uw {
        get(v, *t)?;
    }

    let mut res: BTreeMap<usize, ParamPoly> = BTreeMap::new();
    // [u_λ [v_μ w]] = Σ_t p^t_{v,w}(∂+λ, μ) [u_λ t]
    for (t, p) in vw {
        let shifted = subst(p, &[(FormalVar::Del, d() + l()), (FormalVar::Lam, m())]);
        for (r, q) in get(u, *t)? {
            *res.entry(*r).or_default() += &(&shifted * q);
        }
    }
    // [[u_λ v]_{λ+μ} w] = Σ_t p^t_{u,v}(−λ−μ, λ) p^r_{t,w}(∂, λ+μ)
    for (t, p) in uv {
        let left = subst(p, &[(FormalVar::Del, -l() - m())]);
        for (r, q) in get(*t, w)? {
            let right = subst(q, &[(FormalVar::Lam, l() + m())]);
            *res.entry(*r).or_default() -= &(&left * &right);
        }
    }
    // [v_μ [u_λ w]] = Σ_t p^t_{u,w}(∂+μ, λ) p^r_{v,t}(∂, μ)
    for (t, p) in uw {
        let shifted = subst(p, &[(FormalVar::Del, d() + m())]);
        for (r, q) in get(v, *t)? {
            let right = subst(q, &[(FormalVar::Lam, m())]);
            *res.entry(*r).or_default() -= &(&shifted * &right);
        }
    }
    Ok(res)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub triple: [String; 3],
    /// Nonzero residuals as `(target, polynomial in ∂, λ, μ)`.
    pub residual: Vec<(String, ParamPoly)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JacobiReport {
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<JacobiViolation>,
    /// Whether skew-symmetry held; sorted triples only suffice when it does.
    pub skew_ok: bool,
}

impl JacobiReport {
    /// Jacobi holds on every decidable sorted triple and skew-symmetry
    /// held, so the sorted triples cover all permutations.
    pub fn certified(&self) -> bool {
        self.skew_ok && self.violations.is_empty()
    }
}

/// Runs [`jacobi_residual`] over all triples `u ≤ v ≤ w` in generator order.
pub fn check_jacobi(alg: &ConformalAlgebra, exec: Execution) -> JacobiReport {
    let skew_ok = check_skew(alg).passed();
    let n = alg.len();
    let mut triples = Vec::new();
    for u in 0..n {
        for v in u..n {
            for w in v..n {
                triples.push([u, v, w]);
            }
        }
    }
    let outcomes = exec.map(&triples, |&[u, v, w]| jacobi_residual(alg, u, v, w).ok());
    let mut report = JacobiReport {
        skew_ok,
        ..JacobiReport::default()
    };
    let mut found = Vec::new();
    for (t, out) in triples.iter().zip(outcomes) {
        let Some(res) = out else {
            report.skipped += 1;
            continue;
        };
        report.checked += 1;
        let nonzero: Vec<(usize, ParamPoly)> =
            res.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        if !nonzero.is_empty() {
            found.push((alg.key(t), *t, nonzero));
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    report.violations = found
        .into_iter()
        .map(|(_, t, nonzero)| JacobiViolation {
            triple: t.map(|i| alg.generator(i).name.clone()),
            residual: nonzero
                .into_iter()
                .map(|(r, p)| (alg.generator(r).name.clone(), p))
                .collect(),
        })
        .collect();
    report
}
