//! JSON spec files: an algebra (generators and λ-brackets), optionally a
//! Novikov product for GD input, and optionally a graded submodule pattern.

use std::collections::{BTreeMap, BTreeSet};

use lca_core::gd::{BasisElem, GDAlgebra, LieStructure, NovikovAlgebra, StructureTable};
use lca_core::ideal::{Component, GradedSubmodule};
use lca_core::{parse_poly, ConformalAlgebra, Generator, ParamPoly};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub generators: Vec<RawGenerator>,
    #[serde(default)]
    pub brackets: Vec<RawEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub product: Vec<RawEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undecidable: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub submodule: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGenerator {
    pub name: String,
    pub grade: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEntry {
    pub left: String,
    pub right: String,
    pub terms: Vec<RawTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTerm {
    pub target: String,
    pub poly: String,
}

/// 1-based line and column in the spec text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

fn at(pos: &Option<Position>) -> String {
    pos.map_or(String::new(), |p| format!("{p}: "))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("{}{message}", at(.position))]
    Parse {
        position: Option<Position>,
        message: String,
    },
    #[error("{}undeclared name `{name}`", at(.position))]
    UndeclaredName {
        position: Option<Position>,
        name: String,
    },
    #[error("{}[{left} {right}] has grade {expected} but targets {target} of grade {found}", at(.position))]
    GradeMismatch {
        position: Option<Position>,
        left: String,
        right: String,
        target: String,
        expected: i64,
        found: i64,
    },
    #[error("{0}")]
    Invalid(String),
}

/// Positions of entries in the raw text, found by counting occurrences of a
/// key after its section key.
struct Locator<'a> {
    text: &'a str,
}

impl Locator<'_> {
    fn position(&self, offset: usize) -> Position {
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(offset, |i| offset - i - 1) + 1;
        Position { line, column }
    }

    /// Offset of the string value following the `n`-th `"key"` after
    /// `"section"`.
    fn value(&self, section: &str, key: &str, n: usize) -> Option<usize> {
        let start = self.text.find(&format!("\"{section}\""))?;
        let needle = format!("\"{key}\"");
        let mut from = start;
        for _ in 0..=n {
            from += self.text[from..].find(&needle)? + needle.len();
        }
        let colon = from + self.text[from..].find(':')?;
        let quote = colon + self.text[colon..].find('"')?;
        Some(quote)
    }

    fn at(&self, section: &str, key: &str, n: usize) -> Option<Position> {
        self.value(section, key, n).map(|o| self.position(o))
    }

    /// Position of column `col` (1-based) inside the string value.
    fn inside(&self, section: &str, key: &str, n: usize, col: usize) -> Option<Position> {
        self.value(section, key, n).map(|o| self.position(o + col))
    }
}

pub type Entries = Vec<(usize, usize, Vec<(usize, ParamPoly)>)>;

/// A validated spec file.
#[derive(Clone, Debug)]
pub struct SpecFile {
    pub raw: RawSpec,
    pub brackets: Entries,
    pub product: Entries,
    pub undecidable: Vec<(usize, usize)>,
}

pub fn parse_spec(text: &str) -> Result<SpecFile, SpecError> {
    let loc = Locator { text };
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| SpecError::Parse {
        position: Some(Position {
            line: e.line(),
            column: e.column(),
        }),
        message: e.to_string(),
    })?;

    let mut index = BTreeMap::new();
    for (k, g) in raw.generators.iter().enumerate() {
        if index.insert(g.name.clone(), k).is_some() {
            return Err(SpecError::Invalid(format!(
                "duplicate generator `{}`",
                g.name
            )));
        }
    }
    let declared: BTreeSet<&String> = raw.params.iter().collect();
    let lookup = |name: &str, key: &str, section: &str, n: usize| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| SpecError::UndeclaredName {
                position: loc.at(section, key, n),
                name: name.to_string(),
            })
    };

    let entries = |section: &str, list: &[RawEntry], graded: bool| -> Result<Entries, SpecError> {
        let mut out: Entries = Vec::new();
        let mut seen = BTreeSet::new();
        let mut term_no = 0;
        for (n, e) in list.iter().enumerate() {
            let u = lookup(&e.left, "left", section, n)?;
            let v = lookup(&e.right, "right", section, n)?;
            if !seen.insert((u, v)) {
                return Err(SpecError::Invalid(format!(
                    "{section}: pair ({}, {}) listed twice",
                    e.left, e.right
                )));
            }
            let mut terms = Vec::new();
            for t in &e.terms {
                let w = lookup(&t.target, "target", section, term_no)?;
                let p = parse_poly(&t.poly).map_err(|err| SpecError::Parse {
                    position: loc.inside(section, "poly", term_no, err.column),
                    message: format!("in `{}`: {}", t.poly, err.message),
                })?;
                if let Some(name) = p.params().into_iter().find(|x| !declared.contains(x)) {
                    return Err(SpecError::UndeclaredName {
                        position: loc.at(section, "poly", term_no),
                        name,
                    });
                }
                let gens = &raw.generators;
                if graded && gens[u].grade + gens[v].grade != gens[w].grade {
                    return Err(SpecError::GradeMismatch {
                        position: loc.at(section, "target", term_no),
                        left: e.left.clone(),
                        right: e.right.clone(),
                        target: t.target.clone(),
                        expected: gens[u].grade + gens[v].grade,
                        found: gens[w].grade,
                    });
                }
                terms.push((w, p));
                term_no += 1;
            }
            out.push((u, v, terms));
        }
        Ok(out)
    };

    let gd_mode = !raw.product.is_empty();
    let brackets = entries("brackets", &raw.brackets, !gd_mode)?;
    let product = entries("product", &raw.product, false)?;
    let mut undecidable = Vec::new();
    for (n, [l, r]) in raw.undecidable.iter().enumerate() {
        let u = index.get(l).copied();
        let v = index.get(r).copied();
        match (u, v) {
            (Some(u), Some(v)) => undecidable.push((u, v)),
            _ => {
                return Err(SpecError::UndeclaredName {
                    position: None,
                    name: format!("undecidable[{n}]: {l}, {r}"),
                })
            }
        }
    }
    for (grade, text) in &raw.submodule {
        grade.parse::<i64>().map_err(|_| {
            SpecError::Invalid(format!("submodule grade `{grade}` is not an integer"))
        })?;
        if !matches!(text.as_str(), "full" | "zero") {
            let p = parse_poly(text).map_err(|err| SpecError::Parse {
                position: None,
                message: format!("submodule grade {grade}: in `{text}`: {err}"),
            })?;
            if Component::principal(&p).is_none() {
                return Err(SpecError::Invalid(format!(
                    "submodule grade {grade}: `{text}` must be a polynomial in d with rational leading coefficient"
                )));
            }
        }
    }
    Ok(SpecFile {
        raw,
        brackets,
        product,
        undecidable,
    })
}

impl SpecFile {
    pub fn algebra(&self) -> Result<ConformalAlgebra, SpecError> {
        let gens = self
            .raw
            .generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), g.grade))
            .collect();
        let mut alg = ConformalAlgebra::new(self.raw.params.iter().cloned(), gens)
            .map_err(|e| SpecError::Invalid(e.to_string()))?;
        for (u, v, terms) in &self.brackets {
            alg.set_bracket(*u, *v, terms.clone())
                .map_err(|e| SpecError::Invalid(e.to_string()))?;
        }
        Ok(alg)
    }

    fn table(&self, entries: &Entries) -> Result<StructureTable, SpecError> {
        let basis = self
            .raw
            .generators
            .iter()
            .map(|g| BasisElem::new(g.name.clone(), g.grade))
            .collect();
        let mut t = StructureTable::new(basis).map_err(|e| SpecError::Invalid(e.to_string()))?;
        for (u, v, terms) in entries {
            t.set_terms(*u, *v, terms.clone())
                .map_err(|e| SpecError::Invalid(e.to_string()))?;
        }
        for (u, v) in &self.undecidable {
            t.mark_undecidable(*u, *v);
        }
        Ok(t)
    }

    /// The product table; absent entries are zero.
    pub fn novikov(&self) -> Result<NovikovAlgebra, SpecError> {
        Ok(NovikovAlgebra::from_table(self.table(&self.product)?))
    }

    pub fn lie(&self) -> Result<LieStructure, SpecError> {
        Ok(LieStructure::from_table(self.table(&self.brackets)?))
    }

    pub fn gd(&self) -> Result<GDAlgebra, SpecError> {
        GDAlgebra::new(self.novikov()?, self.lie()?).map_err(|e| SpecError::Invalid(e.to_string()))
    }

    /// Listed grades; everything else is zero.
    pub fn submodule(&self) -> GradedSubmodule {
        let mut sub = GradedSubmodule::zero();
        for (grade, text) in &self.raw.submodule {
            let g: i64 = grade.parse().expect("validated");
            let c = match text.as_str() {
                "full" => Component::Full,
                "zero" => Component::Zero,
                poly => {
                    Component::principal(&parse_poly(poly).expect("validated")).expect("validated")
                }
            };
            sub.set(g, c);
        }
        sub
    }
}

fn entry_list(
    names: &[String],
    entries: impl Iterator<Item = (usize, usize, Vec<(usize, ParamPoly)>)>,
) -> Vec<RawEntry> {
    entries
        .map(|(u, v, terms)| RawEntry {
            left: names[u].clone(),
            right: names[v].clone(),
            terms: terms
                .into_iter()
                .map(|(w, p)| RawTerm {
                    target: names[w].clone(),
                    poly: p.to_string(),
                })
                .collect(),
        })
        .collect()
}

pub fn from_algebra(alg: &ConformalAlgebra) -> RawSpec {
    let names: Vec<String> = alg.generators().iter().map(|g| g.name.clone()).collect();
    RawSpec {
        params: alg.params().iter().cloned().collect(),
        generators: alg
            .generators()
            .iter()
            .map(|g| RawGenerator {
                name: g.name.clone(),
                grade: g.grade,
            })
            .collect(),
        brackets: entry_list(&names, alg.entries().map(|(u, v, t)| (u, v, t.to_vec()))),
        ..RawSpec::default()
    }
}

pub fn from_gd(g: &GDAlgebra) -> RawSpec {
    let (n, l) = (g.nov.table(), g.lie.table());
    let names: Vec<String> = g.basis().iter().map(|b| b.name.clone()).collect();
    let params: BTreeSet<String> = n.params().into_iter().chain(l.params()).collect();
    let undecidable: BTreeSet<(usize, usize)> = n
        .undecidable()
        .iter()
        .chain(l.undecidable())
        .copied()
        .collect();
    RawSpec {
        params: params.into_iter().collect(),
        generators: g
            .basis()
            .iter()
            .map(|b| RawGenerator {
                name: b.name.clone(),
                grade: b.grade,
            })
            .collect(),
        brackets: entry_list(&names, l.entries().map(|(u, v, t)| (u, v, t.to_vec()))),
        product: entry_list(&names, n.entries().map(|(u, v, t)| (u, v, t.to_vec()))),
        undecidable: undecidable
            .into_iter()
            .map(|(u, v)| [names[u].clone(), names[v].clone()])
            .collect(),
        submodule: BTreeMap::new(),
    }
}

pub fn to_json(raw: &RawSpec) -> String {
    let mut s = serde_json::to_string_pretty(raw).expect("spec serializes");
    s.push('\n');
    s
}
