//! `lca`: verification commands over JSON spec files.
//!
//! Exit codes: 0 pass, 1 violations found, 2 input error.

pub mod report;
pub mod specfile;

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lca_core::conformal::{
    check_jacobi, check_skew, classify_support, degree_relation_check, spectral_data, Relation,
};
use lca_core::families::{FamilyError, FamilyKind, FamilySpec};
use lca_core::feq::{self, SolverMode, SpectralTriple, TargetWeight};
use lca_core::gd::{self, GdError, IdentityReport};
use lca_core::ideal::{is_graded_ideal, simplicity_probe, IdealError};
use lca_core::{parse_poly, Bindings, ConformalAlgebra, Execution, ParamPoly, Scalar};
use serde::Serialize;
use thiserror::Error;

use report::{Report, Violation};
use specfile::{from_algebra, from_gd, parse_spec, to_json, SpecError, SpecFile};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_VIOLATIONS: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "lca",
    version,
    about = "Exact checks for graded Lie conformal algebras"
)]
pub struct Cli {
    /// Run checks on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Skew-symmetry, Jacobi, and (with all parameters bound) spectral
    /// diagnostics.
    Verify {
        file: PathBuf,
        #[arg(long = "bind", value_parser = parse_binding)]
        bind: Vec<(String, Scalar)>,
    },
    /// Emit the spec file of a family.
    Family(Box<FamilyArgs>),
    /// Solve the coefficient functional equation.
    SolveFeq(Box<FeqArgs>),
    /// Gel'fand-Dorfman algebras.
    Gd {
        #[command(subcommand)]
        command: GdCommand,
    },
    /// Check that a submodule pattern is a graded ideal.
    IdealCheck {
        file: PathBuf,
        /// Spec file holding the `submodule` pattern; defaults to FILE.
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long = "bind", value_parser = parse_binding)]
        bind: Vec<(String, Scalar)>,
    },
    /// Close each core generator and report proper closures.
    Probe {
        file: PathBuf,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        core: RangeInclusive<i64>,
        #[arg(long = "bind", value_parser = parse_binding)]
        bind: Vec<(String, Scalar)>,
    },
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(value_parser = parse_kind)]
    pub kind: FamilyKind,
    #[arg(long, value_parser = parse_param, allow_hyphen_values = true)]
    pub s: Option<ParamPoly>,
    #[arg(long, value_parser = parse_param, allow_hyphen_values = true)]
    pub b: Option<ParamPoly>,
    /// Top grade of CL1.
    #[arg(long = "N", alias = "n")]
    pub n: Option<i64>,
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<RangeInclusive<i64>>,
    /// Spec file with the Lie brackets of Cur.
    #[arg(long)]
    pub lie: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FeqArgs {
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub ai: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub bi: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub aj: Option<Scalar>,
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub bj: Option<Scalar>,
    /// Defaults to a_i + a_j - k - 1 with `--top k`.
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub aij: Option<Scalar>,
    /// Defaults to b_i + b_j.
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub bij: Option<Scalar>,
    #[arg(long, conflicts_with_all = ["top", "tables"])]
    pub full: Option<u32>,
    #[arg(long, conflicts_with = "tables")]
    pub top: Option<u32>,
    #[arg(long)]
    pub tables: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GdFamily {
    A1,
    A2,
    A3,
}

#[derive(Debug, Subcommand)]
pub enum GdCommand {
    /// Novikov, Lie and compatibility identities.
    Check { file: PathBuf },
    /// The quadratic conformal algebra of a GD spec.
    ToLca {
        file: PathBuf,
        /// Use the bracket s(i-j)L_{i+j} instead of the file's brackets.
        #[arg(long, value_parser = parse_param, allow_hyphen_values = true)]
        s: Option<ParamPoly>,
    },
    /// Recover the GD algebra of a quadratic conformal algebra.
    FromLca { file: PathBuf },
    /// Emit a Novikov family, with the s-bracket if `--s` is given.
    Family {
        #[arg(ignore_case = true)]
        kind: GdFamily,
        #[arg(long = "N", alias = "n", default_value_t = 6)]
        n: i64,
        #[arg(long, value_parser = parse_param, allow_hyphen_values = true)]
        b: Option<ParamPoly>,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<RangeInclusive<i64>>,
        /// Top second index of A3.
        #[arg(long, default_value_t = 2)]
        m: i64,
        #[arg(long, value_parser = parse_param, allow_hyphen_values = true)]
        s: Option<ParamPoly>,
    },
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    s.parse::<Scalar>().map_err(|e| e.to_string())
}

fn parse_param(s: &str) -> Result<ParamPoly, String> {
    parse_poly(s).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<FamilyKind, String> {
    s.parse()
}

fn parse_binding(s: &str) -> Result<(String, Scalar), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    Ok((name.trim().to_string(), parse_scalar(value.trim())?))
}

fn parse_window(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LOW..HIGH, got `{s}`"))?;
    let lo: i64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad window start `{a}`"))?;
    let hi: i64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad window end `{b}`"))?;
    if lo > hi {
        return Err(format!("empty window `{s}`"));
    }
    Ok(lo..=hi)
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Spec {
        path: String,
        source: Box<SpecError>,
    },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Gd(#[from] GdError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Feq(#[from] feq::FeqError),
    #[error("{0}")]
    Usage(String),
}

fn load(path: &Path) -> Result<SpecFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_spec(&text).map_err(|source| CliError::Spec {
        path: path.display().to_string(),
        source: Box::new(source),
    })
}

fn spec_err(path: &Path) -> impl Fn(SpecError) -> CliError + '_ {
    move |source| CliError::Spec {
        path: path.display().to_string(),
        source: Box::new(source),
    }
}

/// What a command prints and which exit code it returns.
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn report(r: &Report) -> Self {
        Output {
            text: r.to_json(),
            code: r.exit_code(),
        }
    }

    fn json<T: Serialize>(value: &T, code: u8) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("output serializes");
        text.push('\n');
        Output { text, code }
    }
}

fn bindings(pairs: &[(String, Scalar)]) -> Bindings {
    pairs.iter().cloned().collect()
}

fn echo(args: &[OsString]) -> String {
    args.iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .filter(|a| a != "--sequential")
        .collect::<Vec<_>>()
        .join(" ")
}

fn verify(alg: &ConformalAlgebra, bind: &Bindings, exec: Execution, report: &mut Report) {
    let skew = check_skew(alg);
    let skew_v = skew
        .violations
        .iter()
        .map(|v| {
            Violation::new("skew", format!("[{} {}]", v.left, v.right))
                .residual(&v.target, &v.residual)
        })
        .collect();
    report.diagnostic("skew", skew.checked, skew.skipped, vec![], skew_v);

    let jac = check_jacobi(alg, exec);
    let notes = if jac.skew_ok {
        vec![]
    } else {
        vec!["skew-symmetry failed; only sorted triples were checked".to_string()]
    };
    let jac_v = jac
        .violations
        .iter()
        .map(|v| {
            v.residual.iter().fold(
                Violation::new("jacobi", format!("({})", v.triple.join(", "))),
                |acc, (t, p)| acc.residual(t, p),
            )
        })
        .collect();
    report.section("jacobi", jac.checked, jac.skipped, notes, jac_v);

    let unbound: Vec<&String> = alg
        .params()
        .iter()
        .filter(|p| !bind.contains_key(*p))
        .collect();
    if !unbound.is_empty() {
        let names: Vec<&str> = unbound.iter().map(|s| s.as_str()).collect();
        report.diagnostic(
            "spectral",
            0,
            0,
            vec![format!(
                "bind {} for spectral diagnostics",
                names.join(", ")
            )],
            vec![],
        );
        return;
    }
    let sp = match spectral_data(alg, bind) {
        Ok(sp) => sp,
        Err(e) => {
            report.diagnostic("spectral", 0, 0, vec![format!("not computed: {e}")], vec![]);
            return;
        }
    };
    let mut notes: Vec<String> = sp
        .entries
        .iter()
        .map(|(g, e)| format!("grade {g}: c={} a={} b={}", e.c, e.a, e.b))
        .collect();
    if !sp.uniform_c {
        notes.push("c differs between grades".into());
    }
    report.diagnostic("spectral", 0, 0, notes, vec![]);

    match degree_relation_check(alg, &sp, bind) {
        Ok(deg) => {
            let v = deg
                .violations
                .iter()
                .map(|v| {
                    let rel = match v.relation {
                        Relation::Degree => "a_i + a_j - a_ij - deg - 1",
                        Relation::Shift => "b_i + b_j - b_ij",
                    };
                    Violation::new("degree", format!("({}, {})", v.left, v.right))
                        .residual(rel, &v.defect)
                })
                .collect();
            report.diagnostic("degree", deg.checked, 0, vec![], v);
        }
        Err(e) => report.diagnostic("degree", 0, 0, vec![format!("not computed: {e}")], vec![]),
    }
    if let Ok(sup) = classify_support(alg, bind) {
        let fmt = |s: &std::collections::BTreeSet<i64>| {
            s.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut notes = vec![
            format!("I0: [{}]", fmt(&sup.i0)),
            format!("I1: [{}]", fmt(&sup.i1)),
            format!("I2: [{}]", fmt(&sup.i2)),
        ];
        if !sup.unclassified.is_empty() {
            notes.push(format!("unclassified: [{}]", fmt(&sup.unclassified)));
        }
        report.diagnostic("support", 0, 0, notes, vec![]);
    }
}

fn identity_section(report: &mut Report, name: &str, r: &IdentityReport) {
    let v = r
        .violations
        .iter()
        .map(|v| {
            v.residual.iter().fold(
                Violation::new(name, format!("{}({})", v.identity, v.args.join(", "))),
                |acc, (t, p)| acc.residual(t, p),
            )
        })
        .collect();
    report.section(name, r.checked, r.skipped, vec![], v);
}

#[derive(Serialize)]
struct FeqOutput {
    dimension: usize,
    basis: Vec<String>,
    echelon_hash: String,
}

#[derive(Serialize)]
struct TableCaseOut {
    label: &'static str,
    a_i: String,
    a_j: String,
    a_ij: String,
    k: u32,
    expected: Option<String>,
    found: Vec<String>,
    passed: bool,
}

#[derive(Serialize)]
struct TableOut {
    table: String,
    cases: Vec<TableCaseOut>,
}

#[derive(Serialize)]
struct TablesOutput {
    status: report::Status,
    tables: Vec<TableOut>,
    version: &'static str,
}

fn solve_feq(a: &FeqArgs) -> Result<Output, CliError> {
    if a.tables {
        let mut all = true;
        let tables = [TargetWeight::Nonzero, TargetWeight::Zero]
            .into_iter()
            .map(|w| {
                let r = feq::reproduce_table(w);
                all &= r.passed();
                TableOut {
                    table: w.to_string(),
                    cases: r
                        .outcomes
                        .iter()
                        .map(|o| TableCaseOut {
                            label: o.case.label,
                            a_i: o.case.ai.to_string(),
                            a_j: o.case.aj.to_string(),
                            a_ij: o.case.aij.to_string(),
                            k: o.case.k,
                            expected: o.case.expected.as_ref().map(ToString::to_string),
                            found: o.found.iter().map(ToString::to_string).collect(),
                            passed: o.passed,
                        })
                        .collect(),
                }
            })
            .collect();
        let status = if all {
            report::Status::Pass
        } else {
            report::Status::Fail
        };
        let out = TablesOutput {
            status,
            tables,
            version: env!("CARGO_PKG_VERSION"),
        };
        return Ok(Output::json(
            &out,
            if all { EXIT_PASS } else { EXIT_VIOLATIONS },
        ));
    }
    let need = |v: &Option<Scalar>, name: &str| {
        v.clone()
            .ok_or_else(|| CliError::Usage(format!("--{name} is required")))
    };
    let ai = need(&a.ai, "ai")?;
    let aj = need(&a.aj, "aj")?;
    let bi = a.bi.clone().unwrap_or_else(Scalar::zero);
    let bj = a.bj.clone().unwrap_or_else(Scalar::zero);
    let bij = a.bij.clone().unwrap_or_else(|| &bi + &bj);
    let (mode, aij) = match (a.full, a.top) {
        (Some(d), None) => (SolverMode::Full(d), need(&a.aij, "aij")?),
        (None, Some(k)) => {
            let aij = a
                .aij
                .clone()
                .unwrap_or_else(|| &ai + &aj - Scalar::from_int(i64::from(k) + 1));
            (SolverMode::Homogeneous(k), aij)
        }
        _ => {
            return Err(CliError::Usage(
                "give one of --full D, --top K or --tables".into(),
            ))
        }
    };
    let sol = feq::solve_feq(&SpectralTriple::new(ai, bi, aj, bj, aij, bij), mode)?;
    Ok(Output::json(
        &FeqOutput {
            dimension: sol.dimension(),
            basis: sol.basis.iter().map(ToString::to_string).collect(),
            echelon_hash: sol.echelon_hash(),
        },
        EXIT_PASS,
    ))
}

fn family(a: &FamilyArgs) -> Result<Output, CliError> {
    let mut spec = FamilySpec::new(a.kind);
    if let Some(s) = &a.s {
        spec.s = s.clone();
    }
    if let Some(b) = &a.b {
        spec.b = b.clone();
    }
    if let Some(n) = a.n {
        spec.n = n;
    }
    if let Some(w) = &a.window {
        spec.window = w.clone();
    }
    if let Some(path) = &a.lie {
        spec.lie = Some(load(path)?.lie().map_err(spec_err(path))?);
    }
    let alg = spec.build()?;
    Ok(Output {
        text: to_json(&from_algebra(&alg)),
        code: EXIT_PASS,
    })
}

fn gd_command(cmd: &GdCommand, command: String) -> Result<Output, CliError> {
    match cmd {
        GdCommand::Check { file } => {
            let g = load(file)?.gd().map_err(spec_err(file))?;
            let mut r = Report::new(command);
            identity_section(&mut r, "novikov", &gd::check_novikov(&g.nov));
            identity_section(&mut r, "lie", &gd::check_lie(&g.lie));
            identity_section(&mut r, "compatibility", &gd::check_gd(&g));
            Ok(Output::report(&r))
        }
        GdCommand::ToLca { file, s } => {
            let spec = load(file)?;
            let nov = spec.novikov().map_err(spec_err(file))?;
            let lie = match s {
                Some(s) => gd::s_bracket(&nov, s),
                None => spec.lie().map_err(spec_err(file))?,
            };
            let alg = gd::quadratic_from_gd(&gd::GDAlgebra::new(nov, lie)?)?;
            Ok(Output {
                text: to_json(&from_algebra(&alg)),
                code: EXIT_PASS,
            })
        }
        GdCommand::FromLca { file } => {
            let alg = load(file)?.algebra().map_err(spec_err(file))?;
            let g = gd::gd_from_quadratic(&alg)?;
            Ok(Output {
                text: to_json(&from_gd(&g)),
                code: EXIT_PASS,
            })
        }
        GdCommand::Family {
            kind,
            n,
            b,
            window,
            m,
            s,
        } => {
            let b = b.clone().unwrap_or_else(|| ParamPoly::param("b"));
            let window = window.clone().unwrap_or(-6..=6);
            let nov = match kind {
                GdFamily::A1 => gd::make_a1(*n),
                GdFamily::A2 => gd::make_a2(&b, window),
                GdFamily::A3 => gd::make_a3(&b, window, *m),
            };
            let lie = match s {
                Some(s) => gd::s_bracket(&nov, s),
                None => gd::LieStructure::from_table(
                    gd::StructureTable::new(nov.table().basis().to_vec())
                        .expect("basis already validated"),
                ),
            };
            let mut g = gd::GDAlgebra::new(nov, lie)?;
            if s.is_none() {
                // Zero bracket shares the product's truncation.
                let mut t = g.lie.table().clone();
                for (u, v) in g.nov.table().undecidable().clone() {
                    t.mark_undecidable(u, v);
                }
                g.lie = gd::LieStructure::from_table(t);
            }
            Ok(Output {
                text: to_json(&from_gd(&g)),
                code: EXIT_PASS,
            })
        }
    }
}

fn dispatch(cli: &Cli, command: String) -> Result<Output, CliError> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Verify { file, bind } => {
            let alg = load(file)?.algebra().map_err(spec_err(file))?;
            let mut r = Report::new(command);
            verify(&alg, &bindings(bind), exec, &mut r);
            Ok(Output::report(&r))
        }
        Command::Family(a) => family(a),
        Command::SolveFeq(a) => solve_feq(a),
        Command::Gd { command: c } => gd_command(c, command),
        Command::IdealCheck {
            file,
            pattern,
            bind,
        } => {
            let spec = load(file)?;
            let alg = spec
                .algebra()
                .map_err(spec_err(file))?
                .instantiate(&bindings(bind));
            let sub = match pattern {
                Some(p) => load(p)?.submodule(),
                None => spec.submodule(),
            };
            let res = is_graded_ideal(&alg, &sub, exec)?;
            let v = res
                .witnesses
                .iter()
                .map(|w| {
                    Violation::new("ideal", format!("[{} {}]", w.ambient, w.member))
                        .residual(&w.target, &w.residual)
                })
                .collect();
            let mut r = Report::new(command);
            let verdict = if res.closed { "closed" } else { "not closed" };
            let notes = vec![verdict.to_string(), format!("pattern {sub}")];
            r.section("ideal", res.checked, res.skipped, notes, v);
            Ok(Output::report(&r))
        }
        Command::Probe { file, core, bind } => {
            let alg = load(file)?.algebra().map_err(spec_err(file))?;
            let probe = simplicity_probe(&alg, core.clone(), &bindings(bind), exec)?;
            let mut notes = vec!["evidence at truncation, not a proof".to_string()];
            let mut v = Vec::new();
            for o in &probe.seeds {
                notes.push(format!("seed {}: {}", o.seed, o.closure.submodule));
                if !o.closure.converged {
                    notes.push(format!("seed {}: iteration limit reached", o.seed));
                }
                if !o.deficient.is_empty() {
                    v.push(o.deficient.iter().fold(
                        Violation::new("probe", format!("seed {}", o.seed)),
                        |acc, (g, c)| acc.residual(format!("grade {g}"), c),
                    ));
                }
            }
            let mut r = Report::new(command);
            r.section("probe", probe.seeds.len(), 0, notes, v);
            Ok(Output::report(&r))
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the exit code.
pub fn run(args: Vec<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, echo(&args)) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "lca: {e}");
            EXIT_INPUT
        }
    }
}
