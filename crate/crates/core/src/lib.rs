//! Exact verification toolkit for Z-graded Lie conformal algebras.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalar`] and [`poly`]: rationals and multivariate polynomials in
//!   ∂ (`d`), λ (`x`), μ (`y`) and named parameters.
//! * [`conformal`]: free graded conformal algebras given by structure
//!   tables, λ-bracket evaluation and axiom checks.
//! * [`families`]: constructors for Vir, Cur g, V(s), CL₁(s), CL₂(b,s) and
//!   SCL₂(b,s).
//! * [`gd`]: Novikov, Lie and Gel'fand-Dorfman algebras and the
//!   correspondence with quadratic conformal algebras.
//! * [`feq`]: polynomial solutions of the coefficient functional equation.
//! * [`ideal`]: graded-ideal membership, closure and a simplicity probe.
//!
//! Independent checks fan out over rayon when the `parallel` feature is on
//! (the default); see [`Execution`].

pub mod conformal;
mod exec;
pub mod families;
pub mod feq;
pub mod gd;
pub mod ideal;
mod linalg;
pub mod poly;
pub mod scalar;

pub use conformal::{ConformalAlgebra, Element, Generator, LambdaElement};
pub use exec::Execution;
pub use poly::{parse_poly, Bindings, Degree, FormalVar, Monomial, ParamPoly, PolyError};
pub use scalar::Scalar;
