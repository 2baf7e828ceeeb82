//! Exact arithmetic for Grassmann-graded differential polynomials.
//!
//! Generators are σ-jets of the phase-space fields, formal component
//! symbols with formal partial derivatives, test-function components and
//! graded constants. Every [`GradedExpr`] is kept in a unique normal form, so
//! identities are checked by plain equality.

mod calculus;
mod coeff;
mod factor;
mod graded;
mod sexpr;

pub use calculus::{DeltaFactor, DeltaSlot, Patch, MAX_DIM, MIN_DIM};
pub use coeff::{parse_display as parse_coeff, Coeff, Rational};
pub use factor::{ComponentSymbol, ConstSym, Factor, FieldKind, Indices, JetVar, Parity, Symmetry, TestFn};
pub use graded::{ExprAcc, GradedExpr, Monomial};
pub use sexpr::{from_sexpr, to_sexpr};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("terms of different parity in one expression")]
    MixedParity,
    #[error("patch dimension {0} outside the supported range 2..=4")]
    Dimension(u8),
    #[error("unknown field {field}{index}")]
    UnknownField { field: &'static str, index: u8 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
