//! Local currents on the super loop space, their Poisson brackets and
//! the reproduction of the bracket identities.

pub mod bracket;
pub mod canonical;
pub mod current;
pub mod input;
pub mod integrand;
pub mod reproduce;
pub mod superfield;

use thiserror::Error;

use crate::expr::{ExprError, Parity};
use crate::tensor::TensorError;

pub use bracket::{poisson_bracket, poisson_bracket_densities, right_derivative, CanonicalBrackets};
pub use canonical::{canonical_form, decompose, entries, extract_pairing, Decomposition, EntryKey};
pub use current::{
    build_current, form_ddphi, form_dphi, smeared, CurrentData, Family, GenericData, GenericTerm, LocalCurrent,
    CONSTANT_E,
};
pub use input::{current_spec_to_toml, parse_current_spec, CurrentSpec, InputError};
pub use integrand::{check_integrand_cd, IntegrandAlgebra, IntegrandCheck, IntegrandReport};
pub use reproduce::{
    calibrate, formal_pair, reproduce, reproduce_with, sym_anomaly, Calibration, ConnectionMode, ReproduceConfig,
    ReproduceReport, Status, TARGETS,
};
pub use superfield::{Superfield, TestMode};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LoopError {
    #[error("{what}: expected {expected:?} parity, found {found:?}")]
    Parity { what: &'static str, expected: Parity, found: Parity },
    #[error("degree: {0}")]
    Degree(String),
    #[error("not polynomial in the test functions: {0}")]
    NonPolynomial(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown target `{0}`")]
    UnknownTarget(String),
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}
