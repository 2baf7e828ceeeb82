//! Tensor calculus on a single formal coordinate patch.
//!
//! Components are [`GradedExpr`] values built from coordinates and formal
//! component symbols. Forms and multivectors store increasing index tuples
//! only; every other component follows by sign.

mod arrays;
mod brackets;
mod literal;
mod ops;

pub use arrays::{
    combinations, sort_alternating, AntisymArray, Connection, Multivector, PForm, SymTensor2, VectorField,
};
pub use brackets::{
    courant_p, dh_ext, dh_sym, dorfman, dorfman_ext, dorfman_p, pairing_ext, pairing_p, pairing_sym, sym_bracket,
    GeneralizedSection, ScalarBlock, VBeta, VBetaGamma, VGammaR, VOmega,
};
pub use literal::{format_polynomial, parse_polynomial, LiteralError};
pub use ops::{
    apply_vector, covariant_loop_accel, covariant_one_form, covariant_vector, exterior_d, interior, interior_sym,
    lie_bracket, lie_derivative, lie_derivative_sym, schouten, sym_covariant,
};

use thiserror::Error;

use crate::expr::{Coeff, GradedExpr};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("form degree mismatch: expected {0}, found {1}")]
    DegreeMismatch(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u8, u8),
    #[error("cannot contract a function")]
    ContractFunction,
}

/// Module operations over functions shared by all tensor-valued objects.
pub trait Linear: Clone {
    fn plus(&self, other: &Self) -> Self;
    fn scaled(&self, c: Coeff) -> Self;
    fn times(&self, f: &GradedExpr) -> Self;
    fn vanishes(&self) -> bool;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(-Coeff::one()))
    }
}

macro_rules! linear_array {
    ($t:ty) => {
        impl Linear for $t {
            fn plus(&self, other: &Self) -> Self {
                self.zip_with(other, |a, b| a + b)
            }
            fn scaled(&self, c: Coeff) -> Self {
                self.map(|a| a.scale(c))
            }
            fn times(&self, f: &GradedExpr) -> Self {
                self.map(|a| f * a)
            }
            fn vanishes(&self) -> bool {
                self.is_zero()
            }
        }
    };
}

linear_array!(VectorField);
linear_array!(PForm);
linear_array!(Multivector);
linear_array!(SymTensor2);

impl Linear for GradedExpr {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn scaled(&self, c: Coeff) -> Self {
        self.scale(c)
    }
    fn times(&self, f: &GradedExpr) -> Self {
        f * self
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

macro_rules! linear_struct {
    ($t:ident { $($f:ident),* }) => {
        impl Linear for $t {
            fn plus(&self, other: &Self) -> Self {
                $t { $($f: self.$f.plus(&other.$f)),* }
            }
            fn scaled(&self, c: Coeff) -> Self {
                $t { $($f: self.$f.scaled(c)),* }
            }
            fn times(&self, g: &GradedExpr) -> Self {
                $t { $($f: self.$f.times(g)),* }
            }
            fn vanishes(&self) -> bool {
                true $(&& self.$f.vanishes())*
            }
        }
    };
}

linear_struct!(VOmega { v, omega });
linear_struct!(VBeta { v, beta });
linear_struct!(VBetaGamma { v, beta, gamma });
linear_struct!(VGammaR { v, gamma, r });

impl<A: Linear, B: Linear> Linear for (A, B) {
    fn plus(&self, o: &Self) -> Self {
        (self.0.plus(&o.0), self.1.plus(&o.1))
    }
    fn scaled(&self, c: Coeff) -> Self {
        (self.0.scaled(c), self.1.scaled(c))
    }
    fn times(&self, f: &GradedExpr) -> Self {
        (self.0.times(f), self.1.times(f))
    }
    fn vanishes(&self) -> bool {
        self.0.vanishes() && self.1.vanishes()
    }
}
