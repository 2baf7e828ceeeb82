//! Total derivative, partial derivatives, the Euler operator and delta reduction.

use super::coeff::Coeff;
use super::factor::{Factor, FieldKind, JetVar};
use super::graded::{ExprAcc, GradedExpr};
use super::ExprError;

/// Dimension of the formal coordinate patch.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Patch {
    dim: u8,
}

pub const MIN_DIM: u8 = 2;
pub const MAX_DIM: u8 = 4;

impl Patch {
    pub fn new(dim: u8) -> Result<Self, ExprError> {
        if !(MIN_DIM..=MAX_DIM).contains(&dim) {
            return Err(ExprError::Dimension(dim));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn indices(&self) -> impl Iterator<Item = u8> + Clone {
        1..=self.dim
    }

    /// Every field `(kind, index)` of the phase space.
    pub fn fields(&self) -> impl Iterator<Item = (FieldKind, u8)> + '_ {
        FieldKind::ALL.into_iter().flat_map(move |k| self.indices().map(move |i| (k, i)))
    }

    /// `∂/∂x^ν` of a function on the patch. Jets of positive order, test
    /// functions and constants are treated as independent of `x`.
    pub fn partial(&self, e: &GradedExpr, nu: u8) -> GradedExpr {
        even_derivation(e, |f| match f {
            Factor::Jet(j) if j.field == FieldKind::X && j.order == 0 && j.index == nu => {
                vec![(Coeff::one(), vec![])]
            }
            Factor::Sym(s) => vec![(Coeff::one(), vec![Factor::Sym(s.with_partial(nu))])],
            _ => vec![],
        })
    }

    /// Total σ-derivative. Component symbols obey the chain rule through `∂X^ν`.
    pub fn d_sigma(&self, e: &GradedExpr) -> GradedExpr {
        even_derivation(e, |f| match f {
            Factor::Jet(j) => vec![(Coeff::one(), vec![Factor::Jet(JetVar::new(j.field, j.index, j.order + 1))])],
            Factor::Test(t) => vec![(Coeff::one(), vec![Factor::Test(t.derived(1))])],
            Factor::Const(_) => vec![],
            Factor::Sym(s) => self
                .indices()
                .map(|nu| {
                    (Coeff::one(), vec![Factor::Sym(s.with_partial(nu)), Factor::Jet(JetVar::new(FieldKind::X, nu, 1))])
                })
                .collect(),
        })
    }

    pub fn d_sigma_n(&self, e: &GradedExpr, k: u32) -> GradedExpr {
        (0..k).fold(e.clone(), |acc, _| self.d_sigma(&acc))
    }

    /// Graded left derivative `∂/∂u` with respect to one jet coordinate.
    /// For `u = X^μ` of order 0 this includes the dependence of component symbols.
    pub fn diff_jet(&self, e: &GradedExpr, u: JetVar) -> GradedExpr {
        if u.field == FieldKind::X && u.order == 0 {
            return self.partial(e, u.index);
        }
        let target = Factor::Jet(u);
        e.map_linear(|m, acc, c| {
            for (i, f) in m.factors().iter().enumerate() {
                if *f == target {
                    let negative = u.parity().swaps_sign(m.parity_before(i));
                    acc.add(m.without(i), if negative { -c } else { c });
                }
            }
        })
    }

    /// Euler operator `Σ_k (-∂)^k ∂/∂(∂^k u)` with left derivatives.
    pub fn euler_derivative(&self, density: &GradedExpr, field: FieldKind, index: u8) -> Result<GradedExpr, ExprError> {
        if index == 0 || index > self.dim {
            return Err(ExprError::UnknownField { field: field.name(), index });
        }
        let max_order = density
            .factors()
            .filter_map(|f| match f {
                Factor::Jet(j) if j.field == field && j.index == index => Some(j.order),
                _ => None,
            })
            .max();
        let Some(max_order) = max_order else {
            // still depends on x^index through component symbols when field = X
            return Ok(if field == FieldKind::X { self.partial(density, index) } else { GradedExpr::zero() });
        };
        let mut acc = ExprAcc::new();
        for k in 0..=max_order {
            let d = self.diff_jet(density, JetVar::new(field, index, k));
            let dk = self.d_sigma_n(&d, k as u32);
            acc.add_expr(&dk, Coeff::sign(k % 2 == 1));
        }
        Ok(acc.finish())
    }

    /// Whether `a - b` is a total σ-derivative: all Euler derivatives vanish and
    /// there is no field-independent remainder.
    pub fn equal_mod_total_derivative(&self, a: &GradedExpr, b: &GradedExpr) -> bool {
        let diff = a - b;
        debug_assert!(!diff.factors().any(|f| matches!(f, Factor::Test(_))));
        let constant = diff.filter(|m| !m.factors().iter().any(|f| matches!(f, Factor::Jet(_) | Factor::Sym(_))));
        if !constant.is_zero() {
            return false;
        }
        self.fields().all(|(k, i)| self.euler_derivative(&diff, k, i).map(|e| e.is_zero()).unwrap_or(false))
    }
}

/// Applies an even derivation given by its action on single generators.
pub(crate) fn even_derivation<F>(e: &GradedExpr, rule: F) -> GradedExpr
where
    F: Fn(&Factor) -> Vec<(Coeff, Vec<Factor>)>,
{
    e.map_linear(|m, acc, c| {
        for (i, f) in m.factors().iter().enumerate() {
            for (k, with) in rule(f) {
                if let Some((neg, out)) = m.replace(i, &with) {
                    let kc = k * c;
                    acc.add(out, if neg { -kc } else { kc });
                }
            }
        }
    })
}

/// Which integration variable the delta derivatives act on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DeltaSlot {
    /// `∂^k_σ δ(σ - σ')`, σ being the variable of the left factor.
    Left,
    /// `∂^k_{σ'} δ(σ' - σ)`, σ' being the variable of the right factor.
    Right,
}

/// A derivative of the delta distribution between two integration variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DeltaFactor {
    pub order: u32,
    pub slot: DeltaSlot,
}

impl DeltaFactor {
    /// Evaluates `∫dσ dσ' f(σ) g(σ') δ⁽ᵏ⁾` as a single-integral density by
    /// integrating the derivatives by parts onto the factor in the same slot.
    pub fn reduce(&self, patch: &Patch, left: &GradedExpr, right: &GradedExpr) -> GradedExpr {
        let sign = Coeff::sign(self.order % 2 == 1);
        match self.slot {
            DeltaSlot::Left => patch.d_sigma_n(left, self.order).mul(right).scale(sign),
            DeltaSlot::Right => left.mul(&patch.d_sigma_n(right, self.order)).scale(sign),
        }
    }
}
