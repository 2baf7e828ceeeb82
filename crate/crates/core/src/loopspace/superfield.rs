//! Superfields `A₀ + θA₁` over one integration variable, stored component-wise.

use std::fmt;

use crate::expr::{Coeff, ConstSym, Factor, FieldKind, GradedExpr, Parity, Patch, TestFn};

/// `A = A₀ + θA₁` with `|A₀| = |A|` and `|A₁| = |A| + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Superfield {
    pub body: GradedExpr,
    pub soul: GradedExpr,
    pub parity: Parity,
}

/// Whether test functions carry a θ-component.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestMode {
    /// `ε = ε⁰ + θε¹` with both components independent.
    General,
    /// `ε¹ = 0`, so `∫dθ ε = 0`.
    Bosonic,
}

impl Superfield {
    pub fn new(body: GradedExpr, soul: GradedExpr, parity: Parity) -> Self {
        Self { body, soul, parity }
    }

    pub fn zero(parity: Parity) -> Self {
        Self::new(GradedExpr::zero(), GradedExpr::zero(), parity)
    }

    pub fn scalar(e: GradedExpr, parity: Parity) -> Self {
        Self::new(e, GradedExpr::zero(), parity)
    }

    pub fn one() -> Self {
        Self::scalar(GradedExpr::one(), Parity::Even)
    }

    /// `Φ^μ = X^μ + θλ^μ`.
    pub fn phi(mu: u8) -> Self {
        Self::new(GradedExpr::jet(FieldKind::X, mu, 0), GradedExpr::jet(FieldKind::Lambda, mu, 0), Parity::Even)
    }

    /// `S_μ = ρ_μ + iθp_μ`.
    pub fn s(mu: u8) -> Self {
        Self::new(
            GradedExpr::jet(FieldKind::Rho, mu, 0),
            GradedExpr::jet(FieldKind::P, mu, 0).scale(Coeff::i()),
            Parity::Odd,
        )
    }

    /// Test superfield `ε_id` of the given parity.
    pub fn test(id: u8, parity: Parity, mode: TestMode) -> Self {
        let body = GradedExpr::test(TestFn::new(id, 0, 0, parity));
        let soul = match mode {
            TestMode::General => GradedExpr::test(TestFn::new(id, 1, 0, parity)),
            TestMode::Bosonic => GradedExpr::zero(),
        };
        Self::new(body, soul, parity)
    }

    /// A graded constant such as `e`.
    pub fn constant(name: &str, parity: Parity) -> Self {
        Self::scalar(GradedExpr::factor(Factor::Const(ConstSym { name: name.into(), parity })), parity)
    }

    /// `f(Φ) = f(X) + θλ^ν∂_νf` for an even function on the patch.
    pub fn lift(patch: &Patch, f: &GradedExpr) -> Self {
        let mut soul = GradedExpr::zero();
        for nu in patch.indices() {
            soul += &(GradedExpr::jet(FieldKind::Lambda, nu, 0) * patch.partial(f, nu));
        }
        Self::new(f.clone(), soul, Parity::Even)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let cross = self.body.mul(&o.soul).scale(Coeff::sign(self.parity.is_odd()));
        Self::new(self.body.mul(&o.body), cross + self.soul.mul(&o.body), self.parity + o.parity)
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert!(self.parity == o.parity || self.is_zero() || o.is_zero());
        let parity = if self.is_zero() { o.parity } else { self.parity };
        Self::new(&self.body + &o.body, &self.soul + &o.soul, parity)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-Coeff::one()))
    }

    pub fn scale(&self, c: Coeff) -> Self {
        Self::new(self.body.scale(c), self.soul.scale(c), self.parity)
    }

    /// `D = ∂_θ + iθ∂`.
    pub fn d(&self, patch: &Patch) -> Self {
        Self::new(self.soul.clone(), patch.d_sigma(&self.body).scale(Coeff::i()), self.parity.flip())
    }

    pub fn d_n(&self, patch: &Patch, k: usize) -> Self {
        (0..k).fold(self.clone(), |a, _| a.d(patch))
    }

    /// `∂ = ∂_σ` on both components.
    pub fn d_sigma(&self, patch: &Patch) -> Self {
        Self::new(patch.d_sigma(&self.body), patch.d_sigma(&self.soul), self.parity)
    }

    /// `∫dθ A = A₁`.
    pub fn berezin(&self) -> GradedExpr {
        self.soul.clone()
    }

    /// Sets `λ = ρ = 0` in both components.
    pub fn truncate_fermions(&self) -> Self {
        let keep = |m: &crate::expr::Monomial| {
            !m.factors().iter().any(|f| matches!(f, Factor::Jet(j) if j.field.parity().is_odd()))
        };
        Self::new(self.body.filter(keep), self.soul.filter(keep), self.parity)
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero() && self.soul.is_zero()
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Superfield>>(items: I) -> Self {
        items.into_iter().fold(Self::one(), |acc, x| acc.mul(x))
    }
}

impl fmt::Display for Superfield {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + θ({})", self.body, self.soul)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_squared_is_i_partial() {
        let pt = Patch::new(3).unwrap();
        let a = Superfield::phi(1);
        let dd = a.d(&pt).d(&pt);
        let expect = a.d_sigma(&pt).scale(Coeff::i());
        assert_eq!(dd, expect);
    }

    #[test]
    fn d_is_graded_derivation() {
        let pt = Patch::new(2).unwrap();
        let a = Superfield::s(1);
        let b = Superfield::phi(2).d(&pt);
        let lhs = a.mul(&b).d(&pt);
        let rhs = a.d(&pt).mul(&b).add(&a.mul(&b.d(&pt)).scale(Coeff::sign(a.parity.is_odd())));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn theta_squared_vanishes() {
        let t = Superfield::new(GradedExpr::zero(), GradedExpr::one(), Parity::Odd);
        assert!(t.mul(&t).is_zero());
    }
}
