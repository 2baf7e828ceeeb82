//! Generalized sections, their brackets, pairings and `d_h` maps.

use crate::expr::{Coeff, GradedExpr};

use super::arrays::{Connection, PForm, SymTensor2, VectorField};
use super::ops::{
    exterior_d, interior, interior_sym, lie_bracket, lie_derivative, lie_derivative_sym, patch, sym_covariant,
};
use super::{Linear, TensorError};

/// `v + ω` in `TM ⊕ T*M`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VOmega {
    pub v: VectorField,
    pub omega: PForm,
}

/// `v + β` in `TM ⊕ ΛᵖT*M`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VBeta {
    pub v: VectorField,
    pub beta: PForm,
}

/// `v + β + γ` in `TM ⊕ ΛᵖT*M ⊕ Λᵖ⁺¹T*M`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VBetaGamma {
    pub v: VectorField,
    pub beta: PForm,
    pub gamma: PForm,
}

/// `v + γ + r` with `γ` symmetric and `r` a 1-form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VGammaR {
    pub v: VectorField,
    pub gamma: SymTensor2,
    pub r: PForm,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GeneralizedSection {
    VOmega(VOmega),
    VBeta(VBeta),
    VBetaGamma(VBetaGamma),
    VGammaR(VGammaR),
}

impl GeneralizedSection {
    pub fn family(&self) -> &'static str {
        match self {
            Self::VOmega(_) => "v-omega",
            Self::VBeta(_) => "v-beta",
            Self::VBetaGamma(_) => "v-beta-gamma",
            Self::VGammaR(_) => "v-gamma-r",
        }
    }

    pub fn dim(&self) -> u8 {
        match self {
            Self::VOmega(a) => a.v.dim(),
            Self::VBeta(a) => a.v.dim(),
            Self::VBetaGamma(a) => a.v.dim(),
            Self::VGammaR(a) => a.v.dim(),
        }
    }

    /// Form degree `p` of the family (1 for the two fixed-degree families).
    pub fn degree(&self) -> usize {
        match self {
            Self::VOmega(_) | Self::VGammaR(_) => 1,
            Self::VBeta(a) => a.beta.degree(),
            Self::VBetaGamma(a) => a.beta.degree(),
        }
    }
}

/// Values of the pairings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ScalarBlock {
    Function(GradedExpr),
    Form(PForm),
    FormPair(PForm, PForm),
    OneForm(PForm),
}

impl ScalarBlock {
    pub fn is_zero(&self) -> bool {
        match self {
            Self::Function(f) => f.is_zero(),
            Self::Form(b) | Self::OneForm(b) => b.is_zero(),
            Self::FormPair(b, a) => b.is_zero() && a.is_zero(),
        }
    }
}

fn same_degree(a: &PForm, b: &PForm) -> Result<(), TensorError> {
    if a.dim() != b.dim() {
        return Err(TensorError::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.degree() != b.degree() {
        return Err(TensorError::DegreeMismatch(a.degree(), b.degree()));
    }
    Ok(())
}

fn add_forms(a: &PForm, b: &PForm) -> PForm {
    a.zip_with(b, |x, y| x + y)
}

fn sub_forms(a: &PForm, b: &PForm) -> PForm {
    a.zip_with(b, |x, y| x - y)
}

impl VOmega {
    pub fn new(v: VectorField, omega: PForm) -> Result<Self, TensorError> {
        if omega.degree() != 1 {
            return Err(TensorError::DegreeMismatch(1, omega.degree()));
        }
        Ok(Self { v, omega })
    }

    pub fn as_vbeta(&self) -> VBeta {
        VBeta { v: self.v.clone(), beta: self.omega.clone() }
    }
}

/// Standard Dorfman bracket on `TM ⊕ T*M`, written out in components:
/// `[v₁,v₂] + (v₁^ν∂_νω₂_μ + ω₂_ν∂_μv₁^ν) − v₂^ν(∂_νω₁_μ − ∂_μω₁_ν)`.
pub fn dorfman(a: &VOmega, b: &VOmega) -> VOmega {
    let n = a.v.dim();
    let pt = patch(n);
    let mut omega = PForm::zero(n, 1);
    for mu in 1..=n {
        let mut acc = GradedExpr::zero();
        for nu in 1..=n {
            let w2 = b.omega.get(&[mu]);
            acc += &(a.v.get(nu) * &pt.partial(&w2, nu));
            acc += &(&b.omega.get(&[nu]) * &pt.partial(a.v.get(nu), mu));
            let curl = pt.partial(&a.omega.get(&[mu]), nu) - pt.partial(&a.omega.get(&[nu]), mu);
            acc -= &(b.v.get(nu) * &curl);
        }
        omega.set(&[mu], acc);
    }
    VOmega { v: lie_bracket(&a.v, &b.v), omega }
}

/// `⟨A,B⟩ = ι_{v₁}β₂ + ι_{v₂}β₁`.
pub fn pairing_p(a: &VBeta, b: &VBeta) -> Result<PForm, TensorError> {
    same_degree(&a.beta, &b.beta)?;
    Ok(add_forms(&interior(&a.v, &b.beta)?, &interior(&b.v, &a.beta)?))
}

/// `A * B = {v₁,v₂} + ℒ_{v₁}β₂ − ι_{v₂}dβ₁`.
pub fn dorfman_p(a: &VBeta, b: &VBeta) -> Result<VBeta, TensorError> {
    same_degree(&a.beta, &b.beta)?;
    let beta = sub_forms(&lie_derivative(&a.v, &b.beta), &interior(&b.v, &exterior_d(&a.beta))?);
    Ok(VBeta { v: lie_bracket(&a.v, &b.v), beta })
}

/// `½(A*B − B*A)`.
pub fn courant_p(a: &VBeta, b: &VBeta) -> Result<VBeta, TensorError> {
    let ab = dorfman_p(a, b)?;
    let ba = dorfman_p(b, a)?;
    Ok(ab.minus(&ba).scaled(Coeff::ratio(1, 2)))
}

/// `(b + a) ↦ db + (−1)ᵖa ∈ Λᵖ` and `da ∈ Λᵖ⁺¹`, with `p = deg a`.
pub fn dh_ext(b: &PForm, a: &PForm) -> Result<VBetaGamma, TensorError> {
    if b.degree() + 1 != a.degree() {
        return Err(TensorError::DegreeMismatch(b.degree() + 1, a.degree()));
    }
    let p = a.degree();
    let beta = add_forms(&exterior_d(b), &a.map(|c| c.scale(Coeff::sign(p % 2 == 1))));
    Ok(VBetaGamma { v: VectorField::zero(a.dim()), beta, gamma: exterior_d(a) })
}

impl VBetaGamma {
    pub fn new(v: VectorField, beta: PForm, gamma: PForm) -> Result<Self, TensorError> {
        if beta.degree() + 1 != gamma.degree() {
            return Err(TensorError::DegreeMismatch(beta.degree() + 1, gamma.degree()));
        }
        Ok(Self { v, beta, gamma })
    }

    pub fn degree(&self) -> usize {
        self.beta.degree()
    }
}

/// Extended bracket, split by form degree:
/// `Λᵖ: ℒ_{v₁}β₂ − ι_{v₂}dβ₁ + (−1)ᵖι_{v₂}γ₁`, `Λᵖ⁺¹: ℒ_{v₁}γ₂ − ι_{v₂}dγ₁`.
pub fn dorfman_ext(a: &VBetaGamma, b: &VBetaGamma) -> Result<VBetaGamma, TensorError> {
    same_degree(&a.beta, &b.beta)?;
    same_degree(&a.gamma, &b.gamma)?;
    let p = a.degree();
    let last = interior(&b.v, &a.gamma)?.map(|c| c.scale(Coeff::sign(p % 2 == 1)));
    let beta = add_forms(&sub_forms(&lie_derivative(&a.v, &b.beta), &interior(&b.v, &exterior_d(&a.beta))?), &last);
    let gamma = sub_forms(&lie_derivative(&a.v, &b.gamma), &interior(&b.v, &exterior_d(&a.gamma))?);
    Ok(VBetaGamma { v: lie_bracket(&a.v, &b.v), beta, gamma })
}

/// `(ι_{v₁}β₂ + ι_{v₂}β₁, ι_{v₁}γ₂ + ι_{v₂}γ₁)`.
pub fn pairing_ext(a: &VBetaGamma, b: &VBetaGamma) -> Result<(PForm, PForm), TensorError> {
    same_degree(&a.beta, &b.beta)?;
    same_degree(&a.gamma, &b.gamma)?;
    let lo = add_forms(&interior(&a.v, &b.beta)?, &interior(&b.v, &a.beta)?);
    let hi = add_forms(&interior(&a.v, &b.gamma)?, &interior(&b.v, &a.gamma)?);
    Ok((lo, hi))
}

impl VGammaR {
    pub fn new(v: VectorField, gamma: SymTensor2, r: PForm) -> Result<Self, TensorError> {
        if r.degree() != 1 {
            return Err(TensorError::DegreeMismatch(1, r.degree()));
        }
        Ok(Self { v, gamma, r })
    }

    /// `γ̂ = γ − ∇_{(μ}r_{ν)}`.
    pub fn gamma_hat(&self, conn: &Connection) -> SymTensor2 {
        self.gamma.zip_with(&sym_covariant(&self.r, conn), |a, b| a - b)
    }
}

fn two(e: &PForm) -> PForm {
    e.map(|c| c.scale(Coeff::int(2)))
}

/// Bracket on `TM ⊕ S²T*M ⊕ T*M` with a torsionless connection.
pub fn sym_bracket(a: &VGammaR, b: &VGammaR, conn: &Connection) -> VGammaR {
    let h1 = a.gamma_hat(conn);
    let h2 = b.gamma_hat(conn);
    let tau = add_forms(&lie_derivative(&a.v, &b.r), &two(&interior_sym(&b.v, &h1)));
    let gamma = lie_derivative_sym(&a.v, &h2)
        .zip_with(&lie_derivative_sym(&b.v, &h1), |x, y| x - y)
        .zip_with(&sym_covariant(&tau, conn), |x, y| x + y);
    VGammaR { v: lie_bracket(&a.v, &b.v), gamma, r: tau }
}

/// `ℒ_{v₁}r₂ + ℒ_{v₂}r₁ + 2ι_{v₂}γ̂₁ + 2ι_{v₁}γ̂₂`.
pub fn pairing_sym(a: &VGammaR, b: &VGammaR, conn: &Connection) -> PForm {
    let h1 = a.gamma_hat(conn);
    let h2 = b.gamma_hat(conn);
    let l = add_forms(&lie_derivative(&a.v, &b.r), &lie_derivative(&b.v, &a.r));
    let i = add_forms(&interior_sym(&b.v, &h1), &interior_sym(&a.v, &h2));
    add_forms(&l, &two(&i))
}

/// `α ↦ (0, ∇_{(μ}α_{ν)}, α)`.
pub fn dh_sym(alpha: &PForm, conn: &Connection) -> VGammaR {
    VGammaR { v: VectorField::zero(alpha.dim()), gamma: sym_covariant(alpha, conn), r: alpha.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(mu: u8) -> GradedExpr {
        GradedExpr::coord(mu)
    }

    fn one() -> GradedExpr {
        GradedExpr::one()
    }

    #[test]
    fn pairing_example() {
        let a = VBeta { v: VectorField::coordinate(3, 1), beta: PForm::basis(3, &[2], one()) };
        let b = VBeta { v: VectorField::coordinate(3, 2), beta: PForm::basis(3, &[1], one()) };
        assert_eq!(pairing_p(&a, &b).unwrap().as_function(), GradedExpr::int(2));
    }

    #[test]
    fn dorfman_example() {
        let a = VBeta { v: VectorField::coordinate(3, 1), beta: PForm::zero(3, 2) };
        let b = VBeta { v: VectorField::zero(3), beta: PForm::basis(3, &[1, 2], x(1)) };
        let r = dorfman_p(&a, &b).unwrap();
        assert!(r.v.is_zero());
        assert_eq!(r.beta, PForm::basis(3, &[1, 2], one()));
    }

    #[test]
    fn ext_examples() {
        let a1 = VBetaGamma::new(VectorField::zero(3), PForm::zero(3, 1), PForm::basis(3, &[1, 2], one())).unwrap();
        let a2 = VBetaGamma::new(VectorField::coordinate(3, 1), PForm::zero(3, 1), PForm::zero(3, 2)).unwrap();
        let r = dorfman_ext(&a1, &a2).unwrap();
        assert!(r.v.is_zero() && r.gamma.is_zero());
        assert_eq!(r.beta, PForm::basis(3, &[2], GradedExpr::int(-1)));

        let f = GradedExpr::symbol("f", &[], &[], crate::expr::Symmetry::None, crate::expr::Parity::Even);
        let h = dh_ext(&PForm::function(3, f.clone()), &PForm::basis(3, &[2], x(1))).unwrap();
        let df = exterior_d(&PForm::function(3, f));
        assert_eq!(h.beta, sub_forms(&df, &PForm::basis(3, &[2], x(1))));
        assert_eq!(h.gamma, PForm::basis(3, &[1, 2], one()));
    }

    #[test]
    fn sym_examples() {
        let flat = Connection::flat(3);
        let a1 = VGammaR::new(VectorField::coordinate(3, 1), SymTensor2::zero(3), PForm::zero(3, 1)).unwrap();
        let a2 = VGammaR::new(VectorField::zero(3), SymTensor2::zero(3), PForm::basis(3, &[1], x(1))).unwrap();
        let r = sym_bracket(&a1, &a2, &flat);
        assert!(r.v.is_zero() && r.gamma.is_zero());
        assert_eq!(r.r, PForm::basis(3, &[1], one()));

        let h = dh_sym(&PForm::basis(3, &[1], x(1)), &flat);
        assert_eq!(h.gamma, SymTensor2::zero(3).with(1, 1, one()));
    }
}
