//! Local currents `J_ε(A) = ∫dσ dθ ε (…)` for each geometric family.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::expr::{Coeff, FieldKind, GradedExpr, Parity, Patch, TestFn};
use crate::tensor::{Connection, Multivector, PForm, VBeta, VBetaGamma, VGammaR, VOmega, VectorField};

use super::superfield::{Superfield, TestMode};
use super::LoopError;

/// Name of the graded constant `e` in the form-valued families.
pub const CONSTANT_E: &str = "e";

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "bosonic-AS")]
    BosonicAs,
    #[serde(rename = "susy-AS")]
    SusyAs,
    #[serde(rename = "multivector")]
    Multivector,
    #[serde(rename = "v-pform")]
    VPForm,
    #[serde(rename = "v-pform-pair")]
    VPFormPair,
    #[serde(rename = "sym-tensor")]
    SymTensor,
    #[serde(rename = "generic")]
    Generic,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::BosonicAs,
        Family::SusyAs,
        Family::Multivector,
        Family::VPForm,
        Family::VPFormPair,
        Family::SymTensor,
        Family::Generic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::BosonicAs => "bosonic-AS",
            Family::SusyAs => "susy-AS",
            Family::Multivector => "multivector",
            Family::VPForm => "v-pform",
            Family::VPFormPair => "v-pform-pair",
            Family::SymTensor => "sym-tensor",
            Family::Generic => "generic",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One summand `A_{ν₁…ν_p}(Φ) D^{k₁}Φ^{ν₁} ⋯ D^{k_p}Φ^{ν_p}` of the open family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenericTerm {
    pub coefficient: GradedExpr,
    /// `(ν, k)` per slot.
    pub slots: Vec<(u8, usize)>,
}

/// `v^μS_μ + Σ A(Φ) D^{k₁}Φ ⋯ D^{k_p}Φ` with a fixed total weight `Σk`.
/// An odd constant `e` is prepended to the sum when the weight is even.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenericData {
    pub v: VectorField,
    pub weight: usize,
    pub terms: Vec<GenericTerm>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CurrentData {
    BosonicAs(VOmega),
    SusyAs(VOmega),
    Multivector(Multivector),
    VPForm(VBeta),
    VPFormPair(VBetaGamma),
    SymTensor { section: VGammaR, connection: Connection },
    Generic(GenericData),
}

impl CurrentData {
    pub fn family(&self) -> Family {
        match self {
            Self::BosonicAs(_) => Family::BosonicAs,
            Self::SusyAs(_) => Family::SusyAs,
            Self::Multivector(_) => Family::Multivector,
            Self::VPForm(_) => Family::VPForm,
            Self::VPFormPair(_) => Family::VPFormPair,
            Self::SymTensor { .. } => Family::SymTensor,
            Self::Generic(_) => Family::Generic,
        }
    }

    pub fn dim(&self) -> u8 {
        match self {
            Self::BosonicAs(a) | Self::SusyAs(a) => a.v.dim(),
            Self::Multivector(v) => v.dim(),
            Self::VPForm(a) => a.v.dim(),
            Self::VPFormPair(a) => a.v.dim(),
            Self::SymTensor { section, .. } => section.v.dim(),
            Self::Generic(g) => g.v.dim(),
        }
    }

    /// Parity the test function must have for this family.
    pub fn test_parity(&self) -> Parity {
        match self {
            Self::Multivector(v) => Parity::of_degree(v.degree() + 1),
            _ => Parity::Even,
        }
    }

    /// The graded constant `e` entering the density, if any.
    pub fn constant(&self) -> Option<Superfield> {
        match self {
            Self::VPForm(a) => Some(Superfield::constant(CONSTANT_E, Parity::of_degree(a.beta.degree()))),
            Self::VPFormPair(a) => Some(Superfield::constant(CONSTANT_E, Parity::of_degree(a.beta.degree()))),
            Self::SymTensor { .. } => Some(Superfield::constant(CONSTANT_E, Parity::Odd)),
            Self::Generic(g) if g.weight % 2 == 0 => Some(Superfield::constant(CONSTANT_E, Parity::Odd)),
            _ => None,
        }
    }

    fn validate(&self) -> Result<(), LoopError> {
        let n = self.dim();
        match self {
            Self::VPForm(a) if a.beta.degree() == 0 || a.beta.degree() > n as usize => {
                Err(LoopError::Degree(format!("form degree {} outside 1..={n}", a.beta.degree())))
            }
            Self::VPFormPair(a) if a.beta.degree() == 0 || a.beta.degree() > n as usize => {
                Err(LoopError::Degree(format!("form degree {} outside 1..={n}", a.beta.degree())))
            }
            Self::VPFormPair(a) if a.gamma.degree() != a.beta.degree() + 1 => {
                Err(LoopError::Degree("γ must have degree p+1".into()))
            }
            Self::Multivector(v) if v.degree() > n as usize => {
                Err(LoopError::Degree(format!("multivector degree {} exceeds {n}", v.degree())))
            }
            Self::Generic(g) => {
                for t in &g.terms {
                    let w: usize = t.slots.iter().map(|s| s.1).sum();
                    if w != g.weight {
                        return Err(LoopError::Degree(format!("generic term of weight {w}, expected {}", g.weight)));
                    }
                    if t.slots.iter().any(|s| s.0 == 0 || s.0 > n) {
                        return Err(LoopError::Degree("generic slot index out of range".into()));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `v^μp_μ + ω_μ∂X^μ` for the bosonic family.
    pub fn bosonic_density(&self) -> Option<GradedExpr> {
        let Self::BosonicAs(a) = self else { return None };
        let mut acc = GradedExpr::zero();
        for mu in 1..=a.v.dim() {
            acc += &(a.v.get(mu) * &GradedExpr::jet(FieldKind::P, mu, 0));
            acc += &(a.omega.get(&[mu]) * GradedExpr::jet(FieldKind::X, mu, 1));
        }
        Some(acc)
    }

    /// The superfield multiplying `ε`. `None` for the bosonic family.
    pub fn integrand(&self, patch: &Patch) -> Option<Superfield> {
        let n = patch.dim();
        let vs = |v: &VectorField| {
            let mut acc = Superfield::zero(Parity::Odd);
            for (mu, c) in v.components() {
                acc = acc.add(&Superfield::lift(patch, c).mul(&Superfield::s(mu)));
            }
            acc
        };
        let e = self.constant();
        Some(match self {
            Self::BosonicAs(_) => return None,
            Self::SusyAs(a) => {
                let mut acc = vs(&a.v);
                for mu in 1..=n {
                    acc = acc.add(&Superfield::lift(patch, &a.omega.get(&[mu])).mul(&Superfield::phi(mu).d(patch)));
                }
                acc
            }
            Self::Multivector(v) => {
                let p = v.degree();
                let weight: i64 = (1..=p as i64).product();
                let mut acc = Superfield::zero(Parity::of_degree(p));
                for (idx, c) in v.components() {
                    let mut term = Superfield::lift(patch, c);
                    for &mu in &idx {
                        term = term.mul(&Superfield::s(mu));
                    }
                    acc = acc.add(&term);
                }
                acc.scale(Coeff::int(weight))
            }
            Self::VPForm(a) => vs(&a.v).add(&e.unwrap().mul(&form_ddphi(patch, &a.beta))),
            Self::VPFormPair(a) => {
                let e = e.unwrap();
                let sign = Coeff::sign(a.beta.degree() % 2 == 1);
                let top = form_dphi(patch, &a.gamma).scale(sign);
                vs(&a.v).add(&e.mul(&form_ddphi(patch, &a.beta).add(&top)))
            }
            Self::SymTensor { section, connection } => {
                let e = e.unwrap();
                let dphi1 = |m: u8| Superfield::phi(m).d_sigma(patch);
                let mut inner = Superfield::zero(Parity::Even);
                for mu in 1..=n {
                    for nu in 1..=n {
                        let g = Superfield::lift(patch, section.gamma.get(mu, nu));
                        inner = inner.add(&g.mul(&dphi1(mu)).mul(&dphi1(nu)));
                    }
                }
                for mu in 1..=n {
                    let mut accel = Superfield::phi(mu).d_sigma(patch).d_sigma(patch);
                    for nu in 1..=n {
                        for rho in 1..=n {
                            let c = Superfield::lift(patch, connection.get(mu, nu, rho));
                            accel = accel.add(&c.mul(&dphi1(nu)).mul(&dphi1(rho)));
                        }
                    }
                    inner = inner.add(&Superfield::lift(patch, &section.r.get(&[mu])).mul(&accel));
                }
                vs(&section.v).add(&e.mul(&inner))
            }
            Self::Generic(g) => {
                let mut sum = Superfield::zero(Parity::of_degree(g.weight));
                for t in &g.terms {
                    let mut term = Superfield::lift(patch, &t.coefficient);
                    for &(nu, k) in &t.slots {
                        term = term.mul(&Superfield::phi(nu).d_n(patch, k));
                    }
                    sum = sum.add(&term);
                }
                match e {
                    Some(e) => vs(&g.v).add(&e.mul(&sum)),
                    None => vs(&g.v).add(&sum),
                }
            }
        })
    }
}

/// `Σ_{I increasing} β_I(Φ) DΦ^{i₁} ⋯ DΦ^{i_p}`.
pub fn form_dphi(patch: &Patch, beta: &PForm) -> Superfield {
    let mut acc = Superfield::zero(Parity::of_degree(beta.degree()));
    for (idx, c) in beta.components() {
        let mut term = Superfield::lift(patch, c);
        for &m in &idx {
            term = term.mul(&Superfield::phi(m).d(patch));
        }
        acc = acc.add(&term);
    }
    acc
}

/// `Σ_{I increasing} β_I(Φ) D(DΦ^{i₁} ⋯ DΦ^{i_p})`.
pub fn form_ddphi(patch: &Patch, beta: &PForm) -> Superfield {
    let mut acc = Superfield::zero(Parity::of_degree(beta.degree() + 1));
    for (idx, c) in beta.components() {
        let mut prod = Superfield::one();
        for &m in &idx {
            prod = prod.mul(&Superfield::phi(m).d(patch));
        }
        acc = acc.add(&Superfield::lift(patch, c).mul(&prod.d(patch)));
    }
    acc
}

/// A current together with its component density `∫dθ ε(…)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalCurrent {
    pub data: CurrentData,
    pub test_id: u8,
    pub mode: TestMode,
    pub density: GradedExpr,
}

impl LocalCurrent {
    pub fn family(&self) -> Family {
        self.data.family()
    }

    pub fn parity(&self) -> Parity {
        self.density.parity().unwrap_or(Parity::Even)
    }
}

/// Builds `J_{ε_id}(data)`.
pub fn build_current(
    data: CurrentData,
    test_id: u8,
    test_parity: Parity,
    mode: TestMode,
) -> Result<LocalCurrent, LoopError> {
    data.validate()?;
    let expected = data.test_parity();
    if expected != test_parity {
        return Err(LoopError::Parity { what: "test function", expected, found: test_parity });
    }
    let patch = Patch::new(data.dim())?;
    let density = match data.family() {
        Family::BosonicAs => {
            GradedExpr::test(TestFn::new(test_id, 0, 0, Parity::Even)) * data.bosonic_density().unwrap()
        }
        _ => smeared(&patch, &Superfield::test(test_id, test_parity, mode), &data)?,
    };
    Ok(LocalCurrent { data, test_id, mode, density })
}

/// `∫dθ τ · (integrand)` for an arbitrary test superfield `τ`, e.g. `ε₁ε₂`.
pub fn smeared(patch: &Patch, test: &Superfield, data: &CurrentData) -> Result<GradedExpr, LoopError> {
    data.validate()?;
    match data.integrand(patch) {
        Some(i) => Ok(test.mul(&i).berezin()),
        None => {
            if !test.soul.is_zero() {
                return Err(LoopError::Unsupported("the bosonic family takes a bosonic test function".into()));
            }
            Ok(&test.body * &data.bosonic_density().unwrap())
        }
    }
}
