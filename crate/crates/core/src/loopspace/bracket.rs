//! Poisson brackets of local functionals through the canonical component brackets.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::Serialize;

use crate::expr::{Coeff, ExprAcc, Factor, FieldKind, GradedExpr, JetVar, Patch};

use super::current::LocalCurrent;
use super::reproduce::{calibrate, Calibration};
use super::LoopError;

/// Elementary brackets `{X^μ(σ), p_ν(σ')} = c_Xp δ^μ_ν δ(σ−σ')` and
/// `{λ^μ(σ), ρ_ν(σ')} = c_λρ δ^μ_ν δ(σ−σ')`; the rest follow by graded antisymmetry.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CanonicalBrackets {
    #[serde(rename = "X-p")]
    pub x_p: Coeff,
    #[serde(rename = "lambda-rho")]
    pub lambda_rho: Coeff,
}

impl CanonicalBrackets {
    /// The sixteen tables with each constant in `{1, -1, i, -i}`.
    pub fn candidates() -> Vec<Self> {
        let units = [Coeff::one(), -Coeff::one(), Coeff::i(), -Coeff::i()];
        let mut out = Vec::new();
        for &x_p in &units {
            for &lambda_rho in &units {
                out.push(Self { x_p, lambda_rho });
            }
        }
        out
    }

    /// `{u, w}` coefficient, `None` for non-conjugate pairs.
    pub fn coefficient(&self, u: FieldKind, w: FieldKind) -> Option<Coeff> {
        use FieldKind::*;
        match (u, w) {
            (X, P) => Some(self.x_p),
            (P, X) => Some(-self.x_p),
            (Lambda, Rho) | (Rho, Lambda) => Some(self.lambda_rho),
            _ => None,
        }
    }

    /// The calibration at n = 3, computed once.
    pub fn calibration() -> Result<Calibration, LoopError> {
        static CAL: OnceLock<Result<Calibration, LoopError>> = OnceLock::new();
        CAL.get_or_init(|| calibrate(3)).clone()
    }

    /// The frozen table.
    pub fn calibrated() -> Result<Self, LoopError> {
        Self::calibration().map(|c| c.table)
    }
}

impl std::fmt::Display for CanonicalBrackets {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{X,p}} = {}, {{lambda,rho}} = {}", self.x_p, self.lambda_rho)
    }
}

fn conjugate(f: FieldKind) -> FieldKind {
    match f {
        FieldKind::X => FieldKind::P,
        FieldKind::P => FieldKind::X,
        FieldKind::Lambda => FieldKind::Rho,
        FieldKind::Rho => FieldKind::Lambda,
    }
}

/// Jet variables a density depends on; component symbols depend on every `X^μ`.
fn jet_support(patch: &Patch, e: &GradedExpr) -> BTreeSet<JetVar> {
    let mut out = BTreeSet::new();
    let mut symbols = false;
    for f in e.factors() {
        match f {
            Factor::Jet(j) => {
                out.insert(*j);
            }
            Factor::Sym(_) => symbols = true,
            _ => {}
        }
    }
    if symbols {
        out.extend(patch.indices().map(|mu| JetVar::new(FieldKind::X, mu, 0)));
    }
    out
}

/// Graded right derivative `e ∂⃖/∂u`.
pub fn right_derivative(patch: &Patch, e: &GradedExpr, u: JetVar) -> GradedExpr {
    if !u.parity().is_odd() {
        return patch.diff_jet(e, u);
    }
    let target = Factor::Jet(u);
    e.map_linear(|m, acc, c| {
        for (i, f) in m.factors().iter().enumerate() {
            if *f == target {
                let negative = m.parity_after(i).is_odd();
                acc.add(m.without(i), if negative { -c } else { c });
            }
        }
    })
}

/// `{∫f, ∫g}` for densities `f`, `g` whose test functions are passive.
/// Each pair of conjugate jets contributes `c (−1)^j ∂^{j+k}(f∂⃖/∂u^{(j)}) · (∂⃗/∂w^{(k)} g)`.
pub fn poisson_bracket_densities(
    patch: &Patch,
    table: &CanonicalBrackets,
    f: &GradedExpr,
    g: &GradedExpr,
) -> GradedExpr {
    let fs = jet_support(patch, f);
    let gs = jet_support(patch, g);
    // left derivatives of g grouped by (field, index)
    let mut rights: BTreeMap<(FieldKind, u8), Vec<(u8, GradedExpr)>> = BTreeMap::new();
    for w in &gs {
        let r = patch.diff_jet(g, *w);
        if !r.is_zero() {
            rights.entry((w.field, w.index)).or_default().push((w.order, r));
        }
    }
    let mut acc = ExprAcc::new();
    for u in &fs {
        let w_field = conjugate(u.field);
        let Some(c) = table.coefficient(u.field, w_field) else { continue };
        let Some(rs) = rights.get(&(w_field, u.index)) else { continue };
        let l = right_derivative(patch, f, *u);
        if l.is_zero() {
            continue;
        }
        let sign = c * Coeff::sign(u.order % 2 == 1);
        let mut derived: Vec<GradedExpr> = vec![l];
        for (k, r) in rs {
            let m = (u.order + k) as usize;
            while derived.len() <= m {
                let next = patch.d_sigma(derived.last().unwrap());
                derived.push(next);
            }
            acc.add_expr(&derived[m].mul(r), sign);
        }
    }
    acc.finish()
}

/// `{J_{ε₁}(A), J_{ε₂}(B)}` as a single-integral density.
pub fn poisson_bracket(table: &CanonicalBrackets, a: &LocalCurrent, b: &LocalCurrent) -> Result<GradedExpr, LoopError> {
    if a.data.dim() != b.data.dim() {
        return Err(LoopError::Unsupported(format!(
            "currents over patches of dimension {} and {}",
            a.data.dim(),
            b.data.dim()
        )));
    }
    let patch = Patch::new(a.data.dim())?;
    Ok(poisson_bracket_densities(&patch, table, &a.density, &b.density))
}
