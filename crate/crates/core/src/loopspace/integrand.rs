//! The bracket `*` and pairing induced on integrands by `{J₁(A), J_ε(B)} = J_ε(A*B)`.

use serde::Serialize;

use crate::expr::{GradedExpr, Parity, Patch, TestFn};

use super::bracket::{poisson_bracket_densities, CanonicalBrackets};
use super::canonical::{decompose, extract_pairing, Decomposition};
use super::superfield::TestMode;
use super::LoopError;

/// Integrands of bosonic local functionals on `T*LM`.
#[derive(Clone, Debug)]
pub struct IntegrandAlgebra {
    patch: Patch,
    table: CanonicalBrackets,
}

impl IntegrandAlgebra {
    pub fn new(dim: u8, table: CanonicalBrackets) -> Result<Self, LoopError> {
        Ok(Self { patch: Patch::new(dim)?, table })
    }

    /// Uses a table reproducing the bosonic identities, falling back to the frozen one.
    pub fn bosonic(dim: u8) -> Result<Self, LoopError> {
        let cal = CanonicalBrackets::calibration()?;
        Self::new(dim, cal.bosonic.first().copied().unwrap_or(cal.table))
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn table(&self) -> &CanonicalBrackets {
        &self.table
    }

    fn smear(id: u8, a: &GradedExpr) -> GradedExpr {
        GradedExpr::test(TestFn::new(id, 0, 0, Parity::Even)) * a.clone()
    }

    /// `{J_{ε₁}(A), J_{ε₂}(B)}` decomposed with bosonic test functions.
    pub fn decompose(&self, a: &GradedExpr, b: &GradedExpr) -> Result<Decomposition, LoopError> {
        let br = poisson_bracket_densities(&self.patch, &self.table, &Self::smear(1, a), &Self::smear(2, b));
        decompose(&self.patch, &br, TestMode::Bosonic)
    }

    pub fn star(&self, a: &GradedExpr, b: &GradedExpr) -> Result<GradedExpr, LoopError> {
        match self.decompose(a, b)? {
            Decomposition::Bosonic { star, .. } => Ok(star),
            Decomposition::Super { .. } => unreachable!(),
        }
    }

    pub fn pairing(&self, a: &GradedExpr, b: &GradedExpr) -> Result<GradedExpr, LoopError> {
        extract_pairing(&self.patch, &self.decompose(a, b)?, &self.decompose(b, a)?)
    }

    /// `d_h f = ∂f`.
    pub fn dh(&self, f: &GradedExpr) -> GradedExpr {
        self.patch.d_sigma(f)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrandCheck {
    pub property: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrandReport {
    pub table: CanonicalBrackets,
    pub checks: Vec<IntegrandCheck>,
}

impl IntegrandReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures.is_empty())
    }
}

/// Checks the weak Courant-Dorfman properties of the integrand bracket on a corpus
/// of densities `corpus` and scalars `scalars`, over all pairs and triples.
///
/// Leibniz, symmetrization, `(d_h f)*A = 0` and `⟨d_h f, d_h g⟩ = 0` are checked
/// exactly; invariance as `d_h` of the residual.
pub fn check_integrand_cd(
    alg: &IntegrandAlgebra,
    corpus: &[GradedExpr],
    scalars: &[GradedExpr],
) -> Result<IntegrandReport, LoopError> {
    let mut checks = Vec::new();
    let show = |xs: &[&GradedExpr]| xs.iter().map(|x| format!("({x})")).collect::<Vec<_>>().join(", ");

    let mut leibniz = IntegrandCheck { property: "leibniz", cases: 0, failures: vec![] };
    let mut invariance = IntegrandCheck { property: "invariance", cases: 0, failures: vec![] };
    for a in corpus {
        for b in corpus {
            let ab = alg.star(a, b)?;
            for c in corpus {
                let lhs = alg.star(a, &alg.star(b, c)?)?;
                let rhs = &alg.star(&ab, c)? + &alg.star(b, &alg.star(a, c)?)?;
                leibniz.cases += 1;
                if lhs != rhs {
                    leibniz.failures.push(show(&[a, b, c]));
                }
                let bc = alg.pairing(b, c)?;
                let res =
                    &(&alg.pairing(a, &alg.dh(&bc))? - &alg.pairing(&ab, c)?) - &alg.pairing(b, &alg.star(a, c)?)?;
                invariance.cases += 1;
                if !alg.dh(&res).is_zero() {
                    invariance.failures.push(show(&[a, b, c]));
                }
            }
        }
    }

    let mut symmetry = IntegrandCheck { property: "symmetrization", cases: 0, failures: vec![] };
    for a in corpus {
        for b in corpus {
            let lhs = &alg.star(a, b)? + &alg.star(b, a)?;
            symmetry.cases += 1;
            if lhs != alg.dh(&alg.pairing(a, b)?) {
                symmetry.failures.push(show(&[a, b]));
            }
        }
    }

    let mut exact_left = IntegrandCheck { property: "exact-left", cases: 0, failures: vec![] };
    let mut exact_pair = IntegrandCheck { property: "exact-pairing", cases: 0, failures: vec![] };
    for f in scalars {
        let df = alg.dh(f);
        for a in corpus {
            exact_left.cases += 1;
            if !alg.star(&df, a)?.is_zero() {
                exact_left.failures.push(show(&[f, a]));
            }
        }
        for g in scalars {
            exact_pair.cases += 1;
            if !alg.pairing(&df, &alg.dh(g))?.is_zero() {
                exact_pair.failures.push(show(&[f, g]));
            }
        }
    }
    checks.extend([leibniz, symmetry, invariance, exact_left, exact_pair]);
    Ok(IntegrandReport { table: alg.table, checks })
}
