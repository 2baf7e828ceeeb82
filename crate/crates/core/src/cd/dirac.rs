//! Certified closure of a family of sections: brackets given as explicit
//! combinations, pairings with vanishing `d_h`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::expr::GradedExpr;
use crate::tensor::Linear;

use super::{CdAlgebra, CdError};

/// `A_left * A_right = Σ c_k A_k`; pairs without a certificate must bracket to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub left: usize,
    pub right: usize,
    pub combination: Vec<(usize, GradedExpr)>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DiracReport {
    pub instance: String,
    pub sections: usize,
    #[serde(rename = "closure-failures")]
    pub closure_failures: Vec<String>,
    #[serde(rename = "pairing-failures")]
    pub pairing_failures: Vec<String>,
    pub notes: Vec<String>,
}

impl DiracReport {
    pub fn passed(&self) -> bool {
        self.closure_failures.is_empty() && self.pairing_failures.is_empty()
    }
}

pub fn dirac_certificate_check<A: CdAlgebra>(
    alg: &A,
    sections: &[A::E],
    certificates: &[Certificate],
) -> Result<DiracReport, CdError> {
    let n = sections.len();
    let mut table: BTreeMap<(usize, usize), &Certificate> = BTreeMap::new();
    for c in certificates {
        if c.left >= n || c.right >= n || c.combination.iter().any(|(k, _)| *k >= n) {
            return Err(CdError::Certificate(format!(
                "index out of range in ({}, {}) for {n} sections",
                c.left, c.right
            )));
        }
        if table.insert((c.left, c.right), c).is_some() {
            return Err(CdError::Certificate(format!("duplicate certificate for ({}, {})", c.left, c.right)));
        }
    }
    let mut report = DiracReport {
        instance: alg.name(),
        sections: n,
        closure_failures: vec![],
        pairing_failures: vec![],
        notes: vec![],
    };
    for (i, a) in sections.iter().enumerate() {
        for (j, b) in sections.iter().enumerate() {
            let ab = alg.bracket(a, b)?;
            let mut claimed: Option<A::E> = None;
            if let Some(c) = table.get(&(i, j)) {
                for (k, coef) in &c.combination {
                    let t = sections[*k].times(coef);
                    claimed = Some(match claimed {
                        Some(x) => x.plus(&t),
                        None => t,
                    });
                }
            }
            let residual = match &claimed {
                Some(x) => ab.minus(x),
                None => ab.clone(),
            };
            if !alg.section_is_zero(&residual) {
                report.closure_failures.push(format!("({i}, {j}): bracket = {}", alg.show_section(&ab)));
            }
            if j < i {
                continue;
            }
            let pairing = alg.pairing(a, b)?;
            if !alg.section_is_zero(&alg.derivation(&pairing)?) {
                report.pairing_failures.push(format!("({i}, {j}): pairing = {}", alg.show_scalar(&pairing)));
            } else if !alg.scalar_is_zero(&pairing) {
                report
                    .notes
                    .push(format!("({i}, {j}): pairing {} is nonzero with vanishing d_h", alg.show_scalar(&pairing)));
            }
        }
    }
    Ok(report)
}
