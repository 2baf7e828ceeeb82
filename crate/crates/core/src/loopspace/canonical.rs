//! Canonical form of smeared densities and the J-term / anomaly decomposition.

use std::collections::BTreeMap;

use crate::expr::{Coeff, ConstSym, ExprAcc, Factor, GradedExpr, Monomial, Parity, Patch, TestFn};

use super::superfield::{Superfield, TestMode};
use super::LoopError;

fn test_factors(m: &Monomial) -> impl Iterator<Item = (usize, TestFn)> + '_ {
    m.factors().iter().enumerate().filter_map(|(i, f)| match f {
        Factor::Test(t) => Some((i, *t)),
        _ => None,
    })
}

/// Moves every σ-derivative off the test function with the largest id by
/// integration by parts, `∫ε^{(k)}Q = (−1)^k ∫ε ∂^kQ`. The result is the unique
/// representative of the functional when it is linear in each test function.
pub fn canonical_form(patch: &Patch, density: &GradedExpr) -> Result<GradedExpr, LoopError> {
    let Some(last) = density
        .factors()
        .filter_map(|f| match f {
            Factor::Test(t) => Some(t.id),
            _ => None,
        })
        .max()
    else {
        return Ok(density.clone());
    };
    let mut acc = ExprAcc::new();
    for (m, c) in density.terms() {
        let mut hits = test_factors(m).filter(|(_, t)| t.id == last);
        let Some((i, t)) = hits.next() else {
            return Err(LoopError::NonPolynomial(format!(
                "term without ε{last}: {}",
                GradedExpr::from_monomial(m.clone(), *c)
            )));
        };
        if hits.next().is_some() {
            return Err(LoopError::NonPolynomial(format!("term not linear in ε{last}")));
        }
        if t.order == 0 {
            acc.add(m.clone(), *c);
            continue;
        }
        let f = &m.factors()[i];
        let negative = f.parity().swaps_sign(m.parity_before(i));
        let rest = GradedExpr::from_monomial(m.without(i), *c);
        let moved = patch.d_sigma_n(&rest, t.order as u32);
        let head = GradedExpr::test(TestFn { order: 0, ..t });
        let sign = Coeff::sign(negative ^ (t.order % 2 == 1));
        acc.add_expr(&head.mul(&moved), sign);
    }
    Ok(acc.finish())
}

/// Key of one canonical entry: a component of `ε₁` (any order) and of `ε₂` (order 0).
pub type EntryKey = (TestFn, TestFn);

/// Splits a canonical bilinear density as `Σ ε₁^{(k)} ε₂ Q_key`.
pub fn entries(density: &GradedExpr) -> Result<BTreeMap<EntryKey, GradedExpr>, LoopError> {
    let mut out: BTreeMap<EntryKey, ExprAcc> = BTreeMap::new();
    for (m, c) in density.terms() {
        let tests: Vec<(usize, TestFn)> = test_factors(m).collect();
        let (Some(&(i1, t1)), Some(&(_, t2))) =
            (tests.iter().find(|t| t.1.id == 1), tests.iter().find(|t| t.1.id == 2))
        else {
            return Err(LoopError::NonPolynomial("term without both test functions".into()));
        };
        if tests.len() != 2 {
            return Err(LoopError::NonPolynomial("term not bilinear in the test functions".into()));
        }
        let f1 = &m.factors()[i1];
        let neg1 = f1.parity().swaps_sign(m.parity_before(i1));
        let rest = m.without(i1);
        let i2 = rest.factors().iter().position(|f| *f == Factor::Test(t2)).unwrap();
        let f2 = &rest.factors()[i2];
        let neg2 = f2.parity().swaps_sign(rest.parity_before(i2));
        let q = rest.without(i2);
        out.entry((t1, t2)).or_default().add(q, if neg1 ^ neg2 { -*c } else { *c });
    }
    Ok(out.into_iter().map(|(k, v)| (k, v.finish())).filter(|(_, v)| !v.is_zero()).collect())
}

/// `J_{ε₁ε₂}(star) + Λ` with `Λ = Σ_i ∫ε₂ ∂^{(i)}ε₁ f_i` (bosonic test functions) or
/// `Σ_i ∫dσdθ ε₂ D^iε₁ F_i` (general test superfields).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Decomposition {
    Bosonic { star: GradedExpr, anomalies: Vec<GradedExpr> },
    Super { star: Superfield, anomalies: Vec<Superfield> },
}

impl Decomposition {
    pub fn star_density(&self) -> String {
        match self {
            Self::Bosonic { star, .. } => star.to_string(),
            Self::Super { star, .. } => star.to_string(),
        }
    }

    pub fn anomaly_strings(&self) -> Vec<String> {
        match self {
            Self::Bosonic { anomalies, .. } => anomalies.iter().map(|a| a.to_string()).collect(),
            Self::Super { anomalies, .. } => anomalies.iter().map(|a| a.to_string()).collect(),
        }
    }

    /// Reassembles the smeared density from the pieces.
    pub fn reconstruct(&self, patch: &Patch, eps1: Parity, eps2: Parity) -> GradedExpr {
        match self {
            Self::Bosonic { star, anomalies } => {
                let e1 = TestFn::new(1, 0, 0, eps1);
                let e2 = GradedExpr::test(TestFn::new(2, 0, 0, eps2));
                let mut acc = GradedExpr::test(e1).mul(&e2).mul(star);
                for (i, f) in anomalies.iter().enumerate() {
                    let d = GradedExpr::test(e1.derived(i as u8 + 1));
                    acc += &e2.mul(&d).mul(f);
                }
                acc
            }
            Self::Super { star, anomalies } => {
                let e1 = Superfield::test(1, eps1, TestMode::General);
                let e2 = Superfield::test(2, eps2, TestMode::General);
                let mut acc = e1.mul(&e2).mul(star);
                let mut d = e1.clone();
                for f in anomalies {
                    d = d.d(patch);
                    acc = acc.add(&e2.mul(&d).mul(f));
                }
                acc.berezin()
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Slot {
    Body(usize),
    Soul(usize),
}

const PLACEHOLDER: &str = "__slot";

fn placeholder(parity: Parity) -> GradedExpr {
    GradedExpr::factor(Factor::Const(ConstSym { name: PLACEHOLDER.into(), parity }))
}

/// Density produced by one unknown set to `value` (star is index 0).
fn slot_image(
    patch: &Patch,
    mode: TestMode,
    eps: (Parity, Parity),
    slot: Slot,
    value: &GradedExpr,
    parity: Parity,
) -> GradedExpr {
    match mode {
        TestMode::Bosonic => {
            let Slot::Body(i) = slot else { unreachable!() };
            let e1 = TestFn::new(1, 0, i as u8, eps.0);
            let e2 = GradedExpr::test(TestFn::new(2, 0, 0, eps.1));
            if i == 0 {
                GradedExpr::test(e1).mul(&e2).mul(value)
            } else {
                e2.mul(&GradedExpr::test(e1)).mul(value)
            }
        }
        TestMode::General => {
            let (i, f) = match slot {
                Slot::Body(i) => (i, Superfield::new(value.clone(), GradedExpr::zero(), parity)),
                Slot::Soul(i) => (i, Superfield::new(GradedExpr::zero(), value.clone(), parity.flip())),
            };
            let e1 = Superfield::test(1, eps.0, TestMode::General);
            let e2 = Superfield::test(2, eps.1, TestMode::General);
            let s = if i == 0 { e1.mul(&e2).mul(&f) } else { e2.mul(&e1.d_n(patch, i)).mul(&f) };
            s.berezin()
        }
    }
}

fn coefficient_of_placeholder(q: &GradedExpr) -> Coeff {
    match q.terms() {
        [(m, c)] if m.len() == 1 => *c,
        _ => panic!("slot image is not a multiple of the placeholder"),
    }
}

fn test_parities(density: &GradedExpr) -> Result<(Parity, Parity), LoopError> {
    let mut p = [None, None];
    for f in density.factors() {
        if let Factor::Test(t) = f {
            if t.id == 1 || t.id == 2 {
                p[t.id as usize - 1] = Some(t.base);
            }
        }
    }
    match p {
        [Some(a), Some(b)] => Ok((a, b)),
        _ => Err(LoopError::NonPolynomial("density lacks a test function".into())),
    }
}

/// Decomposes a reduced bracket density into its J-term and anomaly, with all
/// test-function derivatives on `ε₁` and `Λ(1, ε₂) = 0`.
pub fn decompose(patch: &Patch, bracket: &GradedExpr, mode: TestMode) -> Result<Decomposition, LoopError> {
    let canonical = canonical_form(patch, bracket)?;
    if canonical.is_zero() {
        return Ok(match mode {
            TestMode::Bosonic => Decomposition::Bosonic { star: GradedExpr::zero(), anomalies: vec![] },
            TestMode::General => Decomposition::Super { star: Superfield::zero(Parity::Even), anomalies: vec![] },
        });
    }
    let eps = test_parities(&canonical)?;
    let target_parity = canonical.parity()?;
    let target = entries(&canonical)?;
    if mode == TestMode::Bosonic && target.keys().any(|(a, b)| a.theta == 1 || b.theta == 1) {
        return Err(LoopError::NonPolynomial("θ-components of test functions in bosonic mode".into()));
    }
    let max_order = target.keys().map(|(a, _)| a.order as usize).max().unwrap_or(0);
    let slots: Vec<Slot> = match mode {
        TestMode::Bosonic => (0..=max_order).map(Slot::Body).collect(),
        TestMode::General => (0..=2 * max_order + 1).flat_map(|i| [Slot::Body(i), Slot::Soul(i)]).collect(),
    };

    // unit images: key -> coefficient of the unknown, per slot
    let mut images: BTreeMap<Slot, (Parity, BTreeMap<EntryKey, Coeff>)> = BTreeMap::new();
    for &slot in &slots {
        let mut parity = Parity::Even;
        let mut img = slot_image(patch, mode, eps, slot, &placeholder(parity), parity);
        if img.parity()? != target_parity {
            parity = Parity::Odd;
            img = slot_image(patch, mode, eps, slot, &placeholder(parity), parity);
        }
        let map = entries(&canonical_form(patch, &img)?)?
            .into_iter()
            .map(|(k, q)| (k, coefficient_of_placeholder(&q)))
            .collect();
        images.insert(slot, (parity, map));
    }

    let keys: Vec<EntryKey> = images
        .values()
        .flat_map(|(_, m)| m.keys().copied())
        .chain(target.keys().copied())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut solved: BTreeMap<Slot, GradedExpr> = BTreeMap::new();
    loop {
        let mut progress = false;
        for key in &keys {
            let open: Vec<Slot> =
                slots.iter().copied().filter(|s| !solved.contains_key(s) && images[s].1.contains_key(key)).collect();
            if open.len() != 1 {
                continue;
            }
            let slot = open[0];
            let mut rhs = target.get(key).cloned().unwrap_or_else(GradedExpr::zero);
            for (s, x) in &solved {
                if let Some(c) = images[s].1.get(key) {
                    rhs -= &x.scale(*c);
                }
            }
            let c = images[&slot].1[key];
            solved.insert(slot, rhs.scale(c.inv().unwrap()));
            progress = true;
        }
        if !progress {
            break;
        }
    }
    for s in &slots {
        solved.entry(*s).or_insert_with(GradedExpr::zero);
    }
    // every entry must be reproduced exactly
    for key in &keys {
        let mut sum = GradedExpr::zero();
        for (s, x) in &solved {
            if let Some(c) = images[s].1.get(key) {
                sum += &x.scale(*c);
            }
        }
        let want = target.get(key).cloned().unwrap_or_else(GradedExpr::zero);
        if sum != want {
            return Err(LoopError::NonPolynomial(format!("entry {key:?} cannot be matched by the anomaly ansatz")));
        }
    }

    let get = |s: Slot| solved[&s].clone();
    Ok(match mode {
        TestMode::Bosonic => {
            let mut anomalies: Vec<GradedExpr> = (1..=max_order).map(|i| get(Slot::Body(i))).collect();
            while anomalies.last().is_some_and(GradedExpr::is_zero) {
                anomalies.pop();
            }
            Decomposition::Bosonic { star: get(Slot::Body(0)), anomalies }
        }
        TestMode::General => {
            let sf = |i: usize| Superfield::new(get(Slot::Body(i)), get(Slot::Soul(i)), images[&Slot::Body(i)].0);
            let mut anomalies: Vec<Superfield> = (1..=2 * max_order + 1).map(sf).collect();
            while anomalies.last().is_some_and(Superfield::is_zero) {
                anomalies.pop();
            }
            Decomposition::Super { star: sf(0), anomalies }
        }
    })
}

/// `½Σ_i (−1)^{i−1} ∂^{i−1}(f_i(A,B) + f_i(B,A))` for bosonic decompositions.
pub fn extract_pairing(patch: &Patch, ab: &Decomposition, ba: &Decomposition) -> Result<GradedExpr, LoopError> {
    let (Decomposition::Bosonic { anomalies: fa, .. }, Decomposition::Bosonic { anomalies: fb, .. }) = (ab, ba) else {
        return Err(LoopError::Unsupported("the pairing is extracted from bosonic decompositions".into()));
    };
    let mut acc = GradedExpr::zero();
    for i in 0..fa.len().max(fb.len()) {
        let mut s = fa.get(i).cloned().unwrap_or_else(GradedExpr::zero);
        if let Some(x) = fb.get(i) {
            s += x;
        }
        acc += &patch.d_sigma_n(&s, i as u32).scale(Coeff::sign(i % 2 == 1));
    }
    Ok(acc.scale(Coeff::ratio(1, 2)))
}
