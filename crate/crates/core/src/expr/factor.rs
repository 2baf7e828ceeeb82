//! Generators of the free graded-commutative algebra.

use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Coordinate index lists. Indices are 1-based.
pub type Indices = SmallVec<[u8; 4]>;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn of_degree(k: usize) -> Self {
        Self::from_bit(k % 2 == 1)
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Self {
        Self::from_bit(!self.is_odd())
    }

    /// Koszul sign exponent of swapping objects of parities `self` and `other`.
    pub fn swaps_sign(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, o: Parity) -> Parity {
        Parity::from_bit(self.is_odd() != o.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Phase-space component fields: `X^μ`, `λ^μ`, `p_μ`, `ρ_μ`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum FieldKind {
    X,
    Lambda,
    P,
    Rho,
}

impl FieldKind {
    pub const ALL: [FieldKind; 4] = [FieldKind::X, FieldKind::Lambda, FieldKind::P, FieldKind::Rho];

    pub fn parity(self) -> Parity {
        match self {
            FieldKind::X | FieldKind::P => Parity::Even,
            FieldKind::Lambda | FieldKind::Rho => Parity::Odd,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldKind::X => "X",
            FieldKind::Lambda => "lam",
            FieldKind::P => "p",
            FieldKind::Rho => "rho",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "X" => FieldKind::X,
            "lam" => FieldKind::Lambda,
            "p" => FieldKind::P,
            "rho" => FieldKind::Rho,
            _ => return None,
        })
    }

    fn upper(self) -> bool {
        matches!(self, FieldKind::X | FieldKind::Lambda)
    }
}

/// A σ-jet `∂^order` of a component field.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct JetVar {
    pub field: FieldKind,
    pub index: u8,
    pub order: u8,
}

impl JetVar {
    pub fn new(field: FieldKind, index: u8, order: u8) -> Self {
        Self { field, index, order }
    }

    pub fn parity(&self) -> Parity {
        self.field.parity()
    }
}

/// Index symmetry carried by a formal component symbol.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    None,
    AntisymmetricLower,
    AntisymmetricUpper,
    SymmetricLower,
    /// `Γ^μ_{νρ}`: symmetric in the two lower indices.
    Connection,
}

impl Symmetry {
    pub fn name(self) -> &'static str {
        match self {
            Symmetry::None => "none",
            Symmetry::AntisymmetricLower => "anti-lower",
            Symmetry::AntisymmetricUpper => "anti-upper",
            Symmetry::SymmetricLower => "sym-lower",
            Symmetry::Connection => "connection",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "none" => Symmetry::None,
            "anti-lower" => Symmetry::AntisymmetricLower,
            "anti-upper" => Symmetry::AntisymmetricUpper,
            "sym-lower" => Symmetry::SymmetricLower,
            "connection" => Symmetry::Connection,
            _ => return None,
        })
    }
}

/// Opaque component function of the base coordinates, with formal partials.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ComponentSymbol {
    pub name: Arc<str>,
    pub upper: Indices,
    pub lower: Indices,
    pub partials: Indices,
    pub symmetry: Symmetry,
    pub parity: Parity,
}

/// Sorts `idx` in place; returns the permutation sign, or `None` on a repeat
/// when `alternating`.
fn sort_indices(idx: &mut Indices, alternating: bool) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if alternating && idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(negative)
}

impl ComponentSymbol {
    /// Canonicalizes index order. Returns `None` if the symbol vanishes by
    /// antisymmetry, otherwise the sign picked up and the canonical symbol.
    pub fn canonical(
        name: &str,
        upper: &[u8],
        lower: &[u8],
        symmetry: Symmetry,
        parity: Parity,
    ) -> Option<(bool, Self)> {
        let mut upper: Indices = upper.iter().copied().collect();
        let mut lower: Indices = lower.iter().copied().collect();
        let negative = match symmetry {
            Symmetry::None => false,
            Symmetry::AntisymmetricLower => sort_indices(&mut lower, true)?,
            Symmetry::AntisymmetricUpper => sort_indices(&mut upper, true)?,
            Symmetry::SymmetricLower | Symmetry::Connection => {
                sort_indices(&mut lower, false);
                false
            }
        };
        Some((negative, Self { name: Arc::from(name), upper, lower, partials: Indices::new(), symmetry, parity }))
    }

    pub fn with_partial(&self, nu: u8) -> Self {
        let mut out = self.clone();
        let pos = out.partials.iter().position(|&k| k > nu).unwrap_or(out.partials.len());
        out.partials.insert(pos, nu);
        out
    }
}

/// Component of a test superfield `ε = ε⁰ + θ ε¹`, possibly σ-differentiated.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TestFn {
    pub id: u8,
    /// 0 for the body, 1 for the θ-component.
    pub theta: u8,
    pub order: u8,
    /// Parity of the superfield `ε` itself.
    pub base: Parity,
}

impl TestFn {
    pub fn new(id: u8, theta: u8, order: u8, base: Parity) -> Self {
        debug_assert!(theta <= 1);
        Self { id, theta, order, base }
    }

    pub fn parity(&self) -> Parity {
        if self.theta == 1 {
            self.base.flip()
        } else {
            self.base
        }
    }

    pub fn derived(&self, k: u8) -> Self {
        Self { order: self.order + k, ..*self }
    }
}

/// σ-independent constant such as the graded parameter `e`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ConstSym {
    pub name: Arc<str>,
    pub parity: Parity,
}

/// One generator. The derived order (kind first) is the canonical odd-factor order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Factor {
    Jet(JetVar),
    Test(TestFn),
    Const(ConstSym),
    Sym(ComponentSymbol),
}

impl Factor {
    pub fn parity(&self) -> Parity {
        match self {
            Factor::Jet(j) => j.parity(),
            Factor::Test(t) => t.parity(),
            Factor::Const(c) => c.parity,
            Factor::Sym(s) => s.parity,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity().is_odd()
    }
}

fn write_indices(f: &mut fmt::Formatter<'_>, idx: &[u8]) -> fmt::Result {
    for i in idx {
        write!(f, "{i}")?;
    }
    Ok(())
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Jet(j) => {
                for _ in 0..j.order {
                    f.write_str("d")?;
                }
                let sep = if j.field.upper() { '^' } else { '_' };
                write!(f, "{}{}{}", j.field.name(), sep, j.index)
            }
            Factor::Test(t) => {
                for _ in 0..t.order {
                    f.write_str("d")?;
                }
                write!(f, "eps{}", t.id)?;
                if t.theta == 1 {
                    f.write_str("~")?;
                }
                Ok(())
            }
            Factor::Const(c) => f.write_str(&c.name),
            Factor::Sym(s) => {
                f.write_str(&s.name)?;
                if !s.upper.is_empty() {
                    f.write_str("^")?;
                    write_indices(f, &s.upper)?;
                }
                if !s.lower.is_empty() {
                    f.write_str("_")?;
                    write_indices(f, &s.lower)?;
                }
                if !s.partials.is_empty() {
                    f.write_str(".")?;
                    write_indices(f, &s.partials)?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisymmetric_canonicalization() {
        let (neg, s) =
            ComponentSymbol::canonical("b", &[], &[2, 1], Symmetry::AntisymmetricLower, Parity::Even).unwrap();
        assert!(neg);
        assert_eq!(s.lower.as_slice(), &[1, 2]);
        assert!(ComponentSymbol::canonical("b", &[], &[2, 2], Symmetry::AntisymmetricLower, Parity::Even).is_none());
        let (neg, s) = ComponentSymbol::canonical("g", &[], &[3, 1], Symmetry::SymmetricLower, Parity::Even).unwrap();
        assert!(!neg);
        assert_eq!(s.lower.as_slice(), &[1, 3]);
    }

    #[test]
    fn partials_commute() {
        let (_, s) = ComponentSymbol::canonical("f", &[], &[], Symmetry::None, Parity::Even).unwrap();
        assert_eq!(s.with_partial(2).with_partial(1), s.with_partial(1).with_partial(2));
    }

    #[test]
    fn test_fn_component_parity() {
        let t = TestFn::new(1, 1, 0, Parity::Even);
        assert_eq!(t.parity(), Parity::Odd);
        assert_eq!(t.derived(2).order, 2);
    }
}
