use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::coeff::Coeff;
use super::factor::{ComponentSymbol, ConstSym, Factor, FieldKind, JetVar, Parity, Symmetry, TestFn};
use super::ExprError;

/// A sorted product of generators. Odd generators appear at most once.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<Factor>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parity(&self) -> Parity {
        parity_of_slice(&self.0)
    }

    /// Sorts an arbitrary factor list under the Koszul rule.
    /// Returns `(negative, monomial)`, or `None` if an odd factor repeats.
    pub fn from_factors(mut v: Vec<Factor>) -> Option<(bool, Monomial)> {
        let mut negative = false;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                if v[j - 1].is_odd() && v[j].is_odd() {
                    negative = !negative;
                }
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1] && w[0].is_odd()) {
            return None;
        }
        Some((negative, Monomial(v)))
    }

    /// Graded product `self · other`.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        let a = &self.0;
        let b = &other.0;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut odd_left_in_a = a.iter().filter(|f| f.is_odd()).count();
        let mut negative = false;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if b[j] < a[i] {
                if b[j].is_odd() && odd_left_in_a % 2 == 1 {
                    negative = !negative;
                }
                out.push(b[j].clone());
                j += 1;
            } else {
                if a[i] == b[j] && a[i].is_odd() {
                    return None;
                }
                if a[i].is_odd() {
                    odd_left_in_a -= 1;
                }
                out.push(a[i].clone());
                i += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Some((negative, Monomial(out)))
    }

    /// The monomial with the factor at `i` removed (order is preserved).
    pub fn without(&self, i: usize) -> Monomial {
        let mut v = self.0.clone();
        v.remove(i);
        Monomial(v)
    }

    pub fn parity_before(&self, i: usize) -> Parity {
        parity_of_slice(&self.0[..i])
    }

    pub fn parity_after(&self, i: usize) -> Parity {
        parity_of_slice(&self.0[i + 1..])
    }

    /// Replaces the factor at `i` by a list of factors and re-normalizes.
    /// Valid for parity-preserving substitutions only.
    pub fn replace(&self, i: usize, with: &[Factor]) -> Option<(bool, Monomial)> {
        let mut v = Vec::with_capacity(self.0.len() + with.len());
        v.extend_from_slice(&self.0[..i]);
        v.extend_from_slice(with);
        v.extend_from_slice(&self.0[i + 1..]);
        Monomial::from_factors(v)
    }
}

fn parity_of_slice(fs: &[Factor]) -> Parity {
    Parity::from_bit(fs.iter().filter(|f| f.is_odd()).count() % 2 == 1)
}

/// Normalized element of the free graded-commutative algebra over the
/// Gaussian rationals. Terms are sorted by monomial with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GradedExpr {
    terms: Vec<(Monomial, Coeff)>,
}

/// Accumulates terms in normal form.
#[derive(Default)]
pub struct ExprAcc(BTreeMap<Monomial, Coeff>);

impl ExprAcc {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// Adds `c · factors`, normalizing the factor order.
    pub fn add_factors(&mut self, factors: Vec<Factor>, c: Coeff) {
        if let Some((neg, m)) = Monomial::from_factors(factors) {
            self.add(m, if neg { -c } else { c });
        }
    }

    pub fn add_expr(&mut self, e: &GradedExpr, scale: Coeff) {
        for (m, c) in &e.terms {
            self.add(m.clone(), *c * scale);
        }
    }

    pub fn finish(self) -> GradedExpr {
        GradedExpr { terms: self.0.into_iter().collect() }
    }
}

impl GradedExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GradedExpr { terms: vec![(Monomial::one(), c)] }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Coeff::int(n))
    }

    pub fn factor(f: Factor) -> Self {
        GradedExpr { terms: vec![(Monomial(vec![f]), Coeff::one())] }
    }

    pub fn jet(field: FieldKind, index: u8, order: u8) -> Self {
        Self::factor(Factor::Jet(JetVar::new(field, index, order)))
    }

    /// The base coordinate `x^μ`, i.e. the order-0 jet of `X^μ`.
    pub fn coord(mu: u8) -> Self {
        Self::jet(FieldKind::X, mu, 0)
    }

    pub fn from_monomial(m: Monomial, c: Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GradedExpr { terms: vec![(m, c)] }
    }

    pub fn test(t: TestFn) -> Self {
        Self::factor(Factor::Test(t))
    }

    pub fn constant_symbol(name: &str, parity: Parity) -> Self {
        Self::factor(Factor::Const(ConstSym { name: name.into(), parity }))
    }

    /// Formal component symbol, canonicalized (may be zero or negated).
    pub fn symbol(name: &str, upper: &[u8], lower: &[u8], symmetry: Symmetry, parity: Parity) -> Self {
        match ComponentSymbol::canonical(name, upper, lower, symmetry, parity) {
            None => Self::zero(),
            Some((neg, s)) => {
                let e = Self::factor(Factor::Sym(s));
                if neg {
                    -e
                } else {
                    e
                }
            }
        }
    }

    /// Normalizes a raw, unordered term list.
    pub fn from_terms(raw: Vec<(Coeff, Vec<Factor>)>) -> Result<Self, ExprError> {
        let mut acc = ExprAcc::new();
        let mut parity = None;
        for (c, fs) in raw {
            let p = parity_of_slice(&fs);
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => return Err(ExprError::MixedParity),
                _ => {}
            }
            acc.add_factors(fs, c);
        }
        Ok(acc.finish())
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common parity of all terms. The zero expression reports `Even`.
    pub fn parity(&self) -> Result<Parity, ExprError> {
        let mut it = self.terms.iter().map(|(m, _)| m.parity());
        let Some(p) = it.next() else {
            return Ok(Parity::Even);
        };
        if it.all(|q| q == p) {
            Ok(p)
        } else {
            Err(ExprError::MixedParity)
        }
    }

    pub fn scale(&self, c: Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GradedExpr { terms: self.terms.iter().map(|(m, k)| (m.clone(), *k * c)).collect() }
    }

    /// The coefficient of the empty monomial.
    pub fn constant_term(&self) -> Coeff {
        match self.terms.first() {
            Some((m, c)) if m.is_empty() => *c,
            _ => Coeff::zero(),
        }
    }

    /// Applies a linear map term by term: `f(monomial)` returns the image of the
    /// monomial with unit coefficient.
    pub fn map_linear<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&Monomial, &mut ExprAcc, Coeff),
    {
        let mut acc = ExprAcc::new();
        for (m, c) in &self.terms {
            f(m, &mut acc, *c);
        }
        acc.finish()
    }

    /// Keeps only the terms for which `keep` holds.
    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Self {
        GradedExpr { terms: self.terms.iter().filter(|(m, _)| keep(m)).cloned().collect() }
    }

    pub fn factors(&self) -> impl Iterator<Item = &Factor> {
        self.terms.iter().flat_map(|(m, _)| m.factors().iter())
    }

    fn merge(&self, other: &Self, sign: Coeff) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0.clone(), b[j].1 * sign));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a[i].1 + b[j].1 * sign;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), *c * sign)));
        GradedExpr { terms: out }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut acc = ExprAcc::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = *ca * *cb;
                    acc.add(m, if neg { -c } else { c });
                }
            }
        }
        acc.finish()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| GradedExpr::mul(&acc, self))
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a GradedExpr>>(items: I) -> Self {
        let mut acc = ExprAcc::new();
        for e in items {
            acc.add_expr(e, Coeff::one());
        }
        acc.finish()
    }
}

impl fmt::Display for GradedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let zero = num_rational::Ratio::from_integer(0);
            let negative = (c.im == zero && c.re < zero) || (c.re == zero && c.im < zero);
            let c_abs = if negative { -*c } else { *c };
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mut first = true;
            if !c_abs.is_one() || m.is_empty() {
                write!(f, "{c_abs}")?;
                first = false;
            }
            for fac in m.factors() {
                if !first {
                    f.write_str("*")?;
                }
                write!(f, "{fac}")?;
                first = false;
            }
        }
        Ok(())
    }
}

impl Add<&GradedExpr> for &GradedExpr {
    type Output = GradedExpr;
    fn add(self, o: &GradedExpr) -> GradedExpr {
        self.merge(o, Coeff::one())
    }
}

impl Add for GradedExpr {
    type Output = GradedExpr;
    fn add(self, o: GradedExpr) -> GradedExpr {
        &self + &o
    }
}

impl Sub<&GradedExpr> for &GradedExpr {
    type Output = GradedExpr;
    fn sub(self, o: &GradedExpr) -> GradedExpr {
        self.merge(o, Coeff::int(-1))
    }
}

impl Sub for GradedExpr {
    type Output = GradedExpr;
    fn sub(self, o: GradedExpr) -> GradedExpr {
        &self - &o
    }
}

impl AddAssign<&GradedExpr> for GradedExpr {
    fn add_assign(&mut self, o: &GradedExpr) {
        *self = self.merge(o, Coeff::one());
    }
}

impl SubAssign<&GradedExpr> for GradedExpr {
    fn sub_assign(&mut self, o: &GradedExpr) {
        *self = self.merge(o, Coeff::int(-1));
    }
}

impl Neg for GradedExpr {
    type Output = GradedExpr;
    fn neg(self) -> GradedExpr {
        self.scale(Coeff::int(-1))
    }
}

impl Neg for &GradedExpr {
    type Output = GradedExpr;
    fn neg(self) -> GradedExpr {
        self.scale(Coeff::int(-1))
    }
}

impl Mul<&GradedExpr> for &GradedExpr {
    type Output = GradedExpr;
    fn mul(self, o: &GradedExpr) -> GradedExpr {
        GradedExpr::mul(self, o)
    }
}

impl Mul<GradedExpr> for &GradedExpr {
    type Output = GradedExpr;
    fn mul(self, o: GradedExpr) -> GradedExpr {
        GradedExpr::mul(self, &o)
    }
}

impl Mul<&GradedExpr> for GradedExpr {
    type Output = GradedExpr;
    fn mul(self, o: &GradedExpr) -> GradedExpr {
        GradedExpr::mul(&self, o)
    }
}

impl Mul for GradedExpr {
    type Output = GradedExpr;
    fn mul(self, o: GradedExpr) -> GradedExpr {
        GradedExpr::mul(&self, &o)
    }
}

impl Mul<Coeff> for &GradedExpr {
    type Output = GradedExpr;
    fn mul(self, c: Coeff) -> GradedExpr {
        self.scale(c)
    }
}

impl Mul<Coeff> for GradedExpr {
    type Output = GradedExpr;
    fn mul(self, c: Coeff) -> GradedExpr {
        self.scale(c)
    }
}
