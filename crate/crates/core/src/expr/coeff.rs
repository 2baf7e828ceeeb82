//! Gaussian rationals `a + b i` with exact rational parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = Ratio<i64>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Coeff {
    pub re: Rational,
    pub im: Rational,
}

impl Coeff {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Self::new(Rational::from_integer(n), Rational::zero())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(Rational::new(num, den), Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let norm = self.re * self.re + self.im * self.im;
        if norm.is_zero() {
            return None;
        }
        Some(Self::new(self.re / norm, -self.im / norm))
    }

    /// `(-1)^k`
    pub fn sign(negative: bool) -> Self {
        if negative {
            Self::int(-1)
        } else {
            Self::one()
        }
    }

    /// `i^k` for any integer power.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::int(-1),
            _ => -Self::i(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.is_empty() {
            return None;
        }
        if let Some(rest) = s.strip_suffix('i') {
            let im = if rest.is_empty() || rest == "+" {
                Rational::one()
            } else if rest == "-" {
                -Rational::one()
            } else {
                parse_rational(rest)?
            };
            return Some(Self::new(Rational::zero(), im));
        }
        Some(Self::new(parse_rational(s)?, Rational::zero()))
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Rational::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-self.im).is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}i", fmt_rational(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", fmt_rational(&self.re), sign, fmt_rational(&self.im.abs()))
            }
        }
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, o: Coeff) -> Coeff {
        Coeff::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign for Coeff {
    fn add_assign(&mut self, o: Coeff) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, o: Coeff) -> Coeff {
        Coeff::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::new(-self.re, -self.im)
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, o: Coeff) -> Coeff {
        Coeff::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Coeff {
    type Output = Coeff;
    fn div(self, o: Coeff) -> Coeff {
        self * o.inv().expect("division by zero coefficient")
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::int(n)
    }
}

/// Serialized as `"re im"` with exact rationals.
impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_display(&s).ok_or_else(|| serde::de::Error::custom(format!("bad coefficient {s}")))
    }
}

/// Inverse of `Display`.
pub fn parse_display(s: &str) -> Option<Coeff> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix("i)")) {
        // (a+bi) / (a-bi); the real part may itself carry a leading sign
        let bytes = inner.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| bytes[k] == b'+' || bytes[k] == b'-')?;
        let re = parse_rational(&inner[..split])?;
        let im = parse_rational(&inner[split..].replace('+', ""))?;
        return Some(Coeff::new(re, im));
    }
    Coeff::parse(s)
}
