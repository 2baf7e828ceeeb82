//! Component arrays on a formal coordinate patch.

use std::fmt;

use crate::expr::{Coeff, GradedExpr, Parity, Symmetry};

/// Strictly increasing index tuples of length `k` from `1..=dim`, in lexicographic order.
pub fn combinations(dim: u8, k: usize) -> Vec<Vec<u8>> {
    fn rec(start: u8, dim: u8, k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=dim {
            cur.push(i);
            rec(i + 1, dim, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= dim as usize {
        rec(1, dim, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Sorts a tuple, returning the permutation sign, or `None` on a repeated index.
pub fn sort_alternating(idx: &[u8]) -> Option<(bool, Vec<u8>)> {
    let mut v = idx.to_vec();
    let mut negative = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((negative, v))
}

/// Totally antisymmetric array; only increasing tuples are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AntisymArray {
    dim: u8,
    degree: usize,
    comps: Vec<GradedExpr>,
}

impl AntisymArray {
    pub fn zero(dim: u8, degree: usize) -> Self {
        let n = combinations(dim, degree).len();
        Self { dim, degree, comps: vec![GradedExpr::zero(); n] }
    }

    /// Components named `name` with the given index symmetry, one per increasing tuple.
    pub(crate) fn formal(dim: u8, degree: usize, name: &str, upper: bool) -> Self {
        let mut out = Self::zero(dim, degree);
        for (k, idx) in combinations(dim, degree).iter().enumerate() {
            out.comps[k] = if upper {
                GradedExpr::symbol(name, idx, &[], Symmetry::AntisymmetricUpper, Parity::Even)
            } else {
                GradedExpr::symbol(name, &[], idx, Symmetry::AntisymmetricLower, Parity::Even)
            };
        }
        out
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn position(&self, sorted: &[u8]) -> usize {
        // rank of an increasing tuple in lexicographic order
        combinations(self.dim, self.degree)
            .iter()
            .position(|c| c.as_slice() == sorted)
            .expect("index tuple out of range")
    }

    /// Component for an arbitrary index tuple.
    pub fn get(&self, idx: &[u8]) -> GradedExpr {
        assert_eq!(idx.len(), self.degree, "wrong number of indices");
        match sort_alternating(idx) {
            None => GradedExpr::zero(),
            Some((neg, sorted)) => {
                let c = &self.comps[self.position(&sorted)];
                if neg {
                    -c
                } else {
                    c.clone()
                }
            }
        }
    }

    /// Sets the component for an arbitrary tuple (the antisymmetric partners follow).
    pub fn set(&mut self, idx: &[u8], value: GradedExpr) {
        let (neg, sorted) = sort_alternating(idx).expect("repeated index in antisymmetric array");
        let pos = self.position(&sorted);
        self.comps[pos] = if neg { -value } else { value };
    }

    pub fn components(&self) -> impl Iterator<Item = (Vec<u8>, &GradedExpr)> {
        combinations(self.dim, self.degree).into_iter().zip(self.comps.iter())
    }

    pub fn map<F: Fn(&GradedExpr) -> GradedExpr>(&self, f: F) -> Self {
        Self { dim: self.dim, degree: self.degree, comps: self.comps.iter().map(f).collect() }
    }

    pub fn zip_with<F: Fn(&GradedExpr, &GradedExpr) -> GradedExpr>(&self, o: &Self, f: F) -> Self {
        assert_eq!((self.dim, self.degree), (o.dim, o.degree), "shape mismatch");
        Self {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(GradedExpr::is_zero)
    }
}

macro_rules! antisym_newtype {
    ($(#[$meta:meta])* $name:ident, $upper:expr) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Debug)]
        pub struct $name(pub AntisymArray);

        impl $name {
            pub fn zero(dim: u8, degree: usize) -> Self {
                Self(AntisymArray::zero(dim, degree))
            }

            pub fn formal(dim: u8, degree: usize, name: &str) -> Self {
                Self(AntisymArray::formal(dim, degree, name, $upper))
            }

            pub fn dim(&self) -> u8 {
                self.0.dim()
            }

            pub fn degree(&self) -> usize {
                self.0.degree()
            }

            pub fn get(&self, idx: &[u8]) -> GradedExpr {
                self.0.get(idx)
            }

            pub fn set(&mut self, idx: &[u8], value: GradedExpr) {
                self.0.set(idx, value)
            }

            pub fn with(mut self, idx: &[u8], value: GradedExpr) -> Self {
                self.0.set(idx, value);
                self
            }

            pub fn components(&self) -> impl Iterator<Item = (Vec<u8>, &GradedExpr)> {
                self.0.components()
            }

            pub fn map<F: Fn(&GradedExpr) -> GradedExpr>(&self, f: F) -> Self {
                Self(self.0.map(f))
            }

            pub fn zip_with<F: Fn(&GradedExpr, &GradedExpr) -> GradedExpr>(&self, o: &Self, f: F) -> Self {
                Self(self.0.zip_with(&o.0, f))
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_zero()
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let mut any = false;
                for (idx, c) in self.components() {
                    if c.is_zero() {
                        continue;
                    }
                    if any {
                        f.write_str(", ")?;
                    }
                    let label: String = idx.iter().map(|i| i.to_string()).collect();
                    write!(f, "[{}]: {}", label, c)?;
                    any = true;
                }
                if !any {
                    f.write_str("0")?;
                }
                Ok(())
            }
        }
    };
}

antisym_newtype!(
    /// Differential p-form `Σ_{I increasing} β_I dx^I`.
    PForm,
    false
);
antisym_newtype!(
    /// Antisymmetric multivector field. Contractions with the odd momenta run
    /// over all index tuples.
    Multivector,
    true
);

impl PForm {
    /// A 0-form from a function.
    pub fn function(dim: u8, f: GradedExpr) -> Self {
        Self::zero(dim, 0).with(&[], f)
    }

    /// The function underlying a 0-form.
    pub fn as_function(&self) -> GradedExpr {
        assert_eq!(self.degree(), 0);
        self.get(&[])
    }

    /// `dx^{i₁} ∧ … ∧ dx^{i_p}` times `coefficient`.
    pub fn basis(dim: u8, idx: &[u8], coefficient: GradedExpr) -> Self {
        Self::zero(dim, idx.len()).with(idx, coefficient)
    }
}

/// Vector field `v^μ ∂_μ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    comps: Vec<GradedExpr>,
}

impl VectorField {
    pub fn zero(dim: u8) -> Self {
        Self { comps: vec![GradedExpr::zero(); dim as usize] }
    }

    pub fn from_components(comps: Vec<GradedExpr>) -> Self {
        Self { comps }
    }

    /// The coordinate field `∂_μ`.
    pub fn coordinate(dim: u8, mu: u8) -> Self {
        let mut v = Self::zero(dim);
        v.comps[mu as usize - 1] = GradedExpr::one();
        v
    }

    pub fn formal(dim: u8, name: &str) -> Self {
        Self { comps: (1..=dim).map(|mu| GradedExpr::symbol(name, &[mu], &[], Symmetry::None, Parity::Even)).collect() }
    }

    pub fn dim(&self) -> u8 {
        self.comps.len() as u8
    }

    pub fn get(&self, mu: u8) -> &GradedExpr {
        &self.comps[mu as usize - 1]
    }

    pub fn set(&mut self, mu: u8, value: GradedExpr) {
        self.comps[mu as usize - 1] = value;
    }

    pub fn with(mut self, mu: u8, value: GradedExpr) -> Self {
        self.set(mu, value);
        self
    }

    pub fn components(&self) -> impl Iterator<Item = (u8, &GradedExpr)> {
        self.comps.iter().enumerate().map(|(k, c)| (k as u8 + 1, c))
    }

    pub fn map<F: Fn(&GradedExpr) -> GradedExpr>(&self, f: F) -> Self {
        Self { comps: self.comps.iter().map(f).collect() }
    }

    pub fn zip_with<F: Fn(&GradedExpr, &GradedExpr) -> GradedExpr>(&self, o: &Self, f: F) -> Self {
        assert_eq!(self.dim(), o.dim());
        Self { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(GradedExpr::is_zero)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.components().filter(|(_, c)| !c.is_zero()).map(|(mu, c)| format!("[{mu}]: {c}")).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(", "))
        }
    }
}

/// Symmetric covariant 2-tensor `γ_{μν} dx^μ ⊗ dx^ν` (summed over all μ, ν).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymTensor2 {
    dim: u8,
    comps: Vec<GradedExpr>,
}

fn sym_pos(dim: u8, mu: u8, nu: u8) -> usize {
    let (a, b) = if mu <= nu { (mu, nu) } else { (nu, mu) };
    let (a, b, n) = (a as usize - 1, b as usize - 1, dim as usize);
    // row-major upper triangle
    a * n - a * (a + 1) / 2 + b
}

impl SymTensor2 {
    pub fn zero(dim: u8) -> Self {
        let n = dim as usize;
        Self { dim, comps: vec![GradedExpr::zero(); n * (n + 1) / 2] }
    }

    pub fn formal(dim: u8, name: &str) -> Self {
        let mut out = Self::zero(dim);
        for mu in 1..=dim {
            for nu in mu..=dim {
                out.set(mu, nu, GradedExpr::symbol(name, &[], &[mu, nu], Symmetry::SymmetricLower, Parity::Even));
            }
        }
        out
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn get(&self, mu: u8, nu: u8) -> &GradedExpr {
        &self.comps[sym_pos(self.dim, mu, nu)]
    }

    pub fn set(&mut self, mu: u8, nu: u8, value: GradedExpr) {
        let k = sym_pos(self.dim, mu, nu);
        self.comps[k] = value;
    }

    pub fn with(mut self, mu: u8, nu: u8, value: GradedExpr) -> Self {
        self.set(mu, nu, value);
        self
    }

    /// Builds `½(t_{μν} + t_{νμ})` from a full matrix accessor.
    pub fn symmetrize<F: Fn(u8, u8) -> GradedExpr>(dim: u8, t: F) -> Self {
        let mut out = Self::zero(dim);
        for mu in 1..=dim {
            for nu in mu..=dim {
                let s = if mu == nu { t(mu, mu) } else { (t(mu, nu) + t(nu, mu)).scale(Coeff::ratio(1, 2)) };
                out.set(mu, nu, s);
            }
        }
        out
    }

    pub fn components(&self) -> impl Iterator<Item = ((u8, u8), &GradedExpr)> {
        let dim = self.dim;
        (1..=dim)
            .flat_map(move |mu| (mu..=dim).map(move |nu| (mu, nu)))
            .map(move |(mu, nu)| ((mu, nu), self.get(mu, nu)))
    }

    pub fn map<F: Fn(&GradedExpr) -> GradedExpr>(&self, f: F) -> Self {
        Self { dim: self.dim, comps: self.comps.iter().map(f).collect() }
    }

    pub fn zip_with<F: Fn(&GradedExpr, &GradedExpr) -> GradedExpr>(&self, o: &Self, f: F) -> Self {
        assert_eq!(self.dim, o.dim);
        Self { dim: self.dim, comps: self.comps.iter().zip(&o.comps).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(GradedExpr::is_zero)
    }
}

impl fmt::Display for SymTensor2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.components().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| format!("[{a}{b}]: {c}")).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(", "))
        }
    }
}

/// Torsionless connection coefficients `Γ^μ_{νρ} = Γ^μ_{ρν}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Connection {
    dim: u8,
    // one symmetric lower block per upper index
    blocks: Vec<SymTensor2>,
}

impl Connection {
    pub fn flat(dim: u8) -> Self {
        Self { dim, blocks: vec![SymTensor2::zero(dim); dim as usize] }
    }

    /// Fully formal coefficients `Γ^μ_{νρ}` named `name`.
    pub fn formal(dim: u8, name: &str) -> Self {
        let mut out = Self::flat(dim);
        for mu in 1..=dim {
            for nu in 1..=dim {
                for rho in nu..=dim {
                    out.set(
                        mu,
                        nu,
                        rho,
                        GradedExpr::symbol(name, &[mu], &[nu, rho], Symmetry::Connection, Parity::Even),
                    );
                }
            }
        }
        out
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn get(&self, mu: u8, nu: u8, rho: u8) -> &GradedExpr {
        self.blocks[mu as usize - 1].get(nu, rho)
    }

    pub fn set(&mut self, mu: u8, nu: u8, rho: u8, value: GradedExpr) {
        self.blocks[mu as usize - 1].set(nu, rho, value);
    }

    pub fn is_flat(&self) -> bool {
        self.blocks.iter().all(SymTensor2::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(3, 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(4, 0), vec![Vec::<u8>::new()]);
        assert!(combinations(3, 4).is_empty());
    }

    #[test]
    fn antisymmetric_access() {
        let mut b = PForm::zero(3, 2);
        b.set(&[2, 1], GradedExpr::int(5));
        assert_eq!(b.get(&[1, 2]), GradedExpr::int(-5));
        assert_eq!(b.get(&[2, 1]), GradedExpr::int(5));
        assert!(b.get(&[2, 2]).is_zero());
    }

    #[test]
    fn symmetric_access() {
        let g = SymTensor2::zero(3).with(3, 1, GradedExpr::int(2));
        assert_eq!(g.get(1, 3), &GradedExpr::int(2));
        assert_eq!(g.components().count(), 6);
    }
}
