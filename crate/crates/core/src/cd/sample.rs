//! Random sections: degree ≤ 2 polynomials with small integer coefficients,
//! or fully formal component symbols.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expr::{Coeff, FieldKind, GradedExpr};
use crate::tensor::{combinations, Multivector, PForm, SymTensor2, VectorField};

const NAMES: [&str; 20] =
    ["a", "b", "c", "f", "g", "h", "k", "l", "m", "n", "q", "s", "t", "u", "v", "w", "y", "z", "A", "B"];

pub struct Sampler {
    rng: ChaCha8Rng,
    dim: u8,
    formal: bool,
    next: usize,
}

impl Sampler {
    pub fn new(seed: u64, stream: u64, dim: u8) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, dim, formal: false, next: 0 }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn is_formal(&self) -> bool {
        self.formal
    }

    /// Starts a new sample tuple; formal mode draws fresh symbol names.
    pub fn begin(&mut self, formal: bool) {
        self.formal = formal;
        self.next = 0;
    }

    fn fresh(&mut self) -> &'static str {
        let name = NAMES[self.next % NAMES.len()];
        self.next += 1;
        name
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    fn small(&mut self) -> i64 {
        let c = self.rng.gen_range(1..=3);
        if self.rng.gen_bool(0.5) {
            -c
        } else {
            c
        }
    }

    /// Sparse polynomial of degree ≤ 2 in the coordinates, possibly zero.
    pub fn poly(&mut self) -> GradedExpr {
        let terms = self.rng.gen_range(0..=2);
        let mut acc = GradedExpr::zero();
        for _ in 0..terms {
            let mut t = GradedExpr::int(self.small());
            for _ in 0..self.rng.gen_range(0..=2) {
                t = t * GradedExpr::coord(self.rng.gen_range(1..=self.dim));
            }
            acc += &t;
        }
        acc
    }

    pub fn function(&mut self) -> GradedExpr {
        if self.formal {
            PForm::formal(self.dim, 0, self.fresh()).as_function()
        } else {
            self.poly()
        }
    }

    pub fn vector(&mut self) -> VectorField {
        if self.formal {
            return VectorField::formal(self.dim, self.fresh());
        }
        VectorField::from_components((0..self.dim).map(|_| self.poly()).collect())
    }

    pub fn form(&mut self, degree: usize) -> PForm {
        if self.formal {
            return PForm::formal(self.dim, degree, self.fresh());
        }
        let mut b = PForm::zero(self.dim, degree);
        for idx in combinations(self.dim, degree) {
            let c = self.poly();
            b.set(&idx, c);
        }
        b
    }

    pub fn multivector(&mut self, degree: usize) -> Multivector {
        if self.formal {
            return Multivector::formal(self.dim, degree, self.fresh());
        }
        let mut v = Multivector::zero(self.dim, degree);
        for idx in combinations(self.dim, degree) {
            let c = self.poly();
            v.set(&idx, c);
        }
        v
    }

    pub fn sym(&mut self) -> SymTensor2 {
        if self.formal {
            return SymTensor2::formal(self.dim, self.fresh());
        }
        let mut g = SymTensor2::zero(self.dim);
        for mu in 1..=self.dim {
            for nu in mu..=self.dim {
                let c = self.poly();
                g.set(mu, nu, c);
            }
        }
        g
    }

    /// A density on `T*LM`: coefficient functions times one or two of
    /// `p_μ`, `∂X^μ`, `∂p_μ`.
    pub fn density(&mut self) -> GradedExpr {
        let mut acc = GradedExpr::zero();
        for _ in 0..self.rng.gen_range(1..=2) {
            let mut t = self.function();
            if t.is_zero() {
                t = GradedExpr::int(self.small());
            }
            for _ in 0..self.rng.gen_range(1..=2) {
                let mu = self.rng.gen_range(1..=self.dim);
                let j = match self.rng.gen_range(0..3) {
                    0 => GradedExpr::jet(FieldKind::P, mu, 0),
                    1 => GradedExpr::jet(FieldKind::X, mu, 1),
                    _ => GradedExpr::jet(FieldKind::P, mu, 1),
                };
                t = t * j;
            }
            acc += &t;
        }
        acc
    }

    /// A function of `X` and its first derivatives, possibly involving `p`.
    pub fn scalar_density(&mut self) -> GradedExpr {
        let mut t = self.function();
        if self.rng.gen_bool(0.5) {
            let mu = self.rng.gen_range(1..=self.dim);
            let j = if self.rng.gen_bool(0.5) {
                GradedExpr::jet(FieldKind::P, mu, 0)
            } else {
                GradedExpr::jet(FieldKind::X, mu, 1)
            };
            t = t * j;
        }
        t + GradedExpr::constant(Coeff::int(self.small()))
    }
}
