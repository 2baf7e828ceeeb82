//! Courant-Dorfman axiom checking on sampled sections.

pub mod dirac;
pub mod instances;
pub mod sample;

use serde::Serialize;
use thiserror::Error;

use crate::loopspace::LoopError;
use crate::tensor::{Linear, TensorError};

pub use dirac::{dirac_certificate_check, Certificate, DiracReport};
pub use instances::{
    builtin_instances, instance, instance_names, Forms, FormsExt, InstanceConfig, IntegrandInstance,
    MultivectorInstance, Standard, SymTensor,
};
pub use sample::Sampler;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CdError {
    #[error("instance `{0}` has no module structure")]
    NoModule(String),
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("malformed certificate: {0}")]
    Certificate(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Loop(#[from] LoopError),
}

/// How section-valued identities are compared.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equality {
    Exact,
    ModTotalDerivative,
}

/// A bracket, pairing and derivation on a space of sections `E` over scalars `R`.
pub trait CdAlgebra: Send + Sync + 'static {
    type E: Linear;
    type R: Linear;

    fn name(&self) -> String;
    fn dim(&self) -> u8;
    fn sample_section(&self, s: &mut Sampler) -> Self::E;
    fn sample_scalar(&self, s: &mut Sampler) -> Self::R;
    fn bracket(&self, a: &Self::E, b: &Self::E) -> Result<Self::E, CdError>;
    fn pairing(&self, a: &Self::E, b: &Self::E) -> Result<Self::R, CdError>;
    fn derivation(&self, f: &Self::R) -> Result<Self::E, CdError>;
    fn show_section(&self, a: &Self::E) -> String;
    fn show_scalar(&self, f: &Self::R) -> String;

    fn equality(&self) -> Equality {
        Equality::Exact
    }

    fn section_is_zero(&self, a: &Self::E) -> bool {
        a.vanishes()
    }

    fn scalar_is_zero(&self, f: &Self::R) -> bool {
        f.vanishes()
    }

    /// `f·A` when the sections form a module over the scalars.
    fn act(&self, _f: &Self::R, _a: &Self::E) -> Option<Self::E> {
        None
    }

    /// The bracket with a single term's sign flipped.
    fn corrupted_bracket(&self, a: &Self::E, b: &Self::E) -> Result<Self::E, CdError>;
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Failure {
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomReport {
    pub instance: String,
    pub axiom: String,
    pub samples: usize,
    pub failures: Vec<Failure>,
    pub seed: u64,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every `FORMAL_EVERY`-th sample uses formal symbols instead of polynomials.
pub const FORMAL_EVERY: usize = 10;

/// Recorded failures per axiom are capped; the count is not.
const MAX_RECORDED: usize = 5;

/// Object-safe view of a packaged instance.
pub trait Instance: Send + Sync {
    fn name(&self) -> String;
    /// Whether the strong axioms (module structure) apply.
    fn has_module(&self) -> bool;
    fn check_weak(&self, samples: usize, seed: u64) -> Result<Vec<AxiomReport>, CdError>;
    fn check_strong(&self, samples: usize, seed: u64) -> Result<Vec<AxiomReport>, CdError>;
    /// The same instance with its bracket corrupted by a single sign flip.
    fn mutated(&self) -> Box<dyn Instance>;
}

/// A `CdAlgebra` run through the generic suite.
pub struct Packaged<A: CdAlgebra> {
    pub algebra: std::sync::Arc<A>,
    pub corrupt: bool,
}

impl<A: CdAlgebra> Packaged<A> {
    pub fn new(algebra: A) -> Self {
        Self { algebra: std::sync::Arc::new(algebra), corrupt: false }
    }

    fn star(&self, a: &A::E, b: &A::E) -> Result<A::E, CdError> {
        if self.corrupt {
            self.algebra.corrupted_bracket(a, b)
        } else {
            self.algebra.bracket(a, b)
        }
    }

    fn run<F>(&self, axiom: &str, stream: u64, samples: usize, seed: u64, mut case: F) -> Result<AxiomReport, CdError>
    where
        F: FnMut(&Self, &mut Sampler) -> Result<Option<Failure>, CdError>,
    {
        let mut s = Sampler::new(seed, stream, self.algebra.dim());
        let mut failures = Vec::new();
        for i in 0..samples {
            s.begin(i % FORMAL_EVERY == FORMAL_EVERY - 1);
            if let Some(f) = case(self, &mut s)? {
                if failures.len() < MAX_RECORDED {
                    failures.push(f);
                }
            }
        }
        Ok(AxiomReport { instance: self.name(), axiom: axiom.to_string(), samples, failures, seed })
    }

    fn failure(&self, inputs: Vec<String>, lhs: String, rhs: String) -> Option<Failure> {
        Some(Failure { inputs, lhs, rhs })
    }

    fn sections(&self, xs: &[&A::E]) -> Vec<String> {
        xs.iter().map(|x| self.algebra.show_section(x)).collect()
    }

    fn symmetrization(&self, s: &mut Sampler) -> Result<Option<Failure>, CdError> {
        let alg = &self.algebra;
        let (a, b) = (alg.sample_section(s), alg.sample_section(s));
        let lhs = self.star(&a, &b)?.plus(&self.star(&b, &a)?);
        let rhs = alg.derivation(&alg.pairing(&a, &b)?)?;
        Ok(if alg.section_is_zero(&lhs.minus(&rhs)) {
            None
        } else {
            self.failure(self.sections(&[&a, &b]), alg.show_section(&lhs), alg.show_section(&rhs))
        })
    }

    fn leibniz(&self, s: &mut Sampler) -> Result<Option<Failure>, CdError> {
        let alg = &self.algebra;
        let (a, b, c) = (alg.sample_section(s), alg.sample_section(s), alg.sample_section(s));
        let lhs = self.star(&a, &self.star(&b, &c)?)?;
        let rhs = self.star(&self.star(&a, &b)?, &c)?.plus(&self.star(&b, &self.star(&a, &c)?)?);
        Ok(if alg.section_is_zero(&lhs.minus(&rhs)) {
            None
        } else {
            self.failure(self.sections(&[&a, &b, &c]), alg.show_section(&lhs), alg.show_section(&rhs))
        })
    }

    /// `(⟨A, ∂⟨B,C⟩⟩, ⟨A*B, C⟩ + ⟨B, A*C⟩)`.
    fn invariance_sides(&self, a: &A::E, b: &A::E, c: &A::E) -> Result<(A::R, A::R), CdError> {
        let alg = &self.algebra;
        let lhs = alg.pairing(a, &alg.derivation(&alg.pairing(b, c)?)?)?;
        let rhs = alg.pairing(&self.star(a, b)?, c)?.plus(&alg.pairing(b, &self.star(a, c)?)?);
        Ok((lhs, rhs))
    }

    fn weak_invariance(&self, s: &mut Sampler) -> Result<Option<Failure>, CdError> {
        let alg = &self.algebra;
        let (a, b, c) = (alg.sample_section(s), alg.sample_section(s), alg.sample_section(s));
        let (l, r) = self.invariance_sides(&a, &b, &c)?;
        let (dl, dr) = (alg.derivation(&l)?, alg.derivation(&r)?);
        Ok(if alg.section_is_zero(&dl.minus(&dr)) {
            None
        } else {
            self.failure(self.sections(&[&a, &b, &c]), alg.show_section(&dl), alg.show_section(&dr))
        })
    }

    fn strong_invariance(&self, s: &mut Sampler) -> Result<Option<Failure>, CdError> {
        let alg = &self.algebra;
        let (a, b, c) = (alg.sample_section(s), alg.sample_section(s), alg.sample_section(s));
        let (l, r) = self.invariance_sides(&a, &b, &c)?;
        Ok(if alg.scalar_is_zero(&l.minus(&r)) {
            None
        } else {
            self.failure(self.sections(&[&a, &b, &c]), alg.show_scalar(&l), alg.show_scalar(&r))
        })
    }

    fn exact_bracket(&self, s: &mut Sampler) -> Result<Option<Failure>, CdError> {
        let alg = &self.algebra;
        let f = alg.sample_scalar(s);
        let a = alg.sample_section(s);
        let lhs = self.star(&alg.derivation(&f)?, &a)?;
        Ok(if alg.section_is_zero(&lhs) {
            None
        } else {
            let mut inputs = vec![alg.show_scalar(&f)];
            inputs.extend(self.sections(&[&a]));
            self.failure(inputs, alg.show_section(&lhs), "0".into())
        })
    }

    fn exact_pairing(&self, s: &mut Sampler) -> Result<Option<Failure>, CdError> {
        let alg = &self.algebra;
        let (f, g) = (alg.sample_scalar(s), alg.sample_scalar(s));
        let lhs = alg.pairing(&alg.derivation(&f)?, &alg.derivation(&g)?)?;
        Ok(if alg.scalar_is_zero(&lhs) {
            None
        } else {
            self.failure(vec![alg.show_scalar(&f), alg.show_scalar(&g)], alg.show_scalar(&lhs), "0".into())
        })
    }

    /// `A*(fB) = f(A*B) + ⟨A, ∂f⟩B`.
    fn module(&self, s: &mut Sampler) -> Result<Option<Failure>, CdError> {
        let alg = &self.algebra;
        let no_module = || CdError::NoModule(alg.name());
        let (a, b) = (alg.sample_section(s), alg.sample_section(s));
        let f = alg.sample_scalar(s);
        let lhs = self.star(&a, &alg.act(&f, &b).ok_or_else(no_module)?)?;
        let af = alg.pairing(&a, &alg.derivation(&f)?)?;
        let rhs =
            alg.act(&f, &self.star(&a, &b)?).ok_or_else(no_module)?.plus(&alg.act(&af, &b).ok_or_else(no_module)?);
        Ok(if alg.section_is_zero(&lhs.minus(&rhs)) {
            None
        } else {
            let mut inputs = vec![alg.show_scalar(&f)];
            inputs.extend(self.sections(&[&a, &b]));
            self.failure(inputs, alg.show_section(&lhs), alg.show_section(&rhs))
        })
    }

    fn suite(&self, strong: bool, samples: usize, seed: u64) -> Result<Vec<AxiomReport>, CdError> {
        let mut out = Vec::new();
        if strong {
            out.push(self.run("module", 1, samples, seed, Self::module)?);
            out.push(self.run("invariance", 2, samples, seed, Self::strong_invariance)?);
        } else {
            out.push(self.run("weak-invariance", 2, samples, seed, Self::weak_invariance)?);
        }
        out.push(self.run("symmetrization", 3, samples, seed, Self::symmetrization)?);
        out.push(self.run("leibniz", 4, samples, seed, Self::leibniz)?);
        out.push(self.run("exact-bracket", 5, samples, seed, Self::exact_bracket)?);
        out.push(self.run("exact-pairing", 6, samples, seed, Self::exact_pairing)?);
        Ok(out)
    }
}

impl<A: CdAlgebra> Instance for Packaged<A> {
    fn name(&self) -> String {
        let base = self.algebra.name();
        if self.corrupt {
            format!("{base}~corrupted")
        } else {
            base
        }
    }

    fn has_module(&self) -> bool {
        let mut s = Sampler::new(0, 0, self.algebra.dim());
        let f = self.algebra.sample_scalar(&mut s);
        let a = self.algebra.sample_section(&mut s);
        self.algebra.act(&f, &a).is_some()
    }

    fn check_weak(&self, samples: usize, seed: u64) -> Result<Vec<AxiomReport>, CdError> {
        self.suite(false, samples, seed)
    }

    fn check_strong(&self, samples: usize, seed: u64) -> Result<Vec<AxiomReport>, CdError> {
        if !self.has_module() {
            return Err(CdError::NoModule(self.name()));
        }
        self.suite(true, samples, seed)
    }

    fn mutated(&self) -> Box<dyn Instance> {
        Box::new(Packaged { algebra: self.algebra.clone(), corrupt: true })
    }
}

/// Runs the weak suite on a typed algebra.
pub fn check_weak<A: CdAlgebra>(algebra: A, samples: usize, seed: u64) -> Result<Vec<AxiomReport>, CdError> {
    Packaged::new(algebra).check_weak(samples, seed)
}

/// Runs the strong suite; errors when the algebra has no module structure.
pub fn check_strong<A: CdAlgebra>(algebra: A, samples: usize, seed: u64) -> Result<Vec<AxiomReport>, CdError> {
    Packaged::new(algebra).check_strong(samples, seed)
}
