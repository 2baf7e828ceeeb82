//! The packaged instances.

use crate::expr::{Coeff, GradedExpr};
use crate::loopspace::{ConnectionMode, IntegrandAlgebra};
use crate::tensor::{
    dh_ext, dh_sym, dorfman, dorfman_ext, dorfman_p, exterior_d, interior, lie_derivative_sym, pairing_ext, pairing_p,
    pairing_sym, schouten, sym_bracket, Connection, Linear, Multivector, PForm, VBeta, VBetaGamma, VGammaR, VOmega,
    VectorField,
};

use super::{AxiomReport, CdAlgebra, CdError, Equality, Failure, Instance, Packaged, Sampler, FORMAL_EVERY};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceConfig {
    pub dim: u8,
    pub p: usize,
    pub connection: ConnectionMode,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        Self { dim: 3, p: 1, connection: ConnectionMode::Flat }
    }
}

fn show_form(b: &PForm) -> String {
    b.to_string()
}

/// Negates the first term of `e`.
fn flip_first(e: &GradedExpr) -> GradedExpr {
    match e.terms().first() {
        None => e.clone(),
        Some((m, c)) => e - &GradedExpr::from_monomial(m.clone(), *c).scale(Coeff::int(2)),
    }
}

/// `TM ⊕ T*M` with the Dorfman bracket; a module over functions.
pub struct Standard {
    pub dim: u8,
}

impl CdAlgebra for Standard {
    type E = VOmega;
    type R = GradedExpr;

    fn name(&self) -> String {
        "standard".into()
    }
    fn dim(&self) -> u8 {
        self.dim
    }
    fn sample_section(&self, s: &mut Sampler) -> VOmega {
        VOmega { v: s.vector(), omega: s.form(1) }
    }
    fn sample_scalar(&self, s: &mut Sampler) -> GradedExpr {
        s.function()
    }
    fn bracket(&self, a: &VOmega, b: &VOmega) -> Result<VOmega, CdError> {
        Ok(dorfman(a, b))
    }
    fn pairing(&self, a: &VOmega, b: &VOmega) -> Result<GradedExpr, CdError> {
        Ok(pairing_p(&a.as_vbeta(), &b.as_vbeta())?.as_function())
    }
    fn derivation(&self, f: &GradedExpr) -> Result<VOmega, CdError> {
        Ok(VOmega { v: VectorField::zero(self.dim), omega: exterior_d(&PForm::function(self.dim, f.clone())) })
    }
    fn show_section(&self, a: &VOmega) -> String {
        format!("v = {}; omega = {}", a.v, show_form(&a.omega))
    }
    fn show_scalar(&self, f: &GradedExpr) -> String {
        f.to_string()
    }
    fn act(&self, f: &GradedExpr, a: &VOmega) -> Option<VOmega> {
        Some(a.times(f))
    }
    /// Flips `−ι_{v₂}dω₁`.
    fn corrupted_bracket(&self, a: &VOmega, b: &VOmega) -> Result<VOmega, CdError> {
        let t = interior(&b.v, &exterior_d(&a.omega))?;
        let mut out = dorfman(a, b);
        out.omega = out.omega.plus(&t.scaled(Coeff::int(2)));
        Ok(out)
    }
}

/// `TM ⊕ ΛᵖT*M` with scalars `Λᵖ⁻¹T*M`.
pub struct Forms {
    pub dim: u8,
    pub p: usize,
}

impl CdAlgebra for Forms {
    type E = VBeta;
    type R = PForm;

    fn name(&self) -> String {
        "forms".into()
    }
    fn dim(&self) -> u8 {
        self.dim
    }
    fn sample_section(&self, s: &mut Sampler) -> VBeta {
        VBeta { v: s.vector(), beta: s.form(self.p) }
    }
    fn sample_scalar(&self, s: &mut Sampler) -> PForm {
        s.form(self.p - 1)
    }
    fn bracket(&self, a: &VBeta, b: &VBeta) -> Result<VBeta, CdError> {
        Ok(dorfman_p(a, b)?)
    }
    fn pairing(&self, a: &VBeta, b: &VBeta) -> Result<PForm, CdError> {
        Ok(pairing_p(a, b)?)
    }
    fn derivation(&self, f: &PForm) -> Result<VBeta, CdError> {
        Ok(VBeta { v: VectorField::zero(self.dim), beta: exterior_d(f) })
    }
    fn show_section(&self, a: &VBeta) -> String {
        format!("v = {}; beta = {}", a.v, show_form(&a.beta))
    }
    fn show_scalar(&self, f: &PForm) -> String {
        show_form(f)
    }
    /// Flips `−ι_{v₂}dβ₁`.
    fn corrupted_bracket(&self, a: &VBeta, b: &VBeta) -> Result<VBeta, CdError> {
        let t = interior(&b.v, &exterior_d(&a.beta))?;
        let mut out = dorfman_p(a, b)?;
        out.beta = out.beta.plus(&t.scaled(Coeff::int(2)));
        Ok(out)
    }
}

/// `TM ⊕ ΛᵖT*M ⊕ Λᵖ⁺¹T*M` with scalars `Λᵖ⁻¹ ⊕ Λᵖ`.
pub struct FormsExt {
    pub dim: u8,
    pub p: usize,
}

impl CdAlgebra for FormsExt {
    type E = VBetaGamma;
    type R = (PForm, PForm);

    fn name(&self) -> String {
        "forms-ext".into()
    }
    fn dim(&self) -> u8 {
        self.dim
    }
    fn sample_section(&self, s: &mut Sampler) -> VBetaGamma {
        VBetaGamma { v: s.vector(), beta: s.form(self.p), gamma: s.form(self.p + 1) }
    }
    fn sample_scalar(&self, s: &mut Sampler) -> (PForm, PForm) {
        (s.form(self.p - 1), s.form(self.p))
    }
    fn bracket(&self, a: &VBetaGamma, b: &VBetaGamma) -> Result<VBetaGamma, CdError> {
        Ok(dorfman_ext(a, b)?)
    }
    fn pairing(&self, a: &VBetaGamma, b: &VBetaGamma) -> Result<(PForm, PForm), CdError> {
        Ok(pairing_ext(a, b)?)
    }
    fn derivation(&self, f: &(PForm, PForm)) -> Result<VBetaGamma, CdError> {
        Ok(dh_ext(&f.0, &f.1)?)
    }
    fn show_section(&self, a: &VBetaGamma) -> String {
        format!("v = {}; beta = {}; gamma = {}", a.v, show_form(&a.beta), show_form(&a.gamma))
    }
    fn show_scalar(&self, f: &(PForm, PForm)) -> String {
        format!("({}, {})", show_form(&f.0), show_form(&f.1))
    }
    /// Flips `(−1)ᵖι_{v₂}γ₁`.
    fn corrupted_bracket(&self, a: &VBetaGamma, b: &VBetaGamma) -> Result<VBetaGamma, CdError> {
        let t = interior(&b.v, &a.gamma)?.scaled(Coeff::sign(self.p % 2 == 1));
        let mut out = dorfman_ext(a, b)?;
        out.beta = out.beta.minus(&t.scaled(Coeff::int(2)));
        Ok(out)
    }
}

/// `TM ⊕ S²T*M ⊕ T*M` with a torsionless connection.
pub struct SymTensor {
    pub dim: u8,
    pub connection: Connection,
}

impl CdAlgebra for SymTensor {
    type E = VGammaR;
    type R = PForm;

    fn name(&self) -> String {
        "sym-tensor".into()
    }
    fn dim(&self) -> u8 {
        self.dim
    }
    fn sample_section(&self, s: &mut Sampler) -> VGammaR {
        VGammaR { v: s.vector(), gamma: s.sym(), r: s.form(1) }
    }
    fn sample_scalar(&self, s: &mut Sampler) -> PForm {
        s.form(1)
    }
    fn bracket(&self, a: &VGammaR, b: &VGammaR) -> Result<VGammaR, CdError> {
        Ok(sym_bracket(a, b, &self.connection))
    }
    fn pairing(&self, a: &VGammaR, b: &VGammaR) -> Result<PForm, CdError> {
        Ok(pairing_sym(a, b, &self.connection))
    }
    fn derivation(&self, f: &PForm) -> Result<VGammaR, CdError> {
        Ok(dh_sym(f, &self.connection))
    }
    fn show_section(&self, a: &VGammaR) -> String {
        format!("v = {}; gamma = {}; r = {}", a.v, a.gamma, show_form(&a.r))
    }
    fn show_scalar(&self, f: &PForm) -> String {
        show_form(f)
    }
    /// Flips `−ℒ_{v₂}γ̂₁`.
    fn corrupted_bracket(&self, a: &VGammaR, b: &VGammaR) -> Result<VGammaR, CdError> {
        let t = lie_derivative_sym(&b.v, &a.gamma_hat(&self.connection));
        let mut out = sym_bracket(a, b, &self.connection);
        out.gamma = out.gamma.plus(&t.scaled(Coeff::int(2)));
        Ok(out)
    }
}

/// The integrand-level instance on densities of `T*LM`.
pub struct IntegrandInstance {
    pub algebra: IntegrandAlgebra,
    pub equality: Equality,
}

impl IntegrandInstance {
    pub fn new(dim: u8, equality: Equality) -> Result<Self, CdError> {
        Ok(Self { algebra: IntegrandAlgebra::bosonic(dim)?, equality })
    }
}

impl CdAlgebra for IntegrandInstance {
    type E = GradedExpr;
    type R = GradedExpr;

    fn name(&self) -> String {
        "integrand".into()
    }
    fn dim(&self) -> u8 {
        self.algebra.patch().dim()
    }
    fn sample_section(&self, s: &mut Sampler) -> GradedExpr {
        s.density()
    }
    fn sample_scalar(&self, s: &mut Sampler) -> GradedExpr {
        s.scalar_density()
    }
    fn bracket(&self, a: &GradedExpr, b: &GradedExpr) -> Result<GradedExpr, CdError> {
        Ok(self.algebra.star(a, b)?)
    }
    fn pairing(&self, a: &GradedExpr, b: &GradedExpr) -> Result<GradedExpr, CdError> {
        Ok(self.algebra.pairing(a, b)?)
    }
    fn derivation(&self, f: &GradedExpr) -> Result<GradedExpr, CdError> {
        Ok(self.algebra.dh(f))
    }
    fn show_section(&self, a: &GradedExpr) -> String {
        a.to_string()
    }
    fn show_scalar(&self, f: &GradedExpr) -> String {
        f.to_string()
    }
    fn equality(&self) -> Equality {
        self.equality
    }
    fn section_is_zero(&self, a: &GradedExpr) -> bool {
        match self.equality {
            Equality::Exact => a.is_zero(),
            Equality::ModTotalDerivative => self.algebra.patch().equal_mod_total_derivative(a, &GradedExpr::zero()),
        }
    }
    fn corrupted_bracket(&self, a: &GradedExpr, b: &GradedExpr) -> Result<GradedExpr, CdError> {
        Ok(flip_first(&self.algebra.star(a, b)?))
    }
}

/// Multivectors with the Schouten bracket, checked as a graded Lie algebra only.
pub struct MultivectorInstance {
    pub dim: u8,
    pub corrupt: bool,
}

impl MultivectorInstance {
    fn bracket(&self, a: &Multivector, b: &Multivector) -> Multivector {
        let out = schouten(a, b);
        if !self.corrupt {
            return out;
        }
        let first = out.components().find(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone()));
        match first {
            Some((idx, c)) => out.with(&idx, flip_first(&c)),
            None => out,
        }
    }

    /// Degrees `(p, q, r)` with every nested bracket of degree ≤ n.
    fn degrees(&self, s: &mut Sampler) -> (usize, usize, usize) {
        let n = self.dim as usize;
        loop {
            let (p, q, r) = (s.range(1, n), s.range(1, n), s.range(1, n));
            if p + q + r <= n + 2 {
                return (p, q, r);
            }
        }
    }

    fn report(&self, axiom: &str, stream: u64, samples: usize, seed: u64, triple: bool) -> AxiomReport {
        let mut s = Sampler::new(seed, stream, self.dim);
        let mut failures = Vec::new();
        for i in 0..samples {
            s.begin(i % FORMAL_EVERY == FORMAL_EVERY - 1);
            let (p, q, r) = self.degrees(&mut s);
            let (a, b) = (s.multivector(p), s.multivector(q));
            // (−1)^{(p−1)(q−1)}
            let k = |x: usize, y: usize| Coeff::sign((x - 1) * (y - 1) % 2 == 1);
            let (lhs, rhs, inputs) = if triple {
                let c = s.multivector(r);
                let lhs = self.bracket(&a, &self.bracket(&b, &c));
                let rhs = self
                    .bracket(&self.bracket(&a, &b), &c)
                    .plus(&self.bracket(&b, &self.bracket(&a, &c)).scaled(k(p, q)));
                (lhs, rhs, vec![a.to_string(), b.to_string(), c.to_string()])
            } else {
                let lhs = self.bracket(&a, &b);
                let rhs = self.bracket(&b, &a).scaled(-k(p, q));
                (lhs, rhs, vec![a.to_string(), b.to_string()])
            };
            if !lhs.minus(&rhs).vanishes() && failures.len() < 5 {
                failures.push(Failure { inputs, lhs: lhs.to_string(), rhs: rhs.to_string() });
            }
        }
        AxiomReport { instance: Instance::name(self), axiom: axiom.to_string(), samples, failures, seed }
    }
}

impl Instance for MultivectorInstance {
    fn name(&self) -> String {
        if self.corrupt {
            "multivector~corrupted".into()
        } else {
            "multivector".into()
        }
    }
    fn has_module(&self) -> bool {
        false
    }
    fn check_weak(&self, samples: usize, seed: u64) -> Result<Vec<AxiomReport>, CdError> {
        Ok(vec![
            self.report("graded-antisymmetry", 1, samples, seed, false),
            self.report("graded-leibniz", 2, samples, seed, true),
        ])
    }
    fn check_strong(&self, _samples: usize, _seed: u64) -> Result<Vec<AxiomReport>, CdError> {
        Err(CdError::NoModule(Instance::name(self)))
    }
    fn mutated(&self) -> Box<dyn Instance> {
        Box::new(MultivectorInstance { dim: self.dim, corrupt: true })
    }
}

pub fn instance_names() -> [&'static str; 6] {
    ["standard", "forms", "forms-ext", "sym-tensor", "multivector", "integrand"]
}

/// One named instance at the given configuration.
pub fn instance(name: &str, cfg: &InstanceConfig) -> Result<Box<dyn Instance>, CdError> {
    let (n, p) = (cfg.dim, cfg.p);
    if !(2..=4).contains(&n) {
        return Err(CdError::Unsupported(format!("dimension {n} (supported: 2 to 4)")));
    }
    Ok(match name {
        "standard" => Box::new(Packaged::new(Standard { dim: n })),
        "forms" => {
            if p == 0 || p > n as usize {
                return Err(CdError::Unsupported(format!("forms need 1 ≤ p ≤ n, got p = {p}, n = {n}")));
            }
            Box::new(Packaged::new(Forms { dim: n, p }))
        }
        "forms-ext" => {
            if p == 0 || p >= n as usize {
                return Err(CdError::Unsupported(format!("forms-ext needs 1 ≤ p < n, got p = {p}, n = {n}")));
            }
            Box::new(Packaged::new(FormsExt { dim: n, p }))
        }
        "sym-tensor" => Box::new(Packaged::new(SymTensor { dim: n, connection: cfg.connection.connection(n) })),
        "multivector" => Box::new(MultivectorInstance { dim: n, corrupt: false }),
        "integrand" => Box::new(Packaged::new(IntegrandInstance::new(n, Equality::ModTotalDerivative)?)),
        other => return Err(CdError::UnknownInstance(other.to_string())),
    })
}

/// The six packaged instances.
pub fn builtin_instances(cfg: &InstanceConfig) -> Result<Vec<Box<dyn Instance>>, CdError> {
    instance_names().iter().map(|name| instance(name, cfg)).collect()
}
