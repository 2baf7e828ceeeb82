//! Current specification files: a family tag, optional parity declarations and
//! section literals, in TOML.
//!
//! ```toml
//! family = "v-pform"
//! dim = 3
//! test-parity = "even"
//! e-parity = "even"
//!
//! [v.components]
//! "1" = "x2"
//!
//! [beta]
//! degree = 2
//! components = { "1,3" = "x1^2 - 1/2" }
//! ```
//!
//! A block may instead read `formal = "name"` for fully formal components.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::expr::{Factor, GradedExpr, Parity};
use crate::tensor::{
    format_polynomial, parse_polynomial, Connection, Multivector, PForm, SymTensor2, VBeta, VBetaGamma, VGammaR,
    VOmega, VectorField,
};

use super::current::{CurrentData, Family};
use super::reproduce::ConnectionMode;
use super::LoopError;

/// Parse or validation failure with a 1-based position in the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for InputError {}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlock {
    degree: Option<Spanned<usize>>,
    formal: Option<Spanned<String>>,
    #[serde(default)]
    components: BTreeMap<String, Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawSpec {
    family: Spanned<String>,
    dim: Option<Spanned<u8>>,
    test_parity: Option<Spanned<String>>,
    e_parity: Option<Spanned<String>>,
    connection: Option<Spanned<String>>,
    v: Option<Spanned<RawBlock>>,
    omega: Option<Spanned<RawBlock>>,
    beta: Option<Spanned<RawBlock>>,
    gamma: Option<Spanned<RawBlock>>,
    r: Option<Spanned<RawBlock>>,
}

/// A parsed current specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentSpec {
    pub data: CurrentData,
    pub test_parity: Parity,
}

struct Ctx<'a> {
    text: &'a str,
    dim: u8,
}

impl Ctx<'_> {
    fn err<T>(&self, span: Range<usize>, message: impl Into<String>) -> Result<T, InputError> {
        let (line, column) = position(self.text, span.start);
        Err(InputError { line, column, message: message.into() })
    }

    fn poly(&self, value: &Spanned<String>) -> Result<GradedExpr, InputError> {
        parse_polynomial(value.get_ref(), self.dim).or_else(|e| {
            // +1 skips the opening quote
            let at = value.span().start + 1 + e.offset;
            self.err(at..at, e.message)
        })
    }

    fn indices(&self, key: &str, value: &Spanned<String>, degree: usize) -> Result<Vec<u8>, InputError> {
        let parts: Result<Vec<u8>, _> = key.split(',').map(|s| s.trim().parse::<u8>()).collect();
        let Ok(idx) = parts else {
            return self.err(value.span(), format!("bad index key `{key}`"));
        };
        if idx.len() != degree {
            return self.err(value.span(), format!("key `{key}` has {} indices, expected {degree}", idx.len()));
        }
        if idx.iter().any(|&i| i == 0 || i > self.dim) {
            return self.err(value.span(), format!("index in `{key}` outside 1..={}", self.dim));
        }
        Ok(idx)
    }

    fn fixed_degree(&self, block: &Spanned<RawBlock>, want: usize, what: &str) -> Result<(), InputError> {
        match &block.get_ref().degree {
            Some(d) if *d.get_ref() != want => {
                self.err(d.span(), format!("{what} has degree {want}, got {}", d.get_ref()))
            }
            _ => Ok(()),
        }
    }

    fn required_degree(&self, block: &Spanned<RawBlock>, what: &str) -> Result<usize, InputError> {
        match &block.get_ref().degree {
            Some(d) if *d.get_ref() <= self.dim as usize => Ok(*d.get_ref()),
            Some(d) => self.err(d.span(), format!("degree {} exceeds the dimension {}", d.get_ref(), self.dim)),
            None => self.err(block.span(), format!("{what} needs a `degree`")),
        }
    }

    fn antisym<T, Z, F, S>(
        &self,
        block: &Spanned<RawBlock>,
        degree: usize,
        zero: Z,
        formal: F,
        set: S,
    ) -> Result<T, InputError>
    where
        Z: Fn(u8, usize) -> T,
        F: Fn(u8, usize, &str) -> T,
        S: Fn(&mut T, &[u8], GradedExpr),
    {
        let raw = block.get_ref();
        if let Some(name) = &raw.formal {
            if !raw.components.is_empty() {
                return self.err(name.span(), "a formal block takes no components");
            }
            return Ok(formal(self.dim, degree, name.get_ref()));
        }
        let mut out = zero(self.dim, degree);
        let mut seen = BTreeSet::new();
        for (key, value) in &raw.components {
            let idx = self.indices(key, value, degree)?;
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return self.err(value.span(), format!("repeated index in `{key}`"));
            }
            if !seen.insert(sorted) {
                return self.err(value.span(), format!("duplicate component `{key}`"));
            }
            let c = self.poly(value)?;
            set(&mut out, &idx, c);
        }
        Ok(out)
    }

    fn vector(&self, block: Option<&Spanned<RawBlock>>) -> Result<VectorField, InputError> {
        let Some(b) = block else { return Ok(VectorField::zero(self.dim)) };
        self.fixed_degree(b, 1, "v")?;
        self.antisym(
            b,
            1,
            |n, _| VectorField::zero(n),
            |n, _, name| VectorField::formal(n, name),
            |v, idx, c| v.set(idx[0], c),
        )
    }

    fn form(&self, block: Option<&Spanned<RawBlock>>, degree: usize) -> Result<PForm, InputError> {
        let Some(b) = block else { return Ok(PForm::zero(self.dim, degree)) };
        self.antisym(b, degree, PForm::zero, PForm::formal, |f, idx, c| f.set(idx, c))
    }

    fn sym(&self, block: Option<&Spanned<RawBlock>>) -> Result<SymTensor2, InputError> {
        let Some(b) = block else { return Ok(SymTensor2::zero(self.dim)) };
        self.fixed_degree(b, 2, "gamma")?;
        let raw = b.get_ref();
        if let Some(name) = &raw.formal {
            if !raw.components.is_empty() {
                return self.err(name.span(), "a formal block takes no components");
            }
            return Ok(SymTensor2::formal(self.dim, name.get_ref()));
        }
        let mut g = SymTensor2::zero(self.dim);
        let mut seen = BTreeSet::new();
        for (key, value) in &raw.components {
            let idx = self.indices(key, value, 2)?;
            let (a, c) = (idx[0].min(idx[1]), idx[0].max(idx[1]));
            if !seen.insert((a, c)) {
                return self.err(value.span(), format!("duplicate component `{key}`"));
            }
            g.set(a, c, self.poly(value)?);
        }
        Ok(g)
    }
}

fn parse_parity(s: &str) -> Option<Parity> {
    match s {
        "even" => Some(Parity::Even),
        "odd" => Some(Parity::Odd),
        _ => None,
    }
}

/// Parses a current specification; `dim` and `connection` apply when the file omits them.
pub fn parse_current_spec(text: &str, dim: u8, connection: ConnectionMode) -> Result<CurrentSpec, InputError> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| position(text, s.start));
        InputError { line, column, message: e.message().trim().to_string() }
    })?;
    let mut ctx = Ctx { text, dim };
    if let Some(d) = &raw.dim {
        if !(2..=4).contains(d.get_ref()) {
            return ctx.err(d.span(), format!("dimension {} outside 2..=4", d.get_ref()));
        }
        ctx.dim = *d.get_ref();
    }
    let Some(family) = Family::from_name(raw.family.get_ref()) else {
        return ctx.err(raw.family.span(), format!("unknown family `{}`", raw.family.get_ref()));
    };
    let blocks = [("v", &raw.v), ("omega", &raw.omega), ("beta", &raw.beta), ("gamma", &raw.gamma), ("r", &raw.r)];
    let allowed: &[&str] = match family {
        Family::BosonicAs | Family::SusyAs => &["v", "omega"],
        Family::Multivector => &["v"],
        Family::VPForm => &["v", "beta"],
        Family::VPFormPair => &["v", "beta", "gamma"],
        Family::SymTensor => &["v", "gamma", "r"],
        Family::Generic => return ctx.err(raw.family.span(), "the generic family has no file form"),
    };
    for (name, block) in &blocks {
        if let Some(b) = block {
            if !allowed.contains(name) {
                return ctx.err(b.span(), format!("block `{name}` does not belong to family {family}"));
            }
        }
    }
    if let Some(c) = raw.connection.as_ref().filter(|_| family != Family::SymTensor) {
        return ctx.err(c.span(), "only sym-tensor currents take a connection");
    }
    let n = ctx.dim;
    let data = match family {
        Family::BosonicAs | Family::SusyAs => {
            if let Some(b) = &raw.omega {
                ctx.fixed_degree(b, 1, "omega")?;
            }
            let s = VOmega { v: ctx.vector(raw.v.as_ref())?, omega: ctx.form(raw.omega.as_ref(), 1)? };
            if family == Family::BosonicAs {
                CurrentData::BosonicAs(s)
            } else {
                CurrentData::SusyAs(s)
            }
        }
        Family::Multivector => {
            let Some(b) = &raw.v else {
                return ctx.err(0..0, "multivector currents need a `v` block with a degree");
            };
            let d = ctx.required_degree(b, "v")?;
            if d == 0 {
                return ctx.err(b.span(), "multivector degree must be at least 1");
            }
            CurrentData::Multivector(
                ctx.antisym(b, d, Multivector::zero, Multivector::formal, |m, idx, c| m.set(idx, c))?,
            )
        }
        Family::VPForm | Family::VPFormPair => {
            let Some(b) = &raw.beta else {
                return ctx.err(0..0, "a `beta` block with a degree is required");
            };
            let p = ctx.required_degree(b, "beta")?;
            if p == 0 {
                return ctx.err(b.span(), "form degree must be at least 1");
            }
            let v = ctx.vector(raw.v.as_ref())?;
            let beta = ctx.form(Some(b), p)?;
            if family == Family::VPForm {
                CurrentData::VPForm(VBeta { v, beta })
            } else {
                if p + 1 > n as usize {
                    return ctx.err(b.span(), format!("gamma would have degree {} > {n}", p + 1));
                }
                if let Some(g) = &raw.gamma {
                    ctx.fixed_degree(g, p + 1, "gamma")?;
                }
                let gamma = ctx.form(raw.gamma.as_ref(), p + 1)?;
                CurrentData::VPFormPair(VBetaGamma { v, beta, gamma })
            }
        }
        Family::SymTensor => {
            let mode = match &raw.connection {
                None => connection,
                Some(c) => match c.get_ref().as_str() {
                    "flat" => ConnectionMode::Flat,
                    "formal" => ConnectionMode::Formal,
                    other => return ctx.err(c.span(), format!("unknown connection `{other}` (flat or formal)")),
                },
            };
            if let Some(b) = &raw.r {
                ctx.fixed_degree(b, 1, "r")?;
            }
            CurrentData::SymTensor {
                section: VGammaR {
                    v: ctx.vector(raw.v.as_ref())?,
                    gamma: ctx.sym(raw.gamma.as_ref())?,
                    r: ctx.form(raw.r.as_ref(), 1)?,
                },
                connection: mode.connection(n),
            }
        }
        Family::Generic => unreachable!(),
    };
    let test_parity = data.test_parity();
    if let Some(tp) = &raw.test_parity {
        match parse_parity(tp.get_ref()) {
            None => return ctx.err(tp.span(), "parity is `even` or `odd`"),
            Some(p) if p != test_parity => {
                return ctx.err(tp.span(), format!("family {family} needs a test function of {test_parity} parity"));
            }
            Some(_) => {}
        }
    }
    if let Some(ep) = &raw.e_parity {
        let want = data.constant().map(|e| e.parity);
        match (parse_parity(ep.get_ref()), want) {
            (None, _) => return ctx.err(ep.span(), "parity is `even` or `odd`"),
            (Some(_), None) => return ctx.err(ep.span(), format!("family {family} has no constant e")),
            (Some(p), Some(w)) if p != w => {
                return ctx.err(ep.span(), format!("this current needs e of {w} parity"));
            }
            _ => {}
        }
    }
    Ok(CurrentSpec { data, test_parity })
}

#[derive(Serialize)]
struct OutBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    formal: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    components: BTreeMap<String, String>,
}

#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
struct OutSpec {
    family: String,
    dim: u8,
    test_parity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    e_parity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    connection: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    v: Option<OutBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega: Option<OutBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<OutBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<OutBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<OutBlock>,
}

fn key(idx: &[u8]) -> String {
    idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

/// The symbol name when `e` is a single formal component symbol.
fn symbol_name(e: &GradedExpr) -> Option<String> {
    let [(m, _)] = e.terms() else { return None };
    match m.factors() {
        [Factor::Sym(s)] => Some(s.name.to_string()),
        _ => None,
    }
}

fn block<'a, I, F>(components: I, degree: Option<usize>, formal_eq: F) -> Result<Option<OutBlock>, LoopError>
where
    I: Iterator<Item = (String, &'a GradedExpr)>,
    F: Fn(&str) -> bool,
{
    let mut out = BTreeMap::new();
    for (k, c) in components {
        if c.is_zero() {
            continue;
        }
        match format_polynomial(c) {
            Some(s) => {
                out.insert(k, s);
            }
            None => {
                if let Some(name) = symbol_name(c).filter(|n| formal_eq(n)) {
                    return Ok(Some(OutBlock { degree, formal: Some(name), components: BTreeMap::new() }));
                }
                return Err(LoopError::Unsupported(format!("component {k} = {c} has no literal form")));
            }
        }
    }
    if out.is_empty() && degree.is_none() {
        return Ok(None);
    }
    Ok(Some(OutBlock { degree, formal: None, components: out }))
}

fn vector_block(v: &VectorField) -> Result<Option<OutBlock>, LoopError> {
    block(v.components().map(|(mu, c)| (mu.to_string(), c)), None, |name| *v == VectorField::formal(v.dim(), name))
}

fn form_block(b: &PForm, degree: Option<usize>) -> Result<Option<OutBlock>, LoopError> {
    block(b.components().map(|(i, c)| (key(&i), c)), degree, |name| *b == PForm::formal(b.dim(), b.degree(), name))
}

/// Serializes a current in the file format; fails for the generic family and
/// for components that are neither polynomials nor a whole formal block.
pub fn current_spec_to_toml(data: &CurrentData) -> Result<String, LoopError> {
    let mut out = OutSpec {
        family: data.family().name().to_string(),
        dim: data.dim(),
        test_parity: data.test_parity().to_string(),
        e_parity: data.constant().map(|e| e.parity.to_string()),
        connection: None,
        v: None,
        omega: None,
        beta: None,
        gamma: None,
        r: None,
    };
    match data {
        CurrentData::BosonicAs(a) | CurrentData::SusyAs(a) => {
            out.v = vector_block(&a.v)?;
            out.omega = form_block(&a.omega, None)?;
        }
        CurrentData::Multivector(m) => {
            let comps = m.components().map(|(i, c)| (key(&i), c));
            out.v = block(comps, Some(m.degree()), |name| *m == Multivector::formal(m.dim(), m.degree(), name))?;
        }
        CurrentData::VPForm(a) => {
            out.v = vector_block(&a.v)?;
            out.beta = form_block(&a.beta, Some(a.beta.degree()))?;
        }
        CurrentData::VPFormPair(a) => {
            out.v = vector_block(&a.v)?;
            out.beta = form_block(&a.beta, Some(a.beta.degree()))?;
            out.gamma = form_block(&a.gamma, None)?;
        }
        CurrentData::SymTensor { section, connection } => {
            let n = section.v.dim();
            out.connection = Some(if connection.is_flat() {
                "flat".into()
            } else if *connection == Connection::formal(n, "G") {
                "formal".into()
            } else {
                return Err(LoopError::Unsupported("only flat or formal connections have a literal form".into()));
            });
            out.v = vector_block(&section.v)?;
            let g = &section.gamma;
            out.gamma = block(
                g.components().filter(|((a, b), _)| a <= b).map(|((a, b), c)| (key(&[a, b]), c)),
                None,
                |name| *g == SymTensor2::formal(n, name),
            )?;
            out.r = form_block(&section.r, None)?;
        }
        CurrentData::Generic(_) => return Err(LoopError::Unsupported("the generic family has no file form".into())),
    }
    toml::to_string(&out).map_err(|e| LoopError::Unsupported(e.to_string()))
}
