//! Deterministic s-expression text form, one term per line.
//!
//! ```text
//! (term (coeff 1/2 0) (parity odd) (factors (jet lam 1 0) (sym v (up 1) (lo) (d 2) none even)))
//! ```

use std::fmt::Write;

use super::coeff::{parse_rational, Coeff};
use super::factor::{ComponentSymbol, ConstSym, Factor, FieldKind, Indices, JetVar, Parity, Symmetry, TestFn};
use super::graded::GradedExpr;
use super::ExprError;

fn rational(r: &num_rational::Ratio<i64>) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn indices(tag: &str, idx: &[u8]) -> String {
    let mut s = format!("({tag}");
    for i in idx {
        write!(s, " {i}").unwrap();
    }
    s.push(')');
    s
}

fn factor_sexpr(f: &Factor) -> String {
    match f {
        Factor::Jet(j) => format!("(jet {} {} {})", j.field.name(), j.index, j.order),
        Factor::Test(t) => format!("(test {} {} {} {})", t.id, t.theta, t.order, t.base),
        Factor::Const(c) => format!("(const {} {})", c.name, c.parity),
        Factor::Sym(s) => format!(
            "(sym {} {} {} {} {} {})",
            s.name,
            indices("up", &s.upper),
            indices("lo", &s.lower),
            indices("d", &s.partials),
            s.symmetry.name(),
            s.parity
        ),
    }
}

pub fn to_sexpr(e: &GradedExpr) -> String {
    let mut out = String::new();
    for (m, c) in e.terms() {
        let facs: Vec<String> = m.factors().iter().map(factor_sexpr).collect();
        writeln!(
            out,
            "(term (coeff {} {}) (parity {}) (factors{}{}))",
            rational(&c.re),
            rational(&c.im),
            m.parity(),
            if facs.is_empty() { "" } else { " " },
            facs.join(" ")
        )
        .unwrap();
    }
    out
}

#[derive(Debug, Clone)]
enum Node {
    Atom(String),
    List(Vec<Node>),
}

fn tokenize(line: &str) -> Vec<String> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    for ch in line.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
                toks.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    toks
}

fn parse_node(toks: &[String], pos: &mut usize) -> Option<Node> {
    let t = toks.get(*pos)?;
    *pos += 1;
    if t == "(" {
        let mut items = Vec::new();
        loop {
            if toks.get(*pos)? == ")" {
                *pos += 1;
                return Some(Node::List(items));
            }
            items.push(parse_node(toks, pos)?);
        }
    } else if t == ")" {
        None
    } else {
        Some(Node::Atom(t.clone()))
    }
}

fn atom(n: &Node) -> Option<&str> {
    match n {
        Node::Atom(s) => Some(s),
        Node::List(_) => None,
    }
}

fn list<'a>(n: &'a Node, head: &str) -> Option<&'a [Node]> {
    match n {
        Node::List(items) if items.first().and_then(atom) == Some(head) => Some(&items[1..]),
        _ => None,
    }
}

fn parity(s: &str) -> Option<Parity> {
    match s {
        "even" => Some(Parity::Even),
        "odd" => Some(Parity::Odd),
        _ => None,
    }
}

fn index_list(n: &Node, head: &str) -> Option<Indices> {
    list(n, head)?.iter().map(|x| atom(x)?.parse().ok()).collect()
}

fn parse_factor(n: &Node) -> Option<Factor> {
    let Node::List(items) = n else { return None };
    let head = atom(items.first()?)?;
    let a = |k: usize| items.get(k).and_then(atom);
    Some(match head {
        "jet" => Factor::Jet(JetVar::new(FieldKind::from_name(a(1)?)?, a(2)?.parse().ok()?, a(3)?.parse().ok()?)),
        "test" => Factor::Test(TestFn::new(
            a(1)?.parse().ok()?,
            a(2)?.parse().ok().filter(|t: &u8| *t <= 1)?,
            a(3)?.parse().ok()?,
            parity(a(4)?)?,
        )),
        "const" => Factor::Const(ConstSym { name: a(1)?.into(), parity: parity(a(2)?)? }),
        "sym" => Factor::Sym(ComponentSymbol {
            name: a(1)?.into(),
            upper: index_list(items.get(2)?, "up")?,
            lower: index_list(items.get(3)?, "lo")?,
            partials: index_list(items.get(4)?, "d")?,
            symmetry: Symmetry::from_name(a(5)?)?,
            parity: parity(a(6)?)?,
        }),
        _ => return None,
    })
}

fn parse_term(line: &str) -> Option<(Coeff, Parity, Vec<Factor>)> {
    let toks = tokenize(line);
    let mut pos = 0;
    let node = parse_node(&toks, &mut pos)?;
    if pos != toks.len() {
        return None;
    }
    let items = list(&node, "term")?;
    let coeff = list(items.first()?, "coeff")?;
    let c = Coeff::new(parse_rational(atom(coeff.first()?)?)?, parse_rational(atom(coeff.get(1)?)?)?);
    let p = parity(atom(list(items.get(1)?, "parity")?.first()?)?)?;
    let facs = list(items.get(2)?, "factors")?.iter().map(parse_factor).collect::<Option<Vec<_>>>()?;
    Some((c, p, facs))
}

/// Parses the text form and normalizes. Blank lines and `;` comments are skipped.
pub fn from_sexpr(text: &str) -> Result<GradedExpr, ExprError> {
    let mut raw = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        let (c, p, facs) =
            parse_term(line).ok_or_else(|| ExprError::Parse { line: lineno + 1, message: "malformed term".into() })?;
        let actual = Parity::from_bit(facs.iter().filter(|f| f.is_odd()).count() % 2 == 1);
        if actual != p {
            return Err(ExprError::Parse {
                line: lineno + 1,
                message: format!("declared parity {p} but factors are {actual}"),
            });
        }
        raw.push((c, facs));
    }
    GradedExpr::from_terms(raw)
}
