use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::poly::{Monomial, MultiPoly};
use super::ring::{PolyRing, Ring};
use super::scalar::Scalar;
use crate::error::{Error, Result};

fn monomial_str(ring: &PolyRing, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.names[i].clone()),
            _ => parts.push(format!("{}^{}", ring.names[i], e)),
        }
    }
    parts.join("*")
}

/// Canonical text form, e.g. `3/4*e^2*x^2 + q`.
pub fn format_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let ring = p.ring();
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let term = if m.is_one() {
            c.to_string()
        } else if c.is_one() {
            monomial_str(ring, m)
        } else if (-c).is_one() {
            format!("-{}", monomial_str(ring, m))
        } else {
            format!("{}*{}", c, monomial_str(ring, m))
        };
        if k == 0 {
            out.push_str(&term);
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = MultiPoly::zero(self.ring);
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        loop {
            let t = self.term()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                let f = self.power()?;
                acc = &acc * &f;
            } else if self.eat('/') {
                let f = self.power()?;
                let c = f
                    .as_constant()
                    .and_then(|c| c.inv())
                    .ok_or_else(|| Error::Parse("division by a non-constant or zero".into()))?;
                acc = acc.scale(&c);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse("expected exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(self.ring, Scalar::from_bigint(&n, self.ring.characteristic)))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                MultiPoly::var_named(self.ring, &name).map_err(|_| Error::Parse(format!("unknown generator `{name}`")))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(e)
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses sums of products of generators, integers and rationals (parentheses allowed).
pub fn parse_poly(ring: &Ring, s: &str) -> Result<MultiPoly> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut p = Parser { toks, pos: 0, ring };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u16>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub ring: PolyRing,
    pub terms: Vec<TermJson>,
}

pub fn poly_to_json(p: &MultiPoly) -> PolyJson {
    PolyJson {
        ring: (**p.ring()).clone(),
        terms: p
            .terms()
            .iter()
            .map(|(m, c)| {
                let (n, d) = c.num_den();
                TermJson { exps: m.exps.to_vec(), num: n.to_string(), den: d.to_string() }
            })
            .collect(),
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<MultiPoly> {
    let ring = PolyRing::new(&j.ring.names, &j.ring.weights, j.ring.characteristic)?;
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        if t.exps.len() != ring.nvars() {
            return Err(Error::Parse("exponent vector length".into()));
        }
        let n: BigInt = t.num.parse().map_err(|_| Error::Parse(format!("bad numerator `{}`", t.num)))?;
        let d: BigInt = t.den.parse().map_err(|_| Error::Parse(format!("bad denominator `{}`", t.den)))?;
        let c = Scalar::from_ratio(&n, &d, ring.characteristic)?;
        terms.push((Monomial::new(&ring, t.exps.iter().copied().collect()), c));
    }
    Ok(MultiPoly::from_terms(&ring, terms))
}
