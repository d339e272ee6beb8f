use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::polyring::{MultiPoly, Scalar};

/// A Laurent series in `ϖ` over `k`, known modulo `ϖ^prec` (or exactly when `prec` is `None`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, Scalar>,
    prec: Option<i64>,
    characteristic: u64,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl LaurentScalar {
    pub fn zero(characteristic: u64) -> LaurentScalar {
        LaurentScalar { terms: BTreeMap::new(), prec: None, characteristic }
    }

    pub fn one(characteristic: u64) -> LaurentScalar {
        LaurentScalar::monomial(Scalar::one(characteristic), 0)
    }

    /// `c ϖ^v`, exact.
    pub fn monomial(c: Scalar, v: i64) -> LaurentScalar {
        let characteristic = c.characteristic();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(v, c);
        }
        LaurentScalar { terms, prec: None, characteristic }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Scalar)>, prec: Option<i64>, characteristic: u64) -> LaurentScalar {
        let mut out = LaurentScalar { terms: BTreeMap::new(), prec, characteristic };
        for (v, c) in terms {
            if prec.is_none_or(|p| v < p) {
                let e = out.terms.entry(v).or_insert_with(|| Scalar::zero(characteristic));
                *e = &*e + &c;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Integer coefficients `c_0 + c_1 ϖ + ...`.
    pub fn from_ints(coeffs: &[i64], characteristic: u64) -> LaurentScalar {
        LaurentScalar::from_terms(
            coeffs.iter().enumerate().map(|(i, &c)| (i as i64, Scalar::from_i64(c, characteristic))),
            None,
            characteristic,
        )
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn with_precision(&self, prec: i64) -> LaurentScalar {
        LaurentScalar::from_terms(self.terms.clone(), min_prec(self.prec, Some(prec)), self.characteristic)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, v: i64) -> Scalar {
        self.terms.get(&v).cloned().unwrap_or_else(|| Scalar::zero(self.characteristic))
    }

    /// Valuation of the known part; `None` when no nonzero coefficient is known.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Exactly zero, or zero to the known precision.
    pub fn is_known_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Whether the element lies in `𝒪`; abstains when a negative coefficient is unknown.
    pub fn is_integral(&self) -> Result<bool> {
        if let Some(v) = self.valuation() {
            if v < 0 {
                return Ok(false);
            }
        }
        match self.prec {
            Some(p) if p < 0 => Err(Error::InsufficientPrecision(format!("coefficients below ϖ^0 unknown beyond ϖ^{p}"))),
            _ => Ok(true),
        }
    }

    /// Multiplication by `ϖ^k`.
    pub fn shift(&self, k: i64) -> LaurentScalar {
        LaurentScalar {
            terms: self.terms.iter().map(|(v, c)| (v + k, c.clone())).collect(),
            prec: self.prec.map(|p| p + k),
            characteristic: self.characteristic,
        }
    }

    pub fn add(&self, o: &LaurentScalar) -> LaurentScalar {
        let prec = min_prec(self.prec, o.prec);
        LaurentScalar::from_terms(
            self.terms.iter().chain(o.terms.iter()).map(|(v, c)| (*v, c.clone())),
            prec,
            self.characteristic,
        )
    }

    pub fn neg(&self) -> LaurentScalar {
        LaurentScalar {
            terms: self.terms.iter().map(|(v, c)| (*v, -c)).collect(),
            prec: self.prec,
            characteristic: self.characteristic,
        }
    }

    pub fn sub(&self, o: &LaurentScalar) -> LaurentScalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &LaurentScalar) -> LaurentScalar {
        // an unknown tail of one factor is multiplied by the known valuation of the other
        let tail = |p: Option<i64>, other: &LaurentScalar| -> Option<i64> {
            p.map(|p| match (other.valuation(), other.prec) {
                (Some(v), _) => p + v,
                (None, Some(q)) => p + q,
                (None, None) => i64::MAX,
            })
        };
        let mut prec = min_prec(tail(self.prec, o), tail(o.prec, self));
        if prec == Some(i64::MAX) {
            prec = None;
        }
        if self.is_known_zero() && self.is_exact() || o.is_known_zero() && o.is_exact() {
            return LaurentScalar::zero(self.characteristic);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (a, c) in &self.terms {
            for (b, d) in &o.terms {
                terms.push((a + b, c * d));
            }
        }
        LaurentScalar::from_terms(terms, prec, self.characteristic)
    }

    pub fn scale(&self, c: &Scalar) -> LaurentScalar {
        LaurentScalar::from_terms(self.terms.iter().map(|(v, d)| (*v, d * c)), self.prec, self.characteristic)
    }

    pub fn pow(&self, e: u32) -> LaurentScalar {
        let mut acc = LaurentScalar::one(self.characteristic);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse modulo `ϖ^target` (absolute precision), or less when the input is truncated.
    pub fn inverse_to(&self, target: i64) -> Result<LaurentScalar> {
        let v = self.valuation().ok_or_else(|| Error::InsufficientPrecision("inverse of an unknown zero".into()))?;
        let lead_inv = self.coeff(v).inv().expect("nonzero leading coefficient");
        // u = ϖ^{-v} self / lead = 1 + t with t ∈ ϖ𝒪
        let u = self.shift(-v).scale(&lead_inv);
        let rel = match u.prec {
            Some(p) => p.min(target + v),
            None => target + v,
        };
        let mut inv = LaurentScalar::one(self.characteristic);
        if rel > 1 {
            let t = u.sub(&LaurentScalar::one(self.characteristic)).with_precision(rel);
            let mut power = LaurentScalar::one(self.characteristic);
            for _ in 1..rel {
                power = power.mul(&t).neg().with_precision(rel);
                if power.is_known_zero() {
                    break;
                }
                inv = inv.add(&power);
            }
        }
        Ok(inv.with_precision(rel).shift(-v).scale(&lead_inv))
    }

    /// Parses `1 + 2*w^2 - w^-1`, where `w` stands for `ϖ`.
    pub fn parse(text: &str, characteristic: u64) -> Result<LaurentScalar> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty series".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes: Vec<char> = cleaned.chars().collect();
        let mut pieces = Vec::new();
        for i in 1..=bytes.len() {
            if i == bytes.len() || ((bytes[i] == '+' || bytes[i] == '-') && bytes[i - 1] != '^') {
                pieces.push(bytes[start..i].iter().collect::<String>());
                start = i;
            }
        }
        for piece in pieces {
            let (sign, body) = match piece.strip_prefix('-') {
                Some(rest) => (-1, rest.to_string()),
                None => (1, piece.trim_start_matches('+').to_string()),
            };
            let (coef, var) = match body.find('w') {
                Some(pos) => {
                    let c = body[..pos].trim_end_matches('*');
                    (if c.is_empty() { "1".to_string() } else { c.to_string() }, Some(body[pos + 1..].to_string()))
                }
                None => (body.clone(), None),
            };
            let c: i64 = coef.parse().map_err(|_| Error::Parse(format!("bad coefficient {coef:?}")))?;
            let v: i64 = match var {
                None => 0,
                Some(rest) if rest.is_empty() => 1,
                Some(rest) => rest
                    .strip_prefix('^')
                    .ok_or_else(|| Error::Parse(format!("bad exponent in {piece:?}")))?
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {piece:?}")))?,
            };
            terms.push((v, Scalar::from_i64(sign * c, characteristic)));
        }
        Ok(LaurentScalar::from_terms(terms, None, characteristic))
    }
}

/// Evaluates a polynomial over `k` at a point with Laurent coordinates.
pub fn eval_laurent(p: &MultiPoly, point: &[LaurentScalar], characteristic: u64) -> LaurentScalar {
    let mut acc = LaurentScalar::zero(characteristic);
    for (m, c) in p.terms() {
        let mut t = LaurentScalar::monomial(c.clone(), 0);
        for (i, &e) in m.exps.iter().enumerate() {
            if e > 0 {
                t = t.mul(&point[i].pow(e as u32));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.terms {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (*v, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "w")?,
                (1, false) => write!(f, "{abs}*w")?,
                (_, true) => write!(f, "w^{v}")?,
                (_, false) => write!(f, "{abs}*w^{v}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(p) = self.prec {
            write!(f, " + O(w^{p})")?;
        }
        Ok(())
    }
}
