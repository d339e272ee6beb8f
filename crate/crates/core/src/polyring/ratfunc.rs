use std::fmt;

use super::gcd::gcd;
use super::poly::MultiPoly;
use super::ring::{same_ring, Ring};
use crate::error::{Error, Result};

/// Element of the fraction field; reduced only on demand.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn ratfunc_arith(f: &RatFunc, g: &RatFunc, op: RatOp) -> Result<RatFunc> {
    if !same_ring(f.num.ring(), g.num.ring()) {
        return Err(Error::RingMismatch);
    }
    match op {
        RatOp::Add => Ok(f.add(g)),
        RatOp::Sub => Ok(f.sub(g)),
        RatOp::Mul => Ok(f.mul(g)),
        RatOp::Div => f.div(g),
    }
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<RatFunc> {
        if !same_ring(num.ring(), den.ring()) {
            return Err(Error::RingMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: MultiPoly) -> RatFunc {
        let den = MultiPoly::one(p.ring());
        RatFunc { num: p, den }
    }

    pub fn zero(ring: &Ring) -> RatFunc {
        RatFunc::from_poly(MultiPoly::zero(ring))
    }

    pub fn one(ring: &Ring) -> RatFunc {
        RatFunc::from_poly(MultiPoly::one(ring))
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancels the gcd and makes the denominator's leading coefficient 1.
    pub fn normalize(&self) -> RatFunc {
        if self.num.is_zero() {
            return RatFunc::zero(self.ring());
        }
        let (mut n, mut d) = if self.den.is_unit() {
            (self.num.clone(), self.den.clone())
        } else {
            let g = gcd(&self.num, &self.den);
            (self.num.div_exact(&g).unwrap(), self.den.div_exact(&g).unwrap())
        };
        let lc = d.leading_coeff().inv().unwrap();
        n = n.scale(&lc);
        d = d.scale(&lc);
        RatFunc { num: n, den: d }
    }

    /// The polynomial equal to `self`, if the denominator divides the numerator.
    pub fn is_polynomial(&self) -> Option<MultiPoly> {
        self.num.div_exact(&self.den)
    }

    fn fold_constant_den(num: MultiPoly, den: MultiPoly) -> RatFunc {
        if den.is_unit() && !den.is_one() {
            let c = den.leading_coeff().inv().unwrap();
            let one = MultiPoly::one(num.ring());
            return RatFunc { num: num.scale(&c), den: one };
        }
        RatFunc { num, den }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::fold_constant_den(&self.num + &o.num, self.den.clone());
        }
        RatFunc::fold_constant_den(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::fold_constant_den(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.num.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        Ok(RatFunc::fold_constant_den(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> RatFunc {
        RatFunc::fold_constant_den(&self.num * p, self.den.clone())
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::one(self.ring()).div(self)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        same_ring(self.ring(), other.ring()) && &self.num * &other.den == &other.num * &self.den
    }
}
impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
