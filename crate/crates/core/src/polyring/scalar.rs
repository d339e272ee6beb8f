use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element of the base field: a reduced rational, or a residue modulo a prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, p: u64 },
}

fn mod_inv(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        return None;
    }
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    Some(s0.rem_euclid(p as i128) as u64)
}

impl Scalar {
    pub fn zero(characteristic: u64) -> Scalar {
        Scalar::from_i64(0, characteristic)
    }

    pub fn one(characteristic: u64) -> Scalar {
        Scalar::from_i64(1, characteristic)
    }

    pub fn from_i64(n: i64, characteristic: u64) -> Scalar {
        if characteristic == 0 {
            Scalar::Q(BigRational::from_integer(BigInt::from(n)))
        } else {
            let p = characteristic as i128;
            Scalar::Fp { value: (n as i128).rem_euclid(p) as u64, p: characteristic }
        }
    }

    pub fn from_bigint(n: &BigInt, characteristic: u64) -> Scalar {
        if characteristic == 0 {
            Scalar::Q(BigRational::from_integer(n.clone()))
        } else {
            let r = n.mod_floor(&BigInt::from(characteristic));
            Scalar::Fp { value: r.to_u64().unwrap(), p: characteristic }
        }
    }

    /// `num/den` in the given characteristic; fails when `den` vanishes there.
    pub fn from_ratio(num: &BigInt, den: &BigInt, characteristic: u64) -> Result<Scalar> {
        if characteristic == 0 {
            if den.is_zero() {
                return Err(Error::InvalidInput("zero denominator".into()));
            }
            Ok(Scalar::Q(BigRational::new(num.clone(), den.clone())))
        } else {
            let n = Scalar::from_bigint(num, characteristic);
            let d = Scalar::from_bigint(den, characteristic);
            let inv = d
                .inv()
                .ok_or_else(|| Error::InvalidInput(format!("denominator {den} vanishes mod {characteristic}")))?;
            Ok(&n * &inv)
        }
    }

    pub fn rational(num: i64, den: i64) -> Scalar {
        Scalar::Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Scalar::Q(_) => 0,
            Scalar::Fp { p, .. } => *p,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Q(r.recip()))
                }
            }
            Scalar::Fp { value, p } => mod_inv(*value, *p).map(|v| Scalar::Fp { value: v, p: *p }),
        }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.characteristic());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Numerator and denominator; a residue is reported as `value/1`.
    pub fn num_den(&self) -> (BigInt, BigInt) {
        match self {
            Scalar::Q(r) => (r.numer().clone(), r.denom().clone()),
            Scalar::Fp { value, .. } => (BigInt::from(*value), BigInt::one()),
        }
    }

    /// Reduction of a rational into `F_p`; `None` when the denominator vanishes mod `p`.
    pub fn reduce_mod(&self, p: u64) -> Option<Scalar> {
        match self {
            Scalar::Q(r) => Scalar::from_ratio(r.numer(), r.denom(), p).ok(),
            Scalar::Fp { .. } => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }

    /// Cheap size measure used for pivot selection.
    pub fn height(&self) -> u64 {
        match self {
            Scalar::Q(r) => r.numer().bits() + r.denom().bits(),
            Scalar::Fp { .. } => 1,
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $qop:tt, $fp:expr) => {
        impl<'a> std::ops::$trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a $qop b),
                    (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                        let f: fn(u64, u64, u64) -> u64 = $fp;
                        Scalar::Fp { value: f(*a, *b, *p), p: *p }
                    }
                    _ => panic!("scalar characteristic mismatch"),
                }
            }
        }
        impl std::ops::$trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

binop!(Add, add, +, |a, b, p| ((a as u128 + b as u128) % p as u128) as u64);
binop!(Sub, sub, -, |a, b, p| ((a as u128 + p as u128 - b as u128) % p as u128) as u64);
binop!(Mul, mul, *, |a, b, p| ((a as u128 * b as u128) % p as u128) as u64);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, p } => Scalar::Fp { value: (p - value) % p, p: *p },
        }
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => a.partial_cmp(b),
            (Scalar::Fp { value: a, .. }, Scalar::Fp { value: b, .. }) => a.partial_cmp(b),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let a = Scalar::rational(6, -4);
        assert_eq!(a.num_den(), (BigInt::from(-3), BigInt::from(2)));
    }

    #[test]
    fn residues_stay_in_range() {
        let a = Scalar::from_i64(-1, 7);
        assert_eq!(a, Scalar::Fp { value: 6, p: 7 });
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert!(Scalar::from_i64(14, 7).inv().is_none());
    }

    #[test]
    fn ratio_mod_p() {
        let s = Scalar::from_ratio(&BigInt::from(5), &BigInt::from(2), 7).unwrap();
        assert_eq!(s, Scalar::Fp { value: 6, p: 7 });
        assert!(Scalar::from_ratio(&BigInt::from(1), &BigInt::from(7), 7).is_err());
    }

    #[test]
    fn primes() {
        assert!(is_prime(5) && is_prime(7919) && !is_prime(1) && !is_prime(91));
    }
}
