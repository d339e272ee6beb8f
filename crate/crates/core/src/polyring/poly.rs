use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use super::ring::{same_ring, Ring};
use super::scalar::Scalar;
use crate::error::{Error, Result};

pub type Exps = SmallVec<[u16; 8]>;

/// Exponent vector with its cached weighted degree; the derived order is graded lex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub deg: u32,
    pub exps: Exps,
}

impl Monomial {
    pub fn new(ring: &Ring, exps: Exps) -> Monomial {
        let deg = exps.iter().zip(&ring.weights).map(|(&e, &w)| e as u32 * w).sum();
        Monomial { deg, exps }
    }

    pub fn one(n: usize) -> Monomial {
        Monomial { deg: 0, exps: SmallVec::from_elem(0, n) }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: self.deg + other.deg,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: other.deg - self.deg,
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

/// Multivariate polynomial with terms sorted by decreasing monomial.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    ring: Ring,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}
impl Eq for MultiPoly {}

impl std::hash::Hash for MultiPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Ring-checked arithmetic.
pub fn poly_arith(p: &MultiPoly, q: &MultiPoly, op: PolyOp) -> Result<MultiPoly> {
    if !same_ring(&p.ring, &q.ring) {
        return Err(Error::RingMismatch);
    }
    Ok(match op {
        PolyOp::Add => p + q,
        PolyOp::Sub => p - q,
        PolyOp::Mul => p * q,
    })
}

impl MultiPoly {
    pub fn zero(ring: &Ring) -> MultiPoly {
        MultiPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Ring) -> MultiPoly {
        MultiPoly::constant(ring, ring.scalar(1))
    }

    pub fn from_int(ring: &Ring, n: i64) -> MultiPoly {
        MultiPoly::constant(ring, ring.scalar(n))
    }

    pub fn constant(ring: &Ring, c: Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(ring);
        }
        MultiPoly { ring: ring.clone(), terms: vec![(Monomial::one(ring.nvars()), c)] }
    }

    pub fn var(ring: &Ring, i: usize) -> MultiPoly {
        let mut exps: Exps = SmallVec::from_elem(0, ring.nvars());
        exps[i] = 1;
        MultiPoly { ring: ring.clone(), terms: vec![(Monomial::new(ring, exps), ring.scalar(1))] }
    }

    pub fn var_named(ring: &Ring, name: &str) -> Result<MultiPoly> {
        ring.index_of(name)
            .map(|i| MultiPoly::var(ring, i))
            .ok_or_else(|| Error::InvalidInput(format!("no generator `{name}`")))
    }

    pub fn monomial(ring: &Ring, exps: &[u16], c: Scalar) -> MultiPoly {
        MultiPoly::from_terms(ring, vec![(Monomial::new(ring, exps.iter().copied().collect()), c)])
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(ring: &Ring, terms: Vec<(Monomial, Scalar)>) -> MultiPoly {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        MultiPoly::from_map(ring, acc)
    }

    fn from_map(ring: &Ring, acc: HashMap<Monomial, Scalar>) -> MultiPoly {
        let mut terms: Vec<(Monomial, Scalar)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero(self.ring.characteristic)),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    /// True for nonzero constants, the units of the polynomial ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(|| Scalar::zero(self.ring.characteristic))
    }

    /// Weighted degree of the leading monomial; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.deg)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.deg == w[1].0.deg)
    }

    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.iter().map(|t| t.0.exps[var]).max()
    }

    pub fn coeff_of(&self, exps: &[u16]) -> Scalar {
        self.terms
            .iter()
            .find(|t| t.0.exps.as_slice() == exps)
            .map(|t| t.1.clone())
            .unwrap_or_else(|| Scalar::zero(self.ring.characteristic))
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect();
        MultiPoly { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides leading coefficient out, so the result has leading coefficient 1.
    pub fn monic(&self) -> MultiPoly {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("field coefficients")),
        }
    }

    /// Exact quotient when `g` divides `self`, otherwise `None`.
    pub fn div_exact(&self, g: &MultiPoly) -> Option<MultiPoly> {
        assert!(same_ring(&self.ring, &g.ring), "ring mismatch");
        if g.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MultiPoly::zero(&self.ring));
        }
        let (lm, lc) = g.terms[0].clone();
        let lc_inv = lc.inv()?;
        if g.terms.len() == 1 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !lm.divides(m) {
                    return None;
                }
                terms.push((lm.quotient_of(m), c * &lc_inv));
            }
            return Some(MultiPoly { ring: self.ring.clone(), terms });
        }
        let mut rem: std::collections::BTreeMap<Monomial, Scalar> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c * &lc_inv;
            for (gm, gc) in &g.terms[1..] {
                let mm = gm.mul(&qm);
                let v = gc * &qc;
                match rem.entry(mm) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let nv = o.get() - &v;
                        if nv.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = nv;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(vac) => {
                        vac.insert(-v);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(MultiPoly { ring: self.ring.clone(), terms: quot })
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let ring = &self.ring;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps[var] > 0)
            .map(|(m, c)| {
                let mut e = m.exps.clone();
                let k = e[var];
                e[var] -= 1;
                (Monomial::new(ring, e), c * &ring.scalar(k as i64))
            })
            .collect();
        MultiPoly::from_terms(ring, terms)
    }

    /// Coefficients of `self` viewed as a polynomial in `var`, lowest power first.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let k = m.exps[var] as usize;
            let mut e = m.exps.clone();
            e[var] = 0;
            buckets[k].push((Monomial::new(&self.ring, e), c.clone()));
        }
        buckets
            .into_iter()
            .map(|t| MultiPoly { ring: self.ring.clone(), terms: t })
            .collect()
    }

    pub fn from_coeffs_in(ring: &Ring, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let x = MultiPoly::var(ring, var);
        let mut acc = MultiPoly::zero(ring);
        let mut xp = MultiPoly::one(ring);
        for c in coeffs {
            acc = &acc + &(c * &xp);
            xp = &xp * &x;
        }
        acc
    }

    /// Ring homomorphism sending generator `i` to `images[i]`.
    pub fn substitute(&self, target: &Ring, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.ring.nvars());
        let mut cache: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(target), p.clone()]).collect();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, convert_scalar(c, target.characteristic));
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            for (mm, cc) in t.terms {
                match acc.get_mut(&mm) {
                    Some(v) => *v = &*v + &cc,
                    None => {
                        acc.insert(mm, cc);
                    }
                }
            }
        }
        MultiPoly::from_map(target, acc)
    }

    /// Evaluation at a point of the base field.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero(self.ring.characteristic);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e as u32);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Same generators, new ring (e.g. with extra generators appended), matched by name.
    pub fn embed(&self, target: &Ring) -> MultiPoly {
        let images: Vec<MultiPoly> = self
            .ring
            .names
            .iter()
            .map(|n| MultiPoly::var_named(target, n).expect("generator present in target ring"))
            .collect();
        self.substitute(target, &images)
    }

    /// Coefficientwise reduction of a rational polynomial into `target` of prime characteristic.
    pub fn reduce_mod(&self, target: &Ring) -> Option<MultiPoly> {
        let p = target.characteristic;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let r = c.reduce_mod(p)?;
            if !r.is_zero() {
                terms.push((m.clone(), r));
            }
        }
        Some(MultiPoly { ring: target.clone(), terms })
    }

    /// Leaves only terms of weighted degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|t| t.0.deg == d).cloned().collect(),
        }
    }

    fn merge(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        assert!(same_ring(&self.ring, &other.ring), "ring mismatch");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        MultiPoly { ring: self.ring.clone(), terms: out }
    }

    fn product(&self, other: &MultiPoly) -> MultiPoly {
        assert!(same_ring(&self.ring, &other.ring), "ring mismatch");
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_monomial(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        MultiPoly::from_map(&self.ring, acc)
    }
}

/// Casts an integer-valued scalar between characteristics; rationals reduce modulo p.
pub fn convert_scalar(c: &Scalar, characteristic: u64) -> Scalar {
    if c.characteristic() == characteristic {
        return c.clone();
    }
    match c {
        Scalar::Q(_) => c.reduce_mod(characteristic).expect("denominator invertible in target"),
        Scalar::Fp { value, .. } => Scalar::from_i64(*value as i64, characteristic),
    }
}

impl<'a> std::ops::Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.merge(rhs, false)
    }
}

impl<'a> std::ops::Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.merge(rhs, true)
    }
}

impl<'a> std::ops::Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.product(rhs)
    }
}

impl std::ops::Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl std::ops::Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl std::ops::Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_poly(self))
    }
}
