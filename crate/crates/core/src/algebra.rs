//! Finite free algebras over a polynomial base ring, given by multiplication tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::polyring::matrix::{self, PolyMatrix};
use crate::polyring::{MultiPoly, PolyRing, RatFunc, Ring};

pub type Algebra = Arc<FiniteFreeAlgebra>;

pub struct FiniteFreeAlgebra {
    ring: Ring,
    rank: usize,
    labels: Vec<String>,
    table: Vec<Vec<Vec<MultiPoly>>>,
    x: Vec<MultiPoly>,
    tau: Option<PolyMatrix>,
    weights: Option<Vec<i32>>,
    defining: Option<Vec<MultiPoly>>,
}

#[derive(Clone)]
pub struct AlgebraElement {
    parent: Algebra,
    coords: Vec<MultiPoly>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}
impl Eq for AlgebraElement {}

impl fmt::Debug for FiniteFreeAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteFreeAlgebra(rank {}, basis [{}], over {:?})", self.rank, self.labels.join(", "), self.ring.names)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, l) in self.coords.iter().zip(&self.parent.labels) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if l == "1" {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{l}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl AlgebraElement {
    pub fn parent(&self) -> &Algebra {
        &self.parent
    }

    pub fn coords(&self) -> &[MultiPoly] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<MultiPoly> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &AlgebraElement) -> AlgebraElement {
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        AlgebraElement { parent: self.parent.clone(), coords }
    }

    pub fn sub(&self, o: &AlgebraElement) -> AlgebraElement {
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        AlgebraElement { parent: self.parent.clone(), coords }
    }

    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement { parent: self.parent.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &MultiPoly) -> AlgebraElement {
        AlgebraElement { parent: self.parent.clone(), coords: self.coords.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &AlgebraElement) -> AlgebraElement {
        self.parent.mul(self, o)
    }

    pub fn pow(&self, e: u32) -> AlgebraElement {
        let mut acc = self.parent.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub rank: usize,
    pub basis: Vec<String>,
    pub table: Vec<Vec<Vec<String>>>,
    pub x: Vec<String>,
    pub tau: Option<Vec<Vec<String>>>,
}

fn unit_vec(ring: &Ring, d: usize, i: usize) -> Vec<MultiPoly> {
    (0..d).map(|k| if k == i { MultiPoly::one(ring) } else { MultiPoly::zero(ring) }).collect()
}

impl FiniteFreeAlgebra {
    /// Builds an algebra from a table, checking commutativity and associativity.
    pub fn from_table(
        ring: &Ring,
        labels: Vec<String>,
        table: Vec<Vec<Vec<MultiPoly>>>,
        x: Vec<MultiPoly>,
        tau: Option<PolyMatrix>,
        weights: Option<Vec<i32>>,
    ) -> Result<Algebra> {
        let alg = FiniteFreeAlgebra {
            ring: ring.clone(),
            rank: labels.len(),
            labels,
            table,
            x,
            tau,
            weights,
            defining: None,
        };
        alg.check_table()?;
        Ok(Arc::new(alg))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> Option<&[i32]> {
        self.weights.as_deref()
    }

    /// Monic defining polynomial `[1, a_1, ..., a_d]` for monogenic algebras.
    pub fn defining_poly(&self) -> Option<&[MultiPoly]> {
        self.defining.as_deref()
    }

    pub fn has_tau(&self) -> bool {
        self.tau.is_some()
    }

    pub fn product_of_basis(&self, i: usize, j: usize) -> &[MultiPoly] {
        &self.table[i][j]
    }

    pub fn mul_coords(&self, a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
        let d = self.rank;
        let mut out = vec![MultiPoly::zero(&self.ring); d];
        for i in 0..d {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if b[j].is_zero() {
                    continue;
                }
                let c = &a[i] * &b[j];
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = &out[k] + &(&c * t);
                    }
                }
            }
        }
        out
    }

    pub fn check_table(&self) -> Result<()> {
        let d = self.rank;
        for i in 0..d {
            for j in 0..d {
                if self.table[i][j] != self.table[j][i] {
                    return Err(Error::AssociativityFailure(i, j, j));
                }
            }
            if self.table[0][i] != unit_vec(&self.ring, d, i) {
                return Err(Error::InvalidInput("basis vector 0 must be the identity".into()));
            }
        }
        for i in 0..d {
            for j in i..d {
                for k in j..d {
                    let l = self.mul_coords(&self.table[i][j], &unit_vec(&self.ring, d, k));
                    let r = self.mul_coords(&unit_vec(&self.ring, d, i), &self.table[j][k]);
                    if l != r {
                        return Err(Error::AssociativityFailure(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Methods needing a shared handle on the algebra.
pub trait AlgebraOps {
    fn element(&self, coords: Vec<MultiPoly>) -> AlgebraElement;
    fn basis(&self, i: usize) -> AlgebraElement;
    fn zero(&self) -> AlgebraElement;
    fn one(&self) -> AlgebraElement;
    fn scalar(&self, c: &MultiPoly) -> AlgebraElement;
    fn x(&self) -> AlgebraElement;
    fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement;
    fn mult_matrix(&self, b: &AlgebraElement) -> PolyMatrix;
    fn trace(&self, b: &AlgebraElement) -> MultiPoly;
    fn char_poly(&self, b: &AlgebraElement) -> Vec<MultiPoly>;
    fn tau(&self, b: &AlgebraElement) -> Option<AlgebraElement>;
    fn check_tau(&self) -> bool;
    fn poly_in_x(&self, coeffs_desc: &[MultiPoly]) -> AlgebraElement;
    fn inverse_frac(&self, b: &AlgebraElement) -> Result<Vec<RatFunc>>;
    fn to_json(&self) -> AlgebraJson;
}

impl AlgebraOps for Algebra {
    fn element(&self, coords: Vec<MultiPoly>) -> AlgebraElement {
        assert_eq!(coords.len(), self.rank);
        AlgebraElement { parent: self.clone(), coords }
    }

    fn basis(&self, i: usize) -> AlgebraElement {
        self.element(unit_vec(&self.ring, self.rank, i))
    }

    fn zero(&self) -> AlgebraElement {
        self.element(vec![MultiPoly::zero(&self.ring); self.rank])
    }

    fn one(&self) -> AlgebraElement {
        self.basis(0)
    }

    fn scalar(&self, c: &MultiPoly) -> AlgebraElement {
        self.one().scale(c)
    }

    fn x(&self) -> AlgebraElement {
        self.element(self.x.clone())
    }

    fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.element(self.mul_coords(&a.coords, &b.coords))
    }

    /// Column `j` holds the coordinates of `b * e_j`.
    fn mult_matrix(&self, b: &AlgebraElement) -> PolyMatrix {
        let cols: Vec<Vec<MultiPoly>> =
            (0..self.rank).map(|j| self.mul_coords(&b.coords, &unit_vec(&self.ring, self.rank, j))).collect();
        matrix::transpose(&cols)
    }

    fn trace(&self, b: &AlgebraElement) -> MultiPoly {
        let m = self.mult_matrix(b);
        let mut acc = MultiPoly::zero(&self.ring);
        for (i, row) in m.iter().enumerate() {
            acc = &acc + &row[i];
        }
        acc
    }

    fn char_poly(&self, b: &AlgebraElement) -> Vec<MultiPoly> {
        char_poly_of_matrix(&self.mult_matrix(b))
    }

    fn tau(&self, b: &AlgebraElement) -> Option<AlgebraElement> {
        self.tau.as_ref().map(|t| self.element(matrix::matvec(t, &b.coords)))
    }

    /// `τ² = 1`, `τ` multiplicative on basis pairs, and `τ(x) = -x`.
    fn check_tau(&self) -> bool {
        let Some(_) = &self.tau else { return false };
        let d = self.rank;
        for i in 0..d {
            let ei = self.basis(i);
            let ti = self.tau(&ei).unwrap();
            if self.tau(&ti).unwrap() != ei {
                return false;
            }
            for j in i..d {
                let ej = self.basis(j);
                let lhs = self.tau(&self.mul(&ei, &ej)).unwrap();
                let rhs = self.mul(&ti, &self.tau(&ej).unwrap());
                if lhs != rhs {
                    return false;
                }
            }
        }
        self.tau(&self.x()).unwrap() == self.x().neg()
    }

    /// `c_0 x^k + c_1 x^{k-1} + ... + c_k` evaluated in the algebra.
    fn poly_in_x(&self, coeffs_desc: &[MultiPoly]) -> AlgebraElement {
        let x = self.x();
        let mut acc = self.zero();
        for c in coeffs_desc {
            acc = self.mul(&acc, &x).add(&self.scalar(c));
        }
        acc
    }

    /// Coordinates of `b^{-1}` over the fraction field.
    fn inverse_frac(&self, b: &AlgebraElement) -> Result<Vec<RatFunc>> {
        let m = self.mult_matrix(b);
        solve_nonsingular(&m, &unit_vec(&self.ring, self.rank, 0))
    }

    fn to_json(&self) -> AlgebraJson {
        let s = |v: &[MultiPoly]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        AlgebraJson {
            rank: self.rank,
            basis: self.labels.clone(),
            table: self.table.iter().map(|row| row.iter().map(|c| s(c)).collect()).collect(),
            x: s(&self.x),
            tau: self.tau.as_ref().map(|t| matrix::transpose(t).iter().map(|c| s(c)).collect()),
        }
    }
}

fn solve_nonsingular(m: &PolyMatrix, b: &[MultiPoly]) -> Result<Vec<RatFunc>> {
    matrix::solve_frac(m, b)
}

/// `[1, c_1, ..., c_d]` with `det(tI - m) = t^d + c_1 t^{d-1} + ... + c_d`.
pub fn char_poly_of_matrix(m: &PolyMatrix) -> Vec<MultiPoly> {
    let p = m[0][0].ring().characteristic;
    if p == 0 || p as usize > m.len() {
        faddeev_leverrier(m)
    } else {
        berkowitz(m)
    }
}

/// Faddeev-LeVerrier recursion; needs `1/k` for `k <= d` in the base field.
pub fn faddeev_leverrier(m: &PolyMatrix) -> Vec<MultiPoly> {
    let d = m.len();
    let ring = m[0][0].ring().clone();
    let mut coeffs = vec![MultiPoly::one(&ring)];
    let mut mk = matrix::zeros(&ring, d, d);
    for k in 1..=d {
        let mut next = matrix::matmul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = &row[i] + &coeffs[k - 1];
        }
        mk = next;
        let am = matrix::matmul(m, &mk);
        let mut tr = MultiPoly::zero(&ring);
        for (i, row) in am.iter().enumerate() {
            tr = &tr + &row[i];
        }
        let inv_k = ring.ratio(-1, k as i64);
        coeffs.push(tr.scale(&inv_k));
    }
    coeffs
}

/// Division-free characteristic polynomial.
pub fn berkowitz(m: &PolyMatrix) -> Vec<MultiPoly> {
    let d = m.len();
    let ring = m[0][0].ring().clone();
    let mut vect = vec![MultiPoly::one(&ring), -&m[0][0]];
    for r in 1..d {
        let row: Vec<MultiPoly> = m[r][..r].to_vec();
        let mut q: Vec<MultiPoly> = (0..r).map(|i| m[i][r].clone()).collect();
        let sub: PolyMatrix = m[..r].iter().map(|rw| rw[..r].to_vec()).collect();
        let mut t = vec![MultiPoly::one(&ring), -&m[r][r]];
        for _ in 2..=r + 1 {
            let mut dot = MultiPoly::zero(&ring);
            for (a, b) in row.iter().zip(&q) {
                dot = &dot + &(a * b);
            }
            t.push(-dot);
            q = matrix::matvec(&sub, &q);
        }
        let mut next = vec![MultiPoly::zero(&ring); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for j in 0..=r.min(i) {
                if i - j < t.len() {
                    *slot = &*slot + &(&t[i - j] * &vect[j]);
                }
            }
        }
        vect = next;
    }
    vect
}

/// `A[x]/(f)` for monic `f = [1, a_1, ..., a_d]` (coefficients of `x^d, ..., x^0`).
pub fn monogenic_algebra(ring: &Ring, f: &[MultiPoly]) -> Result<Algebra> {
    if f.len() < 2 || !f[0].is_one() {
        return Err(Error::NotMonic);
    }
    let d = f.len() - 1;
    let mut powers: Vec<Vec<MultiPoly>> = (0..d).map(|i| unit_vec(ring, d, i)).collect();
    for k in d..2 * d - 1 {
        let prev = &powers[k - 1];
        let mut next = vec![MultiPoly::zero(ring); d];
        for i in 0..d - 1 {
            next[i + 1] = prev[i].clone();
        }
        let top = &prev[d - 1];
        if !top.is_zero() {
            for i in 0..d {
                next[i] = &next[i] - &(top * &f[d - i]);
            }
        }
        powers.push(next);
    }
    let table = (0..d).map(|i| (0..d).map(|j| powers[i + j].clone()).collect()).collect();
    let labels = (0..d)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    let parity_ok = f.iter().enumerate().all(|(k, c)| k % 2 == 0 || c.is_zero());
    let tau = parity_ok.then(|| {
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i != j {
                            MultiPoly::zero(ring)
                        } else if i % 2 == 0 {
                            MultiPoly::one(ring)
                        } else {
                            MultiPoly::from_int(ring, -1)
                        }
                    })
                    .collect()
            })
            .collect()
    });
    let x = if d == 1 { vec![-&f[1]] } else { unit_vec(ring, d, 1) };
    let alg = FiniteFreeAlgebra {
        ring: ring.clone(),
        rank: d,
        labels,
        table,
        x,
        tau,
        weights: Some((0..d as i32).collect()),
        defining: Some(f.to_vec()),
    };
    Ok(Arc::new(alg))
}

/// Base ring `k[a_2, ..., a_{2n-2}, p_n]` of the normalized even orthogonal cover.
pub fn so_even_base_ring(n: usize, characteristic: u64) -> Result<Ring> {
    let mut names: Vec<String> = (1..n).map(|k| format!("a{}", 2 * k)).collect();
    let mut weights: Vec<u32> = (1..n).map(|k| 2 * k as u32).collect();
    names.push(format!("p{n}"));
    weights.push(n as u32);
    PolyRing::for_group(Group::SoEven, &names, &weights, characteristic)
}

/// The normalized cover `B̃` on the basis `1, x, ..., x^{2n-2}, p` with
/// `x p = p_n` and `p^2 = -(x^{2n-2} + a_2 x^{2n-4} + ... + a_{2n-2})`.
pub fn blowup_algebra_so_even(n: usize, characteristic: u64) -> Result<Algebra> {
    if n < 2 {
        return Err(Error::InvalidInput("blowup needs n >= 2".into()));
    }
    let ring = so_even_base_ring(n, characteristic)?;
    let d = 2 * n;
    let top = 2 * n - 2;
    let pidx = d - 1;
    let a = |k: usize| MultiPoly::var(&ring, k - 1);
    let pn = MultiPoly::var(&ring, n - 1);
    // g(x) coefficients by power: g = x^{2n-2} + sum_k a_{2k} x^{2n-2-2k}
    let mut g = vec![MultiPoly::zero(&ring); top + 1];
    g[top] = MultiPoly::one(&ring);
    for k in 1..n {
        g[top - 2 * k] = a(k);
    }
    let mul_x = |v: &[MultiPoly]| -> Vec<MultiPoly> {
        let mut out = vec![MultiPoly::zero(&ring); d];
        for i in 0..top {
            out[i + 1] = &out[i + 1] + &v[i];
        }
        let c = &v[top];
        if !c.is_zero() {
            // x^{2n-1} = -p_n p - sum_k a_{2k} x^{2n-1-2k}
            out[pidx] = &out[pidx] - &(c * &pn);
            for k in 1..n {
                let idx = top + 1 - 2 * k;
                out[idx] = &out[idx] - &(c * &a(k));
            }
        }
        out[0] = &out[0] + &(&v[pidx] * &pn);
        out
    };
    let mul_p = |v: &[MultiPoly]| -> Vec<MultiPoly> {
        let mut out = vec![MultiPoly::zero(&ring); d];
        out[pidx] = &out[pidx] + &v[0];
        for i in 1..=top {
            out[i - 1] = &out[i - 1] + &(&v[i] * &pn);
        }
        let c = &v[pidx];
        if !c.is_zero() {
            for (i, gi) in g.iter().enumerate() {
                if !gi.is_zero() {
                    out[i] = &out[i] - &(c * gi);
                }
            }
        }
        out
    };
    let basis_times = |i: usize, v: &[MultiPoly]| -> Vec<MultiPoly> {
        if i == pidx {
            mul_p(v)
        } else {
            let mut w = v.to_vec();
            for _ in 0..i {
                w = mul_x(&w);
            }
            w
        }
    };
    let table: Vec<Vec<Vec<MultiPoly>>> =
        (0..d).map(|i| (0..d).map(|j| basis_times(i, &unit_vec(&ring, d, j))).collect()).collect();
    let mut labels: Vec<String> = (0..=top)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    labels.push(format!("p{}", n - 1));
    let tau = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i != j {
                        MultiPoly::zero(&ring)
                    } else if i % 2 == 0 && i != pidx {
                        MultiPoly::one(&ring)
                    } else {
                        MultiPoly::from_int(&ring, -1)
                    }
                })
                .collect()
        })
        .collect();
    let mut weights: Vec<i32> = (0..=top as i32).collect();
    weights.push(n as i32 - 1);
    FiniteFreeAlgebra::from_table(&ring, labels, table, unit_vec(&ring, d, 1), Some(tau), Some(weights))
}

/// A subalgebra `A' = A[g]` of `B` over which `B` is free on `1, x, ..., x^{d-1}`.
#[derive(Clone, Debug)]
pub struct SubcoverEmbedding {
    pub sub: Algebra,
    pub total: Algebra,
    pub generator: AlgebraElement,
    /// `n x m`, column `i` holds `g^i` in the basis of `B`.
    pub embedding: PolyMatrix,
    pub relative_degree: usize,
    /// `[1, a'_1, ..., a'_d]` over `A'`.
    pub p2: Vec<AlgebraElement>,
    /// Columns `g^i x^j`, ordered with index `j*m + i`.
    change: PolyMatrix,
    change_inv: PolyMatrix,
}

fn vec_frac_rank(cols: &[Vec<MultiPoly>]) -> usize {
    let mut rows: Vec<Vec<RatFunc>> = matrix::transpose(&cols.to_vec())
        .into_iter()
        .map(|r| r.into_iter().map(RatFunc::from_poly).collect())
        .collect();
    matrix::rref_frac(&mut rows).len()
}

/// Builds `A' = A[g] ⊂ B` from a generator expression `g ∈ B`.
pub fn subcover(total: &Algebra, generator: &AlgebraElement) -> Result<SubcoverEmbedding> {
    let ring = total.ring().clone();
    let n = total.rank();
    let mut pows = vec![total.one()];
    let m = loop {
        let next = total.mul(pows.last().unwrap(), generator);
        let mut cols: Vec<Vec<MultiPoly>> = pows.iter().map(|p| p.coords().to_vec()).collect();
        cols.push(next.coords().to_vec());
        if vec_frac_rank(&cols) < cols.len() {
            pows.push(next);
            break pows.len() - 1;
        }
        pows.push(next);
        if pows.len() > n {
            return Err(Error::NotFree("generator powers never become dependent".into()));
        }
    };
    if !n.is_multiple_of(m) {
        return Err(Error::NotFree(format!("subalgebra rank {m} does not divide {n}")));
    }
    let d = n / m;
    let x = total.x();
    let mut xpows = vec![total.one()];
    for _ in 0..d {
        xpows.push(total.mul(xpows.last().unwrap(), &x));
    }
    let mut cols = Vec::with_capacity(n);
    for xj in xpows.iter().take(d) {
        for gi in pows.iter().take(m) {
            cols.push(total.mul(gi, xj).into_coords());
        }
    }
    let change = matrix::transpose(&cols);
    let dt = matrix::det(&change);
    if !dt.is_unit() {
        return Err(Error::NotFree(format!("basis change has determinant {dt}")));
    }
    let change_inv = matrix::inverse_unimodular(&change)?;
    let gm = matrix::matvec(&change_inv, pows[m].coords());
    if gm[m..].iter().any(|c| !c.is_zero()) {
        return Err(Error::NotFree("generator power leaves the subalgebra".into()));
    }
    let mut f = vec![MultiPoly::one(&ring)];
    for i in (0..m).rev() {
        f.push(-&gm[i]);
    }
    let sub = monogenic_algebra(&ring, &f)?;
    let xd = matrix::matvec(&change_inv, xpows[d].coords());
    let mut p2 = vec![sub.one()];
    for j in (0..d).rev() {
        p2.push(sub.element(xd[j * m..(j + 1) * m].to_vec()).neg());
    }
    let embedding = matrix::transpose(&pows[..m].iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>());
    let emb = SubcoverEmbedding {
        sub,
        total: total.clone(),
        generator: generator.clone(),
        embedding,
        relative_degree: d,
        p2,
        change,
        change_inv,
    };
    emb.check()?;
    Ok(emb)
}

impl SubcoverEmbedding {
    pub fn embed(&self, a: &AlgebraElement) -> AlgebraElement {
        self.total.element(matrix::matvec(&self.embedding, a.coords()))
    }

    /// Coordinates over `A'` in the basis `1, x, ..., x^{d-1}`.
    pub fn relative_coords(&self, b: &AlgebraElement) -> Vec<AlgebraElement> {
        let m = self.sub.rank();
        let c = matrix::matvec(&self.change_inv, b.coords());
        (0..self.relative_degree).map(|j| self.sub.element(c[j * m..(j + 1) * m].to_vec())).collect()
    }

    pub fn from_relative(&self, coeffs: &[AlgebraElement]) -> AlgebraElement {
        let flat: Vec<MultiPoly> = coeffs.iter().flat_map(|a| a.coords().to_vec()).collect();
        self.total.element(matrix::matvec(&self.change, &flat))
    }

    /// Matrix over `A'` of multiplication by `b`, column `j` = coordinates of `b x^j`.
    pub fn relative_mult_matrix(&self, b: &AlgebraElement) -> Vec<Vec<AlgebraElement>> {
        let x = self.total.x();
        let mut xj = self.total.one();
        let mut cols = Vec::new();
        for _ in 0..self.relative_degree {
            cols.push(self.relative_coords(&self.total.mul(b, &xj)));
            xj = self.total.mul(&xj, &x);
        }
        (0..self.relative_degree).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    }

    pub fn relative_trace(&self, b: &AlgebraElement) -> AlgebraElement {
        let m = self.relative_mult_matrix(b);
        let mut acc = self.sub.zero();
        for (i, row) in m.iter().enumerate() {
            acc = acc.add(&row[i]);
        }
        acc
    }

    /// Embedding is multiplicative and `P₂(x) = 0` in `B`.
    pub fn check(&self) -> Result<()> {
        let m = self.sub.rank();
        for i in 0..m {
            for j in i..m {
                let (a, b) = (self.sub.basis(i), self.sub.basis(j));
                if self.embed(&self.sub.mul(&a, &b)) != self.total.mul(&self.embed(&a), &self.embed(&b)) {
                    return Err(Error::NotFree(format!("embedding not multiplicative on ({i}, {j})")));
                }
            }
        }
        let x = self.total.x();
        let mut acc = self.total.zero();
        for c in &self.p2 {
            acc = self.total.mul(&acc, &x).add(&self.embed(c));
        }
        if !acc.is_zero() {
            return Err(Error::NotFree("relative polynomial does not vanish on x".into()));
        }
        Ok(())
    }
}
