//! Dense rational linear algebra on `ℚ[x]/(f)` at a specialized point, independent of the
//! library's algebra and form code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;
pub type Mat = Vec<Vec<Q>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn identity(d: usize) -> Mat {
    (0..d).map(|i| (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (n, m, k) = (a.len(), b[0].len(), b.len());
    (0..n).map(|i| (0..m).map(|j| (0..k).fold(Q::zero(), |acc, t| acc + &a[i][t] * &b[t][j])).collect()).collect()
}

pub fn trace(a: &Mat) -> Q {
    (0..a.len()).fold(Q::zero(), |acc, i| acc + &a[i][i])
}

pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = Q::one() / &m[c][c];
        for v in m[c].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..2 * n {
                    let t = &f * &m[c][k];
                    m[r][k] = &m[r][k] - t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det(a: &Mat) -> Q {
    let n = a.len();
    let mut m = a.clone();
    let mut acc = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Q::zero() };
        if p != c {
            m.swap(c, p);
            acc = -acc;
        }
        acc = &acc * &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] = &m[r][k] - t;
            }
        }
    }
    acc
}

/// `ℚ[x]/(f)` with `f` monic, given by ascending coefficients `c_0, ..., c_{d-1}` (leading 1 implied).
pub struct Monogenic {
    pub d: usize,
    pub x: Mat,
}

impl Monogenic {
    pub fn new(lower: &[Q]) -> Monogenic {
        let d = lower.len();
        let mut x = vec![vec![Q::zero(); d]; d];
        for j in 0..d {
            if j + 1 < d {
                x[j + 1][j] = Q::one();
            } else {
                for i in 0..d {
                    x[i][j] = -lower[i].clone();
                }
            }
        }
        Monogenic { d, x }
    }

    /// Multiplication matrix of `Σ c_k x^k`.
    pub fn poly(&self, asc: &[Q]) -> Mat {
        let mut acc = vec![vec![Q::zero(); self.d]; self.d];
        let mut power = identity(self.d);
        for c in asc {
            for i in 0..self.d {
                for j in 0..self.d {
                    acc[i][j] = &acc[i][j] + c * &power[i][j];
                }
            }
            power = matmul(&power, &self.x);
        }
        acc
    }

    pub fn x_power(&self, k: usize) -> Mat {
        let mut asc = vec![Q::zero(); k + 1];
        asc[k] = Q::one();
        self.poly(&asc)
    }

    /// `f'` as a multiplication matrix.
    pub fn derivative(&self, lower: &[Q]) -> Mat {
        let mut asc: Vec<Q> = (1..self.d).map(|k| &lower[k] * q(k as i64)).collect();
        asc.push(q(self.d as i64));
        self.poly(&asc)
    }

    /// Gram matrix of `(x^i, x^j) ↦ tr(f'^{-1} x^i τ(x^j))` with `τ(x) = -x`.
    pub fn tau_form_gram(&self, lower: &[Q]) -> Mat {
        let inv = inverse(&self.derivative(lower)).expect("f' is a unit at this point");
        (0..self.d)
            .map(|i| {
                (0..self.d)
                    .map(|j| {
                        let sign = if j % 2 == 0 { q(1) } else { q(-1) };
                        trace(&matmul(&inv, &matmul(&self.x_power(i), &self.x_power(j)))) * sign
                    })
                    .collect()
            })
            .collect()
    }
}
