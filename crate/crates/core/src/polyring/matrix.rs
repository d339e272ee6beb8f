use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::ring::Ring;
use super::scalar::Scalar;
use crate::error::{Error, Result};

pub type PolyMatrix = Vec<Vec<MultiPoly>>;

pub fn identity(ring: &Ring, n: usize) -> PolyMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { MultiPoly::one(ring) } else { MultiPoly::zero(ring) }).collect())
        .collect()
}

pub fn zeros(ring: &Ring, r: usize, c: usize) -> PolyMatrix {
    vec![vec![MultiPoly::zero(ring); c]; r]
}

pub fn transpose(m: &PolyMatrix) -> PolyMatrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn matmul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let ring = a[0][0].ring().clone();
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = zeros(&ring, n, m);
    for i in 0..n {
        for j in 0..m {
            let mut acc = MultiPoly::zero(&ring);
            for t in 0..k {
                if !a[i][t].is_zero() && !b[t][j].is_zero() {
                    acc = &acc + &(&a[i][t] * &b[t][j]);
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn matvec(a: &PolyMatrix, v: &[MultiPoly]) -> Vec<MultiPoly> {
    a.iter()
        .map(|row| {
            let mut acc = MultiPoly::zero(v[0].ring());
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(x * y);
                }
            }
            acc
        })
        .collect()
}

fn pick_pivot(m: &PolyMatrix, k: usize, col: usize) -> Option<usize> {
    (k..m.len()).filter(|&i| !m[i][col].is_zero()).min_by_key(|&i| m[i][col].len())
}

/// Fraction-free Gaussian elimination on the first `n` columns; returns the sign of the row permutation.
fn bareiss_eliminate(m: &mut PolyMatrix, n: usize) -> Option<i32> {
    let ring = m[0][0].ring().clone();
    let width = m[0].len();
    let mut sign = 1;
    let mut prev = MultiPoly::one(&ring);
    for k in 0..n {
        let p = pick_pivot(m, k, k)?;
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..m.len() {
            for j in k + 1..width {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = MultiPoly::zero(&ring);
        }
        prev = m[k][k].clone();
    }
    Some(sign)
}

/// Determinant by fraction-free elimination.
pub fn det(m: &PolyMatrix) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        panic!("determinant of an empty matrix needs a ring");
    }
    let mut a = m.clone();
    match bareiss_eliminate(&mut a, n) {
        None => MultiPoly::zero(m[0][0].ring()),
        Some(s) => {
            if s > 0 {
                a[n - 1][n - 1].clone()
            } else {
                -&a[n - 1][n - 1]
            }
        }
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(m: &PolyMatrix) -> MultiPoly {
    let n = m.len();
    let ring = m[0][0].ring().clone();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(&ring);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: PolyMatrix = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = &m[0][j] * &det_cofactor(&minor);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

/// Solves `m x = b` over the fraction field; the matrix must be nonsingular.
pub fn solve_frac(m: &PolyMatrix, b: &[MultiPoly]) -> Result<Vec<RatFunc>> {
    let n = m.len();
    let ring = m[0][0].ring().clone();
    let mut a: PolyMatrix = m.iter().zip(b).map(|(row, bi)| {
        let mut r = row.clone();
        r.push(bi.clone());
        r
    }).collect();
    bareiss_eliminate(&mut a, n).ok_or(Error::DivisionByZeroPoly)?;
    let d = a[n - 1][n - 1].clone();
    let mut y = vec![MultiPoly::zero(&ring); n];
    for i in (0..n).rev() {
        let mut acc = &d * &a[i][n];
        for j in i + 1..n {
            acc = &acc - &(&a[i][j] * &y[j]);
        }
        y[i] = acc.div_exact(&a[i][i]).expect("fraction-free back substitution is exact");
    }
    y.into_iter().map(|yi| RatFunc::new(yi, d.clone())).collect()
}

/// Inverse of a matrix whose determinant is a unit of the polynomial ring.
pub fn inverse_unimodular(m: &PolyMatrix) -> Result<PolyMatrix> {
    let n = m.len();
    let ring = m[0][0].ring().clone();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<MultiPoly> = (0..n).map(|i| if i == j { MultiPoly::one(&ring) } else { MultiPoly::zero(&ring) }).collect();
        let x = solve_frac(m, &e)?;
        let col: Option<Vec<MultiPoly>> = x.iter().map(|r| r.is_polynomial()).collect();
        cols.push(col.ok_or_else(|| Error::NotFree("determinant is not a unit".into()))?);
    }
    Ok(transpose(&cols))
}

/// Rank of a matrix over the base field.
pub fn rank_scalar(rows: &[Vec<Scalar>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let width = m[0].len();
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].inv().unwrap();
        for j in col..width {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..width {
                    let t = &f * &m[rank][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Solves `m x = b` over the base field; `None` when `m` is singular.
pub fn solve_scalar(m: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.iter().zip(b).map(|(r, bi)| {
        let mut r = r.clone();
        r.push(bi.clone());
        r
    }).collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].inv().unwrap();
        for j in col..=n {
            a[col][j] = &a[col][j] * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..=n {
                    let t = &f * &a[col][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

/// Reduced row echelon form over the fraction field; returns pivot columns.
pub fn rref_frac(m: &mut Vec<Vec<RatFunc>>) -> Vec<usize> {
    let width = if m.is_empty() { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let cand = (r..m.len())
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| (m[i][col].numer().len() + m[i][col].denom().len(), i));
        let Some(p) = cand else { continue };
        m.swap(r, p);
        let inv = m[r][col].inv().unwrap();
        for j in col..width {
            if !m[r][j].is_zero() {
                m[r][j] = m[r][j].mul(&inv).normalize();
            }
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..width {
                    if !m[r][j].is_zero() {
                        m[i][j] = m[i][j].sub(&f.mul(&m[r][j])).normalize();
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    pivots
}

/// Basis of the right null space over the fraction field, one vector per free column.
pub fn nullspace_frac(m: &[Vec<RatFunc>], width: usize, ring: &Ring) -> Vec<Vec<RatFunc>> {
    nullspace_frac_with_free(m, width, ring).0
}

/// Null space basis with its free columns; vector `k` is `1` at `free[k]` and `0` at the others.
pub fn nullspace_frac_with_free(m: &[Vec<RatFunc>], width: usize, ring: &Ring) -> (Vec<Vec<RatFunc>>, Vec<usize>) {
    let mut a = m.to_vec();
    let pivots = rref_frac(&mut a);
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![RatFunc::zero(ring); width];
            v[f] = RatFunc::one(ring);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = a[row][f].neg();
            }
            v
        })
        .collect();
    (basis, free)
}

/// Solves `m x = b` over the fraction field: a particular solution and a basis of the
/// homogeneous solutions, or `None` when the system is inconsistent.
pub fn affine_solve_frac(m: &[Vec<RatFunc>], b: &[RatFunc], ring: &Ring) -> Option<(Vec<RatFunc>, Vec<Vec<RatFunc>>)> {
    let width = if m.is_empty() { 0 } else { m[0].len() };
    let mut a: Vec<Vec<RatFunc>> = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref_frac(&mut a);
    if pivots.contains(&width) {
        return None;
    }
    let mut x = vec![RatFunc::zero(ring); width];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = a[row][width].clone();
    }
    let null = (0..width)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![RatFunc::zero(ring); width];
            v[f] = RatFunc::one(ring);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = a[row][f].neg();
            }
            v
        })
        .collect();
    Some((x, null))
}

/// Rank over the fraction field.
pub fn rank_frac(m: &[Vec<RatFunc>]) -> usize {
    let mut a = m.to_vec();
    rref_frac(&mut a).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, PolyRing};

    #[test]
    fn bareiss_matches_cofactor() {
        let r = PolyRing::new(&["a", "b", "c"], &[1, 1, 1], 0).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let m = vec![
            vec![p("a"), p("b"), p("1")],
            vec![p("c"), p("a + b"), p("2")],
            vec![p("b^2"), p("0"), p("c - a")],
        ];
        assert_eq!(det(&m), det_cofactor(&m));
    }

    #[test]
    fn solve_small_system() {
        let r = PolyRing::new(&["t"], &[1], 0).unwrap();
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let m = vec![vec![p("t"), p("1")], vec![p("1"), p("t")]];
        let x = solve_frac(&m, &[p("1"), p("0")]).unwrap();
        let expect = RatFunc::new(p("t"), p("t^2 - 1")).unwrap();
        assert_eq!(x[0], expect);
    }
}
