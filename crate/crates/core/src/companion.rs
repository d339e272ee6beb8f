//! The general linear layer: companion endomorphism, trace pairing, the generator
//! `β*` of the dual module, and the grading identity.

use rand::{Rng, SeedableRng};

use crate::algebra::{monogenic_algebra, Algebra, AlgebraElement, AlgebraOps};
use crate::error::{Error, Result};
use crate::forms::{derivative_element, dualizing_functional, FormTensor, Symmetry};
use crate::group::Group;
use crate::polyring::matrix::{self, PolyMatrix};
use crate::polyring::{convert_scalar, MultiPoly, PolyRing, RatFunc, Ring, Scalar};

/// `A_n = k[a_1, ..., a_n]` with `deg a_i = i`.
pub fn gl_base_ring(n: usize, characteristic: u64) -> Result<Ring> {
    let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let weights: Vec<u32> = (1..=n as u32).collect();
    PolyRing::for_group(Group::Gl, &names, &weights, characteristic)
}

/// `B_n = A_n[x]/(x^n + a_1 x^{n-1} + ... + a_n)`.
pub fn gl_cover(n: usize, characteristic: u64) -> Result<Algebra> {
    let ring = gl_base_ring(n, characteristic)?;
    let mut f = vec![MultiPoly::one(&ring)];
    f.extend((0..n).map(|i| MultiPoly::var(&ring, i)));
    monogenic_algebra(&ring, &f)
}

/// The cover with `a_1 = 0`, over `k[a_2, ..., a_n]`.
pub fn sl_cover(n: usize, characteristic: u64) -> Result<Algebra> {
    if n < 2 {
        return Err(Error::InvalidInput("sl needs n >= 2".into()));
    }
    let names: Vec<String> = (2..=n).map(|i| format!("a{i}")).collect();
    let weights: Vec<u32> = (2..=n as u32).collect();
    let ring = PolyRing::for_group(Group::Sl, &names, &weights, characteristic)?;
    let mut f = vec![MultiPoly::one(&ring), MultiPoly::zero(&ring)];
    f.extend((0..n - 1).map(|i| MultiPoly::var(&ring, i)));
    monogenic_algebra(&ring, &f)
}

/// Matrix of an `A`-linear endomorphism in the algebra's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoMatrix {
    pub matrix: PolyMatrix,
}

impl EndoMatrix {
    pub fn trace(&self) -> MultiPoly {
        let ring = self.matrix[0][0].ring();
        self.matrix.iter().enumerate().fold(MultiPoly::zero(ring), |acc, (i, r)| &acc + &r[i])
    }
}

/// Multiplication by `x`: ones below the diagonal, last column `-a_n, ..., -a_1`.
pub fn companion_matrix(alg: &Algebra) -> Result<EndoMatrix> {
    alg.defining_poly().ok_or(Error::NotMonogenic)?;
    Ok(EndoMatrix { matrix: alg.mult_matrix(&alg.x()) })
}

/// `ξ(b₁, b₂) = tr(b₁ b₂)`.
pub fn trace_pairing(alg: &Algebra) -> FormTensor {
    let n = alg.rank();
    let traces: Vec<MultiPoly> = (0..n).map(|k| alg.trace(&alg.basis(k))).collect();
    FormTensor::from_fn(alg.ring(), n, 2, Symmetry::Symmetric, |t| {
        let prod = alg.product_of_basis(t[0], t[1]);
        prod.iter().zip(&traces).fold(MultiPoly::zero(alg.ring()), |acc, (c, tr)| &acc + &(c * tr))
    })
    .expect("trace pairing is symmetric")
}

/// Element of `Hom_A(B, A)` in the dual basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualElement {
    pub coords: Vec<MultiPoly>,
}

impl DualElement {
    pub fn apply(&self, b: &AlgebraElement) -> MultiPoly {
        let ring = b.parent().ring();
        self.coords.iter().zip(b.coords()).fold(MultiPoly::zero(ring), |acc, (u, v)| &acc + &(u * v))
    }

    /// The functional `b ↦ self(c b)`.
    pub fn times(&self, alg: &Algebra, c: &AlgebraElement) -> DualElement {
        DualElement { coords: (0..alg.rank()).map(|j| self.apply(&alg.mul(c, &alg.basis(j)))).collect() }
    }
}

/// `β* = v*_{n-1}`.
pub fn beta_generator(alg: &Algebra) -> Result<DualElement> {
    alg.defining_poly().ok_or(Error::NotMonogenic)?;
    let n = alg.rank();
    let ring = alg.ring();
    Ok(DualElement {
        coords: (0..n).map(|i| if i + 1 == n { MultiPoly::one(ring) } else { MultiPoly::zero(ring) }).collect(),
    })
}

/// `(b₁, b₂) ↦ β*(b₁ b₂)`.
pub fn beta_pairing(alg: &Algebra) -> Result<FormTensor> {
    let beta = beta_generator(alg)?;
    FormTensor::from_fn(alg.ring(), alg.rank(), 2, Symmetry::Symmetric, |t| {
        beta.apply(&alg.mul(&alg.basis(t[0]), &alg.basis(t[1])))
    })
}

#[derive(Clone, Debug)]
pub struct MuDecomposition {
    pub f_prime: AlgebraElement,
    pub beta: DualElement,
    /// Point at which the resultant of `f` and `f'` was evaluated to a nonzero value.
    pub resultant_witness: Vec<Scalar>,
}

/// Sylvester matrix of two polynomials given by descending coefficients.
pub fn sylvester(f: &[MultiPoly], g: &[MultiPoly]) -> PolyMatrix {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let ring = f[0].ring().clone();
    let size = m + n;
    let mut s = matrix::zeros(&ring, size, size);
    for i in 0..n {
        for (k, c) in f.iter().enumerate() {
            s[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.iter().enumerate() {
            s[n + i][i + k] = c.clone();
        }
    }
    s
}

pub fn resultant(f: &[MultiPoly], g: &[MultiPoly]) -> MultiPoly {
    matrix::det(&sylvester(f, g))
}

fn derivative_coeffs(f: &[MultiPoly]) -> Vec<MultiPoly> {
    let d = f.len() - 1;
    let ring = f[0].ring();
    (0..d).map(|k| f[k].scale(&ring.scalar((d - k) as i64))).collect()
}

/// Evaluates the Sylvester determinant at random points of a prime field until it is nonzero.
pub fn resultant_nonzero_witness(f: &[MultiPoly], g: &[MultiPoly], seed: u64) -> Option<Vec<Scalar>> {
    let ring = f[0].ring().clone();
    let p = if ring.characteristic == 0 { 2_147_483_647 } else { ring.characteristic };
    let target = ring.with_characteristic(p).ok()?;
    let reduce = |v: &[MultiPoly]| -> Option<Vec<MultiPoly>> { v.iter().map(|c| to_char(c, &target)).collect() };
    let (fr, gr) = (reduce(f)?, reduce(g)?);
    let s = sylvester(&fr, &gr);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let point: Vec<Scalar> = (0..ring.nvars()).map(|_| Scalar::from_i64(rng.gen_range(0..p as i64), p)).collect();
        let num: Vec<Vec<MultiPoly>> = s
            .iter()
            .map(|row| row.iter().map(|c| MultiPoly::constant(&target, c.eval(&point))).collect())
            .collect();
        if !matrix::det(&num).is_zero() {
            return Some(point);
        }
    }
    None
}

fn to_char(c: &MultiPoly, target: &crate::polyring::Ring) -> Option<MultiPoly> {
    if c.ring().characteristic == target.characteristic {
        let terms = c.terms().iter().map(|(m, s)| (m.clone(), convert_scalar(s, target.characteristic))).collect();
        return Some(MultiPoly::from_terms(target, terms));
    }
    c.reduce_mod(target)
}

/// Certifies `μ = f' β*`: `G_ξ = G_{β*} M(f')`, with `f'` invertible after localization.
pub fn mu_decomposition(alg: &Algebra) -> Result<MuDecomposition> {
    let f = alg.defining_poly().ok_or(Error::NotMonogenic)?.to_vec();
    let fp = derivative_element(alg)?;
    let beta = beta_generator(alg)?;
    let gx = trace_pairing(alg).gram();
    let gb = beta_pairing(alg)?.gram();
    let prod = matrix::matmul(&gb, &alg.mult_matrix(&fp));
    if prod != gx {
        return Err(Error::CertificationFailure("G_xi differs from G_beta * M(f')".into()));
    }
    let witness = resultant_nonzero_witness(&f, &derivative_coeffs(&f), 0x5eed)
        .ok_or_else(|| Error::CertificationFailure("resultant(f, f') vanished at every sampled point".into()))?;
    Ok(MuDecomposition { f_prime: fp, beta, resultant_witness: witness })
}

/// `tr(x^k / f')` for `0 <= k < n`, computed over the fraction field.
pub fn euler_traces(alg: &Algebra) -> Result<Vec<RatFunc>> {
    let fp = derivative_element(alg)?;
    let phi = dualizing_functional(alg, &fp)?;
    Ok(phi.into_iter().map(|r| r.normalize()).collect())
}

/// Rows `ψ_i` with `μ(v_i) = f' ψ_i`; row `i` is `v*_{n-1-i}` plus higher dual terms.
pub fn triangular_coefficients(alg: &Algebra) -> Result<PolyMatrix> {
    let beta = beta_generator(alg)?;
    let x = alg.x();
    let n = alg.rank();
    let mut xi = alg.one();
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        rows.push(beta.times(alg, &xi).coords);
        xi = alg.mul(&xi, &x);
    }
    Ok(rows)
}

/// Checks `ad(diag(t^{n-1}, t^{n-3}, ..., t^{1-n}))(x_•) = t^{-2} x_•(t² a_1, t⁴ a_2, ...)`
/// after multiplying through by `t^{2(n-1)}`.
pub fn check_grading_identity(n: usize, characteristic: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidInput("n >= 2".into()));
    }
    let alg = gl_cover(n, characteristic)?;
    let base = alg.ring().clone();
    let ring = base.extend(&["t"], &[1])?;
    let t = MultiPoly::var(&ring, n);
    let x = companion_matrix(&alg)?.matrix;
    let xe: PolyMatrix = x.iter().map(|r| r.iter().map(|c| c.embed(&ring)).collect()).collect();
    let images: Vec<MultiPoly> = (0..n).map(|i| &t.pow(2 * (i as u32 + 1)) * &MultiPoly::var(&ring, i)).collect();
    let xs: PolyMatrix = x.iter().map(|r| r.iter().map(|c| c.substitute(&ring, &images)).collect()).collect();
    let lhs: PolyMatrix = (0..n)
        .map(|i| (0..n).map(|j| &(&t.pow(2 * (n - 1 - i) as u32) * &xe[i][j]) * &t.pow(2 * j as u32)).collect())
        .collect();
    let scale = t.pow(2 * n as u32 - 4);
    let rhs: PolyMatrix = xs.iter().map(|r| r.iter().map(|c| c * &scale).collect()).collect();
    Ok(lhs == rhs)
}
