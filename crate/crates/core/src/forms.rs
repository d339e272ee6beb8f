//! Invariant multilinear forms on finite free algebras, and the canonical forms for
//! the symplectic and orthogonal covers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{blowup_algebra_so_even, monogenic_algebra, Algebra, AlgebraElement, AlgebraOps};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::polyring::matrix::{self, PolyMatrix};
use crate::polyring::{MultiPoly, PolyRing, RatFunc, Ring, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    Symmetric,
    Alternating,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Storage {
    Dense(Vec<MultiPoly>),
    Sorted(BTreeMap<Vec<usize>, MultiPoly>),
}

/// A `d`-linear form on a free module of rank `n`, stored by its coefficients on the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormTensor {
    ring: Ring,
    rank: usize,
    arity: usize,
    symmetry: Symmetry,
    data: Storage,
}

fn perm_sign(idx: &[usize]) -> (Vec<usize>, i32, bool) {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let repeated = v.windows(2).any(|w| w[0] == w[1]);
    (v, sign, repeated)
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut u = t.clone();
                    u.push(i);
                    u
                })
            })
            .collect();
    }
    out
}

fn sorted_tuples(n: usize, k: usize, strict: bool) -> Vec<Vec<usize>> {
    tuples(n, k)
        .into_iter()
        .filter(|t| t.windows(2).all(|w| if strict { w[0] < w[1] } else { w[0] <= w[1] }))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub rank: usize,
    pub arity: usize,
    pub symmetry: Symmetry,
    pub coefficients: Vec<(Vec<usize>, String)>,
}

impl FormTensor {
    /// Builds a form from its basis values; the declared symmetry is checked coefficientwise.
    pub fn from_fn<F: FnMut(&[usize]) -> MultiPoly>(
        ring: &Ring,
        rank: usize,
        arity: usize,
        symmetry: Symmetry,
        mut f: F,
    ) -> Result<FormTensor> {
        if arity <= 2 || symmetry == Symmetry::General {
            let data: Vec<MultiPoly> = tuples(rank, arity).iter().map(|t| f(t)).collect();
            let form = FormTensor { ring: ring.clone(), rank, arity, symmetry: Symmetry::General, data: Storage::Dense(data) };
            let ok = match symmetry {
                Symmetry::General => true,
                Symmetry::Symmetric => form.is_symmetric(),
                Symmetry::Alternating => form.is_alternating(),
            };
            if !ok {
                return Err(Error::CertificationFailure(format!("form is not {symmetry:?}")));
            }
            return Ok(FormTensor { symmetry, ..form });
        }
        let strict = symmetry == Symmetry::Alternating;
        let mut map = BTreeMap::new();
        for t in sorted_tuples(rank, arity, strict) {
            let v = f(&t);
            if !v.is_zero() {
                map.insert(t, v);
            }
        }
        Ok(FormTensor { ring: ring.clone(), rank, arity, symmetry, data: Storage::Sorted(map) })
    }

    pub fn from_gram(gram: &PolyMatrix, symmetry: Symmetry) -> Result<FormTensor> {
        let ring = gram[0][0].ring().clone();
        FormTensor::from_fn(&ring, gram.len(), 2, symmetry, |t| gram[t[0]][t[1]].clone())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn get(&self, idx: &[usize]) -> MultiPoly {
        match &self.data {
            Storage::Dense(v) => {
                let mut k = 0;
                for &i in idx {
                    k = k * self.rank + i;
                }
                v[k].clone()
            }
            Storage::Sorted(map) => {
                let (s, sign, repeated) = perm_sign(idx);
                match self.symmetry {
                    Symmetry::Alternating => {
                        if repeated {
                            return MultiPoly::zero(&self.ring);
                        }
                        let v = map.get(&s).cloned().unwrap_or_else(|| MultiPoly::zero(&self.ring));
                        if sign < 0 {
                            -v
                        } else {
                            v
                        }
                    }
                    _ => map.get(&s).cloned().unwrap_or_else(|| MultiPoly::zero(&self.ring)),
                }
            }
        }
    }

    /// Multilinear evaluation on coordinate vectors.
    pub fn eval(&self, args: &[&[MultiPoly]]) -> MultiPoly {
        assert_eq!(args.len(), self.arity);
        let supports: Vec<Vec<usize>> =
            args.iter().map(|a| (0..self.rank).filter(|&i| !a[i].is_zero()).collect()).collect();
        let mut acc = MultiPoly::zero(&self.ring);
        let mut idx = vec![0usize; self.arity];
        fn rec(
            form: &FormTensor,
            args: &[&[MultiPoly]],
            supports: &[Vec<usize>],
            slot: usize,
            idx: &mut Vec<usize>,
            coef: MultiPoly,
            acc: &mut MultiPoly,
        ) {
            if slot == args.len() {
                let v = form.get(idx);
                if !v.is_zero() {
                    *acc = &*acc + &(&coef * &v);
                }
                return;
            }
            for &i in &supports[slot] {
                idx[slot] = i;
                rec(form, args, supports, slot + 1, idx, &coef * &args[slot][i], acc);
            }
        }
        rec(self, args, &supports, 0, &mut idx, MultiPoly::one(&self.ring), &mut acc);
        acc
    }

    pub fn eval_elements(&self, args: &[&AlgebraElement]) -> MultiPoly {
        let coords: Vec<&[MultiPoly]> = args.iter().map(|a| a.coords()).collect();
        self.eval(&coords)
    }

    pub fn gram(&self) -> PolyMatrix {
        assert_eq!(self.arity, 2);
        (0..self.rank).map(|i| (0..self.rank).map(|j| self.get(&[i, j])).collect()).collect()
    }

    pub fn all_tuples(&self) -> Vec<Vec<usize>> {
        tuples(self.rank, self.arity)
    }

    pub fn is_symmetric(&self) -> bool {
        self.all_tuples().iter().all(|t| {
            let (s, _, _) = perm_sign(t);
            self.get(t) == self.get(&s)
        })
    }

    pub fn is_alternating(&self) -> bool {
        self.all_tuples().iter().all(|t| {
            let (s, sign, repeated) = perm_sign(t);
            let v = self.get(t);
            if repeated {
                v.is_zero()
            } else if sign > 0 {
                v == self.get(&s)
            } else {
                v == -self.get(&s)
            }
        })
    }

    pub fn map_coeffs<F: Fn(&MultiPoly) -> MultiPoly>(&self, f: F) -> FormTensor {
        let data = match &self.data {
            Storage::Dense(v) => Storage::Dense(v.iter().map(&f).collect()),
            Storage::Sorted(m) => Storage::Sorted(
                m.iter().map(|(k, v)| (k.clone(), f(v))).filter(|(_, v)| !v.is_zero()).collect(),
            ),
        };
        let ring = match &data {
            Storage::Dense(v) if !v.is_empty() => v[0].ring().clone(),
            _ => self.ring.clone(),
        };
        FormTensor { ring, data, ..self.clone() }
    }

    pub fn scale(&self, c: &MultiPoly) -> FormTensor {
        self.map_coeffs(|v| v * c)
    }

    pub fn neg(&self) -> FormTensor {
        self.map_coeffs(|v| -v)
    }

    /// Coefficientwise equality regardless of storage layout.
    pub fn same_values(&self, other: &FormTensor) -> bool {
        self.rank == other.rank
            && self.arity == other.arity
            && self.all_tuples().iter().all(|t| self.get(t) == other.get(t))
    }

    /// The scalar `u` with `self = u * other`, when one exists.
    pub fn unit_ratio(&self, other: &FormTensor) -> Option<Scalar> {
        let mut ratio: Option<Scalar> = None;
        for t in self.all_tuples() {
            let (a, b) = (self.get(&t), other.get(&t));
            match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (false, true) | (true, false) => return None,
                _ => {}
            }
            let bl = b.leading_coeff();
            let u = &a.leading_coeff() * &bl.inv().unwrap();
            if b.scale(&u) != a {
                return None;
            }
            match &ratio {
                None => ratio = Some(u),
                Some(r) if *r != u => return None,
                _ => {}
            }
        }
        ratio
    }

    /// `Σ_s F(.., X v_s, ..) = 0` on every basis tuple, with `X` given by its columns.
    pub fn verify_derivation(&self, endo: &PolyMatrix) -> bool {
        self.derivation_defect(endo).is_none()
    }

    /// The derivation identity checked on every basis tuple, sorted or not.
    pub fn verify_derivation_all(&self, endo: &PolyMatrix) -> bool {
        self.derivation_defect_on(endo, tuples(self.rank, self.arity)).is_none()
    }

    /// First basis tuple where the derivation identity fails.
    pub fn derivation_defect(&self, endo: &PolyMatrix) -> Option<Vec<usize>> {
        let candidates = match self.symmetry {
            Symmetry::General => tuples(self.rank, self.arity),
            Symmetry::Symmetric => sorted_tuples(self.rank, self.arity, false),
            Symmetry::Alternating => sorted_tuples(self.rank, self.arity, true),
        };
        self.derivation_defect_on(endo, candidates)
    }

    fn derivation_defect_on(&self, endo: &PolyMatrix, candidates: Vec<Vec<usize>>) -> Option<Vec<usize>> {
        let n = self.rank;
        let cols: Vec<Vec<MultiPoly>> = (0..n).map(|j| (0..n).map(|i| endo[i][j].clone()).collect()).collect();
        let basis: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| (0..n).map(|k| if k == i { MultiPoly::one(&self.ring) } else { MultiPoly::zero(&self.ring) }).collect())
            .collect();
        for t in candidates {
            let mut acc = MultiPoly::zero(&self.ring);
            for s in 0..self.arity {
                let args: Vec<&[MultiPoly]> = (0..self.arity)
                    .map(|k| if k == s { cols[t[k]].as_slice() } else { basis[t[k]].as_slice() })
                    .collect();
                acc = &acc + &self.eval(&args);
            }
            if !acc.is_zero() {
                return Some(t);
            }
        }
        None
    }

    pub fn to_json(&self) -> FormJson {
        let strict = self.symmetry == Symmetry::Alternating;
        let idx = match self.symmetry {
            Symmetry::General => tuples(self.rank, self.arity),
            _ => sorted_tuples(self.rank, self.arity, strict),
        };
        FormJson {
            rank: self.rank,
            arity: self.arity,
            symmetry: self.symmetry,
            coefficients: idx
                .into_iter()
                .filter_map(|t| {
                    let v = self.get(&t);
                    (!v.is_zero()).then(|| (t, v.to_string()))
                })
                .collect(),
        }
    }
}

/// The functional `b ↦ tr(d^{-1} b)` over the fraction field, in the dual basis.
///
/// A constant candidate read off from two random specializations is accepted once
/// `M(d)ᵀ φ = (tr e_k)_k` holds identically; a nonsingular specialization already shows
/// `det M(d) ≠ 0`. Otherwise the system is solved over the fraction field.
pub fn dualizing_functional(alg: &Algebra, d: &AlgebraElement) -> Result<Vec<RatFunc>> {
    let mt = matrix::transpose(&alg.mult_matrix(d));
    let t: Vec<MultiPoly> = (0..alg.rank()).map(|k| alg.trace(&alg.basis(k))).collect();
    if let Some(phi) = constant_candidate(&mt, &t, 0xd0a1) {
        let ring = alg.ring();
        let consts: Vec<MultiPoly> = phi.iter().map(|c| MultiPoly::constant(ring, c.clone())).collect();
        if matrix::matvec(&mt, &consts) == t {
            return Ok(consts.into_iter().map(RatFunc::from_poly).collect());
        }
    }
    matrix::solve_frac(&mt, &t)
}

fn random_point(ring: &Ring, rng: &mut impl rand::Rng) -> Vec<Scalar> {
    let p = ring.characteristic;
    (0..ring.nvars())
        .map(|_| if p == 0 { ring.scalar(rng.gen_range(-1000..=1000)) } else { Scalar::from_i64(rng.gen_range(0..p as i64), p) })
        .collect()
}

fn specialized_solve(m: &PolyMatrix, b: &[MultiPoly], point: &[Scalar]) -> Option<Vec<Scalar>> {
    let ms: Vec<Vec<Scalar>> = m.iter().map(|r| r.iter().map(|c| c.eval(point)).collect()).collect();
    let bs: Vec<Scalar> = b.iter().map(|c| c.eval(point)).collect();
    matrix::solve_scalar(&ms, &bs)
}

fn constant_candidate(m: &PolyMatrix, b: &[MultiPoly], seed: u64) -> Option<Vec<Scalar>> {
    use rand::SeedableRng;
    let ring = m[0][0].ring().clone();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<Vec<Scalar>> = Vec::new();
    for _ in 0..8 {
        let point = random_point(&ring, &mut rng);
        if let Some(x) = specialized_solve(m, b, &point) {
            found.push(x);
            if found.len() == 2 {
                return (found[0] == found[1]).then(|| found.swap_remove(0));
            }
        }
    }
    None
}

/// Gram matrix of `(b₁, b₂) ↦ φ(b₁ τ(b₂))`, certified polynomial.
pub fn certified_gram(alg: &Algebra, phi: &[RatFunc]) -> Result<PolyMatrix> {
    let n = alg.rank();
    let mut gram = matrix::zeros(alg.ring(), n, n);
    for i in 0..n {
        for j in 0..n {
            let tj = alg.tau(&alg.basis(j)).ok_or_else(|| Error::InvalidInput("algebra has no involution".into()))?;
            let prod = alg.mul(&alg.basis(i), &tj);
            let mut acc = RatFunc::zero(alg.ring());
            for (c, p) in prod.coords().iter().zip(phi) {
                if !c.is_zero() && !p.is_zero() {
                    acc = acc.add(&p.mul_poly(c));
                }
            }
            gram[i][j] = acc
                .is_polynomial()
                .ok_or_else(|| Error::CertificationFailure(format!("Gram entry ({i}, {j}) = {acc} is not polynomial")))?;
        }
    }
    Ok(gram)
}

/// A cover together with its canonical form.
#[derive(Clone, Debug)]
pub struct FormedCover {
    pub group: Group,
    pub n: usize,
    pub algebra: Algebra,
    pub form: FormTensor,
    pub det_gram: MultiPoly,
}

impl FormedCover {
    pub fn endo(&self) -> PolyMatrix {
        self.algebra.mult_matrix(&self.algebra.x())
    }

    pub fn det_is_unit(&self) -> bool {
        self.det_gram.is_unit()
    }
}

/// `k[a_2, a_4, ..., a_{2n}]`.
pub fn even_base_ring(group: Group, n: usize, characteristic: u64) -> Result<Ring> {
    let names: Vec<String> = (1..=n).map(|k| format!("a{}", 2 * k)).collect();
    let weights: Vec<u32> = (1..=n).map(|k| 2 * k as u32).collect();
    PolyRing::for_group(group, &names, &weights, characteristic)
}

/// `[1, 0, a_2, 0, ..., a_{2n}]`.
fn even_poly(ring: &Ring, n: usize) -> Vec<MultiPoly> {
    let mut f = vec![MultiPoly::one(ring)];
    for k in 1..=n {
        f.push(MultiPoly::zero(ring));
        f.push(MultiPoly::var(ring, k - 1));
    }
    f
}

/// `B = A[x]/(x^{2n} + a_2 x^{2n-2} + ... + a_{2n})`.
pub fn sp_cover(n: usize, characteristic: u64) -> Result<Algebra> {
    let ring = even_base_ring(Group::Sp, n, characteristic)?;
    monogenic_algebra(&ring, &even_poly(&ring, n))
}

/// `B = A[x]/(x f_0)` with `f_0 = x^{2n} + a_2 x^{2n-2} + ... + a_{2n}`.
pub fn so_odd_cover(n: usize, characteristic: u64) -> Result<Algebra> {
    let ring = even_base_ring(Group::SoOdd, n, characteristic)?;
    let mut f = even_poly(&ring, n);
    f.push(MultiPoly::zero(&ring));
    monogenic_algebra(&ring, &f)
}

pub fn derivative_element(alg: &Algebra) -> Result<AlgebraElement> {
    let f = alg.defining_poly().ok_or(Error::NotMonogenic)?;
    let d = f.len() - 1;
    let ring = alg.ring();
    let df: Vec<MultiPoly> = (0..d).map(|k| f[k].scale(&ring.scalar((d - k) as i64))).collect();
    Ok(alg.poly_in_x(&df))
}

fn form_from_dualizer(group: Group, n: usize, alg: Algebra, d: &AlgebraElement, symmetry: Symmetry) -> Result<FormedCover> {
    let phi = dualizing_functional(&alg, d)?;
    let gram = certified_gram(&alg, &phi)?;
    let form = FormTensor::from_gram(&gram, symmetry)?;
    let det_gram = matrix::det(&gram);
    Ok(FormedCover { group, n, algebra: alg, form, det_gram })
}

/// `ω(b₁, b₂) = tr(f'^{-1} b₁ τ(b₂))` on the symplectic cover of rank `2n`.
pub fn symplectic_form(n: usize, characteristic: u64) -> Result<FormedCover> {
    if n < 1 {
        return Err(Error::InvalidInput("n >= 1".into()));
    }
    let alg = sp_cover(n, characteristic)?;
    let fp = derivative_element(&alg)?;
    form_from_dualizer(Group::Sp, n, alg, &fp, Symmetry::Alternating)
}

/// `ω(b₁, b₂) = tr(f'^{-1} b₁ τ(b₂))` on `A[x]/(x f_0)`, rank `2n+1`.
pub fn so_odd_form(n: usize, characteristic: u64) -> Result<FormedCover> {
    if n < 1 {
        return Err(Error::InvalidInput("n >= 1".into()));
    }
    let alg = so_odd_cover(n, characteristic)?;
    let fp = derivative_element(&alg)?;
    form_from_dualizer(Group::SoOdd, n, alg, &fp, Symmetry::Symmetric)
}

/// The different of `B̃` over `A`.
#[derive(Clone, Debug)]
pub struct DifferentElement {
    pub element: AlgebraElement,
}

fn g_coeffs(alg: &Algebra, n: usize) -> Vec<MultiPoly> {
    let ring = alg.ring();
    let top = 2 * n - 2;
    let mut g = vec![MultiPoly::zero(ring); top + 1];
    g[top] = MultiPoly::one(ring);
    for k in 1..n {
        g[top - 2 * k] = MultiPoly::var(ring, k - 1);
    }
    g
}

fn poly_from_ascending(alg: &Algebra, coeffs: &[MultiPoly]) -> AlgebraElement {
    let desc: Vec<MultiPoly> = coeffs.iter().rev().cloned().collect();
    alg.poly_in_x(&desc)
}

fn derivative_ascending(ring: &Ring, c: &[MultiPoly]) -> Vec<MultiPoly> {
    (1..c.len()).map(|k| c[k].scale(&ring.scalar(k as i64))).collect()
}

fn p_elem(alg: &Algebra) -> AlgebraElement {
    alg.basis(alg.rank() - 1)
}

/// `𝔇 = x g'(x)/2 - p_{n-1}^2`, half the Jacobian determinant of the two relations.
pub fn different_so_even(alg: &Algebra, n: usize) -> DifferentElement {
    let ring = alg.ring();
    let g = g_coeffs(alg, n);
    let xg = alg.mul(&alg.x(), &poly_from_ascending(alg, &derivative_ascending(ring, &g)));
    let p = p_elem(alg);
    let half = MultiPoly::constant(ring, ring.ratio(1, 2));
    DifferentElement { element: xg.scale(&half).sub(&alg.mul(&p, &p)) }
}

/// `det [[-p, h'], [-x, 2p]] = 2p^2·(-1) + x h'` for a given derivative `h'`.
pub fn different_determinant(alg: &Algebra, h_prime: &AlgebraElement) -> AlgebraElement {
    let p = p_elem(alg);
    let two = MultiPoly::from_int(alg.ring(), 2);
    let pp = alg.mul(&p, &p).scale(&two);
    alg.mul(&alg.x(), h_prime).sub(&pp)
}

/// `(n-1) x^{2(n-1)} + (n-2) a_2 x^{2(n-2)} + ... + p_{n-1}^2`, read term by term.
pub fn different_sum_expression(alg: &Algebra, n: usize) -> AlgebraElement {
    let ring = alg.ring();
    let mut asc = vec![MultiPoly::zero(ring); 2 * n - 1];
    for k in 0..=n - 2 {
        let a = if k == 0 { MultiPoly::one(ring) } else { MultiPoly::var(ring, k - 1) };
        asc[2 * (n - 1 - k)] = a.scale(&ring.scalar((n - 1 - k) as i64));
    }
    let p = p_elem(alg);
    poly_from_ascending(alg, &asc).add(&alg.mul(&p, &p))
}

/// Derivative of `f = x^{2n} + a_2 x^{2n-2} + ... + a_{2n-2} x^2 + p_n^2` in `B̃`.
pub fn so_even_char_poly_derivative(alg: &Algebra, n: usize) -> AlgebraElement {
    let ring = alg.ring();
    let mut asc = vec![MultiPoly::zero(ring); 2 * n + 1];
    asc[2 * n] = MultiPoly::one(ring);
    for k in 1..n {
        asc[2 * n - 2 * k] = MultiPoly::var(ring, k - 1);
    }
    asc[0] = MultiPoly::var(ring, n - 1).pow(2);
    poly_from_ascending(alg, &derivative_ascending(ring, &asc))
}

/// Derivative of `g = x^{2n-2} + a_2 x^{2n-4} + ... + a_{2n-2}` in `B̃`.
pub fn so_even_g_derivative(alg: &Algebra, n: usize) -> AlgebraElement {
    poly_from_ascending(alg, &derivative_ascending(alg.ring(), &g_coeffs(alg, n)))
}

/// `ω(b₁, b₂) = tr(𝔇^{-1} b₁ τ(b₂))` on the normalized cover `B̃`, rank `2n`.
pub fn so_even_form(n: usize, characteristic: u64) -> Result<FormedCover> {
    let alg = blowup_algebra_so_even(n, characteristic)?;
    let dd = different_so_even(&alg, n);
    form_from_dualizer(Group::SoEven, n, alg, &dd.element, Symmetry::Symmetric)
}

/// Gram matrix of the even orthogonal form restricted to `A[x]/(f) ⊂ B̃` on `1, x, ..., x^{2n-1}`.
pub fn so_even_pushdown_gram(cover: &FormedCover) -> PolyMatrix {
    let alg = &cover.algebra;
    let d = alg.rank();
    let x = alg.x();
    let mut pows = vec![alg.one()];
    for _ in 1..d {
        pows.push(alg.mul(pows.last().unwrap(), &x));
    }
    (0..d).map(|i| (0..d).map(|j| cover.form.eval_elements(&[&pows[i], &pows[j]])).collect()).collect()
}
