//! Special components: the map `S^d_A B → A'` attached to a subcover `A' ⊂ B` of relative
//! degree `d`, the alternating `d`-form it induces, and the G2 gluing of a 3-form from
//! a pair of special forms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{monogenic_algebra, subcover, Algebra, AlgebraElement, AlgebraOps, SubcoverEmbedding};
use crate::error::{Error, Result};
use crate::forms::{sp_cover, symplectic_form, FormTensor, Symmetry};
use crate::g2::G2Cover;
use crate::polyring::{monomials_of_degree, parse_poly, Monomial, MultiPoly, PolyRing, Ring, Scalar};

/// Normalization of the sign-isotypic generator of `k[x_1, ..., x_d]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum VandermondeConvention {
    /// `det [x_j^{i-1}] = Π_{i<j} (x_j - x_i)`.
    #[default]
    Determinant,
    /// `Π_{i<j} (x_i - x_j)`.
    Product,
}

impl VandermondeConvention {
    pub fn sign(self, d: usize) -> i64 {
        match self {
            VandermondeConvention::Determinant => 1,
            VandermondeConvention::Product => {
                if (d * (d.saturating_sub(1)) / 2).is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

fn check_char(emb: &SubcoverEmbedding) -> Result<()> {
    let p = emb.total.ring().characteristic;
    let d = emb.relative_degree;
    if p != 0 && p as usize <= d {
        return Err(Error::CharTooSmall { characteristic: p, d });
    }
    Ok(())
}

fn top_coord(a: &AlgebraElement) -> MultiPoly {
    a.coords()[a.coords().len() - 1].clone()
}

fn permutations(d: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i64)>) {
        let d = used.len();
        if prefix.len() == d {
            let mut sign = 1;
            for i in 0..d {
                for j in i + 1..d {
                    if prefix[i] > prefix[j] {
                        sign = -sign;
                    }
                }
            }
            out.push((prefix.clone(), sign));
            return;
        }
        for k in 0..d {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

fn det_over(sub: &Algebra, m: &[Vec<AlgebraElement>]) -> AlgebraElement {
    let d = m.len();
    let mut acc = sub.zero();
    for (perm, sign) in permutations(d) {
        let mut t = sub.one();
        for (i, &j) in perm.iter().enumerate() {
            t = sub.mul(&t, &m[i][j]);
            if t.is_zero() {
                break;
            }
        }
        acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

/// An alternating `d`-form on `B` obtained from a subcover.
#[derive(Clone, Debug)]
pub struct SpecialForm {
    pub form: FormTensor,
    pub embedding: SubcoverEmbedding,
    pub convention: VandermondeConvention,
}

/// `ω(b_1, ..., b_d) = β*_{A'}(Σ_σ sgn σ Π b_{σ(i)}(x_i) / V)`, where `V` is the Vandermonde
/// generator; the quotient is `det` of the `A'`-coordinate matrix of the `b_i`.
pub fn special_form(emb: &SubcoverEmbedding, convention: VandermondeConvention) -> Result<SpecialForm> {
    check_char(emb)?;
    let d = emb.relative_degree;
    let n = emb.total.rank();
    let rel: Vec<Vec<AlgebraElement>> = (0..n).map(|i| emb.relative_coords(&emb.total.basis(i))).collect();
    let sign = emb.total.ring().scalar(convention.sign(d));
    let form = FormTensor::from_fn(emb.total.ring(), n, d, Symmetry::Alternating, |t| {
        let m: Vec<Vec<AlgebraElement>> = t.iter().map(|&i| rel[i].clone()).collect();
        top_coord(&det_over(&emb.sub, &m)).scale(&sign)
    })?;
    Ok(SpecialForm { form, embedding: emb.clone(), convention })
}

/// The `d`-term identity `Σ_s F(.., x b_s, ..) = 0` on all basis tuples.
pub fn derivation_annihilation(form: &FormTensor, alg: &Algebra) -> bool {
    form.verify_derivation_all(&alg.mult_matrix(&alg.x()))
}

impl SpecialForm {
    /// Determinant of the Gram matrix, for `d = 2`.
    pub fn det_gram(&self) -> Option<MultiPoly> {
        (self.form.arity() == 2).then(|| crate::polyring::matrix::det(&self.form.gram()))
    }

    /// Some coefficient of the form is a nonzero constant.
    pub fn has_unit_coefficient(&self) -> bool {
        self.form.all_tuples().iter().any(|t| {
            let v = self.form.get(t);
            !v.is_zero() && v.is_unit()
        })
    }
}

/// The symmetric polynomial `m_λ` written in the elementary symmetric polynomials `e_1, ..., e_d`,
/// as pairs (exponents of `e_k`, coefficient).
pub fn monomial_symmetric_in_elementary(lambda: &[usize], characteristic: u64) -> Result<Vec<(Vec<u32>, Scalar)>> {
    let d = lambda.len();
    let names: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    let ring = PolyRing::new(&names, &vec![1; d], characteristic)?;
    let xs: Vec<MultiPoly> = (0..d).map(|i| MultiPoly::var(&ring, i)).collect();
    let elementary: Vec<MultiPoly> = (1..=d)
        .map(|k| {
            let mut acc = MultiPoly::zero(&ring);
            for subset in 0u32..(1 << d) {
                if subset.count_ones() as usize == k {
                    let mut t = MultiPoly::one(&ring);
                    for (i, x) in xs.iter().enumerate() {
                        if subset & (1 << i) != 0 {
                            t = &t * x;
                        }
                    }
                    acc = &acc + &t;
                }
            }
            acc
        })
        .collect();
    let mut orbit: Vec<Vec<usize>> = permutations(d).into_iter().map(|(p, _)| p.iter().map(|&i| lambda[i]).collect()).collect();
    orbit.sort();
    orbit.dedup();
    let mut rest = MultiPoly::zero(&ring);
    for v in &orbit {
        let exps: Vec<u16> = v.iter().map(|&e| e as u16).collect();
        rest = &rest + &MultiPoly::monomial(&ring, &exps, ring.scalar(1));
    }
    let mut out = Vec::new();
    while !rest.is_zero() {
        let (mono, c) = rest.leading().map(|(m, c)| (m.clone(), c.clone())).expect("nonzero");
        let mu: Vec<u32> = mono.exps.iter().map(|&e| e as u32).collect();
        let powers: Vec<u32> = (0..d).map(|k| mu[k] - if k + 1 < d { mu[k + 1] } else { 0 }).collect();
        let mut t = MultiPoly::constant(&ring, c.clone());
        for (k, &a) in powers.iter().enumerate() {
            t = &t * &elementary[k].pow(a);
        }
        rest = &rest - &t;
        out.push((powers, c));
    }
    Ok(out)
}

/// The homomorphism `S^d_A B → A'` on orbit sums of the monomial tensors `x^{i_1} ⊗ ... ⊗ x^{i_d}`.
#[derive(Clone, Debug)]
pub struct SpecialComponentMap {
    pub embedding: SubcoverEmbedding,
    pub d: usize,
    /// `e_k = (-1)^k a'_k`, the elementary symmetric functions of the roots of `P₂`.
    elementary: Vec<AlgebraElement>,
}

impl SpecialComponentMap {
    pub fn new(emb: &SubcoverEmbedding) -> Result<SpecialComponentMap> {
        check_char(emb)?;
        emb.total.defining_poly().ok_or(Error::NotMonogenic)?;
        let d = emb.relative_degree;
        let elementary = (1..=d).map(|k| if k % 2 == 0 { emb.p2[k].clone() } else { emb.p2[k].neg() }).collect();
        Ok(SpecialComponentMap { embedding: emb.clone(), d, elementary })
    }

    pub fn sub(&self) -> &Algebra {
        &self.embedding.sub
    }

    /// Image of the orbit sum of `x^{i_1} ⊗ ... ⊗ x^{i_d}`.
    pub fn image(&self, exps: &[usize]) -> Result<AlgebraElement> {
        let mut lambda = exps.to_vec();
        lambda.sort_unstable_by(|a, b| b.cmp(a));
        let sub = self.sub();
        let mut acc = sub.zero();
        for (powers, c) in monomial_symmetric_in_elementary(&lambda, sub.ring().characteristic)? {
            let mut t = sub.scalar(&MultiPoly::constant(sub.ring(), c));
            for (k, &a) in powers.iter().enumerate() {
                t = sub.mul(&t, &self.elementary[k].pow(a));
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Images of all orbit sums `i_1 <= ... <= i_d` with `i_k` below the rank of `B`.
    pub fn images(&self) -> Result<BTreeMap<Vec<usize>, AlgebraElement>> {
        let n = self.embedding.total.rank();
        let mut out = BTreeMap::new();
        for t in sorted_tuples(n, self.d) {
            let v = self.image(&t)?;
            out.insert(t, v);
        }
        Ok(out)
    }

    /// `b ⊗ 1 ⊗ ... + ... + 1 ⊗ ... ⊗ b ↦ tr_{B/A'}(b)` for `b = x^k`, `k < rank B`.
    pub fn power_sums_match_trace(&self) -> Result<bool> {
        let total = &self.embedding.total;
        let mut xk = total.one();
        for k in 0..total.rank() {
            let mut e = vec![0usize; self.d];
            e[0] = k;
            let expect = self.embedding.relative_trace(&xk);
            // for k = 0 the power-sum tensor is d copies of the orbit sum 1 ⊗ ... ⊗ 1
            let slots = if k == 0 { self.d as i64 } else { 1 };
            let got = self.image(&e)?.scale(&MultiPoly::from_int(total.ring(), slots));
            if got != expect {
                return Ok(false);
            }
            xk = total.mul(&xk, &total.x());
        }
        Ok(true)
    }

    /// `φ(O_λ · O_μ) = φ(O_λ) φ(O_μ)`, expanding the product tensor into orbit sums.
    pub fn is_multiplicative_on(&self, lambda: &[usize], mu: &[usize]) -> Result<bool> {
        let sub = self.sub();
        let orbit = |v: &[usize]| -> Vec<Vec<usize>> {
            let mut o: Vec<Vec<usize>> = permutations(self.d).into_iter().map(|(p, _)| p.iter().map(|&i| v[i]).collect()).collect();
            o.sort();
            o.dedup();
            o
        };
        let mut counts: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
        for a in orbit(lambda) {
            for b in orbit(mu) {
                let mut s: Vec<usize> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                s.sort_unstable();
                *counts.entry(s).or_default() += 1;
            }
        }
        let mut lhs = sub.zero();
        for (nu, count) in counts {
            let size = orbit(&nu).len() as i64;
            let c = sub.ring().ratio(count, size);
            lhs = lhs.add(&self.image(&nu)?.scale(&MultiPoly::constant(sub.ring(), c)));
        }
        Ok(lhs == sub.mul(&self.image(lambda)?, &self.image(mu)?))
    }
}

fn sorted_tuples(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                let start = t.last().copied().unwrap_or(0);
                (start..n).map(move |i| {
                    let mut u = t.clone();
                    u.push(i);
                    u
                })
            })
            .collect();
    }
    out
}

/// The symplectic cover with its subcover `A' = A[x²]`.
pub fn sp_subcover(n: usize, characteristic: u64) -> Result<SubcoverEmbedding> {
    let alg = sp_cover(n, characteristic)?;
    let x = alg.x();
    subcover(&alg, &alg.mul(&x, &x))
}

/// The unit `u` with `special_form = u · symplectic_form`.
pub fn sp_equivalence_unit(n: usize, characteristic: u64, convention: VandermondeConvention) -> Result<Scalar> {
    let sf = special_form(&sp_subcover(n, characteristic)?, convention)?;
    let sp = symplectic_form(n, characteristic)?;
    sf.form
        .unit_ratio(&sp.form)
        .ok_or_else(|| Error::CertificationFailure(format!("special form is not a unit multiple of the symplectic form for n = {n}")))
}

/// Q-coordinates of an `A'`-element in one graded piece, keyed by (basis index, monomial of `A`).
fn flatten(v: &[MultiPoly], keys: &mut BTreeMap<(usize, Monomial), usize>) -> Vec<(usize, Scalar)> {
    let mut out = Vec::new();
    for (i, c) in v.iter().enumerate() {
        for (m, s) in c.terms() {
            let next = keys.len();
            let k = *keys.entry((i, m.clone())).or_insert(next);
            out.push((k, s.clone()));
        }
    }
    out
}

fn dense_rows(rows: &[Vec<(usize, Scalar)>], width: usize, ring: &Ring) -> Vec<Vec<Scalar>> {
    rows.iter()
        .map(|r| {
            let mut v = vec![ring.scalar(0); width];
            for (k, s) in r {
                v[*k] = &v[*k] + s;
            }
            v
        })
        .collect()
}

/// Degree-by-degree comparison of `ker(S²_A B → A')` with the ideal generated by `x⊗1 + 1⊗x`,
/// for the symplectic subcover `A' = A[x²]`; returns the first degree where they differ.
pub fn sp_kernel_generator_check(n: usize, characteristic: u64) -> Result<Option<u32>> {
    let emb = sp_subcover(n, characteristic)?;
    let map = SpecialComponentMap::new(&emb)?;
    let total = &emb.total;
    let ring = total.ring().clone();
    let rank = total.rank();
    let pairs = sorted_tuples(rank, 2);
    let pair_index: BTreeMap<Vec<usize>, usize> = pairs.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let images: Vec<AlgebraElement> = pairs.iter().map(|p| map.image(p)).collect::<Result<_>>()?;
    let x = total.x();
    let xpow: Vec<AlgebraElement> = {
        let mut v = vec![total.one()];
        for _ in 0..=rank {
            v.push(total.mul(v.last().unwrap(), &x));
        }
        v
    };
    // s · O(i, j) in the orbit-sum basis, with coefficients in A
    let times_s = |i: usize, j: usize| -> Vec<MultiPoly> {
        let mut tensor = vec![vec![MultiPoly::zero(&ring); rank]; rank];
        let terms: Vec<(usize, usize)> = if i == j { vec![(i, i)] } else { vec![(i, j), (j, i)] };
        for (a, b) in terms {
            for (u, v) in [(a + 1, b), (a, b + 1)] {
                let (cu, cv) = (xpow[u].coords(), xpow[v].coords());
                for p in 0..rank {
                    for q in 0..rank {
                        if !cu[p].is_zero() && !cv[q].is_zero() {
                            tensor[p][q] = &tensor[p][q] + &(&cu[p] * &cv[q]);
                        }
                    }
                }
            }
        }
        let mut out = vec![MultiPoly::zero(&ring); pairs.len()];
        for p in 0..rank {
            for q in p..rank {
                out[pair_index[&vec![p, q]]] = tensor[p][q].clone();
            }
        }
        out
    };
    let s_products: Vec<Vec<MultiPoly>> = pairs.iter().map(|p| times_s(p[0], p[1])).collect();
    let top = 2 * (rank as u32 - 1);
    for deg in 0..=top {
        // Q-basis of (S²B)_deg: monomial · O(i, j)
        let mut source: Vec<(Monomial, usize)> = Vec::new();
        for (k, p) in pairs.iter().enumerate() {
            let w = (p[0] + p[1]) as u32;
            if w <= deg {
                for m in monomials_of_degree(&ring, deg - w) {
                    source.push((m, k));
                }
            }
        }
        let mut keys = BTreeMap::new();
        let phi_rows: Vec<Vec<(usize, Scalar)>> = source
            .iter()
            .map(|(m, k)| {
                let mono = MultiPoly::monomial(&ring, &m.exps, ring.scalar(1));
                flatten(&images[*k].scale(&mono).into_coords(), &mut keys)
            })
            .collect();
        let phi_rank = crate::polyring::matrix::rank_scalar(&dense_rows(&phi_rows, keys.len().max(1), &ring));
        let kernel_dim = source.len() - phi_rank;
        // span of s · (monomial · O(i, j)) in degree deg
        let mut skeys = BTreeMap::new();
        let mut span_rows = Vec::new();
        for (k, p) in pairs.iter().enumerate() {
            let w = (p[0] + p[1] + 1) as u32;
            if w <= deg {
                for m in monomials_of_degree(&ring, deg - w) {
                    let mono = MultiPoly::monomial(&ring, &m.exps, ring.scalar(1));
                    let v: Vec<MultiPoly> = s_products[k].iter().map(|c| c * &mono).collect();
                    span_rows.push(flatten(&v, &mut skeys));
                }
            }
        }
        let span_dim = if span_rows.is_empty() {
            0
        } else {
            crate::polyring::matrix::rank_scalar(&dense_rows(&span_rows, skeys.len().max(1), &ring))
        };
        if span_dim != kernel_dim {
            return Ok(Some(deg));
        }
    }
    Ok(None)
}

/// The pieces of the G2 gluing: `B' = A[x]/(f_0)`, the subcovers `A' = A[z]` and `A'' = A[x²]`,
/// and their special forms.
#[derive(Clone, Debug)]
pub struct G2SpecialForms {
    pub b_prime: Algebra,
    pub a1: SubcoverEmbedding,
    pub a2: SubcoverEmbedding,
    pub omega_a1: SpecialForm,
    pub omega_a2: SpecialForm,
}

impl G2SpecialForms {
    pub fn new(cover: &G2Cover, convention: VandermondeConvention) -> Result<G2SpecialForms> {
        let ring = cover.ring();
        let p = |s: &str| parse_poly(ring, s).unwrap();
        let b_prime = monogenic_algebra(ring, &[p("1"), p("0"), p("-e"), p("0"), p("1/4*e^2"), p("0"), p("q")])?;
        let x = b_prime.x();
        let x2 = b_prime.mul(&x, &x);
        let z = b_prime.mul(&x, &x2).sub(&x.scale(&p("1/2*e")));
        let a1 = subcover(&b_prime, &z)?;
        let a2 = subcover(&b_prime, &x2)?;
        let omega_a1 = special_form(&a1, convention)?;
        let omega_a2 = special_form(&a2, convention)?;
        Ok(G2SpecialForms { b_prime, a1, a2, omega_a1, omega_a2 })
    }

    /// `z = x³ - (e/2) x` in `B'`.
    pub fn z(&self) -> AlgebraElement {
        self.a1.generator.clone()
    }

    /// `xz = x⁴ - (e/2) x²`, an element of `A''`.
    pub fn xz(&self) -> AlgebraElement {
        self.b_prime.mul(&self.b_prime.x(), &self.z())
    }

    /// `(b_1, b_2) ↦ ω_{A''}(m b_1, b_2)`.
    pub fn twisted_omega_a2(&self, m: &AlgebraElement) -> FormTensor {
        twist(&self.omega_a2.form, &self.b_prime, m)
    }

    /// Value of `ω_{A'}` on three elements of `B'`.
    pub fn omega_a1_at(&self, u: &AlgebraElement, v: &AlgebraElement, w: &AlgebraElement) -> MultiPoly {
        self.omega_a1.form.eval_elements(&[u, v, w])
    }
}

fn twist(form: &FormTensor, alg: &Algebra, m: &AlgebraElement) -> FormTensor {
    let images: Vec<AlgebraElement> = (0..alg.rank()).map(|i| alg.mul(m, &alg.basis(i))).collect();
    FormTensor::from_fn(form.ring(), alg.rank(), 2, Symmetry::General, |t| {
        form.eval_elements(&[&images[t[0]], &alg.basis(t[1])])
    })
    .expect("general forms need no check")
}

/// The 3-form `ρ` on `B` with `ρ(x·, x·, x·) = ω'` and `ρ(f_0, x·, x·) = ψ` on `B'`.
/// Fails with `IncompatiblePair` when `ψ` is not alternating or the required division by `q` is not exact.
pub fn glue_g2_three_form(cover: &G2Cover, omega3: &FormTensor, psi: &FormTensor) -> Result<FormTensor> {
    if !psi.is_alternating() {
        return Err(Error::IncompatiblePair("the 2-form is not alternating".into()));
    }
    let ring = cover.ring();
    let p = |s: &str| parse_poly(ring, s).unwrap();
    // f_0 = q + Σ c_k x^k
    let c: [(usize, MultiPoly); 3] = [(2, p("1/4*e^2")), (4, p("-e")), (6, p("1"))];
    let q = cover.q();
    let upper = |a: usize, b: usize, d: usize| omega3.get(&[a - 1, b - 1, d - 1]);
    let mut err = None;
    let form = FormTensor::from_fn(ring, 7, 3, Symmetry::Alternating, |t| {
        if t[0] >= 1 {
            return upper(t[0], t[1], t[2]);
        }
        let (b, d) = (t[1], t[2]);
        let mut num = psi.get(&[b - 1, d - 1]);
        for (k, ck) in &c {
            if *k != b && *k != d {
                num = &num - &(ck * &glue_sign(*k, b, d, &upper));
            }
        }
        match num.div_exact(&q) {
            Some(v) => v,
            None => {
                err = Some(Error::IncompatiblePair(format!("ψ(x^{}, x^{}) - ω'(g, ·, ·) is not divisible by q", b - 1, d - 1)));
                MultiPoly::zero(ring)
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(form),
    }
}

fn glue_sign(k: usize, b: usize, d: usize, upper: &dyn Fn(usize, usize, usize) -> MultiPoly) -> MultiPoly {
    let mut v = [k, b, d];
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let val = upper(v[0], v[1], v[2]);
    if sign > 0 {
        val
    } else {
        -val
    }
}

/// The quotients `(ψ(x^b, x^d) - ω'(g, x^b, x^d)) / q` with `g = x⁵ - e x³ + (e²/4) x`;
/// they exist exactly when the pair is compatible.
pub fn q_divisibility_witness(cover: &G2Cover, omega3: &FormTensor, psi: &FormTensor) -> Option<Vec<((usize, usize), MultiPoly)>> {
    let glued = glue_g2_three_form(cover, omega3, psi).ok()?;
    Some((1..7).flat_map(|b| (b + 1..7).map(move |d| (b, d))).map(|(b, d)| ((b - 1, d - 1), glued.get(&[0, b, d]))).collect())
}
