//! The G2 cover `B = A[x]/(x f_0)` over `A = k[e, q]`, its cross product and 3-form.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{monogenic_algebra, Algebra, AlgebraElement, AlgebraOps};
use crate::error::{Error, Result};
use crate::forms::{FormTensor, Symmetry};
use crate::group::Group;
use crate::polyring::matrix::{self, PolyMatrix};
use crate::polyring::{parse_poly, MultiPoly, PolyRing, RatFunc, Ring, Scalar};

const RANK: usize = 7;

/// `B`, the form `ω(b₁, b₂) = β*(b₁ τ(b₂))`, and the `β*`-dual basis of the powers of `x`.
#[derive(Clone, Debug)]
pub struct G2Cover {
    pub algebra: Algebra,
    pub omega: FormTensor,
    /// Column `l` holds the coordinates of `h_l`, with `β*(x^k h_l) = [k = l]`.
    pub dual: PolyMatrix,
    powers: Vec<AlgebraElement>,
}

pub fn g2_base_ring(characteristic: u64) -> Result<Ring> {
    PolyRing::for_group(Group::G2, &["e", "q"], &[2, 6], characteristic)
}

fn beta_star(b: &AlgebraElement) -> MultiPoly {
    b.coords()[RANK - 1].clone()
}

impl G2Cover {
    pub fn new(characteristic: u64) -> Result<G2Cover> {
        let ring = g2_base_ring(characteristic)?;
        let p = |s: &str| parse_poly(&ring, s).expect("fixed coefficient");
        let f = vec![p("1"), p("0"), p("-e"), p("0"), p("1/4*e^2"), p("0"), p("q"), p("0")];
        let algebra = monogenic_algebra(&ring, &f)?;
        let x = algebra.x();
        let mut powers = vec![algebra.one()];
        for _ in 1..=2 * RANK {
            powers.push(algebra.mul(powers.last().unwrap(), &x));
        }
        let omega = FormTensor::from_fn(&ring, RANK, 2, Symmetry::Symmetric, |t| {
            let tb = algebra.tau(&algebra.basis(t[1])).unwrap();
            beta_star(&algebra.mul(&algebra.basis(t[0]), &tb))
        })?;
        let hankel: PolyMatrix =
            (0..RANK).map(|i| (0..RANK).map(|j| beta_star(&powers[i + j])).collect()).collect();
        let dual = matrix::inverse_unimodular(&hankel)?;
        Ok(G2Cover { algebra, omega, dual, powers })
    }

    pub fn ring(&self) -> &Ring {
        self.algebra.ring()
    }

    pub fn power(&self, k: usize) -> &AlgebraElement {
        &self.powers[k]
    }

    pub fn e(&self) -> MultiPoly {
        MultiPoly::var(self.ring(), 0)
    }

    pub fn q(&self) -> MultiPoly {
        MultiPoly::var(self.ring(), 1)
    }

    /// `f_0 = x^6 - e x^4 + (e²/4) x^2 + q`.
    pub fn f0(&self) -> AlgebraElement {
        let r = self.ring();
        let p = |s: &str| parse_poly(r, s).unwrap();
        self.algebra.poly_in_x(&[p("1"), p("0"), p("-e"), p("0"), p("1/4*e^2"), p("0"), p("q")])
    }

    /// `z = x^3 - (e/2) x`.
    pub fn z(&self) -> AlgebraElement {
        let r = self.ring();
        let p = |s: &str| parse_poly(r, s).unwrap();
        self.algebra.poly_in_x(&[p("1"), p("0"), p("-1/2*e"), p("0")])
    }

    pub fn beta_star(&self, b: &AlgebraElement) -> MultiPoly {
        beta_star(b)
    }

    pub fn omega_gram(&self) -> PolyMatrix {
        self.omega.gram()
    }

    /// `Σ_l t_l h_l` from the values `t_l = β*(x^l c)`.
    pub fn from_beta_values(&self, t: &[MultiPoly]) -> AlgebraElement {
        let coords = (0..RANK)
            .map(|k| (0..RANK).fold(MultiPoly::zero(self.ring()), |acc, l| &acc + &(&t[l] * &self.dual[k][l])))
            .collect();
        self.algebra.element(coords)
    }
}

/// Index of the unknown `tc(x^a, x^b)`.
fn slot(a: usize, b: usize) -> usize {
    RANK * a + b
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Linear form in the 49 unknowns `tc(x^a, x^b)`, as a dense coefficient vector.
type LinForm = Vec<MultiPoly>;

fn lin_tc(cover: &G2Cover, i: usize, j: usize) -> LinForm {
    let ring = cover.ring();
    let mut out = vec![MultiPoly::zero(ring); RANK * RANK];
    let (u, v) = (cover.power(i).coords(), cover.power(j).coords());
    for a in 0..RANK {
        if u[a].is_zero() {
            continue;
        }
        for b in 0..RANK {
            if !v[b].is_zero() {
                out[slot(a, b)] = &out[slot(a, b)] + &(&u[a] * &v[b]);
            }
        }
    }
    out
}

/// `T^{(l)}_{ij} = β*(x^l c(x^i, x^j)) = Σ_r C(l, r) tc(x^{i+r}, x^{j+l-r})`.
fn lin_t(cover: &G2Cover, l: usize, i: usize, j: usize) -> LinForm {
    let ring = cover.ring();
    let mut out = vec![MultiPoly::zero(ring); RANK * RANK];
    for r in 0..=l {
        let c = ring.scalar(binom(l, r));
        for (o, t) in out.iter_mut().zip(lin_tc(cover, i + r, j + l - r)) {
            if !t.is_zero() {
                *o = &*o + &t.scale(&c);
            }
        }
    }
    out
}

fn lin_eval(form: &LinForm, values: &[RatFunc]) -> RatFunc {
    let ring = values[0].ring().clone();
    let mut acc = RatFunc::zero(&ring);
    for (c, v) in form.iter().zip(values) {
        if !c.is_zero() && !v.is_zero() {
            acc = acc.add(&v.mul_poly(c));
        }
    }
    acc.normalize()
}

/// Values of `tc` pinned before the normalization constraints are imposed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pin {
    pub entries: Vec<((usize, usize), MultiPoly)>,
}

impl Pin {
    pub fn standard(cover: &G2Cover) -> Pin {
        let r = cover.ring();
        Pin {
            entries: vec![
                ((6, 3), MultiPoly::one(r)),
                ((6, 4), MultiPoly::zero(r)),
                ((6, 5), parse_poly(r, "5/2*e").unwrap()),
            ],
        }
    }

    /// The point of the family carrying the opposite orientation.
    pub fn opposite(cover: &G2Cover) -> Pin {
        let mut p = Pin::standard(cover);
        for (_, v) in p.entries.iter_mut() {
            *v = -&*v;
        }
        p
    }

    /// Parses `c63=1,c64=0,c65=5/2*e`.
    pub fn parse(cover: &G2Cover, text: &str) -> Result<Pin> {
        let mut entries = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (lhs, rhs) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected cIJ=value in {part:?}")))?;
            let digits: Vec<usize> = lhs
                .trim()
                .strip_prefix('c')
                .ok_or_else(|| Error::Parse(format!("pin key {lhs:?} must look like c63")))?
                .chars()
                .map(|ch| ch.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Parse(format!("bad pin key {lhs:?}")))?;
            if digits.len() != 2 || digits.iter().any(|&d| d >= RANK) {
                return Err(Error::Parse(format!("bad pin key {lhs:?}")));
            }
            let rhs = normalize_pin_value(rhs.trim());
            entries.push(((digits[0], digits[1]), parse_poly(cover.ring(), &rhs)?));
        }
        Ok(Pin { entries })
    }
}

/// Accepts `5e/2` as shorthand for `5/2*e`.
fn normalize_pin_value(s: &str) -> String {
    let mut out = String::new();
    let chars: Vec<char> = s.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        if ch.is_ascii_alphabetic() && i > 0 && (chars[i - 1].is_ascii_digit() || chars[i - 1] == ')') {
            out.push('*');
        }
        out.push(ch);
    }
    out
}

/// A cross product on `B`, given by `tc(x^i, x^j) = β*(c(x^i, x^j))` and the full table of `c`.
#[derive(Clone, Debug)]
pub struct CrossProductTable {
    pub cover: G2Cover,
    pub tc: PolyMatrix,
    pub c: Vec<Vec<AlgebraElement>>,
    /// Unknowns left free by the linear constraints, as index pairs `(a, b)` of `tc`.
    pub free_slots: Vec<(usize, usize)>,
    /// Dimension of the tangent space of the solution family at this point.
    pub tangent_dim: usize,
    pub lambda: Scalar,
}

/// Affine expression `v_0 + Σ_k s_k v_{k+1}` with coefficients in the fraction field.
type Affine = Vec<Vec<RatFunc>>;

fn omega_frac(gram: &PolyMatrix, u: &[RatFunc], v: &[RatFunc]) -> RatFunc {
    let ring = gram[0][0].ring().clone();
    let mut acc = RatFunc::zero(&ring);
    for k in 0..RANK {
        if u[k].is_zero() {
            continue;
        }
        for m in 0..RANK {
            if !v[m].is_zero() && !gram[k][m].is_zero() {
                acc = acc.add(&u[k].mul(&v[m]).mul_poly(&gram[k][m]));
            }
        }
    }
    acc.normalize()
}

/// The `c`-vector, in coordinates, obtained from the `tc` values.
fn c_from_values(cover: &G2Cover, t_forms: &[LinForm], values: &[RatFunc]) -> Vec<RatFunc> {
    let ring = cover.ring();
    let t: Vec<RatFunc> = t_forms.iter().map(|f| lin_eval(f, values)).collect();
    (0..RANK)
        .map(|k| {
            let mut acc = RatFunc::zero(ring);
            for (l, tl) in t.iter().enumerate() {
                if !tl.is_zero() && !cover.dual[k][l].is_zero() {
                    acc = acc.add(&tl.mul_poly(&cover.dual[k][l]));
                }
            }
            acc.normalize()
        })
        .collect()
}

/// Linear constraints on `tc`: orthogonality, skew symmetry, and the relation `x^7 = e x^5 - (e²/4) x^3 - q x`.
fn linear_constraints(cover: &G2Cover) -> Vec<LinForm> {
    let ring = cover.ring();
    let mut rows = Vec::new();
    for k in 0..RANK {
        for a in 0..RANK {
            rows.push(lin_t(cover, k, k, a));
        }
    }
    for a in 0..RANK {
        for b in a..RANK {
            let mut r = vec![MultiPoly::zero(ring); RANK * RANK];
            r[slot(a, b)] = &r[slot(a, b)] + &MultiPoly::one(ring);
            r[slot(b, a)] = &r[slot(b, a)] + &MultiPoly::one(ring);
            rows.push(r);
        }
    }
    let p = |s: &str| parse_poly(ring, s).unwrap();
    let (e, e2, q) = (p("e"), p("1/4*e^2"), p("q"));
    for i in 0..RANK {
        for j in 0..RANK {
            let (t7, t5, t3, t1) = (lin_t(cover, 7, i, j), lin_t(cover, 5, i, j), lin_t(cover, 3, i, j), lin_t(cover, 1, i, j));
            rows.push(
                (0..RANK * RANK)
                    .map(|s| &(&(&(&e * &t5[s]) - &(&e2 * &t3[s])) - &(&q * &t1[s])) - &t7[s])
                    .collect(),
            );
        }
    }
    rows.retain(|r| r.iter().any(|c| !c.is_zero()));
    rows
}

/// Solves for the cross product through the given pin, with normalization
/// `ω(c(u,v), c(u,v)) = λ (ω(u,u) ω(v,v) - ω(u,v)²)` on basis pairs.
pub fn solve_cross_product(cover: &G2Cover, pin: &Pin, lambda: &Scalar) -> Result<CrossProductTable> {
    let ring = cover.ring().clone();
    let n_unknowns = RANK * RANK;
    let lin = linear_constraints(cover);
    let lin_frac: Vec<Vec<RatFunc>> =
        lin.iter().map(|r| r.iter().cloned().map(RatFunc::from_poly).collect()).collect();
    let (null, free) = matrix::nullspace_frac_with_free(&lin_frac, n_unknowns, &ring);
    let free_slots: Vec<(usize, usize)> = free.iter().map(|s| (s / RANK, s % RANK)).collect();
    let nfree = null.len();

    // pins: Σ_f t_f N_f[slot] = value
    let pin_rows: Vec<Vec<RatFunc>> =
        pin.entries.iter().map(|((a, b), _)| null.iter().map(|v| v[slot(*a, *b)].clone()).collect()).collect();
    let pin_rhs: Vec<RatFunc> = pin.entries.iter().map(|(_, v)| RatFunc::from_poly(v.clone())).collect();
    let (t0, t_dirs) = matrix::affine_solve_frac(&pin_rows, &pin_rhs, &ring)
        .ok_or_else(|| Error::InconsistentPin("pin contradicts the linear constraints".into()))?;
    let m = t_dirs.len();

    let combine = |t: &[RatFunc]| -> Vec<RatFunc> {
        (0..n_unknowns)
            .map(|s| {
                let mut acc = RatFunc::zero(&ring);
                for (tf, v) in t.iter().zip(&null) {
                    if !tf.is_zero() && !v[s].is_zero() {
                        acc = acc.add(&tf.mul(&v[s]));
                    }
                }
                acc.normalize()
            })
            .collect()
    };
    let mut p_affine: Affine = vec![combine(&t0)];
    for d in &t_dirs {
        p_affine.push(combine(d));
    }

    let gram = cover.omega_gram();
    let pairs: Vec<(usize, usize)> = (0..RANK).flat_map(|i| (i + 1..RANK).map(move |j| (i, j))).collect();
    let t_forms: Vec<Vec<LinForm>> =
        pairs.iter().map(|&(i, j)| (0..RANK).map(|l| lin_t(cover, l, i, j)).collect()).collect();

    // linearize in s_k and s_k s_k'
    let quad_index: Vec<(usize, usize)> = (0..m).flat_map(|k| (k..m).map(move |k2| (k, k2))).collect();
    let width = m + quad_index.len();
    let lam = MultiPoly::constant(&ring, lambda.clone());
    let rows: Vec<(Vec<RatFunc>, RatFunc)> = pairs
        .par_iter()
        .zip(t_forms.par_iter())
        .map(|(&(i, j), forms)| {
            let cs: Vec<Vec<RatFunc>> = p_affine.iter().map(|pv| c_from_values(cover, forms, pv)).collect();
            let target = &lam * &(&(&gram[i][i] * &gram[j][j]) - &(&gram[i][j] * &gram[i][j]));
            let mut row = vec![RatFunc::zero(&ring); width];
            for k in 0..m {
                row[k] = omega_frac(&gram, &cs[0], &cs[k + 1]).add(&omega_frac(&gram, &cs[k + 1], &cs[0])).normalize();
            }
            for (qi, &(k, k2)) in quad_index.iter().enumerate() {
                let v = omega_frac(&gram, &cs[k + 1], &cs[k2 + 1]);
                row[m + qi] = if k == k2 { v } else { v.add(&omega_frac(&gram, &cs[k2 + 1], &cs[k + 1])).normalize() };
            }
            let rhs = RatFunc::from_poly(target).sub(&omega_frac(&gram, &cs[0], &cs[0])).normalize();
            (row, rhs)
        })
        .collect();
    let (mrows, rhs): (Vec<Vec<RatFunc>>, Vec<RatFunc>) = rows.into_iter().unzip();
    let (sol, kernel) = matrix::affine_solve_frac(&mrows, &rhs, &ring)
        .ok_or_else(|| Error::InconsistentPin(format!("no point of the family through the pin for lambda = {lambda}")))?;
    if !kernel.is_empty() {
        return Err(Error::SolutionSpaceDimensionMismatch { expected: 1, found: 1 + kernel.len() });
    }
    for (qi, &(k, k2)) in quad_index.iter().enumerate() {
        if sol[m + qi] != sol[k].mul(&sol[k2]) {
            return Err(Error::InconsistentPin(format!(
                "the normalization has no solution through the pin for lambda = {lambda}"
            )));
        }
    }

    let mut values = p_affine[0].clone();
    for k in 0..m {
        for s in 0..n_unknowns {
            if !p_affine[k + 1][s].is_zero() {
                values[s] = values[s].add(&sol[k].mul(&p_affine[k + 1][s])).normalize();
            }
        }
    }
    let tc_flat: Vec<MultiPoly> = values
        .iter()
        .map(|v| v.is_polynomial().ok_or_else(|| Error::CertificationFailure(format!("tc entry {v} is not polynomial"))))
        .collect::<Result<_>>()?;
    let tc: PolyMatrix = (0..RANK).map(|a| tc_flat[a * RANK..(a + 1) * RANK].to_vec()).collect();

    // tangent space of the family at this point: kernel of the Jacobian of the normalization
    let t_point: Vec<RatFunc> = {
        let mut t = t0.clone();
        for (k, d) in t_dirs.iter().enumerate() {
            for f in 0..nfree {
                t[f] = t[f].add(&sol[k].mul(&d[f])).normalize();
            }
        }
        t
    };
    let point_values = combine(&t_point);
    let jac: Vec<Vec<RatFunc>> = t_forms
        .par_iter()
        .map(|forms| {
            let c_here = c_from_values(cover, forms, &point_values);
            null.iter()
                .map(|nv| {
                    let cf = c_from_values(cover, forms, nv);
                    omega_frac(&gram, &cf, &c_here).add(&omega_frac(&gram, &c_here, &cf)).normalize()
                })
                .collect()
        })
        .collect();
    let tangent_dim = nfree - matrix::rank_frac(&jac);

    let c = table_from_tc(cover, &tc);
    Ok(CrossProductTable { cover: cover.clone(), tc, c, free_slots, tangent_dim, lambda: lambda.clone() })
}

/// `c(x^i, x^j) = Σ_l T^{(l)}_{ij} h_l`.
pub fn table_from_tc(cover: &G2Cover, tc: &PolyMatrix) -> Vec<Vec<AlgebraElement>> {
    let ring = cover.ring();
    let flat: Vec<MultiPoly> = tc.iter().flatten().cloned().collect();
    let eval = |f: &LinForm| f.iter().zip(&flat).fold(MultiPoly::zero(ring), |acc, (a, b)| &acc + &(a * b));
    (0..RANK)
        .map(|i| {
            (0..RANK)
                .map(|j| {
                    let t: Vec<MultiPoly> = (0..RANK).map(|l| eval(&lin_t(cover, l, i, j))).collect();
                    cover.from_beta_values(&t)
                })
                .collect()
        })
        .collect()
}

impl CrossProductTable {
    pub fn solve(characteristic: u64) -> Result<CrossProductTable> {
        let cover = G2Cover::new(characteristic)?;
        let pin = Pin::standard(&cover);
        let one = cover.ring().scalar(1);
        solve_cross_product(&cover, &pin, &one)
    }

    /// `c` applied to coordinate vectors.
    pub fn apply(&self, u: &AlgebraElement, v: &AlgebraElement) -> AlgebraElement {
        let alg = &self.cover.algebra;
        let mut acc = alg.zero();
        for i in 0..RANK {
            if u.coords()[i].is_zero() {
                continue;
            }
            for j in 0..RANK {
                if !v.coords()[j].is_zero() {
                    acc = acc.add(&self.c[i][j].scale(&(&u.coords()[i] * &v.coords()[j])));
                }
            }
        }
        acc
    }

    pub fn is_skew(&self) -> bool {
        (0..RANK).all(|i| (0..RANK).all(|j| self.c[i][j] == self.c[j][i].neg()))
    }

    pub fn is_orthogonal(&self) -> bool {
        let om = &self.cover.omega;
        (0..RANK).all(|i| {
            (0..RANK).all(|j| {
                let b = self.cover.algebra.basis(i);
                om.eval_elements(&[&self.c[i][j], &b]).is_zero()
            })
        })
    }

    /// `F(c(u,v), c(u,v)) = F(u,u) F(v,v) - F(u,v)²` on basis pairs for `F = scale · ω`.
    pub fn is_normalized_for(&self, scale: &Scalar) -> bool {
        let g = self.cover.omega_gram();
        let ring = self.cover.ring();
        let s = MultiPoly::constant(ring, scale.clone());
        (0..RANK).all(|i| {
            (0..RANK).all(|j| {
                let cc = self.cover.omega.eval_elements(&[&self.c[i][j], &self.c[i][j]]);
                let lhs = &s * &cc;
                let rhs = &(&s * &s) * &(&(&g[i][i] * &g[j][j]) - &(&g[i][j] * &g[i][j]));
                lhs == rhs
            })
        })
    }

    /// `c(xu, v) + c(u, xv) = x c(u, v)` on basis pairs.
    pub fn is_compatible(&self) -> bool {
        let alg = &self.cover.algebra;
        let x = alg.x();
        (0..RANK).all(|i| {
            (0..RANK).all(|j| {
                let (u, v) = (alg.basis(i), alg.basis(j));
                let lhs = self.apply(&alg.mul(&x, &u), &v).add(&self.apply(&u, &alg.mul(&x, &v)));
                lhs == alg.mul(&x, &self.c[i][j])
            })
        })
    }

    /// `ρ(u, v, w) = ω(c(u, v), w)`.
    pub fn rho(&self) -> Result<FormTensor> {
        let full: Vec<MultiPoly> = (0..RANK * RANK * RANK)
            .map(|k| {
                let (a, b, c) = (k / 49, (k / 7) % 7, k % 7);
                self.cover.omega.eval_elements(&[&self.c[a][b], &self.cover.algebra.basis(c)])
            })
            .collect();
        let form = FormTensor::from_fn(self.cover.ring(), RANK, 3, Symmetry::General, |t| full[49 * t[0] + 7 * t[1] + t[2]].clone())?;
        if !form.is_alternating() {
            return Err(Error::CertificationFailure("ω(c(u,v), w) is not alternating".into()));
        }
        FormTensor::from_fn(self.cover.ring(), RANK, 3, Symmetry::Alternating, |t| form.get(t))
    }
}

fn frac_coords_in(cover: &G2Cover, basis: &[AlgebraElement]) -> Result<Vec<Vec<RatFunc>>> {
    let m: PolyMatrix = (0..RANK).map(|r| basis.iter().map(|b| b.coords()[r].clone()).collect()).collect();
    (0..RANK).map(|k| matrix::solve_frac(&m, cover.algebra.basis(k).coords())).collect()
}

fn det3(m: [[&RatFunc; 3]; 3]) -> RatFunc {
    let t = |a: &RatFunc, b: &RatFunc, c: &RatFunc| a.mul(b).mul(c);
    t(m[0][0], m[1][1], m[2][2])
        .add(&t(m[0][1], m[1][2], m[2][0]))
        .add(&t(m[0][2], m[1][0], m[2][1]))
        .sub(&t(m[0][2], m[1][1], m[2][0]))
        .sub(&t(m[0][0], m[1][2], m[2][1]))
        .sub(&t(m[0][1], m[1][0], m[2][2]))
}

/// `ρ = δ₁∧δ₂∧η₃ + δ₁∧η₂∧δ₃ + η₁∧δ₂∧δ₃ - q η₁∧η₂∧η₃ + ε∧tr_z`, with `ε, δ_i, η_i` dual to
/// `f_0, x^i, x^i z` and `tr_z(g, h) = β*(g τ(h) z)`; certified to have coefficients in `A`.
pub fn assemble_rho(cover: &G2Cover) -> Result<FormTensor> {
    let alg = &cover.algebra;
    let z = cover.z();
    let mut basis = vec![cover.f0()];
    for i in 1..=3 {
        basis.push(cover.power(i).clone());
    }
    for i in 1..=3 {
        basis.push(alg.mul(cover.power(i), &z));
    }
    // dual[k][slot]: value of the slot-th dual functional on x^k
    let dual = frac_coords_in(cover, &basis)?;
    let (eps, delta, eta) = (0usize, [1usize, 2, 3], [4usize, 5, 6]);
    let trz = |a: usize, b: usize| -> RatFunc {
        let tb = alg.tau(&alg.basis(b)).unwrap();
        RatFunc::from_poly(cover.beta_star(&alg.mul(&alg.mul(&alg.basis(a), &tb), &z)))
    };
    let q = RatFunc::from_poly(cover.q());
    let wedge = |f: [usize; 3], t: [usize; 3]| -> RatFunc {
        det3([
            [&dual[t[0]][f[0]], &dual[t[1]][f[0]], &dual[t[2]][f[0]]],
            [&dual[t[0]][f[1]], &dual[t[1]][f[1]], &dual[t[2]][f[1]]],
            [&dual[t[0]][f[2]], &dual[t[1]][f[2]], &dual[t[2]][f[2]]],
        ])
    };
    let mut err = None;
    let form = FormTensor::from_fn(cover.ring(), RANK, 3, Symmetry::Alternating, |t| {
        let t3 = [t[0], t[1], t[2]];
        let v = wedge([delta[0], delta[1], eta[2]], t3)
            .add(&wedge([delta[0], eta[1], delta[2]], t3))
            .add(&wedge([eta[0], delta[1], delta[2]], t3))
            .sub(&q.mul(&wedge([eta[0], eta[1], eta[2]], t3)))
            .add(&dual[t[0]][eps].mul(&trz(t[1], t[2])))
            .sub(&dual[t[1]][eps].mul(&trz(t[0], t[2])))
            .add(&dual[t[2]][eps].mul(&trz(t[0], t[1])));
        match v.is_polynomial() {
            Some(p) => p,
            None => {
                err = Some(Error::CertificationFailure(format!("ρ{t:?} = {} is not in A", v.normalize())));
                MultiPoly::zero(cover.ring())
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(form),
    }
}

fn perm_sign(v: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                s = -s;
            }
        }
    }
    s
}

/// `(2, 2, 3)`-shuffles of `0..7` with their signs.
fn shuffles() -> Vec<([usize; 2], [usize; 2], [usize; 3], i64)> {
    let mut out = Vec::new();
    for a in 0..7 {
        for b in a + 1..7 {
            for c in 0..7 {
                for d in c + 1..7 {
                    if [a, b].contains(&c) || [a, b].contains(&d) {
                        continue;
                    }
                    let rest: Vec<usize> = (0..7).filter(|k| ![a, b, c, d].contains(k)).collect();
                    let order = [a, b, c, d, rest[0], rest[1], rest[2]];
                    out.push(([a, b], [c, d], [rest[0], rest[1], rest[2]], perm_sign(&order)));
                }
            }
        }
    }
    out
}

/// `ν(v₁, v₂) = ⟨ι, μ_{v₁} ∧ μ_{v₂} ∧ ρ⟩` with `μ_v = ρ(v, ·, ·)`, `ι = 1∧x∧…∧x^6`, and the
/// wedge of forms taken as the full signed sum over `S_7` (24 times the shuffle sum).
pub fn nu_from_rho(rho: &FormTensor) -> PolyMatrix {
    let ring = rho.ring().clone();
    let sh = shuffles();
    let scale = ring.scalar(24);
    let entries: Vec<((usize, usize), MultiPoly)> = (0..RANK)
        .flat_map(|i| (i..RANK).map(move |j| (i, j)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(i, j)| {
            let mut acc = MultiPoly::zero(&ring);
            for (s1, s2, s3, sign) in &sh {
                let a = rho.get(&[i, s1[0], s1[1]]);
                if a.is_zero() {
                    continue;
                }
                let b = rho.get(&[j, s2[0], s2[1]]);
                if b.is_zero() {
                    continue;
                }
                let c = rho.get(s3);
                if c.is_zero() {
                    continue;
                }
                let t = &(&a * &b) * &c;
                acc = if *sign > 0 { &acc + &t } else { &acc - &t };
            }
            ((i, j), acc.scale(&scale))
        })
        .collect();
    let mut out = matrix::zeros(&ring, RANK, RANK);
    for ((i, j), v) in entries {
        out[j][i] = v.clone();
        out[i][j] = v;
    }
    out
}

/// `ι_1 ρ = ρ(1, ·, ·)` as coefficients on `e_a ∧ e_b`, `a < b`, with `e_a` dual to `x^a`.
pub fn iota1(rho: &FormTensor) -> Vec<((usize, usize), MultiPoly)> {
    (0..RANK)
        .flat_map(|a| (a + 1..RANK).map(move |b| (a, b)))
        .filter_map(|(a, b)| {
            let v = rho.get(&[0, a, b]);
            (!v.is_zero()).then_some(((a, b), v))
        })
        .collect()
}

/// Every coefficient `ρ(x^a, x^b, x^c)` is homogeneous of weighted degree `a + b + c - 9`.
pub fn degrees_consistent(rho: &FormTensor) -> bool {
    (0..RANK).all(|a| {
        (a + 1..RANK).all(|b| {
            (b + 1..RANK).all(|c| {
                let v = rho.get(&[a, b, c]);
                v.is_zero() || (v.is_homogeneous() && v.degree().map(|d| d as i64) == Some((a + b + c) as i64 - 9))
            })
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct G2Report {
    pub checks: Vec<CheckLine>,
}

impl G2Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Checks `ν = -144 ω`, the derivation identity on all basis triples, and agreement of the two `ρ`.
pub fn verify_g2_identities(table: &CrossProductTable) -> Result<G2Report> {
    let cover = &table.cover;
    let rho = table.rho()?;
    let assembled = assemble_rho(cover)?;
    let nu = nu_from_rho(&rho);
    let minus144 = MultiPoly::from_int(cover.ring(), -144);
    let target: PolyMatrix = cover.omega_gram().iter().map(|r| r.iter().map(|v| v * &minus144).collect()).collect();
    let x = cover.algebra.mult_matrix(&cover.algebra.x());
    let line = |name: &str, pass: bool| CheckLine { name: name.to_string(), pass };
    Ok(G2Report {
        checks: vec![
            line("cross product is skew", table.is_skew()),
            line("cross product is orthogonal", table.is_orthogonal()),
            line("cross product is compatible with x", table.is_compatible()),
            line("nu = -144*omega", nu == target),
            line("nu is nondegenerate", matrix::det(&nu).is_unit()),
            line("rho derivation identity on all 343 triples", rho.verify_derivation_all(&x)),
            line("rho from cross product equals assembled rho", rho.same_values(&assembled)),
            line("rho degrees", degrees_consistent(&rho)),
        ],
    })
}
