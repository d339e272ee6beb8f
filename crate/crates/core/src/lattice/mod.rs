//! Lattice models over `𝒪 = k[[ϖ]]`: the spectral algebra at an `𝒪`-point, lattices in its
//! generic fibre, the membership predicates, and enumeration inside a box.

mod laurent;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

pub use laurent::{eval_laurent, LaurentScalar};

use crate::algebra::{Algebra, AlgebraOps};
use crate::companion::{gl_cover, sl_cover, trace_pairing};
use crate::error::{Error, Result};
use crate::forms::{so_even_form, so_odd_form, symplectic_form, FormTensor};
use crate::g2::{CrossProductTable, G2Cover};
use crate::group::Group;
use crate::polyring::matrix;
use crate::polyring::Scalar;

/// Values of an invariant tensor on all basis tuples, over `𝒪`.
#[derive(Clone, Debug)]
pub struct LaurentForm {
    pub arity: usize,
    pub rank: usize,
    values: Vec<LaurentScalar>,
}

impl LaurentForm {
    fn pull_back(form: &FormTensor, point: &[LaurentScalar], characteristic: u64) -> LaurentForm {
        let rank = form.rank();
        let arity = form.arity();
        let values = form
            .all_tuples()
            .iter()
            .map(|t| eval_laurent(&form.get(t), point, characteristic))
            .collect();
        LaurentForm { arity, rank, values }
    }

    pub fn get(&self, idx: &[usize]) -> &LaurentScalar {
        let flat = idx.iter().fold(0, |acc, &i| acc * self.rank + i);
        &self.values[flat]
    }

    /// Multilinear evaluation on vectors of Laurent coordinates.
    pub fn eval(&self, args: &[&[LaurentScalar]]) -> LaurentScalar {
        let characteristic = args[0][0].characteristic();
        let mut acc = LaurentScalar::zero(characteristic);
        let total = self.rank.pow(self.arity as u32);
        let mut idx = vec![0usize; self.arity];
        for flat in 0..total {
            let mut rest = flat;
            for slot in (0..self.arity).rev() {
                idx[slot] = rest % self.rank;
                rest /= self.rank;
            }
            let v = &self.values[flat];
            if v.is_known_zero() && v.is_exact() {
                continue;
            }
            let mut term = v.clone();
            for (slot, &i) in idx.iter().enumerate() {
                let c = &args[slot][i];
                if c.is_known_zero() && c.is_exact() {
                    term = LaurentScalar::zero(characteristic);
                    break;
                }
                term = term.mul(c);
            }
            acc = acc.add(&term);
        }
        acc
    }
}

/// `B_a = 𝒪[x]/(f_a)` (or `B̃_a` for the even orthogonal tag) with the pulled-back form.
#[derive(Clone, Debug)]
pub struct SpecAlgebraAt {
    pub group: Group,
    pub n: usize,
    pub characteristic: u64,
    pub a: Vec<LaurentScalar>,
    pub labels: Vec<String>,
    /// Column `j` holds the coordinates of `x e_j`.
    pub x: Vec<Vec<LaurentScalar>>,
    pub form: Option<LaurentForm>,
    pub discriminant: LaurentScalar,
}

impl SpecAlgebraAt {
    /// Coordinates of `a` follow the base ring of the group's cover: `a_1..a_n` for `gl`,
    /// `a_2..a_n` for `sl`, `a_2, a_4, ..` for `sp`/`so-odd`, `a_2, .., a_{2n-2}, p_n` for
    /// `so-even` and `e, q` for `g2`.
    pub fn new(group: Group, n: usize, a: Vec<LaurentScalar>, characteristic: u64) -> Result<SpecAlgebraAt> {
        group.check_characteristic(characteristic)?;
        let (alg, form): (Algebra, Option<FormTensor>) = match group {
            Group::Gl => (gl_cover(n, characteristic)?, None),
            Group::Sl => (sl_cover(n, characteristic)?, None),
            Group::Sp => {
                let c = symplectic_form(n, characteristic)?;
                (c.algebra, Some(c.form))
            }
            Group::SoOdd => {
                let c = so_odd_form(n, characteristic)?;
                (c.algebra, Some(c.form))
            }
            Group::SoEven => {
                let c = so_even_form(n, characteristic)?;
                (c.algebra, Some(c.form))
            }
            Group::G2 => {
                let cover = G2Cover::new(characteristic)?;
                let table = CrossProductTable::solve(characteristic)?;
                (cover.algebra, Some(table.rho()?))
            }
        };
        let nvars = alg.ring().nvars();
        if a.len() != nvars {
            return Err(Error::InvalidInput(format!(
                "group {group} at n = {n} takes {nvars} coefficients, got {}",
                a.len()
            )));
        }
        for c in &a {
            if c.characteristic() != characteristic {
                return Err(Error::InvalidInput("coefficient field differs from the requested field".into()));
            }
            if let Some(v) = c.valuation() {
                if v < 0 {
                    return Err(Error::InvalidInput(format!("coefficient {c} is not in 𝒪")));
                }
            }
        }
        let endo = alg.mult_matrix(&alg.x());
        let x = endo.iter().map(|r| r.iter().map(|c| eval_laurent(c, &a, characteristic)).collect()).collect();
        let disc = matrix::det(&trace_pairing(&alg).gram());
        let discriminant = eval_laurent(&disc, &a, characteristic);
        if discriminant.is_known_zero() {
            return Err(match discriminant.precision() {
                None => Error::InvalidInput("point is not regular semisimple: discriminant vanishes".into()),
                Some(p) => Error::InsufficientPrecision(format!("discriminant is zero modulo ϖ^{p}")),
            });
        }
        let form = form.map(|f| LaurentForm::pull_back(&f, &a, characteristic));
        Ok(SpecAlgebraAt {
            group,
            n,
            characteristic,
            a,
            labels: alg.labels().to_vec(),
            x,
            form,
            discriminant,
        })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// `x v` in coordinates.
    pub fn apply_x(&self, v: &[LaurentScalar]) -> Vec<LaurentScalar> {
        let d = self.rank();
        (0..d)
            .map(|i| {
                (0..d).fold(LaurentScalar::zero(self.characteristic), |acc, j| acc.add(&self.x[i][j].mul(&v[j])))
            })
            .collect()
    }
}

/// A lattice in column Hermite form: upper triangular, pivot `(i, i)` equal to `ϖ^{n_i}`,
/// entries above a pivot row `i` supported in exponents below `n_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentLattice {
    pivots: Vec<i64>,
    /// `entries[i][j]` is row `i` of column `j`.
    entries: Vec<Vec<LaurentScalar>>,
    characteristic: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeJson {
    pub degree: i64,
    pub pivots: Vec<i64>,
    pub columns: Vec<Vec<String>>,
}

const INITIAL_WORKING_PRECISION: i64 = 8;
const MAX_WORKING_PRECISION: i64 = 1 << 12;

impl LaurentLattice {
    /// The standard lattice `𝒪^d`.
    pub fn standard(d: usize, characteristic: u64) -> LaurentLattice {
        let entries = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { LaurentScalar::one(characteristic) } else { LaurentScalar::zero(characteristic) })
                    .collect()
            })
            .collect();
        LaurentLattice { pivots: vec![0; d], entries, characteristic }
    }

    /// Canonical form of the `𝒪`-span of the given columns.
    pub fn from_basis(columns: &[Vec<LaurentScalar>]) -> Result<LaurentLattice> {
        let d = columns.len();
        if d == 0 || columns.iter().any(|c| c.len() != d) {
            return Err(Error::InvalidInput("basis must be a nonempty square matrix".into()));
        }
        let characteristic = columns[0][0].characteristic();
        let span = columns
            .iter()
            .flatten()
            .filter_map(|c| c.terms().last().map(|(v, _)| *v))
            .max()
            .unwrap_or(0)
            - columns.iter().flatten().filter_map(|c| c.valuation()).min().unwrap_or(0);
        let mut w = INITIAL_WORKING_PRECISION.max(2 * span + 2);
        loop {
            match hermite_form(columns, w, characteristic) {
                Err(Error::InsufficientPrecision(_)) if w < MAX_WORKING_PRECISION => w *= 2,
                other => return other,
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[i64] {
        &self.pivots
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentScalar {
        &self.entries[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<LaurentScalar> {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<LaurentScalar>> {
        (0..self.rank()).map(|j| self.column(j)).collect()
    }

    /// `deg(L : 𝒪^d)`, the valuation of the determinant of the basis.
    pub fn relative_degree(&self) -> i64 {
        self.pivots.iter().sum()
    }

    /// `ϖ^k L`.
    pub fn scaled(&self, k: i64) -> LaurentLattice {
        LaurentLattice {
            pivots: self.pivots.iter().map(|n| n + k).collect(),
            entries: self.entries.iter().map(|r| r.iter().map(|c| c.shift(k)).collect()).collect(),
            characteristic: self.characteristic,
        }
    }

    /// Whether `v ∈ L`, by back substitution against the triangular basis.
    pub fn contains(&self, v: &[LaurentScalar]) -> Result<bool> {
        let mut w = v.to_vec();
        for i in (0..self.rank()).rev() {
            let y = w[i].shift(-self.pivots[i]);
            if !y.is_integral()? {
                return Ok(false);
            }
            if y.is_known_zero() {
                continue;
            }
            for (r, wr) in w.iter_mut().enumerate().take(i + 1) {
                *wr = wr.sub(&y.mul(&self.entries[r][i]));
            }
        }
        Ok(true)
    }

    /// `ϖ^N 𝒪^d ⊆ L ⊆ ϖ^{-N} 𝒪^d`.
    pub fn in_box(&self, n: i64) -> bool {
        let d = self.rank();
        let lower = self.entries.iter().flatten().all(|c| c.valuation().is_none_or(|v| v >= -n));
        lower
            && (0..d).all(|k| {
                let e: Vec<LaurentScalar> = (0..d)
                    .map(|i| {
                        if i == k {
                            LaurentScalar::monomial(Scalar::one(self.characteristic), n)
                        } else {
                            LaurentScalar::zero(self.characteristic)
                        }
                    })
                    .collect();
                self.contains(&e).unwrap_or(false)
            })
    }

    fn sort_key(&self) -> (i64, Vec<i64>, String) {
        (self.relative_degree(), self.pivots.clone(), format!("{:?}", self.to_json().columns))
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            degree: self.relative_degree(),
            pivots: self.pivots.clone(),
            columns: self.columns().iter().map(|c| c.iter().map(|s| s.to_string()).collect()).collect(),
        }
    }
}

fn hermite_form(columns: &[Vec<LaurentScalar>], w: i64, characteristic: u64) -> Result<LaurentLattice> {
    let d = columns.len();
    let zero = LaurentScalar::zero(characteristic);
    // cols[j][i]
    let mut cols: Vec<Vec<LaurentScalar>> = columns.to_vec();
    let mut pivots = vec![0i64; d];
    for row in (0..d).rev() {
        let best = (0..=row)
            .filter_map(|j| cols[j][row].valuation().map(|v| (v, j)))
            .min()
            .ok_or_else(|| match cols[0..=row].iter().all(|c| c[row].is_exact()) {
                true => Error::InvalidInput("columns are linearly dependent".into()),
                false => Error::InsufficientPrecision(format!("row {row} is zero to the working precision")),
            })?;
        let (v, j) = best;
        cols.swap(j, row);
        let inv = cols[row][row].inverse_to(w)?.shift(v);
        for r in 0..row {
            cols[row][r] = cols[row][r].mul(&inv);
        }
        cols[row][row] = LaurentScalar::monomial(Scalar::one(characteristic), v);
        pivots[row] = v;
        for j in 0..row {
            let q = cols[j][row].shift(-v);
            if q.is_known_zero() && q.is_exact() {
                continue;
            }
            for r in 0..row {
                let t = q.mul(&cols[row][r]);
                cols[j][r] = cols[j][r].sub(&t);
            }
            cols[j][row] = zero.clone();
        }
    }
    for j in 0..d {
        for i in (0..j).rev() {
            let h = cols[j][i].clone();
            let ni = pivots[i];
            if let Some(p) = h.precision() {
                if p < ni {
                    return Err(Error::InsufficientPrecision(format!("entry ({i}, {j}) known only to ϖ^{p}")));
                }
            }
            let quotient = LaurentScalar::from_terms(
                h.terms().filter(|(e, _)| **e >= ni).map(|(e, c)| (*e - ni, c.clone())),
                h.precision().map(|p| p - ni),
                characteristic,
            );
            let remainder =
                LaurentScalar::from_terms(h.terms().filter(|(e, _)| **e < ni).map(|(e, c)| (*e, c.clone())), None, characteristic);
            for r in 0..i {
                let t = quotient.mul(&cols[i][r]);
                cols[j][r] = cols[j][r].sub(&t);
            }
            cols[j][i] = remainder;
        }
    }
    let entries = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
    Ok(LaurentLattice { pivots, entries, characteristic })
}

/// Which predicates a lattice must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub stability: bool,
    pub integrality: bool,
    pub degree: Option<i64>,
}

impl Conditions {
    /// `gl`: stability only; `sl`: stability and degree 0; form-carrying tags: all three.
    pub fn for_group(group: Group) -> Conditions {
        match group {
            Group::Gl => Conditions { stability: true, integrality: false, degree: None },
            Group::Sl => Conditions { stability: true, integrality: false, degree: Some(0) },
            _ => Conditions { stability: true, integrality: true, degree: Some(0) },
        }
    }
}

/// Outcome of each predicate; `None` marks a predicate that was not required.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpringerCertificate {
    pub accepted: bool,
    pub stable: Option<bool>,
    pub integral: Option<bool>,
    pub degree: i64,
    pub degree_ok: Option<bool>,
    pub witness: Option<String>,
}

pub fn is_springer_point(lattice: &LaurentLattice, spec: &SpecAlgebraAt) -> Result<SpringerCertificate> {
    is_springer_point_with(lattice, spec, Conditions::for_group(spec.group))
}

/// Evaluates the requested predicates; a predicate that is decided false settles the verdict even
/// when another one abstains.
pub fn is_springer_point_with(
    lattice: &LaurentLattice,
    spec: &SpecAlgebraAt,
    conditions: Conditions,
) -> Result<SpringerCertificate> {
    if lattice.rank() != spec.rank() {
        return Err(Error::InvalidInput(format!("lattice rank {} against algebra rank {}", lattice.rank(), spec.rank())));
    }
    let degree = lattice.relative_degree();
    let mut witness = None;
    let mut pending: Option<Error> = None;
    let degree_ok = conditions.degree.map(|target| degree == target);
    if degree_ok == Some(false) {
        witness = Some(format!("relative degree {degree}"));
    }
    let columns = lattice.columns();
    let stable = if conditions.stability {
        let mut verdict = Some(true);
        for (j, col) in columns.iter().enumerate() {
            match lattice.contains(&spec.apply_x(col)) {
                Ok(true) => {}
                Ok(false) => {
                    verdict = Some(false);
                    witness.get_or_insert_with(|| format!("x times column {j} leaves the lattice"));
                    break;
                }
                Err(e) => {
                    verdict = None;
                    pending.get_or_insert(e);
                }
            }
        }
        verdict
    } else {
        None
    };
    let integral = match (&spec.form, conditions.integrality) {
        (Some(form), true) => {
            let mut verdict = Some(true);
            for t in tuples(columns.len(), form.arity) {
                let args: Vec<&[LaurentScalar]> = t.iter().map(|&j| columns[j].as_slice()).collect();
                match form.eval(&args).is_integral() {
                    Ok(true) => {}
                    Ok(false) => {
                        verdict = Some(false);
                        witness.get_or_insert_with(|| format!("form on columns {t:?} is not integral"));
                        break;
                    }
                    Err(e) => {
                        verdict = None;
                        pending.get_or_insert(e);
                    }
                }
            }
            verdict
        }
        _ => None,
    };
    let decided_false = [stable, integral, degree_ok].contains(&Some(false));
    if !decided_false {
        if let Some(e) = pending {
            return Err(e);
        }
    }
    Ok(SpringerCertificate { accepted: !decided_false, stable, integral, degree, degree_ok, witness })
}

/// Nondecreasing index tuples, enough for symmetric and alternating tensors.
fn tuples(d: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                let start = t.last().copied().unwrap_or(0);
                (start..d).map(move |k| {
                    let mut u = t.clone();
                    u.push(k);
                    u
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    pub group: Group,
    pub box_size: i64,
    pub conditions: Conditions,
    pub candidates: u128,
    #[serde(skip)]
    pub accepted: Vec<LaurentLattice>,
    pub lattices: Vec<LatticeJson>,
    pub counts_by_degree: BTreeMap<i64, usize>,
}

pub const DEFAULT_ENUMERATION_LIMIT: u128 = 5_000_000;

/// Number of Hermite forms over `𝒪/ϖ^{2N}` visited by the enumeration.
pub fn candidate_count(d: usize, box_size: i64, p: u64) -> u128 {
    let top = 2 * box_size as u32;
    (0..d).fold(1u128, |acc, i| {
        let per_row: u128 =
            (0..=top).map(|m| (p as u128).saturating_pow(m * (d - 1 - i) as u32)).fold(0u128, u128::saturating_add);
        acc.saturating_mul(per_row)
    })
}

pub fn enumerate_lattices(spec: &SpecAlgebraAt, box_size: i64) -> Result<Enumeration> {
    enumerate_lattices_with(spec, box_size, Conditions::for_group(spec.group), DEFAULT_ENUMERATION_LIMIT)
}

/// All lattices in `ϖ^{-N} 𝒪^d` containing `ϖ^N 𝒪^d` that satisfy `conditions`, sorted by
/// degree, pivots and entries.
pub fn enumerate_lattices_with(
    spec: &SpecAlgebraAt,
    box_size: i64,
    conditions: Conditions,
    limit: u128,
) -> Result<Enumeration> {
    if box_size < 0 {
        return Err(Error::InvalidInput("box size must be nonnegative".into()));
    }
    let p = spec.characteristic;
    if p == 0 {
        return Err(Error::InvalidInput("enumeration needs a finite residue field".into()));
    }
    let d = spec.rank();
    let candidates = candidate_count(d, box_size, p);
    if candidates > limit {
        return Err(Error::EnumerationTooLarge(candidates));
    }
    let top = 2 * box_size;
    let pivot_tuples: Vec<Vec<i64>> = (0..(top as u64 + 1).pow(d as u32))
        .map(|mut k| {
            (0..d)
                .map(|_| {
                    let m = (k % (top as u64 + 1)) as i64;
                    k /= top as u64 + 1;
                    m
                })
                .collect()
        })
        .collect();
    let outcomes: Vec<Result<Option<LaurentLattice>>> = pivot_tuples
        .par_iter()
        .flat_map_iter(|m| {
            let slots: Vec<(usize, usize)> =
                (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).filter(|&(i, _)| m[i] > 0).collect();
            let digits: u32 = slots.iter().map(|&(i, _)| m[i] as u32).sum();
            let count = p.pow(digits);
            let m = m.clone();
            (0..count).map(move |index| {
                let lattice = candidate(&m, &slots, index, p, box_size);
                if !lattice.in_box(box_size) {
                    return Ok(None);
                }
                let cert = is_springer_point_with(&lattice, spec, conditions)?;
                Ok(cert.accepted.then_some(lattice))
            })
        })
        .collect();
    let mut accepted = Vec::new();
    for o in outcomes {
        if let Some(l) = o? {
            accepted.push(l);
        }
    }
    accepted.sort_by_cached_key(|l| l.sort_key());
    let mut counts_by_degree = BTreeMap::new();
    for l in &accepted {
        *counts_by_degree.entry(l.relative_degree()).or_insert(0) += 1;
    }
    Ok(Enumeration {
        group: spec.group,
        box_size,
        conditions,
        candidates,
        lattices: accepted.iter().map(|l| l.to_json()).collect(),
        accepted,
        counts_by_degree,
    })
}

/// The Hermite form with pivots `ϖ^{m_i - N}` whose free coefficients are the base-`p` digits of `index`.
fn candidate(m: &[i64], slots: &[(usize, usize)], mut index: u64, p: u64, box_size: i64) -> LaurentLattice {
    let d = m.len();
    let mut entries: Vec<Vec<LaurentScalar>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        LaurentScalar::monomial(Scalar::one(p), m[i] - box_size)
                    } else {
                        LaurentScalar::zero(p)
                    }
                })
                .collect()
        })
        .collect();
    for &(i, j) in slots {
        let mut terms = Vec::with_capacity(m[i] as usize);
        for e in 0..m[i] {
            terms.push((e - box_size, Scalar::from_i64((index % p) as i64, p)));
            index /= p;
        }
        entries[i][j] = LaurentScalar::from_terms(terms, None, p);
    }
    LaurentLattice { pivots: m.iter().map(|v| v - box_size).collect(), entries, characteristic: p }
}
