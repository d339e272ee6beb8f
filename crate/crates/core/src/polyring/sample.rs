//! Seeded random polynomials for property checks.

use rand::Rng;

use super::{Monomial, MultiPoly, Ring, Scalar};

/// Up to `terms` monomials with exponents below `max_exp` and integer coefficients in `[-bound, bound]`.
pub fn random_poly(ring: &Ring, rng: &mut impl Rng, terms: usize, max_exp: u16, bound: i64) -> MultiPoly {
    let n = ring.nvars();
    let out: Vec<(Monomial, Scalar)> = (0..rng.gen_range(0..=terms))
        .map(|_| {
            let exps: Vec<u16> = (0..n).map(|_| rng.gen_range(0..max_exp)).collect();
            (Monomial::new(ring, exps.into()), ring.scalar(rng.gen_range(-bound..=bound)))
        })
        .collect();
    MultiPoly::from_terms(ring, out)
}

/// A random polynomial homogeneous of weighted degree `d` (possibly zero).
pub fn random_homogeneous(ring: &Ring, rng: &mut impl Rng, d: u32, bound: i64) -> MultiPoly {
    let monos = super::monomials_of_degree(ring, d);
    let mut terms = Vec::new();
    for m in monos {
        if rng.gen_bool(0.6) {
            terms.push((m, ring.scalar(rng.gen_range(-bound..=bound))));
        }
    }
    MultiPoly::from_terms(ring, terms)
}
