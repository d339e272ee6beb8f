//! Exact coefficient arithmetic: scalars, graded polynomial rings, fractions.

mod gcd;
pub mod matrix;
mod poly;
mod ratfunc;
mod ring;
pub mod sample;
mod scalar;
mod text;

pub use gcd::gcd;
pub use poly::{convert_scalar, poly_arith, Exps, Monomial, MultiPoly, PolyOp};
pub use ratfunc::{ratfunc_arith, RatFunc, RatOp};
pub use ring::{same_ring, PolyRing, Ring};
pub use scalar::{is_prime, Scalar};
pub use text::{format_poly, parse_poly, poly_from_json, poly_to_json, PolyJson, TermJson};

/// All monomials of the ring with weighted degree exactly `d`.
pub fn monomials_of_degree(ring: &Ring, d: u32) -> Vec<Monomial> {
    fn rec(ring: &Ring, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == ring.nvars() {
            if left == 0 {
                out.push(Monomial::new(ring, cur.iter().copied().collect()));
            }
            return;
        }
        let w = ring.weights[i];
        let mut e = 0;
        while e * w <= left {
            cur.push(e as u16);
            rec(ring, i + 1, left - e * w, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(ring, 0, d, &mut Vec::new(), &mut out);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}
