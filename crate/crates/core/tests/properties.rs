use chevalley::algebra::AlgebraOps;
use chevalley::companion::gl_cover;
use chevalley::forms::symplectic_form;
use chevalley::lattice::{LaurentLattice, LaurentScalar};
use chevalley::polyring::{gcd, Monomial, MultiPoly, PolyRing, Ring, Scalar};
use proptest::prelude::*;

type Terms = Vec<(Vec<u16>, i64)>;

fn ring() -> Ring {
    PolyRing::new(&["a", "b", "c"], &[1, 2, 3], 0).unwrap()
}

fn terms(max: usize, exp: u16) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0..exp, 3), -9i64..=9), 0..max)
}

fn poly(r: &Ring, t: &Terms) -> MultiPoly {
    let terms = t.iter().map(|(e, c)| (Monomial::new(r, e.iter().copied().collect()), r.scalar(*c))).collect();
    MultiPoly::from_terms(r, terms)
}

fn series(coeffs: &[i64], shift: i64, p: u64) -> LaurentScalar {
    LaurentScalar::from_ints(coeffs, p).shift(shift)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in terms(5, 3), g in terms(5, 3), h in terms(5, 3)) {
        let r = ring();
        let (f, g, h) = (poly(&r, &f), poly(&r, &g), poly(&r, &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in terms(5, 3), g in terms(5, 3), pt in prop::collection::vec(-5i64..=5, 3)) {
        let r = ring();
        let (f, g) = (poly(&r, &f), poly(&r, &g));
        let pt: Vec<Scalar> = pt.into_iter().map(|v| r.scalar(v)).collect();
        prop_assert_eq!((&f * &g).eval(&pt), &f.eval(&pt) * &g.eval(&pt));
        prop_assert_eq!((&f + &g).eval(&pt), &f.eval(&pt) + &g.eval(&pt));
    }

    #[test]
    fn gcd_recovers_common_factor(g in terms(3, 2), u in terms(3, 2), v in terms(3, 2)) {
        let r = ring();
        let (g, u, v) = (poly(&r, &g), poly(&r, &u), poly(&r, &v));
        prop_assume!(!g.is_zero() && !u.is_zero() && !v.is_zero());
        let (a, b) = (&g * &u, &g * &v);
        let d = gcd(&a, &b);
        prop_assert!(a.div_exact(&d).is_some());
        prop_assert!(b.div_exact(&d).is_some());
        prop_assert!(d.div_exact(&g).is_some());
    }

    #[test]
    fn prime_field_inverse(a in 1i64..7, b in 0i64..7) {
        let (a, b) = (Scalar::from_i64(a, 7), Scalar::from_i64(b, 7));
        prop_assert!((&a * &a.inv().unwrap()).is_one());
        prop_assert_eq!(&(&a * &b) * &a.inv().unwrap(), b);
    }

    #[test]
    fn laurent_associative_and_invertible(
        x in prop::collection::vec(0i64..5, 1..4),
        y in prop::collection::vec(0i64..5, 1..4),
        z in prop::collection::vec(0i64..5, 1..4),
        s in -3i64..3,
        target in 1i64..12,
    ) {
        let p = 5;
        let (x, y, z) = (series(&x, s, p), series(&y, 0, p), series(&z, -s, p));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.add(&y).mul(&z), x.mul(&z).add(&y.mul(&z)));
        prop_assume!(!x.is_known_zero());
        let inv = x.inverse_to(target).unwrap();
        let one = LaurentScalar::one(p);
        prop_assert!(x.mul(&inv).sub(&one).is_known_zero());
    }

    #[test]
    fn hermite_form_ignores_column_operations(
        cols in prop::collection::vec(prop::collection::vec(0i64..5, 3), 4),
        shifts in prop::collection::vec(-2i64..3, 4),
        r in prop::collection::vec(0i64..5, 3),
        unit in 1i64..5,
    ) {
        let p = 5;
        let entry = |k: usize| series(&cols[k], shifts[k], p);
        let v0 = vec![entry(0), entry(1)];
        let v1 = vec![entry(2), entry(3)];
        let det = v0[0].mul(&v1[1]).sub(&v0[1].mul(&v1[0]));
        prop_assume!(!det.is_known_zero());
        let l = LaurentLattice::from_basis(&[v0.clone(), v1.clone()]).unwrap();
        let (r, u) = (series(&r, 0, p), LaurentScalar::from_ints(&[unit, 1], p));
        let w: Vec<LaurentScalar> = v0.iter().zip(&v1).map(|(a, b)| a.mul(&u).add(&b.mul(&r))).collect();
        prop_assert_eq!(LaurentLattice::from_basis(&[v1, w]).unwrap(), l.clone());
        prop_assert_eq!(l.relative_degree(), det.valuation().unwrap());
    }

    #[test]
    fn gl_cover_is_commutative(c in prop::collection::vec(-4i64..=4, 6)) {
        let alg = gl_cover(3, 0).unwrap();
        let el = |s: &[i64]| alg.element(s.iter().map(|&v| MultiPoly::from_int(alg.ring(), v)).collect());
        let (u, v) = (el(&c[..3]), el(&c[3..]));
        prop_assert_eq!(alg.mul(&u, &v), alg.mul(&v, &u));
        prop_assert_eq!(alg.trace(&alg.mul(&u, &v)), alg.trace(&alg.mul(&v, &u)));
    }

    #[test]
    fn symplectic_form_is_x_invariant(c in prop::collection::vec(-4i64..=4, 8)) {
        let cover = symplectic_form(2, 0).unwrap();
        let alg = &cover.algebra;
        let el = |s: &[i64]| alg.element(s.iter().map(|&v| MultiPoly::from_int(alg.ring(), v)).collect());
        let (u, v, x) = (el(&c[..4]), el(&c[4..]), alg.x());
        let sum = &cover.form.eval_elements(&[&alg.mul(&x, &u), &v]) + &cover.form.eval_elements(&[&u, &alg.mul(&x, &v)]);
        prop_assert!(sum.is_zero());
        prop_assert!(cover.form.eval_elements(&[&u, &u]).is_zero());
    }
}
