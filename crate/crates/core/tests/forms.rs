mod common {
    pub mod numeric;
}

use chevalley::algebra::{blowup_algebra_so_even, subcover, Algebra, AlgebraElement, AlgebraOps};
use chevalley::forms::*;
use chevalley::polyring::matrix::{self, PolyMatrix};
use chevalley::polyring::{MultiPoly, Scalar};
use common::numeric::{self, q, Mat, Monogenic, Q};

fn to_q(s: Scalar) -> Q {
    match s {
        Scalar::Q(r) => r,
        Scalar::Fp { .. } => unreachable!(),
    }
}

fn eval_matrix(m: &PolyMatrix, pt: &[Scalar]) -> Mat {
    m.iter().map(|r| r.iter().map(|c| to_q(c.eval(pt))).collect()).collect()
}

fn point(vals: &[i64]) -> Vec<Scalar> {
    vals.iter().map(|&v| Scalar::from_i64(v, 0)).collect()
}

const POINTS: [[i64; 3]; 2] = [[2, -3, 5], [-1, 4, 7]];

#[test]
fn symplectic_gram_matches_oracle() {
    for n in 1..=3 {
        let c = symplectic_form(n, 0).unwrap();
        assert_eq!(c.det_gram, MultiPoly::one(c.algebra.ring()));
        assert!(c.form.is_alternating());
        assert!(c.form.verify_derivation_all(&c.endo()));
        for vals in POINTS {
            let pt = point(&vals[..n]);
            // f = x^{2n} + a_2 x^{2n-2} + ... + a_{2n}
            let mut lower = vec![q(0); 2 * n];
            for k in 1..=n {
                lower[2 * n - 2 * k] = q(vals[k - 1]);
            }
            let oracle = Monogenic::new(&lower).tau_form_gram(&lower);
            assert_eq!(eval_matrix(&c.form.gram(), &pt), oracle, "n = {n}");
        }
    }
}

#[test]
fn odd_orthogonal_gram_matches_oracle() {
    for n in 1..=3 {
        let c = so_odd_form(n, 0).unwrap();
        assert_eq!(c.det_gram, MultiPoly::one(c.algebra.ring()));
        assert!(c.form.is_symmetric());
        assert!(c.form.verify_derivation_all(&c.endo()));
        for vals in POINTS {
            let pt = point(&vals[..n]);
            // f = x f_0
            let mut lower = vec![q(0); 2 * n + 1];
            for k in 1..=n {
                lower[2 * n + 1 - 2 * k] = q(vals[k - 1]);
            }
            let oracle = Monogenic::new(&lower).tau_form_gram(&lower);
            assert_eq!(eval_matrix(&c.form.gram(), &pt), oracle, "n = {n}");
        }
    }
}

fn numeric_mult(alg: &Algebra, b: &AlgebraElement, pt: &[Scalar]) -> Mat {
    eval_matrix(&alg.mult_matrix(b), pt)
}

#[test]
fn even_orthogonal_battery() {
    for (n, det) in [(2, 16), (3, 64)] {
        let c = so_even_form(n, 0).unwrap();
        let alg = &c.algebra;
        alg.check_table().unwrap();
        assert_eq!(c.det_gram, MultiPoly::from_int(alg.ring(), det));
        assert!(c.form.is_symmetric());
        assert!(c.form.verify_derivation_all(&c.endo()));
        let dd = different_so_even(alg, n).element;
        for vals in POINTS {
            let pt = point(&vals[..n]);
            let inv = numeric::inverse(&numeric_mult(alg, &dd, &pt)).unwrap();
            let d = alg.rank();
            let oracle: Mat = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let tj = alg.tau(&alg.basis(j)).unwrap();
                            let prod = numeric::matmul(&numeric_mult(alg, &alg.basis(i), &pt), &numeric_mult(alg, &tj, &pt));
                            numeric::trace(&numeric::matmul(&inv, &prod))
                        })
                        .collect()
                })
                .collect();
            assert_eq!(eval_matrix(&c.form.gram(), &pt), oracle, "n = {n}");
        }
    }
}

#[test]
fn even_orthogonal_pushdown_degenerates_at_zero_pfaffian() {
    for n in [2, 3] {
        let c = so_even_form(n, 0).unwrap();
        let push = so_even_pushdown_gram(&c);
        let det = matrix::det(&push);
        let pn = MultiPoly::var(c.algebra.ring(), n - 1);
        let scale = MultiPoly::from_int(c.algebra.ring(), if n == 2 { 16 } else { 64 });
        assert_eq!(det, &scale * &pn.pow(2));
        let zero = vec![Scalar::from_i64(0, 0); n];
        assert!(det.eval(&zero).is_zero());
        let generic = point(&[1, 2, 3][..n]);
        assert!(!det.eval(&generic).is_zero());
    }
}

#[test]
fn different_expressions() {
    for n in [2, 3] {
        let alg = blowup_algebra_so_even(n, 0).unwrap();
        let two = MultiPoly::from_int(alg.ring(), 2);
        let d = different_so_even(&alg, n).element;
        let via_g = different_determinant(&alg, &so_even_g_derivative(&alg, n));
        assert_eq!(via_g, d.scale(&two));
        // the determinant built from the full characteristic polynomial is a different element
        let literal = different_determinant(&alg, &so_even_char_poly_derivative(&alg, n));
        assert_ne!(literal, different_sum_expression(&alg, n));
    }
}

#[test]
fn dualizing_functional_certificate() {
    let c = symplectic_form(2, 0).unwrap();
    let fp = derivative_element(&c.algebra).unwrap();
    let phi = dualizing_functional(&c.algebra, &fp).unwrap();
    let gram = certified_gram(&c.algebra, &phi).unwrap();
    assert_eq!(FormTensor::from_gram(&gram, Symmetry::Alternating).unwrap().gram(), c.form.gram());
}

#[test]
fn subcover_trace_transitivity() {
    for n in 1..=3 {
        let alg = sp_cover(n, 0).unwrap();
        let x = alg.x();
        let emb = subcover(&alg, &alg.mul(&x, &x)).unwrap();
        emb.check().unwrap();
        assert_eq!(emb.relative_degree, 2);
    }
}

#[test]
fn form_json_is_stable() {
    let c = symplectic_form(1, 0).unwrap();
    let a = serde_json::to_string(&c.form.to_json()).unwrap();
    let b = serde_json::to_string(&symplectic_form(1, 0).unwrap().form.to_json()).unwrap();
    assert_eq!(a, b);
}
