mod common {
    pub mod numeric;
}

use chevalley::algebra::AlgebraOps;
use chevalley::companion::*;
use common::numeric::{self, q, Monogenic};
use chevalley::polyring::matrix;
use chevalley::polyring::{parse_poly, MultiPoly, RatFunc};

#[test]
fn gl3_companion_matrix() {
    let alg = gl_cover(3, 0).unwrap();
    let r = alg.ring();
    let p = |s: &str| parse_poly(r, s).unwrap();
    let m = companion_matrix(&alg).unwrap().matrix;
    let expect = vec![
        vec![p("0"), p("0"), p("-a3")],
        vec![p("1"), p("0"), p("-a2")],
        vec![p("0"), p("1"), p("-a1")],
    ];
    assert_eq!(m, expect);
}

#[test]
fn trace_of_x_is_minus_a1() {
    for n in 1..=5 {
        let alg = gl_cover(n, 0).unwrap();
        let a1 = MultiPoly::var(alg.ring(), 0);
        assert_eq!(alg.trace(&alg.x()), -a1);
    }
}

#[test]
fn char_poly_matches_cofactor_oracle() {
    for n in 1..=4 {
        let alg = gl_cover(n, 0).unwrap();
        let cp = alg.char_poly(&alg.x());
        let ring = alg.ring().extend(&["t"], &[1]).unwrap();
        let t = MultiPoly::var(&ring, n);
        let m = alg.mult_matrix(&alg.x());
        let tm: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| (0..n).map(|j| {
                let e = -m[i][j].embed(&ring);
                if i == j { &t + &e } else { e }
            }).collect())
            .collect();
        let oracle = matrix::det_cofactor(&tm);
        let mut ours = MultiPoly::zero(&ring);
        for c in &cp {
            ours = &(&ours * &t) + &c.embed(&ring);
        }
        assert_eq!(ours, oracle, "n = {n}");
    }
}

#[test]
fn grading_identity() {
    for n in 2..=6 {
        assert!(check_grading_identity(n, 0).unwrap());
    }
}

#[test]
fn mu_and_euler() {
    for n in 1..=5 {
        let alg = gl_cover(n, 0).unwrap();
        mu_decomposition(&alg).unwrap();
        let e = euler_traces(&alg).unwrap();
        for (k, v) in e.iter().enumerate() {
            let want = if k + 1 == n { RatFunc::one(alg.ring()) } else { RatFunc::zero(alg.ring()) };
            assert_eq!(*v, want);
        }
        let tri = triangular_coefficients(&alg).unwrap();
        for i in 0..n {
            for k in 0..n {
                if i + k + 1 < n {
                    assert!(tri[i][k].is_zero());
                }
                if i + k + 1 == n {
                    assert!(tri[i][k].is_one());
                }
            }
        }
    }
}

#[test]
fn euler_traces_numeric_oracle() {
    for n in 2..=5 {
        let lower: Vec<_> = (0..n).map(|i| q([3, -1, 4, -1, 5][i])).collect();
        let m = Monogenic::new(&lower);
        let inv = numeric::inverse(&m.derivative(&lower)).unwrap();
        for k in 0..n {
            let t = numeric::trace(&numeric::matmul(&inv, &m.x_power(k)));
            assert_eq!(t, q(i64::from(k + 1 == n)), "n = {n}, k = {k}");
        }
    }
}

#[test]
fn beta_pairing_is_unimodular_and_x_is_self_adjoint() {
    for n in 2..=6 {
        let alg = gl_cover(n, 0).unwrap();
        let g = beta_pairing(&alg).unwrap().gram();
        let det = matrix::det(&g);
        assert!(det.is_unit(), "n = {n}");
        let x = companion_matrix(&alg).unwrap().matrix;
        let gx = matrix::matmul(&g, &x);
        let xtg = matrix::matmul(&matrix::transpose(&x), &g);
        assert_eq!(gx, xtg);
    }
}

#[test]
fn sl_companion_is_traceless() {
    for n in 2..=6 {
        let alg = sl_cover(n, 0).unwrap();
        assert!(companion_matrix(&alg).unwrap().trace().is_zero());
    }
}
