mod common {
    pub mod numeric;
}

use chevalley::algebra::AlgebraOps;
use chevalley::g2::*;
use chevalley::polyring::{parse_poly, MultiPoly, Scalar};
use chevalley::Error;
use common::numeric::{q, Q};
use num_traits::Zero;

fn standard() -> (G2Cover, CrossProductTable) {
    let cover = G2Cover::new(0).unwrap();
    let table = solve_cross_product(&cover, &Pin::standard(&cover), &cover.ring().scalar(1)).unwrap();
    (cover, table)
}

#[test]
fn defining_relation_and_f0() {
    let cover = G2Cover::new(0).unwrap();
    let alg = &cover.algebra;
    assert!(alg.mul(&alg.x(), &cover.f0()).is_zero());
    assert!(!cover.f0().is_zero());
}

#[test]
fn pinned_table_values() {
    let (cover, table) = standard();
    let p = |s: &str| parse_poly(cover.ring(), s).unwrap();
    assert_eq!(table.tc[6][3], p("1"));
    assert_eq!(table.tc[6][4], p("0"));
    assert_eq!(table.tc[6][5], p("5/2*e"));
    assert_eq!(table.tangent_dim, 1);
    assert_eq!(table.free_slots.len(), 5);
    for a in 0..7 {
        for b in 0..7 {
            assert_eq!(table.tc[a][b], -&table.tc[b][a]);
        }
    }
}

#[test]
fn cross_product_axioms() {
    let (_, table) = standard();
    assert!(table.is_skew());
    assert!(table.is_orthogonal());
    assert!(table.is_compatible());
    assert!(table.is_normalized_for(&Scalar::from_i64(1, 0)));
}

#[test]
fn report_passes() {
    let (_, table) = standard();
    let report = verify_g2_identities(&table).unwrap();
    assert!(report.all_pass(), "{report:?}");
    assert!(report.checks.iter().any(|c| c.name == "nu = -144*omega" && c.pass));
}

#[test]
fn rho_annihilated_by_x() {
    let (cover, table) = standard();
    let rho = table.rho().unwrap();
    let alg = &cover.algebra;
    let basis: Vec<_> = (0..7).map(|i| alg.basis(i)).collect();
    let xb: Vec<_> = basis.iter().map(|b| alg.mul(&alg.x(), b)).collect();
    for i in 0..7 {
        for j in 0..7 {
            for k in 0..7 {
                let s = &(&rho.eval_elements(&[&xb[i], &basis[j], &basis[k]])
                    + &rho.eval_elements(&[&basis[i], &xb[j], &basis[k]]))
                    + &rho.eval_elements(&[&basis[i], &basis[j], &xb[k]]);
                assert!(s.is_zero(), "({i}, {j}, {k})");
            }
        }
    }
    assert!(rho.is_alternating());
    assert!(degrees_consistent(&rho));
}

fn heap_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1;
    out.push((a.clone(), sign));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `ν(u, v)` as the signed sum over all of `S_7` of `ρ(u, σ0, σ1) ρ(v, σ2, σ3) ρ(σ4, σ5, σ6)`,
/// at a rational point.
#[test]
fn nu_matches_permutation_sum_oracle() {
    let (cover, table) = standard();
    let rho = table.rho().unwrap();
    let perms = heap_permutations(7);
    for (e, qv) in [(3, -2), (-5, 7)] {
        let pt = [Scalar::from_i64(e, 0), Scalar::from_i64(qv, 0)];
        let val = |i: usize, j: usize, k: usize| -> Q {
            match rho.get(&[i, j, k]).eval(&pt) {
                Scalar::Q(r) => r,
                _ => unreachable!(),
            }
        };
        let mut table3 = vec![Q::zero(); 343];
        for i in 0..7 {
            for j in 0..7 {
                for k in 0..7 {
                    table3[49 * i + 7 * j + k] = val(i, j, k);
                }
            }
        }
        let r = |i: usize, j: usize, k: usize| &table3[49 * i + 7 * j + k];
        let omega = cover.omega_gram();
        for u in 0..7 {
            for v in u..7 {
                let mut acc = Q::zero();
                for (s, sign) in &perms {
                    let a = r(u, s[0], s[1]);
                    if a.is_zero() {
                        continue;
                    }
                    let b = r(v, s[2], s[3]);
                    if b.is_zero() {
                        continue;
                    }
                    let t = a * b * r(s[4], s[5], s[6]);
                    acc = if *sign > 0 { acc + t } else { acc - t };
                }
                let w = match omega[u][v].eval(&pt) {
                    Scalar::Q(x) => x,
                    _ => unreachable!(),
                };
                assert_eq!(acc, w * q(-144), "({u}, {v}) at e = {e}, q = {qv}");
            }
        }
    }
}

#[test]
fn iota1_rho_value() {
    let (cover, table) = standard();
    let rho = table.rho().unwrap();
    let p = |s: &str| parse_poly(cover.ring(), s).unwrap();
    let got = iota1(&rho);
    let expect: Vec<((usize, usize), MultiPoly)> =
        vec![((3, 6), p("-1")), ((4, 5), p("2")), ((5, 6), p("-5/2*e"))];
    assert_eq!(got, expect);
}

#[test]
fn opposite_pin_negates_rho() {
    let (cover, table) = standard();
    let opposite = solve_cross_product(&cover, &Pin::opposite(&cover), &cover.ring().scalar(1)).unwrap();
    assert!(opposite.rho().unwrap().same_values(&table.rho().unwrap().neg()));
    assert!(opposite.is_compatible() && opposite.rho().unwrap().is_alternating());
}

#[test]
fn pin_parsing_and_inconsistent_pins() {
    let cover = G2Cover::new(0).unwrap();
    let parsed = Pin::parse(&cover, "c63=1,c64=0,c65=5e/2").unwrap();
    assert_eq!(parsed, Pin::standard(&cover));
    assert!(Pin::parse(&cover, "c63").is_err());
    let r = solve_cross_product(&cover, &Pin::standard(&cover), &cover.ring().scalar(-144));
    assert!(matches!(r, Err(Error::InconsistentPin(_))));
}

#[test]
fn finite_characteristic_agrees() {
    let table = CrossProductTable::solve(11).unwrap();
    assert!(verify_g2_identities(&table).unwrap().all_pass());
    assert!(G2Cover::new(7).is_err());
}
