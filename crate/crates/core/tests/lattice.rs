mod common {
    pub mod subspace_oracle;
}

use std::collections::BTreeMap;

use chevalley::lattice::{
    enumerate_lattices, enumerate_lattices_with, is_springer_point, Conditions, LaurentLattice, LaurentScalar,
    SpecAlgebraAt, DEFAULT_ENUMERATION_LIMIT,
};
use chevalley::polyring::Scalar;
use chevalley::{Error, Group};
use common::subspace_oracle::stable_lattice_counts;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ls(s: &str, p: u64) -> LaurentScalar {
    LaurentScalar::parse(s, p).unwrap()
}

fn gl2(p: u64) -> SpecAlgebraAt {
    SpecAlgebraAt::new(Group::Gl, 2, vec![ls("0", p), ls("-w^2", p)], p).unwrap()
}

fn lattice(cols: &[[&str; 2]], p: u64) -> LaurentLattice {
    let cols: Vec<Vec<LaurentScalar>> = cols.iter().map(|c| c.iter().map(|s| ls(s, p)).collect()).collect();
    LaurentLattice::from_basis(&cols).unwrap()
}

fn golden(name: &str) -> BTreeMap<i64, usize> {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v["counts_by_degree"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, c)| (k.parse().unwrap(), c.as_u64().unwrap() as usize))
        .collect()
}

#[test]
fn laurent_precision_is_pessimistic() {
    let a = ls("1 + w", 5).with_precision(3);
    let b = ls("w^-1", 5);
    let prod = a.mul(&b);
    assert_eq!(prod.precision(), Some(2));
    assert_eq!(prod.valuation(), Some(-1));
    let inv = ls("1 - w", 5).inverse_to(4).unwrap();
    let check = inv.mul(&ls("1 - w", 5));
    assert_eq!(check.with_precision(4), LaurentScalar::one(5).with_precision(4));
    assert!(matches!(ls("w^-3", 5).with_precision(-2).is_integral(), Ok(false)));
    assert!(matches!(LaurentScalar::zero(5).with_precision(-1).is_integral(), Err(Error::InsufficientPrecision(_))));
}

#[test]
fn gl2_membership_examples() {
    let spec = gl2(5);
    let half = lattice(&[["1", "0"], ["0", "w^-1"]], 5);
    let cert = is_springer_point(&half, &spec).unwrap();
    assert!(cert.accepted && cert.stable == Some(true));
    assert_eq!(cert.degree, -1);
    // x ϖ^{-2} x = 1 and x · 1 = ϖ^2 (ϖ^{-2} x), so this lattice is stable too
    let wide = lattice(&[["1", "0"], ["0", "w^-2"]], 5);
    assert!(is_springer_point(&wide, &spec).unwrap().accepted);
    let bad = lattice(&[["w^-1", "0"], ["0", "1"]], 5);
    let cert = is_springer_point(&bad, &spec).unwrap();
    assert_eq!(cert.stable, Some(false));
    assert!(cert.witness.is_some());
}

#[test]
fn standard_lattice_is_accepted_for_every_tag() {
    let p = 5;
    let cases = [
        (Group::Gl, 3, vec!["w", "-w^2", "1 + w^3"]),
        (Group::Sl, 3, vec!["-w^2", "w"]),
        (Group::Sp, 2, vec!["1", "w^2"]),
        (Group::SoOdd, 1, vec!["-w^2"]),
        (Group::SoEven, 2, vec!["1 + w", "w"]),
        (Group::G2, 1, vec!["1", "w"]),
    ];
    for (g, n, a) in cases {
        let spec = SpecAlgebraAt::new(g, n, a.iter().map(|s| ls(s, p)).collect(), p).unwrap();
        let cert = is_springer_point(&LaurentLattice::standard(spec.rank(), p), &spec).unwrap();
        assert!(cert.accepted, "{g}");
    }
}

#[test]
fn non_regular_semisimple_points_are_rejected() {
    assert!(SpecAlgebraAt::new(Group::Gl, 2, vec![ls("0", 5), ls("0", 5)], 5).is_err());
    let truncated = vec![ls("0", 5), ls("-w^2", 5).with_precision(1)];
    assert!(matches!(SpecAlgebraAt::new(Group::Gl, 2, truncated, 5), Err(Error::InsufficientPrecision(_))));
}

#[test]
fn box_zero_is_the_standard_lattice() {
    let spec = gl2(5);
    let e = enumerate_lattices(&spec, 0).unwrap();
    assert_eq!(e.accepted, vec![LaurentLattice::standard(2, 5)]);
}

#[test]
fn gl2_counts_match_the_subspace_oracle() {
    let e = enumerate_lattices(&gl2(5), 1).unwrap();
    assert_eq!(e.counts_by_degree, golden("gl2_f5_box1.json"));
    assert_eq!(stable_lattice_counts(5, 1, &[], &[0, 0, 4]), golden("gl2_f5_box1.json"));

    let e = enumerate_lattices(&gl2(3), 1).unwrap();
    assert_eq!(e.counts_by_degree, golden("gl2_f3_box1.json"));
    assert_eq!(stable_lattice_counts(3, 1, &[], &[0, 0, 2]), golden("gl2_f3_box1.json"));

    let f2 = SpecAlgebraAt::new(Group::Gl, 2, vec![ls("w", 2), ls("w^2", 2)], 2).unwrap();
    let e = enumerate_lattices(&f2, 2).unwrap();
    assert_eq!(e.counts_by_degree, golden("gl2_f2_box2.json"));
    assert_eq!(stable_lattice_counts(2, 2, &[0, 1], &[0, 0, 1]), golden("gl2_f2_box2.json"));
}

#[test]
fn larger_box_agrees_on_the_sub_box() {
    let spec = gl2(5);
    let small = enumerate_lattices(&spec, 1).unwrap().accepted;
    let large = enumerate_lattices(&spec, 2).unwrap().accepted;
    let restricted: Vec<LaurentLattice> = large.into_iter().filter(|l| l.in_box(1)).collect();
    assert_eq!(restricted, small);
}

#[test]
fn enumeration_output_is_sorted_and_deterministic() {
    let spec = gl2(5);
    let a = serde_json::to_string(&enumerate_lattices(&spec, 2).unwrap()).unwrap();
    let b = serde_json::to_string(&enumerate_lattices(&spec, 2).unwrap()).unwrap();
    assert_eq!(a, b);
    let e = enumerate_lattices(&spec, 2).unwrap();
    assert!(e.lattices.windows(2).all(|w| w[0].degree <= w[1].degree));
}

#[test]
fn enumeration_limit_is_enforced() {
    let spec = gl2(5);
    let c = Conditions::for_group(Group::Gl);
    assert!(matches!(enumerate_lattices_with(&spec, 2, c, 100), Err(Error::EnumerationTooLarge(3905))));
}

#[test]
fn dropping_integrality_enlarges_so3() {
    let spec = SpecAlgebraAt::new(Group::SoOdd, 1, vec![ls("-w^2", 5)], 5).unwrap();
    let full = enumerate_lattices(&spec, 1).unwrap();
    let relaxed = Conditions { integrality: false, ..Conditions::for_group(Group::SoOdd) };
    let loose = enumerate_lattices_with(&spec, 1, relaxed, DEFAULT_ENUMERATION_LIMIT).unwrap();
    assert!(full.accepted.iter().all(|l| loose.accepted.contains(l)));
    assert!(loose.accepted.len() > full.accepted.len());
    for l in &full.accepted {
        let cert = is_springer_point(l, &spec).unwrap();
        assert_eq!((cert.stable, cert.integral, cert.degree_ok), (Some(true), Some(true), Some(true)));
    }
}

#[test]
fn scaling_shifts_degree_by_rank() {
    let spec = gl2(5);
    for l in enumerate_lattices(&spec, 1).unwrap().accepted {
        let s = l.scaled(1);
        assert_eq!(s.relative_degree(), l.relative_degree() + 2);
        assert!(is_springer_point(&s, &spec).unwrap().accepted);
    }
}

fn random_unit(rng: &mut ChaCha8Rng, p: u64) -> LaurentScalar {
    let c0 = rng.gen_range(1..p as i64);
    let terms = (0..3).map(|e| (e, Scalar::from_i64(if e == 0 { c0 } else { rng.gen_range(0..p as i64) }, p)));
    LaurentScalar::from_terms(terms, None, p)
}

fn random_integral(rng: &mut ChaCha8Rng, p: u64) -> LaurentScalar {
    let terms = (0..3).map(|e| (e, Scalar::from_i64(rng.gen_range(0..p as i64), p)));
    LaurentScalar::from_terms(terms, None, p)
}

/// `cols · U` for a random `U ∈ GL_d(𝒪)` built from unit scalings, swaps and shears.
fn rebase(cols: &[Vec<LaurentScalar>], rng: &mut ChaCha8Rng, p: u64) -> Vec<Vec<LaurentScalar>> {
    let d = cols.len();
    let mut out = cols.to_vec();
    for _ in 0..6 {
        let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
        match rng.gen_range(0..3) {
            0 => {
                let u = random_unit(rng, p);
                out[i] = out[i].iter().map(|c| c.mul(&u)).collect();
            }
            1 => out.swap(i, j),
            _ if i != j => {
                let r = random_integral(rng, p);
                let add: Vec<LaurentScalar> = out[j].iter().map(|c| c.mul(&r)).collect();
                out[i] = out[i].iter().zip(&add).map(|(a, b)| a.add(b)).collect();
            }
            _ => {}
        }
    }
    out
}

#[test]
fn verdicts_are_invariant_under_basis_change() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a77);
    let spec = gl2(5);
    let so3 = SpecAlgebraAt::new(Group::SoOdd, 1, vec![ls("-w^2", 5)], 5).unwrap();
    let relaxed = Conditions { integrality: false, ..Conditions::for_group(Group::SoOdd) };
    let pool: Vec<(LaurentLattice, &SpecAlgebraAt)> = enumerate_lattices_with(&spec, 1, Conditions { stability: false, integrality: false, degree: None }, DEFAULT_ENUMERATION_LIMIT)
        .unwrap()
        .accepted
        .into_iter()
        .map(|l| (l, &spec))
        .chain(enumerate_lattices_with(&so3, 1, relaxed, DEFAULT_ENUMERATION_LIMIT).unwrap().accepted.into_iter().map(|l| (l, &so3)))
        .collect();
    for _ in 0..100 {
        let (l, s) = &pool[rng.gen_range(0..pool.len())];
        let again = LaurentLattice::from_basis(&rebase(&l.columns(), &mut rng, 5)).unwrap();
        assert_eq!(&again, l);
        assert_eq!(is_springer_point(&again, s).unwrap(), is_springer_point(l, s).unwrap());
    }
}

#[test]
fn increasing_precision_never_flips_a_verdict() {
    let exact = gl2(5);
    let lattices = enumerate_lattices_with(&exact, 1, Conditions { stability: false, integrality: false, degree: None }, DEFAULT_ENUMERATION_LIMIT)
        .unwrap()
        .accepted;
    for l in &lattices {
        let truth = is_springer_point(l, &exact).unwrap().accepted;
        let mut decided = None;
        for prec in 3..8 {
            let a = vec![ls("0", 5).with_precision(prec), ls("-w^2", 5).with_precision(prec)];
            let spec = SpecAlgebraAt::new(Group::Gl, 2, a, 5).unwrap();
            match is_springer_point(l, &spec) {
                Ok(cert) => {
                    assert_eq!(cert.accepted, truth);
                    decided = Some(cert.accepted);
                }
                Err(Error::InsufficientPrecision(_)) => assert!(decided.is_none()),
                Err(e) => panic!("{e}"),
            }
        }
        assert_eq!(decided, Some(truth));
    }
}
