//! One PASS/FAIL line per acceptance criterion, each with a pinned wall-clock limit.

mod common {
    pub mod numeric;
}

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use chevalley::algebra::{char_poly_of_matrix, AlgebraOps};
use chevalley::companion::*;
use chevalley::forms::*;
use chevalley::g2::*;
use chevalley::lattice::{enumerate_lattices, is_springer_point, LaurentLattice, LaurentScalar, SpecAlgebraAt};
use chevalley::polyring::matrix;
use chevalley::polyring::{parse_poly, MultiPoly, RatFunc};
use chevalley::special::*;
use chevalley::verify::{verify_properties, DEFAULT_SEED};
use chevalley::{Error, Group};
use common::numeric::{self, q, Monogenic};

const SAMPLES: usize = 200;

struct Outcome {
    pass: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { pass: true, notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.pass = false;
            self.notes.push(what.into());
        }
    }
}

fn run(id: u32, name: &str, limit: Duration, f: impl FnOnce(&mut Outcome)) -> bool {
    let mut out = Outcome::new();
    let start = Instant::now();
    f(&mut out);
    let elapsed = start.elapsed();
    out.require(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:?}"));
    let verdict = if out.pass { "PASS" } else { "FAIL" };
    println!("criterion {id} {name}: {verdict} [{elapsed:.2?} / {limit:?}]");
    for n in &out.notes {
        println!("    {n}");
    }
    out.pass
}

fn generic_polynomial(ring: &chevalley::polyring::Ring, n: usize) -> MultiPoly {
    let mut text = format!("t^{n}");
    for i in 1..=n {
        text.push_str(&format!(" + a{i}*t^{}", n - i));
    }
    parse_poly(ring, &text).unwrap()
}

fn criterion_1(out: &mut Outcome) {
    for n in 2..=8 {
        let alg = gl_cover(n, 0).unwrap();
        let ring = alg.ring().extend(&["t"], &[1]).unwrap();
        let t = MultiPoly::var(&ring, n);
        let cp = char_poly_of_matrix(&companion_matrix(&alg).unwrap().matrix);
        let ours = cp.iter().fold(MultiPoly::zero(&ring), |acc, c| &(&acc * &t) + &c.embed(&ring));
        out.require(ours == generic_polynomial(&ring, n), format!("n = {n}: char poly differs from f"));
    }
}

fn criterion_2(out: &mut Outcome) {
    for n in 2..=8 {
        let alg = gl_cover(n, 0).unwrap();
        let fp = derivative_element(&alg).unwrap();
        let gb = beta_pairing(&alg).unwrap().gram();
        let lhs = trace_pairing(&alg).gram();
        out.require(lhs == matrix::matmul(&gb, &alg.mult_matrix(&fp)), format!("n = {n}: G_xi != G_beta M(f')"));
        let e = euler_traces(&alg).unwrap();
        let expected: Vec<RatFunc> = (0..n)
            .map(|k| if k + 1 == n { RatFunc::one(alg.ring()) } else { RatFunc::zero(alg.ring()) })
            .collect();
        out.require(e == expected, format!("n = {n}: Euler traces"));
        out.require(matrix::det(&gb).is_unit(), format!("n = {n}: det G_beta not a unit"));
    }
    // numeric oracle: at a rational point with distinct roots, tr(x^k / f') from matrices
    let lower = [q(-6), q(11), q(-6)];
    let f = Monogenic::new(&lower);
    let fp_inv = numeric::inverse(&f.derivative(&lower)).unwrap();
    for k in 0..3 {
        let tr = numeric::trace(&numeric::matmul(&f.x_power(k), &fp_inv));
        out.require(tr == q(if k == 2 { 1 } else { 0 }), format!("numeric Euler trace k = {k}"));
    }
}

fn classical_battery(out: &mut Outcome, cover: &FormedCover, alternating: bool) {
    let tag = format!("{} n = {}", cover.group, cover.n);
    let shape = if alternating { cover.form.is_alternating() } else { cover.form.is_symmetric() };
    out.require(shape, format!("{tag}: wrong symmetry"));
    out.require(cover.det_is_unit(), format!("{tag}: det not a unit"));
    out.require(matrix::det(&cover.form.gram()) == cover.det_gram, format!("{tag}: det mismatch"));
    out.require(cover.form.verify_derivation_all(&cover.endo()), format!("{tag}: anti-self-adjointness"));
}

fn criterion_3(out: &mut Outcome) {
    for n in 1..=4 {
        match symplectic_form(n, 0) {
            Ok(cover) => classical_battery(out, &cover, true),
            Err(e) => out.require(false, format!("sp n = {n}: {e}")),
        }
    }
}

fn criterion_4(out: &mut Outcome) {
    for n in 1..=3 {
        match so_odd_form(n, 0) {
            Ok(cover) => {
                classical_battery(out, &cover, false);
                out.require(cover.algebra.check_table().is_ok(), format!("so-odd n = {n}: associativity"));
            }
            Err(e) => out.require(false, format!("so-odd n = {n}: {e}")),
        }
    }
    for n in [2, 3] {
        let cover = match so_even_form(n, 0) {
            Ok(c) => c,
            Err(e) => {
                out.require(false, format!("so-even n = {n}: {e}"));
                continue;
            }
        };
        classical_battery(out, &cover, false);
        out.require(cover.algebra.check_table().is_ok(), format!("so-even n = {n}: associativity"));
        let alg = &cover.algebra;
        let via_f = different_determinant(alg, &so_even_char_poly_derivative(alg, n));
        let via_sum = different_sum_expression(alg, n);
        out.require(via_f == via_sum, format!("so-even n = {n}: the two expressions for the different disagree"));
    }
}

fn criterion_5(out: &mut Outcome) {
    let cover = G2Cover::new(0).unwrap();
    let p = |s: &str| parse_poly(cover.ring(), s).unwrap();
    let table = match solve_cross_product(&cover, &Pin::standard(&cover), &cover.ring().scalar(1)) {
        Ok(t) => t,
        Err(e) => return out.require(false, format!("solve: {e}")),
    };
    out.require(table.tangent_dim == 1, format!("solution family dimension {}", table.tangent_dim));
    out.require(table.tc[6][3] == p("1"), "tc(x^6, x^3)");
    out.require(table.tc[6][4] == p("0"), "tc(x^6, x^4)");
    out.require(table.tc[6][5] == p("5/2*e"), "tc(x^6, x^5)");
    let rho = table.rho().unwrap();
    let x = cover.algebra.mult_matrix(&cover.algebra.x());
    out.require(rho.verify_derivation_all(&x), "3-term identity on 343 basis triples");
    out.require(nu_from_rho(&rho) == matrix_scale(&cover.omega_gram(), &p("-144")), "nu = -144 omega");
    let want = vec![((3, 6), p("1")), ((4, 5), p("1")), ((5, 6), p("-3/2*e"))];
    let got = iota1(&rho);
    let shown: Vec<String> = got.iter().map(|((a, b), v)| format!("({v}) e{a}^e{b}")).collect();
    out.require(got == want, format!("iota1 rho = {}", shown.join(" + ")));
}

fn matrix_scale(m: &matrix::PolyMatrix, c: &MultiPoly) -> matrix::PolyMatrix {
    m.iter().map(|r| r.iter().map(|v| v * c).collect()).collect()
}

fn criterion_6(out: &mut Outcome) {
    for n in 1..=3 {
        let sf = special_form(&sp_subcover(n, 0).unwrap(), VandermondeConvention::Determinant).unwrap();
        let omega = symplectic_form(n, 0).unwrap().form;
        match sf.form.unit_ratio(&omega) {
            Some(u) => {
                let recorded = sp_equivalence_unit(n, 0, VandermondeConvention::Determinant).unwrap();
                out.require(u == recorded, format!("sp n = {n}: unit {u} != recorded {recorded}"));
            }
            None => out.require(false, format!("sp n = {n}: not a unit multiple")),
        }
    }
    let cover = G2Cover::new(0).unwrap();
    let rho = CrossProductTable::solve(0).unwrap().rho().unwrap();
    let sf = G2SpecialForms::new(&cover, VandermondeConvention::Determinant).unwrap();
    match glue_g2_three_form(&cover, &sf.omega_a1.form, &sf.twisted_omega_a2(&sf.xz())) {
        Ok(g) => out.require(g.same_values(&rho), "glued form differs from rho"),
        Err(e) => out.require(false, format!("gluing: {e}")),
    }
    out.require(
        matches!(glue_g2_three_form(&cover, &sf.omega_a1.form, &sf.omega_a2.form), Err(Error::IncompatiblePair(_))),
        "incompatible pair accepted",
    );
}

fn criterion_7(out: &mut Outcome) {
    for n in 2..=5 {
        out.require(check_grading_identity(n, 0).unwrap_or(false), format!("n = {n}"));
    }
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

fn criterion_8(out: &mut Outcome) {
    let p = 5;
    let ls = |s: &str| LaurentScalar::parse(s, p).unwrap();
    let cases: [(Group, usize, &[&str]); 6] = [
        (Group::Gl, 2, &["0", "-w^2"]),
        (Group::Sl, 2, &["-w^2"]),
        (Group::Sp, 1, &["-w^2"]),
        (Group::SoOdd, 1, &["-w^2"]),
        (Group::SoEven, 2, &["1 + w", "w"]),
        (Group::G2, 0, &["1", "w"]),
    ];
    for (g, n, a) in cases {
        let spec = SpecAlgebraAt::new(g, n, a.iter().map(|t| ls(t)).collect(), p).unwrap();
        let ok = is_springer_point(&LaurentLattice::standard(spec.rank(), p), &spec).map(|c| c.accepted);
        out.require(ok == Ok(true), format!("{g}: standard lattice {ok:?}"));
    }
    let spec = SpecAlgebraAt::new(Group::Gl, 2, vec![ls("0"), ls("-w^2")], p).unwrap();
    let one = enumerate_lattices(&spec, 1).unwrap();
    let two = enumerate_lattices(&spec, 2).unwrap();
    out.require(one.counts_by_degree == golden("gl2_f5_box1.json"), "box 1 counts differ from golden file");
    let restricted: Vec<_> = two.accepted.iter().filter(|l| l.in_box(1)).cloned().collect();
    out.require(restricted == one.accepted, "box 2 restricted to box 1 differs");
    let c = |s: &str| ls(s);
    let mut rng_state = DEFAULT_SEED;
    let mut next = |m: u64| {
        rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (rng_state >> 33) % m
    };
    for _ in 0..100 {
        let l = &two.accepted[next(two.accepted.len() as u64) as usize];
        let cols = l.columns();
        // (v0, v1) -> (u v0 + r v1, v1) with u a unit and r an integral series, then swap
        let u = c(&format!("{} + {}*w", 1 + next(4), next(5)));
        let r = c(&format!("{} + {}*w^2", next(5), next(5)));
        let v0: Vec<LaurentScalar> = cols[0].iter().zip(&cols[1]).map(|(a, b)| a.mul(&u).add(&b.mul(&r))).collect();
        let rebased = LaurentLattice::from_basis(&[cols[1].clone(), v0]).unwrap();
        out.require(&rebased == l, "HNF changed under basis change");
        let verdicts = (is_springer_point(&rebased, &spec).unwrap(), is_springer_point(l, &spec).unwrap());
        out.require(verdicts.0 == verdicts.1, "verdict changed under basis change");
    }
}

fn criterion_9(out: &mut Outcome) {
    let s = verify_properties(DEFAULT_SEED, SAMPLES);
    for c in s.failures() {
        out.require(false, format!("{} {}", c.name, c.detail.clone().unwrap_or_default()));
    }
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, Duration, fn(&mut Outcome)); 9] = [
        (1, "companion char poly", Duration::from_secs(10), criterion_1),
        (2, "beta* lemma", Duration::from_secs(30), criterion_2),
        (3, "sp forms", Duration::from_secs(60), criterion_3),
        (4, "so forms and different", Duration::from_secs(120), criterion_4),
        (5, "g2 cross product", Duration::from_secs(600), criterion_5),
        (6, "special form equivalences", Duration::from_secs(300), criterion_6),
        (7, "grading identity", Duration::from_secs(5), criterion_7),
        (8, "lattice model", Duration::from_secs(120), criterion_8),
        (9, "property suite", Duration::from_secs(300), criterion_9),
    ];
    let failed: Vec<u32> = criteria.into_iter().filter(|(id, name, limit, f)| !run(*id, name, *limit, f)).map(|c| c.0).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
