//! Named pass/fail checks over every construction, grouped in sections.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{blowup_algebra_so_even, Algebra, AlgebraElement, AlgebraOps};
use crate::companion::*;
use crate::error::{Error, Result};
use crate::forms::*;
use crate::g2::*;
use crate::group::Group;
use crate::lattice::{
    enumerate_lattices, enumerate_lattices_with, is_springer_point, Conditions, LaurentLattice, LaurentScalar,
    SpecAlgebraAt, DEFAULT_ENUMERATION_LIMIT,
};
use crate::polyring::matrix::{self, PolyMatrix};
use crate::polyring::sample::{random_homogeneous, random_poly};
use crate::polyring::{parse_poly, MultiPoly, PolyRing, RatFunc, Ring, Scalar};
use crate::special::*;

pub const DEFAULT_SEED: u64 = 0x5eed_c0de;
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Section {
    fn new(title: impl Into<String>) -> Section {
        Section { title: title.into(), checks: Vec::new() }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Sorted map from check name to verdict.
    pub fn to_json_map(&self) -> serde_json::Map<String, serde_json::Value> {
        self.checks.iter().map(|c| (c.name.clone(), serde_json::Value::Bool(c.pass))).collect()
    }

    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<bool>) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(p) => (p, None),
            Err(e) => (false, Some(e.to_string())),
        };
        self.checks.push(Check { name: name.to_string(), pass, detail, elapsed });
    }

    fn check_detail(&mut self, name: &str, f: impl FnOnce() -> Result<(bool, String)>) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok((p, d)) => (p, Some(d)),
            Err(e) => (false, Some(e.to_string())),
        };
        self.checks.push(Check { name: name.to_string(), pass, detail, elapsed });
    }
}

/// Rejects group/rank/characteristic combinations that have no construction.
pub fn validate(group: Group, n: usize, characteristic: u64) -> Result<()> {
    group.check_characteristic(characteristic)?;
    if characteristic != 0 && !crate::polyring::is_prime(characteristic) {
        return Err(Error::BadCharacteristic { characteristic, reason: "not prime".into() });
    }
    let min = match group {
        Group::Gl | Group::Sp | Group::SoOdd => 1,
        Group::Sl | Group::SoEven => 2,
        Group::G2 => 0,
    };
    if n < min {
        return Err(Error::InvalidInput(format!("{group} needs rank >= {min}")));
    }
    Ok(())
}

pub fn verify_group(group: Group, n: usize, characteristic: u64) -> Result<Section> {
    validate(group, n, characteristic)?;
    Ok(match group {
        Group::Gl => gl_section(n, characteristic)?,
        Group::Sl => sl_section(n, characteristic)?,
        Group::Sp | Group::SoOdd | Group::SoEven => classical_section(group, n, characteristic),
        Group::G2 => g2_section(characteristic),
    })
}

fn title(group: Group, n: usize) -> String {
    match group {
        Group::G2 => "g2".to_string(),
        _ => format!("{group} n={n}"),
    }
}

fn beta_self_adjointness(alg: &Algebra) -> Result<(PolyMatrix, PolyMatrix)> {
    let g = beta_pairing(alg)?.gram();
    let x = companion_matrix(alg)?.matrix;
    Ok((matrix::matmul(&g, &x), matrix::matmul(&matrix::transpose(&x), &g)))
}

fn gl_section(n: usize, c: u64) -> Result<Section> {
    let alg = gl_cover(n, c)?;
    let mut s = Section::new(title(Group::Gl, n));
    s.check("char_poly_equals_f", || Ok(alg.char_poly(&alg.x()) == alg.defining_poly().unwrap()));
    s.check("table_associative", || alg.check_table().map(|_| true));
    s.check("mu_equals_f_prime_beta", || mu_decomposition(&alg).map(|_| true));
    s.check("euler_traces", || {
        let e = euler_traces(&alg)?;
        Ok(e.iter().enumerate().all(|(k, v)| {
            *v == if k + 1 == n { RatFunc::one(alg.ring()) } else { RatFunc::zero(alg.ring()) }
        }))
    });
    s.check("det_gram_unit", || Ok(matrix::det(&beta_pairing(&alg)?.gram()).is_unit()));
    s.check("anti_self_adjoint", || {
        let (gx, xtg) = beta_self_adjointness(&alg)?;
        Ok(gx.iter().flatten().zip(xtg.iter().flatten()).all(|(a, b)| (a + b).is_zero()))
    });
    s.check("self_adjoint", || {
        let (gx, xtg) = beta_self_adjointness(&alg)?;
        Ok(gx == xtg)
    });
    s.check("triangular_coefficients", || {
        let tri = triangular_coefficients(&alg)?;
        Ok((0..n).all(|i| {
            (0..n).all(|k| match (i + k + 1).cmp(&n) {
                std::cmp::Ordering::Less => tri[i][k].is_zero(),
                std::cmp::Ordering::Equal => tri[i][k].is_one(),
                std::cmp::Ordering::Greater => true,
            })
        }))
    });
    if n >= 2 {
        s.check("grading_identity", || check_grading_identity(n, c));
    }
    Ok(s)
}

fn sl_section(n: usize, c: u64) -> Result<Section> {
    let alg = sl_cover(n, c)?;
    let mut s = Section::new(title(Group::Sl, n));
    s.check("char_poly_equals_f", || Ok(alg.char_poly(&alg.x()) == alg.defining_poly().unwrap()));
    s.check("companion_traceless", || Ok(companion_matrix(&alg)?.trace().is_zero()));
    s.check("table_associative", || alg.check_table().map(|_| true));
    s.check("det_gram_unit", || Ok(matrix::det(&beta_pairing(&alg)?.gram()).is_unit()));
    Ok(s)
}

fn classical_section(group: Group, n: usize, c: u64) -> Section {
    let mut s = Section::new(title(group, n));
    let built = match group {
        Group::Sp => symplectic_form(n, c),
        Group::SoOdd => so_odd_form(n, c),
        _ => so_even_form(n, c),
    };
    let cover = match built {
        Ok(cover) => {
            s.check("certified_gram", || Ok(true));
            cover
        }
        Err(e) => {
            s.check("certified_gram", || Err(e));
            return s;
        }
    };
    let alg = &cover.algebra;
    match group {
        Group::Sp => s.check("alternating", || Ok(cover.form.is_alternating())),
        _ => s.check("symmetric", || Ok(cover.form.is_symmetric())),
    }
    s.check("det_gram_unit", || Ok(cover.det_is_unit()));
    s.check("anti_self_adjoint", || Ok(cover.form.verify_derivation_all(&cover.endo())));
    s.check("tau_involutive_algebra_map", || Ok(alg.check_tau()));
    s.check("table_associative", || alg.check_table().map(|_| true));
    match group {
        Group::Sp => {
            s.check("tau_negates_f_prime", || {
                let fp = derivative_element(alg)?;
                Ok(alg.tau(&fp) == Some(fp.neg()))
            });
            if n <= 3 {
                s.check_detail("special_form_unit_multiple", || {
                    let u = sp_equivalence_unit(n, c, VandermondeConvention::Determinant)?;
                    Ok((true, format!("unit {u}")))
                });
                s.check("kernel_generator", || Ok(sp_kernel_generator_check(n, c)?.is_none()));
                s.check("special_map_power_sums", || {
                    SpecialComponentMap::new(&sp_subcover(n, c)?)?.power_sums_match_trace()
                });
            }
        }
        Group::SoEven => {
            s.check("different_via_g", || {
                let two = MultiPoly::from_int(alg.ring(), 2);
                let d = different_so_even(alg, n).element;
                Ok(different_determinant(alg, &so_even_g_derivative(alg, n)) == d.scale(&two))
            });
            s.check("different_two_expressions_literal", || {
                Ok(different_determinant(alg, &so_even_char_poly_derivative(alg, n)) == different_sum_expression(alg, n))
            });
            s.check("pushdown_degenerate_at_zero_pfaffian", || {
                let det = matrix::det(&so_even_pushdown_gram(&cover));
                let zero = vec![alg.ring().scalar(0); n];
                let generic: Vec<Scalar> = (1..=n as i64).map(|v| alg.ring().scalar(v)).collect();
                Ok(det.eval(&zero).is_zero() && !det.eval(&generic).is_zero())
            });
        }
        _ => {}
    }
    s
}

fn g2_section(c: u64) -> Section {
    let mut s = Section::new("g2");
    let solved = G2Cover::new(c).and_then(|cover| {
        let one = cover.ring().scalar(1);
        let table = solve_cross_product(&cover, &Pin::standard(&cover), &one)?;
        Ok((cover, table))
    });
    let (cover, table) = match solved {
        Ok(v) => v,
        Err(e) => {
            s.check("cross product solve", || Err(e));
            return s;
        }
    };
    s.check("x f0 = 0", || Ok(cover.algebra.mul(&cover.algebra.x(), &cover.f0()).is_zero()));
    s.check("one-parameter solution family", || Ok(table.tangent_dim == 1));
    let p = |t: &str| parse_poly(cover.ring(), t).expect("fixed expression");
    s.check("tc(x^6, x^3) = 1", || Ok(table.tc[6][3] == p("1")));
    s.check("tc(x^6, x^4) = 0", || Ok(table.tc[6][4] == p("0")));
    s.check("tc(x^6, x^5) = 5e/2", || Ok(table.tc[6][5] == p("5/2*e")));
    match verify_g2_identities(&table) {
        Ok(report) => {
            for line in report.checks {
                s.check(&line.name, || Ok(line.pass));
            }
        }
        Err(e) => s.check("g2 identities", || Err(e)),
    }
    let rho = table.rho();
    s.check_detail("iota1 rho = e3^e6 + e4^e5 - (3e/2) e5^e6", || {
        let got = iota1(rho.as_ref().map_err(Clone::clone)?);
        let want = vec![((3, 6), p("1")), ((4, 5), p("1")), ((5, 6), p("-3/2*e"))];
        let shown: Vec<String> = got.iter().map(|((a, b), v)| format!("({v}) e{a}^e{b}")).collect();
        Ok((got == want, shown.join(" + ")))
    });
    s.check("pin change negates rho and keeps compatibility", || {
        let opposite = solve_cross_product(&cover, &Pin::opposite(&cover), &cover.ring().scalar(1))?;
        let r = rho.as_ref().map_err(Clone::clone)?;
        let o = opposite.rho()?;
        Ok(o.same_values(&r.neg()) && opposite.is_compatible() && o.is_alternating())
    });
    match G2SpecialForms::new(&cover, VandermondeConvention::Determinant) {
        Ok(sf) => {
            s.check("gluing (omega_A', xz omega_A'') reproduces rho", || {
                let glued = glue_g2_three_form(&cover, &sf.omega_a1.form, &sf.twisted_omega_a2(&sf.xz()))?;
                Ok(glued.same_values(rho.as_ref().map_err(Clone::clone)?))
            });
            s.check("pair (omega_A', omega_A'') rejected", || {
                Ok(matches!(
                    glue_g2_three_form(&cover, &sf.omega_a1.form, &sf.omega_a2.form),
                    Err(Error::IncompatiblePair(_))
                ))
            });
            s.check("omega_A' has a unit coefficient", || Ok(sf.omega_a1.has_unit_coefficient()));
        }
        Err(e) => s.check("special forms", || Err(e)),
    }
    s
}

fn ls(text: &str, p: u64) -> LaurentScalar {
    LaurentScalar::parse(text, p).expect("fixed series")
}

fn random_unimodular_rebase(cols: &[Vec<LaurentScalar>], rng: &mut ChaCha8Rng, p: u64) -> Vec<Vec<LaurentScalar>> {
    let d = cols.len();
    let mut out = cols.to_vec();
    let poly = |rng: &mut ChaCha8Rng, unit: bool| {
        let terms: Vec<(i64, Scalar)> = (0..3)
            .map(|e| {
                let lo = if unit && e == 0 { 1 } else { 0 };
                (e, Scalar::from_i64(rng.gen_range(lo..p as i64), p))
            })
            .collect();
        LaurentScalar::from_terms(terms, None, p)
    };
    for _ in 0..6 {
        let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
        match rng.gen_range(0..3) {
            0 => {
                let u = poly(rng, true);
                out[i] = out[i].iter().map(|c| c.mul(&u)).collect();
            }
            1 => out.swap(i, j),
            _ if i != j => {
                let r = poly(rng, false);
                let add: Vec<LaurentScalar> = out[j].iter().map(|c| c.mul(&r)).collect();
                out[i] = out[i].iter().zip(&add).map(|(a, b)| a.add(b)).collect();
            }
            _ => {}
        }
    }
    out
}

/// Lattice predicates: triviality, box agreement, scaling, basis-change and precision invariance.
pub fn verify_lattice(seed: u64, samples: usize) -> Section {
    let mut s = Section::new("lattice");
    let p = 5;
    s.check("standard_lattice_all_tags", || {
        let cases: [(Group, usize, &[&str]); 6] = [
            (Group::Gl, 2, &["0", "-w^2"]),
            (Group::Sl, 2, &["-w^2"]),
            (Group::Sp, 1, &["-w^2"]),
            (Group::SoOdd, 1, &["-w^2"]),
            (Group::SoEven, 2, &["1 + w", "w"]),
            (Group::G2, 0, &["1", "w"]),
        ];
        for (g, n, a) in cases {
            let spec = SpecAlgebraAt::new(g, n, a.iter().map(|t| ls(t, p)).collect(), p)?;
            if !is_springer_point(&LaurentLattice::standard(spec.rank(), p), &spec)?.accepted {
                return Ok(false);
            }
        }
        Ok(true)
    });
    let gl2 = SpecAlgebraAt::new(Group::Gl, 2, vec![ls("0", p), ls("-w^2", p)], p);
    s.check("box_zero_is_standard", || {
        let e = enumerate_lattices(gl2.as_ref().map_err(Clone::clone)?, 0)?;
        Ok(e.accepted == vec![LaurentLattice::standard(2, p)])
    });
    s.check("gl2_boxes_agree_on_sub_box", || {
        let spec = gl2.as_ref().map_err(Clone::clone)?;
        let small = enumerate_lattices(spec, 1)?.accepted;
        let large = enumerate_lattices(spec, 2)?.accepted;
        Ok(large.into_iter().filter(|l| l.in_box(1)).collect::<Vec<_>>() == small)
    });
    s.check("gl_scaling_shifts_degree", || {
        let spec = gl2.as_ref().map_err(Clone::clone)?;
        for l in enumerate_lattices(spec, 1)?.accepted {
            let sc = l.scaled(1);
            if sc.relative_degree() != l.relative_degree() + 2 || !is_springer_point(&sc, spec)?.accepted {
                return Ok(false);
            }
        }
        Ok(true)
    });
    let so3 = SpecAlgebraAt::new(Group::SoOdd, 1, vec![ls("-w^2", p)], p);
    s.check("dropping_integrality_enlarges_so3", || {
        let spec = so3.as_ref().map_err(Clone::clone)?;
        let full = enumerate_lattices(spec, 1)?.accepted;
        let relaxed = Conditions { integrality: false, ..Conditions::for_group(Group::SoOdd) };
        let loose = enumerate_lattices_with(spec, 1, relaxed, DEFAULT_ENUMERATION_LIMIT)?.accepted;
        Ok(full.iter().all(|l| loose.contains(l)) && loose.len() > full.len())
    });
    s.check("basis_change_invariance", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all = Conditions { stability: false, integrality: false, degree: None };
        let spec = gl2.as_ref().map_err(Clone::clone)?;
        let pool = enumerate_lattices_with(spec, 1, all, DEFAULT_ENUMERATION_LIMIT)?.accepted;
        for _ in 0..samples {
            let l = &pool[rng.gen_range(0..pool.len())];
            let again = LaurentLattice::from_basis(&random_unimodular_rebase(&l.columns(), &mut rng, p))?;
            if &again != l || is_springer_point(&again, spec)? != is_springer_point(l, spec)? {
                return Ok(false);
            }
        }
        Ok(true)
    });
    s.check("precision_soundness", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
        let all = Conditions { stability: false, integrality: false, degree: None };
        let exact = gl2.as_ref().map_err(Clone::clone)?;
        let pool = enumerate_lattices_with(exact, 1, all, DEFAULT_ENUMERATION_LIMIT)?.accepted;
        let truncated: Vec<SpecAlgebraAt> = (3..8)
            .map(|prec| {
                let a = vec![ls("0", p).with_precision(prec), ls("-w^2", p).with_precision(prec)];
                SpecAlgebraAt::new(Group::Gl, 2, a, p)
            })
            .collect::<Result<_>>()?;
        for _ in 0..samples {
            let l = &pool[rng.gen_range(0..pool.len())];
            let truth = is_springer_point(l, exact)?.accepted;
            let mut decided = false;
            for spec in &truncated {
                match is_springer_point(l, spec) {
                    Ok(cert) if cert.accepted != truth => return Ok(false),
                    Ok(_) => decided = true,
                    Err(Error::InsufficientPrecision(_)) if !decided => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(true)
    });
    s
}

fn random_element(alg: &Algebra, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let coords = (0..alg.rank()).map(|_| random_poly(alg.ring(), rng, 2, 2, 3)).collect();
    alg.element(coords)
}

/// Randomized identities, `samples` draws each, reproducible from `seed`.
pub fn verify_properties(seed: u64, samples: usize) -> Section {
    let mut s = Section::new("properties");
    let ring = PolyRing::new(&["a", "b", "c"], &[1, 2, 3], 0).expect("fixed ring");
    let sampled = |name: &str, s: &mut Section, f: &mut dyn FnMut(&mut ChaCha8Rng) -> Result<bool>| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fxhash(name));
        s.check(name, || {
            for _ in 0..samples {
                if !f(&mut rng)? {
                    return Ok(false);
                }
            }
            Ok(true)
        });
    };
    let rp = |r: &Ring, rng: &mut ChaCha8Rng| random_poly(r, rng, 4, 3, 9);
    sampled("ring_axioms", &mut s, &mut |rng| {
        let (f, g, h) = (rp(&ring, rng), rp(&ring, rng), rp(&ring, rng));
        Ok(&(&f * &g) * &h == &f * &(&g * &h) && &f * &(&g + &h) == &(&f * &g) + &(&f * &h) && &f * &g == &g * &f)
    });
    sampled("ratfunc_normalize_idempotent", &mut s, &mut |rng| {
        let den = rp(&ring, rng);
        if den.is_zero() {
            return Ok(true);
        }
        let r = RatFunc::new(&rp(&ring, rng) * &rp(&ring, rng), &den * &rp(&ring, rng))
            .or_else(|_| RatFunc::new(rp(&ring, rng), den.clone()))?;
        let once = r.normalize();
        Ok(once.normalize() == once)
    });
    sampled("grading_additive", &mut s, &mut |rng| {
        let (d1, d2) = (rng.gen_range(0..6), rng.gen_range(0..6));
        let (f, g) = (random_homogeneous(&ring, rng, d1, 5), random_homogeneous(&ring, rng, d2, 5));
        let fg = &f * &g;
        Ok(f.is_zero() || g.is_zero() || (fg.is_homogeneous() && fg.degree() == Some(d1 + d2)))
    });
    let ring7 = ring.with_characteristic(7).expect("prime");
    sampled("char_p_reduction_commutes", &mut s, &mut |rng| {
        let (f, g) = (rp(&ring, rng), rp(&ring, rng));
        let red = |p: &MultiPoly| p.reduce_mod(&ring7).expect("integral coefficients");
        Ok(red(&(&f + &g)) == &red(&f) + &red(&g) && red(&(&f * &g)) == &red(&f) * &red(&g))
    });
    let covers: Vec<Algebra> = [sp_cover(2, 0), blowup_algebra_so_even(2, 0), so_odd_cover(1, 0)]
        .into_iter()
        .collect::<Result<_>>()
        .expect("fixed covers");
    sampled("algebra_commutative_associative", &mut s, &mut |rng| {
        let alg = &covers[rng.gen_range(0..covers.len())];
        let (a, b, c) = (random_element(alg, rng), random_element(alg, rng), random_element(alg, rng));
        Ok(alg.mul(&alg.mul(&a, &b), &c) == alg.mul(&a, &alg.mul(&b, &c)) && alg.mul(&a, &b) == alg.mul(&b, &a))
    });
    sampled("tau_involutive_algebra_map", &mut s, &mut |rng| {
        let alg = &covers[rng.gen_range(0..covers.len())];
        let (a, b) = (random_element(alg, rng), random_element(alg, rng));
        let t = |e: &AlgebraElement| alg.tau(e).expect("tau attached");
        Ok(t(&t(&a)) == a && t(&alg.mul(&a, &b)) == alg.mul(&t(&a), &t(&b)))
    });
    let gl3 = gl_cover(3, 0).expect("fixed cover");
    let beta = beta_generator(&gl3).expect("monogenic");
    sampled("beta_anti_self_adjoint", &mut s, &mut |rng| {
        let (u, v) = (random_element(&gl3, rng), random_element(&gl3, rng));
        let x = gl3.x();
        let sum = &beta.apply(&gl3.mul(&gl3.mul(&x, &u), &v)) + &beta.apply(&gl3.mul(&u, &gl3.mul(&x, &v)));
        Ok(sum.is_zero())
    });
    sampled("beta_self_adjoint", &mut s, &mut |rng| {
        let (u, v) = (random_element(&gl3, rng), random_element(&gl3, rng));
        let x = gl3.x();
        Ok(beta.apply(&gl3.mul(&gl3.mul(&x, &u), &v)) == beta.apply(&gl3.mul(&u, &gl3.mul(&x, &v))))
    });
    let formed: Vec<FormedCover> =
        [symplectic_form(2, 0), so_odd_form(2, 0), so_even_form(2, 0)].into_iter().collect::<Result<_>>().expect("fixed forms");
    sampled("form_anti_self_adjoint", &mut s, &mut |rng| {
        let c = &formed[rng.gen_range(0..formed.len())];
        let alg = &c.algebra;
        let (u, v) = (random_element(alg, rng), random_element(alg, rng));
        let x = alg.x();
        let sum = &c.form.eval_elements(&[&alg.mul(&x, &u), &v]) + &c.form.eval_elements(&[&u, &alg.mul(&x, &v)]);
        Ok(sum.is_zero())
    });
    let g2 = CrossProductTable::solve(0).and_then(|t| Ok((t.rho()?, t)));
    sampled("g2_rho_alternating_and_annihilated", &mut s, &mut |rng| {
        let (rho, table) = g2.as_ref().map_err(Clone::clone)?;
        let alg = &table.cover.algebra;
        let small = |rng: &mut ChaCha8Rng| {
            alg.element((0..alg.rank()).map(|_| MultiPoly::from_int(alg.ring(), rng.gen_range(-3..=3))).collect())
        };
        let (u, v, w) = (small(rng), small(rng), small(rng));
        let x = alg.x();
        let sum = &(&rho.eval_elements(&[&alg.mul(&x, &u), &v, &w]) + &rho.eval_elements(&[&u, &alg.mul(&x, &v), &w]))
            + &rho.eval_elements(&[&u, &v, &alg.mul(&x, &w)]);
        let swapped = &rho.eval_elements(&[&v, &u, &w]) + &rho.eval_elements(&[&u, &v, &w]);
        Ok(sum.is_zero() && swapped.is_zero() && rho.eval_elements(&[&u, &u, &w]).is_zero())
    });
    let special = sp_subcover(2, 0).and_then(|e| SpecialComponentMap::new(&e));
    sampled("special_map_multiplicative", &mut s, &mut |rng| {
        let map = special.as_ref().map_err(Clone::clone)?;
        let part = |rng: &mut ChaCha8Rng| {
            let mut v = vec![rng.gen_range(0..3usize), rng.gen_range(0..3usize)];
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        };
        let (l, m) = (part(rng), part(rng));
        map.is_multiplicative_on(&l, &m)
    });
    s
}

fn fxhash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Sections at the default ranks, then lattice and property checks; order is fixed.
pub fn verify_all(seed: u64, samples: usize) -> Vec<Section> {
    let mut jobs: Vec<(Group, usize)> = Vec::new();
    jobs.extend((1..=6).map(|n| (Group::Gl, n)));
    jobs.extend((2..=6).map(|n| (Group::Sl, n)));
    jobs.extend((1..=3).map(|n| (Group::Sp, n)));
    jobs.extend((1..=3).map(|n| (Group::SoOdd, n)));
    jobs.extend([(Group::SoEven, 2), (Group::SoEven, 3), (Group::G2, 0)]);
    let mut sections: Vec<Section> = jobs
        .par_iter()
        .map(|&(g, n)| {
            verify_group(g, n, 0).unwrap_or_else(|e| {
                let mut s = Section::new(title(g, n));
                s.check("construction", || Err(e));
                s
            })
        })
        .collect();
    let (lattice, properties) = rayon::join(|| verify_lattice(seed, samples), || verify_properties(seed, samples));
    sections.push(lattice);
    sections.push(properties);
    sections
}
