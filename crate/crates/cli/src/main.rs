use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use chevalley::algebra::AlgebraOps;
use chevalley::companion::{beta_pairing, companion_matrix, gl_cover, sl_cover, trace_pairing};
use chevalley::forms::{so_even_form, so_odd_form, symplectic_form};
use chevalley::g2::{solve_cross_product, verify_g2_identities, G2Cover, Pin};
use chevalley::lattice::{enumerate_lattices_with, Conditions, LaurentScalar, SpecAlgebraAt};
use chevalley::polyring::matrix::{self, PolyMatrix};
use chevalley::polyring::parse_poly;
use chevalley::special::{
    glue_g2_three_form, q_divisibility_witness, sp_equivalence_unit, sp_subcover, special_form, G2SpecialForms,
    VandermondeConvention,
};
use chevalley::verify::{self, Section};
use chevalley::{Error, Group};

mod render;

use render::{matrix_json, print_matrix};

#[derive(Parser)]
#[command(name = "chevalley", version, about = "Companion sections of the Chevalley map")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Common {
    /// Characteristic of the base field (0 or a prime).
    #[arg(long = "char", default_value_t = 0, global = true)]
    characteristic: u64,
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Companion matrix with trace and β* Gram matrices.
    Companion {
        #[arg(long, default_value = "gl")]
        group: Group,
        #[arg(long)]
        rank: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Canonical form on the spectral cover of a classical group.
    Gram {
        #[arg(long)]
        group: Group,
        #[arg(long)]
        rank: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Solves for the G2 cross product and reports the resulting three-form.
    G2Solve {
        /// Pinned entries such as `c63=1,c64=0,c65=5e/2`.
        #[arg(long)]
        pin: Option<String>,
        /// Normalization scalar of the cross product.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        #[command(flatten)]
        common: Common,
    },
    /// Special form built from a subcover.
    SpecialForm {
        #[arg(long)]
        group: Group,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Vandermonde sign convention: `det` or `product`.
        #[arg(long, default_value = "det")]
        convention: String,
        #[command(flatten)]
        common: Common,
    },
    /// Glues the G2 special forms into a three-form.
    G2Glue {
        /// Twist applied to the second form: `xz`, `z` or `1`.
        #[arg(long, default_value = "xz")]
        twist: String,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerates lattices in a box at a point of the base over F_p((w)).
    LatticeEnum {
        #[arg(long)]
        group: Group,
        #[arg(long)]
        rank: usize,
        /// Base coordinates separated by `;`, each a series like `1 + 2*w^2`.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long = "box")]
        box_size: i64,
        /// Truncate the coordinates modulo w^P.
        #[arg(long)]
        prec: Option<i64>,
        #[arg(long)]
        field: u64,
        /// Keep only lattices of this degree (default per group).
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i64>,
        #[arg(long)]
        no_integrality: bool,
        #[arg(long, default_value_t = chevalley::lattice::DEFAULT_ENUMERATION_LIMIT)]
        limit: u128,
        #[arg(long)]
        json: bool,
    },
    /// Runs the named identity checks.
    Verify {
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        group: Option<Group>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = verify::DEFAULT_SAMPLES)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(_) | Error::InvalidInput(_) | Error::BadCharacteristic { .. } | Error::CharTooSmall { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Companion { group, rank, common } => cmd_companion(group, rank, common),
        Command::Gram { group, rank, common } => cmd_gram(group, rank, common),
        Command::G2Solve { pin, lambda, common } => cmd_g2(pin.as_deref(), &lambda, common),
        Command::SpecialForm { group, rank, convention, common } => cmd_special(group, rank, &convention, common),
        Command::G2Glue { twist, common } => cmd_glue(&twist, common),
        Command::LatticeEnum { group, rank, a, box_size, prec, field, degree, no_integrality, limit, json } => {
            cmd_lattice(LatticeArgs { group, rank, a, box_size, prec, field, degree, no_integrality, limit, json })
        }
        Command::Verify { group, rank, all, seed, samples, common } => cmd_verify(group, rank, all, seed, samples, common),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn cmd_companion(group: Group, rank: usize, common: Common) -> Outcome {
    verify::validate(group, rank, common.characteristic)?;
    let alg = match group {
        Group::Gl => gl_cover(rank, common.characteristic)?,
        Group::Sl => sl_cover(rank, common.characteristic)?,
        _ => return Err(Failure::Usage(format!("companion supports gl and sl, not {group}"))),
    };
    let x = companion_matrix(&alg)?.matrix;
    let xi = trace_pairing(&alg).gram();
    let beta = beta_pairing(&alg)?.gram();
    let f = alg.defining_poly().expect("monogenic cover");
    if common.json {
        emit(&json!({
            "group": group.tag(),
            "rank": rank,
            "characteristic": common.characteristic,
            "f": f.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "companion": matrix_json(&x),
            "trace_gram": matrix_json(&xi),
            "beta_gram": matrix_json(&beta),
            "beta_gram_det": matrix::det(&beta).to_string(),
        }));
    } else {
        println!("companion matrix of x:");
        print_matrix(&x);
        println!("\ntrace form tr(b1 b2):");
        print_matrix(&xi);
        println!("\nbeta* form:");
        print_matrix(&beta);
        println!("\ndet(beta* form) = {}", matrix::det(&beta));
    }
    Ok(())
}

fn cmd_gram(group: Group, rank: usize, common: Common) -> Outcome {
    verify::validate(group, rank, common.characteristic)?;
    let cover = match group {
        Group::Sp => symplectic_form(rank, common.characteristic)?,
        Group::SoOdd => so_odd_form(rank, common.characteristic)?,
        Group::SoEven => so_even_form(rank, common.characteristic)?,
        _ => return Err(Failure::Usage(format!("gram supports sp, so-odd and so-even, not {group}"))),
    };
    let gram: PolyMatrix = cover.form.gram();
    if common.json {
        emit(&json!({
            "group": group.tag(),
            "rank": rank,
            "characteristic": common.characteristic,
            "basis": cover.algebra.to_json().basis,
            "gram": matrix_json(&gram),
            "det": cover.det_gram.to_string(),
            "symmetry": cover.form.symmetry(),
        }));
    } else {
        println!("basis: {}", cover.algebra.to_json().basis.join(", "));
        println!("gram matrix:");
        print_matrix(&gram);
        println!("\ndet = {}", cover.det_gram);
    }
    Ok(())
}

fn cmd_g2(pin: Option<&str>, lambda: &str, common: Common) -> Outcome {
    verify::validate(Group::G2, 0, common.characteristic)?;
    let cover = G2Cover::new(common.characteristic)?;
    let pin = match pin {
        Some(text) => Pin::parse(&cover, text)?,
        None => Pin::standard(&cover),
    };
    let lambda = parse_poly(cover.ring(), lambda)?;
    let lambda = match lambda.terms() {
        [] => cover.ring().scalar(0),
        [(m, c)] if m.exps.iter().all(|&e| e == 0) => c.clone(),
        _ => return Err(Failure::Usage("lambda must be a constant".into())),
    };
    let table = solve_cross_product(&cover, &pin, &lambda)?;
    let rho = table.rho()?;
    let report = verify_g2_identities(&table)?;
    if common.json {
        emit(&json!({
            "tc": matrix_json(&table.tc),
            "free_slots": table.free_slots,
            "tangent_dim": table.tangent_dim,
            "c": table.c.iter().map(|row| row.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "rho": rho.to_json(),
            "report": report.checks,
        }));
    } else {
        println!("tc(x^i, x^j):");
        print_matrix(&table.tc);
        println!("\nsolution family dimension: {}", table.tangent_dim);
        println!("\nrho:");
        for (idx, v) in rho.to_json().coefficients {
            println!("  e{}^e{}^e{}: {v}", idx[0], idx[1], idx[2]);
        }
        println!();
        for line in &report.checks {
            println!("{}: {}", line.name, pass_word(line.pass));
        }
    }
    if let Some(bad) = report.checks.iter().find(|c| !c.pass) {
        return Err(Failure::Check(bad.name.clone()));
    }
    Ok(())
}

fn convention(text: &str) -> Result<VandermondeConvention, Failure> {
    match text {
        "det" | "determinant" => Ok(VandermondeConvention::Determinant),
        "product" => Ok(VandermondeConvention::Product),
        other => Err(Failure::Usage(format!("unknown convention `{other}`"))),
    }
}

fn cmd_special(group: Group, rank: usize, conv: &str, common: Common) -> Outcome {
    let conv = convention(conv)?;
    verify::validate(group, rank, common.characteristic)?;
    match group {
        Group::Sp => {
            let emb = sp_subcover(rank, common.characteristic)?;
            let form = special_form(&emb, conv)?;
            let unit = sp_equivalence_unit(rank, common.characteristic, conv)?;
            if common.json {
                emit(&json!({
                    "group": "sp",
                    "rank": rank,
                    "convention": conv,
                    "form": form.form.to_json(),
                    "unit_relative_to_symplectic_form": unit.to_string(),
                }));
            } else {
                for (idx, v) in form.form.to_json().coefficients {
                    println!("  {idx:?}: {v}");
                }
                println!("special form = ({unit}) * symplectic form");
            }
        }
        Group::G2 => {
            let cover = G2Cover::new(common.characteristic)?;
            let sf = G2SpecialForms::new(&cover, conv)?;
            if common.json {
                emit(&json!({
                    "group": "g2",
                    "convention": conv,
                    "omega_a1": sf.omega_a1.form.to_json(),
                    "omega_a2": sf.omega_a2.form.to_json(),
                    "omega_a1_unit_coefficient": sf.omega_a1.has_unit_coefficient(),
                }));
            } else {
                println!("omega_A' (degree 3 subcover):");
                for (idx, v) in sf.omega_a1.form.to_json().coefficients {
                    println!("  {idx:?}: {v}");
                }
                println!("omega_A'' (degree 2 subcover):");
                for (idx, v) in sf.omega_a2.form.to_json().coefficients {
                    println!("  {idx:?}: {v}");
                }
            }
        }
        _ => return Err(Failure::Usage(format!("special-form supports sp and g2, not {group}"))),
    }
    Ok(())
}

fn cmd_glue(twist: &str, common: Common) -> Outcome {
    verify::validate(Group::G2, 0, common.characteristic)?;
    let cover = G2Cover::new(common.characteristic)?;
    let sf = G2SpecialForms::new(&cover, VandermondeConvention::Determinant)?;
    let psi = match twist {
        "xz" => sf.twisted_omega_a2(&sf.xz()),
        "z" => sf.twisted_omega_a2(&sf.z()),
        "1" => sf.omega_a2.form.clone(),
        other => return Err(Failure::Usage(format!("unknown twist `{other}`"))),
    };
    let rho = solve_cross_product(&cover, &Pin::standard(&cover), &cover.ring().scalar(1))?.rho()?;
    match glue_g2_three_form(&cover, &sf.omega_a1.form, &psi) {
        Ok(glued) => {
            let matches = glued.same_values(&rho);
            if common.json {
                let witness = q_divisibility_witness(&cover, &sf.omega_a1.form, &psi).unwrap_or_default();
                let w: Vec<Value> = witness.iter().map(|((i, j), v)| json!({"pair": [i, j], "quotient": v.to_string()})).collect();
                emit(&json!({
                    "twist": twist,
                    "compatible": true,
                    "form": glued.to_json(),
                    "equals_rho": matches,
                    "q_quotients": w,
                }));
            } else {
                for (idx, v) in glued.to_json().coefficients {
                    println!("  e{}^e{}^e{}: {v}", idx[0], idx[1], idx[2]);
                }
                println!("glued form equals rho: {}", pass_word(matches));
            }
            Ok(())
        }
        Err(Error::IncompatiblePair(why)) => {
            if common.json {
                emit(&json!({ "twist": twist, "compatible": false, "reason": why }));
            } else {
                println!("pair rejected: {why}");
            }
            Ok(())
        }
        Err(e) => Err(e.into()),
    }
}

struct LatticeArgs {
    group: Group,
    rank: usize,
    a: String,
    box_size: i64,
    prec: Option<i64>,
    field: u64,
    degree: Option<i64>,
    no_integrality: bool,
    limit: u128,
    json: bool,
}

fn cmd_lattice(args: LatticeArgs) -> Outcome {
    if args.field == 0 {
        return Err(Failure::Usage("--field must be a prime".into()));
    }
    verify::validate(args.group, args.rank, args.field)?;
    if args.box_size < 0 {
        return Err(Failure::Usage("--box must be non-negative".into()));
    }
    let coords: Vec<LaurentScalar> = args
        .a
        .split(';')
        .map(|t| {
            let s = LaurentScalar::parse(t, args.field)?;
            Ok(match args.prec {
                Some(p) => s.with_precision(p),
                None => s,
            })
        })
        .collect::<Result<_, Error>>()?;
    let spec = SpecAlgebraAt::new(args.group, args.rank, coords, args.field)?;
    let mut cond = Conditions::for_group(args.group);
    if args.degree.is_some() {
        cond.degree = args.degree;
    }
    if args.no_integrality {
        cond.integrality = false;
    }
    let result = enumerate_lattices_with(&spec, args.box_size, cond, args.limit)?;
    if args.json {
        emit(&serde_json::to_value(&result).expect("enumeration serializes"));
    } else {
        println!("candidates visited: {}", result.candidates);
        println!("accepted: {}", result.lattices.len());
        for (d, k) in &result.counts_by_degree {
            println!("  degree {d}: {k}");
        }
        for l in &result.lattices {
            println!("degree {} pivots {:?} columns {:?}", l.degree, l.pivots, l.columns);
        }
    }
    Ok(())
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn print_section(s: &Section) {
    println!("[{}]", s.title);
    for c in &s.checks {
        let detail = c.detail.as_deref().map(|d| format!("  ({d})")).unwrap_or_default();
        println!("{}: {}  [{:.1} ms]{detail}", c.name, pass_word(c.pass), c.elapsed.as_secs_f64() * 1e3);
    }
}

fn cmd_verify(group: Option<Group>, rank: Option<usize>, all: bool, seed: u64, samples: usize, common: Common) -> Outcome {
    let sections = if all {
        if common.characteristic != 0 {
            return Err(Failure::Usage("--all runs in characteristic 0".into()));
        }
        verify::verify_all(seed, samples)
    } else {
        let group = group.expect("clap requires --group without --all");
        let rank = match (group, rank) {
            (Group::G2, _) => 0,
            (_, Some(r)) => r,
            (_, None) => return Err(Failure::Usage(format!("--rank is required for {group}"))),
        };
        vec![verify::verify_group(group, rank, common.characteristic)?]
    };
    if common.json {
        let v = if all {
            Value::Object(sections.iter().map(|s| (s.title.clone(), Value::Object(s.to_json_map()))).collect())
        } else {
            Value::Object(sections[0].to_json_map())
        };
        emit(&v);
    } else {
        for s in &sections {
            print_section(s);
        }
    }
    let failing: Vec<String> =
        sections.iter().flat_map(|s| s.failures().into_iter().map(move |c| format!("{} / {}", s.title, c.name))).collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} failing: {}", failing.len(), failing.join("; "))))
    }
}
