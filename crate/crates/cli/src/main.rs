//! `osl2`: verification suites and single computations from the command line.
//!
//! Exit status: 0 when every checked claim holds, 1 when one is falsified,
//! 2 on usage, parse, precondition or resource errors.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use optimal_sl2::literal::{fp_literal, MatrixLiteral, parse_additive_hom, q_literal, AnyMat, AnySpringer, SpringerLiteral};
use optimal_sl2::orbits::{orbit_table, rep_from_partition};
use optimal_sl2::sl2::{
    build_optimal, gcr_check, generator_images, levi_containment_check, verify_optimal, Sl2Action,
};
use optimal_sl2::springer::{additive_untwist, springer_apply, springer_invert};
use optimal_sl2::suites::{conjugacy_instance, run_suite, tangent_survey, Grid, Suite, BUDGET, DEFAULT_SEED};
use optimal_sl2::tilting::tilt_report;
use optimal_sl2::{Error, Field, Fp, Mat, Partition, Prime, Rational};

#[derive(Parser)]
#[command(name = "osl2", version, about = "Nilpotent orbits, Springer maps and optimal SL2-homomorphisms in GL_n")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    /// Maximum number of candidates any brute-force search may visit.
    #[arg(long, default_value_t = BUDGET, global = true)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite over a parameter grid.
    Verify(VerifyArgs),
    /// Nilpotent orbit invariants for every partition of n over F_p.
    OrbitTable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u32,
    },
    /// Tilting decomposition of the adjoint module of the optimal SL2.
    Tilt {
        #[arg(long)]
        partition: String,
        #[arg(long)]
        p: u32,
    },
    #[command(subcommand)]
    Optimal(OptimalCommand),
    #[command(subcommand)]
    Springer(SpringerCommand),
    /// Exploratory computations without asserted outcome.
    Demo {
        #[arg(value_enum)]
        which: Demo,
        /// Seeded coefficient vectors per size and field.
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
    #[arg(long)]
    n_max: Option<usize>,
    /// Comma separated, e.g. `2,3,5`.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u32>>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand)]
enum OptimalCommand {
    /// Build and verify the optimal homomorphism for X_λ, or for a given nilpotent matrix.
    Build {
        #[arg(long, required_unless_present = "matrix")]
        partition: Option<String>,
        /// A prime or `Q`.
        #[arg(long, default_value = "Q")]
        p: String,
        /// JSON matrix literal; overrides --partition and --p.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Recover seeded radical twists and count all radical conjugators.
    Conjugacy {
        #[arg(long)]
        partition: String,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 5)]
        twists: usize,
    },
    /// Semisimplicity of F_p^n under the image, by exhaustive complement search.
    Gcr {
        #[arg(long)]
        partition: String,
        #[arg(long)]
        p: u32,
    },
}

#[derive(Subcommand)]
enum SpringerCommand {
    /// f_a(u) for a unipotent u.
    Apply {
        /// e.g. `{"p": 5, "a": [1, 2]}` or `{"p": "Q", "a": [1, "1/2"]}`.
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        matrix: String,
    },
    /// f_a^{-1}(X) for a nilpotent X.
    Invert {
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        matrix: String,
    },
    /// Factor an additive homomorphism through a Frobenius twist.
    Untwist {
        /// JSON list of matrix literals, the coefficients of s, s^p, s^{p^2}, ...
        #[arg(long)]
        hom: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    SpringerTangent,
    SerreNote,
}

/// Outcome of one command: rendered output and whether its claims held.
struct Outcome {
    json: Value,
    text: String,
    verified: bool,
    reproduction: Option<String>,
}

impl Outcome {
    fn info(json: Value, text: String) -> Self {
        Outcome {
            json,
            text,
            verified: true,
            reproduction: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
                Format::Text => {
                    print!("{}", out.text);
                    println!("runtime {:.2}s", started.elapsed().as_secs_f64());
                }
            }
            if out.verified {
                ExitCode::SUCCESS
            } else {
                if let Some(line) = out.reproduction {
                    eprintln!("falsified; reproduce with:\n{line}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("osl2: {e}");
            ExitCode::from(2)
        }
    }
}

fn prime(p: u32) -> Result<Prime, Error> {
    Prime::new(p)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Verify(args) => verify(cli, args),
        Command::OrbitTable { n, p } => orbits(*n, prime(*p)?),
        Command::Tilt { partition, p } => {
            let r = tilt_report(&Partition::parse(partition)?, prime(*p)?)?;
            let mut text = format!("adjoint module of {} at p = {}\n", r.partition, r.p);
            text.push_str(&format!("  fixed points: {} (char p), {} (char 0)\n", r.fix_p, r.fix_0));
            match &r.decomposition {
                Some(d) => text.push_str(&format!("  decomposition: {d}\n")),
                None => text.push_str(&format!("  no decomposition: {}\n", r.error.as_deref().unwrap_or(""))),
            }
            text.push_str(&format!("  certified: {}\n", r.certified));
            let verified = r.certified;
            Ok(Outcome {
                json: serde_json::to_value(&r).expect("serializable"),
                text,
                verified,
                reproduction: (!verified).then(|| format!("osl2 tilt --partition {} --p {}", partition, p)),
            })
        }
        Command::Optimal(cmd) => optimal(cli, cmd),
        Command::Springer(cmd) => springer(cmd),
        Command::Demo { which, samples } => demo(cli, *which, *samples),
    }
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Result<Outcome, Error> {
    let suite: Suite = args.suite.parse()?;
    let default = suite.default_grid();
    let grid = Grid {
        n_max: args.n_max.unwrap_or(default.n_max),
        primes: args.primes.clone().unwrap_or(default.primes),
        samples: args.samples.unwrap_or(default.samples),
    };
    let report = run_suite(suite, &grid, cli.seed, cli.budget)?;
    Ok(Outcome {
        json: serde_json::from_str(&report.to_json()).expect("valid json"),
        text: report.to_text(),
        verified: report.ok(),
        reproduction: report.reproduction(),
    })
}

fn orbits(n: usize, p: Prime) -> Result<Outcome, Error> {
    let rows = orbit_table(n, p)?;
    let mut text = format!("nilpotent orbits of gl_{n} over F_{p}\n");
    text.push_str(&format!(
        "  {:<14} {:>5} {:>4} {:>7} {:>6} {:>6} {:>6}  {}\n",
        "partition", "dim c", "max", "order", "X^p=0", "class", "dist", "instability blocks"
    ));
    for r in &rows {
        text.push_str(&format!(
            "  {:<14} {:>5} {:>4} {:>7} {:>6} {:>6} {:>6}  {:?}\n",
            r.partition.to_string(),
            r.dim_c,
            r.max_weight,
            r.unip_order,
            r.x_p_zero,
            r.radical_class,
            r.distinguished,
            r.instability_block_type
        ));
    }
    Ok(Outcome::info(
        json!({"n": n, "p": p.get(), "rows": rows}),
        text,
    ))
}

fn optimal(cli: &Cli, cmd: &OptimalCommand) -> Result<Outcome, Error> {
    match cmd {
        OptimalCommand::Build { partition, p, matrix } => {
            let x = match (matrix, partition) {
                (Some(m), _) => AnyMat::from_json(m)?,
                (None, Some(lam)) => {
                    let lam = Partition::parse(lam)?;
                    if p == "Q" {
                        AnyMat::Q(rep_from_partition::<Rational>(&lam, &()))
                    } else {
                        let q = p.parse::<u32>().map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
                        AnyMat::Fp(rep_from_partition::<Fp>(&lam, &prime(q)?))
                    }
                }
                (None, None) => return Err(Error::Parse("give --partition or --matrix".into())),
            };
            match x {
                AnyMat::Fp(x) => build(&x, fp_literal),
                AnyMat::Q(x) => build(&x, q_literal),
            }
        }
        OptimalCommand::Conjugacy { partition, p, twists } => {
            let lam = Partition::parse(partition)?;
            let p = prime(*p)?;
            let mut records = Vec::new();
            let mut text = format!("radical conjugators for {lam} at p = {p}\n");
            let mut all = true;
            for k in 0..*twists {
                let seed = cli.seed.wrapping_add(k as u64);
                let (ok, witness) = conjugacy_instance(&lam, p, seed, cli.budget)?;
                all &= ok;
                text.push_str(&format!(
                    "  twist {k}: recovered {}, conjugators in radical {}\n",
                    witness["recovered"], witness["conjugators_in_radical"]
                ));
                records.push(json!({
                    "claim": "unique-radical-conjugator",
                    "instance": {"partition": lam.to_string(), "p": p.get(), "seed": seed},
                    "witness": witness,
                    "verified": ok,
                }));
            }
            Ok(Outcome {
                json: json!({"records": records, "verified": all}),
                text,
                verified: all,
                reproduction: (!all).then(|| {
                    format!(
                        "osl2 optimal conjugacy --partition {partition} --p {p} --twists {twists} --seed {} --budget {}",
                        cli.seed, cli.budget
                    )
                }),
            })
        }
        OptimalCommand::Gcr { partition, p } => {
            let lam = Partition::parse(partition)?;
            let p = prime(*p)?;
            let phi = build_optimal(&rep_from_partition::<Fp>(&lam, &p))?;
            let r = gcr_check(&generator_images(&phi), lam.n(), p, cli.budget)?;
            let text = format!(
                "image of the optimal SL2 for {lam} at p = {p}: {} invariant subspaces, semisimple {}\n",
                r.invariant_subspaces, r.semisimple
            );
            Ok(Outcome {
                json: json!({
                    "claim": "optimal-image-semisimple",
                    "instance": {"partition": lam.to_string(), "p": p.get()},
                    "witness": r,
                    "verified": r.semisimple,
                }),
                text,
                verified: r.semisimple,
                reproduction: (!r.semisimple)
                    .then(|| format!("osl2 optimal gcr --partition {partition} --p {p} --budget {}", cli.budget)),
            })
        }
    }
}

fn build<T: Field>(x: &Mat<T>, lit: fn(&Mat<T>) -> MatrixLiteral) -> Result<Outcome, Error> {
    let phi = build_optimal(x)?;
    let report = verify_optimal(&phi);
    let levi = levi_containment_check(phi.hom());
    let triple = phi.d_hom();
    let psi = phi.psi();
    let verified = report.all() && levi;
    let mut text = format!("optimal SL2 for X of type {}\n", phi.partition());
    text.push_str(&format!("  block degrees: {:?}\n", phi.hom().degrees()));
    text.push_str(&format!("  Psi weights: {:?}\n", psi.weights()));
    text.push_str(&format!("  basis:\n{}", indent(&phi.hom().basis().to_string())));
    text.push_str(&format!("  dphi(H):\n{}", indent(&triple.h.to_string())));
    text.push_str(&format!("  dphi(Y):\n{}", indent(&triple.y.to_string())));
    text.push_str(&format!(
        "  differential matches {}, associated {}, max ad weight {}, weights bounded {}, eps compatible {}, in centralizer Levi {}\n",
        report.differential_matches,
        report.associated,
        report.max_ad_weight,
        report.weights_bounded,
        report.eps_compatible,
        levi
    ));
    Ok(Outcome {
        json: json!({
            "claim": "optimal-homomorphism",
            "instance": {"partition": phi.partition().to_string(), "x": lit(x)},
            "witness": {
                "degrees": phi.hom().degrees(),
                "basis": lit(phi.hom().basis()),
                "psi_weights": psi.weights(),
                "h": lit(&triple.h),
                "y": lit(&triple.y),
                "report": report,
                "levi_containment": levi,
            },
            "verified": verified,
        }),
        text,
        verified,
        reproduction: (!verified).then(|| format!("osl2 optimal build --matrix '{}'", json!(lit(x)))),
    })
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("    {l}\n")).collect()
}

fn springer(cmd: &SpringerCommand) -> Result<Outcome, Error> {
    let (coeffs, matrix, invert) = match cmd {
        SpringerCommand::Apply { coeffs, matrix } => (coeffs, matrix, false),
        SpringerCommand::Invert { coeffs, matrix } => (coeffs, matrix, true),
        SpringerCommand::Untwist { hom } => {
            let h = parse_additive_hom(hom)?;
            let (r, h1) = additive_untwist(&h)?;
            let coeffs: Vec<_> = h1.coeffs().iter().map(fp_literal).collect();
            let text = format!(
                "h(s) = h1(s^(p^{r})) with p = {}; h1 has {} coefficients\n",
                h.prime(),
                coeffs.len()
            );
            return Ok(Outcome::info(json!({"r": r, "untwisted": coeffs}), text));
        }
    };
    let lit: SpringerLiteral = serde_json::from_str(coeffs).map_err(|e| Error::Parse(e.to_string()))?;
    let result = match (lit.parse()?, AnyMat::from_json(matrix)?) {
        (AnySpringer::Fp(a), AnyMat::Fp(m)) => {
            AnyMat::Fp(if invert { springer_invert(&a, &m)? } else { springer_apply(&a, &m)? })
        }
        (AnySpringer::Q(a), AnyMat::Q(m)) => {
            AnyMat::Q(if invert { springer_invert(&a, &m)? } else { springer_apply(&a, &m)? })
        }
        _ => return Err(Error::Domain("coefficients and matrix live over different fields".into())),
    };
    let text = match &result {
        AnyMat::Fp(m) => m.to_string(),
        AnyMat::Q(m) => m.to_string(),
    };
    Ok(Outcome::info(json!(result.to_literal()), text))
}

fn demo(cli: &Cli, which: Demo, samples: usize) -> Result<Outcome, Error> {
    let reports = tangent_survey(cli.seed, samples)?;
    let scalar = reports.iter().filter(|r| r.is_scalar).count();
    let mut text = String::new();
    match which {
        Demo::SpringerTangent => {
            text.push_str("tangent map of f_a on C(u) at u = 1 + J_n\n");
            for r in &reports {
                text.push_str(&format!(
                    "  n = {} a = [{}] scalar {} {:?}\n",
                    r.n,
                    r.coeffs.join(", "),
                    r.scalar.as_deref().unwrap_or("-"),
                    r.matrix
                ));
            }
        }
        Demo::SerreNote => {
            text.push_str("is the tangent map of f_a on C(u) at a regular u a scalar multiple of the identity?\n");
            for r in reports.iter().filter(|r| !r.is_scalar) {
                text.push_str(&format!("  not scalar: n = {} a = [{}] {:?}\n", r.n, r.coeffs.join(", "), r.matrix));
            }
        }
    }
    text.push_str(&format!("{scalar} of {} tangent maps are scalar\n", reports.len()));
    Ok(Outcome::info(
        json!({"scalar": scalar, "total": reports.len(), "reports": reports}),
        text,
    ))
}
