//! `superlie`: batch front end. Every command prints one JSON report on stdout.
//! Exit 0 when all checks pass, 1 when a mathematical defect is found, 2 on
//! usage or schema errors.

mod workspace;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use superlie::gns::{
    gns_build, gns_intertwiner, gns_report_json, gns_verify, GNSModel, PDFunction, DEFAULT_TOLERANCE,
};
use superlie::hcpair::{check_bullet_additivity, lambda_exp, lambda_functor, lambda_mul, validate_hcpair, HCPair};
use superlie::io::{
    builtin_rep, tensor_from_doc, vector_from_pairs, HomFormDoc, LambdaPointDoc, MomentDoc, MorphismDoc, PairRef, RepDoc,
    SElementDoc, SkeletonDoc, TermDoc,
};
use superlie::kernel::PivotStrategy;
use superlie::moment::{growth_diagnostic, moment_check, moment_gns, DEFAULT_HALF_DEGREE};
use superlie::superalgebra::check_super_jacobi;
use superlie::superfunctions::{check_equivariance, eval_skeleton, phi_forward_form, phi_forward_poly, phi_inverse_report};
use superlie::uea::{monoid_mul, monoid_star, RewriteStrategy, SElement, Uea};

use workspace::{resolve_path, usage, Failure, Workspace};

#[derive(Parser)]
#[command(name = "superlie", version, about = "Exact Lie superalgebra and Harish-Chandra pair computations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[arg(long, global = true)]
    degree: Option<u32>,
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long = "lambda-size", global = true)]
    lambda_size: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    #[command(subcommand)]
    Pbw(PbwCmd),
    /// Apply the involution to an element.
    Star {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        element: String,
    },
    #[command(subcommand)]
    Hcpair(HcpairCmd),
    #[command(subcommand)]
    Lambda(LambdaCmd),
    #[command(subcommand)]
    Skeleton(SkeletonCmd),
    #[command(subcommand)]
    Phi(PhiCmd),
    #[command(subcommand)]
    Monoid(MonoidCmd),
    #[command(subcommand)]
    Gns(GnsCmd),
    #[command(subcommand)]
    Moment(MomentCmd),
}

#[derive(Subcommand)]
enum AlgebraCmd {
    Jacobi {
        #[arg(long = "in")]
        input: String,
    },
}

#[derive(Subcommand)]
enum PbwCmd {
    Normalize {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "insertion")]
        strategy: String,
    },
}

#[derive(Subcommand)]
enum HcpairCmd {
    Check {
        #[arg(long)]
        pair: String,
    },
}

#[derive(Subcommand)]
enum LambdaCmd {
    Mul {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    Exp {
        #[arg(long)]
        pair: String,
        /// Λ-point document whose `n` is the exponent; `g` is ignored.
        #[arg(long)]
        point: PathBuf,
    },
    Functor {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        morphism: PathBuf,
    },
    Bullet {
        #[arg(long)]
        pair: String,
    },
}

#[derive(Subcommand)]
enum SkeletonCmd {
    Eval {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        skeleton: PathBuf,
        /// `{"lambda_size": n, "terms": [...]}` chart coordinates.
        #[arg(long)]
        point: PathBuf,
    },
}

#[derive(Subcommand)]
enum PhiCmd {
    Forward {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        skeleton: PathBuf,
        /// A single word; without it every monomial up to `--degree` is evaluated.
        #[arg(long)]
        word: Option<String>,
    },
    Inverse {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        homform: PathBuf,
        #[arg(long = "odd-cap")]
        odd_cap: usize,
    },
    Roundtrip {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        skeleton: PathBuf,
    },
}

#[derive(Subcommand)]
enum MonoidCmd {
    Mul {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    Star {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        element: PathBuf,
    },
}

#[derive(Subcommand)]
enum GnsCmd {
    Build {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Intertwine {
        #[arg(long = "in")]
        input: PathBuf,
        /// Second setup; defaults to the first with reversed generators and another pivot order.
        #[arg(long)]
        other: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MomentCmd {
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        algebra: String,
    },
    Gns {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        algebra: String,
    },
    Growth {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "1")]
        d1: String,
        #[arg(long, default_value = "1")]
        d2: String,
    },
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorPointDoc {
    lambda_size: usize,
    #[serde(default)]
    terms: Vec<TermDoc>,
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum RepRef {
    Builtin(String),
    Inline(RepDoc),
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ActingDoc {
    name: String,
    #[serde(default)]
    g: Option<Vec<String>>,
    d: String,
}

/// Input of the `gns` commands.
#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct GnsDoc {
    rep: RepRef,
    vector: Vec<(f64, f64)>,
    generators: Vec<SElementDoc>,
    acting: Vec<ActingDoc>,
    #[serde(default)]
    pivot: Option<String>,
}

struct GnsSetup {
    pair: HCPair,
    u: Uea,
    phi: PDFunction,
    generators: Vec<SElement>,
    acting: Vec<(String, SElement)>,
    pivot: PivotStrategy,
}

fn pivot_of(name: Option<&str>) -> Result<PivotStrategy, Failure> {
    match name.unwrap_or("largest_diagonal") {
        "largest_diagonal" => Ok(PivotStrategy::LargestDiagonal),
        "first_nonzero" => Ok(PivotStrategy::FirstNonzero),
        other => Err(usage(format!("unknown pivot strategy {other:?}"))),
    }
}

fn load_gns(ws: &mut Workspace, path: &Path) -> Result<GnsSetup, Failure> {
    let doc: GnsDoc = ws.read_json(path)?;
    let base = path.parent();
    let rep = match &doc.rep {
        RepRef::Builtin(s) => {
            ws.note_argument("rep", s);
            builtin_rep(s.strip_prefix("builtin:").unwrap_or(s))?
        }
        RepRef::Inline(r) => {
            let pair = ws.pair_ref(&r.pair, base)?;
            r.to_rep(&|_: &PairRef| Ok(pair.clone()))?
        }
    };
    let defects = rep.defects(ws.tolerance);
    if !defects.is_empty() {
        return Err(usage(format!("not a representation: {}", defects.join("; "))));
    }
    let pair = rep.pair().clone();
    let u = Uea::new(pair.spec());
    let v = vector_from_pairs(&doc.vector);
    let phi = PDFunction::matrix_coefficient(&rep, v.clone(), v)?;
    let generators = doc.generators.iter().map(|g| g.to_selement(&pair, &u)).collect::<Result<Vec<_>, _>>()?;
    let acting = doc
        .acting
        .iter()
        .map(|a| Ok((a.name.clone(), SElementDoc { g: a.g.clone(), d: a.d.clone() }.to_selement(&pair, &u)?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(GnsSetup { pair, u, phi, generators, acting, pivot: pivot_of(doc.pivot.as_deref())? })
}

fn build(ws: &Workspace, s: &GnsSetup) -> Result<Result<GNSModel, String>, Failure> {
    match gns_build(&s.phi, &s.pair, &s.u, &s.generators, &s.acting, s.pivot, ws.tolerance) {
        Ok(m) => Ok(Ok(m)),
        Err(e @ (superlie::gns::GnsError::NotPsd { .. } | superlie::gns::GnsError::Leakage { .. })) => Ok(Err(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn strategy_of(name: &str) -> Result<RewriteStrategy, Failure> {
    match name {
        "leftmost" => Ok(RewriteStrategy::Leftmost),
        "rightmost" => Ok(RewriteStrategy::Rightmost),
        "insertion" => Ok(RewriteStrategy::Insertion),
        other => Err(usage(format!("unknown strategy {other:?}"))),
    }
}

fn require_exp(pair: &HCPair) -> Result<(), Failure> {
    if pair.group().kind() != "nilpotent_exp" {
        return Err(usage("exp unavailable for this group model"));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(Value, bool), Failure> {
    let g = cli.global;
    let mut ws = Workspace::new(g.seed, g.tolerance);
    let (name, ok, result): (&str, bool, Value) = match cli.command {
        Command::Algebra(AlgebraCmd::Jacobi { input }) => {
            let spec = ws.algebra(&input, None)?;
            let rep = check_super_jacobi(&spec);
            let violations: Vec<Value> = rep
                .violations
                .iter()
                .map(|v| {
                    json!({
                        "triple": [v.names.0, v.names.1, v.names.2],
                        "defect": v.defect.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            ("algebra jacobi", rep.ok(), json!({ "violations": violations }))
        }
        Command::Pbw(PbwCmd::Normalize { algebra, word, strategy }) => {
            let spec = ws.algebra(&algebra, None)?;
            ws.note_argument("word", &word);
            let u = Uea::new(&spec);
            let st = strategy_of(&strategy)?;
            let letters = word.split_whitespace().map(|n| u.index(n)).collect::<Result<Vec<_>, _>>()?;
            let r = u.normalize_word(&letters, superlie::kernel::GaussianRational::one(), st)?;
            ("pbw normalize", true, json!({ "result": u.format(&r), "strategy": strategy }))
        }
        Command::Star { algebra, element } => {
            let spec = ws.algebra(&algebra, None)?;
            ws.note_argument("element", &element);
            let u = Uea::new(&spec);
            let d = u.parse(&element)?;
            let s = u.star(&d)?;
            let back = u.star(&s)?;
            ("star", back == d, json!({ "result": u.format(&s) }))
        }
        Command::Hcpair(HcpairCmd::Check { pair }) => {
            let p = ws.pair(&pair)?;
            let rep = validate_hcpair(&p, g.samples, g.seed);
            ("hcpair check", rep.ok(), serde_json::to_value(&rep)?)
        }
        Command::Lambda(cmd) => match cmd {
            LambdaCmd::Mul { pair, left, right } => {
                let p = ws.pair(&pair)?;
                let a: LambdaPointDoc = ws.read_json(&left)?;
                let b: LambdaPointDoc = ws.read_json(&right)?;
                let r = lambda_mul(&p, &a.to_point(&p)?, &b.to_point(&p)?)?;
                ("lambda mul", true, serde_json::to_value(LambdaPointDoc::from_point(&p, &r))?)
            }
            LambdaCmd::Exp { pair, point } => {
                let p = ws.pair(&pair)?;
                require_exp(&p)?;
                let a: LambdaPointDoc = ws.read_json(&point)?;
                let v = tensor_from_doc(p.spec(), a.lambda_size, &a.n)?;
                let r = lambda_exp(&p, &v)?;
                ("lambda exp", true, serde_json::to_value(LambdaPointDoc::from_point(&p, &r))?)
            }
            LambdaCmd::Functor { pair, point, morphism } => {
                let p = ws.pair(&pair)?;
                let a: LambdaPointDoc = ws.read_json(&point)?;
                let m: MorphismDoc = ws.read_json(&morphism)?;
                let rho = m.to_morphism()?;
                let r = lambda_functor(&rho, &a.to_point(&p)?)?;
                ("lambda functor", true, serde_json::to_value(LambdaPointDoc::from_point(&p, &r))?)
            }
            LambdaCmd::Bullet { pair } => {
                let p = ws.pair(&pair)?;
                let n = g.lambda_size.unwrap_or(4);
                let rep = check_bullet_additivity(&p, n, g.samples, g.seed)?;
                ("lambda bullet", rep.ok(), serde_json::to_value(&rep)?)
            }
        },
        Command::Skeleton(SkeletonCmd::Eval { algebra, skeleton, point }) => {
            let spec = ws.algebra(&algebra, None)?;
            let sd: SkeletonDoc = ws.read_json(&skeleton)?;
            let h = sd.to_skeleton(&spec)?;
            let pd: TensorPointDoc = ws.read_json(&point)?;
            let w = tensor_from_doc(&spec, pd.lambda_size, &pd.terms)?;
            let val = eval_skeleton(&h, &w)?;
            let blades: Vec<Value> = val
                .terms()
                .map(|(m, c)| json!({ "blade": superlie::grassmann::mask_to_indices(m), "coeff": c.to_short() }))
                .collect();
            ("skeleton eval", true, json!({ "value": blades }))
        }
        Command::Phi(cmd) => match cmd {
            PhiCmd::Forward { pair, skeleton, word } => {
                let p = ws.pair(&pair)?;
                require_exp(&p)?;
                let u = Uea::new(p.spec());
                let sd: SkeletonDoc = ws.read_json(&skeleton)?;
                let h = sd.to_skeleton(p.spec())?;
                match word {
                    Some(w) => {
                        ws.note_argument("word", &w);
                        let letters = w.split_whitespace().map(|n| u.index(n)).collect::<Result<Vec<_>, _>>()?;
                        let poly = phi_forward_poly(&h, &p, &letters, 0)?;
                        let names = superlie::superfunctions::chart_names(p.spec().p());
                        ("phi forward", true, json!({ "word": w, "value": poly.to_string_with(&names) }))
                    }
                    None => {
                        let hf = phi_forward_form(&h, &p, g.degree.unwrap_or(3))?;
                        ("phi forward", true, serde_json::to_value(HomFormDoc::from_homform(&u, &hf))?)
                    }
                }
            }
            PhiCmd::Inverse { pair, homform, odd_cap } => {
                let p = ws.pair(&pair)?;
                require_exp(&p)?;
                let u = Uea::new(p.spec());
                let hd: HomFormDoc = ws.read_json(&homform)?;
                let hf = hd.to_homform(&u)?;
                let equivariance = check_equivariance(&u, &p, &hf)?;
                let (h, residual) = phi_inverse_report(&hf, &p, odd_cap)?;
                let ok = residual.is_empty() && equivariance.is_empty();
                (
                    "phi inverse",
                    ok,
                    json!({
                        "skeleton": SkeletonDoc::from_skeleton(p.spec(), &h),
                        "residual": residual,
                        "equivariance_failures": equivariance,
                    }),
                )
            }
            PhiCmd::Roundtrip { pair, skeleton } => {
                let p = ws.pair(&pair)?;
                require_exp(&p)?;
                let sd: SkeletonDoc = ws.read_json(&skeleton)?;
                let h = sd.to_skeleton(p.spec())?;
                let cap = g.degree.unwrap_or(3);
                let hf = phi_forward_form(&h, &p, cap)?;
                let (back, residual) = phi_inverse_report(&hf, &p, h.odd_cap())?;
                let hf2 = phi_forward_form(&back, &p, cap)?;
                let ok = back == h && residual.is_empty() && hf2 == hf;
                ("phi roundtrip", ok, json!({ "skeleton_recovered": back == h, "homform_recovered": hf2 == hf, "residual": residual }))
            }
        },
        Command::Monoid(cmd) => match cmd {
            MonoidCmd::Mul { pair, left, right } => {
                let p = ws.pair(&pair)?;
                let u = Uea::new(p.spec());
                let a: SElementDoc = ws.read_json(&left)?;
                let b: SElementDoc = ws.read_json(&right)?;
                let r = monoid_mul(&p, &u, &a.to_selement(&p, &u)?, &b.to_selement(&p, &u)?)?;
                ("monoid mul", true, serde_json::to_value(SElementDoc::from_selement(&u, &r))?)
            }
            MonoidCmd::Star { pair, element } => {
                let p = ws.pair(&pair)?;
                let u = Uea::new(p.spec());
                let a: SElementDoc = ws.read_json(&element)?;
                let s = a.to_selement(&p, &u)?;
                let r = monoid_star(&p, &u, &s)?;
                let back = monoid_star(&p, &u, &r)?;
                ("monoid star", back == s, serde_json::to_value(SElementDoc::from_selement(&u, &r))?)
            }
        },
        Command::Gns(cmd) => match cmd {
            GnsCmd::Build { input } => {
                let s = load_gns(&mut ws, &input)?;
                match build(&ws, &s)? {
                    Ok(m) => ("gns build", true, gns_report_json(&m, None)),
                    Err(e) => ("gns build", false, json!({ "error": e })),
                }
            }
            GnsCmd::Verify { input } => {
                let s = load_gns(&mut ws, &input)?;
                match build(&ws, &s)? {
                    Ok(m) => {
                        let v = gns_verify(&m, &s.phi, &s.pair, &s.u, g.samples, g.seed)?;
                        ("gns verify", v.ok(), gns_report_json(&m, Some(&v)))
                    }
                    Err(e) => ("gns verify", false, json!({ "error": e })),
                }
            }
            GnsCmd::Intertwine { input, other } => {
                let s1 = load_gns(&mut ws, &input)?;
                let s2 = match other {
                    Some(o) => load_gns(&mut ws, &resolve_path(&o.display().to_string(), None))?,
                    None => {
                        let mut s = load_gns(&mut ws, &input)?;
                        s.generators.reverse();
                        s.pivot = match s.pivot {
                            PivotStrategy::LargestDiagonal => PivotStrategy::FirstNonzero,
                            PivotStrategy::FirstNonzero => PivotStrategy::LargestDiagonal,
                        };
                        s
                    }
                };
                match (build(&ws, &s1)?, build(&ws, &s2)?) {
                    (Ok(m1), Ok(m2)) => match gns_intertwiner(&m1, &m2) {
                        Ok(t) => (
                            "gns intertwine",
                            t.ok(ws.tolerance),
                            json!({ "residual": t.residual, "unitarity": t.unitarity, "cyclic": t.cyclic, "note": t.note }),
                        ),
                        Err(e) => ("gns intertwine", false, json!({ "error": e.to_string() })),
                    },
                    (Err(e), _) | (_, Err(e)) => ("gns intertwine", false, json!({ "error": e })),
                }
            }
        },
        Command::Moment(cmd) => match cmd {
            MomentCmd::Check { input, algebra } => {
                let spec = ws.algebra(&algebra, None)?;
                let u = Uea::new(&spec);
                let md: MomentDoc = ws.read_json(&input)?;
                let lam = md.to_functional(&u)?;
                let rep = moment_check(&lam, &u, g.degree.unwrap_or(DEFAULT_HALF_DEGREE), ws.tolerance)?;
                ("moment check", rep.ok(), serde_json::to_value(&rep)?)
            }
            MomentCmd::Gns { input, algebra } => {
                let spec = ws.algebra(&algebra, None)?;
                let u = Uea::new(&spec);
                let md: MomentDoc = ws.read_json(&input)?;
                let lam = md.to_functional(&u)?;
                match moment_gns(&lam, &u, g.degree.unwrap_or(DEFAULT_HALF_DEGREE), ws.tolerance) {
                    Ok(t) => {
                        let ok = t.bracket_defects.is_empty() && t.symmetry_defects.is_empty();
                        let ops: serde_json::Map<String, Value> = t
                            .operators
                            .iter()
                            .flatten()
                            .map(|(k, m)| {
                                let rows: Vec<Value> = (0..m.nrows())
                                    .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
                                    .collect();
                                (k.clone(), Value::Array(rows))
                            })
                            .collect();
                        (
                            "moment gns",
                            ok,
                            json!({
                                "rank": t.rank,
                                "lower_rank": t.lower_rank,
                                "monomials": t.monomials.len(),
                                "bracket_defects": t.bracket_defects,
                                "symmetry_defects": t.symmetry_defects,
                                "operators": ops,
                            }),
                        )
                    }
                    Err(e @ superlie::moment::MomentError::NotPositive { .. }) => ("moment gns", false, json!({ "error": e.to_string() })),
                    Err(e) => return Err(e.into()),
                }
            }
            MomentCmd::Growth { input, algebra, x, n, d1, d2 } => {
                let spec = ws.algebra(&algebra, None)?;
                let u = Uea::new(&spec);
                let md: MomentDoc = ws.read_json(&input)?;
                let lam = md.to_functional(&u)?;
                ws.note_argument("d1", &d1);
                ws.note_argument("d2", &d2);
                let rep = growth_diagnostic(&lam, &u, &u.parse(&d1)?, &u.parse(&d2)?, u.index(&x)?, n)?;
                ("moment growth", true, serde_json::to_value(&rep)?)
            }
        },
    };
    Ok((ws.report(name, ok, result), ok))
}

/// Writes the report; a closed stdout is not an error worth a panic.
fn emit(report: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((report, ok)) => {
            emit(&report);
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            emit(&json!({ "ok": false, "error": msg }));
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
