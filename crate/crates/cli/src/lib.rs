//! Command-line front end for the `ncalg` kernel.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
//! parse error, 3 internal invariant violation.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ncalg::centrality::{
    assert_linear_bijection, centrality_scan, derive_univariate, scan_endomorphisms, CentralCandidate, CentralityError,
};
use ncalg::classifier::{
    classify_map, factor_semi_inner, tabulate, verify_category_automorphism, ClassifyError, Verdict, ViolationKind, WordMap,
};
use ncalg::files::{self, FileError, MapFile};
use ncalg::morphisms::{
    commutator_ideal_member, compose, kernel_intersection_probe, kernel_intersection_probe_exhaustive, ProbeOutcome,
};
use ncalg::{Field, Morphism, NcPoly, SemiLinearMap};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ncalg", version, about = "Exact computations in free associative algebras")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// `Q`, `gf<q>` or a prime with --modulus
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// Defining polynomial in `w` for an extension field
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Number of generators for polynomial arguments
    #[arg(long, global = true, default_value_t = 2)]
    arity: usize,
    /// Degree cap for tabulation and random data
    #[arg(long, global = true, default_value_t = 4)]
    degcap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a polynomial in canonical form
    Simplify { poly: String },
    /// Reverse every word
    Mirror { poly: String },
    /// Image in the commutative polynomial ring
    Abelianize { poly: String },
    /// Membership in the commutator ideal
    MemberComm { poly: String },
    /// Apply a morphism or semilinear map file to a polynomial
    Apply { map: PathBuf, poly: String },
    /// Print t∘s for morphism files t and s
    Compose { t: PathBuf, s: PathBuf },
    /// Classify a tabulated map (or a semilinear map, tabulated at --degcap)
    Classify {
        #[arg(long)]
        map: PathBuf,
    },
    /// Semi-inner factorization of a family, one file per arity 1..N
    Factor {
        #[arg(required = true)]
        maps: Vec<PathBuf>,
    },
    /// Derive the univariate form of a central-bijection candidate from its generator images
    Central {
        #[arg(required = true)]
        images: Vec<String>,
    },
    /// Exhaustive central-bijection scan over a finite field
    ScanCentral {
        /// Maximum degree of the univariate candidates
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Degree bound for the surjectivity search (default 2 for max degree ≤ 2, else 1)
        #[arg(long)]
        probe_degree: Option<usize>,
    },
    /// Randomized check that a family of semilinear maps induces a category automorphism
    VerifyCat {
        #[arg(required = true)]
        maps: Vec<PathBuf>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Search for a morphism W(x, y) -> W(t) not killing the polynomial
    ProbeKernel {
        poly: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Image degree bound (default 3)
        #[arg(long, default_value_t = 3)]
        image_degree: usize,
        /// Enumerate all morphisms instead of sampling
        #[arg(long)]
        exhaustive: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simplify { .. } => "simplify",
            Command::Mirror { .. } => "mirror",
            Command::Abelianize { .. } => "abelianize",
            Command::MemberComm { .. } => "member-comm",
            Command::Apply { .. } => "apply",
            Command::Compose { .. } => "compose",
            Command::Classify { .. } => "classify",
            Command::Factor { .. } => "factor",
            Command::Central { .. } => "central",
            Command::ScanCentral { .. } => "scan-central",
            Command::VerifyCat { .. } => "verify-cat",
            Command::ProbeKernel { .. } => "probe-kernel",
        }
    }
}

/// Failure with its exit code; the message is prefixed with the subcommand.
struct Failure {
    code: i32,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.into() }
}

type Outcome = Result<(String, i32), Failure>;

struct Ctx<'a> {
    global: &'a Global,
    root: &'a Path,
}

impl Ctx<'_> {
    fn field(&self) -> Result<Field, Failure> {
        let text = match &self.global.modulus {
            Some(m) => format!("gf {} modulus {m}", self.global.field.trim_start_matches(['g', 'f', 'G', 'F'])),
            None => self.global.field.clone(),
        };
        files::parse_field_text(&text).map_err(|e| usage(format!("--field: {e}")))
    }

    fn poly(&self, text: &str, arg: usize) -> Result<NcPoly, Failure> {
        let field = self.field()?;
        NcPoly::parse(text, &field, self.global.arity).map_err(|e| usage(format!("argument {arg}: {e}")))
    }

    fn read(&self, path: &Path) -> Result<String, Failure> {
        std::fs::read_to_string(self.root.join(path)).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    fn parse_file<T>(&self, path: &Path, parse: impl Fn(&str) -> Result<T, FileError>) -> Result<T, Failure> {
        let text = self.read(path)?;
        parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

/// Runs the CLI with `args` (without the program name), resolving file
/// arguments against `root`.
pub fn run_with_root<I, S>(args: I, root: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("ncalg")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let shown = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{shown}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{shown}");
                EXIT_OK
            };
        }
    };
    let ctx = Ctx { global: &cli.global, root };
    match dispatch(&cli.command, &ctx) {
        Ok((text, code)) => {
            let _ = write!(out, "{text}");
            code
        }
        Err(f) => {
            let _ = writeln!(err, "{}: {}", cli.command.name(), f.msg);
            f.code
        }
    }
}

pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_root(args, Path::new("."), out, err)
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Outcome {
    match cmd {
        Command::Simplify { poly } => Ok((format!("{}\n", ctx.poly(poly, 1)?), EXIT_OK)),
        Command::Mirror { poly } => Ok((format!("{}\n", ctx.poly(poly, 1)?.mirror()), EXIT_OK)),
        Command::Abelianize { poly } => Ok((format!("{}\n", ctx.poly(poly, 1)?.abelianize()), EXIT_OK)),
        Command::MemberComm { poly } => {
            let p = ctx.poly(poly, 1)?;
            if commutator_ideal_member(&p) {
                Ok(("member: true\n".into(), EXIT_OK))
            } else {
                Ok((format!("member: false\nabelianization: {}\n", p.abelianize()), EXIT_NEGATIVE))
            }
        }
        Command::Apply { map, poly } => apply(ctx, map, poly),
        Command::Compose { t, s } => {
            let t = ctx.parse_file(t, files::parse_morphism)?;
            let s = ctx.parse_file(s, files::parse_morphism)?;
            let ts = compose(&t, &s).map_err(|e| usage(e.to_string()))?;
            Ok((files::write_morphism(&ts), EXIT_OK))
        }
        Command::Classify { map } => classify(ctx, map),
        Command::Factor { maps } => factor(ctx, maps),
        Command::Central { images } => central(ctx, images),
        Command::ScanCentral { max_degree, probe_degree } => {
            let field = ctx.field()?;
            if field.order().is_none() {
                return Err(usage(format!("the scan needs a finite field, got {field}")));
            }
            if *max_degree > 4 {
                return Err(usage("--max-degree must be at most 4"));
            }
            let d = probe_degree.unwrap_or(if *max_degree <= 2 { 2 } else { 1 });
            if d > 3 {
                return Err(usage("--probe-degree must be at most 3"));
            }
            let endos = scan_endomorphisms(&field, ctx.global.seed);
            let report = centrality_scan(&field, *max_degree, d, &endos).map_err(|e| usage(e.to_string()))?;
            let code = if report.passed() { EXIT_OK } else { EXIT_INTERNAL };
            Ok((format!("{report}\n"), code))
        }
        Command::VerifyCat { maps, samples } => {
            let family = maps
                .iter()
                .map(|m| ctx.parse_file(m, files::parse_semilinear))
                .collect::<Result<Vec<_>, _>>()?;
            verify_cat(ctx, &family, *samples)
        }
        Command::ProbeKernel { poly, trials, image_degree, exhaustive } => {
            if ctx.global.arity != 2 {
                return Err(usage("the kernel probe works in W(x, y); use --arity 2"));
            }
            let p = ctx.poly(poly, 1)?;
            let outcome = if *exhaustive {
                if *image_degree > 3 {
                    return Err(usage("--image-degree must be at most 3 with --exhaustive"));
                }
                kernel_intersection_probe_exhaustive(&p, *image_degree)
            } else {
                kernel_intersection_probe(&p, *trials, *image_degree, ctx.global.seed)
            }
            .map_err(|e| usage(e.to_string()))?;
            Ok(match outcome {
                ProbeOutcome::AllKilled => ("outcome: all-killed\n".into(), EXIT_OK),
                ProbeOutcome::Witness(s) => {
                    let image = s.apply(&p).expect("witness applies to its polynomial");
                    let mut text = String::from("outcome: witness\n");
                    for (i, img) in s.images().iter().enumerate() {
                        let name = ncalg::VarNames::canonical(2).name(i + 1).to_string();
                        text.push_str(&format!("{name} -> {}\n", img.format_with(&ncalg::VarNames::custom(["t"]))));
                    }
                    text.push_str(&format!("image: {}\n", image.format_with(&ncalg::VarNames::custom(["t"]))));
                    (text, EXIT_NEGATIVE)
                }
            })
        }
    }
}

fn apply(ctx: &Ctx, map: &Path, poly: &str) -> Outcome {
    let text = ctx.read(map)?;
    let located = |e: FileError| usage(format!("{}: {e}", map.display()));
    let is_semilinear = text.lines().any(|l| l.split('#').next().unwrap_or("").trim() == "inverse:");
    let (field, dom) = if is_semilinear {
        let mu = files::parse_semilinear(&text).map_err(located)?;
        (mu.field().clone(), mu.arity())
    } else {
        let m = files::parse_morphism(&text).map_err(located)?;
        (m.field().clone(), m.dom())
    };
    let p = NcPoly::parse(poly, &field, dom).map_err(|e| usage(format!("argument 2: {e}")))?;
    let image = if is_semilinear {
        files::parse_semilinear(&text).map_err(located)?.apply(&p)
    } else {
        files::parse_morphism(&text).map_err(located)?.apply(&p)
    }
    .map_err(|e| usage(e.to_string()))?;
    Ok((format!("{image}\n"), EXIT_OK))
}

fn load_table(ctx: &Ctx, path: &Path) -> Result<WordMap, Failure> {
    match ctx.parse_file(path, files::parse_map_file)? {
        MapFile::Table(t) => Ok(t),
        MapFile::SemiLinear(mu) => Ok(tabulate(&mu, ctx.global.degcap)),
    }
}

fn classify_failure(e: ClassifyError) -> Failure {
    let code = match e {
        ClassifyError::NotUnital(_) | ClassifyError::DegenerateImages => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    };
    Failure { code, msg: e.to_string() }
}

fn classify(ctx: &Ctx, path: &Path) -> Outcome {
    let table = load_table(ctx, path)?;
    let result = classify_map(&table).map_err(classify_failure)?;
    let coeffs = result.coeffs.as_ref().map_or("none".to_string(), |c| c.to_string());
    let mut text = format!("verdict: {} coeffs: {coeffs}\n", result.verdict);
    if let Some(cert) = &result.certificate {
        let names = ncalg::VarNames::canonical(table.arity());
        text.push_str(&format!(
            "certificate: u = {}, v = {}, defect = {}\n",
            cert.u.format_with(&names),
            cert.v.format_with(&names),
            cert.defect
        ));
    }
    let code = if result.verdict == Verdict::Neither { EXIT_NEGATIVE } else { EXIT_OK };
    Ok((text, code))
}

fn factor(ctx: &Ctx, maps: &[PathBuf]) -> Outcome {
    let family = maps.iter().map(|m| load_table(ctx, m)).collect::<Result<Vec<_>, _>>()?;
    let f = factor_semi_inner(&family).map_err(|e| {
        let code = match e {
            ClassifyError::MixedVerdicts(..) | ClassifyError::Unclassifiable { .. } | ClassifyError::NotAffine(_)
            | ClassifyError::NotMultiplicative(_) | ClassifyError::NotUnital(_) | ClassifyError::DegenerateImages => {
                EXIT_NEGATIVE
            }
            _ => EXIT_USAGE,
        };
        Failure { code, msg: e.to_string() }
    })?;
    let code = if f.verified { EXIT_OK } else { EXIT_INTERNAL };
    Ok((files::format_factorization(&f), code))
}

fn central(ctx: &Ctx, images: &[String]) -> Outcome {
    let field = ctx.field()?;
    let n = images.len();
    let polys = images
        .iter()
        .enumerate()
        .map(|(i, s)| NcPoly::parse(s, &field, n).map_err(|e| usage(format!("argument {}: {e}", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    let candidate = CentralCandidate::new(&field, polys).map_err(|e| usage(e.to_string()))?;
    match derive_univariate(&candidate) {
        Ok(r) => {
            let mut text = format!("r: {r}\n");
            match assert_linear_bijection(&r) {
                Ok((a, b)) => {
                    text.push_str(&format!("linear: a = {a}, b = {b}\n"));
                    Ok((text, EXIT_OK))
                }
                Err(CentralityError::NotBijective(reason)) => {
                    text.push_str(&format!("not bijective: {reason}\n"));
                    Ok((text, EXIT_NEGATIVE))
                }
                Err(e) => Err(Failure { code: EXIT_INTERNAL, msg: e.to_string() }),
            }
        }
        Err(CentralityError::NotCentralWitness { endomorphism, generator, defect }) => {
            let names = ncalg::VarNames::canonical(n);
            let text = format!(
                "not central: s = [{}], generator {}, defect = {defect}\n",
                endomorphism.format_images().join(", "),
                names.name(generator)
            );
            Ok((text, EXIT_NEGATIVE))
        }
        Err(e) => Err(usage(e.to_string())),
    }
}

fn verify_cat(ctx: &Ctx, family: &[SemiLinearMap], samples: usize) -> Outcome {
    let report = verify_category_automorphism(family, samples, 2.min(ctx.global.degcap), ctx.global.seed)
        .map_err(|e| usage(e.to_string()))?;
    let mut text = format!(
        "identity checks: {}\nmorphism checks: {}\ncomposition checks: {}\nviolations: {}\n",
        report.identity_checks,
        report.morphism_checks,
        report.composition_checks,
        report.violations.len()
    );
    if let Some(v) = report.violations.first() {
        let kind = match v.kind {
            ViolationKind::IdentityMoved => "identity moved",
            ViolationKind::NotAMorphism => "conjugate is not a morphism",
            ViolationKind::NotFunctorial => "composition not preserved",
        };
        text.push_str(&format!("first violation: {kind} for {}\n", describe_morphism(&v.morphism)));
    }
    let code = if report.passed() { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((text, code))
}

fn describe_morphism(m: &Morphism) -> String {
    format!("W{} -> W{} [{}]", m.dom(), m.cod(), m.format_images().join(", "))
}
