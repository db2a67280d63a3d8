use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qtrace_core::central::{closed_form_semigroup, conv_exponential, CentralFunctional};
use qtrace_core::fusion::{self, IrrLabel};
use qtrace_core::rational::{self, Rational};
use qtrace_core::roots::{
    center_group, center_support_check, condition_ii_check, lemma_equiv_check, suq2_psd, RootSystem, TorusAtom,
};
use qtrace_core::suite::{self, Suite, SuiteConfig};
use qtrace_core::tcs::{spot, VerificationRecord};
use qtrace_core::{cache, Caps, Engine, Error, QGFamily};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "qtrace", version, about = "Exact Haar-state moments, fusion rules and tracial central state checks")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Directory for cached Weingarten matrices (also read from QTRACE_CACHE).
    #[arg(long, global = true, env = cache::ENV_VAR)]
    cache_dir: Option<PathBuf>,
    /// Longest word accepted for the orthogonal family.
    #[arg(long, global = true)]
    cap_oplus: Option<usize>,
    #[arg(long, global = true)]
    cap_splus: Option<usize>,
    #[arg(long, global = true)]
    cap_hplus: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FamilyN {
    #[arg(long)]
    family: QGFamily,
    /// Matrix size N of the quantum group.
    #[arg(long = "n-dim", alias = "N")]
    n_dim: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Haar moment of u_{i1 j1} ... u_{in jn}.
    Moment {
        #[command(flatten)]
        fam: FamilyN,
        /// Row indices, comma separated.
        #[arg(long, value_delimiter = ',')]
        rows: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        cols: Vec<u32>,
    },
    /// Gram matrix over the family's partitions of n points.
    Gram {
        #[command(flatten)]
        fam: FamilyN,
        #[arg(long)]
        n: usize,
    },
    /// Inverse of the Gram matrix.
    Weingarten {
        #[command(flatten)]
        fam: FamilyN,
        #[arg(long)]
        n: usize,
    },
    /// Decomposition of u^a (x) u^b.
    Fusion {
        #[arg(long)]
        family: QGFamily,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Character of u^a as a polynomial in the trace variables.
    Charpoly {
        #[arg(long)]
        family: QGFamily,
        #[arg(long)]
        label: String,
        /// Also print the dimension at this N.
        #[arg(long = "n-dim", alias = "N")]
        n_dim: Option<u32>,
    },
    /// Weights of a tracial central state on the Haar state and the counits.
    Decompose {
        #[command(flatten)]
        fam: FamilyN,
        /// phi(chi_1).
        #[arg(long, allow_hyphen_values = true)]
        phi1: String,
        /// phi(chi_2) (orthogonal family).
        #[arg(long, allow_hyphen_values = true)]
        phi2: Option<String>,
        /// phi(chi_0) (hyperoctahedral family).
        #[arg(long, allow_hyphen_values = true)]
        phi0: Option<String>,
    },
    /// Truncated convolution exponential against its closed form.
    Semigroup {
        #[command(flatten)]
        fam: FamilyN,
        /// haar, counit or alt.
        #[arg(long)]
        phi: String,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        label: String,
        #[arg(long, default_value_t = 20)]
        trunc: usize,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Root-system computations.
    Rootsys(RootsysArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// onplus, snplus, hnplus, appendix, rootsys or all.
    suite: Suite,
    /// N values: `6`, `4..9` or `3,5`.
    #[arg(long = "n-dim", alias = "N")]
    n_range: Option<String>,
    /// Root system type for the rootsys suite; repeatable.
    #[arg(long = "type")]
    types: Vec<String>,
    #[arg(long)]
    radius: Option<i64>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Include the n = 8 computations for S+.
    #[arg(long)]
    extended: bool,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Args)]
struct RootsysArgs {
    /// A1..A4, B2..B4, C2..C4, D4 or G2.
    #[arg(long = "type", global = true)]
    kind: Option<String>,
    /// Root system as JSON: {"type": "A2"} or {"cartan": [[2,-1],[-1,2]]}.
    #[arg(long, global = true)]
    system: Option<String>,
    #[command(subcommand)]
    op: RootOp,
}

#[derive(Subcommand)]
enum RootOp {
    /// Order of the Weyl group (and its elements with --json).
    Weyl,
    Dominant {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weight: Vec<i64>,
    },
    Saturated {
        #[arg(long, value_delimiter = ',')]
        omega: Vec<i64>,
    },
    InLattice {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weight: Vec<i64>,
    },
    Center,
    /// Window check that shared saturated sets link exactly the root-lattice cosets.
    Equiv {
        #[arg(long)]
        radius: i64,
    },
    /// Constancy of the measure's integrals on saturated sets.
    ConditionIi {
        /// JSON list of atoms: [{"x": ["1/2"], "p": "1"}].
        #[arg(long)]
        atoms: String,
        #[arg(long, default_value_t = 3)]
        omega_bound: i64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Whether every atom lies on the center.
    CenterSupport {
        #[arg(long)]
        atoms: String,
    },
    /// Positive semidefiniteness of the m x m two-valued Toeplitz matrix.
    Suq2 {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        m: usize,
    },
}

enum Failure {
    Core(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Core(e.into())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn engine(cli: &Cli, extended: bool) -> Engine {
    let mut caps = if extended { Caps::extended() } else { Caps::default() };
    for (family, cap) in [(QGFamily::OPlus, cli.cap_oplus), (QGFamily::SPlus, cli.cap_splus), (QGFamily::HPlus, cli.cap_hplus)] {
        if let Some(c) = cap {
            caps = caps.with(family, c);
        }
    }
    let e = Engine::new(caps);
    match &cli.cache_dir {
        Some(dir) => e.with_cache_dir(dir),
        None => e,
    }
}

fn print_json(v: &Value) -> Outcome {
    println!("{}", serde_json::to_string(v)?);
    Ok(())
}

fn matrix_json(m: &[Vec<Rational>]) -> Value {
    Value::from(m.iter().map(|r| r.iter().map(rational::display).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn print_matrix(labels: &[String], m: &[Vec<Rational>]) {
    let cells: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(rational::display).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    for (label, row) in labels.iter().zip(&cells) {
        let row: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        println!("{label:<16} {}", row.join(" "));
    }
}

fn cmd_matrix(cli: &Cli, fam: &FamilyN, n: usize, inverse: bool) -> Outcome {
    let e = engine(cli, false);
    let ctx = e.context(fam.family, n, fam.n_dim)?;
    let m = if inverse { ctx.weingarten().clone() } else { ctx.gram_rational() };
    let labels: Vec<String> = ctx.partitions.iter().map(|p| p.to_string()).collect();
    if cli.json {
        return print_json(&json!({
            "family": fam.family,
            "N": fam.n_dim,
            "n": n,
            "partitions": labels,
            "matrix": matrix_json(&m),
        }));
    }
    print_matrix(&labels, &m);
    Ok(())
}

fn cmd_fusion(family: QGFamily, a: &str, b: &str) -> Outcome {
    let a = IrrLabel::parse(family, a)?;
    let b = IrrLabel::parse(family, b)?;
    let mut terms: Vec<(IrrLabel, u64)> = fusion::fuse(family, &a, &b)?.into_iter().collect();
    // Largest label first.
    terms.sort_by(|x, y| {
        let key = |l: &IrrLabel| match l {
            IrrLabel::Int(k) => (*k as usize, String::new()),
            IrrLabel::Word(w) => (w.len(), w.to_string()),
        };
        key(&y.0).cmp(&key(&x.0))
    });
    let body: Vec<String> = terms
        .iter()
        .map(|(l, m)| Ok(format!("{}:{m}", serde_json::to_string(&l.to_string())?)))
        .collect::<std::result::Result<_, serde_json::Error>>()?;
    println!("{{{}}}", body.join(","));
    Ok(())
}

fn cmd_decompose(cli: &Cli, fam: &FamilyN, phi1: &str, phi2: Option<&str>, phi0: Option<&str>) -> Outcome {
    let (family, big_n) = (fam.family, fam.n_dim);
    let dim = |a: &IrrLabel| -> qtrace_core::Result<Rational> { Ok(Rational::from_integer(fusion::dim(family, big_n, a)?)) };
    let phi1 = rational::parse(phi1)?;
    let missing = |what: &str| Error::InvalidInput(format!("{family} needs --{what}"));
    let (lambda, mu) = match family {
        QGFamily::OPlus => {
            let phi2 = rational::parse(phi2.ok_or_else(|| missing("phi2"))?)?;
            (&phi1 / dim(&IrrLabel::Int(1))?, &phi2 / dim(&IrrLabel::Int(2))?)
        }
        QGFamily::SPlus => (&phi1 / dim(&IrrLabel::Int(1))?, Rational::from_integer(0.into())),
        QGFamily::HPlus => {
            let phi0 = rational::parse(phi0.ok_or_else(|| missing("phi0"))?)?;
            (&phi1 / dim(&IrrLabel::word("1"))?, &phi0 / dim(&IrrLabel::word("0"))?)
        }
    };
    let dec = spot::decompose(family, big_n, &lambda, &mu)?;
    if cli.json {
        return print_json(&serde_json::to_value(&dec)?);
    }
    let keys: Vec<&str> = if family == QGFamily::SPlus { vec!["haar", "counit"] } else { vec!["haar", "counit", "alt"] };
    let vals: Vec<String> = keys.iter().map(|k| rational::display(&dec.weight(k))).collect();
    println!("({}) = ({})", keys.join(", "), vals.join(", "));
    if !dec.is_valid() {
        println!("not a state: weights are not a probability vector");
    }
    Ok(())
}

fn cmd_semigroup(cli: &Cli, fam: &FamilyN, phi: &str, t: f64, label: &str, trunc: usize) -> Outcome {
    let (family, big_n) = (fam.family, fam.n_dim);
    let functional = match phi {
        "haar" => CentralFunctional::haar(family, big_n)?,
        "counit" => CentralFunctional::counit(family, big_n)?,
        "alt" => CentralFunctional::alt(family, big_n)?,
        other => return Err(Error::Parse(format!("unknown state {other:?}; use haar, counit or alt")).into()),
    };
    let a = IrrLabel::parse(family, label)?;
    let series = conv_exponential(&functional, t, &a, trunc)?;
    let closed = closed_form_semigroup(&functional, t, &a)?;
    if cli.json {
        return print_json(&json!({
            "family": family, "N": big_n, "phi": phi, "t": t, "label": a.to_string(), "trunc": trunc,
            "series": series, "closed_form": closed, "abs_error": (series - closed).abs(),
        }));
    }
    println!("series      {series:.15}");
    println!("closed form {closed:.15}");
    println!("abs error   {:e}", (series - closed).abs());
    Ok(())
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Outcome {
    let n_values = args.n_range.as_deref().map(suite::parse_n_range).transpose()?;
    let root_types = (!args.types.is_empty()).then(|| {
        args.types
            .iter()
            .map(|t| {
                let default = qtrace_core::roots::checks::DEFAULT_TYPES
                    .iter()
                    .find(|(d, _)| d.eq_ignore_ascii_case(t))
                    .map_or(2, |(_, r)| *r);
                (t.clone(), args.radius.unwrap_or(default))
            })
            .collect()
    });
    let mut cfg = SuiteConfig { n_values, extended: args.extended, jobs: args.jobs, tolerance: args.tolerance, root_types, ..SuiteConfig::default() };
    if args.radius.is_some() && cfg.root_types.is_none() {
        cfg.root_types = Some(
            qtrace_core::roots::checks::DEFAULT_TYPES.iter().map(|(t, _)| (t.to_string(), args.radius.unwrap())).collect(),
        );
    }
    let e = engine(cli, args.extended);
    let records = suite::run(&e, args.suite, &cfg)?;
    let report = serde_json::to_string_pretty(&records)?;
    if let Some(path) = &args.report {
        std::fs::write(path, &report).map_err(Error::from)?;
    }
    if cli.json {
        println!("{report}");
    } else {
        print_table(&records);
    }
    if records.iter().all(VerificationRecord::passed) {
        Ok(())
    } else {
        for r in records.iter().filter(|r| !r.passed()) {
            eprintln!("failed: {} N={:?} {:?}", r.claim_id, r.big_n, r.failed_checks());
        }
        Err(Failure::Verification)
    }
}

fn print_table(records: &[VerificationRecord]) {
    for r in records {
        let n = r.big_n.map_or("-".to_string(), |n| n.to_string());
        let inputs: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let verdict = if r.passed() { "pass" } else { "FAIL" };
        println!("{verdict:<5} {:<32} N={n:<3} {}", r.claim_id, inputs.join(" "));
    }
    let passed = records.iter().filter(|r| r.passed()).count();
    println!("{passed}/{} records passed", records.len());
}

fn root_system(args: &RootsysArgs) -> qtrace_core::Result<RootSystem> {
    match (&args.kind, &args.system) {
        (Some(t), None) => RootSystem::parse(t),
        (None, Some(s)) => {
            let v: Value = serde_json::from_str(s)?;
            if let Some(t) = v.get("type").and_then(Value::as_str) {
                RootSystem::parse(t)
            } else if let Some(c) = v.get("cartan") {
                RootSystem::custom(serde_json::from_value(c.clone())?)
            } else {
                Err(Error::Parse("expected {\"type\": ...} or {\"cartan\": ...}".into()))
            }
        }
        _ => Err(Error::InvalidInput("give exactly one of --type or --system".into())),
    }
}

fn check_rank(rs: &RootSystem, w: &[i64]) -> qtrace_core::Result<()> {
    if w.len() != rs.rank() {
        return Err(Error::MismatchedSize(format!("weight of length {} for rank {}", w.len(), rs.rank())));
    }
    Ok(())
}

fn cmd_rootsys(cli: &Cli, args: &RootsysArgs) -> Outcome {
    let rs = root_system(args)?;
    let out = |plain: String, v: Value| -> Outcome {
        if cli.json {
            print_json(&v)
        } else {
            println!("{plain}");
            Ok(())
        }
    };
    match &args.op {
        RootOp::Weyl => {
            let w = rs.weyl_group()?;
            out(w.len().to_string(), json!({"type": rs.kind.to_string(), "order": w.len(), "elements": w}))
        }
        RootOp::Dominant { weight } => {
            check_rank(&rs, weight)?;
            let d = rs.dominant_rep(weight);
            out(format!("{d:?}"), json!(d))
        }
        RootOp::Saturated { omega } => {
            check_rank(&rs, omega)?;
            let s: Vec<_> = rs.saturated_set(omega)?.into_iter().collect();
            out(s.iter().map(|w| format!("{w:?}")).collect::<Vec<_>>().join("\n"), json!(s))
        }
        RootOp::InLattice { weight } => {
            check_rank(&rs, weight)?;
            let b = rs.in_root_lattice(weight);
            out(b.to_string(), json!(b))
        }
        RootOp::Center => {
            let c = center_group(&rs);
            let plain = format!(
                "order {} invariants {:?} points {}",
                c.order,
                c.invariants,
                c.points
                    .iter()
                    .map(|p| format!("({})", p.iter().map(rational::display).collect::<Vec<_>>().join(", ")))
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            out(plain, serde_json::to_value(&c)?)
        }
        RootOp::Equiv { radius } => {
            let rec = lemma_equiv_check(&rs, *radius)?;
            if cli.json {
                print_json(&serde_json::to_value(&rec)?)?;
            } else {
                print_table(std::slice::from_ref(&rec));
            }
            if rec.passed() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        RootOp::ConditionIi { atoms, omega_bound, tolerance } => {
            let atoms: Vec<TorusAtom> = serde_json::from_str(atoms)?;
            let b = condition_ii_check(&rs, &atoms, *omega_bound, *tolerance)?;
            out(b.to_string(), json!(b))
        }
        RootOp::CenterSupport { atoms } => {
            let atoms: Vec<TorusAtom> = serde_json::from_str(atoms)?;
            let b = center_support_check(&rs, &atoms)?;
            out(b.to_string(), json!(b))
        }
        RootOp::Suq2 { .. } => unreachable!("handled before the root system is read"),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Moment { fam, rows, cols } => {
            let v = engine(cli, false).moment(fam.family, fam.n_dim, rows, cols)?;
            if cli.json {
                return print_json(&json!({
                    "family": fam.family, "N": fam.n_dim, "rows": rows, "cols": cols, "value": rational::display(&v),
                }));
            }
            println!("{}", rational::display(&v));
            Ok(())
        }
        Command::Gram { fam, n } => cmd_matrix(cli, fam, *n, false),
        Command::Weingarten { fam, n } => cmd_matrix(cli, fam, *n, true),
        Command::Fusion { family, a, b } => cmd_fusion(*family, a, b),
        Command::Charpoly { family, label, n_dim } => {
            let a = IrrLabel::parse(*family, label)?;
            let p = fusion::char_poly(*family, &a)?;
            let d = n_dim.map(|n| fusion::dim(*family, n, &a)).transpose()?;
            if cli.json {
                return print_json(&json!({
                    "family": family, "label": a.to_string(), "polynomial": p.render(*family),
                    "dim": d.map(|d| d.to_string()),
                }));
            }
            println!("{}", p.render(*family));
            if let Some(d) = d {
                println!("dim {d}");
            }
            Ok(())
        }
        Command::Decompose { fam, phi1, phi2, phi0 } => cmd_decompose(cli, fam, phi1, phi2.as_deref(), phi0.as_deref()),
        Command::Semigroup { fam, phi, t, label, trunc } => cmd_semigroup(cli, fam, phi, *t, label, *trunc),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Rootsys(RootsysArgs { op: RootOp::Suq2 { c, m }, .. }) => {
            let b = suq2_psd(&rational::parse(c)?, *m)?;
            if cli.json {
                print_json(&json!(b))
            } else {
                println!("{b}");
                Ok(())
            }
        }
        Command::Rootsys(args) => cmd_rootsys(cli, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_limit() { EXIT_RESOURCE } else { EXIT_USAGE })
        }
    }
}
