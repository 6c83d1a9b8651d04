//! Subcommands. Exit codes: 0 pass, 1 identity or precondition failure,
//! 2 usage, parse or budget error.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homnambu::arity::{expand_arity_k, expand_arity_unchecked, reduce_arity_seq, reduce_arity_unchecked};
use homnambu::examples::{
    braid_algebra, braid_hom_algebra, braid_twisted_product_only, eigenspace, BraidSpec, PolySpec, PolyVariant,
    TruncPolyAlgebra,
};
use homnambu::homalg::{
    check_morphism, check_multiplicative, check_total_hom_associativity, check_weak_morphism, tuple_count,
    twist_algebra_unchecked, CheckMode, HomAlgebra,
};
use homnambu::nambu::{check_hom_nambu, commutator_algebra_unchecked, commutator_words};
use homnambu::symbolic::{cancellation_census, term_count, verify_cancellation, Verdict};
use homnambu::{Error, FieldSpec, LinMap};
use serde_json::json;

use crate::format::{parse_algebra, parse_matrix, parse_vector, write_algebra};
use crate::report::{CheckJson, RunReport};

/// Largest exhaustive scan run without `--force`.
pub const TUPLE_BUDGET: u64 = 10_000_000;

#[derive(Parser, Debug)]
#[command(name = "homnambu", version, about = "Exact checks and constructions for n-ary Hom-algebras")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify an identity on an algebra file.
    Check(CheckArgs),
    /// Twist by a weak morphism: (A, βμ, βα_1, .., βα_{n-1}).
    Twist {
        #[arg(long)]
        morphism: PathBuf,
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        opts: TransformOpts,
    },
    /// The (2^k(n-1)+1)-ary algebra of a multiplicative one.
    Expand {
        #[arg(long, default_value_t = 1)]
        k: u32,
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        opts: TransformOpts,
    },
    /// Drop the last slots by plugging in fixed elements a_1, a_2, ...
    Reduce {
        #[arg(long = "witness", required = true)]
        witnesses: Vec<PathBuf>,
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        opts: TransformOpts,
    },
    /// The n-commutator algebra N(A).
    Commutator {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        opts: TransformOpts,
    },
    /// List the n-commutator words W_n in recursion order.
    Words {
        #[arg(long)]
        n: usize,
    },
    /// Prove the Hom-Nambu identity for the n-commutator symbolically.
    #[command(alias = "prove-commutator")]
    Prove {
        #[arg(long)]
        n: usize,
        /// Also pair every term with its cancelling partner.
        #[arg(long)]
        census: bool,
    },
    /// Write a bundled example algebra.
    #[command(subcommand)]
    Example(ExampleCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Assoc,
    Mult,
    Nambu,
    Morphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub kind: CheckKind,
    /// The algebra; for `morphism`, source and optional target.
    #[arg(required = true, num_args = 1..=2)]
    pub files: Vec<PathBuf>,
    /// Linear map file, for `morphism`.
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Only require f μ = μ f^{⊗n}.
    #[arg(long)]
    pub weak: bool,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    pub mode: Mode,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Allow exhaustive scans beyond 10^7 tuples.
    #[arg(long)]
    pub force: bool,
}

#[derive(Args, Debug)]
pub struct TransformOpts {
    /// Skip the precondition checks.
    #[arg(long)]
    pub unchecked: bool,
    /// Allow scans and outputs beyond 10^7 tuples.
    #[arg(long)]
    pub force: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    /// (μ, Id)
    Plain,
    /// (αμ, α)
    Twisted,
    /// (αμ, Id)
    ProductOnly,
}

#[derive(Subcommand, Debug)]
pub enum ExampleCmd {
    /// Composition algebra on ⊕ Hom(V_i, V_{i+1}).
    Braid {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, default_value = "Q", value_parser = parse_field)]
        field: FieldSpec,
        /// Draw invertible γ_i from this seed; without it all γ_i = Id.
        #[arg(long)]
        gamma_seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Variant::Twisted)]
        variant: Variant,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Polynomials of degree 1 mod n, truncated above a degree cap.
    Polytrunc {
        #[arg(long, default_value_t = 2)]
        vars: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 30)]
        degree: usize,
        #[arg(long, value_delimiter = ',', default_value = "3,1")]
        m: Vec<u64>,
        #[arg(long, default_value = "Q", value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long)]
        noncommutative: bool,
        #[arg(long, value_enum, default_value_t = Variant::Twisted)]
        variant: Variant,
        /// Allow structure tables beyond 10^7 tuples.
        #[arg(long)]
        force: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// The ζ-eigenspace of X ↦ ζX in X·F_p[X], truncated.
    Eigenspace {
        #[arg(long, default_value_t = 7)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 13)]
        degree: usize,
        #[arg(long, default_value_t = 4)]
        m: u64,
        #[arg(long, value_enum, default_value_t = Variant::Twisted)]
        variant: Variant,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// `Q`, `F7`, `F_7` or `Fp7`.
pub fn parse_field(s: &str) -> Result<FieldSpec, String> {
    if s == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    let digits = s.strip_prefix("Fp").or_else(|| s.strip_prefix("F_")).or_else(|| s.strip_prefix('F'));
    let p: u64 = digits.and_then(|d| d.parse().ok()).ok_or_else(|| format!("unknown field '{s}'; use Q or F<p>"))?;
    FieldSpec::prime(p).map_err(|e| e.to_string())
}

/// Why a command stopped early.
#[derive(Debug)]
pub enum Stop {
    /// Exit 1 with this report.
    Failed(Box<RunReport>),
    /// Exit 2.
    Usage(String),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Usage(e.to_string())
    }
}

type Outcome = Result<RunReport, Stop>;

fn read(path: &Path) -> Result<String, Stop> {
    std::fs::read_to_string(path).map_err(|e| Stop::Usage(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<HomAlgebra, Stop> {
    parse_algebra(&read(path)?).map_err(|e| Stop::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Stop> {
    std::fs::write(path, text).map_err(|e| Stop::Usage(format!("{}: {e}", path.display())))
}

fn guard(dim: usize, m: usize, force: bool) -> Result<(), Stop> {
    if force {
        return Ok(());
    }
    match tuple_count(dim, m) {
        Some(c) if c <= TUPLE_BUDGET => Ok(()),
        _ => Err(Stop::Usage(format!(
            "{dim}^{m} tuples exceed the budget of 10^7; pass --force"
        ))),
    }
}

/// Turns a failed precondition from the library into an exit-1 report.
fn precondition(report: &mut RunReport, labels: &[String], e: Error) -> Stop {
    match e {
        Error::CheckFailed(r) | Error::NotMultiplicative(r) => {
            report.push(CheckJson::new(&r, labels));
            Stop::Failed(Box::new(report.clone()))
        }
        Error::ConditionsFailed { stage, report: r } => {
            report.notes.push(format!("stage {stage} conditions failed"));
            report.push(CheckJson::new(&r, labels));
            Stop::Failed(Box::new(report.clone()))
        }
        Error::UnequalTwists | Error::ArityTooSmall { .. } => {
            report.notes.push(format!("precondition failed: {e}"));
            report.verdict = "fail".into();
            Stop::Failed(Box::new(report.clone()))
        }
        other => Stop::Usage(other.to_string()),
    }
}

fn check(args: &CheckArgs, command: String) -> Outcome {
    let mode = match args.mode {
        Mode::Exhaustive => CheckMode::Exhaustive,
        Mode::Sampled => CheckMode::Sampled { trials: args.trials, seed: args.seed },
    };
    let alg = load_algebra(&args.files[0])?;
    let n = alg.arity();
    if args.kind != CheckKind::Morphism && args.files.len() > 1 {
        return Err(Stop::Usage("only `check morphism` takes a second algebra".into()));
    }
    let statement = match args.kind {
        CheckKind::Assoc => "total Hom-associativity",
        CheckKind::Mult => "multiplicativity",
        CheckKind::Nambu => "n-ary Hom-Nambu identity",
        CheckKind::Morphism if args.weak => "weak morphism",
        CheckKind::Morphism => "morphism",
    };
    let mut report = RunReport::new(command, statement);
    if let CheckMode::Sampled { seed, .. } = mode {
        report.seed = Some(seed);
    }
    let scan_len = match args.kind {
        CheckKind::Assoc | CheckKind::Nambu => 2 * n - 1,
        CheckKind::Mult | CheckKind::Morphism => n,
    };
    if mode == CheckMode::Exhaustive {
        guard(alg.dim(), scan_len, args.force).map_err(|e| match e {
            Stop::Usage(msg) => Stop::Usage(format!("{msg} or use --mode sampled")),
            other => other,
        })?;
    }
    let r = match args.kind {
        CheckKind::Assoc => check_total_hom_associativity(&alg, mode)?,
        CheckKind::Mult => check_multiplicative(&alg, mode)?,
        CheckKind::Nambu => check_hom_nambu(&alg, mode)?,
        CheckKind::Morphism => {
            let map = args.map.as_ref().ok_or_else(|| Stop::Usage("`check morphism` needs --map".into()))?;
            let f = parse_matrix(&read(map)?)?;
            let target = match args.files.get(1) {
                Some(p) => load_algebra(p)?,
                None => alg.clone(),
            };
            if args.weak {
                check_weak_morphism(&f, &alg, &target, mode)?
            } else {
                check_morphism(&f, &alg, &target, mode)?
            }
        }
    };
    report.push(CheckJson::new(&r, alg.labels()));
    Ok(report)
}

fn finish_transform(mut report: RunReport, out: &Path, alg: &HomAlgebra) -> Outcome {
    write(out, &write_algebra(alg))?;
    report.output = Some(out.display().to_string());
    report.details = json!({ "arity": alg.arity(), "dim": alg.dim() });
    Ok(report)
}

fn twist(morphism: &Path, input: &Path, output: &Path, opts: &TransformOpts, command: String) -> Outcome {
    let alg = load_algebra(input)?;
    let beta = parse_matrix(&read(morphism)?)?;
    let mut report = RunReport::new(command, "twist by a weak morphism");
    if !opts.unchecked {
        guard(alg.dim(), alg.arity(), opts.force)?;
        let r = check_weak_morphism(&beta, &alg, &alg, CheckMode::Exhaustive)?;
        report.push(CheckJson::new(&r, alg.labels()));
        if !r.passed() {
            return Err(Stop::Failed(Box::new(report)));
        }
    }
    let twisted = twist_algebra_unchecked(&alg, &beta)?;
    finish_transform(report, output, &twisted)
}

fn expand(k: u32, input: &Path, output: &Path, opts: &TransformOpts, command: String) -> Outcome {
    let alg = load_algebra(input)?;
    let mut report = RunReport::new(command, "higher arity from a multiplicative algebra");
    let new_arity = 1usize
        .checked_shl(k)
        .and_then(|p| p.checked_mul(alg.arity() - 1))
        .and_then(|a| a.checked_add(1))
        .ok_or_else(|| Stop::Usage(format!("k = {k} is too large")))?;
    guard(alg.dim(), new_arity, opts.force)?;
    let result = if opts.unchecked {
        let mut a = alg.clone();
        for _ in 0..k {
            a = expand_arity_unchecked(&a).map_err(|e| precondition(&mut report, alg.labels(), e))?;
        }
        a
    } else {
        let r = check_multiplicative(&alg, CheckMode::Exhaustive)?;
        report.push(CheckJson::new(&r, alg.labels()));
        if !r.passed() {
            return Err(Stop::Failed(Box::new(report)));
        }
        expand_arity_k(&alg, k).map_err(|e| precondition(&mut report, alg.labels(), e))?
    };
    finish_transform(report, output, &result)
}

fn reduce(witnesses: &[PathBuf], input: &Path, output: &Path, opts: &TransformOpts, command: String) -> Outcome {
    let alg = load_algebra(input)?;
    let ws = witnesses.iter().map(|p| Ok(parse_vector(&read(p)?)?)).collect::<Result<Vec<_>, Stop>>()?;
    let mut report = RunReport::new(command, "arity reduction by fixed elements");
    if !opts.unchecked {
        guard(alg.dim(), alg.arity().saturating_sub(1), opts.force)?;
    }
    let reduced = if opts.unchecked { reduce_arity_unchecked(&alg, &ws) } else { reduce_arity_seq(&alg, &ws) }
        .map_err(|e| precondition(&mut report, alg.labels(), e))?;
    if reduced.witness.checked {
        report.notes.push(format!("conditions verified for {} stage(s)", ws.len()));
    }
    if let Some(m) = reduced.multiplicative {
        report.notes.push(format!("output multiplicative: {m}"));
    }
    finish_transform(report, output, &reduced.algebra)
}

fn commutator(input: &Path, output: &Path, opts: &TransformOpts, command: String) -> Outcome {
    let alg = load_algebra(input)?;
    let mut report = RunReport::new(command, "n-commutator algebra");
    if !alg.equal_twists() {
        return Err(precondition(&mut report, alg.labels(), Error::UnequalTwists));
    }
    if !opts.unchecked {
        guard(alg.dim(), 2 * alg.arity() - 1, opts.force)?;
        let r = check_total_hom_associativity(&alg, CheckMode::Exhaustive)?;
        report.push(CheckJson::new(&r, alg.labels()));
        if !r.passed() {
            return Err(Stop::Failed(Box::new(report)));
        }
    }
    let nambu = commutator_algebra_unchecked(&alg)?;
    finish_transform(report, output, nambu.algebra())
}

fn words(n: usize, command: String) -> Outcome {
    if n > 20 {
        return Err(Stop::Usage(format!("W_{n} has 2^{} words; the listing is capped at n = 20", n - 1)));
    }
    let ws = commutator_words(n)?;
    let mut report = RunReport::new(command, "n-commutator words");
    let listed: Vec<String> = ws.iter().map(ToString::to_string).collect();
    report.details = json!({ "n": n, "count": ws.len(), "words": listed });
    Ok(report)
}

fn prove(n: usize, census: bool, command: String) -> Outcome {
    let proof = verify_cancellation(n)?;
    let mut report = RunReport::new(command, "Hom-Nambu identity of the n-commutator");
    let residual: Vec<String> = match &proof.verdict {
        Verdict::Proved => Vec::new(),
        Verdict::Residual(r) => r.iter().map(ToString::to_string).collect(),
    };
    report.verdict = if proof.proved() { "proved".into() } else { "residual".into() };
    let mut details = json!({
        "n": n,
        "terms": proof.terms,
        "expected_terms": term_count(n),
        "normal_forms": proof.normal_forms,
        "verdict": if proof.proved() { "Proved" } else { "Residual" },
        "residual": residual,
    });
    if census && proof.proved() {
        match cancellation_census(n) {
            Ok(c) => {
                let families: serde_json::Map<String, serde_json::Value> =
                    c.family_counts().into_iter().map(|(f, k)| (f.name().to_string(), json!(k))).collect();
                details["census"] = json!({ "pairs": c.pairs.len(), "perfect": true, "families": families });
            }
            Err(Error::MatchingFailed(k)) => {
                details["census"] = json!({ "perfect": false, "unmatched": k });
                report.verdict = "fail".into();
            }
            Err(e) => return Err(e.into()),
        }
    }
    report.details = details;
    if report.verdict == "proved" {
        Ok(report)
    } else {
        Err(Stop::Failed(Box::new(report)))
    }
}

fn product_only(alg: &HomAlgebra, alpha: &LinMap) -> Result<HomAlgebra, Stop> {
    let product = alg.product().postcompose(alpha)?;
    let id = LinMap::identity(alg.field(), alg.dim());
    Ok(HomAlgebra::with_labels(product, vec![id; alg.arity() - 1], alg.labels().to_vec())?)
}

fn example(cmd: &ExampleCmd, command: String) -> Result<(RunReport, String, Option<PathBuf>), Stop> {
    let (alg, out) = match cmd {
        ExampleCmd::Braid { dims, field, gamma_seed, variant, out } => {
            let mut spec = BraidSpec::new(*field, dims.clone())?;
            if let Some(seed) = gamma_seed {
                spec = spec.with_random_gammas(*seed)?;
            }
            let alg = match variant {
                Variant::Plain => braid_algebra(&spec),
                Variant::Twisted => braid_hom_algebra(&spec)?,
                Variant::ProductOnly => braid_twisted_product_only(&spec)?,
            };
            (alg, out)
        }
        ExampleCmd::Polytrunc { vars, n, degree, m, field, noncommutative, variant, force, out } => {
            if m.len() != *vars {
                return Err(Stop::Usage(format!("--m needs {vars} exponents")));
            }
            let spec = PolySpec::new(*field, *vars, *degree, m.clone(), !noncommutative)?;
            let v = match variant {
                Variant::Plain => PolyVariant::Plain,
                Variant::Twisted => PolyVariant::Twisted,
                Variant::ProductOnly => PolyVariant::TwistedProductOnly,
            };
            let dim = spec.basis().len();
            guard(dim, n + 1, *force)?;
            (TruncPolyAlgebra::new(spec, v).to_finite(dim)?, out)
        }
        ExampleCmd::Eigenspace { p, n, degree, m, variant, out } => {
            let e = eigenspace(*p, *n, *degree, *m)?;
            let alg = match variant {
                Variant::Plain => e.associative.clone(),
                Variant::Twisted => twist_algebra_unchecked(&e.associative, &e.alpha)?,
                Variant::ProductOnly => product_only(&e.associative, &e.alpha)?,
            };
            (alg, out)
        }
    };
    let mut report = RunReport::new(command, "example algebra");
    report.details = json!({ "arity": alg.arity(), "dim": alg.dim() });
    Ok((report, write_algebra(&alg), out.clone()))
}

/// Runs one invocation; `args` excludes the program name. Returns the exit
/// code after printing.
pub fn run(args: Vec<String>) -> i32 {
    let start = Instant::now();
    let cli = match Cli::try_parse_from(std::iter::once("homnambu".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let command = args.join(" ");
    let outcome = match &cli.command {
        Command::Check(a) => check(a, command),
        Command::Twist { morphism, input, output, opts } => twist(morphism, input, output, opts, command),
        Command::Expand { k, input, output, opts } => expand(*k, input, output, opts, command),
        Command::Reduce { witnesses, input, output, opts } => reduce(witnesses, input, output, opts, command),
        Command::Commutator { input, output, opts } => commutator(input, output, opts, command),
        Command::Words { n } => words(*n, command),
        Command::Prove { n, census } => prove(*n, *census, command),
        Command::Example(cmd) => match example(cmd, command) {
            Ok((mut report, text, Some(out))) => write(&out, &text).map(|_| {
                report.output = Some(out.display().to_string());
                report
            }),
            Ok((_, text, None)) => {
                emit(&text);
                return 0;
            }
            Err(e) => Err(e),
        },
    };
    let elapsed = start.elapsed().as_millis() as u64;
    let (mut report, code) = match outcome {
        Ok(r) => {
            let code = if r.verdict == "fail" { 1 } else { 0 };
            (r, code)
        }
        Err(Stop::Failed(r)) => (*r, 1),
        Err(Stop::Usage(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    report.wall_time_ms = elapsed;
    let mut text = String::new();
    if cli.json {
        text = report.to_json() + "\n";
    } else if let Command::Words { .. } = cli.command {
        for w in report.details["words"].as_array().into_iter().flatten() {
            text.push_str(w.as_str().unwrap_or_default());
            text.push('\n');
        }
    } else {
        text = report.to_human() + "\n";
        if let Command::Prove { .. } = cli.command {
            text.push_str(&serde_json::to_string_pretty(&report.details).expect("plain data serializes"));
            text.push('\n');
        }
    }
    emit(&text);
    code
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}
