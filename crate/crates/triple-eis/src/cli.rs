//! Command-line front end.
//!
//! Every subcommand writes one JSON document to standard output (the
//! `siegel` subcommand prints text unless `--json` is given). Exit codes:
//! `0` on success, `1` when a verification fails or a computation runs out
//! of budget, `2` for usage errors and invalid input.
//!
//! A configuration file of `key = value` lines, given by `--config`,
//! supplies default flags for the chosen subcommand; flags on the command
//! line override it. `TRIPLE_EIS_THREADS` caps the worker threads.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::archimedean::{constant_check, leading_term_check, motivic_gamma, w_coefficient_check, ParityType};
use crate::arith::padic::{is_prime, valuation_big};
use crate::arith::{ArithmeticPoint, PadicNumber};
use crate::error::{Error, Result};
use crate::family::{Family, FamilyConfig, QExpansion};
use crate::local::elliptic::{l_invariant_from_period, weight_two_euler_factor};
use crate::local::tate::relative_agreement;
use crate::local::{
    classify_curves, epsilon_signs, j_of_period, l_invariants, root_numbers_from_local_factors, tate_period,
    trivial_zero_classify, trivial_zero_equations, EllipticCurveData, OrdinaryParameter, TrivialZeroCase,
};
use crate::siegel::{HalfIntegralMatrix, SiegelOptions, SiegelSolver};
use crate::verify::{functional_equation_draws, parse_shape, run_suite, Suite, VerifyOptions};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "TRIPLE_EIS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "triple-eis", version, about = "Exact computations for p-adic triple-product Eisenstein families")]
struct Cli {
    /// File of `key = value` defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Progress messages on standard error (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local Siegel series polynomial F_{B,l}.
    Siegel(SiegelArgs),
    /// Truncated q-expansion of the four-variable family.
    Qexp(QexpArgs),
    /// Specialize a saved q-expansion at an arithmetic point.
    Specialize(SpecializeArgs),
    /// Archimedean coefficients and constants.
    #[command(subcommand)]
    Arch(ArchCommand),
    /// Local factors at a finite prime.
    #[command(subcommand)]
    Local(LocalCommand),
    /// Trivial-zero classification and signs for a triple of curves.
    Trivialzero(TrivialZeroArgs),
    /// Tate period and L-invariant from a j-invariant.
    Tate(TateArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct SiegelArgs {
    /// Entries `b11[,b22[,b33]]` followed by doubled off-diagonal entries:
    /// `b11`, `b11,b22,c12` or `b11,b22,b33,c23,c13,c12`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    matrix: Vec<i64>,
    /// The prime l.
    #[arg(long)]
    prime: u64,
    /// Work budget of the lattice engine.
    #[arg(long, default_value_t = SiegelOptions::default().max_checks)]
    max_terms: u64,
    /// Check the series to the full depth without closed forms.
    #[arg(long)]
    exhaustive: bool,
    /// JSON output.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct QexpArgs {
    /// The odd prime p.
    #[arg(long, default_value_t = 5)]
    p: u64,
    /// Square-free tame level.
    #[arg(long = "N", default_value_t = 1)]
    tame_level: u64,
    /// Twist exponent a modulo p - 1.
    #[arg(long, default_value_t = 0)]
    a: u64,
    /// Exponents of the tame characters.
    #[arg(long, value_delimiter = ',', default_value = "0,0,0")]
    chi: Vec<u64>,
    /// Largest diagonal entry.
    #[arg(long, default_value_t = 10)]
    diag_bound: i64,
    /// Degree caps for X1, X2, X3, T.
    #[arg(long, value_delimiter = ',', default_value = "3,3,3,3")]
    caps: Vec<usize>,
    /// Coefficients are computed modulo p^prec.
    #[arg(long, default_value_t = 8)]
    prec: u32,
    /// Output file (standard output when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpecializeArgs {
    /// q-expansion written by `qexp`.
    #[arg(long = "in")]
    input: PathBuf,
    /// The point `k1,k2,k3,kP`.
    #[arg(long, value_delimiter = ',')]
    point: Vec<i64>,
    /// Also compute the classical coefficients directly and compare.
    #[arg(long)]
    check: bool,
}

#[derive(Subcommand, Debug)]
enum ArchCommand {
    /// Closed-form coefficient w against symbolic extraction.
    Wcoeff {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        l: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        r: i64,
    },
    /// Leading term of the differentiated polynomial.
    CheckLeading {
        #[arg(long = "M")]
        m: u32,
        /// Parity type `l1,l2,l3`.
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<u32>,
    },
    /// The Gamma factor Gamma_C(kP) prod Gamma_C(1 + kP - k_i).
    Gamma {
        #[arg(long, value_delimiter = ',')]
        weights: Vec<i64>,
        #[arg(long = "kP")]
        k_p: i64,
    },
}

#[derive(Subcommand, Debug)]
enum LocalCommand {
    /// Modified Euler factor of a weight-two triple.
    Ep {
        /// Ordinary parameters as rationals.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alphas: Vec<String>,
        #[arg(long)]
        p: u64,
        /// Reduction types, `m` (multiplicative) or `g` (good), e.g. `mgg`.
        #[arg(long, default_value = "ggg")]
        reduction: String,
    },
    /// Functional equation on random draws of one shape.
    Funceq {
        /// Shape such as `uSS` (u: unramified, S: Steinberg).
        #[arg(long)]
        shape: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        p: u64,
    },
}

#[derive(Args, Debug)]
struct TrivialZeroArgs {
    /// JSON array of three curves.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 5)]
    p: u64,
    #[arg(long, default_value_t = 20)]
    prec: u32,
}

#[derive(Args, Debug)]
struct TateArgs {
    #[arg(long)]
    p: u64,
    /// `a/b`, optionally times a power of p: `a/b*p^e`.
    #[arg(long, allow_hyphen_values = true)]
    j: String,
    #[arg(long, default_value_t = 30)]
    prec: u32,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// `all` or a comma-separated list of suites.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 5)]
    p: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
}

/// Settings shared by the computational subcommands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    /// Subcommand name.
    pub subcommand: String,
    /// The odd prime p.
    pub prime: u64,
    /// p-adic precision.
    pub precision: u32,
    /// Series caps.
    pub caps: [usize; 4],
    /// Largest diagonal entry.
    pub diagonal_bound: i64,
    /// Random seed.
    pub seed: u64,
    /// Output file.
    pub output: Option<PathBuf>,
    /// Verbosity level.
    pub verbosity: u8,
}

impl RunConfig {
    /// Checks that `p` is an odd prime, precision is at least 8 and every
    /// cap is positive.
    pub fn validate(&self) -> Result<()> {
        if self.prime < 3 || !is_prime(self.prime) {
            return Err(Error::Domain(format!("p = {} must be an odd prime", self.prime)));
        }
        if self.precision < 8 {
            return Err(Error::Domain(format!("precision {} is below 8", self.precision)));
        }
        if self.caps.contains(&0) {
            return Err(Error::Domain("series caps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Parse(_) | Error::Unsupported(_) => 2,
        Error::Resource(_) | Error::NonStabilization(_) | Error::Internal(_) => 1,
    }
}

/// Sizes the global thread pool from `TRIPLE_EIS_THREADS`.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // a pool that already exists keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs the command line `args` (including the program name), writing the
/// result to `out`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match with_config_defaults(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match dispatch(&cli, out) {
        Ok(ok) => {
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Number of leading tokens (program, subcommand, nested subcommand) before
/// the subcommand's own flags.
fn command_prefix(args: &[OsString]) -> usize {
    let Some(first) = args.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')) else {
        return args.len();
    };
    let sub = first + 1;
    let nested = matches!(args[sub].to_str(), Some("arch" | "local"));
    if nested && sub + 1 < args.len() {
        sub + 2
    } else {
        sub + 1
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", n + 1)))?;
        let value = value.trim().trim_matches('"');
        out.push((key.trim().to_string(), value.to_string()));
    }
    Ok(out)
}

fn with_config_defaults(mut args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(i) = args.iter().position(|a| a == "--config" || a.to_string_lossy().starts_with("--config=")) else {
        return Ok(args);
    };
    let flag = args.remove(i).to_string_lossy().into_owned();
    let path = match flag.strip_prefix("--config=") {
        Some(p) => PathBuf::from(p),
        None if i < args.len() => PathBuf::from(args.remove(i)),
        None => return Err(Error::Parse("--config needs a path".into())),
    };
    let text = fs::read_to_string(&path).map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?;
    let defaults = parse_config(&text)?;
    let at = command_prefix(&args);
    let given = |key: &str| {
        args[at..].iter().any(|a| {
            let a = a.to_string_lossy();
            a.strip_prefix("--").is_some_and(|f| f == key || f.starts_with(&format!("{key}=")))
        })
    };
    let defaults: Vec<(String, String)> = defaults.into_iter().filter(|(k, _)| !given(k)).collect();
    let injected: Vec<OsString> = defaults
        .into_iter()
        .flat_map(|(k, v)| {
            let flag = OsString::from(format!("--{k}"));
            match v.as_str() {
                "true" => vec![flag],
                _ => vec![flag, OsString::from(v)],
            }
        })
        .collect();
    args.splice(at..at, injected);
    Ok(args)
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Error::Internal(e.to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("writing {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))
}

fn fixed<const N: usize, T: Copy>(values: &[T], what: &str) -> Result<[T; N]> {
    values.try_into().map_err(|_| Error::Parse(format!("{what} needs {N} comma-separated values")))
}

/// Parses `a`, `a/b` or either followed by `*p^e`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// A p-adic literal `a/b` or `a/b*p^e`, to relative precision `prec`.
pub fn parse_padic_literal(p: u64, s: &str, prec: u32) -> Result<PadicNumber> {
    let (base, power) = match s.split_once('*') {
        Some((b, e)) => (b, Some(e)),
        None => (s, None),
    };
    let mut value = parse_rational(base)?;
    if let Some(e) = power {
        let (q, exp) = e
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("expected p^e after '*' in {s:?}")))?;
        if q.trim().parse::<u64>().ok() != Some(p) {
            return Err(Error::Parse(format!("the power in {s:?} must be of p = {p}")));
        }
        let exp: i32 = exp.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
        let pp = BigRational::from_integer(BigInt::from(p)).pow(exp);
        value *= pp;
    }
    if value.is_zero() {
        return Err(Error::Domain("zero has no p-adic expansion at finite precision".into()));
    }
    let v = valuation_big(value.numer(), p).unwrap_or(0) as i64 - valuation_big(value.denom(), p).unwrap_or(0) as i64;
    Ok(PadicNumber::from_rational(p, &value, v + prec as i64))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let verbose = cli.verbose;
    match &cli.command {
        Command::Siegel(a) => siegel(a, out),
        Command::Qexp(a) => qexp(a, verbose, out),
        Command::Specialize(a) => specialize(a, out),
        Command::Arch(c) => arch(c, out),
        Command::Local(c) => local(c, out),
        Command::Trivialzero(a) => trivialzero(a, out),
        Command::Tate(a) => tate(a, out),
        Command::Verify(a) => verify(a, verbose, out),
    }
}

fn siegel(a: &SiegelArgs, out: &mut dyn Write) -> Result<bool> {
    let m = &a.matrix;
    let b = match m.len() {
        1 => HalfIntegralMatrix::size1(m[0]),
        3 => HalfIntegralMatrix::size2(m[0], m[1], m[2]),
        6 => HalfIntegralMatrix::size3(m[0], m[1], m[2], m[3], m[4], m[5]),
        n => return Err(Error::Parse(format!("--matrix takes 1, 3 or 6 entries, got {n}"))),
    };
    if !is_prime(a.prime) {
        return Err(Error::Domain(format!("l = {} is not prime", a.prime)));
    }
    let options = if a.exhaustive {
        SiegelOptions { max_checks: a.max_terms, ..SiegelOptions::exhaustive() }
    } else {
        SiegelOptions { max_checks: a.max_terms, ..SiegelOptions::default() }
    };
    let f = SiegelSolver::new(options).polynomial(&b, a.prime)?;
    let coefficients: Vec<String> = f.coefficients.iter().map(|c| c.to_string()).collect();
    if a.json {
        emit(
            out,
            &json!({
                "matrix": b.to_string(),
                "det2b": b.det2b().to_string(),
                "prime": a.prime,
                "coefficients": coefficients,
                "degree": f.degree(),
                "verified_depth": f.verified_depth,
            }),
        )?;
    } else {
        let mut text = String::new();
        for (i, c) in f.coefficients.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let magnitude = c.magnitude().to_string();
            let sign = c.sign() == num_bigint::Sign::Minus;
            match (text.is_empty(), sign) {
                (true, true) => text.push('-'),
                (true, false) => {}
                (false, true) => text.push_str(" - "),
                (false, false) => text.push_str(" + "),
            }
            text.push_str(&match i {
                0 => magnitude,
                1 => format!("{magnitude}*X"),
                _ => format!("{magnitude}*X^{i}"),
            });
        }
        writeln!(out, "F_{{B,{}}}(X) = {text}", a.prime).map_err(|e| Error::Internal(e.to_string()))?;
    }
    Ok(true)
}

fn qexp(a: &QexpArgs, verbose: u8, out: &mut dyn Write) -> Result<bool> {
    let caps = fixed::<4, _>(&a.caps, "--caps")?;
    let chi = fixed::<3, _>(&a.chi, "--chi")?;
    let run = RunConfig {
        subcommand: "qexp".into(),
        prime: a.p,
        precision: a.prec,
        caps,
        diagonal_bound: a.diag_bound,
        seed: 0,
        output: a.out.clone(),
        verbosity: verbose,
    };
    run.validate()?;
    let family = Family::new(FamilyConfig::new(a.p, a.tame_level, a.a, chi, caps, a.prec)?)?;
    let expansion = family.q_expansion(a.diag_bound)?;
    match &a.out {
        Some(path) => {
            let text = serde_json::to_string(&expansion).map_err(|e| Error::Internal(e.to_string()))?;
            write_file(path, &text)?;
            emit(out, &json!({ "out": path.display().to_string(), "diagonals": expansion.coefficients.len() }))?;
        }
        None => emit(out, &expansion)?,
    }
    Ok(true)
}

fn specialize(a: &SpecializeArgs, out: &mut dyn Write) -> Result<bool> {
    let text = read_file(&a.input)?;
    let expansion: QExpansion =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", a.input.display())))?;
    let [k1, k2, k3, kp] = fixed::<4, _>(&a.point, "--point")?;
    let point = ArithmeticPoint::new([k1, k2, k3], kp);
    point.require_balanced_critical()?;
    let values = expansion.specialize(&point)?;
    let mut ok = true;
    let mut direct_values = None;
    if a.check {
        let family = Family::new(expansion.config.clone())?;
        let direct = family.direct_expansion(expansion.diagonal_bound, &point)?;
        ok = values.iter().all(|(d, v)| direct.get(d).is_some_and(|x| v.agrees_with(x, v.absolute_precision())));
        direct_values = Some(direct);
    }
    let entries: Vec<Value> = values
        .iter()
        .map(|(d, v)| {
            let mut e = json!({ "diagonal": d, "value": v });
            if let Some(direct) = &direct_values {
                e["direct"] = json!(direct.get(d));
            }
            e
        })
        .collect();
    emit(out, &json!({ "point": [k1, k2, k3, kp], "coefficients": entries, "consistent": ok }))?;
    Ok(ok)
}

fn arch(c: &ArchCommand, out: &mut dyn Write) -> Result<bool> {
    match c {
        ArchCommand::Wcoeff { k, l, m, r } => {
            let check = w_coefficient_check(*k, *l, *m, *r)?;
            let constant = constant_check(*k, *l, *m, *r)?;
            let ok = check.holds && constant.holds;
            emit(out, &json!({ "coefficient": check, "constant": constant }))?;
            Ok(ok)
        }
        ArchCommand::CheckLeading { m, lambda } => {
            let lambda = ParityType::from_triple(fixed::<3, _>(lambda, "--lambda")?)?;
            let result = leading_term_check(*m, lambda)?;
            let ok = result.holds;
            emit(out, &result)?;
            Ok(ok)
        }
        ArchCommand::Gamma { weights, k_p } => {
            let w = fixed::<3, _>(weights, "--weights")?;
            emit(out, &json!({ "weights": w, "kP": k_p, "gamma": motivic_gamma(w, *k_p)? }))?;
            Ok(true)
        }
    }
}

fn parse_reduction(s: &str) -> Result<[bool; 3]> {
    let flags: Vec<bool> = s
        .chars()
        .map(|c| match c {
            'm' | 'M' => Ok(true),
            'g' | 'G' => Ok(false),
            _ => Err(Error::Parse(format!("reduction {s:?} must use the letters m and g"))),
        })
        .collect::<Result<_>>()?;
    flags.try_into().map_err(|_| Error::Parse(format!("reduction {s:?} must have three letters")))
}

fn local(c: &LocalCommand, out: &mut dyn Write) -> Result<bool> {
    match c {
        LocalCommand::Ep { alphas, p, reduction } => {
            if *p < 3 || !is_prime(*p) {
                return Err(Error::Domain(format!("p = {p} must be an odd prime")));
            }
            let alphas: Vec<BigRational> = alphas.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
            let alphas = fixed::<3, _>(&alphas.iter().collect::<Vec<_>>(), "--alphas")?;
            let mult = parse_reduction(reduction)?;
            let data: [(bool, BigRational); 3] = std::array::from_fn(|i| (mult[i], alphas[i].clone()));
            const PRECISION: i64 = 20;
            let params = data.clone().map(|(m, a)| OrdinaryParameter {
                multiplicative: m,
                alpha: PadicNumber::from_rational(*p, &a, PRECISION),
            });
            let equations = trivial_zero_equations(&params)?;
            let case = trivial_zero_classify(&params)?;
            let (factor, order) = weight_two_euler_factor(*p, &data)?;
            emit(
                out,
                &json!({
                    "p": p,
                    "alphas": alphas.map(|a| a.to_string()),
                    "multiplicative": mult,
                    "euler_factor": factor.to_string(),
                    "central_order": order,
                    "equations": equations,
                    "case": case,
                }),
            )?;
            Ok(true)
        }
        LocalCommand::Funceq { shape, seed, trials, p } => {
            if *p < 3 || !is_prime(*p) {
                return Err(Error::Domain(format!("p = {p} must be an odd prime")));
            }
            let flags = parse_shape(shape)?;
            let (passed, failures) = functional_equation_draws(*p, flags, *seed, *trials);
            let ok = failures.is_empty() && passed == *trials as u64;
            emit(
                out,
                &json!({ "shape": shape, "p": p, "seed": seed, "trials": trials, "passed": passed, "failures": failures }),
            )?;
            Ok(ok)
        }
    }
}

fn trivialzero(a: &TrivialZeroArgs, out: &mut dyn Write) -> Result<bool> {
    let text = read_file(&a.data)?;
    let curves: Vec<EllipticCurveData> =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", a.data.display())))?;
    let curves: [EllipticCurveData; 3] =
        curves.try_into().map_err(|_| Error::Parse("the data file must list exactly three curves".into()))?;
    let case = classify_curves(&curves, a.p, a.prec)?;
    let params = [
        curves[0].ordinary_parameter(a.p, a.prec)?,
        curves[1].ordinary_parameter(a.p, a.prec)?,
        curves[2].ordinary_parameter(a.p, a.prec)?,
    ];
    let equations = trivial_zero_equations(&params)?;
    let signs = epsilon_signs(&curves, a.p)?;
    let (global, p_adic) = root_numbers_from_local_factors(&curves, a.p)?;
    let consistent = signs.global == global && signs.p_adic == p_adic;
    let mut report = json!({
        "p": a.p,
        "case": case,
        "equations": equations,
        "expected_order": case.expected_order(),
        "signs": signs,
        "local_root_numbers": { "global": global, "p_adic": p_adic },
        "consistent": consistent,
    });
    if matches!(case, TrivialZeroCase::CaseI | TrivialZeroCase::CaseII { .. }) {
        let periods: Vec<Option<PadicNumber>> = curves
            .iter()
            .map(|c| c.j_invariant.as_ref().map(|j| tate_period(j, a.prec)).transpose())
            .collect::<Result<_>>()?;
        let periods: [Option<PadicNumber>; 3] = periods.try_into().expect("three curves");
        match l_invariants(case, &params, &periods) {
            Ok(inv) => report["l_invariants"] = json!(inv),
            Err(e) => report["l_invariants_unavailable"] = json!(e.to_string()),
        }
    }
    emit(out, &report)?;
    Ok(consistent)
}

fn tate(a: &TateArgs, out: &mut dyn Write) -> Result<bool> {
    let run = RunConfig {
        subcommand: "tate".into(),
        prime: a.p,
        precision: a.prec,
        caps: [1; 4],
        diagonal_bound: 0,
        seed: 0,
        output: None,
        verbosity: 0,
    };
    run.validate()?;
    let j = parse_padic_literal(a.p, &a.j, a.prec)?;
    let q = tate_period(&j, a.prec)?;
    let back = j_of_period(&q, a.prec)?;
    let agreement = relative_agreement(&back, &j);
    let ok = agreement >= a.prec as i64 - 2;
    emit(
        out,
        &json!({
            "p": a.p,
            "j": j,
            "q": q,
            "ord_q": q.valuation(),
            "l_invariant": l_invariant_from_period(&q)?,
            "agreement_digits": agreement,
        }),
    )?;
    Ok(ok)
}

fn verify(a: &VerifyArgs, verbose: u8, out: &mut dyn Write) -> Result<bool> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        a.suite.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?
    };
    let run = RunConfig {
        subcommand: "verify".into(),
        prime: a.p,
        precision: 8,
        caps: [1; 4],
        diagonal_bound: 0,
        seed: a.seed,
        output: None,
        verbosity: verbose,
    };
    run.validate()?;
    let options = VerifyOptions { prime: a.p, seed: a.seed, trials: a.trials };
    let mut reports = Vec::new();
    for suite in suites {
        let report = run_suite(suite, &options);
        if verbose > 0 {
            let status = if report.passed() { "pass" } else { "FAIL" };
            eprintln!("{status} {suite}: {} checks, {} failed, {:.1}s", report.checks, report.failed, report.seconds);
        }
        reports.push(report);
    }
    let ok = reports.iter().all(|r| r.passed());
    let summary: BTreeMap<&str, Value> =
        [("passed", json!(ok)), ("suites", json!(reports)), ("options", json!(options))].into_iter().collect();
    emit(out, &summary)?;
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(args.iter().copied(), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn rational_and_padic_literals() {
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        let j = parse_padic_literal(5, "7*5^-3", 10).unwrap();
        assert_eq!(j.valuation(), -3);
        assert_eq!(j.relative_precision(), 10);
        assert!(parse_padic_literal(5, "7*3^-3", 10).is_err());
        assert_eq!(parse_padic_literal(5, "1/125", 10).unwrap().valuation(), -3);
    }

    #[test]
    fn config_lines() {
        let kv = parse_config("# defaults\np = 7\nprec=12 # comment\n\n").unwrap();
        assert_eq!(kv, vec![("p".into(), "7".into()), ("prec".into(), "12".into())]);
        assert!(parse_config("novalue").is_err());
    }

    #[test]
    fn prefix_detection() {
        let args = |v: &[&str]| v.iter().map(OsString::from).collect::<Vec<_>>();
        assert_eq!(command_prefix(&args(&["bin", "tate", "--p", "5"])), 2);
        assert_eq!(command_prefix(&args(&["bin", "-v", "arch", "wcoeff", "--k", "4"])), 4);
    }

    #[test]
    fn run_config_validation() {
        let mut c = RunConfig {
            subcommand: "x".into(),
            prime: 5,
            precision: 8,
            caps: [1; 4],
            diagonal_bound: 0,
            seed: 0,
            output: None,
            verbosity: 0,
        };
        assert!(c.validate().is_ok());
        c.precision = 7;
        assert!(c.validate().is_err());
        c.precision = 8;
        c.prime = 9;
        assert!(c.validate().is_err());
        c.prime = 5;
        c.caps[2] = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["triple-eis", "frobnicate"]).0, 2);
        assert_eq!(run_capture(&["triple-eis", "siegel", "--matrix", "1,2", "--prime", "3"]).0, 2);
        assert_eq!(run_capture(&["triple-eis", "arch", "wcoeff", "--k", "6", "--l", "4", "--m", "4", "--r", "3"]).0, 2);
    }

    #[test]
    fn siegel_text_and_json() {
        let (code, text) = run_capture(&["triple-eis", "siegel", "--matrix", "1,1,1,1,1,1", "--prime", "3"]);
        assert_eq!(code, 0);
        assert_eq!(text.trim(), "F_{B,3}(X) = 1");
        let (code, text) = run_capture(&["triple-eis", "siegel", "--matrix", "9", "--prime", "3", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["degree"], 2);
    }

    #[test]
    fn arch_subcommands() {
        let (code, text) = run_capture(&["triple-eis", "arch", "check-leading", "--M", "2", "--lambda", "1,0,1"]);
        assert_eq!(code, 0, "{text}");
        let (code, text) = run_capture(&["triple-eis", "arch", "gamma", "--weights", "2,2,2", "--kP", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["gamma"]["pi_exponent"], "-5");
    }

    #[test]
    fn local_and_tate_subcommands() {
        let (code, text) = run_capture(&["triple-eis", "local", "ep", "--alphas", "1,1,1", "--p", "5", "--reduction", "mmm"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["central_order"], 3);
        assert_eq!(v["case"], "case-i");
        let (code, _) = run_capture(&["triple-eis", "local", "funceq", "--shape", "uSS", "--trials", "5"]);
        assert_eq!(code, 0);
        let (code, text) = run_capture(&["triple-eis", "tate", "--p", "5", "--j", "3/125", "--prec", "20"]);
        assert_eq!(code, 0, "{text}");
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["ord_q"], 3);
    }

    #[test]
    fn malformed_json_exits_two() {
        let dir = std::env::temp_dir().join(format!("triple-eis-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let bad = dir.join("bad.json");
        fs::write(&bad, "{ not json").unwrap();
        let path = bad.to_str().unwrap();
        assert_eq!(run_capture(&["triple-eis", "trivialzero", "--data", path]).0, 2);
        assert_eq!(run_capture(&["triple-eis", "specialize", "--in", path, "--point", "2,2,2,2"]).0, 2);
    }

    #[test]
    fn qexp_specialize_round_trip() {
        let dir = std::env::temp_dir().join(format!("triple-eis-qexp-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let file = dir.join("f.json");
        let path = file.to_str().unwrap();
        let args = ["triple-eis", "qexp", "--p", "5", "--caps", "2,2,2,2", "--diag-bound", "5", "--out", path];
        assert_eq!(run_capture(&args).0, 0);
        let (code, text) = run_capture(&["triple-eis", "specialize", "--in", path, "--point", "4,4,4,6", "--check"]);
        assert_eq!(code, 0, "{text}");
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["consistent"], true);
        assert_eq!(v["coefficients"].as_array().unwrap().len(), 1);
        // unbalanced points are rejected as invalid input
        assert_eq!(run_capture(&["triple-eis", "specialize", "--in", path, "--point", "2,2,8,6"]).0, 2);
    }

    #[test]
    fn trivialzero_from_curve_data() {
        let dir = std::env::temp_dir().join(format!("triple-eis-tz-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let file = dir.join("curves.json");
        fs::write(
            &file,
            r#"[
                {"conductor": 5, "reduction_p": "split-mult", "ap": 1, "a_ell": {"5": 1}},
                {"conductor": 5, "reduction_p": "split-mult", "ap": 1, "a_ell": {"5": 1}},
                {"conductor": 5, "reduction_p": "split-mult", "ap": 1, "a_ell": {"5": 1}}
            ]"#,
        )
        .unwrap();
        let (code, text) = run_capture(&["triple-eis", "trivialzero", "--data", file.to_str().unwrap()]);
        assert_eq!(code, 0, "{text}");
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["consistent"], true);
        assert_eq!(v["case"], "case-i");
    }

    #[test]
    fn config_file_supplies_defaults() {
        let dir = std::env::temp_dir().join(format!("triple-eis-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let cfg = dir.join("run.conf");
        fs::write(&cfg, "p = 5\nprec = 12\n").unwrap();
        let cfg = cfg.to_str().unwrap();
        let (code, text) = run_capture(&["triple-eis", "--config", cfg, "tate", "--j", "1/5"]);
        assert_eq!(code, 0, "{text}");
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["j"]["prec"], 12);
        // flags override the file
        let (_, text) = run_capture(&["triple-eis", "--config", cfg, "tate", "--j", "1/5", "--prec", "9"]);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["j"]["prec"], 9);
    }
}
