//! Batch verification suites.
//!
//! Each suite compares a computation against an independent oracle or an
//! exact identity over a fixed, seeded parameter grid and reports the
//! number of checks together with the failures it found. Independent items
//! run in parallel; results are collected in task order, so reports are
//! deterministic for a given seed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::archimedean::{
    binomial_identity, constant_check, is_balanced, leading_term_check, maass_shimura, omega_star,
    parity_vanishing_holds, r_range, w_coefficient_check, whittaker_value, ParityType,
};
use crate::archimedean::numeric::random_reduction_check;
use crate::arith::point::balanced_critical_points;
use crate::arith::{Field, PadicNumber, QuadraticNumber, Zmod};
use crate::error::{Error, Result};
use crate::family::{enumerate_matrices, Family, FamilyConfig};
use crate::local::elliptic::{l_invariant_from_period, weight_two_euler_factor};
use crate::local::tate::{relative_agreement, synthetic_period};
use crate::local::{
    epsilon_signs, functional_equation_check, j_of_period, q_b_residue, root_numbers_from_local_factors,
    tate_period, triple_epsilon, triple_l, trivial_zero_classify, trivial_zero_equations, EllipticCurveData,
    LocalRepGL2, OrdinaryParameter, RationalFunctionT, Reduction, TrivialZeroCase, WhittakerSection,
};
use crate::siegel::engine::lattice_series;
use crate::siegel::oracle::{enumeration_size, siegel_series_oracle};
use crate::siegel::{HalfIntegralMatrix, SiegelOptions, SiegelSolver};

/// Failures kept verbatim in a report; further failures are only counted.
const MAX_RECORDED_FAILURES: usize = 20;

/// The verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Siegel polynomials against the brute-force character sums.
    Siegel,
    /// Series specializations of the family against direct coefficients.
    Interpolation,
    /// Archimedean identities: binomial sums, coefficients, leading terms,
    /// parity, Maass-Shimura and the Gamma reductions.
    Archimedean,
    /// Local functional equation and the Steinberg degeneration table.
    FunctionalEquation,
    /// Degenerate Whittaker values against the character formula.
    Whittaker,
    /// Trivial-zero classification against vanishing orders.
    TrivialZero,
    /// Tate period round trip and L-invariants.
    Tate,
    /// Root numbers from signs against local epsilon factors.
    RootNumber,
}

impl Suite {
    /// Every suite, in report order.
    pub const ALL: [Suite; 8] = [
        Suite::Siegel,
        Suite::Interpolation,
        Suite::Archimedean,
        Suite::FunctionalEquation,
        Suite::Whittaker,
        Suite::TrivialZero,
        Suite::Tate,
        Suite::RootNumber,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Suite::Siegel => "siegel",
            Suite::Interpolation => "interpolation",
            Suite::Archimedean => "archimedean",
            Suite::FunctionalEquation => "funceq",
            Suite::Whittaker => "whittaker",
            Suite::TrivialZero => "trivialzero",
            Suite::Tate => "tate",
            Suite::RootNumber => "rootnumber",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Shared parameters of the suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    /// Prime for the suites that work at a single `p`.
    pub prime: u64,
    /// Seed of every random draw.
    pub seed: u64,
    /// Random draws per representation shape in the functional-equation suite.
    pub trials: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { prime: 5, seed: 7, trials: 100 }
    }
}

/// Outcome of one suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    /// Which suite ran.
    pub suite: Suite,
    /// Number of individual comparisons.
    pub checks: u64,
    /// Number of failed comparisons.
    pub failed: u64,
    /// The first failures, described.
    pub failures: Vec<String>,
    /// Seed used for random draws.
    pub seed: u64,
    /// Wall-clock time; not serialized so reports stay reproducible.
    #[serde(skip)]
    pub seconds: f64,
}

impl SuiteReport {
    /// Whether every check passed (and at least one ran).
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checks > 0
    }
}

/// Running count of checks and failures.
#[derive(Debug, Default)]
struct Tally {
    checks: u64,
    failed: u64,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(describe());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(msg);
        }
    }

    /// Records an error as a failed check.
    fn result<T>(&mut self, r: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.fail(format!("{}: {e}", context()));
                None
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failed += other.failed;
        let room = MAX_RECORDED_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
    }

    fn merge_all(parts: impl IntoIterator<Item = Tally>) -> Tally {
        let mut out = Tally::default();
        for t in parts {
            out.merge(t);
        }
        out
    }
}

/// Runs one suite.
pub fn run_suite(suite: Suite, options: &VerifyOptions) -> SuiteReport {
    let start = Instant::now();
    let tally = match suite {
        Suite::Siegel => siegel_suite(),
        Suite::Interpolation => interpolation_suite(),
        Suite::Archimedean => archimedean_suite(options.seed),
        Suite::FunctionalEquation => functional_equation_suite(options),
        Suite::Whittaker => whittaker_suite(options.prime),
        Suite::TrivialZero => trivial_zero_suite(options.prime, options.seed),
        Suite::Tate => tate_suite(options.prime, options.seed),
        Suite::RootNumber => root_number_suite(options.prime, options.seed),
    };
    SuiteReport {
        suite,
        checks: tally.checks,
        failed: tally.failed,
        failures: tally.failures,
        seed: options.seed,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn qn(x: BigRational) -> QuadraticNumber {
    QuadraticNumber::rational(x)
}

// ---------------------------------------------------------------- Siegel

/// Positive definite matrices of sizes 1 to 3 with `|det 2B| <= 200`.
pub fn siegel_test_matrices() -> Vec<HalfIntegralMatrix> {
    let mut out: Vec<HalfIntegralMatrix> = [1, 2, 3, 4, 5, 8, 9, 12, 25, 27, 49]
        .into_iter()
        .map(HalfIntegralMatrix::size1)
        .collect();
    for (b11, b22, c12) in [(1, 1, 1), (1, 1, 0), (1, 2, 1), (1, 3, 0), (2, 2, 2), (2, 3, 1), (3, 3, 3), (2, 5, 2), (5, 5, 5), (4, 4, 4)] {
        out.push(HalfIntegralMatrix::size2(b11, b22, c12));
    }
    for e in [
        [1, 1, 1, 1, 1, 1],
        [1, 1, 1, 0, 0, 0],
        [1, 1, 3, 1, 0, 1],
        [2, 1, 3, 1, 1, 0],
        [1, 1, 5, 0, 0, 1],
        [2, 2, 2, 1, 1, 1],
        [2, 2, 2, 0, 0, 0],
        [1, 3, 3, 0, 0, 0],
        [1, 1, 9, 0, 0, 0],
        [3, 3, 3, 3, 3, 3],
        [2, 2, 3, 2, 2, 2],
        [1, 2, 3, 1, 1, 1],
        [1, 1, 25, 0, 0, 0],
        [1, 1, 7, 1, 1, 1],
    ] {
        out.push(HalfIntegralMatrix::size3(e[0], e[1], e[2], e[3], e[4], e[5]));
    }
    out.retain(|b| b.is_positive_definite() && b.det2b().abs() <= 200);
    out
}

/// Largest brute-force enumeration used as an oracle for one coefficient.
const ORACLE_TERMS: u64 = 2_000_000;

fn siegel_suite() -> Tally {
    let solver = SiegelSolver::new(SiegelOptions::exhaustive());
    let matrices = siegel_test_matrices();
    let jobs: Vec<(HalfIntegralMatrix, u64)> =
        matrices.iter().flat_map(|b| [2u64, 3, 5, 7].map(|l| (*b, l))).collect();
    let parts: Vec<Tally> = jobs
        .par_iter()
        .map(|(b, l)| {
            let mut t = Tally::default();
            let ctx = || format!("B = {b}, l = {l}");
            if matrices.len() < 25 {
                t.fail(format!("only {} test matrices", matrices.len()));
            }
            let Some(f) = t.result(solver.polynomial(b, *l), ctx) else { return t };
            t.check(f.coefficients.first() == Some(&BigInt::one()), || format!("{}: F(0) != 1", ctx()));
            t.check(f.verified_depth as usize >= f.degree() + 3, || {
                format!("{}: verified depth {} for degree {}", ctx(), f.verified_depth, f.degree())
            });
            if b.det2b() % *l as i128 != 0 {
                t.check(f.coefficients == vec![BigInt::one()], || format!("{}: F != 1 although l does not divide det 2B", ctx()));
            }
            // brute-force character sums for the levels that fit the budget
            let jmax = (1..)
                .take_while(|&j| enumeration_size(b.size(), *l, j).is_some_and(|s| s <= ORACLE_TERMS))
                .last()
                .unwrap_or(0);
            if jmax > 0 {
                let oracle = t.result(siegel_series_oracle(b, *l, jmax, ORACLE_TERMS), ctx);
                let engine = t.result(lattice_series(b, *l, jmax, u64::MAX), ctx);
                if let (Some(o), Some(e)) = (oracle, engine) {
                    t.check(o == e.coefficients, || format!("{}: series {:?} vs oracle {:?}", ctx(), e.coefficients, o));
                }
            }
            t
        })
        .collect();
    Tally::merge_all(parts)
}

// --------------------------------------------------------- interpolation

fn interpolation_suite() -> Tally {
    let points = balanced_critical_points(6);
    let solver = Arc::new(SiegelSolver::new(SiegelOptions::default()));
    let mut tally = Tally::default();
    for a in [0u64, 2] {
        let families = FamilyConfig::new(5, 1, a, [0; 3], [19; 4], 20)
            .and_then(|wide| Family::with_solver(wide, solver.clone()))
            .and_then(|w| Ok((w, Family::with_solver(FamilyConfig::new(5, 1, a, [0; 3], [3; 4], 8)?, solver.clone())?)));
        let Some((wide, dense)) = tally.result(families, || format!("family setup, a = {a}")) else { continue };
        let mut matrices = Vec::new();
        for diag in wide.diagonals(10) {
            if let Some(list) = tally.result(enumerate_matrices(diag, 5), || format!("diagonal {diag:?}")) {
                matrices.extend(list);
            }
        }
        let parts: Vec<Tally> = matrices
            .par_iter()
            .map(|b| {
                let mut t = Tally::default();
                let ctx = || format!("a = {a}, B = {b}");
                let Some(direct) = t.result(wide.direct_coefficients(b, &points), ctx) else { return t };
                let separable = wide.family_coefficient(b).and_then(|g| g.specialize_all(&points));
                let dense_values = dense
                    .family_coefficient(b)
                    .and_then(|g| g.to_dense())
                    .and_then(|s| s.specialize_all(&points));
                if let Some(s) = t.result(separable, ctx) {
                    for ((x, d), pt) in s.iter().zip(&direct).zip(&points) {
                        t.check(x.agrees_with(d, 20), || format!("{}: point {:?} mod p^20", ctx(), pt.exponents()));
                    }
                }
                if let Some(s) = t.result(dense_values, ctx) {
                    for ((x, d), pt) in s.iter().zip(&direct).zip(&points) {
                        t.check(x.agrees_with(d, x.absolute_precision()), || {
                            format!("{}: dense caps 3, point {:?}", ctx(), pt.exponents())
                        });
                    }
                }
                t
            })
            .collect();
        tally.merge(Tally::merge_all(parts));
    }
    tally
}

// ----------------------------------------------------------- archimedean

/// Balanced weight triples `k >= l >= m >= 1` with `k <= max`.
fn ordered_balanced_triples(max: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for k in 1..=max {
        for l in 1..=k {
            for m in 1..=l {
                if is_balanced(k, l, m) {
                    out.push([k, l, m]);
                }
            }
        }
    }
    out
}

fn archimedean_suite(seed: u64) -> Tally {
    let mut tally = Tally::default();
    for r1 in 0..=12 {
        for b in 0..=12 {
            for c in 0..=12 {
                if b + c > r1 {
                    continue;
                }
                if let Some((lhs, rhs)) = tally.result(binomial_identity(r1, b, c), || format!("binomial ({r1},{b},{c})")) {
                    tally.check(lhs == rhs, || format!("binomial identity ({r1},{b},{c}): {lhs} vs {rhs}"));
                }
            }
        }
    }
    let jobs: Vec<[i64; 4]> = ordered_balanced_triples(8)
        .into_iter()
        .flat_map(|[k, l, m]| r_range(k, l, m).map(|r| r.map(|r| [k, l, m, r]).collect::<Vec<_>>()).unwrap_or_default())
        .collect();
    let parts: Vec<Tally> = jobs
        .par_iter()
        .map(|&[k, l, m, r]| {
            let mut t = Tally::default();
            let ctx = || format!("(k,l,m,r) = ({k},{l},{m},{r})");
            if let Some(c) = t.result(w_coefficient_check(k, l, m, r), ctx) {
                t.check(c.holds, || format!("{}: coefficient {} vs {}", ctx(), c.extracted, c.expected));
            }
            if let Some(c) = t.result(constant_check(k, l, m, r), ctx) {
                t.check(c.holds, || format!("{}: constant {} vs {}", ctx(), c.gamma_side, c.coefficient_side));
            }
            t
        })
        .collect();
    tally.merge(Tally::merge_all(parts));
    let leading: Vec<(u32, ParityType)> =
        ParityType::ALL.iter().flat_map(|&lam| (0..=4).map(move |m| (m, lam))).collect();
    let parts: Vec<Tally> = leading
        .par_iter()
        .map(|&(m, lam)| {
            let mut t = Tally::default();
            if let Some(c) = t.result(leading_term_check(m, lam), || format!("leading term M = {m}")) {
                t.check(c.holds, || format!("leading term M = {m}, lambda = {:?}", lam.triple()));
            }
            t
        })
        .collect();
    tally.merge(Tally::merge_all(parts));
    let parts: Vec<Tally> = (2..=8u32)
        .into_par_iter()
        .map(|alpha| {
            let mut t = Tally::default();
            if let Some(w) = t.result(omega_star(alpha), || format!("omega* alpha = {alpha}")) {
                t.check(parity_vanishing_holds(&w), || format!("parity vanishing fails for alpha = {alpha}"));
            }
            t
        })
        .collect();
    tally.merge(Tally::merge_all(parts));
    for k in 1..=6 {
        for s in 0..=4 {
            match (maass_shimura(k, s), whittaker_value(k, s)) {
                (Ok(a), Ok(b)) => tally.check(a == b, || format!("Maass-Shimura k = {k}, t = {s}: {a} vs {b}")),
                (Err(e), _) | (_, Err(e)) => tally.fail(format!("Maass-Shimura k = {k}, t = {s}: {e}")),
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for [k, l, m] in ordered_balanced_triples(8).into_iter().filter(|w| w[2] >= 2) {
        if let Some(err) = tally.result(random_reduction_check(k, l, m, 4, &mut rng), || format!("Gamma reductions ({k},{l},{m})")) {
            tally.check(err < 1e-10, || format!("Gamma reductions ({k},{l},{m}): relative error {err:e}"));
        }
    }
    tally
}

// ---------------------------------------------------- functional equation

/// A nonzero rational with numerator and denominator at most 20.
fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    let n: i64 = rng.gen_range(1..=20);
    let d: i64 = rng.gen_range(1..=20);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(sign * n, d)
}

fn random_rep<R: Rng>(q: u64, steinberg: bool, rng: &mut R) -> Result<LocalRepGL2> {
    if steinberg {
        LocalRepGL2::steinberg(q, qn(random_rational(rng)))
    } else {
        LocalRepGL2::principal_series(q, qn(random_rational(rng)), qn(random_rational(rng)))
    }
}

/// Parses a shape such as `uSS` into Steinberg flags.
pub fn parse_shape(shape: &str) -> Result<[bool; 3]> {
    let flags: Vec<bool> = shape
        .chars()
        .map(|c| match c {
            'u' | 'U' => Ok(false),
            's' | 'S' => Ok(true),
            _ => Err(Error::Parse(format!("shape {shape:?} must use the letters u and S"))),
        })
        .collect::<Result<_>>()?;
    flags.try_into().map_err(|_| Error::Parse(format!("shape {shape:?} must have three letters")))
}

/// Functional-equation checks on random draws of one shape at `q`.
pub fn functional_equation_draws(q: u64, shape: [bool; 3], seed: u64, trials: usize) -> (u64, Vec<String>) {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let reps = (|| -> Result<[LocalRepGL2; 3]> {
            Ok([random_rep(q, shape[0], &mut rng)?, random_rep(q, shape[1], &mut rng)?, random_rep(q, shape[2], &mut rng)?])
        })();
        let chi = qn(random_rational(&mut rng));
        let Some(reps) = t.result(reps, || format!("trial {trial}")) else { continue };
        if let Some(fe) = t.result(functional_equation_check(&reps, &chi), || format!("trial {trial}")) {
            t.check(fe.holds(), || format!("trial {trial}: {} vs {}", fe.reflected, fe.twisted));
        }
    }
    (t.checks - t.failed, t.failures)
}

fn inv_linear(c: QuadraticNumber) -> Result<RationalFunctionT> {
    RationalFunctionT::linear(c).inverse()
}

/// The three L-rows and three epsilon-rows of the Steinberg degeneration
/// table, for principal series with the given Satake pairs.
fn degeneration_table(q: u64, a: [BigRational; 4], t: &mut Tally) {
    let one = QuadraticNumber::int(1);
    let sq = |e: i64| QuadraticNumber::sqrt_power(q, e);
    let (a1, b1, a2, b2) = (qn(a[0].clone()), qn(a[1].clone()), qn(a[2].clone()), qn(a[3].clone()));
    let rows = (|| -> Result<Vec<(&'static str, RationalFunctionT, RationalFunctionT)>> {
        let pi1 = LocalRepGL2::principal_series(q, a1.clone(), b1.clone())?;
        let pi2 = LocalRepGL2::principal_series(q, a2.clone(), b2.clone())?;
        let st = LocalRepGL2::steinberg(q, one.clone())?;
        let w1 = a1.mul(&b1);
        let w2 = a2.mul(&b2);
        let q2 = QuadraticNumber::int((q * q) as i64);
        // L(s + 1/2, pi1 x pi2)
        let mut pair = RationalFunctionT::one();
        for x in [&a1, &b1] {
            for y in [&a2, &b2] {
                pair = pair.mul(&inv_linear(x.mul(y).mul(&sq(-1)))?);
            }
        }
        let shifted = |x: &QuadraticNumber| inv_linear(x.div(&QuadraticNumber::int(q as i64)));
        let l_pi1 = inv_linear(a1.clone())?.mul(&inv_linear(b1.clone())?);
        let l_pi1_shift = shifted(&a1)?.mul(&shifted(&b1)?);
        let zeta = inv_linear(sq(-3))?.mul(&inv_linear(sq(-1))?.powi(2)?);
        let r1 = [pi1.clone(), pi2.clone(), st.clone()];
        let r2 = [pi1.clone(), st.clone(), st.clone()];
        let r3 = [st.clone(), st.clone(), st];
        Ok(vec![
            ("L(pi1 x pi2 x St)", triple_l(&r1, &one)?, pair),
            ("L(pi1 x St x St)", triple_l(&r2, &one)?, l_pi1.mul(&l_pi1_shift)),
            ("L(St x St x St)", triple_l(&r3, &one)?, zeta),
            (
                "eps(pi1 x pi2 x St)",
                triple_epsilon(&r1, &one)?,
                RationalFunctionT::monomial(q2.mul(&w1).mul(&w1).mul(&w2).mul(&w2), 4),
            ),
            ("eps(pi1 x St x St)", triple_epsilon(&r2, &one)?, RationalFunctionT::monomial(q2.mul(&w1).mul(&w1), 4)),
            ("eps(St x St x St)", triple_epsilon(&r3, &one)?, RationalFunctionT::monomial(sq(5).neg(), 5)),
        ])
    })();
    if let Some(rows) = t.result(rows, || "degeneration table".into()) {
        for (name, computed, expected) in rows {
            t.check(computed == expected, || format!("{name}: {computed} vs {expected}"));
        }
    }
}

fn functional_equation_suite(options: &VerifyOptions) -> Tally {
    let q = options.prime;
    let shapes = ["uuu", "uuS", "uSS", "SSS"];
    let parts: Vec<Tally> = shapes
        .par_iter()
        .enumerate()
        .map(|(i, shape)| {
            let flags = parse_shape(shape).expect("fixed shapes parse");
            let (passed, failures) = functional_equation_draws(q, flags, options.seed + i as u64, options.trials);
            let mut t = Tally { checks: passed, ..Tally::default() };
            for f in failures {
                t.checks += 1;
                t.fail(format!("shape {shape}, {f}"));
            }
            t.check(passed + t.failed == options.trials as u64, || format!("shape {shape}: missing draws"));
            t
        })
        .collect();
    let mut tally = Tally::merge_all(parts);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for _ in 0..5 {
        let a = [(); 4].map(|_| random_rational(&mut rng));
        degeneration_table(q, a, &mut tally);
    }
    tally
}

// -------------------------------------------------------------- Whittaker

fn whittaker_suite(p: u64) -> Tally {
    const PRECISION: u32 = 12;
    let bound = 2 * p as i64;
    let mut tally = Tally::default();
    let Some(ring) = tally.result(Zmod::new(p, PRECISION), || "residue ring".into()) else { return tally };
    let mut tuples = Vec::new();
    for j0 in 0..3u64 {
        for j1 in 0..3u64 {
            for j2 in 0..3u64 {
                for j3 in 0..3u64 {
                    tuples.push([j0, j1, j2, j3]);
                }
            }
        }
    }
    let sections: Vec<Option<WhittakerSection>> = tuples
        .iter()
        .map(|&e| tally.result(WhittakerSection::new(p, e, PRECISION), || format!("section {e:?}")))
        .collect();
    let diagonals: Vec<[i64; 3]> = (1..=bound)
        .flat_map(|a| (1..=bound).flat_map(move |b| (1..=bound).map(move |c| [a, b, c])))
        .collect();
    let parts: Vec<Tally> = diagonals
        .par_iter()
        .map(|&d| {
            let mut t = Tally::default();
            let lim = |i: usize, j: usize| ((4 * d[i] * d[j]) as f64).sqrt().ceil() as i64;
            for c23 in -lim(1, 2)..=lim(1, 2) {
                for c13 in -lim(0, 2)..=lim(0, 2) {
                    for c12 in -lim(0, 1)..=lim(0, 1) {
                        let b = HalfIntegralMatrix::size3(d[0], d[1], d[2], c23, c13, c12);
                        if !b.is_positive_definite() {
                            continue;
                        }
                        let off = [c23, c13, c12];
                        for (e, section) in tuples.iter().zip(&sections) {
                            let Some(section) = section else { continue };
                            let Some(expected) = t.result(q_b_residue(&ring, *e, d, off), || format!("Q_B at {b}")) else {
                                continue;
                            };
                            let value = section.value_residue(d, off);
                            t.check(value == expected, || format!("B = {b}, exponents {e:?}: {value} vs {expected}"));
                        }
                    }
                }
            }
            t
        })
        .collect();
    tally.merge(Tally::merge_all(parts));
    tally
}

// ----------------------------------------------------------- trivial zeros

/// A rational `n/d` that is a unit at `p`, with `|n|, d <= 30`.
fn random_unit<R: Rng>(p: u64, rng: &mut R) -> BigRational {
    loop {
        let n: i64 = rng.gen_range(1..=30);
        let d: i64 = rng.gen_range(1..=30);
        if n % p as i64 != 0 && d % p as i64 != 0 {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            return rat(sign * n, d);
        }
    }
}

fn check_trivial_zero(p: u64, data: &[(bool, BigRational); 3], t: &mut Tally, seen: &mut BTreeMap<String, u64>) {
    const PRECISION: i64 = 20;
    let params = data.clone().map(|(m, a)| OrdinaryParameter { multiplicative: m, alpha: PadicNumber::from_rational(p, &a, PRECISION) });
    let ctx = || format!("{data:?}");
    let Some(eqs) = t.result(trivial_zero_equations(&params), ctx) else { return };
    let Some(case) = t.result(trivial_zero_classify(&params), ctx) else { return };
    let Some((_, order)) = t.result(weight_two_euler_factor(p, data), ctx) else { return };
    *seen.entry(format!("{case:?}")).or_default() += 1;
    t.check(eqs.iter().any(|&e| e) == (order > 0), || format!("{}: equations {eqs:?} but order {order}", ctx()));
    // a good ordinary curve with alpha = +-1 contributes further zeros
    let degenerate = data.iter().any(|(m, a)| !m && (a * a).is_one());
    if let Some(expected) = case.expected_order() {
        let ok = if degenerate { order >= expected } else { order == expected };
        t.check(ok, || format!("{}: {case:?} expects order {expected}, got {order}", ctx()));
    }
}

fn trivial_zero_suite(p: u64, seed: u64) -> Tally {
    let mut t = Tally::default();
    let mut seen = BTreeMap::new();
    let one: BigRational = One::one();
    for signs in 0..8 {
        for mult in 0..8 {
            let data: [(bool, BigRational); 3] = std::array::from_fn(|i| {
                let a = if signs >> i & 1 == 1 { -one.clone() } else { one.clone() };
                (mult >> i & 1 == 1, a)
            });
            check_trivial_zero(p, &data, &mut t, &mut seen);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let alpha = random_unit(p, &mut rng);
        let others = [random_unit(p, &mut rng), random_unit(p, &mut rng)];
        let sign = if rng.gen_bool(0.5) { one.clone() } else { -one.clone() };
        let i = rng.gen_range(0..3usize);
        // three good ordinary curves
        check_trivial_zero(p, &[(false, alpha.clone()), (false, others[0].clone()), (false, others[1].clone())], &mut t, &mut seen);
        // one multiplicative curve at index i with alpha_j = alpha_i alpha_k
        let mut data: [(bool, BigRational); 3] = std::array::from_fn(|_| (false, alpha.clone()));
        data[i] = (true, sign.clone());
        data[(i + 1) % 3] = (false, &sign * &alpha);
        check_trivial_zero(p, &data, &mut t, &mut seen);
        // one multiplicative curve with unrelated unit roots
        data[(i + 1) % 3] = (false, others[0].clone());
        check_trivial_zero(p, &data, &mut t, &mut seen);
    }
    for case in [TrivialZeroCase::None, TrivialZeroCase::CaseI] {
        t.check(seen.contains_key(&format!("{case:?}")), || format!("no sample in {case:?}"));
    }
    t.check(seen.keys().any(|k| k.starts_with("CaseII")), || "no sample in case II".into());
    t
}

// ------------------------------------------------------------------- Tate

/// `-log_p(1 + p) / (2n)` from the logarithm series in exact rationals.
fn l_invariant_oracle(p: u64, n: i64, precision: i64) -> PadicNumber {
    let mut sum: BigRational = Zero::zero();
    let pb = BigInt::from(p);
    for k in 1..=(2 * precision + 8) {
        let term = BigRational::new(num_traits::pow(pb.clone(), k as usize), BigInt::from(k));
        sum = if k % 2 == 1 { sum + term } else { sum - term };
    }
    PadicNumber::from_rational(p, &(sum * rat(-1, 2 * n)), precision + 4)
}

fn tate_suite(p: u64, seed: u64) -> Tally {
    const PRECISION: u32 = 30;
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 1..=5u32 {
        for _ in 0..2 {
            let unit = loop {
                let u: i64 = rng.gen_range(1..10_000);
                if u % p as i64 != 0 {
                    break u;
                }
            };
            let q = synthetic_period(p, n, &BigInt::from(unit), PRECISION + 2);
            let ctx = || format!("q = {q}");
            let Some(j) = t.result(j_of_period(&q, PRECISION + 2), ctx) else { continue };
            t.check(j.valuation() == -(n as i64), || format!("{}: v(j) = {}", ctx(), j.valuation()));
            if let Some(back) = t.result(tate_period(&j, PRECISION), ctx) {
                let agree = relative_agreement(&back, &q);
                t.check(agree >= PRECISION as i64 - 2, || format!("{}: recovered only {agree} digits", ctx()));
            }
        }
    }
    for n in 1..=5u32 {
        let q = synthetic_period(p, n, &BigInt::from(1 + p), PRECISION);
        if let Some(l) = t.result(l_invariant_from_period(&q), || format!("L-invariant n = {n}")) {
            let expected = l_invariant_oracle(p, n as i64, PRECISION as i64);
            t.check(l.agrees_with(&expected, l.absolute_precision()), || format!("L-invariant n = {n}: {l} vs {expected}"));
        }
    }
    t
}

// ------------------------------------------------------------ root numbers

/// A random triple of curves with square-free conductors built from a pool
/// of small primes, sharing a random set of primes so that all three are
/// multiplicative there.
pub fn random_curve_triple<R: Rng>(p: u64, rng: &mut R) -> [EllipticCurveData; 3] {
    let pool = [2u64, 3, 5, 7, 11, 13];
    let shared: Vec<u64> = pool.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
    std::array::from_fn(|_| {
        let mut primes: Vec<u64> = pool.iter().copied().filter(|l| shared.contains(l) || rng.gen_bool(0.25)).collect();
        if primes.is_empty() {
            primes.push(pool[rng.gen_range(0..pool.len())]);
        }
        let a_ell: BTreeMap<u64, i64> = primes.iter().map(|&l| (l, if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
        let conductor = primes.iter().product();
        let (reduction_p, ap) = match a_ell.get(&p) {
            Some(1) => (Reduction::SplitMult, 1),
            Some(_) => (Reduction::NonsplitMult, -1),
            None => {
                let ap = loop {
                    let a: i64 = rng.gen_range(-4..=4);
                    if a.rem_euclid(p as i64) != 0 {
                        break a;
                    }
                };
                (Reduction::GoodOrdinary, ap)
            }
        };
        EllipticCurveData { conductor, reduction_p, ap, a_ell, j_invariant: None }
    })
}

fn root_number_suite(p: u64, seed: u64) -> Tally {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 0..20 {
        let curves = random_curve_triple(p, &mut rng);
        let ctx = || format!("draw {draw}, conductors {:?}", curves.iter().map(|c| c.conductor).collect::<Vec<_>>());
        let signs = t.result(epsilon_signs(&curves, p), ctx);
        let local = t.result(root_numbers_from_local_factors(&curves, p), ctx);
        if let (Some(s), Some((global, p_adic))) = (signs, local) {
            t.check(s.global == global && s.p_adic == p_adic, || {
                format!("{}: signs ({}, {}) vs local factors ({global}, {p_adic})", ctx(), s.global, s.p_adic)
            });
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn shapes_parse() {
        assert_eq!(parse_shape("uSS").unwrap(), [false, true, true]);
        assert!(parse_shape("uS").is_err());
        assert!(parse_shape("uxS").is_err());
    }

    #[test]
    fn enough_siegel_matrices() {
        let list = siegel_test_matrices();
        assert!(list.len() >= 25);
        assert!((1..=3).all(|n| list.iter().any(|b| b.size() == n)));
    }

    #[test]
    fn small_suites_pass() {
        let options = VerifyOptions { trials: 10, ..VerifyOptions::default() };
        for suite in [Suite::FunctionalEquation, Suite::TrivialZero, Suite::Tate, Suite::RootNumber] {
            let report = run_suite(suite, &options);
            assert!(report.passed(), "{suite}: {:?}", report.failures);
        }
    }

    #[test]
    fn random_triples_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            for c in random_curve_triple(5, &mut rng) {
                c.validate(5).unwrap();
            }
        }
    }
}
