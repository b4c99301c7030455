//! Floating-point checks of the Gamma-sum reductions behind the
//! archimedean zeta integral. Nothing here feeds the exact code paths.

use rand::Rng;
use statrs::function::gamma::gamma;

use super::coefficient::is_balanced;
use super::omega::ParityType;
use crate::error::{domain, Result};

fn choose(n: i64, k: i64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn sign(n: i64) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Both sides of the Gamma-sum identity
/// `Gamma(a+N) sum_A (-1)^A C(N,A) Gamma(t+A) Gamma(t+b+a+N-1+A) / (Gamma(a+A) Gamma(2t+b+A))
///  = (-1)^N Gamma(t) Gamma(t+b+a+N-1) Gamma(t+b+N) Gamma(t-a+1)
///    / (Gamma(2t+b+N) Gamma(t+b) Gamma(t-a-N+1))`.
///
/// The common factor `Gamma(t) Gamma(t+b+a+N-1) / Gamma(2t+b)` is cleared
/// first, which turns every remaining ratio into a Pochhammer symbol.
pub fn orloff_sides(a: f64, t: f64, b: f64, n: i64) -> (f64, f64) {
    let rising = |x: f64, k: i64| (0..k).fold(1.0, |acc, i| acc * (x + i as f64));
    let mut lhs = 0.0;
    for j in 0..=n {
        // Gamma(a+N)/Gamma(a+j) = (a+j)_{N-j}
        lhs += sign(j) * choose(n, j) * rising(a + j as f64, n - j) * rising(t, j) * rising(t + b + a + n as f64 - 1.0, j)
            / rising(2.0 * t + b, j);
    }
    let rhs = sign(n) * rising(t + b, n) * rising(t - a - n as f64 + 1.0, n) / rising(2.0 * t + b, n);
    (lhs, rhs)
}

/// Relative discrepancies of the two reductions and of the assembled
/// closed form at a real `s`, for balanced `(k, l, m)`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ReductionErrors {
    /// Sum over the first index, worst over the second index.
    pub first: f64,
    /// Sum over the second index.
    pub second: f64,
    /// Double sum against the closed Gamma product, with `Gamma(2s + k)`
    /// written by Legendre duplication, relative to the term magnitudes.
    pub assembled: f64,
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    (a - b).abs() / scale
}

/// Evaluates the reductions for `(k, l, m)` at `s`.
pub fn reduction_errors(k: i64, l: i64, m: i64, s: f64) -> Result<ReductionErrors> {
    if !is_balanced(k, l, m) {
        return domain("weights must be balanced");
    }
    let lambda = ParityType::of_weights(k, l, m)?;
    let (l1, l2, l3) = (lambda.lambda1() as i64, lambda.lambda2() as i64, lambda.lambda3() as i64);
    let (b, c) = ((k - l - l2) / 2, (k - m - l3) / 2);
    let bs = s + l3 as f64 / 2.0;
    let (bk, bl, bm) = ((k - l2) as f64, l as f64, (m - l1) as f64);
    let (lf, mf) = (l as f64, m as f64);

    let mut first: f64 = 0.0;
    for big_b in 0..=c {
        let beta = big_b as f64 + (bm - lf) / 2.0;
        let (lhs, rhs) = orloff_sides(lf, bs + lf / 2.0, beta, b);
        first = first.max(relative(lhs, rhs));
    }
    let (lhs, rhs) = orloff_sides(mf, bs + bm / 2.0 + b as f64, (lf - bm) / 2.0 - b as f64, c);
    let second = relative(lhs, rhs);

    let gamma_inf = |a: i64, bb: i64| {
        gamma(bs + bl / 2.0 + a as f64) * gamma(bs + bm / 2.0 + bb as f64) * gamma(bs + (bk + bl + bm) / 2.0 - 1.0 + (a + bb) as f64)
            / gamma(2.0 * bs + (bl + bm) / 2.0 + (a + bb) as f64)
    };
    let mut double = 0.0;
    let mut magnitude = 0.0;
    for a in 0..=b {
        for bb in 0..=c {
            let term = sign(a + bb) * choose(b, a) * choose(c, bb) * gamma_inf(a, bb) / (gamma(lf + a as f64) * gamma(mf + bb as f64));
            double += term;
            magnitude += term.abs();
        }
    }
    let outer = gamma(lf + b as f64) * gamma(mf + c as f64);
    double *= outer;
    magnitude *= outer.abs();
    let (kf, two) = (k as f64, 2.0f64);
    let duplication = two.powf(2.0 * s + kf - 1.0) * gamma(s + kf / 2.0) * gamma(s + kf / 2.0 + 0.5) / std::f64::consts::PI.sqrt();
    let closed = sign(b + c)
        * gamma(s + (kf - lf + mf) / 2.0)
        * gamma(s + (kf + lf + mf) / 2.0 - 1.0)
        * gamma(s + (kf - lf - mf) / 2.0 + 1.0)
        * gamma(s + (kf - mf + lf) / 2.0)
        / (duplication * gamma(bs - bk / 2.0 + 1.0));
    // the double sum cancels heavily near zeros of the closed form, so its
    // error is measured against the size of its terms
    let assembled = (double - closed).abs() / magnitude.max(closed.abs()).max(f64::MIN_POSITIVE);
    Ok(ReductionErrors { first, second, assembled })
}

/// Worst relative error over `samples` random `s` in `(0.05, 2.95)`.
pub fn random_reduction_check<R: Rng>(k: i64, l: i64, m: i64, samples: usize, rng: &mut R) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let s = rng.gen_range(0.05..2.95);
        let e = reduction_errors(k, l, m, s)?;
        worst = worst.max(e.first).max(e.second).max(e.assembled);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn reductions_hold_numerically() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (k, l, m) in [(2, 2, 2), (5, 4, 3), (6, 4, 3), (8, 6, 5), (7, 7, 2)] {
            let worst = random_reduction_check(k, l, m, 10, &mut rng).unwrap();
            assert!(worst < 1e-10, "({k},{l},{m}): {worst}");
        }
    }
}
