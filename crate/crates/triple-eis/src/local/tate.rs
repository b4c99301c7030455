//! Tate periods: the q-expansion of the j-invariant and its inversion.
//!
//! `j(q) = E4(q)^3 / Delta(q)` is built from divisor sums and the eta
//! product. The period of a Tate curve is recovered from `x = 1/j` by the
//! compositional inverse `q = x + b_2 x^2 + ...` of
//! `x(q) = Delta / E4^3`, which is found by Newton iteration on power series
//! and has integer coefficients.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::PadicNumber;
use crate::error::{domain, Result};

/// Default number of q-expansion coefficients.
pub const DEFAULT_SERIES_LENGTH: usize = 40;

/// Guard digits dropped from the target precision.
pub const GUARD_DIGITS: u32 = 2;

type Series = Vec<BigInt>;

fn mul_trunc(a: &[BigInt], b: &[BigInt], n: usize) -> Series {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a power series with constant term `+-1`.
fn inverse_trunc(a: &[BigInt], n: usize) -> Series {
    assert!(a[0].is_one() || (-&a[0]).is_one(), "series must start with a unit");
    let mut out = vec![BigInt::zero(); n];
    out[0] = a[0].clone();
    for k in 1..n {
        let mut s = BigInt::zero();
        for j in 1..=k.min(a.len() - 1) {
            s += &a[j] * &out[k - j];
        }
        out[k] = -s * &a[0];
    }
    out
}

/// `E4 = 1 + 240 sum sigma_3(n) q^n` to `n` coefficients.
pub fn eisenstein_e4(n: usize) -> Series {
    let mut out = vec![BigInt::zero(); n];
    if n > 0 {
        out[0] = BigInt::one();
    }
    for (m, c) in out.iter_mut().enumerate().skip(1) {
        let sigma: u64 = (1..=m as u64).filter(|d| (m as u64).is_multiple_of(*d)).map(|d| d * d * d).sum();
        *c = BigInt::from(240u64 * sigma);
    }
    out
}

/// `prod_{m >= 1} (1 - q^m)^24` to `n` coefficients (so `Delta = q` times this).
pub fn eta_product_24(n: usize) -> Series {
    let mut out = vec![BigInt::zero(); n];
    if n == 0 {
        return out;
    }
    out[0] = BigInt::one();
    for m in 1..n {
        for _ in 0..24 {
            for k in (m..n).rev() {
                let t = out[k - m].clone();
                out[k] -= t;
            }
        }
    }
    out
}

/// Coefficients `c(-1), c(0), c(1), ...` of `j(q) = sum c(k) q^k`.
pub fn j_coefficients(n: usize) -> Series {
    let len = n + 1;
    let e4 = eisenstein_e4(len);
    let e4_cubed = mul_trunc(&mul_trunc(&e4, &e4, len), &e4, len);
    let eta = eta_product_24(len);
    mul_trunc(&e4_cubed, &inverse_trunc(&eta, len), n)
}

/// Coefficients of `x(q) = Delta / E4^3 = q + ...` (index = power of q).
fn reciprocal_j_series(n: usize) -> Series {
    let e4 = eisenstein_e4(n);
    let e4_cubed = mul_trunc(&mul_trunc(&e4, &e4, n), &e4, n);
    let ratio = mul_trunc(&eta_product_24(n), &inverse_trunc(&e4_cubed, n), n);
    let mut out = vec![BigInt::zero(); n];
    out[1..n].clone_from_slice(&ratio[..n - 1]);
    out
}

fn compose(f: &[BigInt], g: &[BigInt], n: usize) -> Series {
    // Horner: f(g) with g(0) = 0
    let mut acc = vec![BigInt::zero(); n];
    for c in f.iter().take(n).rev() {
        acc = mul_trunc(&acc, g, n);
        acc[0] += c;
    }
    acc
}

fn derivative(f: &[BigInt]) -> Series {
    f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

/// Coefficients `b_k` of `q = sum b_k x^k`, the inverse of `x(q)`, to `n`
/// coefficients.
pub fn period_series(n: usize) -> Series {
    let x = reciprocal_j_series(n);
    let dx = derivative(&x);
    // Newton: q <- q - (x(q) - X) / x'(q)
    let mut q = vec![BigInt::zero(); n];
    if n > 1 {
        q[1] = BigInt::one();
    }
    let mut correct = 2;
    while correct < n {
        correct = (2 * correct).min(n);
        let mut residual = compose(&x, &q, n);
        if n > 1 {
            residual[1] -= BigInt::one();
        }
        let slope = compose(&dx, &q, n);
        let step = mul_trunc(&residual, &inverse_trunc(&slope, n), n);
        for (a, b) in q.iter_mut().zip(step) {
            *a -= b;
        }
    }
    q
}

/// `j(q)` for `v_p(q) > 0`, to relative precision `prec`.
pub fn j_of_period(q: &PadicNumber, prec: u32) -> Result<PadicNumber> {
    let v = q.valuation();
    if q.is_zero() || v <= 0 {
        return domain("Tate parameter must have positive valuation");
    }
    let p = q.prime();
    // terms c(k) q^k with k >= 0 must reach absolute precision prec - v
    let terms = ((prec as i64) / v + 2) as usize;
    let coeffs = j_coefficients(terms.max(3));
    let abs = prec as i64 - v;
    let qinv = q.inverse()?;
    let mut total = qinv.reduce_precision(abs);
    let mut power = PadicNumber::from_int(p, 1, abs + v + 1);
    for c in coeffs.iter().skip(1) {
        let term = &PadicNumber::from_bigint(p, c, abs) * &power;
        total = &total + &term;
        power = &power * q;
    }
    Ok(total.reduce_precision(abs))
}

/// The Tate period `q_E` with `j(q_E) = j`, for `v_p(j) < 0`, known to
/// relative precision `prec - GUARD_DIGITS`.
pub fn tate_period(j: &PadicNumber, prec: u32) -> Result<PadicNumber> {
    if j.is_zero() || j.valuation() >= 0 {
        return domain("j has non-negative valuation: not a Tate curve");
    }
    let p = j.prime();
    let x = j.inverse()?;
    let v = x.valuation();
    let target = prec.saturating_sub(GUARD_DIGITS).max(1) as i64;
    let terms = ((target / v) + 2) as usize;
    let coeffs = period_series(terms.max(DEFAULT_SERIES_LENGTH));
    let abs = v + target;
    let mut total = PadicNumber::zero(p, abs);
    let mut power = x.clone();
    for c in coeffs.iter().skip(1) {
        if power.valuation() >= abs {
            break;
        }
        total = &total + &(&PadicNumber::from_bigint(p, c, abs) * &power);
        power = &power * &x;
    }
    Ok(total.reduce_precision(abs))
}

/// `p^n u` as a p-adic number with `prec` digits of relative precision.
pub fn synthetic_period(p: u64, n: u32, unit: &BigInt, prec: u32) -> PadicNumber {
    PadicNumber::new(p, n as i64, unit.clone(), prec)
}

/// Number of p-adic digits, counted from the valuation of `a`, on which
/// `a` and `b` agree.
pub fn relative_agreement(a: &PadicNumber, b: &PadicNumber) -> i64 {
    let d = a - b;
    if d.is_zero() {
        d.absolute_precision() - a.valuation()
    } else {
        d.valuation() - a.valuation()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_expansion_starts_correctly() {
        let c = j_coefficients(4);
        assert_eq!(c[0], BigInt::from(1));
        assert_eq!(c[1], BigInt::from(744));
        assert_eq!(c[2], BigInt::from(196884));
        assert_eq!(c[3], BigInt::from(21493760));
    }

    #[test]
    fn reversion_inverts_the_series() {
        let n = 12;
        let x = reciprocal_j_series(n);
        let q = period_series(n);
        let id = compose(&x, &q, n);
        let mut expected = vec![BigInt::zero(); n];
        expected[1] = BigInt::one();
        assert_eq!(id, expected);
        assert_eq!(q[2], BigInt::from(744));
    }

    #[test]
    fn round_trip() {
        let p = 5;
        for n in 1..=3u32 {
            let q = synthetic_period(p, n, &BigInt::from(7), 32);
            let j = j_of_period(&q, 32).unwrap();
            assert_eq!(j.valuation(), -(n as i64));
            let back = tate_period(&j, 30).unwrap();
            assert!(relative_agreement(&back, &q) >= 28, "n = {n}");
        }
        assert!(tate_period(&PadicNumber::from_int(p, 3, 10), 10).is_err());
    }
}
