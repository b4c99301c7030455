//! Fixed-precision p-adic numbers.
//!
//! A [`PadicNumber`] stores `p^val * unit + O(p^(val + prec))` with `unit`
//! reduced modulo `p^prec` and coprime to `p`. Zero carries no unit digits
//! and records its absolute precision in `val`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// `p^e` as a big integer.
pub fn pow_big(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation_big(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero machine integer; `None` for zero.
pub fn valuation_i128(x: i128, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let p = p as i128;
    let (mut y, mut v) = (x, 0);
    while y % p == 0 {
        y /= p;
        v += 1;
    }
    Some(v)
}

/// Inverse of `a` modulo `m` (which must be coprime to `a`).
pub fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Element of `Q_p` known modulo an explicit power of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    val: i64,
    unit: BigInt,
    prec: u32,
}

impl PadicNumber {
    /// Zero known modulo `p^abs_prec`.
    pub fn zero(p: u64, abs_prec: i64) -> Self {
        PadicNumber { p, val: abs_prec, unit: BigInt::zero(), prec: 0 }
    }

    /// `p^val * unit` with `prec` digits of relative precision. The unit is
    /// normalised (extra factors of `p` move into the valuation).
    pub fn new(p: u64, val: i64, unit: BigInt, prec: u32) -> Self {
        Self::from_bigint_shifted(p, &unit, val, val + prec as i64)
    }

    /// The integer `x` known modulo `p^abs_prec`.
    pub fn from_bigint(p: u64, x: &BigInt, abs_prec: i64) -> Self {
        Self::from_bigint_shifted(p, x, 0, abs_prec)
    }

    /// The integer `x` known modulo `p^abs_prec`.
    pub fn from_int(p: u64, x: i64, abs_prec: i64) -> Self {
        Self::from_bigint(p, &BigInt::from(x), abs_prec)
    }

    /// `p^shift * x` known modulo `p^abs_prec`.
    fn from_bigint_shifted(p: u64, x: &BigInt, shift: i64, abs_prec: i64) -> Self {
        match valuation_big(x, p) {
            None => Self::zero(p, abs_prec),
            Some(v) => {
                let val = shift + v as i64;
                if val >= abs_prec {
                    return Self::zero(p, abs_prec);
                }
                let prec = (abs_prec - val) as u32;
                let unit = (x / pow_big(p, v)).mod_floor(&pow_big(p, prec));
                PadicNumber { p, val, unit, prec }
            }
        }
    }

    /// The rational `q` known modulo `p^abs_prec`.
    pub fn from_rational(p: u64, q: &BigRational, abs_prec: i64) -> Self {
        if q.is_zero() {
            return Self::zero(p, abs_prec);
        }
        let vn = valuation_big(q.numer(), p).unwrap() as i64;
        let vd = valuation_big(q.denom(), p).unwrap() as i64;
        let val = vn - vd;
        if val >= abs_prec {
            return Self::zero(p, abs_prec);
        }
        let prec = (abs_prec - val) as u32;
        let m = pow_big(p, prec);
        let num = q.numer() / pow_big(p, vn as u32);
        let den = q.denom() / pow_big(p, vd as u32);
        let unit = (num * inverse_mod(&den, &m).unwrap()).mod_floor(&m);
        PadicNumber { p, val, unit, prec }
    }

    /// The prime.
    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Valuation (for zero: the absolute precision).
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Unit digits, reduced modulo `p^relative_precision`.
    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// Number of known unit digits.
    pub fn relative_precision(&self) -> u32 {
        self.prec
    }

    /// The exponent `n` such that the value is known modulo `p^n`.
    pub fn absolute_precision(&self) -> i64 {
        self.val + self.prec as i64
    }

    /// Whether the value is indistinguishable from zero at its precision.
    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Same value with absolute precision lowered to at most `abs_prec`.
    pub fn reduce_precision(&self, abs_prec: i64) -> Self {
        if abs_prec >= self.absolute_precision() {
            return self.clone();
        }
        if self.is_zero() || abs_prec <= self.val {
            return Self::zero(self.p, abs_prec);
        }
        Self::from_bigint_shifted(self.p, &self.unit, self.val, abs_prec)
    }

    /// Integer representative `p^val * unit` (requires `val >= 0`).
    pub fn to_bigint(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Ok(BigInt::zero());
        }
        if self.val < 0 {
            return domain("p-adic number is not integral");
        }
        Ok(&self.unit * pow_big(self.p, self.val as u32))
    }

    /// Representative in `[0, p^n)` of an integral value known to at least `p^n`.
    pub fn to_residue(&self, n: u32) -> Result<BigInt> {
        if self.absolute_precision() < n as i64 && !self.is_zero() {
            return domain(format!("value known only modulo p^{}", self.absolute_precision()));
        }
        Ok(self.to_bigint()?.mod_floor(&pow_big(self.p, n)))
    }

    /// True when both values are known modulo `p^n` and agree there.
    pub fn agrees_with(&self, other: &PadicNumber, n: i64) -> bool {
        if self.p != other.p || self.absolute_precision() < n || other.absolute_precision() < n {
            return false;
        }
        let d = self - other;
        d.is_zero() || d.val >= n
    }

    fn check_prime(&self, other: &PadicNumber) {
        assert_eq!(self.p, other.p, "mixing p-adic numbers for different primes");
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Result<PadicNumber> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of p-adic zero".into()));
        }
        let m = pow_big(self.p, self.prec);
        let unit = inverse_mod(&self.unit, &m).unwrap();
        Ok(PadicNumber { p: self.p, val: -self.val, unit, prec: self.prec })
    }

    /// Quotient; the precision drops by the valuation of the divisor.
    pub fn checked_div(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other);
        Ok(self * &other.inverse()?)
    }

    /// Non-negative integer power.
    pub fn pow(&self, e: u32) -> PadicNumber {
        if e == 0 {
            return PadicNumber::from_int(self.p, 1, self.prec.max(1) as i64);
        }
        if self.is_zero() {
            return Self::zero(self.p, self.val.saturating_mul(e as i64));
        }
        let m = pow_big(self.p, self.prec);
        let unit = self.unit.modpow(&BigInt::from(e), &m);
        PadicNumber { p: self.p, val: self.val * e as i64, unit, prec: self.prec }
    }

    /// Integer power (negative exponents invert).
    pub fn powi(&self, e: i64) -> Result<PadicNumber> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inverse()?.pow((-e) as u32))
        }
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O({}^{})", self.p, self.val)
        } else {
            write!(f, "{}^{} * {} + O({}^{})", self.p, self.val, self.unit, self.p, self.absolute_precision())
        }
    }
}

impl<'a> std::ops::Add<&'a PadicNumber> for &'a PadicNumber {
    type Output = PadicNumber;
    fn add(self, other: &PadicNumber) -> PadicNumber {
        self.check_prime(other);
        let abs = self.absolute_precision().min(other.absolute_precision());
        let base = self.val.min(other.val);
        if base >= abs {
            return PadicNumber::zero(self.p, abs);
        }
        let x = &self.unit * pow_big(self.p, (self.val - base) as u32)
            + &other.unit * pow_big(self.p, (other.val - base) as u32);
        PadicNumber::from_bigint_shifted(self.p, &x, base, abs)
    }
}

impl std::ops::Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        if self.is_zero() {
            return self.clone();
        }
        let m = pow_big(self.p, self.prec);
        PadicNumber { p: self.p, val: self.val, unit: (-&self.unit).mod_floor(&m), prec: self.prec }
    }
}

impl<'a> std::ops::Sub<&'a PadicNumber> for &'a PadicNumber {
    type Output = PadicNumber;
    fn sub(self, other: &PadicNumber) -> PadicNumber {
        self + &(-other)
    }
}

impl<'a> std::ops::Mul<&'a PadicNumber> for &'a PadicNumber {
    type Output = PadicNumber;
    fn mul(self, other: &PadicNumber) -> PadicNumber {
        self.check_prime(other);
        let val = self.val + other.val;
        if self.is_zero() || other.is_zero() {
            // a zero's valuation is its absolute precision
            return PadicNumber::zero(self.p, val);
        }
        let prec = self.prec.min(other.prec);
        let m = pow_big(self.p, prec);
        PadicNumber { p: self.p, val, unit: (&self.unit * &other.unit).mod_floor(&m), prec }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, other: PadicNumber) -> PadicNumber {
                std::ops::$tr::$m(&self, &other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[derive(Serialize, Deserialize)]
struct PadicJson {
    p: u64,
    val: i64,
    unit: String,
    prec: u32,
}

impl Serialize for PadicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PadicJson { p: self.p, val: self.val, unit: self.unit.to_string(), prec: self.prec }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PadicJson::deserialize(d)?;
        let unit: BigInt = j.unit.parse().map_err(serde::de::Error::custom)?;
        if j.p < 3 || unit.is_negative() {
            return Err(serde::de::Error::custom("invalid p-adic number"));
        }
        Ok(PadicNumber::new(j.p, j.val, unit, j.prec))
    }
}

/// Teichmüller lift of the unit `a`, modulo `p^n`.
pub fn teichmuller(a: &BigInt, p: u64, n: u32) -> Result<PadicNumber> {
    if a.mod_floor(&BigInt::from(p)).is_zero() {
        return domain("Teichmüller lift of a non-unit");
    }
    let m = pow_big(p, n);
    let pe = BigInt::from(p);
    let mut x = a.mod_floor(&m);
    for _ in 0..n {
        x = x.modpow(&pe, &m);
    }
    Ok(PadicNumber::from_bigint(p, &x, n as i64))
}

/// Extra p-adic digits needed to absorb the denominators `n <= n_max`.
fn guard_digits(p: u64, n_max: u64) -> u32 {
    let mut g = 0;
    let mut q = p;
    while q <= n_max {
        g += 1;
        q = q.saturating_mul(p);
    }
    g + 1
}

/// Logarithm of `x` in `1 + pZ_p`, to the absolute precision of `x`.
pub fn padic_log(x: &PadicNumber) -> Result<PadicNumber> {
    let p = x.p;
    let n = x.absolute_precision();
    if x.val != 0 || x.is_zero() {
        return domain("logarithm argument is not in 1 + pZ_p");
    }
    let y = &x.unit - BigInt::one();
    if !y.mod_floor(&BigInt::from(p)).is_zero() {
        return domain("logarithm argument is not in 1 + pZ_p");
    }
    if n <= 0 {
        return Ok(PadicNumber::zero(p, n));
    }
    let n = n as u32;
    let vy = valuation_big(&y, p).unwrap_or(n).min(n) as u64;
    // terms with k*vy - v_p(k) >= n vanish modulo p^n
    let ilog = |k: u64| {
        let (mut e, mut q) = (0u64, p);
        while q <= k {
            e += 1;
            q = q.saturating_mul(p);
        }
        e
    };
    let mut k_max = 1u64;
    while (k_max + 1) * vy < n as u64 + ilog(k_max + 1) {
        k_max += 1;
    }
    // the bound k * vy - v_p(k) >= n must hold beyond k_max as well
    k_max += 2 * ilog(k_max + 1) + 2;
    let g = guard_digits(p, k_max);
    let work = pow_big(p, n + g);
    let mut total = BigInt::zero();
    let mut power = BigInt::one();
    for k in 1..=k_max {
        power = (&power * &y).mod_floor(&work);
        let vk = valuation_big(&BigInt::from(k), p).unwrap();
        let kunit = BigInt::from(k / p.pow(vk));
        let term = (&power / pow_big(p, vk)) * inverse_mod(&kunit, &work).unwrap();
        if k % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(PadicNumber::from_bigint(p, &total.mod_floor(&work), n as i64))
}

/// Unit part `<u> = u * omega(u)^(-1)` of a p-adic unit.
pub fn one_unit_part(u: &PadicNumber) -> Result<PadicNumber> {
    if u.val != 0 || u.is_zero() {
        return domain("not a p-adic unit");
    }
    let n = u.prec;
    let w = teichmuller(&u.unit, u.p, n)?;
    u.checked_div(&w)
}

/// Iwasawa-branch logarithm on `Q_p^x`: `log(p^v u) = log(<u>)`.
pub fn iwasawa_log(x: &PadicNumber) -> Result<PadicNumber> {
    if x.is_zero() {
        return domain("logarithm of zero");
    }
    let u = PadicNumber { p: x.p, val: 0, unit: x.unit.clone(), prec: x.prec };
    padic_log(&one_unit_part(&u)?)
}

/// Small prime test for machine integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of a nonzero integer, ascending.
pub fn prime_factors(n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut d: u128 = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d as u64);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m as u64);
    }
    out
}

/// `x` as an `i64` when it fits.
pub fn big_to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(&big(2), 5, 2).unwrap().to_bigint().unwrap(), big(7));
        assert_eq!(teichmuller(&big(1), 7, 10).unwrap().to_bigint().unwrap(), big(1));
        let m = pow_big(11, 6);
        assert_eq!(teichmuller(&big(10), 11, 6).unwrap().to_bigint().unwrap(), m - 1);
        assert!(teichmuller(&big(10), 5, 3).is_err());
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        for a in 1..7 {
            let w = teichmuller(&big(a), 7, 12).unwrap();
            assert_eq!(w.pow(6), PadicNumber::from_int(7, 1, 12));
            assert_eq!(w.to_residue(1).unwrap(), big(a));
        }
    }

    #[test]
    fn log_of_one_plus_p_matches_series() {
        // direct rational summation of p - p^2/2 + p^3/3 - ... compared mod p^5
        let p = 5u64;
        let mut s = BigRational::zero();
        for k in 1..=20i64 {
            let term = BigRational::new(num_traits::pow(big(5), k as usize), big(k));
            s = if k % 2 == 1 { s + term } else { s - term };
        }
        let expect = PadicNumber::from_rational(p, &s, 5);
        let got = padic_log(&PadicNumber::from_int(p, 6, 5)).unwrap();
        assert!(got.agrees_with(&expect, 5));
        assert!(padic_log(&PadicNumber::from_int(p, 1, 9)).unwrap().is_zero());
        assert!(padic_log(&PadicNumber::from_int(p, 2, 9)).is_err());
    }

    #[test]
    fn division_lowers_precision() {
        let a = PadicNumber::from_int(5, 7, 10);
        let b = PadicNumber::from_int(5, 25, 10);
        let q = a.checked_div(&b).unwrap();
        assert_eq!(q.valuation(), -2);
        assert_eq!(q.absolute_precision(), 6);
    }

    #[test]
    fn json_round_trip() {
        let a = PadicNumber::from_int(7, -12345, 15);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"unit\":\""));
        let b: PadicNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn log_is_a_homomorphism(a in 0i64..10_000, b in 0i64..10_000) {
            let p = 7u64;
            let x = PadicNumber::from_int(p, 1 + 7 * a, 14);
            let y = PadicNumber::from_int(p, 1 + 7 * b, 14);
            let lhs = padic_log(&(&x * &y)).unwrap();
            let rhs = &padic_log(&x).unwrap() + &padic_log(&y).unwrap();
            prop_assert!(lhs.agrees_with(&rhs, 14));
            let sq = padic_log(&x.pow(2)).unwrap();
            prop_assert!(sq.agrees_with(&(&rhs - &padic_log(&y).unwrap() + padic_log(&x).unwrap()), 14));
        }

        #[test]
        fn teichmuller_is_multiplicative(a in 1i64..500, b in 1i64..500, n in 1u32..20) {
            let p = 5u64;
            prop_assume!(a % 5 != 0 && b % 5 != 0);
            let wa = teichmuller(&big(a), p, n).unwrap();
            let wb = teichmuller(&big(b), p, n).unwrap();
            let wab = teichmuller(&big(a * b), p, n).unwrap();
            prop_assert_eq!(&wa * &wb, wab);
        }

        #[test]
        fn field_axioms_hold(a in -5000i64..5000, b in 1i64..5000, c in -5000i64..5000) {
            let p = 3u64;
            let x = PadicNumber::from_int(p, a, 20);
            let y = PadicNumber::from_int(p, b, 20);
            let z = PadicNumber::from_int(p, c, 20);
            let lhs = &x * &(&y + &z);
            let rhs = &(&x * &y) + &(&x * &z);
            prop_assert!(lhs.agrees_with(&rhs, lhs.absolute_precision().min(rhs.absolute_precision())));
            let q = (&x * &y).checked_div(&y).unwrap();
            let n = q.absolute_precision().min(20);
            prop_assert!(q.agrees_with(&x.reduce_precision(n), n));
        }
    }
}
