//! Exact constants of the form `q * pi^(e/2) * i^m`.
//!
//! Gamma values at positive integers and half-integers, `Gamma_C` at
//! positive integers and the Siegel Gamma function `Gamma_m` at such
//! arguments all land here. Arguments are passed doubled (`x2 = 2x`).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::sympoly::{factorial, i_power, real, Coef, Monomial, SymPoly, Var};
use crate::error::{domain, Result};

/// `rational * pi^(pi_exponent2 / 2) * i^imaginary`, with `imaginary` in
/// `{0, 1}` (the sign of `i^2` is folded into the rational part).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaValue {
    rational: BigRational,
    pi_exponent2: i64,
    imaginary: bool,
}

impl GammaValue {
    /// Normalized constructor from an arbitrary power of `i`.
    pub fn new(rational: BigRational, pi_exponent2: i64, i_exponent: i64) -> Self {
        if rational.is_zero() {
            return GammaValue { rational, pi_exponent2: 0, imaginary: false };
        }
        let k = i_exponent.rem_euclid(4);
        let rational = if k >= 2 { -rational } else { rational };
        GammaValue { rational, pi_exponent2, imaginary: k % 2 == 1 }
    }

    /// A rational constant.
    pub fn rational(q: BigRational) -> Self {
        Self::new(q, 0, 0)
    }

    /// An integer constant.
    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    /// `pi^(e2 / 2)`.
    pub fn pi_power2(e2: i64) -> Self {
        Self::new(BigRational::one(), e2, 0)
    }

    /// `i^k`.
    pub fn i_power(k: i64) -> Self {
        Self::new(BigRational::one(), 0, k)
    }

    /// `2^e` for any integer `e`.
    pub fn two_power(e: i64) -> Self {
        let p = BigInt::from(2).pow(e.unsigned_abs() as u32);
        Self::rational(if e >= 0 { BigRational::from_integer(p) } else { BigRational::new(BigInt::one(), p) })
    }

    /// Rational part.
    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    /// Doubled exponent of `pi`.
    pub fn pi_exponent2(&self) -> i64 {
        self.pi_exponent2
    }

    /// Whether a factor `i` is present.
    pub fn is_imaginary(&self) -> bool {
        self.imaginary
    }

    /// Whether the value is zero.
    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            &self.rational * &other.rational,
            self.pi_exponent2 + other.pi_exponent2,
            self.imaginary as i64 + other.imaginary as i64,
        )
    }

    /// Quotient.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return domain("division by a zero constant");
        }
        Ok(Self::new(
            &self.rational / &other.rational,
            self.pi_exponent2 - other.pi_exponent2,
            self.imaginary as i64 - other.imaginary as i64,
        ))
    }

    /// Integer power (negative powers of zero are a domain error).
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return domain("negative power of zero");
        }
        let n = e.unsigned_abs() as u32;
        let r = num_traits::pow::Pow::pow(&self.rational, n);
        let r = if e < 0 { r.recip() } else { r };
        Ok(Self::new(r, self.pi_exponent2 * e, self.imaginary as i64 * e))
    }

    /// Product of a list.
    pub fn product<'a>(items: impl IntoIterator<Item = &'a GammaValue>) -> Self {
        items.into_iter().fold(Self::integer(1), |acc, x| acc.mul(x))
    }

    /// As a polynomial constant in the `pi` variable.
    pub fn to_sympoly(&self) -> SymPoly {
        let c: Coef = real(self.rational.clone()) * i_power(self.imaginary as i64);
        SymPoly::term(Monomial::var(Var::Pi, self.pi_exponent2 as i32), c)
    }

    /// Numerical value as `(re, im)`.
    pub fn to_f64(&self) -> (f64, f64) {
        let q = ratio_to_f64(&self.rational) * std::f64::consts::PI.powf(self.pi_exponent2 as f64 / 2.0);
        if self.imaginary {
            (0.0, q)
        } else {
            (q, 0.0)
        }
    }
}

fn ratio_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for GammaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        match self.pi_exponent2 {
            0 => {}
            e if e % 2 == 0 => write!(f, "*pi^{}", e / 2)?,
            e => write!(f, "*pi^({e}/2)")?,
        }
        if self.imaginary {
            write!(f, "*i")?;
        }
        Ok(())
    }
}

impl Serialize for GammaValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GammaValue", 4)?;
        st.serialize_field("rational", &self.rational.to_string())?;
        st.serialize_field("pi_exponent", &BigRational::new(self.pi_exponent2.into(), 2.into()).to_string())?;
        st.serialize_field("imaginary", &self.imaginary)?;
        st.serialize_field("value", &self.to_string())?;
        st.end()
    }
}

/// Whether `x2 / 2` is a pole of Gamma (a non-positive integer).
pub fn is_pole(x2: i64) -> bool {
    x2 <= 0 && x2 % 2 == 0
}

/// `Gamma(x2 / 2)` for a half-integer argument that is not a pole.
pub fn gamma(x2: i64) -> Result<GammaValue> {
    if is_pole(x2) {
        return domain(format!("Gamma has a pole at {}", x2 / 2));
    }
    // shift up to a positive argument: Gamma(x) = Gamma(x + n) / (x)_n
    let mut shift = BigRational::one();
    let mut y2 = x2;
    while y2 <= 0 {
        shift *= BigRational::new(y2.into(), 2.into());
        y2 += 2;
    }
    let base = if y2 % 2 == 0 {
        GammaValue::integer(factorial((y2 / 2 - 1) as u64))
    } else {
        // Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
        let n = ((y2 - 1) / 2) as u64;
        let q = BigRational::new(factorial(2 * n), BigInt::from(4).pow(n as u32) * factorial(n));
        GammaValue::new(q, 1, 0)
    };
    base.div(&GammaValue::rational(shift))
}

/// `lim_{e -> 0} Gamma(x + e) / Gamma(y + e)` for half-integers with `x - y`
/// an integer. A pole in the numerator alone is a domain error.
pub fn gamma_ratio(x2: i64, y2: i64) -> Result<GammaValue> {
    if (x2 - y2) % 2 != 0 {
        return domain("Gamma ratio needs arguments differing by an integer");
    }
    match (is_pole(x2), is_pole(y2)) {
        (false, false) => gamma(x2)?.div(&gamma(y2)?),
        (false, true) => Ok(GammaValue::integer(0)),
        (true, false) => domain("Gamma ratio has a pole"),
        (true, true) => {
            // Gamma(-a + e) ~ (-1)^a / (a! e)
            let (a, b) = ((-x2 / 2) as u64, (-y2 / 2) as u64);
            let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
            Ok(GammaValue::rational(BigRational::new(BigInt::from(sign) * factorial(b), factorial(a))))
        }
    }
}

/// `Gamma_C(n) = 2 (2 pi)^(-n) Gamma(n)` for a positive integer `n`.
pub fn gamma_c(n: i64) -> Result<GammaValue> {
    if n <= 0 {
        return domain(format!("Gamma_C argument {n} is not positive"));
    }
    Ok(GammaValue::two_power(1 - n).mul(&GammaValue::pi_power2(-2 * n)).mul(&gamma(2 * n)?))
}

/// `Gamma_m(x) = pi^(m(m-1)/4) prod_{j<m} Gamma(x - j/2)` at `x = x2 / 2`.
pub fn gamma_m(m: i64, x2: i64) -> Result<GammaValue> {
    let mut out = GammaValue::pi_power2(m * (m - 1) / 2);
    for j in 0..m {
        out = out.mul(&gamma(x2 - j)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(10).unwrap(), GammaValue::integer(24));
        assert_eq!(gamma(1).unwrap(), GammaValue::pi_power2(1));
        assert_eq!(gamma(5).unwrap(), GammaValue::new(q(3, 4), 1, 0));
        // Gamma(-1/2) = -2 sqrt(pi)
        assert_eq!(gamma(-1).unwrap(), GammaValue::new(q(-2, 1), 1, 0));
        assert!(gamma(0).is_err());
    }

    #[test]
    fn gamma_c_products() {
        let v = gamma_c(2).unwrap().mul(&gamma_c(1).unwrap().powi(3).unwrap());
        assert_eq!(v, GammaValue::new(q(1, 2), -10, 0));
    }

    #[test]
    fn residue_ratio() {
        // Gamma(-2 + e) / Gamma(-1 + e) -> 1 / (-2)
        assert_eq!(gamma_ratio(-4, -2).unwrap(), GammaValue::rational(q(-1, 2)));
        assert_eq!(gamma_ratio(4, -2).unwrap(), GammaValue::integer(0));
        assert!(gamma_ratio(-2, 4).is_err());
    }

    #[test]
    fn imaginary_normalization() {
        let i = GammaValue::i_power(1);
        assert_eq!(i.mul(&i), GammaValue::integer(-1));
        assert_eq!(GammaValue::i_power(-1), GammaValue::new(q(-1, 1), 0, 1));
        assert_eq!(i.to_string(), "1*i");
    }
}
