//! Elements `a + b sqrt(d)` of a real quadratic field `Q(sqrt d)`.
//!
//! Local factors at a prime `q` live in `Q(sqrt q)` once half-integral
//! powers of `q` appear. Rationals carry `d = 0` and combine with any field.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// `a + b sqrt(d)` with rational `a, b`; `d = 0` marks a rational value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticNumber {
    a: BigRational,
    b: BigRational,
    d: u64,
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl QuadraticNumber {
    /// The rational `a`.
    pub fn rational(a: BigRational) -> Self {
        QuadraticNumber { a, b: BigRational::zero(), d: 0 }
    }

    /// The integer `n`.
    pub fn int(n: i64) -> Self {
        Self::rational(q(n))
    }

    /// `a + b sqrt(d)`; `d` must not be a perfect square.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() {
            return Self::rational(a);
        }
        QuadraticNumber { a, b, d }
    }

    /// `sqrt(d)^e` for an integer `e`.
    pub fn sqrt_power(d: u64, e: i64) -> Self {
        let half = e.div_euclid(2);
        let base = q(d as i64).pow(half as i32);
        if e.rem_euclid(2) == 0 {
            Self::rational(base)
        } else {
            Self::new(BigRational::zero(), base, d)
        }
    }

    /// Rational part.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of `sqrt(d)`.
    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    /// The rational value when there is no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    fn radicand(&self, o: &Self) -> u64 {
        match (self.d, o.d) {
            (0, d) | (d, 0) => d,
            (x, y) if x == y => x,
            (x, y) => panic!("mixing Q(sqrt {x}) and Q(sqrt {y})"),
        }
    }

    /// Sign of the real number (uses the embedding with `sqrt d > 0`).
    pub fn signum(&self) -> i32 {
        // compare a against -b sqrt d
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * q(self.d as i64);
        if a2 > b2d {
            sa
        } else if a2 < b2d {
            sb
        } else {
            0
        }
    }
}

fn sgn(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl super::poly::Field for QuadraticNumber {
    fn zero() -> Self {
        Self::int(0)
    }
    fn one() -> Self {
        Self::int(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn add(&self, o: &Self) -> Self {
        let d = self.radicand(o);
        Self::new(&self.a + &o.a, &self.b + &o.b, d)
    }
    fn sub(&self, o: &Self) -> Self {
        let d = self.radicand(o);
        Self::new(&self.a - &o.a, &self.b - &o.b, d)
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self.radicand(o);
        let dq = q(d as i64);
        Self::new(&self.a * &o.a + &self.b * &o.b * dq, &self.a * &o.b + &self.b * &o.a, d)
    }
    fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by zero in Q(sqrt d)");
        let d = self.radicand(o);
        let norm = &o.a * &o.a - &o.b * &o.b * q(d as i64);
        let conj = QuadraticNumber { a: &o.a / &norm, b: -&o.b / &norm, d };
        self.mul(&Self::new(conj.a, conj.b, d))
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl From<BigRational> for QuadraticNumber {
    fn from(a: BigRational) -> Self {
        Self::rational(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::Field;

    #[test]
    fn sqrt_powers() {
        let r = QuadraticNumber::sqrt_power(5, 1);
        assert_eq!(r.mul(&r), QuadraticNumber::int(5));
        let inv = QuadraticNumber::sqrt_power(5, -3);
        assert_eq!(inv.mul(&QuadraticNumber::sqrt_power(5, 3)), QuadraticNumber::int(1));
        assert_eq!(r.div(&r), QuadraticNumber::int(1));
        assert_eq!(r.sub(&QuadraticNumber::int(2)).signum(), 1);
        assert_eq!(r.sub(&QuadraticNumber::int(3)).signum(), -1);
    }
}
