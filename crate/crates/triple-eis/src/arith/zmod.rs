//! Machine-word residues modulo `p^n`.
//!
//! The Iwasawa-series kernels and the bulk family checks work with integral
//! values modulo a fixed power of `p`; [`Zmod`] keeps those as `u128`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::padic::{pow_big, PadicNumber};
use crate::error::{domain, Result};

/// The ring `Z / p^n Z` with `p^n < 2^126`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zmod {
    p: u64,
    n: u32,
    m: u128,
}

impl Zmod {
    /// Residues modulo `p^n`.
    pub fn new(p: u64, n: u32) -> Result<Self> {
        let mut m: u128 = 1;
        for _ in 0..n {
            m = match m.checked_mul(p as u128) {
                Some(v) if v < (1u128 << 126) => v,
                _ => return Err(crate::Error::Resource(format!("{p}^{n} exceeds machine residues"))),
            };
        }
        Ok(Zmod { p, n, m })
    }

    /// The prime.
    pub fn prime(&self) -> u64 {
        self.p
    }

    /// The exponent `n`.
    pub fn exponent(&self) -> u32 {
        self.n
    }

    /// The modulus `p^n`.
    pub fn modulus(&self) -> u128 {
        self.m
    }

    /// Reduction of a signed integer.
    pub fn from_i128(&self, x: i128) -> u128 {
        let m = self.m as i128;
        (((x % m) + m) % m) as u128
    }

    /// Reduction of a big integer.
    pub fn from_big(&self, x: &BigInt) -> u128 {
        x.mod_floor(&BigInt::from(self.m)).to_u128().unwrap()
    }

    /// Reduction of an integral p-adic number known modulo at least `p^n`.
    pub fn from_padic(&self, x: &PadicNumber) -> Result<u128> {
        Ok(self.from_big(&x.to_residue(self.n)?))
    }

    /// Lift to a p-adic number known modulo `p^n`.
    pub fn to_padic(&self, x: u128) -> PadicNumber {
        PadicNumber::from_bigint(self.p, &BigInt::from(x), self.n as i64)
    }

    /// Sum.
    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    /// Difference.
    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    /// Negation.
    #[inline]
    pub fn neg(&self, a: u128) -> u128 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    /// Product.
    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        if self.m <= 1u128 << 32 {
            ((a as u64 * b as u64) % self.m as u64) as u128
        } else if self.m <= 1u128 << 64 {
            (a * b) % self.m
        } else {
            mul_mod_wide(a, b, self.m)
        }
    }

    /// Power with a non-negative exponent.
    pub fn pow(&self, a: u128, mut e: u128) -> u128 {
        let mut base = a % self.m;
        let mut acc = 1 % self.m;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: u128) -> Result<u128> {
        let m = self.m as i128;
        let (mut r0, mut r1) = ((a % self.m) as i128, m);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        if r0 != 1 {
            return domain("inverse of a non-unit residue");
        }
        Ok(s0.rem_euclid(m) as u128)
    }

    /// Teichmüller lift of a unit, as `a^(p^(n-1))`.
    pub fn teichmuller(&self, a: i128) -> Result<u128> {
        if a.rem_euclid(self.p as i128) == 0 {
            return domain(format!("{a} is not a unit modulo {}", self.p));
        }
        let e = (self.p as u128).pow(self.n - 1);
        Ok(self.pow(self.from_i128(a), e))
    }

    /// `p^e` reduced.
    pub fn prime_power(&self, e: u32) -> u128 {
        if e >= self.n {
            0
        } else {
            pow_big(self.p, e).to_u128().unwrap()
        }
    }
}

/// `a * b mod m` for moduli above `2^64`, by doubling.
fn mul_mod_wide(a: u128, b: u128, m: u128) -> u128 {
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc += a;
            if acc >= m {
                acc -= m;
            }
        }
        a <<= 1;
        if a >= m {
            a -= m;
        }
        b >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::padic::teichmuller;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn wide_and_narrow_products_agree(a in any::<u64>(), b in any::<u64>()) {
            let z = Zmod::new(5, 30).unwrap();
            let (a, b) = (a as u128 % z.modulus(), b as u128 % z.modulus());
            let expect = (BigInt::from(a) * BigInt::from(b)).mod_floor(&BigInt::from(z.modulus()));
            prop_assert_eq!(BigInt::from(z.mul(a, b)), expect);
        }

        #[test]
        fn teichmuller_matches_padic_lift(a in -100_000i64..100_000, n in 1u32..25) {
            prop_assume!(a % 7 != 0);
            let z = Zmod::new(7, n).unwrap();
            let w = teichmuller(&BigInt::from(a), 7, n).unwrap();
            prop_assert_eq!(z.teichmuller(a as i128).unwrap(), z.from_padic(&w).unwrap());
        }

        #[test]
        fn inverse_is_inverse(a in 1u64..1_000_000) {
            let z = Zmod::new(7, 15).unwrap();
            prop_assume!(a % 7 != 0);
            let x = a as u128;
            prop_assert_eq!(z.mul(x, z.inv(x).unwrap()), 1);
        }
    }

    #[test]
    fn modulus_limits() {
        assert!(Zmod::new(5, 54).is_ok());
        assert!(Zmod::new(5, 60).is_err());
        let z = Zmod::new(5, 4).unwrap();
        assert_eq!(z.teichmuller(2).unwrap(), 182);
        assert_eq!(z.pow(182, 4), 1);
    }
}
