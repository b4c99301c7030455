//! Cyclotomic quotient rings `R[x] / Phi_m(x)` for prime-power conductors.
//!
//! Elements are kept in the canonical basis `1, x, ..., x^(phi(m)-1)` where
//! `x` is a primitive `m`-th root of unity. Coefficients are rationals or
//! p-adic numbers through the [`Coefficient`] trait.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::padic::PadicNumber;

/// Ring operations needed on cyclotomic coefficients.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug {
    /// The additive identity in the same context as `self`.
    fn zero_like(&self) -> Self;
    /// The multiplicative identity in the same context as `self`.
    fn one_like(&self) -> Self;
    /// Whether the value is zero.
    fn is_zero_value(&self) -> bool;
    /// Sum.
    fn add_c(&self, other: &Self) -> Self;
    /// Difference.
    fn sub_c(&self, other: &Self) -> Self;
    /// Product.
    fn mul_c(&self, other: &Self) -> Self;
    /// Multiplication by an integer.
    fn scale_i(&self, k: i64) -> Self;
}

impl Coefficient for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_c(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_c(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_i(&self, k: i64) -> Self {
        self * BigRational::from_integer(k.into())
    }
}

impl Coefficient for PadicNumber {
    fn zero_like(&self) -> Self {
        PadicNumber::zero(self.prime(), self.absolute_precision().max(self.relative_precision() as i64))
    }
    fn one_like(&self) -> Self {
        PadicNumber::from_int(self.prime(), 1, self.absolute_precision().max(self.relative_precision() as i64))
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_c(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_c(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_i(&self, k: i64) -> Self {
        let n = self.absolute_precision().max(0);
        self * &PadicNumber::from_int(self.prime(), k, n.max(1) + 64)
    }
}

/// Element of `R[zeta_m]` with `m = l^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclotomicElement<T: Coefficient> {
    prime: u64,
    exponent: u32,
    coeffs: Vec<T>,
}

impl<T: Coefficient> CyclotomicElement<T> {
    /// Conductor `l^j`.
    pub fn conductor(&self) -> u64 {
        self.prime.pow(self.exponent)
    }

    /// Degree `phi(l^j)` of the ring over the coefficients.
    pub fn degree(prime: u64, exponent: u32) -> usize {
        if exponent == 0 {
            1
        } else {
            ((prime - 1) * prime.pow(exponent - 1)) as usize
        }
    }

    /// The constant `c`.
    pub fn constant(prime: u64, exponent: u32, c: T) -> Self {
        let mut coeffs = vec![c.zero_like(); Self::degree(prime, exponent)];
        coeffs[0] = c;
        CyclotomicElement { prime, exponent, coeffs }
    }

    /// Reduce a polynomial given by coefficients of `x^0 .. x^(m-1)` (where
    /// `x^m = 1`) to the canonical basis.
    pub fn from_exponent_coefficients(prime: u64, exponent: u32, mut full: Vec<T>) -> Self {
        let m = prime.pow(exponent) as usize;
        assert_eq!(full.len(), m, "expected one coefficient per power of zeta");
        let phi = Self::degree(prime, exponent);
        if exponent > 0 {
            let step = prime.pow(exponent - 1) as usize;
            // x^((l-1)step + r) = -sum_{i<l-1} x^(i step + r)
            for k in (phi..m).rev() {
                let c = full[k].clone();
                if c.is_zero_value() {
                    continue;
                }
                let r = k - phi;
                for i in 0..(prime as usize - 1) {
                    let idx = i * step + r;
                    full[idx] = full[idx].sub_c(&c);
                }
                full[k] = c.zero_like();
            }
        }
        full.truncate(phi);
        CyclotomicElement { prime, exponent, coeffs: full }
    }

    /// `c * zeta^k`.
    pub fn zeta_power(prime: u64, exponent: u32, k: i64, c: T) -> Self {
        let m = prime.pow(exponent) as i64;
        let mut full = vec![c.zero_like(); m as usize];
        full[k.rem_euclid(m) as usize] = c;
        Self::from_exponent_coefficients(prime, exponent, full)
    }

    /// Coefficients in the canonical basis.
    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    /// The value when it lies in the coefficient ring.
    pub fn rational_value(&self) -> Option<T> {
        if self.coeffs[1..].iter().all(|c| c.is_zero_value()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn same_ring(&self, other: &Self) {
        assert!(self.prime == other.prime && self.exponent == other.exponent, "cyclotomic ring mismatch");
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        self.same_ring(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add_c(b)).collect();
        CyclotomicElement { prime: self.prime, exponent: self.exponent, coeffs }
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.same_ring(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub_c(b)).collect();
        CyclotomicElement { prime: self.prime, exponent: self.exponent, coeffs }
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        self.same_ring(other);
        let m = self.conductor() as usize;
        let zero = self.coeffs[0].zero_like();
        let mut full = vec![zero; m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_value() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero_value() {
                    continue;
                }
                let k = (i + j) % m;
                full[k] = full[k].add_c(&a.mul_c(b));
            }
        }
        Self::from_exponent_coefficients(self.prime, self.exponent, full)
    }

    /// Multiplication by a coefficient.
    pub fn scale(&self, c: &T) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.mul_c(c)).collect();
        CyclotomicElement { prime: self.prime, exponent: self.exponent, coeffs }
    }

    /// Whether every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for (l, j) in [(2u64, 3u32), (3, 2), (5, 1), (7, 1)] {
            let m = l.pow(j) as usize;
            let e = CyclotomicElement::from_exponent_coefficients(l, j, vec![q(1); m]);
            assert!(e.is_zero());
        }
    }

    #[test]
    fn primitive_root_sum() {
        // sum of primitive cube roots of unity is -1
        let e = CyclotomicElement::zeta_power(3, 1, 1, q(1)).add(&CyclotomicElement::zeta_power(3, 1, 2, q(1)));
        assert_eq!(e.rational_value(), Some(q(-1)));
    }

    #[test]
    fn powers_multiply() {
        let a = CyclotomicElement::zeta_power(3, 2, 4, q(2));
        let b = CyclotomicElement::zeta_power(3, 2, 7, q(3));
        assert_eq!(a.mul(&b), CyclotomicElement::zeta_power(3, 2, 11, q(6)));
    }

    #[test]
    fn gauss_sum_squares_to_signed_prime() {
        // quadratic Gauss sum mod 5 squares to 5
        let mut full = vec![q(0); 5];
        for a in 1..5i64 {
            let leg = if [1, 4].contains(&a) { 1 } else { -1 };
            full[a as usize] = q(leg);
        }
        let g = CyclotomicElement::from_exponent_coefficients(5, 1, full);
        assert_eq!(g.mul(&g).rational_value(), Some(q(5)));
    }
}
