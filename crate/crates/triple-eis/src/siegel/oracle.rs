//! Brute-force Siegel series coefficients by character-sum enumeration.
//!
//! `c_j = sum psi(-tr(B z))` over `z` in `Sym_n(l^-j Z / Z)` with
//! `nu[z] = l^j`. The sum is accumulated per power of `zeta_(l^j)`, reduced
//! in the cyclotomic ring and required to be rational.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::matrix::HalfIntegralMatrix;
use super::smith::{ipow, nu_exponent};
use crate::arith::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};

/// Default cap on enumerated matrices.
pub const DEFAULT_MAX_TERMS: u64 = 100_000_000;

/// Number of matrices enumerated for `(n, l, j)`.
pub fn enumeration_size(n: usize, l: u64, j: u32) -> Option<u64> {
    let entries = (n * (n + 1) / 2) as u32;
    l.checked_pow(j.checked_mul(entries)?)
}

/// The coefficient `c_j` of the local Siegel series of `B` at `l`.
pub fn siegel_coefficient(b: &HalfIntegralMatrix, l: u64, j: u32, max_terms: u64) -> Result<BigInt> {
    if b.det2b() == 0 {
        return Err(Error::Domain("Siegel series needs det B != 0".into()));
    }
    if j == 0 {
        return Ok(BigInt::from(1));
    }
    let n = b.size();
    let size = enumeration_size(n, l, j).filter(|&s| s <= max_terms).ok_or_else(|| {
        Error::Resource(format!("enumerating Sym_{n}(l^-{j}Z/Z) for l = {l} exceeds {max_terms} terms"))
    })?;
    let m = ipow(l, j);
    let positions: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |k| (i, k))).collect();
    let weights: Vec<i128> =
        positions.iter().map(|&(i, k)| if i == k { b.b(i) as i128 } else { b.c(i, k) as i128 }).collect();
    let mut counts = vec![0i64; m as usize];
    let mut digits = vec![0i128; positions.len()];
    for _ in 0..size {
        let mut y = [[0i128; 3]; 3];
        for (&(i, k), &d) in positions.iter().zip(&digits) {
            y[i][k] = d;
            y[k][i] = d;
        }
        if nu_exponent(&y, n, l, j) == j {
            let tr: i128 = weights.iter().zip(&digits).map(|(w, d)| w * d).sum();
            counts[(-tr).rem_euclid(m) as usize] += 1;
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < m {
                break;
            }
            *d = 0;
        }
    }
    let full: Vec<BigRational> = counts.iter().map(|&c| BigRational::from_integer(c.into())).collect();
    let element = CyclotomicElement::from_exponent_coefficients(l, j, full);
    let value = element
        .rational_value()
        .ok_or_else(|| Error::Internal(format!("character sum for {b} at l = {l}, j = {j} is not rational")))?;
    if !value.is_integer() {
        return Err(Error::Internal("character sum is not an integer".into()));
    }
    Ok(value.to_integer())
}

/// Coefficients `c_0 .. c_jmax`.
pub fn siegel_series_oracle(b: &HalfIntegralMatrix, l: u64, jmax: u32, max_terms: u64) -> Result<Vec<BigInt>> {
    (0..=jmax).map(|j| siegel_coefficient(b, l, j, max_terms)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let b = HalfIntegralMatrix::size1(1);
        assert_eq!(siegel_coefficient(&b, 3, 0, 10).unwrap(), BigInt::from(1));
        assert_eq!(siegel_coefficient(&b, 3, 1, 10).unwrap(), BigInt::from(-1));
        assert!(siegel_coefficient(&HalfIntegralMatrix::size3(1, 1, 1, 0, 0, 0), 5, 3, 1000).is_err());
    }
}
