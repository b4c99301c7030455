//! Elementary divisors over `Z_l` and the level `nu[z]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::padic::{pow_big, valuation_big, valuation_i128};
use crate::error::{domain, Result};

/// `l^e` as `i128`.
pub fn ipow(l: u64, e: u32) -> i128 {
    (l as i128).pow(e)
}

/// Inverse of a unit modulo `m`.
pub fn inv_mod_i128(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not a unit");
    s0.rem_euclid(m)
}

/// Exponents of the elementary divisors of the leading `n x n` block of `m`
/// over `Z_l`, each capped at `k` (entries are read modulo `l^k`).
pub fn smith_exponents(m: &[[i128; 3]; 3], n: usize, l: u64, k: u32) -> Vec<u32> {
    let modulus = ipow(l, k);
    let mut a = [[0i128; 3]; 3];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = m[i][j].rem_euclid(modulus);
        }
    }
    let mut exps = Vec::with_capacity(n);
    for step in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in step..n {
            for j in step..n {
                if let Some(v) = valuation_i128(a[i][j], l) {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, i, j)) = best else {
            exps.extend(std::iter::repeat_n(k, n - step));
            break;
        };
        a.swap(step, i);
        for row in a.iter_mut() {
            row.swap(step, j);
        }
        let lv = ipow(l, v);
        let inv = inv_mod_i128(a[step][step] / lv, modulus);
        for r in (step + 1)..n {
            let f = ((a[r][step] / lv) % modulus * inv).rem_euclid(modulus);
            for c in step..n {
                a[r][c] = (a[r][c] - f * a[step][c] % modulus).rem_euclid(modulus);
            }
        }
        for c in (step + 1)..n {
            let f = ((a[step][c] / lv) % modulus * inv).rem_euclid(modulus);
            for r in step..n {
                a[r][c] = (a[r][c] - f * a[r][step] % modulus).rem_euclid(modulus);
            }
        }
        exps.push(v);
    }
    exps
}

/// `log_l nu[y / l^j]` for an integer matrix `y`: the sum of the
/// denominator exponents of the elementary divisors of `y / l^j`.
pub fn nu_exponent(y: &[[i128; 3]; 3], n: usize, l: u64, j: u32) -> u32 {
    if j == 0 {
        return 0;
    }
    smith_exponents(y, n, l, j).iter().map(|&e| j - e.min(j)).sum()
}

/// The level `nu[z] = [z Z_l^n + Z_l^n : Z_l^n]` of a symmetric rational
/// matrix whose denominators are powers of `l`.
pub fn nu_level(z: &[Vec<BigRational>], l: u64) -> Result<BigInt> {
    let n = z.len();
    if n == 0 || n > 3 || z.iter().any(|r| r.len() != n) {
        return domain("nu_level expects a square matrix of size 1 to 3");
    }
    let mut j = 0u32;
    for x in z.iter().flatten() {
        let d = x.denom();
        let v = valuation_big(d, l).unwrap();
        if d != &pow_big(l, v) {
            return domain("denominator is not a power of l");
        }
        j = j.max(v);
    }
    let scale = pow_big(l, j);
    let mut y = [[0i128; 3]; 3];
    for i in 0..n {
        for k in 0..n {
            let v = (&z[i][k] * BigRational::from_integer(scale.clone())).to_integer();
            let reduced = if j == 0 { BigInt::zero() } else { v.mod_floor(&scale) };
            y[i][k] = reduced.to_i128().expect("entries fit in i128");
        }
    }
    Ok(num_traits::pow(BigInt::from(l), nu_exponent(&y, n, l, j) as usize) * BigInt::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn nu_level_examples() {
        let z = vec![vec![r(1, 3), r(0, 1), r(0, 1)], vec![r(0, 1); 3], vec![r(0, 1); 3]];
        assert_eq!(nu_level(&z, 3).unwrap(), BigInt::from(3));
        let z = vec![vec![r(1, 3), r(0, 1), r(0, 1)], vec![r(0, 1), r(1, 9), r(0, 1)], vec![r(0, 1); 3]];
        assert_eq!(nu_level(&z, 3).unwrap(), BigInt::from(27));
        let z = vec![vec![r(4, 1), r(1, 1)], vec![r(1, 1), r(-2, 1)]];
        assert_eq!(nu_level(&z, 5).unwrap(), BigInt::from(1));
        assert!(nu_level(&[vec![r(1, 6)]], 2).is_err());
    }

    #[test]
    fn smith_of_non_diagonal() {
        // [[2, 1], [1, 2]] has determinant 3: divisors 1, 3 over Z_3
        let m = [[2, 1, 0], [1, 2, 0], [0, 0, 0]];
        assert_eq!(smith_exponents(&m, 2, 3, 6), vec![0, 1]);
        assert_eq!(smith_exponents(&m, 2, 2, 6), vec![0, 0]);
    }
}
