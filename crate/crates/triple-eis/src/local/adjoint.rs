//! Modified Euler factor of the adjoint p-adic L-function at a point of
//! character `chi = omega^j` and conductor exponent `n`.

use num_bigint::BigInt;

use crate::arith::{CyclotomicElement, PadicNumber};
use crate::arith::padic::{is_prime, teichmuller};
use crate::error::{domain, Result};

type Value = CyclotomicElement<PadicNumber>;

/// Gauss sum `g(omega^j) = sum_{a mod p} omega^j(a) zeta_p^a` in `Q_p(zeta_p)`.
pub fn gauss_sum(p: u64, exponent: u64, prec: u32) -> Result<Value> {
    let mut full = vec![PadicNumber::zero(p, prec as i64); p as usize];
    for (a, slot) in full.iter_mut().enumerate().skip(1) {
        *slot = teichmuller(&BigInt::from(a), p, prec)?.pow((exponent % (p - 1)) as u32);
    }
    Ok(Value::from_exponent_coefficients(p, 1, full))
}

/// `omega^j(-1) = (-1)^j`.
fn sign_at_minus_one(exponent: u64) -> i64 {
    if exponent.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `E_p(Ad)` for the ordinary unit root `alpha`, weight `k`, character
/// `omega^exponent` and conductor exponent `n` of the arithmetic point.
pub fn ep_adjoint(alpha: &PadicNumber, weight: u32, exponent: u64, conductor_exponent: u32, prec: u32) -> Result<Value> {
    let p = alpha.prime();
    if p < 3 || !is_prime(p) {
        return domain("p must be an odd prime");
    }
    if alpha.is_zero() || alpha.valuation() != 0 {
        return domain("alpha must be a p-adic unit");
    }
    if weight < 2 {
        return domain("weight must be at least 2");
    }
    let trivial = exponent.is_multiple_of(p - 1);
    let inv_sq = alpha.powi(-2)?;
    match conductor_exponent {
        0 if trivial => {
            let one = PadicNumber::from_int(p, 1, prec as i64);
            let pk1 = PadicNumber::new(p, weight as i64 - 1, BigInt::from(1), prec);
            let pk2 = PadicNumber::new(p, weight as i64 - 2, BigInt::from(1), prec);
            let f1 = &one - &(&inv_sq * &pk1);
            let f2 = &one - &(&inv_sq * &pk2);
            Ok(Value::constant(p, 1, &f1 * &f2))
        }
        0 => domain("an unramified point needs the trivial character"),
        1 if trivial => Ok(Value::constant(p, 1, -&inv_sq)),
        1 => {
            let g = gauss_sum(p, exponent, prec)?;
            let factor = &inv_sq * &PadicNumber::from_int(p, sign_at_minus_one(exponent), prec as i64);
            Ok(g.scale(&factor))
        }
        _ => domain("conductor exponents above 1 are not supported"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_sum_norm() {
        let p = 7;
        for j in 1..(p - 1) {
            let g = gauss_sum(p, j, 12).unwrap();
            let h = gauss_sum(p, p - 1 - j, 12).unwrap();
            let prod = g.mul(&h).rational_value().expect("product is rational");
            let expected = PadicNumber::from_int(p, sign_at_minus_one(j) * p as i64, 12);
            assert!(prod.agrees_with(&expected, 10), "j = {j}");
        }
    }

    #[test]
    fn unramified_and_trivial_ramified() {
        let p = 5;
        let alpha = PadicNumber::from_int(p, 2, 20);
        let e = ep_adjoint(&alpha, 2, 0, 0, 20).unwrap().rational_value().unwrap();
        // (1 - 5/4)(1 - 1/4) = -3/16
        let expected = PadicNumber::from_rational(p, &num_rational::BigRational::new((-3).into(), 16.into()), 20);
        assert!(e.agrees_with(&expected, 18));
        let e = ep_adjoint(&alpha, 2, 4, 1, 20).unwrap().rational_value().unwrap();
        let expected = PadicNumber::from_rational(p, &num_rational::BigRational::new((-1).into(), 4.into()), 20);
        assert!(e.agrees_with(&expected, 18));
        assert!(ep_adjoint(&alpha, 2, 1, 2, 20).is_err());
        assert!(ep_adjoint(&alpha, 2, 1, 1, 20).unwrap().rational_value().is_none());
    }
}
