//! The constant-term coefficients `w_{0,b,c}`, their symbolic extraction
//! from `omega^M_{D_lambda}`, and the constant bookkeeping that ties them
//! to `gamma*`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::gamma::{gamma, gamma_m, gamma_ratio, GammaValue};
use super::omega::{omega_d_lambda, ParityType};
use super::sympoly::{binomial, factorial, Monomial, SymPoly, Var};
use crate::error::{domain, Result};

/// Derived indices of an admissible `(k, l, m, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientIndices {
    /// Parity type of `(k, l, m)`.
    pub lambda: ParityType,
    /// `M = k - r - 2`.
    pub big_m: i64,
    /// `b = (k - l - lambda2) / 2`.
    pub b: i64,
    /// `c = (k - m - lambda3) / 2`.
    pub c: i64,
    /// `n = M + (l + m - lambda1) / 2`.
    pub n: i64,
}

/// Whether `k >= l >= m >= 1` and `k < l + m`.
pub fn is_balanced(k: i64, l: i64, m: i64) -> bool {
    k >= l && l >= m && m >= 1 && k < l + m
}

/// The admissible range of `r` for balanced `(k, l, m)`.
pub fn r_range(k: i64, l: i64, m: i64) -> Result<std::ops::RangeInclusive<i64>> {
    if !is_balanced(k, l, m) {
        return domain(format!("({k}, {l}, {m}) is not a balanced triple k >= l >= m"));
    }
    let lambda = ParityType::of_weights(k, l, m)?;
    let lambda1 = lambda.lambda1() as i64;
    // k - (l + m + lambda1)/2 <= r <= (l + m)/2 - 2
    let low = k - (l + m + lambda1) / 2;
    let high = (l + m - 4).div_euclid(2);
    Ok(low..=high)
}

/// Indices for `(k, l, m, r)`, checking the admissible range.
pub fn coefficient_indices(k: i64, l: i64, m: i64, r: i64) -> Result<CoefficientIndices> {
    let range = r_range(k, l, m)?;
    if !range.contains(&r) {
        return domain(format!("r = {r} is outside the admissible range {}..={}", range.start(), range.end()));
    }
    let lambda = ParityType::of_weights(k, l, m)?;
    let (l1, l2, l3) = (lambda.lambda1() as i64, lambda.lambda2() as i64, lambda.lambda3() as i64);
    let big_m = k - r - 2;
    Ok(CoefficientIndices { lambda, big_m, b: (k - l - l2) / 2, c: (k - m - l3) / 2, n: big_m + (l + m - l1) / 2 })
}

fn fact(n: i64) -> BigInt {
    factorial(n as u64)
}

/// Closed form of `w_{0,b,c}` for admissible `(k, l, m, r)`.
pub fn w_coefficient(k: i64, l: i64, m: i64, r: i64) -> Result<GammaValue> {
    let ix = coefficient_indices(k, l, m, r)?;
    let (l1, l2) = (ix.lambda.lambda1() as i64, ix.lambda.lambda2() as i64);
    let (big_m, b, c) = (ix.big_m, ix.b, ix.c);
    let four_pi = 3 * big_m - b - c - 2 * l1 - l2;
    let q = BigRational::new(
        fact(2 * big_m + l1) * fact(big_m) * fact(r - l2),
        fact(2 * big_m) * fact(big_m - l1 - l2 - b - c) * fact(b) * fact(c) * fact(r - l2 - b - c),
    );
    Ok(GammaValue::rational(q)
        .mul(&GammaValue::two_power(2 * four_pi + big_m + l1 + 2 * l2 - b - c))
        .mul(&GammaValue::pi_power2(2 * four_pi))
        .mul(&GammaValue::i_power(l1 - l2)))
}

/// `Q_{0,b,c}(B_inf, r)` extracted from the full expansion of
/// `W^{[k,r,lambda]}_B(y)` at the zero-diagonal matrix with off-diagonal
/// entries `b3 (12), b2 (13), b1 (23)`, as a polynomial in `b1, b2, b3`.
pub fn q_coefficient_symbolic(k: i64, l: i64, m: i64, r: i64) -> Result<SymPoly> {
    let ix = coefficient_indices(k, l, m, r)?;
    let (l1, l2) = (ix.lambda.lambda1() as i32, ix.lambda.lambda2() as i32);
    let omega = omega_d_lambda(ix.big_m as u32, ix.lambda)?;
    let entry = |i: Var, j: Var, b: Var| SymPoly::term(Monomial::var(i, 1).mul(&Monomial::var(j, 1)).mul(&Monomial::var(b, 2)), super::sympoly::int(1));
    let s_value = SymPoly::integer(l2 as i64 - r);
    let restricted = omega.substitute_all(&[
        (Var::S, s_value),
        (Var::T11, SymPoly::zero()),
        (Var::T22, SymPoly::zero()),
        (Var::T33, SymPoly::zero()),
        (Var::T12, entry(Var::Y1, Var::Y2, Var::B3)),
        (Var::T13, entry(Var::Y1, Var::Y3, Var::B2)),
        (Var::T23, entry(Var::Y2, Var::Y3, Var::B1)),
    ])?;
    let e = 2 * (r - k + 2) as i32;
    let prefactor = Monomial::var(Var::Y1, e + l1)
        .mul(&Monomial::var(Var::Y2, e + l1 + l2))
        .mul(&Monomial::var(Var::Y3, e + 2 * l1 + l2));
    let w = restricted.mul_monomial(&prefactor);
    Ok(w.coefficient(Var::Y1, 0).coefficient(Var::Y2, -2 * ix.b as i32).coefficient(Var::Y3, -2 * ix.c as i32))
}

/// Result of comparing the closed form of `w_{0,b,c}` with the symbolic
/// extraction.
#[derive(Clone, Debug, Serialize)]
pub struct CoefficientCheck {
    /// `(k, l, m, r)`.
    pub weights: [i64; 4],
    /// Derived indices.
    pub indices: CoefficientIndices,
    /// Closed form.
    pub w: GammaValue,
    /// `w (b1 b2 b3)^n b1^-k b2^-l b3^-m`.
    pub expected: SymPoly,
    /// Extracted coefficient.
    pub extracted: SymPoly,
    /// Whether they agree.
    pub holds: bool,
}

/// Compares [`w_coefficient`] against [`q_coefficient_symbolic`].
pub fn w_coefficient_check(k: i64, l: i64, m: i64, r: i64) -> Result<CoefficientCheck> {
    let indices = coefficient_indices(k, l, m, r)?;
    let w = w_coefficient(k, l, m, r)?;
    let n = indices.n as i32;
    let mono = Monomial::var(Var::B1, 2 * (n - k as i32))
        .mul(&Monomial::var(Var::B2, 2 * (n - l as i32)))
        .mul(&Monomial::var(Var::B3, 2 * (n - m as i32)));
    let expected = w.to_sympoly().mul_monomial(&mono);
    let extracted = q_coefficient_symbolic(k, l, m, r)?;
    let holds = expected == extracted;
    Ok(CoefficientCheck { weights: [k, l, m, r], indices, w, expected, extracted, holds })
}

/// Both sides of
/// `sum_{i<=b} C(r1,i) C(r1-i,b-i) C(r1-i,c-i) (-1)^i = r1! / (b! c! (r1-b-c)!)`.
pub fn binomial_identity(r1: i64, b: i64, c: i64) -> Result<(BigInt, BigInt)> {
    if r1 < 0 || b < 0 || c < 0 || b + c > r1 {
        return domain("need 0 <= b, c and b + c <= r1");
    }
    let mut lhs = BigInt::zero();
    for i in 0..=b {
        let t = binomial(r1, i) * binomial(r1 - i, b - i) * binomial(r1 - i, c - i);
        if i % 2 == 0 {
            lhs += t;
        } else {
            lhs -= t;
        }
    }
    let rhs = fact(r1) / (fact(b) * fact(c) * fact(r1 - b - c));
    Ok((lhs, rhs))
}

/// `gamma*_{(k,m,l)}(s)` at `s = s2 / 2`, with residue limits where two
/// Gamma factors share a pole.
pub fn gamma_star(k: i64, l: i64, m: i64, s2: i64) -> Result<GammaValue> {
    let lambda = ParityType::of_weights(k, l, m)?;
    let (l1, l2) = (lambda.lambda1() as i64, lambda.lambda2() as i64);
    let ratio1 = gamma_ratio(s2 + k - m - l + 2, s2 - (k - l1) + 2 * l2 + 2)?;
    let ratio2 = gamma_ratio(s2 + k + l1, s2 + k + l1 + 2)?;
    let four_pi2 = 2 * (l + m) - (k - l1) + 2 * l2;
    let numerator = GammaValue::i_power(k + 2 * l2 + l1)
        .mul(&ratio1)
        .mul(&ratio2)
        .mul(&GammaValue::pi_power2(3 * s2 + 2))
        .mul(&GammaValue::two_power(four_pi2))
        .mul(&GammaValue::pi_power2(four_pi2));
    let denominator = GammaValue::integer(4).mul(&gamma(s2 + m + l - k)?).mul(&gamma(2 * s2 + 2 * k)?);
    numerator.div(&denominator)
}

/// `C_1^{[k,r,lambda]}`.
pub fn c1_constant(k: i64, r: i64, lambda: ParityType) -> Result<GammaValue> {
    let l2 = lambda.lambda2() as i64;
    GammaValue::i_power(k - l2)
        .mul(&GammaValue::two_power(3 * (3 + 2 * r - k - l2)))
        .mul(&GammaValue::pi_power2(12))
        .div(&gamma_m(3, 2 * (k - r))?)
}

/// Both sides of the constant identity relating `gamma*` at the critical
/// point `s = (k - lambda1)/2 - r - 1` to `C_1 b! c! (4 pi)^(-b-c) 2^(k+l+m-3n) w`.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantCheck {
    /// Signed `gamma*` side.
    pub gamma_side: GammaValue,
    /// `C_1 w` side.
    pub coefficient_side: GammaValue,
    /// Powers of 2 in the rational parts of both sides.
    pub two_exponents: (i64, i64),
    /// Doubled powers of pi of both sides.
    pub pi_exponents2: (i64, i64),
    /// Whether the two sides are equal.
    pub holds: bool,
}

fn two_adic(q: &BigRational) -> i64 {
    if q.is_zero() {
        return 0;
    }
    let v = |n: &BigInt| n.trailing_zeros().unwrap_or(0) as i64;
    v(q.numer()) - v(q.denom())
}

/// Evaluates both sides of the constant identity for admissible `(k, l, m, r)`.
pub fn constant_check(k: i64, l: i64, m: i64, r: i64) -> Result<ConstantCheck> {
    let ix = coefficient_indices(k, l, m, r)?;
    let (l1, l2) = (ix.lambda.lambda1() as i64, ix.lambda.lambda2() as i64);
    let s2 = k - l1 - 2 * r - 2;
    let sign = GammaValue::integer(if (k + (m + l + l1) / 2 + l2) % 2 == 0 { 1 } else { -1 });
    let gamma_side = sign.mul(&gamma_star(k, l, m, s2)?);
    let coefficient_side = c1_constant(k, r, ix.lambda)?
        .mul(&GammaValue::integer(fact(ix.b) * fact(ix.c)))
        .mul(&GammaValue::two_power(-2 * (ix.b + ix.c)))
        .mul(&GammaValue::pi_power2(-2 * (ix.b + ix.c)))
        .mul(&GammaValue::two_power(k + l + m - 3 * ix.n))
        .mul(&w_coefficient(k, l, m, r)?);
    Ok(ConstantCheck {
        two_exponents: (two_adic(gamma_side.rational_part()), two_adic(coefficient_side.rational_part())),
        pi_exponents2: (gamma_side.pi_exponent2(), coefficient_side.pi_exponent2()),
        holds: gamma_side == coefficient_side,
        gamma_side,
        coefficient_side,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_weight() {
        assert_eq!(w_coefficient(2, 2, 2, 0).unwrap(), GammaValue::integer(1));
        let ix = coefficient_indices(2, 2, 2, 0).unwrap();
        assert_eq!((ix.big_m, ix.b, ix.c, ix.n), (0, 0, 0, 2));
        assert!(w_coefficient(6, 4, 4, 3).is_err());
    }

    #[test]
    fn binomial_small() {
        assert_eq!(binomial_identity(2, 1, 1).unwrap(), (BigInt::from(2), BigInt::from(2)));
    }

    #[test]
    fn symbolic_extraction_small() {
        for (k, l, m) in [(2, 2, 2), (3, 3, 2), (4, 3, 3), (4, 4, 2)] {
            for r in r_range(k, l, m).unwrap() {
                let check = w_coefficient_check(k, l, m, r).unwrap();
                assert!(check.holds, "{:?}: {} vs {}", check.weights, check.expected, check.extracted);
            }
        }
    }

    #[test]
    fn constants_small() {
        for (k, l, m) in [(2, 2, 2), (3, 3, 2), (4, 3, 3), (5, 4, 3)] {
            for r in r_range(k, l, m).unwrap() {
                let check = constant_check(k, l, m, r).unwrap();
                assert_eq!(check.pi_exponents2.0, check.pi_exponents2.1, "({k},{l},{m},{r})");
            }
        }
    }
}
