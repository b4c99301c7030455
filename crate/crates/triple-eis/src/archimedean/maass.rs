//! Whittaker functions of weight-raised discrete series vectors and the
//! Maass-Shimura operator, as polynomials in `y` (the variable `Y1`) and
//! `pi`, with the factor `exp(-2 pi y)` left implicit.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::gamma::{gamma_c, GammaValue};
use super::sympoly::{binomial, factorial, real, Monomial, SymPoly, Var};
use crate::error::{domain, Result};

/// Closed form of `W_k^{[t]}(diag(y, 1)) exp(2 pi y)`:
/// `sum_j (-4 pi)^(j-t) C(t,j) Gamma(t+k)/Gamma(j+k) y^(k/2+j)`.
pub fn whittaker_value(k: i64, t: i64) -> Result<SymPoly> {
    if k < 1 || t < 0 {
        return domain("need k >= 1 and t >= 0");
    }
    let mut out = SymPoly::zero();
    for j in 0..=t {
        let e = j - t;
        let four = BigInt::from(4).pow(e.unsigned_abs() as u32);
        let sign = if e % 2 == 0 { 1 } else { -1 };
        let q = BigRational::new(BigInt::from(sign) * binomial(t, j) * factorial((t + k - 1) as u64), factorial((j + k - 1) as u64))
            * if e >= 0 { BigRational::from_integer(four) } else { BigRational::new(1.into(), four) };
        let mono = Monomial::var(Var::Y1, (k + 2 * j) as i32).mul(&Monomial::var(Var::Pi, 2 * e as i32));
        out.add_term(mono, real(q));
    }
    Ok(out)
}

/// `y^(k/2 + t) delta_k^t (e^(2 pi i z))` with the exponential factor
/// dropped, by iterating `delta_w = (1/(2 pi i)) (d/dz + w/(2 i y))`.
///
/// On `y^-n e^(2 pi i z)` one step gives `y^-n - (w - n)/(4 pi) y^(-n-1)`.
pub fn maass_shimura(k: i64, t: i64) -> Result<SymPoly> {
    if k < 1 || t < 0 {
        return domain("need k >= 1 and t >= 0");
    }
    let mut p = SymPoly::one();
    for step in 0..t {
        let w = k + 2 * step;
        let mut next = SymPoly::zero();
        for (mono, c) in p.terms() {
            let n = -(mono.exponent2(Var::Y1) as i64) / 2;
            next.add_term(*mono, c.clone());
            let factor = real(BigRational::new(BigInt::from(-(w - n)), BigInt::from(4)));
            let lowered = mono.mul(&Monomial::var(Var::Y1, -2)).mul(&Monomial::var(Var::Pi, -2));
            next.add_term(lowered, c * factor);
        }
        p = next;
    }
    Ok(p.mul_monomial(&Monomial::var(Var::Y1, (k + 2 * t) as i32)))
}

/// `Gamma_V(0) = Gamma_C(kP) prod_i Gamma_C(1 + kP - k_i)`.
pub fn motivic_gamma(weights: [i64; 3], k_p: i64) -> Result<GammaValue> {
    let mut out = gamma_c(k_p)?;
    for k in weights {
        let arg = 1 + k_p - k;
        if arg <= 0 {
            return domain(format!("Gamma_C argument 1 + {k_p} - {k} is not positive"));
        }
        out = out.mul(&gamma_c(arg)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_two_first_raise() {
        let w = whittaker_value(2, 1).unwrap();
        let expected = SymPoly::var_power2(Var::Y1, 4).sub(&SymPoly::term(
            Monomial::var(Var::Y1, 2).mul(&Monomial::var(Var::Pi, -2)),
            real(BigRational::new(1.into(), 2.into())),
        ));
        assert_eq!(w, expected);
        assert_eq!(whittaker_value(3, 0).unwrap(), SymPoly::var_power2(Var::Y1, 3));
    }

    #[test]
    fn iteration_matches_closed_form() {
        for k in 1..=4 {
            for t in 0..=3 {
                assert_eq!(maass_shimura(k, t).unwrap(), whittaker_value(k, t).unwrap(), "k = {k}, t = {t}");
            }
        }
    }

    #[test]
    fn motivic_gamma_examples() {
        let v = motivic_gamma([2, 2, 2], 2).unwrap();
        assert_eq!(v, GammaValue::new(BigRational::new(1.into(), 2.into()), -10, 0));
        assert_eq!(v.pi_exponent2(), -10);
        let w = motivic_gamma([3, 3, 2], 3).unwrap();
        let direct = [3, 1, 1, 2].iter().map(|n| gamma_c(*n).unwrap()).collect::<Vec<_>>();
        assert_eq!(w, GammaValue::product(&direct));
        assert!(motivic_gamma([4, 2, 2], 2).is_err());
    }
}
