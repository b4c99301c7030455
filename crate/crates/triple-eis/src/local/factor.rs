//! Rational functions of the local variable `t = q^(-s)` in factored form.
//!
//! Every local L, gamma and epsilon factor handled here is a product of a
//! constant, a power of `t` and linear factors `(1 - c t)^m`. Keeping that
//! shape makes reduction canonical: two functions are equal exactly when
//! their constants, `t`-powers and merged factor multisets agree.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{Field, Poly, QuadraticNumber};
use crate::error::{domain, Result};

/// The linear factor `(1 - coefficient * t)^multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFactor {
    /// The nonzero coefficient `c`.
    pub coefficient: QuadraticNumber,
    /// Nonzero multiplicity; negative values are poles.
    pub multiplicity: i64,
}

/// `constant * t^t_power * prod (1 - c t)^m` with distinct nonzero `c`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalFunctionT {
    constant: QuadraticNumber,
    t_power: i64,
    factors: Vec<LinearFactor>,
}

fn qn(x: i64) -> QuadraticNumber {
    QuadraticNumber::int(x)
}

fn power(x: &QuadraticNumber, e: i64) -> QuadraticNumber {
    let base = if e < 0 { qn(1).div(x) } else { x.clone() };
    let mut acc = qn(1);
    for _ in 0..e.unsigned_abs() {
        acc = acc.mul(&base);
    }
    acc
}

impl RationalFunctionT {
    /// The constant function `c`.
    pub fn constant(c: QuadraticNumber) -> Self {
        RationalFunctionT { constant: c, t_power: 0, factors: Vec::new() }
    }

    /// The constant function `1`.
    pub fn one() -> Self {
        Self::constant(qn(1))
    }

    /// The monomial `c t^d`.
    pub fn monomial(c: QuadraticNumber, d: i64) -> Self {
        if c.is_zero() {
            return Self::constant(c);
        }
        RationalFunctionT { constant: c, t_power: d, factors: Vec::new() }
    }

    /// `1 - c t`.
    pub fn linear(c: QuadraticNumber) -> Self {
        if c.is_zero() {
            return Self::one();
        }
        RationalFunctionT {
            constant: qn(1),
            t_power: 0,
            factors: vec![LinearFactor { coefficient: c, multiplicity: 1 }],
        }
    }

    /// `1 - a t^(-1)`, rewritten as `-a t^(-1) (1 - a^(-1) t)`.
    pub fn linear_in_inverse(a: QuadraticNumber) -> Self {
        if a.is_zero() {
            return Self::one();
        }
        Self::monomial(a.neg(), -1).mul(&Self::linear(qn(1).div(&a)))
    }

    /// Whether this is the zero function.
    pub fn is_zero(&self) -> bool {
        self.constant.is_zero()
    }

    /// Leading constant.
    pub fn leading_constant(&self) -> &QuadraticNumber {
        &self.constant
    }

    /// Power of `t` in front of the linear factors.
    pub fn t_power(&self) -> i64 {
        self.t_power
    }

    /// The merged linear factors.
    pub fn factors(&self) -> &[LinearFactor] {
        &self.factors
    }

    /// `(c, d)` when the function is the monomial `c t^d`.
    pub fn as_monomial(&self) -> Option<(QuadraticNumber, i64)> {
        self.factors.is_empty().then(|| (self.constant.clone(), self.t_power))
    }

    fn push_factor(&mut self, c: &QuadraticNumber, m: i64) {
        if m == 0 {
            return;
        }
        match self.factors.iter().position(|f| &f.coefficient == c) {
            Some(i) => {
                self.factors[i].multiplicity += m;
                if self.factors[i].multiplicity == 0 {
                    self.factors.swap_remove(i);
                }
            }
            None => self.factors.push(LinearFactor { coefficient: c.clone(), multiplicity: m }),
        }
    }

    /// Product.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::constant(qn(0));
        }
        let mut out = RationalFunctionT {
            constant: self.constant.mul(&o.constant),
            t_power: self.t_power + o.t_power,
            factors: self.factors.clone(),
        };
        for f in &o.factors {
            out.push_factor(&f.coefficient, f.multiplicity);
        }
        out
    }

    /// Integer power; negative exponents need a nonzero function.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return domain("inverse of the zero rational function");
        }
        if self.is_zero() {
            return Ok(if e == 0 { Self::one() } else { self.clone() });
        }
        Ok(RationalFunctionT {
            constant: power(&self.constant, e),
            t_power: self.t_power * e,
            factors: if e == 0 {
                Vec::new()
            } else {
                self.factors
                    .iter()
                    .map(|f| LinearFactor { coefficient: f.coefficient.clone(), multiplicity: f.multiplicity * e })
                    .collect()
            },
        })
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Result<Self> {
        self.powi(-1)
    }

    /// Quotient.
    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inverse()?))
    }

    /// Substitution `t -> a t`, which realises a shift `s -> s + k` when
    /// `a = q^(-k)`.
    pub fn scale_variable(&self, a: &QuadraticNumber) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = RationalFunctionT {
            constant: self.constant.mul(&power(a, self.t_power)),
            t_power: self.t_power,
            factors: Vec::new(),
        };
        for f in &self.factors {
            out.push_factor(&f.coefficient.mul(a), f.multiplicity);
        }
        out
    }

    /// Substitution `t -> a / t`; with `a = q^(-1)` this is `s -> 1 - s`.
    pub fn reflect(&self, a: &QuadraticNumber) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = Self::monomial(self.constant.mul(&power(a, self.t_power)), -self.t_power);
        for f in &self.factors {
            let lin = Self::linear_in_inverse(f.coefficient.mul(a));
            out = out.mul(&lin.powi(f.multiplicity).expect("nonzero linear factor"));
        }
        out
    }

    /// Value at a nonzero point; poles are domain errors.
    pub fn evaluate(&self, t: &QuadraticNumber) -> Result<QuadraticNumber> {
        if t.is_zero() {
            return domain("evaluation at t = 0");
        }
        let mut acc = self.constant.mul(&power(t, self.t_power));
        for f in &self.factors {
            let v = qn(1).sub(&f.coefficient.mul(t));
            if v.is_zero() {
                if f.multiplicity < 0 {
                    return domain(format!("pole at t = {t}"));
                }
                return Ok(qn(0));
            }
            acc = acc.mul(&power(&v, f.multiplicity));
        }
        Ok(acc)
    }

    /// Order of vanishing at a nonzero point (negative at poles).
    pub fn order_at(&self, t: &QuadraticNumber) -> i64 {
        self.factors.iter().filter(|f| qn(1).sub(&f.coefficient.mul(t)).is_zero()).map(|f| f.multiplicity).sum()
    }

    fn expand(&self, positive: bool) -> Poly<QuadraticNumber> {
        let mut p = Poly::one();
        for f in self.factors.iter().filter(|f| (f.multiplicity > 0) == positive) {
            let lin = Poly::linear(qn(1), f.coefficient.neg());
            for _ in 0..f.multiplicity.unsigned_abs() {
                p = p.mul(&lin);
            }
        }
        p
    }

    /// Numerator as a polynomial in `t` (after clearing negative powers of
    /// `t` into the denominator).
    pub fn numerator(&self) -> Poly<QuadraticNumber> {
        let mut p = self.expand(true).scale(&self.constant);
        if self.t_power > 0 {
            let mut shift = vec![qn(0); self.t_power as usize];
            shift.push(qn(1));
            p = p.mul(&Poly::new(shift));
        }
        p
    }

    /// Denominator as a polynomial in `t`, with constant term one unless a
    /// negative power of `t` is present.
    pub fn denominator(&self) -> Poly<QuadraticNumber> {
        let mut p = self.expand(false);
        if self.t_power < 0 {
            let mut shift = vec![qn(0); (-self.t_power) as usize];
            shift.push(qn(1));
            p = p.mul(&Poly::new(shift));
        }
        p
    }
}

impl PartialEq for RationalFunctionT {
    fn eq(&self, o: &Self) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        self.constant == o.constant
            && self.t_power == o.t_power
            && self.factors.len() == o.factors.len()
            && self.factors.iter().all(|f| o.factors.contains(f))
    }
}

impl fmt::Display for RationalFunctionT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.constant)?;
        if self.t_power != 0 {
            write!(f, " t^{}", self.t_power)?;
        }
        for lf in &self.factors {
            write!(f, " (1 - ({}) t)^{}", lf.coefficient, lf.multiplicity)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> QuadraticNumber {
        QuadraticNumber::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn cancellation_and_equality() {
        let a = RationalFunctionT::linear(r(2, 3));
        let b = a.inverse().unwrap();
        assert_eq!(a.mul(&b), RationalFunctionT::one());
        let x = a.mul(&RationalFunctionT::linear(r(1, 5)));
        let y = RationalFunctionT::linear(r(1, 5)).mul(&a);
        assert_eq!(x, y);
        assert_ne!(x, a);
    }

    #[test]
    fn expansion_matches_evaluation() {
        let f = RationalFunctionT::monomial(r(3, 1), 2)
            .mul(&RationalFunctionT::linear(r(1, 2)))
            .mul(&RationalFunctionT::linear(r(5, 1)).inverse().unwrap());
        let t = r(7, 3);
        let direct = f.numerator().eval(&t).div(&f.denominator().eval(&t));
        assert_eq!(direct, f.evaluate(&t).unwrap());
        assert_eq!(f.order_at(&r(2, 1)), 1);
        assert_eq!(f.order_at(&r(1, 5)), -1);
        assert!(f.evaluate(&r(1, 5)).is_err());
    }

    #[test]
    fn reflection_is_an_involution() {
        let a = r(1, 7);
        let f = RationalFunctionT::monomial(r(-2, 1), 3)
            .mul(&RationalFunctionT::linear(r(4, 1)).powi(2).unwrap())
            .mul(&RationalFunctionT::linear_in_inverse(r(3, 1)));
        assert_eq!(f.reflect(&a).reflect(&a), f);
        let t = r(5, 2);
        assert_eq!(f.reflect(&a).evaluate(&t).unwrap(), f.evaluate(&a.div(&t)).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let f = RationalFunctionT::monomial(QuadraticNumber::sqrt_power(5, 3), -1)
            .mul(&RationalFunctionT::linear(QuadraticNumber::sqrt_power(5, -1)));
        let s = serde_json::to_string(&f).unwrap();
        let g: RationalFunctionT = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }

    proptest! {
        #[test]
        fn scaling_matches_evaluation(n in 1i64..20, d in 1i64..20, c in -9i64..9, tn in 1i64..9) {
            prop_assume!(c != 0);
            let a = r(n, d);
            let f = RationalFunctionT::linear(r(c, 1)).mul(&RationalFunctionT::monomial(r(2, 1), 1));
            let t = r(tn, 11);
            prop_assume!(!qn(1).sub(&r(c, 1).mul(&a).mul(&t)).is_zero());
            prop_assert_eq!(f.scale_variable(&a).evaluate(&t).unwrap(), f.evaluate(&a.mul(&t)).unwrap());
        }
    }
}
