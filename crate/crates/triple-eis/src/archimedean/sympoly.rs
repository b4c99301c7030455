//! Sparse multivariate polynomials with exact Gaussian-rational
//! coefficients over a fixed set of named variables.
//!
//! Exponents are stored doubled, so square roots of variables (needed for
//! `sqrt(Y_i)`) and negative powers (needed for `pi^-1`, `y^-1`) are
//! ordinary monomials. Terms are kept in a `BTreeMap`, which makes the
//! monomial order and therefore equality canonical.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{domain, Result};

/// Gaussian rational `a + b i`.
pub type Coef = Complex<BigRational>;

/// Number of variables.
pub const NVARS: usize = 20;

/// Variables: entries of the symmetric matrices `T` and `u`, the scalars
/// `Y_i`, the entries `b_i` of a zero-diagonal matrix, `s`, and the formal
/// symbol `pi`.
#[allow(missing_docs)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T11,
    T22,
    T33,
    T12,
    T13,
    T23,
    U11,
    U22,
    U33,
    U12,
    U13,
    U23,
    Y1,
    Y2,
    Y3,
    B1,
    B2,
    B3,
    S,
    Pi,
}

const ALL_VARS: [Var; NVARS] = [
    Var::T11,
    Var::T22,
    Var::T33,
    Var::T12,
    Var::T13,
    Var::T23,
    Var::U11,
    Var::U22,
    Var::U33,
    Var::U12,
    Var::U13,
    Var::U23,
    Var::Y1,
    Var::Y2,
    Var::Y3,
    Var::B1,
    Var::B2,
    Var::B3,
    Var::S,
    Var::Pi,
];

/// Storage position of the symmetric entry `(i, j)` (1-based) among
/// `11, 22, 33, 12, 13, 23`.
pub fn symmetric_slot(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (1, 1) => 0,
        (2, 2) => 1,
        (3, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("matrix indices must lie in 1..=3"),
    }
}

impl Var {
    /// All variables in canonical order.
    pub fn all() -> &'static [Var; NVARS] {
        &ALL_VARS
    }

    /// Position in the canonical order.
    pub fn index(self) -> usize {
        self as usize
    }

    /// `T_ij` (1-based, symmetric).
    pub fn t(i: usize, j: usize) -> Var {
        ALL_VARS[symmetric_slot(i, j)]
    }

    /// `u_ij` (1-based, symmetric).
    pub fn u(i: usize, j: usize) -> Var {
        ALL_VARS[6 + symmetric_slot(i, j)]
    }

    /// `Y_i` (1-based).
    pub fn y(i: usize) -> Var {
        ALL_VARS[11 + i]
    }

    /// `b_i` (1-based).
    pub fn b(i: usize) -> Var {
        ALL_VARS[14 + i]
    }

    /// Printable name.
    pub fn name(self) -> &'static str {
        const NAMES: [&str; NVARS] = [
            "T11", "T22", "T33", "T12", "T13", "T23", "u11", "u22", "u33", "u12", "u13", "u23", "Y1", "Y2", "Y3",
            "b1", "b2", "b3", "s", "pi",
        ];
        NAMES[self.index()]
    }
}

/// Monomial with doubled exponents, indexed by [`Var::index`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial([i32; NVARS]);

impl Monomial {
    /// The empty monomial.
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    /// `v^(doubled / 2)`.
    pub fn var(v: Var, doubled: i32) -> Self {
        let mut m = Self::one();
        m.0[v.index()] = doubled;
        m
    }

    /// Doubled exponent of `v`.
    pub fn exponent2(&self, v: Var) -> i32 {
        self.0[v.index()]
    }

    /// Product of monomials.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        out
    }

    fn with(&self, v: Var, doubled: i32) -> Self {
        let mut out = *self;
        out.0[v.index()] = doubled;
        out
    }

    /// Sum of the doubled exponents of `vars`.
    pub fn degree2(&self, vars: &[Var]) -> i32 {
        vars.iter().map(|v| self.exponent2(*v)).sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in ALL_VARS {
            let e = self.exponent2(v);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            match (e % 2 == 0, e) {
                (true, 2) => write!(f, "{}", v.name())?,
                (true, _) => write!(f, "{}^{}", v.name(), e / 2)?,
                (false, _) => write!(f, "{}^({}/2)", v.name(), e)?,
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// `a + b i` from a rational real part.
pub fn real(q: BigRational) -> Coef {
    Complex::new(q, BigRational::zero())
}

/// Integer coefficient.
pub fn int(n: i64) -> Coef {
    real(BigRational::from_integer(n.into()))
}

/// `i^k`.
pub fn i_power(k: i64) -> Coef {
    let one = BigRational::one();
    let zero = BigRational::zero();
    match k.rem_euclid(4) {
        0 => Complex::new(one, zero),
        1 => Complex::new(zero, one),
        2 => Complex::new(-one, zero),
        _ => Complex::new(zero, -one),
    }
}

fn coef_is_zero(c: &Coef) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

fn fmt_coef(c: &Coef) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => c.re.to_string(),
        (true, false) => format!("{}*i", c.im),
        (false, false) => {
            let sign = if c.im.is_negative() { "-" } else { "+" };
            format!("({}{}{}*i)", c.re, sign, c.im.abs())
        }
    }
}

/// Polynomial `sum c_m m` with exact coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymPoly {
    terms: BTreeMap<Monomial, Coef>,
}

impl SymPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        SymPoly::default()
    }

    /// The constant 1.
    pub fn one() -> Self {
        Self::constant(int(1))
    }

    /// A constant.
    pub fn constant(c: Coef) -> Self {
        Self::term(Monomial::one(), c)
    }

    /// A rational constant.
    pub fn rational(q: BigRational) -> Self {
        Self::constant(real(q))
    }

    /// An integer constant.
    pub fn integer(n: i64) -> Self {
        Self::constant(int(n))
    }

    /// The single term `c m`.
    pub fn term(m: Monomial, c: Coef) -> Self {
        let mut p = SymPoly::zero();
        p.add_term(m, c);
        p
    }

    /// The variable `v`.
    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 2), int(1))
    }

    /// `v^(doubled / 2)`.
    pub fn var_power2(v: Var, doubled: i32) -> Self {
        Self::term(Monomial::var(v, doubled), int(1))
    }

    /// Adds `c m` in place.
    pub fn add_term(&mut self, m: Monomial, c: Coef) {
        if coef_is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if coef_is_zero(existing) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Whether the polynomial is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Whether there are no terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coef)> {
        self.terms.iter()
    }

    /// The value when the polynomial is constant.
    pub fn constant_value(&self) -> Option<Coef> {
        match self.terms.len() {
            0 => Some(int(0)),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        SymPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }

    /// Multiplication by a constant.
    pub fn scale(&self, c: &Coef) -> Self {
        if coef_is_zero(c) {
            return SymPoly::zero();
        }
        SymPoly { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    /// Multiplication by a monomial.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        SymPoly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = SymPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Power with a non-negative exponent.
    pub fn pow(&self, e: u32) -> Self {
        let mut out = SymPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// `d/dv`.
    pub fn derivative(&self, v: Var) -> Self {
        let mut out = SymPoly::zero();
        let half = BigRational::new(1.into(), 2.into());
        for (m, c) in &self.terms {
            let e = m.exponent2(v);
            if e == 0 {
                continue;
            }
            let factor = real(BigRational::from_integer(e.into()) * &half);
            out.add_term(m.with(v, e - 2), c * factor);
        }
        out
    }

    /// The half-weighted partial `d_ij = d/dT_ij` times 1 on the diagonal and
    /// 1/2 off it (1-based indices).
    pub fn partial_t(&self, i: usize, j: usize) -> Self {
        let d = self.derivative(Var::t(i, j));
        if i == j {
            d
        } else {
            d.scale(&real(BigRational::new(1.into(), 2.into())))
        }
    }

    /// Replaces `v` by `value`; every exponent of `v` must be a
    /// non-negative integer.
    pub fn substitute(&self, v: Var, value: &SymPoly) -> Result<Self> {
        let mut powers: Vec<SymPoly> = vec![SymPoly::one()];
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent2(v);
            if e < 0 || e % 2 != 0 {
                return domain(format!("cannot substitute into {}^({e}/2)", v.name()));
            }
            let e = (e / 2) as usize;
            while powers.len() <= e {
                let next = powers.last().expect("nonempty").mul(value);
                powers.push(next);
            }
            let rest = m.with(v, 0);
            for (pm, pc) in &powers[e].terms {
                out.add_term(rest.mul(pm), c * pc);
            }
        }
        Ok(out)
    }

    /// Substitutes several variables one after another.
    pub fn substitute_all(&self, subs: &[(Var, SymPoly)]) -> Result<Self> {
        let mut out = self.clone();
        for (v, p) in subs {
            out = out.substitute(*v, p)?;
        }
        Ok(out)
    }

    /// Coefficient of `v^(doubled/2)`, as a polynomial free of `v`.
    pub fn coefficient(&self, v: Var, doubled: i32) -> Self {
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            if m.exponent2(v) == doubled {
                out.add_term(m.with(v, 0), c.clone());
            }
        }
        out
    }

    /// Largest doubled exponent of `v`, if nonzero.
    pub fn max_exponent2(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|m| m.exponent2(v)).max()
    }

    /// Drops the terms whose total degree in `vars` exceeds `max_degree`.
    pub fn truncate(&self, vars: &[Var], max_degree: i32) -> Self {
        SymPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree2(vars) <= 2 * max_degree)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if *m == Monomial::one() {
                write!(f, "{}", fmt_coef(c))?;
            } else {
                write!(f, "{}*{}", fmt_coef(c), m)?;
            }
        }
        Ok(())
    }
}

impl Serialize for SymPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)` (zero outside `0 <= k <= n`).
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    factorial(n as u64) / (factorial(k as u64) * factorial((n - k) as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_poly(seed: &[i64]) -> SymPoly {
        let vars = [Var::T11, Var::T12, Var::Y1, Var::S];
        let mut p = SymPoly::zero();
        for (n, c) in seed.iter().enumerate() {
            let m = Monomial::var(vars[n % 4], 2 * (n as i32 % 3)).mul(&Monomial::var(vars[(n + 1) % 4], 1));
            p.add_term(m, int(*c));
        }
        p
    }

    #[test]
    fn derivative_of_half_power() {
        let p = SymPoly::var_power2(Var::Y1, 3);
        let d = p.derivative(Var::Y1);
        let expected = SymPoly::var_power2(Var::Y1, 1).scale(&real(BigRational::new(3.into(), 2.into())));
        assert_eq!(d, expected);
    }

    #[test]
    fn substitution_and_coefficients() {
        let x = SymPoly::var(Var::T12);
        let p = x.add(&SymPoly::integer(1)).pow(3);
        assert_eq!(p.coefficient(Var::T12, 4), SymPoly::integer(3));
        let q = p.substitute(Var::T12, &SymPoly::integer(1)).unwrap();
        assert_eq!(q, SymPoly::integer(8));
        assert!(SymPoly::var_power2(Var::T12, 1).substitute(Var::T12, &x).is_err());
    }

    #[test]
    fn imaginary_unit_squares() {
        let i = SymPoly::constant(i_power(1));
        assert_eq!(i.mul(&i), SymPoly::integer(-1));
        assert_eq!(SymPoly::constant(i_power(-1)).to_string(), "-1*i");
    }

    proptest! {
        #[test]
        fn ring_laws(a in prop::collection::vec(-5i64..5, 0..6), b in prop::collection::vec(-5i64..5, 0..6), c in prop::collection::vec(-5i64..5, 0..6)) {
            let (a, b, c) = (small_poly(&a), small_poly(&b), small_poly(&c));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn leibniz_rule(a in prop::collection::vec(-5i64..5, 0..6), b in prop::collection::vec(-5i64..5, 0..6)) {
            let (a, b) = (small_poly(&a), small_poly(&b));
            let lhs = a.mul(&b).derivative(Var::Y1);
            let rhs = a.derivative(Var::Y1).mul(&b).add(&a.mul(&b.derivative(Var::Y1)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
