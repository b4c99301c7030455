//! Truncated power series in `X1, X2, X3, T` over `Z_p`.
//!
//! Coefficients are residues modulo `p^N` stored densely; every product is
//! truncated to the per-variable degree caps. Specializing at an arithmetic
//! point substitutes `X_i -> u^(k_i) - 1` and `T -> u^(kP) - 1` with
//! `u = 1 + p`, and reports the precision the truncation can guarantee.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::padic::{one_unit_part, padic_log, pow_big, valuation_big, PadicNumber};
use super::point::ArithmeticPoint;
use super::zmod::Zmod;
use crate::error::{domain, Error, Result};

/// Names of the four variables, in storage order.
pub const VARIABLES: [&str; 4] = ["X1", "X2", "X3", "T"];

/// One of the four series variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variable {
    /// First weight variable.
    X1,
    /// Second weight variable.
    X2,
    /// Third weight variable.
    X3,
    /// Cyclotomic variable.
    T,
}

impl Variable {
    /// Storage index.
    pub fn index(self) -> usize {
        match self {
            Variable::X1 => 0,
            Variable::X2 => 1,
            Variable::X3 => 2,
            Variable::T => 3,
        }
    }

    /// Variable with the given storage index.
    pub fn from_index(i: usize) -> Self {
        [Variable::X1, Variable::X2, Variable::X3, Variable::T][i]
    }
}

/// Dense truncated series with coefficients modulo `p^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IwasawaSeries {
    ring: Zmod,
    caps: [usize; 4],
    coeffs: Vec<u128>,
}

fn table_len(caps: &[usize; 4]) -> usize {
    caps.iter().map(|c| c + 1).product()
}

impl IwasawaSeries {
    /// The zero series.
    pub fn zero(p: u64, prec: u32, caps: [usize; 4]) -> Result<Self> {
        Ok(IwasawaSeries { ring: Zmod::new(p, prec)?, caps, coeffs: vec![0; table_len(&caps)] })
    }

    /// The constant `c` (an integer residue).
    pub fn constant(p: u64, prec: u32, caps: [usize; 4], c: u128) -> Result<Self> {
        let mut s = Self::zero(p, prec, caps)?;
        s.coeffs[0] = c % s.ring.modulus();
        Ok(s)
    }

    /// The constant one.
    pub fn one(p: u64, prec: u32, caps: [usize; 4]) -> Result<Self> {
        Self::constant(p, prec, caps, 1)
    }

    /// Series whose only nonzero coefficients are given.
    pub fn from_entries(p: u64, prec: u32, caps: [usize; 4], entries: &[([usize; 4], BigInt)]) -> Result<Self> {
        let mut s = Self::zero(p, prec, caps)?;
        for (e, c) in entries {
            if (0..4).any(|i| e[i] > caps[i]) {
                continue;
            }
            let idx = s.index(*e);
            s.coeffs[idx] = s.ring.add(s.coeffs[idx], s.ring.from_big(c));
        }
        Ok(s)
    }

    /// The series `(1 + var)`.
    pub fn one_plus_variable(p: u64, prec: u32, caps: [usize; 4], var: Variable) -> Result<Self> {
        let mut e = [0; 4];
        e[var.index()] = 1;
        Self::from_entries(p, prec, caps, &[([0; 4], BigInt::one()), (e, BigInt::one())])
    }

    /// Series with the given dense coefficient table (storage order: `X1`
    /// fastest, `T` slowest).
    pub(crate) fn from_table(ring: Zmod, caps: [usize; 4], coeffs: Vec<u128>) -> Self {
        debug_assert_eq!(coeffs.len(), table_len(&caps));
        IwasawaSeries { ring, caps, coeffs }
    }

    /// Residue ring of the coefficients.
    pub fn ring(&self) -> &Zmod {
        &self.ring
    }

    /// Degree caps.
    pub fn caps(&self) -> [usize; 4] {
        self.caps
    }

    /// Coefficient precision `N` (values are known modulo `p^N`).
    pub fn precision(&self) -> u32 {
        self.ring.exponent()
    }

    fn index(&self, e: [usize; 4]) -> usize {
        let c = &self.caps;
        e[0] + (c[0] + 1) * (e[1] + (c[1] + 1) * (e[2] + (c[2] + 1) * e[3]))
    }

    fn exponent_of(&self, mut idx: usize) -> [usize; 4] {
        let mut e = [0; 4];
        for (i, cap) in self.caps.iter().enumerate() {
            e[i] = idx % (cap + 1);
            idx /= cap + 1;
        }
        e
    }

    /// Coefficient of `X1^e1 X2^e2 X3^e3 T^eT` (zero beyond the caps).
    pub fn coeff(&self, e: [usize; 4]) -> u128 {
        if (0..4).any(|i| e[i] > self.caps[i]) {
            return 0;
        }
        self.coeffs[self.index(e)]
    }

    /// Nonzero coefficients in storage order.
    pub fn entries(&self) -> Vec<([usize; 4], u128)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (self.exponent_of(i), *c))
            .collect()
    }

    fn compatible(&self, o: &Self) -> Result<()> {
        if self.ring != o.ring || self.caps != o.caps {
            return Err(Error::Domain("series with different prime, precision or caps".into()));
        }
        Ok(())
    }

    /// Sum.
    pub fn add(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| self.ring.add(*a, *b)).collect();
        Ok(IwasawaSeries { ring: self.ring, caps: self.caps, coeffs })
    }

    /// Difference.
    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| self.ring.sub(*a, *b)).collect();
        Ok(IwasawaSeries { ring: self.ring, caps: self.caps, coeffs })
    }

    /// Multiplication by a residue.
    pub fn scale(&self, c: u128) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(*a, c)).collect();
        IwasawaSeries { ring: self.ring, caps: self.caps, coeffs }
    }

    /// Truncated product.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut out = vec![0u128; self.coeffs.len()];
        let left = self.entries();
        let right = o.entries();
        for (ea, a) in &left {
            for (eb, b) in &right {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                if (0..4).any(|i| e[i] > self.caps[i]) {
                    continue;
                }
                let idx = self.index(e);
                out[idx] = self.ring.add(out[idx], self.ring.mul(*a, *b));
            }
        }
        Ok(IwasawaSeries { ring: self.ring, caps: self.caps, coeffs: out })
    }

    /// Drop every term beyond the given caps (idempotent).
    pub fn truncate(&self, caps: [usize; 4]) -> Self {
        let mut out = self.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.exponent_of(i);
            if *c != 0 && (0..4).any(|k| e[k] > caps[k]) {
                out.coeffs[i] = 0;
            }
        }
        out
    }

    /// Value at the residues `x = (x1, x2, x3, t)`.
    pub fn evaluate(&self, x: [u128; 4]) -> u128 {
        let r = &self.ring;
        let c = self.caps;
        let mut acc_t = 0u128;
        for et in (0..=c[3]).rev() {
            let mut acc3 = 0u128;
            for e3 in (0..=c[2]).rev() {
                let mut acc2 = 0u128;
                for e2 in (0..=c[1]).rev() {
                    let mut acc1 = 0u128;
                    for e1 in (0..=c[0]).rev() {
                        acc1 = r.add(r.mul(acc1, x[0]), self.coeffs[self.index([e1, e2, e3, et])]);
                    }
                    acc2 = r.add(r.mul(acc2, x[1]), acc1);
                }
                acc3 = r.add(r.mul(acc3, x[2]), acc2);
            }
            acc_t = r.add(r.mul(acc_t, x[3]), acc3);
        }
        acc_t
    }

    /// Precision guaranteed after substituting `u^(k_i) - 1`: each dropped
    /// term `X_i^(cap_i + 1)` has valuation `(cap_i + 1)(1 + v_p(k_i))`.
    pub fn specialization_precision(&self, exponents: [i64; 4]) -> u32 {
        let p = self.ring.prime();
        let mut prec = self.precision();
        for (i, &k) in exponents.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let v = 1 + valuation_big(&BigInt::from(k), p).unwrap();
            prec = prec.min((self.caps[i] as u32 + 1) * v);
        }
        prec
    }

    /// Value at an arithmetic point with trivial finite parts.
    pub fn specialize(&self, point: &ArithmeticPoint) -> Result<PadicNumber> {
        point.require_trivial_finite_parts()?;
        let exps = point.exponents();
        let x = substitution_values(&self.ring, exps);
        let value = self.evaluate(x);
        let prec = self.specialization_precision(exps);
        Ok(PadicNumber::from_bigint(self.ring.prime(), &BigInt::from(value), prec as i64))
    }
}

impl IwasawaSeries {
    /// Values at many points with trivial finite parts, sharing the partial
    /// evaluations in `T`, `X3` and `X2` between points.
    pub fn specialize_all(&self, points: &[ArithmeticPoint]) -> Result<Vec<PadicNumber>> {
        use std::collections::HashMap;
        let r = self.ring;
        let c = self.caps;
        let stride = [1, c[0] + 1, (c[0] + 1) * (c[1] + 1), (c[0] + 1) * (c[1] + 1) * (c[2] + 1)];
        // contract the slowest variable of `table` (blocks of `inner` entries)
        let contract = |table: &[u128], inner: usize, cap: usize, x: u128| -> Vec<u128> {
            let mut out = vec![0u128; inner];
            for e in (0..=cap).rev() {
                let block = &table[e * inner..(e + 1) * inner];
                for (o, &v) in out.iter_mut().zip(block) {
                    *o = r.add(r.mul(*o, x), v);
                }
            }
            out
        };
        let mut by_t: HashMap<i64, Vec<u128>> = HashMap::new();
        let mut by_t3: HashMap<(i64, i64), Vec<u128>> = HashMap::new();
        let mut by_t32: HashMap<(i64, i64, i64), Vec<u128>> = HashMap::new();
        let mut out = Vec::with_capacity(points.len());
        for point in points {
            point.require_trivial_finite_parts()?;
            let k = point.exponents();
            let x = substitution_values(&r, k);
            let t = by_t.entry(k[3]).or_insert_with(|| contract(&self.coeffs, stride[3], c[3], x[3]));
            let t3 = by_t3.entry((k[3], k[2])).or_insert_with(|| contract(t, stride[2], c[2], x[2]));
            let t32 = by_t32.entry((k[3], k[2], k[1])).or_insert_with(|| contract(t3, stride[1], c[1], x[1]));
            let value = contract(t32, 1, c[0], x[0])[0];
            let prec = self.specialization_precision(k);
            out.push(PadicNumber::from_bigint(r.prime(), &BigInt::from(value), prec as i64));
        }
        Ok(out)
    }
}

/// Digits of the exponent `s` needed for [`binomial_coefficients`] to give
/// coefficients modulo `p^prec` up to degree `cap`.
pub fn exponent_digits(p: u64, prec: u32, cap: usize) -> u32 {
    prec + factorial_valuation(cap, p)
}

/// Coefficients of `(1 + X)^s` modulo `p^prec` up to degree `cap`, for a
/// p-adic integer `s` given modulo `p^exponent_digits(p, prec, cap)`.
pub fn binomial_coefficients(s: u128, p: u64, prec: u32, cap: usize) -> Result<Vec<u128>> {
    Ok(BinomialTable::new(p, prec, cap)?.coefficients(s))
}

/// Precomputed factorials for repeated [`binomial_coefficients`] calls.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    wide: Zmod,
    ring: Zmod,
    /// `p^(v_p(n!))` and the inverse of the prime-to-p part of `n!`.
    factorials: Vec<(u128, u128)>,
}

impl BinomialTable {
    /// Table for coefficients modulo `p^prec` up to degree `cap`.
    pub fn new(p: u64, prec: u32, cap: usize) -> Result<Self> {
        let wide = Zmod::new(p, exponent_digits(p, prec, cap))?;
        let ring = Zmod::new(p, prec)?;
        let mut factorials = Vec::with_capacity(cap + 1);
        let (mut unit, mut power) = (1u128, 1u128);
        for n in 0..=cap {
            if n > 0 {
                let mut f = n as u128;
                while f.is_multiple_of(p as u128) {
                    f /= p as u128;
                    power *= p as u128;
                }
                unit = ring.mul(unit, f % ring.modulus());
            }
            factorials.push((power, ring.inv(unit)?));
        }
        Ok(BinomialTable { wide, ring, factorials })
    }

    /// Coefficients of `(1 + X)^s`.
    pub fn coefficients(&self, s: u128) -> Vec<u128> {
        let (wide, ring) = (&self.wide, &self.ring);
        let s = s % wide.modulus();
        let mut num = 1 % wide.modulus();
        let mut out = Vec::with_capacity(self.factorials.len());
        for (n, &(power, inv)) in self.factorials.iter().enumerate() {
            if n > 0 {
                num = wide.mul(num, wide.sub(s, (n as u128 - 1) % wide.modulus()));
            }
            out.push(ring.mul((num / power) % ring.modulus(), inv));
        }
        out
    }

    /// Value of the truncated series `(1 + X)^s` at `X = x`.
    pub fn evaluate(&self, s: u128, x: u128) -> u128 {
        let r = &self.ring;
        self.coefficients(s).iter().rev().fold(0u128, |a, &c| r.add(r.mul(a, x), c))
    }
}

/// Residues `u^(k_i) - 1` for `u = 1 + p` (negative exponents allowed).
pub fn substitution_values(ring: &Zmod, exps: [i64; 4]) -> [u128; 4] {
    let u = (1 + ring.prime() as u128) % ring.modulus();
    let uinv = ring.inv(u).unwrap();
    let mut out = [0u128; 4];
    for i in 0..4 {
        let k = exps[i];
        let base = if k >= 0 { ring.pow(u, k as u128) } else { ring.pow(uinv, (-k) as u128) };
        out[i] = ring.sub(base, 1);
    }
    out
}

/// The exponent `s = log_p <z> / log_p u` of `<z> = u^s`, modulo `p^digits`.
pub fn diamond_exponent(z: &BigInt, p: u64, digits: u32) -> Result<BigInt> {
    if z.mod_floor(&BigInt::from(p)).is_zero() {
        return domain("diamond bracket of a non-unit");
    }
    let work = digits as i64 + 1;
    let zp = PadicNumber::from_bigint(p, z, work);
    let lz = padic_log(&one_unit_part(&zp)?)?;
    let lu = padic_log(&PadicNumber::from_int(p, 1 + p as i64, work))?;
    let s = lz.checked_div(&lu)?;
    s.to_residue(digits)
}

/// `C(s, n)` modulo `p^prec` for a p-adic integer `s` known modulo
/// `p^(prec + v_p(n!))`.
fn binomial_residue(s: &BigInt, n: usize, p: u64, prec: u32, extra: u32) -> BigInt {
    let work = pow_big(p, prec + extra);
    let mut num = BigInt::one();
    let mut fact = BigInt::one();
    for i in 0..n {
        num = (num * (s - BigInt::from(i))).mod_floor(&work);
        fact *= BigInt::from(i + 1);
    }
    let vf = valuation_big(&fact, p).unwrap();
    let unit = &fact / pow_big(p, vf);
    let m = pow_big(p, prec);
    let inv = super::padic::inverse_mod(&unit, &m).unwrap();
    ((num / pow_big(p, vf)) * inv).mod_floor(&m)
}

pub(crate) fn factorial_valuation(n: usize, p: u64) -> u32 {
    let mut v = 0;
    let mut q = p as usize;
    while q <= n {
        v += (n / q) as u32;
        q *= p as usize;
    }
    v
}

/// Univariate binomial series `(1 + X)^s` with coefficients modulo `p^prec`
/// for `s = power * log <z> / log u`, up to degree `cap`.
pub fn diamond_coefficients(z: &BigInt, power: i64, p: u64, prec: u32, cap: usize) -> Result<Vec<u128>> {
    let extra = factorial_valuation(cap, p);
    let digits = prec + extra;
    let s = diamond_exponent(z, p, digits)? * BigInt::from(power);
    let s = s.mod_floor(&pow_big(p, digits));
    let ring = Zmod::new(p, prec)?;
    Ok((0..=cap).map(|n| ring.from_big(&binomial_residue(&s, n, p, prec, extra))).collect())
}

/// The group-like series `<z>_var = (1 + var)^(log <z> / log u)`.
pub fn diamond_bracket(z: &BigInt, var: Variable, caps: [usize; 4], p: u64, prec: u32) -> Result<IwasawaSeries> {
    diamond_power(z, 1, var, caps, p, prec)
}

/// `<z>_var^power`.
pub fn diamond_power(
    z: &BigInt,
    power: i64,
    var: Variable,
    caps: [usize; 4],
    p: u64,
    prec: u32,
) -> Result<IwasawaSeries> {
    let i = var.index();
    let coeffs = diamond_coefficients(z, power, p, prec, caps[i])?;
    let mut s = IwasawaSeries::zero(p, prec, caps)?;
    for (n, c) in coeffs.into_iter().enumerate() {
        let mut e = [0; 4];
        e[i] = n;
        let idx = s.index(e);
        s.coeffs[idx] = c;
    }
    Ok(s)
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    p: u64,
    prec: u32,
    caps: [usize; 4],
    entries: Vec<([usize; 4], String)>,
}

impl Serialize for IwasawaSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            p: self.ring.prime(),
            prec: self.precision(),
            caps: self.caps,
            entries: self.entries().into_iter().map(|(e, c)| (e, c.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IwasawaSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        let mut entries = Vec::with_capacity(j.entries.len());
        for (e, c) in j.entries {
            let c: BigInt = c.parse().map_err(serde::de::Error::custom)?;
            entries.push((e, c));
        }
        IwasawaSeries::from_entries(j.p, j.prec, j.caps, &entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const CAPS: [usize; 4] = [3, 3, 3, 3];

    fn random_series(seed: &[i64], prec: u32) -> IwasawaSeries {
        let mut entries = Vec::new();
        for (i, c) in seed.iter().enumerate() {
            let e = [i % 4, (i / 4) % 4, (i / 2) % 4, (i / 3) % 4];
            entries.push((e, BigInt::from(*c)));
        }
        IwasawaSeries::from_entries(5, prec, CAPS, &entries).unwrap()
    }

    #[test]
    fn bracket_of_generator_is_one_plus_variable() {
        let s = diamond_bracket(&BigInt::from(6), Variable::X1, CAPS, 5, 12).unwrap();
        assert_eq!(s, IwasawaSeries::one_plus_variable(5, 12, CAPS, Variable::X1).unwrap());
        // roots of unity have trivial one-unit part
        let w = super::super::padic::teichmuller(&BigInt::from(2), 5, 12).unwrap().to_bigint().unwrap();
        let c = diamond_bracket(&w, Variable::T, CAPS, 5, 12).unwrap();
        assert_eq!(c, IwasawaSeries::one(5, 12, CAPS).unwrap());
    }

    #[test]
    fn bracket_specializes_to_power() {
        // z = u^2, X -> u^3 - 1 gives u^6
        let caps = [12, 0, 0, 0];
        let s = diamond_bracket(&BigInt::from(36), Variable::X1, caps, 5, 10).unwrap();
        let v = s.specialize(&ArithmeticPoint::new([3, 0, 0], 0)).unwrap();
        assert_eq!(v.absolute_precision(), 10);
        assert!(v.agrees_with(&PadicNumber::from_int(5, 6i64.pow(6), 10), 10));
        // <z>_T at kP = 3 is <z>^3
        let z = BigInt::from(7);
        let t = diamond_bracket(&z, Variable::T, [0, 0, 0, 12], 5, 10).unwrap();
        let v = t.specialize(&ArithmeticPoint::new([0, 0, 0], 3)).unwrap();
        let direct = one_unit_part(&PadicNumber::from_int(5, 7, 10)).unwrap().pow(3);
        assert!(v.agrees_with(&direct, 10));
    }

    #[test]
    fn binomial_coefficients_match_bracket() {
        let caps = [9, 0, 0, 0];
        for z in [2i64, 7, 11, 24] {
            let s = diamond_exponent(&BigInt::from(z), 5, exponent_digits(5, 8, 9)).unwrap();
            let s = u128::try_from(s).unwrap();
            let fast = binomial_coefficients(s, 5, 8, 9).unwrap();
            let series = diamond_bracket(&BigInt::from(z), Variable::X1, caps, 5, 8).unwrap();
            let slow: Vec<u128> = (0..=9).map(|n| series.coeff([n, 0, 0, 0])).collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn specialize_all_matches_pointwise() {
        let s = random_series(&[3, -1, 4, 1, -5, 9, 2, -6, 5, 3, 5], 9);
        let points = super::super::point::balanced_critical_points(5);
        let many = s.specialize_all(&points).unwrap();
        for (p, v) in points.iter().zip(&many) {
            assert_eq!(&s.specialize(p).unwrap(), v);
        }
    }

    #[test]
    fn json_round_trip() {
        let s = random_series(&[3, 0, 7, 11, 2], 9);
        let j = serde_json::to_string(&s).unwrap();
        let t: IwasawaSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(s, t);
    }

    proptest! {
        #[test]
        fn ring_axioms_under_truncation(a in proptest::collection::vec(-50i64..50, 1..12),
                                         b in proptest::collection::vec(-50i64..50, 1..12),
                                         c in proptest::collection::vec(-50i64..50, 1..12)) {
            let (x, y, z) = (random_series(&a, 8), random_series(&b, 8), random_series(&c, 8));
            prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
            prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
            prop_assert_eq!(x.truncate([2, 1, 3, 0]).truncate([2, 1, 3, 0]), x.truncate([2, 1, 3, 0]));
        }

        #[test]
        fn specialization_is_multiplicative(a in proptest::collection::vec(-50i64..50, 1..12),
                                            b in proptest::collection::vec(-50i64..50, 1..12),
                                            k in proptest::array::uniform4(0i64..9)) {
            let (x, y) = (random_series(&a, 10), random_series(&b, 10));
            let pt = ArithmeticPoint::new([k[0], k[1], k[2]], k[3]);
            let lhs = x.mul(&y).unwrap().specialize(&pt).unwrap();
            let rhs = &x.specialize(&pt).unwrap() * &y.specialize(&pt).unwrap();
            let n = lhs.absolute_precision().min(rhs.absolute_precision());
            prop_assert!(lhs.agrees_with(&rhs, n));
        }

        #[test]
        fn bracket_is_multiplicative(z1 in 1i64..2000, z2 in 1i64..2000) {
            prop_assume!(z1 % 5 != 0 && z2 % 5 != 0);
            let f = |z: i64| diamond_bracket(&BigInt::from(z), Variable::X2, CAPS, 5, 10).unwrap();
            prop_assert_eq!(f(z1 * z2), f(z1).mul(&f(z2)).unwrap());
        }
    }
}
