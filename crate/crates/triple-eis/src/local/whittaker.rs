//! Degenerate Whittaker values of the p-adic section via Fourier transforms.
//!
//! The Whittaker value at `B` is the Fourier transform of the Schwartz
//! function `Phi_D(z) = prod FT(1_{pZ_p})(u_i) FT(phi_{chi omega_i})(x_i)`
//! on `Sym_3(Q_p)` evaluated at `-B`, for the pairing `psi(tr(B z))`. Each
//! factor is a locally constant function and is transformed by a finite
//! character sum in a cyclotomic ring over `Q_p`. Characters are powers of
//! the Teichmüller character.

use num_bigint::BigInt;

use crate::arith::{Coefficient, CyclotomicElement, PadicNumber, Zmod};
use crate::arith::padic::teichmuller;
use crate::error::{domain, Error, Result};
use crate::siegel::HalfIntegralMatrix;

type Value = CyclotomicElement<PadicNumber>;

/// A function on `Q_p` supported on `p^low Z_p` and invariant under
/// `p^high Z_p`, stored by its values at `p^low i` for `0 <= i < p^(high-low)`.
/// Values live in `Q_p(zeta_(p^e))` for a fixed exponent `e`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchwartzFunction {
    prime: u64,
    ring_exponent: u32,
    low: i32,
    high: i32,
    values: Vec<Value>,
}

fn padic(p: u64, x: i64, prec: i64) -> PadicNumber {
    PadicNumber::from_int(p, x, prec)
}

impl SchwartzFunction {
    fn size(p: u64, low: i32, high: i32) -> Result<usize> {
        if high < low {
            return domain("invariance lattice must lie inside the support");
        }
        p.checked_pow((high - low) as u32)
            .map(|s| s as usize)
            .ok_or_else(|| Error::Resource("Schwartz function table too large".into()))
    }

    /// The indicator function of `p^low Z_p`.
    pub fn indicator(p: u64, low: i32, ring_exponent: u32, prec: i64) -> Self {
        let one = Value::constant(p, ring_exponent, padic(p, 1, prec));
        SchwartzFunction { prime: p, ring_exponent, low, high: low, values: vec![one] }
    }

    /// `phi_chi = chi * 1_{Z_p^x}` for `chi = omega^exponent`.
    pub fn character(p: u64, exponent: u64, ring_exponent: u32, prec: u32) -> Result<Self> {
        let mut values = Vec::with_capacity(p as usize);
        values.push(Value::constant(p, ring_exponent, padic(p, 0, prec as i64)));
        for a in 1..p {
            let w = teichmuller(&BigInt::from(a), p, prec)?.pow(exponent as u32);
            values.push(Value::constant(p, ring_exponent, w));
        }
        Ok(SchwartzFunction { prime: p, ring_exponent, low: 0, high: 1, values })
    }

    /// Support exponent.
    pub fn low(&self) -> i32 {
        self.low
    }

    /// Invariance exponent.
    pub fn high(&self) -> i32 {
        self.high
    }

    /// Value at the rational `num / p^shift` (with `num` an integer).
    pub fn value_at(&self, num: &BigInt, shift: i32) -> Value {
        let p = self.prime;
        let zero = self.values[0].scale(&self.values[0].coefficients()[0].zero_like());
        let v = crate::arith::padic::valuation_big(num, p).map(|v| v as i32 - shift);
        match v {
            None => self.values[0].clone(),
            Some(v) if v < self.low => zero,
            Some(_) => {
                // index of x / p^low modulo p^(high - low)
                let m = BigInt::from(p).pow((self.high - self.low) as u32);
                let e = shift + self.low;
                let reduced = if e >= 0 {
                    num / BigInt::from(p).pow(e as u32)
                } else {
                    num * BigInt::from(p).pow((-e) as u32)
                };
                let i: BigInt = ((reduced % &m) + &m) % &m;
                let i: usize = i.try_into().expect("index fits");
                self.values[i].clone()
            }
        }
    }

    /// Fourier transform `f^(y) = int f(x) psi(x y) dx` with
    /// `psi(x) = exp(-2 pi i {x}_p)` and `vol(Z_p) = 1`.
    pub fn fourier_transform(&self) -> Result<Self> {
        let p = self.prime;
        let m = (self.high - self.low) as u32;
        if m > self.ring_exponent {
            return domain("cyclotomic ring too small for this transform");
        }
        let n = Self::size(p, self.low, self.high)?;
        let step = p.pow(self.ring_exponent - m) as i64;
        let sample = &self.values[0].coefficients()[0];
        let prec = sample.absolute_precision().max(sample.relative_precision() as i64) + 2;
        // measure of p^high Z_p is p^(-high)
        let measure = PadicNumber::new(p, -(self.high as i64), BigInt::from(1), prec as u32 + 2);
        let mut values = Vec::with_capacity(n);
        for j in 0..n as i64 {
            let mut acc = Value::constant(p, self.ring_exponent, sample.zero_like());
            for (i, f) in self.values.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                // psi(p^(low - high) i j) = zeta_(p^m)^(-i j)
                let k = -(i as i64) * j * step;
                let z = Value::zeta_power(p, self.ring_exponent, k, padic(p, 1, prec));
                acc = acc.add(&f.mul(&z));
            }
            values.push(acc.scale(&measure));
        }
        Ok(SchwartzFunction { prime: p, ring_exponent: self.ring_exponent, low: -self.high, high: -self.low, values })
    }
}

/// Teichmüller exponents `(j0, j1, j2, j3)` of `D = (chi, omega1, omega2, omega3)`.
pub type CharacterExponents = [u64; 4];

/// Whittaker value with a support diagnostic.
#[derive(Clone, Debug, PartialEq)]
pub struct WhittakerValue {
    /// The value, a p-adic integer.
    pub value: PadicNumber,
    /// Why the value vanishes, when it is outside the support.
    pub diagnostic: Option<String>,
}

/// The p-adic section for fixed characters, with the transformed factor
/// functions tabulated on residues.
#[derive(Clone, Debug)]
pub struct WhittakerSection {
    prime: u64,
    ring: Zmod,
    diagonal: Vec<u128>,
    off_diagonal: [Vec<u128>; 3],
}

fn rational_residue(ring: &Zmod, v: &Value) -> Result<u128> {
    let x = v.rational_value().ok_or_else(|| Error::Internal("transform value is not in Q_p".into()))?;
    if !x.is_zero() && x.valuation() < 0 {
        return Err(Error::Internal("transform value is not integral".into()));
    }
    ring.from_padic(&x)
}

impl WhittakerSection {
    /// Builds `Phi_D`, transforms it and tabulates the result at residues.
    pub fn new(p: u64, exponents: CharacterExponents, prec: u32) -> Result<Self> {
        if p < 3 || !crate::arith::padic::is_prime(p) {
            return domain("p must be an odd prime");
        }
        let ring = Zmod::new(p, prec)?;
        let work = prec + 4;
        let diag = SchwartzFunction::indicator(p, 1, 1, work as i64).fourier_transform()?.fourier_transform()?;
        let diagonal = (0..p as i64)
            .map(|r| rational_residue(&ring, &diag.value_at(&BigInt::from(-r), 0)))
            .collect::<Result<Vec<_>>>()?;
        let mut off_diagonal: [Vec<u128>; 3] = Default::default();
        for (i, table) in off_diagonal.iter_mut().enumerate() {
            let e = (exponents[0] + exponents[i + 1]) % (p - 1);
            let phi = SchwartzFunction::character(p, e, 1, work)?;
            let twice = phi.fourier_transform()?.fourier_transform()?;
            *table = (0..p as i64)
                .map(|r| rational_residue(&ring, &twice.value_at(&BigInt::from(-r), 0)))
                .collect::<Result<Vec<_>>>()?;
        }
        Ok(WhittakerSection { prime: p, ring, diagonal, off_diagonal })
    }

    /// Residue ring of the values.
    pub fn ring(&self) -> &Zmod {
        &self.ring
    }

    /// Value at `B` as a residue, from the entries `b_ii` and `2 b_jk`.
    pub fn value_residue(&self, diagonal: [i64; 3], doubled_off: [i64; 3]) -> u128 {
        let p = self.prime as i64;
        let mut acc = 1u128;
        for d in diagonal {
            acc = self.ring.mul(acc, self.diagonal[d.rem_euclid(p) as usize]);
        }
        for (i, c) in doubled_off.iter().enumerate() {
            acc = self.ring.mul(acc, self.off_diagonal[i][c.rem_euclid(p) as usize]);
        }
        acc
    }

    /// Value at `B` with a diagnostic outside `Xi_p`.
    pub fn value(&self, b: &HalfIntegralMatrix) -> Result<WhittakerValue> {
        let (diag, off) = entries(b)?;
        let residue = self.value_residue(diag, off);
        let p = self.prime as i64;
        let diagnostic = if let Some(i) = (0..3).find(|&i| diag[i].rem_euclid(p) != 0) {
            Some(format!("diagonal entry b_{0}{0} = {1} is not in pZ_p", i + 1, diag[i]))
        } else {
            (0..3)
                .find(|&i| off[i].rem_euclid(p) == 0)
                .map(|i| format!("2 b_jk = {} for the pair opposite {} is not a unit", off[i], i + 1))
        };
        Ok(WhittakerValue { value: self.ring.to_padic(residue), diagnostic })
    }
}

/// Diagonal entries and `(2 b_23, 2 b_13, 2 b_12)` of a size-3 matrix.
pub fn entries(b: &HalfIntegralMatrix) -> Result<([i64; 3], [i64; 3])> {
    if b.size() != 3 {
        return domain("Whittaker values need a 3x3 matrix");
    }
    Ok(([b.b(0), b.b(1), b.b(2)], [b.c(1, 2), b.c(0, 2), b.c(0, 1)]))
}

/// Degenerate Whittaker value `W_B(f_D)` at `p`.
pub fn whittaker_value_p(b: &HalfIntegralMatrix, exponents: CharacterExponents, p: u64, prec: u32) -> Result<WhittakerValue> {
    WhittakerSection::new(p, exponents, prec)?.value(b)
}

/// `Q_B(D) = chi(8 y1 y2 y3) prod omega_i(2 y_i) 1_{Xi_p}(B)` from
/// Teichmüller values, as a residue modulo `p^prec`.
pub fn q_b_residue(ring: &Zmod, exponents: CharacterExponents, diagonal: [i64; 3], doubled_off: [i64; 3]) -> Result<u128> {
    let p = ring.prime() as i64;
    if diagonal.iter().any(|d| d.rem_euclid(p) != 0) || doubled_off.iter().any(|c| c.rem_euclid(p) == 0) {
        return Ok(0);
    }
    let product: i128 = doubled_off.iter().map(|&c| c as i128).product();
    let mut v = ring.pow(ring.teichmuller(product)?, exponents[0] as u128);
    for i in 0..3 {
        v = ring.mul(v, ring.pow(ring.teichmuller(doubled_off[i] as i128)?, exponents[i + 1] as u128));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_transform() {
        let p = 5;
        let f = SchwartzFunction::indicator(p, 1, 1, 10);
        let g = f.fourier_transform().unwrap();
        assert_eq!((g.low(), g.high()), (-1, -1));
        let v = g.value_at(&BigInt::from(3), 1).rational_value().unwrap();
        assert!(v.agrees_with(&PadicNumber::new(p, -1, BigInt::from(1), 8), 7));
        assert!(g.value_at(&BigInt::from(1), 2).is_zero());
    }

    #[test]
    fn examples() {
        let p = 5;
        let outside = HalfIntegralMatrix::size3(1, 5, 5, 1, 1, 1);
        let w = whittaker_value_p(&outside, [1, 0, 2, 1], p, 12).unwrap();
        assert!(w.value.is_zero());
        assert!(w.diagnostic.is_some());
        let inside = HalfIntegralMatrix::size3(5, 5, 10, 1, 2, 3);
        let w = whittaker_value_p(&inside, [0, 0, 0, 0], p, 12).unwrap();
        assert!(w.value.agrees_with(&PadicNumber::from_int(p, 1, 12), 12));
        assert!(w.diagnostic.is_none());
    }

    #[test]
    fn matches_character_formula() {
        let p = 5;
        let section = WhittakerSection::new(p, [1, 2, 0, 1], 12).unwrap();
        for (d, off) in [([5, 10, 5], [1, 2, 3]), ([5, 5, 5], [-4, 7, 2]), ([0, 5, 15], [6, 3, 9])] {
            let expected = q_b_residue(section.ring(), [1, 2, 0, 1], d, off).unwrap();
            assert_eq!(section.value_residue(d, off), expected);
        }
    }
}
