//! The polynomial `F_{B,l}` and the Euler product `a_B`.
//!
//! The Siegel series factors as `b_l(B, t) = gamma_n(t) F_{B,l}(t)` with
//! `gamma_1 = 1 - t`, `gamma_2 = (1 - t)(1 - l^2 t^2) / (1 - chi_B(l) l t)`
//! and `gamma_3 = (1 - t)(1 - l^2 t^2)`, where `chi_B` is the quadratic
//! character of `Q_l(sqrt(-det 2B))`. Coefficients of `b` come from the
//! overlattice engine; the quotient is required to vanish beyond the degree
//! bound `v_l(det 2B)` at every computed depth.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::engine::lattice_series;
use super::jordan::{jordan_key, legendre, representative, JordanKey};
use super::matrix::HalfIntegralMatrix;
use super::smith::smith_exponents;
use crate::arith::padic::{prime_factors, valuation_i128};
use crate::error::{Error, Result};

/// How a polynomial was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Derivation {
    /// Overlattice enumeration of the Siegel series.
    Lattice,
    /// Closed form for forms with a large unimodular component.
    ClosedForm,
}

/// `F_{B,l}` with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiegelPolynomial {
    /// The prime `l`.
    pub prime: u64,
    /// Coefficients of `F` in ascending degree (constant term 1).
    pub coefficients: Vec<BigInt>,
    /// Number of Siegel series coefficients checked against `gamma_n F`.
    pub verified_depth: u32,
    /// Method used.
    pub derivation: Derivation,
}

impl SiegelPolynomial {
    /// The constant polynomial 1.
    pub fn one(prime: u64) -> Self {
        SiegelPolynomial { prime, coefficients: vec![BigInt::one()], verified_depth: 0, derivation: Derivation::ClosedForm }
    }

    /// Degree of `F`.
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Coefficients as machine integers (panics on overflow).
    pub fn coefficients_i128(&self) -> Vec<i128> {
        self.coefficients.iter().map(|c| i128::try_from(c).expect("coefficient fits in i128")).collect()
    }
}

/// Tuning of the polynomial driver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SiegelOptions {
    /// Work budget for the overlattice engine (candidate lattices).
    pub max_checks: u64,
    /// Use the closed forms and Jordan-class representatives for size 3.
    pub fast_paths: bool,
    /// Series coefficients checked beyond the degree bound `v_l(det 2B)`;
    /// `None` checks up to the full depth `v_l(16 |det 2B|) + 4`.
    pub verification_margin: Option<u32>,
    /// Fail instead of stopping early when the budget runs out before the
    /// target depth.
    pub require_full_depth: bool,
}

impl Default for SiegelOptions {
    fn default() -> Self {
        SiegelOptions { max_checks: 5_000_000, fast_paths: true, verification_margin: Some(1), require_full_depth: false }
    }
}

impl SiegelOptions {
    /// Settings that compute everything with the engine to the full depth.
    pub fn exhaustive() -> Self {
        SiegelOptions { max_checks: u64::MAX, fast_paths: false, verification_margin: None, require_full_depth: true }
    }
}

/// Full verification depth `J = v_l(16 |det 2B|) + 4`.
pub fn full_depth(b: &HalfIntegralMatrix, l: u64) -> u32 {
    valuation_i128(16 * b.det2b(), l).unwrap() + 4
}

/// `chi_B(l)` for a size-2 matrix: the quadratic character of
/// `Q_l(sqrt(-det 2B))` at `l` (0 when ramified).
pub fn binary_character(b: &HalfIntegralMatrix, l: u64) -> i64 {
    let d = -b.det2b();
    let e = valuation_i128(d, l).unwrap();
    if e % 2 == 1 {
        return 0;
    }
    let u = d / (l as i128).pow(e);
    if l == 2 {
        match u.rem_euclid(8) {
            1 => 1,
            5 => -1,
            _ => 0,
        }
    } else {
        legendre(u, l)
    }
}

/// Multiply a truncated series by a polynomial.
fn series_mul(a: &[BigInt], p: &[i128], len: usize) -> Vec<BigInt> {
    (0..len)
        .map(|m| {
            (0..p.len()).filter(|&d| d <= m && m - d < a.len()).map(|d| &a[m - d] * BigInt::from(p[d])).sum()
        })
        .collect()
}

/// Divide a truncated series by a polynomial with constant term 1.
fn series_div(a: &[BigInt], p: &[i128]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(a.len());
    for m in 0..a.len() {
        let mut s = a[m].clone();
        for d in 1..p.len().min(m + 1) {
            s -= &out[m - d] * BigInt::from(p[d]);
        }
        out.push(s);
    }
    out
}

/// Extract `F` from Siegel series coefficients `b_0 .. b_d`.
pub fn polynomial_from_series(b: &HalfIntegralMatrix, l: u64, series: &[BigInt]) -> Result<Vec<BigInt>> {
    let li = l as i128;
    let e = valuation_i128(b.det2b(), l).unwrap() as usize;
    let quotient = match b.size() {
        1 => series_div(series, &[1, -1]),
        2 => {
            let chi = binary_character(b, l) as i128;
            let num = series_mul(series, &[1, -chi * li], series.len());
            series_div(&num, &[1, -1, -li * li, li * li])
        }
        _ => series_div(series, &[1, -1, -li * li, li * li]),
    };
    let degree = quotient.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    if degree > e {
        return Err(Error::NonStabilization(format!(
            "quotient for {b} at l = {l} has a nonzero coefficient in degree {degree} > {e}: {quotient:?}"
        )));
    }
    if quotient.first() != Some(&BigInt::one()) {
        return Err(Error::Internal(format!("F(0) != 1 for {b} at l = {l}")));
    }
    Ok(quotient[..=degree].to_vec())
}

/// Closed forms for size 3: odd `l` with `2B` of rank at least 2 modulo
/// `l`, and `l = 2` with an odd off-diagonal entry.
pub fn closed_form(b: &HalfIntegralMatrix, l: u64) -> Option<Vec<BigInt>> {
    if b.size() != 3 {
        return None;
    }
    let e = valuation_i128(b.det2b(), l)?;
    let geometric = |ratio: i64, terms: u32| -> Vec<BigInt> {
        (0..terms).map(|i| num_traits::pow(BigInt::from(ratio), i as usize)).collect()
    };
    let g = b.double_gram().map(|r| r.map(|x| x as i128));
    if l == 2 {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if g[i][j] % 2 != 0 {
                let chi = if (b.b(i) * b.b(j)) % 2 == 0 { 1 } else { -1 };
                return Some(geometric(4 * chi, e));
            }
        }
        return None;
    }
    let rank = smith_exponents(&g, 3, l, 1).iter().filter(|&&v| v == 0).count();
    if rank < 2 {
        return None;
    }
    if rank == 3 {
        return Some(vec![BigInt::one()]);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let minor = g[i][i] * g[j][j] - g[i][j] * g[i][j];
        if minor % l as i128 != 0 {
            let chi = legendre(-minor, l);
            return Some(geometric(chi * (l * l) as i64, e + 1));
        }
    }
    None
}

/// Memoizing driver for `F_{B,l}`.
#[derive(Debug, Default)]
pub struct SiegelSolver {
    options: SiegelOptions,
    cache: Mutex<HashMap<JordanKey, SiegelPolynomial>>,
}

impl SiegelSolver {
    /// Solver with the given options.
    pub fn new(options: SiegelOptions) -> Self {
        SiegelSolver { options, cache: Mutex::new(HashMap::new()) }
    }

    /// Options in use.
    pub fn options(&self) -> SiegelOptions {
        self.options
    }

    /// `F_{B,l}`.
    pub fn polynomial(&self, b: &HalfIntegralMatrix, l: u64) -> Result<SiegelPolynomial> {
        if b.det2b() == 0 {
            return Err(Error::Domain("Siegel polynomial needs det B != 0".into()));
        }
        if !self.options.fast_paths {
            return self.by_engine(b, l);
        }
        let e = valuation_i128(b.det2b(), l).unwrap();
        if e == 0 {
            return Ok(SiegelPolynomial::one(l));
        }
        if let Some(c) = closed_form(b, l) {
            return Ok(SiegelPolynomial { prime: l, coefficients: c, verified_depth: 0, derivation: Derivation::ClosedForm });
        }
        if b.size() != 3 {
            return self.by_engine(b, l);
        }
        let key = jordan_key(b, l)?;
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let rep = representative(&key)?;
        let result = self.by_engine(&rep, l)?;
        self.cache.lock().unwrap().insert(key, result.clone());
        Ok(result)
    }

    fn by_engine(&self, b: &HalfIntegralMatrix, l: u64) -> Result<SiegelPolynomial> {
        let e = valuation_i128(b.det2b(), l).unwrap();
        let target = match self.options.verification_margin {
            Some(margin) => full_depth(b, l).min(e + 1 + margin),
            None => full_depth(b, l),
        };
        let series = lattice_series(b, l, target, self.options.max_checks)?;
        let reached = (series.coefficients.len() - 1) as u32;
        if reached < target && (self.options.require_full_depth || reached < e + 1) {
            return Err(Error::Resource(format!(
                "Siegel series of {b} at l = {l} reached depth {reached} of {target} within the budget"
            )));
        }
        let coefficients = polynomial_from_series(b, l, &series.coefficients)?;
        Ok(SiegelPolynomial { prime: l, coefficients, verified_depth: reached, derivation: Derivation::Lattice })
    }
}

/// `F_{B,l}` with default options.
pub fn siegel_polynomial(b: &HalfIntegralMatrix, l: u64) -> Result<SiegelPolynomial> {
    SiegelSolver::new(SiegelOptions::default()).polynomial(b, l)
}

/// Primes `l` outside `excluded` that divide `det 2B`, with `F_{B,l}`.
pub fn local_polynomials(
    b: &HalfIntegralMatrix,
    excluded: &[u64],
    solver: &SiegelSolver,
) -> Result<Vec<SiegelPolynomial>> {
    let det = b.det2b();
    if det == 0 {
        return Err(Error::Domain("a_B needs det B != 0".into()));
    }
    prime_factors(det.unsigned_abs())
        .into_iter()
        .filter(|l| !excluded.contains(l))
        .map(|l| solver.polynomial(b, l))
        .collect()
}

/// `a_B = prod_l F_{B,l}(x_l)` over primes `l | det 2B` outside `excluded`,
/// for evaluation points supplied per prime in any commutative ring.
pub fn a_b<R, E>(polys: &[SiegelPolynomial], one: R, mut eval: E) -> Result<R>
where
    E: FnMut(&SiegelPolynomial) -> Result<R>,
    R: std::ops::Mul<Output = R>,
{
    let mut acc = one;
    for f in polys {
        acc = acc * eval(f)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(f: &SiegelPolynomial) -> Vec<i64> {
        f.coefficients.iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn rank_one_series_has_degree_r() {
        let solver = SiegelSolver::new(SiegelOptions::exhaustive());
        for r in 0..4u32 {
            let f = solver.polynomial(&HalfIntegralMatrix::size1(3i64.pow(r)), 3).unwrap();
            assert_eq!(f.degree(), r as usize);
        }
    }

    #[test]
    fn unimodular_gives_one() {
        let solver = SiegelSolver::new(SiegelOptions::exhaustive());
        let b = HalfIntegralMatrix::size3(1, 1, 1, 1, 1, 1);
        assert_eq!(coeffs(&solver.polynomial(&b, 3).unwrap()), vec![1]);
        assert_eq!(coeffs(&solver.polynomial(&b, 5).unwrap()), vec![1]);
        assert_ne!(coeffs(&solver.polynomial(&b, 2).unwrap()), vec![1]);
    }

    #[test]
    fn closed_forms_agree_with_engine() {
        let exhaustive = SiegelSolver::new(SiegelOptions::exhaustive());
        let cases = [
            (HalfIntegralMatrix::size3(1, 1, 3, 1, 0, 1), 3),
            (HalfIntegralMatrix::size3(1, 2, 9, 0, 1, 1), 3),
            (HalfIntegralMatrix::size3(5, 5, 5, 1, 1, 1), 2),
            (HalfIntegralMatrix::size3(2, 1, 3, 1, 1, 0), 2),
            (HalfIntegralMatrix::size3(1, 1, 5, 0, 0, 1), 5),
        ];
        for (b, l) in cases {
            let closed = closed_form(&b, l).expect("closed form applies");
            assert_eq!(closed, exhaustive.polynomial(&b, l).unwrap().coefficients, "B = {b}, l = {l}");
        }
    }
}
