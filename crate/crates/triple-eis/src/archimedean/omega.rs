//! The polynomials `omega*(h; alpha, s)`, the operators `D_lambda` and the
//! leading-term structure of `K^M_{D_lambda}`.
//!
//! `omega*` is the Gamma-normalized integral of
//! `exp(-tr u) det(u + 4 pi h)^(alpha-2) det(u)^(s-2)` over positive
//! definite `u`. Each monomial `F(u)` integrates to
//! `F(-d) det(T)^(-s)` at `T = 1`, which is a Taylor coefficient of
//! `det(1 + X)^(-s) = sum_n C(-s, n) (det(1 + X) - 1)^n`. The expansion of
//! `det(u + h)^M` and these Taylor coefficients are computed with packed
//! integer monomials.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::gamma::GammaValue;
use super::sympoly::{factorial, i_power, int, real, Monomial, SymPoly, Var};
use crate::error::{domain, Result};

/// Parity type `lambda = (lambda1, lambda2, lambda1 + lambda2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParityType {
    lambda1: u32,
    lambda2: u32,
}

impl ParityType {
    /// The four parity types.
    pub const ALL: [ParityType; 4] = [
        ParityType { lambda1: 0, lambda2: 0 },
        ParityType { lambda1: 0, lambda2: 1 },
        ParityType { lambda1: 1, lambda2: 0 },
        ParityType { lambda1: 1, lambda2: 1 },
    ];

    /// From `(lambda1, lambda2)` in `{0, 1}`.
    pub fn new(lambda1: u32, lambda2: u32) -> Result<Self> {
        if lambda1 > 1 || lambda2 > 1 {
            return domain("parity type entries must be 0 or 1");
        }
        Ok(ParityType { lambda1, lambda2 })
    }

    /// From a full triple, checking `lambda3 = lambda1 + lambda2`.
    pub fn from_triple(t: [u32; 3]) -> Result<Self> {
        if t[2] != t[0] + t[1] {
            return domain("parity type needs lambda3 = lambda1 + lambda2");
        }
        Self::new(t[0], t[1])
    }

    /// Parity type of weights `k >= l >= m`.
    pub fn of_weights(k: i64, l: i64, m: i64) -> Result<Self> {
        if !(k >= l && l >= m && m >= 1) {
            return domain("weights must satisfy k >= l >= m >= 1");
        }
        Self::new((l - m).rem_euclid(2) as u32, (k - l).rem_euclid(2) as u32)
    }

    /// `lambda1`.
    pub fn lambda1(&self) -> u32 {
        self.lambda1
    }

    /// `lambda2`.
    pub fn lambda2(&self) -> u32 {
        self.lambda2
    }

    /// `lambda3 = lambda1 + lambda2`.
    pub fn lambda3(&self) -> u32 {
        self.lambda1 + self.lambda2
    }

    /// `(lambda1, lambda2, lambda3)`.
    pub fn triple(&self) -> [u32; 3] {
        [self.lambda1, self.lambda2, self.lambda3()]
    }
}

type Packed = HashMap<u64, i128>;

const BITS: u32 = 5;
const FIELD: u64 = (1 << BITS) - 1;
const U_MASK: u64 = (1 << (6 * BITS)) - 1;

fn exponent(key: u64, idx: usize) -> u64 {
    (key >> (BITS as usize * idx)) & FIELD
}

fn packed_mul(a: &Packed, b: &Packed, max_degree: Option<u64>, nvars: usize) -> Packed {
    let mut out: Packed = HashMap::with_capacity(a.len().max(b.len()) * 4);
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k = ka + kb;
            if let Some(d) = max_degree {
                if (0..nvars).map(|i| exponent(k, i)).sum::<u64>() > d {
                    continue;
                }
            }
            *out.entry(k).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `det` of a symmetric matrix whose entries (in the slot order
/// `11, 22, 33, 12, 13, 23`) are packed polynomials.
fn packed_det(a: &[Packed; 6], nvars: usize) -> Packed {
    let m = |x: &Packed, y: &Packed| packed_mul(x, y, None, nvars);
    let mut out: Packed = HashMap::new();
    let mut add = |p: Packed, c: i128| {
        for (k, v) in p {
            *out.entry(k).or_insert(0) += c * v;
        }
    };
    add(m(&m(&a[0], &a[1]), &a[2]), 1);
    add(m(&m(&a[3], &a[4]), &a[5]), 2);
    add(m(&m(&a[0], &a[5]), &a[5]), -1);
    add(m(&m(&a[1], &a[4]), &a[4]), -1);
    add(m(&m(&a[2], &a[3]), &a[3]), -1);
    out.retain(|_, c| *c != 0);
    out
}

fn single(key: u64) -> Packed {
    HashMap::from([(key, 1)])
}

fn var_key(idx: usize) -> u64 {
    1 << (BITS as usize * idx)
}

/// `det(u + h)^m` with `u` in slots `0..6` and `h` in slots `6..12`.
fn det_sum_power(m: u32) -> Packed {
    let entries: [Packed; 6] = std::array::from_fn(|i| {
        let mut p = single(var_key(i));
        p.insert(var_key(6 + i), 1);
        p
    });
    let det = packed_det(&entries, 12);
    let mut out = single(0);
    for _ in 0..m {
        out = packed_mul(&out, &det, None, 12);
    }
    out
}

/// Coefficients of `C(-s, n)` as a polynomial in `s`, for `n <= max_n`.
fn negative_binomials(max_n: usize) -> Vec<Vec<BigRational>> {
    let mut out = vec![vec![BigRational::one()]];
    for n in 1..=max_n {
        // C(-s, n) = C(-s, n-1) * (-s - n + 1) / n
        let prev = &out[n - 1];
        let mut next = vec![BigRational::zero(); prev.len() + 1];
        let inv_n = BigRational::new(1.into(), BigInt::from(n));
        for (d, c) in prev.iter().enumerate() {
            next[d] -= c * BigRational::from_integer(BigInt::from(n - 1)) * &inv_n;
            next[d + 1] -= c * &inv_n;
        }
        out.push(next);
    }
    out
}

/// Powers `(det(1 + X) - 1)^n` truncated to total degree `max_degree`.
fn det_shift_powers(max_degree: u64) -> Vec<Packed> {
    let entries: [Packed; 6] = std::array::from_fn(|i| {
        let mut p = single(var_key(i));
        if i < 3 {
            p.insert(0, 1);
        }
        p
    });
    let mut e = packed_det(&entries, 6);
    e.remove(&0);
    let mut out = vec![single(0)];
    for _ in 0..max_degree {
        let next = packed_mul(out.last().expect("nonempty"), &e, Some(max_degree), 6);
        out.push(next);
    }
    out
}

fn omega_star_cache() -> &'static Mutex<HashMap<u32, SymPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, SymPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `omega*(h; alpha, s)` as a polynomial in the entries `T_ij` of `h`, in
/// `s` and in `pi`.
pub fn omega_star(alpha: u32) -> Result<SymPoly> {
    if alpha < 2 {
        return domain("omega* needs alpha >= 2");
    }
    if let Some(p) = omega_star_cache().lock().expect("cache lock").get(&alpha) {
        return Ok(p.clone());
    }
    let m = alpha - 2;
    let max_u = 3 * m as u64;
    let expansion = det_sum_power(m);
    let shifts = det_shift_powers(max_u);
    let binomials = negative_binomials(max_u as usize);

    let mut by_u: HashMap<u64, Vec<(u64, i128)>> = HashMap::new();
    for (k, c) in expansion {
        by_u.entry(k & U_MASK).or_default().push((k >> (6 * BITS), c));
    }
    // accumulators scaled by 2^(3m), in the basis C(-s, n)
    let mut acc: HashMap<u64, Vec<BigInt>> = HashMap::new();
    for (u_key, hs) in by_u {
        let degree: u64 = (0..6).map(|i| exponent(u_key, i)).sum();
        let off_degree: u64 = (3..6).map(|i| exponent(u_key, i)).sum();
        let mut weight = (0..6).fold(BigInt::one(), |a, i| a * factorial(exponent(u_key, i)));
        weight <<= (max_u - off_degree) as usize;
        if degree % 2 == 1 {
            weight = -weight;
        }
        let column: Vec<(usize, BigInt)> = shifts
            .iter()
            .enumerate()
            .filter_map(|(n, p)| p.get(&u_key).map(|c| (n, &weight * BigInt::from(*c))))
            .collect();
        for (h_key, c) in hs {
            let slot = acc.entry(h_key).or_insert_with(|| vec![BigInt::zero(); max_u as usize + 1]);
            for (n, w) in &column {
                slot[*n] += w * BigInt::from(c);
            }
        }
    }
    let scale = BigRational::new(BigInt::one(), BigInt::one() << (max_u as usize));
    let mut out = SymPoly::zero();
    let t_vars = [Var::T11, Var::T22, Var::T33, Var::T12, Var::T13, Var::T23];
    for (h_key, column) in acc {
        let mut s_poly = vec![BigRational::zero(); max_u as usize + 1];
        for (n, a) in column.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let a = BigRational::from_integer(a.clone()) * &scale;
            for (d, b) in binomials[n].iter().enumerate() {
                s_poly[d] += &a * b;
            }
        }
        let h_degree: u64 = (0..6).map(|i| exponent(h_key, i)).sum();
        let four = BigRational::from_integer(BigInt::from(4).pow(h_degree as u32));
        let mut mono = Monomial::var(Var::Pi, 2 * h_degree as i32);
        for (i, v) in t_vars.iter().enumerate() {
            mono = mono.mul(&Monomial::var(*v, 2 * exponent(h_key, i) as i32));
        }
        for (d, c) in s_poly.into_iter().enumerate() {
            if !c.is_zero() {
                out.add_term(mono.mul(&Monomial::var(Var::S, 2 * d as i32)), real(c * &four));
            }
        }
    }
    omega_star_cache().lock().expect("cache lock").insert(alpha, out.clone());
    Ok(out)
}

/// `det(4 pi T + u)^M` in the entries of `T`, `u` and `pi`.
pub fn det_power(m: u32) -> SymPoly {
    let t_vars = [Var::T11, Var::T22, Var::T33, Var::T12, Var::T13, Var::T23];
    let u_vars = [Var::U11, Var::U22, Var::U33, Var::U12, Var::U13, Var::U23];
    let mut out = SymPoly::zero();
    for (k, c) in det_sum_power(m) {
        let mut mono = Monomial::one();
        let mut h_degree = 0;
        for i in 0..6 {
            mono = mono.mul(&Monomial::var(u_vars[i], 2 * exponent(k, i) as i32));
            let e = exponent(k, 6 + i);
            h_degree += e;
            mono = mono.mul(&Monomial::var(t_vars[i], 2 * e as i32));
        }
        mono = mono.mul(&Monomial::var(Var::Pi, 2 * h_degree as i32));
        let coef = BigInt::from(c) * BigInt::from(4).pow(h_degree as u32);
        out.add_term(mono, real(BigRational::from_integer(coef)));
    }
    out
}

fn prefactor() -> SymPoly {
    // 1 / (2 pi^2 i) = -i / (2 pi^2)
    let c = i_power(-1) * real(BigRational::new(1.into(), 2.into()));
    SymPoly::term(Monomial::var(Var::Pi, -4), c)
}

fn d011(f: &SymPoly) -> SymPoly {
    let a = f.partial_t(1, 2).partial_t(1, 3);
    let b = f.partial_t(1, 1).partial_t(2, 3);
    let c = f.partial_t(2, 3).mul(&SymPoly::term(Monomial::var(Var::Pi, 2), int(4)));
    prefactor().mul(&a.sub(&b).add(&c))
}

fn d101(f: &SymPoly) -> SymPoly {
    let a = f.partial_t(3, 3).partial_t(1, 2);
    let b = f.partial_t(1, 3).partial_t(2, 3);
    prefactor().mul(&a.sub(&b))
}

/// Applies `D_lambda` to a polynomial in the entries `T_ij`.
pub fn apply_d_lambda(f: &SymPoly, lambda: ParityType) -> SymPoly {
    match (lambda.lambda1, lambda.lambda2) {
        (0, 0) => f.clone(),
        (0, 1) => d011(f),
        (1, 0) => d101(f),
        _ => d011(&d101(f)),
    }
}

/// `K^M_{D_lambda}(T; u) = D_lambda det(4 pi T + u)^M`.
pub fn k_polynomial(m: u32, lambda: ParityType) -> SymPoly {
    apply_d_lambda(&det_power(m), lambda)
}

/// `omega^M_{D_lambda}(T, s) = D_lambda omega*(T; M + 2, s)`.
pub fn omega_d_lambda(m: u32, lambda: ParityType) -> Result<SymPoly> {
    Ok(apply_d_lambda(&omega_star(m + 2)?, lambda))
}

/// Outcome of the leading-term comparison in `Y1`.
#[derive(Clone, Debug, Serialize)]
pub struct LeadingTerm {
    /// `M`.
    pub m: u32,
    /// Parity type.
    pub lambda: [u32; 3],
    /// Closed-form constant `C_2`.
    pub c2: GammaValue,
    /// Closed-form polynomial `c_lambda(Y2, Y3; u)`.
    pub c_lambda: SymPoly,
    /// Coefficient of `Y1^(M - lambda1/2)` extracted from the expansion.
    pub extracted: SymPoly,
    /// `M < lambda1 + lambda2`: the closed form is empty.
    pub degenerate: bool,
    /// Whether the expansion has no higher power of `Y1` and the
    /// extracted coefficient equals `C_2 c_lambda`.
    pub holds: bool,
}

/// `C_2` for given `M` and `lambda` (requires `M >= lambda1 + lambda2`).
pub fn c2_constant(m: u32, lambda: ParityType) -> GammaValue {
    let (l1, l2) = (lambda.lambda1 as u64, lambda.lambda2 as u64);
    let m = m as u64;
    let q = BigRational::new(factorial(2 * m + l1) * factorial(m), factorial(2 * m) * factorial(m - l1 - l2));
    GammaValue::rational(q)
        .mul(&GammaValue::two_power((3 * (l1 + l2) - l1) as i64))
        .mul(&GammaValue::i_power(l1 as i64 - l2 as i64))
}

/// `c_lambda(Y2, Y3; u)`.
pub fn c_lambda(m: u32, lambda: ParityType) -> SymPoly {
    let (l1, l2) = (lambda.lambda1 as i32, lambda.lambda2 as i32);
    let y2 = SymPoly::var(Var::Y2);
    let y3 = SymPoly::var(Var::Y3);
    let base = SymPoly::var(Var::U22)
        .mul(&y3)
        .neg()
        .sub(&SymPoly::var(Var::U33).mul(&y2))
        .add(&y2.mul(&y3).scale(&int(2)))
        .add(
            &SymPoly::var(Var::U23)
                .mul(&SymPoly::var_power2(Var::Y2, 1))
                .mul(&SymPoly::var_power2(Var::Y3, 1))
                .scale(&int(2)),
        );
    base.pow((m as i32 - l1 - l2) as u32)
        .mul(&SymPoly::var_power2(Var::Y2, l1 + l2))
        .mul(&SymPoly::var_power2(Var::Y3, l2))
}

/// Substitutes `T = Y / (4 pi)` where `Y` has zero diagonal and
/// off-diagonal entries `sqrt(Y_i Y_j)`.
pub fn substitute_scaled_y(f: &SymPoly) -> Result<SymPoly> {
    let quarter = real(BigRational::new(1.into(), 4.into()));
    let entry = |i: Var, j: Var| {
        SymPoly::term(Monomial::var(i, 1).mul(&Monomial::var(j, 1)).mul(&Monomial::var(Var::Pi, -2)), quarter.clone())
    };
    f.substitute_all(&[
        (Var::T11, SymPoly::zero()),
        (Var::T22, SymPoly::zero()),
        (Var::T33, SymPoly::zero()),
        (Var::T12, entry(Var::Y1, Var::Y2)),
        (Var::T13, entry(Var::Y1, Var::Y3)),
        (Var::T23, entry(Var::Y2, Var::Y3)),
    ])
}

/// Compares the top `Y1` coefficient of `K^M_{D_lambda}(Y / 4pi; u)` with
/// `C_2 c_lambda Y1^(M - lambda1/2)`.
pub fn leading_term_check(m: u32, lambda: ParityType) -> Result<LeadingTerm> {
    let triple = lambda.triple();
    if m < lambda.lambda3() {
        return Ok(LeadingTerm {
            m,
            lambda: triple,
            c2: GammaValue::integer(0),
            c_lambda: SymPoly::zero(),
            extracted: SymPoly::zero(),
            degenerate: true,
            holds: true,
        });
    }
    let k = substitute_scaled_y(&k_polynomial(m, lambda))?;
    let target = 2 * m as i32 - lambda.lambda1 as i32;
    let extracted = k.coefficient(Var::Y1, target);
    let no_higher = k.max_exponent2(Var::Y1).is_none_or(|e| e <= target);
    let c2 = c2_constant(m, lambda);
    let closed = c_lambda(m, lambda);
    let holds = no_higher && extracted == closed.mul(&c2.to_sympoly());
    Ok(LeadingTerm { m, lambda: triple, c2, c_lambda: closed, extracted, degenerate: false, holds })
}

/// Whether every coefficient of `T12^j3 T23^j1 T13^j2` in `p` has
/// `j1 = j2 = j3 (mod 2)`.
pub fn parity_vanishing_holds(p: &SymPoly) -> bool {
    p.terms().all(|(mono, _)| {
        let j3 = mono.exponent2(Var::T12) / 2;
        let j1 = mono.exponent2(Var::T23) / 2;
        let j2 = mono.exponent2(Var::T13) / 2;
        (j1 - j2) % 2 == 0 && (j2 - j3) % 2 == 0
    })
}

/// Largest index degree of `h` in `p`: for each index `i`, twice the
/// exponent of `T_ii` plus the exponents of the `T_ij` with `j != i`.
pub fn max_index_degree(p: &SymPoly) -> i32 {
    let rows = [
        [Var::T11, Var::T12, Var::T13],
        [Var::T22, Var::T12, Var::T23],
        [Var::T33, Var::T13, Var::T23],
    ];
    p.terms()
        .map(|(mono, _)| {
            rows.iter()
                .map(|r| mono.exponent2(r[0]) + (mono.exponent2(r[1]) + mono.exponent2(r[2])) / 2)
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_star_small_cases() {
        assert_eq!(omega_star(2).unwrap(), SymPoly::one());
        // omega*(h; 3, s): the u11 coefficient integrates to s, so the
        // coefficient of T22 T33 (from u11 (4 pi)^2 h22 h33) is 16 pi^2 s
        let w = omega_star(3).unwrap();
        let c = w.coefficient(Var::T22, 2).coefficient(Var::T33, 2).coefficient(Var::T11, 0);
        let c = c.coefficient(Var::T12, 0).coefficient(Var::T13, 0).coefficient(Var::T23, 0);
        assert_eq!(c, SymPoly::term(Monomial::var(Var::Pi, 4).mul(&Monomial::var(Var::S, 2)), int(16)));
        // constant term: E[det u] = s (s - 1/2) (s - 1)
        let s = SymPoly::var(Var::S);
        let half = SymPoly::rational(BigRational::new(1.into(), 2.into()));
        let expected = s.mul(&s.sub(&half)).mul(&s.sub(&SymPoly::one()));
        let constant = [Var::T11, Var::T22, Var::T33, Var::T12, Var::T13, Var::T23]
            .iter()
            .fold(w.clone(), |acc, v| acc.coefficient(*v, 0));
        assert_eq!(constant, expected);
    }

    #[test]
    fn parity_and_degree() {
        for alpha in 2..=5 {
            let w = omega_star(alpha).unwrap();
            assert!(parity_vanishing_holds(&w));
            assert!(max_index_degree(&w) <= 2 * (alpha as i32 - 2));
        }
    }

    #[test]
    fn operators_commute() {
        let f = det_power(2);
        let a = d011(&d101(&f));
        let b = d101(&d011(&f));
        assert_eq!(a, b);
        assert_eq!(apply_d_lambda(&f, ParityType::new(0, 0).unwrap()), f);
    }

    #[test]
    fn leading_terms_small() {
        for lambda in ParityType::ALL {
            for m in 0..=2 {
                let r = leading_term_check(m, lambda).unwrap();
                assert!(r.holds, "M = {m}, lambda = {:?}: {} vs {}", lambda, r.extracted, r.c_lambda);
            }
        }
        let r = leading_term_check(1, ParityType::new(0, 1).unwrap()).unwrap();
        assert_eq!(r.c2, GammaValue::integer(-8).mul(&GammaValue::i_power(1)));
    }
}
