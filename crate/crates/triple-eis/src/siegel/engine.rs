//! Siegel series coefficients through overlattice enumeration.
//!
//! Grouping the character sum by the lattice `L = z Z_l^n + Z_l^n` turns it
//! into a sum over lattices `L` containing `Z_l^n` on which `B` is
//! admissible, each contributing `|S_L| = l^(sum_{i<=j} min(a_i, a_j))`
//! where `l^(a_i)` are the invariants of `L / Z_l^n`. With
//! `T_m = sum_{[L : Z^n] = l^m} |S_L|` the series is
//! `b(t) = T(t) * prod_{i<n} (1 - l^i t)`.
//!
//! Lattices are stored by a canonical row Hermite form of `l^K L` modulo
//! `l^K`. Level `m + 1` is reached from level `m` by adjoining `v / l` for
//! every line of `L / lL`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::HalfIntegralMatrix;
use super::smith::{inv_mod_i128, ipow, smith_exponents};
use crate::arith::padic::valuation_i128;
use crate::error::{Error, Result};

/// Row basis of `l^K L` (rows beyond the size are unused).
pub type Basis = [[i128; 3]; 3];

/// Result of an overlattice enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSeries {
    /// Coefficients `b_0 .. b_depth` of the Siegel series.
    pub coefficients: Vec<BigInt>,
    /// Number of admissible lattices found at each level.
    pub lattice_counts: Vec<usize>,
    /// Candidate lattices examined.
    pub checks: u64,
}

struct Context {
    n: usize,
    l: u64,
    k: u32,
    modulus: i128,
    gram: [[i128; 3]; 3],
    two_val: u32,
}

impl Context {
    fn hnf(&self, gens: &[[i128; 3]]) -> Basis {
        let (n, m) = (self.n, self.modulus);
        let mut rows: Vec<[i128; 3]> = gens.iter().map(|g| g.map(|x| x.rem_euclid(m))).collect();
        let mut h: Basis = [[0; 3]; 3];
        for col in 0..n {
            let mut best: Option<(u32, usize)> = None;
            for (idx, r) in rows.iter().enumerate() {
                if let Some(v) = valuation_i128(r[col], self.l) {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, idx));
                    }
                }
            }
            let Some((v, idx)) = best else {
                h[col][col] = m;
                continue;
            };
            let mut piv = rows.swap_remove(idx);
            let lv = ipow(self.l, v);
            let inv = inv_mod_i128(piv[col] / lv, m);
            for x in piv.iter_mut().take(n) {
                *x = (*x * inv).rem_euclid(m);
            }
            for r in rows.iter_mut() {
                let f = r[col] / lv;
                if f != 0 {
                    for c in 0..n {
                        r[c] = (r[c] - f * piv[c] % m).rem_euclid(m);
                    }
                }
            }
            let lift = ipow(self.l, self.k - v);
            rows.push(piv.map(|x| (x * lift).rem_euclid(m)));
            h[col] = piv;
        }
        for i in 0..n {
            for k in 0..i {
                let f = h[k][i] / h[i][i];
                if f == 0 {
                    continue;
                }
                for c in 0..n {
                    if c != k {
                        h[k][c] = (h[k][c] - f * h[i][c] % m).rem_euclid(m);
                    }
                }
            }
        }
        h
    }

    /// Generators of `l^K L` adapted to the invariants of `L / Z^n`.
    fn smith_generators(&self, h: &Basis) -> [[i128; 3]; 3] {
        let (n, m, l) = (self.n, self.modulus, self.l);
        let mut a = [[0i128; 3]; 3];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = h[i][j].rem_euclid(m);
            }
        }
        let mut w = [[0i128; 3]; 3];
        for (i, row) in w.iter_mut().enumerate().take(n) {
            row[i] = 1;
        }
        let mut d = [0i128; 3];
        for s in 0..n {
            let mut best: Option<(u32, usize, usize)> = None;
            for i in s..n {
                for j in s..n {
                    if let Some(v) = valuation_i128(a[i][j], l) {
                        if best.is_none_or(|b| v < b.0) {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let Some((v, i, j)) = best else {
                break;
            };
            a.swap(s, i);
            for row in a.iter_mut() {
                row.swap(s, j);
            }
            w.swap(s, j);
            let lv = ipow(l, v);
            let inv = inv_mod_i128(a[s][s] / lv, m);
            for r in (s + 1)..n {
                let f = ((a[r][s] / lv) * inv).rem_euclid(m);
                for c in 0..n {
                    a[r][c] = (a[r][c] - f * a[s][c] % m).rem_euclid(m);
                }
            }
            for c in (s + 1)..n {
                let f = ((a[s][c] / lv) * inv).rem_euclid(m);
                for r in 0..n {
                    a[r][c] = (a[r][c] - f * a[r][s] % m).rem_euclid(m);
                }
                // column c -= f column s, so basis vector s absorbs f times vector c
                for t in 0..n {
                    w[s][t] = (w[s][t] + f * w[c][t] % m).rem_euclid(m);
                }
            }
            d[s] = lv;
        }
        let mut gens = [[0i128; 3]; 3];
        for i in 0..n {
            for t in 0..n {
                gens[i][t] = (d[i] * w[i][t]).rem_euclid(m);
            }
        }
        gens
    }

    fn form(&self, a: &[i128; 3], b: &[i128; 3]) -> Option<i128> {
        let mut s: i128 = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                let t = self.gram[i][j].checked_mul(a[i])?.checked_mul(b[j])?;
                s = s.checked_add(t)?;
            }
        }
        Some(s)
    }

    /// Whether `ord(y) Q(y)` is integral for the single vector `y = g / l^K`;
    /// every element of an admissible lattice passes.
    fn admissible_vector(&self, g: &[i128; 3]) -> Result<bool> {
        let k = self.k;
        let v = (0..self.n).filter_map(|t| valuation_i128(g[t], self.l)).min().unwrap_or(k);
        let ord = k - v.min(k);
        let q = self.form(g, g).ok_or_else(|| Error::Resource("lattice form values exceed 128-bit range".into()))?;
        Ok(valuation_i128(q, self.l).is_none_or(|v| v + ord >= 2 * k + self.two_val))
    }

    /// Whether `ord(y) Q(y)` and `max(ord) B(y_i, y_j)` are integral on the
    /// generators `y_i = g_i / l^K`.
    fn admissible(&self, gens: &[[i128; 3]; 3]) -> Result<bool> {
        let n = self.n;
        let k = self.k;
        let mut ords = [0u32; 3];
        for i in 0..n {
            let v = (0..n).filter_map(|t| valuation_i128(gens[i][t], self.l)).min().unwrap_or(k);
            ords[i] = k - v.min(k);
        }
        let overflow = || Error::Resource("lattice form values exceed 128-bit range".into());
        for i in 0..n {
            let q = self.form(&gens[i], &gens[i]).ok_or_else(overflow)?;
            if let Some(v) = valuation_i128(q, self.l) {
                if v + ords[i] < 2 * k + self.two_val {
                    return Ok(false);
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let q = self.form(&gens[i], &gens[j]).ok_or_else(overflow)?;
                if let Some(v) = valuation_i128(q, self.l) {
                    if v + ords[i].max(ords[j]) < 2 * k {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    fn weight(&self, h: &Basis) -> BigInt {
        let e = smith_exponents(h, self.n, self.l, self.k);
        let mut a: Vec<u32> = e.iter().map(|&x| self.k - x.min(self.k)).collect();
        a.sort_unstable_by(|x, y| y.cmp(x));
        let mut g = 0u32;
        for i in 0..self.n {
            for j in i..self.n {
                g += a[i].min(a[j]);
            }
        }
        num_traits::pow(BigInt::from(self.l), g as usize)
    }
}

/// Siegel series coefficients `b_0 .. b_d` where `d <= depth` is the deepest
/// level completed within `max_checks` candidate lattices.
pub fn lattice_series(b: &HalfIntegralMatrix, l: u64, depth: u32, max_checks: u64) -> Result<LatticeSeries> {
    if b.det2b() == 0 {
        return Err(Error::Domain("Siegel series needs det B != 0".into()));
    }
    let n = b.size();
    let k = depth + 1;
    let modulus = (l as i128)
        .checked_pow(k)
        .filter(|m| m.checked_mul(*m).is_some())
        .ok_or_else(|| Error::Resource(format!("depth {depth} at l = {l} exceeds 128-bit lattice arithmetic")))?;
    let g = b.double_gram();
    let ctx = Context {
        n,
        l,
        k,
        modulus,
        gram: g.map(|r| r.map(|x| x as i128)),
        two_val: if l == 2 { 1 } else { 0 },
    };
    let mut level: HashSet<Basis> = HashSet::new();
    level.insert(ctx.hnf(&[]));
    let mut t = vec![BigInt::one()];
    let mut counts = vec![1usize];
    let mut checks = 0u64;
    let lines = line_representatives(n, l);
    for _ in 1..=depth {
        let mut next: HashSet<Basis> = HashSet::new();
        let mut total = BigInt::zero();
        let mut exhausted = false;
        'outer: for h in &level {
            let mut gens: Vec<[i128; 3]> = h[..n].to_vec();
            gens.push([0; 3]);
            for coeffs in &lines {
                checks += 1;
                if checks > max_checks {
                    exhausted = true;
                    break 'outer;
                }
                let mut v = [0i128; 3];
                for (r, &c) in coeffs.iter().enumerate() {
                    for i in 0..n {
                        v[i] += c * h[r][i];
                    }
                }
                if v[..n].iter().any(|x| x % l as i128 != 0) {
                    return Err(Error::Internal("lattice level exceeds the working modulus".into()));
                }
                gens[n] = v.map(|x| x / l as i128);
                if !ctx.admissible_vector(&gens[n])? {
                    continue;
                }
                let h2 = ctx.hnf(&gens);
                if h2 == *h || next.contains(&h2) {
                    continue;
                }
                if ctx.admissible(&ctx.smith_generators(&h2))? {
                    total += ctx.weight(&h2);
                    next.insert(h2);
                }
            }
        }
        if exhausted {
            break;
        }
        t.push(total);
        counts.push(next.len());
        level = next;
    }
    // b(t) = T(t) prod_{i<n} (1 - l^i t)
    let mut factor = vec![BigInt::one()];
    for i in 0..n {
        let li = num_traits::pow(BigInt::from(l), i);
        let mut next = vec![BigInt::zero(); factor.len() + 1];
        for (d, c) in factor.iter().enumerate() {
            next[d] += c;
            next[d + 1] -= c * &li;
        }
        factor = next;
    }
    let coefficients = (0..t.len())
        .map(|m| (0..factor.len()).filter(|&d| d <= m).map(|d| &factor[d] * &t[m - d]).sum())
        .collect();
    Ok(LatticeSeries { coefficients, lattice_counts: counts, checks })
}

/// Coefficient vectors of the lines of `F_l^n` (first nonzero entry 1).
fn line_representatives(n: usize, l: u64) -> Vec<Vec<i128>> {
    let l = l as i128;
    let mut out = Vec::new();
    let total = l.pow(n as u32);
    for code in 1..total {
        let mut c = Vec::with_capacity(n);
        let mut x = code;
        for _ in 0..n {
            c.push(x % l);
            x /= l;
        }
        if c.iter().find(|&&d| d != 0) == Some(&1) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::oracle::siegel_series_oracle;
    use super::*;

    fn check(b: HalfIntegralMatrix, l: u64, j: u32) {
        let engine = lattice_series(&b, l, j, u64::MAX).unwrap();
        let oracle = siegel_series_oracle(&b, l, j, 10_000_000).unwrap();
        assert_eq!(engine.coefficients, oracle, "B = {b}, l = {l}");
    }

    #[test]
    fn engine_matches_oracle_small() {
        check(HalfIntegralMatrix::size1(3), 3, 3);
        check(HalfIntegralMatrix::size1(4), 2, 4);
        check(HalfIntegralMatrix::size2(1, 3, 1), 11, 2);
        check(HalfIntegralMatrix::size2(2, 2, 2), 2, 3);
        check(HalfIntegralMatrix::size3(1, 1, 1, 1, 1, 1), 2, 2);
        check(HalfIntegralMatrix::size3(1, 1, 3, 0, 0, 0), 3, 2);
        check(HalfIntegralMatrix::size3(1, 2, 2, 2, 0, 0), 2, 2);
    }
}
