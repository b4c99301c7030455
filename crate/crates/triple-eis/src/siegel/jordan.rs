//! Jordan splittings of `2B` over `Z_l` and canonical representatives.
//!
//! `F_{B,l}` depends only on the `Z_l`-equivalence class of `B`. The key
//! produced here determines the class (equal keys imply equivalent forms),
//! so results can be cached per key and computed on a small representative.

use super::matrix::HalfIntegralMatrix;
use super::smith::{inv_mod_i128, ipow};
use crate::arith::padic::valuation_i128;
use crate::error::{Error, Result};

/// One orthogonal component of a Jordan splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JordanBlock {
    /// `l^a u x^2`; for odd `l` the unit is recorded by its Legendre symbol
    /// (`1` or `-1`), for `l = 2` by its residue modulo 8.
    Line { exponent: u32, unit_class: i64 },
    /// `2^a (2xy)` (hyperbolic plane, `l = 2` only).
    Hyperbolic { exponent: u32 },
    /// `2^a (2x^2 + 2xy + 2y^2)` (anisotropic plane, `l = 2` only).
    Anisotropic { exponent: u32 },
}

/// Class key of `2B` over `Z_l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JordanKey {
    /// Matrix size.
    pub size: usize,
    /// Prime.
    pub prime: u64,
    /// Normalized components.
    pub blocks: Vec<JordanBlock>,
}

/// Legendre symbol `(a / l)` for an odd prime `l`.
pub fn legendre(a: i128, l: u64) -> i64 {
    let m = l as i128;
    let a = a.rem_euclid(m);
    if a == 0 {
        return 0;
    }
    let mut r: i128 = 1;
    let (mut base, mut e) = (a, (m - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Smallest quadratic non-residue modulo an odd prime.
pub fn non_residue(l: u64) -> i64 {
    (2..l as i64).find(|&a| legendre(a as i128, l) == -1).expect("odd prime has a non-residue")
}

struct Gram {
    g: [[i128; 3]; 3],
    modulus: i128,
}

impl Gram {
    /// `e_k <- e_k - f e_i`.
    fn shear(&mut self, k: usize, i: usize, f: i128) {
        let m = self.modulus;
        let f = f.rem_euclid(m);
        for c in 0..3 {
            self.g[k][c] = (self.g[k][c] - f * self.g[i][c] % m).rem_euclid(m);
        }
        for r in 0..3 {
            self.g[r][k] = (self.g[r][k] - f * self.g[r][i] % m).rem_euclid(m);
        }
    }

    /// `e_i <- e_i + e_j`.
    fn add_basis(&mut self, i: usize, j: usize) {
        self.shear(i, j, -1);
    }
}

fn val(x: i128, l: u64) -> u32 {
    valuation_i128(x, l).unwrap_or(u32::MAX)
}

/// Jordan splitting of `2B` over `Z_l`.
pub fn jordan_key(b: &HalfIntegralMatrix, l: u64) -> Result<JordanKey> {
    let n = b.size();
    let det = b.det2b();
    let e = valuation_i128(det, l).ok_or_else(|| Error::Domain("singular matrix".into()))?;
    let work = e + 6;
    let modulus = (l as i128)
        .checked_pow(work)
        .filter(|m| m.checked_mul(*m).is_some())
        .ok_or_else(|| Error::Resource("Jordan splitting precision exceeds 128-bit range".into()))?;
    let mut gram = Gram { g: b.double_gram().map(|r| r.map(|x| (x as i128).rem_euclid(modulus))), modulus };
    let mut active: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();
    while !active.is_empty() {
        let mut min = u32::MAX;
        for &i in &active {
            for &j in &active {
                min = min.min(val(gram.g[i][j], l));
            }
        }
        if min >= work {
            return Err(Error::Internal("Jordan splitting lost precision".into()));
        }
        let diag = active.iter().copied().find(|&i| val(gram.g[i][i], l) == min);
        let pivot_line = match diag {
            Some(i) => Some(i),
            None if l != 2 => {
                let (i, j) = off_diagonal_min(&gram, &active, l, min);
                gram.add_basis(i, j);
                Some(i)
            }
            None => None,
        };
        if let Some(i) = pivot_line {
            let lv = ipow(l, min);
            let unit = gram.g[i][i] / lv;
            let inv = inv_mod_i128(unit, modulus);
            for &k in active.iter().filter(|&&k| k != i) {
                let f = (gram.g[k][i] / lv) * inv;
                gram.shear(k, i, f % modulus);
            }
            let unit_class = if l == 2 { unit.rem_euclid(8) as i64 } else { legendre(unit, l) };
            blocks.push((min, unit_class, 0usize));
            active.retain(|&k| k != i);
        } else {
            let (i, j) = off_diagonal_min(&gram, &active, l, min);
            let g = gram.g;
            let scale = ipow(2, 2 * min);
            let det_unit = (g[i][i] * g[j][j] % modulus - g[i][j] * g[i][j] % modulus).rem_euclid(modulus) / scale;
            let inv = inv_mod_i128(det_unit, modulus);
            for &k in active.iter().filter(|&&k| k != i && k != j) {
                let x1 = ((g[j][j] * g[i][k] - g[i][j] * g[j][k]) % modulus / scale % modulus) * inv;
                let x2 = ((g[i][i] * g[j][k] - g[i][j] * g[i][k]) % modulus / scale % modulus) * inv;
                gram.shear(k, i, x1 % modulus);
                gram.shear(k, j, x2 % modulus);
            }
            let a = gram.g[i][i] / ipow(2, min);
            let c = gram.g[j][j] / ipow(2, min);
            let kind = if (a * c).rem_euclid(8) == 0 { 1 } else { 2 };
            blocks.push((min, 0, kind));
            active.retain(|&k| k != i && k != j);
        }
    }
    let mut out: Vec<JordanBlock> = if l == 2 {
        blocks
            .into_iter()
            .map(|(a, u, kind)| match kind {
                0 => JordanBlock::Line { exponent: a, unit_class: u },
                1 => JordanBlock::Hyperbolic { exponent: a },
                _ => JordanBlock::Anisotropic { exponent: a },
            })
            .collect()
    } else {
        // odd l: only the Legendre symbol of the determinant of each
        // homogeneous component matters; fold it into the last line
        let mut by_exp: Vec<(u32, i64, usize)> = Vec::new();
        for (a, u, _) in blocks {
            match by_exp.iter_mut().find(|x| x.0 == a) {
                Some(x) => {
                    x.1 *= u;
                    x.2 += 1;
                }
                None => by_exp.push((a, u, 1)),
            }
        }
        let mut v = Vec::new();
        for (a, u, d) in by_exp {
            for t in 0..d {
                v.push(JordanBlock::Line { exponent: a, unit_class: if t + 1 == d { u } else { 1 } });
            }
        }
        v
    };
    out.sort();
    Ok(JordanKey { size: n, prime: l, blocks: out })
}

fn off_diagonal_min(gram: &Gram, active: &[usize], l: u64, min: u32) -> (usize, usize) {
    for &i in active {
        for &j in active {
            if i < j && val(gram.g[i][j], l) == min {
                return (i, j);
            }
        }
    }
    unreachable!("minimal valuation attained off the diagonal")
}

/// A small matrix in the class described by `key`.
pub fn representative(key: &JordanKey) -> Result<HalfIntegralMatrix> {
    let l = key.prime;
    let mut g = [[0i64; 3]; 3];
    let mut pos = 0usize;
    let pw = |a: u32| -> Result<i64> {
        (l as i64).checked_pow(a).ok_or_else(|| Error::Resource("representative entries overflow".into()))
    };
    for block in &key.blocks {
        match *block {
            JordanBlock::Line { exponent, unit_class } => {
                let entry = if l == 2 {
                    if exponent == 0 {
                        return Err(Error::Internal("odd diagonal in an even lattice".into()));
                    }
                    pw(exponent)? * unit_class
                } else {
                    // 2B has entry l^a * 2w; choose w with (2w / l) = unit_class
                    let w = if legendre(2, l) == unit_class { 1 } else { non_residue(l) };
                    2 * pw(exponent)? * w
                };
                g[pos][pos] = entry;
                pos += 1;
            }
            JordanBlock::Hyperbolic { exponent } => {
                let s = pw(exponent)?;
                g[pos][pos + 1] = s;
                g[pos + 1][pos] = s;
                pos += 2;
            }
            JordanBlock::Anisotropic { exponent } => {
                let s = pw(exponent)?;
                g[pos][pos] = 2 * s;
                g[pos + 1][pos + 1] = 2 * s;
                g[pos][pos + 1] = s;
                g[pos + 1][pos] = s;
                pos += 2;
            }
        }
    }
    HalfIntegralMatrix::from_double_gram(&g, key.size)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_of_simple_forms() {
        let b = HalfIntegralMatrix::size3(1, 1, 1, 1, 1, 1);
        let k = jordan_key(&b, 2).unwrap();
        assert_eq!(k.blocks.len(), 2);
        let r = representative(&k).unwrap();
        assert_eq!(jordan_key(&r, 2).unwrap(), k);
        let b = HalfIntegralMatrix::size3(3, 1, 9, 0, 0, 1);
        let k = jordan_key(&b, 3).unwrap();
        let r = representative(&k).unwrap();
        assert_eq!(jordan_key(&r, 3).unwrap(), k);
        assert_eq!(r.det2b().abs() % 9, 0);
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(non_residue(7), 3);
    }
}
