//! Half-integral symmetric matrices of size 1 to 3.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Symmetric matrix `B` with integer diagonal `b_ii` and doubled
/// off-diagonal entries `c_ij = 2 b_ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfIntegralMatrix {
    size: usize,
    diag: [i64; 3],
    /// Doubled off-diagonals in the order `c_12, c_13, c_23`.
    off: [i64; 3],
}

/// Position of `c_ij` inside the off-diagonal storage.
fn off_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => panic!("not an off-diagonal position"),
    }
}

impl HalfIntegralMatrix {
    /// The 1x1 matrix `(b11)`.
    pub fn size1(b11: i64) -> Self {
        HalfIntegralMatrix { size: 1, diag: [b11, 0, 0], off: [0; 3] }
    }

    /// The 2x2 matrix with diagonal `b11, b22` and doubled off-diagonal `c12`.
    pub fn size2(b11: i64, b22: i64, c12: i64) -> Self {
        HalfIntegralMatrix { size: 2, diag: [b11, b22, 0], off: [c12, 0, 0] }
    }

    /// The 3x3 matrix from `(b11, b22, b33, c23, c13, c12)`.
    pub fn size3(b11: i64, b22: i64, b33: i64, c23: i64, c13: i64, c12: i64) -> Self {
        HalfIntegralMatrix { size: 3, diag: [b11, b22, b33], off: [c12, c13, c23] }
    }

    /// Build from a Gram matrix of `2B` (even diagonal required).
    pub fn from_double_gram(g: &[[i64; 3]; 3], size: usize) -> Result<Self> {
        let mut m = HalfIntegralMatrix { size, diag: [0; 3], off: [0; 3] };
        for i in 0..size {
            if g[i][i] % 2 != 0 {
                return domain("2B must have even diagonal");
            }
            m.diag[i] = g[i][i] / 2;
            for j in (i + 1)..size {
                if g[i][j] != g[j][i] {
                    return domain("matrix is not symmetric");
                }
                m.off[off_index(i, j)] = g[i][j];
            }
        }
        Ok(m)
    }

    /// Matrix size `n`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Diagonal entry `b_ii` (0-based).
    pub fn b(&self, i: usize) -> i64 {
        self.diag[i]
    }

    /// Doubled off-diagonal entry `c_ij` (0-based, `i != j`).
    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.off[off_index(i, j)]
    }

    /// The six entries `(b11, b22, b33, c23, c13, c12)` of a 3x3 matrix.
    pub fn entries3(&self) -> [i64; 6] {
        [self.diag[0], self.diag[1], self.diag[2], self.off[2], self.off[1], self.off[0]]
    }

    /// Gram matrix of `2B` (entries beyond the size are zero).
    pub fn double_gram(&self) -> [[i64; 3]; 3] {
        let mut g = [[0i64; 3]; 3];
        for i in 0..self.size {
            g[i][i] = 2 * self.diag[i];
            for j in 0..self.size {
                if i != j {
                    g[i][j] = self.c(i, j);
                }
            }
        }
        g
    }

    /// `det(2B)` exactly.
    pub fn det2b(&self) -> i128 {
        let g = self.double_gram().map(|r| r.map(|x| x as i128));
        match self.size {
            1 => g[0][0],
            2 => g[0][0] * g[1][1] - g[0][1] * g[1][0],
            _ => {
                g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
                    + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
            }
        }
    }

    /// Positive definiteness via leading principal minors of `2B`.
    pub fn is_positive_definite(&self) -> bool {
        let g = self.double_gram().map(|r| r.map(|x| x as i128));
        let m1 = g[0][0];
        if m1 <= 0 {
            return false;
        }
        if self.size == 1 {
            return true;
        }
        let m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if m2 <= 0 {
            return false;
        }
        self.size == 2 || self.det2b() > 0
    }

    /// `p | b_ii` for all `i` and `p` prime to every `c_ij` (size 3 only).
    pub fn in_xi(&self, p: u64) -> bool {
        let p = p as i64;
        self.size == 3 && self.diag.iter().all(|b| b % p == 0) && self.off.iter().all(|c| c % p != 0)
    }

    /// `U^T B U` for an integer matrix `U`.
    pub fn transform(&self, u: &[[i64; 3]; 3]) -> Self {
        let g = self.double_gram();
        let n = self.size;
        let mut h = [[0i64; 3]; 3];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0;
                for a in 0..n {
                    for b in 0..n {
                        s += u[a][i] * g[a][b] * u[b][j];
                    }
                }
                h[i][j] = s;
            }
        }
        Self::from_double_gram(&h, n).expect("congruence preserves evenness")
    }
}

impl fmt::Display for HalfIntegralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.size {
            1 => write!(f, "[{}]", self.diag[0]),
            2 => write!(f, "[{}, {}; c12={}]", self.diag[0], self.diag[1], self.off[0]),
            _ => write!(
                f,
                "[{}, {}, {}; c23={}, c13={}, c12={}]",
                self.diag[0], self.diag[1], self.diag[2], self.off[2], self.off[1], self.off[0]
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_definiteness() {
        let b = HalfIntegralMatrix::size3(1, 1, 1, 1, 1, 1);
        assert_eq!(b.det2b(), 4);
        assert!(b.is_positive_definite());
        let b = HalfIntegralMatrix::size3(5, 5, 5, 1, 1, 1);
        assert_eq!(b.det2b(), 8 * 125 + 2 - 2 * 15);
        assert!(b.in_xi(5));
        assert!(!HalfIntegralMatrix::size3(5, 5, 5, 5, 1, 1).in_xi(5));
        assert!(!HalfIntegralMatrix::size2(1, 1, 3).is_positive_definite());
    }

    #[test]
    fn congruence_preserves_determinant() {
        let b = HalfIntegralMatrix::size3(2, 3, 5, 1, -1, 2);
        let u = [[1, 2, 0], [0, 1, -1], [0, 0, 1]];
        assert_eq!(b.transform(&u).det2b(), b.det2b());
    }
}
