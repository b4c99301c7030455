//! Arithmetic points of the four-variable weight space.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A finite-order character of `1 + pZ_p`, recorded by its order and the
/// exponent `j` with `eps(1 + p) = zeta_order^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteCharacter {
    /// Order of the character (a power of `p`).
    pub order: u64,
    /// Exponent of the value at the topological generator.
    pub exponent: u64,
}

impl FiniteCharacter {
    /// The trivial character.
    pub const TRIVIAL: FiniteCharacter = FiniteCharacter { order: 1, exponent: 0 };

    /// Whether this is the trivial character.
    pub fn is_trivial(&self) -> bool {
        self.order == 1 || self.exponent.is_multiple_of(self.order)
    }
}

/// A point `(k1, k2, k3, kP)` together with finite-order parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticPoint {
    /// Weights of the three forms.
    pub weights: [i64; 3],
    /// Cyclotomic weight.
    pub cyclotomic_weight: i64,
    /// Finite parts for the variables `X1, X2, X3, T`.
    pub finite_parts: [FiniteCharacter; 4],
}

impl ArithmeticPoint {
    /// Point with trivial finite parts.
    pub fn new(weights: [i64; 3], cyclotomic_weight: i64) -> Self {
        ArithmeticPoint { weights, cyclotomic_weight, finite_parts: [FiniteCharacter::TRIVIAL; 4] }
    }

    /// Exponents substituted into `X1, X2, X3, T`.
    pub fn exponents(&self) -> [i64; 4] {
        [self.weights[0], self.weights[1], self.weights[2], self.cyclotomic_weight]
    }

    /// `k1 + k2 + k3 > 2 max k_i`.
    pub fn is_balanced(&self) -> bool {
        is_balanced(self.weights)
    }

    /// `max k_i <= kP <= k1 + k2 + k3 - max k_i - 2`.
    pub fn is_critical(&self) -> bool {
        let max = *self.weights.iter().max().unwrap();
        let sum: i64 = self.weights.iter().sum();
        max <= self.cyclotomic_weight && self.cyclotomic_weight <= sum - max - 2
    }

    /// Error unless all finite parts are trivial.
    pub fn require_trivial_finite_parts(&self) -> Result<()> {
        if self.finite_parts.iter().all(FiniteCharacter::is_trivial) {
            Ok(())
        } else {
            Err(Error::Unsupported("arithmetic points with nontrivial finite parts".into()))
        }
    }

    /// Error unless the point is balanced and critical with weights at least 2.
    pub fn require_balanced_critical(&self) -> Result<()> {
        if self.weights.iter().any(|&k| k < 2) {
            return domain("weights must be at least 2");
        }
        if !self.is_balanced() || !self.is_critical() {
            return domain(format!("point {:?} is not balanced and critical", self.exponents()));
        }
        Ok(())
    }
}

/// Balanced test for a weight triple.
pub fn is_balanced(k: [i64; 3]) -> bool {
    let max = *k.iter().max().unwrap();
    k.iter().sum::<i64>() > 2 * max
}

/// All balanced critical points with weights in `2..=max_weight`.
pub fn balanced_critical_points(max_weight: i64) -> Vec<ArithmeticPoint> {
    let mut out = Vec::new();
    for k1 in 2..=max_weight {
        for k2 in 2..=max_weight {
            for k3 in 2..=max_weight {
                let w = [k1, k2, k3];
                if !is_balanced(w) {
                    continue;
                }
                let max = k1.max(k2).max(k3);
                for kp in max..=(k1 + k2 + k3 - max - 2) {
                    out.push(ArithmeticPoint::new(w, kp));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_and_critical() {
        let p = ArithmeticPoint::new([2, 2, 2], 2);
        assert!(p.is_balanced() && p.is_critical());
        assert!(!ArithmeticPoint::new([2, 2, 4], 4).is_balanced());
        assert!(!ArithmeticPoint::new([3, 3, 2], 4).is_critical());
        assert_eq!(balanced_critical_points(6).len(), 120);
    }
}
