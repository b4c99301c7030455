//! Local triple-product L, gamma and epsilon factors at a finite prime.
//!
//! Representations are unramified principal series `I(mu, nu)` or twists
//! `St (x) xi` of the Steinberg representation by an unramified character,
//! in the unitary normalisation. Triple-product factors are read off the
//! Weil-Deligne tensor product: a Steinberg twist contributes the special
//! block `sp(2) (x) xi`, and `sp(m) (x) sp(n)` decomposes by the
//! Clebsch-Gordan rule. With `psi` of conductor `Z_q` and unramified data
//! the epsilon factor of `sp(n) (x) xi` is `det(-Frob t)` on the quotient by
//! the kernel of the monodromy operator.

use serde::{Deserialize, Serialize};

use super::factor::RationalFunctionT;
use crate::arith::padic::is_prime;
use crate::arith::{Field, QuadraticNumber};
use crate::error::{domain, Result};

/// Kind of an irreducible admissible representation of `GL_2(Q_q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepKind {
    /// `I(mu, nu)` with `mu, nu` unramified.
    UnramifiedPrincipalSeries,
    /// `St (x) xi` with `xi` unramified.
    SteinbergUnramifiedTwist,
}

/// A local representation recorded by the values `mu(q), nu(q)` of the
/// characters it is a subrepresentation of. For `St (x) xi` these are
/// `xi(q) q^(-1/2)` and `xi(q) q^(1/2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalRepGL2 {
    prime: u64,
    kind: RepKind,
    mu: QuadraticNumber,
    nu: QuadraticNumber,
}

/// A Weil-Deligne block `sp(dimension) (x) xi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialBlock {
    /// Value `xi(q)` of the unramified twist.
    pub twist: QuadraticNumber,
    /// Dimension of the special representation.
    pub dimension: u32,
}

fn qn(x: i64) -> QuadraticNumber {
    QuadraticNumber::int(x)
}

fn check_prime(q: u64) -> Result<()> {
    if !is_prime(q) {
        return domain(format!("{q} is not prime"));
    }
    Ok(())
}

impl LocalRepGL2 {
    /// Unramified principal series with Satake parameters `alpha, beta`.
    pub fn principal_series(prime: u64, alpha: QuadraticNumber, beta: QuadraticNumber) -> Result<Self> {
        check_prime(prime)?;
        if alpha.is_zero() || beta.is_zero() {
            return domain("Satake parameters must be nonzero");
        }
        Ok(LocalRepGL2 { prime, kind: RepKind::UnramifiedPrincipalSeries, mu: alpha, nu: beta })
    }

    /// `St (x) xi` for the unramified character with `xi(q) = twist`.
    pub fn steinberg(prime: u64, twist: QuadraticNumber) -> Result<Self> {
        check_prime(prime)?;
        if twist.is_zero() {
            return domain("twist value must be nonzero");
        }
        let mu = twist.mul(&QuadraticNumber::sqrt_power(prime, -1));
        let nu = twist.mul(&QuadraticNumber::sqrt_power(prime, 1));
        Ok(LocalRepGL2 { prime, kind: RepKind::SteinbergUnramifiedTwist, mu, nu })
    }

    /// Residue characteristic.
    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Kind of representation.
    pub fn kind(&self) -> RepKind {
        self.kind
    }

    /// `mu(q)`.
    pub fn mu(&self) -> &QuadraticNumber {
        &self.mu
    }

    /// `nu(q)`.
    pub fn nu(&self) -> &QuadraticNumber {
        &self.nu
    }

    /// Central character value `omega(q) = mu(q) nu(q)`.
    pub fn central_value(&self) -> QuadraticNumber {
        self.mu.mul(&self.nu)
    }

    /// Twist value `xi(q)` of a Steinberg representation.
    pub fn steinberg_twist(&self) -> Option<QuadraticNumber> {
        (self.kind == RepKind::SteinbergUnramifiedTwist)
            .then(|| self.mu.mul(&QuadraticNumber::sqrt_power(self.prime, 1)))
    }

    /// Weil-Deligne blocks.
    pub fn weil_deligne(&self) -> Vec<SpecialBlock> {
        match self.steinberg_twist() {
            Some(xi) => vec![SpecialBlock { twist: xi, dimension: 2 }],
            None => vec![
                SpecialBlock { twist: self.mu.clone(), dimension: 1 },
                SpecialBlock { twist: self.nu.clone(), dimension: 1 },
            ],
        }
    }
}

/// Clebsch-Gordan decomposition of a tensor product of block lists.
pub fn tensor_blocks(a: &[SpecialBlock], b: &[SpecialBlock]) -> Vec<SpecialBlock> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let twist = x.twist.mul(&y.twist);
            for k in 0..x.dimension.min(y.dimension) {
                out.push(SpecialBlock { twist: twist.clone(), dimension: x.dimension + y.dimension - 1 - 2 * k });
            }
        }
    }
    out
}

fn common_prime(reps: &[LocalRepGL2; 3]) -> Result<u64> {
    let q = reps[0].prime;
    if reps.iter().any(|r| r.prime != q) {
        return domain("representations live over different primes");
    }
    Ok(q)
}

/// Blocks of `pi1 (x) pi2 (x) pi3 (x) chi`.
pub fn triple_blocks(reps: &[LocalRepGL2; 3], chi: &QuadraticNumber) -> Result<Vec<SpecialBlock>> {
    common_prime(reps)?;
    if chi.is_zero() {
        return domain("character value must be nonzero");
    }
    let base = [SpecialBlock { twist: chi.clone(), dimension: 1 }];
    let mut blocks = tensor_blocks(&base, &reps[0].weil_deligne());
    blocks = tensor_blocks(&blocks, &reps[1].weil_deligne());
    Ok(tensor_blocks(&blocks, &reps[2].weil_deligne()))
}

/// `L(s, sp(n) (x) xi) = (1 - xi q^(-(n-1)/2) t)^(-1)`.
pub fn block_l_factor(q: u64, block: &SpecialBlock) -> RationalFunctionT {
    let c = block.twist.mul(&QuadraticNumber::sqrt_power(q, -(block.dimension as i64 - 1)));
    RationalFunctionT::linear(c).inverse().expect("linear factor is nonzero")
}

/// `epsilon(s, sp(n) (x) xi, psi)` for unramified `xi` and `psi` of order 0.
pub fn block_epsilon(q: u64, block: &SpecialBlock) -> RationalFunctionT {
    let n = block.dimension as i64;
    let mut out = RationalFunctionT::one();
    for j in 1..n {
        let eigen = block.twist.mul(&QuadraticNumber::sqrt_power(q, 2 * j - (n - 1)));
        out = out.mul(&RationalFunctionT::monomial(eigen.neg(), 1));
    }
    out
}

/// The degree-eight triple-product L-factor `L(s, pi1 x pi2 x pi3 (x) chi)`
/// for unramified `chi` with `chi(q) = chi`.
pub fn triple_l(reps: &[LocalRepGL2; 3], chi: &QuadraticNumber) -> Result<RationalFunctionT> {
    let q = common_prime(reps)?;
    Ok(triple_blocks(reps, chi)?.iter().fold(RationalFunctionT::one(), |acc, b| acc.mul(&block_l_factor(q, b))))
}

/// The triple-product epsilon factor for `psi` of order 0 (a monomial).
pub fn triple_epsilon(reps: &[LocalRepGL2; 3], chi: &QuadraticNumber) -> Result<RationalFunctionT> {
    let q = common_prime(reps)?;
    Ok(triple_blocks(reps, chi)?.iter().fold(RationalFunctionT::one(), |acc, b| acc.mul(&block_epsilon(q, b))))
}

/// `L(s, chi)` for an unramified character.
pub fn l_gl1(chi: &QuadraticNumber) -> Result<RationalFunctionT> {
    if chi.is_zero() {
        return domain("character value must be nonzero");
    }
    RationalFunctionT::linear(chi.clone()).inverse()
}

/// `gamma(s, chi, psi) = L(1 - s, chi^(-1)) / L(s, chi)` for unramified
/// `chi` and `psi` of order 0, where the epsilon factor is one.
pub fn gamma_gl1(q: u64, chi: &QuadraticNumber) -> Result<RationalFunctionT> {
    check_prime(q)?;
    if chi.is_zero() {
        return domain("character value must be nonzero");
    }
    let dual = qn(1).div(chi).div(&qn(q as i64));
    RationalFunctionT::linear(chi.clone()).div(&RationalFunctionT::linear_in_inverse(dual))
}

/// `gamma(s, pi (x) chi, psi) = gamma(s, mu chi) gamma(s, nu chi)`.
pub fn gamma_gl2(rep: &LocalRepGL2, chi: &QuadraticNumber) -> Result<RationalFunctionT> {
    Ok(gamma_gl1(rep.prime, &rep.mu.mul(chi))?.mul(&gamma_gl1(rep.prime, &rep.nu.mul(chi))?))
}

/// Modified Euler factor `E_q(s, pi1 x pi2 x pi3 (x) chi)`, the inverse of
/// `L(s, ...) gamma(s, pi1 (x) chi mu2 mu3) gamma(s, chi mu1 mu2 nu3)
/// gamma(s, chi mu1 mu3 nu2)`.
pub fn modified_euler_factor(reps: &[LocalRepGL2; 3], chi: &QuadraticNumber) -> Result<RationalFunctionT> {
    let q = common_prime(reps)?;
    let [r1, r2, r3] = reps;
    let l = triple_l(reps, chi)?;
    let g1 = gamma_gl2(r1, &chi.mul(&r2.mu).mul(&r3.mu))?;
    let g2 = gamma_gl1(q, &chi.mul(&r1.mu).mul(&r2.mu).mul(&r3.nu))?;
    let g3 = gamma_gl1(q, &chi.mul(&r1.mu).mul(&r3.mu).mul(&r2.nu))?;
    l.mul(&g1).mul(&g2).mul(&g3).inverse()
}

/// Both sides of the functional equation of the modified Euler factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEquation {
    /// `E_q(1 - s, ... (x) chi_breve)` with `chi_breve = chi^(-1) omega^(-1)`.
    pub reflected: RationalFunctionT,
    /// `omega(-1) E_q(s, ... (x) chi) epsilon(s, ... (x) chi, psi)`.
    pub twisted: RationalFunctionT,
}

impl FunctionalEquation {
    /// Whether the two sides agree as reduced rational functions.
    pub fn holds(&self) -> bool {
        self.reflected == self.twisted
    }
}

/// Evaluates both sides of `E(1 - s, chi_breve) = omega(-1) E(s, chi)
/// epsilon(s, chi)`. Unramified central characters have `omega(-1) = 1`.
pub fn functional_equation_check(reps: &[LocalRepGL2; 3], chi: &QuadraticNumber) -> Result<FunctionalEquation> {
    let q = common_prime(reps)?;
    let omega = reps.iter().fold(qn(1), |acc, r| acc.mul(&r.central_value()));
    let chi_breve = qn(1).div(&chi.mul(&omega));
    let reflect = qn(1).div(&qn(q as i64));
    let reflected = modified_euler_factor(reps, &chi_breve)?.reflect(&reflect);
    let twisted = modified_euler_factor(reps, chi)?.mul(&triple_epsilon(reps, chi)?);
    Ok(FunctionalEquation { reflected, twisted })
}

/// Central point `t = q^(-1/2)` of the unitary normalisation.
pub fn central_point(q: u64) -> QuadraticNumber {
    QuadraticNumber::sqrt_power(q, -1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> QuadraticNumber {
        QuadraticNumber::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn sq(q: u64, e: i64) -> QuadraticNumber {
        QuadraticNumber::sqrt_power(q, e)
    }

    fn inv_linear(c: QuadraticNumber) -> RationalFunctionT {
        RationalFunctionT::linear(c).inverse().unwrap()
    }

    #[test]
    fn unramified_triple_has_eight_factors() {
        let q = 7;
        let ps = |a: i64, b: i64| LocalRepGL2::principal_series(q, r(a, 1), r(1, b)).unwrap();
        let reps = [ps(2, 3), ps(5, 11), ps(13, 17)];
        let l = triple_l(&reps, &r(1, 1)).unwrap();
        assert_eq!(l.numerator().degree(), Some(0));
        assert_eq!(l.denominator().degree(), Some(8));
        assert_eq!(triple_epsilon(&reps, &r(3, 2)).unwrap(), RationalFunctionT::one());
    }

    #[test]
    fn steinberg_rows() {
        let q = 5;
        let st = LocalRepGL2::steinberg(q, r(1, 1)).unwrap();
        let reps = [st.clone(), st.clone(), st];
        let zeta = inv_linear(sq(q, -3)).mul(&inv_linear(sq(q, -1)).powi(2).unwrap());
        assert_eq!(triple_l(&reps, &r(1, 1)).unwrap(), zeta);
        let eps = RationalFunctionT::monomial(sq(q, 5).neg(), 5);
        assert_eq!(triple_epsilon(&reps, &r(1, 1)).unwrap(), eps);
    }

    #[test]
    fn gamma_involution() {
        let q = 3;
        let c = r(4, 7);
        let g = gamma_gl1(q, &c).unwrap();
        let dual = gamma_gl1(q, &r(7, 4)).unwrap().reflect(&r(1, 3));
        assert_eq!(g.mul(&dual), RationalFunctionT::one());
        // direct ratio at a sample point
        let t = r(2, 9);
        let expected = qn(1).sub(&c.mul(&t)).div(&qn(1).sub(&qn(1).div(&c.mul(&qn(3)).mul(&t))));
        assert_eq!(g.evaluate(&t).unwrap(), expected);
    }

    #[test]
    fn split_multiplicative_triple_vanishes_to_order_three() {
        let q = 5;
        let st = LocalRepGL2::steinberg(q, r(1, 1)).unwrap();
        let e = modified_euler_factor(&[st.clone(), st.clone(), st], &r(1, 1)).unwrap();
        assert_eq!(e.order_at(&central_point(q)), 3);
    }

    #[test]
    fn generic_satake_values_do_not_vanish() {
        let q = 7;
        let reps = [
            LocalRepGL2::principal_series(q, r(2, 3), r(3, 2)).unwrap(),
            LocalRepGL2::principal_series(q, r(5, 4), r(4, 5)).unwrap(),
            LocalRepGL2::principal_series(q, r(9, 7), r(7, 9)).unwrap(),
        ];
        let e = modified_euler_factor(&reps, &r(1, 1)).unwrap();
        assert!(!e.evaluate(&central_point(q)).unwrap().is_zero());
    }

    #[test]
    fn functional_equation_on_each_shape() {
        let q = 5;
        let ps = LocalRepGL2::principal_series(q, r(2, 3), r(-5, 7)).unwrap();
        let ps2 = LocalRepGL2::principal_series(q, r(11, 2), r(1, 3)).unwrap();
        let st = LocalRepGL2::steinberg(q, r(-3, 4)).unwrap();
        let st2 = LocalRepGL2::steinberg(q, r(2, 1)).unwrap();
        for reps in [
            [ps.clone(), ps2.clone(), ps.clone()],
            [ps.clone(), ps2.clone(), st.clone()],
            [ps.clone(), st.clone(), st2.clone()],
            [st.clone(), st2.clone(), st.clone()],
        ] {
            let fe = functional_equation_check(&reps, &r(3, 5)).unwrap();
            assert!(fe.holds(), "{} vs {}", fe.reflected, fe.twisted);
        }
    }
}
