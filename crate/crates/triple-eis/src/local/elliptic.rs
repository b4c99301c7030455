//! Local data of triples of elliptic curves: trivial zeros of the modified
//! Euler factor at `p`, root numbers and L-invariants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::factor::RationalFunctionT;
use super::rep::{central_point, modified_euler_factor, triple_epsilon, LocalRepGL2};
use crate::arith::padic::{is_prime, prime_factors};
use crate::arith::{iwasawa_log, Field, PadicNumber, QuadraticNumber};
use crate::error::{domain, Result};

/// Reduction type at `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// Good ordinary reduction.
    GoodOrdinary,
    /// Split multiplicative reduction (`a_p = 1`).
    SplitMult,
    /// Non-split multiplicative reduction (`a_p = -1`).
    NonsplitMult,
}

impl Reduction {
    /// Whether the reduction is multiplicative.
    pub fn is_multiplicative(self) -> bool {
        self != Reduction::GoodOrdinary
    }
}

/// One elliptic curve of square-free conductor, described locally.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticCurveData {
    /// Square-free conductor `M`.
    pub conductor: u64,
    /// Reduction type at `p`.
    pub reduction_p: Reduction,
    /// Hecke eigenvalue `a_p`.
    pub ap: i64,
    /// `a_l = +-1` for every prime `l | M`.
    #[serde(default)]
    pub a_ell: BTreeMap<u64, i64>,
    /// Optional j-invariant at `p` (negative valuation for Tate curves).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_invariant: Option<PadicNumber>,
}

impl EllipticCurveData {
    /// Checks conductor, local signs and the reduction type at `p`.
    pub fn validate(&self, p: u64) -> Result<()> {
        if self.conductor == 0 {
            return domain("conductor must be positive");
        }
        let primes = prime_factors(self.conductor as u128);
        if primes.iter().product::<u64>() != self.conductor {
            return domain(format!("conductor {} is not square-free", self.conductor));
        }
        if self.a_ell.keys().copied().collect::<Vec<_>>() != primes {
            return domain(format!("a_ell must list exactly the primes dividing {}", self.conductor));
        }
        if self.a_ell.values().any(|&a| a != 1 && a != -1) {
            return domain("a_ell values must be +1 or -1");
        }
        let divides = self.conductor.is_multiple_of(p);
        match self.reduction_p {
            Reduction::GoodOrdinary => {
                if divides {
                    return domain("good reduction at p needs p prime to the conductor");
                }
                if self.ap.rem_euclid(p as i64) == 0 {
                    return domain("a_p divisible by p is not ordinary");
                }
            }
            r => {
                let expected = if r == Reduction::SplitMult { 1 } else { -1 };
                if !divides || self.ap != expected || self.a_ell.get(&p) != Some(&expected) {
                    return domain("multiplicative reduction needs p | M and a_p = a_ell(p) = +-1 by type");
                }
            }
        }
        Ok(())
    }

    /// The ordinary parameter at `p` to relative precision `prec`.
    pub fn ordinary_parameter(&self, p: u64, prec: u32) -> Result<OrdinaryParameter> {
        self.validate(p)?;
        let alpha = if self.reduction_p.is_multiplicative() {
            PadicNumber::from_int(p, self.ap, prec as i64)
        } else {
            unit_root(self.ap, p, prec)?
        };
        Ok(OrdinaryParameter { multiplicative: self.reduction_p.is_multiplicative(), alpha })
    }
}

/// The p-adic unit root of `X^2 - a_p X + p` by the contraction
/// `alpha -> a_p - p / alpha`.
pub fn unit_root(ap: i64, p: u64, prec: u32) -> Result<PadicNumber> {
    if !is_prime(p) || p == 2 {
        return domain("p must be an odd prime");
    }
    if ap.rem_euclid(p as i64) == 0 {
        return domain("no unit root: a_p is divisible by p");
    }
    let a = PadicNumber::from_int(p, ap, prec as i64);
    let pp = PadicNumber::from_int(p, p as i64, prec as i64 + 1);
    let mut alpha = a.clone();
    for _ in 0..=prec {
        alpha = &a - &pp.checked_div(&alpha)?;
    }
    Ok(alpha)
}

/// The ordinary parameter `alpha` at `p`: `+-1` for multiplicative
/// reduction, the unit root of the Hecke polynomial otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrdinaryParameter {
    /// Whether the reduction is multiplicative.
    pub multiplicative: bool,
    /// `alpha`.
    pub alpha: PadicNumber,
}

impl OrdinaryParameter {
    fn check(&self) -> Result<()> {
        if self.alpha.is_zero() || self.alpha.valuation() != 0 {
            return domain("ordinary parameter must be a p-adic unit");
        }
        if self.multiplicative {
            let n = self.alpha.absolute_precision();
            let p = self.alpha.prime();
            let one = PadicNumber::from_int(p, 1, n);
            if !self.alpha.agrees_with(&one, n) && !self.alpha.agrees_with(&(-&one), n) {
                return domain("multiplicative reduction needs alpha = +-1");
            }
        }
        Ok(())
    }
}

/// Which equations `beta1 beta2 beta3 = p^2`, `beta1 beta2 alpha3 = p^2`,
/// `beta1 alpha2 beta3 = p^2`, `alpha1 beta2 beta3 = p^2` hold, with
/// `beta_i = p / alpha_i`.
pub fn trivial_zero_equations(params: &[OrdinaryParameter; 3]) -> Result<[bool; 4]> {
    for x in params {
        x.check()?;
    }
    let p = params[0].alpha.prime();
    if params.iter().any(|x| x.alpha.prime() != p) {
        return domain("parameters for different primes");
    }
    let n = params.iter().map(|x| x.alpha.absolute_precision()).min().unwrap() + 2;
    let pp = PadicNumber::from_int(p, p as i64, n);
    let alphas: Vec<PadicNumber> = params.iter().map(|x| x.alpha.clone()).collect();
    let betas: Vec<PadicNumber> = alphas.iter().map(|a| pp.checked_div(a)).collect::<Result<_>>()?;
    let target = PadicNumber::from_int(p, (p * p) as i64, n);
    let pick = |mask: [bool; 3]| -> bool {
        let prod = (0..3)
            .map(|i| if mask[i] { &betas[i] } else { &alphas[i] })
            .fold(PadicNumber::from_int(p, 1, n), |acc, x| &acc * x);
        prod.agrees_with(&target, prod.absolute_precision().min(n))
    };
    Ok([
        pick([true, true, true]),
        pick([true, true, false]),
        pick([true, false, true]),
        pick([false, true, true]),
    ])
}

/// Trivial-zero classification at `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrivialZeroCase {
    /// None of the equations holds.
    None,
    /// All three curves multiplicative with `alpha1 alpha2 alpha3 = 1`.
    CaseI,
    /// One multiplicative curve (index given) and two good ordinary curves
    /// with `alpha_j = alpha_i alpha_k`.
    CaseII {
        /// Index of the multiplicative curve.
        multiplicative: usize,
    },
    /// Some equation holds outside the two main cases.
    Other,
}

impl TrivialZeroCase {
    /// Order of vanishing of the modified Euler factor at the central
    /// point in the two main cases.
    pub fn expected_order(self) -> Option<i64> {
        match self {
            TrivialZeroCase::None => Some(0),
            TrivialZeroCase::CaseI => Some(3),
            TrivialZeroCase::CaseII { .. } => Some(2),
            TrivialZeroCase::Other => None,
        }
    }
}

/// Classifies a triple of ordinary parameters.
pub fn trivial_zero_classify(params: &[OrdinaryParameter; 3]) -> Result<TrivialZeroCase> {
    let eqs = trivial_zero_equations(params)?;
    if !eqs.iter().any(|&e| e) {
        return Ok(TrivialZeroCase::None);
    }
    let mult: Vec<usize> = (0..3).filter(|&i| params[i].multiplicative).collect();
    let p = params[0].alpha.prime();
    let n = params.iter().map(|x| x.alpha.absolute_precision()).min().unwrap();
    let one = PadicNumber::from_int(p, 1, n);
    let a = |i: usize| &params[i].alpha;
    if mult.len() == 3 && (&(a(0) * a(1)) * a(2)).agrees_with(&one, n) {
        return Ok(TrivialZeroCase::CaseI);
    }
    if let [i] = mult[..] {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        if a(j).agrees_with(&(a(i) * a(k)), n) {
            return Ok(TrivialZeroCase::CaseII { multiplicative: i });
        }
    }
    Ok(TrivialZeroCase::Other)
}

/// Classifies a triple of curves at `p`.
pub fn classify_curves(curves: &[EllipticCurveData; 3], p: u64, prec: u32) -> Result<TrivialZeroCase> {
    let params = [
        curves[0].ordinary_parameter(p, prec)?,
        curves[1].ordinary_parameter(p, prec)?,
        curves[2].ordinary_parameter(p, prec)?,
    ];
    trivial_zero_classify(&params)
}

/// Local representation at `p` of a weight-two form with rational ordinary
/// parameter `alpha` (a unit of `Z_(p)`): `St (x) alpha` when multiplicative,
/// `I(alpha p^(-1/2), p^(1/2) / alpha)` otherwise.
pub fn weight_two_rep(p: u64, multiplicative: bool, alpha: &BigRational) -> Result<LocalRepGL2> {
    let a = QuadraticNumber::rational(alpha.clone());
    if multiplicative {
        LocalRepGL2::steinberg(p, a)
    } else {
        let mu = a.mul(&QuadraticNumber::sqrt_power(p, -1));
        let nu = QuadraticNumber::sqrt_power(p, 1).div(&a);
        LocalRepGL2::principal_series(p, mu, nu)
    }
}

/// Modified Euler factor at `p` of a weight-two triple with trivial twist,
/// together with its order of vanishing at the central point.
pub fn weight_two_euler_factor(p: u64, data: &[(bool, BigRational); 3]) -> Result<(RationalFunctionT, i64)> {
    let reps = [
        weight_two_rep(p, data[0].0, &data[0].1)?,
        weight_two_rep(p, data[1].0, &data[1].1)?,
        weight_two_rep(p, data[2].0, &data[2].1)?,
    ];
    let e = modified_euler_factor(&reps, &QuadraticNumber::int(1))?;
    let order = e.order_at(&central_point(p));
    Ok((e, order))
}

/// Global and p-adic root numbers of the triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonSigns {
    /// Sign of the functional equation of the complex L-function.
    pub global: i64,
    /// Sign of the functional equation of the p-adic L-function.
    pub p_adic: i64,
    /// Primes `l | gcd(M_i)` with `a_l(E1) a_l(E2) a_l(E3) = 1`.
    pub sigma_minus: Vec<u64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn validate_triple(curves: &[EllipticCurveData; 3], p: u64) -> Result<()> {
    if !is_prime(p) || p == 2 {
        return domain("p must be an odd prime");
    }
    curves.iter().try_for_each(|c| c.validate(p))
}

/// Root numbers from the set of primes where all three curves are
/// multiplicative with `prod a_l = 1`.
pub fn epsilon_signs(curves: &[EllipticCurveData; 3], p: u64) -> Result<EpsilonSigns> {
    validate_triple(curves, p)?;
    let m_minus = curves.iter().fold(0, |g, c| gcd(g, c.conductor));
    let sigma_minus: Vec<u64> = prime_factors(m_minus as u128)
        .into_iter()
        .filter(|l| curves.iter().map(|c| c.a_ell[l]).product::<i64>() == 1)
        .collect();
    let global = if sigma_minus.len().is_multiple_of(2) { -1 } else { 1 };
    let p_adic = if sigma_minus.contains(&p) { -global } else { global };
    Ok(EpsilonSigns { global, p_adic, sigma_minus })
}

/// Local root number `epsilon(1/2, pi1 x pi2 x pi3, psi)` at `l` for the
/// unitary weight-two representations of the three curves. Curves with good
/// reduction at `l` get the unramified Satake pair `(u, 1/u)`; the result
/// does not depend on `u`.
pub fn local_root_number(curves: &[EllipticCurveData; 3], l: u64, u: &BigRational) -> Result<i64> {
    let mut reps = Vec::with_capacity(3);
    for c in curves {
        reps.push(match c.a_ell.get(&l) {
            Some(&a) => LocalRepGL2::steinberg(l, QuadraticNumber::int(a))?,
            None => {
                let x = QuadraticNumber::rational(u.clone());
                LocalRepGL2::principal_series(l, x.clone(), QuadraticNumber::int(1).div(&x))?
            }
        });
    }
    let reps: [LocalRepGL2; 3] = reps.try_into().expect("three representations");
    let value = triple_epsilon(&reps, &QuadraticNumber::int(1))?.evaluate(&central_point(l))?;
    match value.as_rational() {
        Some(v) if v == BigRational::from_integer(BigInt::from(1)) => Ok(1),
        Some(v) if v == BigRational::from_integer(BigInt::from(-1)) => Ok(-1),
        _ => domain(format!("local root number at {l} is {value}, not a sign")),
    }
}

/// Root numbers assembled from local epsilon factors: the archimedean sign
/// is `-1`, the global sign multiplies every `l | lcm(M_i)`, the p-adic sign
/// omits `l = p`.
pub fn root_numbers_from_local_factors(curves: &[EllipticCurveData; 3], p: u64) -> Result<(i64, i64)> {
    validate_triple(curves, p)?;
    let lcm = curves.iter().fold(1u64, |acc, c| acc / gcd(acc, c.conductor) * c.conductor);
    let u = BigRational::new(BigInt::from(2), BigInt::from(3));
    let (mut global, mut away) = (-1, -1);
    for l in prime_factors(lcm as u128) {
        let e = local_root_number(curves, l, &u)?;
        global *= e;
        if l != p {
            away *= e;
        }
    }
    Ok((global, away))
}

/// `l = -(1/2) log_p(q) / ord_p(q)` with the Iwasawa branch `log_p(p) = 0`.
pub fn l_invariant_from_period(q_e: &PadicNumber) -> Result<PadicNumber> {
    let ord = q_e.valuation();
    if q_e.is_zero() || ord <= 0 {
        return domain("Tate period must have positive valuation");
    }
    let p = q_e.prime();
    let log = iwasawa_log(q_e)?;
    let scale = BigRational::new(BigInt::from(-1), BigInt::from(2 * ord));
    Ok(&log * &PadicNumber::from_rational(p, &scale, log.absolute_precision().max(1) + 4))
}

/// L-invariants of the three curves and the combined invariant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LInvariants {
    /// `l_i` where a Tate period was available.
    pub individual: [Option<PadicNumber>; 3],
    /// `-8 l1 l2 l3` in case I, `4 l_i^2` in case II.
    pub combined: PadicNumber,
    /// `(-p alpha^(-2)) (1 - alpha^(-2))^2` for a good curve in case II.
    pub extra_factor: Option<PadicNumber>,
    /// Whether the extra factor vanishes.
    pub degenerate: bool,
}

/// Assembles L-invariants from Tate periods of the split multiplicative
/// curves.
pub fn l_invariants(
    case: TrivialZeroCase,
    params: &[OrdinaryParameter; 3],
    periods: &[Option<PadicNumber>; 3],
) -> Result<LInvariants> {
    let ell = |i: usize| -> Result<PadicNumber> {
        if !params[i].multiplicative {
            return domain(format!("curve {} is not multiplicative at p", i + 1));
        }
        let p = params[i].alpha.prime();
        let n = params[i].alpha.absolute_precision();
        if !params[i].alpha.agrees_with(&PadicNumber::from_int(p, 1, n), n) {
            return domain(format!("curve {} is not split multiplicative", i + 1));
        }
        let q = periods[i].as_ref().ok_or_else(|| crate::Error::Domain(format!("missing Tate period for curve {}", i + 1)))?;
        l_invariant_from_period(q)
    };
    match case {
        TrivialZeroCase::CaseI => {
            let ls = [ell(0)?, ell(1)?, ell(2)?];
            let p = ls[0].prime();
            let eight = PadicNumber::from_int(p, -8, ls[0].absolute_precision() + 4);
            let combined = &(&(&eight * &ls[0]) * &ls[1]) * &ls[2];
            Ok(LInvariants { individual: ls.map(Some), combined, extra_factor: None, degenerate: false })
        }
        TrivialZeroCase::CaseII { multiplicative: i } => {
            let li = ell(i)?;
            let p = li.prime();
            let four = PadicNumber::from_int(p, 4, li.absolute_precision() + 4);
            let combined = &(&four * &li) * &li;
            let alpha = &params[(i + 1) % 3].alpha;
            let n = alpha.absolute_precision();
            let inv2 = alpha.pow(2).inverse()?;
            let one = PadicNumber::from_int(p, 1, n);
            let gap = &one - &inv2;
            let extra = &(&PadicNumber::from_int(p, -(p as i64), n + 1) * &inv2) * &gap.pow(2);
            let degenerate = gap.is_zero() || gap.valuation() >= n;
            let mut individual = [None, None, None];
            individual[i] = Some(li);
            Ok(LInvariants { individual, combined, extra_factor: Some(extra), degenerate })
        }
        _ => domain("L-invariants are defined for cases I and II"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn param(p: u64, mult: bool, a: BigRational) -> OrdinaryParameter {
        OrdinaryParameter { multiplicative: mult, alpha: PadicNumber::from_rational(p, &a, 20) }
    }

    #[test]
    fn unit_root_satisfies_hecke_polynomial() {
        let a = unit_root(2, 5, 20).unwrap();
        let lhs = &(&a * &a) - &(&PadicNumber::from_int(5, 2, 20) * &a);
        assert!(lhs.agrees_with(&PadicNumber::from_int(5, -5, 20), 20));
        assert_eq!(a.valuation(), 0);
    }

    #[test]
    fn classification_examples() {
        let p = 5;
        let one = rat(1, 1);
        let split = [param(p, true, one.clone()), param(p, true, one.clone()), param(p, true, one.clone())];
        assert_eq!(trivial_zero_classify(&split).unwrap(), TrivialZeroCase::CaseI);
        let a3 = rat(7, 3);
        let case2 = [param(p, true, one.clone()), param(p, false, a3.clone()), param(p, false, a3)];
        assert_eq!(trivial_zero_classify(&case2).unwrap(), TrivialZeroCase::CaseII { multiplicative: 0 });
        let generic = [param(p, false, rat(2, 3)), param(p, false, rat(7, 4)), param(p, false, rat(9, 13))];
        assert_eq!(trivial_zero_classify(&generic).unwrap(), TrivialZeroCase::None);
        let bad = [param(p, true, rat(2, 1)), param(p, true, one.clone()), param(p, true, one)];
        assert!(trivial_zero_classify(&bad).is_err());
    }

    #[test]
    fn euler_factor_orders_in_the_main_cases() {
        let p = 7;
        let one = rat(1, 1);
        let (_, o) = weight_two_euler_factor(p, &[(true, one.clone()), (true, one.clone()), (true, one.clone())]).unwrap();
        assert_eq!(o, 3);
        let a3 = rat(-8, 3);
        let (_, o) = weight_two_euler_factor(p, &[(true, rat(-1, 1)), (false, rat(8, 3)), (false, a3)]).unwrap();
        assert_eq!(o, 2);
    }

    fn curve(conductor: u64, red: Reduction, ap: i64, signs: &[(u64, i64)]) -> EllipticCurveData {
        EllipticCurveData { conductor, reduction_p: red, ap, a_ell: signs.iter().copied().collect(), j_invariant: None }
    }

    #[test]
    fn root_numbers_agree() {
        let p = 5;
        let c1 = curve(15, Reduction::SplitMult, 1, &[(3, 1), (5, 1)]);
        let c2 = curve(35, Reduction::SplitMult, 1, &[(5, 1), (7, -1)]);
        let c3 = curve(5, Reduction::SplitMult, 1, &[(5, 1)]);
        let curves = [c1, c2, c3];
        let signs = epsilon_signs(&curves, p).unwrap();
        assert_eq!(signs.sigma_minus, vec![5]);
        assert_eq!(signs.global, 1);
        assert_eq!(signs.p_adic, -1);
        assert_eq!(root_numbers_from_local_factors(&curves, p).unwrap(), (signs.global, signs.p_adic));
    }

    #[test]
    fn empty_sigma_gives_minus_one() {
        let c = curve(11, Reduction::GoodOrdinary, 1, &[(11, 1)]);
        let d = curve(13, Reduction::GoodOrdinary, 2, &[(13, -1)]);
        let signs = epsilon_signs(&[c.clone(), d.clone(), c], 5).unwrap();
        assert!(signs.sigma_minus.is_empty());
        assert_eq!(signs.global, -1);
    }

    #[test]
    fn l_invariant_of_a_simple_period() {
        let p = 5u64;
        let prec = 20;
        let q = PadicNumber::new(p, 3, BigInt::from(1 + p), prec);
        let l = l_invariant_from_period(&q).unwrap();
        // oracle: -(1/6) sum_{k} (-1)^(k+1) p^k / k in exact rationals
        let mut s = BigRational::from_integer(BigInt::from(0));
        for k in 1..=40i64 {
            let term = BigRational::new(num_traits::pow(BigInt::from(p), k as usize), BigInt::from(k));
            s = if k % 2 == 1 { s + term } else { s - term };
        }
        let expected = PadicNumber::from_rational(p, &(s * rat(-1, 6)), prec as i64);
        assert!(l.agrees_with(&expected, prec as i64 - 2));
    }

    #[test]
    fn degenerate_case_two_factor() {
        let p = 5;
        let one = rat(1, 1);
        let params = [param(p, true, one.clone()), param(p, false, rat(-1, 1)), param(p, false, rat(-1, 1))];
        let q = PadicNumber::new(p, 2, BigInt::from(3), 20);
        let inv = l_invariants(TrivialZeroCase::CaseII { multiplicative: 0 }, &params, &[Some(q), None, None]).unwrap();
        assert!(inv.degenerate);
        assert!(inv.extra_factor.unwrap().is_zero());
    }

    #[test]
    fn curves_json_schema() {
        let text = r#"[{"conductor": 15, "reduction_p": "split-mult", "ap": 1, "a_ell": {"3": -1, "5": 1}}]"#;
        let v: Vec<EllipticCurveData> = serde_json::from_str(text).unwrap();
        assert_eq!(v[0].a_ell[&3], -1);
        v[0].validate(5).unwrap();
    }
}
