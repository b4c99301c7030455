//! The four-variable family of Fourier coefficients over `T_3^+ ∩ Xi_p`.
//!
//! Each coefficient is a finite sum of group-like elements
//! `c * (1+X1)^s1 (1+X2)^s2 (1+X3)^s3 (1+T)^sT` with `c` a residue and the
//! exponents `s_i` in `Z_p`: the character factor is a single such term and
//! `F_{B,l}(<l>^(a) l^-2)` expands into one term per power of `<l>`. Dense
//! truncated series and specializations are produced from that form.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::iwasawa::{diamond_exponent, exponent_digits, substitution_values, BinomialTable};
use crate::arith::padic::{is_prime, prime_factors};
use crate::arith::{ArithmeticPoint, IwasawaSeries, PadicNumber, Zmod};
use crate::error::{domain, Error, Result};
use crate::siegel::{local_polynomials, HalfIntegralMatrix, SiegelOptions, SiegelPolynomial, SiegelSolver};

/// Parameters of the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyConfig {
    /// The odd prime `p`.
    pub prime: u64,
    /// Square-free tame level `N` prime to `p`.
    pub tame_level: u64,
    /// Twist exponent `a` modulo `p - 1`.
    pub twist: u64,
    /// Exponents `a_i` of the tame characters `chi_i = omega^(a_i)`.
    pub characters: [u64; 3],
    /// Degree caps of the dense series, in the order `X1, X2, X3, T`.
    pub caps: [usize; 4],
    /// Coefficients are computed modulo `p^precision`.
    pub precision: u32,
}

impl FamilyConfig {
    /// Validated configuration.
    pub fn new(
        prime: u64,
        tame_level: u64,
        twist: u64,
        characters: [u64; 3],
        caps: [usize; 4],
        precision: u32,
    ) -> Result<Self> {
        if prime < 3 || !is_prime(prime) {
            return domain(format!("p = {prime} must be an odd prime"));
        }
        if tame_level == 0 || tame_level.is_multiple_of(prime) {
            return domain(format!("tame level {tame_level} must be positive and prime to p"));
        }
        let factors = prime_factors(tame_level as u128);
        if factors.iter().map(|&l| l as u128).product::<u128>() != tame_level as u128 {
            return domain(format!("tame level {tame_level} is not square-free"));
        }
        if precision == 0 {
            return domain("precision must be positive");
        }
        let m = prime - 1;
        Ok(FamilyConfig {
            prime,
            tame_level,
            twist: twist % m,
            characters: characters.map(|a| a % m),
            caps,
            precision,
        })
    }

    /// `p` together with the primes dividing `N`.
    pub fn excluded_primes(&self) -> Vec<u64> {
        let mut out = vec![self.prime];
        out.extend(prime_factors(self.tame_level as u128));
        out
    }

    fn character_sum(&self) -> u64 {
        self.characters.iter().sum::<u64>() % (self.prime - 1)
    }
}

/// All `B` in `T_3^+ ∩ Xi_p` with the given diagonal.
pub fn enumerate_matrices(diag: [i64; 3], p: u64) -> Result<Vec<HalfIntegralMatrix>> {
    let pi = p as i64;
    if diag.iter().any(|&b| b <= 0 || b % pi != 0) {
        return domain(format!("diagonal {diag:?} must be positive multiples of p = {p}"));
    }
    // c_ij^2 < 4 b_ii b_jj
    let bound = |x: i64, y: i64| -> i64 {
        let lim = 4 * x * y;
        let mut c = (lim as f64).sqrt() as i64;
        while c * c >= lim {
            c -= 1;
        }
        while (c + 1) * (c + 1) < lim {
            c += 1;
        }
        c
    };
    let [b1, b2, b3] = diag;
    let (l23, l13, l12) = (bound(b2, b3), bound(b1, b3), bound(b1, b2));
    let units = |l: i64| (-l..=l).filter(move |c| c % pi != 0);
    let mut out = Vec::new();
    for c23 in units(l23) {
        for c13 in units(l13) {
            for c12 in units(l12) {
                let b = HalfIntegralMatrix::size3(b1, b2, b3, c23, c13, c12);
                if b.is_positive_definite() {
                    out.push(b);
                }
            }
        }
    }
    Ok(out)
}

/// One group-like term `c * prod_v (1 + v)^(s_v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupLikeTerm {
    /// Coefficient modulo `p^precision`.
    pub coefficient: u128,
    /// Exponents `s_v` modulo `p^digits`, in the order `X1, X2, X3, T`.
    pub exponents: [u128; 4],
}

/// A finite sum of group-like terms, truncated to degree caps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLikeSum {
    ring: Zmod,
    exponent_ring: Zmod,
    caps: [usize; 4],
    terms: Vec<GroupLikeTerm>,
}

impl GroupLikeSum {
    /// The empty sum for coefficients modulo `p^precision`.
    pub fn zero(p: u64, precision: u32, caps: [usize; 4]) -> Result<Self> {
        let cap = *caps.iter().max().unwrap();
        Ok(GroupLikeSum {
            ring: Zmod::new(p, precision)?,
            exponent_ring: Zmod::new(p, exponent_digits(p, precision, cap))?,
            caps,
            terms: Vec::new(),
        })
    }

    /// A single term.
    pub fn term(p: u64, precision: u32, caps: [usize; 4], coefficient: u128, exponents: [u128; 4]) -> Result<Self> {
        let mut s = Self::zero(p, precision, caps)?;
        s.push(GroupLikeTerm { coefficient, exponents });
        Ok(s)
    }

    fn push(&mut self, t: GroupLikeTerm) {
        let coefficient = t.coefficient % self.ring.modulus();
        let exponents = t.exponents.map(|e| e % self.exponent_ring.modulus());
        match self.terms.iter().position(|x| x.exponents == exponents) {
            Some(i) => {
                let c = self.ring.add(self.terms[i].coefficient, coefficient);
                if c == 0 {
                    self.terms.swap_remove(i);
                } else {
                    self.terms[i].coefficient = c;
                }
            }
            None if coefficient != 0 => self.terms.push(GroupLikeTerm { coefficient, exponents }),
            None => {}
        }
    }

    /// Coefficient ring.
    pub fn ring(&self) -> &Zmod {
        &self.ring
    }

    /// Degree caps.
    pub fn caps(&self) -> [usize; 4] {
        self.caps
    }

    /// Terms (merged by exponent, zero terms dropped).
    pub fn terms(&self) -> &[GroupLikeTerm] {
        &self.terms
    }

    /// Whether the sum is empty.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.ring != o.ring || self.caps != o.caps {
            return Err(Error::Domain("group-like sums over different rings or caps".into()));
        }
        Ok(())
    }

    /// Sum.
    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let mut out = self.clone();
        for t in &o.terms {
            out.push(t.clone());
        }
        Ok(out)
    }

    /// Product (exponents add).
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let mut out = Self { terms: Vec::new(), ..self.clone() };
        let er = self.exponent_ring;
        for a in &self.terms {
            for b in &o.terms {
                let mut e = [0u128; 4];
                for i in 0..4 {
                    e[i] = er.add(a.exponents[i], b.exponents[i]);
                }
                out.push(GroupLikeTerm { coefficient: self.ring.mul(a.coefficient, b.coefficient), exponents: e });
            }
        }
        Ok(out)
    }

    /// The dense truncated series.
    pub fn to_dense(&self) -> Result<IwasawaSeries> {
        let c = self.caps;
        let len: usize = c.iter().map(|x| x + 1).product();
        let r = self.ring;
        let mut table = vec![0u128; len];
        let binomials = self.binomial_tables()?;
        for t in &self.terms {
            let f: Vec<Vec<u128>> = (0..4).map(|v| binomials[v].coefficients(t.exponents[v])).collect();
            let mut idx = 0;
            for et in 0..=c[3] {
                let a3 = r.mul(t.coefficient, f[3][et]);
                for e3 in 0..=c[2] {
                    let a2 = r.mul(a3, f[2][e3]);
                    for e2 in 0..=c[1] {
                        let a1 = r.mul(a2, f[1][e2]);
                        for e1 in 0..=c[0] {
                            table[idx] = r.add(table[idx], r.mul(a1, f[0][e1]));
                            idx += 1;
                        }
                    }
                }
            }
        }
        Ok(IwasawaSeries::from_table(r, c, table))
    }

    /// Same terms with coefficients reduced to `p^precision` and new caps.
    pub fn reduce(&self, precision: u32, caps: [usize; 4]) -> Result<Self> {
        let mut out = Self::zero(self.ring.prime(), precision, caps)?;
        if out.exponent_ring.exponent() > self.exponent_ring.exponent() {
            return Err(Error::Domain("exponents are not known to the precision the new caps need".into()));
        }
        for t in &self.terms {
            out.push(t.clone());
        }
        Ok(out)
    }

    fn binomial_tables(&self) -> Result<Vec<BinomialTable>> {
        let (p, prec) = (self.ring.prime(), self.ring.exponent());
        self.caps.iter().map(|&cap| BinomialTable::new(p, prec, cap)).collect()
    }

    /// Values at points with trivial finite parts: each truncated binomial
    /// factor is evaluated at `u^k - 1` and the factors are multiplied.
    pub fn specialize_all(&self, points: &[ArithmeticPoint]) -> Result<Vec<PadicNumber>> {
        let r = self.ring;
        let p = r.prime();
        for point in points {
            point.require_trivial_finite_parts()?;
        }
        let binomials = self.binomial_tables()?;
        // distinct exponents per variable, with their substitution values
        let mut columns: Vec<Vec<(i64, u128)>> = vec![Vec::new(); 4];
        let mut slots: Vec<[usize; 4]> = Vec::with_capacity(points.len());
        for point in points {
            let k = point.exponents();
            let x = substitution_values(&r, k);
            let mut slot = [0usize; 4];
            for v in 0..4 {
                slot[v] = match columns[v].iter().position(|&(kv, _)| kv == k[v]) {
                    Some(i) => i,
                    None => {
                        columns[v].push((k[v], x[v]));
                        columns[v].len() - 1
                    }
                };
            }
            slots.push(slot);
        }
        let mut totals = vec![0u128; points.len()];
        for t in &self.terms {
            let values: Vec<Vec<u128>> = (0..4)
                .map(|v| {
                    let coeffs = binomials[v].coefficients(t.exponents[v]);
                    columns[v].iter().map(|&(_, x)| coeffs.iter().rev().fold(0u128, |a, &c| r.add(r.mul(a, x), c))).collect()
                })
                .collect();
            for (total, slot) in totals.iter_mut().zip(&slots) {
                let mut acc = t.coefficient;
                for v in 0..4 {
                    acc = r.mul(acc, values[v][slot[v]]);
                }
                *total = r.add(*total, acc);
            }
        }
        Ok(points
            .iter()
            .zip(totals)
            .map(|(point, total)| {
                let prec = specialization_precision(p, r.exponent(), self.caps, point.exponents());
                PadicNumber::from_bigint(p, &BigInt::from(total), prec as i64)
            })
            .collect())
    }

    /// Value at one point.
    pub fn specialize(&self, point: &ArithmeticPoint) -> Result<PadicNumber> {
        Ok(self.specialize_all(std::slice::from_ref(point))?.remove(0))
    }
}

fn specialization_precision(p: u64, precision: u32, caps: [usize; 4], k: [i64; 4]) -> u32 {
    let mut prec = precision;
    for (i, &ki) in k.iter().enumerate() {
        if ki == 0 {
            continue;
        }
        let mut v = 1;
        let mut x = ki.unsigned_abs();
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        prec = prec.min((caps[i] as u32 + 1) * v);
    }
    prec
}

/// Coefficients of the family with shared Siegel data and caches.
#[derive(Debug)]
pub struct Family {
    config: FamilyConfig,
    ring: Zmod,
    exponent_ring: Zmod,
    teichmuller: Vec<u128>,
    solver: Arc<SiegelSolver>,
    exponents: Mutex<HashMap<u128, u128>>,
}

impl Family {
    /// Family with a fresh Siegel solver using default options.
    pub fn new(config: FamilyConfig) -> Result<Self> {
        Self::with_solver(config, Arc::new(SiegelSolver::new(SiegelOptions::default())))
    }

    /// Family sharing an existing Siegel solver (and its cache).
    pub fn with_solver(config: FamilyConfig, solver: Arc<SiegelSolver>) -> Result<Self> {
        let p = config.prime;
        let ring = Zmod::new(p, config.precision)?;
        let cap = *config.caps.iter().max().unwrap();
        let exponent_ring = Zmod::new(p, exponent_digits(p, config.precision, cap))?;
        let mut teichmuller = vec![0u128];
        for a in 1..p {
            teichmuller.push(ring.teichmuller(a as i128)?);
        }
        Ok(Family { config, ring, exponent_ring, teichmuller, solver, exponents: Mutex::new(HashMap::new()) })
    }

    /// The configuration.
    pub fn config(&self) -> &FamilyConfig {
        &self.config
    }

    /// The shared Siegel solver.
    pub fn solver(&self) -> &Arc<SiegelSolver> {
        &self.solver
    }

    fn empty(&self) -> Result<GroupLikeSum> {
        GroupLikeSum::zero(self.config.prime, self.config.precision, self.config.caps)
    }

    /// `omega(z)^e` for a unit `z` and any integer exponent.
    fn omega_power(&self, z: i128, e: i64) -> u128 {
        let p = self.config.prime as i128;
        let w = self.teichmuller[z.rem_euclid(p) as usize];
        self.ring.pow(w, e.rem_euclid(p as i64 - 1) as u128)
    }

    /// Exponent of `<z> = u^s`.
    fn log_exponent(&self, z: i128) -> Result<u128> {
        let key = z.unsigned_abs();
        if let Some(&s) = self.exponents.lock().unwrap().get(&key) {
            return Ok(s);
        }
        let s = diamond_exponent(&BigInt::from(key), self.config.prime, self.exponent_ring.exponent())?;
        let s = s.to_u128().ok_or_else(|| Error::Internal("diamond exponent out of range".into()))?;
        self.exponents.lock().unwrap().insert(key, s);
        Ok(s)
    }

    fn products(b: &HalfIntegralMatrix) -> (i128, [i128; 3]) {
        let c23 = b.c(1, 2) as i128;
        let c13 = b.c(0, 2) as i128;
        let c12 = b.c(0, 1) as i128;
        (c12 * c23 * c13, [c23, c13, c12])
    }

    /// The character factor: `omega(8 b23 b31 b12)^a <8 b23 b31 b12>_T`
    /// times `chi_1(2 b23)^-1 <2 b23>_X1^-1` and its two companions; zero
    /// outside `Xi_p`.
    pub fn q_b_character_factor(&self, b: &HalfIntegralMatrix) -> Result<GroupLikeSum> {
        let mut out = self.empty()?;
        if !b.in_xi(self.config.prime) {
            return Ok(out);
        }
        let (z0, c) = Self::products(b);
        let er = self.exponent_ring;
        let mut coefficient = self.omega_power(z0, self.config.twist as i64);
        let mut exponents = [0u128; 4];
        for i in 0..3 {
            coefficient = self.ring.mul(coefficient, self.omega_power(c[i], -(self.config.characters[i] as i64)));
            exponents[i] = er.neg(self.log_exponent(c[i])?);
        }
        exponents[3] = self.log_exponent(z0)?;
        out.push(GroupLikeTerm { coefficient, exponents });
        Ok(out)
    }

    /// Siegel polynomials at the primes of `det 2B` away from `pN`.
    pub fn local_polynomials(&self, b: &HalfIntegralMatrix) -> Result<Vec<SiegelPolynomial>> {
        local_polynomials(b, &self.config.excluded_primes(), &self.solver)
    }

    /// `prod_l F_{B,l}(<l>^(a) l^-2)` with
    /// `<l>^(a) = (omega^-2a chi_1 chi_2 chi_3)(l) l^-2 <l>_X1 <l>_X2 <l>_X3 <l>_T^-2`.
    pub fn euler_factor(&self, b: &HalfIntegralMatrix) -> Result<GroupLikeSum> {
        let r = self.ring;
        let er = self.exponent_ring;
        let mut acc = self.empty()?;
        acc.push(GroupLikeTerm { coefficient: 1, exponents: [0; 4] });
        let char_exp = self.config.character_sum() as i64 - 2 * self.config.twist as i64;
        for f in self.local_polynomials(b)? {
            let l = f.prime as i128;
            let scalar = r.mul(self.omega_power(l, char_exp), r.inv(r.pow(r.from_i128(l), 4))?);
            let s = self.log_exponent(l)?;
            let step = [s, s, s, er.neg(er.add(s, s))];
            let mut next = self.empty()?;
            let mut power = 1u128;
            let mut shift = [0u128; 4];
            for c in &f.coefficients {
                let coefficient = r.mul(r.from_big(c), power);
                for t in &acc.terms {
                    let mut e = t.exponents;
                    for i in 0..4 {
                        e[i] = er.add(e[i], shift[i]);
                    }
                    next.push(GroupLikeTerm { coefficient: r.mul(t.coefficient, coefficient), exponents: e });
                }
                power = r.mul(power, scalar);
                for i in 0..4 {
                    shift[i] = er.add(shift[i], step[i]);
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// The family coefficient of `B`: character factor times Euler factor.
    pub fn family_coefficient(&self, b: &HalfIntegralMatrix) -> Result<GroupLikeSum> {
        let q = self.q_b_character_factor(b)?;
        if q.is_zero() {
            return Ok(q);
        }
        q.mul(&self.euler_factor(b)?)
    }

    /// The classical coefficient at a balanced critical point, computed from
    /// integer powers and Teichmüller values only:
    /// `Q_B(e0 eps^n, e1 eps^-k1, e2 eps^-k2, e3 eps^-k3) a_B(e0^2 e1 e2 e3, 2n - k1 - k2 - k3 + 4)`
    /// with `e0 = omega^(a - n)`, `e_i = chi_i^-1 omega^(k_i)`, `eps(z) = z`.
    pub fn direct_coefficient(&self, b: &HalfIntegralMatrix, point: &ArithmeticPoint) -> Result<PadicNumber> {
        Ok(self.direct_coefficients(b, std::slice::from_ref(point))?.remove(0))
    }

    /// [`Family::direct_coefficient`] at several points.
    pub fn direct_coefficients(&self, b: &HalfIntegralMatrix, points: &[ArithmeticPoint]) -> Result<Vec<PadicNumber>> {
        let p = self.config.prime;
        let r = self.ring;
        for point in points {
            point.require_trivial_finite_parts()?;
            point.require_balanced_critical()?;
        }
        let prec = self.config.precision as i64;
        if !b.in_xi(p) {
            return Ok(points.iter().map(|_| PadicNumber::zero(p, prec)).collect());
        }
        let (z0, c) = Self::products(b);
        let a = self.config.twist as i64;
        let polys = self.local_polynomials(b)?;
        let char_sum = self.config.character_sum() as i64;
        // (z, z^-1) residues for the integers raised to signed powers
        let unit = |z: i128| -> Result<(u128, u128)> {
            let x = r.from_i128(z);
            Ok((x, r.inv(x)?))
        };
        let signed_power = |(x, xinv): (u128, u128), e: i64| -> u128 {
            if e >= 0 {
                r.pow(x, e as u128)
            } else {
                r.pow(xinv, (-e) as u128)
            }
        };
        let z0_unit = unit(z0)?;
        let c_units = [unit(c[0])?, unit(c[1])?, unit(c[2])?];
        let l_units: Vec<(u128, u128)> = polys.iter().map(|f| unit(f.prime as i128)).collect::<Result<_>>()?;
        let mut a_b_cache: HashMap<i64, u128> = HashMap::new();
        let mut out = Vec::with_capacity(points.len());
        for point in points {
            let n = point.cyclotomic_weight;
            let k = point.weights;
            let mut q = r.mul(self.omega_power(z0, a - n), signed_power(z0_unit, n));
            for i in 0..3 {
                let e = k[i] - self.config.characters[i] as i64;
                q = r.mul(q, r.mul(self.omega_power(c[i], e), signed_power(c_units[i], -k[i])));
            }
            // a_B depends on the point through d = k1 + k2 + k3 - 2n only
            let d = k.iter().sum::<i64>() - 2 * n;
            let ab = match a_b_cache.get(&d) {
                Some(&v) => v,
                None => {
                    let mut acc = 1u128;
                    for (f, &lu) in polys.iter().zip(&l_units) {
                        let l = f.prime as i128;
                        let x = r.mul(self.omega_power(l, -(2 * a - char_sum + d)), signed_power(lu, d - 4));
                        let value = f.coefficients.iter().rev().fold(0u128, |s, co| r.add(r.mul(s, x), r.from_big(co)));
                        acc = r.mul(acc, value);
                    }
                    a_b_cache.insert(d, acc);
                    acc
                }
            };
            out.push(PadicNumber::from_bigint(p, &BigInt::from(r.mul(q, ab)), prec));
        }
        Ok(out)
    }

    /// Diagonals `(b11, b22, b33)` with every entry a positive multiple of
    /// `p` at most `bound`.
    pub fn diagonals(&self, bound: i64) -> Vec<[i64; 3]> {
        let p = self.config.prime as i64;
        let steps: Vec<i64> = (1..=bound / p).map(|i| i * p).collect();
        let mut out = Vec::new();
        for &x in &steps {
            for &y in &steps {
                for &z in &steps {
                    out.push([x, y, z]);
                }
            }
        }
        out
    }

    /// The q-expansion up to the diagonal bound, as dense series.
    pub fn q_expansion(&self, bound: i64) -> Result<QExpansion> {
        let mut coefficients = BTreeMap::new();
        for diag in self.diagonals(bound) {
            let mut sum = self.empty()?.to_dense()?;
            for b in enumerate_matrices(diag, self.config.prime)? {
                sum = sum.add(&self.family_coefficient(&b)?.to_dense()?)?;
            }
            coefficients.insert(diag, sum);
        }
        Ok(QExpansion { config: self.config.clone(), diagonal_bound: bound, coefficients })
    }

    /// The classical q-expansion at a point, diagonal by diagonal.
    pub fn direct_expansion(&self, bound: i64, point: &ArithmeticPoint) -> Result<BTreeMap<[i64; 3], PadicNumber>> {
        let p = self.config.prime;
        let mut out = BTreeMap::new();
        for diag in self.diagonals(bound) {
            let mut sum = PadicNumber::zero(p, self.config.precision as i64);
            for b in enumerate_matrices(diag, p)? {
                sum = &sum + &self.direct_coefficient(&b, point)?;
            }
            out.insert(diag, sum);
        }
        Ok(out)
    }
}

/// Truncated q-expansion: one dense series per diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    /// Configuration the expansion was built with.
    pub config: FamilyConfig,
    /// Largest diagonal entry.
    pub diagonal_bound: i64,
    /// Coefficient series keyed by `(b11, b22, b33)`.
    pub coefficients: BTreeMap<[i64; 3], IwasawaSeries>,
}

#[derive(Serialize, Deserialize)]
struct QExpansionJson {
    config: FamilyConfig,
    diagonal_bound: i64,
    coefficients: Vec<QEntryJson>,
}

#[derive(Serialize, Deserialize)]
struct QEntryJson {
    diagonal: [i64; 3],
    series: IwasawaSeries,
}

impl Serialize for QExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QExpansionJson {
            config: self.config.clone(),
            diagonal_bound: self.diagonal_bound,
            coefficients: self
                .coefficients
                .iter()
                .map(|(d, series)| QEntryJson { diagonal: *d, series: series.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = QExpansionJson::deserialize(d)?;
        Ok(QExpansion {
            config: j.config,
            diagonal_bound: j.diagonal_bound,
            coefficients: j.coefficients.into_iter().map(|e| (e.diagonal, e.series)).collect(),
        })
    }
}

impl QExpansion {
    /// Specialize every coefficient at a point.
    pub fn specialize(&self, point: &ArithmeticPoint) -> Result<BTreeMap<[i64; 3], PadicNumber>> {
        self.coefficients.iter().map(|(d, s)| Ok((*d, s.specialize(point)?))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::point::balanced_critical_points;
    use crate::arith::{iwasawa_log, teichmuller};
    use proptest::prelude::*;

    fn config(a: u64, caps: usize, precision: u32) -> FamilyConfig {
        FamilyConfig::new(5, 1, a, [0, 0, 0], [caps; 4], precision).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(FamilyConfig::new(4, 1, 0, [0; 3], [3; 4], 10).is_err());
        assert!(FamilyConfig::new(5, 10, 0, [0; 3], [3; 4], 10).is_err());
        assert!(FamilyConfig::new(5, 18, 0, [0; 3], [3; 4], 10).is_err());
        assert_eq!(FamilyConfig::new(5, 6, 6, [0; 3], [3; 4], 10).unwrap().twist, 2);
    }

    #[test]
    fn enumeration_examples() {
        let list = enumerate_matrices([5, 5, 5], 5).unwrap();
        assert!(list.contains(&HalfIntegralMatrix::size3(5, 5, 5, 1, 1, 1)));
        assert!(list.iter().all(|b| b.in_xi(5) && b.is_positive_definite()));
        assert!(enumerate_matrices([5, 4, 5], 5).is_err());
        // brute force over the full box agrees
        let mut count = 0;
        for c23 in -10..=10i64 {
            for c13 in -10..=10i64 {
                for c12 in -10..=10i64 {
                    let b = HalfIntegralMatrix::size3(5, 5, 5, c23, c13, c12);
                    if b.in_xi(5) && b.is_positive_definite() {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(list.len(), count);
    }

    #[test]
    fn character_factor_outside_xi_is_zero() {
        let fam = Family::new(config(0, 3, 10)).unwrap();
        let b = HalfIntegralMatrix::size3(5, 5, 5, 5, 1, 1);
        assert!(fam.family_coefficient(&b).unwrap().is_zero());
        let pt = ArithmeticPoint::new([2, 2, 2], 2);
        assert!(fam.direct_coefficient(&b, &pt).unwrap().is_zero());
    }

    #[test]
    fn weight_two_point_with_trivial_characters() {
        // a = 0 and k = (2,2,2), n = 2: Q_B = <z0>^2 / (<c23> <c13> <c12>)^2
        // times omega factors that collapse to omega(z0)^-2 omega(c)^2 = 1
        let fam = Family::new(config(0, 19, 20)).unwrap();
        let b = HalfIntegralMatrix::size3(5, 5, 5, 1, 1, 1);
        let pt = ArithmeticPoint::new([2, 2, 2], 2);
        let q = fam.q_b_character_factor(&b).unwrap().specialize(&pt).unwrap();
        assert!(q.agrees_with(&PadicNumber::from_int(5, 1, 20), 20));
        // det 2B = 1000 - 30 + 2 = 972 = 4 * 243: only l = 2, 3 contribute
        let polys = fam.local_polynomials(&b).unwrap();
        assert_eq!(polys.iter().map(|f| f.prime).collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn series_and_direct_agree_on_a_sample() {
        let points = balanced_critical_points(6);
        for a in [0, 2] {
            let fam = Family::new(config(a, 19, 20)).unwrap();
            for b in enumerate_matrices([5, 10, 5], 5).unwrap().into_iter().step_by(97) {
                let series = fam.family_coefficient(&b).unwrap().specialize_all(&points).unwrap();
                let direct = fam.direct_coefficients(&b, &points).unwrap();
                for ((s, d), pt) in series.iter().zip(&direct).zip(&points) {
                    assert!(s.agrees_with(d, 20), "B = {b}, point {:?}", pt.exponents());
                }
            }
        }
    }

    #[test]
    fn dense_expansion_matches_terms() {
        let fam = Family::new(config(2, 3, 8)).unwrap();
        let b = HalfIntegralMatrix::size3(5, 5, 10, 3, -2, 4);
        let g = fam.family_coefficient(&b).unwrap();
        let dense = g.to_dense().unwrap();
        let points = balanced_critical_points(5);
        let a = dense.specialize_all(&points).unwrap();
        let c = g.specialize_all(&points).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn character_factor_value_at_point() {
        // Q_B at (k, n) equals omega(z0)^(a-n) z0^n prod omega(c)^k c^-k
        let fam = Family::new(config(2, 19, 20)).unwrap();
        let b = HalfIntegralMatrix::size3(10, 5, 5, 2, 3, -4);
        let pt = ArithmeticPoint::new([3, 4, 5], 5);
        let series = fam.q_b_character_factor(&b).unwrap().specialize(&pt).unwrap();
        let z0 = 2 * 3 * -4i64;
        let w = |z: i64| teichmuller(&BigInt::from(z), 5, 20).unwrap();
        let unit = |z: i64| PadicNumber::from_int(5, z, 20);
        let mut expect = w(z0).powi(2 - 5).unwrap() * unit(z0).pow(5);
        for (c, k) in [(2i64, 3i64), (3, 4), (-4, 5)] {
            expect = expect * w(c).pow(k as u32) * unit(c).powi(-k).unwrap();
        }
        assert!(series.agrees_with(&expect, 20));
        // the log of the one-unit part is the only p-adic input of the series
        assert!(!iwasawa_log(&unit(z0)).unwrap().is_zero());
    }

    #[test]
    fn q_expansion_json_round_trip() {
        let fam = Family::new(config(0, 2, 6)).unwrap();
        let exp = fam.q_expansion(5).unwrap();
        assert_eq!(exp.coefficients.len(), 1);
        let text = serde_json::to_string(&exp).unwrap();
        let back: QExpansion = serde_json::from_str(&text).unwrap();
        assert_eq!(back, exp);
        assert!(fam.q_expansion(4).unwrap().coefficients.is_empty());
    }

    fn permute(b: &HalfIntegralMatrix, s: [usize; 3]) -> HalfIntegralMatrix {
        // new index i is old index s[i]
        let g = b.double_gram();
        let mut h = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                h[i][j] = g[s[i]][s[j]];
            }
        }
        HalfIntegralMatrix::from_double_gram(&h, 3).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn relabeling_symmetry(idx in 0usize..1000, perm in 0usize..6, a in 0u64..4) {
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let s = perms[perm];
            let list = enumerate_matrices([5, 5, 10], 5).unwrap();
            let b = list[idx % list.len()];
            let fam = Family::new(config(a, 4, 10)).unwrap();
            let g = fam.family_coefficient(&b).unwrap();
            let h = fam.family_coefficient(&permute(&b, s)).unwrap();
            // variable X_i pairs with the off-diagonal entry opposite index i,
            // so relabeling indices relabels the X variables the same way
            let mut expect: Vec<(u128, [u128; 4])> = g
                .terms()
                .iter()
                .map(|t| (t.coefficient, [t.exponents[s[0]], t.exponents[s[1]], t.exponents[s[2]], t.exponents[3]]))
                .collect();
            let mut got: Vec<(u128, [u128; 4])> = h.terms().iter().map(|t| (t.coefficient, t.exponents)).collect();
            expect.sort();
            got.sort();
            prop_assert_eq!(expect, got);
        }

        #[test]
        fn specialization_is_multiplicative(idx in 0usize..1000, k in 2i64..7, n in 0i64..4) {
            let list = enumerate_matrices([5, 10, 10], 5).unwrap();
            let b = list[idx % list.len()];
            let fam = Family::new(config(2, 9, 10)).unwrap();
            let q = fam.q_b_character_factor(&b).unwrap();
            let f = fam.euler_factor(&b).unwrap();
            let pt = ArithmeticPoint::new([k, k, k], k + n);
            let lhs = q.mul(&f).unwrap().specialize(&pt).unwrap();
            let rhs = q.specialize(&pt).unwrap() * f.specialize(&pt).unwrap();
            prop_assert!(lhs.agrees_with(&rhs, 10));
        }
    }
}
