//! Ordered abelian groups with order unit, in two concrete presentations.
//!
//! * [`CyclicOrderedGroup`]: `ℤ` with the cone generated (as a monoid) by a
//!   finite set of positive integers, e.g. `(ℤ, ⟨2, 3⟩, 6)`.
//! * [`QuadraticIrrationalGroup`]: `Q(N_H) + √d·ℤ ⊂ ℝ` with the order
//!   inherited from the reals and unit `k + z√d`.
//!
//! Both support divisibility of the unit, Property (D), the maximum
//! supernatural divisor `N(G, u)`, rational-subgroup membership and the map
//! `θ : Q(N(G, u)) → ℚ(G, u)`.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::primes;
use crate::supernatural::{Exponent, SupernaturalNumber};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("expected a positive integer, got {0}")]
    NotPositive(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("element does not match the group presentation")]
    WrongElementKind,
    #[error("element is not in the group: {0}")]
    NotAnElement(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0} is not in Q(N(G, u))")]
    OutsideRationalGroup(BigRational),
}

/// Membership in the submonoid of `ℤ` generated by `gens`.
///
/// Negative `x` is never in the cone. After dividing out the gcd of the
/// generators, everything above the Schur bound `(a_min - 1)(a_max - 1) - 1`
/// on the Frobenius number is a member; below it a reachability table
/// decides exactly.
pub fn semigroup_member(gens: &[u64], x: i64) -> bool {
    if x < 0 {
        return false;
    }
    if x == 0 {
        return true;
    }
    let gens: Vec<u64> = gens.iter().copied().filter(|&g| g > 0).collect();
    if gens.is_empty() {
        return false;
    }
    let g = gens.iter().fold(0u64, |acc, &a| acc.gcd(&a));
    let x = x as u64;
    if !x.is_multiple_of(g) {
        return false;
    }
    let x = x / g;
    let reduced: Vec<u64> = gens.iter().map(|&a| a / g).collect();
    let lo = *reduced.iter().min().expect("nonempty") as u128;
    let hi = *reduced.iter().max().expect("nonempty") as u128;
    if (x as u128) + 1 > (lo - 1) * (hi - 1) {
        return true;
    }
    reachable_up_to(&reduced, x as usize)[x as usize]
}

fn reachable_up_to(gens: &[u64], limit: usize) -> Vec<bool> {
    let mut table = vec![false; limit + 1];
    table[0] = true;
    for i in 1..=limit {
        table[i] = gens
            .iter()
            .any(|&a| (a as usize) <= i && table[i - a as usize]);
    }
    table
}

/// All positive divisors of `n`, increasing.
fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in primes::factorize(&BigUint::from(n)) {
        let p = p.to_u64().expect("prime divides a u64");
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for &d in &out {
            let mut power = d;
            for _ in 0..=e {
                next.push(power);
                power = power.saturating_mul(p);
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

/// Outcome of the Property (D) check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyD {
    Holds,
    /// Coprime `n`, `m` both dividing the unit while `n·m` does not.
    Counterexample(u64, u64),
}

/// Reduced witness `m·g = q·u` for membership in `ℚ(G, u)`, with `m > 0`
/// minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalWitness {
    pub m: BigUint,
    pub q: BigInt,
}

impl RationalWitness {
    fn from_ratio(ratio: &BigRational) -> Self {
        let m = ratio.denom().magnitude().clone();
        let q = ratio.numer().clone();
        Self { m, q }
    }

    /// `q / m`.
    pub fn ratio(&self) -> BigRational {
        BigRational::new(self.q.clone(), BigInt::from(self.m.clone()))
    }
}

/// An element of one of the two presentations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupElement {
    Integer(BigInt),
    /// `rational + irrational·√d`.
    Quadratic {
        rational: BigRational,
        irrational: BigInt,
    },
}

/// `(ℤ, ⟨generators⟩, unit)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicOrderedGroup {
    generators: Vec<u64>,
    unit: u64,
    cone: Vec<bool>,
}

impl CyclicOrderedGroup {
    pub fn new(generators: &[u64], unit: u64) -> Result<Self, GroupError> {
        let mut gens: Vec<u64> = generators.to_vec();
        gens.sort_unstable();
        gens.dedup();
        if gens.is_empty() {
            return Err(GroupError::InvalidGroup("no generators".into()));
        }
        if gens[0] == 0 {
            return Err(GroupError::InvalidGroup(
                "generators must be positive".into(),
            ));
        }
        if unit == 0 {
            return Err(GroupError::InvalidGroup("unit must be positive".into()));
        }
        let cone = reachable_up_to(&gens, unit as usize);
        if !cone[unit as usize] {
            return Err(GroupError::InvalidGroup(format!(
                "unit {unit} is not in the cone generated by {gens:?}"
            )));
        }
        Ok(Self {
            generators: gens,
            unit,
            cone,
        })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    /// Whether `x` lies in the positive cone.
    pub fn in_cone(&self, x: i64) -> bool {
        match usize::try_from(x) {
            Ok(i) if i < self.cone.len() => self.cone[i],
            _ => semigroup_member(&self.generators, x),
        }
    }

    /// The cone is all of `ℤ⁺` exactly when it contains 1; otherwise some
    /// `x ∉ G⁺` has a positive multiple in `G⁺`.
    pub fn is_unperforated(&self) -> bool {
        self.generators[0] == 1
    }

    pub fn unit_divisor(&self, n: u64) -> Result<Option<u64>, GroupError> {
        if n == 0 {
            return Err(GroupError::NotPositive(n.to_string()));
        }
        if !self.unit.is_multiple_of(n) {
            return Ok(None);
        }
        let x = self.unit / n;
        Ok(self.cone[x as usize].then_some(x))
    }

    fn divides_unit(&self, n: u64) -> bool {
        self.unit.is_multiple_of(n) && self.cone[(self.unit / n) as usize]
    }

    /// Searches coprime pairs `n < m` of unit divisors in increasing order.
    pub fn property_d(&self) -> PropertyD {
        let divisors: Vec<u64> = divisors(self.unit)
            .into_iter()
            .filter(|&n| n > 1 && self.divides_unit(n))
            .collect();
        for (i, &n) in divisors.iter().enumerate() {
            for &m in &divisors[i + 1..] {
                if n.gcd(&m) == 1 && !self.divides_unit(n * m) {
                    return PropertyD::Counterexample(n, m);
                }
            }
        }
        PropertyD::Holds
    }

    pub fn max_supernatural(&self) -> Option<SupernaturalNumber> {
        if self.property_d() != PropertyD::Holds {
            return None;
        }
        let pairs = primes::factorize(&BigUint::from(self.unit))
            .into_keys()
            .map(|p| {
                let p64 = p.to_u64().expect("prime divides a u64");
                let mut k = 0u64;
                let mut power = p64;
                while self.unit.is_multiple_of(power) && self.divides_unit(power) {
                    k += 1;
                    power = match power.checked_mul(p64) {
                        Some(next) => next,
                        None => break,
                    };
                }
                (p, Exponent::Finite(k))
            });
        Some(SupernaturalNumber::from_prime_powers(pairs).expect("factorization yields primes"))
    }

    /// Every integer is in `ℚ(ℤ, u)`; returns the reduced `(m, q)` with
    /// `m·g = q·u`.
    pub fn rational_subgroup_member(&self, g: &BigInt) -> RationalWitness {
        RationalWitness::from_ratio(&BigRational::new(g.clone(), BigInt::from(self.unit)))
    }

    /// `θ(x) = x·u`, defined for unperforated cones and `x ∈ Q(N(G, u))`.
    pub fn theta(&self, x: &BigRational) -> Result<BigInt, GroupError> {
        if !self.is_unperforated() {
            return Err(GroupError::Unsupported(
                "θ is only defined on dimension groups; this cone is perforated".into(),
            ));
        }
        let n = self
            .max_supernatural()
            .expect("unperforated groups have Property (D)");
        if !n.contains(x) {
            return Err(GroupError::OutsideRationalGroup(x.clone()));
        }
        let image = x * BigRational::from_integer(BigInt::from(self.unit));
        debug_assert!(image.is_integer());
        Ok(image.to_integer())
    }
}

/// Sign of `q + z·√d` for a non-square `d > 0`, decided exactly.
pub fn quadratic_sign(q: &BigRational, z: &BigInt, d: u64) -> Ordering {
    let sq = q.signum();
    let sz = z.signum();
    if z.is_zero() {
        return q.cmp(&BigRational::zero());
    }
    if q.is_zero() || sq == BigRational::from_integer(sz.clone()) {
        return z.cmp(&BigInt::zero());
    }
    // opposite signs: compare q² with d·z²
    let lhs = q * q;
    let rhs = BigRational::from_integer(z * z * BigInt::from(d));
    match lhs.cmp(&rhs) {
        Ordering::Greater => q.cmp(&BigRational::zero()),
        Ordering::Less => z.cmp(&BigInt::zero()),
        Ordering::Equal => unreachable!("√{d} is irrational"),
    }
}

fn is_square_free(d: u64) -> bool {
    primes::factorize(&BigUint::from(d))
        .values()
        .all(|&e| e == 1)
}

/// Signed p-adic valuation of a nonzero rational.
fn rational_valuation(x: &BigRational, p: &BigUint) -> i128 {
    primes::valuation(x.numer().magnitude(), p) as i128
        - primes::valuation(x.denom().magnitude(), p) as i128
}

/// `H + √d·ℤ` with `H = Q(N_H)` and unit `k + z√d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticIrrationalGroup {
    h: SupernaturalNumber,
    alpha_square: u64,
    unit_rational: BigRational,
    unit_irrational: BigInt,
}

impl QuadraticIrrationalGroup {
    pub fn new(
        h: SupernaturalNumber,
        alpha_square: u64,
        unit_rational: BigRational,
        unit_irrational: BigInt,
    ) -> Result<Self, GroupError> {
        if alpha_square < 2 || !is_square_free(alpha_square) {
            return Err(GroupError::InvalidGroup(format!(
                "alpha_square must be a square-free integer ≥ 2, got {alpha_square}"
            )));
        }
        if unit_rational.is_zero() {
            return Err(GroupError::InvalidGroup(
                "unit rational part must be nonzero".into(),
            ));
        }
        if !h.contains(&unit_rational) {
            return Err(GroupError::InvalidGroup(format!(
                "unit rational part {unit_rational} is not in H"
            )));
        }
        if quadratic_sign(&unit_rational, &unit_irrational, alpha_square) != Ordering::Greater {
            return Err(GroupError::InvalidGroup("unit must be positive".into()));
        }
        Ok(Self {
            h,
            alpha_square,
            unit_rational,
            unit_irrational,
        })
    }

    pub fn h(&self) -> &SupernaturalNumber {
        &self.h
    }

    pub fn alpha_square(&self) -> u64 {
        self.alpha_square
    }

    pub fn unit(&self) -> (&BigRational, &BigInt) {
        (&self.unit_rational, &self.unit_irrational)
    }

    pub fn sign(&self, rational: &BigRational, irrational: &BigInt) -> Ordering {
        quadratic_sign(rational, irrational, self.alpha_square)
    }

    pub fn contains(&self, rational: &BigRational) -> bool {
        self.h.contains(rational)
    }

    pub fn unit_divisor(&self, n: u64) -> Result<Option<(BigRational, BigInt)>, GroupError> {
        if n == 0 {
            return Err(GroupError::NotPositive(n.to_string()));
        }
        let n_big = BigInt::from(n);
        let (z, rem) = self.unit_irrational.div_rem(&n_big);
        if !rem.is_zero() {
            return Ok(None);
        }
        let k = &self.unit_rational / BigRational::from_integer(n_big);
        if !self.h.contains(&k) {
            return Ok(None);
        }
        // v > 0 forces v/n > 0
        debug_assert_eq!(self.sign(&k, &z), Ordering::Greater);
        Ok(Some((k, z)))
    }

    /// `N(G, v)`. For each prime, `p^j | v` iff `k/p^j ∈ H` and `p^j | z`, so
    /// the exponent is `min(v_p(k) + N_H(p), v_p(z))` with `v_p(0) = ω`.
    pub fn max_supernatural(&self) -> SupernaturalNumber {
        let mut candidates: Vec<BigUint> = self.h.primes().cloned().collect();
        candidates.extend(primes::factorize(self.unit_rational.numer().magnitude()).into_keys());
        candidates.sort();
        candidates.dedup();
        let pairs = candidates.into_iter().filter_map(|p| {
            let from_h = match self.h.exponent(&p) {
                Exponent::Omega => None,
                Exponent::Finite(e) => {
                    Some(rational_valuation(&self.unit_rational, &p) + e as i128)
                }
            };
            let from_z = (!self.unit_irrational.is_zero())
                .then(|| primes::valuation(self.unit_irrational.magnitude(), &p) as i128);
            let exponent = match (from_h, from_z) {
                (None, None) => Exponent::Omega,
                (Some(a), None) | (None, Some(a)) => Exponent::Finite(a as u64),
                (Some(a), Some(b)) => Exponent::Finite(a.min(b) as u64),
            };
            (exponent != Exponent::Finite(0)).then_some((p, exponent))
        });
        SupernaturalNumber::from_prime_powers(pairs).expect("candidate keys are prime")
    }

    /// `h + w√d ∈ ℚ(G, v)` iff `w·k = h·z`; the witness has `q/m = h/k`.
    pub fn rational_subgroup_member(
        &self,
        rational: &BigRational,
        irrational: &BigInt,
    ) -> Result<Option<RationalWitness>, GroupError> {
        if !self.h.contains(rational) {
            return Err(GroupError::NotAnElement(format!("{rational} is not in H")));
        }
        let lhs = BigRational::from_integer(irrational.clone()) * &self.unit_rational;
        let rhs = rational * BigRational::from_integer(self.unit_irrational.clone());
        if lhs != rhs {
            return Ok(None);
        }
        Ok(Some(RationalWitness::from_ratio(
            &(rational / &self.unit_rational),
        )))
    }

    /// `θ(x) = x·v`, defined for `x ∈ Q(N(G, v))`.
    pub fn theta(&self, x: &BigRational) -> Result<(BigRational, BigInt), GroupError> {
        if !self.max_supernatural().contains(x) {
            return Err(GroupError::OutsideRationalGroup(x.clone()));
        }
        let irrational = x * BigRational::from_integer(self.unit_irrational.clone());
        debug_assert!(irrational.is_integer());
        Ok((x * &self.unit_rational, irrational.to_integer()))
    }
}

/// Either presentation, with element-level dispatch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderedGroup {
    Cyclic(CyclicOrderedGroup),
    Quadratic(QuadraticIrrationalGroup),
}

impl OrderedGroup {
    pub fn unit(&self) -> GroupElement {
        match self {
            OrderedGroup::Cyclic(g) => GroupElement::Integer(BigInt::from(g.unit())),
            OrderedGroup::Quadratic(g) => GroupElement::Quadratic {
                rational: g.unit_rational.clone(),
                irrational: g.unit_irrational.clone(),
            },
        }
    }

    pub fn unit_divisor(&self, n: u64) -> Result<Option<GroupElement>, GroupError> {
        Ok(match self {
            OrderedGroup::Cyclic(g) => g
                .unit_divisor(n)?
                .map(|x| GroupElement::Integer(BigInt::from(x))),
            OrderedGroup::Quadratic(g) => {
                g.unit_divisor(n)?
                    .map(|(rational, irrational)| GroupElement::Quadratic {
                        rational,
                        irrational,
                    })
            }
        })
    }

    /// Quadratic groups are unperforated, so Property (D) holds without search.
    pub fn property_d(&self) -> PropertyD {
        match self {
            OrderedGroup::Cyclic(g) => g.property_d(),
            OrderedGroup::Quadratic(_) => PropertyD::Holds,
        }
    }

    pub fn max_supernatural(&self) -> Option<SupernaturalNumber> {
        match self {
            OrderedGroup::Cyclic(g) => g.max_supernatural(),
            OrderedGroup::Quadratic(g) => Some(g.max_supernatural()),
        }
    }

    pub fn rational_subgroup_member(
        &self,
        element: &GroupElement,
    ) -> Result<Option<RationalWitness>, GroupError> {
        match (self, element) {
            (OrderedGroup::Cyclic(g), GroupElement::Integer(x)) => {
                Ok(Some(g.rational_subgroup_member(x)))
            }
            (
                OrderedGroup::Quadratic(g),
                GroupElement::Quadratic {
                    rational,
                    irrational,
                },
            ) => g.rational_subgroup_member(rational, irrational),
            _ => Err(GroupError::WrongElementKind),
        }
    }

    pub fn theta(&self, x: &BigRational) -> Result<GroupElement, GroupError> {
        match self {
            OrderedGroup::Cyclic(g) => g.theta(x).map(GroupElement::Integer),
            OrderedGroup::Quadratic(g) => {
                g.theta(x)
                    .map(|(rational, irrational)| GroupElement::Quadratic {
                        rational,
                        irrational,
                    })
            }
        }
    }
}

/// Whether `p·q / m` is an integer: the criterion for an element with
/// `m·g = q·u` to be `θ` of a fraction with denominator `p`.
pub fn theta_claim_check(m: &BigUint, q: &BigInt, p: &BigUint) -> bool {
    let pq = BigInt::from(p.clone()) * q;
    (pq % BigInt::from_biguint(Sign::Plus, m.clone())).is_zero()
}
