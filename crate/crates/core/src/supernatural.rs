//! Supernatural numbers and the rational groups `Q(N)` they determine.
//!
//! A supernatural number is a formal product of prime powers in which each
//! exponent is a natural number or the symbol [`Exponent::Omega`]. Only
//! finitely many primes carry a nonzero exponent in anything this crate
//! builds, so values are stored as a sparse ordered map; absent primes have
//! exponent zero and zero exponents are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::primes;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SupernaturalError {
    #[error("expected a positive integer, got {0}")]
    NotPositive(String),
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("empty list")]
    EmptyList,
}

/// Exponent of a single prime: a positive integer or ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(u64),
    Omega,
}

impl Exponent {
    pub fn is_omega(self) -> bool {
        matches!(self, Exponent::Omega)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Exponent::Finite(k) => Some(k),
            Exponent::Omega => None,
        }
    }

    /// ω absorbs everything.
    pub fn plus(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => {
                Exponent::Finite(a.checked_add(b).expect("exponent overflow"))
            }
            _ => Exponent::Omega,
        }
    }

    /// `min(k, self)` for a finite `k`.
    pub fn cap(self, k: u64) -> u64 {
        match self {
            Exponent::Finite(e) => e.min(k),
            Exponent::Omega => k,
        }
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => a.cmp(b),
            (Exponent::Finite(_), Exponent::Omega) => Ordering::Less,
            (Exponent::Omega, Exponent::Finite(_)) => Ordering::Greater,
            (Exponent::Omega, Exponent::Omega) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(k) => write!(f, "{k}"),
            Exponent::Omega => f.write_str("inf"),
        }
    }
}

/// A supernatural number in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SupernaturalNumber {
    exponents: BTreeMap<BigUint, Exponent>,
}

impl SupernaturalNumber {
    /// The supernatural number 1 (empty factorization).
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds from `(prime, exponent)` pairs, checking primality. Zero
    /// exponents are dropped and repeated primes are multiplied together.
    pub fn from_prime_powers<I>(pairs: I) -> Result<Self, SupernaturalError>
    where
        I: IntoIterator<Item = (BigUint, Exponent)>,
    {
        let mut out = Self::one();
        for (p, e) in pairs {
            if !primes::is_prime(&p) {
                return Err(SupernaturalError::NotPrime(p));
            }
            if e == Exponent::Finite(0) {
                continue;
            }
            let slot = out.exponents.entry(p).or_insert(Exponent::Finite(0));
            *slot = slot.plus(e);
        }
        Ok(out)
    }

    /// The natural number `n` viewed as a supernatural number.
    pub fn from_nat(n: &BigUint) -> Result<Self, SupernaturalError> {
        if n.is_zero() {
            return Err(SupernaturalError::NotPositive(n.to_string()));
        }
        let exponents = primes::factorize(n)
            .into_iter()
            .map(|(p, e)| (p, Exponent::Finite(e)))
            .collect();
        Ok(Self { exponents })
    }

    pub fn from_u64(n: u64) -> Result<Self, SupernaturalError> {
        Self::from_nat(&BigUint::from(n))
    }

    /// `p^ω` for a prime `p`.
    pub fn prime_power_omega(p: u64) -> Result<Self, SupernaturalError> {
        Self::from_prime_powers([(BigUint::from(p), Exponent::Omega)])
    }

    pub fn exponent(&self, p: &BigUint) -> Exponent {
        self.exponents
            .get(p)
            .copied()
            .unwrap_or(Exponent::Finite(0))
    }

    /// Primes with nonzero exponent, increasing.
    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.exponents.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BigUint, Exponent)> {
        self.exponents.iter().map(|(p, &e)| (p, e))
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.exponents.values().all(|e| !e.is_omega())
    }

    /// The natural number this represents, when every exponent is finite.
    pub fn to_nat(&self) -> Option<BigUint> {
        self.exponents
            .iter()
            .try_fold(BigUint::one(), |acc, (p, e)| {
                let k = e.finite()?;
                Some(acc * p.pow(u32::try_from(k).ok()?))
            })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exponents = self.exponents.clone();
        for (p, &e) in &other.exponents {
            let slot = exponents.entry(p.clone()).or_insert(Exponent::Finite(0));
            *slot = slot.plus(e);
        }
        Self { exponents }
    }

    /// `self | other`: every exponent of `self` is at most that of `other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.exponents.iter().all(|(p, &e)| e <= other.exponent(p))
    }

    /// Least common multiple (pointwise maximum).
    pub fn sup<'a, I>(values: I) -> Result<Self, SupernaturalError>
    where
        I: IntoIterator<Item = &'a Self>,
    {
        let mut iter = values.into_iter();
        let first = iter.next().ok_or(SupernaturalError::EmptyList)?;
        let mut exponents = first.exponents.clone();
        for v in iter {
            for (p, &e) in &v.exponents {
                let slot = exponents.entry(p.clone()).or_insert(e);
                *slot = (*slot).max(e);
            }
        }
        Ok(Self { exponents })
    }

    /// Greatest common divisor (pointwise minimum).
    pub fn inf<'a, I>(values: I) -> Result<Self, SupernaturalError>
    where
        I: IntoIterator<Item = &'a Self>,
    {
        let mut iter = values.into_iter();
        let first = iter.next().ok_or(SupernaturalError::EmptyList)?;
        let mut exponents = first.exponents.clone();
        for v in iter {
            exponents = exponents
                .into_iter()
                .filter_map(|(p, e)| match e.min(v.exponent(&p)) {
                    Exponent::Finite(0) => None,
                    m => Some((p, m)),
                })
                .collect();
        }
        Ok(Self { exponents })
    }

    /// The `j`-th stage `ℓ_j = ∏_{i ≤ j} p_i^{min(j, n_i)}` of the standard
    /// UHF sequence for this supernatural number, where `p_1 < p_2 < …`
    /// enumerates all primes.
    pub fn ell(&self, j: u64) -> Result<BigUint, SupernaturalError> {
        if j == 0 {
            return Err(SupernaturalError::NotPositive("0".into()));
        }
        let mut acc = BigUint::one();
        for p in primes::first_primes(j as usize) {
            let p = BigUint::from(p);
            let k = self.exponent(&p).cap(j);
            if k > 0 {
                acc *= p.pow(k as u32);
            }
        }
        Ok(acc)
    }

    /// Membership of `q` in `Q(N)`: each prime power in the reduced
    /// denominator is bounded by the exponent of `self`.
    pub fn contains(&self, q: &BigRational) -> bool {
        let denom = q.denom().magnitude();
        if denom.is_one() {
            return true;
        }
        primes::factorize(denom)
            .into_iter()
            .all(|(p, k)| Exponent::Finite(k) <= self.exponent(&p))
    }

    /// `Q(self) ⊆ Q(other)`, which holds exactly when `self | other`.
    pub fn q_subset(&self, other: &Self) -> bool {
        self.divides(other)
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, e)) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match e {
                Exponent::Finite(k) => write!(f, "\"{p}\": {k}")?,
                Exponent::Omega => write!(f, "\"{p}\": \"inf\"")?,
            }
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn sn(pairs: &[(u64, Option<u64>)]) -> SupernaturalNumber {
        SupernaturalNumber::from_prime_powers(pairs.iter().map(|&(p, e)| {
            (
                BigUint::from(p),
                e.map_or(Exponent::Omega, Exponent::Finite),
            )
        }))
        .unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn from_nat_examples() {
        assert_eq!(
            SupernaturalNumber::from_u64(12).unwrap(),
            sn(&[(2, Some(2)), (3, Some(1))])
        );
        assert!(SupernaturalNumber::from_u64(1).unwrap().is_one());
        assert_eq!(
            SupernaturalNumber::from_u64(9).unwrap(),
            sn(&[(3, Some(2))])
        );
        assert!(matches!(
            SupernaturalNumber::from_u64(0),
            Err(SupernaturalError::NotPositive(_))
        ));
    }

    #[test]
    fn rejects_composite_keys() {
        let err =
            SupernaturalNumber::from_prime_powers([(BigUint::from(4u32), Exponent::Finite(1))]);
        assert_eq!(err, Err(SupernaturalError::NotPrime(BigUint::from(4u32))));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(
            sn(&[(2, Some(1))]).mul(&sn(&[(3, Some(1))])),
            sn(&[(2, Some(1)), (3, Some(1))])
        );
        assert_eq!(sn(&[(2, None)]).mul(&sn(&[(2, Some(5))])), sn(&[(2, None)]));
        let n = sn(&[(5, Some(3)), (7, None)]);
        assert_eq!(SupernaturalNumber::one().mul(&n), n);
    }

    #[test]
    fn divides_examples() {
        assert!(sn(&[(2, Some(2)), (3, Some(1))]).divides(&sn(&[(2, None), (3, None)])));
        assert!(!sn(&[(2, Some(1)), (3, Some(1))]).divides(&sn(&[(3, None)])));
        assert!(SupernaturalNumber::one().divides(&sn(&[(11, Some(1))])));
    }

    #[test]
    fn sup_inf_examples() {
        let a = sn(&[(2, Some(1))]);
        let b = sn(&[(3, Some(1))]);
        assert_eq!(
            SupernaturalNumber::sup([&a, &b]).unwrap(),
            sn(&[(2, Some(1)), (3, Some(1))])
        );
        let four = SupernaturalNumber::from_u64(4).unwrap();
        let six = SupernaturalNumber::from_u64(6).unwrap();
        assert_eq!(
            SupernaturalNumber::inf([&four, &six]).unwrap(),
            sn(&[(2, Some(1))])
        );
        assert_eq!(SupernaturalNumber::sup([&a]).unwrap(), a);
        assert_eq!(
            SupernaturalNumber::sup(std::iter::empty()),
            Err(SupernaturalError::EmptyList)
        );
        assert_eq!(
            SupernaturalNumber::inf(std::iter::empty()),
            Err(SupernaturalError::EmptyList)
        );
    }

    /// Direct evaluation of the ℓ_j product, with its own prime list.
    fn ell_oracle(pairs: &[(u64, Option<u64>)], j: u64) -> BigUint {
        let primes: Vec<u64> = (2..)
            .filter(|n: &u64| (2..*n).all(|d| !n.is_multiple_of(d)))
            .take(j as usize)
            .collect();
        let mut acc = BigUint::one();
        for p in primes {
            let n_i = pairs
                .iter()
                .find(|(q, _)| *q == p)
                .map(|&(_, e)| e.unwrap_or(u64::MAX))
                .unwrap_or(0);
            acc *= BigUint::from(p).pow(j.min(n_i) as u32);
        }
        acc
    }

    #[test]
    fn ell_examples() {
        let two_omega = sn(&[(2, None)]);
        assert_eq!(ell_oracle(&[(2, None)], 1), BigUint::from(2u32));
        assert_eq!(ell_oracle(&[(2, None)], 3), BigUint::from(8u32));
        assert_eq!(two_omega.ell(1).unwrap(), BigUint::from(2u32));
        assert_eq!(two_omega.ell(3).unwrap(), BigUint::from(8u32));
        assert_eq!(SupernaturalNumber::one().ell(5).unwrap(), BigUint::one());
        assert!(two_omega.ell(0).is_err());
        let mixed = [(2, Some(1)), (3, None), (7, Some(4))];
        for j in 1..8 {
            assert_eq!(sn(&mixed).ell(j).unwrap(), ell_oracle(&mixed, j));
        }
    }

    #[test]
    fn membership_examples() {
        let n = sn(&[(2, None), (3, Some(1))]);
        assert!(n.contains(&rat(5, 6)));
        assert!(!n.contains(&rat(1, 9)));
        assert!(SupernaturalNumber::one().contains(&rat(7, 1)));
        assert!(n.contains(&rat(-5, 48)));
    }

    #[test]
    fn subset_examples() {
        assert!(sn(&[(2, None)]).q_subset(&sn(&[(2, None), (3, None)])));
        assert!(!sn(&[(5, Some(1))]).q_subset(&sn(&[(2, None)])));
        let n = sn(&[(13, Some(2))]);
        assert!(n.q_subset(&n));
    }

    #[test]
    fn to_nat_round_trip() {
        let n = SupernaturalNumber::from_u64(360).unwrap();
        assert_eq!(n.to_nat(), Some(BigUint::from(360u32)));
        assert_eq!(sn(&[(2, None)]).to_nat(), None);
        assert_eq!(n.to_string(), r#"{"2": 3, "3": 2, "5": 1}"#);
    }

    fn arb_exponent() -> impl Strategy<Value = Exponent> {
        prop_oneof![
            3 => (1u64..5).prop_map(Exponent::Finite),
            1 => Just(Exponent::Omega),
        ]
    }

    fn arb_sn() -> impl Strategy<Value = SupernaturalNumber> {
        proptest::collection::btree_map(
            prop::sample::select(vec![2u64, 3, 5, 7, 11]),
            arb_exponent(),
            0..4,
        )
        .prop_map(|m| {
            SupernaturalNumber::from_prime_powers(m.into_iter().map(|(p, e)| (BigUint::from(p), e)))
                .unwrap()
        })
    }

    fn arb_rat() -> impl Strategy<Value = BigRational> {
        (-500i64..500, 1i64..400).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn divides_is_a_partial_order(a in arb_sn(), b in arb_sn(), c in arb_sn()) {
            prop_assert!(a.divides(&a));
            if a.divides(&b) && b.divides(&a) {
                prop_assert_eq!(&a, &b);
            }
            if a.divides(&b) && b.divides(&c) {
                prop_assert!(a.divides(&c));
            }
        }

        #[test]
        fn mul_is_a_commutative_monoid(a in arb_sn(), b in arb_sn(), c in arb_sn()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&SupernaturalNumber::one()), a.clone());
            prop_assert!(a.divides(&a.mul(&b)));
        }

        #[test]
        fn sup_and_inf_are_lattice_bounds(a in arb_sn(), b in arb_sn(), c in arb_sn()) {
            let s = SupernaturalNumber::sup([&a, &b]).unwrap();
            let i = SupernaturalNumber::inf([&a, &b]).unwrap();
            prop_assert!(a.divides(&s) && b.divides(&s));
            prop_assert!(i.divides(&a) && i.divides(&b));
            if a.divides(&c) && b.divides(&c) {
                prop_assert!(s.divides(&c));
            }
            if c.divides(&a) && c.divides(&b) {
                prop_assert!(c.divides(&i));
            }
        }

        #[test]
        fn ell_chain_divides(a in arb_sn(), j in 1u64..10) {
            let lj = a.ell(j).unwrap();
            let next = a.ell(j + 1).unwrap();
            prop_assert!((next % lj).is_zero());
        }

        #[test]
        fn divisibility_matches_truncation_membership(a in arb_sn(), b in arb_sn()) {
            let via_ell = (1..=12).all(|j| {
                b.contains(&BigRational::new(BigInt::one(), BigInt::from(a.ell(j).unwrap())))
            });
            prop_assert_eq!(a.divides(&b), via_ell);
        }

        #[test]
        fn rational_group_is_closed(n in arb_sn(), x in arb_rat(), y in arb_rat()) {
            prop_assert!(n.contains(&BigRational::one()));
            if n.contains(&x) && n.contains(&y) {
                prop_assert!(n.contains(&(&x + &y)));
                prop_assert!(n.contains(&-x.clone()));
            }
        }

        #[test]
        fn from_nat_is_multiplicative(a in 1u64..=1_000_000, b in 1u64..=1_000_000) {
            let lhs = SupernaturalNumber::from_u64(a * b).unwrap();
            let rhs = SupernaturalNumber::from_u64(a).unwrap().mul(&SupernaturalNumber::from_u64(b).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
