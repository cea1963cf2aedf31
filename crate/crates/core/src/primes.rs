//! Primality testing, integer factorization and prime enumeration.
//!
//! Inputs below 2^64 get a deterministic Miller-Rabin test. Larger inputs run
//! the same fixed bases followed by 40 pseudo-random rounds drawn from a
//! generator seeded by the input itself, so results are reproducible.

use std::collections::BTreeMap;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Bases that make Miller-Rabin deterministic for every n < 3.3 * 10^24.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const EXTRA_ROUNDS: usize = 40;

const TRIAL_LIMIT: u64 = 1 << 12;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigUint, a: &BigUint, d: &BigUint, s: u64) -> bool {
    let n_minus_1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &WITNESSES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    for &a in &WITNESSES {
        if !strong_probable_prime(n, &BigUint::from(a), &d, s) {
            return false;
        }
    }
    let mut seed = [0u8; 32];
    for (slot, byte) in seed.iter_mut().zip(n.to_bytes_le()) {
        *slot = byte;
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    let two = BigUint::from(2u32);
    for _ in 0..EXTRA_ROUNDS {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        if !strong_probable_prime(n, &a, &d, s) {
            return false;
        }
    }
    true
}

/// Brent's variant of Pollard rho. `n` must be odd, composite and not a
/// perfect power of a small prime; returns a nontrivial factor.
fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn factor_into(n: BigUint, out: &mut BTreeMap<BigUint, u64>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_brent(&n);
    let rest = &n / &d;
    factor_into(d, out);
    factor_into(rest, out);
}

/// Prime factorization of `n >= 1` as an ordered map prime -> exponent.
///
/// Panics on zero.
pub fn factorize(n: &BigUint) -> BTreeMap<BigUint, u64> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut out = BTreeMap::new();
    let mut rest = n.clone();
    let mut p = 2u64;
    while p < TRIAL_LIMIT {
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            out.insert(BigUint::from(p), e);
        }
        if BigUint::from(p * p) > rest {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        if BigUint::from(TRIAL_LIMIT * TRIAL_LIMIT) > rest {
            // no factor below sqrt(rest) survived trial division
            *out.entry(rest).or_insert(0) += 1;
        } else {
            factor_into(rest, &mut out);
        }
    }
    out
}

/// Number of times `p` divides `n`; `n` must be nonzero.
pub fn valuation(n: &BigUint, p: &BigUint) -> u64 {
    let mut e = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        rest = q;
        e += 1;
    }
}

/// The first `count` primes in increasing order.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_is_prime(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn small_primality_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), naive_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_are_rejected() {
        // strong pseudoprimes to several small bases
        for n in [2047u64, 1373653, 25326001, 3215031751, 3825123056546413051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557)); // largest prime below 2^64
    }

    #[test]
    fn big_primes_and_composites() {
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_prime(&m127));
        let m128 = (BigUint::one() << 128u32) - 1u32;
        assert!(!is_prime(&m128));
    }

    #[test]
    fn factorization_reassembles() {
        let n = BigUint::from(2u32).pow(5) * 3u32 * BigUint::from(1_000_003u64).pow(2);
        let f = factorize(&n);
        let product = f
            .iter()
            .fold(BigUint::one(), |acc, (p, &e)| acc * p.pow(e as u32));
        assert_eq!(product, n);
        assert_eq!(f[&BigUint::from(1_000_003u64)], 2);
    }

    #[test]
    fn pollard_splits_semiprime_beyond_trial_range() {
        let p = BigUint::from(4_294_967_291u64);
        let q = BigUint::from(4_294_967_279u64);
        let f = factorize(&(&p * &q * &q));
        assert_eq!(f.len(), 2);
        assert_eq!(f[&p], 1);
        assert_eq!(f[&q], 2);
    }

    #[test]
    fn factor_one_is_empty() {
        assert!(factorize(&BigUint::one()).is_empty());
    }

    #[test]
    fn prime_enumeration() {
        assert_eq!(first_primes(6), vec![2, 3, 5, 7, 11, 13]);
        assert!(first_primes(0).is_empty());
    }
}
