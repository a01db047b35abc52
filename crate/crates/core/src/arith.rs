//! Exact 64-bit integer number theory: gcd, factorization, radicals,
//! deterministic primality, prime enumeration.
//!
//! Everything here operates on positive integers. Passing 0 where a positive
//! integer is required is a caller bug and panics; overflow that would leave
//! the 64-bit range is reported as [`Error::Overflow`], never wrapped.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Upper bound (inclusive) of the smallest-prime-factor sieve.
///
/// Factorization below this bound is a table walk; above it, trial division
/// by the sieved primes handles every n up to `SIEVE_LIMIT^2`, and a
/// deterministic primality test plus a 6k±1 wheel covers the remainder of
/// the 64-bit range.
pub const SIEVE_LIMIT: u64 = 1_000_000;

/// Greatest common divisor. Total on positive integers; `gcd(a, b) = gcd(b, a)`.
pub fn gcd(a: u64, b: u64) -> u64 {
    debug_assert!(a > 0 && b > 0, "gcd requires positive arguments");
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Least common multiple as a 128-bit value; callers decide what fits.
pub fn lcm_wide(a: u64, b: u64) -> u128 {
    debug_assert!(a > 0 && b > 0);
    (a as u128 / gcd(a, b) as u128) * b as u128
}

/// A prime factorization: strictly increasing primes with exponents >= 1.
/// The empty factorization encodes 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The distinct primes, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Multiplies the factorization back together.
    pub fn value(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
            .max(1)
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u64 {
        self.factors.iter().map(|&(p, _)| p).product::<u64>().max(1)
    }
}

struct Sieve {
    /// spf[x] = smallest prime factor of x, for 2 <= x <= SIEVE_LIMIT.
    spf: Vec<u32>,
    primes: Vec<u64>,
}

fn sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| {
        let limit = SIEVE_LIMIT as usize;
        let mut spf = vec![0u32; limit + 1];
        for x in 2..=limit {
            if spf[x] == 0 {
                for m in (x..=limit).step_by(x) {
                    if spf[m] == 0 {
                        spf[m] = x as u32;
                    }
                }
            }
        }
        let primes = (2..=limit)
            .filter(|&x| spf[x] == x as u32)
            .map(|x| x as u64)
            .collect();
        Sieve { spf, primes }
    })
}

/// Smallest prime factor of `n >= 2`. Exact over the full 64-bit range.
pub fn smallest_prime_factor(n: u64) -> u64 {
    assert!(n >= 2, "smallest_prime_factor requires n >= 2");
    if n <= SIEVE_LIMIT {
        return sieve().spf[n as usize] as u64;
    }
    for &p in &sieve().primes {
        if p * p > n {
            return n;
        }
        if n % p == 0 {
            return p;
        }
    }
    if is_prime(n) {
        return n;
    }
    // No factor <= 10^6 and composite: walk a 6k±1 wheel from the sieve edge.
    let mut d = SIEVE_LIMIT + 1;
    while d % 6 != 1 && d % 6 != 5 {
        d += 1;
    }
    let mut step = if d % 6 == 1 { 4u64 } else { 2u64 };
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return d;
        }
        d += step;
        step = 6 - step;
    }
    n
}

/// Canonical prime factorization; `factorize(1)` is empty.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut factors = Vec::new();
    let mut m = n;
    if m <= SIEVE_LIMIT {
        let spf = &sieve().spf;
        while m > 1 {
            let p = spf[m as usize] as u64;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        return Factorization { factors };
    }
    for &p in &sieve().primes {
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    while m > 1 {
        if is_prime(m) {
            factors.push((m, 1));
            break;
        }
        let p = smallest_prime_factor(m);
        let mut e = 0u32;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        factors.push((p, e));
    }
    factors.sort_unstable_by_key(|&(p, _)| p);
    Factorization { factors }
}

/// Product of the distinct primes dividing n; `radical(1) = 1`.
/// Idempotent, and `radical(n)` divides n.
pub fn radical(n: u64) -> u64 {
    assert!(n >= 1, "radical requires n >= 1");
    factorize(n).radical()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

// These witnesses detect all composites below 2^64 (Jim Sinclair's set).
const MILLER_RABIN_WITNESSES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// Deterministic primality test, exact for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    assert!(n >= 1, "is_prime requires n >= 1");
    if n < 4 {
        return n > 1;
    }
    if n % 2 == 0 {
        return false;
    }
    let trailing = (n - 1).trailing_zeros();
    let odd = (n - 1) >> trailing;
    'witness: for &w in &MILLER_RABIN_WITNESSES {
        let a = w % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..trailing {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Ascending stream of primes, unbounded within u64. Draws from the sieve
/// below [`SIEVE_LIMIT`] and tests candidates deterministically beyond it.
pub fn primes() -> impl Iterator<Item = u64> {
    PrimeStream { idx: 0, next: 0 }
}

struct PrimeStream {
    idx: usize,
    next: u64,
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let sieved = &sieve().primes;
        if self.idx < sieved.len() {
            let p = sieved[self.idx];
            self.idx += 1;
            return Some(p);
        }
        if self.next == 0 {
            self.next = SIEVE_LIMIT + 1;
        }
        loop {
            let c = self.next;
            self.next = self.next.checked_add(1)?;
            if is_prime(c) {
                return Some(c);
            }
        }
    }
}

/// All positive divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors requires n >= 1");
    let mut out = vec![1u64];
    for &(p, e) in factorize(n).factors() {
        let prior = out.clone();
        let mut power = 1u64;
        for _ in 0..e {
            power *= p;
            out.extend(prior.iter().map(|d| d * power));
        }
    }
    out.sort_unstable();
    out
}

/// Product of a slice of positive integers, or an overflow error.
pub fn checked_product(values: &[u64], context: &'static str) -> Result<u64> {
    let mut acc = 1u64;
    for &v in values {
        acc = acc.checked_mul(v).ok_or(Error::Overflow { context })?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(12, 18), 6);
        for n in [1u64, 2, 97, 1 << 40] {
            assert_eq!(gcd(1, n), 1);
            assert_eq!(gcd(n, 1), 1);
        }
        assert_eq!(gcd(35, 64), 1);
    }

    #[test]
    fn gcd_divides_and_reduces() {
        // Deterministic sample over the stated window.
        let mut x = 0x9e3779b97f4a7c15u64;
        for _ in 0..2000 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = (x >> 20) % 1_000_000 + 1;
            let b = (x >> 44) % 1_000_000 + 1;
            let g = gcd(a, b);
            assert_eq!(a % g, 0);
            assert_eq!(b % g, 0);
            assert_eq!(gcd(a / g, b / g), 1);
            assert_eq!(g, gcd(b, a));
        }
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).factors().is_empty());
        assert_eq!(factorize(12).factors(), &[(2, 2), (3, 1)]);
        // 8191 = 2^13 - 1; trial division to sqrt confirms primality.
        assert!(trial_division_is_prime(8191));
        assert_eq!(factorize(8191).factors(), &[(8191, 1)]);
    }

    #[test]
    fn factorize_reconstructs() {
        for n in 1..=100_000u64 {
            let f = factorize(n);
            assert_eq!(f.value(), n, "factorize({n}) does not reconstruct");
            let mut last = 0;
            for &(p, e) in f.factors() {
                assert!(p > last, "primes not strictly increasing for {n}");
                assert!(e >= 1);
                last = p;
            }
        }
    }

    #[test]
    fn factorize_beyond_sieve() {
        // 1000003 is prime; 1000003^2 and mixed products exercise the
        // trial-division path past the sieve.
        let p = 1_000_003u64;
        assert!(is_prime(p));
        assert_eq!(factorize(p).factors(), &[(p, 1)]);
        assert_eq!(factorize(p * p).factors(), &[(p, 2)]);
        assert_eq!(factorize(6 * p).factors(), &[(2, 1), (3, 1), (p, 1)]);
        let q = 1_000_033u64;
        assert!(is_prime(q));
        assert_eq!(factorize(p * q).factors(), &[(p, 1), (q, 1)]);
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(1), 1);
        assert_eq!(radical(12), 6);
        // 360 = 2^3 * 3^2 * 5 by trial division.
        assert_eq!(trial_division_factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(radical(360), 30);
    }

    #[test]
    fn radical_laws() {
        for n in 1..=100_000u64 {
            let r = radical(n);
            assert_eq!(n % r, 0, "radical({n}) must divide n");
            assert_eq!(radical(r), r, "radical must be idempotent at {n}");
        }
        // Multiplicativity on coprime pairs.
        let mut x = 0xdeadbeefu64;
        for _ in 0..2000 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = (x >> 17) % 10_000 + 1;
            let b = (x >> 41) % 10_000 + 1;
            if gcd(a, b) == 1 {
                assert_eq!(radical(a * b), radical(a) * radical(b));
            }
        }
    }

    fn trial_division_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    fn trial_division_factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                let mut e = 0;
                while n % d == 0 {
                    n /= d;
                    e += 1;
                }
                out.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn is_prime_examples() {
        assert!(!is_prime(1));
        assert!(is_prime(8191));
        // 2^61 - 1, verified against trial division over a partial range is
        // impractical; the witness set is deterministic for all u64.
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime((1u64 << 61) - 3));
    }

    #[test]
    fn is_prime_agrees_with_sieve() {
        let limit = 1_000_000usize;
        let mut composite = vec![false; limit + 1];
        for x in 2..=limit {
            if !composite[x] {
                for m in (x * x..=limit).step_by(x) {
                    composite[m] = true;
                }
            }
        }
        for n in 1..=limit {
            let expected = n >= 2 && !composite[n];
            assert_eq!(is_prime(n as u64), expected, "mismatch at {n}");
        }
    }

    #[test]
    fn prime_stream_crosses_sieve_boundary() {
        let first: Vec<u64> = primes().take(10).collect();
        assert_eq!(first, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let mut it = primes().skip_while(|&p| p < SIEVE_LIMIT - 100);
        let below = it.next().unwrap();
        assert!(below < SIEVE_LIMIT);
        let mut beyond = below;
        for p in it.take(30) {
            assert!(p > beyond);
            assert!(is_prime(p));
            beyond = p;
        }
        assert!(beyond > SIEVE_LIMIT);
    }

    #[test]
    fn smallest_prime_factor_matches_factorize() {
        for n in 2..=20_000u64 {
            assert_eq!(smallest_prime_factor(n), factorize(n).factors()[0].0);
        }
        assert_eq!(smallest_prime_factor(1_000_003u64 * 1_000_033), 1_000_003);
    }

    #[test]
    fn checked_product_overflows() {
        assert_eq!(checked_product(&[2, 3, 5], "test").unwrap(), 30);
        assert!(checked_product(&[u64::MAX, 2], "test").is_err());
    }

    #[test]
    fn divisors_examples() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(30), vec![1, 2, 3, 5, 6, 10, 15, 30]);
        for n in 1..=500u64 {
            let ds = divisors(n);
            assert!(ds.iter().all(|&d| n % d == 0));
            assert_eq!(ds.len(), (1..=n).filter(|d| n % d == 0).count());
        }
    }
}
