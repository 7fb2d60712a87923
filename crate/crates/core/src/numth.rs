//! Exact integer arithmetic the matrix constructions are built on.
//!
//! Everything below 2^64 takes a `u64` fast path with `u128` products.
//! Values that can exceed that width (Mersenne numbers, matrix entries)
//! go through [`Natural`], an arbitrary-precision unsigned integer.
//! Nothing in here wraps silently.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// 2-adic valuation.
pub fn v2(x: u64) -> Result<u32> {
    if x == 0 {
        return Err(Error::Zero { op: "v2" });
    }
    Ok(x.trailing_zeros())
}

pub fn odd_part(x: u64) -> Result<u64> {
    Ok(x >> v2(x)?)
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` for `m >= 1`, no validation.
#[inline]
pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// `base^exp mod modulus` by square-and-multiply.
pub fn mod_pow_u64(base: u64, exp: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::Zero { op: "mod_pow" });
    }
    Ok(pow_mod(base, exp, modulus))
}

/// Arbitrary-precision `base^exp mod modulus`.
pub fn mod_pow(base: &Natural, exp: &Natural, modulus: &Natural) -> Result<Natural> {
    if modulus.is_zero() {
        return Err(Error::Zero { op: "mod_pow" });
    }
    Ok(base.modpow(exp, modulus))
}

fn require_odd(op: &'static str, a: u64) -> Result<()> {
    if a == 0 {
        return Err(Error::Zero { op });
    }
    if a.is_multiple_of(2) {
        return Err(Error::Even { op, value: a });
    }
    Ok(())
}

/// Multiplicative order of 2 modulo an odd `a`, by repeated doubling.
///
/// Takes `ord2(a)` steps. `ord2(1)` is 1 by convention (the 1x1 matrix of
/// `f_1`). This is the reference implementation; [`ord2_fast`] must agree
/// with it everywhere.
pub fn ord2(a: u64) -> Result<u64> {
    require_odd("ord2", a)?;
    if a == 1 {
        return Ok(1);
    }
    let mut x = 2 % a;
    let mut n = 1u64;
    while x != 1 {
        x <<= 1;
        if x >= a {
            x -= a;
        }
        n += 1;
    }
    Ok(n)
}

/// Multiplicative order of 2 modulo an odd `a` from the factorization of
/// the Carmichael function λ(a). Logarithmic in `a` once `a` is factored.
pub fn ord2_fast(a: u64) -> Result<u64> {
    require_odd("ord2_fast", a)?;
    if a == 1 {
        return Ok(1);
    }
    let mut lambda = 1u64;
    let mut lambda_primes: Vec<u64> = Vec::new();
    for (p, k) in factorize_u64(a) {
        // λ(p^k) = p^(k-1) (p - 1) for odd p
        let mut part = p - 1;
        let mut part_primes: Vec<u64> = factorize_u64(p - 1).into_iter().map(|(q, _)| q).collect();
        if k > 1 {
            part *= p.pow(k - 1);
            part_primes.push(p);
        }
        lambda = lambda.lcm(&part);
        lambda_primes.extend(part_primes);
    }
    lambda_primes.sort_unstable();
    lambda_primes.dedup();
    Ok(order_of_two_dividing(a, lambda, &lambda_primes))
}

/// Reduce a known multiple of `ord2(a)` down to the order itself.
/// `primes` must contain every prime dividing `multiple`.
pub fn order_of_two_dividing(a: u64, multiple: u64, primes: &[u64]) -> u64 {
    debug_assert_eq!(pow_mod(2, multiple, a), 1 % a);
    let mut order = multiple;
    for &q in primes {
        while order.is_multiple_of(q) && pow_mod(2, order / q, a) == 1 % a {
            order /= q;
        }
    }
    order
}

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn strong_probable_prime(n: u64, d: u64, s: u32, base: u64) -> bool {
    let mut x = pow_mod(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for all of `u64` (Miller–Rabin with the first
/// twelve prime bases, which has no strong pseudoprimes below 3.1·10^23).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 97 * 97 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    SMALL_PRIMES[..12]
        .iter()
        .all(|&b| strong_probable_prime(n, d, s, b))
}

/// Primality for arbitrary width. Deterministic below 3.3·10^24 (which
/// covers every Mersenne number up to 2^81); a 25-base strong test beyond.
pub fn is_prime_natural(n: &Natural) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = Natural::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &b in &SMALL_PRIMES {
        let mut x = Natural::from(b).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Fermat test to base 2: `2^(n-1) ≡ 1 (mod n)`.
pub fn fermat_base2_holds(n: u64) -> Result<bool> {
    require_odd("fermat_base2_holds", n)?;
    if n < 3 {
        return Err(Error::TooSmall {
            op: "fermat_base2_holds",
            value: n,
            min: 3,
        });
    }
    Ok(pow_mod(2, n - 1, n) == 1)
}

/// Lucas–Lehmer: is `2^p - 1` prime, for an odd prime `p`.
pub fn lucas_lehmer(p: u64) -> Result<bool> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let bits = p as usize;
    let m = (Natural::one() << bits) - 1u32;
    let mut s = Natural::from(4u32);
    for _ in 0..p - 2 {
        s = &s * &s + &m - 2u32;
        // x mod (2^p - 1) = (x & m) + (x >> p), applied until it fits
        while s.bits() > p {
            s = (&s & &m) + (&s >> bits);
        }
        if s == m {
            s.set_zero();
        }
    }
    Ok(s.is_zero())
}

/// A complete prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub base: Natural,
    /// `(prime, exponent)` with primes strictly increasing.
    pub factors: Vec<(Natural, u32)>,
}

impl Factorization {
    pub fn product(&self) -> Natural {
        self.factors
            .iter()
            .fold(Natural::one(), |acc, (p, k)| acc * p.pow(*k))
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<Natural> {
        let mut divs = vec![Natural::one()];
        for (p, k) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (*k as usize + 1));
            for d in &divs {
                let mut power = d.clone();
                next.push(power.clone());
                for _ in 0..*k {
                    power *= p;
                    next.push(power.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }

    pub fn primes(&self) -> impl Iterator<Item = &Natural> {
        self.factors.iter().map(|(p, _)| p)
    }
}

/// Default Pollard-rho iteration budget per cofactor.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 24;

pub fn factorize(n: &Natural) -> Result<Factorization> {
    factorize_with_budget(n, DEFAULT_RHO_BUDGET)
}

/// Trial division by small primes, then Brent's variant of Pollard rho on
/// whatever is left. Fails with [`Error::FactorizationTimeout`] when a
/// composite cofactor survives `budget` iterations across all attempts.
pub fn factorize_with_budget(n: &Natural, budget: u64) -> Result<Factorization> {
    if n < &Natural::from(2u32) {
        return Err(Error::TooSmall {
            op: "factorize",
            value: n.to_u64().unwrap_or(0),
            min: 2,
        });
    }
    let mut primes: Vec<Natural> = Vec::new();
    let mut rest = n.clone();
    for &p in &SMALL_PRIMES {
        while (&rest % p).is_zero() {
            primes.push(Natural::from(p));
            rest /= p;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            for (p, k) in factorize_u64(small) {
                primes.extend(std::iter::repeat_n(Natural::from(p), k as usize));
            }
            continue;
        }
        if is_prime_natural(&m) {
            primes.push(m);
            continue;
        }
        let d = rho_natural(&m, budget).ok_or_else(|| Error::FactorizationTimeout {
            cofactor: m.clone(),
            iterations: budget,
        })?;
        stack.push(&m / &d);
        stack.push(d);
    }
    primes.sort();
    let mut factors: Vec<(Natural, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization {
        base: n.clone(),
        factors,
    })
}

/// Factorization of a machine word, `(prime, exponent)` ascending.
/// Returns an empty list for 0 and 1.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    if n < 2 {
        return Vec::new();
    }
    for &p in &SMALL_PRIMES {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = rho_u64(m);
        stack.push(m / d);
        stack.push(d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// A nontrivial factor of an odd composite `n` with no prime factor below 100.
fn rho_u64(n: u64) -> u64 {
    // a composite u64 always has a factor below 2^32, so this terminates
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn rho_natural(n: &Natural, budget: u64) -> Option<Natural> {
    const ATTEMPTS: u64 = 8;
    let per_attempt = (budget / ATTEMPTS).max(1);
    for c in 1..=ATTEMPTS {
        let c = Natural::from(c);
        let f = |x: &Natural| (x * x + &c) % n;
        let diff = |a: &Natural, b: &Natural| if a > b { a - b } else { b - a };
        let mut y = Natural::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = Natural::one();
        let mut g = Natural::one();
        let mut r = 1u64;
        let mut spent = 0u64;
        const BATCH: u64 = 64;
        while g.is_one() && spent < per_attempt {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    q = (&q * diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            spent += 2 * r;
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(x: u64) -> Natural {
        Natural::from(x)
    }

    #[test]
    fn valuation_and_odd_part() {
        assert_eq!(v2(24).unwrap(), 3);
        assert_eq!(v2(1).unwrap(), 0);
        assert_eq!(v2(2048).unwrap(), 11);
        assert_eq!(odd_part(24).unwrap(), 3);
        assert_eq!(odd_part(7).unwrap(), 7);
        assert_eq!(odd_part(342).unwrap(), 171);
        assert!(v2(0).is_err());
        assert!(odd_part(0).is_err());
    }

    #[test]
    fn modular_power() {
        assert_eq!(mod_pow_u64(2, 10, 341).unwrap(), 1);
        assert_eq!(mod_pow_u64(2, 1, 1).unwrap(), 0);
        assert_eq!(mod_pow_u64(2, 11, 2047).unwrap(), 1);
        assert!(mod_pow_u64(2, 3, 0).is_err());
        assert_eq!(mod_pow(&nat(2), &nat(10), &nat(341)).unwrap(), nat(1));
        assert!(mod_pow(&nat(2), &nat(10), &nat(0)).is_err());
    }

    #[test]
    fn order_of_two() {
        assert_eq!(ord2(3).unwrap(), 2);
        assert_eq!(ord2(341).unwrap(), 10);
        assert_eq!(ord2(1).unwrap(), 1);
        assert_eq!(ord2(4371).unwrap(), 230);
        assert_eq!(ord2(1_999_999).unwrap(), 6440);
        assert!(matches!(ord2(4), Err(Error::Even { .. })));
        assert!(matches!(ord2(0), Err(Error::Zero { .. })));
    }

    #[test]
    fn fast_order_matches_doubling() {
        for a in (1..20_000u64).step_by(2) {
            assert_eq!(ord2_fast(a).unwrap(), ord2(a).unwrap(), "a = {a}");
        }
    }

    #[test]
    fn primality() {
        assert!(is_prime(23));
        assert!(!is_prime(341));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime(18_446_744_073_709_551_557));
        let m61 = (Natural::one() << 61usize) - 1u32;
        assert!(is_prime_natural(&m61));
        let m67 = (Natural::one() << 67usize) - 1u32;
        assert!(!is_prime_natural(&m67));
        let m89 = (Natural::one() << 89usize) - 1u32;
        assert!(is_prime_natural(&m89));
    }

    #[test]
    fn fermat_base_two() {
        assert!(fermat_base2_holds(341).unwrap());
        assert!(!fermat_base2_holds(9).unwrap());
        assert!(fermat_base2_holds(7).unwrap());
        assert!(fermat_base2_holds(8).is_err());
        assert!(fermat_base2_holds(1).is_err());
    }

    #[test]
    fn lucas_lehmer_small() {
        assert!(lucas_lehmer(13).unwrap());
        assert!(!lucas_lehmer(11).unwrap());
        assert!(!lucas_lehmer(23).unwrap());
        assert!(lucas_lehmer(61).unwrap());
        assert!(lucas_lehmer(127).unwrap());
        assert!(matches!(lucas_lehmer(9), Err(Error::NotOddPrime(9))));
        assert!(lucas_lehmer(2).is_err());
    }

    #[test]
    fn lucas_lehmer_agrees_with_primality() {
        for p in (3..=61u64).filter(|&p| is_prime(p)) {
            let m = (1u64 << p) - 1;
            assert_eq!(lucas_lehmer(p).unwrap(), is_prime(m), "p = {p}");
        }
    }

    #[test]
    fn factorization_examples() {
        let f = factorize(&nat(2047)).unwrap();
        assert_eq!(f.factors, vec![(nat(23), 1), (nat(89), 1)]);
        let f = factorize(&nat(8)).unwrap();
        assert_eq!(f.factors, vec![(nat(2), 3)]);
        let f = factorize(&nat(262_143)).unwrap();
        assert_eq!(
            f.factors,
            vec![(nat(3), 3), (nat(7), 1), (nat(19), 1), (nat(73), 1)]
        );
        assert!(factorize(&nat(1)).is_err());
        assert!(factorize(&nat(0)).is_err());
    }

    #[test]
    fn factorization_beyond_word_size() {
        // 2^67 - 1 = 193707721 * 761838257287
        let m67 = (Natural::one() << 67usize) - 1u32;
        let f = factorize(&m67).unwrap();
        assert_eq!(
            f.factors,
            vec![(nat(193_707_721), 1), (nat(761_838_257_287), 1)]
        );
        let m80 = (Natural::one() << 80usize) - 1u32;
        let f = factorize(&m80).unwrap();
        assert_eq!(f.product(), m80);
        assert!(f.primes().all(is_prime_natural));
    }

    #[test]
    fn factorization_timeout_is_distinct() {
        // product of two 40-bit primes cannot be split in 16 iterations
        let n = nat(1_099_511_627_791) * nat(1_099_511_628_401);
        match factorize_with_budget(&n, 16) {
            Err(Error::FactorizationTimeout { cofactor, .. }) => assert_eq!(cofactor, n),
            other => panic!("expected timeout, got {other:?}"),
        }
    }

    #[test]
    fn divisors_ascending() {
        let f = factorize(&nat(12)).unwrap();
        let d: Vec<u64> = f.divisors().iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }
}
