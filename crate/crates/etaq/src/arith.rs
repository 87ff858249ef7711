//! Integer helpers: primality, p-adic valuations, Legendre symbols, divisor
//! sums, and modular inverses.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::{Error, Result};

/// Deterministic Miller-Rabin over the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set decides primality for every n < 3.3e24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
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

/// All primes `<= n`, by sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Prime factorization of `n >= 1` as `(prime, exponent)` pairs in
/// increasing prime order.
pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "prime_factors requires n >= 1");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `(a * b) mod m` without overflow.
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by binary exponentiation.
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

/// The exponent of the prime `p` in `n`, i.e. the `p`-adic valuation.
///
/// Errors with [`Error::UndefinedValuation`] when `n = 0`.
pub fn ord_p(n: &BigInt, p: u64) -> Result<u64> {
    debug_assert!(is_prime(p), "ord_p requires a prime");
    if n.is_zero() {
        return Err(Error::UndefinedValuation);
    }
    let p = BigUint::from(p);
    let mut m = n.magnitude().clone();
    let mut ord = 0u64;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&m, &p);
        if !r.is_zero() {
            return Ok(ord);
        }
        m = q;
        ord += 1;
    }
}

/// [`ord_p`] for machine integers.
pub fn ord_p_u64(n: u64, p: u64) -> Result<u64> {
    debug_assert!(is_prime(p), "ord_p requires a prime");
    if n == 0 {
        return Err(Error::UndefinedValuation);
    }
    let mut n = n;
    let mut ord = 0u64;
    while n % p == 0 {
        n /= p;
        ord += 1;
    }
    Ok(ord)
}

/// The exponent of `p` in `n!`, by Legendre's formula
/// `sum_{t >= 1} floor(n / p^t)`.
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    debug_assert!(is_prime(p), "factorial_valuation requires a prime");
    let mut total = 0u64;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// The exact denominator of the coefficient of `q^n` in `(q;q)_∞^(a/b)`
/// (in lowest terms, `gcd(a, b) = 1`): `b^n * prod_{p | b} p^(ord_p(n!))`.
///
/// Only `b` enters the prediction; the numerator `a` is coprime to `b` and
/// cannot cancel any of these factors.
pub fn denom_prediction(b: u64, n: u64) -> BigUint {
    assert!(b >= 1, "denominator must be positive");
    let mut d = BigUint::from(b).pow(u32::try_from(n).expect("order fits u32"));
    for (p, _) in prime_factors(b) {
        d *= BigUint::from(p).pow(
            u32::try_from(factorial_valuation(n, p)).expect("valuation fits u32"),
        );
    }
    d
}

/// The Legendre symbol `(a | ell)` for an odd prime `ell`, by Euler's
/// criterion: `a^((ell-1)/2) mod ell`, read as `0`, `1`, or `-1`.
pub fn legendre_symbol(a: i64, ell: u64) -> Result<i32> {
    if ell == 2 || !is_prime(ell) {
        return Err(Error::NotOddPrime(ell));
    }
    let r = a.rem_euclid(ell as i64) as u64;
    if r == 0 {
        return Ok(0);
    }
    let e = mod_pow(r, (ell - 1) / 2, ell);
    if e == 1 {
        Ok(1)
    } else {
        debug_assert_eq!(e, ell - 1);
        Ok(-1)
    }
}

/// `sigma_3(n)`: the sum of the cubes of the divisors of `n >= 1`.
pub fn sigma3(n: u64) -> u64 {
    divisor_power_sum(n, 3)
}

/// `sigma_5(n)`: the sum of the fifth powers of the divisors of `n >= 1`.
pub fn sigma5(n: u64) -> u64 {
    divisor_power_sum(n, 5)
}

fn divisor_power_sum(n: u64, e: u32) -> u64 {
    assert!(n >= 1, "divisor sums require n >= 1");
    let mut total = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += d.pow(e);
            let c = n / d;
            if c != d {
                total += c.pow(e);
            }
        }
        d += 1;
    }
    total
}

/// The inverse of `x` modulo `m >= 2`, via the extended Euclidean algorithm.
///
/// Errors with [`Error::NotInvertible`] when `gcd(x, m) > 1`.
pub fn mod_inverse(x: u64, m: u64) -> Result<u64> {
    assert!(m >= 2, "modulus must be at least 2");
    let x = x % m;
    let (mut r0, mut r1) = (m as i128, x as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible { value: x, modulus: m });
    }
    Ok(t0.rem_euclid(m as i128) as u64)
}

/// A prime-power modulus `ell^s` with `s >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    prime: u64,
    exponent: u32,
    modulus: u64,
}

impl PrimePower {
    /// Errors with [`Error::NotPrime`] unless `prime` is prime.
    /// Panics if `ell^s` overflows `u64`.
    pub fn new(prime: u64, exponent: u32) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        assert!(exponent >= 1, "exponent must be at least 1");
        let modulus = prime
            .checked_pow(exponent)
            .expect("prime power overflows u64");
        Ok(PrimePower { prime, exponent, modulus })
    }

    pub fn prime(self) -> u64 {
        self.prime
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }
}

impl std::fmt::Display for PrimePower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.prime)
        } else {
            write!(f, "{}^{}", self.prime, self.exponent)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        let sieve = primes_up_to(2000);
        for n in 0..=2000u64 {
            assert_eq!(is_prime(n), sieve.contains(&n), "n = {n}");
        }
    }

    #[test]
    fn primality_handles_strong_pseudoprimes() {
        // Strong pseudoprime to bases 2, 3, 5, and 7.
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime(2_147_483_649));
        assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
    }

    #[test]
    fn prime_factors_reassemble() {
        for n in 1..=500u64 {
            let product: u64 = prime_factors(n)
                .iter()
                .map(|&(p, e)| p.pow(e))
                .product();
            assert_eq!(product, n);
        }
        assert_eq!(prime_factors(16_308_864), vec![(2, 7), (3, 4), (11, 2), (13, 1)]);
    }

    #[test]
    fn valuations() {
        let n = BigInt::from(16_308_864i64) * BigInt::from(289);
        assert_eq!(ord_p(&n, 17).unwrap(), 2);
        assert_eq!(ord_p(&BigInt::from(203), 2).unwrap(), 0);
        assert_eq!(ord_p(&BigInt::from(-16744), 7).unwrap(), 1);
        assert_eq!(ord_p(&BigInt::from(0), 5), Err(Error::UndefinedValuation));
        assert_eq!(ord_p_u64(48, 2).unwrap(), 4);
        assert_eq!(ord_p_u64(0, 2), Err(Error::UndefinedValuation));
    }

    #[test]
    fn factorial_valuations() {
        assert_eq!(factorial_valuation(100, 5), 24);
        assert_eq!(factorial_valuation(10, 3), 4);
        assert_eq!(factorial_valuation(4, 5), 0);
        // Direct count of factors of 2 in 20!.
        let direct: u64 = (1..=20u64).map(|m| ord_p_u64(m, 2).unwrap()).sum();
        assert_eq!(factorial_valuation(20, 2), direct);
    }

    #[test]
    fn denominator_prediction_small_cases() {
        // b = 2, n = 3: 2^3 * 2^(ord_2(3!)) = 8 * 2 = 16.
        assert_eq!(denom_prediction(2, 3), BigUint::from(16u64));
        // b = 6, n = 2: 6^2 * 2^(ord_2(2!)) * 3^(ord_3(2!)) = 36 * 2 = 72.
        assert_eq!(denom_prediction(6, 2), BigUint::from(72u64));
        assert_eq!(denom_prediction(3, 0), BigUint::from(1u64));
    }

    #[test]
    fn legendre_symbols() {
        assert_eq!(legendre_symbol(3, 5).unwrap(), -1);
        assert_eq!(legendre_symbol(4, 5).unwrap(), 1);
        assert_eq!(legendre_symbol(10, 5).unwrap(), 0);
        assert_eq!(legendre_symbol(-1, 7).unwrap(), -1);
        assert_eq!(legendre_symbol(-1, 13).unwrap(), 1);
        assert_eq!(legendre_symbol(2, 17).unwrap(), 1);
        assert_eq!(legendre_symbol(3, 2), Err(Error::NotOddPrime(2)));
        assert_eq!(legendre_symbol(3, 15), Err(Error::NotOddPrime(15)));
    }

    #[test]
    fn legendre_counts_residues() {
        // Exactly (ell - 1) / 2 nonzero residues are squares.
        for ell in [3u64, 5, 7, 11, 13, 31] {
            let squares: i64 = (1..ell)
                .map(|a| legendre_symbol(a as i64, ell).unwrap() as i64)
                .sum();
            assert_eq!(squares, 0);
        }
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(sigma3(1), 1);
        assert_eq!(sigma3(6), 252);
        assert_eq!(sigma3(7), 344);
        assert_eq!(sigma5(1), 1);
        assert_eq!(sigma5(2), 33);
        assert_eq!(sigma5(4), 1057);
    }

    #[test]
    fn modular_inverses() {
        for m in [7u64, 25, 289, 2401] {
            for x in 1..m {
                match mod_inverse(x, m) {
                    Ok(y) => assert_eq!(mul_mod(x, y, m), 1, "x = {x}, m = {m}"),
                    Err(_) => assert!(num_integer::gcd(x, m) > 1),
                }
            }
        }
        assert_eq!(
            mod_inverse(5, 25),
            Err(Error::NotInvertible { value: 5, modulus: 25 })
        );
    }

    #[test]
    fn prime_power_construction() {
        let m = PrimePower::new(17, 2).unwrap();
        assert_eq!(m.prime(), 17);
        assert_eq!(m.exponent(), 2);
        assert_eq!(m.modulus(), 289);
        assert_eq!(m.to_string(), "17^2");
        assert_eq!(PrimePower::new(7, 1).unwrap().to_string(), "7");
        assert_eq!(PrimePower::new(15, 1), Err(Error::NotPrime(15)));
    }
}
