//! Truncated power series over the exact rationals, and the expansion of
//! `(q;q)_∞^k` for rational exponents `k`.
//!
//! A series of order `N` stores the coefficients of `q^0 .. q^N`. Binary
//! operations truncate to the smaller order of the two operands.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::denom_prediction;
use crate::{Error, Result};

/// Exact rational scalar.
pub type Rat = BigRational;

/// A reduced fraction `a/b` with `b >= 1`, used as a series exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FracExponent {
    a: i64,
    b: u64,
}

impl FracExponent {
    /// Reduces `a/b` to lowest terms. Errors with
    /// [`Error::ZeroDenominator`] when `b = 0`.
    pub fn new(a: i64, b: u64) -> Result<Self> {
        if b == 0 {
            return Err(Error::ZeroDenominator);
        }
        let g = num_integer::gcd(a.unsigned_abs(), b);
        Ok(FracExponent {
            a: a / g as i64,
            b: b / g,
        })
    }

    pub fn numer(self) -> i64 {
        self.a
    }

    pub fn denom(self) -> u64 {
        self.b
    }

    pub fn is_integer(self) -> bool {
        self.b == 1
    }

    pub fn neg(self) -> Self {
        FracExponent { a: -self.a, b: self.b }
    }

    pub fn as_rat(self) -> Rat {
        Rat::new(BigInt::from(self.a), BigInt::from(self.b))
    }

    /// The exact denominator of the coefficient of `q^n` in `(q;q)_∞^k`.
    pub fn denom_prediction(self, n: u64) -> BigUint {
        denom_prediction(self.b, n)
    }
}

impl fmt::Display for FracExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 1 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}/{}", self.a, self.b)
        }
    }
}

impl FromStr for FracExponent {
    type Err = Error;

    /// Parses `"a"` or `"a/b"`.
    fn from_str(s: &str) -> Result<Self> {
        let malformed = || Error::MalformedExponent(s.to_owned());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let a: i64 = num.trim().parse().map_err(|_| malformed())?;
        let b: u64 = match den {
            Some(d) => d.trim().parse().map_err(|_| malformed())?,
            None => 1,
        };
        FracExponent::new(a, b)
    }
}

/// A truncated power series with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<Rat>,
}

impl RationalSeries {
    /// Wraps a coefficient vector; `coeffs[n]` is the coefficient of `q^n`.
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "a series stores at least q^0");
        RationalSeries { coeffs }
    }

    /// The constant series `1 + 0*q + ... + 0*q^order`.
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); order + 1];
        coeffs[0] = Rat::one();
        RationalSeries { coeffs }
    }

    /// Truncation order `N`: coefficients of `q^0 .. q^N` are stored.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Rat {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Copy truncated to `order <= self.order()`.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend by truncation");
        RationalSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }
}

/// Product of two series, truncated to the smaller order.
pub fn series_mul(f: &RationalSeries, g: &RationalSeries) -> RationalSeries {
    let order = f.order().min(g.order());
    let mut coeffs = vec![Rat::zero(); order + 1];
    for i in 0..=order {
        if f.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..=order - i {
            if g.coeffs[j].is_zero() {
                continue;
            }
            coeffs[i + j] += &f.coeffs[i] * &g.coeffs[j];
        }
    }
    RationalSeries { coeffs }
}

/// Multiplicative inverse of `f` to the same order.
///
/// Errors with [`Error::ZeroConstantTerm`] when `f(0) = 0`.
pub fn series_invert(f: &RationalSeries) -> Result<RationalSeries> {
    if f.coeffs[0].is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let order = f.order();
    let c0_inv = f.coeffs[0].recip();
    let mut g = vec![Rat::zero(); order + 1];
    g[0] = c0_inv.clone();
    for n in 1..=order {
        let mut acc = Rat::zero();
        for i in 1..=n {
            if f.coeffs[i].is_zero() || g[n - i].is_zero() {
                continue;
            }
            acc += &f.coeffs[i] * &g[n - i];
        }
        g[n] = -acc * &c0_inv;
    }
    Ok(RationalSeries { coeffs: g })
}

/// `f^e` for integer `e`, by binary exponentiation; negative `e` inverts
/// first and therefore requires a nonzero constant term.
pub fn series_pow_int(f: &RationalSeries, e: i64) -> Result<RationalSeries> {
    if e == 0 {
        return Ok(RationalSeries::one(f.order()));
    }
    let base = if e < 0 { series_invert(f)? } else { f.clone() };
    let mut exp = e.unsigned_abs();
    let mut acc = RationalSeries::one(f.order());
    let mut sq = base;
    loop {
        if exp & 1 == 1 {
            acc = series_mul(&acc, &sq);
        }
        exp >>= 1;
        if exp == 0 {
            return Ok(acc);
        }
        sq = series_mul(&sq, &sq);
    }
}

/// `(q;q)_∞` to order `n`, by Euler's pentagonal number theorem:
/// `sum_{j in Z} (-1)^j q^(j(3j-1)/2)`.
pub fn euler_product(n: usize) -> RationalSeries {
    euler_product_int(n).to_rational()
}

/// The binomial-series coefficient `c_k(n) = prod_{i=0}^{n-1} (a - ib) / (b^n n!)`
/// for `k = a/b`, so that `(1 - x)^k = sum_n (-1)^n c_k(n) x^n`.
pub fn binom_coeff_c(k: FracExponent, n: usize) -> Rat {
    binom_coeff_table(k, n).pop().expect("table is never empty")
}

/// The coefficients `c_k(0) .. c_k(nmax)`, computed by the incremental
/// recurrence `c(n) = c(n-1) * (a - (n-1)b) / (bn)`.
pub fn binom_coeff_table(k: FracExponent, nmax: usize) -> Vec<Rat> {
    c_table_reduced(k, nmax)
        .into_iter()
        .map(|(num, den)| Rat::new(num, BigInt::from(den)))
        .collect()
}

/// Reduced `(numerator, denominator)` pairs for `c_k(0) .. c_k(nmax)`.
///
/// Each pair is kept in lowest terms throughout: the fresh factors
/// `a - (n-1)b` and `bn` fit in a machine word, so cancellation against the
/// running numerator and denominator needs only word-sized gcds.
pub(crate) fn c_table_reduced(k: FracExponent, nmax: usize) -> Vec<(BigInt, BigUint)> {
    let (a, b) = (k.numer() as i128, k.denom() as i128);
    let mut table = Vec::with_capacity(nmax + 1);
    table.push((BigInt::one(), BigUint::one()));
    let mut negative = false;
    let mut num_mag = BigUint::one();
    let mut den = BigUint::one();
    let mut vanished = false;
    for n in 1..=nmax as i128 {
        if !vanished {
            let f = a - (n - 1) * b;
            if f == 0 {
                vanished = true;
            } else {
                let mut fu = u64::try_from(f.unsigned_abs()).expect("factor fits u64");
                let mut g = u64::try_from((b * n).unsigned_abs()).expect("factor fits u64");
                let d = num_integer::gcd(fu, g);
                fu /= d;
                g /= d;
                cancel_into(&mut fu, &mut den);
                cancel_into(&mut g, &mut num_mag);
                num_mag *= fu;
                den *= g;
                negative ^= f < 0;
            }
        }
        if vanished {
            table.push((BigInt::zero(), BigUint::one()));
        } else {
            let sign = if negative {
                num_bigint::Sign::Minus
            } else {
                num_bigint::Sign::Plus
            };
            table.push((BigInt::from_biguint(sign, num_mag.clone()), den.clone()));
        }
    }
    table
}

/// Divides `gcd(*small, *big)` out of both arguments, repeating until they
/// are coprime.
fn cancel_into(small: &mut u64, big: &mut BigUint) {
    while *small > 1 {
        let r = (&*big % *small).to_u64().expect("residue fits u64");
        let g = num_integer::gcd(*small, r);
        if g == 1 {
            return;
        }
        *small /= g;
        *big /= g;
    }
}

/// `(q;q)_∞^k` to order `n` for rational `k = a/b`, as the product over
/// `m = 1 .. n` of the binomial series `(1 - q^m)^k` truncated at order `n`.
///
/// Internally the partial product is held as a vector of integers scaled by
/// the predicted order-`n` denominator `D = b^n * prod_{p|b} p^(ord_p(n!))`:
/// every partial sum of the convolution has denominator dividing `D`, so
/// each multiply-through by a factor's common denominator divides back out
/// exactly.
pub fn eta_pow_fractional(k: FracExponent, n: usize) -> RationalSeries {
    if k.is_integer() {
        let f = euler_product_int(n);
        return int_pow_signed(&f, k.numer()).to_rational();
    }
    let cs = c_table_reduced(k, n);
    let d_total = BigInt::from(denom_prediction(k.denom(), n as u64));
    let mut u = vec![BigInt::zero(); n + 1];
    u[0] = d_total.clone();
    let mut scaled = Vec::new();
    for m in 1..=n {
        let jmax = n / m;
        let e_m = BigInt::from(denom_prediction(k.denom(), jmax as u64));
        scaled.clear();
        scaled.push(e_m.clone());
        for (num, den) in cs.iter().take(jmax + 1).skip(1) {
            let (q, r) = e_m.div_rem(&BigInt::from(den.clone()));
            debug_assert!(r.is_zero(), "factor denominator must divide e_m");
            scaled.push(num * q);
        }
        for i in (m..=n).rev() {
            let mut acc = &u[i] * &e_m;
            for (j, s) in scaled.iter().enumerate().skip(1).take(i / m) {
                if s.is_zero() || u[i - j * m].is_zero() {
                    continue;
                }
                let term = s * &u[i - j * m];
                if j % 2 == 1 {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            let (q, r) = acc.div_rem(&e_m);
            debug_assert!(r.is_zero(), "scaled coefficients must stay integral");
            u[i] = q;
        }
    }
    RationalSeries {
        coeffs: u
            .into_iter()
            .map(|num| Rat::new(num, d_total.clone()))
            .collect(),
    }
}

/// A truncated power series with integer coefficients.
///
/// Integer powers of `(q;q)_∞` and all modular forms in this crate have
/// integer coefficients; this type avoids per-operation rational
/// normalization for them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series stores at least q^0");
        IntSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = BigInt::one();
        IntSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend by truncation");
        IntSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn mul(&self, other: &IntSeries) -> IntSeries {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigInt::zero(); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        IntSeries { coeffs }
    }

    pub fn pow(&self, e: u32) -> IntSeries {
        if e == 0 {
            return IntSeries::one(self.order());
        }
        let mut acc = IntSeries::one(self.order());
        let mut sq = self.clone();
        let mut exp = e;
        loop {
            if exp & 1 == 1 {
                acc = acc.mul(&sq);
            }
            exp >>= 1;
            if exp == 0 {
                return acc;
            }
            sq = sq.mul(&sq);
        }
    }

    /// Inverse of a series with constant term `±1` (the only units whose
    /// inverse stays integral).
    pub fn invert(&self) -> Result<IntSeries> {
        if self.coeffs[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        assert!(
            self.coeffs[0].magnitude().is_one(),
            "integer series inversion requires constant term ±1"
        );
        let order = self.order();
        let c0 = self.coeffs[0].clone();
        let mut g = vec![BigInt::zero(); order + 1];
        g[0] = c0.clone();
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for i in 1..=n {
                if self.coeffs[i].is_zero() || g[n - i].is_zero() {
                    continue;
                }
                acc += &self.coeffs[i] * &g[n - i];
            }
            g[n] = -acc * &c0;
        }
        Ok(IntSeries { coeffs: g })
    }

    pub fn to_rational(&self) -> RationalSeries {
        RationalSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect(),
        }
    }
}

fn int_pow_signed(f: &IntSeries, e: i64) -> IntSeries {
    if e >= 0 {
        f.pow(u32::try_from(e).expect("exponent fits u32"))
    } else {
        f.invert()
            .expect("Euler product has unit constant term")
            .pow(u32::try_from(-e).expect("exponent fits u32"))
    }
}

/// `(q;q)_∞` to order `n` with integer coefficients.
pub fn euler_product_int(n: usize) -> IntSeries {
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = BigInt::one();
    let mut j = 1u64;
    loop {
        let g1 = (j * (3 * j - 1) / 2) as usize;
        if g1 > n {
            break;
        }
        let sign = if j % 2 == 1 { -1 } else { 1 };
        coeffs[g1] += sign;
        let g2 = (j * (3 * j + 1) / 2) as usize;
        if g2 <= n {
            coeffs[g2] += sign;
        }
        j += 1;
    }
    IntSeries { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> Rat {
        Rat::new(BigInt::from(a), BigInt::from(b))
    }

    fn k(a: i64, b: u64) -> FracExponent {
        FracExponent::new(a, b).unwrap()
    }

    #[test]
    fn frac_exponent_reduces() {
        assert_eq!(k(2, 4), k(1, 2));
        assert_eq!(k(-6, 9), k(-2, 3));
        assert_eq!(k(0, 5), k(0, 1));
        assert_eq!(k(24, 1).to_string(), "24");
        assert_eq!(k(-1, 2).to_string(), "-1/2");
        assert_eq!(FracExponent::new(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn frac_exponent_parses() {
        assert_eq!("1/2".parse::<FracExponent>().unwrap(), k(1, 2));
        assert_eq!("-3/4".parse::<FracExponent>().unwrap(), k(-3, 4));
        assert_eq!("24".parse::<FracExponent>().unwrap(), k(24, 1));
        assert_eq!(" -2 / 6 ".parse::<FracExponent>().unwrap(), k(-1, 3));
        assert!("1/0".parse::<FracExponent>().is_err());
        assert!("x".parse::<FracExponent>().is_err());
    }

    #[test]
    fn euler_product_pentagonal_signs() {
        let f = euler_product(26);
        let expected: &[(usize, i64)] = &[
            (0, 1),
            (1, -1),
            (2, -1),
            (5, 1),
            (7, 1),
            (12, -1),
            (15, -1),
            (22, 1),
            (26, 1),
        ];
        let mut nonzero = 0;
        for n in 0..=26 {
            let want = expected
                .iter()
                .find(|&&(m, _)| m == n)
                .map_or(0, |&(_, v)| v);
            assert_eq!(f.coeff(n), &rat(want, 1), "n = {n}");
            if want != 0 {
                nonzero += 1;
            }
        }
        assert_eq!(nonzero, 9);
    }

    #[test]
    fn inversion_gives_partition_numbers() {
        let p = series_invert(&euler_product(20)).unwrap();
        let expected = [
            1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385,
            490, 627,
        ];
        for (n, want) in expected.iter().enumerate() {
            assert_eq!(p.coeff(n), &rat(*want, 1), "p({n})");
        }
    }

    #[test]
    fn inversion_requires_unit() {
        let mut coeffs = vec![Rat::zero(); 4];
        coeffs[1] = Rat::one();
        let f = RationalSeries::new(coeffs);
        assert_eq!(series_invert(&f), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn mul_truncates_to_smaller_order() {
        let f = euler_product(10);
        let g = euler_product(6);
        assert_eq!(series_mul(&f, &g).order(), 6);
    }

    #[test]
    fn pow_int_agrees_with_repeated_mul() {
        let f = euler_product(15);
        let mut byhand = RationalSeries::one(15);
        for _ in 0..5 {
            byhand = series_mul(&byhand, &f);
        }
        assert_eq!(series_pow_int(&f, 5).unwrap(), byhand);
        let inv = series_invert(&f).unwrap();
        assert_eq!(
            series_pow_int(&f, -3).unwrap(),
            series_pow_int(&inv, 3).unwrap()
        );
        assert_eq!(series_pow_int(&f, 0).unwrap(), RationalSeries::one(15));
    }

    #[test]
    fn binomial_coefficients_match_direct_product() {
        for (a, b) in [(1i64, 2u64), (-1, 3), (5, 3), (-7, 4), (3, 1)] {
            let kk = FracExponent::new(a, b).unwrap();
            let table = binom_coeff_table(kk, 12);
            for (n, got) in table.iter().enumerate() {
                let mut num = Rat::one();
                for i in 0..n as i64 {
                    num *= rat(kk.numer() - i * kk.denom() as i64, 1);
                }
                let mut den = Rat::one();
                for i in 1..=n as i64 {
                    den *= rat(kk.denom() as i64 * i, 1);
                }
                assert_eq!(got, &(num / den), "k = {kk}, n = {n}");
            }
            assert_eq!(&binom_coeff_c(kk, 12), table.last().unwrap());
        }
    }

    #[test]
    fn binomial_coefficients_terminate_for_positive_integer_k() {
        let table = binom_coeff_table(k(3, 1), 6);
        assert_eq!(table[0], rat(1, 1));
        assert_eq!(table[1], rat(3, 1));
        assert_eq!(table[2], rat(3, 1));
        assert_eq!(table[3], rat(1, 1));
        assert!(table[4..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn half_power_expansion() {
        let f = eta_pow_fractional(k(1, 2), 10);
        let expected = [
            (1, 1),
            (-1, 2),
            (-5, 8),
            (-5, 16),
            (-45, 128),
            (33, 256),
            (-209, 1024),
            (755, 2048),
            (1155, 32768),
            (15045, 65536),
            (45077, 262144),
        ];
        for (n, (num, den)) in expected.iter().enumerate() {
            assert_eq!(f.coeff(n), &rat(*num, *den), "n = {n}");
        }
    }

    #[test]
    fn third_power_expansion() {
        let f = eta_pow_fractional(k(1, 3), 10);
        let expected = [
            (1, 1),
            (-1, 3),
            (-4, 9),
            (-23, 81),
            (-82, 243),
            (-34, 729),
            (-1711, 6561),
            (2254, 19683),
            (-5117, 59049),
            (124025, 1594323),
            (183415, 4782969),
        ];
        for (n, (num, den)) in expected.iter().enumerate() {
            assert_eq!(f.coeff(n), &rat(*num, *den), "n = {n}");
        }
    }

    #[test]
    fn negative_half_power_expansion() {
        let f = eta_pow_fractional(k(-1, 2), 10);
        let expected = [
            (1, 1),
            (1, 2),
            (7, 8),
            (17, 16),
            (203, 128),
            (455, 256),
            (2723, 1024),
            (6001, 2048),
            (133107, 32768),
            (312011, 65536),
            (1613529, 262144),
        ];
        for (n, (num, den)) in expected.iter().enumerate() {
            assert_eq!(f.coeff(n), &rat(*num, *den), "n = {n}");
        }
    }

    #[test]
    fn integer_exponents_match_direct_powers() {
        for e in [-3i64, -1, 0, 1, 2, 24] {
            let via_frac = eta_pow_fractional(k(e, 1), 18);
            let direct = series_pow_int(&euler_product(18), e).unwrap();
            assert_eq!(via_frac, direct, "e = {e}");
        }
    }

    #[test]
    fn square_of_half_power_is_euler_product() {
        let half = eta_pow_fractional(k(1, 2), 40);
        assert_eq!(series_mul(&half, &half), euler_product(40));
    }

    #[test]
    fn exponent_additivity_across_denominators() {
        let f = eta_pow_fractional(k(1, 3), 30);
        let g = eta_pow_fractional(k(2, 3), 30);
        assert_eq!(series_mul(&f, &g), euler_product(30));
        let h = eta_pow_fractional(k(-1, 2), 30);
        let t = eta_pow_fractional(k(5, 2), 30);
        assert_eq!(
            series_mul(&h, &t),
            series_pow_int(&euler_product(30), 2).unwrap()
        );
    }

    #[test]
    fn denominators_match_prediction() {
        for (a, b) in [(1i64, 2u64), (-1, 2), (1, 3), (-2, 3), (3, 4), (-2, 5)] {
            let kk = FracExponent::new(a, b).unwrap();
            let f = eta_pow_fractional(kk, 30);
            for n in 0..=30u64 {
                assert_eq!(
                    f.coeff(n as usize).denom().magnitude(),
                    &kk.denom_prediction(n),
                    "k = {kk}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn int_series_ops() {
        let f = euler_product_int(20);
        assert_eq!(f.to_rational(), euler_product(20));
        let p = f.invert().unwrap();
        assert_eq!(p.coeff(20), &BigInt::from(627));
        assert_eq!(f.pow(2).mul(&f), f.pow(3));
        assert_eq!(f.pow(0), IntSeries::one(20));
    }
}
