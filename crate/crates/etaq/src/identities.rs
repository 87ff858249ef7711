//! Closed-form expansions of `(q;q)_∞^d` for
//! `d ∈ {1, 3, 4, 6, 8, 10, 14, 26}`, and their verification against the
//! direct power of the Euler product.
//!
//! Each expansion is a finite combination of theta-style lattice sums, so a
//! coefficient of `q^n` only receives contributions from lattice points
//! inside a window of side `O(sqrt(n))`. Windows carry a safety margin and
//! are checked by a stability test: widening the window must not change the
//! result.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::qseries::{euler_product_int, IntSeries, Rat};
use crate::{Error, Result, VerificationReport};

/// The exponents with a closed-form expansion.
pub const SUPPORTED_D: [u32; 8] = [1, 3, 4, 6, 8, 10, 14, 26];

/// `binom(12, 2t)` for `t = 0 .. 6`.
const EVEN_BINOMIALS_12: [i128; 7] = [1, 66, 495, 924, 495, 66, 1];

/// The expansion of `(q;q)_∞^d` produced by a closed-form identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaPowerExpansion {
    d: u32,
    coeffs: Vec<BigInt>,
}

impl EtaPowerExpansion {
    pub fn d(&self) -> u32 {
        self.d
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
}

/// Expands `(q;q)_∞^d` to order `n` via the closed form for `d`.
///
/// Errors with [`Error::UnsupportedD`] when `d` has no closed form here.
pub fn expand_eta(d: u32, n: usize) -> Result<EtaPowerExpansion> {
    match d {
        1 => Ok(expand_eta_1(n)),
        3 => Ok(expand_eta_3(n)),
        4 => Ok(expand_eta_4(n)),
        6 => Ok(expand_eta_6(n)),
        8 => expand_eta_8(n),
        10 => expand_eta_10(n),
        14 => expand_eta_14(n),
        26 => expand_eta_26(n),
        _ => Err(Error::UnsupportedD(d)),
    }
}

/// Euler: `sum_{j in Z} (-1)^j q^(j(3j-1)/2)`.
pub fn expand_eta_1(n: usize) -> EtaPowerExpansion {
    EtaPowerExpansion {
        d: 1,
        coeffs: euler_product_int(n).coeffs().to_vec(),
    }
}

/// Jacobi: `sum_{j >= 0} (-1)^j (2j+1) q^(j(j+1)/2)`.
pub fn expand_eta_3(n: usize) -> EtaPowerExpansion {
    let mut coeffs = vec![BigInt::zero(); n + 1];
    let mut j = 0u64;
    loop {
        let e = (j * (j + 1) / 2) as usize;
        if e > n {
            break;
        }
        let term = (2 * j + 1) as i64 * if j % 2 == 1 { -1 } else { 1 };
        coeffs[e] += term;
        j += 1;
    }
    EtaPowerExpansion { d: 3, coeffs }
}

/// Product of the `d = 1` and `d = 3` expansions.
pub fn expand_eta_4(n: usize) -> EtaPowerExpansion {
    let product = IntSeries::new(expand_eta_1(n).coeffs)
        .mul(&IntSeries::new(expand_eta_3(n).coeffs));
    EtaPowerExpansion {
        d: 4,
        coeffs: product.coeffs().to_vec(),
    }
}

/// `sum_{i,j >= 0} (-1)^(i+j) (2i+1)(2j+1) q^(i(i+1)/2 + j(j+1)/2)`.
pub fn expand_eta_6(n: usize) -> EtaPowerExpansion {
    let mut coeffs = vec![BigInt::zero(); n + 1];
    let mut i = 0u64;
    while (i * (i + 1) / 2) as usize <= n {
        let ei = (i * (i + 1) / 2) as usize;
        let wi = (2 * i + 1) as i64 * if i % 2 == 1 { -1 } else { 1 };
        let mut j = 0u64;
        loop {
            let e = ei + (j * (j + 1) / 2) as usize;
            if e > n {
                break;
            }
            let wj = (2 * j + 1) as i64 * if j % 2 == 1 { -1 } else { 1 };
            coeffs[e] += wi * wj;
            j += 1;
        }
        i += 1;
    }
    EtaPowerExpansion { d: 6, coeffs }
}

pub fn expand_eta_8(n: usize) -> Result<EtaPowerExpansion> {
    expand_eta_8_windowed(n, 0)
}

pub fn expand_eta_10(n: usize) -> Result<EtaPowerExpansion> {
    expand_eta_10_windowed(n, 0)
}

pub fn expand_eta_14(n: usize) -> Result<EtaPowerExpansion> {
    expand_eta_14_windowed(n, 0)
}

pub fn expand_eta_26(n: usize) -> Result<EtaPowerExpansion> {
    expand_eta_26_windowed(n, 0)
}

/// `ceil(sqrt(x)) + 2 + margin`, the one-sided window for a lattice
/// variable whose exponent grows like the square of the variable.
fn window(x: usize, margin: i64) -> i64 {
    (x as f64).sqrt().ceil() as i64 + 2 + margin
}

/// `sum_{|m| <= w} weight(m) q^(expo(m))` truncated at order `n`; exponents
/// outside `0..=n` are skipped.
fn lattice_sum(
    n: usize,
    w: i64,
    two_sided: bool,
    weight: impl Fn(i64) -> i128,
    expo: impl Fn(i64) -> i64,
) -> IntSeries {
    let mut coeffs = vec![BigInt::zero(); n + 1];
    let lo = if two_sided { -w } else { 0 };
    for m in lo..=w {
        let e = expo(m);
        if e < 0 || e as usize > n {
            continue;
        }
        coeffs[e as usize] += BigInt::from(weight(m));
    }
    IntSeries::new(coeffs)
}

/// `(4 P1 - P2) / 3` where
/// `P1 = (sum_{m in Z} (3m+1)^3 q^(3m^2+2m)) (sum_{t in Z} q^(t^2))` and
/// `P2 = (sum_{m in Z} (6m+1)^3 q^(3m^2+m)) (sum_{t >= 0} q^(t^2+t))`.
fn expand_eta_8_windowed(n: usize, margin: i64) -> Result<EtaPowerExpansion> {
    let wm = window(n / 3 + 1, margin);
    let wt = window(n, margin);
    let a = lattice_sum(n, wm, true, |m| (3 * m + 1).pow(3) as i128, |m| 3 * m * m + 2 * m);
    let b = lattice_sum(n, wt, true, |_| 1, |t| t * t);
    let c = lattice_sum(n, wm, true, |m| (6 * m + 1).pow(3) as i128, |m| 3 * m * m + m);
    let d = lattice_sum(n, wt, false, |_| 1, |t| t * t + t);
    let p1 = a.mul(&b);
    let p2 = c.mul(&d);
    let coeffs = combine_and_divide(&p1, &p2)?;
    Ok(EtaPowerExpansion { d: 8, coeffs })
}

/// `(4 P1 - P2) / 3` where
/// `P1 = (sum_{m in Z} (3m+1)^3 q^(3m^2+2m)) (sum_{t in Z} (6t+1) q^(3t^2+t))` and
/// `P2 = (sum_{m in Z} (3m+1) q^(3m^2+2m)) (sum_{t in Z} (6t+1)^3 q^(3t^2+t))`.
fn expand_eta_10_windowed(n: usize, margin: i64) -> Result<EtaPowerExpansion> {
    let wm = window(n / 3 + 1, margin);
    let a = lattice_sum(n, wm, true, |m| (3 * m + 1).pow(3) as i128, |m| 3 * m * m + 2 * m);
    let b = lattice_sum(n, wm, true, |t| (6 * t + 1) as i128, |t| 3 * t * t + t);
    let c = lattice_sum(n, wm, true, |m| (3 * m + 1) as i128, |m| 3 * m * m + 2 * m);
    let d = lattice_sum(n, wm, true, |t| (6 * t + 1).pow(3) as i128, |t| 3 * t * t + t);
    let p1 = a.mul(&b);
    let p2 = c.mul(&d);
    let coeffs = combine_and_divide(&p1, &p2)?;
    Ok(EtaPowerExpansion { d: 10, coeffs })
}

/// Coefficients of `(4 p1 - p2) / 3`, with exactness checked per index.
fn combine_and_divide(p1: &IntSeries, p2: &IntSeries) -> Result<Vec<BigInt>> {
    let three = BigInt::from(3);
    p1.coeffs()
        .iter()
        .zip(p2.coeffs())
        .enumerate()
        .map(|(i, (c1, c2))| {
            let s = 4 * c1 - c2;
            let (q, r) = num_integer::Integer::div_rem(&s, &three);
            if r.is_zero() {
                Ok(q)
            } else {
                Err(Error::InexactDivision { divisor: 3, index: i })
            }
        })
        .collect()
}

/// `-(1/15) sum_{m,t in Z} (-1)^m (3m+1)(4t+1)(6m+4t+3)(6m-4t+1)
/// (6m+12t+5)(6m-12t-1) q^((4(3m+1)^2 + 3(4t+1)^2 - 7)/12)`.
fn expand_eta_14_windowed(n: usize, margin: i64) -> Result<EtaPowerExpansion> {
    let w = window(n, margin);
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for m in -w..=w {
        for t in -w..=w {
            let e12 = 4 * (3 * m + 1).pow(2) + 3 * (4 * t + 1).pow(2) - 7;
            debug_assert_eq!(e12.rem_euclid(12), 0);
            let e = e12 / 12;
            if e < 0 || e as usize > n {
                continue;
            }
            let term = (3 * m + 1) as i128
                * (4 * t + 1) as i128
                * (6 * m + 4 * t + 3) as i128
                * (6 * m - 4 * t + 1) as i128
                * (6 * m + 12 * t + 5) as i128
                * (6 * m - 12 * t - 1) as i128;
            let signed = if m.rem_euclid(2) == 1 { -term } else { term };
            coeffs[e as usize] += BigInt::from(signed);
        }
    }
    let fifteen = BigInt::from(15);
    for (i, c) in coeffs.iter_mut().enumerate() {
        let (q, r) = num_integer::Integer::div_rem(&*c, &fifteen);
        if !r.is_zero() {
            return Err(Error::InexactDivision { divisor: 15, index: i });
        }
        *c = -q;
    }
    Ok(EtaPowerExpansion { d: 14, coeffs })
}

/// `f(m, n) = sum_{t=0}^{6} binom(12, 2t) (-1)^t m^t n^(6-t)`, with
/// `0^0 = 1`.
pub fn f_poly(m: &Rat, n: &Rat) -> Rat {
    let mut acc = BigRational::zero();
    for (t, binom) in EVEN_BINOMIALS_12.iter().enumerate() {
        let term = rat_pow(m, t as u32) * rat_pow(n, 6 - t as u32) * Rat::from_integer(BigInt::from(*binom));
        if t % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    acc
}

fn rat_pow(x: &Rat, e: u32) -> Rat {
    Rat::new(x.numer().pow(e), x.denom().pow(e))
}

/// `f` at integer arguments, accumulated in `i128`.
fn f_int(m: i128, n: i128) -> i128 {
    let mut acc = 0i128;
    for (t, binom) in EVEN_BINOMIALS_12.iter().enumerate() {
        let term = binom * m.pow(t as u32) * n.pow(6 - t as u32);
        if t % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    acc
}

/// `(S1 + S2) / 16308864` where
/// `S1 = sum_{i,j in Z} (-1)^(i+j) f((6i+1)^2/2, (6j+1)^2/2)
///   q^(((6i+1)^2 + (6j+1)^2 - 26)/24)` and
/// `S2 = sum_{i,j in Z} (-1)^(i+j) f(12i^2, (6j+1)^2)
///   q^((12i^2 + (6j+1)^2 - 13)/12)`.
///
/// The half-integer arguments in `S1` scale out: `f(x/2, y/2) = F(x, y)/64`
/// with `F` integral, so the sum is accumulated as `64 S1 + 64 S2` and
/// divided once by `64 * 16308864`.
fn expand_eta_26_windowed(n: usize, margin: i64) -> Result<EtaPowerExpansion> {
    let w = window(n, margin);
    let mut scaled = vec![BigInt::zero(); n + 1];
    for i in -w..=w {
        for j in -w..=w {
            let sign = if (i + j).rem_euclid(2) == 1 { -1 } else { 1 };
            let x = ((6 * i + 1) * (6 * i + 1)) as i128;
            let y = ((6 * j + 1) * (6 * j + 1)) as i128;
            let e24 = x + y - 26;
            debug_assert_eq!(e24.rem_euclid(24), 0);
            if e24 >= 0 && (e24 / 24) as usize <= n {
                scaled[(e24 / 24) as usize] += BigInt::from(sign * f_int(x, y));
            }
            let x2 = (12 * i * i) as i128;
            let e12 = x2 + y - 13;
            debug_assert_eq!(e12.rem_euclid(12), 0);
            if e12 >= 0 && (e12 / 12) as usize <= n {
                scaled[(e12 / 12) as usize] += BigInt::from(sign * 64 * f_int(x2, y));
            }
        }
    }
    let divisor = 64u64 * 16_308_864;
    let big_divisor = BigInt::from(divisor);
    let mut coeffs = Vec::with_capacity(n + 1);
    for (i, c) in scaled.into_iter().enumerate() {
        let (q, r) = num_integer::Integer::div_rem(&c, &big_divisor);
        if !r.is_zero() {
            return Err(Error::InexactDivision { divisor, index: i });
        }
        coeffs.push(q);
    }
    Ok(EtaPowerExpansion { d: 26, coeffs })
}

/// Compares the closed-form expansion of `(q;q)_∞^d` with the direct `d`-th
/// power of the Euler product, coefficient by coefficient up to order `n`.
pub fn verify_identity(d: u32, n: usize) -> Result<VerificationReport> {
    let expansion = expand_eta(d, n)?;
    let reference = euler_product_int(n).pow(d);
    let subject = format!("closed form for (q;q)^{d}");
    for i in 0..=n {
        if expansion.coeff(i) != reference.coeff(i) {
            return Ok(VerificationReport::failing(
                subject,
                n,
                n + 1,
                i,
                format!("got {}, want {}", expansion.coeff(i), reference.coeff(i)),
            ));
        }
    }
    Ok(VerificationReport::passing(subject, n, n + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> Rat {
        Rat::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn all_supported_identities_hold() {
        for d in SUPPORTED_D {
            let report = verify_identity(d, 120).unwrap();
            assert!(report.pass, "d = {d}: {:?}", report.first_counterexample);
            assert_eq!(report.checked_count, 121);
        }
    }

    #[test]
    fn unsupported_exponent_is_rejected() {
        assert_eq!(expand_eta(5, 10).unwrap_err(), Error::UnsupportedD(5));
        assert_eq!(verify_identity(2, 10).unwrap_err(), Error::UnsupportedD(2));
    }

    #[test]
    fn sixth_power_is_square_of_cube() {
        let six = expand_eta_6(200);
        let three = IntSeries::new(expand_eta_3(200).coeffs().to_vec());
        assert_eq!(six.coeffs(), three.pow(2).coeffs());
    }

    #[test]
    fn f_poly_values() {
        assert_eq!(f_poly(&rat(0, 1), &rat(1, 1)), rat(1, 1));
        assert_eq!(f_poly(&rat(1, 1), &rat(0, 1)), rat(1, 1));
        assert_eq!(f_poly(&rat(1, 1), &rat(1, 1)), rat(-64, 1));
        assert_eq!(f_poly(&rat(1, 2), &rat(1, 2)), rat(-1, 1));
        assert_eq!(f_int(1, 1), -64);
        assert_eq!(f_int(0, 1), 1);
    }

    #[test]
    fn f_poly_matches_f_int_on_integers() {
        for m in -3i64..=3 {
            for n in -3i64..=3 {
                assert_eq!(
                    f_poly(&rat(m, 1), &rat(n, 1)),
                    Rat::from_integer(BigInt::from(f_int(m as i128, n as i128)))
                );
            }
        }
    }

    #[test]
    fn windows_are_stable() {
        for n in [60usize, 150] {
            assert_eq!(
                expand_eta_8_windowed(n, 0).unwrap(),
                expand_eta_8_windowed(n, 2).unwrap()
            );
            assert_eq!(
                expand_eta_10_windowed(n, 0).unwrap(),
                expand_eta_10_windowed(n, 2).unwrap()
            );
            assert_eq!(
                expand_eta_14_windowed(n, 0).unwrap(),
                expand_eta_14_windowed(n, 2).unwrap()
            );
            assert_eq!(
                expand_eta_26_windowed(n, 0).unwrap(),
                expand_eta_26_windowed(n, 2).unwrap()
            );
        }
    }

    #[test]
    fn low_order_coefficients_of_fourth_power() {
        // (q;q)^4 = 1 - 4q + 2q^2 + 8q^3 - 5q^4 - 4q^5 - 10q^6 + ...
        let four = expand_eta_4(6);
        let expected = [1i64, -4, 2, 8, -5, -4, -10];
        for (n, want) in expected.iter().enumerate() {
            assert_eq!(four.coeff(n), &BigInt::from(*want), "n = {n}");
        }
    }
}
