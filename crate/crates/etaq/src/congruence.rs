//! Congruences `p_k(An + r) ≡ 0 (mod ℓ^s)` for the coefficients `p_k(n)` of
//! `(q;q)_∞^k`: derivation from the closed-form identities, verification
//! against exact expansions, and a numerical discovery scan.
//!
//! Residue series are computed by reducing the exact binomial coefficients
//! of each factor `(1 - q^m)^k` modulo `ℓ^s` and multiplying in modular
//! arithmetic. The coefficient denominators only contain primes dividing
//! the exponent denominator `b`, so the reduction is well defined whenever
//! `ℓ` does not divide `b`.

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{is_prime, mod_inverse, prime_factors, primes_up_to, PrimePower};
use crate::identities::SUPPORTED_D;
use crate::qseries::{
    c_table_reduced, eta_pow_fractional, euler_product, series_invert, series_mul,
    FracExponent,
};
use crate::{arith, Error, Result, VerificationReport};

/// Where a congruence came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// Derived from the closed form for `(q;q)_∞^d`; `case` numbers the
    /// admissibility condition that applied.
    Theorem2 { case: u8, d: u32 },
    /// A cataloged entry, identified by label.
    Table(String),
    /// A conjectured family, identified by label.
    Conjecture(String),
    /// Found by the numerical scan; `witnesses` counts the progression
    /// terms that vanished. Numerical, unproved.
    Discovered { witnesses: usize },
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Theorem2 { case, d } => write!(f, "derived (case {case}, d = {d})"),
            Provenance::Table(label) => write!(f, "cataloged ({label})"),
            Provenance::Conjecture(label) => {
                write!(f, "conjectured ({label}; numerical, unproved)")
            }
            Provenance::Discovered { witnesses } => {
                write!(f, "discovered ({witnesses} witnesses; numerical, unproved)")
            }
        }
    }
}

/// `p_k(progression * n + residue) ≡ 0 (mod modulus)` for all `n >= 0`.
///
/// The progression modulus is a power `ℓ^j` of the same prime as the
/// congruence modulus `ℓ^s`, with `j` and `s` independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub k: FracExponent,
    pub modulus: PrimePower,
    pub progression: u64,
    pub residue: u64,
    pub provenances: Vec<Provenance>,
    pub verified_to: Option<usize>,
}

impl Congruence {
    pub fn new(
        k: FracExponent,
        modulus: PrimePower,
        progression: u64,
        residue: u64,
        provenance: Provenance,
    ) -> Self {
        debug_assert!(progression >= 1 && residue < progression);
        Congruence {
            k,
            modulus,
            progression,
            residue,
            provenances: vec![provenance],
            verified_to: None,
        }
    }
}

impl std::fmt::Display for Congruence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "p_{{{}}}({}n+{}) ≡ 0 (mod {})",
            self.k, self.progression, self.residue, self.modulus
        )
    }
}

/// Residues of `p_k(0) .. p_k(n)` modulo a prime power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSeries {
    k: FracExponent,
    modulus: PrimePower,
    values: Vec<u64>,
}

impl ResidueSeries {
    pub fn k(&self) -> FracExponent {
        self.k
    }

    pub fn modulus(&self) -> PrimePower {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, n: usize) -> u64 {
        self.values[n]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// `p_k(0) .. p_k(n)` reduced modulo `ℓ^s`.
///
/// Errors with [`Error::PrimeDividesDenominator`] when `ℓ` divides the
/// denominator of `k`: those coefficients have `ℓ` in their denominators
/// and no residue.
pub fn residue_series_pk(
    k: FracExponent,
    modulus: PrimePower,
    n: usize,
) -> Result<ResidueSeries> {
    let ell = modulus.prime();
    if k.denom() % ell == 0 {
        return Err(Error::PrimeDividesDenominator {
            prime: ell,
            denominator: k.denom(),
        });
    }
    let m = modulus.modulus();
    let big_m = num_bigint::BigInt::from(m);
    let signed: Vec<u64> = c_table_reduced(k, n)
        .into_iter()
        .enumerate()
        .map(|(j, (num, den))| {
            let num_mod = num.mod_floor(&big_m).to_u64().expect("residue fits u64");
            let den_mod = (den % m).to_u64().expect("residue fits u64");
            let inv = mod_inverse(den_mod, m).expect("denominator is coprime to the modulus");
            let c = arith::mul_mod(num_mod, inv, m);
            if j % 2 == 1 && c != 0 {
                m - c
            } else {
                c
            }
        })
        .collect();
    let mut values = vec![0u64; n + 1];
    values[0] = 1 % m;
    // With small moduli the inner sum cannot overflow u64, so the fold to
    // the residue class happens once per coefficient.
    let raw_accumulation_is_safe =
        (m as u128) * (m as u128) * (n as u128 + 2) < (1u128 << 64);
    for step in 1..=n {
        let jmax = n / step;
        if raw_accumulation_is_safe {
            for i in (step..=n).rev() {
                let mut acc = values[i];
                for j in 1..=jmax.min(i / step) {
                    acc += signed[j] * values[i - j * step];
                }
                values[i] = acc % m;
            }
        } else {
            for i in (step..=n).rev() {
                let mut acc = values[i] as u128;
                for j in 1..=jmax.min(i / step) {
                    acc = (acc + signed[j] as u128 * values[i - j * step] as u128)
                        % m as u128;
                }
                values[i] = acc as u64;
            }
        }
    }
    Ok(ResidueSeries { k, modulus, values })
}

/// Decides whether the residue class `r` modulo the odd prime `ell` is
/// admissible for the closed form at exponent `d`, i.e. whether every
/// lattice point contributing to `q^(ell*n + r)` carries a factor `ell`.
///
/// The conditions, by `d`:
/// - `1`: `24r + 1` is a quadratic nonresidue mod `ell`;
/// - `3`: `8r + 1` is a nonresidue or divisible by `ell`;
/// - `4, 8, 14`: `ell ≡ 5 (mod 6)` and `ell | 24r + d`;
/// - `6, 10`: `ell >= 5`, `ell ≡ 3 (mod 4)`, and `ell | 24r + d`;
/// - `26`: `ell ≡ 11 (mod 12)` and `ell | 24r + d`.
pub fn theorem2_condition(d: u32, ell: u64, r: u64) -> Result<bool> {
    if ell == 2 || !is_prime(ell) {
        return Err(Error::NotOddPrime(ell));
    }
    assert!(r < ell, "residue must be reduced mod ell");
    let divides = |x: u64| (x + d as u64) % ell == 0;
    match d {
        1 => Ok(arith::legendre_symbol(24 * r as i64 + 1, ell)? == -1),
        3 => {
            let sym = arith::legendre_symbol(8 * r as i64 + 1, ell)?;
            Ok(sym == -1 || sym == 0)
        }
        4 | 8 | 14 => Ok(ell % 6 == 5 && divides(24 * r)),
        6 | 10 => Ok(ell >= 5 && ell % 4 == 3 && divides(24 * r)),
        26 => Ok(ell % 12 == 11 && divides(24 * r)),
        _ => Err(Error::UnsupportedD(d)),
    }
}

const CASE_OF_D: [(u32, u8); 8] = [
    (1, 1),
    (3, 2),
    (4, 3),
    (8, 3),
    (14, 3),
    (6, 4),
    (10, 4),
    (26, 5),
];

fn case_of(d: u32) -> u8 {
    CASE_OF_D
        .iter()
        .find(|&&(dd, _)| dd == d)
        .map(|&(_, c)| c)
        .expect("d is supported")
}

/// All congruences `p_{-a/b}(ℓn + r) ≡ 0 (mod ℓ)` derivable from the
/// closed forms: for each supported `d`, each odd prime `ℓ <= ell_max`
/// dividing `a + db`, and each admissible residue `r`.
///
/// `a/b` is reduced first. Output is sorted by `(ℓ, r, d)`; entries that
/// several exponents `d` derive are merged, keeping every provenance.
pub fn theorem2_congruences(a: i64, b: u64, ell_max: u64) -> Result<Vec<Congruence>> {
    let k = FracExponent::new(-a, b)?;
    let (a, b) = (-k.numer(), k.denom());
    let mut raw: Vec<(u64, u64, u32)> = Vec::new();
    for d in SUPPORTED_D {
        let m = a as i128 + d as i128 * b as i128;
        let candidates: Vec<u64> = if m == 0 {
            primes_up_to(ell_max)
                .into_iter()
                .filter(|&p| p != 2 && b % p != 0)
                .collect()
        } else {
            prime_factors(u64::try_from(m.unsigned_abs()).expect("a + db fits u64"))
                .into_iter()
                .map(|(p, _)| p)
                .filter(|&p| p != 2 && p <= ell_max)
                .collect()
        };
        for ell in candidates {
            debug_assert!(b % ell != 0, "ell divides a + db and gcd(a, b) = 1");
            for r in 0..ell {
                if theorem2_condition(d, ell, r)? {
                    raw.push((ell, r, d));
                }
            }
        }
    }
    raw.sort_unstable();
    let mut out: Vec<Congruence> = Vec::new();
    for (ell, r, d) in raw {
        let provenance = Provenance::Theorem2 { case: case_of(d), d };
        match out.last_mut() {
            Some(last)
                if last.modulus.prime() == ell && last.residue == r =>
            {
                last.provenances.push(provenance);
            }
            _ => out.push(Congruence::new(
                k,
                PrimePower::new(ell, 1)?,
                ell,
                r,
                provenance,
            )),
        }
    }
    Ok(out)
}

/// Checks `p_k(progression * t + residue) ≡ 0 (mod ℓ^s)` for every
/// progression term up to `n`. On pass, records `verified_to = Some(n)`.
pub fn verify_congruence(c: &mut Congruence, n: usize) -> Result<VerificationReport> {
    let series = residue_series_pk(c.k, c.modulus, n)?;
    let subject = c.to_string();
    let mut checked = 0usize;
    let mut i = c.residue as usize;
    while i <= n {
        if series.value(i) != 0 {
            return Ok(VerificationReport::failing(
                subject,
                n,
                checked + 1,
                i,
                format!("p_k({i}) ≡ {} (mod {})", series.value(i), c.modulus.modulus()),
            ));
        }
        checked += 1;
        i += c.progression as usize;
    }
    if checked == 0 {
        return Err(Error::InsufficientSamples { required: 1 });
    }
    c.verified_to = Some(n);
    Ok(VerificationReport::passing(subject, n, checked))
}

/// Scans for vanishing progressions `p_k(ℓ^j n + r) ≡ 0 (mod ℓ^s)` for
/// every prime `ℓ` in `ell_min ..= ell_max` coprime to the denominator of
/// `k`, every `j <= s`, and every residue `r < ℓ^j`.
///
/// A family is reported only when all of its at least 10 progression terms
/// up to `n` vanish; families refining an already reported coarser family
/// are suppressed. Results are tagged [`Provenance::Discovered`]:
/// numerical evidence, not proof.
///
/// Errors with [`Error::InsufficientSamples`] when fewer than 10 terms of
/// some candidate progression fit below `n`.
pub fn discover(
    k: FracExponent,
    ell_min: u64,
    ell_max: u64,
    s: u32,
    n: usize,
) -> Result<Vec<Congruence>> {
    let mut out = Vec::new();
    for ell in primes_up_to(ell_max) {
        if ell < ell_min || k.denom() % ell == 0 {
            continue;
        }
        let modulus = PrimePower::new(ell, s)?;
        let span = modulus.modulus() as usize;
        if n + 1 < 10 * span {
            return Err(Error::InsufficientSamples { required: 10 });
        }
        let series = residue_series_pk(k, modulus, n)?;
        let mut found: Vec<(u64, u64)> = Vec::new();
        for j in 1..=s {
            let pj = ell.pow(j);
            'residue: for r in 0..pj {
                if found.iter().any(|&(pj2, r2)| r % pj2 == r2) {
                    continue;
                }
                let mut witnesses = 0usize;
                let mut i = r as usize;
                while i <= n {
                    if series.value(i) != 0 {
                        continue 'residue;
                    }
                    witnesses += 1;
                    i += pj as usize;
                }
                found.push((pj, r));
                let mut c = Congruence::new(
                    k,
                    modulus,
                    pj,
                    r,
                    Provenance::Discovered { witnesses },
                );
                c.verified_to = Some(n);
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Checks the reduction `(q^t;q^t)^(p^j k) ≡ (q^(pt);q^(pt))^(p^(j-1) k)
/// (mod p^j)` coefficientwise up to order `n`, for `p` not dividing the
/// denominator of `k`.
pub fn frobenius_lemma_check(
    k: FracExponent,
    p: u64,
    j: u32,
    t: u64,
    n: usize,
) -> Result<VerificationReport> {
    assert!(j >= 1 && t >= 1);
    let modulus = PrimePower::new(p, j)?;
    let scale = |e: u32| -> Result<FracExponent> {
        let factor = i64::try_from(p.pow(e)).expect("p^j fits i64");
        FracExponent::new(
            k.numer().checked_mul(factor).expect("scaled exponent fits i64"),
            k.denom(),
        )
    };
    let lhs = residue_series_pk(scale(j)?, modulus, n / t as usize)?;
    let rhs = residue_series_pk(scale(j - 1)?, modulus, n / (p * t) as usize)?;
    let subject = format!(
        "(q^{t};q^{t})^({}) ≡ (q^{pt};q^{pt})^({}) (mod {modulus})",
        scale(j)?,
        scale(j - 1)?,
        pt = p * t,
    );
    for e in 0..=n {
        let left = if e as u64 % t == 0 {
            lhs.value(e / t as usize)
        } else {
            0
        };
        let right = if e as u64 % (p * t) == 0 {
            rhs.value(e / (p * t) as usize)
        } else {
            0
        };
        if left != right {
            return Ok(VerificationReport::failing(
                subject,
                n,
                e + 1,
                e,
                format!("{left} vs {right}"),
            ));
        }
    }
    Ok(VerificationReport::passing(subject, n, n + 1))
}

/// Checks that every coefficient denominator of `(q;q)_∞^k` equals the
/// predicted value `b^n * prod_{p|b} p^(ord_p(n!))` exactly, up to order
/// `n`.
pub fn denominator_theorem_check(k: FracExponent, n: usize) -> VerificationReport {
    let f = eta_pow_fractional(k, n);
    let subject = format!("denominator of p_{{{k}}}(n) for n <= {n}");
    for i in 0..=n {
        let predicted = k.denom_prediction(i as u64);
        let actual = f.coeff(i).denom().magnitude();
        if actual != &predicted {
            return VerificationReport::failing(
                subject,
                n,
                i + 1,
                i,
                format!("denominator {actual}, predicted {predicted}"),
            );
        }
    }
    VerificationReport::passing(subject, n, n + 1)
}

/// Checks the convolution identities splitting the partition generating
/// function: `1/(q;q)_∞ = (q;q)_∞^(-1/3) (q;q)_∞^(-2/3)
/// = (q;q)_∞^(-1/2) (q;q)_∞^(-1/2)`, coefficientwise up to order `n`.
pub fn convolution_identity_check(n: usize) -> VerificationReport {
    let partitions = series_invert(&euler_product(n)).expect("unit constant term");
    let subject = format!("partition convolutions to order {n}");
    let pairs = [
        (
            FracExponent::new(-1, 3).unwrap(),
            FracExponent::new(-2, 3).unwrap(),
        ),
        (
            FracExponent::new(-1, 2).unwrap(),
            FracExponent::new(-1, 2).unwrap(),
        ),
    ];
    for (ka, kb) in pairs {
        let product = series_mul(&eta_pow_fractional(ka, n), &eta_pow_fractional(kb, n));
        for i in 0..=n {
            if product.coeff(i) != partitions.coeff(i) {
                return VerificationReport::failing(
                    subject,
                    n,
                    i + 1,
                    i,
                    format!(
                        "sum_j p_{{{ka}}}(j) p_{{{kb}}}({i}-j) = {}, p({i}) = {}",
                        product.coeff(i),
                        partitions.coeff(i)
                    ),
                );
            }
        }
    }
    VerificationReport::passing(subject, n, 2 * (n + 1))
}
