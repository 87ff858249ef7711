//! Exact arithmetic for fractional powers of the Euler product `(q;q)_∞`.
//!
//! The library expands `(q;q)_∞^k` for rational `k` with exact rational
//! coefficients, proves and verifies Ramanujan-style congruences for those
//! coefficients, checks the closed-form identities for `(q;q)_∞^d` at the
//! exponents `d ∈ {1, 3, 4, 6, 8, 10, 14, 26}`, and carries a small
//! modular-forms toolkit (level one, integer weight) used to push one family
//! of congruences from modulus `ℓ` to modulus `ℓ²` via Hecke operators.

pub mod arith;
pub mod congruence;
pub mod identities;
pub mod modforms;
pub mod qseries;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Inversion or division of a series whose constant term is zero.
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    /// `p`-adic valuation requested for zero.
    #[error("p-adic valuation of zero is undefined")]
    UndefinedValuation,
    /// Legendre symbol requested for a modulus that is not an odd prime.
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    /// Modular inverse of a residue that shares a factor with the modulus.
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    /// A value passed as a prime is composite, zero, or one.
    #[error("{0} is not prime")]
    NotPrime(u64),
    /// Fractional exponent with a zero denominator.
    #[error("exponent denominator must be positive")]
    ZeroDenominator,
    /// Exponent text that does not parse as `a` or `a/b`.
    #[error("malformed exponent {0:?}")]
    MalformedExponent(String),
    /// Residue reduction of a series whose denominators the prime divides.
    #[error("prime {prime} divides the exponent denominator {denominator}")]
    PrimeDividesDenominator { prime: u64, denominator: u64 },
    /// Closed-form expansion requested for an unsupported exponent.
    #[error("no closed-form expansion for exponent {0}")]
    UnsupportedD(u32),
    /// An integer division inside an identity evaluation left a remainder.
    #[error("inexact division by {divisor} at coefficient {index}")]
    InexactDivision { divisor: u64, index: usize },
    /// `series_pow_int` applied where an integer exponent is required.
    #[error("exponent is not an integer")]
    NonIntegerExponent,
    /// A scan window too short to certify a candidate congruence.
    #[error("fewer than {required} progression terms below the expansion order")]
    InsufficientSamples { required: usize },
    /// A basis decomposition that fails to reproduce its input.
    #[error("basis decomposition does not reconstruct the input at order {0}")]
    ReconstructionMismatch(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Outcome of an equality or vanishing check over a coefficient range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    /// What was checked, e.g. `"eta power identity d=8"`.
    pub subject: String,
    /// True when every checked index agreed.
    pub pass: bool,
    /// Largest coefficient index examined.
    pub checked_to: usize,
    /// Number of indices actually tested (progressions skip most indices).
    pub checked_count: usize,
    /// Smallest failing index and the value found there, if any.
    pub first_counterexample: Option<(usize, String)>,
}

impl VerificationReport {
    pub fn passing(subject: impl Into<String>, checked_to: usize, checked_count: usize) -> Self {
        VerificationReport {
            subject: subject.into(),
            pass: true,
            checked_to,
            checked_count,
            first_counterexample: None,
        }
    }

    pub fn failing(
        subject: impl Into<String>,
        checked_to: usize,
        checked_count: usize,
        index: usize,
        value: impl Into<String>,
    ) -> Self {
        VerificationReport {
            subject: subject.into(),
            pass: false,
            checked_to,
            checked_count,
            first_counterexample: Some((index, value.into())),
        }
    }
}
