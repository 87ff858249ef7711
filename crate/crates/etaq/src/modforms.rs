//! Level-one modular forms with integer q-expansions: Δ and E6, Ramanujan's
//! τ with its congruences modulo 7 and 49, Hecke and U operators, a basis of
//! the weight-72 cusp space, and the pipeline that proves
//! `p_{-1/2}(289n + 283) ≡ 0 (mod 289)` by applying T₁₇ twice to Δ⁶.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{ord_p, sigma3, sigma5, PrimePower};
use crate::congruence::{verify_congruence, Congruence, Provenance};
use crate::qseries::{euler_product_int, FracExponent, IntSeries, RationalSeries};
use crate::{Error, Result, VerificationReport};

/// A modular form for the full modular group, held via its q-expansion.
///
/// Every form in scope has integer coefficients, so the expansion is stored
/// over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularForm {
    weight: u32,
    coeffs: Vec<BigInt>,
}

impl ModularForm {
    pub fn new(weight: u32, coeffs: Vec<BigInt>) -> Self {
        assert!(weight >= 2 && weight % 2 == 0, "weight must be even and positive");
        assert!(!coeffs.is_empty());
        ModularForm { weight, coeffs }
    }

    pub fn weight(&self) -> u32 {
        self.weight
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

    pub fn expansion(&self) -> RationalSeries {
        IntSeries::new(self.coeffs.clone()).to_rational()
    }
}

/// `Δ = q (q;q)_∞^24`, weight 12, to order `n >= 1`. The coefficient of
/// `q^n` is Ramanujan's `τ(n)`.
pub fn delta(n: usize) -> ModularForm {
    assert!(n >= 1);
    let body = euler_product_int(n - 1).pow(24);
    let mut coeffs = vec![BigInt::zero()];
    coeffs.extend_from_slice(body.coeffs());
    ModularForm::new(12, coeffs)
}

/// `E6 = 1 - 504 sum_{m >= 1} σ₅(m) q^m`, weight 6, to order `n`.
pub fn e6(n: usize) -> ModularForm {
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(BigInt::from(1));
    for m in 1..=n as u64 {
        coeffs.push(BigInt::from(-504) * BigInt::from(sigma5(m)));
    }
    ModularForm::new(6, coeffs)
}

/// Verifies, for all indices up to `n`:
/// `τ(m) ≡ m σ₃(m) (mod 7)`; `τ(7m) ≡ 14 τ(m) (mod 49)`; and
/// `τ(m) ≡ 0 (mod 7)` for `m ≡ 0, 3, 5, 6 (mod 7)`.
pub fn tau_congruence_checks(n: usize) -> VerificationReport {
    let subject = format!("τ congruences mod 7 and 49 to index {n}");
    let tau = delta(n);
    let seven = BigInt::from(7);
    let fortynine = BigInt::from(49);
    let mut checked = 0usize;
    for m in 1..=n {
        let want = BigInt::from(m as u64 * (sigma3(m as u64) % 7) % 7);
        if tau.coeff(m).mod_floor(&seven) != want {
            return VerificationReport::failing(
                subject,
                n,
                checked + 1,
                m,
                format!("τ({m}) ≢ {m}σ₃({m}) (mod 7)"),
            );
        }
        checked += 1;
    }
    for m in 1..=n / 7 {
        let diff = tau.coeff(7 * m) - BigInt::from(14) * tau.coeff(m);
        if !diff.mod_floor(&fortynine).is_zero() {
            return VerificationReport::failing(
                subject,
                n,
                checked + 1,
                7 * m,
                format!("τ({}) ≢ 14τ({m}) (mod 49)", 7 * m),
            );
        }
        checked += 1;
    }
    for m in 1..=n {
        if matches!(m % 7, 0 | 3 | 5 | 6) {
            if !tau.coeff(m).mod_floor(&seven).is_zero() {
                return VerificationReport::failing(
                    subject,
                    n,
                    checked + 1,
                    m,
                    format!("τ({m}) ≢ 0 (mod 7)"),
                );
            }
            checked += 1;
        }
    }
    VerificationReport::passing(subject, n, checked)
}

/// The Hecke operator `T(m)` in weight `w`: the coefficient of `q^n` in
/// `T(m) f` is `sum_{d | gcd(m, n)} d^(w-1) a(nm / d^2)`. The result is
/// truncated to order `floor(f.order / m)`.
#[allow(non_snake_case)]
pub fn hecke_T(f: &ModularForm, m: u64) -> ModularForm {
    assert!(m >= 1);
    let order = f.order() / m as usize;
    let mut coeffs = Vec::with_capacity(order + 1);
    for n in 0..=order as u64 {
        let g = num_integer::gcd(m, n);
        let mut acc = BigInt::zero();
        for d in 1..=g {
            if g % d == 0 {
                let idx = (n * m / (d * d)) as usize;
                acc += BigInt::from(d).pow(f.weight() - 1) * f.coeff(idx);
            }
        }
        coeffs.push(acc);
    }
    ModularForm::new(f.weight(), coeffs)
}

/// The operator `U(m)`: the coefficient of `q^n` is `a(mn)`. The result is
/// truncated to order `floor(f.order / m)`.
pub fn u_operator(f: &ModularForm, m: u64) -> ModularForm {
    assert!(m >= 1);
    let order = f.order() / m as usize;
    let coeffs = (0..=order)
        .map(|n| f.coeff(n * m as usize).clone())
        .collect();
    ModularForm::new(f.weight(), coeffs)
}

/// The basis `B₁ = Δ⁶, B₂ = Δ⁵E6², ..., B₆ = ΔE6¹⁰` of the weight-72 cusp
/// space, each expanded to order `n`. `Bᵢ` leads at `q^(7-i)` with
/// coefficient 1, so the six leading coefficients form a unitriangular
/// system.
pub fn s72_basis(n: usize) -> [ModularForm; 6] {
    let d = IntSeries::new(delta(n).coeffs().to_vec());
    let e2 = IntSeries::new(e6(n).coeffs().to_vec()).pow(2);
    let mut dpows = vec![d.clone()];
    for _ in 1..6 {
        dpows.push(dpows.last().unwrap().mul(&d));
    }
    let mut forms: Vec<ModularForm> = Vec::with_capacity(6);
    forms.push(ModularForm::new(72, dpows[5].coeffs().to_vec()));
    let mut epow = e2.clone();
    for i in 2..=6usize {
        forms.push(ModularForm::new(72, dpows[6 - i].mul(&epow).coeffs().to_vec()));
        if i < 6 {
            epow = epow.mul(&e2);
        }
    }
    forms.try_into().expect("exactly six basis forms")
}

/// The coefficients `a₁ .. a₆` expressing a weight-72 cusp form in the
/// [`s72_basis`], found by unitriangular back-substitution on the
/// coefficients of `q^1 .. q^6`, then checked by full reconstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisDecomposition {
    pub coefficients: [BigInt; 6],
    pub residual_checked_to: usize,
}

/// Decomposes `f` (weight 72, order at least 6) in the [`s72_basis`].
///
/// Errors with [`Error::ReconstructionMismatch`] when the reconstruction
/// `sum aᵢ Bᵢ` differs from `f` at any order up to `f.order()`; that
/// signals an input outside the cusp space or a too-short expansion.
pub fn decompose_in_basis(f: &ModularForm) -> Result<BasisDecomposition> {
    assert_eq!(f.weight(), 72, "decomposition targets the weight-72 space");
    assert!(f.order() >= 6, "need coefficients of q^1 .. q^6");
    let basis = s72_basis(f.order());
    let mut residual = f.coeffs().to_vec();
    let mut coefficients: [BigInt; 6] = Default::default();
    // Bᵢ leads at q^(7-i): peel off B₆ (leading q¹) up through B₁.
    for idx in 1..=6usize {
        let i = 7 - idx;
        let a = residual[idx].clone();
        if !a.is_zero() {
            let b = &basis[i - 1];
            for t in idx..residual.len() {
                residual[t] -= &a * b.coeff(t);
            }
        }
        coefficients[i - 1] = a;
    }
    if let Some(bad) = residual.iter().position(|c| !c.is_zero()) {
        return Err(Error::ReconstructionMismatch(bad));
    }
    Ok(BasisDecomposition {
        coefficients,
        residual_checked_to: f.order(),
    })
}

/// The two legs of the modular proof of
/// `p_{-1/2}(289n + 283) ≡ 0 (mod 289)`, see [`modular_proof_289`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofReport {
    /// Basis coefficients of `T₁₇(T₁₇(Δ⁶))`.
    pub coefficients: [BigInt; 6],
    /// `ord₁₇` of each coefficient.
    pub valuations: [u64; 6],
    /// True when `ord₁₇(a₁) = 3` and `ord₁₇(aᵢ) = 2` for `i >= 2`, the
    /// divisibility that forces the congruence.
    pub valuations_pass: bool,
    /// Order the decomposition reconstruction was checked to.
    pub reconstruction_checked_to: usize,
    /// Independent residue-series verification of the congruence itself.
    pub residue_leg: VerificationReport,
    /// Conjunction of both legs.
    pub agree: bool,
}

/// Runs the modular proof of `p_{-1/2}(289n + 283) ≡ 0 (mod 289)`:
/// expands `Δ⁶` far enough to apply `T₁₇` twice, decomposes the image in
/// the weight-72 basis, takes `ord₁₇` of the six coefficients, and
/// independently verifies the congruence through residue series up to
/// `n_check`.
pub fn modular_proof_289(n_check: usize) -> Result<ProofReport> {
    // T₁₇ twice divides the order by 17²; order 12 after both applications
    // leaves six coefficients beyond the solved q¹ .. q⁶ block as a
    // reconstruction check.
    let base_order = 12 * 289;
    let body = euler_product_int(base_order - 6).pow(144);
    let mut coeffs = vec![BigInt::zero(); 6];
    coeffs.extend_from_slice(body.coeffs());
    let delta6 = ModularForm::new(72, coeffs);
    let image = hecke_T(&hecke_T(&delta6, 17), 17);
    let decomposition = decompose_in_basis(&image)?;
    let mut valuations = [0u64; 6];
    for (v, a) in valuations.iter_mut().zip(&decomposition.coefficients) {
        *v = ord_p(a, 17)?;
    }
    let valuations_pass =
        valuations[0] == 3 && valuations[1..].iter().all(|&v| v == 2);
    let mut congruence = Congruence::new(
        FracExponent::new(-1, 2)?,
        PrimePower::new(17, 2)?,
        289,
        283,
        Provenance::Table("p-1-2-mod289".into()),
    );
    let residue_leg = verify_congruence(&mut congruence, n_check)?;
    let agree = valuations_pass && residue_leg.pass;
    Ok(ProofReport {
        coefficients: decomposition.coefficients,
        valuations,
        valuations_pass,
        reconstruction_checked_to: decomposition.residual_checked_to,
        residue_leg,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_low_order() {
        let d = delta(12);
        assert_eq!(d.weight(), 12);
        assert!(d.coeff(0).is_zero());
        assert_eq!(d.coeff(1), &BigInt::from(1));
        assert_eq!(d.coeff(2), &BigInt::from(-24));
        assert_eq!(d.coeff(3), &BigInt::from(252));
        assert_eq!(d.coeff(7), &BigInt::from(-16744));
    }

    #[test]
    fn e6_low_order() {
        let f = e6(4);
        assert_eq!(f.weight(), 6);
        assert_eq!(f.coeff(0), &BigInt::from(1));
        assert_eq!(f.coeff(1), &BigInt::from(-504));
        assert_eq!(f.coeff(2), &BigInt::from(-16632));
    }

    #[test]
    fn tau_congruences_hold() {
        let report = tau_congruence_checks(210);
        assert!(report.pass, "{:?}", report.first_counterexample);
    }

    #[test]
    fn hecke_identity_and_low_coefficients() {
        let d = delta(60);
        assert_eq!(hecke_T(&d, 1), d);
        assert_eq!(hecke_T(&d, 2).coeff(1), &BigInt::from(-24));
        assert_eq!(hecke_T(&d, 7).coeff(1), &BigInt::from(-16744));
        assert_eq!(u_operator(&d, 1), d);
        assert_eq!(u_operator(&d, 7).coeff(1), &BigInt::from(-16744));
    }

    #[test]
    fn delta_is_a_hecke_eigenform() {
        let d = delta(156);
        for p in [2u64, 3, 5, 7, 11, 13] {
            let image = hecke_T(&d, p);
            let lambda = d.coeff(p as usize);
            for n in 0..=image.order() {
                assert_eq!(image.coeff(n), &(lambda * d.coeff(n)), "p = {p}, n = {n}");
            }
        }
    }

    #[test]
    fn tau_hecke_recursion() {
        let d = delta(650);
        for p in [2usize, 3, 5, 7, 11, 13] {
            let p11 = BigInt::from(p as u64).pow(11);
            for n in 1..=50usize {
                let lhs = d.coeff(p * n);
                let mut rhs = d.coeff(p) * d.coeff(n);
                if n % p == 0 {
                    rhs -= &p11 * d.coeff(n / p);
                }
                assert_eq!(lhs, &rhs, "p = {p}, n = {n}");
            }
        }
    }

    #[test]
    fn t17_equals_u17_mod_289_on_delta6() {
        let body = euler_product_int(850 - 6).pow(144);
        let mut coeffs = vec![BigInt::zero(); 6];
        coeffs.extend_from_slice(body.coeffs());
        let delta6 = ModularForm::new(72, coeffs);
        let t = hecke_T(&delta6, 17);
        let u = u_operator(&delta6, 17);
        let m = BigInt::from(289);
        for n in 0..=50usize {
            assert_eq!(
                t.coeff(n).mod_floor(&m),
                u.coeff(n).mod_floor(&m),
                "n = {n}"
            );
        }
    }

    #[test]
    fn basis_is_unitriangular() {
        let basis = s72_basis(12);
        for (i, b) in basis.iter().enumerate() {
            let lead = 7 - (i + 1);
            assert_eq!(b.weight(), 72);
            assert!(b.coeff(0).is_zero());
            for t in 0..lead {
                assert!(b.coeff(t).is_zero(), "B{} below q^{lead}", i + 1);
            }
            assert_eq!(b.coeff(lead), &BigInt::from(1), "B{} leading", i + 1);
        }
        assert_eq!(basis[5].coeff(2), &BigInt::from(-5064));
    }

    #[test]
    fn decomposition_recovers_basis_elements() {
        let basis = s72_basis(20);
        for (i, b) in basis.iter().enumerate() {
            let dec = decompose_in_basis(b).unwrap();
            for (t, a) in dec.coefficients.iter().enumerate() {
                let want = if t == i { 1 } else { 0 };
                assert_eq!(a, &BigInt::from(want), "B{}", i + 1);
            }
            assert_eq!(dec.residual_checked_to, 20);
        }
    }

    #[test]
    fn decomposition_round_trip() {
        let basis = s72_basis(18);
        let weights = [3i64, -7, 0, 25, -1, 17];
        let mut coeffs = vec![BigInt::zero(); 19];
        for (b, w) in basis.iter().zip(weights) {
            for t in 0..=18 {
                coeffs[t] += BigInt::from(w) * b.coeff(t);
            }
        }
        let f = ModularForm::new(72, coeffs);
        let dec = decompose_in_basis(&f).unwrap();
        let got: Vec<i64> = dec
            .coefficients
            .iter()
            .map(|a| i64::try_from(a).unwrap())
            .collect();
        assert_eq!(got, weights);
    }

    #[test]
    fn decomposition_rejects_forms_outside_the_space() {
        let basis = s72_basis(14);
        let mut coeffs = basis[0].coeffs().to_vec();
        coeffs[9] += 1;
        let f = ModularForm::new(72, coeffs);
        assert_eq!(
            decompose_in_basis(&f).unwrap_err(),
            Error::ReconstructionMismatch(9)
        );
    }
}
