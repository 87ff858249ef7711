//! `etaq`: expand fractional powers of the Euler product, verify and derive
//! coefficient congruences, check the closed-form identities, and run the
//! Hecke-operator proof pipeline, with reproducible reports in JSON, CSV, or
//! plain text.
//!
//! Exit codes: 0 for pass or plain data, 1 for a mathematical refutation
//! (a counterexample was found), 2 for usage or domain errors.

mod report;

use clap::{Parser, Subcommand};
use serde_json::json;

use etaq::congruence::{denominator_theorem_check, discover, theorem2_congruences, Congruence};
use etaq::identities::verify_identity;
use etaq::modforms::modular_proof_289;
use etaq::qseries::{eta_pow_fractional, FracExponent};
use etaq::VerificationReport;

use report::{verification_lines, verification_value, Format, Outcome, Report};

#[derive(Parser)]
#[command(name = "etaq", version, about, max_term_width = 100)]
struct Cli {
    /// Output format for the report.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand (q;q)_∞^k to order n with exact rational coefficients.
    Expand {
        /// Exponent, as "a" or "a/b".
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// Highest power of q to compute.
        #[arg(long)]
        n: usize,
    },
    /// Verify p_k(An + r) ≡ 0 (mod ℓ^s) along a progression.
    Verify {
        /// Exponent, as "a" or "a/b".
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// Congruence prime ℓ.
        #[arg(long)]
        ell: u64,
        /// Congruence modulus exponent: the modulus is ℓ^s.
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// Progression modulus A; defaults to ℓ^s.
        #[arg(long)]
        progression: Option<u64>,
        /// Progression residue r.
        #[arg(long)]
        r: u64,
        /// Verify all progression members An + r ≤ N.
        #[arg(long = "N")]
        n: usize,
    },
    /// Derive congruences p_{-a/b}(ℓn + r) ≡ 0 (mod ℓ) from the closed-form
    /// expansions of (q;q)_∞^d, for all primes ℓ ≤ ell-max dividing a + db.
    Theorem2 {
        /// Exponent numerator (the congruences concern p_{-a/b}).
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        /// Exponent denominator, coprime to a.
        #[arg(long)]
        b: u64,
        /// Largest prime to consider.
        #[arg(long = "ell-max")]
        ell_max: u64,
    },
    /// Scan numerically for vanishing progressions p_k(ℓ^j n + r) ≡ 0 (mod ℓ^s).
    Discover {
        /// Exponent, as "a" or "a/b".
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// Smallest prime to scan.
        #[arg(long = "ell-min")]
        ell_min: u64,
        /// Largest prime to scan.
        #[arg(long = "ell-max")]
        ell_max: u64,
        /// Congruence modulus exponent: candidates are checked mod ℓ^s.
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// Expansion order; every candidate needs at least 10 progression
        /// members below this.
        #[arg(long = "N")]
        n: usize,
    },
    /// Check the closed-form expansion of (q;q)_∞^d against direct expansion.
    Identity {
        /// Exponent d ∈ {1, 3, 4, 6, 8, 10, 14, 26}.
        #[arg(long)]
        d: u32,
        /// Compare coefficients up to this order.
        #[arg(long = "N")]
        n: usize,
    },
    /// Check the predicted coefficient denominators of (q;q)_∞^k.
    Denom {
        /// Exponent, as "a" or "a/b".
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// Check denominators up to this order.
        #[arg(long = "N")]
        n: usize,
    },
    /// Prove p_{-1/2}(289n + 283) ≡ 0 (mod 289) by applying T₁₇ twice to Δ⁶,
    /// and verify the congruence independently through residue series.
    Modproof {
        /// Verify residues for all progression members 289n + 283 ≤ N.
        #[arg(long = "N")]
        n: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((report, code)) => {
            print!("{}", report.render(cli.format));
            std::process::exit(code);
        }
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(2);
        }
    }
}

fn max_order() -> usize {
    std::env::var("ETAQ_MAX_ORDER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(20000)
}

fn check_order(n: usize) -> Result<(), String> {
    let cap = max_order();
    if n > cap {
        Err(format!("order {n} exceeds the ETAQ_MAX_ORDER cap of {cap}"))
    } else {
        Ok(())
    }
}

fn parse_k(k: &str) -> Result<FracExponent, String> {
    k.parse::<FracExponent>().map_err(|e| e.to_string())
}

fn pass_fail(report: &VerificationReport) -> (Outcome, i32) {
    if report.pass {
        (Outcome::Pass, 0)
    } else {
        (Outcome::Fail, 1)
    }
}

fn congruence_value(c: &Congruence) -> serde_json::Value {
    json!({
        "congruence": c.to_string(),
        "k": c.k.to_string(),
        "modulus": c.modulus.to_string(),
        "progression": c.progression,
        "residue": c.residue,
        "provenances": c.provenances.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "verified_to": c.verified_to,
    })
}

fn congruence_line(c: &Congruence) -> String {
    let provenances = c
        .provenances
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join("; ");
    format!("{c} [{provenances}]")
}

fn run(command: &Command) -> Result<(Report, i32), String> {
    match command {
        Command::Expand { k, n } => {
            check_order(*n)?;
            let exponent = parse_k(k)?;
            let series = eta_pow_fractional(exponent, *n);
            let coefficients: Vec<String> =
                series.coeffs().iter().map(|c| c.to_string()).collect();
            let text_lines = coefficients
                .iter()
                .enumerate()
                .map(|(i, c)| format!("p_{{{exponent}}}({i}) = {c}"))
                .collect();
            let report = Report::new(
                "expand",
                &[("k", exponent.to_string()), ("n", n.to_string())],
                Outcome::Data,
                json!({ "coefficients": coefficients }),
                text_lines,
            );
            Ok((report, 0))
        }
        Command::Verify {
            k,
            ell,
            s,
            progression,
            r,
            n,
        } => {
            check_order(*n)?;
            let exponent = parse_k(k)?;
            let modulus =
                etaq::arith::PrimePower::new(*ell, *s).map_err(|e| e.to_string())?;
            let progression = progression.unwrap_or(modulus.modulus());
            if *r >= progression {
                return Err(format!(
                    "residue {r} is not below the progression modulus {progression}"
                ));
            }
            let mut congruence = Congruence::new(
                exponent,
                modulus,
                progression,
                *r,
                etaq::congruence::Provenance::Conjecture("command line".into()),
            );
            let verification =
                etaq::congruence::verify_congruence(&mut congruence, *n)
                    .map_err(|e| e.to_string())?;
            let (outcome, code) = pass_fail(&verification);
            let report = Report::new(
                "verify",
                &[
                    ("k", exponent.to_string()),
                    ("ell", ell.to_string()),
                    ("s", s.to_string()),
                    ("progression", progression.to_string()),
                    ("r", r.to_string()),
                    ("N", n.to_string()),
                ],
                outcome,
                verification_value(&verification),
                verification_lines(&verification),
            );
            Ok((report, code))
        }
        Command::Theorem2 { a, b, ell_max } => {
            let congruences =
                theorem2_congruences(*a, *b, *ell_max).map_err(|e| e.to_string())?;
            let report = Report::new(
                "theorem2",
                &[
                    ("a", a.to_string()),
                    ("b", b.to_string()),
                    ("ell-max", ell_max.to_string()),
                ],
                Outcome::Data,
                json!({
                    "count": congruences.len(),
                    "congruences": congruences.iter().map(congruence_value).collect::<Vec<_>>(),
                }),
                congruences.iter().map(congruence_line).collect(),
            );
            Ok((report, 0))
        }
        Command::Discover {
            k,
            ell_min,
            ell_max,
            s,
            n,
        } => {
            check_order(*n)?;
            let exponent = parse_k(k)?;
            let congruences = discover(exponent, *ell_min, *ell_max, *s, *n)
                .map_err(|e| e.to_string())?;
            let report = Report::new(
                "discover",
                &[
                    ("k", exponent.to_string()),
                    ("ell-min", ell_min.to_string()),
                    ("ell-max", ell_max.to_string()),
                    ("s", s.to_string()),
                    ("N", n.to_string()),
                ],
                Outcome::Data,
                json!({
                    "count": congruences.len(),
                    "congruences": congruences.iter().map(congruence_value).collect::<Vec<_>>(),
                }),
                congruences.iter().map(congruence_line).collect(),
            );
            Ok((report, 0))
        }
        Command::Identity { d, n } => {
            check_order(*n)?;
            let verification = verify_identity(*d, *n).map_err(|e| e.to_string())?;
            let (outcome, code) = pass_fail(&verification);
            let report = Report::new(
                "identity",
                &[("d", d.to_string()), ("N", n.to_string())],
                outcome,
                verification_value(&verification),
                verification_lines(&verification),
            );
            Ok((report, code))
        }
        Command::Denom { k, n } => {
            check_order(*n)?;
            let exponent = parse_k(k)?;
            let verification = denominator_theorem_check(exponent, *n);
            let (outcome, code) = pass_fail(&verification);
            let report = Report::new(
                "denom",
                &[("k", exponent.to_string()), ("N", n.to_string())],
                outcome,
                verification_value(&verification),
                verification_lines(&verification),
            );
            Ok((report, code))
        }
        Command::Modproof { n } => {
            check_order(*n)?;
            let proof = modular_proof_289(*n).map_err(|e| e.to_string())?;
            let (outcome, code) = if proof.agree {
                (Outcome::Pass, 0)
            } else {
                (Outcome::Fail, 1)
            };
            let coefficients: Vec<String> =
                proof.coefficients.iter().map(|a| a.to_string()).collect();
            let mut text_lines: Vec<String> = coefficients
                .iter()
                .enumerate()
                .map(|(i, a)| format!("a{} = {a}", i + 1))
                .collect();
            text_lines.push(format!(
                "ord_17: {}",
                proof
                    .valuations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ));
            text_lines.push(format!("valuations_pass: {}", proof.valuations_pass));
            text_lines.push(format!(
                "reconstruction_checked_to: {}",
                proof.reconstruction_checked_to
            ));
            text_lines.extend(verification_lines(&proof.residue_leg));
            text_lines.push(format!("agree: {}", proof.agree));
            let report = Report::new(
                "modproof",
                &[("N", n.to_string())],
                outcome,
                json!({
                    "coefficients": coefficients,
                    "valuations": proof.valuations.to_vec(),
                    "valuations_pass": proof.valuations_pass,
                    "reconstruction_checked_to": proof.reconstruction_checked_to,
                    "residue": verification_value(&proof.residue_leg),
                    "agree": proof.agree,
                }),
                text_lines,
            );
            Ok((report, code))
        }
    }
}
