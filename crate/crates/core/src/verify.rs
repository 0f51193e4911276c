//! Oracle-versus-formula verification.
//!
//! Full enumeration compares exact values against the closed forms and
//! bounds at `1e-9`. Monte Carlo compares an empirical distance histogram
//! against the binomial law, bin by bin, at three standard errors.

use std::fmt::Write as _;

use crate::bounds::{
    ext_fano_ub, ext_mutual_info_lb, fano_conditional_entropy_ub, qsc_capacity_per_symbol,
    qsc_exact_conditional_entropy, IDENTITY_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::error_model::{block_error_probability, qsc_error_distribution, ErrorDistribution};
use crate::numerics::binomial_pmf;
use crate::oracle::{
    enumerate, monte_carlo_error_histogram, qsc_spec, DmcSpec, EnumerationBudget, MONTE_CARLO_RNG,
};
use crate::sweep::format_sig;

/// Monte Carlo checks pass within this many standard errors.
pub const MONTE_CARLO_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    FullEnumeration,
    MonteCarlo { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `|oracle - formula| <= tolerance`
    Equal,
    /// `oracle <= formula + tolerance`
    AtMost,
    /// `oracle >= formula - tolerance`
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub oracle: f64,
    pub formula: f64,
    pub relation: Relation,
    pub tolerance: f64,
}

impl Check {
    fn new(
        name: impl Into<String>,
        oracle: f64,
        formula: f64,
        relation: Relation,
        tolerance: f64,
    ) -> Self {
        Check {
            name: name.into(),
            oracle,
            formula,
            relation,
            tolerance,
        }
    }

    pub fn difference(&self) -> f64 {
        (self.oracle - self.formula).abs()
    }

    pub fn passed(&self) -> bool {
        match self.relation {
            Relation::Equal => self.difference() <= self.tolerance,
            Relation::AtMost => self.oracle <= self.formula + self.tolerance,
            Relation::AtLeast => self.oracle >= self.formula - self.tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub channel: String,
    pub n: usize,
    pub mode: VerifyMode,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Largest `|oracle - formula|` over the equality checks.
    pub fn max_equality_difference(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.relation == Relation::Equal)
            .map(Check::difference)
            .fold(0.0, f64::max)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# channel: {}", self.channel);
        let _ = writeln!(s, "# n: {}", self.n);
        match self.mode {
            VerifyMode::FullEnumeration => {
                let _ = writeln!(s, "# mode: full-enum");
            }
            VerifyMode::MonteCarlo { trials, seed } => {
                let _ = writeln!(s, "# mode: monte-carlo");
                let _ = writeln!(s, "# trials: {trials}");
                let _ = writeln!(s, "# seed: {seed}");
                let _ = writeln!(s, "# rng: {MONTE_CARLO_RNG}");
            }
        }
        let name_width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let rel = match c.relation {
                Relation::Equal => "==",
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
            };
            let _ = writeln!(
                s,
                "{:<4} {:<name_width$}  oracle {:>20}  {rel}  formula {:>20}  |diff| {:>12}  tol {}",
                if c.passed() { "ok" } else { "FAIL" },
                c.name,
                format_sig(c.oracle),
                format_sig(c.formula),
                format_sig(c.difference()),
                format_sig(c.tolerance),
            );
        }
        let _ = writeln!(
            s,
            "{}: {} checks, {} failed, max |diff| on equalities {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.failures().count(),
            format_sig(self.max_equality_difference()),
        );
        s
    }
}

/// Verifies the QSC closed forms and the tightness of the extended bound.
pub fn verify_qsc(
    q: u32,
    eps: f64,
    n: usize,
    mode: VerifyMode,
    budget: &EnumerationBudget,
) -> Result<VerificationReport> {
    let spec = qsc_spec(q, eps)?;
    let formula = qsc_error_distribution(n, q, eps)?;
    let channel = format!("qsc(q={q}, eps={})", format_sig(eps));
    let checks = match mode {
        VerifyMode::FullEnumeration => {
            let e = enumerate(&spec, n, budget)?;
            let oracle = e.hamming_distribution()?;
            let tol = IDENTITY_TOLERANCE;
            let h = e.conditional_entropy();
            let i = e.mutual_info();
            let log2_m = n as f64 * f64::from(q).log2();
            let mut checks = distribution_checks(&oracle, &formula, |_| tol);
            checks.extend([
                Check::new(
                    "H(X|Y) closed form",
                    h,
                    qsc_exact_conditional_entropy(n, q, eps)?,
                    Relation::Equal,
                    tol,
                ),
                Check::new(
                    "H(X|Y) extended bound",
                    h,
                    ext_fano_ub(&formula, q)?,
                    Relation::Equal,
                    tol,
                ),
                Check::new(
                    "H(X|Y) <= Fano bound",
                    h,
                    fano_conditional_entropy_ub(block_error_probability(&formula), log2_m)?,
                    Relation::AtMost,
                    tol,
                ),
                Check::new(
                    "I(X;Y) n * capacity",
                    i,
                    n as f64 * qsc_capacity_per_symbol(q, eps)?,
                    Relation::Equal,
                    tol,
                ),
                Check::new(
                    "I(X;Y) extended bound",
                    i,
                    ext_mutual_info_lb(&formula, q)?,
                    Relation::Equal,
                    tol,
                ),
            ]);
            checks
        }
        VerifyMode::MonteCarlo { trials, seed } => {
            monte_carlo_checks(&spec, n, trials, seed, formula.probs().as_slice())?
        }
    };
    Ok(VerificationReport {
        channel,
        n,
        mode,
        checks,
    })
}

/// Verifies the bound sandwich for an arbitrary memoryless channel.
///
/// Under uniform input every symbol is received wrongly with the same
/// probability, so the distance law is binomial in the channel's average
/// symbol error; the extended bounds hold as inequalities.
pub fn verify_channel(
    spec: &DmcSpec,
    n: usize,
    mode: VerifyMode,
    budget: &EnumerationBudget,
) -> Result<VerificationReport> {
    let q = u32::try_from(spec.q()).map_err(|_| Error::domain("alphabet too large"))?;
    let binomial = binomial_pmf(n as u64, spec.average_symbol_error().clamp(0.0, 1.0))?;
    let channel = format!("dmc(q={q})");
    let checks = match mode {
        VerifyMode::FullEnumeration => {
            let e = enumerate(spec, n, budget)?;
            let single = enumerate(spec, 1, budget)?;
            let oracle = e.hamming_distribution()?;
            let tol = IDENTITY_TOLERANCE;
            let h = e.conditional_entropy();
            let i = e.mutual_info();
            let log2_m = n as f64 * f64::from(q).log2();
            let mut checks =
                distribution_checks(&oracle, &ErrorDistribution::new(binomial)?, |_| tol);
            checks.extend([
                Check::new(
                    "H(X|Y) memoryless",
                    h,
                    n as f64 * single.conditional_entropy(),
                    Relation::Equal,
                    tol,
                ),
                Check::new(
                    "H(X|Y) <= extended bound",
                    h,
                    ext_fano_ub(&oracle, q)?,
                    Relation::AtMost,
                    tol,
                ),
                Check::new(
                    "H(X|Y) <= Fano bound",
                    h,
                    fano_conditional_entropy_ub(block_error_probability(&oracle), log2_m)?,
                    Relation::AtMost,
                    tol,
                ),
                Check::new(
                    "I(X;Y) >= extended bound",
                    i,
                    ext_mutual_info_lb(&oracle, q)?,
                    Relation::AtLeast,
                    tol,
                ),
            ]);
            checks
        }
        VerifyMode::MonteCarlo { trials, seed } => {
            monte_carlo_checks(spec, n, trials, seed, &binomial)?
        }
    };
    Ok(VerificationReport {
        channel,
        n,
        mode,
        checks,
    })
}

fn distribution_checks(
    oracle: &ErrorDistribution,
    formula: &ErrorDistribution,
    tol: impl Fn(usize) -> f64,
) -> Vec<Check> {
    oracle
        .probs()
        .iter()
        .zip(formula.probs().iter())
        .enumerate()
        .map(|(k, (&o, &f))| Check::new(format!("p_{k}"), o, f, Relation::Equal, tol(k)))
        .collect()
}

fn standard_error(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

fn monte_carlo_checks(
    spec: &DmcSpec,
    n: usize,
    trials: u64,
    seed: u64,
    expected: &[f64],
) -> Result<Vec<Check>> {
    let hist = monte_carlo_error_histogram(spec, n, trials, seed)?;
    let t = trials as f64;
    let mut checks: Vec<Check> = hist
        .iter()
        .zip(expected)
        .enumerate()
        .map(|(k, (&count, &p))| {
            Check::new(
                format!("p_{k}"),
                count as f64 / t,
                p,
                Relation::Equal,
                MONTE_CARLO_SIGMAS * standard_error(p, trials),
            )
        })
        .collect();
    let p_b = 1.0 - expected[0];
    checks.push(Check::new(
        "P_b",
        1.0 - hist[0] as f64 / t,
        p_b,
        Relation::Equal,
        MONTE_CARLO_SIGMAS * standard_error(p_b, trials),
    ));
    Ok(checks)
}
