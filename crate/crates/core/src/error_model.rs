//! Hamming-distance error distributions and the reference laws they are
//! compared against.

use crate::error::{Error, Result};
use crate::numerics::{
    binomial_ln_pmf, compensated_sum, log2_binomial, CompensatedSum, ProbVector,
};

/// Slack allowed on `(q - 1) eps <= 1` before a channel is rejected, so that
/// `eps = 1/(q-1)` computed in floating point is still accepted.
const SYMBOL_ERROR_SLACK: f64 = 1e-12;

/// A validated q-ary symmetric channel.
///
/// Each input letter is kept with probability `1 - (q-1) eps` and replaced
/// by each of the other `q - 1` letters with probability `eps`. The total
/// symbol error probability `(q-1) eps` is computed once here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qsc {
    q: u32,
    eps: f64,
    symbol_error: f64,
}

impl Qsc {
    pub fn new(q: u32, eps: f64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidChannel {
                q,
                eps,
                reason: "alphabet size must be at least 2",
            });
        }
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::InvalidChannel {
                q,
                eps,
                reason: "crossover probability must be a finite non-negative number",
            });
        }
        let symbol_error = f64::from(q - 1) * eps;
        if symbol_error > 1.0 + SYMBOL_ERROR_SLACK {
            return Err(Error::InvalidChannel {
                q,
                eps,
                reason: "(q - 1) * eps exceeds 1",
            });
        }
        Ok(Qsc {
            q,
            eps,
            symbol_error: symbol_error.min(1.0),
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `p_e = (q - 1) eps`.
    pub fn symbol_error(&self) -> f64 {
        self.symbol_error
    }
}

/// Law of the Hamming distance between a transmitted and a received word of
/// length `n`: `probs[k] = Pr(d_H(X, Y) = k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorDistribution {
    n: usize,
    probs: ProbVector,
    qsc: Option<Qsc>,
}

impl ErrorDistribution {
    /// Wraps `n + 1` probabilities; `n` is inferred from the length.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::from_prob_vector(ProbVector::new(probs)?)
    }

    pub fn from_prob_vector(probs: ProbVector) -> Result<Self> {
        let n = probs.len().saturating_sub(1);
        if n == 0 {
            return Err(Error::domain("error distribution needs blocklength n >= 1"));
        }
        Ok(ErrorDistribution {
            n,
            probs,
            qsc: None,
        })
    }

    /// All mass on distance zero.
    pub fn error_free(n: usize) -> Result<Self> {
        check_blocklength(n)?;
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        Self::new(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &ProbVector {
        &self.probs
    }

    pub fn p(&self, k: usize) -> f64 {
        self.probs[k]
    }

    /// The channel this distribution was generated from, if any.
    pub fn qsc(&self) -> Option<&Qsc> {
        self.qsc.as_ref()
    }

    /// Expected Hamming distance `sum k p_k`.
    pub fn mean(&self) -> f64 {
        compensated_sum(self.probs.iter().enumerate().map(|(k, &p)| k as f64 * p))
    }
}

fn check_blocklength(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::domain("blocklength n must be at least 1"))
    } else {
        Ok(())
    }
}

/// Hamming-distance law of `n` independent uses of a QSC:
/// `Binomial(n, (q-1) eps)`.
pub fn qsc_error_distribution(n: usize, q: u32, eps: f64) -> Result<ErrorDistribution> {
    let channel = Qsc::new(q, eps)?;
    qsc_error_distribution_for(n, &channel)
}

pub fn qsc_error_distribution_for(n: usize, channel: &Qsc) -> Result<ErrorDistribution> {
    check_blocklength(n)?;
    let pe = channel.symbol_error();
    let probs = (0..=n as u64)
        .map(|k| binomial_ln_pmf(n as u64, k, pe).exp())
        .collect();
    let mut d = ErrorDistribution::new(probs)?;
    d.qsc = Some(*channel);
    Ok(d)
}

/// `P_b = Pr(X != Y) = 1 - p_0`.
pub fn block_error_probability(d: &ErrorDistribution) -> f64 {
    1.0 - d.p(0)
}

/// `P_s = (1/n) sum_k k p_k`, the expected fraction of wrong symbols.
pub fn symbol_error_probability(d: &ErrorDistribution) -> f64 {
    d.mean() / d.n() as f64
}

/// Which reference law to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceKind {
    /// Output uniform and independent of the input:
    /// `C(n,k) (q-1)^k / q^n`.
    RandomOutput,
    /// Symbol errors with probability one half: `C(n,k) / 2^n`.
    HalfBinomial,
}

/// A reference distribution over Hamming distances `0..=n`.
///
/// Linear masses are exposed through [`probs`](Self::probs); divergences
/// use the `log2` masses, which stay finite where `q^-n` underflows.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceDistribution {
    kind: ReferenceKind,
    n: usize,
    q: Option<u32>,
    probs: ProbVector,
    log2_probs: Vec<f64>,
}

impl ReferenceDistribution {
    pub fn kind(&self) -> ReferenceKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Alphabet size; `None` for [`ReferenceKind::HalfBinomial`], which does
    /// not depend on it.
    pub fn q(&self) -> Option<u32> {
        self.q
    }

    pub fn probs(&self) -> &ProbVector {
        &self.probs
    }

    pub fn log2_probs(&self) -> &[f64] {
        &self.log2_probs
    }
}

/// Builds one of the two reference laws for blocklength `n`. `q` is only
/// read for [`ReferenceKind::RandomOutput`].
pub fn reference_distribution(
    kind: ReferenceKind,
    n: usize,
    q: u32,
) -> Result<ReferenceDistribution> {
    check_blocklength(n)?;
    let nn = n as u64;
    let (success, log2_probs, q) = match kind {
        ReferenceKind::RandomOutput => {
            if q < 2 {
                return Err(Error::domain(format!(
                    "alphabet size q = {q} must be at least 2"
                )));
            }
            let log2_wrong = f64::from(q - 1).log2();
            let log2_total = n as f64 * f64::from(q).log2();
            let logs = (0..=nn)
                .map(|k| log2_binomial(nn, k).map(|c| c + k as f64 * log2_wrong - log2_total))
                .collect::<Result<Vec<_>>>()?;
            (f64::from(q - 1) / f64::from(q), logs, Some(q))
        }
        ReferenceKind::HalfBinomial => {
            let logs = (0..=nn)
                .map(|k| log2_binomial(nn, k).map(|c| c - n as f64))
                .collect::<Result<Vec<_>>>()?;
            (0.5, logs, None)
        }
    };
    let probs = (0..=nn)
        .map(|k| binomial_ln_pmf(nn, k, success).exp())
        .collect();
    Ok(ReferenceDistribution {
        kind,
        n,
        q,
        probs: ProbVector::new(probs)?,
        log2_probs,
    })
}

/// Normalizes a histogram of observed Hamming distances.
pub fn empirical_error_distribution(counts: &[u64], n: usize) -> Result<ErrorDistribution> {
    check_blocklength(n)?;
    if counts.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            actual: counts.len(),
        });
    }
    let total: u128 = counts.iter().map(|&c| u128::from(c)).sum();
    if total == 0 {
        return Err(Error::domain("histogram has zero total count"));
    }
    let total = total as f64;
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    debug_assert!((probs.iter().copied().collect::<CompensatedSum>().value() - 1.0).abs() < 1e-12);
    ErrorDistribution::new(probs)
}
