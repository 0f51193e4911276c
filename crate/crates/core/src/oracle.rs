//! Ground truth for the bounds: exhaustive enumeration of small
//! memoryless channels and a seeded Monte Carlo sampler for large ones.
//!
//! The enumeration deliberately walks every `(x, y)` word pair of the
//! `n`-fold product channel. It never uses distance classes or closed
//! forms, so it shares no derivation steps with the formulas it checks.
//! The input is always uniform over the `q^n` words.
//!
//! Both engines run on rayon and produce results that do not depend on the
//! number of threads: enumeration reduces per-output partial sums in a
//! fixed order, and Monte Carlo draws each batch from its own ChaCha
//! stream and merges integer counts.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::error_model::{ErrorDistribution, Qsc};
use crate::numerics::{neg_xlog2x, CompensatedSum};

const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// Trials drawn from one RNG stream.
pub const MONTE_CARLO_BATCH: u64 = 16_384;

/// Recorded in output metadata so histograms can be reproduced elsewhere.
pub const MONTE_CARLO_RNG: &str =
    "ChaCha8 (rand_chacha 0.9); seed_from_u64(seed); stream = batch index; batch = 16384 trials";

/// A discrete memoryless channel over a `q`-letter alphabet,
/// `transition(x, y) = Pr(Y = y | X = x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DmcSpec {
    q: usize,
    transition: Vec<f64>,
}

impl DmcSpec {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let q = rows.len();
        if q < 2 {
            return Err(Error::domain(
                "channel alphabet must have at least 2 letters",
            ));
        }
        let mut transition = Vec::with_capacity(q * q);
        for (x, row) in rows.into_iter().enumerate() {
            if row.len() != q {
                return Err(Error::domain(format!(
                    "row {x} has {} entries, expected {q}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::domain(format!(
                    "row {x} has entry {v} outside [0, 1]"
                )));
            }
            let sum: f64 = row.iter().copied().collect::<CompensatedSum>().value();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::domain(format!("row {x} sums to {sum}, not 1")));
            }
            transition.extend(row);
        }
        Ok(DmcSpec { q, transition })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.transition[x * self.q + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.transition[x * self.q..(x + 1) * self.q]
    }

    /// Probability that one symbol is received wrongly under uniform input.
    pub fn average_symbol_error(&self) -> f64 {
        let kept: f64 = (0..self.q)
            .map(|x| self.prob(x, x))
            .collect::<CompensatedSum>()
            .value();
        1.0 - kept / self.q as f64
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    /// Renders the plain-text matrix format accepted by [`FromStr`].
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.q);
        for x in 0..self.q {
            let row: Vec<String> = self.row(x).iter().map(|v| format!("{v}")).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }
}

/// Plain-text matrix: first non-blank line is `q`, then `q` rows of `q`
/// whitespace-separated probabilities. Lines starting with `#` are ignored.
impl FromStr for DmcSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "empty channel file".into(),
        })?;
        let q: usize = header.parse().map_err(|_| Error::Parse {
            line,
            message: format!("expected alphabet size, found {header:?}"),
        })?;

        let mut rows = Vec::with_capacity(q);
        for (line, text) in lines {
            if rows.len() == q {
                return Err(Error::Parse {
                    line,
                    message: format!("more than {q} rows"),
                });
            }
            let row = text
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        message: format!("not a number: {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.len() != q {
            return Err(Error::Parse {
                line: text.lines().count(),
                message: format!("expected {q} rows, found {}", rows.len()),
            });
        }
        DmcSpec::new(rows)
    }
}

/// Transition matrix of a q-ary symmetric channel.
pub fn qsc_spec(q: u32, eps: f64) -> Result<DmcSpec> {
    let ch = Qsc::new(q, eps)?;
    let q = q as usize;
    let keep = 1.0 - ch.symbol_error();
    let rows = (0..q)
        .map(|x| (0..q).map(|y| if x == y { keep } else { eps }).collect())
        .collect();
    DmcSpec::new(rows)
}

/// Cap on the number of `(x, y)` pairs an enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_pairs: u64,
}

impl EnumerationBudget {
    pub const DEFAULT_MAX_PAIRS: u64 = 100_000_000;

    pub fn new(max_pairs: u64) -> Self {
        EnumerationBudget { max_pairs }
    }

    /// Number of words `q^n` if `q^(2n)` pairs fit in the budget.
    pub fn check(&self, q: usize, n: usize) -> Result<usize> {
        let pairs = (q as u128).checked_pow(2 * n as u32).unwrap_or(u128::MAX);
        if pairs > u128::from(self.max_pairs) {
            return Err(Error::BudgetExceeded {
                required: pairs,
                budget: self.max_pairs,
            });
        }
        Ok((q as u128).pow(n as u32) as usize)
    }
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget::new(Self::DEFAULT_MAX_PAIRS)
    }
}

/// Exact information quantities of `n` channel uses with uniform input.
#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration {
    pub n: usize,
    pub q: usize,
    /// `H(X) = n log2 q`.
    pub h_input: f64,
    /// `H(X|Y)`, accumulated from posteriors.
    pub h_input_given_output: f64,
    pub h_output: f64,
    pub h_output_given_input: f64,
    /// `Pr(d_H(X, Y) = k)` for `k = 0..=n`.
    pub hamming: Vec<f64>,
}

impl Enumeration {
    pub fn conditional_entropy(&self) -> f64 {
        self.h_input_given_output
    }

    /// `I(X;Y) = H(X) - H(X|Y)`.
    pub fn mutual_info(&self) -> f64 {
        self.h_input - self.h_input_given_output
    }

    pub fn hamming_distribution(&self) -> Result<ErrorDistribution> {
        ErrorDistribution::new(self.hamming.clone())
    }
}

struct OutputTerms {
    joint_posterior: f64,
    joint_likelihood: f64,
    output_mass: f64,
    hamming: Vec<f64>,
}

/// Visits all `q^(2n)` word pairs of the product channel.
pub fn enumerate(spec: &DmcSpec, n: usize, budget: &EnumerationBudget) -> Result<Enumeration> {
    if n == 0 {
        return Err(Error::domain("blocklength n must be at least 1"));
    }
    let q = spec.q();
    let words = budget.check(q, n)?;
    let digits = word_digits(q, n, words);
    let word = |i: usize| &digits[i * n..(i + 1) * n];
    let input_mass = 1.0 / words as f64;

    let per_output: Vec<OutputTerms> = (0..words)
        .into_par_iter()
        .map(|yi| {
            let y = word(yi);
            let likelihood = |xi: usize| -> (f64, usize) {
                let x = word(xi);
                let mut w = 1.0;
                let mut dist = 0;
                for (&a, &b) in x.iter().zip(y) {
                    w *= spec.prob(a as usize, b as usize);
                    dist += usize::from(a != b);
                }
                (w, dist)
            };
            let total: f64 = (0..words)
                .map(|xi| likelihood(xi).0)
                .collect::<CompensatedSum>()
                .value();
            let mut posterior = CompensatedSum::new();
            let mut cond = CompensatedSum::new();
            let mut hamming = vec![0.0; n + 1];
            for xi in 0..words {
                let (w, dist) = likelihood(xi);
                if w == 0.0 {
                    continue;
                }
                let joint = w * input_mass;
                posterior.add(-joint * (w / total).log2());
                cond.add(-joint * w.log2());
                hamming[dist] += joint;
            }
            OutputTerms {
                joint_posterior: posterior.value(),
                joint_likelihood: cond.value(),
                output_mass: total * input_mass,
                hamming,
            }
        })
        .collect();

    let mut h_xy = CompensatedSum::new();
    let mut h_y_x = CompensatedSum::new();
    let mut h_y = CompensatedSum::new();
    let mut hamming = vec![CompensatedSum::new(); n + 1];
    for t in &per_output {
        h_xy.add(t.joint_posterior);
        h_y_x.add(t.joint_likelihood);
        h_y.add(neg_xlog2x(t.output_mass));
        for (acc, &v) in hamming.iter_mut().zip(&t.hamming) {
            acc.add(v);
        }
    }

    Ok(Enumeration {
        n,
        q,
        h_input: (words as f64).log2(),
        h_input_given_output: h_xy.value(),
        h_output: h_y.value(),
        h_output_given_input: h_y_x.value(),
        hamming: hamming.iter().map(CompensatedSum::value).collect(),
    })
}

fn word_digits(q: usize, n: usize, words: usize) -> Vec<u32> {
    let mut digits = vec![0u32; words * n];
    for i in 0..words {
        let mut rest = i;
        for d in digits[i * n..(i + 1) * n].iter_mut() {
            *d = (rest % q) as u32;
            rest /= q;
        }
    }
    digits
}

/// `H(X|Y)` of `n` channel uses under uniform input.
pub fn exact_conditional_entropy(
    spec: &DmcSpec,
    n: usize,
    budget: &EnumerationBudget,
) -> Result<f64> {
    Ok(enumerate(spec, n, budget)?.conditional_entropy())
}

/// `I(X;Y)` of `n` channel uses under uniform input.
pub fn exact_mutual_info(spec: &DmcSpec, n: usize, budget: &EnumerationBudget) -> Result<f64> {
    Ok(enumerate(spec, n, budget)?.mutual_info())
}

/// Exact law of the Hamming distance between input and output words.
pub fn hamming_distance_distribution(
    spec: &DmcSpec,
    n: usize,
    budget: &EnumerationBudget,
) -> Result<ErrorDistribution> {
    enumerate(spec, n, budget)?.hamming_distribution()
}

/// Histogram of Hamming distances over `trials` simulated transmissions.
///
/// Each trial draws a uniform input word, passes every symbol through its
/// transition row and counts disagreements. Deterministic in `seed`,
/// independent of the thread count; see [`MONTE_CARLO_RNG`].
pub fn monte_carlo_error_histogram(
    spec: &DmcSpec,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::domain("blocklength n must be at least 1"));
    }
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    let q = spec.q();
    let sampler = RowSampler::new(spec);
    let batches = trials.div_ceil(MONTE_CARLO_BATCH);

    let hist = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = MONTE_CARLO_BATCH.min(trials - b * MONTE_CARLO_BATCH);
            let mut hist = vec![0u64; n + 1];
            for _ in 0..count {
                let mut dist = 0;
                for _ in 0..n {
                    let x = rng.random_range(0..q);
                    let y = sampler.sample(x, rng.random::<f64>());
                    dist += usize::from(x != y);
                }
                hist[dist] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(hist)
}

/// Inverse-CDF sampling of transition rows.
struct RowSampler {
    q: usize,
    cdf: Vec<f64>,
    last_positive: Vec<usize>,
}

impl RowSampler {
    fn new(spec: &DmcSpec) -> Self {
        let q = spec.q();
        let mut cdf = Vec::with_capacity(q * q);
        let mut last_positive = Vec::with_capacity(q);
        for x in 0..q {
            let mut acc = 0.0;
            let mut last = 0;
            for (y, &p) in spec.row(x).iter().enumerate() {
                acc += p;
                cdf.push(acc);
                if p > 0.0 {
                    last = y;
                }
            }
            last_positive.push(last);
        }
        RowSampler {
            q,
            cdf,
            last_positive,
        }
    }

    fn sample(&self, x: usize, u: f64) -> usize {
        let row = &self.cdf[x * self.q..(x + 1) * self.q];
        row.iter()
            .position(|&c| u < c)
            .unwrap_or(self.last_positive[x])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::binary_entropy;

    fn budget() -> EnumerationBudget {
        EnumerationBudget::default()
    }

    fn identity(q: usize) -> DmcSpec {
        DmcSpec::new(
            (0..q)
                .map(|x| (0..q).map(|y| if x == y { 1.0 } else { 0.0 }).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn qsc_spec_examples() {
        assert_eq!(qsc_spec(2, 0.0).unwrap(), identity(2));
        let s = qsc_spec(2, 0.1).unwrap();
        assert_eq!(s.row(0), &[0.9, 0.1]);
        assert_eq!(s.row(1), &[0.1, 0.9]);
        let s = qsc_spec(7, 0.001).unwrap();
        for x in 0..7 {
            assert!((s.prob(x, x) - 0.994).abs() < 1e-15);
            let sum: f64 = s.row(x).iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
        assert!(qsc_spec(3, 0.6).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(DmcSpec::new(vec![vec![1.0]]).is_err());
        assert!(DmcSpec::new(vec![vec![0.5, 0.4], vec![0.5, 0.5]]).is_err());
        assert!(DmcSpec::new(vec![vec![0.5, 0.5], vec![0.5]]).is_err());
        assert!(DmcSpec::new(vec![vec![1.5, -0.5], vec![0.5, 0.5]]).is_err());
    }

    #[test]
    fn parse_matrix_text() {
        let s: DmcSpec = "# asymmetric\n2\n0.9 0.1\n0.2   0.8\n".parse().unwrap();
        assert_eq!(s.row(1), &[0.2, 0.8]);
        let back: DmcSpec = s.to_text().parse().unwrap();
        assert_eq!(back, s);

        assert!(matches!("".parse::<DmcSpec>(), Err(Error::Parse { .. })));
        assert!(matches!(
            "x\n".parse::<DmcSpec>(),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            "2\n0.5 0.5\n".parse::<DmcSpec>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "2\n0.5 0.5\n0.5 a\n".parse::<DmcSpec>(),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            "2\n0.5 0.5\n0.5 0.5\n1 0\n".parse::<DmcSpec>(),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn budget_refusal_names_requirement() {
        let s = qsc_spec(3, 0.1).unwrap();
        let err = enumerate(&s, 5, &EnumerationBudget::new(1000)).unwrap_err();
        match err {
            Error::BudgetExceeded { required, budget } => {
                assert_eq!(required, 59049);
                assert_eq!(budget, 1000);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(EnumerationBudget::new(59049).check(3, 5).unwrap(), 243);
    }

    #[test]
    fn identity_channel_has_no_equivocation() {
        for n in 1..=4 {
            let e = enumerate(&identity(3), n, &budget()).unwrap();
            assert_eq!(e.conditional_entropy(), 0.0);
            assert!((e.mutual_info() - n as f64 * 3f64.log2()).abs() < 1e-12);
            assert_eq!(e.hamming[0], 1.0);
        }
    }

    #[test]
    fn bsc_single_use() {
        let h = exact_conditional_entropy(&qsc_spec(2, 0.1).unwrap(), 1, &budget()).unwrap();
        assert!((h - binary_entropy(0.1).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn useless_bsc_carries_nothing() {
        let i = exact_mutual_info(&qsc_spec(2, 0.5).unwrap(), 2, &budget()).unwrap();
        assert!(i.abs() < 1e-12);
    }

    #[test]
    fn chain_rule_holds() {
        let s = DmcSpec::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
        let e = enumerate(&s, 3, &budget()).unwrap();
        let chained = e.h_input + e.h_output_given_input - e.h_output;
        assert!((chained - e.conditional_entropy()).abs() < 1e-12);
    }

    #[test]
    fn hamming_examples() {
        let d = hamming_distance_distribution(&identity(2), 3, &budget()).unwrap();
        assert_eq!(d.probs().as_slice(), &[1.0, 0.0, 0.0, 0.0]);

        let d = hamming_distance_distribution(&qsc_spec(2, 0.1).unwrap(), 2, &budget()).unwrap();
        for (a, b) in d.probs().iter().zip([0.81, 0.18, 0.01]) {
            assert!((a - b).abs() < 1e-15);
        }

        // Hand enumeration of the 16 pairs: each position errs with
        // probability (0.1 + 0.2) / 2 under uniform input.
        let s = DmcSpec::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
        let d = hamming_distance_distribution(&s, 2, &budget()).unwrap();
        for (a, b) in d.probs().iter().zip([0.7225, 0.255, 0.0225]) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        assert!((s.average_symbol_error() - 0.15).abs() < 1e-15);
    }

    #[test]
    fn monte_carlo_identity_channel() {
        let h = monte_carlo_error_histogram(&identity(4), 5, 1000, 7).unwrap();
        assert_eq!(h, vec![1000, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn monte_carlo_is_seed_deterministic() {
        let s = qsc_spec(3, 0.1).unwrap();
        let a = monte_carlo_error_histogram(&s, 6, 40_000, 99).unwrap();
        let b = monte_carlo_error_histogram(&s, 6, 40_000, 99).unwrap();
        let c = monte_carlo_error_histogram(&s, 6, 40_000, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.iter().sum::<u64>(), 40_000);
    }

    #[test]
    fn monte_carlo_is_thread_count_independent() {
        let s = qsc_spec(2, 0.2).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| monte_carlo_error_histogram(&s, 8, 100_000, 5).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn enumeration_is_thread_count_independent() {
        let s = DmcSpec::new(vec![
            vec![0.7, 0.2, 0.1],
            vec![0.05, 0.9, 0.05],
            vec![0.3, 0.3, 0.4],
        ])
        .unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| enumerate(&s, 4, &budget()).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn monte_carlo_rejects_degenerate_requests() {
        let s = qsc_spec(2, 0.1).unwrap();
        assert!(monte_carlo_error_histogram(&s, 0, 10, 1).is_err());
        assert!(monte_carlo_error_histogram(&s, 3, 0, 1).is_err());
    }
}
