//! Log-domain scalar kernels.
//!
//! Everything here works in bits: entropies use base-2 logarithms, and the
//! binomial helpers return `log2` values. The kernels stay accurate for
//! blocklengths in the tens of thousands, where the probabilities
//! themselves underflow long before their logarithms do.
//!
//! Binomial coefficients for `n <= 64` come from exact integer arithmetic.
//! Above that they use Stirling's series with Loader's tabulated
//! correction terms, the same decomposition that backs the binomial pmf
//! ([`binomial_log2_pmf`]).

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

/// Tolerance on `|sum - 1|` accepted by [`ProbVector::new`].
pub const PROB_SUM_TOLERANCE: f64 = 1e-12;

/// Largest `n` for which binomial coefficients are computed exactly.
pub const EXACT_BINOMIAL_MAX_N: u64 = 64;

/// A finite probability distribution.
///
/// Construction rejects inputs whose sum is off by more than
/// [`PROB_SUM_TOLERANCE`]; nothing is renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("probability vector must not be empty"));
        }
        for (k, &v) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(format!(
                    "element {k} = {v} is not a probability"
                )));
            }
        }
        let total = compensated_sum(values.iter().copied());
        if (total - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(Error::domain(format!(
                "probabilities sum to {total:.17}, not 1 (tolerance {PROB_SUM_TOLERANCE:e})"
            )));
        }
        Ok(ProbVector(values))
    }

    /// Uniform distribution over `len` outcomes.
    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::domain(
                "uniform distribution needs at least one outcome",
            ));
        }
        Ok(ProbVector(vec![1.0 / len as f64; len]))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

impl AsRef<[f64]> for ProbVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Neumaier-compensated accumulator.
///
/// Summation order is whatever order values are pushed in, so callers that
/// need reproducible results across thread counts must fix that order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<CompensatedSum>().value()
}

/// `-x log2 x` with the convention `0 log 0 = 0`.
#[inline]
pub(crate) fn neg_xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Base-2 logarithm of the binomial coefficient `C(n, k)`.
pub fn log2_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::domain(format!(
            "binomial index k = {k} exceeds n = {n}"
        )));
    }
    let k = k.min(n - k);
    if k == 0 {
        return Ok(0.0);
    }
    if n <= EXACT_BINOMIAL_MAX_N {
        return Ok((exact_binomial(n, k) as f64).log2());
    }
    Ok(ln_binomial_stirling(n, k) / LN_2)
}

fn exact_binomial(n: u64, k: u64) -> u128 {
    debug_assert!(n <= EXACT_BINOMIAL_MAX_N);
    let mut c: u128 = 1;
    for i in 0..k {
        // c holds C(n, i); the product with (n - i) is divisible by (i + 1).
        c = c * u128::from(n - i) / u128::from(i + 1);
    }
    c
}

/// Natural log of `C(n, k)` from Stirling's series, for `1 <= k <= n/2`.
fn ln_binomial_stirling(n: u64, k: u64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    let m = n - k;
    let mf = m as f64;
    let ratio = kf / nf;
    let leading = -kf * ratio.ln() - mf * (-ratio).ln_1p();
    let lf = (2.0 * PI).ln() + kf.ln() + (-ratio).ln_1p();
    leading - 0.5 * lf + stirling_error(n) - stirling_error(k) - stirling_error(m)
}

/// `ln(n!) - ln(sqrt(2 pi n) (n/e)^n)`.
fn stirling_error(n: u64) -> f64 {
    #[allow(clippy::excessive_precision)]
    const TABLE: [f64; 16] = [
        0.0,
        0.081_061_466_795_327_258_219_670_26,
        0.041_340_695_955_409_294_093_822_08,
        0.027_677_925_684_998_339_148_789_29,
        0.020_790_672_103_765_093_111_522_77,
        0.016_644_691_189_821_192_163_194_87,
        0.013_876_128_823_070_747_998_745_73,
        0.011_896_709_945_891_770_095_055_72,
        0.010_411_265_261_972_096_497_478_57,
        0.009_255_462_182_712_732_917_728_637,
        0.008_330_563_433_362_871_256_469_319,
        0.007_573_675_487_951_840_794_972_024,
        0.006_942_840_107_209_529_865_664_153,
        0.006_408_994_188_004_207_068_439_631,
        0.005_951_370_112_758_847_735_624_416,
        0.005_554_733_551_962_801_371_038_690,
    ];
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;

    if let Some(&v) = TABLE.get(n as usize) {
        return v;
    }
    let nf = n as f64;
    let nn = nf * nf;
    if n > 500 {
        (S0 - S1 / nn) / nf
    } else if n > 80 {
        (S0 - (S1 - S2 / nn) / nn) / nf
    } else if n > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / nf
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / nf
    }
}

/// Deviance term `x ln(x/np) + np - x`, evaluated without cancellation when
/// `x` is close to `np`.
fn deviance(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        if s.abs() < f64::MIN_POSITIVE {
            return s;
        }
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        return s;
    }
    x * (x / np).ln() + np - x
}

/// `log2 Pr(K = k)` for `K ~ Binomial(n, p)`; `-inf` for impossible outcomes.
///
/// Uses Loader's saddle-point decomposition, so the exponentiated values
/// keep full relative precision even when `n` is large.
pub fn binomial_log2_pmf(n: u64, k: u64, p: f64) -> f64 {
    binomial_ln_pmf(n, k, p) / LN_2
}

pub(crate) fn binomial_ln_pmf(n: u64, k: u64, p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    if k > n {
        return f64::NEG_INFINITY;
    }
    let q = 1.0 - p;
    if p == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if k == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let nf = n as f64;
    if k == 0 {
        return if p < 0.1 {
            -deviance(nf, nf * q) - nf * p
        } else {
            nf * q.ln()
        };
    }
    if k == n {
        return if q < 0.1 {
            -deviance(nf, nf * p) - nf * q
        } else {
            nf * p.ln()
        };
    }
    let kf = k as f64;
    let m = n - k;
    let lc = stirling_error(n)
        - stirling_error(k)
        - stirling_error(m)
        - deviance(kf, nf * p)
        - deviance(m as f64, nf * q);
    let lf = (2.0 * PI).ln() + kf.ln() + (-kf / nf).ln_1p();
    lc - 0.5 * lf
}

/// Probability mass function of `Binomial(n, p)` over `0..=n`.
pub fn binomial_pmf(n: u64, p: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "binomial parameter {p} is not a probability"
        )));
    }
    Ok((0..=n).map(|k| binomial_ln_pmf(n, k, p).exp()).collect())
}

/// Shannon entropy in bits.
pub fn entropy(p: &ProbVector) -> f64 {
    compensated_sum(p.iter().map(|&x| neg_xlog2x(x)))
}

/// Binary entropy function `H(x) = -x log2 x - (1-x) log2 (1-x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!(
            "binary entropy argument {x} outside [0, 1]"
        )));
    }
    Ok(binary_entropy_unchecked(x))
}

#[inline]
pub(crate) fn binary_entropy_unchecked(x: f64) -> f64 {
    neg_xlog2x(x) + neg_xlog2x(1.0 - x)
}

/// Relative entropy `D(p || q)` in bits.
pub fn relative_entropy(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            actual: q.len(),
        });
    }
    let mut acc = CompensatedSum::new();
    for (k, (&pk, &qk)) in p.iter().zip(q.iter()).enumerate() {
        if pk == 0.0 {
            continue;
        }
        if qk == 0.0 {
            return Err(Error::Support { index: k, p: pk });
        }
        acc.add(pk * (pk.log2() - qk.log2()));
    }
    Ok(acc.value())
}

/// Relative entropy against a reference given by its base-2 log masses.
///
/// Used where the reference underflows in linear space (for instance
/// `q^-n` at large `n`).
pub fn relative_entropy_log2(p: &ProbVector, log2_q: &[f64]) -> Result<f64> {
    if p.len() != log2_q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            actual: log2_q.len(),
        });
    }
    let mut acc = CompensatedSum::new();
    for (k, (&pk, &lq)) in p.iter().zip(log2_q).enumerate() {
        if pk == 0.0 {
            continue;
        }
        if lq == f64::NEG_INFINITY {
            return Err(Error::Support { index: k, p: pk });
        }
        acc.add(pk * (pk.log2() - lq));
    }
    Ok(acc.value())
}
