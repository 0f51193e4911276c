//! Converse bounds on equivocation, mutual information and codebook size.
//!
//! The classical Fano family takes a single block error probability and the
//! alphabet size `M` (for length-`n` words over `q` letters, `M = q^n`,
//! passed as `log2 M` so that `q^n` is never formed). The extended family
//! takes the whole Hamming-distance distribution `p = (p_0, ..., p_n)` and
//! charges each distance class only for the words it can actually reach:
//!
//! ```text
//! H(X|Y) <= H(p) + sum_{k>=1} p_k log2( C(n,k) (q-1)^k )
//!        =  n log2 q - D(p || q_ref)
//!        =  n - D(p || w_ref) + n P_s log2(q-1)
//! ```
//!
//! The three right-hand sides are exact rearrangements of one another and
//! are all provided so that they can be checked against each other.
//!
//! All values are in bits.

use crate::error::{Error, Result};
use crate::error_model::{
    block_error_probability, qsc_error_distribution_for, reference_distribution,
    symbol_error_probability, ErrorDistribution, Qsc, ReferenceKind,
};
use crate::numerics::{
    binary_entropy_unchecked, entropy, log2_binomial, neg_xlog2x, relative_entropy_log2,
    CompensatedSum,
};

/// Absolute tolerance (relative above magnitude 1) for bound identities and
/// orderings.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// Above this `log2 M`, `log2(M - 1)` is evaluated as `L + log2(1 - 2^-L)`.
const DIRECT_LOG2_M_LIMIT: f64 = 50.0;

fn check_probability(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {x} is not a probability")))
    }
}

fn check_log2_alphabet(log2_m: f64) -> Result<()> {
    if log2_m.is_finite() && log2_m >= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "alphabet size must be at least 2 (got log2 M = {log2_m})"
        )))
    }
}

fn check_q(q: u32) -> Result<()> {
    if q < 2 {
        Err(Error::domain(format!(
            "alphabet size q = {q} must be at least 2"
        )))
    } else {
        Ok(())
    }
}

/// `log2(M - 1)` given `log2 M >= 1`.
pub fn log2_m_minus_one(log2_m: f64) -> f64 {
    if log2_m > DIRECT_LOG2_M_LIMIT {
        log2_m + (-(-log2_m).exp2()).ln_1p() / std::f64::consts::LN_2
    } else {
        (log2_m.exp2() - 1.0).log2()
    }
}

/// Classical Fano: `H(X|Y) <= H(P_e) + P_e log2(M - 1)`.
pub fn fano_conditional_entropy_ub(p_error: f64, log2_m: f64) -> Result<f64> {
    check_probability("error probability", p_error)?;
    check_log2_alphabet(log2_m)?;
    let tail = if p_error == 0.0 {
        0.0
    } else {
        p_error * log2_m_minus_one(log2_m)
    };
    Ok(binary_entropy_unchecked(p_error) + tail)
}

/// `I(X;Y) >= (1 - P_e) log2 M - H(P_e)`, valid when `X` or `Y` is uniform.
///
/// Can be negative for large `P_e`; the value is returned as computed.
pub fn fano_mutual_info_lb(p_error: f64, log2_m: f64) -> Result<f64> {
    check_probability("error probability", p_error)?;
    check_log2_alphabet(log2_m)?;
    Ok((1.0 - p_error) * log2_m - binary_entropy_unchecked(p_error))
}

/// Fano codebook converse: `log2 M <= (sup I + H(eps)) / (1 - eps)`.
pub fn fano_codebook_ub(i_sup: f64, eps: f64) -> Result<f64> {
    if !(i_sup.is_finite() && i_sup >= 0.0) {
        return Err(Error::domain(format!(
            "sup I = {i_sup} must be finite and >= 0"
        )));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::domain(format!(
            "average error probability {eps} must lie in [0, 1)"
        )));
    }
    Ok((i_sup + binary_entropy_unchecked(eps)) / (1.0 - eps))
}

/// Extended Fano upper bound on `H(X|Y)` for words of length `d.n()` over a
/// `q`-letter alphabet.
pub fn ext_fano_ub(d: &ErrorDistribution, q: u32) -> Result<f64> {
    check_q(q)?;
    let n = d.n() as u64;
    let log2_wrong = f64::from(q - 1).log2();
    let mut acc = CompensatedSum::new();
    acc.add(entropy(d.probs()));
    for (k, &pk) in d.probs().iter().enumerate().skip(1) {
        if pk == 0.0 {
            continue;
        }
        let reach = log2_binomial(n, k as u64)? + k as f64 * log2_wrong;
        acc.add(pk * reach);
    }
    Ok(acc.value())
}

/// `n log2 q - D(p || q_ref)` with `q_ref` the distance law of a uniformly
/// random output.
pub fn ext_fano_relative_form(d: &ErrorDistribution, q: u32) -> Result<f64> {
    check_q(q)?;
    Ok(d.n() as f64 * f64::from(q).log2() - divergence_from_random_output(d, q)?)
}

/// `n - D(p || w_ref) + n P_s log2(q-1)` with `w_ref = Binomial(n, 1/2)`.
pub fn ext_fano_symbol_form(d: &ErrorDistribution, q: u32) -> Result<f64> {
    check_q(q)?;
    let n = d.n() as f64;
    let ps = symbol_error_probability(d);
    Ok(n - divergence_from_half_binomial(d)? + n * ps * f64::from(q - 1).log2())
}

/// `D(p || q_ref)`; also the extended lower bound on `I(X;Y)` in relative
/// entropy form.
pub fn divergence_from_random_output(d: &ErrorDistribution, q: u32) -> Result<f64> {
    let reference = reference_distribution(ReferenceKind::RandomOutput, d.n(), q)?;
    relative_entropy_log2(d.probs(), reference.log2_probs())
}

/// `D(p || w_ref)`.
pub fn divergence_from_half_binomial(d: &ErrorDistribution) -> Result<f64> {
    let reference = reference_distribution(ReferenceKind::HalfBinomial, d.n(), 2)?;
    relative_entropy_log2(d.probs(), reference.log2_probs())
}

/// Extended lower bound on `I(X;Y)`: `n log2 q` minus [`ext_fano_ub`].
///
/// Only a bound when `X` or `Y` is uniform over `q^n` words; this cannot be
/// checked from `d` and is the caller's responsibility.
pub fn ext_mutual_info_lb(d: &ErrorDistribution, q: u32) -> Result<f64> {
    Ok(d.n() as f64 * f64::from(q).log2() - ext_fano_ub(d, q)?)
}

/// Extended codebook converse with the symbol error read off `d`.
pub fn ext_codebook_ub(i_sup: f64, d: &ErrorDistribution, q: u32) -> Result<f64> {
    ext_codebook_ub_with_symbol_error(i_sup, d, q, symbol_error_probability(d))
}

/// `log2 M <= sup I - D(p || w_ref) + n (1 + P_s log2(q-1))` with an
/// explicit symbol error constraint `P_s`.
pub fn ext_codebook_ub_with_symbol_error(
    i_sup: f64,
    d: &ErrorDistribution,
    q: u32,
    symbol_error: f64,
) -> Result<f64> {
    check_q(q)?;
    if !(i_sup.is_finite() && i_sup >= 0.0) {
        return Err(Error::domain(format!(
            "sup I = {i_sup} must be finite and >= 0"
        )));
    }
    check_probability("symbol error constraint", symbol_error)?;
    let n = d.n() as f64;
    Ok(i_sup - divergence_from_half_binomial(d)?
        + n * (1.0 + symbol_error * f64::from(q - 1).log2()))
}

/// Single-letter QSC capacity,
/// `log2 q + (1 - p_e) log2(1 - p_e) + (q-1) eps log2 eps`.
pub fn qsc_capacity_per_symbol(q: u32, eps: f64) -> Result<f64> {
    let ch = Qsc::new(q, eps)?;
    Ok(f64::from(q).log2() - qsc_symbol_equivocation(&ch))
}

/// `H(1 - p_e, eps, ..., eps)`: equivocation of one QSC use under uniform
/// input.
fn qsc_symbol_equivocation(ch: &Qsc) -> f64 {
    neg_xlog2x(1.0 - ch.symbol_error()) + f64::from(ch.q() - 1) * neg_xlog2x(ch.eps())
}

/// Exact `H(X|Y)` for `n` uses of a QSC with uniform input: `n` times the
/// single-letter equivocation.
pub fn qsc_exact_conditional_entropy(n: usize, q: u32, eps: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("blocklength n must be at least 1"));
    }
    let ch = Qsc::new(q, eps)?;
    Ok(n as f64 * qsc_symbol_equivocation(&ch))
}

/// How the codebook converses are made comparable: the extended bound gets
/// `eps_e = fraction * P_s` and the Fano bound `eps_f = fraction * P_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonProtocol {
    eps_fraction: f64,
}

impl ComparisonProtocol {
    pub const DEFAULT_FRACTION: f64 = 0.5;

    pub fn new(eps_fraction: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eps_fraction) {
            return Err(Error::domain(format!(
                "eps fraction {eps_fraction} must lie in [0, 1)"
            )));
        }
        Ok(ComparisonProtocol { eps_fraction })
    }

    pub fn eps_fraction(&self) -> f64 {
        self.eps_fraction
    }
}

impl Default for ComparisonProtocol {
    fn default() -> Self {
        ComparisonProtocol {
            eps_fraction: Self::DEFAULT_FRACTION,
        }
    }
}

/// Every bound for one QSC configuration `(n, q, eps)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub q: u32,
    pub eps: f64,
    pub eps_fraction: f64,
    pub p_b: f64,
    pub p_s: f64,
    pub h_ext_ub: f64,
    pub h_rel_form: f64,
    pub h_symbol_form: f64,
    pub h_fano_ub: f64,
    pub h_exact: Option<f64>,
    pub i_ext_lb: f64,
    pub i_rel_form: f64,
    pub i_fano_lb: f64,
    pub i_exact: Option<f64>,
    pub logm_ext_ub: f64,
    pub logm_fano_ub: f64,
}

impl BoundReport {
    pub fn for_qsc(n: usize, q: u32, eps: f64, protocol: &ComparisonProtocol) -> Result<Self> {
        let ch = Qsc::new(q, eps)?;
        let d = qsc_error_distribution_for(n, &ch)?;
        let p_b = block_error_probability(&d);
        let p_s = symbol_error_probability(&d);
        let log2_m = n as f64 * f64::from(q).log2();
        let capacity = qsc_capacity_per_symbol(q, eps)?;
        let i_sup = n as f64 * capacity;
        let fraction = protocol.eps_fraction();

        let h_ext_ub = ext_fano_ub(&d, q)?;
        Ok(BoundReport {
            n,
            q,
            eps,
            eps_fraction: fraction,
            p_b,
            p_s,
            h_ext_ub,
            h_rel_form: ext_fano_relative_form(&d, q)?,
            h_symbol_form: ext_fano_symbol_form(&d, q)?,
            h_fano_ub: fano_conditional_entropy_ub(p_b, log2_m)?,
            h_exact: Some(qsc_exact_conditional_entropy(n, q, eps)?),
            i_ext_lb: log2_m - h_ext_ub,
            i_rel_form: divergence_from_random_output(&d, q)?,
            i_fano_lb: fano_mutual_info_lb(p_b, log2_m)?,
            i_exact: Some(i_sup),
            logm_ext_ub: ext_codebook_ub_with_symbol_error(i_sup, &d, q, fraction * p_s)?,
            logm_fano_ub: fano_codebook_ub(i_sup, fraction * p_b)?,
        })
    }

    /// Lists every violated report invariant; empty when all hold.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut identity = |name: &str, a: f64, b: f64| {
            if !approx_eq(a, b) {
                out.push(format!("{name}: {a} != {b}"));
            }
        };
        identity("h_ext_ub = h_rel_form", self.h_ext_ub, self.h_rel_form);
        identity(
            "h_ext_ub = h_symbol_form",
            self.h_ext_ub,
            self.h_symbol_form,
        );
        identity("i_ext_lb = i_rel_form", self.i_ext_lb, self.i_rel_form);
        if let Some(h) = self.h_exact {
            if !approx_le(h, self.h_ext_ub) {
                out.push(format!("h_exact {h} > h_ext_ub {}", self.h_ext_ub));
            }
            if !approx_le(h, self.h_fano_ub) {
                out.push(format!("h_exact {h} > h_fano_ub {}", self.h_fano_ub));
            }
        }
        if let Some(i) = self.i_exact {
            if !approx_le(self.i_ext_lb, i) {
                out.push(format!("i_exact {i} < i_ext_lb {}", self.i_ext_lb));
            }
        }
        out
    }
}

fn scaled_tolerance(reference: f64) -> f64 {
    IDENTITY_TOLERANCE * reference.abs().max(1.0)
}

/// `|a - b| <= 1e-9 max(1, |b|)`.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= scaled_tolerance(b)
}

/// `a <= b + 1e-9 max(1, |b|)`.
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + scaled_tolerance(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error_model::qsc_error_distribution;
    use crate::numerics::binary_entropy;

    const TOL: f64 = 1e-12;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn log2_m_minus_one_paths() {
        close(log2_m_minus_one(1.0), 0.0, 0.0);
        close(log2_m_minus_one(3.0), 7f64.log2(), 1e-15);
        close(log2_m_minus_one(2.0), 3f64.log2(), 1e-15);
        // both paths agree near the switch
        let l = 50.0f64;
        close(
            l + (-(-l).exp2()).ln_1p() / std::f64::consts::LN_2,
            log2_m_minus_one(l),
            1e-12,
        );
        close(log2_m_minus_one(1000.0), 1000.0, 1e-12);
    }

    #[test]
    fn fano_entropy_examples() {
        assert_eq!(fano_conditional_entropy_ub(0.0, 3.0).unwrap(), 0.0);
        assert_eq!(fano_conditional_entropy_ub(0.5, 1.0).unwrap(), 1.0);
        // H_b(0.19) + 0.19 log2 3, evaluated at 40 digits
        close(
            fano_conditional_entropy_ub(0.19, 2.0).unwrap(),
            1.002_614_335_020_917_1,
            TOL,
        );
        assert!(fano_conditional_entropy_ub(0.1, 0.5).is_err());
        assert!(fano_conditional_entropy_ub(1.1, 2.0).is_err());
    }

    #[test]
    fn fano_mutual_info_examples() {
        close(
            fano_mutual_info_lb(0.0, 5.0 * 3f64.log2()).unwrap(),
            5.0 * 3f64.log2(),
            TOL,
        );
        assert_eq!(fano_mutual_info_lb(1.0, 4.0).unwrap(), 0.0);
        close(
            fano_mutual_info_lb(0.19, 2.0).unwrap(),
            0.918_528_540_116_102_6,
            TOL,
        );
        assert!(fano_mutual_info_lb(0.9, 2.0).unwrap() < 0.0);
        assert!(fano_mutual_info_lb(0.5, 0.0).is_err());
    }

    #[test]
    fn fano_codebook_examples() {
        let full = 4.0 * 7f64.log2();
        assert_eq!(fano_codebook_ub(full, 0.0).unwrap(), full);
        assert_eq!(fano_codebook_ub(0.0, 0.5).unwrap(), 2.0);
        assert!(fano_codebook_ub(1.0, 1.0).is_err());
        assert!(fano_codebook_ub(-1.0, 0.1).is_err());
    }

    #[test]
    fn ext_fano_examples() {
        for q in [2, 3, 7] {
            let d = ErrorDistribution::error_free(4).unwrap();
            assert_eq!(ext_fano_ub(&d, q).unwrap(), 0.0);
            assert_eq!(ext_fano_relative_form(&d, q).unwrap(), 0.0);
            assert_eq!(ext_fano_symbol_form(&d, q).unwrap(), 0.0);
        }
        let d = qsc_error_distribution(2, 2, 0.1).unwrap();
        let h = ext_fano_ub(&d, 2).unwrap();
        close(h, 0.937_991_187_178_562_4, TOL);
        close(h, 2.0 * binary_entropy(0.1).unwrap(), TOL);
        close(ext_fano_relative_form(&d, 2).unwrap(), h, TOL);
        close(ext_fano_symbol_form(&d, 2).unwrap(), h, TOL);
        assert!(ext_fano_ub(&d, 1).is_err());
    }

    #[test]
    fn ext_fano_single_symbol_is_classical_fano() {
        for q in [2u32, 3, 5, 16, 256] {
            for pe in [0.0, 1e-6, 0.01, 0.3, 0.5, 0.99, 1.0] {
                let d = ErrorDistribution::new(vec![1.0 - pe, pe]).unwrap();
                let ext = ext_fano_ub(&d, q).unwrap();
                let classical = fano_conditional_entropy_ub(pe, f64::from(q).log2()).unwrap();
                assert!((ext - classical).abs() <= 4.0 * f64::EPSILON * classical.max(1.0));
            }
        }
    }

    #[test]
    fn symbol_form_single_symbol_is_frequent_fano_variant() {
        // n = 1: n - D(p||w) + P_s log2(q-1) <= 1 + P_s log2(q-1)
        let d = ErrorDistribution::new(vec![0.8, 0.2]).unwrap();
        let v = ext_fano_symbol_form(&d, 5).unwrap();
        assert!(v <= 1.0 + 0.2 * 4f64.log2());
    }

    #[test]
    fn ext_mutual_info_examples() {
        let d = ErrorDistribution::error_free(3).unwrap();
        close(ext_mutual_info_lb(&d, 5).unwrap(), 3.0 * 5f64.log2(), TOL);
        let r = reference_distribution(ReferenceKind::RandomOutput, 6, 3).unwrap();
        let d = ErrorDistribution::from_prob_vector(r.probs().clone()).unwrap();
        close(ext_mutual_info_lb(&d, 3).unwrap(), 0.0, 1e-12);
        close(divergence_from_random_output(&d, 3).unwrap(), 0.0, 1e-12);
        let d = qsc_error_distribution(2, 2, 0.1).unwrap();
        let i = ext_mutual_info_lb(&d, 2).unwrap();
        close(i, 2.0 - 0.937_991_187_178_562_4, TOL);
        close(i, 2.0 * (1.0 - binary_entropy(0.1).unwrap()), TOL);
    }

    #[test]
    fn ext_codebook_examples() {
        for q in [2u32, 7] {
            let n = 4;
            let d = ErrorDistribution::error_free(n).unwrap();
            let full = n as f64 * f64::from(q).log2();
            close(ext_codebook_ub(full, &d, q).unwrap(), full, TOL);
        }
        let d = ErrorDistribution::error_free(4).unwrap();
        assert_eq!(ext_codebook_ub(4.0, &d, 2).unwrap(), 4.0);
        assert!(ext_codebook_ub(-1.0, &d, 2).is_err());
        assert!(ext_codebook_ub_with_symbol_error(1.0, &d, 2, 1.5).is_err());
    }

    #[test]
    fn ext_codebook_matches_closed_form_expansion() {
        // n log2 q - n H(1-pe, eps, ..) - sum_k p_k [k log2 pe + (n-k) log2(1-pe)]
        //   + n eps_e log2(q-1), with eps_e = P_s / 2
        let (n, q, eps) = (30usize, 7u32, 0.001);
        let pe = 6.0 * eps;
        let d = qsc_error_distribution(n, q, eps).unwrap();
        let nf = n as f64;
        let h_sym = -(1.0 - pe) * (1.0 - pe).log2() - 6.0 * eps * eps.log2();
        let mut expect = nf * 7f64.log2() - nf * h_sym;
        for k in 0..=n {
            let kf = k as f64;
            expect -= d.p(k) * (kf * pe.log2() + (nf - kf) * (1.0 - pe).log2());
        }
        let eps_e = symbol_error_probability(&d) / 2.0;
        expect += nf * eps_e * 6f64.log2();

        let i_sup = nf * qsc_capacity_per_symbol(q, eps).unwrap();
        let got = ext_codebook_ub_with_symbol_error(i_sup, &d, q, eps_e).unwrap();
        close(got, expect, 1e-9);
        // which collapses to n (log2 q - (pe/2) log2(q-1))
        close(got, nf * (7f64.log2() - pe / 2.0 * 6f64.log2()), 1e-9);
    }

    #[test]
    fn fano_codebook_protocol_value() {
        let (n, q, eps) = (30usize, 7u32, 0.001);
        let d = qsc_error_distribution(n, q, eps).unwrap();
        let eps_f = block_error_probability(&d) / 2.0;
        let i_sup = n as f64 * qsc_capacity_per_symbol(q, eps).unwrap();
        let got = fano_codebook_ub(i_sup, eps_f).unwrap();
        // independent evaluation at 40 digits
        close(got, 90.013_472_813_953_82, 1e-9);
    }

    #[test]
    fn qsc_capacity_examples() {
        for q in [2, 3, 7, 16] {
            assert_eq!(
                qsc_capacity_per_symbol(q, 0.0).unwrap(),
                f64::from(q).log2()
            );
        }
        assert_eq!(qsc_capacity_per_symbol(2, 0.5).unwrap(), 0.0);
        close(
            qsc_capacity_per_symbol(7, 0.001).unwrap(),
            2.738_930_066_708_429_5,
            TOL,
        );
        assert!(qsc_capacity_per_symbol(3, 0.7).is_err());
    }

    #[test]
    fn qsc_exact_entropy_examples() {
        assert_eq!(qsc_exact_conditional_entropy(5, 7, 0.0).unwrap(), 0.0);
        close(
            qsc_exact_conditional_entropy(2, 2, 0.1).unwrap(),
            0.937_991_187_178_562_4,
            TOL,
        );
        assert!(qsc_exact_conditional_entropy(0, 2, 0.1).is_err());
    }

    #[test]
    fn protocol_validation() {
        assert_eq!(ComparisonProtocol::default().eps_fraction(), 0.5);
        assert!(ComparisonProtocol::new(1.0).is_err());
        assert!(ComparisonProtocol::new(-0.1).is_err());
    }

    #[test]
    fn report_for_worked_example() {
        let r = BoundReport::for_qsc(30, 7, 0.001, &ComparisonProtocol::default()).unwrap();
        assert!(r.violations().is_empty(), "{:?}", r.violations());
        close(r.h_ext_ub, r.h_exact.unwrap(), 1e-9);
        assert!(r.h_fano_ub > r.h_ext_ub);
        close(r.p_b, 0.165_182_524_103_695_03, 1e-12);
        close(r.p_s, 0.006, 1e-15);
    }

    #[test]
    fn report_single_symbol_matches_fano() {
        let r = BoundReport::for_qsc(1, 7, 0.001, &ComparisonProtocol::default()).unwrap();
        close(r.h_ext_ub, r.h_fano_ub, 1e-15);
    }

    #[test]
    fn report_error_free() {
        let r = BoundReport::for_qsc(10, 2, 0.0, &ComparisonProtocol::default()).unwrap();
        for v in [
            r.h_ext_ub,
            r.h_rel_form,
            r.h_symbol_form,
            r.h_fano_ub,
            r.h_exact.unwrap(),
        ] {
            assert_eq!(v, 0.0);
        }
        assert_eq!(r.logm_ext_ub, 10.0);
        assert_eq!(r.logm_fano_ub, 10.0);
    }
}
