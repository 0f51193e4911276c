use num_bigint::BigUint;

use fano_ext::bounds::{
    approx_le, divergence_from_half_binomial, ext_fano_ub, ext_mutual_info_lb,
    fano_conditional_entropy_ub, qsc_capacity_per_symbol, qsc_exact_conditional_entropy,
};
use fano_ext::error_model::{
    block_error_probability, empirical_error_distribution, qsc_error_distribution,
};
use fano_ext::numerics::{binary_entropy, log2_binomial, EXACT_BINOMIAL_MAX_N};
use fano_ext::oracle::{
    enumerate, exact_conditional_entropy, exact_mutual_info, hamming_distance_distribution,
    monte_carlo_error_histogram, qsc_spec,
};
use fano_ext::{DmcSpec, EnumerationBudget};

fn big_binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn big_log2(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        let f: f64 = x.to_string().parse().unwrap();
        return f.log2();
    }
    let shift = bits - 60;
    let top: f64 = (x >> shift).to_string().parse().unwrap();
    top.log2() + shift as f64
}

#[test]
fn log2_binomial_against_big_integers() {
    let exact = big_log2(&big_binomial(1000, 500));
    let got = log2_binomial(1000, 500).unwrap();
    assert!((got - 994.6909991192327).abs() <= 1e-9 * 994.7);
    assert!((got - exact).abs() <= 1e-9 * exact);

    let lo = EXACT_BINOMIAL_MAX_N - 4;
    for n in lo..=lo + 200 {
        for k in [0, 1, 2, n / 7, n / 3, n / 2, n - 1, n] {
            let want = big_log2(&big_binomial(n, k));
            let got = log2_binomial(n, k).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want.max(1.0),
                "C({n},{k}): {got} vs {want}"
            );
        }
    }
    for (n, k) in [(5_000u64, 2_500u64), (20_000, 123), (20_000, 9_999)] {
        let want = big_log2(&big_binomial(n, k));
        let got = log2_binomial(n, k).unwrap();
        assert!(
            (got - want).abs() <= 1e-12 * want,
            "C({n},{k}): {got} vs {want}"
        );
    }
}

#[test]
fn enumerated_distance_law_matches_formula() {
    let budget = EnumerationBudget::default();
    for q in [2u32, 3] {
        for eps in [0.0, 0.03, 0.1, 0.25, 1.0 / f64::from(q)] {
            for n in 1..=4 {
                let oracle =
                    hamming_distance_distribution(&qsc_spec(q, eps).unwrap(), n, &budget).unwrap();
                let formula = qsc_error_distribution(n, q, eps).unwrap();
                for k in 0..=n {
                    assert!(
                        (oracle.p(k) - formula.p(k)).abs() <= 1e-12,
                        "q={q} eps={eps} n={n} k={k}"
                    );
                }
            }
        }
    }
}

#[test]
fn closed_form_equivocation_matches_enumeration() {
    let budget = EnumerationBudget::default();
    let oracle = exact_conditional_entropy(&qsc_spec(3, 0.05).unwrap(), 3, &budget).unwrap();
    let closed = qsc_exact_conditional_entropy(3, 3, 0.05).unwrap();
    assert!((oracle - closed).abs() <= 1e-9);

    let bsc = exact_conditional_entropy(&qsc_spec(2, 0.1).unwrap(), 2, &budget).unwrap();
    assert!((bsc - 2.0 * binary_entropy(0.1).unwrap()).abs() <= 1e-12);
}

#[test]
fn capacity_from_enumeration() {
    let budget = EnumerationBudget::default();
    let i2 = exact_mutual_info(&qsc_spec(7, 0.001).unwrap(), 2, &budget).unwrap();
    let c = qsc_capacity_per_symbol(7, 0.001).unwrap();
    assert!((i2 - 2.0 * c).abs() <= 1e-9);
    assert!((c - 2.738_930_066_708_429_5).abs() <= 1e-12);

    let useless = exact_mutual_info(&qsc_spec(3, 1.0 / 3.0).unwrap(), 3, &budget).unwrap();
    assert!(useless.abs() <= 1e-12);
}

fn asymmetric() -> DmcSpec {
    DmcSpec::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap()
}

#[test]
fn asymmetric_channel_is_strictly_inside_the_bounds() {
    let budget = EnumerationBudget::default();
    for n in 1..=6 {
        let e = enumerate(&asymmetric(), n, &budget).unwrap();
        let d = e.hamming_distribution().unwrap();
        let ext = ext_fano_ub(&d, 2).unwrap();
        assert!(ext - e.conditional_entropy() > 1e-6, "n={n}");
        assert!(
            e.mutual_info() - ext_mutual_info_lb(&d, 2).unwrap() > 1e-6,
            "n={n}"
        );
        let fano = fano_conditional_entropy_ub(block_error_probability(&d), n as f64).unwrap();
        assert!(approx_le(ext, fano));
    }
}

#[test]
fn enumeration_is_memoryless_and_obeys_chain_rule() {
    let budget = EnumerationBudget::default();
    let spec = DmcSpec::new(vec![
        vec![0.7, 0.2, 0.1],
        vec![0.05, 0.9, 0.05],
        vec![0.3, 0.3, 0.4],
    ])
    .unwrap();
    let one = enumerate(&spec, 1, &budget).unwrap();
    for n in 2..=4 {
        let e = enumerate(&spec, n, &budget).unwrap();
        let scale = n as f64;
        assert!((e.conditional_entropy() - scale * one.conditional_entropy()).abs() <= 1e-9);
        assert!((e.mutual_info() - scale * one.mutual_info()).abs() <= 1e-9);
        let via_output = e.h_output - e.h_output_given_input;
        assert!((via_output - e.mutual_info()).abs() <= 1e-9);
    }
}

#[test]
fn bound_sandwich_on_small_qsc() {
    let budget = EnumerationBudget::default();
    for q in [2u32, 3] {
        for eps in [0.0, 0.01, 0.2, 0.45 / f64::from(q - 1)] {
            for n in 1..=4 {
                let e = enumerate(&qsc_spec(q, eps).unwrap(), n, &budget).unwrap();
                let d = qsc_error_distribution(n, q, eps).unwrap();
                let log2_m = n as f64 * f64::from(q).log2();
                let h = e.conditional_entropy();
                let ext = ext_fano_ub(&d, q).unwrap();
                let fano =
                    fano_conditional_entropy_ub(block_error_probability(&d), log2_m).unwrap();
                assert!(
                    approx_le(h, ext) && approx_le(ext, fano),
                    "q={q} eps={eps} n={n}"
                );
            }
        }
    }
}

#[test]
fn monte_carlo_histogram_of_bsc() {
    let (n, eps, trials) = (2usize, 0.1, 1_000_000u64);
    let hist = monte_carlo_error_histogram(&qsc_spec(2, eps).unwrap(), n, trials, 2024).unwrap();
    assert_eq!(hist.iter().sum::<u64>(), trials);
    let empirical = empirical_error_distribution(&hist, n).unwrap();
    for (k, want) in [0.81, 0.18, 0.01].into_iter().enumerate() {
        let se = (want * (1.0 - want) / trials as f64).sqrt();
        assert!((empirical.p(k) - want).abs() <= 3.0 * se, "k={k}");
    }
    let again = monte_carlo_error_histogram(&qsc_spec(2, eps).unwrap(), n, trials, 2024).unwrap();
    assert_eq!(hist, again);
}

#[test]
fn half_binomial_divergence_of_bsc() {
    for n in [1usize, 5, 40, 400] {
        let d = qsc_error_distribution(n, 2, 0.1).unwrap();
        let want = n as f64 * (1.0 - binary_entropy(0.1).unwrap());
        let got = divergence_from_half_binomial(&d).unwrap();
        assert!(
            (got - want).abs() <= 1e-9 * want.max(1.0),
            "n={n}: {got} vs {want}"
        );
    }
}
