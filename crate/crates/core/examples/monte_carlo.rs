// Seeded Monte Carlo estimate of the Hamming-distance histogram where
// enumeration is out of reach.
//
// Run: cargo run --release --example monte_carlo

use fano_ext::error_model::{empirical_error_distribution, qsc_error_distribution};
use fano_ext::oracle::{monte_carlo_error_histogram, qsc_spec};

pub fn run_example() -> fano_ext::Result<()> {
    let (q, eps, n) = (7u32, 0.001, 30usize);
    let hist = monte_carlo_error_histogram(&qsc_spec(q, eps)?, n, 200_000, 7)?;
    let empirical = empirical_error_distribution(&hist, n)?;
    let formula = qsc_error_distribution(n, q, eps)?;
    for k in 0..=4 {
        println!(
            "p_{k}: empirical {:.6} formula {:.6}",
            empirical.p(k),
            formula.p(k)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fano_ext::Result<()> {
    run_example()
}
