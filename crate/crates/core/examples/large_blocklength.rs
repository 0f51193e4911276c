// Log-domain evaluation at blocklengths where `q^n` overflows.
//
// Run: cargo run --example large_blocklength

use fano_ext::bounds::{ext_fano_ub, qsc_exact_conditional_entropy};
use fano_ext::error_model::qsc_error_distribution;
use fano_ext::numerics::{compensated_sum, log2_binomial};

pub fn run_example() -> fano_ext::Result<()> {
    println!(
        "log2 C(10^5, 5*10^4) = {:.6}",
        log2_binomial(100_000, 50_000)?
    );
    for n in [1_000usize, 10_000, 50_000] {
        let d = qsc_error_distribution(n, 16, 0.002)?;
        let mass = compensated_sum(d.probs().iter().copied());
        println!(
            "n={n:>6} sum p = {mass:.15} ext = {:.6} exact = {:.6}",
            ext_fano_ub(&d, 16)?,
            qsc_exact_conditional_entropy(n, 16, 0.002)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fano_ext::Result<()> {
    run_example()
}
