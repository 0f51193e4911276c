// Extended versus classical Fano on the q-ary symmetric channel.
//
// Run: cargo run --example extended_fano

use fano_ext::bounds::{ext_fano_ub, fano_conditional_entropy_ub, qsc_exact_conditional_entropy};
use fano_ext::error_model::{block_error_probability, qsc_error_distribution};

pub fn run_example() -> fano_ext::Result<()> {
    let (q, eps) = (7u32, 0.001);
    println!(
        "{:>4} {:>14} {:>14} {:>14}",
        "n", "exact", "extended", "classical"
    );
    for n in [1usize, 2, 5, 10, 30, 100] {
        let d = qsc_error_distribution(n, q, eps)?;
        let log2_m = n as f64 * f64::from(q).log2();
        let extended = ext_fano_ub(&d, q)?;
        let classical = fano_conditional_entropy_ub(block_error_probability(&d), log2_m)?;
        let exact = qsc_exact_conditional_entropy(n, q, eps)?;
        println!("{n:>4} {exact:>14.9} {extended:>14.9} {classical:>14.9}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fano_ext::Result<()> {
    run_example()
}
