// Mutual-information lower bounds and codebook-size upper bounds under the
// halved error constraints.
//
// Run: cargo run --example mutual_info_and_codebook

use fano_ext::{BoundReport, ComparisonProtocol};

pub fn run_example() -> fano_ext::Result<()> {
    let protocol = ComparisonProtocol::default();
    println!(
        "{:>4} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "n", "I exact", "I ext", "I fano", "logM ext", "logM fano"
    );
    for n in [1usize, 4, 5, 10, 50, 100] {
        let r = BoundReport::for_qsc(n, 7, 0.001, &protocol)?;
        println!(
            "{n:>4} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            r.i_exact.unwrap_or(f64::NAN),
            r.i_ext_lb,
            r.i_fano_lb,
            r.logm_ext_ub,
            r.logm_fano_ub
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fano_ext::Result<()> {
    run_example()
}
