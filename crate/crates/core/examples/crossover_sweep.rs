// Crossover sweep on a geometric grid.
//
// Run: cargo run --example crossover_sweep

use fano_ext::sweep::{sweep_crossover, Grid};
use fano_ext::ComparisonProtocol;

pub fn run_example() -> fano_ext::Result<()> {
    let protocol = ComparisonProtocol::default();
    let table = sweep_crossover(7, 30, 1e-4, 1e-2, 9, Grid::Geometric, &protocol)?;
    for r in &table.rows {
        println!(
            "eps {:<10.3e} I_exact {:>9.5} I_ext {:>9.5} I_fano {:>9.5}",
            r.eps,
            r.i_exact.unwrap_or(f64::NAN),
            r.i_ext_lb,
            r.i_fano_lb
        );
    }
    assert!(table.violations().is_empty());
    Ok(())
}

#[allow(dead_code)]
fn main() -> fano_ext::Result<()> {
    run_example()
}
