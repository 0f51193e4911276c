// Blocklength sweep written as CSV and read back.
//
// Run: cargo run --example blocklength_sweep

use fano_ext::sweep::{read_csv, sweep_blocklength};
use fano_ext::ComparisonProtocol;

pub fn run_example() -> fano_ext::Result<()> {
    let table = sweep_blocklength(7, 0.001, 1, 20, 1, &ComparisonProtocol::default())?;
    let text = table.to_csv_string()?;
    print!("{text}");

    let parsed = read_csv(text.as_bytes())?;
    println!(
        "# parsed {} rows, sweep = {:?}",
        parsed.records.len(),
        parsed.meta("sweep")
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> fano_ext::Result<()> {
    run_example()
}
