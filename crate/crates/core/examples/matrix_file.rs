// An asymmetric channel read from a matrix file, where the extended bound
// is no longer tight.
//
// Run: cargo run --example matrix_file

use fano_ext::verify::{verify_channel, VerifyMode};
use fano_ext::{DmcSpec, EnumerationBudget};

const MATRIX: &str = "\
# binary asymmetric channel
2
0.9 0.1
0.2 0.8
";

pub fn run_example() -> fano_ext::Result<()> {
    let spec: DmcSpec = MATRIX.parse()?;
    let report = verify_channel(
        &spec,
        3,
        VerifyMode::FullEnumeration,
        &EnumerationBudget::default(),
    )?;
    print!("{}", report.render());
    print!("{}", spec.to_text());
    Ok(())
}

#[allow(dead_code)]
fn main() -> fano_ext::Result<()> {
    run_example()
}
