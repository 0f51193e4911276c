// Brute-force enumeration of a small QSC against the closed forms.
//
// Run: cargo run --example exact_oracle

use fano_ext::oracle::{enumerate, qsc_spec};
use fano_ext::verify::{verify_qsc, VerifyMode};
use fano_ext::EnumerationBudget;

pub fn run_example() -> fano_ext::Result<()> {
    let budget = EnumerationBudget::default();
    let e = enumerate(&qsc_spec(3, 0.05)?, 3, &budget)?;
    println!("H(X|Y) = {:.12}", e.conditional_entropy());
    println!("I(X;Y) = {:.12}", e.mutual_info());
    println!("chain  = {:.12}", e.h_output - e.h_output_given_input);

    let report = verify_qsc(3, 0.05, 3, VerifyMode::FullEnumeration, &budget)?;
    print!("{}", report.render());
    Ok(())
}

#[allow(dead_code)]
fn main() -> fano_ext::Result<()> {
    run_example()
}
