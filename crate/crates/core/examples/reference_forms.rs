// The three equivalent ways of writing the extended bound, on an arbitrary
// distance distribution.
//
// Run: cargo run --example reference_forms

use fano_ext::bounds::{
    divergence_from_half_binomial, divergence_from_random_output, ext_fano_relative_form,
    ext_fano_symbol_form, ext_fano_ub,
};
use fano_ext::error_model::{
    reference_distribution, symbol_error_probability, ErrorDistribution, ReferenceKind,
};

pub fn run_example() -> fano_ext::Result<()> {
    let q = 4;
    let d = ErrorDistribution::new(vec![0.55, 0.25, 0.1, 0.06, 0.04])?;
    let n = d.n();

    let random = reference_distribution(ReferenceKind::RandomOutput, n, q)?;
    let half = reference_distribution(ReferenceKind::HalfBinomial, n, q)?;
    println!("random-output reference: {:?}", random.probs().as_slice());
    println!("half-binomial reference: {:?}", half.probs().as_slice());

    println!("sum form         {:.12}", ext_fano_ub(&d, q)?);
    println!("relative form    {:.12}", ext_fano_relative_form(&d, q)?);
    println!("symbol form      {:.12}", ext_fano_symbol_form(&d, q)?);
    println!(
        "D(p||random)     {:.12}",
        divergence_from_random_output(&d, q)?
    );
    println!(
        "D(p||half)       {:.12}",
        divergence_from_half_binomial(&d)?
    );
    println!("P_s              {:.12}", symbol_error_probability(&d));
    Ok(())
}

#[allow(dead_code)]
fn main() -> fano_ext::Result<()> {
    run_example()
}
