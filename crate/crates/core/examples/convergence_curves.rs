//! Discrepancy curves of Clayton and Galambos parameter sequences `θ + 1/k`.

use markov_copula::convergence::DiscrepancyOptions;
use markov_copula::metrics::QuadratureSpec;
use markov_copula::registry::FamilySpec;
use markov_copula::study::{converge, ParameterSequence};

fn main() -> markov_copula::Result<()> {
    let o = DiscrepancyOptions {
        quadrature: QuadratureSpec::with_resolution(128)?,
        ..Default::default()
    };
    let seq = ParameterSequence::Harmonic(vec![1, 2, 4, 8, 16, 32, 64]);
    for family in [FamilySpec::Clayton(3.0), FamilySpec::Galambos(3.0)] {
        println!("{family}");
        print!("{}", converge(&family, &seq, None, &o)?);
    }
    Ok(())
}
