//! Dependence measures of several families under the default quadrature.
//!
//! ```text
//! cargo run --release --example dependence_measures
//! ```

use markov_copula::metrics::{dependence_measures, QuadratureSpec};
use markov_copula::registry::registered_examples;

fn main() -> markov_copula::Result<()> {
    let q = QuadratureSpec::default();
    println!("{:<32} {:>8} {:>8} {:>8}", "family", "zeta1", "r", "D1(C,Pi)");
    for spec in registered_examples() {
        let c = spec.copula()?;
        let m = dependence_measures(c.as_ref(), &q);
        println!("{:<32} {:>8.4} {:>8.4} {:>8.4}", spec.to_string(), m.zeta1, m.r, m.d1_to_pi);
    }
    Ok(())
}
