//! Two sequences separating the notions of convergence.
//!
//! Strip copulas converge to independence in `D1` while their kernels stay
//! degenerate; dyadic-shift copulas stay at `D1 = 1/3` from independence while
//! their transposes converge to it.

use markov_copula::copula::{make_pi, transpose, SharedCopula};
use markov_copula::counterexamples::{DyadicShiftCopula, StripCopula};
use markov_copula::metrics::{d1, golden_abscissae, wcc_profile, QuadratureSpec};
use std::sync::Arc;

fn main() -> markov_copula::Result<()> {
    let pi = make_pi();
    let q = QuadratureSpec::with_resolution(256)?;
    let xs = golden_abscissae(25);
    println!("strip copulas (level N, member i)");
    for level in 1..=5u32 {
        let i = 1;
        let s = StripCopula::new(level, i)?;
        let p = wcc_profile(&s, pi.as_ref(), &xs, 2000);
        println!(
            "  N = {level}, i = {i}: D1 = {:.5} (bound {:.5}), profile max = {:.4}",
            d1(&s, pi.as_ref(), &q),
            0.5f64.powi(level as i32),
            p.max
        );
    }
    println!("dyadic shifts");
    for n in 1..=6u32 {
        let c: SharedCopula = Arc::new(DyadicShiftCopula::new(n)?);
        let t = transpose(&c);
        println!(
            "  n = {n}: D1(C, Pi) = {:.5}, D1(C^t, Pi) = {:.5}",
            d1(c.as_ref(), pi.as_ref(), &q),
            d1(t.as_ref(), pi.as_ref(), &q)
        );
    }
    Ok(())
}
