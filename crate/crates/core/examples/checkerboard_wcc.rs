//! Checkerboard approximations converge weakly conditional: the Lévy-distance
//! profile against the target shrinks with the resolution.

use markov_copula::archimedean::{archimedean_copula, make_clayton};
use markov_copula::checkerboard::{checkerboard_approx, checkerboard_copula};
use markov_copula::metrics::{d1, golden_abscissae, wcc_profile, QuadratureSpec};

fn main() -> markov_copula::Result<()> {
    let c = archimedean_copula(&make_clayton(2.0)?);
    let xs = golden_abscissae(25);
    let q = QuadratureSpec::with_resolution(256)?;
    println!("{:>5} {:>10} {:>10} {:>10}", "N", "max", "mean", "D1");
    for level in 3..=8 {
        let n = 1usize << level;
        let cb = checkerboard_copula(checkerboard_approx(c.as_ref(), n)?);
        let p = wcc_profile(cb.as_ref(), c.as_ref(), &xs, 2000);
        println!("{n:>5} {:>10.5} {:>10.5} {:>10.5}", p.max, p.mean, d1(cb.as_ref(), c.as_ref(), &q));
    }
    Ok(())
}
