//! Empirical Kendall function of a sample and the generator rebuilt from it.

use markov_copula::archimedean::{archimedean_copula, make_clayton, KendallCdf};
use markov_copula::estimation::{
    empirical_kendall, pseudo_obs, reconstruct_generator, RECONSTRUCTION_EPS, RECONSTRUCTION_GRID,
};
use markov_copula::sampling::{sample, RngSpec};

fn main() -> markov_copula::Result<()> {
    let g = make_clayton(2.0)?;
    let s = sample(archimedean_copula(&g).as_ref(), 2000, RngSpec::new(11, 0))?;
    let k = empirical_kendall(&pseudo_obs(&s));
    let rec = reconstruct_generator(&k, RECONSTRUCTION_GRID, RECONSTRUCTION_EPS)?;
    let truth = g.kendall_function();
    println!("strict: {}, floored nodes: {}", rec.strict, rec.floored_nodes);
    println!("{:>5} {:>9} {:>9} {:>9} {:>9}", "t", "F", "F_n", "phi", "phi_n");
    for i in 1..=9 {
        let t = i as f64 / 10.0;
        println!(
            "{t:>5.1} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            truth.eval(t),
            k.eval(t),
            g.phi(t),
            rec.generator.phi(t)
        );
    }
    Ok(())
}
