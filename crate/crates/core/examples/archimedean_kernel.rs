//! Generator, Kendall function and Markov kernel of a Gumbel copula.

use markov_copula::archimedean::{archimedean_copula, make_gumbel, KendallCdf};

fn main() -> markov_copula::Result<()> {
    let g = make_gumbel(3.0)?;
    let c = archimedean_copula(&g);
    let f = g.kendall_function();
    println!("{}  strict: {}", g.label(), g.is_strict());
    println!("{:>5} {:>10} {:>10} {:>10}", "t", "phi", "D+phi", "F(t)");
    for k in 1..=9 {
        let t = k as f64 / 10.0;
        println!("{t:>5.1} {:>10.4} {:>10.4} {:>10.4}", g.phi(t), g.dplus_phi(t), f.eval(t));
    }
    println!("\nconditional distribution K(0.3, [0, y])");
    for k in 1..=9 {
        let y = k as f64 / 10.0;
        println!("y = {y:.1}: {:.4}", c.kernel_cdf(0.3, y));
    }
    Ok(())
}
