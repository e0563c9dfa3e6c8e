//! CFG estimate of a Pickands function and its convex minorant.

use markov_copula::estimation::{cfg_estimator, convexify_pickands, pseudo_obs, CFG_GRID};
use markov_copula::extreme_value::{ev_copula, make_galambos};
use markov_copula::sampling::{sample, RngSpec};

fn main() -> markov_copula::Result<()> {
    let a = make_galambos(3.0)?;
    let s = sample(ev_copula(&a).as_ref(), 1000, RngSpec::new(5, 0))?;
    let raw = cfg_estimator(&pseudo_obs(&s), CFG_GRID);
    let hull = convexify_pickands(&raw)?;
    println!("{:>5} {:>8} {:>8} {:>8}", "t", "A", "raw", "convex");
    for (t, r) in raw.t.iter().zip(&raw.a).step_by(CFG_GRID / 10) {
        println!("{t:>5.2} {:>8.4} {r:>8.4} {:>8.4}", a.a(*t), hull.a(*t));
    }
    println!("validity defects after convexification: {:.1e}", hull.validity_defects(1000).max());
    Ok(())
}
