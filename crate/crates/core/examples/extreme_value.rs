//! Extreme-value copulas from parametric and piecewise-linear Pickands functions.

use markov_copula::extreme_value::{
    ev_copula, make_galambos, make_piecewise_linear_pickands, THREE_SEGMENT_KNOTS,
};
use markov_copula::metrics::{zeta1, QuadratureSpec};

fn main() -> markov_copula::Result<()> {
    let q = QuadratureSpec::default();
    let galambos = make_galambos(3.0)?;
    let pwl = make_piecewise_linear_pickands(&THREE_SEGMENT_KNOTS)?;
    for a in [&galambos, &pwl] {
        let c = ev_copula(a);
        println!("{}", a.label());
        println!("  A(0.25) = {:.4}, A(0.5) = {:.4}", a.a(0.25), a.a(0.5));
        println!("  D+A(0.5) = {:.4}", a.dplus_a(0.5));
        println!("  C(0.5, 0.5) = {:.4}, K(0.5, [0, 0.5]) = {:.4}", c.cdf(0.5, 0.5), c.kernel_cdf(0.5, 0.5));
        println!("  zeta1 = {:.4}", zeta1(c.as_ref(), &q));
    }
    // Knots violating the lower bound max(t, 1 - t) are rejected.
    let err = make_piecewise_linear_pickands(&[(0.0, 1.0), (0.5, 0.4), (1.0, 1.0)]).unwrap_err();
    println!("invalid knots: {err}");
    Ok(())
}
