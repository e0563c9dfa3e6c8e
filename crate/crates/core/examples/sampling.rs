//! Seeded conditional-inversion sampling and a fidelity check of the draws.

use markov_copula::copula::{make_marshall_olkin, MarshallOlkinParams};
use markov_copula::extreme_value::{ev_copula, make_galambos};
use markov_copula::sampling::{sample_fidelity, sample_pairs, RngSpec};

fn main() -> markov_copula::Result<()> {
    let mo = make_marshall_olkin(MarshallOlkinParams::new(0.3, 0.7)?);
    for (x, y) in sample_pairs(mo.as_ref(), 5, RngSpec::new(1, 0)) {
        println!("({x:.6}, {y:.6})");
    }
    let galambos = ev_copula(&make_galambos(3.0)?);
    for stream in 0..3 {
        let d = sample_fidelity(galambos.as_ref(), 20_000, RngSpec::new(42, stream), 100)?;
        println!("stream {stream}: lattice distance {d:.4}");
    }
    Ok(())
}
