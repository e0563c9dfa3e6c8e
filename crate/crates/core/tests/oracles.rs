//! Library quantities against independent closed forms and quasi-Monte-Carlo.

use approx::assert_abs_diff_eq;
use markov_copula::archimedean::{archimedean_copula, make_clayton};
use markov_copula::copula::{make_m, make_pi, make_w};
use markov_copula::estimation::{chatterjee_r, SampleSet};
use markov_copula::metrics::{d1, d2_squared, QuadratureRule, QuadratureSpec};

/// Radical inverse of `i` in base `b`.
fn halton(mut i: u64, b: u64) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

/// `∂C/∂x` of the Clayton copula `(x^-θ + y^-θ - 1)^(-1/θ)`.
fn clayton_kernel(theta: f64, x: f64, y: f64) -> f64 {
    let s = x.powf(-theta) + y.powf(-theta) - 1.0;
    x.powf(-theta - 1.0) * s.powf(-1.0 / theta - 1.0)
}

#[test]
fn clayton_d1_matches_halton_integral() {
    let n = 1u64 << 17;
    let qmc: f64 = (1..=n)
        .map(|i| {
            let (x, y) = (halton(i, 2), halton(i, 3));
            (clayton_kernel(2.0, x, y) - y).abs()
        })
        .sum::<f64>()
        / n as f64;
    let c = archimedean_copula(&make_clayton(2.0).unwrap());
    let lib = d1(c.as_ref(), make_pi().as_ref(), &QuadratureSpec::default());
    assert_abs_diff_eq!(lib, qmc, epsilon = 1e-3);
}

#[test]
fn degenerate_copulas_have_closed_form_distances() {
    let q = QuadratureSpec::new(512, QuadratureRule::CellAverage).unwrap();
    // ∫∫ |1{y ≥ x} - y| = 1/3 and ∫∫ (1{y ≥ x} - y)² = 1/6.
    assert_abs_diff_eq!(d1(make_m().as_ref(), make_pi().as_ref(), &q), 1.0 / 3.0, epsilon = 2e-3);
    assert_abs_diff_eq!(d2_squared(make_m().as_ref(), make_pi().as_ref(), &q), 1.0 / 6.0, epsilon = 2e-3);
    assert_abs_diff_eq!(d1(make_w().as_ref(), make_pi().as_ref(), &q), 1.0 / 3.0, epsilon = 2e-3);
    // Two point masses at x and 1 - x: ∫∫ |1{y ≥ x} - 1{y ≥ 1 - x}| = ∫ |1 - 2x| dx = 1/2.
    assert_abs_diff_eq!(d1(make_m().as_ref(), make_w().as_ref(), &q), 0.5, epsilon = 4e-3);
}

#[test]
fn chatterjee_closed_forms() {
    let monotone: Vec<(f64, f64)> = (0..100).map(|i| (i as f64, i as f64)).collect();
    let r = chatterjee_r(&SampleSet::new(monotone).unwrap(), 0);
    assert_abs_diff_eq!(r, 1.0 - 3.0 / 101.0, epsilon = 1e-12);
    // Zig-zag 0, 2, 1, 3, ...: rank jumps alternate 2 and 1.
    let zigzag: Vec<(f64, f64)> = (0..8).map(|i| (i as f64, [0.0, 2.0, 1.0, 3.0][i % 4] + 4.0 * (i / 4) as f64)).collect();
    let n = 8.0;
    let ranks: Vec<f64> = zigzag.iter().map(|p| p.1 + 1.0).collect();
    let jumps: f64 = ranks.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let expected = 1.0 - 3.0 * jumps / (n * n - 1.0);
    assert_abs_diff_eq!(chatterjee_r(&SampleSet::new(zigzag).unwrap(), 0), expected, epsilon = 1e-12);
}
