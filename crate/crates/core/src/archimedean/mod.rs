//! Archimedean copulas `C(x, y) = φ⁻(φ(x) + φ(y))` and their Markov kernels.
//!
//! Generators are normalized so that `φ(1/2) = 1`. The kernel is
//! `D⁺φ(x) / D⁺φ(C(x, y))`; for non-strict generators it vanishes below the
//! zero curve `y < f⁰(x)`.

mod families;
mod table;

use std::fmt;
use std::sync::Arc;

use crate::copula::{clamp_unit, Copula, SharedCopula};

pub use families::{
    make_clayton, make_frank, make_gumbel, make_mixture, make_w_generator, Clayton, Frank,
    Gumbel, LinearGenerator, Mixture,
};
pub use table::TableGenerator;

/// φ values below this are treated as zero when forming `φ(x) + φ(y)`.
pub const PHI_UNDERFLOW: f64 = 1e-300;

/// The analytic (or tabulated) shape of a generator on `(0, 1]`.
pub trait GeneratorFunction: Send + Sync + fmt::Debug {
    /// `φ(t)` for `t ∈ (0, 1]`.
    fn phi(&self, t: f64) -> f64;

    /// Right derivative `D⁺φ(t)` for `t ∈ (0, 1)`; non-strict generators also
    /// answer `t = 0` with the limit `D⁺φ(0+)`.
    fn dplus_phi(&self, t: f64) -> f64;

    /// `φ(0+)`, possibly `+∞`.
    fn phi_at_zero(&self) -> f64;

    /// Closed-form inverse on `[0, φ(0+))`, if available.
    fn inverse(&self, _s: f64) -> Option<f64> {
        None
    }

    fn label(&self) -> String;
}

/// A normalized Archimedean generator with the endpoint conventions
/// `D⁺φ(1) = 0` and `D⁺φ(0) = -∞` for strict generators.
#[derive(Debug, Clone)]
pub struct Generator(Arc<dyn GeneratorFunction>);

impl Generator {
    pub fn new<G: GeneratorFunction + 'static>(shape: G) -> Self {
        Self(Arc::new(shape))
    }

    pub fn shape(&self) -> &dyn GeneratorFunction {
        self.0.as_ref()
    }

    /// `φ(t)`, right-continuous at 0.
    pub fn phi(&self, t: f64) -> f64 {
        if t >= 1.0 {
            0.0
        } else if t <= 0.0 {
            self.phi_at_zero()
        } else {
            self.0.phi(t)
        }
    }

    pub fn phi_at_zero(&self) -> f64 {
        self.0.phi_at_zero()
    }

    pub fn is_strict(&self) -> bool {
        self.phi_at_zero().is_infinite()
    }

    pub fn dplus_phi(&self, t: f64) -> f64 {
        if t >= 1.0 {
            0.0
        } else if t <= 0.0 {
            if self.is_strict() {
                f64::NEG_INFINITY
            } else {
                self.0.dplus_phi(0.0)
            }
        } else {
            self.0.dplus_phi(t)
        }
    }

    pub fn label(&self) -> String {
        self.0.label()
    }

    /// `φ⁻(s)`: the inverse of `φ` on `[0, φ(0+))` and `0` beyond.
    pub fn pseudo_inverse(&self, s: f64) -> f64 {
        if s.is_nan() {
            return f64::NAN;
        }
        if s <= 0.0 {
            return 1.0;
        }
        if s >= self.phi_at_zero() {
            return 0.0;
        }
        if let Some(t) = self.0.inverse(s) {
            return clamp_unit(t);
        }
        self.bisect_inverse(s)
    }

    /// Monotone bisection on `ln t` until `|φ(t) - s| ≤ 1e-12 (1 + s)`.
    fn bisect_inverse(&self, s: f64) -> f64 {
        let tol = 1e-12 * (1.0 + s);
        // φ(exp(lo)) > s >= φ(exp(hi))
        let mut lo = f64::MIN_POSITIVE.ln();
        let mut hi = 0.0f64;
        if self.0.phi(lo.exp()) <= s {
            return lo.exp();
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let v = self.0.phi(mid.exp());
            if (v - s).abs() <= tol {
                return mid.exp();
            }
            if v > s {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-17 {
                break;
            }
        }
        (0.5 * (lo + hi)).exp()
    }

    /// The level function `f^t(x) = φ⁻(φ(t) - φ(x))` for `0 ≤ t ≤ x ≤ 1`.
    /// Returns `None` if `x < t`.
    pub fn level_function(&self, t: f64, x: f64) -> Option<f64> {
        if !(0.0..=1.0).contains(&t) || x < t || x > 1.0 {
            return None;
        }
        if x == t {
            return Some(1.0);
        }
        let phi_t = self.phi(t);
        if phi_t.is_infinite() {
            return Some(0.0);
        }
        Some(self.pseudo_inverse(phi_t - self.phi(x)))
    }

    /// Boundary of the zero set `{C = 0}`; identically zero for strict generators.
    pub fn zero_curve(&self, x: f64) -> f64 {
        if self.is_strict() {
            0.0
        } else {
            self.level_function(0.0, clamp_unit(x)).unwrap_or(0.0)
        }
    }

    pub fn kendall_function(&self) -> KendallFunction {
        KendallFunction {
            generator: self.clone(),
        }
    }

    /// Largest violations of the generator invariants on an `n`-point interior grid.
    pub fn validity_defects(&self, n: usize) -> GeneratorDefects {
        let n = n.max(4);
        let ts: Vec<f64> = (1..n).map(|k| k as f64 / n as f64).collect();
        let mut d = GeneratorDefects {
            normalization: (self.phi(0.5) - 1.0).abs(),
            at_one: self.phi(1.0).abs(),
            derivative_sign: f64::NEG_INFINITY,
            ..Default::default()
        };
        for w in ts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (pa, pb) = (self.phi(a), self.phi(b));
            d.monotonicity = d.monotonicity.max(pb - pa);
            let mid = self.phi(0.5 * (a + b));
            let chord = 0.5 * (pa + pb);
            d.convexity = d.convexity.max((mid - chord) / chord.abs().max(1.0));
            let (da, db) = (self.dplus_phi(a), self.dplus_phi(b));
            d.derivative_monotonicity = d.derivative_monotonicity.max(da - db);
            d.derivative_sign = d.derivative_sign.max(da).max(db);
        }
        d
    }
}

/// Worst-case defects of a generator (all zero for a valid generator).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GeneratorDefects {
    pub normalization: f64,
    pub at_one: f64,
    pub monotonicity: f64,
    /// Midpoint convexity violation relative to `max(1, chord)`.
    pub convexity: f64,
    pub derivative_monotonicity: f64,
    /// Largest value of `D⁺φ` on the interior grid (should be negative).
    pub derivative_sign: f64,
}

impl GeneratorDefects {
    /// Largest of the defects that vanish for a valid generator; `derivative_sign`
    /// is checked separately against zero.
    pub fn max(&self) -> f64 {
        self.normalization
            .max(self.at_one)
            .max(self.monotonicity)
            .max(self.convexity)
            .max(self.derivative_monotonicity)
    }
}

/// Distribution function of `C(X, Y)` for `(X, Y) ~ C`; implemented by
/// [`KendallFunction`] and by empirical estimates.
pub trait KendallCdf: Send + Sync {
    fn eval(&self, t: f64) -> f64;
}

impl<F: Fn(f64) -> f64 + Send + Sync> KendallCdf for F {
    fn eval(&self, t: f64) -> f64 {
        self(t)
    }
}

/// `F(t) = t - φ(t) / D⁺φ(t)`.
#[derive(Debug, Clone)]
pub struct KendallFunction {
    generator: Generator,
}

impl KendallFunction {
    pub fn generator(&self) -> &Generator {
        &self.generator
    }
}

impl KendallCdf for KendallFunction {
    fn eval(&self, t: f64) -> f64 {
        let g = &self.generator;
        if t >= 1.0 {
            return 1.0;
        }
        if t <= 0.0 {
            // mass of the zero set {C = 0}
            return if g.is_strict() {
                0.0
            } else {
                clamp_unit(-g.phi_at_zero() / g.dplus_phi(0.0))
            };
        }
        let d = g.dplus_phi(t);
        if !d.is_finite() || d == 0.0 {
            return clamp_unit(t);
        }
        clamp_unit(t - g.phi(t) / d)
    }
}

/// Archimedean copula of a [`Generator`].
#[derive(Debug, Clone)]
pub struct ArchimedeanCopula {
    generator: Generator,
}

impl ArchimedeanCopula {
    pub fn new(generator: Generator) -> Self {
        Self { generator }
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }
}

#[inline]
fn flush(v: f64) -> f64 {
    if v < PHI_UNDERFLOW {
        0.0
    } else {
        v
    }
}

impl Copula for ArchimedeanCopula {
    fn cdf(&self, x: f64, y: f64) -> f64 {
        if x <= 0.0 || y <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return clamp_unit(y);
        }
        if y >= 1.0 {
            return x;
        }
        let g = &self.generator;
        g.pseudo_inverse(flush(g.phi(x)) + flush(g.phi(y))).min(x).min(y)
    }

    fn kernel_cdf(&self, x: f64, y: f64) -> f64 {
        if x <= 0.0 || x >= 1.0 || y >= 1.0 {
            return 1.0;
        }
        if y <= 0.0 {
            return 0.0;
        }
        let g = &self.generator;
        if !g.is_strict() && y < g.zero_curve(x) {
            return 0.0;
        }
        let num = g.dplus_phi(x);
        let den = g.dplus_phi(self.cdf(x, y));
        if den.is_infinite() {
            return 0.0;
        }
        if den == 0.0 {
            return 1.0;
        }
        clamp_unit(num / den)
    }

    fn label(&self) -> String {
        format!("archimedean({})", self.generator.label())
    }

    fn transposed(&self) -> Option<SharedCopula> {
        Some(Arc::new(self.clone()))
    }
}

pub fn archimedean_copula(g: &Generator) -> SharedCopula {
    Arc::new(ArchimedeanCopula::new(g.clone()))
}
