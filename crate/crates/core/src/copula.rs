//! The copula abstraction: a distribution function on the unit square paired
//! with a version of its Markov kernel `K(x, [0, y])`.
//!
//! Kernels follow the right-continuous conditional-CDF convention, so atoms
//! (as in `M`, `W` or Marshall–Olkin copulas) show up as jumps in `y` and no
//! separate atom list is kept. Values of the kernel at `x ∈ {0, 1}` are fixed
//! by convention and carry no information (they form a null set).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A bivariate copula given through its CDF and its Markov kernel.
///
/// Implementations are immutable and may be shared across threads.
pub trait Copula: Send + Sync + fmt::Debug {
    /// `C(x, y)`.
    fn cdf(&self, x: f64, y: f64) -> f64;

    /// `K_C(x, [0, y])`, the conditional distribution function of `Y` given `X = x`.
    fn kernel_cdf(&self, x: f64, y: f64) -> f64;

    /// Identifier used in reports.
    fn label(&self) -> String;

    /// The transpose `C^t(x, y) = C(y, x)` when a closed form is known.
    fn transposed(&self) -> Option<SharedCopula> {
        None
    }
}

pub type SharedCopula = Arc<dyn Copula>;

/// Step used by the symmetric difference quotient for kernels without closed form.
pub const KERNEL_DIFF_STEP: f64 = 1e-5;

/// Numerical kernel `∂C/∂x (x, y)` via a symmetric difference quotient, shrunk
/// to a one-sided quotient near the boundary and clamped to `[0, 1]`.
///
/// Since copulas are 2-increasing, the quotient is nondecreasing in `y`.
pub fn difference_quotient_kernel<F>(cdf: F, x: f64, y: f64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    if y <= 0.0 {
        return 0.0;
    }
    if y >= 1.0 {
        return 1.0;
    }
    let lo = (x - KERNEL_DIFF_STEP).max(0.0);
    let hi = (x + KERNEL_DIFF_STEP).min(1.0);
    ((cdf(hi, y) - cdf(lo, y)) / (hi - lo)).clamp(0.0, 1.0)
}

#[inline]
pub(crate) fn clamp_unit(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

/// Independence copula `Π(x, y) = xy`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Independence;

impl Copula for Independence {
    fn cdf(&self, x: f64, y: f64) -> f64 {
        clamp_unit(x) * clamp_unit(y)
    }

    fn kernel_cdf(&self, _x: f64, y: f64) -> f64 {
        clamp_unit(y)
    }

    fn label(&self) -> String {
        "pi".into()
    }

    fn transposed(&self) -> Option<SharedCopula> {
        Some(Arc::new(*self))
    }
}

/// Upper Fréchet bound `M(x, y) = min(x, y)`; all mass on the diagonal.
#[derive(Debug, Clone, Copy, Default)]
pub struct Comonotone;

impl Copula for Comonotone {
    fn cdf(&self, x: f64, y: f64) -> f64 {
        clamp_unit(x).min(clamp_unit(y))
    }

    fn kernel_cdf(&self, x: f64, y: f64) -> f64 {
        if y >= x {
            1.0
        } else {
            0.0
        }
    }

    fn label(&self) -> String {
        "m".into()
    }

    fn transposed(&self) -> Option<SharedCopula> {
        Some(Arc::new(*self))
    }
}

/// Lower Fréchet bound `W(x, y) = max(x + y - 1, 0)`; all mass on the anti-diagonal.
#[derive(Debug, Clone, Copy, Default)]
pub struct Countermonotone;

impl Copula for Countermonotone {
    fn cdf(&self, x: f64, y: f64) -> f64 {
        (clamp_unit(x) + clamp_unit(y) - 1.0).max(0.0)
    }

    fn kernel_cdf(&self, x: f64, y: f64) -> f64 {
        if y >= 1.0 - x {
            1.0
        } else {
            0.0
        }
    }

    fn label(&self) -> String {
        "w".into()
    }

    fn transposed(&self) -> Option<SharedCopula> {
        Some(Arc::new(*self))
    }
}

/// Parameters `(α, β) ∈ [0, 1]²` of the Marshall–Olkin family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarshallOlkinParams {
    alpha: f64,
    beta: f64,
}

impl MarshallOlkinParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter {
                    family: "marshall-olkin",
                    reason: format!("{name} = {v} outside [0, 1]"),
                });
            }
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Marshall–Olkin copula `M_{α,β}`.
#[derive(Debug, Clone, Copy)]
pub struct MarshallOlkin {
    params: MarshallOlkinParams,
}

impl MarshallOlkin {
    pub fn new(params: MarshallOlkinParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> MarshallOlkinParams {
        self.params
    }
}

impl Copula for MarshallOlkin {
    fn cdf(&self, x: f64, y: f64) -> f64 {
        let (x, y) = (clamp_unit(x), clamp_unit(y));
        let MarshallOlkinParams { alpha, beta } = self.params;
        if x.powf(alpha) >= y.powf(beta) {
            x.powf(1.0 - alpha) * y
        } else {
            x * y.powf(1.0 - beta)
        }
    }

    fn kernel_cdf(&self, x: f64, y: f64) -> f64 {
        let (x, y) = (clamp_unit(x), clamp_unit(y));
        let MarshallOlkinParams { alpha, beta } = self.params;
        if y.powf(beta) < x.powf(alpha) {
            clamp_unit((1.0 - alpha) * x.powf(-alpha) * y)
        } else {
            y.powf(1.0 - beta)
        }
    }

    fn label(&self) -> String {
        format!("mo:{},{}", self.params.alpha, self.params.beta)
    }

    fn transposed(&self) -> Option<SharedCopula> {
        let p = self.params;
        Some(Arc::new(MarshallOlkin::new(MarshallOlkinParams {
            alpha: p.beta,
            beta: p.alpha,
        })))
    }
}

/// Transpose of an arbitrary copula; its kernel is a difference quotient of the CDF.
#[derive(Debug, Clone)]
pub struct Transposed {
    inner: SharedCopula,
}

impl Transposed {
    pub fn new(inner: SharedCopula) -> Self {
        Self { inner }
    }

    pub fn inner(&self) -> &SharedCopula {
        &self.inner
    }
}

impl Copula for Transposed {
    fn cdf(&self, x: f64, y: f64) -> f64 {
        self.inner.cdf(y, x)
    }

    fn kernel_cdf(&self, x: f64, y: f64) -> f64 {
        difference_quotient_kernel(|a, b| self.inner.cdf(b, a), x, y)
    }

    fn label(&self) -> String {
        format!("transpose({})", self.inner.label())
    }

    fn transposed(&self) -> Option<SharedCopula> {
        Some(self.inner.clone())
    }
}

pub fn make_pi() -> SharedCopula {
    Arc::new(Independence)
}

pub fn make_m() -> SharedCopula {
    Arc::new(Comonotone)
}

pub fn make_w() -> SharedCopula {
    Arc::new(Countermonotone)
}

pub fn make_marshall_olkin(params: MarshallOlkinParams) -> SharedCopula {
    Arc::new(MarshallOlkin::new(params))
}

/// `C^t`, using a registered closed form when the copula provides one.
pub fn transpose(c: &SharedCopula) -> SharedCopula {
    c.transposed()
        .unwrap_or_else(|| Arc::new(Transposed::new(c.clone())))
}

/// Largest violations of the copula axioms found on a grid.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AxiomDefects {
    /// `max |C(x,0)| + |C(0,y)|` style boundary violation.
    pub groundedness: f64,
    /// `max |C(x,1) - x|, |C(1,y) - y|`.
    pub margins: f64,
    /// Largest negative rectangle mass (reported as a positive number).
    pub two_increasing: f64,
    /// Largest decrease of `y ↦ K(x, [0, y])` between consecutive grid points.
    pub kernel_monotonicity: f64,
    /// `max |K(x, [0, 1]) - 1|` over interior `x`.
    pub kernel_total_mass: f64,
}

impl AxiomDefects {
    pub fn max(&self) -> f64 {
        self.groundedness
            .max(self.margins)
            .max(self.two_increasing)
            .max(self.kernel_monotonicity)
            .max(self.kernel_total_mass)
    }
}

/// Evaluates the copula axioms on the `(n+1)²` lattice `{i/n}`; kernel checks use
/// interior abscissae only.
pub fn axiom_defects(c: &dyn Copula, n: usize) -> AxiomDefects {
    let n = n.max(2);
    let pts: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let mut d = AxiomDefects::default();
    let grid: Vec<Vec<f64>> = pts
        .iter()
        .map(|&x| pts.iter().map(|&y| c.cdf(x, y)).collect())
        .collect();
    for (k, &t) in pts.iter().enumerate() {
        d.groundedness = d.groundedness.max(grid[k][0].abs()).max(grid[0][k].abs());
        d.margins = d
            .margins
            .max((grid[k][n] - t).abs())
            .max((grid[n][k] - t).abs());
    }
    for i in 0..n {
        for j in 0..n {
            let mass = grid[i + 1][j + 1] - grid[i][j + 1] - grid[i + 1][j] + grid[i][j];
            d.two_increasing = d.two_increasing.max(-mass);
        }
    }
    for &x in pts.iter().skip(1).take(n - 1) {
        let mut prev = c.kernel_cdf(x, 0.0);
        for &y in pts.iter().skip(1) {
            let k = c.kernel_cdf(x, y);
            d.kernel_monotonicity = d.kernel_monotonicity.max(prev - k);
            prev = k;
        }
        d.kernel_total_mass = d.kernel_total_mass.max((c.kernel_cdf(x, 1.0) - 1.0).abs());
    }
    d
}

/// `max_y |∫ K(x, [0, y]) dx - y|` with an `m`-point midpoint rule in `x`,
/// checked at `y ∈ {j / ny}`.
pub fn disintegration_defect(c: &dyn Copula, m: usize, ny: usize) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..=ny {
        let y = j as f64 / ny as f64;
        let integral: f64 = (0..m)
            .map(|i| c.kernel_cdf((i as f64 + 0.5) / m as f64, y))
            .sum::<f64>()
            / m as f64;
        worst = worst.max((integral - y).abs());
    }
    worst
}
