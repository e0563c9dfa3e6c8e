//! Extreme-value copulas `C_A(x, y) = (xy)^{A(ln x / ln xy)}` and their kernels.
//!
//! A Pickands dependence function is convex with `A(0) = A(1) = 1` and
//! `max(t, 1 - t) ≤ A(t) ≤ 1`. Its right derivative drives the kernel
//! `K(x, [0, y]) = C(x, y) / x · (A(t) + (1 - t) D⁺A(t))`.

use std::fmt;
use std::sync::Arc;

use crate::copula::{clamp_unit, Copula, SharedCopula};
use crate::error::{Error, Result};

/// Slope tolerance for convexity checks on knot lists.
pub const CONVEXITY_TOL: f64 = 1e-10;

/// Knots of the asymmetric three-segment example
/// `A(t) = 1 - t` on `[0, 1/4]`, `(7 - t) / 9` on `(1/4, 7/10]`, `t` on `(7/10, 1]`.
pub const THREE_SEGMENT_KNOTS: [(f64, f64); 4] = [(0.0, 1.0), (0.25, 0.75), (0.7, 0.7), (1.0, 1.0)];

/// Shape of a Pickands dependence function.
pub trait PickandsShape: Send + Sync + fmt::Debug {
    fn a(&self, t: f64) -> f64;

    /// Right derivative on `[0, 1)`; at `t = 1` the left derivative.
    fn dplus_a(&self, t: f64) -> f64;

    /// Left derivative on `(0, 1]`; at `t = 0` the right derivative.
    fn dminus_a(&self, t: f64) -> f64 {
        self.dplus_a(t)
    }

    fn label(&self) -> String;
}

/// A Pickands dependence function with arguments clamped to `[0, 1]`.
#[derive(Debug, Clone)]
pub struct PickandsFunction(Arc<dyn PickandsShape>);

impl PickandsFunction {
    pub fn new<P: PickandsShape + 'static>(shape: P) -> Self {
        Self(Arc::new(shape))
    }

    pub fn a(&self, t: f64) -> f64 {
        self.0.a(clamp_unit(t))
    }

    pub fn dplus_a(&self, t: f64) -> f64 {
        self.0.dplus_a(clamp_unit(t))
    }

    pub fn dminus_a(&self, t: f64) -> f64 {
        self.0.dminus_a(clamp_unit(t))
    }

    pub fn label(&self) -> String {
        self.0.label()
    }

    /// Largest violations of the Pickands invariants on an `n`-point grid.
    pub fn validity_defects(&self, n: usize) -> PickandsDefects {
        let n = n.max(4);
        let ts: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
        let mut d = PickandsDefects {
            endpoints: (self.a(0.0) - 1.0).abs().max((self.a(1.0) - 1.0).abs()),
            ..Default::default()
        };
        let mut integral = 0.0;
        for (k, &t) in ts.iter().enumerate() {
            let a = self.a(t);
            d.lower_bound = d.lower_bound.max(t.max(1.0 - t) - a);
            d.upper_bound = d.upper_bound.max(a - 1.0);
            let da = self.dplus_a(t);
            d.derivative_range = d.derivative_range.max(da.abs() - 1.0);
            if k + 1 < ts.len() {
                let next = ts[k + 1];
                let mid = self.a(0.5 * (t + next));
                d.convexity = d.convexity.max(mid - 0.5 * (a + self.a(next)));
                d.derivative_monotonicity = d.derivative_monotonicity.max(da - self.dplus_a(next));
                // midpoint rule for ∫ D⁺A
                integral += self.dplus_a(0.5 * (t + next)) / n as f64;
            }
        }
        d.derivative_integral = integral.abs();
        d
    }
}

/// Worst-case defects of a Pickands function (all zero when valid).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PickandsDefects {
    pub endpoints: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub convexity: f64,
    pub derivative_monotonicity: f64,
    pub derivative_range: f64,
    pub derivative_integral: f64,
}

impl PickandsDefects {
    pub fn max(&self) -> f64 {
        [
            self.endpoints,
            self.lower_bound,
            self.upper_bound,
            self.convexity,
            self.derivative_monotonicity,
            self.derivative_range,
            self.derivative_integral,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Galambos: `A(t) = 1 - (t^{-θ} + (1-t)^{-θ})^{-1/θ}`, `θ > 0`.
#[derive(Debug, Clone, Copy)]
pub struct Galambos {
    theta: f64,
}

impl Galambos {
    /// `(t^θ + (1-t)^θ)^{1/θ}` and its derivative.
    fn norm(&self, t: f64) -> (f64, f64) {
        let (u, w) = (t, 1.0 - t);
        let th = self.theta;
        let n = (u.powf(th) + w.powf(th)).powf(1.0 / th);
        let dn = n.powf(1.0 - th) * (u.powf(th - 1.0) - w.powf(th - 1.0));
        (n, dn)
    }
}

impl PickandsShape for Galambos {
    fn a(&self, t: f64) -> f64 {
        if t <= 0.0 || t >= 1.0 {
            return 1.0;
        }
        // t^{-θ} + (1-t)^{-θ} = (t^θ + (1-t)^θ) / (t(1-t))^θ
        let (n, _) = self.norm(t);
        1.0 - t * (1.0 - t) / n
    }

    fn dplus_a(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return -1.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let (u, w) = (t, 1.0 - t);
        let (n, dn) = self.norm(t);
        -((w - u) * n - u * w * dn) / (n * n)
    }

    fn label(&self) -> String {
        format!("galambos:{}", self.theta)
    }
}

pub fn make_galambos(theta: f64) -> Result<PickandsFunction> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::InvalidParameter {
            family: "galambos",
            reason: format!("theta = {theta} must be positive"),
        });
    }
    Ok(PickandsFunction::new(Galambos { theta }))
}

/// Gumbel–Hougaard: `A(t) = (t^θ + (1-t)^θ)^{1/θ}`, `θ ≥ 1`.
#[derive(Debug, Clone, Copy)]
pub struct GumbelHougaard {
    theta: f64,
}

impl PickandsShape for GumbelHougaard {
    fn a(&self, t: f64) -> f64 {
        let th = self.theta;
        (t.powf(th) + (1.0 - t).powf(th)).powf(1.0 / th).min(1.0)
    }

    fn dplus_a(&self, t: f64) -> f64 {
        let th = self.theta;
        let (u, w) = (t, 1.0 - t);
        let n = (u.powf(th) + w.powf(th)).powf(1.0 / th);
        n.powf(1.0 - th) * (u.powf(th - 1.0) - w.powf(th - 1.0))
    }

    fn label(&self) -> String {
        format!("gumbel-ev:{}", self.theta)
    }
}

pub fn make_gumbel_pickands(theta: f64) -> Result<PickandsFunction> {
    if !(theta.is_finite() && theta >= 1.0) {
        return Err(Error::InvalidParameter {
            family: "gumbel-ev",
            reason: format!("theta = {theta} must be at least 1"),
        });
    }
    Ok(PickandsFunction::new(GumbelHougaard { theta }))
}

/// Linear interpolation of validated knots; `D⁺A` is the right-hand slope.
#[derive(Debug, Clone)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.values.iter().copied())
    }

    fn right_segment(&self, t: f64) -> usize {
        self.xs.partition_point(|&x| x <= t).saturating_sub(1).min(self.slopes.len() - 1)
    }

    fn left_segment(&self, t: f64) -> usize {
        self.xs.partition_point(|&x| x < t).saturating_sub(1).min(self.slopes.len() - 1)
    }
}

impl PickandsShape for PiecewiseLinear {
    fn a(&self, t: f64) -> f64 {
        let k = self.right_segment(t);
        if t == self.xs[k] {
            return self.values[k];
        }
        if t == 1.0 {
            return 1.0;
        }
        self.values[k] + self.slopes[k] * (t - self.xs[k])
    }

    fn dplus_a(&self, t: f64) -> f64 {
        self.slopes[self.right_segment(t)]
    }

    fn dminus_a(&self, t: f64) -> f64 {
        self.slopes[self.left_segment(t)]
    }

    fn label(&self) -> String {
        let parts: Vec<String> = self.knots().map(|(x, a)| format!("({x},{a})")).collect();
        format!("pickands-pwl[{}]", parts.join(","))
    }
}

fn invalid(invariant: &'static str, detail: String) -> Error {
    Error::InvalidPickands { invariant, detail }
}

/// Pickands function interpolating `knots`; the first knot must be `(0, 1)`
/// and the last `(1, 1)`.
pub fn make_piecewise_linear_pickands(knots: &[(f64, f64)]) -> Result<PickandsFunction> {
    Ok(PickandsFunction::new(piecewise_linear(knots)?))
}

pub(crate) fn piecewise_linear(knots: &[(f64, f64)]) -> Result<PiecewiseLinear> {
    if knots.len() < 2 {
        return Err(invalid("knot count", format!("{} knots given, need at least 2", knots.len())));
    }
    if let Some((x, a)) = knots.iter().find(|(x, a)| !x.is_finite() || !a.is_finite()) {
        return Err(invalid("finiteness", format!("knot ({x}, {a})")));
    }
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if first.0 != 0.0 || last.0 != 1.0 {
        return Err(invalid(
            "domain",
            format!("knots must span [0, 1], got [{}, {}]", first.0, last.0),
        ));
    }
    if first.1 != 1.0 || last.1 != 1.0 {
        return Err(invalid(
            "endpoints A(0) = A(1) = 1",
            format!("A(0) = {}, A(1) = {}", first.1, last.1),
        ));
    }
    if let Some(w) = knots.windows(2).find(|w| !(w[1].0 > w[0].0)) {
        return Err(invalid(
            "strictly increasing abscissae",
            format!("{} followed by {}", w[0].0, w[1].0),
        ));
    }
    for &(x, a) in knots {
        if a < x.max(1.0 - x) {
            return Err(invalid("lower bound max(t, 1 - t) <= A(t)", format!("A({x}) = {a}")));
        }
        if a > 1.0 {
            return Err(invalid("upper bound A(t) <= 1", format!("A({x}) = {a}")));
        }
    }
    let slopes: Vec<f64> = knots
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();
    if let Some((k, w)) = slopes
        .windows(2)
        .enumerate()
        .find(|(_, w)| w[1] < w[0] - CONVEXITY_TOL)
    {
        return Err(invalid(
            "convexity",
            format!("slope drops from {} to {} at t = {}", w[0], w[1], knots[k + 1].0),
        ));
    }
    if let Some(s) = slopes.iter().find(|s| s.abs() > 1.0 + CONVEXITY_TOL) {
        return Err(invalid("derivative range [-1, 1]", format!("slope {s}")));
    }
    Ok(PiecewiseLinear {
        xs: knots.iter().map(|k| k.0).collect(),
        values: knots.iter().map(|k| k.1).collect(),
        slopes,
    })
}

/// `Aᵗ(t) = A(1 - t)`.
#[derive(Debug, Clone)]
struct TransposedPickands {
    inner: PickandsFunction,
}

impl PickandsShape for TransposedPickands {
    fn a(&self, t: f64) -> f64 {
        self.inner.a(1.0 - t)
    }

    fn dplus_a(&self, t: f64) -> f64 {
        -self.inner.dminus_a(1.0 - t)
    }

    fn dminus_a(&self, t: f64) -> f64 {
        -self.inner.dplus_a(1.0 - t)
    }

    fn label(&self) -> String {
        format!("transpose({})", self.inner.label())
    }
}

/// Pickands function of the transposed copula.
pub fn transpose_pickands(a: &PickandsFunction) -> PickandsFunction {
    PickandsFunction::new(TransposedPickands { inner: a.clone() })
}

/// Extreme-value copula of a [`PickandsFunction`].
#[derive(Debug, Clone)]
pub struct EvCopula {
    pickands: PickandsFunction,
}

impl EvCopula {
    pub fn new(pickands: PickandsFunction) -> Self {
        Self { pickands }
    }

    pub fn pickands(&self) -> &PickandsFunction {
        &self.pickands
    }
}

impl Copula for EvCopula {
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
        let (lx, ly) = (x.ln(), y.ln());
        let l = lx + ly;
        let t = lx / l;
        clamp_unit((l * self.pickands.a(t)).exp()).min(x).min(y)
    }

    fn kernel_cdf(&self, x: f64, y: f64) -> f64 {
        if x <= 0.0 || x >= 1.0 {
            return 1.0;
        }
        if y <= 0.0 {
            return 0.0;
        }
        if y >= 1.0 {
            return 1.0;
        }
        let (lx, ly) = (x.ln(), y.ln());
        let l = lx + ly;
        let t = lx / l;
        let a = &self.pickands;
        let c = (l * a.a(t)).exp();
        clamp_unit(c / x * (a.a(t) + (1.0 - t) * a.dplus_a(t)))
    }

    fn label(&self) -> String {
        format!("ev({})", self.pickands.label())
    }

    fn transposed(&self) -> Option<SharedCopula> {
        Some(Arc::new(EvCopula::new(transpose_pickands(&self.pickands))))
    }
}

pub fn ev_copula(a: &PickandsFunction) -> SharedCopula {
    Arc::new(EvCopula::new(a.clone()))
}

/// `max |C(x, y) - C(x^{1/n}, y^{1/n})^n|` over the interior `grid × grid` lattice.
pub fn max_stability_check(c: &dyn Copula, n: u32, grid: usize) -> f64 {
    let root = 1.0 / n as f64;
    let pts: Vec<f64> = (1..=grid).map(|i| i as f64 / (grid + 1) as f64).collect();
    let mut worst = 0.0f64;
    for &x in &pts {
        for &y in &pts {
            let lhs = c.cdf(x, y);
            let rhs = c.cdf(x.powf(root), y.powf(root)).powi(n as i32);
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}
