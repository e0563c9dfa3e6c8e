//! Kernel-based distances and dependence measures.
//!
//! All double integrals over `[0, 1]²` share one tensor quadrature described by
//! [`QuadratureSpec`]. Rows (fixed `y`) are evaluated in parallel, each with a
//! fixed summation order, and combined by pairwise reduction, so results do not
//! depend on the thread schedule.

use rayon::prelude::*;
use serde::Serialize;

use crate::copula::{make_pi, transpose, Copula, SharedCopula};
use crate::error::{Error, Result};

/// Default number of cells per axis.
pub const DEFAULT_RESOLUTION: usize = 512;

/// Tolerance of the `r = 6 D2²(C, Π)` check under [`QuadratureRule::CellAverage`].
pub const CELL_AVERAGE_IDENTITY_TOL: f64 = 1e-6;

/// How the unit square is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureRule {
    /// Kernel at cell centers.
    Midpoint,
    /// Kernel at the two Gauss–Legendre nodes of every cell in each axis.
    GaussLegendre2,
    /// Cell-averaged kernel `m (C(x_{i+1}, y) - C(x_i, y))` in `x`, Gauss–Legendre nodes in `y`.
    CellAverage,
}

impl std::str::FromStr for QuadratureRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(Self::Midpoint),
            "gl2" | "gauss-legendre2" => Ok(Self::GaussLegendre2),
            "cell-average" => Ok(Self::CellAverage),
            other => Err(Error::InvalidConfig(format!("unknown quadrature rule `{other}`"))),
        }
    }
}

/// Grid resolution and rule for the `λ ⊗ λ` integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadratureSpec {
    m: usize,
    rule: QuadratureRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            m: DEFAULT_RESOLUTION,
            rule: QuadratureRule::GaussLegendre2,
        }
    }
}

impl QuadratureSpec {
    pub fn new(m: usize, rule: QuadratureRule) -> Result<Self> {
        if m < 8 {
            return Err(Error::InvalidConfig(format!("quadrature resolution m = {m} must be at least 8")));
        }
        Ok(Self { m, rule })
    }

    pub fn with_resolution(m: usize) -> Result<Self> {
        Self::new(m, QuadratureRule::GaussLegendre2)
    }

    pub fn resolution(&self) -> usize {
        self.m
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    /// Lipschitz bound `2/m` on the error of [`d_inf`].
    pub fn lattice_error_bound(&self) -> f64 {
        2.0 / self.m as f64
    }

    /// Allowed gap between the two evaluations in [`r_measure`].
    pub fn identity_tolerance(&self) -> f64 {
        match self.rule {
            QuadratureRule::CellAverage => CELL_AVERAGE_IDENTITY_TOL,
            _ => 4.0 / self.m as f64,
        }
    }

    fn gauss_nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let h = 1.0 / self.m as f64;
        let off = 0.5 / 3f64.sqrt();
        let mut pts = Vec::with_capacity(2 * self.m);
        for i in 0..self.m {
            let c = (i as f64 + 0.5) * h;
            pts.push(c - off * h);
            pts.push(c + off * h);
        }
        let w = vec![0.5 * h; pts.len()];
        (pts, w)
    }

    fn midpoint_nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let h = 1.0 / self.m as f64;
        let pts = (0..self.m).map(|i| (i as f64 + 0.5) * h).collect();
        (pts, vec![h; self.m])
    }

    /// Nodes and weights in `y`.
    fn y_nodes(&self) -> (Vec<f64>, Vec<f64>) {
        match self.rule {
            QuadratureRule::Midpoint => self.midpoint_nodes(),
            _ => self.gauss_nodes(),
        }
    }

    /// Kernel values along a row, paired with `x` weights.
    fn kernel_row(&self, c: &dyn Copula, y: f64, xs: &[f64]) -> Vec<f64> {
        match self.rule {
            QuadratureRule::CellAverage => {
                let m = self.m as f64;
                let mut prev = c.cdf(0.0, y);
                (1..=self.m)
                    .map(|i| {
                        let next = c.cdf(i as f64 / m, y);
                        let v = m * (next - prev);
                        prev = next;
                        v
                    })
                    .collect()
            }
            _ => xs.iter().map(|&x| c.kernel_cdf(x, y)).collect(),
        }
    }

    fn x_nodes(&self) -> (Vec<f64>, Vec<f64>) {
        match self.rule {
            QuadratureRule::Midpoint => self.midpoint_nodes(),
            QuadratureRule::GaussLegendre2 => self.gauss_nodes(),
            QuadratureRule::CellAverage => {
                let h = 1.0 / self.m as f64;
                ((0..self.m).map(|i| (i as f64 + 0.5) * h).collect(), vec![h; self.m])
            }
        }
    }
}

/// Sum in a fixed binary-tree order.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n if n <= 8 => v.iter().sum(),
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// Per-row integrals in `x` of `|K₁ - K₂|`, `(K₁ - K₂)²` and `K₁²`.
#[derive(Debug, Clone, Copy)]
struct RowStats {
    weight: f64,
    abs: f64,
    sq: f64,
    k1_sq: f64,
}

fn row_stats(c1: &dyn Copula, c2: &dyn Copula, q: &QuadratureSpec) -> Vec<RowStats> {
    let (xs, wx) = q.x_nodes();
    let (ys, wy) = q.y_nodes();
    ys.par_iter()
        .zip(wy.par_iter())
        .map(|(&y, &weight)| {
            let k1 = q.kernel_row(c1, y, &xs);
            let k2 = q.kernel_row(c2, y, &xs);
            let (mut abs, mut sq, mut k1_sq) = (0.0, 0.0, 0.0);
            for ((a, b), w) in k1.iter().zip(&k2).zip(&wx) {
                let d = a - b;
                abs += w * d.abs();
                sq += w * d * d;
                k1_sq += w * a * a;
            }
            RowStats {
                weight,
                abs,
                sq,
                k1_sq,
            }
        })
        .collect()
}

fn integrate_rows(rows: &[RowStats], f: impl Fn(&RowStats) -> f64) -> f64 {
    let terms: Vec<f64> = rows.iter().map(|r| r.weight * f(r)).collect();
    pairwise_sum(&terms)
}

/// `max |C₁ - C₂|` over the `(m+1)²` lattice; exact up to [`QuadratureSpec::lattice_error_bound`].
pub fn d_inf(c1: &dyn Copula, c2: &dyn Copula, q: &QuadratureSpec) -> f64 {
    let m = q.m;
    (0..=m)
        .into_par_iter()
        .map(|j| {
            let y = j as f64 / m as f64;
            (0..=m)
                .map(|i| {
                    let x = i as f64 / m as f64;
                    (c1.cdf(x, y) - c2.cdf(x, y)).abs()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// `D₁(C₁, C₂) = ∫∫ |K₁(x, [0, y]) - K₂(x, [0, y])| dx dy`.
pub fn d1(c1: &dyn Copula, c2: &dyn Copula, q: &QuadratureSpec) -> f64 {
    integrate_rows(&row_stats(c1, c2, q), |r| r.abs)
}

/// `D₂²(C₁, C₂) = ∫∫ (K₁ - K₂)² dx dy`.
pub fn d2_squared(c1: &dyn Copula, c2: &dyn Copula, q: &QuadratureSpec) -> f64 {
    integrate_rows(&row_stats(c1, c2, q), |r| r.sq)
}

/// `D∞(C₁, C₂) = sup_y ∫ |K₁ - K₂| dx`.
pub fn d_infty_metric(c1: &dyn Copula, c2: &dyn Copula, q: &QuadratureSpec) -> f64 {
    row_stats(c1, c2, q).iter().map(|r| r.abs).fold(0.0, f64::max)
}

/// `ζ₁(C) = 3 D₁(C, Π)`.
pub fn zeta1(c: &dyn Copula, q: &QuadratureSpec) -> f64 {
    3.0 * d1(c, make_pi().as_ref(), q)
}

/// Kernel-based measures of a copula against `Π`, all from one quadrature pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DependenceMeasures {
    pub zeta1: f64,
    /// `6 ∫∫ K² - 2`.
    pub r: f64,
    /// `6 D₂²(C, Π)`.
    pub r_via_d2: f64,
    pub d1_to_pi: f64,
    pub d2_squared_to_pi: f64,
    pub d_infty_to_pi: f64,
}

impl DependenceMeasures {
    pub fn identity_gap(&self) -> f64 {
        (self.r - self.r_via_d2).abs()
    }
}

pub fn dependence_measures(c: &dyn Copula, q: &QuadratureSpec) -> DependenceMeasures {
    let rows = row_stats(c, make_pi().as_ref(), q);
    let d1 = integrate_rows(&rows, |r| r.abs);
    let d2 = integrate_rows(&rows, |r| r.sq);
    let k_sq = integrate_rows(&rows, |r| r.k1_sq);
    DependenceMeasures {
        zeta1: 3.0 * d1,
        r: 6.0 * k_sq - 2.0,
        r_via_d2: 6.0 * d2,
        d1_to_pi: d1,
        d2_squared_to_pi: d2,
        d_infty_to_pi: rows.iter().map(|r| r.abs).fold(0.0, f64::max),
    }
}

/// `r(C) = 6 ∫∫ K² - 2`, checked against `6 D₂²(C, Π)` on the same quadrature.
pub fn r_measure(c: &dyn Copula, q: &QuadratureSpec) -> Result<f64> {
    let m = dependence_measures(c, q);
    let tolerance = q.identity_tolerance();
    if !(m.identity_gap() <= tolerance) {
        return Err(Error::IdentityMismatch {
            direct: m.r,
            via_d2: m.r_via_d2,
            tolerance,
        });
    }
    Ok(m.r)
}

/// `∂`-distance `D₁(C₁, C₂) + D₁(C₁ᵗ, C₂ᵗ)`.
pub fn partial_distance(c1: &SharedCopula, c2: &SharedCopula, q: &QuadratureSpec) -> f64 {
    d1(c1.as_ref(), c2.as_ref(), q) + d1(transpose(c1).as_ref(), transpose(c2).as_ref(), q)
}

/// Bisection steps for [`levy_distance`].
const LEVY_STEPS: usize = 48;

/// Lévy distance between two distribution functions on `[0, 1]`, with the
/// supremum over `y` taken on the grid `{j / n}`.
pub fn levy_distance(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, n: usize) -> f64 {
    let n = n.max(1);
    let ys: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
    let fy: Vec<f64> = ys.iter().map(|&y| f(y)).collect();
    let gy: Vec<f64> = ys.iter().map(|&y| g(y)).collect();
    let eval = |h: &dyn Fn(f64) -> f64, z: f64| {
        if z >= 1.0 {
            1.0
        } else if z < 0.0 {
            0.0
        } else {
            h(z)
        }
    };
    // F(y) <= G(y + ε) + ε and G(y) <= F(y + ε) + ε on the grid
    let holds = |eps: f64| {
        ys.iter().enumerate().all(|(j, &y)| {
            fy[j] <= eval(&g, y + eps) + eps && gy[j] <= eval(&f, y + eps) + eps
        })
    };
    if holds(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..LEVY_STEPS {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `x_i = frac(i φ)` for `i = 1..=n`, `φ` the golden ratio.
pub fn golden_abscissae(n: usize) -> Vec<f64> {
    let step = (5f64.sqrt() - 1.0) / 2.0;
    (1..=n).map(|i| (i as f64 * step).fract()).collect()
}

/// Summary of per-abscissa conditional-law distances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WccProfile {
    pub xs: Vec<f64>,
    pub dist: Vec<f64>,
    pub max: f64,
    pub mean: f64,
    pub q95: f64,
}

/// Linear-interpolation quantile of sorted data.
pub(crate) fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = p * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Lévy distances between `y ↦ K₁(x, [0, y])` and `y ↦ K₂(x, [0, y])` at each `x`.
pub fn wcc_profile(c1: &dyn Copula, c2: &dyn Copula, xs: &[f64], y_grid: usize) -> WccProfile {
    let dist: Vec<f64> = xs
        .par_iter()
        .map(|&x| levy_distance(|y| c1.kernel_cdf(x, y), |y| c2.kernel_cdf(x, y), y_grid))
        .collect();
    let mut sorted = dist.clone();
    sorted.sort_by(f64::total_cmp);
    WccProfile {
        xs: xs.to_vec(),
        max: sorted.last().copied().unwrap_or(0.0),
        mean: if dist.is_empty() { 0.0 } else { pairwise_sum(&dist) / dist.len() as f64 },
        q95: quantile_sorted(&sorted, 0.95),
        dist,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula::{make_m, make_w};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn basic_distances() {
        let q = QuadratureSpec::default();
        let (pi, m, w) = (make_pi(), make_m(), make_w());
        assert_eq!(d_inf(pi.as_ref(), pi.as_ref(), &q), 0.0);
        assert!(close(d_inf(m.as_ref(), pi.as_ref(), &q), 0.25, 1e-12));
        assert!(close(d_inf(w.as_ref(), pi.as_ref(), &q), 0.25, 1e-12));
        assert!(close(d1(m.as_ref(), pi.as_ref(), &q), 1.0 / 3.0, 2e-3));
        assert!(close(d2_squared(m.as_ref(), pi.as_ref(), &q), 1.0 / 6.0, 2e-3));
        assert!(close(d_infty_metric(m.as_ref(), pi.as_ref(), &q), 0.5, 2e-3));
        assert_eq!(d2_squared(pi.as_ref(), pi.as_ref(), &q), 0.0);
    }

    #[test]
    fn rules_agree_on_smooth_copulas() {
        let c = crate::archimedean::archimedean_copula(&crate::archimedean::make_clayton(2.0).unwrap());
        let vals: Vec<f64> = [QuadratureRule::Midpoint, QuadratureRule::GaussLegendre2, QuadratureRule::CellAverage]
            .into_iter()
            .map(|rule| zeta1(c.as_ref(), &QuadratureSpec::new(256, rule).unwrap()))
            .collect();
        assert!(close(vals[0], vals[1], 1e-4) && close(vals[1], vals[2], 1e-4), "{vals:?}");
    }

    #[test]
    fn r_identity() {
        let exact = QuadratureSpec::new(128, QuadratureRule::CellAverage).unwrap();
        for c in [make_pi(), make_m(), make_w()] {
            let r = r_measure(c.as_ref(), &exact).unwrap();
            assert!((0.0 - 6e-3..=1.0 + 6e-3).contains(&r));
        }
        assert!(close(r_measure(make_m().as_ref(), &QuadratureSpec::default()).unwrap(), 1.0, 6e-3));
        assert!(QuadratureSpec::new(4, QuadratureRule::Midpoint).is_err());
    }

    #[test]
    fn levy_distance_of_point_masses() {
        let step = |a: f64| move |y: f64| if y >= a { 1.0 } else { 0.0 };
        assert!(close(levy_distance(step(0.3), step(0.3), 1000), 0.0, 1e-12));
        assert!(close(levy_distance(step(0.3), step(0.35), 1000), 0.05, 1e-9));
        // point mass at g against the uniform law: max(g, 1 - g) / 2
        assert!(close(levy_distance(step(0.5), |y| y, 1000), 0.25, 1e-9));
        assert!(close(levy_distance(step(0.1), |y| y, 1000), 0.45, 1e-9));
        let d = levy_distance(|y: f64| y, |y: f64| y * y, 1000);
        assert!(d > 0.0 && d <= 0.25);
    }

    #[test]
    fn profile_summary() {
        let xs = golden_abscissae(25);
        assert!(xs.iter().all(|&x| x > 0.0 && x < 1.0));
        let p = wcc_profile(make_m().as_ref(), make_m().as_ref(), &xs, 200);
        assert!(p.dist.iter().all(|&d| d == 0.0));
        let p = wcc_profile(make_m().as_ref(), make_pi().as_ref(), &xs, 400);
        assert!(p.max <= 0.5 + 1e-9 && p.mean <= p.max && p.q95 <= p.max);
        assert_eq!(quantile_sorted(&[1.0, 2.0, 3.0], 0.5), 2.0);
    }
}
