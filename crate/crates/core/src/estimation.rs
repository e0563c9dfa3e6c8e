//! Rank-based estimators: pseudo-observations, the empirical copula,
//! Chatterjee's `r̂ₙ`, the empirical Kendall distribution, generator
//! reconstruction and the endpoint-corrected CFG Pickands estimator.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::archimedean::{archimedean_copula, Generator, KendallCdf, TableGenerator};
use crate::error::{Error, Result};
use crate::extreme_value::{ev_copula, piecewise_linear, PickandsFunction};
use crate::metrics::{dependence_measures, QuadratureSpec};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Default number of subintervals of the reconstruction grid `{k / grid}`.
pub const RECONSTRUCTION_GRID: usize = 10_000;

/// Default floor `eps` in `min(t - F̂(t), -eps)`.
pub const RECONSTRUCTION_EPS: f64 = 1e-6;

/// Cap on `ln φ̂`, below the overflow point of `exp`.
pub const LOG_PHI_CAP: f64 = 690.0;

/// Default number of subintervals of the CFG grid `{k / grid}`.
pub const CFG_GRID: usize = 200;

/// Bivariate observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pairs: Vec<(f64, f64)>,
    ties: bool,
}

impl SampleSet {
    /// Requires at least two observations and no NaN; ties are recorded.
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.len() < 2 {
            return Err(Error::InvalidSample(format!(
                "need at least 2 observations, got {}",
                pairs.len()
            )));
        }
        if let Some(i) = pairs.iter().position(|(x, y)| x.is_nan() || y.is_nan()) {
            return Err(Error::InvalidSample(format!("NaN in observation {i}")));
        }
        let ties = has_ties(pairs.iter().map(|p| p.0)) || has_ties(pairs.iter().map(|p| p.1));
        Ok(Self { pairs, ties })
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Whether either coordinate contains repeated values.
    pub fn has_ties(&self) -> bool {
        self.ties
    }

    fn xs(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    fn ys(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.1).collect()
    }
}

fn has_ties(values: impl Iterator<Item = f64>) -> bool {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.windows(2).any(|w| w[0] == w[1])
}

/// Ranks `1..=n` with ties replaced by their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Rank-transformed sample `(rank(xᵢ)/(n+1), rank(yᵢ)/(n+1))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoObservations {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub ties: bool,
}

impl PseudoObservations {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

pub fn pseudo_obs(s: &SampleSet) -> PseudoObservations {
    let scale = 1.0 / (s.len() + 1) as f64;
    let to_unit = |r: Vec<f64>| r.into_iter().map(|r| r * scale).collect();
    PseudoObservations {
        u: to_unit(average_ranks(&s.xs())),
        v: to_unit(average_ranks(&s.ys())),
        ties: s.has_ties(),
    }
}

/// Step empirical copula `(1/n) #{i : uᵢ ≤ x, vᵢ ≤ y}`.
pub fn empirical_copula_cdf(p: &PseudoObservations, x: f64, y: f64) -> f64 {
    let count = p.u.iter().zip(&p.v).filter(|(&u, &v)| u <= x && v <= y).count();
    count as f64 / p.len() as f64
}

/// Chatterjee's rank coefficient, with ties in `x` broken by a seeded shuffle.
pub fn chatterjee_r(s: &SampleSet, seed: u64) -> f64 {
    let n = s.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let pairs = s.pairs();
    order.sort_by(|&a, &b| pairs[a].0.total_cmp(&pairs[b].0));

    let mut ys: Vec<f64> = s.ys();
    ys.sort_by(f64::total_cmp);
    // r = #{j : y_j <= y}, l = #{j : y_j >= y}
    let count_le = |y: f64| ys.partition_point(|&v| v <= y) as f64;
    let count_ge = |y: f64| (n - ys.partition_point(|&v| v < y)) as f64;

    let r: Vec<f64> = order.iter().map(|&i| count_le(pairs[i].1)).collect();
    let diffs: Vec<f64> = r.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let num: f64 = diffs.iter().sum();
    let den: f64 = pairs
        .iter()
        .map(|p| {
            let l = count_ge(p.1);
            l * (n as f64 - l)
        })
        .sum();
    if den == 0.0 {
        return 0.0;
    }
    1.0 - n as f64 * num / (2.0 * den)
}

/// Fenwick tree over `0..n` counting inserted positions.
struct Fenwick(Vec<u32>);

impl Fenwick {
    fn new(n: usize) -> Self {
        Self(vec![0; n + 1])
    }

    fn add(&mut self, i: usize) {
        let mut k = i + 1;
        while k < self.0.len() {
            self.0[k] += 1;
            k += k & k.wrapping_neg();
        }
    }

    /// Number of inserted positions `< i`.
    fn prefix(&self, i: usize) -> u32 {
        let mut k = i;
        let mut s = 0;
        while k > 0 {
            s += self.0[k];
            k -= k & k.wrapping_neg();
        }
        s
    }
}

/// Empirical Kendall distribution.
///
/// Stores the sorted dominance counts `cᵢ = #{j : x_j < xᵢ, y_j < yᵢ}`. The raw
/// estimate `Kₙ` steps at `Wᵢ = cᵢ/(n-1)`; the evaluated `Kₙ,₂` steps at
/// `cᵢ/(n+1)`, which satisfies `Kₙ,₂(t) ≥ t + 1/(n(n+1))` on `[0, 1)` for every
/// sample, and is additionally projected by `max(·, id)` with `Kₙ,₂(1) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalKendall {
    counts: Vec<u32>,
    /// Whether the raw `Kₙ` drops below the identity somewhere on `[0, 1)`.
    projected: bool,
}

impl EmpiricalKendall {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Sorted raw pseudo-values `Wᵢ = cᵢ/(n-1)`.
    pub fn pseudo_values(&self) -> Vec<f64> {
        let d = (self.len() - 1) as f64;
        self.counts.iter().map(|&c| c as f64 / d).collect()
    }

    /// Sorted distinct jump points `c/(n+1)` of `Kₙ,₂`.
    pub fn jumps(&self) -> Vec<f64> {
        let d = (self.len() + 1) as f64;
        let mut j: Vec<f64> = self.counts.iter().map(|&c| c as f64 / d).collect();
        j.dedup();
        j
    }

    pub fn is_projected(&self) -> bool {
        self.projected
    }

    fn step(&self, t: f64, denominator: usize) -> f64 {
        let c = self
            .counts
            .partition_point(|&c| c as f64 / denominator as f64 <= t);
        c as f64 / self.len() as f64
    }

    /// Raw `Kₙ(t) = (1/n) #{i : Wᵢ ≤ t}`.
    pub fn raw(&self, t: f64) -> f64 {
        self.step(t, self.len() - 1)
    }
}

impl KendallCdf for EmpiricalKendall {
    fn eval(&self, t: f64) -> f64 {
        if t >= 1.0 {
            return 1.0;
        }
        if t < 0.0 {
            return 0.0;
        }
        self.step(t, self.len() + 1).max(t)
    }
}

/// Dominance counts by a Fenwick sweep in `x`, strict in both coordinates.
pub fn empirical_kendall(p: &PseudoObservations) -> EmpiricalKendall {
    let n = p.len();
    let mut v_sorted = p.v.clone();
    v_sorted.sort_by(f64::total_cmp);
    v_sorted.dedup();
    let v_rank: Vec<usize> = p
        .v
        .iter()
        .map(|v| v_sorted.partition_point(|s| s < v))
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| p.u[a].total_cmp(&p.u[b]));
    let mut tree = Fenwick::new(v_sorted.len());
    let mut counts = vec![0u32; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && p.u[order[end]] == p.u[order[start]] {
            end += 1;
        }
        for &i in &order[start..end] {
            counts[i] = tree.prefix(v_rank[i]);
        }
        for &i in &order[start..end] {
            tree.add(v_rank[i]);
        }
        start = end;
    }
    counts.sort_unstable();

    // K_n(W-) = k/n at the first occurrence of each distinct W = W_(k)
    let projected = counts.iter().enumerate().any(|(k, &c)| {
        (k == 0 || c != counts[k - 1]) && (k as f64 / n as f64) < c as f64 / (n - 1) as f64
    });
    EmpiricalKendall { counts, projected }
}

/// Tabulated generator recovered from a Kendall distribution function.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub generator: Generator,
    /// Grid nodes `t_k` and `φ̂(t_k)` before tabulation.
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    /// Nodes where `t - F̂(t)` was replaced by `-eps`.
    pub floored_nodes: usize,
    /// Nodes where `ln φ̂` hit [`LOG_PHI_CAP`].
    pub capped_nodes: usize,
    pub strict: bool,
}

/// `φ̂(x) = exp(∫_{1/2}^{x} dt / min(t - F̂(t), -eps))` by the trapezoid rule on
/// `{k / grid : 1 ≤ k ≤ grid}`; strict iff `φ̂(1/grid) > 1/eps`.
pub fn reconstruct_generator(k: &dyn KendallCdf, grid: usize, eps: f64) -> Result<Reconstruction> {
    if grid < 4 || !grid.is_multiple_of(2) {
        return Err(Error::InvalidConfig(format!(
            "reconstruction grid {grid} must be even and at least 4"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidConfig(format!("floor eps = {eps} must be positive")));
    }
    let h = 1.0 / grid as f64;
    let nodes: Vec<f64> = (1..=grid).map(|k| k as f64 / grid as f64).collect();
    let mut floored_nodes = 0;
    let integrand: Vec<f64> = nodes
        .iter()
        .map(|&t| {
            let d = t - k.eval(t);
            if d > -eps {
                floored_nodes += 1;
                -1.0 / eps
            } else {
                1.0 / d
            }
        })
        .collect();

    let mid = grid / 2 - 1;
    let mut log_phi = vec![0.0; grid];
    for i in mid + 1..grid {
        log_phi[i] = log_phi[i - 1] + 0.5 * h * (integrand[i - 1] + integrand[i]);
    }
    for i in (0..mid).rev() {
        log_phi[i] = log_phi[i + 1] - 0.5 * h * (integrand[i] + integrand[i + 1]);
    }
    let mut capped_nodes = 0;
    let values: Vec<f64> = log_phi
        .iter()
        .map(|&l| {
            if l > LOG_PHI_CAP {
                capped_nodes += 1;
                LOG_PHI_CAP.exp()
            } else {
                l.exp()
            }
        })
        .collect();
    let strict = values[0] > 1.0 / eps;
    let generator = Generator::new(TableGenerator::new(nodes.clone(), values.clone(), strict)?);
    Ok(Reconstruction {
        generator,
        nodes,
        values,
        floored_nodes,
        capped_nodes,
        strict,
    })
}

/// Endpoint-corrected CFG estimate of `A` on `{k / grid}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PickandsTable {
    pub t: Vec<f64>,
    pub a: Vec<f64>,
}

pub fn cfg_estimator(p: &PseudoObservations, grid: usize) -> PickandsTable {
    let grid = grid.max(2);
    let n = p.len() as f64;
    let lu: Vec<f64> = p.u.iter().map(|u| -u.ln()).collect();
    let lv: Vec<f64> = p.v.iter().map(|v| -v.ln()).collect();
    let log_a = |t: f64| -> f64 {
        let s: f64 = lu
            .iter()
            .zip(&lv)
            .map(|(&a, &b)| {
                let xi = if t <= 0.0 {
                    a
                } else if t >= 1.0 {
                    b
                } else {
                    (a / (1.0 - t)).min(b / t)
                };
                xi.ln()
            })
            .sum();
        -EULER_GAMMA - s / n
    };
    let at_zero = log_a(0.0);
    let at_one = log_a(1.0);
    let t: Vec<f64> = (0..=grid).map(|k| k as f64 / grid as f64).collect();
    let a = t
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            if k == 0 || k == grid {
                1.0
            } else {
                (log_a(t) - (1.0 - t) * at_zero - t * at_one).exp()
            }
        })
        .collect();
    PickandsTable { t, a }
}

/// Greatest convex minorant of `max(min(raw, 1), t, 1 - t)` as a piecewise-linear
/// Pickands function.
pub fn convexify_pickands(raw: &PickandsTable) -> Result<PickandsFunction> {
    let n = raw.t.len();
    if n < 2 || raw.t[0] != 0.0 || raw.t[n - 1] != 1.0 || raw.t.len() != raw.a.len() {
        return Err(Error::InvalidPickands {
            invariant: "domain",
            detail: "raw table must run from t = 0 to t = 1".into(),
        });
    }
    let pts: Vec<(f64, f64)> = raw
        .t
        .iter()
        .zip(&raw.a)
        .enumerate()
        .map(|(k, (&t, &a))| {
            let a = if k == 0 || k == n - 1 || a.is_nan() {
                1.0
            } else {
                a.min(1.0).max(t.max(1.0 - t))
            };
            (t, a)
        })
        .collect();

    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(n);
    for &p in &pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(PickandsFunction::new(piecewise_linear(&hull)?))
}

/// Structural assumption behind a plug-in estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PluginModel {
    Archimedean,
    ExtremeValue,
}

/// Plug-in `ζ₁` and `r` of a fitted copula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PluginEstimate {
    pub zeta1: f64,
    pub r: f64,
}

/// Fits the chosen model and evaluates `ζ₁` and `r` on it.
pub fn plugin_zeta1_r(
    p: &PseudoObservations,
    which: PluginModel,
    q: &QuadratureSpec,
) -> Result<PluginEstimate> {
    let copula = match which {
        PluginModel::Archimedean => {
            let k = empirical_kendall(p);
            let rec = reconstruct_generator(&k, RECONSTRUCTION_GRID, RECONSTRUCTION_EPS)?;
            archimedean_copula(&rec.generator)
        }
        PluginModel::ExtremeValue => ev_copula(&convexify_pickands(&cfg_estimator(p, CFG_GRID))?),
    };
    let m = dependence_measures(copula.as_ref(), q);
    let tolerance = q.identity_tolerance();
    if !(m.identity_gap() <= tolerance) {
        return Err(Error::IdentityMismatch {
            direct: m.r,
            via_d2: m.r_via_d2,
            tolerance,
        });
    }
    Ok(PluginEstimate {
        zeta1: m.zeta1,
        r: m.r,
    })
}
