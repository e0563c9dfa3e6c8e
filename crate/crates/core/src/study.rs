//! Command implementations: measures, estimation reports, replication
//! studies, convergence curves and checkerboard approximation profiles.
//!
//! Every function is deterministic given its inputs; outputs are CSV with a
//! fixed column order or JSON with sorted keys.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::archimedean::KendallCdf;
use crate::checkerboard::{checkerboard_approx, checkerboard_copula};
use crate::convergence::{archimedean_discrepancies, ev_discrepancies, DiscrepancyOptions};
use crate::copula::make_pi;
use crate::counterexamples::StripCopula;
use crate::error::{Error, Result};
use crate::estimation::{
    cfg_estimator, chatterjee_r, convexify_pickands, empirical_kendall, plugin_zeta1_r,
    pseudo_obs, reconstruct_generator, PluginModel, SampleSet, CFG_GRID, RECONSTRUCTION_EPS,
    RECONSTRUCTION_GRID,
};
use crate::io::{fmt_f64, to_sorted_json};
use crate::metrics::{
    d1, d_inf, dependence_measures, golden_abscissae, quantile_sorted, wcc_profile,
    QuadratureRule, QuadratureSpec,
};
use crate::registry::{FamilySpec, Structure};
use crate::sampling::{sample, RngSpec};

/// Quadrature resolution of plug-in estimates inside replication studies.
pub const STUDY_RESOLUTION: usize = 128;

/// Default `y` grid of Lévy distances in command outputs.
pub const PROFILE_Y_GRID: usize = 2000;

/// Default number of golden-ratio abscissae in profiles.
pub const PROFILE_POINTS: usize = 25;

/// Estimators compared in a replication study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Estimator {
    #[serde(rename = "chatterjee")]
    Chatterjee,
    #[serde(rename = "plugin-arch")]
    PluginArch,
    #[serde(rename = "plugin-ev")]
    PluginEv,
}

impl Estimator {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Chatterjee => "chatterjee",
            Self::PluginArch => "plugin-arch",
            Self::PluginEv => "plugin-ev",
        }
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chatterjee" => Ok(Self::Chatterjee),
            "plugin-arch" => Ok(Self::PluginArch),
            "plugin-ev" => Ok(Self::PluginEv),
            other => Err(Error::InvalidConfig(format!("unknown estimator `{other}`"))),
        }
    }
}

// ---------------------------------------------------------------- measure

#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    pub copula: String,
    pub m: usize,
    pub rule: QuadratureRule,
    pub zeta1: f64,
    pub r: f64,
    pub r_via_d2: f64,
    pub d1_to_pi: f64,
    pub d2_squared_to_pi: f64,
    pub d_infty_to_pi: f64,
    pub d_inf_to_pi: f64,
    pub d_inf_error_bound: f64,
}

/// Dependence measures of a family; fails if the `r` identity check fails.
pub fn measure(family: &FamilySpec, q: &QuadratureSpec) -> Result<MeasureReport> {
    let c = family.copula()?;
    let m = dependence_measures(c.as_ref(), q);
    let tolerance = q.identity_tolerance();
    if !(m.identity_gap() <= tolerance) {
        return Err(Error::IdentityMismatch {
            direct: m.r,
            via_d2: m.r_via_d2,
            tolerance,
        });
    }
    Ok(MeasureReport {
        copula: family.to_string(),
        m: q.resolution(),
        rule: q.rule(),
        zeta1: m.zeta1,
        r: m.r,
        r_via_d2: m.r_via_d2,
        d1_to_pi: m.d1_to_pi,
        d2_squared_to_pi: m.d2_squared_to_pi,
        d_infty_to_pi: m.d_infty_to_pi,
        d_inf_to_pi: d_inf(c.as_ref(), make_pi().as_ref(), q),
        d_inf_error_bound: q.lattice_error_bound(),
    })
}

// ---------------------------------------------------------------- estimate

/// Fitted Kendall function and generator on a coarse grid.
#[derive(Debug, Clone, Serialize)]
pub struct KendallTable {
    pub t: Vec<f64>,
    pub kendall: Vec<f64>,
    pub phi: Vec<f64>,
    pub floored_nodes: usize,
    pub capped_nodes: usize,
    pub strict: bool,
    pub projected: bool,
}

/// Raw CFG table and the knots of its convex minorant.
#[derive(Debug, Clone, Serialize)]
pub struct PickandsReport {
    pub raw_t: Vec<f64>,
    pub raw_a: Vec<f64>,
    pub knots: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub mode: Estimator,
    pub n: usize,
    pub ties: bool,
    pub seed: u64,
    pub r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kendall: Option<KendallTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pickands: Option<PickandsReport>,
}

/// Points of the tabulated artifacts in [`EstimateReport`].
const REPORT_GRID: usize = 100;

pub fn estimate(s: &SampleSet, mode: Estimator, seed: u64, q: &QuadratureSpec) -> Result<EstimateReport> {
    let mut report = EstimateReport {
        mode,
        n: s.len(),
        ties: s.has_ties(),
        seed,
        r: 0.0,
        zeta1: None,
        kendall: None,
        pickands: None,
    };
    if mode == Estimator::Chatterjee {
        report.r = chatterjee_r(s, seed);
        return Ok(report);
    }
    let p = pseudo_obs(s);
    let grid: Vec<f64> = (0..=REPORT_GRID).map(|k| k as f64 / REPORT_GRID as f64).collect();
    let model = match mode {
        Estimator::PluginArch => {
            let k = empirical_kendall(&p);
            let rec = reconstruct_generator(&k, RECONSTRUCTION_GRID, RECONSTRUCTION_EPS)?;
            report.kendall = Some(KendallTable {
                kendall: grid.iter().map(|&t| k.eval(t)).collect(),
                phi: grid.iter().map(|&t| rec.generator.phi(t)).collect(),
                t: grid.clone(),
                floored_nodes: rec.floored_nodes,
                capped_nodes: rec.capped_nodes,
                strict: rec.strict,
                projected: k.is_projected(),
            });
            PluginModel::Archimedean
        }
        _ => {
            let raw = cfg_estimator(&p, CFG_GRID);
            let a = convexify_pickands(&raw)?;
            let knots = knots_of(&a, &raw.t);
            report.pickands = Some(PickandsReport {
                raw_t: raw.t,
                raw_a: raw.a,
                knots,
            });
            PluginModel::ExtremeValue
        }
    };
    let est = plugin_zeta1_r(&p, model, q)?;
    report.r = est.r;
    report.zeta1 = Some(est.zeta1);
    Ok(report)
}

/// Vertices of a piecewise-linear function among `ts` (points where the slope changes).
fn knots_of(a: &crate::extreme_value::PickandsFunction, ts: &[f64]) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, a.a(0.0))];
    for w in ts.windows(3) {
        if a.dplus_a(w[1]) != a.dminus_a(w[1]) {
            out.push((w[1], a.a(w[1])));
        }
    }
    out.push((1.0, a.a(1.0)));
    out
}

// ---------------------------------------------------------------- simulate

/// Replication study design.
#[derive(Debug, Clone, Serialize)]
pub struct StudyConfig {
    pub family: FamilySpec,
    pub sizes: Vec<usize>,
    pub replications: usize,
    pub estimators: Vec<Estimator>,
    pub seed: u64,
    /// Quadrature of plug-in estimates (cell-average rule).
    pub m: usize,
    pub timings: bool,
}

impl Serialize for FamilySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::InvalidConfig("R must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.sizes.iter().any(|&n| n < 10) {
            return Err(Error::InvalidConfig("sample sizes must be non-empty and at least 10".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidConfig("estimator list is empty".into()));
        }
        QuadratureSpec::new(self.m, QuadratureRule::CellAverage)?;
        self.family.copula()?;
        Ok(())
    }
}

/// One replication of one estimator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRecord {
    pub estimator: Estimator,
    pub n: usize,
    pub replication: usize,
    pub seed: u64,
    pub value: f64,
    pub wall_time: Option<f64>,
}

/// Summary of one (estimator, n) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub estimator: Estimator,
    pub n: usize,
    pub count: usize,
    pub mean: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub min: f64,
    pub max: f64,
    pub bias: f64,
    pub rmse: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StudySummary {
    pub config: StudyConfig,
    /// `r` of the sampled family (cell-average rule, default resolution).
    pub true_r: f64,
    pub cells: Vec<CellSummary>,
}

#[derive(Debug, Clone)]
pub struct StudyResult {
    pub records: Vec<StudyRecord>,
    pub summary: StudySummary,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Seed of replication `rep` of `estimator` at size `n`: SplitMix64 folded over
/// the base seed, the FNV-1a hash of the estimator name, `n` and `rep`.
pub fn replication_seed(base: u64, estimator: Estimator, n: usize, rep: usize) -> u64 {
    [fnv1a(estimator.name()), n as u64, rep as u64]
        .into_iter()
        .fold(splitmix(base), |h, v| splitmix(h ^ v))
}

/// `r` of the family under the exact-identity quadrature at default resolution.
pub fn true_r(family: &FamilySpec) -> Result<f64> {
    let q = QuadratureSpec::new(crate::metrics::DEFAULT_RESOLUTION, QuadratureRule::CellAverage)?;
    crate::metrics::r_measure(family.copula()?.as_ref(), &q)
}

fn run_one(
    c: &dyn crate::copula::Copula,
    estimator: Estimator,
    n: usize,
    rep: usize,
    cfg: &StudyConfig,
    q: &QuadratureSpec,
) -> Result<StudyRecord> {
    let start = Instant::now();
    let seed = replication_seed(cfg.seed, estimator, n, rep);
    let s = sample(c, n, RngSpec::new(seed, rep as u64))?;
    let value = match estimator {
        Estimator::Chatterjee => chatterjee_r(&s, seed),
        Estimator::PluginArch => plugin_zeta1_r(&pseudo_obs(&s), PluginModel::Archimedean, q)?.r,
        Estimator::PluginEv => plugin_zeta1_r(&pseudo_obs(&s), PluginModel::ExtremeValue, q)?.r,
    };
    if !value.is_finite() {
        return Err(Error::InvalidSample(format!(
            "non-finite estimate from {} at n = {n}, replication {rep}",
            estimator.name()
        )));
    }
    Ok(StudyRecord {
        estimator,
        n,
        replication: rep,
        seed,
        value,
        wall_time: cfg.timings.then(|| start.elapsed().as_secs_f64()),
    })
}

/// Runs every replication in parallel on `jobs` workers; records come back in
/// canonical (estimator, n, replication) order.
pub fn simulate(cfg: &StudyConfig, jobs: usize) -> Result<StudyResult> {
    cfg.validate()?;
    let c = cfg.family.copula()?;
    let q = QuadratureSpec::new(cfg.m, QuadratureRule::CellAverage)?;
    let mut estimators = cfg.estimators.clone();
    estimators.sort();
    estimators.dedup();
    let mut sizes = cfg.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let tasks: Vec<(Estimator, usize, usize)> = estimators
        .iter()
        .flat_map(|&e| sizes.iter().flat_map(move |&n| (0..cfg.replications).map(move |r| (e, n, r))))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let records: Vec<StudyRecord> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(e, n, r)| run_one(c.as_ref(), e, n, r, cfg, &q))
            .collect::<Result<_>>()
    })?;
    let truth = true_r(&cfg.family)?;
    let summary = StudySummary {
        config: cfg.clone(),
        true_r: truth,
        cells: summarize(&records, truth),
    };
    Ok(StudyResult { records, summary })
}

/// Per-cell quartiles (type-7), mean, bias and RMSE against `truth`.
pub fn summarize(records: &[StudyRecord], truth: f64) -> Vec<CellSummary> {
    let mut cells: BTreeMap<(Estimator, usize), Vec<f64>> = BTreeMap::new();
    for r in records {
        cells.entry((r.estimator, r.n)).or_default().push(r.value);
    }
    cells
        .into_iter()
        .map(|((estimator, n), values)| {
            let count = values.len();
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            let mean = values.iter().sum::<f64>() / count as f64;
            let mse = values.iter().map(|v| (v - truth).powi(2)).sum::<f64>() / count as f64;
            CellSummary {
                estimator,
                n,
                count,
                mean,
                q25: quantile_sorted(&sorted, 0.25),
                median: quantile_sorted(&sorted, 0.5),
                q75: quantile_sorted(&sorted, 0.75),
                min: sorted[0],
                max: sorted[count - 1],
                bias: mean - truth,
                rmse: mse.sqrt(),
            }
        })
        .collect()
}

/// Record-level CSV: `estimator,n,replication,seed,value,wall_time`.
pub fn records_csv(records: &[StudyRecord]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["estimator", "n", "replication", "seed", "value", "wall_time"])?;
    for r in records {
        wtr.write_record([
            r.estimator.name().to_owned(),
            r.n.to_string(),
            r.replication.to_string(),
            r.seed.to_string(),
            fmt_f64(r.value),
            r.wall_time.map(fmt_f64).unwrap_or_default(),
        ])?;
    }
    into_string(wtr)
}

/// Parses [`records_csv`] output.
pub fn parse_records_csv(text: &str) -> Result<Vec<StudyRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let bad = |what: &str| Error::InvalidSample(format!("bad {what} in study record"));
        out.push(StudyRecord {
            estimator: rec[0].parse()?,
            n: rec[1].parse().map_err(|_| bad("n"))?,
            replication: rec[2].parse().map_err(|_| bad("replication"))?,
            seed: rec[3].parse().map_err(|_| bad("seed"))?,
            value: rec[4].parse().map_err(|_| bad("value"))?,
            wall_time: if rec[5].is_empty() {
                None
            } else {
                Some(rec[5].parse().map_err(|_| bad("wall_time"))?)
            },
        });
    }
    Ok(out)
}

pub fn summary_json(s: &StudySummary) -> Result<String> {
    to_sorted_json(s)
}

fn into_string(wtr: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = wtr
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

// ---------------------------------------------------------------- converge

/// Parameter sequence of a convergence run.
#[derive(Debug, Clone, PartialEq)]
pub enum ParameterSequence {
    /// `θ_k = θ + 1/k` for each listed `k`, `θ` the family parameter.
    Harmonic(Vec<u32>),
    /// Explicit parameter values.
    Explicit(Vec<f64>),
}

/// CSV with one row per sequence member: `k,theta,<metric columns>`.
pub fn converge(
    family: &FamilySpec,
    seq: &ParameterSequence,
    metrics: Option<&[String]>,
    o: &DiscrepancyOptions,
) -> Result<String> {
    let theta = family
        .theta()
        .ok_or_else(|| Error::InvalidConfig(format!("family `{family}` has no scalar parameter")))?;
    let members: Vec<(String, f64)> = match seq {
        ParameterSequence::Harmonic(ks) => ks
            .iter()
            .map(|&k| {
                if k == 0 {
                    Err(Error::InvalidConfig("sequence indices start at 1".into()))
                } else {
                    Ok((k.to_string(), theta + 1.0 / k as f64))
                }
            })
            .collect::<Result<_>>()?,
        ParameterSequence::Explicit(ts) => ts
            .iter()
            .enumerate()
            .map(|(i, &t)| ((i + 1).to_string(), t))
            .collect(),
    };
    let target = family.structure()?;
    let rows: Vec<Vec<(&'static str, f64)>> = members
        .iter()
        .map(|(_, t)| {
            let member = family.with_theta(*t)?.structure()?;
            Ok(match (&member, &target) {
                (Structure::Archimedean(gk), Structure::Archimedean(g)) => {
                    archimedean_discrepancies(gk, g, o).as_array().to_vec()
                }
                (Structure::ExtremeValue(ak), Structure::ExtremeValue(a)) => {
                    ev_discrepancies(ak, a, o).as_array().to_vec()
                }
                _ => {
                    return Err(Error::InvalidConfig(format!(
                        "family `{family}` is neither Archimedean nor extreme-value"
                    )))
                }
            })
        })
        .collect::<Result<_>>()?;
    let available: Vec<&str> = rows.first().map(|r| r.iter().map(|(n, _)| *n).collect()).unwrap_or_default();
    let selected: Vec<&str> = match metrics {
        Some(list) => {
            for m in list {
                if !available.contains(&m.as_str()) {
                    return Err(Error::InvalidConfig(format!(
                        "metric `{m}` not available; choose from {}",
                        available.join(",")
                    )));
                }
            }
            available.iter().copied().filter(|a| list.iter().any(|m| m == a)).collect()
        }
        None => available.clone(),
    };
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["k", "theta"];
    header.extend(&selected);
    wtr.write_record(&header)?;
    for ((k, t), row) in members.iter().zip(&rows) {
        let mut fields = vec![k.clone(), fmt_f64(*t)];
        fields.extend(
            row.iter()
                .filter(|(n, _)| selected.contains(n))
                .map(|(_, v)| fmt_f64(*v)),
        );
        wtr.write_record(&fields)?;
    }
    into_string(wtr)
}

// ---------------------------------------------------------------- approximate

/// One row of an approximation profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproximationRow {
    /// `checkerboard`, `identity` or `strip`.
    pub kind: &'static str,
    pub resolution: usize,
    /// Member index for `strip` rows, 0 otherwise.
    pub member: u64,
    pub max: f64,
    pub mean: f64,
    pub q95: f64,
    /// `D1` between the row's copula and its reference.
    pub d1: f64,
}

/// Wcc-profile summaries of `CB_N(C)` against `C`, of `C` against itself, and
/// (for dyadic `N`) of the strip member of level `log₂ N` with the largest
/// profile maximum against `Π`.
pub fn approximate(
    family: &FamilySpec,
    resolutions: &[usize],
    q: &QuadratureSpec,
    points: usize,
    y_grid: usize,
) -> Result<Vec<ApproximationRow>> {
    let c = family.copula()?;
    let xs = golden_abscissae(points);
    let pi = make_pi();
    let mut rows = Vec::new();
    for &n in resolutions {
        if n == 0 {
            return Err(Error::InvalidConfig("resolution must be positive".into()));
        }
        let cb = checkerboard_copula(checkerboard_approx(c.as_ref(), n)?);
        let p = wcc_profile(cb.as_ref(), c.as_ref(), &xs, y_grid);
        rows.push(ApproximationRow {
            kind: "checkerboard",
            resolution: n,
            member: 0,
            max: p.max,
            mean: p.mean,
            q95: p.q95,
            d1: d1(cb.as_ref(), c.as_ref(), q),
        });
        let id = wcc_profile(c.as_ref(), c.as_ref(), &xs, y_grid);
        rows.push(ApproximationRow {
            kind: "identity",
            resolution: n,
            member: 0,
            max: id.max,
            mean: id.mean,
            q95: id.q95,
            d1: d1(c.as_ref(), c.as_ref(), q),
        });
        if n >= 2 && n.is_power_of_two() {
            let level = n.trailing_zeros();
            let (member, profile) = (1..=n as u64)
                .map(|i| {
                    let s = StripCopula::new(level, i)?;
                    Ok((i, wcc_profile(&s, pi.as_ref(), &xs, y_grid)))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(None, |best: Option<(u64, crate::metrics::WccProfile)>, (i, p)| match best {
                    Some((_, ref b)) if b.max >= p.max => best,
                    _ => Some((i, p)),
                })
                .expect("at least one member");
            let s = StripCopula::new(level, member)?;
            rows.push(ApproximationRow {
                kind: "strip",
                resolution: n,
                member,
                max: profile.max,
                mean: profile.mean,
                q95: profile.q95,
                d1: d1(&s, pi.as_ref(), q),
            });
        }
    }
    Ok(rows)
}

/// CSV: `kind,resolution,member,max,mean,q95,d1`.
pub fn approximation_csv(rows: &[ApproximationRow]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["kind", "resolution", "member", "max", "mean", "q95", "d1"])?;
    for r in rows {
        wtr.write_record([
            r.kind.to_owned(),
            r.resolution.to_string(),
            r.member.to_string(),
            fmt_f64(r.max),
            fmt_f64(r.mean),
            fmt_f64(r.q95),
            fmt_f64(r.d1),
        ])?;
    }
    into_string(wtr)
}
