//! Discrepancies between a copula and a member of a sequence converging to it.
//!
//! For Archimedean copulas the six quantities of [`ArchimedeanDiscrepancies`]
//! vanish together; for extreme-value copulas the five of [`EvDiscrepancies`].

use serde::Serialize;

use crate::archimedean::{archimedean_copula, make_gumbel, make_mixture, make_w_generator, Generator, KendallCdf};
use crate::copula::Copula;
use crate::error::Result;
use crate::extreme_value::{ev_copula, PickandsFunction};
use crate::metrics::{d1, d_inf, golden_abscissae, wcc_profile, QuadratureSpec};

/// Grids used by the discrepancy functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscrepancyOptions {
    pub quadrature: QuadratureSpec,
    /// Points of the uniform grids for function sup-norms.
    pub grid: usize,
    /// Left end of the interval on which `φ` and `D⁺φ` are compared.
    pub phi_lower: f64,
    /// Number of golden-ratio abscissae of the wcc profile.
    pub wcc_points: usize,
    /// `y` grid of the Lévy distances.
    pub wcc_y_grid: usize,
}

impl Default for DiscrepancyOptions {
    fn default() -> Self {
        Self {
            quadrature: QuadratureSpec::default(),
            grid: 1000,
            phi_lower: 0.05,
            wcc_points: 25,
            wcc_y_grid: 2000,
        }
    }
}

/// `sup |f - g|` over `lo + (hi - lo) k / n`, `k = 0..n` (or `0..n-1` when `open_right`).
fn sup_diff(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize, open_right: bool) -> f64 {
    let last = if open_right { n - 1 } else { n };
    (0..=last)
        .map(|k| {
            let t = lo + (hi - lo) * k as f64 / n as f64;
            (f(t) - g(t)).abs()
        })
        .fold(0.0, f64::max)
}

fn wcc_max(c1: &dyn Copula, c2: &dyn Copula, o: &DiscrepancyOptions) -> f64 {
    wcc_profile(c1, c2, &golden_abscissae(o.wcc_points), o.wcc_y_grid).max
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArchimedeanDiscrepancies {
    /// `d∞(C_k, C)` on the quadrature lattice.
    pub cdf_sup: f64,
    /// `sup |F_k - F|` on the interior grid.
    pub kendall_sup: f64,
    /// `sup |φ_k - φ|` on `[phi_lower, 1]`.
    pub phi_sup: f64,
    /// `sup |D⁺φ_k - D⁺φ|` on `[phi_lower, 1)`.
    pub dphi_sup: f64,
    pub d1: f64,
    pub wcc_max: f64,
}

impl ArchimedeanDiscrepancies {
    pub fn as_array(&self) -> [(&'static str, f64); 6] {
        [
            ("cdf_sup", self.cdf_sup),
            ("kendall_sup", self.kendall_sup),
            ("phi_sup", self.phi_sup),
            ("dphi_sup", self.dphi_sup),
            ("d1", self.d1),
            ("wcc_max", self.wcc_max),
        ]
    }
}

pub fn archimedean_discrepancies(
    gk: &Generator,
    g: &Generator,
    o: &DiscrepancyOptions,
) -> ArchimedeanDiscrepancies {
    let (ck, c) = (archimedean_copula(gk), archimedean_copula(g));
    let (fk, f) = (gk.kendall_function(), g.kendall_function());
    let n = o.grid;
    ArchimedeanDiscrepancies {
        cdf_sup: d_inf(ck.as_ref(), c.as_ref(), &o.quadrature),
        kendall_sup: sup_diff(|t| fk.eval(t), |t| f.eval(t), 1.0 / n as f64, 1.0, n, true),
        phi_sup: sup_diff(|t| gk.phi(t), |t| g.phi(t), o.phi_lower, 1.0, n, false),
        dphi_sup: sup_diff(|t| gk.dplus_phi(t), |t| g.dplus_phi(t), o.phi_lower, 1.0, n, true),
        d1: d1(ck.as_ref(), c.as_ref(), &o.quadrature),
        wcc_max: wcc_max(ck.as_ref(), c.as_ref(), o),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvDiscrepancies {
    pub cdf_sup: f64,
    /// `sup |A_k - A|` on `[0, 1]`.
    pub pickands_sup: f64,
    /// `sup |D⁺A_k - D⁺A|` on `[0, 1)`.
    pub dplus_a_sup: f64,
    pub d1: f64,
    pub wcc_max: f64,
}

impl EvDiscrepancies {
    pub fn as_array(&self) -> [(&'static str, f64); 5] {
        [
            ("cdf_sup", self.cdf_sup),
            ("pickands_sup", self.pickands_sup),
            ("dplus_a_sup", self.dplus_a_sup),
            ("d1", self.d1),
            ("wcc_max", self.wcc_max),
        ]
    }
}

pub fn ev_discrepancies(ak: &PickandsFunction, a: &PickandsFunction, o: &DiscrepancyOptions) -> EvDiscrepancies {
    let (ck, c) = (ev_copula(ak), ev_copula(a));
    let n = o.grid;
    EvDiscrepancies {
        cdf_sup: d_inf(ck.as_ref(), c.as_ref(), &o.quadrature),
        pickands_sup: sup_diff(|t| ak.a(t), |t| a.a(t), 0.0, 1.0, n, false),
        dplus_a_sup: sup_diff(|t| ak.dplus_a(t), |t| a.dplus_a(t), 0.0, 1.0, n, true),
        d1: d1(ck.as_ref(), c.as_ref(), &o.quadrature),
        wcc_max: wcc_max(ck.as_ref(), c.as_ref(), o),
    }
}

/// `φ_k ∝ 2(1 - t) + (1/k)(-ln t)/ln 2`: strict generators whose limit `W` is not.
pub fn nonstrict_limit_generator(k: u32) -> Result<Generator> {
    make_mixture(vec![(1.0, make_w_generator()), (1.0 / k as f64, make_gumbel(1.0)?)])
}

/// Whether `values` is strictly decreasing.
pub fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archimedean::make_clayton;
    use crate::copula::make_w;
    use crate::extreme_value::make_galambos;

    fn quick() -> DiscrepancyOptions {
        DiscrepancyOptions {
            quadrature: QuadratureSpec::with_resolution(64).unwrap(),
            grid: 200,
            wcc_points: 10,
            wcc_y_grid: 400,
            ..Default::default()
        }
    }

    #[test]
    fn identical_members_have_zero_discrepancy() {
        let g = make_clayton(3.0).unwrap();
        let d = archimedean_discrepancies(&g, &g, &quick());
        assert!(d.as_array().iter().all(|(_, v)| *v == 0.0), "{d:?}");
        let a = make_galambos(3.0).unwrap();
        let e = ev_discrepancies(&a, &a, &quick());
        assert!(e.as_array().iter().all(|(_, v)| *v == 0.0), "{e:?}");
    }

    #[test]
    fn discrepancies_shrink_along_a_sequence() {
        let g = make_clayton(3.0).unwrap();
        let far = archimedean_discrepancies(&make_clayton(3.5).unwrap(), &g, &quick());
        let near = archimedean_discrepancies(&make_clayton(3.05).unwrap(), &g, &quick());
        for ((name, a), (_, b)) in far.as_array().iter().zip(near.as_array().iter()) {
            assert!(b < a, "{name}: {b} !< {a}");
        }
    }

    #[test]
    fn nonstrict_fixture_converges_pointwise_and_in_d1() {
        let w = make_w_generator();
        let q = QuadratureSpec::new(128, crate::metrics::QuadratureRule::CellAverage).unwrap();
        let mut prev = f64::INFINITY;
        for k in [1, 4, 16, 64, 1024] {
            let g = nonstrict_limit_generator(k).unwrap();
            assert!(g.is_strict());
            let sup = (1..=100)
                .map(|i| (g.phi(i as f64 / 100.0) - w.phi(i as f64 / 100.0)).abs())
                .fold(0.0, f64::max);
            assert!(sup < 8.0 / k as f64, "{k}: {sup}");
            let dist = d1(archimedean_copula(&g).as_ref(), make_w().as_ref(), &q);
            assert!(dist < prev, "{k}: {dist}");
            prev = dist;
        }
        assert!(prev < 0.01, "{prev}");
    }
}
