use super::GeneratorFunction;
use crate::error::{Error, Result};

/// Generator stored as values on an increasing grid ending at `t = 1`.
///
/// `D⁺φ` is the right difference quotient on the grid, isotonized by a running
/// maximum; `φ` is re-integrated from those slopes (so it stays convex) and
/// scaled to `φ(1/2) = 1`. Below the first node a strict table continues as
/// `φ₁ + c ln(t/t₁)`, a non-strict one linearly.
#[derive(Debug, Clone)]
pub struct TableGenerator {
    ts: Vec<f64>,
    phis: Vec<f64>,
    slopes: Vec<f64>,
    strict: bool,
}

/// Upper bound on stored slopes, keeping `φ` strictly decreasing.
const MAX_SLOPE: f64 = -1e-300;

impl TableGenerator {
    /// Builds a table from `(t_k, φ(t_k))`, `0 < t_0 < … < t_K = 1`, with `1/2` inside the range.
    pub fn new(ts: Vec<f64>, phis: Vec<f64>, strict: bool) -> Result<Self> {
        if ts.len() < 2 || ts.len() != phis.len() {
            return Err(Error::InvalidGenerator(format!(
                "need at least two nodes with matching values, got {} and {}",
                ts.len(),
                phis.len()
            )));
        }
        if !(ts[0] > 0.0 && ts[0] < 0.5) || *ts.last().unwrap() != 1.0 {
            return Err(Error::InvalidGenerator(
                "grid must start in (0, 1/2) and end at 1".into(),
            ));
        }
        if ts.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGenerator("grid is not increasing".into()));
        }
        if phis.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidGenerator("non-finite generator value".into()));
        }

        let mut slopes: Vec<f64> = ts
            .windows(2)
            .zip(phis.windows(2))
            .map(|(t, p)| (p[1] - p[0]) / (t[1] - t[0]))
            .collect();
        let mut running = f64::NEG_INFINITY;
        for s in slopes.iter_mut() {
            running = running.max(*s);
            *s = running.min(MAX_SLOPE);
        }

        let k = ts.len();
        let mut values = vec![0.0; k];
        for i in (0..k - 1).rev() {
            values[i] = values[i + 1] - slopes[i] * (ts[i + 1] - ts[i]);
        }

        let mut table = Self {
            ts,
            phis: values,
            slopes,
            strict,
        };
        let half = table.interpolate(0.5);
        if !(half > 0.0 && half.is_finite()) {
            return Err(Error::InvalidGenerator(format!("φ(1/2) = {half}")));
        }
        for p in table.phis.iter_mut() {
            *p /= half;
        }
        for s in table.slopes.iter_mut() {
            *s /= half;
        }
        Ok(table)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.ts
    }

    pub fn values(&self) -> &[f64] {
        &self.phis
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// Segment `k` with `t_k ≤ t < t_{k+1}`; `t` must lie in `[t_0, 1)`.
    fn segment(&self, t: f64) -> usize {
        let k = self.ts.partition_point(|&x| x <= t);
        k.saturating_sub(1).min(self.slopes.len() - 1)
    }

    fn interpolate(&self, t: f64) -> f64 {
        let k = self.segment(t);
        if t == self.ts[k] {
            return self.phis[k];
        }
        self.phis[k] + self.slopes[k] * (t - self.ts[k])
    }

    fn tail_coefficient(&self) -> f64 {
        self.slopes[0] * self.ts[0]
    }
}

impl GeneratorFunction for TableGenerator {
    fn phi(&self, t: f64) -> f64 {
        let t0 = self.ts[0];
        if t >= t0 {
            return self.interpolate(t).max(0.0);
        }
        if self.strict {
            self.phis[0] + self.tail_coefficient() * (t / t0).ln()
        } else {
            self.phis[0] + self.slopes[0] * (t - t0)
        }
    }

    fn dplus_phi(&self, t: f64) -> f64 {
        let t0 = self.ts[0];
        if t >= t0 {
            return self.slopes[self.segment(t)];
        }
        if self.strict {
            self.tail_coefficient() / t
        } else {
            self.slopes[0]
        }
    }

    fn phi_at_zero(&self) -> f64 {
        if self.strict {
            f64::INFINITY
        } else {
            self.phis[0] - self.slopes[0] * self.ts[0]
        }
    }

    fn inverse(&self, s: f64) -> Option<f64> {
        let t0 = self.ts[0];
        if s >= self.phis[0] {
            let t = if self.strict {
                t0 * ((s - self.phis[0]) / self.tail_coefficient()).exp()
            } else {
                t0 + (s - self.phis[0]) / self.slopes[0]
            };
            return Some(t);
        }
        // phis is decreasing: first node with φ <= s
        let k = self.phis.partition_point(|&p| p > s);
        let i = k - 1;
        Some(self.ts[i] + (s - self.phis[i]) / self.slopes[i])
    }

    fn label(&self) -> String {
        format!(
            "table({} nodes, {})",
            self.ts.len(),
            if self.strict { "strict" } else { "non-strict" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archimedean::{archimedean_copula, Generator};
    use crate::copula::axiom_defects;

    fn product_table(strict: bool) -> Generator {
        let n = 1000;
        let ts: Vec<f64> = (1..=n).map(|k| k as f64 / n as f64).collect();
        let phis = ts.iter().map(|t| -t.ln()).collect();
        Generator::new(TableGenerator::new(ts, phis, strict).unwrap())
    }

    #[test]
    fn reproduces_a_smooth_generator() {
        let g = product_table(true);
        assert_eq!(g.phi(0.5), 1.0);
        assert_eq!(g.phi(1.0), 0.0);
        for &t in &[0.05f64, 0.2, 0.5, 0.77, 0.999] {
            let truth = -t.ln() / 2f64.ln();
            assert!((g.phi(t) - truth).abs() < 1e-4, "{t}");
            assert!((g.pseudo_inverse(truth) - t).abs() < 1e-4, "{t}");
        }
        assert!(g.is_strict());
        assert!(g.phi(1e-9) > g.phi(1e-3));
        let d = g.validity_defects(777);
        assert!(d.monotonicity <= 0.0 && d.convexity <= 1e-8 && d.derivative_monotonicity <= 0.0);
    }

    #[test]
    fn inverse_round_trips_through_nodes_and_tails() {
        for strict in [true, false] {
            let g = product_table(strict);
            for &s in &[0.0, 1e-6, 0.3, 1.0, 6.0, 9.96, 12.0, 40.0] {
                let t = g.pseudo_inverse(s);
                if s < g.phi_at_zero() {
                    assert!((g.phi(t) - s).abs() <= 1e-9 * (1.0 + s), "{strict} {s}");
                } else {
                    assert_eq!(t, 0.0);
                }
            }
        }
    }

    #[test]
    fn isotonizes_non_convex_input() {
        let ts = vec![0.25, 0.5, 0.75, 1.0];
        let phis = vec![2.0, 1.0, 0.9, 0.0];
        let g = TableGenerator::new(ts, phis, false).unwrap();
        let s = g.slopes();
        assert!(s.windows(2).all(|w| w[0] <= w[1]));
        let c = archimedean_copula(&Generator::new(g));
        assert!(axiom_defects(c.as_ref(), 60).max() <= 1e-10);
    }

    #[test]
    fn rejects_malformed_tables() {
        assert!(TableGenerator::new(vec![0.5, 1.0], vec![1.0], true).is_err());
        assert!(TableGenerator::new(vec![0.6, 1.0], vec![1.0, 0.0], true).is_err());
        assert!(TableGenerator::new(vec![0.1, 0.2, 0.2, 1.0], vec![3.0, 2.0, 2.0, 0.0], true).is_err());
        assert!(TableGenerator::new(vec![0.1, 0.9], vec![f64::NAN, 0.0], true).is_err());
    }
}
