//! Copula sequences separating the notions of convergence.
//!
//! [`StripCopula`] converges to `Π` in `D1` but not weakly conditionally;
//! [`DyadicShiftCopula`] is completely dependent with a transpose converging
//! weakly conditionally to `Π`.

use std::sync::Arc;

use crate::copula::{clamp_unit, Copula, SharedCopula};
use crate::error::{Error, Result};

/// Member `(N, i)` of the strip family, `1 ≤ i ≤ 2^N`, sequence index `n = 2^N + i - 2`.
///
/// On the strip `[(i-1)/2^N, i/2^N]` the kernel is a point mass at `2^N x + 1 - i`,
/// elsewhere it is uniform.
#[derive(Debug, Clone, Copy)]
pub struct StripCopula {
    level: u32,
    index: u64,
}

impl StripCopula {
    pub fn new(level: u32, index: u64) -> Result<Self> {
        if level == 0 || level > 52 {
            return Err(Error::InvalidParameter {
                family: "strip",
                reason: format!("level N = {level} outside 1..=52"),
            });
        }
        let cells = 1u64 << level;
        if index == 0 || index > cells {
            return Err(Error::InvalidParameter {
                family: "strip",
                reason: format!("index i = {index} outside 1..={cells}"),
            });
        }
        Ok(Self { level, index })
    }

    /// Member with sequence index `n ≥ 1`.
    pub fn from_sequence_index(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                family: "strip",
                reason: "sequence index starts at 1".into(),
            });
        }
        // n + 2 = 2^N + i with 1 <= i <= 2^N
        let level = 63 - (n + 1).leading_zeros();
        let index = n + 2 - (1u64 << level);
        Self::new(level, index)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn sequence_index(&self) -> u64 {
        (1u64 << self.level) + self.index - 2
    }

    fn scale(&self) -> f64 {
        (1u64 << self.level) as f64
    }

    /// The strip `[a, b]` carrying the degenerate conditional laws.
    pub fn strip(&self) -> (f64, f64) {
        let s = self.scale();
        ((self.index - 1) as f64 / s, self.index as f64 / s)
    }
}

impl Copula for StripCopula {
    fn cdf(&self, x: f64, y: f64) -> f64 {
        let (x, y) = (clamp_unit(x), clamp_unit(y));
        let (a, b) = self.strip();
        let inside = (x.min(b) - a).max(0.0);
        let outside = x - inside;
        let singular = ((x.min(a + y / self.scale())) - a).max(0.0).min(inside);
        clamp_unit(y * outside + singular)
    }

    fn kernel_cdf(&self, x: f64, y: f64) -> f64 {
        let (a, b) = self.strip();
        if (a..=b).contains(&x) {
            let target = self.scale() * x + 1.0 - self.index as f64;
            if target <= y {
                1.0
            } else {
                0.0
            }
        } else {
            clamp_unit(y)
        }
    }

    fn label(&self) -> String {
        format!("strip:{},{}", self.level, self.index)
    }
}

/// Completely dependent copula of `h_n(x) = 2^n x mod 1`.
#[derive(Debug, Clone, Copy)]
pub struct DyadicShiftCopula {
    n: u32,
}

impl DyadicShiftCopula {
    pub fn new(n: u32) -> Result<Self> {
        if n > 52 {
            return Err(Error::InvalidParameter {
                family: "shift",
                reason: format!("n = {n} exceeds 52"),
            });
        }
        Ok(Self { n })
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    fn scale(&self) -> f64 {
        (1u64 << self.n) as f64
    }

    pub fn transform(&self, x: f64) -> f64 {
        let s = self.scale() * x;
        s - s.floor()
    }
}

impl Copula for DyadicShiftCopula {
    fn cdf(&self, x: f64, y: f64) -> f64 {
        let (x, y) = (clamp_unit(x), clamp_unit(y));
        let s = self.scale();
        let full = (s * x).floor();
        let partial = (s * x - full).min(y);
        clamp_unit((full * y + partial) / s)
    }

    fn kernel_cdf(&self, x: f64, y: f64) -> f64 {
        if self.transform(clamp_unit(x)) <= y {
            1.0
        } else {
            0.0
        }
    }

    fn label(&self) -> String {
        format!("shift:{}", self.n)
    }

    fn transposed(&self) -> Option<SharedCopula> {
        Some(Arc::new(DyadicShiftTranspose { n: self.n }))
    }
}

/// Transpose of [`DyadicShiftCopula`]: the conditional law at `x` is uniform on
/// `{(x + k) / 2^n : k = 0, …, 2^n - 1}`.
#[derive(Debug, Clone, Copy)]
pub struct DyadicShiftTranspose {
    n: u32,
}

impl Copula for DyadicShiftTranspose {
    fn cdf(&self, x: f64, y: f64) -> f64 {
        DyadicShiftCopula { n: self.n }.cdf(y, x)
    }

    fn kernel_cdf(&self, x: f64, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        let s = (1u64 << self.n) as f64;
        let atoms_below = ((s * y - clamp_unit(x)).floor() + 1.0).clamp(0.0, s);
        atoms_below / s
    }

    fn label(&self) -> String {
        format!("transpose(shift:{})", self.n)
    }

    fn transposed(&self) -> Option<SharedCopula> {
        Some(Arc::new(DyadicShiftCopula { n: self.n }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula::{axiom_defects, difference_quotient_kernel, disintegration_defect};

    #[test]
    fn strip_indexing_round_trips() {
        for n in 1..200u64 {
            let c = StripCopula::from_sequence_index(n).unwrap();
            assert_eq!(c.sequence_index(), n);
            assert!(c.index() >= 1 && c.index() <= 1 << c.level());
        }
        assert!(StripCopula::new(3, 9).is_err());
        assert!(StripCopula::new(0, 1).is_err());
    }

    #[test]
    fn strip_cdf_matches_kernel() {
        let c = StripCopula::new(3, 4).unwrap();
        assert!(axiom_defects(&c, 96).max() <= 1e-12);
        assert!(disintegration_defect(&c, 4096, 64) <= 1e-3);
        for &(x, y) in &[(0.1, 0.3), (0.41, 0.5), (0.44, 0.9), (0.8, 0.2)] {
            let dq = difference_quotient_kernel(|a, b| c.cdf(a, b), x, y);
            assert!((dq - c.kernel_cdf(x, y)).abs() < 1e-6, "{x} {y}");
        }
    }

    #[test]
    fn shift_copula_and_transpose() {
        let c = DyadicShiftCopula::new(3).unwrap();
        assert!(axiom_defects(&c, 64).max() <= 1e-12);
        let t = c.transposed().unwrap();
        assert!(axiom_defects(t.as_ref(), 64).max() <= 1e-12);
        assert!(disintegration_defect(t.as_ref(), 4000, 50) <= 1e-3);
        // uniform on {x/8 + k/8}
        assert_eq!(t.kernel_cdf(0.4, 0.05), 1.0 / 8.0);
        assert_eq!(t.kernel_cdf(0.4, 0.04), 0.0);
        assert_eq!(t.kernel_cdf(0.4, 0.999), 1.0);
        for &(x, y) in &[(0.3, 0.2), (0.62, 0.55)] {
            let dq = difference_quotient_kernel(|a, b| t.cdf(a, b), x, y);
            assert!((dq - t.kernel_cdf(x, y)).abs() < 1e-6);
        }
    }
}
