//! Checkerboard copulas: mass spread uniformly over the cells of an `N × N` grid.

use std::sync::Arc;

use crate::copula::{clamp_unit, Copula, SharedCopula};
use crate::error::{Error, Result};

/// Tolerance on row and column sums accepted by [`CheckerboardMatrix::new`].
pub const DOUBLY_STOCHASTIC_TOL: f64 = 1e-9;

/// Cell masses `μ(R_ij)` of a checkerboard copula, row `i` indexing the `x` axis.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckerboardMatrix {
    n: usize,
    mass: Vec<f64>,
}

impl CheckerboardMatrix {
    /// Validates a row-major `n × n` mass matrix.
    pub fn new(n: usize, mass: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotDoublyStochastic("resolution must be positive".into()));
        }
        if mass.len() != n * n {
            return Err(Error::NotDoublyStochastic(format!(
                "expected {} entries, got {}",
                n * n,
                mass.len()
            )));
        }
        if let Some((k, v)) = mass
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < -DOUBLY_STOCHASTIC_TOL)
        {
            return Err(Error::NotDoublyStochastic(format!(
                "entry ({}, {}) = {v}",
                k / n,
                k % n
            )));
        }
        let target = 1.0 / n as f64;
        for i in 0..n {
            let row: f64 = mass[i * n..(i + 1) * n].iter().sum();
            let col: f64 = (0..n).map(|r| mass[r * n + i]).sum();
            if (row - target).abs() > DOUBLY_STOCHASTIC_TOL {
                return Err(Error::NotDoublyStochastic(format!("row {i} sums to {row}")));
            }
            if (col - target).abs() > DOUBLY_STOCHASTIC_TOL {
                return Err(Error::NotDoublyStochastic(format!("column {i} sums to {col}")));
            }
        }
        Ok(Self { n, mass })
    }

    pub fn resolution(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mass[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.mass
    }
}

/// The `N`-checkerboard approximation: cell masses of `c` by rectangle inclusion–exclusion.
pub fn checkerboard_approx(c: &dyn Copula, n: usize) -> Result<CheckerboardMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            family: "checkerboard",
            reason: "resolution N must be at least 1".into(),
        });
    }
    let nf = n as f64;
    let lattice: Vec<Vec<f64>> = (0..=n)
        .map(|i| (0..=n).map(|j| c.cdf(i as f64 / nf, j as f64 / nf)).collect())
        .collect();
    let mut mass = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let m = lattice[i][j] - lattice[i - 1][j] - lattice[i][j - 1] + lattice[i - 1][j - 1];
            mass.push(m.max(0.0));
        }
    }
    CheckerboardMatrix::new(n, mass)
}

/// Copula of a [`CheckerboardMatrix`].
///
/// The CDF is evaluated by exact bilinear accumulation over prefix sums, the
/// kernel is constant in `x` on every open column strip.
#[derive(Debug, Clone)]
pub struct CheckerboardCopula {
    matrix: CheckerboardMatrix,
    /// `(n+1) × (n+1)` cumulative masses; entry `(i, j)` equals `C(i/n, j/n)`.
    prefix: Vec<f64>,
}

impl CheckerboardCopula {
    pub fn new(matrix: CheckerboardMatrix) -> Self {
        let n = matrix.n;
        let w = n + 1;
        let mut prefix = vec![0.0; w * w];
        for i in 1..=n {
            let mut row_acc = 0.0;
            for j in 1..=n {
                row_acc += matrix.get(i - 1, j - 1);
                prefix[i * w + j] = prefix[(i - 1) * w + j] + row_acc;
            }
        }
        Self { matrix, prefix }
    }

    pub fn matrix(&self) -> &CheckerboardMatrix {
        &self.matrix
    }

    fn lattice(&self, i: usize, j: usize) -> f64 {
        self.prefix[i * (self.matrix.n + 1) + j]
    }

    /// Cell index and fractional offset of `t` on the `n`-grid; `t = 1` maps to the last cell.
    fn locate(&self, t: f64) -> (usize, f64) {
        let n = self.matrix.n;
        let s = clamp_unit(t) * n as f64;
        let i = (s.floor() as usize).min(n - 1);
        (i, s - i as f64)
    }
}

impl Copula for CheckerboardCopula {
    fn cdf(&self, x: f64, y: f64) -> f64 {
        let (i, fx) = self.locate(x);
        let (j, fy) = self.locate(y);
        let c00 = self.lattice(i, j);
        let c10 = self.lattice(i + 1, j);
        let c01 = self.lattice(i, j + 1);
        let c11 = self.lattice(i + 1, j + 1);
        let v = c00 + fx * (c10 - c00) + fy * (c01 - c00) + fx * fy * (c11 - c10 - c01 + c00);
        clamp_unit(v)
    }

    fn kernel_cdf(&self, x: f64, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y >= 1.0 {
            return 1.0;
        }
        let n = self.matrix.n;
        let (i, _) = self.locate(x);
        let (j, fy) = self.locate(y);
        // row i of the matrix, accumulated up to column j
        let below = self.lattice(i + 1, j) - self.lattice(i, j);
        let partial = fy * self.matrix.get(i, j);
        clamp_unit((below + partial) * n as f64)
    }

    fn label(&self) -> String {
        format!("checkerboard:{}", self.matrix.n)
    }

    fn transposed(&self) -> Option<SharedCopula> {
        let n = self.matrix.n;
        let mut mass = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                mass[j * n + i] = self.matrix.get(i, j);
            }
        }
        let m = CheckerboardMatrix { n, mass };
        Some(Arc::new(CheckerboardCopula::new(m)))
    }
}

pub fn checkerboard_copula(m: CheckerboardMatrix) -> SharedCopula {
    Arc::new(CheckerboardCopula::new(m))
}
