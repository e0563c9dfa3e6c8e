use std::f64::consts::LN_2;

use super::{Generator, GeneratorFunction};
use crate::error::{Error, Result};

/// Clayton generator `(t^{-θ} - 1) / (2^θ - 1)`, `θ > 0`.
#[derive(Debug, Clone, Copy)]
pub struct Clayton {
    theta: f64,
    norm: f64,
}

impl GeneratorFunction for Clayton {
    fn phi(&self, t: f64) -> f64 {
        (-self.theta * t.ln()).exp_m1() / self.norm
    }

    fn dplus_phi(&self, t: f64) -> f64 {
        -self.theta * (-(self.theta + 1.0) * t.ln()).exp() / self.norm
    }

    fn phi_at_zero(&self) -> f64 {
        f64::INFINITY
    }

    fn inverse(&self, s: f64) -> Option<f64> {
        Some((-(s * self.norm).ln_1p() / self.theta).exp())
    }

    fn label(&self) -> String {
        format!("clayton:{}", self.theta)
    }
}

pub fn make_clayton(theta: f64) -> Result<Generator> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::InvalidParameter {
            family: "clayton",
            reason: format!("theta = {theta} must be positive"),
        });
    }
    Ok(Generator::new(Clayton {
        theta,
        norm: (theta * LN_2).exp_m1(),
    }))
}

/// Gumbel generator `(-ln t / ln 2)^θ`, `θ ≥ 1`.
#[derive(Debug, Clone, Copy)]
pub struct Gumbel {
    theta: f64,
}

impl GeneratorFunction for Gumbel {
    fn phi(&self, t: f64) -> f64 {
        (-t.ln() / LN_2).powf(self.theta)
    }

    fn dplus_phi(&self, t: f64) -> f64 {
        let u = -t.ln() / LN_2;
        -self.theta * u.powf(self.theta - 1.0) / (t * LN_2)
    }

    fn phi_at_zero(&self) -> f64 {
        f64::INFINITY
    }

    fn inverse(&self, s: f64) -> Option<f64> {
        Some((-LN_2 * s.powf(1.0 / self.theta)).exp())
    }

    fn label(&self) -> String {
        format!("gumbel:{}", self.theta)
    }
}

pub fn make_gumbel(theta: f64) -> Result<Generator> {
    if !(theta.is_finite() && theta >= 1.0) {
        return Err(Error::InvalidParameter {
            family: "gumbel",
            reason: format!("theta = {theta} must be at least 1"),
        });
    }
    Ok(Generator::new(Gumbel { theta }))
}

/// Frank generator `-ln((e^{-θt} - 1) / (e^{-θ} - 1))`, normalized, `θ ≠ 0`.
#[derive(Debug, Clone, Copy)]
pub struct Frank {
    theta: f64,
    denom: f64,
    norm: f64,
}

impl GeneratorFunction for Frank {
    fn phi(&self, t: f64) -> f64 {
        (-((-self.theta * t).exp_m1() / self.denom).ln() / self.norm).max(0.0)
    }

    fn dplus_phi(&self, t: f64) -> f64 {
        let e = (-self.theta * t).exp();
        self.theta * e / ((-self.theta * t).exp_m1() * self.norm)
    }

    fn phi_at_zero(&self) -> f64 {
        f64::INFINITY
    }

    fn inverse(&self, s: f64) -> Option<f64> {
        Some(-(self.denom * (-s * self.norm).exp()).ln_1p() / self.theta)
    }

    fn label(&self) -> String {
        format!("frank:{}", self.theta)
    }
}

pub fn make_frank(theta: f64) -> Result<Generator> {
    if !(theta.is_finite() && theta != 0.0) {
        return Err(Error::InvalidParameter {
            family: "frank",
            reason: format!("theta = {theta} must be finite and nonzero"),
        });
    }
    let denom = (-theta).exp_m1();
    let norm = -((-theta / 2.0).exp_m1() / denom).ln();
    Ok(Generator::new(Frank { theta, denom, norm }))
}

/// `φ(t) = 2(1 - t)`, the non-strict generator of `W`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearGenerator;

impl GeneratorFunction for LinearGenerator {
    fn phi(&self, t: f64) -> f64 {
        2.0 * (1.0 - t)
    }

    fn dplus_phi(&self, _t: f64) -> f64 {
        -2.0
    }

    fn phi_at_zero(&self) -> f64 {
        2.0
    }

    fn inverse(&self, s: f64) -> Option<f64> {
        Some(1.0 - 0.5 * s)
    }

    fn label(&self) -> String {
        "w".into()
    }
}

pub fn make_w_generator() -> Generator {
    Generator::new(LinearGenerator)
}

/// Positive combination `Σ w_k φ_k`, renormalized; inverted by bisection.
#[derive(Debug, Clone)]
pub struct Mixture {
    parts: Vec<(f64, Generator)>,
    total: f64,
}

impl GeneratorFunction for Mixture {
    fn phi(&self, t: f64) -> f64 {
        self.parts.iter().map(|(w, g)| w * g.phi(t)).sum::<f64>() / self.total
    }

    fn dplus_phi(&self, t: f64) -> f64 {
        self.parts.iter().map(|(w, g)| w * g.dplus_phi(t)).sum::<f64>() / self.total
    }

    fn phi_at_zero(&self) -> f64 {
        self.parts.iter().map(|(w, g)| w * g.phi_at_zero()).sum::<f64>() / self.total
    }

    fn label(&self) -> String {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(w, g)| format!("{w}*{}", g.label()))
            .collect();
        format!("mix({})", parts.join("+"))
    }
}

/// Mixture of normalized generators with positive weights.
pub fn make_mixture(parts: Vec<(f64, Generator)>) -> Result<Generator> {
    if parts.is_empty() || parts.iter().any(|(w, _)| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::InvalidParameter {
            family: "mixture",
            reason: "weights must be positive and finite".into(),
        });
    }
    let total = parts.iter().map(|(w, g)| w * g.phi(0.5)).sum();
    Ok(Generator::new(Mixture { parts, total }))
}
