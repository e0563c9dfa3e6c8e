//! Family specifications `NAME[:PARAMS]` used by the command-line tool.
//!
//! | spec | model |
//! |------|-------|
//! | `pi`, `m`, `w` | independence, comonotone, countermonotone |
//! | `clayton:θ`, `gumbel:θ`, `frank:θ` | Archimedean families |
//! | `galambos:θ`, `gumbel-ev:θ` | extreme-value families |
//! | `pickands-pwl[:PATH]` | piecewise-linear Pickands function (default: three segments) |
//! | `mo:α,β` | Marshall–Olkin |
//! | `shift:n` | completely dependent copula of `x ↦ 2ⁿx mod 1` |
//! | `strip:N,i` | strip counterexample member |

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::archimedean::{archimedean_copula, make_clayton, make_frank, make_gumbel, Generator};
use crate::copula::{
    make_m, make_marshall_olkin, make_pi, make_w, MarshallOlkinParams, SharedCopula,
};
use crate::counterexamples::{DyadicShiftCopula, StripCopula};
use crate::error::{Error, Result};
use crate::extreme_value::{
    ev_copula, make_galambos, make_gumbel_pickands, make_piecewise_linear_pickands,
    PickandsFunction, THREE_SEGMENT_KNOTS,
};
use crate::io::read_knots_file;

/// A parsed family specification.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Pi,
    M,
    W,
    Clayton(f64),
    Gumbel(f64),
    Frank(f64),
    Galambos(f64),
    GumbelEv(f64),
    PickandsPwl(Vec<(f64, f64)>),
    MarshallOlkin(f64, f64),
    Shift(u32),
    Strip(u32, u64),
}

/// Structural class of a family, relevant to plug-in estimation.
#[derive(Debug, Clone)]
pub enum Structure {
    Archimedean(Generator),
    ExtremeValue(PickandsFunction),
    Other,
}

fn malformed(spec: &str) -> Error {
    Error::UnknownFamily(spec.to_owned())
}

fn params(spec: &str, rest: Option<&str>, count: usize) -> Result<Vec<f64>> {
    let rest = rest.ok_or_else(|| malformed(spec))?;
    let values: Vec<f64> = rest
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| malformed(spec)))
        .collect::<Result<_>>()?;
    if values.len() != count {
        return Err(malformed(spec));
    }
    Ok(values)
}

fn integer<T: std::str::FromStr>(spec: &str, s: &str) -> Result<T> {
    s.trim().parse::<T>().map_err(|_| malformed(spec))
}

impl FamilySpec {
    /// Parses `spec`; `knots` overrides the path of `pickands-pwl`.
    pub fn parse(spec: &str, knots: Option<&Path>) -> Result<Self> {
        let (name, rest) = match spec.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (spec.trim(), None),
        };
        let one = || params(spec, rest, 1).map(|v| v[0]);
        let parsed = match name {
            "pi" | "m" | "w" if rest.is_some() => return Err(malformed(spec)),
            "pi" => Self::Pi,
            "m" => Self::M,
            "w" => Self::W,
            "clayton" => Self::Clayton(one()?),
            "gumbel" => Self::Gumbel(one()?),
            "frank" => Self::Frank(one()?),
            "galambos" => Self::Galambos(one()?),
            "gumbel-ev" => Self::GumbelEv(one()?),
            "mo" => {
                let v = params(spec, rest, 2)?;
                Self::MarshallOlkin(v[0], v[1])
            }
            "pickands-pwl" => {
                let path: Option<PathBuf> = match (knots, rest) {
                    (Some(p), _) => Some(p.to_path_buf()),
                    (None, Some(r)) if !r.is_empty() => Some(PathBuf::from(r)),
                    _ => None,
                };
                match path {
                    Some(p) => Self::PickandsPwl(read_knots_file(&p)?),
                    None => Self::PickandsPwl(THREE_SEGMENT_KNOTS.to_vec()),
                }
            }
            "shift" => Self::Shift(integer(spec, rest.ok_or_else(|| malformed(spec))?)?),
            "strip" => {
                let rest = rest.ok_or_else(|| malformed(spec))?;
                let (a, b) = rest.split_once(',').ok_or_else(|| malformed(spec))?;
                Self::Strip(integer(spec, a)?, integer(spec, b)?)
            }
            _ => return Err(malformed(spec)),
        };
        parsed.structure()?;
        Ok(parsed)
    }

    /// Generator or Pickands function, validating parameters.
    pub fn structure(&self) -> Result<Structure> {
        Ok(match self {
            Self::Clayton(t) => Structure::Archimedean(make_clayton(*t)?),
            Self::Gumbel(t) => Structure::Archimedean(make_gumbel(*t)?),
            Self::Frank(t) => Structure::Archimedean(make_frank(*t)?),
            Self::Galambos(t) => Structure::ExtremeValue(make_galambos(*t)?),
            Self::GumbelEv(t) => Structure::ExtremeValue(make_gumbel_pickands(*t)?),
            Self::PickandsPwl(k) => Structure::ExtremeValue(make_piecewise_linear_pickands(k)?),
            Self::MarshallOlkin(a, b) => {
                MarshallOlkinParams::new(*a, *b)?;
                Structure::Other
            }
            Self::Shift(n) => {
                DyadicShiftCopula::new(*n)?;
                Structure::Other
            }
            Self::Strip(l, i) => {
                StripCopula::new(*l, *i)?;
                Structure::Other
            }
            Self::Pi | Self::M | Self::W => Structure::Other,
        })
    }

    pub fn copula(&self) -> Result<SharedCopula> {
        Ok(match (self, self.structure()?) {
            (_, Structure::Archimedean(g)) => archimedean_copula(&g),
            (_, Structure::ExtremeValue(a)) => ev_copula(&a),
            (Self::Pi, _) => make_pi(),
            (Self::M, _) => make_m(),
            (Self::W, _) => make_w(),
            (Self::MarshallOlkin(a, b), _) => make_marshall_olkin(MarshallOlkinParams::new(*a, *b)?),
            (Self::Shift(n), _) => Arc::new(DyadicShiftCopula::new(*n)?),
            (Self::Strip(l, i), _) => Arc::new(StripCopula::new(*l, *i)?),
            _ => unreachable!("structured families handled above"),
        })
    }

    /// Scalar parameter of one-parameter families.
    pub fn theta(&self) -> Option<f64> {
        match self {
            Self::Clayton(t) | Self::Gumbel(t) | Self::Frank(t) | Self::Galambos(t) | Self::GumbelEv(t) => {
                Some(*t)
            }
            _ => None,
        }
    }

    /// Same family with parameter `theta`.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        let s = match self {
            Self::Clayton(_) => Self::Clayton(theta),
            Self::Gumbel(_) => Self::Gumbel(theta),
            Self::Frank(_) => Self::Frank(theta),
            Self::Galambos(_) => Self::Galambos(theta),
            Self::GumbelEv(_) => Self::GumbelEv(theta),
            other => {
                return Err(Error::InvalidConfig(format!(
                    "family `{other}` has no scalar parameter"
                )))
            }
        };
        s.structure()?;
        Ok(s)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Pi => write!(f, "pi"),
            Self::M => write!(f, "m"),
            Self::W => write!(f, "w"),
            Self::Clayton(t) => write!(f, "clayton:{t}"),
            Self::Gumbel(t) => write!(f, "gumbel:{t}"),
            Self::Frank(t) => write!(f, "frank:{t}"),
            Self::Galambos(t) => write!(f, "galambos:{t}"),
            Self::GumbelEv(t) => write!(f, "gumbel-ev:{t}"),
            Self::PickandsPwl(k) => {
                let parts: Vec<String> = k.iter().map(|(x, a)| format!("({x},{a})")).collect();
                write!(f, "pickands-pwl[{}]", parts.join(","))
            }
            Self::MarshallOlkin(a, b) => write!(f, "mo:{a},{b}"),
            Self::Shift(n) => write!(f, "shift:{n}"),
            Self::Strip(l, i) => write!(f, "strip:{l},{i}"),
        }
    }
}

/// One representative specification per registered family.
pub fn registered_examples() -> Vec<FamilySpec> {
    vec![
        FamilySpec::Pi,
        FamilySpec::M,
        FamilySpec::W,
        FamilySpec::Clayton(2.0),
        FamilySpec::Gumbel(3.0),
        FamilySpec::Frank(5.0),
        FamilySpec::Frank(-5.0),
        FamilySpec::Galambos(3.0),
        FamilySpec::GumbelEv(2.0),
        FamilySpec::PickandsPwl(THREE_SEGMENT_KNOTS.to_vec()),
        FamilySpec::MarshallOlkin(0.3, 0.7),
        FamilySpec::Shift(3),
        FamilySpec::Strip(2, 3),
    ]
}
