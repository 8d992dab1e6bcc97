use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::constants::omega;
use super::exterior::{cauchy_exterior_mass, polygon_content};
use super::quadrature::{gauss_legendre, Integral};
use crate::error::{Error, Result};
use crate::geom::linalg::{dot, norm};
use crate::geom::{Polytope, UnitVector};
use crate::samplers::sample_cauchy_point;

/// A region of `R^d` whose Cauchy (beta′ with `β = (d+1)/2`) probability is
/// wanted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Full,
    /// `{x : <normal, x> <= offset}`
    HalfSpace {
        normal: UnitVector,
        offset: f64,
    },
    /// Centered at the origin.
    Ball {
        radius: f64,
    },
    Polytope {
        polytope: Polytope,
    },
}

impl Region {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Region::Full => true,
            Region::HalfSpace { normal, offset } => dot(normal, x) <= *offset,
            Region::Ball { radius } => norm(x) <= *radius,
            Region::Polytope { polytope } => polytope.contains(x, 0.0),
        }
    }

    fn dim(&self) -> Option<usize> {
        match self {
            Region::Full | Region::Ball { .. } => None,
            Region::HalfSpace { normal, .. } => Some(normal.dim()),
            Region::Polytope { polytope } => Some(polytope.dim()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcMode {
    /// Closed forms: full space, balls, half-spaces and polytopes in
    /// dimension 1 and 2.
    Exact,
    /// Directional integration of the radial function; polytopes in
    /// dimension 2 and 3.
    Quadrature,
    MonteCarlo {
        samples: u64,
    },
}

/// `(2/ω_{d+1}) ∫_region (1 + |x|²)^{-(d+1)/2} dx`. Monte Carlo results carry
/// their binomial standard error as the error estimate.
pub fn pc_beta_prime<R: Rng + ?Sized>(region: &Region, d: usize, mode: PcMode, rng: &mut R) -> Result<Integral> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if let Some(got) = region.dim().filter(|&k| k != d) {
        return Err(Error::DimensionMismatch { expected: d, got });
    }
    match (mode, region) {
        (PcMode::MonteCarlo { samples }, _) => Ok(monte_carlo(region, d, samples, rng)),
        (_, Region::Full) => Ok(Integral::exact(1.0)),
        (_, Region::HalfSpace { offset, .. }) => Ok(Integral::exact(0.5 + offset.atan() / PI)),
        (_, Region::Ball { radius }) => Ok(Integral::exact(ball_content(*radius, d))),
        (PcMode::Exact, Region::Polytope { polytope }) => match d {
            1 | 2 => Ok(Integral::exact(1.0 - cauchy_exterior_mass(polytope, 1.0)?.value)),
            _ => Err(Error::Unsupported(format!("closed-form content in R^{d}"))),
        },
        (PcMode::Quadrature, Region::Polytope { polytope }) => match d {
            2 => Ok(Integral::exact(polygon_content(polytope, 1.0))),
            3 => {
                let ext = cauchy_exterior_mass(polytope, 1.0)?;
                Ok(Integral {
                    value: 1.0 - ext.value,
                    error: ext.error,
                })
            }
            _ => Err(Error::Unsupported(format!("directional quadrature in R^{d}"))),
        },
    }
}

/// Content of the centered ball of radius `r`. With `|x| = tan t` the radial
/// law has density proportional to `sin^{d-1} t` on `[0, π/2)`.
pub fn ball_content(r: f64, d: usize) -> f64 {
    let t = r.max(0.0).atan();
    match d {
        1 => 2.0 * t / PI,
        2 => 1.0 - 1.0 / (1.0 + r * r).sqrt(),
        3 => 2.0 / PI * (t - r / (1.0 + r * r)),
        _ => {
            let c = 2.0 * omega(d as u32) / omega(d as u32 + 1);
            c * gauss_legendre(64, 0.0, t, |s| s.sin().powi(d as i32 - 1))
        }
    }
}

fn monte_carlo<R: Rng + ?Sized>(region: &Region, d: usize, samples: u64, rng: &mut R) -> Integral {
    let hits = (0..samples)
        .filter(|_| region.contains(&sample_cauchy_point(d, rng)))
        .count() as f64;
    let p = hits / samples.max(1) as f64;
    Integral {
        value: p,
        error: (p * (1.0 - p) / samples.max(1) as f64).sqrt(),
    }
}
