use rand::Rng;
use serde::{Deserialize, Serialize};

use super::constants::{c_d, factorial, omega};
use super::exterior::{cauchy_exterior_mass, exterior_inverse_power_integral};
use crate::arrangement::schlaefli_count;
use crate::error::{Error, Result};
use crate::geom::linalg::norm;
use crate::geom::{convex_hull, solid_angle_exact, PolyhedralCone, Polytope};
use crate::samplers::sample_poisson_pi;

/// A polytope given by its vertex list in order of strictly increasing first
/// coordinate, with at least `d + 1` vertices in convex position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRep", into = "RawRep")]
pub struct CoordinateRep {
    polytope: Polytope,
}

#[derive(Serialize, Deserialize)]
struct RawRep {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl TryFrom<RawRep> for CoordinateRep {
    type Error = Error;

    fn try_from(raw: RawRep) -> Result<Self> {
        CoordinateRep::new(raw.dim, raw.points)
    }
}

impl From<CoordinateRep> for RawRep {
    fn from(x: CoordinateRep) -> Self {
        RawRep {
            dim: x.dim(),
            points: x.polytope.vertices().to_vec(),
        }
    }
}

impl CoordinateRep {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.len() < dim + 1 {
            return Err(Error::DegenerateInput(format!(
                "{} points cannot span a polytope in R^{dim}",
                points.len()
            )));
        }
        Polytope::new(dim, points).map(|polytope| Self { polytope })
    }

    pub fn from_polytope(polytope: Polytope) -> Result<Self> {
        let dim = polytope.dim();
        if polytope.num_vertices() < dim + 1 {
            return Err(Error::DegenerateInput("too few vertices".into()));
        }
        Ok(Self { polytope })
    }

    pub fn m(&self) -> usize {
        self.polytope.num_vertices()
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        self.polytope.vertices()
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }
}

/// A density value kept in log space as well, with the absolute error
/// inherited from the quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityValue {
    pub value: f64,
    pub log_value: f64,
    pub error: f64,
    /// False when the origin is not an interior point of the hull; `φ` is
    /// then zero.
    pub origin_interior: bool,
}

fn cauchy_norm(d: usize) -> f64 {
    2.0 / omega(d as u32 + 1)
}

/// Density of the limiting hull `conv(Π)` with respect to the stratum-wise
/// Lebesgue measure:
/// `(2/ω_{d+1})^m Π|x_i|^{-(d+1)} exp(-(2/ω_{d+1}) ∫_{R^d \ conv x} |y|^{-(d+1)} dy)`.
pub fn eval_phi(x: &CoordinateRep) -> Result<DensityValue> {
    let d = x.dim();
    if !x.polytope.origin_interior() {
        return Ok(DensityValue {
            value: 0.0,
            log_value: f64::NEG_INFINITY,
            error: 0.0,
            origin_interior: false,
        });
    }
    let c = cauchy_norm(d);
    let e = exterior_inverse_power_integral(&x.polytope, d)?;
    let log_value =
        x.m() as f64 * c.ln() - (d + 1) as f64 * x.points().iter().map(|p| norm(p).ln()).sum::<f64>() - c * e.value;
    let value = log_value.exp();
    Ok(DensityValue {
        value,
        log_value,
        error: value * c * e.error,
        origin_interior: true,
    })
}

/// Density of `(1/n)·conv(n iid Cauchy points)` on the stratum of `m`-vertex
/// polytopes: `n!/(n-m)! Π n^d f(n x_i) · (1 - P(outside n·conv x))^{n-m}`.
pub fn eval_phi_n(x: &CoordinateRep, n: u64) -> Result<DensityValue> {
    let (d, m) = (x.dim(), x.m());
    if n < m as u64 {
        return Err(Error::InvalidArgument(format!("n = {n} is below the vertex count {m}")));
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let ln_c = cauchy_norm(d).ln();
    let half = (d + 1) as f64 / 2.0;
    // n!/(n-m)! = n^m Π (1 - j/n)
    let mut log_value = m as f64 * ln_n + (0..m).map(|j| (-(j as f64) / nf).ln_1p()).sum::<f64>();
    for p in x.points() {
        let r = nf * norm(p);
        // log of n^d f(n x) without forming (n|x|)^2 when it is huge
        log_value += d as f64 * ln_n + ln_c
            - if r >= 1.0 {
                2.0 * half * r.ln() + half * (1.0 / (r * r)).ln_1p()
            } else {
                half * (r * r).ln_1p()
            };
    }
    let outside = cauchy_exterior_mass(&x.polytope, nf)?;
    let k = (n - m as u64) as f64;
    if k > 0.0 {
        log_value += k * (-outside.value).ln_1p();
    }
    let value = log_value.exp();
    Ok(DensityValue {
        value,
        log_value,
        error: value * k * outside.error / (1.0 - outside.value),
        origin_interior: x.polytope.origin_interior(),
    })
}

/// `C(n, d+1)·α(cone)`: the density of the law of `S_n^{-e}` against the law
/// of the rotated Schläfli cone, evaluated at a pointed cone in `R^{d+1}`.
pub fn size_bias_weight(cone: &PolyhedralCone, n: u64) -> Result<f64> {
    let dim = cone.ambient_dim() as u64;
    Ok(schlaefli_count(n, dim) as f64 * solid_angle_exact(cone)?)
}

/// The same weight written through the scaled profile `K` at the south
/// pole: `(1/2) C(n, d+1) PC(K / n)`.
pub fn size_bias_weight_from_profile(k: &Polytope, n: u64) -> Result<f64> {
    let d = k.dim() as u64;
    let inside = 1.0 - cauchy_exterior_mass(k, 1.0 / n as f64)?.value;
    Ok(0.5 * schlaefli_count(n, d + 1) as f64 * inside)
}

/// `d! ω_{d+1} / (2 vol p)`, the density of the typical-cell law against the
/// zero-cell law.
pub fn limit_density_factor(p: &Polytope, d: usize) -> Result<f64> {
    if p.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: p.dim(),
        });
    }
    let vol = p.volume();
    if vol <= 0.0 {
        return Err(Error::ZeroVolume);
    }
    Ok(factorial(d as u32) * omega(d as u32 + 1) / (2.0 * vol))
}

/// `E vol(Z) / vol p = c_d / vol p`; agrees with [`limit_density_factor`].
pub fn typical_zero_ratio(p: &Polytope) -> Result<f64> {
    let vol = p.volume();
    if vol <= 0.0 {
        return Err(Error::ZeroVolume);
    }
    Ok(c_d(p.dim() as u32) / vol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L1Estimate {
    pub n: u64,
    pub estimate: f64,
    pub std_error: f64,
}

/// One draw of `2(1 - φ_n/φ)_+` for each `n`, at a shared draw of `conv(Π)`.
/// Its mean is `∫|φ_n - φ| dμ` because both densities integrate to 1.
pub fn l1_terms<R: Rng + ?Sized>(d: usize, ns: &[u64], rng: &mut R) -> Result<Vec<f64>> {
    let pi = sample_poisson_pi(d, rng)?;
    let rep = CoordinateRep::from_polytope(convex_hull(&pi.points, d)?)?;
    let phi = eval_phi(&rep)?;
    ns.iter()
        .map(|&n| {
            let ratio = if (rep.m() as u64) > n {
                0.0
            } else {
                (eval_phi_n(&rep, n)?.log_value - phi.log_value).exp()
            };
            Ok(2.0 * (1.0 - ratio).max(0.0))
        })
        .collect()
}

/// Monte Carlo estimate of `∫|φ_n - φ| dμ` for each `n` from `samples`
/// draws of [`l1_terms`]; every `n` sees the same draws.
pub fn l1_distance<R: Rng + ?Sized>(d: usize, ns: &[u64], samples: usize, rng: &mut R) -> Result<Vec<L1Estimate>> {
    let mut sums = vec![(0.0, 0.0); ns.len()];
    for _ in 0..samples {
        for (s, t) in sums.iter_mut().zip(l1_terms(d, ns, rng)?) {
            s.0 += t;
            s.1 += t * t;
        }
    }
    let k = samples as f64;
    Ok(ns
        .iter()
        .zip(sums)
        .map(|(&n, (s, s2))| {
            let mean = s / k;
            let var = (s2 / k - mean * mean).max(0.0) * k / (k - 1.0).max(1.0);
            L1Estimate {
                n,
                estimate: mean,
                std_error: (var / k).sqrt(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::RngStream;
    use std::f64::consts::PI;

    fn rotated_square() -> CoordinateRep {
        let t = 0.2f64;
        let v = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]
            .iter()
            .map(|p| vec![t.cos() * p[0] - t.sin() * p[1], t.sin() * p[0] + t.cos() * p[1]])
            .collect();
        CoordinateRep::new(2, v).unwrap()
    }

    #[test]
    fn square_value() {
        let x = rotated_square();
        let c = 1.0 / (2.0 * PI);
        // |x_i| = √2 for every corner
        let expected = c.powi(4) * 2f64.sqrt().powi(-12) * (-c * 4.0 * 2f64.sqrt()).exp();
        let v = eval_phi(&x).unwrap();
        assert!((v.value / expected - 1.0).abs() < 1e-12);
        assert!(v.origin_interior);
    }

    #[test]
    fn scaling_relation() {
        let x = rotated_square();
        let base = eval_phi(&x).unwrap();
        let c = 1.0 / (2.0 * PI);
        let e = 4.0 * 2f64.sqrt();
        for lambda in [0.5, 2.0] {
            let scaled = CoordinateRep::from_polytope(x.polytope().scaled(lambda).unwrap()).unwrap();
            let v = eval_phi(&scaled).unwrap().log_value;
            let predicted = base.log_value + c * e - 12.0 * lambda.ln() - c * e / lambda;
            assert!((v - predicted).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_outside_interior() {
        let x = CoordinateRep::from_polytope(rotated_square().polytope().translated(&[5.0, 0.0]).unwrap()).unwrap();
        let v = eval_phi(&x).unwrap();
        assert_eq!(v.value, 0.0);
        assert!(!v.origin_interior);
        // the finite-n density stays positive there
        assert!(eval_phi_n(&x, 10).unwrap().value > 0.0);
    }

    #[test]
    fn rejects_non_convex_position() {
        let r = CoordinateRep::new(
            2,
            vec![vec![-1.0, 0.0], vec![0.1, 0.1], vec![1.0, -0.1], vec![0.2, 2.0]],
        );
        assert!(r.is_err());
    }

    #[test]
    fn phi_n_converges() {
        let x = rotated_square();
        let phi = eval_phi(&x).unwrap();
        let mut last = f64::INFINITY;
        for n in [100u64, 1000, 10_000, 100_000] {
            let gap = (eval_phi_n(&x, n).unwrap().value / phi.value - 1.0).abs();
            assert!(gap < last);
            last = gap;
        }
        assert!(last < 1e-2);
    }

    #[test]
    fn phi_n_with_n_equal_m() {
        let x = rotated_square();
        let n = 4u64;
        let c = 1.0 / (2.0 * PI);
        let direct: f64 = 24.0
            * x.points()
                .iter()
                .map(|p| {
                    let r2 = (n as f64).powi(2) * norm(p).powi(2);
                    (n as f64).powi(2) * c * (1.0 + r2).powf(-1.5)
                })
                .product::<f64>();
        assert!((eval_phi_n(&x, n).unwrap().value / direct - 1.0).abs() < 1e-12);
        assert!(eval_phi_n(&x, 3).is_err());
    }

    #[test]
    fn planar_constant_matches_c2() {
        let square = Polytope::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 1e-9], vec![2e-9, 1.0], vec![1.0 + 1e-9, 1.0]],
        )
        .unwrap();
        let f = limit_density_factor(&square, 2).unwrap();
        assert!((f - 4.0 * PI / square.volume()).abs() < 1e-9);
        assert!((typical_zero_ratio(&square).unwrap() - f).abs() < 1e-9);
    }

    #[test]
    fn rescaled_content_limit() {
        // n^d PC(p / n) -> (2/ω_{d+1}) vol(p) for the unit square
        let square = Polytope::new(
            2,
            vec![
                vec![0.0, 0.0],
                vec![1.0, 1e-12],
                vec![2e-12, 1.0],
                vec![1.0 + 1e-12, 1.0],
            ],
        )
        .unwrap();
        let n = 1e4;
        let inside = 1.0 - cauchy_exterior_mass(&square, 1.0 / n).unwrap().value;
        let limit = square.volume() / (2.0 * PI);
        assert!((n * n * inside / limit - 1.0).abs() < 1e-3);
    }

    #[test]
    fn half_space_weight() {
        // one hyperplane: each side is a half-space of angle 1/2 and C(1, d+1) = 2
        use crate::geom::{LinearHyperplane, SignVector, UnitVector};
        for dim in 2..=3 {
            let cone = PolyhedralCone::new(
                vec![LinearHyperplane::new(UnitVector::basis(dim, 0))],
                SignVector::new(vec![1]).unwrap(),
            )
            .unwrap();
            assert_eq!(size_bias_weight(&cone, 1).unwrap(), 1.0);
        }
    }

    #[test]
    fn l1_decreases() {
        let mut rng = RngStream::new(5, 0);
        let est = l1_distance(2, &[100, 1000, 10_000], 4000, &mut rng).unwrap();
        assert!(
            est[0].estimate > est[1].estimate && est[1].estimate > est[2].estimate,
            "{est:?}"
        );
    }
}
