use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::densities::constants::omega;
use crate::error::{Error, Result};
use crate::geom::hull::{hull_2d, hull_3d};
use crate::geom::linalg::{self, dot};
use crate::geom::polytope::cross3;
use crate::geom::UnitVector;

/// Uniform point on `S^d ⊂ R^{d+1}`.
pub fn sample_uniform_sphere<R: Rng + ?Sized>(d: usize, rng: &mut R) -> UnitVector {
    loop {
        let x: Vec<f64> = (0..=d).map(|_| rng.sample(StandardNormal)).collect();
        if let Ok(u) = UnitVector::normalize(&x) {
            return u;
        }
    }
}

/// Uniform point on the closed half-sphere `{x ∈ S^d : x_{d+1} >= 0}`.
pub fn sample_half_sphere<R: Rng + ?Sized>(d: usize, rng: &mut R) -> UnitVector {
    let u = sample_uniform_sphere(d, rng);
    if u[d] < 0.0 {
        u.negated()
    } else {
        u
    }
}

/// Gnomonic image of a uniform half-sphere point: a `d`-dimensional Cauchy
/// (beta-prime) vector with density `(2/ω_{d+1})(1+|x|^2)^{-(d+1)/2}`.
pub fn sample_cauchy_point<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let u = sample_half_sphere(d, rng);
        if u[d] > 0.0 {
            return u[..d].iter().map(|x| x / u[d]).collect();
        }
    }
}

/// Points generated by [`sample_poisson_pi`].
#[derive(Debug, Clone)]
pub struct PiSample {
    /// All generated points, in order of decreasing norm.
    pub points: Vec<Vec<f64>>,
    /// Norm of the last generated point; every omitted point is shorter.
    pub cutoff: f64,
}

const PI_POINT_CAP: usize = 100_000;

/// The Poisson process on `R^d \ {0}` with intensity
/// `(2/ω_{d+1})|y|^{-(d+1)}`, truncated to the points that can matter for
/// its convex hull.
///
/// Norms are generated from the outside in: the count beyond radius `r` is
/// Poisson with mean `λ/r`, `λ = 2ω_d/ω_{d+1}`, so the `k`-th largest norm is
/// `λ/Γ_k` for the arrival times `Γ_k` of a unit-rate Poisson process.
/// Generation stops once the ball of the current norm lies inside the hull.
pub fn sample_poisson_pi<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<PiSample> {
    sample_poisson_pi_to_radius(d, f64::INFINITY, rng)
}

/// Like [`sample_poisson_pi`], but keeps going at least until every point of
/// norm `>= radius` has been generated.
pub fn sample_poisson_pi_to_radius<R: Rng + ?Sized>(d: usize, radius: f64, rng: &mut R) -> Result<PiSample> {
    if !(2..=3).contains(&d) {
        return Err(Error::Unsupported(format!("Poisson hull process in R^{d}")));
    }
    let lambda = 2.0 * omega(d as u32) / omega(d as u32 + 1);
    let mut arrival = 0.0;
    let mut points: Vec<Vec<f64>> = Vec::new();
    loop {
        if points.len() >= PI_POINT_CAP {
            return Err(Error::IterationCap(PI_POINT_CAP as u64));
        }
        let step: f64 = rng.sample(Exp1);
        arrival += step;
        let r = lambda / arrival;
        let dir = {
            let x: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            linalg::normalized(&x).unwrap_or_else(|| {
                let mut e = vec![0.0; d];
                e[0] = 1.0;
                e
            })
        };
        points.push(linalg::scale(&dir, r));
        if r < radius && points.len() > d && inner_radius(&points, d).is_some_and(|h| h >= r) {
            return Ok(PiSample { points, cutoff: r });
        }
    }
}

/// Distance from the origin to the boundary of the hull, or `None` when the
/// origin is not an interior point.
pub fn inner_radius(points: &[Vec<f64>], d: usize) -> Option<f64> {
    let mut best = f64::INFINITY;
    match d {
        2 => {
            let h = hull_2d(points).ok()?;
            for k in 0..h.len() {
                let (a, b) = (&points[h[k]], &points[h[(k + 1) % h.len()]]);
                let nu = [b[1] - a[1], a[0] - b[0]];
                let off = dot(&nu, a) / linalg::norm(&nu);
                if off <= 0.0 {
                    return None;
                }
                best = best.min(off);
            }
        }
        3 => {
            let h = hull_3d(points).ok()?;
            for f in &h.faces {
                let (a, b, c) = (&points[f[0]], &points[f[1]], &points[f[2]]);
                let nu = cross3(&linalg::sub(b, a), &linalg::sub(c, a));
                let off = dot(&nu, a) / linalg::norm(&nu);
                if off <= 0.0 {
                    return None;
                }
                best = best.min(off);
            }
        }
        _ => return None,
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::RngStream;

    #[test]
    fn sphere_points_have_unit_norm_and_zero_mean() {
        let mut rng = RngStream::new(1, 0);
        let n = 100_000;
        let mut mean = [0.0; 3];
        let mut second = 0.0;
        for _ in 0..n {
            let u = sample_uniform_sphere(2, &mut rng);
            assert!((linalg::norm(&u) - 1.0).abs() < 1e-12);
            for k in 0..3 {
                mean[k] += u[k] / n as f64;
            }
            second += u[2] * u[2] / n as f64;
        }
        for m in mean {
            assert!(m.abs() < 4.0 / (n as f64).sqrt());
        }
        // Var(X_3^2) = E X^4 - (E X^2)^2 = 1/5 - 1/9 on S^2
        let se = ((0.2 - 1.0 / 9.0) / n as f64).sqrt();
        assert!((second - 1.0 / 3.0).abs() < 4.0 * se);
    }

    #[test]
    fn planar_cauchy_disc_probability() {
        let mut rng = RngStream::new(2, 0);
        let n = 100_000;
        let inside = (0..n)
            .filter(|_| linalg::norm(&sample_cauchy_point(2, &mut rng)) <= 1.0)
            .count() as f64
            / n as f64;
        let p = 1.0 - 1.0 / 2f64.sqrt();
        assert!((inside - p).abs() < 4.0 * (p * (1.0 - p) / n as f64).sqrt());
    }

    #[test]
    fn one_dimensional_cauchy_quartiles() {
        let mut rng = RngStream::new(3, 0);
        let mut xs: Vec<f64> = (0..40_001).map(|_| sample_cauchy_point(1, &mut rng)[0]).collect();
        xs.sort_by(f64::total_cmp);
        assert!(xs[20_000].abs() < 0.03);
        assert!((xs[10_000] + 1.0).abs() < 0.05);
        assert!((xs[30_000] - 1.0).abs() < 0.05);
    }

    #[test]
    fn poisson_hull_contains_origin() {
        let mut rng = RngStream::new(4, 0);
        for d in [2, 3] {
            for _ in 0..200 {
                let s = sample_poisson_pi(d, &mut rng).unwrap();
                let h = inner_radius(&s.points, d).unwrap();
                assert!(h >= s.cutoff);
            }
        }
    }

    #[test]
    fn expected_count_outside_unit_disc_is_one() {
        let mut rng = RngStream::new(5, 0);
        let reps = 20_000;
        let mut total = 0usize;
        for _ in 0..reps {
            let s = sample_poisson_pi_to_radius(2, 1.0, &mut rng).unwrap();
            total += s.points.iter().filter(|p| linalg::norm(p) >= 1.0).count();
        }
        let mean = total as f64 / reps as f64;
        assert!((mean - 1.0).abs() < 4.0 / (reps as f64).sqrt(), "{mean}");
    }
}
