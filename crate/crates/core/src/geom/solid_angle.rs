//! Normalized solid angle `α(C) = σ(C ∩ S^{D-1}) / σ(S^{D-1})`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use super::cone::{extreme_rays, PolyhedralCone};
use super::linalg::{self, dot, Reflection};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidAngleEstimate {
    pub value: f64,
    /// Zero for closed-form values.
    pub std_error: f64,
}

/// Closed form for ambient dimension 2 and 3 (and the half-space in any
/// dimension).
pub fn solid_angle_exact(cone: &PolyhedralCone) -> Result<f64> {
    let dim = cone.ambient_dim();
    let n = cone.num_hyperplanes();
    if n == 1 {
        return Ok(0.5);
    }
    let signed = |i: usize| -> Vec<f64> { linalg::scale(&cone.hyperplanes()[i].normal, cone.cell().get(i)) };
    match dim {
        2 => {
            let rays = extreme_rays(cone)?;
            let c = dot(&rays[0].direction, &rays[1].direction).clamp(-1.0, 1.0);
            Ok(c.acos() / (2.0 * PI))
        }
        3 => {
            if n == 2 {
                let c = dot(&signed(0), &signed(1)).clamp(-1.0, 1.0);
                return Ok((PI - c.acos()) / (2.0 * PI));
            }
            let rays = extreme_rays(cone)?;
            let dirs: Vec<Vec<f64>> = rays.iter().map(|r| r.direction.to_vec()).collect();
            Ok(spherical_polygon_area(&dirs) / (4.0 * PI))
        }
        _ => Err(Error::Unsupported(format!("closed-form solid angle in R^{dim}"))),
    }
}

/// Area of the convex spherical polygon spanned by unit vectors in `R^3`
/// (any order), by fanning into triangles.
pub fn spherical_polygon_area(vertices: &[Vec<f64>]) -> f64 {
    let mut center = vec![0.0; 3];
    for v in vertices {
        for (c, x) in center.iter_mut().zip(v) {
            *c += x;
        }
    }
    let center = linalg::normalized(&center).expect("pointed cone");
    let basis = Reflection::to_south_pole(&center).tangent_basis();
    let mut order: Vec<(f64, usize)> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (dot(v, &basis[1]).atan2(dot(v, &basis[0])), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let a = &vertices[order[0].1];
    let mut area = 0.0;
    for w in order[1..].windows(2) {
        let (b, c) = (&vertices[w[0].1], &vertices[w[1].1]);
        let det = dot(a, &super::polytope::cross3(b, c)).abs();
        let denom = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
        area += 2.0 * det.atan2(denom);
    }
    area
}

/// Hit-or-miss estimate with `samples` uniform directions.
pub fn solid_angle_mc<R: Rng + ?Sized>(cone: &PolyhedralCone, samples: usize, rng: &mut R) -> SolidAngleEstimate {
    let dim = cone.ambient_dim();
    let mut hits = 0usize;
    let mut x = vec![0.0; dim];
    for _ in 0..samples {
        for c in x.iter_mut() {
            *c = rng.sample(StandardNormal);
        }
        if cone.slacks(&x).all(|v| v >= 0.0) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    SolidAngleEstimate {
        value: p,
        std_error: (p * (1.0 - p) / samples as f64).sqrt(),
    }
}

/// Closed form when available, Monte Carlo otherwise.
pub fn solid_angle<R: Rng + ?Sized>(cone: &PolyhedralCone, samples: usize, rng: &mut R) -> SolidAngleEstimate {
    match solid_angle_exact(cone) {
        Ok(value) => SolidAngleEstimate { value, std_error: 0.0 },
        Err(_) => solid_angle_mc(cone, samples, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::cone::{LinearHyperplane, SignVector, UnitVector};
    use rand::SeedableRng;

    fn hp(v: &[f64]) -> LinearHyperplane {
        LinearHyperplane::new(UnitVector::normalize(v).unwrap())
    }

    #[test]
    fn orthant_is_one_eighth() {
        let cone = PolyhedralCone::new(
            vec![hp(&[1.0, 0.0, 0.0]), hp(&[0.0, 1.0, 0.0]), hp(&[0.0, 0.0, 1.0])],
            SignVector::new(vec![1, -1, 1]).unwrap(),
        )
        .unwrap();
        assert!((solid_angle_exact(&cone).unwrap() - 0.125).abs() < 1e-14);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mc = solid_angle_mc(&cone, 200_000, &mut rng);
        assert!((mc.value - 0.125).abs() < 5.0 * mc.std_error);
    }

    #[test]
    fn planar_quadrant_and_wedges() {
        let cone = PolyhedralCone::new(
            vec![hp(&[1.0, 0.0]), hp(&[0.0, 1.0])],
            SignVector::new(vec![1, 1]).unwrap(),
        )
        .unwrap();
        assert!((solid_angle_exact(&cone).unwrap() - 0.25).abs() < 1e-14);
        let wedge = PolyhedralCone::new(
            vec![hp(&[1.0, 0.0, 0.0]), hp(&[0.0, 1.0, 0.0])],
            SignVector::new(vec![1, 1]).unwrap(),
        )
        .unwrap();
        assert!((solid_angle_exact(&wedge).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn four_sided_cone_matches_monte_carlo() {
        let hs = vec![
            hp(&[1.0, 0.0, 0.3]),
            hp(&[0.0, 1.0, 0.2]),
            hp(&[-1.0, 0.1, 0.5]),
            hp(&[0.2, -1.0, 0.4]),
        ];
        let cone = PolyhedralCone::new(hs, SignVector::new(vec![1, 1, 1, 1]).unwrap()).unwrap();
        let exact = solid_angle_exact(&cone).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mc = solid_angle_mc(&cone, 400_000, &mut rng);
        assert!((mc.value - exact).abs() < 5.0 * mc.std_error, "{exact} vs {mc:?}");
    }
}
