use std::f64::consts::PI;

use rand::Rng;

use super::points::sample_uniform_sphere;
use crate::error::{Error, Result};
use crate::geom::cone::extreme_rays;
use crate::geom::linalg::{self, dot, Reflection};
use crate::geom::polytope::cross3;
use crate::geom::{PolyhedralCone, UnitVector};

const REJECTION_CAP: u64 = 10_000_000;

/// Uniform direction in `cone ∩ S^d`: exact for ambient dimension 2 and 3,
/// cap rejection above.
pub fn sample_uniform_in_cell<R: Rng + ?Sized>(cone: &PolyhedralCone, rng: &mut R) -> Result<UnitVector> {
    match cone.ambient_dim() {
        2 => sample_in_arc(cone, rng),
        3 => match extreme_rays(cone) {
            Ok(rays) => {
                let dirs: Vec<Vec<f64>> = rays.iter().map(|r| r.direction.to_vec()).collect();
                Ok(SphericalFan::new(&dirs).sample(rng))
            }
            Err(Error::NotPointed) => sample_uniform_in_cell_by_cap(cone, rng),
            Err(e) => Err(e),
        },
        _ => sample_uniform_in_cell_by_cap(cone, rng),
    }
}

fn sample_in_arc<R: Rng + ?Sized>(cone: &PolyhedralCone, rng: &mut R) -> Result<UnitVector> {
    let rays = match extreme_rays(cone) {
        Ok(r) => r,
        Err(Error::NotPointed) => return sample_uniform_in_cell_by_cap(cone, rng),
        Err(e) => return Err(e),
    };
    let (a, b) = (&rays[0].direction, &rays[1].direction);
    let theta = dot(a, b).clamp(-1.0, 1.0).acos();
    let w = linalg::normalized(&linalg::axpy(b, -dot(a, b), a)).ok_or(Error::EmptyCell)?;
    let t = rng.random::<f64>() * theta;
    UnitVector::normalize(&linalg::axpy(&linalg::scale(a, t.cos()), t.sin(), &w))
}

/// Rejection from the smallest cap around the normalized ray sum that holds
/// every ray (or from the whole sphere for cones that are not pointed).
pub fn sample_uniform_in_cell_by_cap<R: Rng + ?Sized>(cone: &PolyhedralCone, rng: &mut R) -> Result<UnitVector> {
    let dim = cone.ambient_dim();
    let cap = match extreme_rays(cone) {
        Ok(rays) => {
            let mut c = vec![0.0; dim];
            for r in &rays {
                for (x, y) in c.iter_mut().zip(r.direction.iter()) {
                    *x += y;
                }
            }
            linalg::normalized(&c).map(|c| {
                let min_cos = rays.iter().map(|r| dot(&r.direction, &c)).fold(f64::INFINITY, f64::min);
                (c, min_cos)
            })
        }
        Err(Error::NotPointed) => None,
        Err(e) => return Err(e),
    };
    // a convex spherical polytope lies in the cap spanned by its vertices
    // only when that cap is smaller than a hemisphere
    let cap = cap.filter(|(_, m)| *m > 1e-9);
    for _ in 0..REJECTION_CAP {
        let x = match &cap {
            Some((c, min_cos)) => sample_in_cap(c, *min_cos, rng),
            None => sample_uniform_sphere(dim - 1, rng).into_inner(),
        };
        if cone.slacks(&x).all(|s| s >= 0.0) {
            return UnitVector::normalize(&x);
        }
    }
    Err(Error::IterationCap(REJECTION_CAP))
}

/// Uniform point of `{x ∈ S^{D-1} : <x, c> >= min_cos}`.
fn sample_in_cap<R: Rng + ?Sized>(c: &[f64], min_cos: f64, rng: &mut R) -> Vec<f64> {
    let dim = c.len();
    // the height t = <x, c> has density proportional to (1 - t^2)^{(D-3)/2}
    let t = loop {
        let t = min_cos + (1.0 - min_cos) * rng.random::<f64>();
        let accept = if dim == 3 {
            1.0
        } else {
            (1.0 - t * t).max(0.0).powf((dim as f64 - 3.0) / 2.0)
        };
        if dim == 3 || rng.random::<f64>() < accept {
            break t;
        }
    };
    let basis = Reflection::to_south_pole(c).tangent_basis();
    let w = sample_uniform_sphere(dim - 2, rng);
    let mut x = linalg::scale(c, t);
    let s = (1.0 - t * t).max(0.0).sqrt();
    for (wj, b) in w.iter().zip(&basis) {
        for (xc, bc) in x.iter_mut().zip(b) {
            *xc += s * wj * bc;
        }
    }
    x
}

/// A convex spherical polygon in `S^2` cut into triangles from one vertex.
#[derive(Debug, Clone)]
pub struct SphericalFan {
    triangles: Vec<[Vec<f64>; 3]>,
    cumulative: Vec<f64>,
}

impl SphericalFan {
    /// `vertices` in any order.
    pub fn new(vertices: &[Vec<f64>]) -> Self {
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
        let mut triangles = Vec::new();
        let mut cumulative = Vec::new();
        let mut total = 0.0;
        for w in order[1..].windows(2) {
            let (b, c) = (&vertices[w[0].1], &vertices[w[1].1]);
            total += triangle_area(a, b, c);
            triangles.push([a.clone(), b.clone(), c.clone()]);
            cumulative.push(total);
        }
        Self { triangles, cumulative }
    }

    pub fn area(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> UnitVector {
        let target = rng.random::<f64>() * self.area();
        let k = self
            .cumulative
            .partition_point(|&c| c < target)
            .min(self.triangles.len() - 1);
        let [a, b, c] = &self.triangles[k];
        sample_spherical_triangle(a, b, c, rng)
    }
}

fn triangle_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let det = dot(a, &cross3(b, c)).abs();
    2.0 * det.atan2(1.0 + dot(a, b) + dot(b, c) + dot(c, a))
}

/// Interior angle at `a` of the spherical triangle `(a, b, c)`.
fn vertex_angle(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let tb = linalg::axpy(b, -dot(a, b), a);
    let tc = linalg::axpy(c, -dot(a, c), a);
    let cos = dot(&tb, &tc) / (linalg::norm(&tb) * linalg::norm(&tc));
    cos.clamp(-1.0, 1.0).acos()
}

/// Uniform point in a spherical triangle (Arvo's area-preserving map).
pub fn sample_spherical_triangle<R: Rng + ?Sized>(a: &[f64], b: &[f64], c: &[f64], rng: &mut R) -> UnitVector {
    let alpha = vertex_angle(a, b, c);
    let beta = vertex_angle(b, c, a);
    let gamma = vertex_angle(c, a, b);
    let area = (alpha + beta + gamma - PI).max(0.0);
    let (u1, u2): (f64, f64) = (rng.random(), rng.random());
    let sub_area = u1 * area;
    let s = (sub_area - alpha).sin();
    let t = (sub_area - alpha).cos();
    let u = t - alpha.cos();
    let v = s + alpha.sin() * dot(a, b);
    let q = (((v * t - u * s) * alpha.cos() - v) / ((v * s + u * t) * alpha.sin())).clamp(-1.0, 1.0);
    let perp = linalg::normalized(&linalg::axpy(c, -dot(c, a), a)).unwrap_or_else(|| c.to_vec());
    let c_hat = linalg::axpy(&linalg::scale(a, q), (1.0 - q * q).sqrt(), &perp);
    let z = 1.0 - u2 * (1.0 - dot(&c_hat, b));
    let perp2 = linalg::normalized(&linalg::axpy(&c_hat, -dot(&c_hat, b), b)).unwrap_or_else(|| c_hat.clone());
    let p = linalg::axpy(&linalg::scale(b, z), (1.0 - z * z).max(0.0).sqrt(), &perp2);
    UnitVector::normalize(&p).expect("nonzero")
}
