use std::f64::consts::PI;

use super::quadrature::{directional_integral_3d, Integral};
use crate::error::{Error, Result};
use crate::geom::Polytope;

const REL_TOL: f64 = 1e-12;

/// One boundary edge of a polygon seen from the origin: signed distance `h`
/// of its line (positive when the origin is on the inner side) and the
/// signed offsets of its endpoints along the line, measured from the foot of
/// the perpendicular.
pub(crate) struct PlanarEdge {
    pub h: f64,
    pub tau_a: f64,
    pub tau_b: f64,
}

impl PlanarEdge {
    /// `sin ψ` at both ends, where `ψ` is the angle seen from the origin
    /// against the normal of the edge.
    pub fn sines(&self) -> (f64, f64) {
        let h = self.h.abs();
        (self.tau_a / self.tau_a.hypot(h), self.tau_b / self.tau_b.hypot(h))
    }

    pub fn angles(&self) -> (f64, f64) {
        let h = self.h.abs();
        (self.tau_a.atan2(h), self.tau_b.atan2(h))
    }
}

pub(crate) fn planar_edges(p: &Polytope) -> Vec<PlanarEdge> {
    let cyc = p.cyclic_vertices();
    let m = cyc.len();
    (0..m)
        .map(|i| {
            let (a, b) = (&cyc[i], &cyc[(i + 1) % m]);
            let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
            let len = ex.hypot(ey);
            let (tx, ty) = (ex / len, ey / len);
            PlanarEdge {
                h: a[0] * ty - a[1] * tx,
                tau_a: a[0] * tx + a[1] * ty,
                tau_b: b[0] * tx + b[1] * ty,
            }
        })
        .collect()
}

/// `∫_{R^d \ p} |y|^{-(d+1)} dy`, the integral of `1/ρ_p` over the unit sphere.
/// Exact in dimension 1 and 2; adaptive quadrature with an error estimate in
/// dimension 3.
pub fn exterior_inverse_power_integral(p: &Polytope, d: usize) -> Result<Integral> {
    if p.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: p.dim(),
        });
    }
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    match d {
        1 => {
            let v = p.vertices();
            Ok(Integral::exact(1.0 / -v[0][0] + 1.0 / v[1][0]))
        }
        2 => Ok(Integral::exact(
            planar_edges(p)
                .iter()
                .map(|e| {
                    let (sa, sb) = e.sines();
                    (sb - sa) / e.h
                })
                .sum(),
        )),
        3 => directional_integral_3d(p, |r| 1.0 / r, REL_TOL),
        _ => Err(Error::Unsupported(format!("exterior integrals in R^{d}"))),
    }
}

/// Cauchy probability content of the planar polygon `s·p`. The polygon is
/// fanned into signed triangles from the origin, each of which has a closed
/// form, so the origin may lie anywhere.
pub(crate) fn polygon_content(p: &Polytope, s: f64) -> f64 {
    let total: f64 = planar_edges(p)
        .iter()
        .filter(|e| e.h != 0.0)
        .map(|e| {
            let (pa, pb) = e.angles();
            let (sa, sb) = e.sines();
            let k = 1.0 / (1.0 + (s * e.h).powi(2)).sqrt();
            e.h.signum() * ((pb - pa) - ((k * sb).asin() - (k * sa).asin()))
        })
        .sum();
    (total / (2.0 * PI)).clamp(0.0, 1.0)
}

/// Cauchy probability of the complement of `s·p`:
/// `(2/ω_{d+1}) ∫_{R^d \ p} s^d (1 + s²|y|²)^{-(d+1)/2} dy`.
pub fn cauchy_exterior_mass(p: &Polytope, s: f64) -> Result<Integral> {
    let interior = p.origin_interior();
    match p.dim() {
        1 => {
            let (a, b) = (s * p.vertices()[0][0], s * p.vertices()[1][0]);
            let v = if interior {
                ((1.0 / -a).atan() + (1.0 / b).atan()) / PI
            } else {
                1.0 - (b.atan() - a.atan()) / PI
            };
            Ok(Integral::exact(v))
        }
        2 if interior => {
            let v: f64 = planar_edges(p)
                .iter()
                .map(|e| {
                    let (sa, sb) = e.sines();
                    let k = 1.0 / (1.0 + (s * e.h).powi(2)).sqrt();
                    (k * sb).asin() - (k * sa).asin()
                })
                .sum();
            Ok(Integral::exact(v / (2.0 * PI)))
        }
        2 => Ok(Integral::exact(1.0 - polygon_content(p, s))),
        3 if interior => directional_integral_3d(
            p,
            |r| {
                let x = s * r;
                ((1.0 / x).atan() + x / (1.0 + x * x)) / (2.0 * PI * PI)
            },
            REL_TOL,
        ),
        3 => Err(Error::OriginNotInterior),
        d => Err(Error::Unsupported(format!("Cauchy content of polytopes in R^{d}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(half: f64, theta: f64) -> Polytope {
        let (c, s) = (theta.cos(), theta.sin());
        let v = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]
            .iter()
            .map(|p| vec![half * (c * p[0] - s * p[1]), half * (s * p[0] + c * p[1])])
            .collect();
        Polytope::new(2, v).unwrap()
    }

    fn regular_polygon(m: usize, r: f64) -> Polytope {
        let v = (0..m)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / m as f64 + 0.1;
                vec![r * t.cos(), r * t.sin()]
            })
            .collect();
        Polytope::new(2, v).unwrap()
    }

    #[test]
    fn square_value() {
        let e = exterior_inverse_power_integral(&square(1.0, 0.2), 2).unwrap();
        assert!((e.value - 4.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fine_polygons_approach_the_disc() {
        // a regular m-gon circumscribing the unit circle: every edge is at
        // distance 1 and subtends 2π/m, so E = 2m sin(π/m)
        let m = 2000;
        let p = regular_polygon(m, 1.0 / (PI / m as f64).cos());
        let e = exterior_inverse_power_integral(&p, 2).unwrap().value;
        assert!((e - 2.0 * m as f64 * (PI / m as f64).sin()).abs() < 1e-9);
        assert!((e - 2.0 * PI).abs() < 1e-5);
    }

    #[test]
    fn homogeneous_of_degree_minus_one() {
        let p = square(1.0, 0.3).translated(&[0.2, -0.1]).unwrap();
        let e1 = exterior_inverse_power_integral(&p, 2).unwrap().value;
        let e3 = exterior_inverse_power_integral(&p.scaled(3.0).unwrap(), 2)
            .unwrap()
            .value;
        assert!((e1 / 3.0 - e3).abs() < 1e-12);
    }

    #[test]
    fn requires_interior_origin() {
        let p = square(1.0, 0.2).translated(&[3.0, 0.0]).unwrap();
        assert_eq!(exterior_inverse_power_integral(&p, 2), Err(Error::OriginNotInterior));
    }

    fn rotated(points: &[[f64; 3]]) -> Polytope {
        // a generic rotation keeps the value and separates first coordinates
        let (a, b) = (0.3f64, 0.7f64);
        let v = points
            .iter()
            .map(|p| {
                let (x, y, z) = (p[0], a.cos() * p[1] - a.sin() * p[2], a.sin() * p[1] + a.cos() * p[2]);
                vec![b.cos() * x - b.sin() * y, b.sin() * x + b.cos() * y, z]
            })
            .collect();
        Polytope::new(3, v).unwrap()
    }

    #[test]
    fn cube_matches_mean_curvature_of_octahedron() {
        // ∫_{S^2} 1/ρ_p integrates the support function of the polar, which
        // is the mean curvature integral Σ_e ℓ_e (π - θ_e) / 2
        let mut v = Vec::new();
        for x in [-1.0, 1.0] {
            for y in [-1.0, 1.0] {
                for z in [-1.0, 1.0] {
                    v.push([x, y, z]);
                }
            }
        }
        let e = exterior_inverse_power_integral(&rotated(&v), 3).unwrap();
        let dihedral = (-1.0f64 / 3.0).acos();
        let oracle = 0.5 * 12.0 * 2f64.sqrt() * (PI - dihedral);
        assert!((e.value - oracle).abs() < 1e-10, "{} vs {oracle}", e.value);
        assert!(e.error < 1e-9);
    }

    #[test]
    fn octahedron_matches_mean_curvature_of_cube() {
        let v = [
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        let e = exterior_inverse_power_integral(&rotated(&v), 3).unwrap().value;
        assert!((e - 6.0 * PI).abs() < 1e-10, "{e}");
    }

    #[test]
    fn content_is_complement_of_exterior() {
        let p = square(0.7, 0.4);
        for s in [0.5, 1.0, 10.0] {
            let ext = cauchy_exterior_mass(&p, s).unwrap().value;
            assert!((ext + polygon_content(&p, s) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn content_of_off_center_polygon() {
        // [0,1]^2 against a product-free check: its content equals the
        // content of the positive quadrant minus three unbounded pieces, so
        // compare with a fine Riemann sum of the density instead
        let p = Polytope::new(
            2,
            vec![
                vec![0.0, 0.0],
                vec![1.0, 1e-9],
                vec![1e-9 * 2.0, 1.0],
                vec![1.0 + 1e-9, 1.0],
            ],
        )
        .unwrap();
        let k = 1000;
        let h = 1.0 / k as f64;
        let mut sum = 0.0;
        for i in 0..k {
            for j in 0..k {
                let (x, y) = ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
                sum += (1.0 + x * x + y * y).powf(-1.5) / (2.0 * PI) * h * h;
            }
        }
        assert!((polygon_content(&p, 1.0) - sum).abs() < 1e-6);
    }
}
