use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::hull::hull_3d;
use crate::geom::linalg::{add, dot, norm, scale, sub};
use crate::geom::polytope::cross3;
use crate::geom::Polytope;

/// A numerical value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

impl Integral {
    pub fn exact(value: f64) -> Self {
        Self { value, error: 0.0 }
    }
}

const LOW: usize = 8;
const HIGH: usize = 16;
const MAX_DEPTH: u32 = 12;

fn rule(n: usize) -> &'static [(f64, f64)] {
    static LO: OnceLock<GaussLegendre> = OnceLock::new();
    static HI: OnceLock<GaussLegendre> = OnceLock::new();
    let cell = if n == LOW { &LO } else { &HI };
    cell.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(n).unwrap()))
        .as_node_weight_pairs()
}

/// Gauss-Legendre on `[a, b]` with `n` nodes.
pub(crate) fn gauss_legendre(n: usize, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    GaussLegendre::new(NonZeroUsize::new(n).expect("positive degree")).integrate(a, b, f)
}

/// Tensor rule on the triangle `(a, b, c)` through the collapsed square
/// `x = a + s(b - a) + st(c - b)`.
fn triangle_rule(n: usize, a: &[f64], b: &[f64], c: &[f64], f: &impl Fn(&[f64]) -> f64) -> f64 {
    let ab = sub(b, a);
    let bc = sub(c, b);
    let area2 = norm(&cross3(&ab, &bc));
    let nodes = rule(n);
    let mut total = 0.0;
    for &(xs, ws) in nodes {
        let s = 0.5 * (xs + 1.0);
        for &(xt, wt) in nodes {
            let t = 0.5 * (xt + 1.0);
            let p = add(&add(a, &scale(&ab, s)), &scale(&bc, s * t));
            total += 0.25 * ws * wt * s * f(&p);
        }
    }
    total * area2
}

fn adaptive_triangle(a: &[f64], b: &[f64], c: &[f64], f: &impl Fn(&[f64]) -> f64, tol: f64, depth: u32) -> Integral {
    let coarse = triangle_rule(LOW, a, b, c, f);
    let fine = triangle_rule(HIGH, a, b, c, f);
    let err = (fine - coarse).abs();
    if err <= tol || depth >= MAX_DEPTH {
        return Integral {
            value: fine,
            error: err,
        };
    }
    let mid = |p: &[f64], q: &[f64]| scale(&add(p, q), 0.5);
    let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
    let parts = [
        adaptive_triangle(a, &ab, &ca, f, tol / 4.0, depth + 1),
        adaptive_triangle(&ab, b, &bc, f, tol / 4.0, depth + 1),
        adaptive_triangle(&ca, &bc, c, f, tol / 4.0, depth + 1),
        adaptive_triangle(&ab, &bc, &ca, f, tol / 4.0, depth + 1),
    ];
    parts.iter().fold(Integral::exact(0.0), |acc, p| Integral {
        value: acc.value + p.value,
        error: acc.error + p.error,
    })
}

/// `∫_{S^2} g(ρ_p(u)) dσ(u)` for a polytope in `R^3` with the origin in its
/// interior, where `ρ_p` is the radial function. Each boundary triangle at
/// distance `h` contributes `h ∫_T g(|x|) |x|^{-3} dA`.
pub fn directional_integral_3d(p: &Polytope, g: impl Fn(f64) -> f64, rel_tol: f64) -> Result<Integral> {
    if p.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: p.dim(),
        });
    }
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let v = p.vertices();
    let hull = hull_3d(v)?;
    // a first pass fixes the absolute tolerance
    let rough: f64 = hull
        .faces
        .iter()
        .map(|f| {
            face_integral(&v[f[0]], &v[f[1]], &v[f[2]], &g, f64::INFINITY)
                .value
                .abs()
        })
        .sum();
    let tol = rel_tol * rough.max(f64::MIN_POSITIVE) / hull.faces.len() as f64;
    let mut out = Integral::exact(0.0);
    for f in &hull.faces {
        let r = face_integral(&v[f[0]], &v[f[1]], &v[f[2]], &g, tol);
        out.value += r.value;
        out.error += r.error;
    }
    Ok(out)
}

fn face_integral(a: &[f64], b: &[f64], c: &[f64], g: &impl Fn(f64) -> f64, tol: f64) -> Integral {
    let n = cross3(&sub(b, a), &sub(c, a));
    let h = dot(&n, a) / norm(&n);
    let f = |x: &[f64]| {
        let r = norm(x);
        g(r) / (r * r * r)
    };
    let r = adaptive_triangle(a, b, c, &f, tol / h, 0);
    Integral {
        value: h * r.value,
        error: h * r.error,
    }
}
