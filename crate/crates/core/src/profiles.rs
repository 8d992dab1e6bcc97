//! Tangent-plane charts of cones: the frame `I_v`, the map `O_v`, profiles
//! `C ∩ Tan_v` and the rescaled, boundedness-conditioned profiles `P_n*`
//! (seen from the south pole) and `Q_n*` (seen from a uniform interior
//! direction).

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::cone::{chart_constraints, extreme_rays, polar_vertices};
use crate::geom::linalg::{self, dot, Reflection};
use crate::geom::{contains, PolyhedralCone, Polytope, UnitVector, SIGN_EPS};
use crate::samplers::{sample_s_minus_e, sample_schlaefli_cone, sample_uniform_in_cell, ConeKind};

/// Orthonormal frame of the tangent plane at `base`, built from the
/// Householder reflection `O_v` that swaps `base` and the south pole `-e`.
#[derive(Debug, Clone)]
pub struct TangentFrame {
    base: UnitVector,
    reflection: Reflection,
    basis: Vec<Vec<f64>>,
}

impl TangentFrame {
    pub fn new(base: &UnitVector) -> Self {
        let reflection = Reflection::to_south_pole(base);
        let basis = reflection.tangent_basis();
        Self {
            base: base.clone(),
            reflection,
            basis,
        }
    }

    pub fn base(&self) -> &UnitVector {
        &self.base
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// `I_v`: coordinates of a point of the tangent plane `v + v^⊥`.
    pub fn coords(&self, x: &[f64]) -> Vec<f64> {
        let rel = linalg::sub(x, &self.base);
        self.basis.iter().map(|b| dot(&rel, b)).collect()
    }

    /// Inverse of [`coords`](Self::coords).
    pub fn point(&self, y: &[f64]) -> Vec<f64> {
        let mut x = self.base.to_vec();
        for (yj, b) in y.iter().zip(&self.basis) {
            for (xc, bc) in x.iter_mut().zip(b) {
                *xc += yj * bc;
            }
        }
        x
    }

    /// `O_v x`; maps the base point to `-e`.
    pub fn rotate(&self, x: &[f64]) -> Vec<f64> {
        self.reflection.apply(x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ProfileShape {
    Bounded { polytope: Polytope },
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub source_kind: Option<ConeKind>,
    #[serde(flatten)]
    pub shape: ProfileShape,
    pub scale: f64,
}

impl Profile {
    pub fn polytope(&self) -> Option<&Polytope> {
        match &self.shape {
            ProfileShape::Bounded { polytope } => Some(polytope),
            ProfileShape::Unbounded => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.polytope().is_some()
    }
}

/// `scale · I_v(cone ∩ Tan_v)`, computed by dualizing the hull of the
/// constraint points of the section (works for any number of hyperplanes).
pub fn profile(cone: &PolyhedralCone, v: &UnitVector, scale: f64) -> Result<Profile> {
    let unbounded = Profile {
        source_kind: None,
        shape: ProfileShape::Unbounded,
        scale,
    };
    if !contains(cone, v)? {
        return Err(Error::NotInterior);
    }
    if cone.slacks(v).any(|s| s <= SIGN_EPS) {
        return Ok(unbounded);
    }
    let dim = cone.ambient_dim();
    let frame = TangentFrame::new(v);
    let points = chart_constraints(cone, v, frame.basis());
    let vertices = match polar_vertices(&points, dim - 1) {
        Ok(v) => v,
        Err(Error::OriginNotInterior) => return Ok(unbounded),
        Err(e) => return Err(e),
    };
    let verts: Vec<Vec<f64>> = vertices.into_iter().map(|(z, _)| linalg::scale(&z, scale)).collect();
    Ok(Profile {
        source_kind: None,
        shape: ProfileShape::Bounded {
            polytope: Polytope::new(dim - 1, verts)?,
        },
        scale,
    })
}

/// The same profile from the extreme rays: bounded iff every ray makes an
/// acute angle with `v`, and then the vertices are the scaled images of
/// `r / <r, v>`.
pub fn profile_from_rays(cone: &PolyhedralCone, v: &UnitVector, scale: f64) -> Result<Profile> {
    let unbounded = Profile {
        source_kind: None,
        shape: ProfileShape::Unbounded,
        scale,
    };
    let rays = match extreme_rays(cone) {
        Ok(r) => r,
        Err(Error::NotPointed) => return Ok(unbounded),
        Err(e) => return Err(e),
    };
    if rays.iter().any(|r| dot(&r.direction, v) <= SIGN_EPS) {
        return Ok(unbounded);
    }
    let frame = TangentFrame::new(v);
    let verts: Vec<Vec<f64>> = rays
        .iter()
        .map(|r| {
            let x = linalg::scale(&r.direction, 1.0 / dot(&r.direction, v));
            linalg::scale(&frame.coords(&x), scale)
        })
        .collect();
    Ok(Profile {
        source_kind: None,
        shape: ProfileShape::Bounded {
            polytope: Polytope::new(cone.ambient_dim() - 1, verts)?,
        },
        scale,
    })
}

/// A profile drawn conditionally on being bounded.
#[derive(Debug, Clone)]
pub struct ProfileSample {
    pub polytope: Polytope,
    /// Cones drawn until a bounded profile appeared (at least 1).
    pub trials: u64,
}

const PROFILE_TRIAL_CAP: u64 = 1_000_000;

fn conditioned(mut draw: impl FnMut() -> Result<Profile>) -> Result<ProfileSample> {
    for trials in 1..=PROFILE_TRIAL_CAP {
        let p = draw()?;
        if let ProfileShape::Bounded { polytope } = p.shape {
            return Ok(ProfileSample { polytope, trials });
        }
    }
    Err(Error::IterationCap(PROFILE_TRIAL_CAP))
}

/// `P_n*`: `n · I_{-e}(S_n^{-e} ∩ Tan_{-e})` conditioned on boundedness.
pub fn sample_pn_star<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<ProfileSample> {
    let south = UnitVector::south_pole(d + 1);
    conditioned(|| {
        let s = sample_s_minus_e(n, d, rng)?;
        let mut p = profile(&s.cone, &south, n as f64)?;
        p.source_kind = Some(ConeKind::SMinusE);
        Ok(p)
    })
}

/// `Q_n*`: `n · I_u(S_n ∩ Tan_u)` with `u` uniform in `S_n ∩ S^d`,
/// conditioned on boundedness.
pub fn sample_qn_star<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<ProfileSample> {
    conditioned(|| {
        let s = sample_schlaefli_cone(n, d, rng)?;
        let u = sample_uniform_in_cell(&s.cone, rng)?;
        let mut p = profile(&s.cone, &u, n as f64)?;
        p.source_kind = Some(ConeKind::Schlaefli);
        Ok(p)
    })
}

/// `Q_n*` through the rotated cone: `n · I_{-e}(O_u S_n ∩ Tan_{-e})`, with
/// the profile read off the extreme rays instead of the polar hull.
pub fn sample_qn_star_rotated<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<ProfileSample> {
    let south = UnitVector::south_pole(d + 1);
    conditioned(|| {
        let s = sample_schlaefli_cone(n, d, rng)?;
        let u = sample_uniform_in_cell(&s.cone, rng)?;
        let frame = TangentFrame::new(&u);
        let rotated = s.cone.with_rays()?.transformed(|x| frame.rotate(x));
        let mut p = profile_from_rays(&rotated, &south, n as f64)?;
        p.source_kind = Some(ConeKind::Schlaefli);
        Ok(p)
    })
}
