use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::points::{sample_half_sphere, sample_uniform_sphere};
use crate::arrangement::{enumerate_cones, schlaefli_count};
use crate::error::{Error, Result};
use crate::geom::cone::extreme_rays;
use crate::geom::linalg::{self, dot, generalized_cross, least_norm_solve};
use crate::geom::{polar_cone, LinearHyperplane, PolyhedralCone, SignVector, UnitVector, SIGN_EPS, SUBSET_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeKind {
    Schlaefli,
    CoverEfron,
    RN,
    SMinusE,
}

/// A random cone together with the random vectors that generated it.
#[derive(Debug, Clone)]
pub struct ConeSample {
    pub cone: PolyhedralCone,
    /// Hyperplane normals for `Schlaefli`/`SMinusE`, points for
    /// `CoverEfron`/`RN`.
    pub generators: Vec<UnitVector>,
    pub kind: ConeKind,
    /// Number of attempts used by rejection steps (1 when none apply).
    pub trials: u64,
}

/// Arrangements with at most this many hyperplanes are enumerated in full
/// when a uniform cell is needed.
pub const ENUMERATION_LIMIT: usize = 32;

const CORNER_CAP: u64 = 1_000_000;
const NON_GENERIC_RETRIES: usize = 3;

/// `n` iid hyperplanes with uniform normals on `S^d`.
pub fn sample_hyperplanes<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Vec<LinearHyperplane> {
    (0..n)
        .map(|_| LinearHyperplane::new(sample_uniform_sphere(d, rng)))
        .collect()
}

fn retry_non_generic<T>(mut f: impl FnMut() -> Result<T>) -> Result<T> {
    let mut last = None;
    for _ in 0..NON_GENERIC_RETRIES {
        match f() {
            Err(Error::NonGeneric(m)) => last = Some(m),
            other => return other,
        }
    }
    Err(Error::NonGeneric(last.unwrap_or_default()))
}

/// Uniform cell of a fixed arrangement, by full enumeration.
pub fn uniform_cell_by_enumeration<R: Rng + ?Sized>(
    hyperplanes: &[LinearHyperplane],
    rng: &mut R,
) -> Result<PolyhedralCone> {
    let arr = enumerate_cones(hyperplanes.to_vec())?;
    let k = rng.random_range(0..arr.cells.len());
    Ok(arr.cells.into_iter().nth(k).expect("index in range"))
}

/// Uniform cell of a fixed arrangement without enumerating it.
///
/// A (ray, cell) incidence is drawn uniformly: a `d`-subset of hyperplanes
/// fixes a line, a coin picks one of its two rays and `d` more coins pick one
/// of the `2^d` cells around that ray. Accepting with probability
/// `(d+1)/f_0(cell)` turns the incidence-biased cell into a uniform one.
/// Requires `n >= d+1` so that every cell is pointed.
pub fn uniform_cell_by_corners<R: Rng + ?Sized>(
    hyperplanes: &[LinearHyperplane],
    rng: &mut R,
) -> Result<(PolyhedralCone, u64)> {
    let n = hyperplanes.len();
    let dim = hyperplanes[0].dim();
    let d = dim - 1;
    if n < dim {
        return Err(Error::NotPointed);
    }
    for trial in 1..=CORNER_CAP {
        let mut subset = index::sample(rng, n, d).into_vec();
        subset.sort_unstable();
        let rows: Vec<&[f64]> = subset.iter().map(|&i| hyperplanes[i].normal.as_slice()).collect();
        let line = generalized_cross(&rows);
        let len = linalg::norm(&line);
        if len <= SIGN_EPS {
            return Err(Error::NonGeneric("dependent hyperplane normals".into()));
        }
        let flip = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let ray = linalg::scale(&line, flip / len);
        let corner: Vec<f64> = (0..d).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
        let mut signs = vec![0i8; n];
        let mut margin = f64::INFINITY;
        let mut at = 0;
        for (k, h) in hyperplanes.iter().enumerate() {
            if at < d && subset[at] == k {
                signs[k] = corner[at] as i8;
                at += 1;
                continue;
            }
            let v = h.eval(&ray);
            if v.abs() <= SIGN_EPS {
                return Err(Error::NonGeneric("ray lies on an extra hyperplane".into()));
            }
            signs[k] = if v > 0.0 { 1 } else { -1 };
            margin = margin.min(v.abs());
        }
        let t =
            least_norm_solve(&rows, &corner).ok_or_else(|| Error::NonGeneric("dependent hyperplane normals".into()))?;
        let delta = margin / (2.0 * linalg::norm(&t));
        let witness = UnitVector::normalize(&linalg::axpy(&ray, delta, &t))?;
        let cone = PolyhedralCone::with_interior_point(hyperplanes.to_vec(), SignVector::new(signs)?, witness)
            .map_err(|e| match e {
                Error::NotInterior => Error::NonGeneric("corner witness too close to a hyperplane".into()),
                other => other,
            })?
            .with_rays()?;
        let f0 = cone.cached_rays().map_or(0, |r| r.len());
        if rng.random::<f64>() * (f0 as f64) < dim as f64 {
            return Ok((cone, trial));
        }
    }
    Err(Error::IterationCap(CORNER_CAP))
}

/// A uniformly chosen cell of `n` iid uniform hyperplanes in `R^{d+1}`.
pub fn sample_schlaefli_cone<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<ConeSample> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and d >= 1".into()));
    }
    retry_non_generic(|| {
        let hyperplanes = sample_hyperplanes(n, d, rng);
        let (cone, trials) = if n <= ENUMERATION_LIMIT || n < d + 1 {
            (uniform_cell_by_enumeration(&hyperplanes, rng)?, 1)
        } else {
            uniform_cell_by_corners(&hyperplanes, rng)?
        };
        Ok(ConeSample {
            cone,
            generators: hyperplanes.into_iter().map(|h| h.normal).collect(),
            kind: ConeKind::Schlaefli,
            trials,
        })
    })
}

/// The cone `{y : <x_i, y> <= 0}` when it has interior points, else `None`
/// (that is, when the positive hull of the `x_i` is the whole space).
fn open_polar(points: &[UnitVector]) -> Result<Option<PolyhedralCone>> {
    let n = points.len();
    let dim = points[0].dim();
    let hyperplanes: Vec<LinearHyperplane> = points.iter().cloned().map(LinearHyperplane::new).collect();
    let signs = SignVector::new(vec![-1; n])?;
    if n < dim {
        let rows: Vec<&[f64]> = points.iter().map(|p| p.as_slice()).collect();
        let y = least_norm_solve(&rows, &vec![-1.0; n]).ok_or_else(|| Error::NonGeneric("dependent points".into()))?;
        let y = UnitVector::normalize(&y)?;
        return PolyhedralCone::with_interior_point(hyperplanes, signs, y).map(Some);
    }
    if n > SUBSET_LIMIT {
        return Err(Error::Unsupported(format!(
            "positive-hull test for {n} > {SUBSET_LIMIT} points"
        )));
    }
    match PolyhedralCone::new(hyperplanes, signs) {
        Ok(c) => Ok(Some(c)),
        Err(Error::EmptyCell) => Ok(None),
        Err(e) => Err(e),
    }
}

/// One draw of `n` uniform points: `true` iff their positive hull is not
/// the whole space.
pub fn cover_efron_trial<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<bool> {
    retry_non_generic(|| {
        let pts: Vec<UnitVector> = (0..n).map(|_| sample_uniform_sphere(d, rng)).collect();
        Ok(open_polar(&pts)?.is_some())
    })
}

const EXPECTED_TRIAL_LIMIT: f64 = 1e6;

/// Positive hull of `n` uniform points conditioned on not being the whole
/// space, by rejection. Needs `n >= d+1` for a full-dimensional cone.
pub fn sample_cover_efron<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<ConeSample> {
    let dim = d + 1;
    if n < dim {
        return Err(Error::LowerDimensional { n, required: dim });
    }
    let accept = schlaefli_count(n as u64, dim as u64) as f64 / 2f64.powi(n as i32);
    if 1.0 / accept > EXPECTED_TRIAL_LIMIT {
        return Err(Error::IterationCap(EXPECTED_TRIAL_LIMIT as u64));
    }
    let cap = (100.0 * EXPECTED_TRIAL_LIMIT) as u64;
    retry_non_generic(|| {
        for trial in 1..=cap {
            let pts: Vec<UnitVector> = (0..n).map(|_| sample_uniform_sphere(d, rng)).collect();
            if let Some(polar) = open_polar(&pts)? {
                return Ok(ConeSample {
                    cone: polar_cone(&polar)?,
                    generators: pts,
                    kind: ConeKind::CoverEfron,
                    trials: trial,
                });
            }
        }
        Err(Error::IterationCap(cap))
    })
}

/// Positive hull of `n` uniform points on the upper half-sphere.
pub fn sample_r_n<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<ConeSample> {
    let dim = d + 1;
    if n < dim {
        return Err(Error::LowerDimensional { n, required: dim });
    }
    retry_non_generic(|| {
        let pts: Vec<UnitVector> = (0..n).map(|_| sample_half_sphere(d, rng)).collect();
        let hyperplanes: Vec<LinearHyperplane> = pts.iter().cloned().map(LinearHyperplane::new).collect();
        let polar = PolyhedralCone::with_interior_point(
            hyperplanes,
            SignVector::new(vec![-1; n])?,
            UnitVector::south_pole(dim),
        )
        .map_err(|_| Error::NonGeneric("point on the equator".into()))?
        .with_rays()?;
        Ok(ConeSample {
            cone: polar_cone(&polar)?,
            generators: pts,
            kind: ConeKind::RN,
            trials: 1,
        })
    })
}

/// The cell of `n` uniform hyperplanes that contains the south pole.
/// Extreme rays are not computed here.
pub fn sample_s_minus_e<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<ConeSample> {
    let dim = d + 1;
    let south = UnitVector::south_pole(dim);
    retry_non_generic(|| {
        let hyperplanes = sample_hyperplanes(n, d, rng);
        let signs = SignVector::of_point(&hyperplanes, &south)?;
        let cone = PolyhedralCone::with_interior_point(hyperplanes.clone(), signs, south.clone())
            .map_err(|_| Error::NonGeneric("south pole near a hyperplane".into()))?;
        Ok(ConeSample {
            cone,
            generators: hyperplanes.into_iter().map(|h| h.normal).collect(),
            kind: ConeKind::SMinusE,
            trials: 1,
        })
    })
}

/// Checks that the recorded generators reproduce the cone.
pub fn consistent_with_generators(sample: &ConeSample) -> Result<bool> {
    let x = sample.cone.interior_point();
    match sample.kind {
        ConeKind::Schlaefli | ConeKind::SMinusE => Ok(sample
            .generators
            .iter()
            .zip(sample.cone.cell().as_slice())
            .all(|(u, &s)| s as f64 * dot(u, x) > 0.0)),
        ConeKind::CoverEfron | ConeKind::RN => {
            // every generator lies in the cone and the cone's rays are generators
            let rays = extreme_rays(&sample.cone)?;
            let gens_inside = sample
                .generators
                .iter()
                .all(|g| sample.cone.slacks(g).all(|v| v >= -1e-9));
            let rays_are_gens = rays.iter().all(|r| {
                sample
                    .generators
                    .iter()
                    .any(|g| linalg::distance(g, &r.direction) < 1e-9)
            });
            Ok(gens_inside && rays_are_gens)
        }
    }
}
