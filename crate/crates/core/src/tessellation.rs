//! Stationary isotropic Poisson hyperplane tessellations in `R^d`
//! (`d` = 2 or 3): the hyperplane process in a ball, the zero cell, and
//! typical cells by windowing or by reweighting the zero cell.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::cone::{for_each_subset, polar_vertices};
use crate::geom::linalg::{self, dot, least_norm_solve};
use crate::geom::{Polytope, UnitVector};
use crate::samplers::sample_uniform_sphere;

pub use crate::densities::constants::intensity_gamma;

/// The hyperplane `{x : <direction, x> = distance}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineHyperplane {
    pub direction: UnitVector,
    pub distance: f64,
}

impl AffineHyperplane {
    pub fn new(direction: UnitVector, distance: f64) -> Result<Self> {
        if !(distance >= 0.0) {
            return Err(Error::InvalidArgument(format!("negative distance {distance}")));
        }
        Ok(Self { direction, distance })
    }

    /// `<direction, x> - distance`
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.direction, x) - self.distance
    }
}

/// The restriction of the process to hyperplanes meeting `B(0, R)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HyperplaneProcessSample {
    pub dim: usize,
    pub intensity: f64,
    pub window_radius: f64,
    pub hyperplanes: Vec<AffineHyperplane>,
}

fn check_dim(d: usize) -> Result<()> {
    if (2..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("tessellations in R^{d}")))
    }
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let p = Poisson::new(mean).expect("positive mean");
    p.sample(rng) as u64
}

/// Hyperplanes with uniform directions and distances uniform on `(lo, hi]`;
/// their number is Poisson with mean `2γ(hi - lo)`.
fn sample_shell<R: Rng + ?Sized>(d: usize, gamma: f64, lo: f64, hi: f64, rng: &mut R) -> Vec<AffineHyperplane> {
    let k = poisson_count(2.0 * gamma * (hi - lo), rng);
    (0..k)
        .map(|_| {
            let direction = sample_uniform_sphere(d - 1, rng);
            let distance = lo + (hi - lo) * rng.random::<f64>();
            AffineHyperplane { direction, distance }
        })
        .collect()
}

pub fn sample_pht<R: Rng + ?Sized>(d: usize, gamma: f64, radius: f64, rng: &mut R) -> Result<HyperplaneProcessSample> {
    if d < 1 || !(radius > 0.0) || !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need d >= 1, gamma > 0, R > 0 (got {d}, {gamma}, {radius})"
        )));
    }
    Ok(HyperplaneProcessSample {
        dim: d,
        intensity: gamma,
        window_radius: radius,
        hyperplanes: sample_shell(d, gamma, 0.0, radius, rng),
    })
}

/// Vertices of `{x : <a_i, x> <= b_i}` when it is bounded, `None` otherwise.
/// `center` must satisfy every inequality strictly.
fn bounded_section(rows: &[(Vec<f64>, f64)], center: &[f64]) -> Result<Option<Vec<Vec<f64>>>> {
    let d = center.len();
    let points: Vec<Vec<f64>> = rows
        .iter()
        .map(|(a, b)| linalg::scale(a, 1.0 / (b - dot(a, center))))
        .collect();
    match polar_vertices(&points, d) {
        Ok(v) => Ok(Some(v.into_iter().map(|(z, _)| linalg::add(&z, center)).collect())),
        Err(Error::OriginNotInterior) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The zero cell together with the hyperplanes used to build it.
#[derive(Debug, Clone)]
pub struct ZeroCell {
    pub polytope: Polytope,
    pub process: HyperplaneProcessSample,
}

const MAX_DOUBLINGS: u32 = 20;

/// Exact sampler of the cell containing the origin. Hyperplanes are added
/// in shells of doubling radius until the cell fits inside the current
/// ball; hyperplanes farther out cannot touch it.
pub fn sample_zero_cell<R: Rng + ?Sized>(d: usize, gamma: f64, rng: &mut R) -> Result<ZeroCell> {
    check_dim(d)?;
    let mut radius = 2.0 / gamma;
    let mut planes = sample_shell(d, gamma, 0.0, radius, rng);
    for _ in 0..=MAX_DOUBLINGS {
        let rows: Vec<(Vec<f64>, f64)> = planes.iter().map(|h| (h.direction.to_vec(), h.distance)).collect();
        if rows.len() > d {
            if let Some(verts) = bounded_section(&rows, &vec![0.0; d])? {
                if verts.iter().all(|v| linalg::norm(v) <= radius) {
                    return Ok(ZeroCell {
                        polytope: Polytope::new(d, verts)?,
                        process: HyperplaneProcessSample {
                            dim: d,
                            intensity: gamma,
                            window_radius: radius,
                            hyperplanes: planes,
                        },
                    });
                }
            }
        }
        planes.extend(sample_shell(d, gamma, radius, 2.0 * radius, rng));
        radius *= 2.0;
    }
    Err(Error::IterationCap(MAX_DOUBLINGS as u64))
}

/// A polytope carrying an importance weight.
#[derive(Debug, Clone)]
pub struct WeightedPolytope {
    pub polytope: Polytope,
    pub weight: f64,
}

/// Zero cell with weight `1/vol`: expectations under the typical-cell law
/// are `E[h w] / E[w]`.
pub fn sample_typical_importance<R: Rng + ?Sized>(d: usize, gamma: f64, rng: &mut R) -> Result<WeightedPolytope> {
    let z = sample_zero_cell(d, gamma, rng)?;
    let vol = z.polytope.volume();
    if !(vol > 0.0) {
        return Err(Error::ZeroVolume);
    }
    Ok(WeightedPolytope {
        weight: 1.0 / vol,
        polytope: z.polytope,
    })
}

/// Draws `k` members of a weighted pool with probability proportional to
/// weight (with replacement).
pub fn resample_weighted<R: Rng + ?Sized>(pool: &[WeightedPolytope], k: usize, rng: &mut R) -> Vec<Polytope> {
    let mut cumulative = Vec::with_capacity(pool.len());
    let mut total = 0.0;
    for w in pool {
        total += w.weight;
        cumulative.push(total);
    }
    (0..k)
        .map(|_| {
            let t = rng.random::<f64>() * total;
            let i = cumulative.partition_point(|&c| c < t).min(pool.len() - 1);
            pool[i].polytope.clone()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub polytope: Polytope,
    /// No facet lies on the window boundary.
    pub complete: bool,
}

/// Every cell of the tessellation that lies entirely inside the window,
/// found from the corners at each vertex inside the window.
pub fn window_cells(process: &HyperplaneProcessSample) -> Result<Vec<Cell>> {
    let d = process.dim;
    check_dim(d)?;
    let planes = &process.hyperplanes;
    let radius = process.window_radius;
    let mut seen: HashSet<Vec<i8>> = HashSet::new();
    let mut cells = Vec::new();
    for_each_subset(planes.len(), d, |subset| {
        let rows: Vec<&[f64]> = subset.iter().map(|&i| planes[i].direction.as_slice()).collect();
        let rhs: Vec<f64> = subset.iter().map(|&i| planes[i].distance).collect();
        let Some(vertex) = linalg::solve(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), &rhs) else {
            return Ok(());
        };
        if linalg::norm(&vertex) >= radius {
            return Ok(());
        }
        let margin = planes
            .iter()
            .enumerate()
            .filter(|(i, _)| !subset.contains(i))
            .map(|(_, h)| h.eval(&vertex).abs())
            .fold(f64::INFINITY, f64::min);
        for mask in 0..1u32 << d {
            let corner: Vec<f64> = (0..d).map(|b| if mask & (1 << b) != 0 { 1.0 } else { -1.0 }).collect();
            let Some(t) = least_norm_solve(&rows, &corner) else {
                continue;
            };
            let step = if margin.is_finite() {
                margin / (2.0 * linalg::norm(&t))
            } else {
                1.0
            };
            let witness = linalg::axpy(&vertex, step, &t);
            let signs: Vec<i8> = planes
                .iter()
                .map(|h| if h.eval(&witness) > 0.0 { 1 } else { -1 })
                .collect();
            if !seen.insert(signs.clone()) {
                continue;
            }
            let halfspaces: Vec<(Vec<f64>, f64)> = planes
                .iter()
                .zip(&signs)
                .map(|(h, &s)| {
                    let s = -(s as f64);
                    (linalg::scale(&h.direction, s), s * h.distance)
                })
                .collect();
            if let Some(verts) = bounded_section(&halfspaces, &witness)? {
                let complete = verts.iter().all(|v| linalg::norm(v) < radius);
                if complete {
                    cells.push(Cell {
                        polytope: Polytope::new(d, verts)?,
                        complete,
                    });
                }
            }
        }
        Ok(())
    })?;
    cells.sort_by(|a, b| {
        a.polytope.vertices()[0]
            .partial_cmp(&b.polytope.vertices()[0])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(cells)
}

/// Uniform point of a polytope by rejection from its bounding box.
pub fn uniform_point_in<R: Rng + ?Sized>(p: &Polytope, rng: &mut R) -> Vec<f64> {
    let d = p.dim();
    let lo: Vec<f64> = (0..d)
        .map(|k| p.vertices().iter().map(|v| v[k]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..d)
        .map(|k| p.vertices().iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    loop {
        let x: Vec<f64> = (0..d).map(|k| lo[k] + (hi[k] - lo[k]) * rng.random::<f64>()).collect();
        if p.contains(&x, 0.0) {
            return x;
        }
    }
}

const WINDOW_RETRIES: usize = 1000;

/// Typical cell by the window method: a uniformly chosen complete cell of
/// the process in `B(0, R)`, recentred at a uniform interior point.
pub fn sample_typical_window<R: Rng + ?Sized>(d: usize, gamma: f64, radius: f64, rng: &mut R) -> Result<Polytope> {
    check_dim(d)?;
    for _ in 0..WINDOW_RETRIES {
        let process = sample_pht(d, gamma, radius, rng)?;
        let cells = window_cells(&process)?;
        if cells.is_empty() {
            continue;
        }
        let k = rng.random_range(0..cells.len());
        let p = &cells[k].polytope;
        let c = uniform_point_in(p, rng);
        return p.translated(&linalg::scale(&c, -1.0));
    }
    Err(Error::EmptyWindow)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypicalMethod {
    Window,
    Importance,
}

/// Typical cell sampler for either method. For `Importance` the returned
/// weight is `1/vol`; for `Window` it is 1.
pub fn sample_typical_cell<R: Rng + ?Sized>(
    d: usize,
    gamma: f64,
    radius: f64,
    method: TypicalMethod,
    rng: &mut R,
) -> Result<WeightedPolytope> {
    match method {
        TypicalMethod::Importance => sample_typical_importance(d, gamma, rng),
        TypicalMethod::Window => Ok(WeightedPolytope {
            polytope: sample_typical_window(d, gamma, radius, rng)?,
            weight: 1.0,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellFeatures {
    pub volume: f64,
    pub f_vector: Vec<usize>,
    pub inradius: f64,
    pub diameter: f64,
}

impl CellFeatures {
    /// `(volume, f_0, inradius, diameter)` as used by two-sample tests.
    pub fn vector(&self) -> Vec<f64> {
        vec![self.volume, self.f_vector[0] as f64, self.inradius, self.diameter]
    }
}

pub fn cell_features(p: &Polytope) -> CellFeatures {
    CellFeatures {
        volume: p.volume(),
        f_vector: p.f_vector(),
        inradius: inradius(p),
        diameter: p.diameter(),
    }
}

/// Radius of the largest inscribed ball: the optimum of the linear program
/// `max r s.t. <n_i, x> + r <= h_i`, found by checking every basic solution
/// with `d+1` tight facets.
pub fn inradius(p: &Polytope) -> f64 {
    let facets = p.facets();
    let d = p.dim();
    let mut best: f64 = 0.0;
    let _ = for_each_subset(facets.len(), d + 1, |subset| {
        let a: Vec<Vec<f64>> = subset
            .iter()
            .map(|&i| {
                let mut row = facets[i].normal.clone();
                row.push(1.0);
                row
            })
            .collect();
        let b: Vec<f64> = subset.iter().map(|&i| facets[i].offset).collect();
        if let Some(sol) = linalg::solve(&a, &b) {
            let r = sol[d];
            let x = &sol[..d];
            if r > best
                && facets
                    .iter()
                    .all(|f| dot(&f.normal, x) + r <= f.offset + 1e-12 * (1.0 + f.offset.abs()))
            {
                best = r;
            }
        }
        Ok(())
    });
    best
}

/// `k` distinct uniformly chosen indices below `n`, in increasing order.
pub fn choose_indices<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut v = index::sample(rng, n, k.min(n)).into_vec();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::constants::c_d;
    use crate::samplers::RngStream;

    #[test]
    fn gamma_values() {
        assert!((intensity_gamma(2) - 0.5).abs() < 1e-15);
        assert!((intensity_gamma(1) - 1.0 / std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn mean_hyperplane_count() {
        let mut rng = RngStream::new(31, 0);
        let reps = 4000;
        let total: usize = (0..reps)
            .map(|_| sample_pht(2, 0.5, 10.0, &mut rng).unwrap().hyperplanes.len())
            .sum();
        let mean = total as f64 / reps as f64;
        assert!((mean - 10.0).abs() < 4.0 * (10.0 / reps as f64).sqrt());
    }

    #[test]
    fn zero_cell_contains_origin() {
        let mut rng = RngStream::new(32, 0);
        for d in [2, 3] {
            for _ in 0..100 {
                let z = sample_zero_cell(d, intensity_gamma(d as u32), &mut rng).unwrap();
                assert!(z.polytope.origin_interior());
            }
        }
    }

    #[test]
    fn importance_identity_for_mean_area() {
        // E[1/vol(Z_0)] = 1/E vol(Z) = 1/c_2
        let mut rng = RngStream::new(33, 0);
        let reps = 20_000;
        let ws: Vec<f64> = (0..reps)
            .map(|_| sample_typical_importance(2, 0.5, &mut rng).unwrap().weight)
            .collect();
        let mean = ws.iter().sum::<f64>() / reps as f64;
        let var = ws.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (reps as f64 - 1.0);
        let se = (var / reps as f64).sqrt();
        assert!((mean * c_d(2) - 1.0).abs() < 4.0 * se * c_d(2), "{mean}");
    }

    fn square() -> Polytope {
        let a: f64 = 0.3;
        let (c, s) = (a.cos(), a.sin());
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
            .iter()
            .map(|p| vec![c * p[0] - s * p[1], s * p[0] + c * p[1]])
            .collect();
        Polytope::new(2, pts).unwrap()
    }

    #[test]
    fn unit_square_features() {
        let f = cell_features(&square());
        assert!((f.volume - 1.0).abs() < 1e-12);
        assert_eq!(f.f_vector, vec![4, 4]);
        assert!((f.inradius - 0.5).abs() < 1e-12);
        assert!((f.diameter - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn triangle_inradius() {
        let t = Polytope::new(2, vec![vec![0.1, 0.0], vec![1.0, 0.2], vec![0.3, 1.0]]).unwrap();
        let vs = t.vertices();
        let per: f64 = (0..3).map(|i| linalg::distance(&vs[i], &vs[(i + 1) % 3])).sum();
        assert!((inradius(&t) - 2.0 * t.volume() / per).abs() < 1e-12);
    }

    #[test]
    fn window_cells_tile_inner_region() {
        let mut rng = RngStream::new(34, 0);
        let process = sample_pht(2, 0.5, 12.0, &mut rng).unwrap();
        let cells = window_cells(&process).unwrap();
        assert!(!cells.is_empty());
        // complete cells are disjoint: a random point lies in at most one
        for _ in 0..2000 {
            let x = [24.0 * rng.random::<f64>() - 12.0, 24.0 * rng.random::<f64>() - 12.0];
            let hits = cells.iter().filter(|c| c.polytope.contains(&x, 0.0)).count();
            assert!(hits <= 1);
        }
    }
}
