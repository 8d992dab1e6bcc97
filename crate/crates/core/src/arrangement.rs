//! Conical arrangements of linear hyperplanes: enumeration of all cells by
//! incremental insertion, and exact face bookkeeping.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::cone::{face_counts_from_rays, rays_by_subsets, Ray};
use crate::geom::linalg::{self, dot, least_norm_solve};
use crate::geom::{LinearHyperplane, PolyhedralCone, SignVector, UnitVector, SIGN_EPS, SUBSET_LIMIT};

/// Binomial coefficient with `C(r, s) = 0` for `s > r`.
pub fn binomial(r: u64, s: u64) -> u128 {
    if s > r {
        return 0;
    }
    let s = s.min(r - s);
    let mut acc: u128 = 1;
    for i in 0..s {
        acc = acc * (r - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of cells cut out by `n` generic linear hyperplanes in `R^dim`.
pub fn schlaefli_count(n: u64, dim: u64) -> u128 {
    if n == 0 {
        return 1;
    }
    2 * (0..dim).map(|m| binomial(n - 1, m)).sum::<u128>()
}

/// Expected number of `k`-faces of the spherical polytope of a uniformly
/// chosen cell, as an exact fraction `(numerator, denominator)`.
pub fn face_formula(n: u64, d: u64, k: u64) -> (u128, u128) {
    let num = if n + k < d {
        0
    } else {
        (1u128 << (d - k)) * binomial(n, d - k) * schlaefli_count(n + k - d, k + 1)
    };
    (num, schlaefli_count(n, d + 1))
}

#[derive(Debug, Clone)]
pub struct ConicalArrangement {
    pub hyperplanes: Vec<LinearHyperplane>,
    pub cells: Vec<PolyhedralCone>,
}

impl ConicalArrangement {
    pub fn ambient_dim(&self) -> usize {
        self.hyperplanes[0].dim()
    }

    /// Index of the cell containing a direction off all hyperplanes.
    pub fn locate(&self, x: &[f64]) -> Result<usize> {
        let signs = SignVector::of_point(&self.hyperplanes, x)?;
        self.cells
            .iter()
            .position(|c| c.cell() == &signs)
            .ok_or(Error::EmptyCell)
    }
}

struct WorkCell {
    signs: Vec<i8>,
    rays: Vec<Ray>,
}

/// Enumerates every cell of the arrangement. Genericity is checked along the
/// way: each existing ray must lie strictly off every inserted hyperplane.
pub fn enumerate_cones(hyperplanes: Vec<LinearHyperplane>) -> Result<ConicalArrangement> {
    let n = hyperplanes.len();
    if n == 0 || n > SUBSET_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "arrangements need 1..={SUBSET_LIMIT} hyperplanes, got {n}"
        )));
    }
    let dim = hyperplanes[0].dim();
    if let Some(h) = hyperplanes.iter().find(|h| h.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: h.dim(),
        });
    }
    if dim < 2 {
        return Err(Error::Unsupported("arrangements in R^1".into()));
    }
    let m = n.min(dim);
    let rows: Vec<&[f64]> = hyperplanes[..m].iter().map(|h| h.normal.as_slice()).collect();
    if linalg::rank(&rows, 1e-12) < m {
        return Err(Error::NonGeneric("dependent hyperplane normals".into()));
    }
    let orthants = (0..1u64 << m).map(|mask| {
        (0..m)
            .map(|i| if mask & (1 << i) != 0 { 1 } else { -1 })
            .collect::<Vec<i8>>()
    });

    if n < dim {
        let cells = orthants
            .map(|signs| {
                let rhs: Vec<f64> = signs.iter().map(|&s| s as f64).collect();
                let x = least_norm_solve(&rows, &rhs)
                    .ok_or_else(|| Error::NonGeneric("dependent hyperplane normals".into()))?;
                PolyhedralCone::with_interior_point(
                    hyperplanes.clone(),
                    SignVector::new(signs)?,
                    UnitVector::normalize(&x)?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(ConicalArrangement { hyperplanes, cells });
    }

    let base = &hyperplanes[..dim];
    let mut work: Vec<WorkCell> = orthants
        .map(|signs| {
            let rays = rays_by_subsets(base, &SignVector::new(signs.clone())?)?;
            Ok(WorkCell { signs, rays })
        })
        .collect::<Result<_>>()?;

    for k in dim..n {
        let u = &hyperplanes[k].normal;
        let mut next = Vec::with_capacity(work.len() * 2);
        for cell in work {
            let vals: Vec<f64> = cell.rays.iter().map(|r| dot(u, &r.direction)).collect();
            if vals.iter().any(|v| v.abs() <= SIGN_EPS) {
                return Err(Error::NonGeneric(format!("a ray lies on hyperplane {k}")));
            }
            let pos = vals.iter().filter(|v| **v > 0.0).count();
            if pos == vals.len() || pos == 0 {
                let s = if pos == 0 { -1 } else { 1 };
                let mut signs = cell.signs;
                signs.push(s);
                next.push(WorkCell { signs, rays: cell.rays });
                continue;
            }
            let mut fresh = Vec::new();
            for i in 0..cell.rays.len() {
                for j in 0..cell.rays.len() {
                    if vals[i] <= 0.0 || vals[j] >= 0.0 {
                        continue;
                    }
                    let (a, b) = (&cell.rays[i], &cell.rays[j]);
                    let common: Vec<usize> = a.active.iter().copied().filter(|x| b.active.contains(x)).collect();
                    if common.len() != dim - 2 {
                        continue;
                    }
                    let x = linalg::axpy(&linalg::scale(&b.direction, vals[i]), -vals[j], &a.direction);
                    let mut active = common;
                    active.push(k);
                    fresh.push(Ray {
                        direction: UnitVector::normalize(&x)?,
                        active,
                    });
                }
            }
            for s in [1i8, -1] {
                let mut rays: Vec<Ray> = cell
                    .rays
                    .iter()
                    .zip(&vals)
                    .filter(|(_, v)| (**v > 0.0) == (s > 0))
                    .map(|(r, _)| r.clone())
                    .collect();
                rays.extend(fresh.iter().cloned());
                let mut signs = cell.signs.clone();
                signs.push(s);
                next.push(WorkCell { signs, rays });
            }
        }
        work = next;
    }

    let cells = work
        .into_iter()
        .map(|c| {
            let mut sum = vec![0.0; dim];
            for r in &c.rays {
                for (s, x) in sum.iter_mut().zip(r.direction.iter()) {
                    *s += x;
                }
            }
            let interior = UnitVector::normalize(&sum)?;
            Ok(PolyhedralCone::from_parts(
                hyperplanes.clone(),
                SignVector::new(c.signs)?,
                interior,
                Some(c.rays),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConicalArrangement { hyperplanes, cells })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusRow {
    /// Dimension of the cone faces counted in this row.
    pub j: usize,
    /// Number of distinct `j`-dimensional faces of the arrangement.
    pub n_j: usize,
    /// Sum over cells of the number of `j`-dimensional faces of each cell.
    pub sum_over_cells: usize,
    /// `sum_over_cells == 2^(D-j) * n_j`
    pub incidence_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalMean {
    pub k: usize,
    /// Sum over cells of the spherical `f_k`.
    pub total: u128,
    pub cells: u128,
    pub mean: f64,
    pub formula_numerator: u128,
    pub formula_denominator: u128,
    /// Exact rational equality `total / cells == formula`.
    pub matches_formula: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceCensus {
    pub ambient_dim: usize,
    pub n: usize,
    pub cells: usize,
    pub expected_cells: u128,
    pub rows: Vec<CensusRow>,
    pub spherical_means: Vec<SphericalMean>,
}

/// Faces of a simple pointed cone as active sets: every nonempty subset `T`
/// of a ray's active set is the active set of a face of dimension `D - |T|`.
fn simple_cone_faces(rays: &[Ray]) -> BTreeSet<Vec<usize>> {
    let mut faces = BTreeSet::new();
    for r in rays {
        let a = &r.active;
        for mask in 1u64..(1u64 << a.len()) {
            let t: Vec<usize> = (0..a.len()).filter(|b| mask & (1 << b) != 0).map(|b| a[b]).collect();
            faces.insert(t);
        }
    }
    faces
}

/// Face numbers of the whole arrangement and the per-arrangement means of
/// the spherical face numbers of its cells.
pub fn arrangement_face_census(arr: &ConicalArrangement) -> Result<FaceCensus> {
    let dim = arr.ambient_dim();
    let n = arr.hyperplanes.len();
    if n < dim {
        return Err(Error::NotPointed);
    }
    let d = dim - 1;
    let mut distinct: Vec<HashSet<Vec<i8>>> = vec![HashSet::new(); dim + 1];
    let mut per_cell = vec![0usize; dim + 1];
    let mut spherical = vec![0u128; d];
    for cell in &arr.cells {
        let rays = cell.cached_rays().ok_or(Error::NotPointed)?;
        for t in simple_cone_faces(rays) {
            let j = dim - t.len();
            let mut key = cell.cell().as_slice().to_vec();
            for &i in &t {
                key[i] = 0;
            }
            distinct[j].insert(key);
            per_cell[j] += 1;
        }
        distinct[dim].insert(cell.cell().as_slice().to_vec());
        per_cell[dim] += 1;
        for (k, f) in face_counts_from_rays(rays, dim).into_iter().enumerate() {
            spherical[k] += f as u128;
        }
    }
    let rows = (1..=dim)
        .map(|j| {
            let n_j = distinct[j].len();
            CensusRow {
                j,
                n_j,
                sum_over_cells: per_cell[j],
                incidence_identity: per_cell[j] == (1usize << (dim - j)) * n_j,
            }
        })
        .collect();
    let cells = arr.cells.len() as u128;
    let spherical_means = spherical
        .iter()
        .enumerate()
        .map(|(k, &total)| {
            let (num, den) = face_formula(n as u64, d as u64, k as u64);
            SphericalMean {
                k,
                total,
                cells,
                mean: total as f64 / cells as f64,
                formula_numerator: num,
                formula_denominator: den,
                matches_formula: total * den == num * cells,
            }
        })
        .collect();
    Ok(FaceCensus {
        ambient_dim: dim,
        n,
        cells: arr.cells.len(),
        expected_cells: schlaefli_count(n as u64, dim as u64),
        rows,
        spherical_means,
    })
}

/// Cells found by testing all `2^n` sign vectors for feasibility; an
/// independent reference for small arrangements.
pub fn brute_force_cells(hyperplanes: &[LinearHyperplane]) -> Result<Vec<SignVector>> {
    let n = hyperplanes.len();
    let mut out = Vec::new();
    for mask in 0..1u64 << n {
        let signs: Vec<i8> = (0..n).map(|i| if mask & (1 << i) != 0 { 1 } else { -1 }).collect();
        let signs = SignVector::new(signs)?;
        match PolyhedralCone::new(hyperplanes.to_vec(), signs.clone()) {
            Ok(_) => out.push(signs),
            Err(Error::EmptyCell) | Err(Error::NotInterior) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
