use std::collections::BTreeSet;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use super::hull::{hull_2d, hull_3d, orient, outside};
use super::linalg::{self, dot, generalized_cross, least_norm_solve, normalized, Reflection};
use super::{SIGN_EPS, SUBSET_LIMIT};
use crate::error::{Error, Result};

/// A point on the unit sphere `S^{D-1}` of `R^D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let n = linalg::norm(&coords);
        if coords.is_empty() || (n - 1.0).abs() > SIGN_EPS {
            return Err(Error::NotUnit(n));
        }
        Ok(Self(coords))
    }

    /// Normalizes a nonzero vector.
    pub fn normalize(coords: &[f64]) -> Result<Self> {
        normalized(coords)
            .map(Self)
            .ok_or_else(|| Error::InvalidArgument("cannot normalize the zero vector".into()))
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Self(v)
    }

    /// The pole `e = (0, ..., 0, 1)`.
    pub fn north_pole(dim: usize) -> Self {
        Self::basis(dim, dim - 1)
    }

    pub fn south_pole(dim: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[dim - 1] = -1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for UnitVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for UnitVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        UnitVector::new(v)
    }
}

impl From<UnitVector> for Vec<f64> {
    fn from(u: UnitVector) -> Self {
        u.0
    }
}

/// The linear hyperplane `normal^⊥`. `normal` and `-normal` describe the
/// same hyperplane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearHyperplane {
    pub normal: UnitVector,
}

impl LinearHyperplane {
    pub fn new(normal: UnitVector) -> Self {
        Self { normal }
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x)
    }
}

/// One cell of an arrangement: entry `i` is the side of hyperplane `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(bad) = signs.iter().find(|s| **s != 1 && **s != -1) {
            return Err(Error::InvalidArgument(format!("sign entry {bad}")));
        }
        Ok(Self(signs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i] as f64
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    /// Sign pattern of a point that lies on none of the hyperplanes.
    pub fn of_point(hyperplanes: &[LinearHyperplane], x: &[f64]) -> Result<Self> {
        hyperplanes
            .iter()
            .map(|h| {
                let v = h.eval(x);
                if v.abs() <= SIGN_EPS {
                    Err(Error::NonGeneric("point lies on a hyperplane".into()))
                } else {
                    Ok(if v > 0.0 { 1 } else { -1 })
                }
            })
            .collect::<Result<Vec<i8>>>()
            .map(Self)
    }
}

impl TryFrom<Vec<i8>> for SignVector {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        SignVector::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(s: SignVector) -> Self {
        s.0
    }
}

/// An extreme ray together with the indices of the cone's hyperplanes that
/// contain it.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub direction: UnitVector,
    pub active: Vec<usize>,
}

/// The full-dimensional cone `{x : s_i <u_i, x> >= 0 for all i}`.
#[derive(Debug, Clone)]
pub struct PolyhedralCone {
    hyperplanes: Vec<LinearHyperplane>,
    cell: SignVector,
    interior: UnitVector,
    rays: Option<Vec<Ray>>,
}

impl PolyhedralCone {
    /// Validates that the sign vector selects a full-dimensional cell.
    pub fn new(hyperplanes: Vec<LinearHyperplane>, cell: SignVector) -> Result<Self> {
        check_shapes(&hyperplanes, &cell)?;
        let dim = hyperplanes[0].dim();
        let n = hyperplanes.len();
        if n < dim {
            let rows: Vec<&[f64]> = hyperplanes.iter().map(|h| h.normal.as_slice()).collect();
            let rhs: Vec<f64> = (0..n).map(|i| cell.get(i)).collect();
            let x = least_norm_solve(&rows, &rhs)
                .ok_or_else(|| Error::NonGeneric("dependent hyperplane normals".into()))?;
            let interior = UnitVector::normalize(&x)?;
            return Self::with_interior_point(hyperplanes, cell, interior);
        }
        if n > SUBSET_LIMIT {
            return Err(Error::Unsupported(format!(
                "feasibility search for {n} > {SUBSET_LIMIT} hyperplanes; supply an interior point"
            )));
        }
        let rays = rays_by_subsets(&hyperplanes, &cell)?;
        if rays.len() < dim {
            return Err(Error::EmptyCell);
        }
        let mut sum = vec![0.0; dim];
        for r in &rays {
            for (s, x) in sum.iter_mut().zip(r.direction.iter()) {
                *s += x;
            }
        }
        let interior = UnitVector::normalize(&sum).map_err(|_| Error::EmptyCell)?;
        let mut cone = Self::with_interior_point(hyperplanes, cell, interior).map_err(|_| Error::EmptyCell)?;
        cone.rays = Some(rays);
        Ok(cone)
    }

    /// Builds the cone from a known strictly interior direction.
    pub fn with_interior_point(
        hyperplanes: Vec<LinearHyperplane>,
        cell: SignVector,
        interior: UnitVector,
    ) -> Result<Self> {
        check_shapes(&hyperplanes, &cell)?;
        if interior.dim() != hyperplanes[0].dim() {
            return Err(Error::DimensionMismatch {
                expected: hyperplanes[0].dim(),
                got: interior.dim(),
            });
        }
        for (i, h) in hyperplanes.iter().enumerate() {
            if cell.get(i) * h.eval(&interior) <= SIGN_EPS {
                return Err(Error::NotInterior);
            }
        }
        Ok(Self {
            hyperplanes,
            cell,
            interior,
            rays: None,
        })
    }

    pub(crate) fn from_parts(
        hyperplanes: Vec<LinearHyperplane>,
        cell: SignVector,
        interior: UnitVector,
        rays: Option<Vec<Ray>>,
    ) -> Self {
        Self {
            hyperplanes,
            cell,
            interior,
            rays,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.interior.dim()
    }

    pub fn num_hyperplanes(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn hyperplanes(&self) -> &[LinearHyperplane] {
        &self.hyperplanes
    }

    pub fn cell(&self) -> &SignVector {
        &self.cell
    }

    /// A strictly interior unit direction.
    pub fn interior_point(&self) -> &UnitVector {
        &self.interior
    }

    pub fn cached_rays(&self) -> Option<&[Ray]> {
        self.rays.as_deref()
    }

    /// `s_i <u_i, x>` for every hyperplane.
    pub fn slacks<'a>(&'a self, x: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        self.hyperplanes
            .iter()
            .enumerate()
            .map(move |(i, h)| self.cell.get(i) * h.eval(x))
    }

    /// Computes and caches the extreme rays.
    pub fn with_rays(mut self) -> Result<Self> {
        if self.rays.is_none() {
            self.rays = Some(extreme_rays(&self)?);
        }
        Ok(self)
    }

    /// Applies a linear isometry to every normal (and the witness point).
    pub fn transformed(&self, map: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let fix = |v: &[f64]| UnitVector::normalize(&map(v)).expect("isometry keeps unit length");
        Self {
            hyperplanes: self
                .hyperplanes
                .iter()
                .map(|h| LinearHyperplane::new(fix(&h.normal)))
                .collect(),
            cell: self.cell.clone(),
            interior: fix(&self.interior),
            rays: self.rays.as_ref().map(|rays| {
                rays.iter()
                    .map(|r| Ray {
                        direction: fix(&r.direction),
                        active: r.active.clone(),
                    })
                    .collect()
            }),
        }
    }
}

fn check_shapes(hyperplanes: &[LinearHyperplane], cell: &SignVector) -> Result<()> {
    if hyperplanes.is_empty() {
        return Err(Error::InvalidArgument("a cone needs at least one hyperplane".into()));
    }
    if hyperplanes.len() != cell.len() {
        return Err(Error::DimensionMismatch {
            expected: hyperplanes.len(),
            got: cell.len(),
        });
    }
    let dim = hyperplanes[0].dim();
    if let Some(h) = hyperplanes.iter().find(|h| h.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: h.dim(),
        });
    }
    Ok(())
}

/// Iterates over all `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if k > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let Some(i) = (0..k).rev().find(|&i| idx[i] < i + n - k) else {
            return Ok(());
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Extreme rays by exhaustive enumeration of `(D-1)`-subsets of hyperplanes.
pub fn rays_by_subsets(hyperplanes: &[LinearHyperplane], cell: &SignVector) -> Result<Vec<Ray>> {
    let dim = hyperplanes[0].dim();
    let n = hyperplanes.len();
    let mut rays = Vec::new();
    let mut unbounded_line = false;
    for_each_subset(n, dim - 1, |subset| {
        let normals: Vec<&[f64]> = subset.iter().map(|&i| hyperplanes[i].normal.as_slice()).collect();
        let r = generalized_cross(&normals);
        let len = linalg::norm(&r);
        if len <= SIGN_EPS {
            return Err(Error::NonGeneric("dependent hyperplane normals".into()));
        }
        let r = linalg::scale(&r, 1.0 / len);
        let mut feasible = [true, true];
        let mut touching = 0;
        for (k, h) in hyperplanes.iter().enumerate() {
            if subset.contains(&k) {
                continue;
            }
            let v = cell.get(k) * h.eval(&r);
            if v.abs() <= SIGN_EPS {
                touching += 1;
            } else if v > 0.0 {
                feasible[1] = false;
            } else {
                feasible[0] = false;
            }
        }
        if feasible[0] && feasible[1] {
            unbounded_line = true;
        }
        for (which, sign) in [(0usize, 1.0), (1usize, -1.0)] {
            if feasible[which] {
                if touching > 0 {
                    return Err(Error::NonGeneric(format!(
                        "ray lies on {} hyperplanes",
                        dim - 1 + touching
                    )));
                }
                rays.push(Ray {
                    direction: UnitVector(linalg::scale(&r, sign)),
                    active: subset.to_vec(),
                });
            }
        }
        Ok(())
    })?;
    if unbounded_line || n < dim - 1 {
        return Err(Error::NotPointed);
    }
    Ok(rays)
}

/// Extreme rays by central projection onto an affine chart followed by a
/// polar hull: works for any number of hyperplanes, ambient dimension 2..=4.
pub fn rays_by_chart(cone: &PolyhedralCone) -> Result<Vec<Ray>> {
    let dim = cone.ambient_dim();
    if !(2..=4).contains(&dim) {
        return Err(Error::Unsupported(format!("ray extraction in R^{dim}")));
    }
    let d = dim - 1;
    let mut center = vec![0.0; dim];
    for (i, h) in cone.hyperplanes.iter().enumerate() {
        let s = cone.cell.get(i);
        for (c, u) in center.iter_mut().zip(h.normal.iter()) {
            *c += s * u;
        }
    }
    let center = normalized(&center).ok_or(Error::NotPointed)?;
    let lift = dot(&cone.interior, &center);
    if lift <= SIGN_EPS {
        return Err(Error::NotPointed);
    }
    let origin = linalg::scale(&cone.interior, 1.0 / lift);
    let basis = Reflection::to_south_pole(&center).tangent_basis();
    let points = chart_constraints(cone, &origin, &basis);
    let vertices = polar_vertices(&points, d).map_err(|e| match e {
        Error::OriginNotInterior => Error::NotPointed,
        other => other,
    })?;
    let rays: Vec<Ray> = vertices
        .into_iter()
        .map(|(z, active)| {
            let mut x = origin.clone();
            for (zj, b) in z.iter().zip(&basis) {
                for (xc, bc) in x.iter_mut().zip(b) {
                    *xc += zj * bc;
                }
            }
            Ray {
                direction: UnitVector::normalize(&x).expect("chart points are nonzero"),
                active,
            }
        })
        .collect();
    for r in &rays {
        let on = cone
            .hyperplanes
            .iter()
            .filter(|h| h.eval(&r.direction).abs() <= SIGN_EPS)
            .count();
        if on > d {
            return Err(Error::NonGeneric(format!("ray lies on {on} hyperplanes")));
        }
    }
    Ok(rays)
}

/// Writes the cone's section by the affine plane `origin + span(basis)` as
/// `{z : <c_i, z> <= 1}`. `origin` must be strictly interior.
pub(crate) fn chart_constraints(cone: &PolyhedralCone, origin: &[f64], basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    cone.hyperplanes
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let s = cone.cell.get(i);
            let g = s * h.eval(origin);
            basis.iter().map(|b| -s * dot(&h.normal, b) / g).collect()
        })
        .collect()
}

/// Vertices of `{z : <c_i, z> <= 1}` in `R^d` (d <= 3) with the indices of
/// the tight constraints, by dualizing the hull of the `c_i`. Fails with
/// `OriginNotInterior` when the region is unbounded. Planar output is in
/// counterclockwise order.
pub(crate) fn polar_vertices(points: &[Vec<f64>], d: usize) -> Result<Vec<(Vec<f64>, Vec<usize>)>> {
    match d {
        1 => {
            let (mut hi, mut lo) = (None::<usize>, None::<usize>);
            for (i, c) in points.iter().enumerate() {
                if c[0] > 0.0 && hi.is_none_or(|j| c[0] > points[j][0]) {
                    hi = Some(i);
                }
                if c[0] < 0.0 && lo.is_none_or(|j| c[0] < points[j][0]) {
                    lo = Some(i);
                }
            }
            let (hi, lo) = match (hi, lo) {
                (Some(h), Some(l)) => (h, l),
                _ => return Err(Error::OriginNotInterior),
            };
            Ok(vec![
                (vec![1.0 / points[lo][0]], vec![lo]),
                (vec![1.0 / points[hi][0]], vec![hi]),
            ])
        }
        2 => {
            let hull = hull_2d(points).map_err(|_| Error::OriginNotInterior)?;
            let zero = [0.0, 0.0];
            let m = hull.len();
            let mut out = Vec::with_capacity(m);
            for k in 0..m {
                let (a, b) = (hull[k], hull[(k + 1) % m]);
                if orient(&points[a], &points[b], &zero) <= 0.0 {
                    return Err(Error::OriginNotInterior);
                }
                let (pa, pb) = (&points[a], &points[b]);
                let nu = [pb[1] - pa[1], pa[0] - pb[0]];
                let h = nu[0] * pa[0] + nu[1] * pa[1];
                let mut active = vec![a, b];
                active.sort_unstable();
                out.push((vec![nu[0] / h, nu[1] / h], active));
            }
            Ok(out)
        }
        3 => {
            let hull = hull_3d(points).map_err(|_| Error::OriginNotInterior)?;
            let zero = [0.0, 0.0, 0.0];
            let mut out = Vec::with_capacity(hull.faces.len());
            for f in &hull.faces {
                let (a, b, c) = (&points[f[0]], &points[f[1]], &points[f[2]]);
                if outside(a, b, c, &zero) >= 0.0 {
                    return Err(Error::OriginNotInterior);
                }
                let nu = super::polytope::cross3(&linalg::sub(b, a), &linalg::sub(c, a));
                let h = dot(&nu, a);
                let mut active = f.to_vec();
                active.sort_unstable();
                out.push((linalg::scale(&nu, 1.0 / h), active));
            }
            Ok(out)
        }
        _ => Err(Error::Unsupported(format!("polar vertices in R^{d}"))),
    }
}

/// Extreme rays of a pointed cone. Uses the cache when present, subset
/// enumeration up to 64 hyperplanes and the chart route beyond.
pub fn extreme_rays(cone: &PolyhedralCone) -> Result<Vec<Ray>> {
    if let Some(r) = &cone.rays {
        return Ok(r.clone());
    }
    if cone.num_hyperplanes() < cone.ambient_dim() {
        return Err(Error::NotPointed);
    }
    if cone.num_hyperplanes() <= SUBSET_LIMIT {
        rays_by_subsets(&cone.hyperplanes, &cone.cell)
    } else {
        rays_by_chart(cone)
    }
}

/// `true` iff every sign-weighted inner product is at least `-1e-12`.
pub fn contains(cone: &PolyhedralCone, x: &[f64]) -> Result<bool> {
    if x.len() != cone.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.ambient_dim(),
            got: x.len(),
        });
    }
    Ok(cone.slacks(x).all(|v| v >= -SIGN_EPS))
}

/// Numbers of faces of the spherical polytope `cone ∩ S^{D-1}`:
/// `(f_0, ..., f_{D-2})`, where `f_k` counts `(k+1)`-dimensional faces of the cone.
pub fn face_counts_spherical(cone: &PolyhedralCone) -> Result<Vec<usize>> {
    let rays = extreme_rays(cone)?;
    Ok(face_counts_from_rays(&rays, cone.ambient_dim()))
}

pub(crate) fn face_counts_from_rays(rays: &[Ray], dim: usize) -> Vec<usize> {
    let d = dim - 1;
    let mut counts = vec![0usize; d];
    if d == 0 {
        return counts;
    }
    counts[0] = rays.len();
    if d == 1 {
        return counts;
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for r in rays {
        let a = &r.active;
        // every nonempty subset of the active set
        for mask in 1u64..(1u64 << a.len()) {
            let t: Vec<usize> = (0..a.len()).filter(|b| mask & (1 << b) != 0).map(|b| a[b]).collect();
            let members: Vec<usize> = rays
                .iter()
                .enumerate()
                .filter(|(_, q)| t.iter().all(|x| q.active.contains(x)))
                .map(|(j, _)| j)
                .collect();
            if members.len() >= 2 && seen.insert(members.clone()) {
                let dirs: Vec<&[f64]> = members.iter().map(|&j| rays[j].direction.as_slice()).collect();
                let rk = linalg::rank(&dirs, 1e-9);
                if rk >= 2 && rk - 1 < d {
                    counts[rk - 1] += 1;
                }
            }
        }
    }
    counts
}

/// The polar cone `{y : <x, y> <= 0 for all x in cone}` of a pointed cone.
pub fn polar_cone(cone: &PolyhedralCone) -> Result<PolyhedralCone> {
    let rays = extreme_rays(cone)?;
    let dim = cone.ambient_dim();
    let hyperplanes: Vec<LinearHyperplane> = rays
        .iter()
        .map(|r| LinearHyperplane::new(r.direction.clone()))
        .collect();
    let cell = SignVector(vec![-1; rays.len()]);
    // generators -s_i u_i; facet-defining ones are the extreme rays of the polar
    let mut sum = vec![0.0; dim];
    let mut polar_rays = Vec::new();
    for (i, h) in cone.hyperplanes.iter().enumerate() {
        let g: Vec<f64> = h.normal.iter().map(|x| -cone.cell.get(i) * x).collect();
        for (s, x) in sum.iter_mut().zip(&g) {
            *s += x;
        }
        let active: Vec<usize> = rays
            .iter()
            .enumerate()
            .filter(|(_, r)| r.active.contains(&i))
            .map(|(j, _)| j)
            .collect();
        let dirs: Vec<&[f64]> = active.iter().map(|&j| rays[j].direction.as_slice()).collect();
        if linalg::rank(&dirs, 1e-9) == dim - 1 {
            polar_rays.push(Ray {
                direction: UnitVector(g),
                active,
            });
        }
    }
    let interior = UnitVector::normalize(&sum)?;
    Ok(PolyhedralCone::from_parts(
        hyperplanes,
        cell,
        interior,
        Some(polar_rays),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(v: &[f64]) -> LinearHyperplane {
        LinearHyperplane::new(UnitVector::normalize(v).unwrap())
    }

    fn orthant() -> PolyhedralCone {
        PolyhedralCone::new(
            vec![hp(&[1.0, 0.0, 0.0]), hp(&[0.0, 1.0, 0.0]), hp(&[0.0, 0.0, 1.0])],
            SignVector::new(vec![1, 1, 1]).unwrap(),
        )
        .unwrap()
    }

    fn sorted_dirs(rays: &[Ray]) -> Vec<Vec<f64>> {
        let mut v: Vec<Vec<f64>> = rays.iter().map(|r| r.direction.to_vec()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn orthant_rays_are_basis_vectors() {
        let cone = orthant();
        let rays = extreme_rays(&cone).unwrap();
        let dirs = sorted_dirs(&rays);
        assert_eq!(
            dirs,
            vec![vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]]
        );
        assert_eq!(face_counts_spherical(&cone).unwrap(), vec![3, 3]);
    }

    #[test]
    fn orthant_membership() {
        let cone = orthant();
        assert!(contains(&cone, &[1.0, 1.0, 1.0]).unwrap());
        assert!(!contains(&cone, &[-1.0, 1.0, 1.0]).unwrap());
    }

    #[test]
    fn infeasible_sign_vector_rejected_at_construction() {
        // x >= 0, y >= 0, and x + y <= 0 in the plane z-free directions: only the z-axis line
        let hs = vec![hp(&[1.0, 0.0, 0.0]), hp(&[0.0, 1.0, 0.0]), hp(&[1.0, 1.0, 0.0])];
        let r = PolyhedralCone::new(hs, SignVector::new(vec![1, 1, -1]).unwrap());
        assert!(r.is_err());
    }

    #[test]
    fn half_space_is_not_pointed() {
        let cone = PolyhedralCone::new(vec![hp(&[0.0, 0.0, 1.0])], SignVector::new(vec![1]).unwrap()).unwrap();
        assert_eq!(extreme_rays(&cone), Err(Error::NotPointed));
        assert_eq!(face_counts_spherical(&cone), Err(Error::NotPointed));
    }

    #[test]
    fn chart_and_subset_routes_agree() {
        let hs = vec![
            hp(&[1.0, 0.2, 0.1]),
            hp(&[0.1, 1.0, -0.3]),
            hp(&[-0.4, 0.3, 1.0]),
            hp(&[0.5, -0.6, 0.7]),
        ];
        let cone = PolyhedralCone::new(hs, SignVector::new(vec![1, 1, 1, 1]).unwrap()).unwrap();
        let a = rays_by_subsets(cone.hyperplanes(), cone.cell()).unwrap();
        let b = rays_by_chart(&cone).unwrap();
        assert_eq!(a.len(), b.len());
        for r in &b {
            assert!(a
                .iter()
                .any(|q| { linalg::distance(&q.direction, &r.direction) < 1e-12 && q.active == r.active }));
        }
    }

    #[test]
    fn polar_of_orthant_is_negative_orthant() {
        let p = polar_cone(&orthant()).unwrap();
        assert!(contains(&p, &[-1.0, -2.0, -0.5]).unwrap());
        assert!(!contains(&p, &[1.0, -2.0, -0.5]).unwrap());
        let rays = extreme_rays(&p).unwrap();
        assert_eq!(rays.len(), 3);
        assert_eq!(face_counts_spherical(&p).unwrap(), vec![3, 3]);
    }

    #[test]
    fn subsets_enumerated_lexicographically() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| {
            seen.push(s.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let mut count = 0;
        for_each_subset(3, 0, |_| {
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 1);
    }
}
