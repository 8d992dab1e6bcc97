use serde::{Deserialize, Serialize};

use super::hull::{hull_2d, hull_3d, orient, outside};
use super::linalg::{dot, norm, scale, sub};
use crate::error::{Error, Result};

/// A convex polytope stored by its vertices in coordinate-representation
/// order: first coordinates strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolytope")]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawPolytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl TryFrom<RawPolytope> for Polytope {
    type Error = Error;

    fn try_from(raw: RawPolytope) -> Result<Self> {
        Polytope::new(raw.dim, raw.vertices)
    }
}

/// Supporting hyperplane `{x : <normal, x> = offset}` of a facet, with a unit
/// outward normal.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Polytope {
    /// Builds a polytope from points that must already be in convex
    /// position. Vertices are sorted by first coordinate; exact ties are
    /// rejected.
    pub fn new(dim: usize, mut vertices: Vec<Vec<f64>>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Unsupported(format!("polytopes of dimension {dim}")));
        }
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("non-finite vertex".into()));
            }
        }
        vertices.sort_by(|a, b| a[0].total_cmp(&b[0]));
        for w in vertices.windows(2) {
            if w[0][0] == w[1][0] {
                return Err(Error::TiedFirstCoordinate(w[0][0]));
            }
        }
        let extreme = match dim {
            1 => 2,
            2 => hull_2d(&vertices)?.len(),
            _ => hull_3d(&vertices)?.vertex_indices().len(),
        };
        if extreme != vertices.len() {
            return Err(Error::DegenerateInput(format!(
                "{} of {} points are not in convex position",
                vertices.len() - extreme,
                vertices.len()
            )));
        }
        Ok(Self { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Planar vertices in counterclockwise order.
    pub fn cyclic_vertices(&self) -> Vec<Vec<f64>> {
        assert_eq!(self.dim, 2, "cyclic order is only defined in the plane");
        let idx = hull_2d(&self.vertices).expect("validated at construction");
        idx.into_iter().map(|i| self.vertices[i].clone()).collect()
    }

    pub fn facets(&self) -> Vec<Facet> {
        match self.dim {
            1 => vec![
                Facet {
                    normal: vec![-1.0],
                    offset: -self.vertices[0][0],
                },
                Facet {
                    normal: vec![1.0],
                    offset: self.vertices[1][0],
                },
            ],
            2 => {
                let cyc = self.cyclic_vertices();
                let m = cyc.len();
                (0..m)
                    .map(|i| {
                        let a = &cyc[i];
                        let b = &cyc[(i + 1) % m];
                        let e = sub(b, a);
                        let nrm = scale(&[e[1], -e[0]], 1.0 / norm(&e));
                        let offset = dot(&nrm, a);
                        Facet { normal: nrm, offset }
                    })
                    .collect()
            }
            _ => {
                let hull = hull_3d(&self.vertices).expect("validated at construction");
                let mut out: Vec<Facet> = Vec::new();
                for f in hull.faces {
                    let a = &self.vertices[f[0]];
                    let b = &self.vertices[f[1]];
                    let c = &self.vertices[f[2]];
                    let n = cross3(&sub(b, a), &sub(c, a));
                    let nrm = scale(&n, 1.0 / norm(&n));
                    let offset = dot(&nrm, a);
                    let dup = out.iter().any(|g| {
                        dot(&g.normal, &nrm) > 1.0 - 1e-12 && (g.offset - offset).abs() <= 1e-9 * (1.0 + offset.abs())
                    });
                    if !dup {
                        out.push(Facet { normal: nrm, offset });
                    }
                }
                out
            }
        }
    }

    /// `(f_0, ..., f_{dim-1})`
    pub fn f_vector(&self) -> Vec<usize> {
        let v = self.vertices.len();
        match self.dim {
            1 => vec![2],
            2 => vec![v, v],
            _ => {
                let f = self.facets().len();
                vec![v, v + f - 2, f]
            }
        }
    }

    pub fn volume(&self) -> f64 {
        match self.dim {
            1 => self.vertices[1][0] - self.vertices[0][0],
            2 => {
                // fan from the first vertex
                let cyc = self.cyclic_vertices();
                let o = &cyc[0];
                (1..cyc.len() - 1)
                    .map(|i| {
                        let a = sub(&cyc[i], o);
                        let b = sub(&cyc[i + 1], o);
                        0.5 * (a[0] * b[1] - a[1] * b[0])
                    })
                    .sum()
            }
            _ => {
                let hull = hull_3d(&self.vertices).expect("validated at construction");
                let o = &self.vertices[0];
                hull.faces
                    .iter()
                    .map(|f| {
                        let a = sub(&self.vertices[f[0]], o);
                        let b = sub(&self.vertices[f[1]], o);
                        let c = sub(&self.vertices[f[2]], o);
                        dot(&a, &cross3(&b, &c)) / 6.0
                    })
                    .sum()
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                best = best.max(super::linalg::distance(a, b));
            }
        }
        best
    }

    /// Whether the origin is a strict interior point, decided with exact
    /// orientation predicates.
    pub fn origin_interior(&self) -> bool {
        let zero = vec![0.0; self.dim];
        match self.dim {
            1 => self.vertices[0][0] < 0.0 && self.vertices[1][0] > 0.0,
            2 => {
                let cyc = self.cyclic_vertices();
                let m = cyc.len();
                (0..m).all(|i| orient(&cyc[i], &cyc[(i + 1) % m], &zero) > 0.0)
            }
            _ => {
                let hull = hull_3d(&self.vertices).expect("validated at construction");
                hull.faces
                    .iter()
                    .all(|f| outside(&self.vertices[f[0]], &self.vertices[f[1]], &self.vertices[f[2]], &zero) < 0.0)
            }
        }
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        self.facets().iter().all(|f| dot(&f.normal, p) <= f.offset + tol)
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Polytope::new(self.dim, self.vertices.iter().map(|v| scale(v, s)).collect())
    }

    pub fn translated(&self, t: &[f64]) -> Result<Self> {
        Polytope::new(
            self.dim,
            self.vertices.iter().map(|v| super::linalg::add(v, t)).collect(),
        )
    }
}

pub(crate) fn cross3(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Extreme points of `points`, ordered by first coordinate.
pub fn convex_hull(points: &[Vec<f64>], dim: usize) -> Result<Polytope> {
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: points.iter().find(|p| p.len() != dim).unwrap().len(),
        });
    }
    let vertices: Vec<Vec<f64>> = match dim {
        1 => {
            if points.len() < 2 {
                return Err(Error::DegenerateInput("need two points".into()));
            }
            let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            if lo == hi {
                return Err(Error::DegenerateInput("all points coincide".into()));
            }
            vec![vec![lo], vec![hi]]
        }
        2 => hull_2d(points)?.into_iter().map(|i| points[i].clone()).collect(),
        3 => hull_3d(points)?
            .vertex_indices()
            .into_iter()
            .map(|i| points[i].clone())
            .collect(),
        _ => return Err(Error::Unsupported(format!("exact hulls in dimension {dim}"))),
    };
    Polytope::new(dim, vertices)
}

/// The dual polytope `{y : <x, y> <= 1 for all x in p}`. Each facet with
/// outward unit normal `u` and offset `h > 0` becomes the vertex `u / h`.
pub fn polar_polytope(p: &Polytope) -> Result<Polytope> {
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let mut verts: Vec<Vec<f64>> = Vec::new();
    for f in p.facets() {
        let v = scale(&f.normal, 1.0 / f.offset);
        if !verts
            .iter()
            .any(|w| super::linalg::distance(w, &v) <= 1e-9 * (1.0 + norm(&v)))
        {
            verts.push(v);
        }
    }
    Polytope::new(p.dim(), verts)
}
