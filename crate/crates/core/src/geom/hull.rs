//! Convex hulls on indexed point sets in one, two and three dimensions.
//!
//! Orientation decisions use adaptive exact predicates, so collinear and
//! coplanar configurations are recognised exactly instead of up to an epsilon.

use std::collections::HashMap;

use robust::{orient2d, orient3d, Coord, Coord3D};

use crate::error::{Error, Result};

fn c2(p: &[f64]) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

fn c3(p: &[f64]) -> Coord3D<f64> {
    Coord3D {
        x: p[0],
        y: p[1],
        z: p[2],
    }
}

/// Positive iff `c` lies to the left of the directed line `a -> b`.
pub fn orient(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    orient2d(c2(a), c2(b), c2(c))
}

/// Positive iff `p` lies strictly outside the triangle plane `(a, b, c)`
/// whose counterclockwise orientation defines the outward side.
pub fn outside(a: &[f64], b: &[f64], c: &[f64], p: &[f64]) -> f64 {
    -orient3d(c3(a), c3(b), c3(c), c3(p))
}

/// Indices of the extreme points of a planar point set in counterclockwise
/// order, starting at the lexicographically smallest point. Points on the
/// relative interior of hull edges are dropped.
pub fn hull_2d(points: &[Vec<f64>]) -> Result<Vec<usize>> {
    if points.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "need at least 3 points in the plane, got {}",
            points.len()
        )));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        points[i][0]
            .total_cmp(&points[j][0])
            .then(points[i][1].total_cmp(&points[j][1]))
    });
    order.dedup_by(|a, b| points[*a] == points[*b]);

    let mut lower: Vec<usize> = Vec::new();
    for &i in &order {
        while lower.len() >= 2
            && orient(
                &points[lower[lower.len() - 2]],
                &points[lower[lower.len() - 1]],
                &points[i],
            ) <= 0.0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2
            && orient(
                &points[upper[upper.len() - 2]],
                &points[upper[upper.len() - 1]],
                &points[i],
            ) <= 0.0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::DegenerateInput("all points are collinear".to_string()));
    }
    Ok(lower)
}

/// Triangulated boundary of a three-dimensional hull. Every face is
/// counterclockwise when seen from outside.
#[derive(Debug, Clone)]
pub struct Hull3 {
    pub faces: Vec<[usize; 3]>,
}

impl Hull3 {
    pub fn vertex_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.faces.iter().flat_map(|f| f.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Incremental three-dimensional hull.
pub fn hull_3d(points: &[Vec<f64>]) -> Result<Hull3> {
    let n = points.len();
    if n < 4 {
        return Err(Error::DegenerateInput(format!(
            "need at least 4 points in space, got {n}"
        )));
    }
    let dist2 = |a: &[f64], b: &[f64]| -> f64 { (0..3).map(|k| (a[k] - b[k]).powi(2)).sum() };
    let i0 = (0..n).min_by(|&a, &b| points[a][0].total_cmp(&points[b][0])).unwrap();
    let i1 = (0..n)
        .max_by(|&a, &b| dist2(&points[a], &points[i0]).total_cmp(&dist2(&points[b], &points[i0])))
        .unwrap();
    if dist2(&points[i0], &points[i1]) == 0.0 {
        return Err(Error::DegenerateInput("all points coincide".to_string()));
    }
    let line_dist = |k: usize| -> f64 {
        let a = &points[i0];
        let b = &points[i1];
        let p = &points[k];
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let w = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
        let cx = u[1] * w[2] - u[2] * w[1];
        let cy = u[2] * w[0] - u[0] * w[2];
        let cz = u[0] * w[1] - u[1] * w[0];
        cx * cx + cy * cy + cz * cz
    };
    let i2 = (0..n).max_by(|&a, &b| line_dist(a).total_cmp(&line_dist(b))).unwrap();
    if line_dist(i2) == 0.0 {
        return Err(Error::DegenerateInput("all points are collinear".to_string()));
    }
    let i3 = (0..n)
        .max_by(|&a, &b| {
            outside(&points[i0], &points[i1], &points[i2], &points[a])
                .abs()
                .total_cmp(&outside(&points[i0], &points[i1], &points[i2], &points[b]).abs())
        })
        .unwrap();
    let vol = outside(&points[i0], &points[i1], &points[i2], &points[i3]);
    if vol == 0.0 {
        return Err(Error::DegenerateInput("all points are coplanar".to_string()));
    }

    let mut faces: Vec<Option<[usize; 3]>> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let push_face = |faces: &mut Vec<Option<[usize; 3]>>, edges: &mut HashMap<(usize, usize), usize>, f: [usize; 3]| {
        let id = faces.len();
        faces.push(Some(f));
        for k in 0..3 {
            edges.insert((f[k], f[(k + 1) % 3]), id);
        }
    };
    // i3 outside (i0, i1, i2) means that face must be flipped.
    let base = if vol > 0.0 { [i0, i2, i1] } else { [i0, i1, i2] };
    push_face(&mut faces, &mut edges, base);
    let [a, b, c] = base;
    push_face(&mut faces, &mut edges, [b, a, i3]);
    push_face(&mut faces, &mut edges, [c, b, i3]);
    push_face(&mut faces, &mut edges, [a, c, i3]);

    for p in 0..n {
        if p == i0 || p == i1 || p == i2 || p == i3 {
            continue;
        }
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter_map(|(id, f)| {
                let f = (*f)?;
                (outside(&points[f[0]], &points[f[1]], &points[f[2]], &points[p]) > 0.0).then_some(id)
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for &id in &visible {
            let f = faces[id].unwrap();
            for k in 0..3 {
                let (u, v) = (f[k], f[(k + 1) % 3]);
                let twin = edges.get(&(v, u)).copied();
                let twin_visible = twin.is_some_and(|t| visible.contains(&t));
                if !twin_visible {
                    horizon.push((u, v));
                }
            }
        }
        for &id in &visible {
            let f = faces[id].take().unwrap();
            for k in 0..3 {
                let key = (f[k], f[(k + 1) % 3]);
                if edges.get(&key) == Some(&id) {
                    edges.remove(&key);
                }
            }
        }
        for (u, v) in horizon {
            push_face(&mut faces, &mut edges, [u, v, p]);
        }
    }
    Ok(Hull3 {
        faces: faces.into_iter().flatten().collect(),
    })
}

/// Gift wrapping (Jarvis march), kept as an independent reference for the
/// monotone-chain hull.
pub fn gift_wrap_2d(points: &[Vec<f64>]) -> Vec<usize> {
    let start = (0..points.len())
        .min_by(|&i, &j| {
            points[i][0]
                .total_cmp(&points[j][0])
                .then(points[i][1].total_cmp(&points[j][1]))
        })
        .unwrap();
    let mut hull = vec![start];
    let mut current = start;
    loop {
        let mut candidate = if current == 0 { 1 } else { 0 };
        for k in 0..points.len() {
            if k == current {
                continue;
            }
            let o = orient(&points[current], &points[candidate], &points[k]);
            let farther = crate::geom::linalg::distance(&points[current], &points[k])
                > crate::geom::linalg::distance(&points[current], &points[candidate]);
            if o < 0.0 || (o == 0.0 && farther) {
                candidate = k;
            }
        }
        if candidate == start {
            break;
        }
        hull.push(candidate);
        current = candidate;
        if hull.len() > points.len() {
            break;
        }
    }
    hull
}
