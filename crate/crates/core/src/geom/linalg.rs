//! Small dense linear algebra on plain slices.
//!
//! Everything here works for the low dimensions the crate cares about
//! (ambient dimension at most a handful) and avoids heap-heavy matrix types.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + s * b`
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Returns `None` for (near) zero vectors.
pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n < 1e-300 || !n.is_finite() {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f != 0.0 {
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    det
}

/// Generalized cross product of `D - 1` vectors in `R^D`.
///
/// The result `r` satisfies `<r, x> = det[v_1; ...; v_{D-1}; x]`, so it is
/// orthogonal to every input vector and vanishes iff they are dependent.
pub fn generalized_cross(vectors: &[&[f64]]) -> Vec<f64> {
    let dim = vectors.len() + 1;
    match dim {
        1 => vec![1.0],
        2 => {
            let v = vectors[0];
            vec![-v[1], v[0]]
        }
        3 => {
            let (a, b) = (vectors[0], vectors[1]);
            vec![
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        }
        _ => (0..dim)
            .map(|j| {
                let minor: Vec<Vec<f64>> = vectors
                    .iter()
                    .map(|v| v.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| *x).collect())
                    .collect();
                let sign = if (dim - 1 + j) % 2 == 0 { 1.0 } else { -1.0 };
                sign * det(&minor)
            })
            .collect(),
    }
}

/// Solves the square system `a x = b`; `None` if singular.
pub fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
        .max(1e-300);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(pivot, col);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        m[r][c] -= f * m[col][c];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Minimum-norm solution of the underdetermined system `rows x = rhs`.
pub fn least_norm_solve(rows: &[&[f64]], rhs: &[f64]) -> Option<Vec<f64>> {
    let k = rows.len();
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| dot(rows[i], rows[j])).collect())
        .collect();
    let y = solve(&gram, rhs)?;
    let dim = rows.first()?.len();
    let mut x = vec![0.0; dim];
    for (row, yi) in rows.iter().zip(&y) {
        for (xc, rc) in x.iter_mut().zip(row.iter()) {
            *xc += yi * rc;
        }
    }
    Some(x)
}

/// Numerical rank of a set of row vectors (relative tolerance `tol`).
pub fn rank(rows: &[&[f64]], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    let scale = m.iter().flat_map(|r| r.iter()).fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    for col in 0..cols {
        if rank == m.len() {
            break;
        }
        let pivot = (rank..m.len())
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot][col].abs() <= tol * scale {
            continue;
        }
        m.swap(pivot, rank);
        for r in rank + 1..m.len() {
            let f = m[r][col] / m[rank][col];
            for c in col..cols {
                m[r][c] -= f * m[rank][c];
            }
        }
        rank += 1;
    }
    rank
}

/// The Householder reflection that exchanges `v` and `-e`, where `e` is the
/// last standard basis vector. At `v = -e` the identity is used.
#[derive(Debug, Clone)]
pub struct Reflection {
    /// Unit normal of the mirror, `None` for the identity.
    axis: Option<Vec<f64>>,
    dim: usize,
}

impl Reflection {
    pub fn to_south_pole(v: &[f64]) -> Self {
        let dim = v.len();
        let mut w = v.to_vec();
        w[dim - 1] += 1.0;
        let n = norm(&w);
        if n < 1e-12 {
            Self { axis: None, dim }
        } else {
            Self {
                axis: Some(scale(&w, 1.0 / n)),
                dim,
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match &self.axis {
            None => x.to_vec(),
            Some(w) => axpy(x, -2.0 * dot(w, x), w),
        }
    }

    /// Images of `e_1, ..., e_{D-1}`: an orthonormal basis of the tangent
    /// space at `v` (the reflection is an involution).
    pub fn tangent_basis(&self) -> Vec<Vec<f64>> {
        (0..self.dim - 1)
            .map(|i| {
                let mut e = vec![0.0; self.dim];
                e[i] = 1.0;
                self.apply(&e)
            })
            .collect()
    }
}
