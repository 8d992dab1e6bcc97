use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::samplers::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub std_error: f64,
    pub count: usize,
}

/// Sample mean and its standard error.
pub fn summarize(xs: &[f64]) -> Summary {
    let n = xs.len();
    if n == 0 {
        return Summary {
            mean: f64::NAN,
            std_error: f64::NAN,
            count: 0,
        };
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    Summary {
        mean,
        std_error: (var / n as f64).sqrt(),
        count: n,
    }
}

/// Self-normalized importance estimate `Σ w_i x_i / Σ w_i` with its
/// delta-method standard error.
pub fn weighted_mean(xs: &[f64], ws: &[f64]) -> Summary {
    assert_eq!(xs.len(), ws.len());
    let total: f64 = ws.iter().sum();
    let mean = xs.iter().zip(ws).map(|(x, w)| x * w).sum::<f64>() / total;
    let var = xs.iter().zip(ws).map(|(x, w)| (w * (x - mean)).powi(2)).sum::<f64>() / (total * total);
    Summary {
        mean,
        std_error: var.sqrt(),
        count: xs.len(),
    }
}

/// Difference of two independent means with the joint standard error.
pub fn difference(a: &Summary, b: &Summary) -> Summary {
    Summary {
        mean: a.mean - b.mean,
        std_error: a.std_error.hypot(b.std_error),
        count: a.count.min(b.count),
    }
}

/// Scales every coordinate of the pooled sample to mean 0 and variance 1.
/// Constant coordinates are only centered.
pub fn standardize(a: &[Vec<f64>], b: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let dim = a[0].len();
    let all: Vec<&Vec<f64>> = a.iter().chain(b).collect();
    let n = all.len() as f64;
    let mut mean = vec![0.0; dim];
    let mut sd = vec![0.0; dim];
    for k in 0..dim {
        mean[k] = all.iter().map(|x| x[k]).sum::<f64>() / n;
        let var = all.iter().map(|x| (x[k] - mean[k]).powi(2)).sum::<f64>() / n;
        sd[k] = if var > 0.0 { var.sqrt() } else { 1.0 };
    }
    let f = |xs: &[Vec<f64>]| -> Vec<Vec<f64>> {
        xs.iter()
            .map(|x| (0..dim).map(|k| (x[k] - mean[k]) / sd[k]).collect())
            .collect()
    };
    (f(a), f(b))
}

/// Pairwise Euclidean distances, upper triangle in row order.
struct Distances {
    n: usize,
    upper: Vec<f64>,
    total: f64,
}

impl Distances {
    fn new(points: &[Vec<f64>]) -> Self {
        let n = points.len();
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let d2: f64 = points[i].iter().zip(&points[j]).map(|(x, y)| (x - y) * (x - y)).sum();
                upper.push(d2.sqrt());
            }
        }
        let total = upper.iter().sum();
        Self { n, upper, total }
    }

    /// Energy statistic for the split given by `in_a`.
    fn energy(&self, in_a: &[bool], na: usize) -> f64 {
        let nb = self.n - na;
        let (mut saa, mut sbb) = (0.0, 0.0);
        let mut idx = 0;
        for i in 0..self.n {
            let row = &self.upper[idx..idx + self.n - i - 1];
            idx += row.len();
            let ai = in_a[i];
            for (d, &aj) in row.iter().zip(&in_a[i + 1..]) {
                if ai == aj {
                    if ai {
                        saa += d;
                    } else {
                        sbb += d;
                    }
                }
            }
        }
        let sab = self.total - saa - sbb;
        let (na, nb) = (na as f64, nb as f64);
        2.0 * sab / (na * nb) - 2.0 * saa / (na * na) - 2.0 * sbb / (nb * nb)
    }
}

/// Energy-distance permutation test. Features are standardized on the
/// pooled sample first. Returns `(1 + #{T_π >= T}) / (1 + permutations)`.
/// Permutations run on the current rayon pool with their own seeded
/// streams, so the p-value does not depend on the thread count.
pub fn two_sample_test<R: Rng + ?Sized>(a: &[Vec<f64>], b: &[Vec<f64>], permutations: usize, rng: &mut R) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "both samples must be nonempty");
    assert!(
        a.iter().chain(b).all(|x| x.len() == a[0].len()),
        "feature dimensions differ"
    );
    let (sa, sb) = standardize(a, b);
    let pooled: Vec<Vec<f64>> = sa.into_iter().chain(sb).collect();
    let dist = Distances::new(&pooled);
    let na = a.len();
    let labels: Vec<bool> = (0..pooled.len()).map(|i| i < na).collect();
    let observed = dist.energy(&labels, na);
    let master = rng.next_u64();
    let exceed = (0..permutations as u64)
        .into_par_iter()
        .filter(|&p| {
            let mut r = RngStream::new(master, p);
            let mut l = labels.clone();
            l.shuffle(&mut r);
            dist.energy(&l, na) >= observed
        })
        .count();
    (1 + exceed) as f64 / (1 + permutations) as f64
}
