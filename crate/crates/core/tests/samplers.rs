use std::collections::HashMap;

use conehull::arrangement::{enumerate_cones, face_formula, schlaefli_count};
use conehull::densities::{size_bias_weight, size_bias_weight_from_profile};
use conehull::geom::linalg::dot;
use conehull::geom::{
    face_counts_spherical, solid_angle_exact, LinearHyperplane, PolyhedralCone, SignVector, UnitVector,
};
use conehull::profiles::{profile, profile_from_rays};
use conehull::samplers::cell_uniform::sample_uniform_in_cell_by_cap;
use conehull::samplers::cones::{cover_efron_trial, uniform_cell_by_corners, uniform_cell_by_enumeration};
use conehull::samplers::{sample_cover_efron, sample_hyperplanes, sample_s_minus_e, sample_uniform_in_cell, RngStream};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn chi_square_uniform(counts: &HashMap<Vec<i8>, u64>, cells: usize, draws: u64) -> f64 {
    assert!(counts.len() <= cells);
    let expected = draws as f64 / cells as f64;
    let stat: f64 = counts
        .values()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum::<f64>()
        + (cells - counts.len()) as f64 * expected;
    ChiSquared::new((cells - 1) as f64).unwrap().sf(stat)
}

fn fixed_arrangement(n: usize, d: usize, seed: u64) -> Vec<LinearHyperplane> {
    sample_hyperplanes(n, d, &mut RngStream::new(seed, 0))
}

#[test]
fn both_cell_routes_are_uniform() {
    for (n, d) in [(6, 2), (7, 2), (6, 3)] {
        let hs = fixed_arrangement(n, d, 11);
        let cells = schlaefli_count(n as u64, d as u64 + 1) as usize;
        let draws = 300 * cells as u64;
        let mut rng = RngStream::new(12, (n * 10 + d) as u64);
        let mut by_corners = HashMap::new();
        let mut by_enumeration = HashMap::new();
        for _ in 0..draws {
            let (c, _) = uniform_cell_by_corners(&hs, &mut rng).unwrap();
            *by_corners.entry(c.cell().as_slice().to_vec()).or_insert(0) += 1;
            let c = uniform_cell_by_enumeration(&hs, &mut rng).unwrap();
            *by_enumeration.entry(c.cell().as_slice().to_vec()).or_insert(0) += 1;
        }
        let p1 = chi_square_uniform(&by_corners, cells, draws);
        let p2 = chi_square_uniform(&by_enumeration, cells, draws);
        assert!(p1 > 1e-3 && p2 > 1e-3, "n={n} d={d}: p = {p1}, {p2}");
    }
}

#[test]
fn wendel_acceptance_rate() {
    let reps = 40_000;
    let mut rng = RngStream::new(21, 0);
    for (d, n) in [(1, 3), (2, 5), (3, 6)] {
        let hits = (0..reps).filter(|_| cover_efron_trial(n, d, &mut rng).unwrap()).count();
        let p = schlaefli_count(n as u64, d as u64 + 1) as f64 / 2f64.powi(n as i32);
        let se = (p * (1.0 - p) / reps as f64).sqrt();
        let est = hits as f64 / reps as f64;
        assert!((est - p).abs() <= 4.0 * se, "d={d} n={n}: {est} vs {p}");
    }
}

#[test]
fn cover_efron_rays_match_schlaefli_facets() {
    // the Cover-Efron cone is distributed as the polar of the Schläfli cone,
    // so its ray count has the Schläfli facet-count mean; in R^3 that is the
    // spherical f_0 mean
    let (n, d, reps) = (7, 2, 6000);
    let mut rng = RngStream::new(31, 0);
    let counts: Vec<f64> = (0..reps)
        .map(|_| face_counts_spherical(&sample_cover_efron(n, d, &mut rng).unwrap().cone).unwrap()[0] as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / reps as f64;
    let var = counts.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
    let (num, den) = face_formula(n as u64, d as u64, 0);
    let target = num as f64 / den as f64;
    assert!(
        (mean - target).abs() <= 4.0 * (var / reps as f64).sqrt(),
        "{mean} vs {target}"
    );
}

#[test]
fn fan_and_cap_samplers_hit_subcones_in_proportion() {
    let hs = fixed_arrangement(4, 2, 41);
    let arr = enumerate_cones(hs.clone()).unwrap();
    let cone = arr
        .cells
        .iter()
        .max_by(|a, b| solid_angle_exact(a).unwrap().total_cmp(&solid_angle_exact(b).unwrap()))
        .unwrap();
    // split the cell by a plane through its interior point
    let x = cone.interior_point();
    let a = [0.3, -0.8, 0.52];
    let t = dot(&a, x);
    let cut = UnitVector::normalize(&[a[0] - t * x[0], a[1] - t * x[1], a[2] - t * x[2]]).unwrap();
    let mut planes = cone.hyperplanes().to_vec();
    planes.push(LinearHyperplane::new(cut.clone()));
    let mut signs = cone.cell().as_slice().to_vec();
    signs.push(1);
    let half = PolyhedralCone::new(planes, SignVector::new(signs).unwrap()).unwrap();
    let ratio = solid_angle_exact(&half).unwrap() / solid_angle_exact(cone).unwrap();
    assert!(ratio > 0.05 && ratio < 0.95);
    let reps = 40_000;
    let se = (ratio * (1.0 - ratio) / reps as f64).sqrt();
    let mut rng = RngStream::new(42, 0);
    let fan = (0..reps)
        .filter(|_| dot(&cut, &sample_uniform_in_cell(cone, &mut rng).unwrap()) > 0.0)
        .count() as f64
        / reps as f64;
    let cap = (0..reps)
        .filter(|_| dot(&cut, &sample_uniform_in_cell_by_cap(cone, &mut rng).unwrap()) > 0.0)
        .count() as f64
        / reps as f64;
    assert!((fan - ratio).abs() <= 4.0 * se, "fan {fan} vs {ratio}");
    assert!((cap - ratio).abs() <= 4.0 * se, "cap {cap} vs {ratio}");
}

#[test]
fn solid_angle_equals_half_the_profile_content() {
    // the gnomonic chart at the south pole pushes the uniform law of the
    // lower half-sphere to the Cauchy law, so C·α(cone) = C·PC(K/n)/2
    let mut rng = RngStream::new(51, 0);
    let south = UnitVector::south_pole(3);
    let mut checked = 0;
    for n in [5u64, 10, 40] {
        for _ in 0..200 {
            let s = sample_s_minus_e(n as usize, 2, &mut rng).unwrap();
            let cone = s.cone.with_rays().unwrap();
            let p = profile(&cone, &south, n as f64).unwrap();
            let Some(k) = p.polytope() else { continue };
            let direct = size_bias_weight(&cone, n).unwrap();
            let via_profile = size_bias_weight_from_profile(k, n).unwrap();
            assert!(
                (direct - via_profile).abs() <= 1e-10 * direct.max(1.0),
                "{direct} vs {via_profile}"
            );
            checked += 1;
        }
    }
    assert!(checked > 300);
}

#[test]
fn profile_routes_agree() {
    let mut rng = RngStream::new(61, 0);
    let south = UnitVector::south_pole(3);
    for _ in 0..300 {
        let s = sample_s_minus_e(12, 2, &mut rng).unwrap();
        let cone = s.cone.with_rays().unwrap();
        let a = profile(&cone, &south, 12.0).unwrap();
        let b = profile_from_rays(&cone, &south, 12.0).unwrap();
        assert_eq!(a.is_bounded(), b.is_bounded());
        if let (Some(p), Some(q)) = (a.polytope(), b.polytope()) {
            assert_eq!(p.num_vertices(), q.num_vertices());
            for (x, y) in p.vertices().iter().zip(q.vertices()) {
                assert!(x.iter().zip(y).all(|(u, v)| (u - v).abs() < 1e-8));
            }
        }
    }
}
