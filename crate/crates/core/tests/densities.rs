use conehull::densities::{
    eval_phi, eval_phi_n, exterior_inverse_power_integral, limit_density_factor, pc_beta_prime, typical_zero_ratio,
    CoordinateRep, PcMode, Region,
};
use conehull::geom::{convex_hull, polar_polytope, Polytope};
use conehull::samplers::{sample_cauchy_point, sample_poisson_pi, RngStream};

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

fn cauchy_hull(n: usize, d: usize, rng: &mut RngStream) -> Polytope {
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|_| sample_cauchy_point(d, rng).iter().map(|x| x / n as f64).collect())
        .collect();
    convex_hull(&pts, d).unwrap()
}

#[test]
fn finite_n_density_integrates_to_one_under_the_limit() {
    // E_φ[φ_n/φ] = ∫ φ_n over polytopes around the origin, which misses only
    // the Wendel mass of hulls avoiding it (about 1e-12 at n = 50)
    let n = 50;
    let mut rng = RngStream::new(71, 0);
    let ratios: Vec<f64> = (0..4000)
        .map(|_| {
            let pi = sample_poisson_pi(2, &mut rng).unwrap();
            let rep = CoordinateRep::from_polytope(convex_hull(&pi.points, 2).unwrap()).unwrap();
            if rep.m() as u64 > n {
                return 0.0;
            }
            (eval_phi_n(&rep, n).unwrap().log_value - eval_phi(&rep).unwrap().log_value).exp()
        })
        .collect();
    let (mean, se) = mean_and_se(&ratios);
    assert!((mean - 1.0).abs() <= 4.0 * se, "{mean} ± {se}");
}

#[test]
fn limit_density_integrates_to_one_under_the_sampler() {
    // the reverse importance weight, drawn from actual rescaled Cauchy hulls
    let n = 50;
    let mut rng = RngStream::new(72, 0);
    let ratios: Vec<f64> = (0..4000)
        .map(|_| {
            let rep = CoordinateRep::from_polytope(cauchy_hull(n, 2, &mut rng)).unwrap();
            let phi = eval_phi(&rep).unwrap();
            if !phi.origin_interior {
                return 0.0;
            }
            (phi.log_value - eval_phi_n(&rep, n as u64).unwrap().log_value).exp()
        })
        .collect();
    let (mean, se) = mean_and_se(&ratios);
    assert!((mean - 1.0).abs() <= 4.0 * se, "{mean} ± {se}");
}

#[test]
fn interval_densities_in_dimension_one() {
    // in R^1 the limit hull is [-a, b] with independent ends of law
    // (1/π) t^{-2} exp(-1/(π t)), so φ factorizes
    let rep = CoordinateRep::new(1, vec![vec![-0.7], vec![1.9]]).unwrap();
    let oracle: f64 = [0.7f64, 1.9]
        .iter()
        .map(|t| (1.0 / std::f64::consts::PI) * t.powi(-2) * (-1.0 / (std::f64::consts::PI * t)).exp())
        .product();
    assert!((eval_phi(&rep).unwrap().value - oracle).abs() < 1e-14);
}

#[test]
fn exterior_integral_is_the_perimeter_of_the_polar() {
    // ∫ 1/ρ_p dσ = ∫ h_{p°} dσ = perimeter of the polar
    let mut rng = RngStream::new(73, 0);
    for _ in 0..200 {
        let pi = sample_poisson_pi(2, &mut rng).unwrap();
        let hull = convex_hull(&pi.points, 2).unwrap();
        let polar = polar_polytope(&hull).unwrap();
        let cyc = polar.cyclic_vertices();
        let perimeter: f64 = (0..cyc.len())
            .map(|i| {
                let (a, b) = (&cyc[i], &cyc[(i + 1) % cyc.len()]);
                (a[0] - b[0]).hypot(a[1] - b[1])
            })
            .sum();
        let e = exterior_inverse_power_integral(&hull, 2).unwrap().value;
        assert!((e - perimeter).abs() <= 1e-9 * perimeter, "{e} vs {perimeter}");
    }
}

#[test]
fn typical_over_zero_cell_density_routes_agree() {
    let p = Polytope::new(2, vec![vec![-1.3, 0.1], vec![0.2, -0.9], vec![0.8, 1.1]]).unwrap();
    let a = limit_density_factor(&p, 2).unwrap();
    let b = typical_zero_ratio(&p).unwrap();
    assert!((a - b).abs() < 1e-12 * a);
}

#[test]
fn polytope_content_in_space_against_sampling() {
    let mut rng = RngStream::new(74, 0);
    let p = cauchy_hull(200, 3, &mut rng);
    let region = Region::Polytope { polytope: p };
    let q = pc_beta_prime(&region, 3, PcMode::Quadrature, &mut rng).unwrap();
    let mc = pc_beta_prime(&region, 3, PcMode::MonteCarlo { samples: 100_000 }, &mut rng).unwrap();
    assert!((q.value - mc.value).abs() <= 4.0 * mc.error, "{q:?} vs {mc:?}");
}
