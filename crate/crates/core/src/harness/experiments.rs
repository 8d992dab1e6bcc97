use std::f64::consts::PI;
use std::time::Instant;

use super::config::ExperimentConfig;
use super::record::{Case, ResultRecord};
use super::runner::Runner;
use super::stats::{difference, summarize, two_sample_test, weighted_mean, Summary};
use super::HarnessError;
use crate::arrangement::{arrangement_face_census, enumerate_cones, schlaefli_count, ConicalArrangement};
use crate::densities::constants::{c_d, intensity_gamma, Constants};
use crate::densities::{
    eval_phi, eval_phi_n, exterior_inverse_power_integral, l1_terms, pc_beta_prime, CoordinateRep, PcMode, Region,
};
use crate::error::{Error, Result};
use crate::geom::{convex_hull, face_counts_spherical, polar_polytope, solid_angle_exact, Polytope, UnitVector};
use crate::profiles::{sample_pn_star, sample_qn_star};
use crate::samplers::{
    cover_efron_trial, sample_cauchy_point, sample_hyperplanes, sample_poisson_pi, sample_s_minus_e,
    sample_schlaefli_cone, RngStream,
};
use crate::tessellation::{
    cell_features, resample_weighted, sample_typical_cell, sample_zero_cell, TypicalMethod, WeightedPolytope,
};

/// Runs one named experiment. Replicate `r` of sub-sample `p` draws from
/// `RngStream(seed, p << 32 | r)`; the records do not depend on
/// `workers`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRecord>, HarnessError> {
    config.validate()?;
    let runner = Runner::new(config.workers, config.seed);
    let records = match config.experiment.as_str() {
        "cone-count" => cone_count(config, &runner)?,
        "face-formula" => face_formula(config, &runner)?,
        "wendel" => wendel(config, &runner)?,
        "size-bias" => size_bias(config, &runner)?,
        "duality-chain" => duality_chain(config, &runner)?,
        "main-theorem" => main_theorem(config, &runner)?,
        "density-convergence" => density_convergence(config, &runner)?,
        "closed-forms" => closed_forms(config)?,
        "beta-prime-limit" => beta_prime_limit(config, &runner)?,
        "reproducibility" => reproducibility(config)?,
        other => unreachable!("validated experiment name {other}"),
    };
    Ok(records)
}

fn timed<T>(f: impl FnOnce() -> Result<Vec<ResultRecord>, T>) -> Result<Vec<ResultRecord>, T> {
    let start = Instant::now();
    let mut recs = f()?;
    let ms = start.elapsed().as_millis() as u64;
    for r in &mut recs {
        r.runtime_ms = ms;
    }
    Ok(recs)
}

fn case(config: &ExperimentConfig, label: &str, d: usize, n: u64, reps: usize) -> Case {
    Case::new(label, d, n, reps as u64, config.seed)
}

fn part(i: usize) -> u32 {
    i as u32
}

/// Enumerates a fresh arrangement, drawing again on the (probability zero)
/// event of a non-generic one.
fn random_arrangement(n: usize, d: usize, rng: &mut RngStream) -> Result<ConicalArrangement> {
    let mut last = Error::NonGeneric(String::new());
    for _ in 0..3 {
        match enumerate_cones(sample_hyperplanes(n, d, rng)) {
            Err(e @ Error::NonGeneric(_)) => last = e,
            other => return other,
        }
    }
    Err(last)
}

fn fraction(flags: &[bool]) -> f64 {
    flags.iter().filter(|&&b| b).count() as f64 / flags.len() as f64
}

fn cone_count(config: &ExperimentConfig, runner: &Runner) -> Result<Vec<ResultRecord>, HarnessError> {
    let mut out = Vec::new();
    for (i, (d, n)) in config.cases().into_iter().enumerate() {
        out.extend(timed(|| {
            let target = schlaefli_count(n, d as u64 + 1);
            let ok = runner.replicates(part(i), config.reps, |rng| {
                Ok::<_, Error>(random_arrangement(n as usize, d, rng)?.cells.len() as u128 == target)
            })?;
            // the share of arrangements with exactly C(n, d+1) cells
            let c = case(config, "cone-count", d, n, config.reps);
            Ok::<_, HarnessError>(vec![c.against_target(fraction(&ok), 0.0, 1.0, config.k)])
        })?);
    }
    Ok(out)
}

fn face_formula(config: &ExperimentConfig, runner: &Runner) -> Result<Vec<ResultRecord>, HarnessError> {
    let mut out = Vec::new();
    for (i, (d, n)) in config.cases().into_iter().enumerate() {
        out.extend(timed(|| {
            let ok = runner.replicates(part(i), config.reps, |rng| {
                let census = arrangement_face_census(&random_arrangement(n as usize, d, rng)?)?;
                Ok::<_, Error>(
                    census.cells as u128 == census.expected_cells
                        && census.rows.iter().all(|r| r.incidence_identity)
                        && census.spherical_means.iter().all(|m| m.matches_formula),
                )
            })?;
            let c = case(config, "face-formula", d, n, config.reps);
            Ok::<_, HarnessError>(vec![c.against_target(fraction(&ok), 0.0, 1.0, config.k)])
        })?);
    }
    Ok(out)
}

fn binomial_summary(flags: &[bool]) -> Summary {
    let p = fraction(flags);
    Summary {
        mean: p,
        std_error: (p * (1.0 - p) / flags.len() as f64).sqrt(),
        count: flags.len(),
    }
}

fn wendel(config: &ExperimentConfig, runner: &Runner) -> Result<Vec<ResultRecord>, HarnessError> {
    let mut out = Vec::new();
    for (i, (d, n)) in config.cases().into_iter().enumerate() {
        out.extend(timed(|| {
            let hits = runner.replicates(part(i), config.reps, |rng| cover_efron_trial(n as usize, d, rng))?;
            let s = binomial_summary(&hits);
            let target = schlaefli_count(n, d as u64 + 1) as f64 / 2f64.powi(n as i32);
            let c = case(config, "wendel", d, n, config.reps);
            Ok::<_, HarnessError>(vec![c.against_target(s.mean, s.std_error, target, config.k)])
        })?);
    }
    Ok(out)
}

/// `(α, spherical f_0)` of a pointed cone.
fn angle_and_vertices(cone: &crate::geom::PolyhedralCone) -> Result<(f64, f64)> {
    Ok((solid_angle_exact(cone)?, face_counts_spherical(cone)?[0] as f64))
}

fn size_bias(config: &ExperimentConfig, runner: &Runner) -> Result<Vec<ResultRecord>, HarnessError> {
    let mut out = Vec::new();
    for (i, (d, n)) in config.cases().into_iter().enumerate() {
        out.extend(timed(|| {
            let count = schlaefli_count(n, d as u64 + 1) as f64;
            let plain = runner.replicates(part(2 * i), config.reps, |rng| {
                angle_and_vertices(&sample_schlaefli_cone(n as usize, d, rng)?.cone)
            })?;
            let biased = runner.replicates(part(2 * i + 1), config.reps, |rng| {
                angle_and_vertices(&sample_s_minus_e(n as usize, d, rng)?.cone)
            })?;
            let weighted =
                |f: &dyn Fn(f64, f64) -> f64| -> Vec<f64> { plain.iter().map(|&(a, v)| f(a, v) * count * a).collect() };
            let direct = |f: &dyn Fn(f64, f64) -> f64| -> Vec<f64> { biased.iter().map(|&(a, v)| f(a, v)).collect() };
            let tests: [(&str, &dyn Fn(f64, f64) -> f64); 3] = [
                ("size-bias/one", &|_, _| 1.0),
                ("size-bias/alpha", &|a, _| a),
                ("size-bias/f0", &|_, v| v),
            ];
            let mut recs: Vec<ResultRecord> = tests
                .iter()
                .map(|(label, f)| {
                    let diff = difference(&summarize(&weighted(f)), &summarize(&direct(f)));
                    case(config, label, d, n, config.reps).against_target(diff.mean, diff.std_error, 0.0, config.k)
                })
                .collect();
            let mean_alpha = summarize(&plain.iter().map(|p| p.0).collect::<Vec<_>>());
            recs.push(case(config, "size-bias/mean-alpha", d, n, config.reps).against_target(
                mean_alpha.mean,
                mean_alpha.std_error,
                1.0 / count,
                config.k,
            ));
            Ok::<_, HarnessError>(recs)
        })?);
    }
    Ok(out)
}

fn features(p: &Polytope) -> Vec<f64> {
    cell_features(p).vector()
}

fn polar_pi_hull(d: usize, rng: &mut RngStream) -> Result<Polytope> {
    let pi = sample_poisson_pi(d, rng)?;
    polar_polytope(&convex_hull(&pi.points, d)?)
}

fn test_rng(runner: &Runner, which: u64) -> RngStream {
    runner.stream(u32::MAX, which)
}

fn duality_chain(config: &ExperimentConfig, runner: &Runner) -> Result<Vec<ResultRecord>, HarnessError> {
    let mut out = Vec::new();
    for (i, (d, n)) in config.cases().into_iter().enumerate() {
        let base = 4 * i;
        let gamma = config.gamma_for(d);
        out.extend(timed(|| {
            let pn = runner.replicates(part(base), config.reps, |rng| {
                Ok::<_, Error>(features(&sample_pn_star(n as usize, d, rng)?.polytope))
            })?;
            let pi_a = runner.replicates(part(base + 1), config.reps, |rng| {
                Ok::<_, Error>(features(&polar_pi_hull(d, rng)?))
            })?;
            let p =
                runner.install(|| two_sample_test(&pn, &pi_a, config.permutations, &mut test_rng(runner, base as u64)));
            Ok::<_, HarnessError>(vec![case(config, "duality-chain/pn-vs-polar-pi", d, n, config.reps)
                .p_value(p, config.permutations, config.alpha, config.k)])
        })?);
        out.extend(timed(|| {
            let z0 = runner.replicates(part(base + 2), config.reps, |rng| {
                Ok::<_, Error>(features(&sample_zero_cell(d, gamma, rng)?.polytope))
            })?;
            let pi_b = runner.replicates(part(base + 3), config.reps, |rng| {
                Ok::<_, Error>(features(&polar_pi_hull(d, rng)?))
            })?;
            let p = runner
                .install(|| two_sample_test(&z0, &pi_b, config.permutations, &mut test_rng(runner, base as u64 + 1)));
            Ok::<_, HarnessError>(vec![case(
                config,
                "duality-chain/zero-cell-vs-polar-pi",
                d,
                n,
                config.reps,
            )
            .p_value(p, config.permutations, config.alpha, config.k)])
        })?);
    }
    Ok(out)
}

fn main_theorem(config: &ExperimentConfig, runner: &Runner) -> Result<Vec<ResultRecord>, HarnessError> {
    let mut out = Vec::new();
    for (i, (d, n)) in config.cases().into_iter().enumerate() {
        let base = 3 * i;
        let gamma = config.gamma_for(d);
        // the mean typical-cell volume scales like γ^{-d}
        let mean_volume = c_d(d as u32) * (intensity_gamma(d as u32) / gamma).powi(d as i32);
        let vertices = 2f64.powi(d as i32);
        out.extend(timed(|| {
            let qn = runner.replicates(part(base), config.reps, |rng| {
                Ok::<_, Error>(sample_qn_star(n as usize, d, rng)?.polytope)
            })?;
            let pool_size = match config.typical_method {
                TypicalMethod::Importance => config.reps * config.pool_factor,
                TypicalMethod::Window => config.reps,
            };
            let radius = config.radius.unwrap_or(20.0 / gamma);
            let pool: Vec<WeightedPolytope> = runner.replicates(part(base + 1), pool_size, |rng| {
                sample_typical_cell(d, gamma, radius, config.typical_method, rng)
            })?;
            let qn_feats: Vec<Vec<f64>> = qn.iter().map(features).collect();
            let qn_f0 = summarize(&qn_feats.iter().map(|f| f[1]).collect::<Vec<_>>());
            let weights: Vec<f64> = pool.iter().map(|w| w.weight).collect();
            let pool_f0: Vec<f64> = pool.iter().map(|w| w.polytope.num_vertices() as f64).collect();
            let pool_vol: Vec<f64> = pool.iter().map(|w| w.polytope.volume()).collect();
            let typ_f0 = weighted_mean(&pool_f0, &weights);
            let typ_vol = weighted_mean(&pool_vol, &weights);
            let typical = match config.typical_method {
                TypicalMethod::Importance => {
                    let mut rng = runner.stream(part(base + 2), 0);
                    resample_weighted(&pool, config.reps, &mut rng)
                }
                TypicalMethod::Window => pool.iter().map(|w| w.polytope.clone()).collect(),
            };
            let typ_feats: Vec<Vec<f64>> = typical.iter().map(features).collect();
            let p = runner.install(|| {
                two_sample_test(
                    &qn_feats,
                    &typ_feats,
                    config.permutations,
                    &mut test_rng(runner, base as u64),
                )
            });
            let c = |label: &str, reps: usize| case(config, label, d, n, reps);
            Ok::<_, HarnessError>(vec![
                c("main-theorem/qn-mean-f0", config.reps).against_target(
                    qn_f0.mean,
                    qn_f0.std_error,
                    vertices,
                    config.k,
                ),
                c("main-theorem/typical-mean-f0", pool_size).against_target(
                    typ_f0.mean,
                    typ_f0.std_error,
                    vertices,
                    config.k,
                ),
                c("main-theorem/typical-mean-area", pool_size).against_target(
                    typ_vol.mean,
                    typ_vol.std_error,
                    mean_volume,
                    3.0,
                ),
                c("main-theorem/two-sample", config.reps).p_value(p, config.permutations, config.alpha, config.k),
            ])
        })?);
    }
    Ok(out)
}

/// `[-1,1]^2` turned by 0.2 rad so that no two corners share a first
/// coordinate.
pub fn rotated_square() -> CoordinateRep {
    let t = 0.2f64;
    let v = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]
        .iter()
        .map(|p| vec![t.cos() * p[0] - t.sin() * p[1], t.sin() * p[0] + t.cos() * p[1]])
        .collect();
    CoordinateRep::new(2, v).expect("corners of a square")
}

fn density_convergence(config: &ExperimentConfig, runner: &Runner) -> Result<Vec<ResultRecord>, HarnessError> {
    let mut ns = config.n.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut out = Vec::new();
    for d in config.d.to_vec() {
        if d != 2 {
            return Err(Error::Unsupported("density convergence is run in the plane".into()).into());
        }
        let x = rotated_square();
        let largest = *ns.last().expect("validated");
        out.extend(timed(|| {
            let phi = eval_phi(&x)?;
            let phin = eval_phi_n(&x, largest)?;
            let gap = (phin.value / phi.value - 1.0).abs();
            let err = (phin.error / phin.value) + (phi.error / phi.value);
            Ok::<_, HarnessError>(vec![case(config, "density-convergence/ratio-gap", d, largest, 1)
                .verdict(gap, err, config.k, Some(gap <= 1e-2))])
        })?);
        out.extend(timed(|| {
            let terms = runner.replicates(0, config.reps, |rng| l1_terms(d, &ns, rng))?;
            let mut recs = Vec::new();
            let mut previous: Option<f64> = None;
            for (j, &n) in ns.iter().enumerate() {
                let s = summarize(&terms.iter().map(|t| t[j]).collect::<Vec<_>>());
                let pass = previous.map(|p| s.mean < p);
                recs.push(case(config, "density-convergence/l1", d, n, config.reps).verdict(
                    s.mean,
                    s.std_error,
                    config.k,
                    pass,
                ));
                previous = Some(s.mean);
            }
            Ok::<_, HarnessError>(recs)
        })?);
    }
    Ok(out)
}

/// Regular `m`-gon with circumradius `r`.
fn regular_polygon(m: usize, r: f64) -> Result<Polytope> {
    let v = (0..m)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / m as f64 + 0.1234567;
            vec![r * t.cos(), r * t.sin()]
        })
        .collect();
    Polytope::new(2, v)
}

fn closed_forms(config: &ExperimentConfig) -> Result<Vec<ResultRecord>, HarnessError> {
    let dims = config.d.to_vec();
    let top = *dims.iter().max().expect("validated");
    let mut out = Vec::new();
    out.extend(timed(|| {
        let mut recs = Vec::new();
        // the disc is squeezed between inscribed and circumscribed polygons,
        // whose exterior integrals bound its own from both sides
        let m = 1 << 18;
        for r in [0.5, 1.0, 3.0] {
            let inner = exterior_inverse_power_integral(&regular_polygon(m, r)?, 2)?.value;
            let outer = exterior_inverse_power_integral(&regular_polygon(m, r / (PI / m as f64).cos())?, 2)?.value;
            let mid = 0.5 * (inner + outer);
            recs.push(
                case(config, "closed-forms/disc-exterior", 2, m as u64, 1).within_tolerance(
                    mid,
                    0.5 * (inner - outer),
                    2.0 * PI / r,
                    1e-9,
                ),
            );
        }
        let sq = exterior_inverse_power_integral(rotated_square().polytope(), 2)?.value;
        recs.push(case(config, "closed-forms/square-exterior", 2, 4, 1).within_tolerance(
            sq,
            0.0,
            4.0 * 2f64.sqrt(),
            1e-9,
        ));
        Ok::<_, HarnessError>(recs)
    })?);
    out.extend(timed(|| {
        let mut rng = RngStream::new(config.seed, 0);
        let mut worst: f64 = 0.0;
        for &d in &dims {
            let h = Region::HalfSpace {
                normal: UnitVector::basis(d, 0),
                offset: 0.0,
            };
            worst = worst.max((pc_beta_prime(&h, d, PcMode::Exact, &mut rng)?.value - 0.5).abs());
        }
        Ok::<_, HarnessError>(vec![
            case(config, "closed-forms/pc-half-space", top, 0, 1).within_tolerance(0.5 + worst, 0.0, 0.5, 0.0)
        ])
    })?);
    out.extend(timed(|| {
        let residual = |k: usize| {
            dims.iter()
                .map(|&d| Constants::new(d as u32).identity_residuals()[k].abs())
                .fold(0.0, f64::max)
        };
        Ok::<_, HarnessError>(vec![
            case(config, "closed-forms/kappa-omega-identity", top, 0, 1).within_tolerance(residual(1), 0.0, 0.0, 1e-12),
            case(config, "closed-forms/c-d-identity", top, 0, 1).within_tolerance(residual(2), 0.0, 0.0, 1e-12),
        ])
    })?);
    Ok(out)
}

fn beta_prime_limit(config: &ExperimentConfig, runner: &Runner) -> Result<Vec<ResultRecord>, HarnessError> {
    let mut out = Vec::new();
    for (i, (d, n)) in config.cases().into_iter().enumerate() {
        out.extend(timed(|| {
            let scaled = runner.replicates(part(2 * i), config.reps, |rng| {
                let pts: Vec<Vec<f64>> = (0..n)
                    .map(|_| sample_cauchy_point(d, rng).into_iter().map(|x| x / n as f64).collect())
                    .collect();
                Ok::<_, Error>(vec![convex_hull(&pts, d)?.num_vertices() as f64])
            })?;
            let limit = runner.replicates(part(2 * i + 1), config.reps, |rng| {
                let pi = sample_poisson_pi(d, rng)?;
                Ok::<_, Error>(vec![convex_hull(&pi.points, d)?.num_vertices() as f64])
            })?;
            let p = runner
                .install(|| two_sample_test(&scaled, &limit, config.permutations, &mut test_rng(runner, i as u64)));
            let diff = difference(
                &summarize(&scaled.iter().map(|v| v[0]).collect::<Vec<_>>()),
                &summarize(&limit.iter().map(|v| v[0]).collect::<Vec<_>>()),
            );
            Ok::<_, HarnessError>(vec![
                case(config, "beta-prime-limit/f0-two-sample", d, n, config.reps).p_value(
                    p,
                    config.permutations,
                    config.alpha,
                    config.k,
                ),
                case(config, "beta-prime-limit/mean-f0-difference", d, n, config.reps).against_target(
                    diff.mean,
                    diff.std_error,
                    0.0,
                    config.k,
                ),
            ])
        })?);
    }
    Ok(out)
}

/// Drops the runtime column, the only field allowed to differ between runs.
pub fn without_runtime(records: &[ResultRecord]) -> Vec<ResultRecord> {
    records
        .iter()
        .map(|r| ResultRecord {
            runtime_ms: 0,
            ..r.clone()
        })
        .collect()
}

fn reproducibility(config: &ExperimentConfig) -> Result<Vec<ResultRecord>, HarnessError> {
    let (d, n) = config.cases()[0];
    timed(|| {
        let mut identical = true;
        for name in ["wendel", "size-bias", "beta-prime-limit"] {
            let mut c = ExperimentConfig::preset(name, config.seed)?;
            c.reps = (config.reps / 10).max(10);
            if name == "size-bias" {
                c.n = super::config::OneOrMany::One(8);
            }
            if name == "beta-prime-limit" {
                c.n = super::config::OneOrMany::One(500);
                c.reps = 200;
                c.permutations = 49;
            }
            let runs: Vec<Vec<ResultRecord>> = [1, 8]
                .iter()
                .map(|&w| {
                    let mut c = c.clone();
                    c.workers = w;
                    run_experiment(&c).map(|r| without_runtime(&r))
                })
                .collect::<Result<_, _>>()?;
            identical &= runs[0] == runs[1];
        }
        let estimate = if identical { 1.0 } else { 0.0 };
        Ok(vec![
            case(config, "reproducibility", d, n, config.reps).within_tolerance(estimate, 0.0, 1.0, 0.0)
        ])
    })
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub index: usize,
    pub experiment: &'static str,
    pub records: Vec<ResultRecord>,
}

impl CriterionOutcome {
    /// Passes when no record has failed.
    pub fn passed(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.pass != Some(false))
    }
}

/// The acceptance suite: every criterion's preset at the given seed.
pub fn verify(seed: u64, workers: usize) -> Result<Vec<CriterionOutcome>, HarnessError> {
    super::config::EXPERIMENTS
        .iter()
        .enumerate()
        .map(|(i, &name)| {
            let mut c = ExperimentConfig::preset(name, seed)?;
            c.workers = workers;
            Ok(CriterionOutcome {
                index: i + 1,
                experiment: name,
                records: run_experiment(&c)?,
            })
        })
        .collect()
}
