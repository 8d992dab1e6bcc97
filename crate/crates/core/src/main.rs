use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use conehull::arrangement::{arrangement_face_census, enumerate_cones};
use conehull::densities::{
    eval_phi, eval_phi_n, exterior_inverse_power_integral, pc_beta_prime, CoordinateRep, PcMode, Region,
};
use conehull::geom::{convex_hull, extreme_rays, polar_polytope, Polytope};
use conehull::harness::svg::{polygon_object, tessellation_objects};
use conehull::harness::{
    run_experiment, verify, write_csv, write_json_lines, write_svg, ExperimentConfig, HarnessError, OneOrMany,
    ResultRecord, SvgObject, SEED_ENV,
};
use conehull::profiles::{sample_pn_star, sample_qn_star};
use conehull::samplers::{
    sample_cover_efron, sample_hyperplanes, sample_poisson_pi, sample_r_n, sample_s_minus_e, sample_schlaefli_cone,
    RngStream,
};
use conehull::tessellation::{
    cell_features, intensity_gamma, sample_pht, sample_typical_cell, sample_zero_cell, window_cells, TypicalMethod,
};

/// Random cones and the Poisson hyperplane tessellations that their profiles
/// converge to.
#[derive(Parser)]
#[command(name = "conehull", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full acceptance suite and print one CSV table. Exits with 1
    /// when any criterion fails.
    Verify {
        #[arg(long, env = SEED_ENV, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON lines instead of CSV.
        #[arg(long)]
        json: bool,
    },
    /// Run one experiment described by a TOML config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Draw random cones or polytopes and print them as JSON lines.
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Number of samples, one JSON line each.
        #[arg(long, alias = "count", default_value_t = 1)]
        reps: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 42)]
        seed: u64,
        /// Hyperplane intensity for tessellation cells (default: the limit
        /// intensity for `d`).
        #[arg(long)]
        gamma: Option<f64>,
        /// Window radius for window-based typical cells.
        #[arg(long, default_value_t = 40.0)]
        radius: f64,
    },
    /// Enumerate the cells of a random central arrangement and print its
    /// face census.
    Enumerate {
        /// Ambient dimension of the arrangement.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 42)]
        seed: u64,
    },
    /// Sample Poisson hyperplane tessellations and print cell features as
    /// JSON lines: every complete cell in the window, or one typical cell
    /// per replicate with `--typical`.
    Pht {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long = "R", alias = "radius", default_value_t = 12.0)]
        radius: f64,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum)]
        typical: Option<TypicalArg>,
        /// Also draw the first replicate's tessellation (planar only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Sample rescaled cone profiles.
    Profile {
        #[arg(long, value_enum, default_value_t = ProfileKind::Qn)]
        kind: ProfileKind,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long, alias = "count", default_value_t = 1)]
        reps: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 42)]
        seed: u64,
    },
    /// Evaluate a density or integral at a polytope read from JSON
    /// (`{"dim": 2, "points": [[x, y], ...]}`).
    Density {
        #[arg(long, value_enum)]
        eval: DensityEval,
        #[arg(long)]
        config: PathBuf,
        /// Number of points for `phin`.
        #[arg(long, default_value_t = 1000)]
        n: u64,
        /// Monte Carlo samples for `pc` in dimensions without a closed form.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, env = SEED_ENV, default_value_t = 42)]
        seed: u64,
    },
    /// Sweep n for the density convergence experiment and print CSV.
    Converge {
        #[arg(long, value_delimiter = ',', default_values_t = vec![100u64, 1000, 10_000, 100_000])]
        n: Vec<u64>,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Draw planar objects as SVG: either a fresh sample (`--what`) or the
    /// polygons in a file of JSON lines with `dim` and `vertices` fields, as
    /// printed by `sample` and `profile` (`--input`).
    Plot {
        #[arg(long, value_enum, required_unless_present = "input", conflicts_with = "input")]
        what: Option<PlotKind>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, alias = "svg")]
        out: PathBuf,
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long = "R", alias = "radius", default_value_t = 12.0)]
        radius: f64,
        #[arg(long, env = SEED_ENV, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleKind {
    Schlaefli,
    CoverEfron,
    #[value(name = "rn", alias = "r-n")]
    RN,
    SMinusE,
    PnStar,
    QnStar,
    #[value(name = "pi", alias = "pi-hull")]
    PiHull,
    ZeroCell,
    TypicalImportance,
    TypicalWindow,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileKind {
    Pn,
    Qn,
}

#[derive(Clone, Copy, ValueEnum)]
enum DensityEval {
    Phi,
    Phin,
    Pc,
    Exterior,
}

#[derive(Clone, Copy, ValueEnum)]
enum TypicalArg {
    Window,
    Importance,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotKind {
    Pht,
    ZeroCell,
    Profile,
    PiHull,
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(records: &[ResultRecord], out: &Option<PathBuf>, json: bool) -> Result<(), HarnessError> {
    let mut w = output(out)?;
    if json {
        write_json_lines(records, &mut w)?;
    } else {
        write_csv(records, &mut w)?;
    }
    w.flush()?;
    Ok(())
}

fn polytope_json(p: &Polytope) -> serde_json::Value {
    json!({ "dim": p.dim(), "vertices": p.vertices() })
}

fn print_line(v: &serde_json::Value) {
    println!("{v}");
}

/// Planar polygons from JSON lines carrying `dim` and `vertices`.
fn polygons_from_lines(text: &str) -> conehull::Result<Vec<SvgObject>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            let p: Polytope = serde_json::from_str(line)
                .map_err(|e| conehull::Error::InvalidArgument(format!("line {}: {e}", i + 1)))?;
            if p.dim() != 2 {
                return Err(conehull::Error::Unsupported("drawing outside the plane".into()));
            }
            Ok(polygon_object(&p.cyclic_vertices()))
        })
        .collect()
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Verify {
            seed,
            workers,
            out,
            json,
        } => {
            let outcomes = verify(seed, workers)?;
            let records: Vec<ResultRecord> = outcomes.iter().flat_map(|o| o.records.clone()).collect();
            emit(&records, &out, json)?;
            for o in &outcomes {
                eprintln!(
                    "criterion {:>2} {:<20} {}",
                    o.index,
                    o.experiment,
                    if o.passed() { "PASS" } else { "FAIL" }
                );
            }
            Ok(outcomes.iter().all(|o| o.passed()))
        }
        Command::Run { config, out, json } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = ExperimentConfig::from_toml(&text)?;
            let records = run_experiment(&cfg)?;
            emit(&records, &out, json)?;
            Ok(records.iter().all(|r| r.pass != Some(false)))
        }
        Command::Sample {
            kind,
            d,
            n,
            reps,
            seed,
            gamma,
            radius,
        } => {
            let gamma = gamma.unwrap_or_else(|| intensity_gamma(d as u32));
            for i in 0..reps {
                let mut rng = RngStream::new(seed, i as u64);
                let cone = |s: conehull::samplers::ConeSample| -> conehull::Result<serde_json::Value> {
                    let rays: Vec<Vec<f64>> = extreme_rays(&s.cone)?
                        .into_iter()
                        .map(|r| r.direction.into_inner())
                        .collect();
                    Ok(json!({ "kind": s.kind, "rays": rays, "trials": s.trials }))
                };
                let v = match kind {
                    SampleKind::Schlaefli => cone(sample_schlaefli_cone(n, d, &mut rng)?)?,
                    SampleKind::CoverEfron => cone(sample_cover_efron(n, d, &mut rng)?)?,
                    SampleKind::RN => cone(sample_r_n(n, d, &mut rng)?)?,
                    SampleKind::SMinusE => cone(sample_s_minus_e(n, d, &mut rng)?)?,
                    SampleKind::PnStar => polytope_json(&sample_pn_star(n, d, &mut rng)?.polytope),
                    SampleKind::QnStar => polytope_json(&sample_qn_star(n, d, &mut rng)?.polytope),
                    SampleKind::PiHull => {
                        let pi = sample_poisson_pi(d, &mut rng)?;
                        polytope_json(&convex_hull(&pi.points, d)?)
                    }
                    SampleKind::ZeroCell => polytope_json(&sample_zero_cell(d, gamma, &mut rng)?.polytope),
                    SampleKind::TypicalImportance | SampleKind::TypicalWindow => {
                        let method = if matches!(kind, SampleKind::TypicalWindow) {
                            TypicalMethod::Window
                        } else {
                            TypicalMethod::Importance
                        };
                        let w = sample_typical_cell(d, gamma, radius, method, &mut rng)?;
                        json!({ "dim": d, "vertices": w.polytope.vertices(), "weight": w.weight })
                    }
                };
                print_line(&v);
            }
            Ok(true)
        }
        Command::Enumerate { dim, n, seed } => {
            if dim < 2 {
                return Err(conehull::Error::InvalidArgument("ambient dimension must be at least 2".into()).into());
            }
            let mut rng = RngStream::new(seed, 0);
            let arr = enumerate_cones(sample_hyperplanes(n, dim - 1, &mut rng))?;
            let census = arrangement_face_census(&arr)?;
            println!("{}", serde_json::to_string_pretty(&census).expect("serializable"));
            Ok(census.cells as u128 == census.expected_cells)
        }
        Command::Pht {
            d,
            gamma,
            radius,
            reps,
            seed,
            typical,
            svg,
        } => {
            let gamma = gamma.unwrap_or_else(|| intensity_gamma(d as u32));
            if svg.is_some() && d != 2 {
                return Err(conehull::Error::Unsupported("drawing outside the plane".into()).into());
            }
            for r in 0..reps {
                let mut rng = RngStream::new(seed, r as u64);
                if let Some(t) = typical {
                    let method = match t {
                        TypicalArg::Window => TypicalMethod::Window,
                        TypicalArg::Importance => TypicalMethod::Importance,
                    };
                    let w = sample_typical_cell(d, gamma, radius, method, &mut rng)?;
                    print_line(
                        &json!({ "rep": r, "method": method, "weight": w.weight, "features": cell_features(&w.polytope) }),
                    );
                    continue;
                }
                let process = sample_pht(d, gamma, radius, &mut rng)?;
                for (i, c) in window_cells(&process)?.iter().filter(|c| c.complete).enumerate() {
                    print_line(&json!({ "rep": r, "cell": i, "features": cell_features(&c.polytope) }));
                }
                if r == 0 {
                    if let Some(path) = &svg {
                        write_svg(&tessellation_objects(&process), path)?;
                    }
                }
            }
            Ok(true)
        }
        Command::Profile { kind, d, n, reps, seed } => {
            for i in 0..reps {
                let mut rng = RngStream::new(seed, i as u64);
                let s = match kind {
                    ProfileKind::Pn => sample_pn_star(n, d, &mut rng)?,
                    ProfileKind::Qn => sample_qn_star(n, d, &mut rng)?,
                };
                let mut v = polytope_json(&s.polytope);
                v["trials"] = json!(s.trials);
                print_line(&v);
            }
            Ok(true)
        }
        Command::Density {
            eval,
            config,
            n,
            samples,
            seed,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let x: CoordinateRep = serde_json::from_str(&text)
                .map_err(|e| conehull::Error::InvalidArgument(format!("{}: {e}", config.display())))?;
            let d = x.dim();
            let v = match eval {
                DensityEval::Phi => {
                    let r = eval_phi(&x)?;
                    json!({ "value": r.value, "log_value": r.log_value, "error": r.error, "origin_interior": r.origin_interior })
                }
                DensityEval::Phin => {
                    let r = eval_phi_n(&x, n)?;
                    json!({ "value": r.value, "log_value": r.log_value, "error": r.error, "n": n })
                }
                DensityEval::Pc => {
                    let mode = match d {
                        1 | 2 => PcMode::Exact,
                        3 if x.polytope().origin_interior() => PcMode::Quadrature,
                        _ => PcMode::MonteCarlo { samples },
                    };
                    let region = Region::Polytope {
                        polytope: x.polytope().clone(),
                    };
                    let r = pc_beta_prime(&region, d, mode, &mut RngStream::new(seed, 0))?;
                    json!({ "value": r.value, "error": r.error })
                }
                DensityEval::Exterior => {
                    let r = exterior_inverse_power_integral(x.polytope(), d)?;
                    json!({ "value": r.value, "error": r.error })
                }
            };
            print_line(&v);
            Ok(true)
        }
        Command::Converge {
            n,
            samples,
            seed,
            workers,
        } => {
            let mut cfg = ExperimentConfig::preset("density-convergence", seed)?;
            cfg.n = OneOrMany::Many(n);
            cfg.reps = samples;
            cfg.workers = workers;
            let records = run_experiment(&cfg)?;
            emit(&records, &None, false)?;
            Ok(records.iter().all(|r| r.pass != Some(false)))
        }
        Command::Plot {
            what,
            input,
            out,
            n,
            radius,
            seed,
        } => {
            let mut rng = RngStream::new(seed, 0);
            let objects: Vec<SvgObject> = match (what, input) {
                (_, Some(path)) => polygons_from_lines(&std::fs::read_to_string(&path)?)?,
                (None, None) => unreachable!("clap requires one of --what and --input"),
                (Some(what), None) => match what {
                    PlotKind::Pht => tessellation_objects(&sample_pht(2, intensity_gamma(2), radius, &mut rng)?),
                    PlotKind::ZeroCell => {
                        let z = sample_zero_cell(2, intensity_gamma(2), &mut rng)?;
                        let mut o = tessellation_objects(&z.process);
                        o.push(polygon_object(&z.polytope.cyclic_vertices()));
                        o
                    }
                    PlotKind::Profile => {
                        let p = sample_qn_star(n, 2, &mut rng)?.polytope;
                        vec![polygon_object(&p.cyclic_vertices())]
                    }
                    PlotKind::PiHull => {
                        let pi = sample_poisson_pi(2, &mut rng)?;
                        let hull = convex_hull(&pi.points, 2)?;
                        let mut o = vec![polygon_object(&hull.cyclic_vertices())];
                        o.push(polygon_object(&polar_polytope(&hull)?.cyclic_vertices()));
                        o.extend(pi.points.iter().map(|p| SvgObject::Point([p[0], p[1]])));
                        o
                    }
                },
            };
            write_svg(&objects, &out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
