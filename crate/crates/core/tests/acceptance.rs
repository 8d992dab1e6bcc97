//! Acceptance suite: one line per criterion, nonzero exit when any fails.
//! Criteria 1-9 run in-process from their presets; criterion 10 runs the
//! binary four times and compares the tables.

use std::process::{Command, ExitCode};
use std::time::Instant;

use conehull::harness::{run_experiment, ExperimentConfig, EXPERIMENTS};

const SEED: u64 = 42;
const WORKERS: usize = 8;

fn verify_table(workers: usize) -> Result<Vec<Vec<String>>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_conehull"))
        .args(["verify", "--seed", &SEED.to_string(), "--workers", &workers.to_string()])
        .env_remove("CONEHULL_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if !matches!(out.status.code(), Some(0 | 1)) {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    let keep: Vec<usize> = (0..headers.len()).filter(|&i| &headers[i] != "runtime_ms").collect();
    let mut rows = vec![keep.iter().map(|&i| headers[i].to_string()).collect()];
    for rec in reader.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        rows.push(keep.iter().map(|&i| rec[i].to_string()).collect());
    }
    Ok(rows)
}

fn reproducibility() -> Result<bool, String> {
    let runs = [
        verify_table(1)?,
        verify_table(1)?,
        verify_table(WORKERS)?,
        verify_table(WORKERS)?,
    ];
    Ok(runs[0].len() > 1 && runs.iter().all(|r| r == &runs[0]))
}

fn main() -> ExitCode {
    let mut all = true;
    for (i, &name) in EXPERIMENTS.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = if name == "reproducibility" {
            match reproducibility() {
                Ok(same) => (same, "verify tables for workers 1, 1, 8, 8".to_string()),
                Err(e) => (false, e),
            }
        } else {
            let mut cfg = ExperimentConfig::preset(name, SEED).expect("preset exists");
            cfg.workers = WORKERS;
            match run_experiment(&cfg) {
                Ok(records) => {
                    let failed: Vec<String> = records
                        .iter()
                        .filter(|r| r.pass == Some(false))
                        .map(|r| format!("{} n={} estimate={}", r.experiment, r.n, r.estimate))
                        .collect();
                    let ok = !records.is_empty() && failed.is_empty();
                    let detail = if ok {
                        format!("{} records", records.len())
                    } else {
                        failed.join("; ")
                    };
                    (ok, detail)
                }
                Err(e) => (false, e.to_string()),
            }
        };
        all &= pass;
        println!(
            "criterion {:>2} {:<20} {}  ({}, {:.1}s)",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
