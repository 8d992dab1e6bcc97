use std::io::Write;

use serde::Serialize;

/// One summary line of an experiment. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub experiment: String,
    pub d: usize,
    pub n: u64,
    pub reps: u64,
    pub seed: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub exact_target: Option<f64>,
    pub pass: Option<bool>,
    pub runtime_ms: u64,
}

/// Where a record came from: experiment label and parameters.
#[derive(Debug, Clone)]
pub struct Case {
    pub experiment: String,
    pub d: usize,
    pub n: u64,
    pub reps: u64,
    pub seed: u64,
}

impl Case {
    pub fn new(experiment: impl Into<String>, d: usize, n: u64, reps: u64, seed: u64) -> Self {
        Self {
            experiment: experiment.into(),
            d,
            n,
            reps,
            seed,
        }
    }

    fn record(&self, estimate: f64, std_error: f64, k: f64) -> ResultRecord {
        ResultRecord {
            experiment: self.experiment.clone(),
            d: self.d,
            n: self.n,
            reps: self.reps,
            seed: self.seed,
            estimate,
            std_error,
            ci_low: estimate - k * std_error,
            ci_high: estimate + k * std_error,
            exact_target: None,
            pass: None,
            runtime_ms: 0,
        }
    }

    /// Passes when the target lies within `k` standard errors.
    pub fn against_target(&self, estimate: f64, std_error: f64, target: f64, k: f64) -> ResultRecord {
        ResultRecord {
            exact_target: Some(target),
            pass: Some((estimate - target).abs() <= k * std_error),
            ..self.record(estimate, std_error, k)
        }
    }

    /// Passes when the estimate is within the absolute tolerance `tol` of the
    /// target. `std_error` here is the numerical error estimate.
    pub fn within_tolerance(&self, estimate: f64, std_error: f64, target: f64, tol: f64) -> ResultRecord {
        ResultRecord {
            exact_target: Some(target),
            pass: Some((estimate - target).abs() <= tol),
            ..self.record(estimate, std_error, 1.0)
        }
    }

    /// A permutation-test p-value; passes when `p >= alpha`. The standard
    /// error is the Monte Carlo error of the permutation estimate.
    pub fn p_value(&self, p: f64, permutations: usize, alpha: f64, k: f64) -> ResultRecord {
        let se = (p * (1.0 - p) / (permutations + 1) as f64).sqrt();
        let mut r = self.record(p, se, k);
        r.ci_low = r.ci_low.max(0.0);
        r.ci_high = r.ci_high.min(1.0);
        r.pass = Some(p >= alpha);
        r
    }

    /// A bare estimate with an explicit verdict.
    pub fn verdict(&self, estimate: f64, std_error: f64, k: f64, pass: Option<bool>) -> ResultRecord {
        ResultRecord {
            pass,
            ..self.record(estimate, std_error, k)
        }
    }
}

pub fn write_csv<W: Write>(records: &[ResultRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// One JSON object per line.
pub fn write_json_lines<W: Write>(records: &[ResultRecord], mut out: W) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_empty_options() {
        let c = Case::new("wendel", 2, 6, 10, 42);
        let recs = vec![c.verdict(0.5, 0.1, 4.0, None)];
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "experiment,d,n,reps,seed,estimate,std_error,ci_low,ci_high,exact_target,pass,runtime_ms"
        );
        assert_eq!(
            lines.next().unwrap(),
            "wendel,2,6,10,42,0.5,0.1,0.09999999999999998,0.9,,,0"
        );
    }

    #[test]
    fn pass_rule() {
        let c = Case::new("x", 1, 1, 1, 0);
        assert_eq!(c.against_target(1.0, 0.1, 1.35, 4.0).pass, Some(true));
        assert_eq!(c.against_target(1.0, 0.1, 1.45, 4.0).pass, Some(false));
        assert_eq!(c.against_target(3.0, 0.0, 3.0, 4.0).pass, Some(true));
    }
}
