//! Experiment orchestration: configs, seeded parallel replicates,
//! statistics, reports and plots.

pub mod config;
pub mod experiments;
pub mod record;
pub mod runner;
pub mod stats;
pub mod svg;

pub use config::{ConfigError, ExperimentConfig, OneOrMany, EXPERIMENTS, SEED_ENV};
pub use experiments::{run_experiment, verify, without_runtime, CriterionOutcome};
pub use record::{write_csv, write_json_lines, Case, ResultRecord};
pub use runner::Runner;
pub use stats::{summarize, two_sample_test, weighted_mean, Summary};
pub use svg::{render_svg, write_svg, SvgObject};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Geometry(#[from] crate::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
