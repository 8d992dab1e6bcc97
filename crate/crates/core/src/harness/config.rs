use serde::{Deserialize, Serialize};

use crate::densities::constants::intensity_gamma;
use crate::tessellation::TypicalMethod;

/// Environment variable that replaces the configured seed.
pub const SEED_ENV: &str = "CONEHULL_SEED";

/// A configuration problem, located by the dotted path of the offending field.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("config error at `{path}`: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// A scalar or a list in the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

pub const EXPERIMENTS: [&str; 10] = [
    "cone-count",
    "face-formula",
    "wendel",
    "size-bias",
    "duality-chain",
    "main-theorem",
    "density-convergence",
    "closed-forms",
    "beta-prime-limit",
    "reproducibility",
];

/// Everything that determines the output of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub d: OneOrMany<usize>,
    pub n: OneOrMany<u64>,
    /// Pair the `d` and `n` lists element by element instead of taking
    /// their product.
    #[serde(default)]
    pub zip: bool,
    /// Hyperplane intensity; defaults to the intensity of the limit
    /// tessellation for `d`.
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Window radius for window-based typical cells.
    #[serde(default, rename = "R", alias = "radius")]
    pub radius: Option<f64>,
    pub reps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Standard errors allowed between estimate and exact target.
    #[serde(default = "default_k")]
    pub k: f64,
    #[serde(default = "default_permutations")]
    pub permutations: usize,
    /// Significance level of two-sample tests.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_typical")]
    pub typical_method: TypicalMethod,
    /// Zero cells drawn per resampled typical cell.
    #[serde(default = "default_pool_factor")]
    pub pool_factor: usize,
}

fn default_workers() -> usize {
    1
}

fn default_k() -> f64 {
    4.0
}

fn default_permutations() -> usize {
    199
}

fn default_alpha() -> f64 {
    0.01
}

fn default_typical() -> TypicalMethod {
    TypicalMethod::Importance
}

fn default_pool_factor() -> usize {
    20
}

impl ExperimentConfig {
    /// The configuration used by the acceptance suite for `name`.
    pub fn preset(name: &str, seed: u64) -> Result<Self, ConfigError> {
        let base = |d: OneOrMany<usize>, n: OneOrMany<u64>, reps: usize| ExperimentConfig {
            experiment: name.to_string(),
            d,
            n,
            zip: false,
            gamma: None,
            radius: None,
            reps,
            seed,
            workers: 1,
            k: default_k(),
            permutations: default_permutations(),
            alpha: default_alpha(),
            typical_method: default_typical(),
            pool_factor: default_pool_factor(),
        };
        use OneOrMany::{Many, One};
        let c = match name {
            "cone-count" => base(Many(vec![1, 2, 3]), Many((1..=10).collect()), 100),
            "face-formula" => base(One(2), Many((3..=8).collect()), 100),
            "wendel" => ExperimentConfig {
                zip: true,
                ..base(Many(vec![1, 2, 2]), Many(vec![3, 6, 4]), 100_000)
            },
            "size-bias" => base(One(2), Many(vec![4, 8, 16]), 20_000),
            "duality-chain" => base(One(2), One(10_000), 2000),
            "main-theorem" => base(One(2), One(256), 2000),
            "density-convergence" => base(One(2), Many(vec![100, 1000, 10_000, 100_000]), 20_000),
            "closed-forms" => base(Many((1..=10).collect()), One(0), 1),
            "beta-prime-limit" => base(One(2), One(10_000), 2000),
            "reproducibility" => base(One(2), One(6), 20_000),
            other => {
                return Err(ConfigError::new(
                    "experiment",
                    format!(
                        "unknown experiment `{other}`; expected one of {}",
                        EXPERIMENTS.join(", ")
                    ),
                ))
            }
        };
        Ok(c)
    }

    /// Reads a TOML file body. Fields left out take the preset values of the
    /// named experiment; `CONEHULL_SEED` overrides the seed.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let table: toml::Table = toml::from_str(text).map_err(|e| ConfigError::new("", e.message()))?;
        let name = match table.get("experiment") {
            Some(toml::Value::String(s)) => s.clone(),
            Some(_) => return Err(ConfigError::new("experiment", "expected a string")),
            None => return Err(ConfigError::new("experiment", "missing field")),
        };
        let mut merged =
            toml::Table::try_from(Self::preset(&name, 0)?).map_err(|e| ConfigError::new("", e.to_string()))?;
        for (k, v) in table {
            merged.insert(k, v);
        }
        let merged = toml::to_string(&merged).map_err(|e| ConfigError::new("", e.to_string()))?;
        let de = toml::Deserializer::parse(&merged).map_err(|e| ConfigError::new("", e.message()))?;
        let mut config: Self = serde_path_to_error::deserialize(de)
            .map_err(|e| ConfigError::new(e.path().to_string(), e.inner().message()))?;
        if let Some(seed) = seed_from_env()? {
            config.seed = seed;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !EXPERIMENTS.contains(&self.experiment.as_str()) {
            return Err(ConfigError::new(
                "experiment",
                format!("unknown experiment `{}`", self.experiment),
            ));
        }
        let ds = self.d.to_vec();
        let ns = self.n.to_vec();
        if ds.is_empty() || ds.iter().any(|&d| d == 0 || d > 10) {
            return Err(ConfigError::new("d", "dimensions must lie in 1..=10"));
        }
        if ns.is_empty() {
            return Err(ConfigError::new("n", "at least one value is required"));
        }
        if self.zip && ds.len() != ns.len() {
            return Err(ConfigError::new(
                "zip",
                "`d` and `n` must have equal length to be zipped",
            ));
        }
        if self.reps == 0 {
            return Err(ConfigError::new("reps", "must be positive"));
        }
        if self.workers == 0 {
            return Err(ConfigError::new("workers", "must be positive"));
        }
        if !(self.k > 0.0) {
            return Err(ConfigError::new("k", "must be positive"));
        }
        if let Some(g) = self.gamma.filter(|g| !(*g > 0.0)) {
            return Err(ConfigError::new("gamma", format!("must be positive, got {g}")));
        }
        if let Some(r) = self.radius.filter(|r| !(*r > 0.0)) {
            return Err(ConfigError::new("R", format!("must be positive, got {r}")));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(ConfigError::new("alpha", "must lie in (0, 1)"));
        }
        if self.pool_factor == 0 {
            return Err(ConfigError::new("pool_factor", "must be positive"));
        }
        Ok(())
    }

    /// `(d, n)` cases in run order.
    pub fn cases(&self) -> Vec<(usize, u64)> {
        let ds = self.d.to_vec();
        let ns = self.n.to_vec();
        if self.zip {
            ds.into_iter().zip(ns).collect()
        } else {
            ds.iter().flat_map(|&d| ns.iter().map(move |&n| (d, n))).collect()
        }
    }

    pub fn gamma_for(&self, d: usize) -> f64 {
        self.gamma.unwrap_or_else(|| intensity_gamma(d as u32))
    }
}

pub fn seed_from_env() -> Result<Option<u64>, ConfigError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| ConfigError::new(SEED_ENV, format!("not a 64-bit seed: `{s}`"))),
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_experiment_has_a_preset() {
        for name in EXPERIMENTS {
            ExperimentConfig::preset(name, 1).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn file_overrides_preset() {
        let c = ExperimentConfig::from_toml("experiment = \"wendel\"\nreps = 10\nseed = 9\nworkers = 3").unwrap();
        assert_eq!(c.reps, 10);
        assert_eq!(c.workers, 3);
        assert!(c.zip);
        assert_eq!(c.cases(), vec![(1, 3), (2, 6), (2, 4)]);
    }

    #[test]
    fn errors_name_the_field() {
        let e = ExperimentConfig::from_toml("experiment = \"wendel\"\nreps = \"many\"").unwrap_err();
        assert_eq!(e.path, "reps");
        let e = ExperimentConfig::from_toml("experiment = \"wendel\"\nworkers = 0").unwrap_err();
        assert_eq!(e.path, "workers");
        let e = ExperimentConfig::from_toml("experiment = \"wendel\"\nbogus = 1").unwrap_err();
        assert_eq!(e.path, "bogus");
        let e = ExperimentConfig::from_toml("experiment = \"nope\"").unwrap_err();
        assert_eq!(e.path, "experiment");
    }

    #[test]
    fn product_of_cases() {
        let c = ExperimentConfig::preset("cone-count", 0).unwrap();
        assert_eq!(c.cases().len(), 30);
    }
}
