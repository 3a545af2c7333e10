use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown ordering {0:?}, expected paper, greedy, random or random:<seed>")]
    UnknownOrdering(String),

    #[error("ordering `random` needs a seed, pass random:<seed> or --seed")]
    MissingSeed,

    #[error("--seed {flag} conflicts with ordering random:{inline}")]
    ConflictingSeed { flag: u64, inline: u64 },

    #[error("--seed only applies to random orderings")]
    UnusedSeed,

    #[error("need n >= 3 and k >= 2, got n = {n}, k = {k}")]
    TooSmall { n: usize, k: usize },

    #[error("level must be 0, 1 or 2, got {0}")]
    BadLevel(u8),

    #[error("level 2 is limited to n <= 6 for k = 2 and n <= 4 for k = 3, got n = {n}, k = {k}")]
    LevelTwoTooLarge { n: usize, k: usize },

    #[error("ordering `paper` above level 0 exists only for k = 2, got k = {0}")]
    NoChartOrdering(usize),

    #[error("--write-golden needs --golden <path>")]
    GoldenPathMissing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    Euclidean,
    Parabolic,
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operator::Euclidean => "euclidean",
            Operator::Parabolic => "parabolic",
        })
    }
}

/// How the basis of `V*` is ordered for the Cartan test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// The operator's own chart frame, selected with `paper`.
    Chart,
    Greedy,
    Random(u64),
}

impl Ordering {
    /// Parses the `--ordering` value, taking the seed of a bare `random`
    /// from `--seed`.
    pub fn parse_with_seed(s: &str, seed: Option<u64>) -> Result<Ordering, ConfigError> {
        let ordering = match (s, seed) {
            ("random", Some(seed)) => Ordering::Random(seed),
            ("random", None) => return Err(ConfigError::MissingSeed),
            _ => s.parse()?,
        };
        match (ordering, seed) {
            (Ordering::Random(inline), Some(flag)) if inline != flag => {
                Err(ConfigError::ConflictingSeed { flag, inline })
            }
            (Ordering::Chart | Ordering::Greedy, Some(_)) => Err(ConfigError::UnusedSeed),
            _ => Ok(ordering),
        }
    }
}

impl FromStr for Ordering {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Ordering::Chart),
            "greedy" => Ok(Ordering::Greedy),
            "random" => Err(ConfigError::MissingSeed),
            _ => s
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(Ordering::Random)
                .ok_or_else(|| ConfigError::UnknownOrdering(s.to_string())),
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ordering::Chart => f.write_str("paper"),
            Ordering::Greedy => f.write_str("greedy"),
            Ordering::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl Serialize for Ordering {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// One computation. Only the mathematical fields are echoed into reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub operator: Operator,
    pub n: usize,
    pub k: usize,
    pub level: u8,
    pub ordering: Ordering,
    pub degree: Option<u32>,
    #[serde(skip)]
    pub output: OutputFormat,
    #[serde(skip)]
    pub golden_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(operator: Operator, n: usize, k: usize, level: u8, ordering: Ordering) -> Self {
        RunConfig { operator, n, k, level, ordering, degree: None, output: OutputFormat::Text, golden_path: None }
    }

    pub fn with_degree(mut self, degree: u32) -> Self {
        self.degree = Some(degree);
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let (n, k) = (self.n, self.k);
        if n < 3 || k < 2 {
            return Err(ConfigError::TooSmall { n, k });
        }
        if self.level > 2 {
            return Err(ConfigError::BadLevel(self.level));
        }
        if self.level == 2 && !matches!((k, n), (2, ..=6) | (3, ..=4)) {
            return Err(ConfigError::LevelTwoTooLarge { n, k });
        }
        if self.level > 0 && self.ordering == Ordering::Chart && k != 2 {
            return Err(ConfigError::NoChartOrdering(k));
        }
        Ok(())
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} k={} level={} ordering={}", self.operator, self.n, self.k, self.level, self.ordering)?;
        if let Some(r) = self.degree {
            write!(f, " degree={r}")?;
        }
        Ok(())
    }
}
