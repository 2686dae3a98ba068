//! TOML experiment configuration.
//!
//! ```toml
//! master_seed = 7
//! mu = 0.1
//! eta = "theta_p"        # or a positive number; default p for ER, 1.0 otherwise
//! n_grid = [1000, 10000, 100000]
//! trials = 20
//! estimators = ["fourier", "bmt_canonical", "bmt_improvised"]
//! tau = 0.5
//! output = "sweep.csv"
//!
//! [graph]
//! kind = "er"            # er | path | cycle | complete | star | file
//! d = 15
//! p = 0.4
//!
//! [baseline]
//! c0 = 0.25
//! gamma = 2.0
//! # r = 10.0           # default 1/mu
//!
//! [concentration]
//! n = 2000
//! reps = 10000
//! x_grid = [0.05, 0.1, 0.2]
//! # t = [1.0, 0.0, 0.0, 0.0, 0.0]   # default e_0
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::baseline::{DEFAULT_C0, DEFAULT_GAMMA};
use crate::error::{Error, Result};
use crate::estimator::DEFAULT_SUPPORT_THRESHOLD;
use crate::graph::{sample_erdos_renyi, WeightedGraph};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Er { d: usize, p: f64 },
    Path { d: usize },
    Cycle { d: usize },
    Complete { d: usize },
    Star { d: usize },
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum EtaSpec {
    Value(f64),
    /// Only `"theta_p"` is accepted: eta equals the ER edge probability.
    Rule(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorName {
    Fourier,
    BmtCanonical,
    BmtImprovised,
}

impl EstimatorName {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorName::Fourier => "fourier",
            EstimatorName::BmtCanonical => "bmt_canonical",
            EstimatorName::BmtImprovised => "bmt_improvised",
        }
    }
}

impl fmt::Display for EstimatorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineSection {
    #[serde(default = "default_c0")]
    pub c0: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    pub r: Option<f64>,
}

impl Default for BaselineSection {
    fn default() -> Self {
        Self {
            c0: DEFAULT_C0,
            gamma: DEFAULT_GAMMA,
            r: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcentrationSection {
    pub n: usize,
    pub reps: usize,
    pub x_grid: Vec<f64>,
    pub t: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    #[serde(default = "default_mu")]
    pub mu: f64,
    pub eta: Option<EtaSpec>,
    #[serde(default)]
    pub n_grid: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_estimators")]
    pub estimators: Vec<EstimatorName>,
    #[serde(default)]
    pub master_seed: u64,
    pub output: Option<PathBuf>,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default)]
    pub baseline: BaselineSection,
    pub concentration: Option<ConcentrationSection>,
    /// Replace the empirical statistics by their exact values.
    #[serde(default)]
    pub oracle: bool,
    /// Fill the `wall_ms` column. Off by default because timings break
    /// byte-for-byte reproducibility.
    #[serde(default)]
    pub record_timing: bool,
}

fn default_mu() -> f64 {
    0.1
}
fn default_trials() -> usize {
    1
}
fn default_tau() -> f64 {
    DEFAULT_SUPPORT_THRESHOLD
}
fn default_c0() -> f64 {
    DEFAULT_C0
}
fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}
fn default_estimators() -> Vec<EstimatorName> {
    vec![EstimatorName::Fourier]
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml_str(&text)?;
        // edge-list paths are relative to the config file
        if let GraphSpec::File { path: p } = &mut cfg.graph {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return bad(format!("mu must be positive, got {}", self.mu));
        }
        match self.graph {
            GraphSpec::Er { d, p } => {
                if d == 0 || !(p > 0.0 && p <= 1.0) {
                    return bad(format!("er graph needs d >= 1 and p in (0, 1], got d={d}, p={p}"));
                }
            }
            GraphSpec::Cycle { d } if d < 3 => return bad(format!("cycle needs d >= 3, got {d}")),
            GraphSpec::Path { d } | GraphSpec::Complete { d } | GraphSpec::Star { d } if d == 0 => {
                return bad("graph dimension must be positive".into())
            }
            _ => {}
        }
        self.eta()?;
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.n_grid.contains(&0) {
            return bad("n_grid entries must be positive".into());
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("n_grid must be strictly increasing, got {:?}", self.n_grid));
        }
        if self.estimators.is_empty() {
            return bad("at least one estimator is required".into());
        }
        let mut seen = self.estimators.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.estimators.len() {
            return bad("estimators must not repeat".into());
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return bad(format!("tau must be positive, got {}", self.tau));
        }
        if let Some(c) = &self.concentration {
            if c.n == 0 || c.reps == 0 {
                return bad("concentration n and reps must be positive".into());
            }
            if c.x_grid.is_empty() || c.x_grid.iter().any(|&x| !(x > 0.0)) {
                return bad("concentration x_grid must be nonempty and positive".into());
            }
        }
        Ok(())
    }

    /// The resolved `eta`.
    pub fn eta(&self) -> Result<f64> {
        let er_p = match self.graph {
            GraphSpec::Er { p, .. } => Some(p),
            _ => None,
        };
        match &self.eta {
            None => Ok(er_p.unwrap_or(1.0)),
            Some(EtaSpec::Value(v)) if v.is_finite() && *v > 0.0 => Ok(*v),
            Some(EtaSpec::Value(v)) => Err(Error::Config(format!("eta must be positive, got {v}"))),
            Some(EtaSpec::Rule(r)) if r == "theta_p" => {
                er_p.ok_or_else(|| Error::Config("eta = \"theta_p\" requires an er graph".into()))
            }
            Some(EtaSpec::Rule(r)) => Err(Error::Config(format!("unknown eta rule {r:?}"))),
        }
    }

    /// ER edge probability, if any.
    pub fn er_p(&self) -> Option<f64> {
        match self.graph {
            GraphSpec::Er { p, .. } => Some(p),
            _ => None,
        }
    }

    /// The experiment graph. ER graphs are drawn from the `graph` substream;
    /// `trial = Some(k)` gives an independent graph per trial.
    pub fn build_graph(&self, trial: Option<u64>) -> Result<WeightedGraph> {
        match &self.graph {
            GraphSpec::Er { d, p } => {
                let idx: Vec<u64> = trial.into_iter().collect();
                let mut rng = seed::derived_stream(self.master_seed, "graph", &idx);
                sample_erdos_renyi(*d, *p, &mut rng)
            }
            GraphSpec::Path { d } => WeightedGraph::path(*d),
            GraphSpec::Cycle { d } => WeightedGraph::cycle(*d),
            GraphSpec::Complete { d } => WeightedGraph::complete(*d),
            GraphSpec::Star { d } => WeightedGraph::star(*d),
            GraphSpec::File { path } => {
                let f = std::fs::File::open(path)?;
                WeightedGraph::read_edge_list(std::io::BufReader::new(f))
            }
        }
    }

    /// SHA-256 over a canonical rendering of every field that affects the
    /// numbers; the output path is excluded.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        let eta = self.eta().map(|e| format!("{e:?}")).unwrap_or_default();
        let digest = Sha256::digest(format!("{c:?};eta={eta}").as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
