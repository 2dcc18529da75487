use std::path::{Path, PathBuf};

use cmg_core::{EdgeNormalization, Normalization};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationName {
    None,
    #[default]
    ZscorePerNode,
    ZscoreGlobal,
}

impl From<NormalizationName> for Normalization {
    fn from(n: NormalizationName) -> Self {
        match n {
            NormalizationName::None => Normalization::None,
            NormalizationName::ZscorePerNode => Normalization::ZscorePerNode,
            NormalizationName::ZscoreGlobal => Normalization::ZscoreGlobal,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeWeighting {
    #[default]
    Support,
    Conditional,
}

impl From<EdgeWeighting> for EdgeNormalization {
    fn from(w: EdgeWeighting) -> Self {
        match w {
            EdgeWeighting::Support => EdgeNormalization::Support,
            EdgeWeighting::Conditional => EdgeNormalization::Conditional,
        }
    }
}

fn default_true() -> bool {
    true
}

fn default_tau() -> f64 {
    cmg_core::aac::DEFAULT_TAU
}

fn default_restarts() -> usize {
    10
}

fn default_max_iter() -> usize {
    300
}

/// Pipeline configuration. Relative paths are resolved against the
/// directory of the file the configuration was loaded from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub graph: PathBuf,
    pub signal: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<PathBuf>,
    pub output: PathBuf,
    /// Planted ground truth from `cmg synth`; adds a recovery score to the manifest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<PathBuf>,
    #[serde(default)]
    pub directed: bool,
    #[serde(default)]
    pub normalization: NormalizationName,
    pub mu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_range: Option<[usize; 2]>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default)]
    pub dynamic: bool,
    #[serde(default = "default_true")]
    pub normalize_static: bool,
    #[serde(default)]
    pub include_intra: bool,
    #[serde(default)]
    pub edge_weighting: EdgeWeighting,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Validate every stage's output before the next stage runs.
    #[serde(default)]
    pub checked: bool,
}

impl PipelineConfig {
    pub fn new(graph: impl Into<PathBuf>, signal: impl Into<PathBuf>, output: impl Into<PathBuf>, mu: f64) -> Self {
        PipelineConfig {
            graph: graph.into(),
            signal: signal.into(),
            events: None,
            output: output.into(),
            truth: None,
            directed: false,
            normalization: NormalizationName::default(),
            mu,
            k: None,
            k_range: None,
            seed: 0,
            tau: default_tau(),
            workers: None,
            dynamic: false,
            normalize_static: true,
            include_intra: false,
            edge_weighting: EdgeWeighting::default(),
            restarts: default_restarts(),
            max_iter: default_max_iter(),
            checked: false,
        }
    }

    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.graph);
        fix(&mut self.signal);
        fix(&mut self.output);
        if let Some(p) = self.events.as_mut() {
            fix(p);
        }
        if let Some(p) = self.truth.as_mut() {
            fix(p);
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        for (what, p) in [("graph", Some(&self.graph)), ("signal", Some(&self.signal)), ("events", self.events.as_ref()), ("truth", self.truth.as_ref())] {
            if let Some(p) = p {
                if !p.is_file() {
                    return bad(format!("{what} path {} does not exist", p.display()));
                }
            }
        }
        if !self.mu.is_finite() {
            return bad(format!("mu must be finite, got {}", self.mu));
        }
        if !(0.0..1.0).contains(&self.tau) {
            return bad(format!("tau must lie in [0, 1), got {}", self.tau));
        }
        if self.dynamic && self.events.is_none() {
            return bad("dynamic graph mode needs an events file".into());
        }
        match (self.k, self.k_range) {
            (None, None) => return bad("either k or k_range is required".into()),
            (Some(0), _) => return bad("k must be at least 1".into()),
            (_, Some([lo, hi])) if lo < 2 || lo > hi => return bad(format!("k_range [{lo}, {hi}] must satisfy 2 <= lo <= hi")),
            _ => {}
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        if self.restarts == 0 || self.max_iter == 0 {
            return bad("restarts and max_iter must be at least 1".into());
        }
        Ok(())
    }
}
