//! Run configuration: TOML or JSON, resolved against defaults.

use std::path::{Path, PathBuf};

use ftx_core::algorithms::AlgorithmOptions;
use ftx_core::budget::AlgorithmKind;
use ftx_core::crossover::ScalingForm;
use ftx_core::lattice::{Boundary, LatticeSpec, ModelParams};
use ftx_core::planner::HardwareSpec;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "txt",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub model: ModelParams,
    pub extents: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<Boundary>>,
}

impl ModelConfig {
    /// Cylinder (periodic x, open y) in 2d, open chain in 1d.
    fn default_boundary(&self) -> Vec<Boundary> {
        match self.extents.len() {
            2 => vec![Boundary::Periodic, Boundary::Open],
            n => vec![Boundary::Open; n],
        }
    }

    pub fn spec(&self) -> LatticeSpec {
        LatticeSpec {
            extents: self.extents.clone(),
            boundary: self.boundary.clone().unwrap_or_else(|| self.default_boundary()),
            model: self.model.clone(),
        }
    }

    pub fn lattice_label(&self) -> String {
        self.extents.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("x")
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("{}_{}", self.model.name(), self.lattice_label()))
    }

    fn resolve(&mut self) {
        self.boundary = Some(self.spec().boundary);
        self.name = Some(self.label());
    }
}

/// Where beats per SELECT come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BeatsConfig {
    /// Magic-supply bound from the T-count.
    #[default]
    ClosedForm,
    /// Run the lattice-surgery scheduler on the configured layout.
    Simulate,
    Fixed {
        beats: u64,
    },
}

fn all_algorithms() -> Vec<AlgorithmKind> {
    AlgorithmKind::ALL.to_vec()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateConfig {
    pub algorithms: Vec<AlgorithmKind>,
    pub beats: BeatsConfig,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig { algorithms: all_algorithms(), beats: BeatsConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub factories: Vec<usize>,
    pub threads: Vec<usize>,
    pub trace: bool,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig { factories: vec![1, 4, 16], threads: vec![1], trace: false }
    }
}

fn default_sweep_algorithm() -> AlgorithmKind {
    AlgorithmKind::QubitizationSequential
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub epsilons: Vec<f64>,
    pub ps: Vec<f64>,
    #[serde(default = "default_sweep_algorithm")]
    pub algorithm: AlgorithmKind,
    #[serde(default)]
    pub beats: BeatsConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFile {
    pub size: f64,
    pub path: PathBuf,
    pub e0: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassicalSource {
    /// Published DMRG endpoints shipped with the tool.
    Shipped {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        j2: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u: Option<f64>,
    },
    /// CSV with columns `size,seconds`.
    Points {
        path: PathBuf,
    },
    /// Optimisation traces, one per size, fitted to time-to-accuracy.
    Traces {
        target: f64,
        traces: Vec<TraceFile>,
    },
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum QuantumSource {
    /// Published wall times for the given factory count.
    Shipped {
        factories: usize,
    },
    Points {
        points: Vec<(f64, f64)>,
    },
}

fn default_form() -> ScalingForm {
    ScalingForm::Exponential
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossoverConfig {
    pub model: String,
    pub classical: ClassicalSource,
    pub quantum: QuantumSource,
    #[serde(default = "default_form")]
    pub form: ScalingForm,
    #[serde(default)]
    pub extra_sizes: Vec<f64>,
}

fn default_epsilon() -> f64 {
    0.01
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub hardware: HardwareSpec,
    #[serde(default)]
    pub options: AlgorithmOptions,
    #[serde(default)]
    pub models: Vec<ModelConfig>,
    #[serde(default)]
    pub estimate: EstimateConfig,
    #[serde(default)]
    pub simulate: SimulateConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossover: Option<CrossoverConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

/// A parsed config plus the directory relative paths resolve against.
pub struct Loaded {
    pub config: RunConfig,
    pub base: PathBuf,
}

impl Loaded {
    pub fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }
}

pub fn parse(src: &str, json: bool) -> Result<RunConfig> {
    if json {
        serde_json::from_str(src).map_err(|e| CliError::Config(format!("invalid JSON config: {e}")))
    } else {
        toml::from_str(src).map_err(|e| CliError::Config(format!("invalid TOML config: {e}")))
    }
}

pub fn load(path: &Path) -> Result<Loaded> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let mut config = parse(&src, json)?;
    config.resolve();
    config.validate()?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Loaded { config, base })
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn resolve(&mut self) {
        for m in &mut self.models {
            m.resolve();
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(bad(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        self.hardware.validate()?;
        self.options.consts.validate()?;
        let mut names = std::collections::BTreeSet::new();
        for m in &self.models {
            m.spec().validate()?;
            if !names.insert(m.label()) {
                return Err(bad(format!("duplicate model name {}", m.label())));
            }
        }
        if self.estimate.algorithms.is_empty() {
            return Err(bad("estimate.algorithms must not be empty"));
        }
        if self.simulate.factories.contains(&0) || self.simulate.threads.contains(&0) {
            return Err(bad("simulate factories and threads must be at least one"));
        }
        if let Some(s) = &self.sweep {
            if s.epsilons.is_empty() || s.ps.is_empty() {
                return Err(bad("sweep grids must be non-empty"));
            }
            if s.epsilons.iter().chain(&s.ps).any(|v| !(*v > 0.0) || !v.is_finite()) {
                return Err(bad("sweep grid values must be positive"));
            }
        }
        Ok(())
    }

    pub fn require_models(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(bad("config lists no models"));
        }
        Ok(())
    }
}
