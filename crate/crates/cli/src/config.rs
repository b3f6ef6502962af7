//! JSON run configuration.

use std::path::{Path, PathBuf};

use pauli_core::{
    sample_fields, EMFields, FieldSamples, Grid, SolverConfig, SpinorField, SplittingOrder,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_GAUGE_TOL: f64 = 1e-6;
pub const DEFAULT_SNAPSHOT_STRIDE: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub lengths: [f64; 3],
    pub counts: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub field_preset: String,
    pub initial_preset: String,
    pub epsilon: f64,
    pub dt: f64,
    pub t_final: f64,
    #[serde(default = "default_order")]
    pub order: String,
    #[serde(default = "default_substeps")]
    pub characteristic_substeps: usize,
    #[serde(default = "default_stride")]
    pub snapshot_stride: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_gauge_tol")]
    pub gauge_tol: f64,
}

fn default_order() -> String {
    "lie".into()
}

fn default_substeps() -> usize {
    pauli_core::splitting::DEFAULT_CHARACTERISTIC_SUBSTEPS
}

fn default_stride() -> usize {
    DEFAULT_SNAPSHOT_STRIDE
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("output")
}

fn default_gauge_tol() -> f64 {
    DEFAULT_GAUGE_TOL
}

/// Everything a command needs, built from a checked [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Setup {
    pub grid: Grid<f64>,
    pub fields: EMFields<f64>,
    pub samples: FieldSamples<f64>,
    pub initial: SpinorField<f64>,
    pub solver: SolverConfig<f64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn order(&self) -> Result<SplittingOrder, CliError> {
        self.order.parse().map_err(CliError::config)
    }

    /// The solver configuration for a different `dt`, all else unchanged.
    pub fn solver_config(&self, dt: f64) -> Result<SolverConfig<f64>, CliError> {
        SolverConfig::new(self.epsilon, dt, self.t_final, self.order()?)
            .and_then(|c| c.with_substeps(self.characteristic_substeps))
            .and_then(|c| c.with_snapshot_stride(self.snapshot_stride))
            .map_err(CliError::config)
    }

    /// Validates every field and builds grid, fields, samples and the
    /// initial state.
    pub fn setup(&self) -> Result<Setup, CliError> {
        if !(self.gauge_tol > 0.0) {
            return Err(CliError::Config(format!(
                "gauge_tol must be positive, got {}",
                self.gauge_tol
            )));
        }
        let grid = Grid::new(self.grid.lengths, self.grid.counts).map_err(CliError::config)?;
        let fields = EMFields::from_preset(&self.field_preset).map_err(CliError::config)?;
        let initial =
            SpinorField::from_preset(&self.initial_preset, &grid).map_err(CliError::config)?;
        let solver = self.solver_config(self.dt)?;
        let samples = sample_fields(&fields, &grid).map_err(CliError::config)?;
        Ok(Setup {
            grid,
            fields,
            samples,
            initial,
            solver,
        })
    }
}
