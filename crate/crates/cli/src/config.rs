//! Run configuration: a TOML file whose values flags may override.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use halfspace_spectral::potential::PanelConfig;
use halfspace_spectral::Geometry;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub dim: usize,
    pub extent: f64,
    pub n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { dim: 1, extent: 20.0, n: 4096 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub m: usize,
    pub d: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { m: 2, d: 2 }
    }
}

/// Panel rule for analytic densities. `panels` counts the coarsest panels
/// across a length `x_d`, so the widest panel is `x_d / panels`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub panels: usize,
    pub order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { panels: 2, order: 16 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathConfig {
    pub input: Vec<PathBuf>,
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub solver: SolverConfig,
    pub quadrature: QuadratureConfig,
    pub paths: PathConfig,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: GridConfig::default(),
            solver: SolverConfig::default(),
            quadrature: QuadratureConfig::default(),
            paths: PathConfig::default(),
            seed: 1,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Invariants enforced at load and again after flag overrides.
    pub fn check(&self) -> CliResult<()> {
        let g = &self.grid;
        if !g.n.is_power_of_two() || g.n < 2 {
            return Err(CliError::Usage(format!("grid.n = {} is not a power of two", g.n)));
        }
        if !(1..=2).contains(&g.dim) {
            return Err(CliError::Usage(format!("grid.dim = {} must be 1 or 2", g.dim)));
        }
        if !(g.extent.is_finite() && g.extent > 0.0) {
            return Err(CliError::Usage(format!("grid.extent = {} must be positive", g.extent)));
        }
        let s = &self.solver;
        if 2 * s.m <= s.d {
            return Err(CliError::Usage(format!("solver.m = {} must exceed d/2 = {}", s.m, s.d as f64 / 2.0)));
        }
        if !(2..=3).contains(&s.d) {
            return Err(CliError::Usage(format!("solver.d = {} must be 2 or 3", s.d)));
        }
        if self.quadrature.panels == 0 || self.quadrature.order < 2 {
            return Err(CliError::Usage("quadrature needs panels >= 1 and order >= 2".into()));
        }
        Ok(())
    }

    pub fn geometry(&self) -> CliResult<Geometry> {
        Geometry::new(self.grid.dim, self.grid.extent, self.grid.n).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn panel_config(&self) -> PanelConfig {
        PanelConfig {
            extent: self.grid.extent,
            coarsest: 1.0 / self.quadrature.panels as f64,
            order: self.quadrature.order,
        }
    }
}
