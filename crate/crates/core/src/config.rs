//! Run configuration: one JSON document driving generation, cataloging and
//! simulation. Relative paths resolve against the config file's directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::CatalogFilter;
use crate::comfort::ComfortConfig;
use crate::control::ControlThresholds;
use crate::occupancy::{GainParameters, Income, Period};
use crate::thermal::{ModelConfig, SimulationSettings};
use crate::wfc::WeightRange;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WfcRunConfig {
    /// Tile vocabulary plus training example (JSON).
    pub tiles_path: PathBuf,
    pub grid_width: usize,
    pub grid_height: usize,
    pub solution_count: usize,
    pub weight_range: WeightRange,
    pub restart_cap: u32,
    /// Tile name pinned on the grid border, if any.
    pub border_tile: Option<String>,
}

impl Default for WfcRunConfig {
    fn default() -> Self {
        WfcRunConfig {
            tiles_path: PathBuf::from("data/tiles/midrise.json"),
            grid_width: 40,
            grid_height: 40,
            solution_count: 300,
            weight_range: WeightRange::default(),
            restart_cap: 100,
            border_tile: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClimateConfig {
    pub label: String,
    pub epw_path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OccupancyConfig {
    pub csv_path: PathBuf,
    pub period: Period,
    pub income: Income,
}

impl Default for OccupancyConfig {
    fn default() -> Self {
        OccupancyConfig {
            csv_path: PathBuf::from("data/occupancy/middle_income.csv"),
            period: Period::PostCovid,
            income: Income::Middle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationParams {
    pub substeps: usize,
    pub initial_temp: f64,
    pub warmup_days: usize,
    /// PNT over occupied zone-hours only.
    pub pnt_occupied_only: bool,
}

impl Default for SimulationParams {
    fn default() -> Self {
        let s = SimulationSettings::default();
        SimulationParams {
            substeps: s.substeps,
            initial_temp: s.initial_temp,
            warmup_days: s.warmup_days,
            pnt_occupied_only: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    pub wfc: WfcRunConfig,
    pub catalog: CatalogFilter,
    #[serde(flatten)]
    pub model: ModelConfig,
    pub gains: GainParameters,
    pub control: ControlThresholds,
    pub comfort: ComfortConfig,
    pub simulation: SimulationParams,
    pub climates: Vec<ClimateConfig>,
    pub occupancy: OccupancyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 20_240_611,
            wfc: WfcRunConfig::default(),
            catalog: CatalogFilter::default(),
            model: ModelConfig::default(),
            gains: GainParameters::default(),
            control: ControlThresholds::default(),
            comfort: ComfortConfig::default(),
            simulation: SimulationParams::default(),
            climates: Vec::new(),
            occupancy: OccupancyConfig::default(),
        }
    }
}

impl RunConfig {
    /// Parses without touching the filesystem.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Reads, resolves relative paths and validates.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::from_json(&text).map_err(|source| ConfigError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.wfc.tiles_path);
        fix(&mut self.occupancy.csv_path);
        for c in &mut self.climates {
            fix(&mut c.epw_path);
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = ConfigError::Invalid;
        self.validate_sections().map_err(invalid)?;
        let mut paths = vec![("wfc.tiles_path", &self.wfc.tiles_path), ("occupancy.csv_path", &self.occupancy.csv_path)];
        paths.extend(self.climates.iter().map(|c| ("climates[].epw_path", &c.epw_path)));
        for (key, p) in paths {
            if !p.is_file() {
                return Err(ConfigError::Invalid(format!("{key}: {} does not exist", p.display())));
            }
        }
        Ok(())
    }

    /// Section checks that do not depend on the filesystem.
    pub fn validate_sections(&self) -> Result<(), String> {
        let w = &self.wfc;
        if w.grid_width == 0 || w.grid_height == 0 {
            return Err("wfc: grid dimensions must be >= 1".into());
        }
        w.weight_range.validate().map_err(|e| format!("wfc: {e}"))?;
        self.catalog.validate().map_err(|e| format!("catalog: {e}"))?;
        self.model.validate()?;
        self.settings().validate()?;
        let mut labels: Vec<&str> = self.climates.iter().map(|c| c.label.as_str()).collect();
        labels.sort_unstable();
        if labels.iter().any(|l| l.is_empty() || l.contains(',')) {
            return Err("climates: labels must be non-empty and contain no commas".into());
        }
        if labels.windows(2).any(|p| p[0] == p[1]) {
            return Err("climates: duplicate label".into());
        }
        Ok(())
    }

    pub fn settings(&self) -> SimulationSettings {
        SimulationSettings {
            gains: self.gains.clone(),
            control: self.control,
            comfort: self.comfort.clone(),
            substeps: self.simulation.substeps,
            initial_temp: self.simulation.initial_temp,
            warmup_days: self.simulation.warmup_days,
        }
    }

    pub fn climate(&self, label: &str) -> Option<&ClimateConfig> {
        self.climates.iter().find(|c| c.label == label)
    }
}
