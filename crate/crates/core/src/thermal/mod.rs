//! Reduced-order multi-zone thermal model: one air node per apartment,
//! analytic stepping, ideal loads and window ventilation.

pub mod model;
pub mod physics;
pub mod simulate;

use thiserror::Error;

use crate::comfort::ComfortError;
use crate::occupancy::OccupancyError;

pub use model::{build_model, BuildingModel, EnvelopeConfig, GeometryConfig, HvacConfig, ModelConfig, Zone};
pub use physics::{
    free_float, free_float_step, ideal_load, ideal_load_to_setpoint, step_ventilation, ventilation_flow, Drivers, Facade, StepFlows, StepResult,
    VentilationConfig, ZoneParams, ZoneState, AIR_CP, AIR_DENSITY, GRAVITY,
};
pub use simulate::{occupancy_series, simulate_year, HourContext, HourlyResults, SimulationSettings, ZoneHour};

#[derive(Debug, Error, PartialEq)]
pub enum ThermalError {
    #[error("model configuration: {0}")]
    Config(String),
    #[error("layout has no apartment tiles")]
    NoApartments,
    #[error(transparent)]
    Occupancy(#[from] OccupancyError),
    #[error(transparent)]
    Comfort(#[from] ComfortError),
}
