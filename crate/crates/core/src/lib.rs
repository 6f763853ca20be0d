//! Floor-plan synthesis with Wave Function Collapse and reduced-order
//! annual simulation of energy use and thermal comfort under air
//! conditioning, natural ventilation and multi-mode cooling.
//!
//! The physics kernels ([`comfort`], [`thermal::physics`],
//! [`weather::solar`]) are generic over [`Scalar`]; the annual driver and
//! metrics work in `f64`, with aliases below.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calendar;
pub mod catalog;
pub mod comfort;
pub mod config;
pub mod control;
pub mod metrics;
pub mod occupancy;
pub mod pipeline;
pub mod scalar;
pub mod seed;
pub mod thermal;
pub mod weather;
pub mod wfc;

pub use scalar::Scalar;

pub type PmvInputs64 = comfort::PmvInputs<f64>;
pub type PmvResult64 = comfort::PmvResult<f64>;
pub type PmvInputs32 = comfort::PmvInputs<f32>;
pub type ZoneParams64 = thermal::ZoneParams<f64>;
pub type ZoneState64 = thermal::ZoneState<f64>;
pub type Drivers64 = thermal::Drivers<f64>;
pub type Facade64 = thermal::Facade<f64>;
pub type StepFlows64 = thermal::StepFlows<f64>;
pub type SunPosition64 = weather::SunPosition<f64>;
pub type Irradiance64 = weather::Irradiance<f64>;
