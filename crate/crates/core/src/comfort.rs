//! Thermal comfort: Fanger's PMV/PPD heat-balance model and the adaptive
//! comfort model, with the neutrality predicates used for PNT.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{lit, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum ComfortError {
    #[error("invalid PMV inputs: {0}")]
    InvalidInput(String),
    #[error("clothing temperature did not converge after {iterations} iterations for {inputs}")]
    NoConvergence { iterations: usize, inputs: String },
}

pub const MAX_PMV_ITERATIONS: usize = 150;
/// Clothing surface temperature tolerance, °C.
pub const CLOTHING_TEMP_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmvInputs<T> {
    /// °C
    pub air_temp: T,
    /// °C
    pub mean_radiant_temp: T,
    /// Relative air velocity, m/s.
    pub air_velocity: T,
    /// %
    pub rel_humidity: T,
    /// met
    pub metabolic_rate: T,
    /// clo
    pub clothing: T,
}

impl<T: Scalar> PmvInputs<T> {
    pub fn validate(&self) -> Result<(), ComfortError> {
        let bad = |m: &str| Err(ComfortError::InvalidInput(format!("{m} in {self:?}")));
        if !(self.air_velocity >= T::zero()) {
            return bad("air velocity must be >= 0");
        }
        if !(self.rel_humidity >= T::zero() && self.rel_humidity <= lit(100.0)) {
            return bad("relative humidity must be within [0, 100]");
        }
        if !(self.metabolic_rate > T::zero()) {
            return bad("metabolic rate must be > 0");
        }
        if !(self.clothing >= T::zero()) {
            return bad("clothing must be >= 0");
        }
        if !(self.air_temp.is_finite() && self.mean_radiant_temp.is_finite()) {
            return bad("temperatures must be finite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmvResult<T> {
    pub pmv: T,
    /// %
    pub ppd: T,
}

/// Saturation vapour pressure over water, Pa (the ISO 7730 fit).
pub fn saturation_pressure<T: Scalar>(temp_c: T) -> T {
    lit::<T>(1000.0) * (lit::<T>(16.6536) - lit::<T>(4030.183) / (temp_c + lit(235.0))).exp()
}

pub fn ppd<T: Scalar>(pmv: T) -> T {
    let p2 = pmv * pmv;
    lit::<T>(100.0) - lit::<T>(95.0) * (lit::<T>(-0.03353) * p2 * p2 - lit::<T>(0.2179) * p2).exp()
}

/// Fanger PMV with the clothing surface temperature found by damped
/// fixed-point iteration.
pub fn pmv_ppd<T: Scalar>(inputs: &PmvInputs<T>) -> Result<PmvResult<T>, ComfortError> {
    inputs.validate()?;
    let ta = inputs.air_temp;
    let tr = inputs.mean_radiant_temp;
    let pa = inputs.rel_humidity * lit(10.0) * (lit::<T>(16.6536) - lit::<T>(4030.183) / (ta + lit(235.0))).exp();
    let icl = lit::<T>(0.155) * inputs.clothing;
    let m = inputs.metabolic_rate * lit(58.15);
    let mw = m;
    let fcl = if icl <= lit(0.078) {
        T::one() + lit::<T>(1.29) * icl
    } else {
        lit::<T>(1.05) + lit::<T>(0.645) * icl
    };
    let hcf = lit::<T>(12.1) * inputs.air_velocity.sqrt();
    let kelvin: T = lit(273.0);
    let taa = ta + kelvin;
    let tra = tr + kelvin;
    let tcla = taa + (lit::<T>(35.5) - ta) / (lit::<T>(3.5) * icl + lit(0.1));

    let hundred: T = lit(100.0);
    let p1 = icl * fcl;
    let p2 = p1 * lit(3.96);
    let p3 = p1 * hundred;
    let p4 = p1 * taa;
    let p5 = lit::<T>(308.7) - lit::<T>(0.028) * mw + p2 * (tra / hundred).powi(4);

    // xn, xf are clothing temperature in hundreds of kelvin.
    let eps = lit::<T>(CLOTHING_TEMP_TOLERANCE) / hundred;
    let mut xn = tcla / hundred;
    let mut xf = tcla / lit(50.0);
    let mut hc = hcf;
    let mut iterations = 0;
    while (xn - xf).abs() > eps {
        if iterations >= MAX_PMV_ITERATIONS {
            return Err(ComfortError::NoConvergence {
                iterations,
                inputs: format!("{inputs:?}"),
            });
        }
        xf = (xf + xn) / lit(2.0);
        let hcn = lit::<T>(2.38) * (hundred * xf - taa).abs().sqrt().sqrt();
        hc = hcf.max(hcn);
        xn = (p5 + p4 * hc - p2 * xf.powi(4)) / (hundred + p3 * hc);
        iterations += 1;
    }
    let tcl = hundred * xn - kelvin;

    let hl1 = lit::<T>(3.05e-3) * (lit::<T>(5733.0) - lit::<T>(6.99) * mw - pa);
    let hl2 = if mw > lit(58.15) {
        lit::<T>(0.42) * (mw - lit(58.15))
    } else {
        T::zero()
    };
    let hl3 = lit::<T>(1.7e-5) * m * (lit::<T>(5867.0) - pa);
    let hl4 = lit::<T>(0.0014) * m * (lit::<T>(34.0) - ta);
    let hl5 = lit::<T>(3.96) * fcl * (xn.powi(4) - (tra / hundred).powi(4));
    let hl6 = fcl * hc * (tcl - ta);
    let ts = lit::<T>(0.303) * (lit::<T>(-0.036) * m).exp() + lit(0.028);
    let pmv = ts * (mw - hl1 - hl2 - hl3 - hl4 - hl5 - hl6);
    Ok(PmvResult { pmv, ppd: ppd(pmv) })
}

/// Applicability domain of the adaptive regression, °C.
pub const ADAPTIVE_DOMAIN: (f64, f64) = (10.0, 33.5);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveComfort<T> {
    /// Neutral operative temperature, °C.
    pub temperature: T,
    /// False when the input was clamped into the applicability domain.
    pub in_domain: bool,
}

/// Neutral operative temperature `0.31 t_pma + 17.8`.
pub fn adaptive_comfort_temp<T: Scalar>(t_pma: T) -> AdaptiveComfort<T> {
    let (lo, hi) = (lit::<T>(ADAPTIVE_DOMAIN.0), lit::<T>(ADAPTIVE_DOMAIN.1));
    let clamped = t_pma.max(lo).min(hi);
    AdaptiveComfort {
        temperature: lit::<T>(0.31) * clamped + lit(17.8),
        in_domain: t_pma >= lo && t_pma <= hi,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdaptiveBand {
    #[default]
    Pct80,
    Pct90,
}

impl AdaptiveBand {
    /// Half-width of the acceptability band, K.
    pub fn half_width(self) -> f64 {
        match self {
            AdaptiveBand::Pct80 => 3.5,
            AdaptiveBand::Pct90 => 2.5,
        }
    }
}

/// Absolute slack on band edges so that boundaries stay inclusive under
/// floating-point rounding.
const BAND_EDGE_TOLERANCE: f64 = 1e-9;

pub fn adaptive_neutral<T: Scalar>(operative_temp: T, t_pma: T, band: AdaptiveBand) -> bool {
    let comfort = adaptive_comfort_temp(t_pma).temperature;
    (operative_temp - comfort).abs() <= lit::<T>(band.half_width() + BAND_EDGE_TOLERANCE)
}

pub fn pmv_neutral<T: Scalar>(pmv: T, threshold: T) -> bool {
    pmv.abs() <= threshold
}

/// Operative temperature as the mean of air and mean radiant temperature.
pub fn operative_temp<T: Scalar>(air: T, mean_radiant: T) -> T {
    (air + mean_radiant) / lit(2.0)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComfortModel {
    #[default]
    Adaptive,
    Pmv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComfortVerdict<T> {
    pub model: ComfortModel,
    /// PMV index, or operative temperature for the adaptive model.
    pub value: T,
    pub neutral: bool,
}

/// Comfort model selection plus the occupant assumptions used to evaluate
/// PMV inside the simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ComfortConfig {
    pub model: ComfortModel,
    pub band: AdaptiveBand,
    pub pmv_threshold: f64,
    pub metabolic_rate: f64,
    pub clothing_cooling: f64,
    pub clothing_heating: f64,
    /// Months (1-12) using cooling-season clothing.
    pub cooling_months: Vec<u32>,
    pub air_velocity_closed: f64,
    pub air_velocity_open: f64,
    /// Days averaged for the prevailing mean outdoor temperature.
    pub prevailing_window_days: usize,
}

impl Default for ComfortConfig {
    fn default() -> Self {
        ComfortConfig {
            model: ComfortModel::Adaptive,
            band: AdaptiveBand::Pct80,
            pmv_threshold: 0.5,
            metabolic_rate: 1.1,
            clothing_cooling: 0.5,
            clothing_heating: 1.0,
            cooling_months: (5..=10).collect(),
            air_velocity_closed: 0.1,
            air_velocity_open: 0.8,
            prevailing_window_days: 7,
        }
    }
}

impl ComfortConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.pmv_threshold > 0.0) {
            return Err("pmv_threshold must be > 0".into());
        }
        if !(self.metabolic_rate > 0.0) || self.clothing_cooling < 0.0 || self.clothing_heating < 0.0 {
            return Err("metabolic rate must be > 0 and clothing >= 0".into());
        }
        if self.air_velocity_closed < 0.0 || self.air_velocity_open < 0.0 {
            return Err("air velocities must be >= 0".into());
        }
        if !(7..=30).contains(&self.prevailing_window_days) {
            return Err("prevailing_window_days must be within 7..=30".into());
        }
        Ok(())
    }

    pub fn clothing_for_month(&self, month: u32) -> f64 {
        if self.cooling_months.contains(&month) {
            self.clothing_cooling
        } else {
            self.clothing_heating
        }
    }

    pub fn verdict(&self, operative: f64, t_pma: f64, pmv: f64) -> ComfortVerdict<f64> {
        match self.model {
            ComfortModel::Adaptive => ComfortVerdict {
                model: ComfortModel::Adaptive,
                value: operative,
                neutral: adaptive_neutral(operative, t_pma, self.band),
            },
            ComfortModel::Pmv => ComfortVerdict {
                model: ComfortModel::Pmv,
                value: pmv,
                neutral: pmv_neutral(pmv, self.pmv_threshold),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn inputs(t: f64, v: f64, rh: f64, met: f64, clo: f64) -> PmvInputs<f64> {
        PmvInputs {
            air_temp: t,
            mean_radiant_temp: t,
            air_velocity: v,
            rel_humidity: rh,
            metabolic_rate: met,
            clothing: clo,
        }
    }

    #[test]
    fn ppd_at_neutral_is_five_percent() {
        assert_eq!(ppd(0.0_f64), 5.0);
    }

    #[test]
    fn cool_reference_case() {
        let r = pmv_ppd(&inputs(22.0, 0.1, 60.0, 1.2, 0.5)).unwrap();
        assert_abs_diff_eq!(r.pmv, -0.75, epsilon = 0.05);
    }

    #[test]
    fn warm_case_is_positive() {
        assert!(pmv_ppd(&inputs(27.0, 0.1, 60.0, 1.2, 0.5)).unwrap().pmv > 0.0);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(pmv_ppd(&inputs(22.0, -0.1, 60.0, 1.2, 0.5)).is_err());
        assert!(pmv_ppd(&inputs(22.0, 0.1, 120.0, 1.2, 0.5)).is_err());
        assert!(pmv_ppd(&inputs(22.0, 0.1, 60.0, 0.0, 0.5)).is_err());
        assert!(pmv_ppd(&inputs(22.0, 0.1, 60.0, 1.2, -1.0)).is_err());
    }

    #[test]
    fn single_precision_pmv() {
        let r = pmv_ppd(&PmvInputs::<f32> {
            air_temp: 22.0,
            mean_radiant_temp: 22.0,
            air_velocity: 0.1,
            rel_humidity: 60.0,
            metabolic_rate: 1.2,
            clothing: 0.5,
        })
        .unwrap();
        assert!((r.pmv + 0.75).abs() < 0.06);
    }

    #[test]
    fn adaptive_formula_and_clamp() {
        assert_abs_diff_eq!(adaptive_comfort_temp(10.0_f64).temperature, 20.9, epsilon = 1e-12);
        assert_abs_diff_eq!(adaptive_comfort_temp(20.0_f64).temperature, 24.0, epsilon = 1e-12);
        let low = adaptive_comfort_temp(5.0_f64);
        assert_eq!(low.temperature, adaptive_comfort_temp(10.0).temperature);
        assert!(!low.in_domain);
        assert!(adaptive_comfort_temp(10.0_f64).in_domain);
        assert!(!adaptive_comfort_temp(40.0_f64).in_domain);
    }

    #[test]
    fn adaptive_bands() {
        let tc = adaptive_comfort_temp(20.0_f64).temperature;
        assert!(adaptive_neutral(tc, 20.0, AdaptiveBand::Pct80));
        assert!(adaptive_neutral(tc, 20.0, AdaptiveBand::Pct90));
        assert!(adaptive_neutral(tc + 3.0, 20.0, AdaptiveBand::Pct80));
        assert!(!adaptive_neutral(tc + 3.0, 20.0, AdaptiveBand::Pct90));
        assert!(adaptive_neutral(tc + 3.5, 20.0, AdaptiveBand::Pct80));
        assert!(adaptive_neutral(tc - 3.5, 20.0, AdaptiveBand::Pct80));
        assert!(!adaptive_neutral(tc + 3.6, 20.0, AdaptiveBand::Pct80));
    }

    #[test]
    fn pmv_band() {
        assert!(pmv_neutral(0.0, 0.5));
        assert!(pmv_neutral(0.5, 0.5));
        assert!(!pmv_neutral(-0.6, 0.5));
    }

    #[test]
    fn month_clothing() {
        let c = ComfortConfig::default();
        assert_eq!(c.clothing_for_month(7), 0.5);
        assert_eq!(c.clothing_for_month(1), 1.0);
    }
}
