//! Window and HVAC decisions for the three cooling strategies.
//!
//! Decisions are made once per hour from the zone's start-of-hour
//! temperature. NV windows use a hysteresis band: they open at the opening
//! trigger and close at the lower indoor threshold, and only while the
//! outdoor air is eligible for cooling.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControlMode {
    Ac,
    Nv,
    Mm,
}

impl ControlMode {
    pub const ALL: [ControlMode; 3] = [ControlMode::Ac, ControlMode::Nv, ControlMode::Mm];

    pub fn label(self) -> &'static str {
        match self {
            ControlMode::Ac => "ac",
            ControlMode::Nv => "nv",
            ControlMode::Mm => "mm",
        }
    }
}

impl fmt::Display for ControlMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ControlMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ac" => Ok(ControlMode::Ac),
            "nv" => Ok(ControlMode::Nv),
            "mm" => Ok(ControlMode::Mm),
            other => Err(format!("unknown strategy {other:?} (expected ac, nv or mm)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControlThresholds {
    pub ac_heat_setpoint: f64,
    pub ac_cool_setpoint: f64,
    pub nv_indoor_low: f64,
    pub nv_indoor_high: f64,
    pub nv_outdoor_low: f64,
    pub nv_outdoor_high: f64,
    /// Outdoor air must be at least this much cooler than indoors, K.
    pub nv_delta_min: f64,
    /// Indoor temperature at which eligible windows open.
    pub nv_open_trigger: f64,
    pub mm_hvac_low: f64,
    pub mm_hvac_high: f64,
    /// Close windows whenever MM conditioning is running.
    pub mm_close_windows_during_hvac: bool,
}

impl Default for ControlThresholds {
    fn default() -> Self {
        ControlThresholds {
            ac_heat_setpoint: 21.7,
            ac_cool_setpoint: 24.4,
            nv_indoor_low: 21.0,
            nv_indoor_high: 28.0,
            nv_outdoor_low: 18.0,
            nv_outdoor_high: 25.0,
            nv_delta_min: 3.0,
            nv_open_trigger: 23.0,
            mm_hvac_low: 20.0,
            mm_hvac_high: 29.0,
            mm_close_windows_during_hvac: true,
        }
    }
}

impl ControlThresholds {
    pub fn validate(&self) -> Result<(), String> {
        let checks = [
            (self.ac_heat_setpoint < self.ac_cool_setpoint, "ac_heat_setpoint < ac_cool_setpoint"),
            (self.nv_indoor_low < self.nv_indoor_high, "nv_indoor_low < nv_indoor_high"),
            (self.nv_outdoor_low <= self.nv_outdoor_high, "nv_outdoor_low <= nv_outdoor_high"),
            (self.nv_delta_min >= 0.0, "nv_delta_min >= 0"),
            (self.nv_indoor_low <= self.nv_open_trigger, "nv_indoor_low <= nv_open_trigger"),
            (self.mm_hvac_low < self.mm_hvac_high, "mm_hvac_low < mm_hvac_high"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, rule)) => Err(format!("control thresholds violate {rule}")),
            None => Ok(()),
        }
    }

    /// Outdoor air is cool enough relative to indoors and inside the
    /// allowed outdoor range.
    pub fn nv_eligible(&self, indoor: f64, outdoor: f64) -> bool {
        outdoor <= indoor - self.nv_delta_min && (self.nv_outdoor_low..=self.nv_outdoor_high).contains(&outdoor)
    }

    fn nv_window(&self, indoor: f64, outdoor: f64, was_open: bool) -> bool {
        let eligible = self.nv_eligible(indoor, outdoor);
        if !eligible || indoor <= self.nv_indoor_low {
            false
        } else if indoor >= self.nv_open_trigger {
            true
        } else {
            was_open
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ControlDecision {
    pub window_open: bool,
    pub hvac_enabled: bool,
    /// (heating, cooling) setpoints while HVAC is enabled.
    pub active_setpoints: Option<(f64, f64)>,
}

impl ControlDecision {
    /// A valid starting state for every mode.
    pub fn initial(mode: ControlMode, thresholds: &ControlThresholds) -> Self {
        match mode {
            ControlMode::Ac => ControlDecision {
                window_open: false,
                hvac_enabled: true,
                active_setpoints: Some((thresholds.ac_heat_setpoint, thresholds.ac_cool_setpoint)),
            },
            ControlMode::Nv | ControlMode::Mm => ControlDecision::default(),
        }
    }
}

pub fn decide(mode: ControlMode, thresholds: &ControlThresholds, indoor: f64, outdoor: f64, prev: &ControlDecision) -> ControlDecision {
    let t = thresholds;
    match mode {
        ControlMode::Ac => ControlDecision::initial(ControlMode::Ac, t),
        ControlMode::Nv => ControlDecision {
            window_open: t.nv_window(indoor, outdoor, prev.window_open),
            hvac_enabled: false,
            active_setpoints: None,
        },
        ControlMode::Mm => {
            let hvac = indoor < t.mm_hvac_low || indoor > t.mm_hvac_high;
            if hvac {
                ControlDecision {
                    window_open: !t.mm_close_windows_during_hvac && t.nv_window(indoor, outdoor, prev.window_open),
                    hvac_enabled: true,
                    active_setpoints: Some((t.mm_hvac_low, t.mm_hvac_high)),
                }
            } else {
                ControlDecision {
                    window_open: t.nv_window(indoor, outdoor, prev.window_open),
                    hvac_enabled: false,
                    active_setpoints: None,
                }
            }
        }
    }
}
