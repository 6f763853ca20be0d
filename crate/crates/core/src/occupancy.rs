//! Hourly occupancy profiles and the internal heat gains they drive.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calendar::Calendar;

#[derive(Debug, Error, PartialEq)]
pub enum OccupancyError {
    #[error("row {row}: {msg}")]
    Validation { row: usize, msg: String },
    #[error("missing occupancy profile for {period}/{day_type}/{income}")]
    Missing {
        period: Period,
        day_type: DayType,
        income: Income,
    },
}

macro_rules! label_enum {
    ($name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub fn label(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.label())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                match s.trim() {
                    $($label => Ok($name::$variant),)+
                    other => Err(format!("unknown {} {other:?}", stringify!($name))),
                }
            }
        }
    };
}

label_enum!(Period { PreCovid => "pre_covid", DuringCovid => "during_covid", PostCovid => "post_covid" });
label_enum!(DayType { Weekday => "weekday", Weekend => "weekend" });
label_enum!(Income { Low => "low", Middle => "middle", High => "high" });

pub type ProfileKey = (Period, DayType, Income);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyProfile {
    pub period: Period,
    pub day_type: DayType,
    pub income: Income,
    pub fractions: [f64; 24],
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProfileSet {
    profiles: BTreeMap<ProfileKey, [f64; 24]>,
}

impl ProfileSet {
    /// Parses the CSV without any completeness requirement.
    pub fn parse(csv: &str) -> Result<Self, OccupancyError> {
        let mut lines = csv.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(OccupancyError::Validation {
            row: 1,
            msg: "empty occupancy file".into(),
        })?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        let expected: Vec<String> = ["period", "day_type", "income"]
            .into_iter()
            .map(String::from)
            .chain((0..24).map(|h| format!("h{h}")))
            .collect();
        if cols != expected {
            return Err(OccupancyError::Validation {
                row: 1,
                msg: "header must be period,day_type,income,h0,...,h23".into(),
            });
        }
        let mut set = ProfileSet::default();
        for (i, line) in lines {
            let row = i + 1;
            let bad = |msg: String| OccupancyError::Validation { row, msg };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 27 {
                return Err(bad(format!("expected 27 columns, found {}", fields.len())));
            }
            let period: Period = fields[0].parse().map_err(bad)?;
            let day_type: DayType = fields[1].parse().map_err(bad)?;
            let income: Income = fields[2].parse().map_err(bad)?;
            let mut fractions = [0.0; 24];
            for (h, f) in fractions.iter_mut().enumerate() {
                let v: f64 = fields[3 + h]
                    .parse()
                    .map_err(|_| bad(format!("h{h} is not numeric: {:?}", fields[3 + h])))?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(bad(format!("h{h} fraction {v} outside [0, 1]")));
                }
                *f = v;
            }
            if set.profiles.insert((period, day_type, income), fractions).is_some() {
                return Err(bad(format!("duplicate profile {period}/{day_type}/{income}")));
            }
        }
        Ok(set)
    }

    pub fn insert(&mut self, profile: OccupancyProfile) {
        self.profiles
            .insert((profile.period, profile.day_type, profile.income), profile.fractions);
    }

    pub fn get(&self, period: Period, day_type: DayType, income: Income) -> Option<&[f64; 24]> {
        self.profiles.get(&(period, day_type, income))
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn profiles(&self) -> impl Iterator<Item = OccupancyProfile> + '_ {
        self.profiles.iter().map(|(&(period, day_type, income), &fractions)| OccupancyProfile {
            period,
            day_type,
            income,
            fractions,
        })
    }

    /// Both day types must be present for `(period, income)`.
    pub fn require_complete(&self, period: Period, income: Income) -> Result<(), OccupancyError> {
        for day_type in [DayType::Weekday, DayType::Weekend] {
            if self.get(period, day_type, income).is_none() {
                return Err(OccupancyError::Missing { period, day_type, income });
            }
        }
        Ok(())
    }

    /// Resolves the weekday/weekend pair for one experiment.
    pub fn schedule(&self, period: Period, income: Income) -> Result<WeekSchedule, OccupancyError> {
        self.require_complete(period, income)?;
        Ok(WeekSchedule {
            weekday: self.profiles[&(period, DayType::Weekday, income)],
            weekend: self.profiles[&(period, DayType::Weekend, income)],
        })
    }
}

/// Parses profiles and requires the default post-COVID middle-income
/// weekday profile.
pub fn load_profiles(csv: &str) -> Result<ProfileSet, OccupancyError> {
    let set = ProfileSet::parse(csv)?;
    let (period, day_type, income) = (Period::PostCovid, DayType::Weekday, Income::Middle);
    if set.get(period, day_type, income).is_none() {
        return Err(OccupancyError::Missing { period, day_type, income });
    }
    Ok(set)
}

/// Weekday/weekend fractions for one (period, income).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeekSchedule {
    pub weekday: [f64; 24],
    pub weekend: [f64; 24],
}

impl WeekSchedule {
    /// Step function over the hour of day `0..24`.
    pub fn fraction(&self, calendar: &Calendar, month: u32, day: u32, hour_of_day: usize) -> f64 {
        let profile = if calendar.is_weekend(month, day) {
            &self.weekend
        } else {
            &self.weekday
        };
        profile[hour_of_day.min(23)]
    }
}

/// Occupancy fraction for the hour of day `0..24` starting at `hour_of_day`.
pub fn fraction_at(
    profiles: &ProfileSet,
    period: Period,
    income: Income,
    calendar: &Calendar,
    month: u32,
    day: u32,
    hour_of_day: usize,
) -> Result<f64, OccupancyError> {
    let day_type = if calendar.is_weekend(month, day) {
        DayType::Weekend
    } else {
        DayType::Weekday
    };
    let profile = profiles
        .get(period, day_type, income)
        .ok_or(OccupancyError::Missing { period, day_type, income })?;
    Ok(profile[hour_of_day.min(23)])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GainParameters {
    /// persons/m²
    pub people_density: f64,
    /// W per person
    pub sensible_per_person: f64,
    /// W per person
    pub latent_per_person: f64,
    /// W/m²
    pub lighting_power: f64,
    /// W/m²
    pub equipment_power: f64,
    pub lighting_schedule: [f64; 24],
    pub equipment_schedule: [f64; 24],
    /// Scale lighting by the occupancy fraction as well as its schedule.
    pub lighting_follows_occupancy: bool,
}

impl Default for GainParameters {
    fn default() -> Self {
        GainParameters {
            people_density: 0.028,
            sensible_per_person: 70.0,
            latent_per_person: 45.0,
            lighting_power: 3.9,
            equipment_power: 5.4,
            lighting_schedule: [1.0; 24],
            equipment_schedule: [1.0; 24],
            lighting_follows_occupancy: true,
        }
    }
}

impl GainParameters {
    pub fn validate(&self) -> Result<(), String> {
        let scalars = [
            self.people_density,
            self.sensible_per_person,
            self.latent_per_person,
            self.lighting_power,
            self.equipment_power,
        ];
        let all = scalars
            .iter()
            .chain(&self.lighting_schedule)
            .chain(&self.equipment_schedule);
        if all.clone().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err("gain parameters must be finite and non-negative".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InternalGains {
    /// W into the air node: people sensible plus lighting and equipment.
    pub sensible: f64,
    /// W, reported only.
    pub latent: f64,
    /// W of lighting and equipment electricity.
    pub electric: f64,
}

pub fn internal_gains(zone_area: f64, frac: f64, params: &GainParameters, hour_of_day: usize) -> InternalGains {
    let h = hour_of_day.min(23);
    let people = params.people_density * zone_area * frac;
    let lighting_scale = if params.lighting_follows_occupancy { frac } else { 1.0 };
    let lighting = params.lighting_power * zone_area * params.lighting_schedule[h] * lighting_scale;
    let equipment = params.equipment_power * zone_area * params.equipment_schedule[h];
    let electric = lighting + equipment;
    InternalGains {
        sensible: people * params.sensible_per_person + electric,
        latent: people * params.latent_per_person,
        electric,
    }
}
