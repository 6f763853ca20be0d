//! Weather ingestion: EPW parsing, solar geometry and the prevailing mean
//! outdoor temperature used by the adaptive comfort model.

mod epw;
pub mod solar;

pub use epw::{parse_epw, EpwError, SiteLocation, WeatherRecord, WeatherYear};
pub use solar::{incident_on_facade, solar_position, Irradiance, SunPosition};

use crate::calendar::DAYS_PER_YEAR;

pub const DEFAULT_PREVAILING_WINDOW: usize = 7;

impl WeatherRecord {
    pub fn irradiance(&self) -> Irradiance<f64> {
        Irradiance {
            direct_normal: self.direct_normal,
            diffuse_horizontal: self.diffuse_horizontal,
            global_horizontal: self.global_horizontal,
        }
    }
}

impl WeatherYear {
    pub fn sun(&self, hour_index: usize) -> SunPosition<f64> {
        let r = self.record(hour_index);
        let loc = &self.location;
        solar_position(loc.latitude, loc.longitude, loc.timezone_offset, r.month, r.day, r.hour)
    }
}

/// Mean dry-bulb over the `window` calendar days before `day_of_year`,
/// wrapping cyclically across the year boundary.
pub fn prevailing_mean_outdoor(weather: &WeatherYear, day_of_year: usize) -> f64 {
    PrevailingMean::new(weather, DEFAULT_PREVAILING_WINDOW).for_day(day_of_year)
}

/// Precomputed prevailing mean for every day of the year.
#[derive(Debug, Clone, PartialEq)]
pub struct PrevailingMean {
    by_day: Vec<f64>,
}

impl PrevailingMean {
    /// `window` is clamped to 7..=30 days.
    pub fn new(weather: &WeatherYear, window: usize) -> Self {
        let window = window.clamp(7, 30);
        let daily = weather.daily_mean_dry_bulb();
        let by_day = (0..DAYS_PER_YEAR)
            .map(|d| {
                (1..=window)
                    .map(|k| daily[(d + DAYS_PER_YEAR - k) % DAYS_PER_YEAR])
                    .sum::<f64>()
                    / window as f64
            })
            .collect();
        PrevailingMean { by_day }
    }

    /// `day_of_year` is 1-based.
    pub fn for_day(&self, day_of_year: usize) -> f64 {
        self.by_day[(day_of_year.clamp(1, DAYS_PER_YEAR)) - 1]
    }

    pub fn for_hour(&self, hour_index: usize) -> f64 {
        self.by_day[hour_index / 24]
    }
}
