//! EPW text parsing and serialization.
//!
//! Field indices below are 1-based as in the EnergyPlus documentation.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calendar::{self, Calendar, Weekday, HOURS_PER_YEAR};

#[derive(Debug, Error)]
pub enum EpwError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("expected {HOURS_PER_YEAR} hourly records, found {found}")]
    Length { found: usize },
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiteLocation {
    pub latitude: f64,
    pub longitude: f64,
    pub timezone_offset: f64,
    pub elevation: f64,
}

impl SiteLocation {
    pub fn validate(&self) -> Result<(), String> {
        if !(-90.0..=90.0).contains(&self.latitude) {
            return Err(format!("latitude {} outside [-90, 90]", self.latitude));
        }
        if !(-180.0..=180.0).contains(&self.longitude) {
            return Err(format!("longitude {} outside [-180, 180]", self.longitude));
        }
        if !(-12.0..=14.0).contains(&self.timezone_offset) {
            return Err(format!("timezone offset {} outside [-12, 14]", self.timezone_offset));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeatherRecord {
    pub month: u32,
    pub day: u32,
    /// 1..=24, the hour ending at this clock time.
    pub hour: u32,
    pub dry_bulb: f64,
    pub dew_point: f64,
    pub rel_humidity: f64,
    pub pressure: f64,
    pub global_horizontal: f64,
    pub direct_normal: f64,
    pub diffuse_horizontal: f64,
    pub wind_direction: f64,
    pub wind_speed: f64,
}

/// One year of hourly weather; immutable once parsed.
#[derive(Debug, Clone, PartialEq)]
pub struct WeatherYear {
    pub name: String,
    pub location: SiteLocation,
    pub calendar: Calendar,
    records: Vec<WeatherRecord>,
}

// (1-based column, missing sentinel threshold)
const DRY_BULB: (usize, f64) = (7, 99.9);
const DEW_POINT: (usize, f64) = (8, 99.9);
const REL_HUMIDITY: (usize, f64) = (9, 999.0);
const PRESSURE: (usize, f64) = (10, 999_999.0);
const GLOBAL_HORIZONTAL: (usize, f64) = (14, 9999.0);
const DIRECT_NORMAL: (usize, f64) = (15, 9999.0);
const DIFFUSE_HORIZONTAL: (usize, f64) = (16, 9999.0);
const WIND_DIRECTION: (usize, f64) = (21, 999.0);
const WIND_SPEED: (usize, f64) = (22, 999.0);
const MIN_FIELDS: usize = 22;

impl WeatherYear {
    pub fn new(name: impl Into<String>, location: SiteLocation, calendar: Calendar, records: Vec<WeatherRecord>) -> Result<Self, EpwError> {
        if records.len() != HOURS_PER_YEAR {
            return Err(EpwError::Length { found: records.len() });
        }
        for (i, w) in records.windows(2).enumerate() {
            let key = |r: &WeatherRecord| (calendar::day_of_year(r.month, r.day), r.hour);
            if key(&w[1]) <= key(&w[0]) {
                return Err(EpwError::Format {
                    line: i + 2,
                    msg: "timestamps are not strictly increasing".into(),
                });
            }
        }
        Ok(WeatherYear {
            name: name.into(),
            location,
            calendar,
            records,
        })
    }

    pub fn records(&self) -> &[WeatherRecord] {
        &self.records
    }

    pub fn record(&self, hour_index: usize) -> &WeatherRecord {
        &self.records[hour_index]
    }

    pub fn load(path: &Path) -> Result<Self, EpwError> {
        let text = std::fs::read_to_string(path).map_err(|source| EpwError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut year = parse_epw(&text)?;
        if year.name.is_empty() {
            year.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        }
        Ok(year)
    }

    /// Daily mean dry-bulb temperature for days 1..=365 (index 0 = Jan 1).
    pub fn daily_mean_dry_bulb(&self) -> Vec<f64> {
        self.records
            .chunks(24)
            .map(|day| day.iter().map(|r| r.dry_bulb).sum::<f64>() / 24.0)
            .collect()
    }

    /// Writes the year back out in EPW layout. Columns not modelled here
    /// are filled with EPW missing-value codes.
    pub fn to_epw(&self) -> String {
        let loc = &self.location;
        let mut s = String::with_capacity(HOURS_PER_YEAR * 120);
        let _ = writeln!(
            s,
            "LOCATION,{},-,-,ventgen,000000,{:.4},{:.4},{:.1},{:.1}",
            if self.name.is_empty() { "site" } else { &self.name },
            loc.latitude,
            loc.longitude,
            loc.timezone_offset,
            loc.elevation
        );
        s.push_str("DESIGN CONDITIONS,0\nTYPICAL/EXTREME PERIODS,0\nGROUND TEMPERATURES,0\n");
        s.push_str("HOLIDAYS/DAYLIGHT SAVINGS,No,0,0,0\nCOMMENTS 1,\nCOMMENTS 2,\n");
        let _ = writeln!(
            s,
            "DATA PERIODS,1,1,Data,{:?}, 1/ 1,12/31",
            self.calendar.start_weekday
        );
        for r in &self.records {
            let _ = writeln!(
                s,
                "2001,{},{},{},60,?9?9?9?9E0?9?9?9?9?9?9?9?9?9?9?9?9?9?9?9*9*9?9?9?9,{:.1},{:.1},{:.0},{:.0},9999,9999,9999,{:.0},{:.0},{:.0},999999,999999,999999,999999,{:.0},{:.1},99,99,9999,99999,9,999999999,999,0.999,999,99,999,0,99",
                r.month,
                r.day,
                r.hour,
                r.dry_bulb,
                r.dew_point,
                r.rel_humidity,
                r.pressure,
                r.global_horizontal,
                r.direct_normal,
                r.diffuse_horizontal,
                r.wind_direction,
                r.wind_speed
            );
        }
        s
    }
}

/// Parses EPW text. Feb 29 rows are dropped; missing-value codes are
/// replaced by the previous hour's value.
pub fn parse_epw(text: &str) -> Result<WeatherYear, EpwError> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or(EpwError::Format {
        line: 1,
        msg: "empty input, expected LOCATION header".into(),
    })?;
    let loc_fields: Vec<&str> = first.split(',').map(str::trim).collect();
    if loc_fields.first().map(|f| f.to_ascii_uppercase()) != Some("LOCATION".into()) {
        return Err(EpwError::Format {
            line: 1,
            msg: "missing LOCATION header".into(),
        });
    }
    if loc_fields.len() < 10 {
        return Err(EpwError::Format {
            line: 1,
            msg: format!("LOCATION header has {} fields, expected 10", loc_fields.len()),
        });
    }
    let num = |fields: &[&str], idx: usize, line: usize, what: &str| -> Result<f64, EpwError> {
        fields[idx - 1].parse::<f64>().map_err(|_| EpwError::Format {
            line,
            msg: format!("field {idx} ({what}) is not numeric: {:?}", fields[idx - 1]),
        })
    };
    let location = SiteLocation {
        latitude: num(&loc_fields, 7, 1, "latitude")?,
        longitude: num(&loc_fields, 8, 1, "longitude")?,
        timezone_offset: num(&loc_fields, 9, 1, "timezone")?,
        elevation: num(&loc_fields, 10, 1, "elevation")?,
    };
    location.validate().map_err(|msg| EpwError::Format { line: 1, msg })?;
    let name = loc_fields[1].to_string();

    let mut calendar = Calendar::default();
    let mut records: Vec<WeatherRecord> = Vec::with_capacity(HOURS_PER_YEAR + 24);
    for (i, line) in lines {
        let ln = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields[0].parse::<i64>().is_err() {
            // Header record; only the data period start weekday matters.
            if fields[0].eq_ignore_ascii_case("DATA PERIODS") {
                if let Some(day) = fields.get(4).and_then(|s| Weekday::parse(s)) {
                    calendar.start_weekday = day;
                }
            }
            continue;
        }
        if fields.len() < MIN_FIELDS {
            return Err(EpwError::Format {
                line: ln,
                msg: format!("data row has {} fields, expected at least {MIN_FIELDS}", fields.len()),
            });
        }
        let int = |idx: usize, what: &str| -> Result<u32, EpwError> {
            fields[idx - 1].parse::<u32>().map_err(|_| EpwError::Format {
                line: ln,
                msg: format!("field {idx} ({what}) is not an integer: {:?}", fields[idx - 1]),
            })
        };
        let (month, day, hour) = (int(2, "month")?, int(3, "day")?, int(4, "hour")?);
        if month == 2 && day == 29 {
            continue;
        }
        if !calendar::is_valid_date(month, day) || !(1..=24).contains(&hour) {
            return Err(EpwError::Format {
                line: ln,
                msg: format!("invalid timestamp {month}/{day} hour {hour}"),
            });
        }
        let prev = records.last().copied();
        let value = |(idx, sentinel): (usize, f64), what: &str, get: fn(&WeatherRecord) -> f64| -> Result<f64, EpwError> {
            let v = num(&fields, idx, ln, what)?;
            if v < sentinel {
                return Ok(v);
            }
            prev.map(|p| get(&p)).ok_or_else(|| EpwError::Format {
                line: ln,
                msg: format!("field {idx} ({what}) is missing in the first hour"),
            })
        };
        let rec = WeatherRecord {
            month,
            day,
            hour,
            dry_bulb: value(DRY_BULB, "dry bulb", |r| r.dry_bulb)?,
            dew_point: value(DEW_POINT, "dew point", |r| r.dew_point)?,
            rel_humidity: value(REL_HUMIDITY, "relative humidity", |r| r.rel_humidity)?,
            pressure: value(PRESSURE, "pressure", |r| r.pressure)?,
            global_horizontal: value(GLOBAL_HORIZONTAL, "global horizontal", |r| r.global_horizontal)?,
            direct_normal: value(DIRECT_NORMAL, "direct normal", |r| r.direct_normal)?,
            diffuse_horizontal: value(DIFFUSE_HORIZONTAL, "diffuse horizontal", |r| r.diffuse_horizontal)?,
            wind_direction: value(WIND_DIRECTION, "wind direction", |r| r.wind_direction)?,
            wind_speed: value(WIND_SPEED, "wind speed", |r| r.wind_speed)?,
        };
        check_ranges(&rec, ln)?;
        records.push(rec);
    }
    WeatherYear::new(name, location, calendar, records)
}

fn check_ranges(r: &WeatherRecord, line: usize) -> Result<(), EpwError> {
    let bad = |msg: String| Err(EpwError::Format { line, msg });
    if !(0.0..=110.0).contains(&r.rel_humidity) {
        return bad(format!("relative humidity {} outside [0, 110]", r.rel_humidity));
    }
    if r.global_horizontal < 0.0 || r.direct_normal < 0.0 || r.diffuse_horizontal < 0.0 {
        return bad("negative irradiance".into());
    }
    if r.wind_speed < 0.0 {
        return bad(format!("negative wind speed {}", r.wind_speed));
    }
    Ok(())
}
