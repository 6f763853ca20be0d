//! Non-leap calendar arithmetic for the 8760-hour simulation year.

use serde::{Deserialize, Serialize};

pub const HOURS_PER_YEAR: usize = 8760;
pub const DAYS_PER_YEAR: usize = 365;

const DAYS_IN_MONTH: [u32; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

pub fn days_in_month(month: u32) -> u32 {
    DAYS_IN_MONTH[(month as usize).clamp(1, 12) - 1]
}

/// 1-based day of year for a valid (month, day).
pub fn day_of_year(month: u32, day: u32) -> u32 {
    DAYS_IN_MONTH[..(month as usize - 1)].iter().sum::<u32>() + day
}

/// Inverse of [`day_of_year`].
pub fn month_day(day_of_year: u32) -> (u32, u32) {
    let mut d = day_of_year;
    for (i, &n) in DAYS_IN_MONTH.iter().enumerate() {
        if d <= n {
            return (i as u32 + 1, d);
        }
        d -= n;
    }
    (12, 31)
}

pub fn is_valid_date(month: u32, day: u32) -> bool {
    (1..=12).contains(&month) && day >= 1 && day <= days_in_month(month)
}

/// (month, day, hour 1..=24) of a 0-based hour index.
pub fn hour_to_date(hour_index: usize) -> (u32, u32, u32) {
    let doy = (hour_index / 24) as u32 + 1;
    let (m, d) = month_day(doy);
    (m, d, (hour_index % 24) as u32 + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weekday {
    Sunday,
    Monday,
    Tuesday,
    Wednesday,
    Thursday,
    Friday,
    Saturday,
}

impl Weekday {
    pub const ALL: [Weekday; 7] = [
        Weekday::Sunday,
        Weekday::Monday,
        Weekday::Tuesday,
        Weekday::Wednesday,
        Weekday::Thursday,
        Weekday::Friday,
        Weekday::Saturday,
    ];

    pub fn parse(s: &str) -> Option<Weekday> {
        let s = s.trim().to_ascii_lowercase();
        Weekday::ALL
            .into_iter()
            .find(|d| format!("{d:?}").to_ascii_lowercase() == s)
    }

    pub fn is_weekend(self) -> bool {
        matches!(self, Weekday::Saturday | Weekday::Sunday)
    }

    fn add_days(self, n: u32) -> Weekday {
        Weekday::ALL[(self as usize + n as usize) % 7]
    }
}

/// Maps calendar days to weekdays given the weekday of January 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calendar {
    pub start_weekday: Weekday,
}

impl Default for Calendar {
    fn default() -> Self {
        Calendar {
            start_weekday: Weekday::Sunday,
        }
    }
}

impl Calendar {
    pub fn weekday(&self, month: u32, day: u32) -> Weekday {
        self.start_weekday.add_days(day_of_year(month, day) - 1)
    }

    pub fn is_weekend(&self, month: u32, day: u32) -> bool {
        self.weekday(month, day).is_weekend()
    }
}
