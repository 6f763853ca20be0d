//! Writes the six bundled synthetic EPW files.
//!
//! Each year is built from approximate monthly climate normals: smooth
//! seasonal dry-bulb with an AR(1) day-to-day anomaly and a sinusoidal
//! diurnal swing, dew point capped by dry bulb, clear-sky irradiance
//! scaled by a daily clearness draw, and noisy prevailing wind. The files
//! exercise the pipeline; they are not TMY data.
//!
//! ```text
//! cargo run --release -p ventgen --example synth_weather -- data/weather
//! ```

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use ventgen::calendar::{hour_to_date, Calendar, Weekday, HOURS_PER_YEAR};
use ventgen::comfort::saturation_pressure;
use ventgen::weather::solar::solar_position;
use ventgen::weather::{SiteLocation, WeatherRecord, WeatherYear};

struct Site {
    file: &'static str,
    name: &'static str,
    loc: SiteLocation,
    /// Monthly mean dry bulb, °C.
    temp: [f64; 12],
    /// Monthly mean dew point, °C.
    dew: [f64; 12],
    diurnal_range: f64,
    /// Mean daily clearness in (0, 1].
    clearness: f64,
    wind_speed: f64,
    wind_dir: f64,
}

fn loc(latitude: f64, longitude: f64, timezone_offset: f64, elevation: f64) -> SiteLocation {
    SiteLocation { latitude, longitude, timezone_offset, elevation }
}

fn sites() -> Vec<Site> {
    vec![
        Site {
            file: "houston_2a.epw",
            name: "Houston-synthetic",
            loc: loc(29.98, -95.36, -6.0, 30.0),
            temp: [11.8, 13.9, 17.6, 21.3, 25.3, 28.1, 29.2, 29.2, 26.8, 22.2, 17.2, 12.8],
            dew: [6.0, 8.0, 11.0, 15.0, 19.0, 22.0, 22.5, 22.5, 20.0, 15.0, 10.0, 7.0],
            diurnal_range: 9.5,
            clearness: 0.62,
            wind_speed: 3.4,
            wind_dir: 160.0,
        },
        Site {
            file: "phoenix_2b.epw",
            name: "Phoenix-synthetic",
            loc: loc(33.43, -112.02, -7.0, 337.0),
            temp: [13.6, 15.6, 19.0, 23.3, 28.2, 33.3, 35.1, 34.4, 31.5, 25.2, 18.2, 13.0],
            dew: [-1.0, 0.0, 0.0, -1.0, 0.0, 3.0, 13.0, 15.0, 10.0, 3.0, 0.0, -1.0],
            diurnal_range: 13.0,
            clearness: 0.88,
            wind_speed: 2.9,
            wind_dir: 270.0,
        },
        Site {
            file: "atlanta_3a.epw",
            name: "Atlanta-synthetic",
            loc: loc(33.64, -84.43, -5.0, 308.0),
            temp: [6.8, 9.0, 13.0, 17.4, 21.8, 25.6, 27.0, 26.6, 23.5, 17.6, 12.1, 7.9],
            dew: [-1.0, 1.0, 4.0, 8.0, 14.0, 18.0, 20.0, 20.0, 17.0, 10.0, 4.0, 1.0],
            diurnal_range: 10.0,
            clearness: 0.60,
            wind_speed: 3.5,
            wind_dir: 300.0,
        },
        Site {
            file: "los_angeles_3b_ca.epw",
            name: "LosAngeles-synthetic",
            loc: loc(33.94, -118.41, -8.0, 30.0),
            temp: [14.2, 14.4, 15.1, 16.3, 17.9, 19.6, 21.4, 22.1, 21.6, 19.7, 16.7, 14.1],
            dew: [6.0, 7.0, 8.0, 10.0, 12.0, 14.0, 16.0, 17.0, 15.0, 12.0, 8.0, 6.0],
            diurnal_range: 7.5,
            clearness: 0.74,
            wind_speed: 3.6,
            wind_dir: 250.0,
        },
        Site {
            file: "las_vegas_3b.epw",
            name: "LasVegas-synthetic",
            loc: loc(36.08, -115.15, -8.0, 664.0),
            temp: [8.3, 10.8, 14.8, 18.8, 24.3, 30.0, 33.4, 32.4, 27.8, 20.6, 13.0, 7.8],
            dew: [-5.0, -4.0, -4.0, -4.0, -2.0, 0.0, 6.0, 8.0, 3.0, -2.0, -4.0, -5.0],
            diurnal_range: 12.5,
            clearness: 0.86,
            wind_speed: 4.2,
            wind_dir: 210.0,
        },
        Site {
            file: "san_francisco_3c.epw",
            name: "SanFrancisco-synthetic",
            loc: loc(37.62, -122.37, -8.0, 2.0),
            temp: [10.4, 12.0, 13.2, 14.4, 15.9, 17.4, 18.1, 18.6, 18.8, 17.3, 13.7, 10.7],
            dew: [5.0, 6.0, 6.0, 7.0, 9.0, 10.0, 12.0, 12.0, 12.0, 10.0, 7.0, 5.0],
            diurnal_range: 7.5,
            clearness: 0.70,
            wind_speed: 5.5,
            wind_dir: 280.0,
        },
    ]
}

/// Periodic interpolation between mid-month values.
fn seasonal(monthly: &[f64; 12], day_of_year: f64) -> f64 {
    let mids: Vec<f64> = (0..12).map(|m| 15.2 + 30.42 * m as f64).collect();
    let i = mids.iter().rposition(|&m| m <= day_of_year).unwrap_or(11);
    let (m0, v0) = (mids[i], monthly[i]);
    let (m1, v1) = if i == 11 { (mids[0] + 365.0, monthly[0]) } else { (mids[i + 1], monthly[i + 1]) };
    let d = if day_of_year < mids[0] { day_of_year + 365.0 } else { day_of_year };
    let t = ((d - m0) / (m1 - m0)).clamp(0.0, 1.0);
    let w = 0.5 - 0.5 * (PI * t).cos();
    v0 + (v1 - v0) * w
}

fn generate(site: &Site, seed: u64) -> WeatherYear {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let anomaly = Normal::new(0.0, 1.8).unwrap();
    let pressure = 101_325.0 * (1.0 - 2.25577e-5 * site.loc.elevation).powf(5.25588);
    let mut temp_anom = 0.0;
    let mut dew_anom = 0.0;
    let mut records = Vec::with_capacity(HOURS_PER_YEAR);
    let mut clear = site.clearness;
    let mut wind_day = site.wind_speed;
    for i in 0..HOURS_PER_YEAR {
        let (month, day, hour) = hour_to_date(i);
        if hour == 1 {
            temp_anom = 0.7 * temp_anom + anomaly.sample(&mut rng);
            dew_anom = 0.6 * dew_anom + anomaly.sample(&mut rng);
            let spread = (1.0 - site.clearness).min(site.clearness) * 0.9;
            clear = (site.clearness + rng.gen_range(-spread..=spread)).clamp(0.05, 1.0);
            wind_day = site.wind_speed * rng.gen_range(0.5..1.5);
        }
        let doy = (i / 24) as f64 + (hour as f64 - 0.5) / 24.0;
        let mean = seasonal(&site.temp, doy) + temp_anom;
        let swing = 0.5 * site.diurnal_range * (0.6 + 0.4 * clear / site.clearness);
        let dry_bulb = mean + swing * (TAU * (hour as f64 - 0.5 - 15.0) / 24.0).cos();
        let dew_point = (seasonal(&site.dew, doy) + dew_anom).min(dry_bulb - 0.5);
        let rel_humidity = (100.0 * saturation_pressure(dew_point) / saturation_pressure(dry_bulb)).clamp(1.0, 100.0);

        let sun = solar_position(site.loc.latitude, site.loc.longitude, site.loc.timezone_offset, month, day, hour);
        let (ghi, dni, dhi) = if sun.altitude > 0.0 {
            let s = sun.altitude.to_radians().sin();
            let air_mass = 1.0 / (s + 0.50572 * (sun.altitude + 6.07995).powf(-1.6364));
            let dni_clear = 1353.0 * 0.7f64.powf(air_mass.powf(0.678));
            let dni = dni_clear * clear.powf(1.5);
            let dhi = (0.1 * dni_clear + 120.0 * (1.0 - clear)) * s.sqrt();
            (dni * s + dhi, dni, dhi)
        } else {
            (0.0, 0.0, 0.0)
        };
        let diurnal_wind = 0.8 + 0.4 * (TAU * (hour as f64 - 15.0) / 24.0).cos();
        let wind_speed = (wind_day * diurnal_wind + rng.gen_range(-0.5..0.5)).max(0.0);
        let wind_direction = (site.wind_dir + rng.gen_range(-60.0..60.0f64)).rem_euclid(360.0);
        records.push(WeatherRecord {
            month,
            day,
            hour,
            dry_bulb: (dry_bulb * 10.0).round() / 10.0,
            dew_point: (dew_point * 10.0).round() / 10.0,
            rel_humidity: rel_humidity.round(),
            pressure: pressure.round(),
            global_horizontal: ghi.round(),
            direct_normal: dni.round(),
            diffuse_horizontal: dhi.round(),
            wind_direction: wind_direction.round(),
            wind_speed: (wind_speed * 10.0).round() / 10.0,
        });
    }
    let calendar = Calendar { start_weekday: Weekday::Monday };
    WeatherYear::new(site.name, site.loc, calendar, records).expect("8760 ordered records")
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data/weather".into()));
    std::fs::create_dir_all(&dir).expect("create output directory");
    for (k, site) in sites().iter().enumerate() {
        let year = generate(site, 0x5EED_0000 + k as u64);
        let path = dir.join(site.file);
        std::fs::write(&path, year.to_epw()).expect("write epw");
        let daily = year.daily_mean_dry_bulb();
        let jan: f64 = daily[..31].iter().sum::<f64>() / 31.0;
        let jul: f64 = daily[181..212].iter().sum::<f64>() / 31.0;
        println!("{}: Jan {jan:.1} °C, Jul {jul:.1} °C", path.display());
    }
}
