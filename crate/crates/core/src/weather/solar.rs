//! Sun position and irradiance on vertical facades.

use serde::{Deserialize, Serialize};

use crate::calendar;
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SunPosition<T> {
    /// Degrees above the horizon.
    pub altitude: T,
    /// Degrees clockwise from north, in `[0, 360)`.
    pub azimuth: T,
}

/// Beam and diffuse components of one hourly record, W/m².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Irradiance<T> {
    pub direct_normal: T,
    pub diffuse_horizontal: T,
    pub global_horizontal: T,
}

/// Solar declination in degrees. Trigonometric day-of-year fit including
/// the orbital eccentricity term.
pub fn declination<T: Scalar>(day_of_year: u32) -> T {
    let n: T = lit(day_of_year as f64);
    let year: T = lit(365.24);
    let full: T = lit(360.0);
    let inner = (full / year * (n - lit(2.0))).to_radians().sin() * lit(360.0 / std::f64::consts::PI * 0.0167);
    let angle = (full / year * (n + lit(10.0))).to_radians() + inner.to_radians();
    (lit::<T>(-23.44).to_radians().sin() * angle.cos()).asin().to_degrees()
}

/// Equation of time in minutes.
pub fn equation_of_time<T: Scalar>(day_of_year: u32) -> T {
    let b = (lit::<T>(360.0) * (lit::<T>(day_of_year as f64) - lit(81.0)) / lit(364.0)).to_radians();
    lit::<T>(9.87) * (b + b).sin() - lit::<T>(7.53) * b.cos() - lit::<T>(1.5) * b.sin()
}

/// Sun position for a latitude, day of year and apparent solar time in
/// hours (12 = solar noon).
pub fn sun_at_solar_time<T: Scalar>(latitude: T, day_of_year: u32, solar_hour: T) -> SunPosition<T> {
    let phi = latitude.to_radians();
    let delta = declination::<T>(day_of_year).to_radians();
    let omega = (lit::<T>(15.0) * (solar_hour - lit(12.0))).to_radians();
    let sin_alt = phi.sin() * delta.sin() + phi.cos() * delta.cos() * omega.cos();
    let altitude = sin_alt.max(-T::one()).min(T::one()).asin().to_degrees();
    let y = -(delta.cos() * omega.sin());
    let x = delta.sin() * phi.cos() - delta.cos() * phi.sin() * omega.cos();
    let mut azimuth = y.atan2(x).to_degrees();
    let full: T = lit(360.0);
    if azimuth < T::zero() {
        azimuth = azimuth + full;
    }
    if azimuth >= full {
        azimuth = azimuth - full;
    }
    SunPosition { altitude, azimuth }
}

/// Sun position at the middle of the EPW hour ending at `hour` local
/// standard time.
pub fn solar_position<T: Scalar>(latitude: T, longitude: T, timezone_offset: T, month: u32, day: u32, hour: u32) -> SunPosition<T> {
    let doy = calendar::day_of_year(month, day);
    let clock: T = lit::<T>(hour as f64) - lit(0.5);
    let correction_min = lit::<T>(4.0) * (longitude - lit::<T>(15.0) * timezone_offset) + equation_of_time::<T>(doy);
    sun_at_solar_time(latitude, doy, clock + correction_min / lit(60.0))
}

/// Total irradiance on a vertical surface whose outward normal points at
/// `facade_azimuth`, with an isotropic sky and ground reflection.
pub fn incident_on_facade<T: Scalar>(irr: &Irradiance<T>, sun: &SunPosition<T>, facade_azimuth: T, albedo: T) -> T {
    let half: T = lit(0.5);
    let diffuse = half * irr.diffuse_horizontal;
    let ground = half * albedo * irr.global_horizontal;
    direct_on_facade(irr, sun, facade_azimuth) + diffuse + ground
}

/// Beam component only.
pub fn direct_on_facade<T: Scalar>(irr: &Irradiance<T>, sun: &SunPosition<T>, facade_azimuth: T) -> T {
    if sun.altitude <= T::zero() {
        return T::zero();
    }
    let cos_incidence = sun.altitude.to_radians().cos() * (sun.azimuth - facade_azimuth).to_radians().cos();
    irr.direct_normal * cos_incidence.max(T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn equator_equinox_noon_is_overhead() {
        let s = sun_at_solar_time(0.0_f64, 80, 12.0);
        assert_abs_diff_eq!(s.altitude, 90.0, epsilon = 1.0);
    }

    #[test]
    fn winter_solstice_at_forty_north() {
        let s = sun_at_solar_time(40.0_f64, 355, 12.0);
        assert_abs_diff_eq!(s.altitude, 90.0 - 40.0 - 23.45, epsilon = 1.0);
        assert_abs_diff_eq!(s.azimuth, 180.0, epsilon = 1e-6);
    }

    #[test]
    fn morning_sun_is_east() {
        let s = sun_at_solar_time(35.0_f64, 172, 8.0);
        assert!(s.altitude > 0.0);
        assert!(s.azimuth > 0.0 && s.azimuth < 180.0);
    }

    #[test]
    fn night_keeps_only_sky_and_ground_terms() {
        let irr = Irradiance { direct_normal: 500.0, diffuse_horizontal: 100.0, global_horizontal: 40.0 };
        let sun = SunPosition { altitude: -5.0, azimuth: 180.0 };
        let total = incident_on_facade(&irr, &sun, 180.0, 0.2);
        assert_abs_diff_eq!(total, 50.0 + 0.5 * 0.2 * 40.0, epsilon = 1e-12);
    }

    #[test]
    fn sun_behind_facade_has_no_beam() {
        let irr = Irradiance { direct_normal: 800.0, diffuse_horizontal: 0.0, global_horizontal: 0.0 };
        let sun = SunPosition { altitude: 20.0, azimuth: 0.0 };
        assert_eq!(direct_on_facade(&irr, &sun, 180.0), 0.0);
    }

    #[test]
    fn normal_incidence_limit() {
        let irr = Irradiance { direct_normal: 800.0, diffuse_horizontal: 0.0, global_horizontal: 0.0 };
        let sun = SunPosition { altitude: 1e-9, azimuth: 135.0 };
        assert_abs_diff_eq!(direct_on_facade(&irr, &sun, 135.0), 800.0, epsilon = 1e-6);
    }

    #[test]
    fn works_in_single_precision() {
        let s = sun_at_solar_time(40.0_f32, 355, 12.0);
        assert!((s.altitude - 26.55).abs() < 1.0);
    }
}
