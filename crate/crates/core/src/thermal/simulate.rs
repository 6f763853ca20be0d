//! Annual hourly simulation of a building model under one control strategy.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::model::BuildingModel;
use super::physics::{free_float, ideal_load, step_ventilation, Drivers, StepFlows};
use super::ThermalError;
use crate::calendar::HOURS_PER_YEAR;
use crate::comfort::{adaptive_neutral, pmv_neutral, pmv_ppd, saturation_pressure, ComfortConfig, PmvInputs};
use crate::control::{decide, ControlDecision, ControlMode, ControlThresholds};
use crate::occupancy::{internal_gains, GainParameters, WeekSchedule};
use crate::weather::{incident_on_facade, PrevailingMean, WeatherYear};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationSettings {
    pub gains: GainParameters,
    pub control: ControlThresholds,
    pub comfort: ComfortConfig,
    /// Sub-steps per hour.
    pub substeps: usize,
    /// Starting indoor temperature, °C.
    pub initial_temp: f64,
    /// Days at the end of the year simulated first and discarded.
    pub warmup_days: usize,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        SimulationSettings {
            gains: GainParameters::default(),
            control: ControlThresholds::default(),
            comfort: ComfortConfig::default(),
            substeps: 6,
            initial_temp: 22.0,
            warmup_days: 7,
        }
    }
}

impl SimulationSettings {
    pub fn validate(&self) -> Result<(), String> {
        self.gains.validate()?;
        self.control.validate()?;
        self.comfort.validate()?;
        if self.substeps == 0 {
            return Err("simulation: substeps must be >= 1".into());
        }
        if !self.initial_temp.is_finite() {
            return Err("simulation: initial_temp must be finite".into());
        }
        if self.warmup_days > 365 {
            return Err("simulation: warmup_days must be <= 365".into());
        }
        Ok(())
    }
}

/// Building-wide values for one hour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HourContext {
    pub month: u32,
    pub day: u32,
    /// 1..=24
    pub hour: u32,
    pub outdoor_temp: f64,
    /// Prevailing mean outdoor temperature, °C.
    pub t_pma: f64,
    pub occupancy: f64,
}

/// One zone over one hour, for a single representative floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneHour {
    /// End-of-hour air temperature, °C.
    pub indoor_temp: f64,
    pub heating_j: f64,
    pub cooling_j: f64,
    pub lights_equip_j: f64,
    pub window_open: bool,
    pub pmv: f64,
    pub adaptive_neutral: bool,
    pub pmv_neutral: bool,
    pub flows: StepFlows<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlyResults {
    pub strategy: ControlMode,
    pub zone_count: usize,
    pub zone_areas: Vec<f64>,
    pub zone_capacitance: Vec<f64>,
    pub floors: u32,
    pub gross_floor_area: f64,
    pub cooling_cop: f64,
    pub heating_cop: f64,
    pub hours: Vec<HourContext>,
    /// Hour-major: `zones[hour * zone_count + zone]`.
    pub zones: Vec<ZoneHour>,
    /// Indoor temperature at the start of the year, per zone.
    pub start_temps: Vec<f64>,
}

impl HourlyResults {
    pub fn hour_count(&self) -> usize {
        self.hours.len()
    }

    pub fn zone_hour(&self, hour: usize, zone: usize) -> &ZoneHour {
        &self.zones[hour * self.zone_count + zone]
    }

    pub fn hour_zones(&self, hour: usize) -> &[ZoneHour] {
        &self.zones[hour * self.zone_count..(hour + 1) * self.zone_count]
    }

    /// Start-of-hour temperature of a zone.
    pub fn start_temp(&self, hour: usize, zone: usize) -> f64 {
        if hour == 0 {
            self.start_temps[zone]
        } else {
            self.zone_hour(hour - 1, zone).indoor_temp
        }
    }

    /// Building electricity for one hour, J, scaled to all floors.
    pub fn hour_electricity_j(&self, hour: usize) -> f64 {
        let per_floor: f64 = self
            .hour_zones(hour)
            .iter()
            .map(|z| z.cooling_j / self.cooling_cop + z.heating_j / self.heating_cop + z.lights_equip_j)
            .sum();
        per_floor * self.floors as f64
    }

    /// Annual (cooling, heating, lighting+equipment) thermal/electric totals, J,
    /// scaled to all floors.
    pub fn annual_totals_j(&self) -> (f64, f64, f64) {
        let (c, h, l) = self.zones.iter().fold((0.0, 0.0, 0.0), |(c, h, l), z| {
            (c + z.cooling_j, h + z.heating_j, l + z.lights_equip_j)
        });
        let f = self.floors as f64;
        (c * f, h * f, l * f)
    }

    pub const CSV_HEADER: &'static str = "hour_index,month,day,hour,zone,indoor_temp_c,outdoor_temp_c,t_pma_c,occupancy,\
heating_j,cooling_j,lights_equip_j,window_open,pmv,adaptive_neutral,pmv_neutral,\
flow_envelope_j,flow_air_exchange_j,flow_solar_j,flow_internal_j,flow_hvac_j";

    /// One row per (hour, zone), per-floor energies.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.zones.len() * 160);
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for (h, ctx) in self.hours.iter().enumerate() {
            for (z, zh) in self.hour_zones(h).iter().enumerate() {
                let f = &zh.flows;
                let _ = writeln!(
                    out,
                    "{h},{},{},{},{z},{:.4},{:.2},{:.4},{:.4},{:.1},{:.1},{:.1},{},{:.4},{},{},{:.1},{:.1},{:.1},{:.1},{:.1}",
                    ctx.month,
                    ctx.day,
                    ctx.hour,
                    zh.indoor_temp,
                    ctx.outdoor_temp,
                    ctx.t_pma,
                    ctx.occupancy,
                    zh.heating_j,
                    zh.cooling_j,
                    zh.lights_equip_j,
                    zh.window_open as u8,
                    zh.pmv,
                    zh.adaptive_neutral as u8,
                    zh.pmv_neutral as u8,
                    f.envelope,
                    f.air_exchange,
                    f.solar,
                    f.internal,
                    f.hvac,
                );
            }
        }
        out
    }
}

/// Hourly occupancy fractions for the weather year's calendar.
pub fn occupancy_series(schedule: &WeekSchedule, weather: &WeatherYear) -> Vec<f64> {
    weather
        .records()
        .iter()
        .map(|r| schedule.fraction(&weather.calendar, r.month, r.day, r.hour as usize - 1))
        .collect()
}

struct ZonePlan {
    /// (index into the azimuth table, window area)
    glazing: Vec<(usize, f64)>,
    facade_azimuths: Vec<f64>,
    open_area: f64,
}

/// Indoor relative humidity from the outdoor vapour pressure at the indoor
/// temperature (no moisture balance).
fn indoor_rh(dew_point: f64, indoor: f64) -> f64 {
    (100.0 * saturation_pressure(dew_point) / saturation_pressure(indoor)).clamp(0.0, 100.0)
}

/// Simulates 8760 hours. `occupancy` holds one fraction per hour.
///
/// Controls are evaluated per zone from the start-of-hour temperature; the
/// zone is then advanced in `substeps` equal steps. One floor is simulated;
/// [`HourlyResults`] carries the floor count for scaling.
pub fn simulate_year(
    model: &BuildingModel,
    weather: &WeatherYear,
    occupancy: &[f64],
    strategy: ControlMode,
    settings: &SimulationSettings,
) -> Result<HourlyResults, ThermalError> {
    settings.validate().map_err(ThermalError::Config)?;
    if occupancy.len() != HOURS_PER_YEAR {
        return Err(ThermalError::Config(format!(
            "occupancy series has {} values, expected {HOURS_PER_YEAR}",
            occupancy.len()
        )));
    }
    for z in &model.zones {
        z.params.validate().map_err(ThermalError::Config)?;
    }
    let cfg = &model.config;
    let comfort = &settings.comfort;
    let azimuths = model.facade_azimuths();
    let plans: Vec<ZonePlan> = model
        .zones
        .iter()
        .map(|z| {
            let glazing = z
                .params
                .facades
                .iter()
                .filter(|f| f.window_area > 0.0)
                .map(|f| {
                    let i = azimuths.binary_search_by(|a| a.total_cmp(&f.azimuth)).unwrap_or(0);
                    (i, f.window_area)
                })
                .collect();
            ZonePlan {
                glazing,
                facade_azimuths: z.params.facades.iter().map(|f| f.azimuth).collect(),
                open_area: z.params.window_area() * cfg.ventilation.openable_fraction,
            }
        })
        .collect();

    let prevailing = PrevailingMean::new(weather, comfort.prevailing_window_days);
    let n = model.zones.len();
    let dt = 3600.0 / settings.substeps as f64;
    let mut temps = vec![settings.initial_temp; n];
    let mut decisions = vec![ControlDecision::initial(strategy, &settings.control); n];
    let mut incident = vec![0.0; azimuths.len()];

    let warmup = settings.warmup_days * 24;
    let mut hours = Vec::with_capacity(HOURS_PER_YEAR);
    let mut zones = Vec::with_capacity(HOURS_PER_YEAR * n);
    let mut start_temps = temps.clone();

    for step in 0..warmup + HOURS_PER_YEAR {
        let recording = step >= warmup;
        if step == warmup {
            start_temps.clone_from(&temps);
        }
        let h = (step + HOURS_PER_YEAR - warmup) % HOURS_PER_YEAR;
        let rec = weather.record(h);
        let sun = weather.sun(h);
        let irr = rec.irradiance();
        for (slot, &az) in incident.iter_mut().zip(&azimuths) {
            *slot = incident_on_facade(&irr, &sun, az, cfg.envelope.ground_albedo);
        }
        let t_out = rec.dry_bulb;
        let frac = occupancy[h];
        let hour_of_day = rec.hour as usize - 1;
        let t_pma = prevailing.for_hour(h);
        let clothing = comfort.clothing_for_month(rec.month);

        for z in 0..n {
            let params = &model.zones[z].params;
            let plan = &plans[z];
            let t_start = temps[z];
            let decision = decide(strategy, &settings.control, t_start, t_out, &decisions[z]);
            decisions[z] = decision;
            let gains = internal_gains(params.floor_area, frac, &settings.gains, hour_of_day);
            let solar_incident: f64 = plan.glazing.iter().map(|&(i, a)| incident[i] * a).sum();

            let mut t = t_start;
            let mut flows = StepFlows::default();
            let (mut heating, mut cooling) = (0.0, 0.0);
            for _ in 0..settings.substeps {
                let mut drivers = Drivers {
                    outdoor_temp: t_out,
                    solar_incident,
                    internal_sensible: gains.sensible,
                    ventilation_mass_flow: 0.0,
                };
                drivers.ventilation_mass_flow = step_ventilation(
                    t,
                    params,
                    &drivers,
                    dt,
                    plan.open_area,
                    decision.window_open,
                    rec.wind_speed,
                    rec.wind_direction,
                    &plan.facade_azimuths,
                    &cfg.ventilation,
                );
                let r = match decision.active_setpoints.filter(|_| decision.hvac_enabled) {
                    Some((heat, cool)) => ideal_load(t, params, &drivers, dt, heat, cool),
                    None => free_float(t, params, &drivers, dt),
                };
                t = r.end_temp;
                heating += r.heating;
                cooling += r.cooling;
                flows.add(&r.flows);
            }
            temps[z] = t;

            if recording {
                let velocity = if decision.window_open {
                    comfort.air_velocity_open
                } else {
                    comfort.air_velocity_closed
                };
                let pmv = pmv_ppd(&PmvInputs {
                    air_temp: t,
                    mean_radiant_temp: t,
                    air_velocity: velocity,
                    rel_humidity: indoor_rh(rec.dew_point, t),
                    metabolic_rate: comfort.metabolic_rate,
                    clothing,
                })?
                .pmv;
                zones.push(ZoneHour {
                    indoor_temp: t,
                    heating_j: heating,
                    cooling_j: cooling,
                    lights_equip_j: gains.electric * 3600.0,
                    window_open: decision.window_open,
                    pmv,
                    // Operative temperature equals air temperature with MRT = air.
                    adaptive_neutral: adaptive_neutral(t, t_pma, comfort.band),
                    pmv_neutral: pmv_neutral(pmv, comfort.pmv_threshold),
                    flows,
                });
            }
        }
        if recording {
            hours.push(HourContext {
                month: rec.month,
                day: rec.day,
                hour: rec.hour,
                outdoor_temp: t_out,
                t_pma,
                occupancy: frac,
            });
        }
    }

    Ok(HourlyResults {
        strategy,
        zone_count: n,
        zone_areas: model.zones.iter().map(|z| z.params.floor_area).collect(),
        zone_capacitance: model.zones.iter().map(|z| z.params.thermal_capacitance).collect(),
        floors: model.floors,
        gross_floor_area: model.gross_floor_area,
        cooling_cop: cfg.hvac.cooling_cop,
        heating_cop: cfg.hvac.heating_cop,
        hours,
        zones,
        start_temps,
    })
}
