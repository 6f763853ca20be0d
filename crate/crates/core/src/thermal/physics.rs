//! Single-node zone heat balance
//!
//! ```text
//! C dT/dt = (UA + m cp) (T_out - T) + SHGC Q_solar + Q_internal + Q_hvac
//! ```
//!
//! integrated in closed form over each step. Every step also reports the
//! heat delivered by each path so the balance can be audited.

use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Scalar};

pub const AIR_DENSITY: f64 = 1.2;
pub const AIR_CP: f64 = 1005.0;
pub const GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Facade<T> {
    /// Outward normal, degrees clockwise from north.
    pub azimuth: T,
    /// Gross wall area including glazing, m².
    pub wall_area: T,
    pub window_area: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZoneParams<T> {
    pub floor_area: T,
    pub volume: T,
    /// Conduction through exposed walls and windows, W/K.
    pub ua_envelope: T,
    /// J/K
    pub thermal_capacitance: T,
    pub facades: Vec<Facade<T>>,
    pub solar_heat_gain_coeff: T,
    /// Air changes per hour.
    pub infiltration_ach: T,
}

impl<T: Scalar> ZoneParams<T> {
    pub fn window_area(&self) -> T {
        self.facades.iter().fold(T::zero(), |a, f| a + f.window_area)
    }

    pub fn infiltration_mass_flow(&self) -> T {
        self.infiltration_ach * self.volume / lit(3600.0) * lit(AIR_DENSITY)
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = [self.floor_area, self.volume, self.thermal_capacitance];
        if positive.iter().any(|v| !(*v > T::zero())) {
            return Err("floor area, volume and capacitance must be positive".into());
        }
        if self.ua_envelope < T::zero() || self.infiltration_ach < T::zero() || self.solar_heat_gain_coeff < T::zero() {
            return Err("UA, infiltration and SHGC must be non-negative".into());
        }
        if self.facades.iter().any(|f| f.window_area > f.wall_area || f.window_area < T::zero()) {
            return Err("window area must lie within [0, wall area]".into());
        }
        Ok(())
    }
}

/// Boundary conditions held constant over one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drivers<T> {
    /// °C
    pub outdoor_temp: T,
    /// Irradiance on the glazing times glazed area, W (before SHGC).
    pub solar_incident: T,
    /// W
    pub internal_sensible: T,
    /// Window ventilation, kg/s (infiltration is added from the zone).
    pub ventilation_mass_flow: T,
}

/// Heat delivered to the zone over a step, J. Positive values warm the zone.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StepFlows<T> {
    pub envelope: T,
    pub air_exchange: T,
    pub solar: T,
    pub internal: T,
    pub hvac: T,
}

impl<T: Scalar> StepFlows<T> {
    pub fn total(&self) -> T {
        self.envelope + self.air_exchange + self.solar + self.internal + self.hvac
    }

    pub fn magnitude(&self) -> T {
        self.envelope.abs() + self.air_exchange.abs() + self.solar.abs() + self.internal.abs() + self.hvac.abs()
    }

    pub fn add(&mut self, o: &StepFlows<T>) {
        self.envelope = self.envelope + o.envelope;
        self.air_exchange = self.air_exchange + o.air_exchange;
        self.solar = self.solar + o.solar;
        self.internal = self.internal + o.internal;
        self.hvac = self.hvac + o.hvac;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ZoneState<T> {
    pub indoor_temp: T,
    pub window_open: bool,
    /// W, averaged over the last step.
    pub hvac_heating: T,
    /// W, averaged over the last step.
    pub hvac_cooling: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult<T> {
    pub end_temp: T,
    pub heating: T,
    pub cooling: T,
    pub flows: StepFlows<T>,
}

/// Linear coefficients of the balance: `C dT/dt = k (T_out - T) + q`.
#[derive(Debug, Clone, Copy)]
struct Balance<T> {
    capacitance: T,
    ua: T,
    air: T,
    outdoor: T,
    solar: T,
    internal: T,
}

impl<T: Scalar> Balance<T> {
    fn new(params: &ZoneParams<T>, d: &Drivers<T>) -> Self {
        let mass_flow = params.infiltration_mass_flow() + d.ventilation_mass_flow;
        Balance {
            capacitance: params.thermal_capacitance,
            ua: params.ua_envelope,
            air: mass_flow * lit(AIR_CP),
            outdoor: d.outdoor_temp,
            solar: d.solar_incident * params.solar_heat_gain_coeff,
            internal: d.internal_sensible,
        }
    }

    fn k(&self) -> T {
        self.ua + self.air
    }

    fn q(&self) -> T {
        self.solar + self.internal
    }

    /// Evolves from `t0` for `dt` seconds with extra constant power
    /// `hvac`. Returns the end temperature and the time integral of T.
    fn evolve(&self, t0: T, hvac: T, dt: T) -> (T, T) {
        let k = self.k();
        let c = self.capacitance;
        let q = self.q() + hvac;
        if k > T::zero() {
            let t_eq = self.outdoor + q / k;
            let x = k * dt / c;
            let decay = (-x).exp();
            let end = t_eq + (t0 - t_eq) * decay;
            let integral = t_eq * dt + (t0 - t_eq) * (c / k) * -(-x).exp_m1();
            (end, integral)
        } else {
            let rate = q / c;
            (t0 + rate * dt, t0 * dt + rate * dt * dt / lit(2.0))
        }
    }

    fn flows(&self, integral_t: T, hvac: T, dt: T) -> StepFlows<T> {
        let exposure = self.outdoor * dt - integral_t;
        StepFlows {
            envelope: self.ua * exposure,
            air_exchange: self.air * exposure,
            solar: self.solar * dt,
            internal: self.internal * dt,
            hvac: hvac * dt,
        }
    }

    fn segment(&self, t0: T, hvac: T, dt: T) -> (T, StepFlows<T>) {
        let (end, integral) = self.evolve(t0, hvac, dt);
        (end, self.flows(integral, hvac, dt))
    }

    /// Time for the free-floating trajectory from `t0` to reach `target`.
    fn crossing_time(&self, t0: T, target: T) -> T {
        let k = self.k();
        if k > T::zero() {
            let t_eq = self.outdoor + self.q() / k;
            let ratio = (target - t_eq) / (t0 - t_eq);
            -(self.capacitance / k) * ratio.ln()
        } else {
            (target - t0) * self.capacitance / self.q()
        }
    }

    /// Constant power that lands exactly on `target` after `dt`.
    fn power_to_reach(&self, t0: T, target: T, dt: T) -> T {
        let k = self.k();
        let c = self.capacitance;
        if k > T::zero() {
            let decay_complement = -(-(k * dt / c)).exp_m1();
            let decay = T::one() - decay_complement;
            let t_eq = (target - t0 * decay) / decay_complement;
            k * (t_eq - self.outdoor) - self.q()
        } else {
            c * (target - t0) / dt - self.q()
        }
    }
}

/// Free-floating step with its heat flow audit.
pub fn free_float<T: Scalar>(t0: T, params: &ZoneParams<T>, drivers: &Drivers<T>, dt: T) -> StepResult<T> {
    let (end_temp, flows) = Balance::new(params, drivers).segment(t0, T::zero(), dt);
    StepResult {
        end_temp,
        heating: T::zero(),
        cooling: T::zero(),
        flows,
    }
}

pub fn free_float_step<T: Scalar>(state: &ZoneState<T>, params: &ZoneParams<T>, drivers: &Drivers<T>, dt: T) -> ZoneState<T> {
    ZoneState {
        indoor_temp: free_float(state.indoor_temp, params, drivers, dt).end_temp,
        window_open: state.window_open,
        hvac_heating: T::zero(),
        hvac_cooling: T::zero(),
    }
}

/// Ideal thermostat over one step.
///
/// If the free-floating end temperature stays inside the setpoints no HVAC
/// energy is used. Otherwise, starting inside the band, the zone floats
/// until it reaches the violated setpoint and is then held there; starting
/// outside, a constant power brings it onto the setpoint at the end of the
/// step. The energy charged closes the balance exactly.
pub fn ideal_load<T: Scalar>(t0: T, params: &ZoneParams<T>, drivers: &Drivers<T>, dt: T, heat_setpoint: T, cool_setpoint: T) -> StepResult<T> {
    let balance = Balance::new(params, drivers);
    let (ff_end, ff_flows) = balance.segment(t0, T::zero(), dt);
    let target = if ff_end > cool_setpoint {
        cool_setpoint
    } else if ff_end < heat_setpoint {
        heat_setpoint
    } else {
        return StepResult {
            end_temp: ff_end,
            heating: T::zero(),
            cooling: T::zero(),
            flows: ff_flows,
        };
    };
    let cooling = target == cool_setpoint;
    let starts_inside = if cooling { t0 <= target } else { t0 >= target };

    let (hvac_energy, flows) = if starts_inside {
        let t_cross = balance.crossing_time(t0, target).max(T::zero()).min(dt);
        let (_, mut flows) = balance.segment(t0, T::zero(), t_cross);
        let hold = dt - t_cross;
        let hold_power = -(balance.k() * (balance.outdoor - target) + balance.q());
        let held = balance.flows(target * hold, hold_power, hold);
        flows.add(&held);
        (hold_power * hold, flows)
    } else {
        let power = balance.power_to_reach(t0, target, dt);
        let (_, flows) = balance.segment(t0, power, dt);
        (power * dt, flows)
    };
    StepResult {
        end_temp: target,
        heating: hvac_energy.max(T::zero()),
        cooling: (-hvac_energy).max(T::zero()),
        flows,
    }
}

/// State-in, state-out form of [`ideal_load`]: returns the new state plus heating and cooling
/// energy in J.
pub fn ideal_load_to_setpoint<T: Scalar>(
    state: &ZoneState<T>,
    params: &ZoneParams<T>,
    drivers: &Drivers<T>,
    dt: T,
    heat_setpoint: T,
    cool_setpoint: T,
) -> (ZoneState<T>, T, T) {
    let r = ideal_load(state.indoor_temp, params, drivers, dt, heat_setpoint, cool_setpoint);
    let next = ZoneState {
        indoor_temp: r.end_temp,
        window_open: state.window_open,
        hvac_heating: r.heating / dt,
        hvac_cooling: r.cooling / dt,
    };
    (next, r.heating, r.cooling)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VentilationConfig {
    pub wind_discharge_coeff: f64,
    pub stack_discharge_coeff: f64,
    pub window_height: f64,
    /// Fraction of the glazed area that opens.
    pub openable_fraction: f64,
    /// Floor on the wind incidence factor.
    pub min_wind_factor: f64,
}

impl Default for VentilationConfig {
    fn default() -> Self {
        VentilationConfig {
            wind_discharge_coeff: 0.55,
            stack_discharge_coeff: 0.6,
            window_height: 1.5,
            openable_fraction: 0.5,
            min_wind_factor: 0.25,
        }
    }
}

/// Window airflow, kg/s, combining wind and stack effects in quadrature.
#[allow(clippy::too_many_arguments)]
pub fn ventilation_flow<T: Scalar>(
    open_area: T,
    window_open: bool,
    wind_speed: T,
    wind_direction: T,
    facade_azimuths: &[T],
    indoor: T,
    outdoor: T,
    cfg: &VentilationConfig,
) -> T {
    if !window_open || open_area <= T::zero() {
        return T::zero();
    }
    let incidence = facade_azimuths
        .iter()
        .map(|&az| (wind_direction - az).to_radians().cos())
        .fold(None, |best: Option<T>, c| {
            Some(match best {
                Some(b) if b >= c => b,
                _ => c,
            })
        })
        .unwrap_or(T::zero())
        .abs()
        .max(lit(cfg.min_wind_factor));
    let wind = lit::<T>(cfg.wind_discharge_coeff) * open_area * wind_speed * incidence;
    let mean_kelvin = (indoor + outdoor) / lit(2.0) + lit(273.15);
    let head = lit::<T>(cfg.window_height) / lit(2.0);
    let stack = lit::<T>(cfg.stack_discharge_coeff)
        * open_area
        * (lit::<T>(2.0 * GRAVITY) * head * (indoor - outdoor).abs() / mean_kelvin).sqrt();
    (wind * wind + stack * stack).sqrt() * lit(AIR_DENSITY)
}

/// Window airflow to hold over a step of `dt` seconds. Flow depends on the
/// indoor temperature, so it is taken at the mid-step temperature predicted
/// with the start-of-step flow.
#[allow(clippy::too_many_arguments)]
pub fn step_ventilation<T: Scalar>(
    t0: T,
    params: &ZoneParams<T>,
    drivers: &Drivers<T>,
    dt: T,
    open_area: T,
    window_open: bool,
    wind_speed: T,
    wind_direction: T,
    facade_azimuths: &[T],
    cfg: &VentilationConfig,
) -> T {
    let flow = |t: T| ventilation_flow(open_area, window_open, wind_speed, wind_direction, facade_azimuths, t, drivers.outdoor_temp, cfg);
    let start = flow(t0);
    if start <= T::zero() {
        return start;
    }
    let predictor = Drivers { ventilation_mass_flow: start, ..*drivers };
    let mid = free_float(t0, params, &predictor, dt / lit(2.0)).end_temp;
    flow(mid)
}
