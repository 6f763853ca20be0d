//! EUI and PNT metrics, hourly heat maps, and batch sweeps over
//! (layout, orientation, climate, strategy).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calendar::days_in_month;
use crate::catalog::Catalog;
use crate::comfort::ComfortModel;
use crate::control::ControlMode;
use crate::occupancy::WeekSchedule;
use crate::thermal::{build_model, occupancy_series, simulate_year, HourlyResults, ModelConfig, SimulationSettings};
use crate::weather::WeatherYear;

pub const J_PER_KWH: f64 = 3.6e6;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("gross floor area must be > 0, got {0}")]
    InvalidArea(f64),
    #[error("no occupied zone-hours; PNT is undefined")]
    NoOccupiedHours,
    #[error("month must be within 1..=12, got {0}")]
    InvalidMonth(u32),
}

/// Annual HVAC electricity plus lighting and equipment, kWh per m² of
/// gross floor area.
pub fn compute_eui(results: &HourlyResults, gross_floor_area: f64) -> Result<f64, MetricError> {
    if !(gross_floor_area > 0.0) {
        return Err(MetricError::InvalidArea(gross_floor_area));
    }
    let total: f64 = (0..results.hour_count()).map(|h| results.hour_electricity_j(h)).sum();
    Ok(total / J_PER_KWH / gross_floor_area)
}

/// Percentage of neutral zone-hours. With `occupied_only`, only hours with
/// an occupancy fraction above zero count.
pub fn compute_pnt(results: &HourlyResults, model: ComfortModel, occupied_only: bool) -> Result<f64, MetricError> {
    let mut counted = 0usize;
    let mut neutral = 0usize;
    for (h, ctx) in results.hours.iter().enumerate() {
        if occupied_only && ctx.occupancy <= 0.0 {
            continue;
        }
        for z in results.hour_zones(h) {
            counted += 1;
            let ok = match model {
                ComfortModel::Adaptive => z.adaptive_neutral,
                ComfortModel::Pmv => z.pmv_neutral,
            };
            neutral += ok as usize;
        }
    }
    if counted == 0 {
        return Err(MetricError::NoOccupiedHours);
    }
    Ok(100.0 * neutral as f64 / counted as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub layout_id: usize,
    pub orientation: f64,
    pub climate: String,
    pub strategy: ControlMode,
    /// kWh/m²/yr
    pub eui: f64,
    pub pnt_adaptive: f64,
    pub pnt_pmv: f64,
    pub hvac_cooling_kwh: f64,
    pub hvac_heating_kwh: f64,
    pub lighting_equipment_kwh: f64,
}

impl SimulationSummary {
    pub fn from_results(
        results: &HourlyResults,
        layout_id: usize,
        orientation: f64,
        climate: &str,
        occupied_only: bool,
    ) -> Result<Self, MetricError> {
        let (c, h, l) = results.annual_totals_j();
        Ok(SimulationSummary {
            layout_id,
            orientation,
            climate: climate.to_string(),
            strategy: results.strategy,
            eui: compute_eui(results, results.gross_floor_area)?,
            pnt_adaptive: compute_pnt(results, ComfortModel::Adaptive, occupied_only)?,
            pnt_pmv: compute_pnt(results, ComfortModel::Pmv, occupied_only)?,
            hvac_cooling_kwh: c / J_PER_KWH,
            hvac_heating_kwh: h / J_PER_KWH,
            lighting_equipment_kwh: l / J_PER_KWH,
        })
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.4},{:.3},{:.3},{:.2},{:.2},{:.2}",
            self.layout_id,
            fmt_deg(self.orientation),
            self.climate,
            self.strategy,
            self.eui,
            self.pnt_adaptive,
            self.pnt_pmv,
            self.hvac_cooling_kwh,
            self.hvac_heating_kwh,
            self.lighting_equipment_kwh
        )
    }
}

fn fmt_deg(d: f64) -> String {
    if d.fract() == 0.0 {
        format!("{d:.0}")
    } else {
        format!("{d}")
    }
}

pub const RESULTS_CSV_HEADER: &str =
    "layout_id,orientation_deg,climate,strategy,eui_kwh_m2yr,pnt_adaptive_pct,pnt_pmv_pct,cooling_kwh,heating_kwh,lights_equip_kwh";

/// Note placed above every results table.
pub const EUI_SCOPE_NOTE: &str = "EUI covers HVAC (cooling/COP + heating/COP), lighting and equipment electricity only; no fans or pumps.";

pub fn results_csv(summaries: &[SimulationSummary]) -> String {
    let mut s = String::from(RESULTS_CSV_HEADER);
    s.push('\n');
    for r in summaries {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// (max − min) / mean of the EUI values.
pub fn eui_spread(summaries: &[SimulationSummary]) -> Option<f64> {
    if summaries.is_empty() {
        return None;
    }
    let euis = summaries.iter().map(|s| s.eui);
    let max = euis.clone().fold(f64::NEG_INFINITY, f64::max);
    let min = euis.clone().fold(f64::INFINITY, f64::min);
    let mean = euis.sum::<f64>() / summaries.len() as f64;
    (mean > 0.0).then(|| (max - min) / mean)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub climate: String,
    pub strategy: ControlMode,
    pub cases: usize,
    pub mean_eui: f64,
    pub mean_pnt_adaptive: f64,
    pub mean_pnt_pmv: f64,
}

/// Per (climate, strategy) means.
pub fn aggregate(summaries: &[SimulationSummary]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(String, ControlMode), Vec<&SimulationSummary>> = BTreeMap::new();
    for s in summaries {
        groups.entry((s.climate.clone(), s.strategy)).or_default().push(s);
    }
    groups
        .into_iter()
        .map(|((climate, strategy), v)| {
            let n = v.len() as f64;
            AggregateRow {
                climate,
                strategy,
                cases: v.len(),
                mean_eui: v.iter().map(|s| s.eui).sum::<f64>() / n,
                mean_pnt_adaptive: v.iter().map(|s| s.pnt_adaptive).sum::<f64>() / n,
                mean_pnt_pmv: v.iter().map(|s| s.pnt_pmv).sum::<f64>() / n,
            }
        })
        .collect()
}

pub fn format_aggregate_table(rows: &[AggregateRow]) -> String {
    let mut s = format!("# {EUI_SCOPE_NOTE}\n");
    let _ = writeln!(s, "{:<16} {:<8} {:>6} {:>12} {:>10} {:>10}", "climate", "strategy", "cases", "EUI kWh/m2", "PNT adapt", "PNT pmv");
    for r in rows {
        let _ = writeln!(
            s,
            "{:<16} {:<8} {:>6} {:>12.2} {:>10.2} {:>10.2}",
            r.climate, r.strategy, r.cases, r.mean_eui, r.mean_pnt_adaptive, r.mean_pnt_pmv
        );
    }
    s
}

// Heat-map color scales. Fixed so maps from different runs compare directly.
const ENERGY_SCALE_MAX_WH_M2: f64 = 10.0;
const ENERGY_LOW: [u8; 3] = [0xff, 0xf7, 0xec];
const ENERGY_HIGH: [u8; 3] = [0xb3, 0x00, 0x00];
const NEUTRAL_LOW: [u8; 3] = [0xd7, 0x30, 0x27];
const NEUTRAL_HIGH: [u8; 3] = [0x1a, 0x98, 0x50];
const CELL: usize = 14;

fn lerp_color(lo: [u8; 3], hi: [u8; 3], t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let c: Vec<u8> = (0..3)
        .map(|i| (lo[i] as f64 + (hi[i] as f64 - lo[i] as f64) * t).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Day × hour heat maps for one month: building electricity intensity and
/// the fraction of zones judged neutral (adaptive model).
pub fn render_hourly_svg(results: &HourlyResults, month: u32) -> Result<String, MetricError> {
    if !(1..=12).contains(&month) {
        return Err(MetricError::InvalidMonth(month));
    }
    let days = days_in_month(month) as usize;
    let first = results.hours.iter().position(|h| h.month == month).unwrap_or(0);
    let margin = 40;
    let panel_w = 24 * CELL;
    let panel_h = days * CELL;
    let width = margin * 2 + panel_w * 2 + margin;
    let height = margin * 2 + panel_h;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(
        s,
        "<metadata>month={month}; rows=days({days}); columns=hours(24); \
energy panel: building electricity per hour in Wh/m2 of gross floor area, linear scale 0 ({}) to {ENERGY_SCALE_MAX_WH_M2} ({}), clamped; \
comfort panel: fraction of zones adaptive-neutral, linear scale 0 ({}) to 1 ({})</metadata>",
        lerp_color(ENERGY_LOW, ENERGY_HIGH, 0.0),
        lerp_color(ENERGY_LOW, ENERGY_HIGH, 1.0),
        lerp_color(NEUTRAL_LOW, NEUTRAL_HIGH, 0.0),
        lerp_color(NEUTRAL_LOW, NEUTRAL_HIGH, 1.0),
    );
    let panels = [("energy", margin), ("comfort", margin * 2 + panel_w)];
    for (name, x0) in panels {
        let _ = writeln!(s, r#"<text x="{x0}" y="{}">{name}</text>"#, margin - 8);
        let _ = writeln!(s, r#"<g id="{name}">"#);
        for d in 0..days {
            for h in 0..24 {
                let idx = first + d * 24 + h;
                let fill = if idx < results.hour_count() {
                    match name {
                        "energy" => {
                            let wh_m2 = results.hour_electricity_j(idx) / 3600.0 / results.gross_floor_area;
                            lerp_color(ENERGY_LOW, ENERGY_HIGH, wh_m2 / ENERGY_SCALE_MAX_WH_M2)
                        }
                        _ => {
                            let zs = results.hour_zones(idx);
                            let frac = zs.iter().filter(|z| z.adaptive_neutral).count() as f64 / zs.len().max(1) as f64;
                            lerp_color(NEUTRAL_LOW, NEUTRAL_HIGH, frac)
                        }
                    }
                } else {
                    "#cccccc".to_string()
                };
                let _ = writeln!(
                    s,
                    r#"<rect class="cell" x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{fill}"/>"#,
                    x0 + h * CELL,
                    margin + d * CELL
                );
            }
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub layouts: Vec<usize>,
    pub orientations: Vec<f64>,
    /// Climate labels looked up in the weather store.
    pub climates: Vec<String>,
    pub strategies: Vec<ControlMode>,
    pub occupied_only: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.layouts.is_empty() || self.orientations.is_empty() || self.climates.is_empty() || self.strategies.is_empty() {
            return Err("sweep: layouts, orientations, climates and strategies must be non-empty".into());
        }
        if let Some(o) = self.orientations.iter().find(|o| !(0.0..360.0).contains(*o)) {
            return Err(format!("sweep: orientation {o} outside [0, 360)"));
        }
        Ok(())
    }

    pub fn case_count(&self) -> usize {
        self.layouts.len() * self.orientations.len() * self.climates.len() * self.strategies.len()
    }

    /// `start:stop:step` inclusive, e.g. `0:330:30`.
    pub fn parse_orientations(s: &str) -> Result<Vec<f64>, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
        let nums = nums.map_err(|e| format!("orientation range {s:?}: {e}"))?;
        match nums.as_slice() {
            [single] => Ok(vec![*single]),
            [start, stop, step] if *step > 0.0 && stop >= start => {
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                Ok((0..=n).map(|i| start + i as f64 * step).collect())
            }
            _ => Err(format!("orientation range {s:?} must be `deg` or `start:stop:step` with step > 0")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseError {
    pub layout_id: usize,
    pub orientation: f64,
    pub climate: String,
    pub strategy: ControlMode,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub summaries: Vec<SimulationSummary>,
    pub errors: Vec<CaseError>,
}

/// Everything a case needs besides its coordinates.
pub struct SweepContext<'a> {
    pub catalog: &'a Catalog,
    pub weather: &'a BTreeMap<String, WeatherYear>,
    pub occupancy: &'a WeekSchedule,
    pub model: &'a ModelConfig,
    pub settings: &'a SimulationSettings,
}

fn case_key(a: &(usize, f64, String, ControlMode)) -> (usize, u64, &str, ControlMode) {
    // Orientations are validated finite and non-negative, so the bit
    // pattern orders like the value.
    (a.0, a.1.to_bits(), a.2.as_str(), a.3)
}

/// Runs the Cartesian product of `spec` in parallel. `jobs` = `None` uses
/// the global rayon pool. Output order is independent of scheduling.
pub fn run_sweep(spec: &SweepSpec, ctx: &SweepContext<'_>, jobs: Option<usize>) -> Result<SweepOutcome, String> {
    spec.validate()?;
    let roles = ctx.catalog.roles().ok_or("catalog tile set has no `empty` tile")?;
    let mut cases = Vec::with_capacity(spec.case_count());
    for &l in &spec.layouts {
        for &o in &spec.orientations {
            for c in &spec.climates {
                for &s in &spec.strategies {
                    cases.push((l, o, c.clone(), s));
                }
            }
        }
    }
    cases.sort_by(|a, b| case_key(a).cmp(&case_key(b)));
    cases.dedup();

    let occupancy: BTreeMap<&str, Vec<f64>> = ctx
        .weather
        .iter()
        .map(|(label, w)| (label.as_str(), occupancy_series(ctx.occupancy, w)))
        .collect();

    let run_case = |(layout_id, orientation, climate, strategy): &(usize, f64, String, ControlMode)| -> Result<SimulationSummary, String> {
        let entry = ctx.catalog.get(*layout_id).ok_or_else(|| format!("unknown layout id {layout_id}"))?;
        let weather = ctx.weather.get(climate).ok_or_else(|| format!("no weather loaded for climate {climate:?}"))?;
        let model = build_model(&entry.layout, &roles, *orientation, ctx.model).map_err(|e| e.to_string())?;
        let results = simulate_year(&model, weather, &occupancy[climate.as_str()], *strategy, ctx.settings).map_err(|e| e.to_string())?;
        SimulationSummary::from_results(&results, *layout_id, *orientation, climate, spec.occupied_only).map_err(|e| e.to_string())
    };

    let outcomes: Vec<Result<SimulationSummary, String>> = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| e.to_string())?
            .install(|| cases.par_iter().map(run_case).collect()),
        None => cases.par_iter().map(run_case).collect(),
    };

    let mut out = SweepOutcome::default();
    for (case, r) in cases.into_iter().zip(outcomes) {
        match r {
            Ok(s) => out.summaries.push(s),
            Err(message) => out.errors.push(CaseError {
                layout_id: case.0,
                orientation: case.1,
                climate: case.2,
                strategy: case.3,
                message,
            }),
        }
    }
    Ok(out)
}
