//! Simulates one reference layout in every bundled climate under AC, NV
//! and MM and prints EUI and PNT.
//!
//! ```text
//! cargo run --release -p ventgen --example climate_strategies -- double_loaded
//! ```

use std::path::Path;
use std::time::Instant;

use ventgen::catalog::{reference_layout, TileRoles};
use ventgen::control::ControlMode;
use ventgen::metrics::SimulationSummary;
use ventgen::occupancy::{load_profiles, Income, Period};
use ventgen::thermal::{build_model, occupancy_series, simulate_year, ModelConfig, SimulationSettings};
use ventgen::weather::WeatherYear;
use ventgen::wfc::TileExample;

const CLIMATES: [&str; 6] = ["houston_2a", "phoenix_2b", "atlanta_3a", "los_angeles_3b_ca", "las_vegas_3b", "san_francisco_3c"];

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "double_loaded".into());
    let tiles = TileExample::load(Path::new("data/tiles/midrise.json")).expect("tiles").tiles;
    let roles = TileRoles::from_tileset(&tiles).expect("roles");
    let layout = reference_layout(&name, &tiles).expect("reference layout");
    let profiles = load_profiles(&std::fs::read_to_string("data/occupancy/middle_income.csv").unwrap()).unwrap();
    let schedule = profiles.schedule(Period::PostCovid, Income::Middle).unwrap();
    let model = build_model(&layout, &roles, 0.0, &ModelConfig::default()).unwrap();
    let settings = SimulationSettings::default();
    println!("{name}: {} zones, GFA {:.0} m2", model.zones.len(), model.gross_floor_area);
    println!("{:<20} {:<4} {:>8} {:>8} {:>8} {:>10} {:>10}", "climate", "mode", "EUI", "PNTad", "PNTpmv", "cool kWh", "heat kWh");
    for c in CLIMATES {
        let w = WeatherYear::load(Path::new(&format!("data/weather/{c}.epw"))).unwrap();
        let occ = occupancy_series(&schedule, &w);
        for mode in ControlMode::ALL {
            let t = Instant::now();
            let r = simulate_year(&model, &w, &occ, mode, &settings).unwrap();
            let el = t.elapsed();
            let s = SimulationSummary::from_results(&r, 0, 0.0, c, true).unwrap();
            println!(
                "{:<20} {:<4} {:>8.2} {:>8.2} {:>8.2} {:>10.0} {:>10.0}  ({el:.0?})",
                c, mode, s.eui, s.pnt_adaptive, s.pnt_pmv, s.hvac_cooling_kwh, s.hvac_heating_kwh
            );
        }
    }
}
