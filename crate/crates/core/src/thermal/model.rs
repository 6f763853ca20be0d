use serde::{Deserialize, Serialize};

use super::physics::{Facade, VentilationConfig, ZoneParams};
use super::ThermalError;
use crate::catalog::{BuildingLayout, TileRoles};
use crate::wfc::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeometryConfig {
    /// Tile edge length, m.
    pub tile_edge: f64,
    pub floor_height: f64,
    pub floors: u32,
    pub window_to_wall: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            tile_edge: 8.0,
            floor_height: 3.0,
            floors: 5,
            window_to_wall: 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnvelopeConfig {
    /// W/m²K
    pub wall_u: f64,
    /// W/m²K
    pub window_u: f64,
    pub solar_heat_gain_coeff: f64,
    /// J/K per m² of floor.
    pub capacitance_per_area: f64,
    pub infiltration_ach: f64,
    pub ground_albedo: f64,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        EnvelopeConfig {
            wall_u: 0.7,
            window_u: 2.8,
            solar_heat_gain_coeff: 0.4,
            capacitance_per_area: 180_000.0,
            infiltration_ach: 0.5,
            ground_albedo: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HvacConfig {
    pub cooling_cop: f64,
    pub heating_cop: f64,
}

impl Default for HvacConfig {
    fn default() -> Self {
        HvacConfig {
            cooling_cop: 3.0,
            heating_cop: 1.0,
        }
    }
}

/// Physical assumptions for turning a layout into zones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    pub geometry: GeometryConfig,
    pub envelope: EnvelopeConfig,
    pub hvac: HvacConfig,
    pub ventilation: VentilationConfig,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), String> {
        let g = &self.geometry;
        let e = &self.envelope;
        if !(g.tile_edge > 0.0 && g.floor_height > 0.0 && g.floors >= 1) {
            return Err("geometry: tile_edge, floor_height must be > 0 and floors >= 1".into());
        }
        if !(0.0..=1.0).contains(&g.window_to_wall) {
            return Err("geometry: window_to_wall must lie in [0, 1]".into());
        }
        if !(e.wall_u >= 0.0 && e.window_u >= 0.0 && e.capacitance_per_area > 0.0 && e.infiltration_ach >= 0.0) {
            return Err("envelope: U-values and infiltration must be >= 0, capacitance > 0".into());
        }
        if !(0.0..=1.0).contains(&e.solar_heat_gain_coeff) || !(0.0..=1.0).contains(&e.ground_albedo) {
            return Err("envelope: SHGC and albedo must lie in [0, 1]".into());
        }
        if !(self.hvac.cooling_cop > 0.0 && self.hvac.heating_cop > 0.0) {
            return Err("hvac: COPs must be > 0".into());
        }
        let v = &self.ventilation;
        if !(0.0..=1.0).contains(&v.openable_fraction) || v.window_height <= 0.0 {
            return Err("ventilation: openable_fraction in [0, 1] and window_height > 0".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Zone {
    /// Tile position in the layout's bounding box.
    pub cell: (usize, usize),
    pub params: ZoneParams<f64>,
}

/// One representative floor of apartments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildingModel {
    pub zones: Vec<Zone>,
    /// Clockwise rotation of the plan, degrees in `[0, 360)`.
    pub orientation: f64,
    pub floors: u32,
    pub floor_height: f64,
    pub gross_floor_area: f64,
    pub config: ModelConfig,
}

impl BuildingModel {
    /// Distinct facade azimuths across all zones, ascending.
    pub fn facade_azimuths(&self) -> Vec<f64> {
        let mut az: Vec<f64> = self
            .zones
            .iter()
            .flat_map(|z| z.params.facades.iter().map(|f| f.azimuth))
            .collect();
        az.sort_by(f64::total_cmp);
        az.dedup();
        az
    }
}

fn edge_normal(d: Direction) -> f64 {
    match d {
        Direction::North => 0.0,
        Direction::East => 90.0,
        Direction::South => 180.0,
        Direction::West => 270.0,
    }
}

pub fn normalize_azimuth(deg: f64) -> f64 {
    let a = deg.rem_euclid(360.0);
    if a >= 360.0 {
        0.0
    } else {
        a
    }
}

/// One zone per apartment tile. Edges facing anything other than another
/// apartment (empty, corridor, core or the outside) become facades;
/// apartment-to-apartment walls are adiabatic.
pub fn build_model(layout: &BuildingLayout, roles: &TileRoles, orientation: f64, config: &ModelConfig) -> Result<BuildingModel, ThermalError> {
    config.validate().map_err(ThermalError::Config)?;
    if !orientation.is_finite() {
        return Err(ThermalError::Config(format!("orientation {orientation} is not finite")));
    }
    let orientation = normalize_azimuth(orientation);
    let g = &config.geometry;
    let e = &config.envelope;
    let area = g.tile_edge * g.tile_edge;
    let wall_area = g.tile_edge * g.floor_height;
    let window_area = wall_area * g.window_to_wall;

    let mut zones = Vec::new();
    for &(r, c, t) in &layout.cells {
        if !roles.is_apartment(t) {
            continue;
        }
        let mut facades = Vec::new();
        for d in Direction::ALL {
            let (dr, dc) = d.offset();
            let neighbor = layout.tile_at(r as isize + dr, c as isize + dc);
            if !neighbor.is_some_and(|n| roles.is_apartment(n)) {
                facades.push(Facade {
                    azimuth: normalize_azimuth(edge_normal(d) + orientation),
                    wall_area,
                    window_area,
                });
            }
        }
        let ua = facades
            .iter()
            .map(|f| e.wall_u * (f.wall_area - f.window_area) + e.window_u * f.window_area)
            .sum();
        zones.push(Zone {
            cell: (r, c),
            params: ZoneParams {
                floor_area: area,
                volume: area * g.floor_height,
                ua_envelope: ua,
                thermal_capacitance: e.capacitance_per_area * area,
                facades,
                solar_heat_gain_coeff: e.solar_heat_gain_coeff,
                infiltration_ach: e.infiltration_ach,
            },
        });
    }
    if zones.is_empty() {
        return Err(ThermalError::NoApartments);
    }
    let gross_floor_area = zones.iter().map(|z| z.params.floor_area).sum::<f64>() * g.floors as f64;
    Ok(BuildingModel {
        zones,
        orientation,
        floors: g.floors,
        floor_height: g.floor_height,
        gross_floor_area,
        config: *config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::BuildingLayout;

    fn roles() -> TileRoles {
        TileRoles { empty: 0, core: Some(4), corridor: Some(3) }
    }

    fn azimuths(m: &BuildingModel, zone: usize) -> Vec<f64> {
        let mut a: Vec<f64> = m.zones[zone].params.facades.iter().map(|f| f.azimuth).collect();
        a.sort_by(f64::total_cmp);
        a
    }

    #[test]
    fn single_tile_has_four_facades() {
        let l = BuildingLayout::from_cells(vec![(0, 0, 2)]);
        let m = build_model(&l, &roles(), 0.0, &ModelConfig::default()).unwrap();
        assert_eq!(m.zones.len(), 1);
        assert_eq!(azimuths(&m, 0), vec![0.0, 90.0, 180.0, 270.0]);
        assert_eq!(m.zones[0].params.floor_area, 64.0);
        assert_eq!(m.gross_floor_area, 64.0 * 5.0);
        let m30 = build_model(&l, &roles(), 30.0, &ModelConfig::default()).unwrap();
        assert_eq!(azimuths(&m30, 0), vec![30.0, 120.0, 210.0, 300.0]);
    }

    #[test]
    fn envelope_arithmetic() {
        let l = BuildingLayout::from_cells(vec![(0, 0, 2)]);
        let m = build_model(&l, &roles(), 0.0, &ModelConfig::default()).unwrap();
        let p = &m.zones[0].params;
        // 4 facades of 24 m² with 6 m² of glazing each.
        assert!((p.ua_envelope - 4.0 * (0.7 * 18.0 + 2.8 * 6.0)).abs() < 1e-9);
        assert!((p.thermal_capacitance - 180_000.0 * 64.0).abs() < 1e-6);
        assert!((p.window_area() - 24.0).abs() < 1e-12);
    }

    #[test]
    fn zero_apartments_is_an_error() {
        let l = BuildingLayout::from_cells(vec![(0, 0, 4), (0, 1, 3)]);
        assert!(matches!(
            build_model(&l, &roles(), 0.0, &ModelConfig::default()),
            Err(ThermalError::NoApartments)
        ));
    }

    #[test]
    fn corridor_edges_are_exposed() {
        let l = BuildingLayout::from_cells(vec![(0, 0, 2), (1, 0, 3)]);
        let m = build_model(&l, &roles(), 0.0, &ModelConfig::default()).unwrap();
        assert_eq!(m.zones.len(), 1);
        assert_eq!(m.zones[0].params.facades.len(), 4);
    }

    #[test]
    fn orientation_wraps() {
        let l = BuildingLayout::from_cells(vec![(0, 0, 2)]);
        let m = build_model(&l, &roles(), 390.0, &ModelConfig::default()).unwrap();
        assert_eq!(m.orientation, 30.0);
        assert_eq!(normalize_azimuth(-90.0), 270.0);
    }
}
