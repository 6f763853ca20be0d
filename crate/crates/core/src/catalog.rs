//! Building extraction, rotational deduplication, filtering and geometric
//! descriptors for WFC solutions.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::wfc::{Direction, Solution, TileId, TileSet, CORE, CORRIDOR, EMPTY};

/// Which tile ids play structural roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileRoles {
    pub empty: TileId,
    pub core: Option<TileId>,
    pub corridor: Option<TileId>,
}

impl TileRoles {
    /// Reads roles from tile names; a tile set without `empty` has no
    /// notion of "outside" and is rejected.
    pub fn from_tileset(tileset: &TileSet) -> Option<Self> {
        Some(TileRoles {
            empty: tileset.id_of(EMPTY)?,
            core: tileset.id_of(CORE),
            corridor: tileset.id_of(CORRIDOR),
        })
    }

    pub fn is_core(&self, t: TileId) -> bool {
        self.core == Some(t)
    }

    pub fn is_corridor(&self, t: TileId) -> bool {
        self.corridor == Some(t)
    }

    /// Building tiles that are neither circulation nor core.
    pub fn is_apartment(&self, t: TileId) -> bool {
        t != self.empty && !self.is_core(t) && !self.is_corridor(t)
    }
}

/// One 4-connected building component, translated so its bounding box
/// starts at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingLayout {
    /// Position of the bounding box in the source solution.
    pub origin: (usize, usize),
    pub height: usize,
    pub width: usize,
    /// `(row, col, tile)` sorted row-major, relative to the bounding box.
    pub cells: Vec<(usize, usize, TileId)>,
}

impl BuildingLayout {
    /// Normalizes absolute cells to their tight bounding box.
    pub fn from_cells(mut cells: Vec<(usize, usize, TileId)>) -> Self {
        let min_r = cells.iter().map(|c| c.0).min().unwrap_or(0);
        let min_c = cells.iter().map(|c| c.1).min().unwrap_or(0);
        let max_r = cells.iter().map(|c| c.0).max().unwrap_or(0);
        let max_c = cells.iter().map(|c| c.1).max().unwrap_or(0);
        for c in &mut cells {
            c.0 -= min_r;
            c.1 -= min_c;
        }
        cells.sort_unstable();
        let (height, width) = if cells.is_empty() {
            (0, 0)
        } else {
            (max_r - min_r + 1, max_c - min_c + 1)
        };
        BuildingLayout {
            origin: (min_r, min_c),
            height,
            width,
            cells,
        }
    }

    /// Every non-empty glyph becomes a cell. Components are not checked.
    pub fn from_glyphs(text: &str, tileset: &TileSet) -> crate::wfc::Result<Self> {
        let sol = Solution::from_glyphs(text, tileset)?;
        let empty = tileset.id_of(EMPTY);
        let mut cells = Vec::new();
        for r in 0..sol.height() {
            for c in 0..sol.width() {
                let t = sol.get(r, c);
                if Some(t) != empty {
                    cells.push((r, c, t));
                }
            }
        }
        Ok(BuildingLayout::from_cells(cells))
    }

    pub fn tile_count(&self) -> usize {
        self.cells.len()
    }

    /// Dense `height x width` grid; `None` marks cells outside the building.
    pub fn grid(&self) -> Vec<Vec<Option<TileId>>> {
        let mut g = vec![vec![None; self.width]; self.height];
        for &(r, c, t) in &self.cells {
            g[r][c] = Some(t);
        }
        g
    }

    /// Tile at `(row, col)` relative to the bounding box; `None` when empty
    /// or outside.
    pub fn tile_at(&self, row: isize, col: isize) -> Option<TileId> {
        if row < 0 || col < 0 {
            return None;
        }
        let key = (row as usize, col as usize);
        self.cells
            .binary_search_by(|c| (c.0, c.1).cmp(&key))
            .ok()
            .map(|i| self.cells[i].2)
    }

    /// 90 degree clockwise rotation.
    pub fn rotated(&self) -> Self {
        let h = self.height;
        let cells = self.cells.iter().map(|&(r, c, t)| (c, h - 1 - r, t)).collect();
        let mut out = BuildingLayout::from_cells(cells);
        out.origin = self.origin;
        out
    }

    /// Mirror across the vertical axis.
    pub fn reflected(&self) -> Self {
        let w = self.width;
        let cells = self.cells.iter().map(|&(r, c, t)| (r, w - 1 - c, t)).collect();
        let mut out = BuildingLayout::from_cells(cells);
        out.origin = self.origin;
        out
    }

    pub fn to_glyphs(&self, tileset: &TileSet) -> String {
        let mut s = String::new();
        for row in self.grid() {
            for cell in row {
                s.push(cell.map_or('.', |t| tileset.glyph(t)));
            }
            s.push('\n');
        }
        s
    }

    fn serialize_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(4 + self.height * self.width);
        key.extend_from_slice(&(self.height as u16).to_be_bytes());
        key.extend_from_slice(&(self.width as u16).to_be_bytes());
        for row in self.grid() {
            key.extend(row.into_iter().map(|c| c.unwrap_or(u8::MAX)));
        }
        key
    }
}

/// Lexicographically smallest serialization over the four rotations.
pub fn canonicalize(layout: &BuildingLayout) -> Vec<u8> {
    canonicalize_with(layout, false)
}

/// As [`canonicalize`], optionally also identifying mirror images.
pub fn canonicalize_with(layout: &BuildingLayout, reflections: bool) -> Vec<u8> {
    let mut variants = Vec::with_capacity(8);
    let mut cur = layout.clone();
    for _ in 0..4 {
        variants.push(cur.serialize_key());
        if reflections {
            variants.push(cur.reflected().serialize_key());
        }
        cur = cur.rotated();
    }
    variants.into_iter().min().unwrap_or_default()
}

pub fn key_hex(key: &[u8]) -> String {
    let mut s = String::with_capacity(key.len() * 2);
    for b in key {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// True when some non-building cell of the bounding box cannot reach the
/// outside through non-building cells.
pub fn has_enclosed_void(layout: &BuildingLayout) -> bool {
    let (h, w) = (layout.height + 2, layout.width + 2);
    let mut blocked = vec![false; h * w];
    for &(r, c, _) in &layout.cells {
        blocked[(r + 1) * w + c + 1] = true;
    }
    let mut seen = vec![false; h * w];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        let (r, c) = (i / w, i % w);
        for d in Direction::ALL {
            let (dr, dc) = d.offset();
            let (Some(nr), Some(nc)) = (r.checked_add_signed(dr), c.checked_add_signed(dc)) else {
                continue;
            };
            if nr >= h || nc >= w {
                continue;
            }
            let n = nr * w + nc;
            if !seen[n] && !blocked[n] {
                seen[n] = true;
                queue.push_back(n);
            }
        }
    }
    (0..h * w).any(|i| !blocked[i] && !seen[i])
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApartmentRule {
    /// Every building tile that is neither corridor nor core.
    #[default]
    PerTile,
    /// Each 4-connected run of apartment tiles counts once.
    ContiguousRuns,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayoutFeatures {
    pub tile_count: usize,
    pub core_count: usize,
    pub corner_count: usize,
    pub facade_count: usize,
    pub apartment_count: usize,
    pub footprint_area: usize,
    pub aspect_ratio: f64,
    pub compactness: f64,
}

pub fn compute_features(layout: &BuildingLayout, roles: &TileRoles, rule: ApartmentRule) -> LayoutFeatures {
    let mut core_count = 0;
    let mut corner_count = 0;
    let mut facade_count = 0;
    for &(r, c, t) in &layout.cells {
        if roles.is_core(t) {
            core_count += 1;
        }
        let exposed = |d: Direction| {
            let (dr, dc) = d.offset();
            layout.tile_at(r as isize + dr, c as isize + dc).is_none()
        };
        let ns = exposed(Direction::North) || exposed(Direction::South);
        let ew = exposed(Direction::East) || exposed(Direction::West);
        if ns || ew {
            facade_count += 1;
        }
        if ns && ew {
            corner_count += 1;
        }
    }
    let apartment_count = match rule {
        ApartmentRule::PerTile => layout.cells.iter().filter(|c| roles.is_apartment(c.2)).count(),
        ApartmentRule::ContiguousRuns => apartment_runs(layout, roles),
    };
    let footprint_area = layout.height * layout.width;
    let (lo, hi) = (layout.height.min(layout.width), layout.height.max(layout.width));
    LayoutFeatures {
        tile_count: layout.tile_count(),
        core_count,
        corner_count,
        facade_count,
        apartment_count,
        footprint_area,
        aspect_ratio: if lo == 0 { 1.0 } else { hi as f64 / lo as f64 },
        compactness: if footprint_area == 0 {
            0.0
        } else {
            layout.tile_count() as f64 / footprint_area as f64
        },
    }
}

fn apartment_runs(layout: &BuildingLayout, roles: &TileRoles) -> usize {
    let apt: Vec<(usize, usize, TileId)> = layout
        .cells
        .iter()
        .copied()
        .filter(|c| roles.is_apartment(c.2))
        .collect();
    let sub = Solution::filled(layout.width, layout.height, 0);
    let mut mask = vec![false; layout.width * layout.height];
    for &(r, c, _) in &apt {
        mask[r * layout.width + c] = true;
    }
    components(&sub, |r, c| mask[r * layout.width + c]).len()
}

/// 4-connected components of cells satisfying `member`, in row-major order
/// of their first cell.
fn components(grid: &Solution, member: impl Fn(usize, usize) -> bool) -> Vec<Vec<(usize, usize)>> {
    let (h, w) = (grid.height(), grid.width());
    let mut seen = vec![false; h * w];
    let mut out = Vec::new();
    for start in 0..h * w {
        let (sr, sc) = (start / w, start % w);
        if seen[start] || !member(sr, sc) {
            continue;
        }
        seen[start] = true;
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([(sr, sc)]);
        while let Some((r, c)) = queue.pop_front() {
            comp.push((r, c));
            for d in Direction::ALL {
                if let Some((nr, nc)) = grid.neighbor(r, c, d) {
                    let n = nr * w + nc;
                    if !seen[n] && member(nr, nc) {
                        seen[n] = true;
                        queue.push_back((nr, nc));
                    }
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Every 4-connected component of non-empty tiles, core or not.
pub fn extract_components(solution: &Solution, roles: &TileRoles) -> Vec<BuildingLayout> {
    components(solution, |r, c| solution.get(r, c) != roles.empty)
        .into_iter()
        .map(|comp| {
            BuildingLayout::from_cells(comp.into_iter().map(|(r, c)| (r, c, solution.get(r, c))).collect())
        })
        .collect()
}

/// Building components, dropping core-less ones when `require_core`.
pub fn extract_layouts(solution: &Solution, roles: &TileRoles, require_core: bool) -> Vec<BuildingLayout> {
    let mut layouts = extract_components(solution, roles);
    if require_core {
        layouts.retain(|l| l.cells.iter().any(|c| roles.is_core(c.2)));
    }
    layouts
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CatalogFilter {
    pub min_apartments: usize,
    pub max_apartments: usize,
    pub exclude_enclosed_voids: bool,
    pub require_core: bool,
    pub apartment_rule: ApartmentRule,
    pub identify_reflections: bool,
}

impl Default for CatalogFilter {
    fn default() -> Self {
        CatalogFilter {
            min_apartments: 10,
            max_apartments: 15,
            exclude_enclosed_voids: true,
            require_core: true,
            apartment_rule: ApartmentRule::PerTile,
            identify_reflections: false,
        }
    }
}

impl CatalogFilter {
    pub fn validate(&self) -> Result<(), String> {
        if self.min_apartments > self.max_apartments {
            return Err(format!(
                "min_apartments {} exceeds max_apartments {}",
                self.min_apartments, self.max_apartments
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: usize,
    pub key: String,
    pub layout: BuildingLayout,
    pub features: LayoutFeatures,
}

/// Counts after each pipeline stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogStats {
    pub solutions: usize,
    pub raw_layouts: usize,
    pub unique_layouts: usize,
    pub with_core: usize,
    pub without_void: usize,
    pub in_apartment_range: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub tiles: TileSet,
    pub stats: CatalogStats,
    pub layouts: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn get(&self, id: usize) -> Option<&CatalogEntry> {
        self.layouts.iter().find(|e| e.id == id)
    }

    pub fn ids(&self) -> Vec<usize> {
        self.layouts.iter().map(|e| e.id).collect()
    }

    pub fn roles(&self) -> Option<TileRoles> {
        TileRoles::from_tileset(&self.tiles)
    }

    pub fn features_csv(&self) -> String {
        let mut s = String::from(
            "layout_id,tile_count,core_count,corner_count,facade_count,apartment_count,footprint_area,aspect_ratio,compactness\n",
        );
        for e in &self.layouts {
            let f = &e.features;
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{:.6},{:.6}",
                e.id,
                f.tile_count,
                f.core_count,
                f.corner_count,
                f.facade_count,
                f.apartment_count,
                f.footprint_area,
                f.aspect_ratio,
                f.compactness
            );
        }
        s
    }
}

/// Extraction, rotational dedup, then core, void and apartment-range
/// filters in that order. Output is sorted by canonical key and ids are
/// positions in that order.
pub fn build_catalog(solutions: &[Solution], tileset: &TileSet, filter: &CatalogFilter) -> Result<Catalog, String> {
    filter.validate()?;
    let roles = TileRoles::from_tileset(tileset).ok_or("tile set has no `empty` tile")?;
    let per_solution: Vec<Vec<(Vec<u8>, BuildingLayout)>> = solutions
        .par_iter()
        .map(|s| {
            extract_components(s, &roles)
                .into_iter()
                .map(|l| (canonicalize_with(&l, filter.identify_reflections), l))
                .collect()
        })
        .collect();

    let mut stats = CatalogStats {
        solutions: solutions.len(),
        ..Default::default()
    };
    let mut unique: BTreeMap<Vec<u8>, BuildingLayout> = BTreeMap::new();
    for (key, layout) in per_solution.into_iter().flatten() {
        stats.raw_layouts += 1;
        unique.entry(key).or_insert(layout);
    }
    stats.unique_layouts = unique.len();

    let mut layouts = Vec::new();
    for (key, layout) in unique {
        if filter.require_core && !layout.cells.iter().any(|c| roles.is_core(c.2)) {
            continue;
        }
        stats.with_core += 1;
        if filter.exclude_enclosed_voids && has_enclosed_void(&layout) {
            continue;
        }
        stats.without_void += 1;
        let features = compute_features(&layout, &roles, filter.apartment_rule);
        if !(filter.min_apartments..=filter.max_apartments).contains(&features.apartment_count) {
            continue;
        }
        layouts.push(CatalogEntry {
            id: layouts.len(),
            key: key_hex(&key),
            layout,
            features,
        });
    }
    stats.in_apartment_range = layouts.len();
    Ok(Catalog {
        tiles: tileset.clone(),
        stats,
        layouts,
    })
}

/// Hand-drawn examples of the four corridor typologies used for
/// regression runs: single-loaded, double-loaded, L-shaped and courtyard.
pub const REFERENCE_LAYOUTS: [(&str, &str); 4] = [
    (
        "single_loaded",
        "ESSSSKSSSSSE\n\
         CCCCCCCCCCCC\n",
    ),
    (
        "double_loaded",
        "ESSSKSSE\n\
         CCCCCCCC\n\
         ESSSSSSE\n",
    ),
    (
        "l_shaped",
        "ESSSKSSC\n\
         CCCCCCCC\n\
         .....SCS\n\
         .....SCS\n\
         .....SCS\n\
         .....ECE\n",
    ),
    (
        "courtyard",
        "ESSSKSSE\n\
         CCCCCCCC\n\
         SC....CS\n\
         SC....CS\n\
         EC....CE\n",
    ),
];

pub fn reference_layout(name: &str, tileset: &TileSet) -> Option<BuildingLayout> {
    REFERENCE_LAYOUTS
        .iter()
        .find(|(n, _)| *n == name)
        .and_then(|(_, g)| BuildingLayout::from_glyphs(g, tileset).ok())
}
