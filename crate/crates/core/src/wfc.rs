//! Simple-tiled Wave Function Collapse.
//!
//! Adjacency rules are learned verbatim from example grids (no rotation or
//! reflection augmentation). The solver observes the minimum-entropy cell,
//! samples a tile proportionally to its weight, propagates arc consistency,
//! and restarts from a derived sub-seed on contradiction.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed::{self, Stream};

pub type TileId = u8;

/// Candidate sets are `u64` bitsets.
pub const MAX_TILES: usize = 64;

pub const EMPTY: &str = "empty";
pub const END_WALL: &str = "end_wall";
pub const SIDE_WALL: &str = "side_wall";
pub const CORRIDOR: &str = "corridor";
pub const CORE: &str = "core";

#[derive(Debug, Error)]
pub enum WfcError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("adjacency rules are degenerate: {0}")]
    Degenerate(String),
    #[error("no solution found within {attempts} attempts")]
    BudgetExhausted { attempts: u32 },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, WfcError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    North,
    East,
    South,
    West,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::North,
        Direction::East,
        Direction::South,
        Direction::West,
    ];

    pub fn opposite(self) -> Direction {
        match self {
            Direction::North => Direction::South,
            Direction::East => Direction::West,
            Direction::South => Direction::North,
            Direction::West => Direction::East,
        }
    }

    /// (d_row, d_col); rows grow southward.
    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::North => (-1, 0),
            Direction::East => (0, 1),
            Direction::South => (1, 0),
            Direction::West => (0, -1),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    pub id: TileId,
    pub name: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TileSet {
    tiles: Vec<Tile>,
}

impl<'de> Deserialize<'de> for TileSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let tiles = Vec::<Tile>::deserialize(d)?;
        TileSet::new(tiles).map_err(serde::de::Error::custom)
    }
}

impl TileSet {
    /// Tiles may arrive in any order but ids must cover `0..n` exactly once.
    pub fn new(mut tiles: Vec<Tile>) -> Result<Self> {
        if tiles.is_empty() {
            return Err(WfcError::InvalidInput("tile set is empty".into()));
        }
        if tiles.len() > MAX_TILES {
            return Err(WfcError::InvalidInput(format!(
                "{} tiles exceeds the limit of {MAX_TILES}",
                tiles.len()
            )));
        }
        tiles.sort_by_key(|t| t.id);
        for (i, t) in tiles.iter().enumerate() {
            if t.id as usize != i {
                return Err(WfcError::InvalidInput(format!(
                    "tile ids must be unique and contiguous from 0; found {} at position {i}",
                    t.id
                )));
            }
            if !(t.weight > 0.0 && t.weight.is_finite()) {
                return Err(WfcError::InvalidInput(format!(
                    "tile {} ({}) has non-positive weight {}",
                    t.id, t.name, t.weight
                )));
            }
        }
        for (i, a) in tiles.iter().enumerate() {
            if tiles[i + 1..].iter().any(|b| b.name == a.name) {
                return Err(WfcError::InvalidInput(format!("duplicate tile name {}", a.name)));
            }
        }
        Ok(TileSet { tiles })
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn weight(&self, id: TileId) -> f64 {
        self.tiles[id as usize].weight
    }

    pub fn name(&self, id: TileId) -> &str {
        &self.tiles[id as usize].name
    }

    pub fn id_of(&self, name: &str) -> Option<TileId> {
        self.tiles.iter().find(|t| t.name == name).map(|t| t.id)
    }

    /// One character per tile for glyph maps.
    pub fn glyph(&self, id: TileId) -> char {
        match self.name(id) {
            EMPTY => '.',
            END_WALL => 'E',
            SIDE_WALL => 'S',
            CORRIDOR => 'C',
            CORE => 'K',
            _ => char::from_digit(id as u32 % 36, 36).unwrap_or('?'),
        }
    }

    pub fn id_of_glyph(&self, glyph: char) -> Option<TileId> {
        (0..self.len() as TileId).find(|&id| self.glyph(id) == glyph)
    }

    /// Returns a copy with every weight drawn independently and uniformly
    /// from `range`.
    pub fn sample_weights(&self, seed: u64, range: WeightRange) -> TileSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tiles = self
            .tiles
            .iter()
            .map(|t| Tile {
                weight: rng.gen_range(range.min..=range.max),
                ..t.clone()
            })
            .collect();
        TileSet { tiles }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightRange {
    pub min: f64,
    pub max: f64,
}

impl Default for WeightRange {
    fn default() -> Self {
        WeightRange { min: 0.1, max: 10.0 }
    }
}

impl WeightRange {
    pub fn validate(&self) -> Result<()> {
        if self.min > 0.0 && self.min <= self.max && self.max.is_finite() {
            Ok(())
        } else {
            Err(WfcError::InvalidInput(format!(
                "weight range [{}, {}] must satisfy 0 < min <= max",
                self.min, self.max
            )))
        }
    }
}

/// Free-function form of [`TileSet::sample_weights`] over the default range.
pub fn sample_weights(tileset: &TileSet, seed: u64) -> TileSet {
    tileset.sample_weights(seed, WeightRange::default())
}

/// Which tile may sit next to which, per direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyRules {
    /// `allowed[a][d]` is the bitset of tiles permitted in direction `d` of `a`.
    allowed: Vec<[u64; 4]>,
}

impl AdjacencyRules {
    pub fn empty(tile_count: usize) -> Self {
        AdjacencyRules {
            allowed: vec![[0; 4]; tile_count],
        }
    }

    pub fn tile_count(&self) -> usize {
        self.allowed.len()
    }

    /// Adds `b` in direction `d` of `a` together with the reversed relation.
    pub fn allow(&mut self, a: TileId, d: Direction, b: TileId) {
        self.allowed[a as usize][d.index()] |= 1 << b;
        self.allowed[b as usize][d.opposite().index()] |= 1 << a;
    }

    pub fn allows(&self, a: TileId, d: Direction, b: TileId) -> bool {
        self.allowed
            .get(a as usize)
            .is_some_and(|dirs| dirs[d.index()] & (1 << b) != 0)
    }

    pub fn mask(&self, a: TileId, d: Direction) -> u64 {
        self.allowed[a as usize][d.index()]
    }

    /// All `(a, d, b)` triples in the relation, sorted.
    pub fn triples(&self) -> Vec<(TileId, Direction, TileId)> {
        let mut out = Vec::new();
        for (a, dirs) in self.allowed.iter().enumerate() {
            for d in Direction::ALL {
                for b in bits(dirs[d.index()]) {
                    out.push((a as TileId, d, b));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.allowed
            .iter()
            .flat_map(|d| d.iter())
            .map(|m| m.count_ones() as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Tiles lacking an allowed neighbor in some direction.
    pub fn degenerate_tiles(&self) -> Vec<(TileId, Direction)> {
        let mut out = Vec::new();
        for (a, dirs) in self.allowed.iter().enumerate() {
            for d in Direction::ALL {
                if dirs[d.index()] == 0 {
                    out.push((a as TileId, d));
                }
            }
        }
        out
    }

    pub fn is_degenerate(&self) -> bool {
        self.allowed.is_empty() || !self.degenerate_tiles().is_empty()
    }
}

/// Learns rules from one example grid. The tile count is `max id + 1`.
pub fn learn_rules(example: &[Vec<TileId>]) -> Result<AdjacencyRules> {
    learn_rules_with(example, None)
}

/// Like [`learn_rules`], sized for `tile_count` tiles (ids absent from the
/// example end up with no neighbors and make the rules degenerate).
pub fn learn_rules_with(example: &[Vec<TileId>], tile_count: Option<usize>) -> Result<AdjacencyRules> {
    let height = example.len();
    let width = example.first().map_or(0, Vec::len);
    if height == 0 || width == 0 {
        return Err(WfcError::InvalidInput("example grid is empty".into()));
    }
    if let Some(row) = example.iter().position(|r| r.len() != width) {
        return Err(WfcError::InvalidInput(format!(
            "example grid is ragged: row {row} has {} cells, expected {width}",
            example[row].len()
        )));
    }
    let max_id = example.iter().flatten().copied().max().unwrap_or(0) as usize;
    let count = tile_count.unwrap_or(max_id + 1);
    if max_id >= count || count > MAX_TILES {
        return Err(WfcError::InvalidInput(format!(
            "example uses tile id {max_id} but the tile count is {count}"
        )));
    }
    let mut rules = AdjacencyRules::empty(count);
    for r in 0..height {
        for c in 0..width {
            let a = example[r][c];
            if c + 1 < width {
                rules.allow(a, Direction::East, example[r][c + 1]);
            }
            if r + 1 < height {
                rules.allow(a, Direction::South, example[r + 1][c]);
            }
        }
    }
    Ok(rules)
}

/// A fully collapsed grid, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    width: usize,
    height: usize,
    cells: Vec<TileId>,
}

impl Solution {
    pub fn from_rows(rows: &[Vec<TileId>]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(WfcError::InvalidInput("ragged solution grid".into()));
        }
        Ok(Solution {
            width,
            height,
            cells: rows.concat(),
        })
    }

    pub fn filled(width: usize, height: usize, tile: TileId) -> Self {
        Solution {
            width,
            height,
            cells: vec![tile; width * height],
        }
    }

    /// Parses a glyph map produced by [`Solution::to_glyphs`]. Whitespace
    /// inside a line is ignored.
    pub fn from_glyphs(text: &str, tileset: &TileSet) -> Result<Self> {
        let mut rows = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|g| {
                    tileset.id_of_glyph(g).ok_or_else(|| {
                        WfcError::InvalidInput(format!("unknown glyph {g:?} on line {}", ln + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Solution::from_rows(&rows)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> TileId {
        self.cells[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, tile: TileId) {
        self.cells[row * self.width + col] = tile;
    }

    pub fn cells(&self) -> &[TileId] {
        &self.cells
    }

    pub fn rows(&self) -> Vec<Vec<TileId>> {
        self.cells.chunks(self.width.max(1)).map(<[_]>::to_vec).collect()
    }

    /// Neighbor of `(row, col)` in direction `d`, if inside the grid.
    pub fn neighbor(&self, row: usize, col: usize, d: Direction) -> Option<(usize, usize)> {
        let (dr, dc) = d.offset();
        let r = row.checked_add_signed(dr)?;
        let c = col.checked_add_signed(dc)?;
        (r < self.height && c < self.width).then_some((r, c))
    }

    /// First adjacency that the rules forbid, if any.
    pub fn first_violation(&self, rules: &AdjacencyRules) -> Option<(usize, usize, Direction)> {
        for r in 0..self.height {
            for c in 0..self.width {
                for d in [Direction::East, Direction::South] {
                    if let Some((nr, nc)) = self.neighbor(r, c, d) {
                        if !rules.allows(self.get(r, c), d, self.get(nr, nc)) {
                            return Some((r, c, d));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn to_glyphs(&self, tileset: &TileSet) -> String {
        let mut s = String::with_capacity((self.width + 1) * self.height);
        for row in self.cells.chunks(self.width.max(1)) {
            s.extend(row.iter().map(|&t| tileset.glyph(t)));
            s.push('\n');
        }
        s
    }
}

#[derive(Serialize, Deserialize)]
struct SolutionJson {
    width: usize,
    height: usize,
    grid: Vec<Vec<TileId>>,
}

impl Serialize for Solution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SolutionJson {
            width: self.width,
            height: self.height,
            grid: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Solution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SolutionJson::deserialize(d)?;
        let sol = Solution::from_rows(&raw.grid).map_err(serde::de::Error::custom)?;
        if sol.width != raw.width || sol.height != raw.height {
            return Err(serde::de::Error::custom("grid does not match declared dimensions"));
        }
        Ok(sol)
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.cells.chunks(self.width.max(1)) {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// JSON document holding a tile vocabulary and one training example.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TileExample {
    pub tiles: TileSet,
    pub example: Vec<Vec<TileId>>,
}

impl TileExample {
    pub fn from_json(text: &str) -> Result<Self> {
        let ex: TileExample = serde_json::from_str(text)?;
        ex.rules()?;
        Ok(ex)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn rules(&self) -> Result<AdjacencyRules> {
        learn_rules_with(&self.example, Some(self.tiles.len()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub restart_cap: u32,
    /// When set, every border cell is pinned to this tile before solving.
    pub border_tile: Option<TileId>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restart_cap: 100,
            border_tile: None,
        }
    }
}

/// Solves with [`SolverConfig::default`].
pub fn solve(tileset: &TileSet, rules: &AdjacencyRules, width: usize, height: usize, seed: u64) -> Result<Solution> {
    Solver::new(tileset, rules)?.solve(width, height, seed)
}

pub struct Solver<'a> {
    tileset: &'a TileSet,
    rules: &'a AdjacencyRules,
    config: SolverConfig,
    /// Per tile: (w, w ln w).
    weight_terms: Vec<(f64, f64)>,
}

impl<'a> Solver<'a> {
    pub fn new(tileset: &'a TileSet, rules: &'a AdjacencyRules) -> Result<Self> {
        if rules.tile_count() != tileset.len() {
            return Err(WfcError::InvalidInput(format!(
                "rules cover {} tiles but the tile set has {}",
                rules.tile_count(),
                tileset.len()
            )));
        }
        if rules.is_degenerate() {
            let missing = rules.degenerate_tiles();
            let detail = match missing.first() {
                Some((t, d)) => format!("tile {t} has no allowed neighbor to the {d:?} ({} gaps total)", missing.len()),
                None => "no tiles".into(),
            };
            return Err(WfcError::Degenerate(detail));
        }
        let weight_terms = tileset
            .tiles()
            .iter()
            .map(|t| (t.weight, t.weight * t.weight.ln()))
            .collect();
        Ok(Solver {
            tileset,
            rules,
            config: SolverConfig::default(),
            weight_terms,
        })
    }

    pub fn with_config(mut self, config: SolverConfig) -> Self {
        self.config = config;
        self
    }

    pub fn solve(&self, width: usize, height: usize, seed: u64) -> Result<Solution> {
        if width == 0 || height == 0 {
            return Err(WfcError::InvalidInput(format!(
                "output dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        if let Some(t) = self.config.border_tile {
            if t as usize >= self.tileset.len() {
                return Err(WfcError::InvalidInput(format!("border tile {t} is not in the tile set")));
            }
        }
        let attempts = self.config.restart_cap.max(1);
        for attempt in 0..attempts {
            let attempt_seed = if attempt == 0 {
                seed
            } else {
                seed::derive(seed, Stream::Restart, attempt as u64)
            };
            if let Some(cells) = self.attempt(width, height, attempt_seed) {
                return Ok(Solution { width, height, cells });
            }
        }
        Err(WfcError::BudgetExhausted { attempts })
    }

    fn entropy(&self, mask: u64) -> f64 {
        let (mut sum, mut sum_wlogw) = (0.0, 0.0);
        for t in bits(mask) {
            let (w, wlw) = self.weight_terms[t as usize];
            sum += w;
            sum_wlogw += wlw;
        }
        sum.ln() - sum_wlogw / sum
    }

    fn attempt(&self, width: usize, height: usize, seed: u64) -> Option<Vec<TileId>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = if self.tileset.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.tileset.len()) - 1
        };
        let mut wave = WaveState {
            width,
            height,
            cells: vec![full; width * height],
            entropy: vec![self.entropy(full); width * height],
            heap: BinaryHeap::new(),
            stack: Vec::new(),
        };

        if let Some(border) = self.config.border_tile {
            for idx in 0..width * height {
                let (r, c) = (idx / width, idx % width);
                if r == 0 || c == 0 || r + 1 == height || c + 1 == width {
                    wave.cells[idx] = 1 << border;
                    wave.stack.push(idx);
                }
            }
            if !self.propagate(&mut wave) {
                return None;
            }
        }

        for idx in 0..width * height {
            if wave.cells[idx].count_ones() > 1 {
                wave.entropy[idx] = self.entropy(wave.cells[idx]);
                wave.heap.push(Reverse(HeapEntry {
                    entropy: wave.entropy[idx],
                    index: idx,
                }));
            }
        }

        while let Some(Reverse(entry)) = wave.heap.pop() {
            let idx = entry.index;
            let mask = wave.cells[idx];
            if mask.count_ones() <= 1 || entry.entropy.to_bits() != wave.entropy[idx].to_bits() {
                continue;
            }
            let chosen = self.pick(mask, &mut rng);
            wave.cells[idx] = 1 << chosen;
            wave.stack.push(idx);
            if !self.propagate(&mut wave) {
                return None;
            }
        }

        debug_assert!(wave.cells.iter().all(|m| m.count_ones() == 1));
        Some(wave.cells.iter().map(|m| m.trailing_zeros() as TileId).collect())
    }

    fn pick(&self, mask: u64, rng: &mut ChaCha8Rng) -> TileId {
        let total: f64 = bits(mask).map(|t| self.weight_terms[t as usize].0).sum();
        let mut target = rng.gen::<f64>() * total;
        let mut last = 0;
        for t in bits(mask) {
            let w = self.weight_terms[t as usize].0;
            if target < w {
                return t;
            }
            target -= w;
            last = t;
        }
        last
    }

    /// Arc-consistency propagation from every cell on the stack. Returns
    /// false on contradiction.
    fn propagate(&self, wave: &mut WaveState) -> bool {
        while let Some(idx) = wave.stack.pop() {
            let (r, c) = (idx / wave.width, idx % wave.width);
            let mask = wave.cells[idx];
            for d in Direction::ALL {
                let (dr, dc) = d.offset();
                let (Some(nr), Some(nc)) = (r.checked_add_signed(dr), c.checked_add_signed(dc)) else {
                    continue;
                };
                if nr >= wave.height || nc >= wave.width {
                    continue;
                }
                let nidx = nr * wave.width + nc;
                let support = bits(mask).fold(0u64, |acc, t| acc | self.rules.mask(t, d));
                let current = wave.cells[nidx];
                let reduced = current & support;
                if reduced == current {
                    continue;
                }
                if reduced == 0 {
                    return false;
                }
                wave.cells[nidx] = reduced;
                wave.stack.push(nidx);
                if reduced.count_ones() > 1 {
                    let e = self.entropy(reduced);
                    wave.entropy[nidx] = e;
                    wave.heap.push(Reverse(HeapEntry { entropy: e, index: nidx }));
                }
            }
        }
        true
    }
}

struct WaveState {
    width: usize,
    height: usize,
    cells: Vec<u64>,
    entropy: Vec<f64>,
    heap: BinaryHeap<Reverse<HeapEntry>>,
    stack: Vec<usize>,
}

/// Ordered by entropy, then by row-major index.
#[derive(Debug, Clone, Copy)]
struct HeapEntry {
    entropy: f64,
    index: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entropy
            .total_cmp(&other.entropy)
            .then(self.index.cmp(&other.index))
    }
}

/// Iterates set bits of `mask` in ascending order.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = TileId> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let t = mask.trailing_zeros();
            mask &= mask - 1;
            Some(t as TileId)
        }
    })
}
