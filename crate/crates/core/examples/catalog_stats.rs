//! Generates a batch of solutions from a tile example and prints catalog
//! counts.
//!
//! ```text
//! cargo run --release -p ventgen --example catalog_stats -- data/tiles/midrise.json 300 1
//! ```

use std::path::Path;
use std::time::Instant;

use ventgen::catalog::{build_catalog, CatalogFilter};
use ventgen::pipeline::{generate, GenerationPlan};
use ventgen::wfc::{SolverConfig, TileExample, WeightRange};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let path = args.get(1).map(String::as_str).unwrap_or("data/tiles/midrise.json");
    let count = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(300);
    let seed = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(1);
    let ex = TileExample::load(Path::new(path)).expect("tile example");
    let rules = ex.rules().expect("rules");
    let plan = GenerationPlan {
        master_seed: seed,
        count,
        width: 40,
        height: 40,
        weight_range: WeightRange::default(),
        solver: SolverConfig::default(),
    };
    let t = Instant::now();
    let gen = generate(&ex.tiles, &rules, &plan).expect("generate");
    println!("solved {} ({} failed) in {:.2?}", gen.records.len(), gen.failures.len(), t.elapsed());
    let cat = build_catalog(&gen.solutions(), &ex.tiles, &CatalogFilter::default()).expect("catalog");
    println!("{:?}", cat.stats);
    let mut hist = std::collections::BTreeMap::new();
    let wide = build_catalog(&gen.solutions(), &ex.tiles, &CatalogFilter { min_apartments: 0, max_apartments: usize::MAX, ..Default::default() }).unwrap();
    for e in &wide.layouts {
        *hist.entry(e.features.apartment_count).or_insert(0) += 1;
    }
    println!("apartment histogram: {hist:?}");
    if let Some(e) = cat.layouts.first() {
        println!("{}", e.layout.to_glyphs(&ex.tiles));
    }
}
