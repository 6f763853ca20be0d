use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use serde::Deserialize;
use ventgen::catalog::{build_catalog, Catalog};
use ventgen::config::RunConfig;
use ventgen::control::ControlMode;
use ventgen::metrics::{
    aggregate, eui_spread, format_aggregate_table, render_hourly_svg, results_csv, run_sweep, SimulationSummary, SweepContext,
    SweepSpec, EUI_SCOPE_NOTE,
};
use ventgen::occupancy::{load_profiles, WeekSchedule};
use ventgen::pipeline::{generate as generate_solutions, GenerationPlan};
use ventgen::thermal::{build_model, occupancy_series, simulate_year};
use ventgen::weather::WeatherYear;
use ventgen::wfc::{SolverConfig, TileExample};

use crate::output::{write_atomic, write_json};
use crate::Failure;

type Result<T> = std::result::Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

pub fn init_pool(jobs: Option<usize>) -> Result<()> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(invalid("--jobs must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Runtime(anyhow!(e)))?;
    }
    Ok(())
}

fn load_config(path: &Path) -> Result<RunConfig> {
    RunConfig::load(path).map_err(|e| invalid(e.to_string()))
}

fn load_catalog(path: &Path) -> Result<Catalog> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read catalog {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("catalog {}: {e}", path.display())))
}

fn load_schedule(cfg: &RunConfig) -> Result<WeekSchedule> {
    let path = &cfg.occupancy.csv_path;
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let profiles = load_profiles(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    profiles
        .schedule(cfg.occupancy.period, cfg.occupancy.income)
        .map_err(|e| invalid(format!("{}: {e}", path.display())))
}

pub fn generate(config: &Path, out: &Path, seed: Option<u64>, count: Option<usize>, grid: Option<(usize, usize)>) -> Result<()> {
    let mut cfg = load_config(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(n) = count {
        cfg.wfc.solution_count = n;
    }
    if let Some((w, h)) = grid {
        cfg.wfc.grid_width = w;
        cfg.wfc.grid_height = h;
    }
    cfg.validate_sections().map_err(invalid)?;
    let example = TileExample::load(&cfg.wfc.tiles_path).map_err(|e| invalid(format!("{}: {e}", cfg.wfc.tiles_path.display())))?;
    let rules = example.rules().map_err(|e| invalid(e.to_string()))?;
    let border_tile = match &cfg.wfc.border_tile {
        Some(name) => Some(example.tiles.id_of(name).ok_or_else(|| invalid(format!("wfc.border_tile: unknown tile {name:?}")))?),
        None => None,
    };
    let plan = GenerationPlan {
        master_seed: cfg.seed,
        count: cfg.wfc.solution_count,
        width: cfg.wfc.grid_width,
        height: cfg.wfc.grid_height,
        weight_range: cfg.wfc.weight_range,
        solver: SolverConfig { restart_cap: cfg.wfc.restart_cap, border_tile },
    };
    let generation = generate_solutions(&example.tiles, &rules, &plan).map_err(|e| invalid(e.to_string()))?;
    for (i, msg) in &generation.failures {
        eprintln!("warning: solution {i}: {msg}");
    }
    if plan.count == 0 {
        eprintln!("warning: solution_count is 0; the catalog will be empty");
    }
    let catalog = build_catalog(&generation.solutions(), &example.tiles, &cfg.catalog).map_err(invalid)?;

    let mut glyphs = String::new();
    for r in &generation.records {
        let _ = writeln!(glyphs, "# solution {} seed {}", r.index, r.solve_seed);
        glyphs.push_str(&r.solution.to_glyphs(&example.tiles));
        glyphs.push('\n');
    }
    write_json(&out.join("solutions.json"), &generation.records)?;
    write_atomic(&out.join("solutions.txt"), glyphs.as_bytes())?;
    write_json(&out.join("catalog.json"), &catalog)?;
    write_atomic(&out.join("features.csv"), catalog.features_csv().as_bytes())?;

    let s = &catalog.stats;
    println!("solutions      {}", generation.records.len());
    println!("raw layouts    {}", s.raw_layouts);
    println!("unique         {}", s.unique_layouts);
    println!("with core      {}", s.with_core);
    println!("without void   {}", s.without_void);
    println!(
        "{}-{} apartments {}",
        cfg.catalog.min_apartments, cfg.catalog.max_apartments, s.in_apartment_range
    );
    println!("wrote {}", out.display());
    Ok(())
}

pub struct SimulateArgs {
    pub config: PathBuf,
    pub catalog: PathBuf,
    pub layout: usize,
    pub orientation: f64,
    pub climate: String,
    pub strategy: ControlMode,
    pub out: PathBuf,
    pub svg_month: Option<u32>,
    pub pnt_all_hours: bool,
}

fn fmt_summary(s: &SimulationSummary) -> String {
    format!(
        "layout {} | orientation {} | {} | {}\n\
         EUI            {:.2} kWh/m2/yr\n\
         PNT adaptive   {:.2} %\n\
         PNT PMV        {:.2} %\n\
         cooling        {:.1} kWh\n\
         heating        {:.1} kWh\n\
         lights+equip   {:.1} kWh\n\
         # {EUI_SCOPE_NOTE}\n",
        s.layout_id,
        s.orientation,
        s.climate,
        s.strategy,
        s.eui,
        s.pnt_adaptive,
        s.pnt_pmv,
        s.hvac_cooling_kwh,
        s.hvac_heating_kwh,
        s.lighting_equipment_kwh
    )
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    let cfg = load_config(&a.config)?;
    let catalog = load_catalog(&a.catalog)?;
    let entry = catalog.get(a.layout).ok_or_else(|| {
        let ids: Vec<String> = catalog.ids().iter().map(usize::to_string).collect();
        invalid(format!("unknown layout id {}; available: {}", a.layout, ids.join(",")))
    })?;
    let climate = cfg.climate(&a.climate).ok_or_else(|| {
        let labels: Vec<&str> = cfg.climates.iter().map(|c| c.label.as_str()).collect();
        invalid(format!("unknown climate {:?}; configured: {}", a.climate, labels.join(",")))
    })?;
    if !(0.0..360.0).contains(&a.orientation) {
        return Err(invalid(format!("orientation {} outside [0, 360)", a.orientation)));
    }
    let weather = WeatherYear::load(&climate.epw_path).map_err(|e| invalid(e.to_string()))?;
    let schedule = load_schedule(&cfg)?;
    let roles = catalog.roles().ok_or_else(|| invalid("catalog tile set has no `empty` tile"))?;
    let model = build_model(&entry.layout, &roles, a.orientation, &cfg.model).map_err(|e| invalid(e.to_string()))?;
    let occupancy = occupancy_series(&schedule, &weather);
    let results = simulate_year(&model, &weather, &occupancy, a.strategy, &cfg.settings())
        .map_err(|e| Failure::Runtime(anyhow!(e)))?;
    let occupied_only = cfg.simulation.pnt_occupied_only && !a.pnt_all_hours;
    let summary = SimulationSummary::from_results(&results, a.layout, a.orientation, &a.climate, occupied_only)
        .map_err(|e| Failure::Runtime(anyhow!(e)))?;

    let stem = format!("layout{}_{}_{}_{}", a.layout, a.orientation, a.climate, a.strategy);
    write_json(&a.out.join(format!("{stem}.summary.json")), &summary)?;
    write_atomic(&a.out.join(format!("{stem}.summary.csv")), results_csv(std::slice::from_ref(&summary)).as_bytes())?;
    write_atomic(&a.out.join(format!("{stem}.hourly.csv")), results.to_csv().as_bytes())?;
    if let Some(month) = a.svg_month {
        let svg = render_hourly_svg(&results, month).map_err(|e| invalid(e.to_string()))?;
        write_atomic(&a.out.join(format!("{stem}.month{month:02}.svg")), svg.as_bytes())?;
    }
    print!("{}", fmt_summary(&summary));
    println!("wrote {}/{stem}.*", a.out.display());
    Ok(())
}

pub struct SweepArgs {
    pub config: PathBuf,
    pub catalog: PathBuf,
    pub layouts: String,
    pub orientations: String,
    pub climates: String,
    pub strategies: Vec<ControlMode>,
    pub out: PathBuf,
    pub pnt_all_hours: bool,
    pub jobs: Option<usize>,
}

pub fn sweep(a: &SweepArgs) -> Result<()> {
    let cfg = load_config(&a.config)?;
    let catalog = load_catalog(&a.catalog)?;
    let layouts = if a.layouts.trim() == "all" {
        catalog.ids()
    } else {
        a.layouts
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|e| invalid(format!("--layouts {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?
    };
    let climates: Vec<String> = if a.climates.trim() == "all" {
        cfg.climates.iter().map(|c| c.label.clone()).collect()
    } else {
        a.climates.split(',').map(|s| s.trim().to_string()).collect()
    };
    let spec = SweepSpec {
        layouts,
        orientations: SweepSpec::parse_orientations(&a.orientations).map_err(invalid)?,
        climates,
        strategies: a.strategies.clone(),
        occupied_only: cfg.simulation.pnt_occupied_only && !a.pnt_all_hours,
    };
    spec.validate().map_err(invalid)?;
    if a.jobs == Some(0) {
        return Err(invalid("--jobs must be >= 1"));
    }

    let mut weather = BTreeMap::new();
    for label in &spec.climates {
        match cfg.climate(label) {
            Some(c) => match WeatherYear::load(&c.epw_path) {
                Ok(w) => {
                    weather.insert(label.clone(), w);
                }
                Err(e) => eprintln!("warning: climate {label}: {e}"),
            },
            None => eprintln!("warning: climate {label:?} is not configured"),
        }
    }
    let schedule = load_schedule(&cfg)?;
    let settings = cfg.settings();
    let ctx = SweepContext {
        catalog: &catalog,
        weather: &weather,
        occupancy: &schedule,
        model: &cfg.model,
        settings: &settings,
    };
    let outcome = run_sweep(&spec, &ctx, a.jobs).map_err(invalid)?;

    write_atomic(&a.out.join("results.csv"), results_csv(&outcome.summaries).as_bytes())?;
    let errors_path = a.out.join("errors.csv");
    if outcome.errors.is_empty() {
        if errors_path.exists() {
            std::fs::remove_file(&errors_path).with_context(|| format!("removing stale {}", errors_path.display()))?;
        }
    } else {
        let mut s = String::from("layout_id,orientation_deg,climate,strategy,message\n");
        for e in &outcome.errors {
            let _ = writeln!(s, "{},{},{},{},\"{}\"", e.layout_id, e.orientation, e.climate, e.strategy, e.message.replace('"', "'"));
        }
        write_atomic(&errors_path, s.as_bytes())?;
    }
    print!("{}", format_aggregate_table(&aggregate(&outcome.summaries)));
    println!(
        "{} cases: {} ok, {} failed; wrote {}",
        spec.case_count(),
        outcome.summaries.len(),
        outcome.errors.len(),
        a.out.join("results.csv").display()
    );
    if outcome.summaries.is_empty() {
        return Err(Failure::Runtime(anyhow!("every sweep case failed; see {}", errors_path.display())));
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
struct ResultRow {
    layout_id: usize,
    orientation_deg: f64,
    climate: String,
    strategy: String,
    eui_kwh_m2yr: f64,
    pnt_adaptive_pct: f64,
    pnt_pmv_pct: f64,
    cooling_kwh: f64,
    heating_kwh: f64,
    lights_equip_kwh: f64,
}

pub fn report(results: &Path, out: Option<&Path>) -> Result<()> {
    let mut reader = csv::Reader::from_path(results).map_err(|e| invalid(format!("{}: {e}", results.display())))?;
    let mut rows = Vec::new();
    for (i, rec) in reader.deserialize::<ResultRow>().enumerate() {
        let r = rec.map_err(|e| invalid(format!("{} row {}: {e}", results.display(), i + 2)))?;
        rows.push(SimulationSummary {
            layout_id: r.layout_id,
            orientation: r.orientation_deg,
            climate: r.climate,
            strategy: r.strategy.parse().map_err(|e: String| invalid(format!("row {}: {e}", i + 2)))?,
            eui: r.eui_kwh_m2yr,
            pnt_adaptive: r.pnt_adaptive_pct,
            pnt_pmv: r.pnt_pmv_pct,
            hvac_cooling_kwh: r.cooling_kwh,
            hvac_heating_kwh: r.heating_kwh,
            lighting_equipment_kwh: r.lights_equip_kwh,
        });
    }
    if rows.is_empty() {
        return Err(invalid(format!("{} has no result rows", results.display())));
    }
    let table = aggregate(&rows);
    let mut s = format_aggregate_table(&table);

    s.push_str("\nEUI spread (max-min)/mean within each climate and strategy\n");
    let mut groups: BTreeMap<(String, ControlMode), Vec<SimulationSummary>> = BTreeMap::new();
    for r in &rows {
        groups.entry((r.climate.clone(), r.strategy)).or_default().push(r.clone());
    }
    for ((climate, strategy), v) in &groups {
        if let Some(spread) = eui_spread(v) {
            let _ = writeln!(s, "{climate:<16} {strategy:<8} {:>7.2} %", 100.0 * spread);
        }
    }

    let mean = |c: &str, m: ControlMode| table.iter().find(|r| r.climate == c && r.strategy == m).map(|r| r.mean_eui);
    let climates: Vec<&String> = groups.keys().map(|(c, _)| c).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let mut header = false;
    for c in climates {
        if let (Some(ac), Some(mm)) = (mean(c, ControlMode::Ac), mean(c, ControlMode::Mm)) {
            if !header {
                s.push_str("\nMM vs AC mean EUI reduction\n");
                header = true;
            }
            let _ = writeln!(s, "{c:<16} {:>7.2} %", 100.0 * (ac - mm) / ac);
        }
    }
    print!("{s}");
    if let Some(path) = out {
        write_atomic(path, s.as_bytes())?;
    }
    Ok(())
}
