//! Batch generation: many WFC solves from one master seed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::seed::{derive, Stream};
use crate::wfc::{AdjacencyRules, Solution, Solver, SolverConfig, TileSet, WeightRange, WfcError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationPlan {
    pub master_seed: u64,
    pub count: usize,
    pub width: usize,
    pub height: usize,
    pub weight_range: WeightRange,
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub index: usize,
    pub weight_seed: u64,
    pub solve_seed: u64,
    pub weights: Vec<f64>,
    pub solution: Solution,
}

#[derive(Debug, Default)]
pub struct Generation {
    pub records: Vec<SolutionRecord>,
    /// (index, message) for solves that exhausted their restart budget.
    pub failures: Vec<(usize, String)>,
}

impl Generation {
    pub fn solutions(&self) -> Vec<Solution> {
        self.records.iter().map(|r| r.solution.clone()).collect()
    }
}

/// Solution `i` uses weights drawn from `derive(master, TileWeights, i)` and
/// the solver seed `derive(master, Solve, i)`, so any subset reproduces the
/// values of the full run.
pub fn solve_one(tiles: &TileSet, rules: &AdjacencyRules, plan: &GenerationPlan, index: usize) -> Result<SolutionRecord, WfcError> {
    let weight_seed = derive(plan.master_seed, Stream::TileWeights, index as u64);
    let solve_seed = derive(plan.master_seed, Stream::Solve, index as u64);
    let weighted = tiles.sample_weights(weight_seed, plan.weight_range);
    let solution = Solver::new(&weighted, rules)?
        .with_config(plan.solver)
        .solve(plan.width, plan.height, solve_seed)?;
    Ok(SolutionRecord {
        index,
        weight_seed,
        solve_seed,
        weights: weighted.tiles().iter().map(|t| t.weight).collect(),
        solution,
    })
}

pub fn generate(tiles: &TileSet, rules: &AdjacencyRules, plan: &GenerationPlan) -> Result<Generation, WfcError> {
    plan.weight_range.validate()?;
    if rules.is_degenerate() {
        return Err(WfcError::Degenerate(format!("{:?}", rules.degenerate_tiles())));
    }
    let results: Vec<_> = (0..plan.count)
        .into_par_iter()
        .map(|i| solve_one(tiles, rules, plan, i))
        .collect();
    let mut out = Generation::default();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(WfcError::BudgetExhausted { .. }) => out.failures.push((i, "restart budget exhausted".into())),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
