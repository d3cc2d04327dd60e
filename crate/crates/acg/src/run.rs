//! One entry point over every solver the CLI exposes.

use std::time::Duration;

use acg_core::atomic::multipulse;
use acg_core::branch::{self, BranchError, Solution, SolveStatus, SolverConfig, Stats, Variant};
use acg_core::clock::{Clock, Deadline};
use acg_core::graph::ArcSet;
use acg_core::instgen::Instance;
use acg_core::oracle::{enumerate, OracleError, OracleOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Algo {
    Acg,
    Acg1,
    Acgh,
    Acgr,
    Multipulse,
    Oracle,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Acg => "acg",
            Algo::Acg1 => "acg1",
            Algo::Acgh => "acgh",
            Algo::Acgr => "acgr",
            Algo::Multipulse => "multipulse",
            Algo::Oracle => "oracle",
        }
    }

    fn variant(self) -> Option<Variant> {
        match self {
            Algo::Acg => Some(Variant::Acg),
            Algo::Acg1 => Some(Variant::Acg1),
            Algo::Acgh => Some(Variant::AcgH),
            Algo::Acgr => Some(Variant::AcgR),
            Algo::Multipulse | Algo::Oracle => None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("multipulse: {0}")]
    Pulse(String),
}

/// Solves `inst` with `algo`. `config.variant` is overridden; `global_limit`
/// also bounds MultiPulse. The oracle ignores the limit.
pub fn run_algo(inst: &Instance, algo: Algo, config: &SolverConfig, clock: &dyn Clock) -> Result<Solution, RunError> {
    let g = &inst.graph;
    let started = clock.now();
    let mut sol = match algo.variant() {
        Some(variant) => {
            let workers = if variant == Variant::Acg { config.workers } else { 1 };
            let cfg = SolverConfig { variant, workers, ..config.clone() };
            return Ok(branch::solve(g, &inst.algorithms(), &cfg, clock)?);
        }
        None if algo == Algo::Multipulse => {
            let deadline = Deadline::after(clock, config.global_limit);
            let out = multipulse(g, &g.costs(), &inst.constraints, &ArcSet::full(g.arc_count()), &deadline)
                .map_err(|e| RunError::Pulse(e.to_string()))?;
            let (status, bound) = match (&out.path, out.complete) {
                (Some(_), true) => (SolveStatus::Optimal, out.cost),
                (None, true) => (SolveStatus::Infeasible, f64::INFINITY),
                (_, false) => (SolveStatus::TimeLimit, f64::NEG_INFINITY),
            };
            let stats = Stats { nodes_expanded: out.expansions as usize, atomic_calls: 1, ..Stats::default() };
            let cost = if out.path.is_some() { out.cost } else { f64::INFINITY };
            Solution { status, path: out.path.unwrap_or_default(), cost, lower_bound: bound, stats }
        }
        None => match enumerate(g, &inst.constraints)? {
            OracleOutcome::Optimal { path, cost } => {
                Solution { status: SolveStatus::Optimal, path, cost, lower_bound: cost, stats: Stats::default() }
            }
            OracleOutcome::Infeasible => Solution {
                status: SolveStatus::Infeasible,
                path: Default::default(),
                cost: f64::INFINITY,
                lower_bound: f64::INFINITY,
                stats: Stats::default(),
            },
        },
    };
    sol.stats.wall_ms = clock.now().saturating_sub(started).as_millis() as u64;
    Ok(sol)
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn millis(ms: u64) -> Duration {
    Duration::from_millis(ms)
}
