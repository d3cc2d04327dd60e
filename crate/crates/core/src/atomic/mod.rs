//! Atomic algorithms: black-box solvers for one group of additional
//! constraints, each able to optimise over a filtered arc set with arbitrary
//! nonnegative arc costs and to check a given path.

mod constraint;
mod dijkstra;
mod pulse;

use alloc::vec;
use alloc::vec::Vec;

pub use constraint::{ConstraintError, ConstraintKind, ConstraintSpec, BOUND_TOL};
pub use dijkstra::{dijkstra, DijkstraError};
pub use pulse::{multipulse, pulse_next_arc, pulse_preprocess, Bounds, PulseOutcome, DEADLINE_POLL};

use crate::clock::Deadline;
use crate::graph::{ArcSet, Graph, Path};

/// Return triple of an atomic call: the best path found plus certificates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AtomicResult {
    pub path: Path,
    /// The path is optimal among the algorithm's feasible paths on the arc set.
    pub opt: bool,
    /// The algorithm has no feasible path on the arc set.
    pub unfeas: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicAlgorithm {
    pub constraints: Vec<ConstraintSpec>,
    /// Masks certificates, except on arc sets that hold a single s–t path.
    pub heuristic: bool,
}

impl AtomicAlgorithm {
    pub fn new(constraints: Vec<ConstraintSpec>) -> Self {
        AtomicAlgorithm { constraints, heuristic: false }
    }

    pub fn heuristic(mut self, on: bool) -> Self {
        self.heuristic = on;
        self
    }

    /// Feasibility of `path` for every constraint this algorithm owns.
    pub fn check(&self, g: &Graph, path: &Path) -> bool {
        g.is_st_path(path) && self.constraints.iter().all(|c| c.check(g, path))
    }

    pub fn solve(
        &self,
        g: &Graph,
        costs: &[f64],
        allowed: &ArcSet,
        deadline: &Deadline<'_>,
    ) -> Result<AtomicResult, DijkstraError> {
        atomic_solve(self, g, costs, allowed, deadline)
    }
}

/// One algorithm per constraint.
pub fn one_per_constraint(constraints: &[ConstraintSpec]) -> Vec<AtomicAlgorithm> {
    constraints.iter().map(|c| AtomicAlgorithm::new(vec![c.clone()])).collect()
}

pub fn atomic_solve(
    alg: &AtomicAlgorithm,
    g: &Graph,
    costs: &[f64],
    allowed: &ArcSet,
    deadline: &Deadline<'_>,
) -> Result<AtomicResult, DijkstraError> {
    if alg.heuristic {
        if let Some(only) = single_path(g, allowed) {
            return Ok(if alg.check(g, &only) {
                AtomicResult { path: only, opt: true, unfeas: false }
            } else {
                AtomicResult { path: Path::empty(), opt: false, unfeas: true }
            });
        }
    }
    let out = multipulse(g, costs, &alg.constraints, allowed, deadline)?;
    let path = out.path.unwrap_or_default();
    let (mut opt, mut unfeas) = (out.complete && !path.is_empty(), out.complete && path.is_empty());
    if alg.heuristic {
        opt = false;
        unfeas = false;
    }
    Ok(AtomicResult { path, opt, unfeas })
}

/// The unique s–t path of `allowed`, when the arcs lying on some s–t walk form
/// exactly one simple chain.
pub fn single_path(g: &Graph, allowed: &ArcSet) -> Option<Path> {
    let n = g.node_count();
    let reach = |origin: usize, reversed: bool| -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut stack = vec![origin];
        seen[origin] = true;
        while let Some(u) = stack.pop() {
            let arcs = if reversed { g.in_arcs(u) } else { g.out_arcs(u) };
            for &a in arcs {
                if !allowed.contains(a) {
                    continue;
                }
                let v = if reversed { g.arc(a).tail } else { g.arc(a).head };
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    };
    let from_s = reach(g.source(), false);
    let to_t = reach(g.target(), true);
    if !from_s[g.target()] {
        return None;
    }
    let useful: Vec<usize> = allowed
        .iter()
        .filter(|&a| from_s[g.arc(a).tail] && to_t[g.arc(a).head])
        .collect();
    let mut path = Vec::new();
    let mut seen = vec![false; n];
    let mut u = g.source();
    seen[u] = true;
    while u != g.target() {
        let mut outs = useful.iter().copied().filter(|&a| g.arc(a).tail == u);
        let a = outs.next()?;
        if outs.next().is_some() {
            return None;
        }
        u = g.arc(a).head;
        if seen[u] {
            return None;
        }
        seen[u] = true;
        path.push(a);
    }
    (path.len() == useful.len()).then(|| Path::new(path))
}
