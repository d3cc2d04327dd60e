//! Ground truth for small instances: exhaustive path enumeration and the
//! compact flow relaxation.

use alloc::vec;
use alloc::vec::Vec;

use crate::atomic::ConstraintSpec;
use crate::graph::{ArcSet, Graph, Path};
use crate::simplex::{LpError, LpModel, LpStatus, Sense};

/// Most partial paths `enumerate` will visit.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("more than {ENUMERATION_LIMIT} partial paths")]
    TooLarge,
    #[error("graph has a directed cycle")]
    CyclicGraph,
    #[error("lp: {0}")]
    Lp(#[from] LpError),
    #[error("relaxation ended with status {0:?}")]
    LpStatus(LpStatus),
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    Optimal { path: Path, cost: f64 },
    Infeasible,
}

impl OracleOutcome {
    pub fn cost(&self) -> f64 {
        match self {
            OracleOutcome::Optimal { cost, .. } => *cost,
            OracleOutcome::Infeasible => f64::INFINITY,
        }
    }
}

pub fn enumerate(g: &Graph, constraints: &[ConstraintSpec]) -> Result<OracleOutcome, OracleError> {
    enumerate_within(g, constraints, &ArcSet::full(g.arc_count()))
}

/// Cheapest elementary s–t path over `allowed` meeting every constraint;
/// ties go to the path found first in arc-id order.
pub fn enumerate_within(
    g: &Graph,
    constraints: &[ConstraintSpec],
    allowed: &ArcSet,
) -> Result<OracleOutcome, OracleError> {
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut on_path = vec![false; g.node_count()];
    let mut arcs = Vec::new();
    // (node, index of the next out-arc to try)
    let mut stack = vec![(g.source(), 0usize)];
    on_path[g.source()] = true;
    let mut visited = 0u64;
    while let Some(top) = stack.last_mut() {
        let (u, i) = *top;
        if i >= g.out_arcs(u).len() {
            stack.pop();
            on_path[u] = false;
            arcs.pop();
            continue;
        }
        top.1 += 1;
        let a = g.out_arcs(u)[i];
        let v = g.arc(a).head;
        if !allowed.contains(a) || on_path[v] {
            continue;
        }
        visited += 1;
        if visited > ENUMERATION_LIMIT {
            return Err(OracleError::TooLarge);
        }
        arcs.push(a);
        if v == g.target() {
            let path = Path::new(arcs.clone());
            let cost = g.path_cost(&path);
            if constraints.iter().all(|c| c.check(g, &path)) && best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, arcs.clone()));
            }
            arcs.pop();
            continue;
        }
        on_path[v] = true;
        stack.push((v, 0));
    }
    Ok(match best {
        Some((cost, arcs)) => OracleOutcome::Optimal { path: Path::new(arcs), cost },
        None => OracleOutcome::Infeasible,
    })
}

pub fn is_acyclic(g: &Graph) -> bool {
    let mut indeg: Vec<usize> = (0..g.node_count()).map(|u| g.in_arcs(u).len()).collect();
    let mut ready: Vec<usize> = (0..g.node_count()).filter(|&u| indeg[u] == 0).collect();
    let mut seen = 0;
    while let Some(u) = ready.pop() {
        seen += 1;
        for &a in g.out_arcs(u) {
            let v = g.arc(a).head;
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(v);
            }
        }
    }
    seen == g.node_count()
}

/// LP value of a unit s→t flow with `0 ≤ x ≤ 1` and every constraint as a
/// linear row over its resource. `+∞` if that LP is infeasible.
pub fn compact_relaxation(g: &Graph, constraints: &[ConstraintSpec]) -> Result<f64, OracleError> {
    if !is_acyclic(g) {
        return Err(OracleError::CyclicGraph);
    }
    let mut lp = LpModel::new();
    let mut balance = Vec::with_capacity(g.node_count());
    for u in 0..g.node_count() {
        let rhs = if u == g.source() {
            1.0
        } else if u == g.target() {
            -1.0
        } else {
            0.0
        };
        balance.push(lp.add_row(&[], Sense::Eq, rhs)?);
    }
    let mut caps = Vec::with_capacity(g.arc_count());
    for _ in 0..g.arc_count() {
        caps.push(lp.add_row(&[], Sense::Le, 1.0)?);
    }
    let mut resource_rows = Vec::new();
    for c in constraints {
        let upper = lp.add_row(&[], Sense::Le, c.upper_bound())?;
        let lower = if c.has_lower() { Some(lp.add_row(&[], Sense::Ge, c.lower_bound())?) } else { None };
        resource_rows.push((c.resource, upper, lower));
    }
    for arc in g.arcs() {
        let mut coeffs = vec![(balance[arc.tail], 1.0), (balance[arc.head], -1.0), (caps[arc.id], 1.0)];
        for &(j, upper, lower) in &resource_rows {
            coeffs.push((upper, arc.resources[j]));
            if let Some(lower) = lower {
                coeffs.push((lower, arc.resources[j]));
            }
        }
        lp.add_column(arc.cost, &coeffs)?;
    }
    let sol = lp.solve()?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.objective),
        LpStatus::Infeasible => Ok(f64::INFINITY),
        s => Err(OracleError::LpStatus(s)),
    }
}
