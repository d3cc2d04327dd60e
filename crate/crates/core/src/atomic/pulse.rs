//! MultiPulse: depth-first exact search for resource-constrained elementary
//! paths with upper and lower bounds.
//!
//! Pruning is the classical pulse pair: a resource-feasibility test against
//! reverse shortest-path minima on every upper-bounded metric, and a cost bound
//! against the incumbent. Lower bounds are never used for pruning; they only
//! steer the choice of the next arc.

use alloc::vec;
use alloc::vec::Vec;

use super::constraint::{ConstraintSpec, BOUND_TOL};
use super::dijkstra::{dijkstra, DijkstraError};
use crate::clock::Deadline;
use crate::graph::{ArcId, ArcSet, Graph, NodeId, Path};

/// Deadline polling period, in expansions.
pub const DEADLINE_POLL: u64 = 1024;

/// Reverse shortest-path minima to the target on the allowed subgraph.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub min_cost_to_t: Vec<f64>,
    /// Indexed `[constraint position][node]`.
    pub min_resource_to_t: Vec<Vec<f64>>,
}

pub fn pulse_preprocess(
    g: &Graph,
    costs: &[f64],
    constraints: &[ConstraintSpec],
    allowed: &ArcSet,
) -> Result<Bounds, DijkstraError> {
    let t = g.target();
    let min_cost_to_t = dijkstra(g, costs, t, true, allowed)?;
    let mut min_resource_to_t = Vec::with_capacity(constraints.len());
    for c in constraints {
        let metric: Vec<f64> = g.arcs().iter().map(|a| a.resources[c.resource]).collect();
        min_resource_to_t.push(dijkstra(g, &metric, t, true, allowed)?);
    }
    Ok(Bounds { min_cost_to_t, min_resource_to_t })
}

/// Orders candidate extensions. While some lower bound is unmet, arcs that
/// minimise the worst remaining lower-bound gap come first; otherwise arcs are
/// ordered by cost plus cost-to-go. Ties go to the lower arc id.
pub fn pulse_next_arc(
    g: &Graph,
    costs: &[f64],
    consumed: &[f64],
    candidates: &[ArcId],
    constraints: &[ConstraintSpec],
    bounds: &Bounds,
) -> Vec<ArcId> {
    let worst_gap = constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.has_lower())
        .map(|(k, c)| c.lower_bound() - consumed[k])
        .fold(f64::NEG_INFINITY, f64::max);
    let key = |a: ArcId| -> f64 {
        let arc = g.arc(a);
        if worst_gap > 0.0 {
            constraints
                .iter()
                .enumerate()
                .filter(|(_, c)| c.has_lower())
                .map(|(k, c)| c.lower_bound() - consumed[k] - arc.resources[c.resource])
                .fold(f64::NEG_INFINITY, f64::max)
        } else {
            costs[a] + bounds.min_cost_to_t[arc.head]
        }
    };
    let mut keyed: Vec<(f64, ArcId)> = candidates.iter().map(|&a| (key(a), a)).collect();
    keyed.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    keyed.into_iter().map(|(_, a)| a).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseOutcome {
    pub path: Option<Path>,
    pub cost: f64,
    /// The search space was exhausted before the deadline.
    pub complete: bool,
    pub expansions: u64,
}

struct Frame {
    order: Vec<ArcId>,
    next: usize,
}

/// Exact search; `complete` is false when the deadline interrupted it.
pub fn multipulse(
    g: &Graph,
    costs: &[f64],
    constraints: &[ConstraintSpec],
    allowed: &ArcSet,
    deadline: &Deadline<'_>,
) -> Result<PulseOutcome, DijkstraError> {
    let bounds = pulse_preprocess(g, costs, constraints, allowed)?;
    let (s, t) = (g.source(), g.target());
    let mut best: Option<Vec<ArcId>> = None;
    let mut best_cost = f64::INFINITY;
    let mut expansions = 0u64;

    if bounds.min_cost_to_t[s].is_infinite() {
        return Ok(PulseOutcome { path: None, cost: f64::INFINITY, complete: true, expansions });
    }

    let mut visited = vec![false; g.node_count()];
    let mut consumed = vec![0.0; constraints.len()];
    let mut cost = 0.0;
    let mut path: Vec<ArcId> = Vec::new();
    visited[s] = true;

    let candidates = |u: NodeId| -> Vec<ArcId> {
        g.out_arcs(u).iter().copied().filter(|&a| allowed.contains(a)).collect()
    };
    let first = candidates(s);
    let mut stack = vec![Frame { order: pulse_next_arc(g, costs, &consumed, &first, constraints, &bounds), next: 0 }];

    while let Some(frame) = stack.last_mut() {
        if frame.next >= frame.order.len() {
            stack.pop();
            if let Some(a) = path.pop() {
                let arc = g.arc(a);
                visited[arc.head] = false;
                cost -= costs[a];
                for (k, c) in constraints.iter().enumerate() {
                    consumed[k] -= arc.resources[c.resource];
                }
            }
            continue;
        }
        let a = frame.order[frame.next];
        frame.next += 1;
        let arc = g.arc(a);
        let v = arc.head;
        if visited[v] {
            continue;
        }
        let to_go = bounds.min_cost_to_t[v];
        let new_cost = cost + costs[a];
        if to_go.is_infinite() || new_cost + to_go >= best_cost {
            continue;
        }
        let resource_ok = constraints.iter().enumerate().all(|(k, c)| {
            let u = c.upper_bound();
            !u.is_finite()
                || consumed[k] + arc.resources[c.resource] + bounds.min_resource_to_t[k][v]
                    <= u + BOUND_TOL * (1.0 + u.abs())
        });
        if !resource_ok {
            continue;
        }
        expansions += 1;
        if expansions.is_multiple_of(DEADLINE_POLL) && deadline.expired() {
            return Ok(PulseOutcome {
                path: best.map(Path::new),
                cost: best_cost,
                complete: false,
                expansions,
            });
        }
        if v == t {
            let meets = constraints
                .iter()
                .enumerate()
                .all(|(k, c)| c.admits(consumed[k] + arc.resources[c.resource]));
            if meets {
                let mut p = path.clone();
                p.push(a);
                best = Some(p);
                best_cost = new_cost;
            }
            continue;
        }
        path.push(a);
        visited[v] = true;
        cost = new_cost;
        for (k, c) in constraints.iter().enumerate() {
            consumed[k] += arc.resources[c.resource];
        }
        let next = candidates(v);
        let order = pulse_next_arc(g, costs, &consumed, &next, constraints, &bounds);
        stack.push(Frame { order, next: 0 });
    }

    Ok(PulseOutcome { path: best.map(Path::new), cost: best_cost, complete: true, expansions })
}
