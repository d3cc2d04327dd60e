use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::graph::{ArcSet, Graph, NodeId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DijkstraError {
    #[error("arc {arc} has negative or NaN cost")]
    NegativeCost { arc: usize },
    #[error("cost vector has {found} entries for {expected} arcs")]
    CostArity { found: usize, expected: usize },
}

#[derive(PartialEq)]
struct Entry(f64, NodeId);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest distances from `origin` over arcs in `allowed`. With `reversed`
/// the arcs are traversed head to tail, giving distances *to* `origin`.
/// Unreachable nodes get `+∞`.
pub fn dijkstra(
    g: &Graph,
    costs: &[f64],
    origin: NodeId,
    reversed: bool,
    allowed: &ArcSet,
) -> Result<Vec<f64>, DijkstraError> {
    if costs.len() != g.arc_count() {
        return Err(DijkstraError::CostArity { found: costs.len(), expected: g.arc_count() });
    }
    if let Some(arc) = costs.iter().position(|c| c.is_nan() || *c < 0.0) {
        return Err(DijkstraError::NegativeCost { arc });
    }
    let mut dist = vec![f64::INFINITY; g.node_count()];
    let mut heap = BinaryHeap::new();
    dist[origin] = 0.0;
    heap.push(Entry(0.0, origin));
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        let arcs = if reversed { g.in_arcs(u) } else { g.out_arcs(u) };
        for &a in arcs {
            if !allowed.contains(a) {
                continue;
            }
            let arc = g.arc(a);
            let v = if reversed { arc.tail } else { arc.head };
            let nd = d + costs[a];
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Entry(nd, v));
            }
        }
    }
    Ok(dist)
}
