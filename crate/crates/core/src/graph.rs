//! Directed multigraph with arc costs and additive resource metrics.

use alloc::vec;
use alloc::vec::Vec;

pub type NodeId = usize;
pub type ArcId = usize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("arc {arc} has negative or non-finite cost {cost}")]
    NegativeCost { arc: ArcId, cost: f64 },
    #[error("arc {arc} has negative or non-finite resource {resource}")]
    NegativeResource { arc: ArcId, resource: usize },
    #[error("arc {arc} references an invalid endpoint or is a self-loop")]
    BadEndpoint { arc: ArcId },
    #[error("arc {arc} carries {found} resources, expected {expected}")]
    ResourceArityMismatch { arc: ArcId, found: usize, expected: usize },
    #[error("source {source_node} / target {target} invalid or equal")]
    BadTerminals { source_node: NodeId, target: NodeId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub id: ArcId,
    pub tail: NodeId,
    pub head: NodeId,
    pub cost: f64,
    pub resources: Vec<f64>,
}

/// Arc description handed to [`Graph::build`]; ids are assigned densely in order.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSpec {
    pub tail: NodeId,
    pub head: NodeId,
    pub cost: f64,
    pub resources: Vec<f64>,
}

impl ArcSpec {
    pub fn new(tail: NodeId, head: NodeId, cost: f64, resources: Vec<f64>) -> Self {
        ArcSpec { tail, head, cost, resources }
    }
}

/// Immutable after construction. Out- and in-adjacency lists keep insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    nodes: usize,
    arcs: Vec<Arc>,
    source: NodeId,
    target: NodeId,
    resource_count: usize,
    out: Vec<Vec<ArcId>>,
    inc: Vec<Vec<ArcId>>,
}

fn nonneg(v: f64) -> bool {
    v.is_finite() && v >= 0.0
}

impl Graph {
    pub fn build(
        nodes: usize,
        arcs: Vec<ArcSpec>,
        source: NodeId,
        target: NodeId,
        resource_count: usize,
    ) -> Result<Graph, GraphError> {
        if source >= nodes || target >= nodes || source == target {
            return Err(GraphError::BadTerminals { source_node: source, target });
        }
        let mut out = vec![Vec::new(); nodes];
        let mut inc = vec![Vec::new(); nodes];
        let mut built = Vec::with_capacity(arcs.len());
        for (id, a) in arcs.into_iter().enumerate() {
            if a.tail >= nodes || a.head >= nodes || a.tail == a.head {
                return Err(GraphError::BadEndpoint { arc: id });
            }
            if !nonneg(a.cost) {
                return Err(GraphError::NegativeCost { arc: id, cost: a.cost });
            }
            if a.resources.len() != resource_count {
                return Err(GraphError::ResourceArityMismatch {
                    arc: id,
                    found: a.resources.len(),
                    expected: resource_count,
                });
            }
            if let Some(j) = a.resources.iter().position(|&r| !nonneg(r)) {
                return Err(GraphError::NegativeResource { arc: id, resource: j });
            }
            out[a.tail].push(id);
            inc[a.head].push(id);
            built.push(Arc { id, tail: a.tail, head: a.head, cost: a.cost, resources: a.resources });
        }
        Ok(Graph { nodes, arcs: built, source, target, resource_count, out, inc })
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id]
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn resource_count(&self) -> usize {
        self.resource_count
    }

    /// δ⁺(u), in insertion order.
    pub fn out_arcs(&self, u: NodeId) -> &[ArcId] {
        &self.out[u]
    }

    /// δ⁻(u), in insertion order.
    pub fn in_arcs(&self, u: NodeId) -> &[ArcId] {
        &self.inc[u]
    }

    pub fn costs(&self) -> Vec<f64> {
        self.arcs.iter().map(|a| a.cost).collect()
    }

    pub fn max_cost(&self) -> f64 {
        self.arcs.iter().map(|a| a.cost).fold(0.0, f64::max)
    }

    /// Same topology and values with different terminals.
    pub fn with_terminals(&self, source: NodeId, target: NodeId) -> Result<Graph, GraphError> {
        if source >= self.nodes || target >= self.nodes || source == target {
            return Err(GraphError::BadTerminals { source_node: source, target });
        }
        let mut g = self.clone();
        g.source = source;
        g.target = target;
        Ok(g)
    }

    /// Appends a unit resource that is 1 on δ⁺(node) and 0 elsewhere. Returns the
    /// new graph and the index of the added resource.
    pub fn with_inclusion_resource(&self, node: NodeId) -> (Graph, usize) {
        let mut g = self.clone();
        let index = g.resource_count;
        for a in &mut g.arcs {
            a.resources.push(if a.tail == node { 1.0 } else { 0.0 });
        }
        g.resource_count += 1;
        (g, index)
    }

    pub fn evaluate(&self, path: &Path) -> PathMetrics {
        let mut cost = 0.0;
        let mut totals = vec![0.0; self.resource_count];
        for &a in &path.arcs {
            let arc = &self.arcs[a];
            cost += arc.cost;
            for (t, r) in totals.iter_mut().zip(&arc.resources) {
                *t += r;
            }
        }
        let chains = path.arcs.windows(2).all(|w| self.arcs[w[0]].head == self.arcs[w[1]].tail);
        let nodes = self.node_sequence(path);
        let mut seen = vec![false; self.nodes];
        let mut elementary = true;
        for &v in &nodes {
            if seen[v] {
                elementary = false;
                break;
            }
            seen[v] = true;
        }
        let connects_s_to_t = chains
            && !path.arcs.is_empty()
            && self.arcs[path.arcs[0]].tail == self.source
            && self.arcs[*path.arcs.last().unwrap()].head == self.target;
        PathMetrics { cost, resource_totals: totals, elementary, connects_s_to_t }
    }

    /// Tail of the first arc followed by the head of every arc.
    pub fn node_sequence(&self, path: &Path) -> Vec<NodeId> {
        let mut nodes = Vec::with_capacity(path.arcs.len() + 1);
        if let Some(&first) = path.arcs.first() {
            nodes.push(self.arcs[first].tail);
        }
        nodes.extend(path.arcs.iter().map(|&a| self.arcs[a].head));
        nodes
    }

    pub fn path_cost(&self, path: &Path) -> f64 {
        path.arcs.iter().map(|&a| self.arcs[a].cost).sum()
    }

    /// True when `path` is a chained elementary path from source to target.
    pub fn is_st_path(&self, path: &Path) -> bool {
        let m = self.evaluate(path);
        m.elementary && m.connects_s_to_t
    }
}

/// Ordered arc-id sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Path {
    pub arcs: Vec<ArcId>,
}

impl Path {
    pub fn new(arcs: Vec<ArcId>) -> Self {
        Path { arcs }
    }

    pub fn empty() -> Self {
        Path { arcs: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn contains(&self, arc: ArcId) -> bool {
        self.arcs.contains(&arc)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathMetrics {
    pub cost: f64,
    pub resource_totals: Vec<f64>,
    pub elementary: bool,
    pub connects_s_to_t: bool,
}

/// Bitmask over arc ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArcSet {
    words: Vec<u64>,
    universe: usize,
    len: usize,
}

impl ArcSet {
    pub fn empty(universe: usize) -> Self {
        ArcSet { words: vec![0; universe.div_ceil(64)], universe, len: 0 }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = ArcSet::empty(universe);
        for w in 0..s.words.len() {
            s.words[w] = u64::MAX;
        }
        let rem = universe % 64;
        if rem != 0 {
            *s.words.last_mut().unwrap() = (1u64 << rem) - 1;
        }
        s.len = universe;
        s
    }

    pub fn from_arcs(universe: usize, arcs: impl IntoIterator<Item = ArcId>) -> Self {
        let mut s = ArcSet::empty(universe);
        for a in arcs {
            s.insert(a);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, a: ArcId) -> bool {
        a < self.universe && self.words[a / 64] & (1 << (a % 64)) != 0
    }

    pub fn insert(&mut self, a: ArcId) -> bool {
        assert!(a < self.universe, "arc {a} outside universe {}", self.universe);
        let (w, bit) = (a / 64, 1u64 << (a % 64));
        let fresh = self.words[w] & bit == 0;
        self.words[w] |= bit;
        self.len += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, a: ArcId) -> bool {
        if a >= self.universe {
            return false;
        }
        let (w, bit) = (a / 64, 1u64 << (a % 64));
        let present = self.words[w] & bit != 0;
        self.words[w] &= !bit;
        self.len -= present as usize;
        present
    }

    pub fn iter(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            core::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + tz)
            })
        })
    }

    pub fn is_subset(&self, other: &ArcSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}
