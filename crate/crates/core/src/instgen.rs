//! Seeded instance generators.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`. Integers in `[lo, hi]` are drawn by rejection: take
//! `next_u32`, reject values at or above `span * floor(2³² / span)`, return
//! `lo + x mod span`. Given the same seed any port of these two steps yields
//! the same instances.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::atomic::{multipulse, AtomicAlgorithm, ConstraintKind, ConstraintSpec};
use crate::clock::{Deadline, FrozenClock};
use crate::graph::{ArcSet, ArcSpec, Graph, GraphError, NodeId, Path};

pub const VALUE_MIN: u32 = 10;
pub const VALUE_MAX: u32 = 100;
/// Relative slack around witness totals.
pub const VARIATION: f64 = 0.2;
const MAX_ATTEMPTS: u64 = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstgenError {
    #[error("grid needs width and height of at least 2")]
    BadDimensions,
    #[error("path size must be at least 1")]
    BadPathSize,
    #[error("random walk too short ({0} arcs)")]
    WalkTooShort(usize),
    #[error("{needed} resources needed, graph has {available}")]
    NotEnoughResources { needed: usize, available: usize },
    #[error("base instance has no feasible path for the combined constraints")]
    BaseInfeasible,
    #[error("base instance lacks a range constraint")]
    NoRangeConstraint,
    #[error("no suitable instance after {0} attempts")]
    GaveUp(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstanceMeta {
    pub seed: u64,
    pub generator: String,
    pub path_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub graph: Graph,
    pub constraints: Vec<ConstraintSpec>,
    /// Constraint indices owned by each atomic algorithm.
    pub grouping: Vec<Vec<usize>>,
    pub meta: InstanceMeta,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstanceError {
    #[error("constraint {index}: {source}")]
    Constraint { index: usize, source: crate::atomic::ConstraintError },
    #[error("grouping references constraint {0}")]
    BadGroupIndex(usize),
    #[error("constraint {0} is not covered by any group")]
    Uncovered(usize),
}

impl Instance {
    /// One algorithm per constraint.
    pub fn new(graph: Graph, constraints: Vec<ConstraintSpec>, meta: InstanceMeta) -> Self {
        let grouping = (0..constraints.len()).map(|i| vec![i]).collect();
        Instance { graph, constraints, grouping, meta }
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        for (index, c) in self.constraints.iter().enumerate() {
            c.validate(&self.graph).map_err(|source| InstanceError::Constraint { index, source })?;
        }
        let mut covered = vec![false; self.constraints.len()];
        for &i in self.grouping.iter().flatten() {
            *covered.get_mut(i).ok_or(InstanceError::BadGroupIndex(i))? = true;
        }
        match covered.iter().position(|c| !c) {
            Some(i) => Err(InstanceError::Uncovered(i)),
            None => Ok(()),
        }
    }

    pub fn algorithms(&self) -> Vec<AtomicAlgorithm> {
        self.grouping
            .iter()
            .map(|group| AtomicAlgorithm::new(group.iter().map(|&i| self.constraints[i].clone()).collect()))
            .collect()
    }

    /// Every constraint at once.
    pub fn combined(&self) -> AtomicAlgorithm {
        AtomicAlgorithm::new(self.constraints.clone())
    }

    pub fn is_feasible_path(&self, path: &Path) -> bool {
        self.graph.is_st_path(path) && self.constraints.iter().all(|c| c.check(&self.graph, path))
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform integer in `[lo, hi]` by rejection sampling.
pub fn uniform_int(rng: &mut impl RngCore, lo: u32, hi: u32) -> u32 {
    let span = (hi - lo) as u64 + 1;
    let zone = (1u64 << 32) / span * span;
    loop {
        let x = rng.next_u32() as u64;
        if x < zone {
            return lo + (x % span) as u32;
        }
    }
}

/// Uniform index in `0..n`, `n ≥ 1`.
pub fn uniform_index(rng: &mut impl RngCore, n: usize) -> usize {
    uniform_int(rng, 0, (n - 1) as u32) as usize
}

/// Sub-seed `k` of `seed`, for retries.
pub fn sub_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_arc(rng: &mut ChaCha8Rng, tail: NodeId, head: NodeId, resource_count: usize) -> ArcSpec {
    let cost = uniform_int(rng, VALUE_MIN, VALUE_MAX) as f64;
    let resources = (0..resource_count).map(|_| uniform_int(rng, VALUE_MIN, VALUE_MAX) as f64).collect();
    ArcSpec::new(tail, head, cost, resources)
}

/// Bidirected 4-neighbour grid; node `(x, y)` is `y·width + x`. Edges are
/// visited row by row, right neighbour before lower neighbour, each giving the
/// forward arc then the backward arc; every arc draws its cost then its
/// resources in order. Terminals are the first and last node.
pub fn grid(width: usize, height: usize, resource_count: usize, seed: u64) -> Result<Graph, InstgenError> {
    if width < 2 || height < 2 {
        return Err(InstgenError::BadDimensions);
    }
    let mut rng = rng(seed);
    let mut arcs = Vec::with_capacity(4 * width * height);
    for y in 0..height {
        for x in 0..width {
            let u = y * width + x;
            let mut neighbours = Vec::with_capacity(2);
            if x + 1 < width {
                neighbours.push(u + 1);
            }
            if y + 1 < height {
                neighbours.push(u + width);
            }
            for v in neighbours {
                arcs.push(random_arc(&mut rng, u, v, resource_count));
                arcs.push(random_arc(&mut rng, v, u, resource_count));
            }
        }
    }
    Ok(Graph::build(width * height, arcs, 0, width * height - 1, resource_count)?)
}

/// Layered acyclic graph: s, `layers` layers of `width` nodes, t. Arcs go from
/// s to the first layer, from every node of a layer to every node of the next,
/// and from the last layer to t.
pub fn layered(layers: usize, width: usize, resource_count: usize, seed: u64) -> Result<Graph, InstgenError> {
    if layers < 1 || width < 1 {
        return Err(InstgenError::BadDimensions);
    }
    let mut rng = rng(seed);
    let node = |layer: usize, k: usize| 1 + layer * width + k;
    let t = 1 + layers * width;
    let mut arcs = Vec::new();
    for k in 0..width {
        arcs.push(random_arc(&mut rng, 0, node(0, k), resource_count));
    }
    for layer in 0..layers - 1 {
        for i in 0..width {
            for j in 0..width {
                arcs.push(random_arc(&mut rng, node(layer, i), node(layer + 1, j), resource_count));
            }
        }
    }
    for k in 0..width {
        arcs.push(random_arc(&mut rng, node(layers - 1, k), t, resource_count));
    }
    Ok(Graph::build(t + 1, arcs, 0, t, resource_count)?)
}

/// Elementary random walk of up to `steps` arcs from a uniform start node,
/// stopping early at a dead end.
pub fn random_walk(g: &Graph, steps: usize, rng: &mut ChaCha8Rng) -> (NodeId, Path) {
    let start = uniform_index(rng, g.node_count());
    (start, random_walk_from(g, start, steps, rng))
}

fn random_walk_from(g: &Graph, start: NodeId, steps: usize, rng: &mut ChaCha8Rng) -> Path {
    let mut seen = vec![false; g.node_count()];
    seen[start] = true;
    let mut u = start;
    let mut arcs = Vec::new();
    while arcs.len() < steps {
        let next: Vec<usize> = g.out_arcs(u).iter().copied().filter(|&a| !seen[g.arc(a).head]).collect();
        if next.is_empty() {
            break;
        }
        let a = next[uniform_index(rng, next.len())];
        u = g.arc(a).head;
        seen[u] = true;
        arcs.push(a);
    }
    Path::new(arcs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeasibleParams {
    pub path_size: usize,
    pub n_upper: usize,
    pub n_range: usize,
    pub include: bool,
}

impl FeasibleParams {
    pub fn new(path_size: usize) -> Self {
        FeasibleParams { path_size, n_upper: 3, n_range: 3, include: true }
    }
}

/// Bounds around the totals of `witness`: uppers on resources
/// `0..n_upper`, ranges on the next `n_range` resources.
fn witness_constraints(g: &Graph, witness: &Path, n_upper: usize, n_range: usize) -> Vec<ConstraintSpec> {
    let totals = g.evaluate(witness).resource_totals;
    let mut cs = Vec::with_capacity(n_upper + n_range);
    for (j, &total) in totals.iter().enumerate().take(n_upper) {
        cs.push(ConstraintSpec::upper(j, total * (1.0 + VARIATION)));
    }
    for (j, &total) in totals.iter().enumerate().skip(n_upper).take(n_range) {
        cs.push(ConstraintSpec::range(j, total * (1.0 - VARIATION), total * (1.0 + VARIATION)));
    }
    cs
}

fn check_resources(g: &Graph, needed: usize) -> Result<(), InstgenError> {
    if g.resource_count() < needed {
        return Err(InstgenError::NotEnoughResources { needed, available: g.resource_count() });
    }
    Ok(())
}

/// Feasible instance witnessed by a random walk, whose endpoints become the
/// terminals. Also returns the walk, which satisfies every constraint.
pub fn gen_feasible(g: &Graph, params: FeasibleParams, seed: u64) -> Result<(Instance, Path), InstgenError> {
    if params.path_size < 1 {
        return Err(InstgenError::BadPathSize);
    }
    check_resources(g, params.n_upper + params.n_range)?;
    let mut rng = rng(seed);
    let (start, walk) = random_walk(g, params.path_size, &mut rng);
    if walk.is_empty() || (params.include && walk.len() < 2) {
        return Err(InstgenError::WalkTooShort(walk.len()));
    }
    let end = g.arc(*walk.arcs.last().unwrap()).head;
    let mut graph = g.with_terminals(start, end)?;
    let mut constraints = witness_constraints(&graph, &walk, params.n_upper, params.n_range);
    if params.include {
        let interior = &graph.node_sequence(&walk)[1..walk.len()];
        let node = interior[uniform_index(&mut rng, interior.len())];
        let (with_marker, j) = graph.with_inclusion_resource(node);
        graph = with_marker;
        constraints.push(ConstraintSpec::include(j, node));
    }
    let meta = InstanceMeta { seed, generator: "feasible".into(), path_size: Some(params.path_size) };
    Ok((Instance::new(graph, constraints, meta), walk))
}

/// Feasible instance on a layered graph: the witness crosses one uniformly
/// drawn node per layer.
pub fn gen_layered(
    layers: usize,
    width: usize,
    n_upper: usize,
    n_range: usize,
    seed: u64,
) -> Result<(Instance, Path), InstgenError> {
    let g = layered(layers, width, n_upper + n_range, seed)?;
    let mut rng = rng(sub_seed(seed, 1));
    let mut arcs = Vec::with_capacity(layers + 1);
    let mut u = g.source();
    while u != g.target() {
        let out = g.out_arcs(u);
        let a = out[uniform_index(&mut rng, out.len())];
        arcs.push(a);
        u = g.arc(a).head;
    }
    let witness = Path::new(arcs);
    let constraints = witness_constraints(&g, &witness, n_upper, n_range);
    let meta = InstanceMeta { seed, generator: "layered".into(), path_size: Some(layers + 1) };
    Ok((Instance::new(g, constraints, meta), witness))
}

/// Tightens an upper bound until the instance becomes infeasible.
///
/// With `r₁` the resource of the first range constraint and `r₂` the resource
/// of the first upper constraint on another resource (else the first resource
/// no constraint uses), computes `m = min r₂(p)` over paths meeting the range
/// on `r₁`, and sets the bound on `r₂` to `m − 1`. Resource values are
/// integers, so no path satisfies both.
pub fn gen_unfeasible(base: &Instance) -> Result<Instance, InstgenError> {
    let g = &base.graph;
    let range = base
        .constraints
        .iter()
        .find(|c| c.kind == ConstraintKind::Range)
        .ok_or(InstgenError::NoRangeConstraint)?
        .clone();
    let r1 = range.resource;
    let existing = base.constraints.iter().position(|c| c.kind == ConstraintKind::Upper && c.resource != r1);
    let r2 = match existing {
        Some(i) => base.constraints[i].resource,
        None => (0..g.resource_count())
            .find(|&j| base.constraints.iter().all(|c| c.resource != j))
            .ok_or(InstgenError::NotEnoughResources { needed: 2, available: g.resource_count() })?,
    };
    let metric: Vec<f64> = g.arcs().iter().map(|a| a.resources[r2]).collect();
    let clock = FrozenClock;
    let out = multipulse(g, &metric, &[range], &ArcSet::full(g.arc_count()), &Deadline::never(&clock))
        .map_err(|_| InstgenError::BaseInfeasible)?;
    if out.path.is_none() {
        return Err(InstgenError::BaseInfeasible);
    }
    let tight = ConstraintSpec::upper(r2, out.cost - 1.0);
    let mut inst = base.clone();
    match existing {
        Some(i) => inst.constraints[i] = tight,
        None => {
            inst.constraints.push(tight);
            inst.grouping.push(vec![inst.constraints.len() - 1]);
        }
    }
    inst.meta.generator = "unfeasible".into();
    Ok(inst)
}

/// Whether some path satisfies `c` alone.
pub fn satisfiable_alone(g: &Graph, c: &ConstraintSpec) -> bool {
    let clock = FrozenClock;
    let cs = [c.clone()];
    multipulse(g, &g.costs(), &cs, &ArcSet::full(g.arc_count()), &Deadline::never(&clock))
        .is_ok_and(|o| o.path.is_some())
}

/// Unfeasible instance built on `gen_feasible`, retrying sub-seeds until each
/// constraint alone stays satisfiable.
pub fn gen_unfeasible_on(g: &Graph, params: FeasibleParams, seed: u64) -> Result<Instance, InstgenError> {
    for k in 0..MAX_ATTEMPTS {
        let s = sub_seed(seed, k);
        let base = match gen_feasible(g, params, s) {
            Ok((base, _)) => base,
            Err(InstgenError::WalkTooShort(_)) => continue,
            Err(e) => return Err(e),
        };
        let inst = match gen_unfeasible(&base) {
            Ok(inst) => inst,
            Err(InstgenError::BaseInfeasible) => continue,
            Err(e) => return Err(e),
        };
        if inst.constraints.iter().all(|c| satisfiable_alone(&inst.graph, c)) {
            let mut inst = inst;
            inst.meta.seed = seed;
            return Ok(inst);
        }
    }
    Err(InstgenError::GaveUp(MAX_ATTEMPTS))
}
