//! Branch-and-Price over arc extensions of an s-rooted prefix.
//!
//! Every search state fixes a prefix `p` and an eligible arc set `Ā` such that
//! all s–t paths of `(V, Ā)` start with `p`. States are explored best-first on
//! their lower bound; atomic certificates and the master's Lagrangian bound
//! tighten bounds, and any path accepted by every algorithm feeds the
//! incumbent.

#[cfg(feature = "std")]
mod parallel;

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::{Cell, RefCell};
use core::cmp::Ordering;
use core::time::Duration;

use crate::atomic::{dijkstra, AtomicAlgorithm, DijkstraError};
use crate::clock::{Clock, Deadline};
use crate::graph::{ArcId, ArcSet, Graph, NodeId, Path};
use crate::master::{CgObserver, CgResult, CgStatus, MasterConfig, MasterError, MasterModel, NoObserver};

/// States with `l ≥ incumbent − PRUNE_TOL` are discarded.
pub const PRUNE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BranchError {
    #[error("arc {0} cannot extend the prefix")]
    ArcNotEligible(ArcId),
    #[error(transparent)]
    Master(#[from] MasterError),
    #[error(transparent)]
    Atomic(#[from] DijkstraError),
    #[error("invalid solver configuration: {0}")]
    BadConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Multi-threaded with `workers` threads.
    Acg,
    Acg1,
    /// Certificates masked on every atomic call.
    AcgH,
    /// Root column generation only.
    AcgR,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub t_acg: Duration,
    pub t_atomic: Duration,
    pub gamma_ratio: f64,
    pub global_limit: Duration,
    pub variant: Variant,
    pub workers: usize,
    /// Kept for reproducible reporting; the search itself draws no randomness.
    pub seed: u64,
    pub eager_master: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            t_acg: Duration::from_millis(500),
            t_atomic: Duration::from_millis(60),
            gamma_ratio: 0.2,
            global_limit: Duration::from_secs(120),
            variant: Variant::Acg,
            workers: 1,
            seed: 0,
            eager_master: false,
        }
    }
}

impl SolverConfig {
    pub fn with_variant(variant: Variant) -> Self {
        SolverConfig { variant, ..Self::default() }
    }

    fn validate(&self) -> Result<(), BranchError> {
        if !(self.gamma_ratio > 0.0 && self.gamma_ratio <= 1.0) {
            return Err(BranchError::BadConfig("gamma ratio must lie in (0, 1]"));
        }
        if self.t_acg.is_zero() || self.t_atomic.is_zero() || self.global_limit.is_zero() {
            return Err(BranchError::BadConfig("durations must be positive"));
        }
        if self.workers == 0 {
            return Err(BranchError::BadConfig("at least one worker"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchState {
    pub c: f64,
    pub p: Path,
    pub p_plus: Path,
    pub allowed: ArcSet,
    pub l: f64,
    /// Last node of `p`, or s.
    pub end: NodeId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Incumbent {
    pub path: Path,
    pub cost: f64,
}

impl Incumbent {
    pub fn none() -> Self {
        Incumbent { path: Path::empty(), cost: f64::INFINITY }
    }

    /// Keeps the cheaper of the two; ties keep the current path.
    pub fn offer(&mut self, path: &Path, cost: f64) -> bool {
        if cost < self.cost {
            self.path = path.clone();
            self.cost = cost;
            true
        } else {
            false
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    TimeLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Stats {
    pub columns: usize,
    pub nodes_expanded: usize,
    pub atomic_calls: usize,
    pub cg_calls: usize,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub status: SolveStatus,
    pub path: Path,
    pub cost: f64,
    pub lower_bound: f64,
    pub stats: Stats,
}

/// Arc set after appending `chosen` to `prefix`: the other out-arcs of its
/// tail, the other in-arcs of its head, and anything entering a prefix node
/// (s included) become ineligible.
pub fn filter(g: &Graph, allowed: &ArcSet, chosen: ArcId, prefix: &Path) -> Result<ArcSet, BranchError> {
    let nodes = if prefix.is_empty() { vec![g.source()] } else { g.node_sequence(prefix) };
    let end = *nodes.last().unwrap_or(&g.source());
    if chosen >= g.arc_count() || !allowed.contains(chosen) || g.arc(chosen).tail != end {
        return Err(BranchError::ArcNotEligible(chosen));
    }
    let head = g.arc(chosen).head;
    if nodes.contains(&head) {
        return Err(BranchError::ArcNotEligible(chosen));
    }
    let mut out = allowed.clone();
    for &a in g.out_arcs(end) {
        if a != chosen {
            out.remove(a);
        }
    }
    for &a in g.in_arcs(head) {
        if a != chosen {
            out.remove(a);
        }
    }
    for &u in &nodes {
        for &a in g.in_arcs(u) {
            if !prefix.contains(a) {
                out.remove(a);
            }
        }
    }
    Ok(out)
}

/// What a search worker needs from its surroundings: the incumbent, the
/// shared master, and counters.
pub trait SearchEnv {
    fn incumbent_cost(&self) -> f64;
    fn offer(&self, path: &Path, cost: f64);
    fn acg_solve(&self, allowed: &ArcSet, deadline: &Deadline<'_>) -> Result<CgResult, MasterError>;
    fn record_atomic_call(&self);
}

pub struct BranchContext<'a> {
    pub graph: &'a Graph,
    pub algs: &'a [AtomicAlgorithm],
    pub config: &'a SolverConfig,
    pub deadline: Deadline<'a>,
    costs: Vec<f64>,
}

impl<'a> BranchContext<'a> {
    pub fn new(graph: &'a Graph, algs: &'a [AtomicAlgorithm], config: &'a SolverConfig, deadline: Deadline<'a>) -> Self {
        BranchContext { graph, algs, config, deadline, costs: graph.costs() }
    }

    fn feasible_except(&self, path: &Path, skip: usize) -> bool {
        self.graph.is_st_path(path)
            && self.algs.iter().enumerate().all(|(k, alg)| k == skip || alg.check(self.graph, path))
    }
}

/// Tightens `b.l`, refreshes `b.p_plus`, and feeds the incumbent.
pub fn update(ctx: &BranchContext<'_>, b: &mut BranchState, env: &dyn SearchEnv) -> Result<(), BranchError> {
    let g = ctx.graph;
    b.p_plus = Path::empty();
    let dist = dijkstra(g, &ctx.costs, b.end, false, &b.allowed)?;
    let to_t = dist[g.target()];
    if to_t.is_infinite() {
        b.l = f64::INFINITY;
        return Ok(());
    }
    b.l = b.l.max(b.c + to_t);
    let closed = |l: f64| l >= env.incumbent_cost() - PRUNE_TOL;
    if closed(b.l) {
        return Ok(());
    }
    let mut c_plus = f64::INFINITY;
    for (alpha, alg) in ctx.algs.iter().enumerate() {
        if ctx.deadline.expired() {
            return Ok(());
        }
        let sub = ctx.deadline.sub(ctx.config.t_atomic);
        let r = alg.solve(g, &ctx.costs, &b.allowed, &sub)?;
        env.record_atomic_call();
        if r.unfeas {
            b.c = f64::INFINITY;
            b.l = f64::INFINITY;
            return Ok(());
        }
        let cost = g.path_cost(&r.path);
        let others = !r.path.is_empty() && ctx.feasible_except(&r.path, alpha);
        if r.opt {
            b.l = b.l.max(cost);
            if others {
                env.offer(&r.path, cost);
                return Ok(());
            }
        }
        if others && cost < c_plus {
            env.offer(&r.path, cost);
            b.p_plus = r.path.clone();
            c_plus = cost;
        }
        if closed(b.l) {
            return Ok(());
        }
    }
    let ratio = b.allowed.len() as f64 / g.arc_count() as f64;
    if ratio <= ctx.config.gamma_ratio && !ctx.deadline.expired() {
        let r = env.acg_solve(&b.allowed, &ctx.deadline.sub(ctx.config.t_acg))?;
        if r.status == CgStatus::RootInfeasible {
            b.l = f64::INFINITY;
            return Ok(());
        }
        b.l = b.l.max(r.lagrangian_bound);
        if !r.feasible_path.is_empty() {
            env.offer(&r.feasible_path, r.feasible_cost);
            if r.feasible_cost < c_plus {
                b.p_plus = r.feasible_path;
            }
        }
    }
    Ok(())
}

/// Children of `b` worth keeping, and whether every eligible arc was tried
/// before the deadline.
pub fn expand(
    ctx: &BranchContext<'_>,
    b: &BranchState,
    env: &dyn SearchEnv,
) -> Result<(Vec<BranchState>, bool), BranchError> {
    let g = ctx.graph;
    let mut children = Vec::new();
    for &a in g.out_arcs(b.end) {
        if !b.allowed.contains(a) {
            continue;
        }
        if ctx.deadline.expired() {
            return Ok((children, false));
        }
        let allowed = filter(g, &b.allowed, a, &b.p)?;
        let mut p = b.p.clone();
        p.arcs.push(a);
        let mut child = BranchState {
            c: b.c + g.arc(a).cost,
            p,
            p_plus: b.p_plus.clone(),
            allowed,
            l: b.l,
            end: g.arc(a).head,
        };
        if !b.p_plus.contains(a) {
            update(ctx, &mut child, env)?;
        }
        if child.end != g.target() && child.l < env.incumbent_cost() - PRUNE_TOL {
            children.push(child);
        }
    }
    Ok((children, true))
}

struct Queued {
    state: BranchState,
    seq: u64,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl Ord for Queued {
    // max-heap: smaller bound, then longer prefix, then older state
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .state
            .l
            .total_cmp(&self.state.l)
            .then(self.state.p.len().cmp(&other.state.p.len()))
            .then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Best-first open list.
#[derive(Default)]
pub(crate) struct Frontier {
    heap: BinaryHeap<Queued>,
    seq: u64,
}

impl Frontier {
    pub(crate) fn push(&mut self, state: BranchState) {
        self.heap.push(Queued { state, seq: self.seq });
        self.seq += 1;
    }

    pub(crate) fn pop(&mut self) -> Option<BranchState> {
        self.heap.pop().map(|q| q.state)
    }

    pub(crate) fn min_bound(&self) -> f64 {
        self.heap.peek().map_or(f64::INFINITY, |q| q.state.l)
    }
}

/// Atomic algorithms as the variant runs them.
fn variant_algorithms(algs: &[AtomicAlgorithm], variant: Variant) -> Vec<AtomicAlgorithm> {
    let heuristic = variant == Variant::AcgH;
    if algs.is_empty() {
        return vec![AtomicAlgorithm::new(Vec::new()).heuristic(heuristic)];
    }
    algs.iter().cloned().map(|a| a.heuristic(heuristic)).collect()
}

struct SerialEnv<'m, 'a> {
    inc: RefCell<Incumbent>,
    master: RefCell<MasterModel<'a>>,
    obs: &'m dyn CgObserver,
    atomic_calls: Cell<usize>,
    cg_calls: Cell<usize>,
}

impl SearchEnv for SerialEnv<'_, '_> {
    fn incumbent_cost(&self) -> f64 {
        self.inc.borrow().cost
    }

    fn offer(&self, path: &Path, cost: f64) {
        self.inc.borrow_mut().offer(path, cost);
    }

    fn acg_solve(&self, allowed: &ArcSet, deadline: &Deadline<'_>) -> Result<CgResult, MasterError> {
        let r = self.master.borrow_mut().cg_solve_observed(allowed, deadline, self.obs)?;
        self.cg_calls.set(self.cg_calls.get() + 1);
        self.atomic_calls.set(self.atomic_calls.get() + r.atomic_calls);
        Ok(r)
    }

    fn record_atomic_call(&self) {
        self.atomic_calls.set(self.atomic_calls.get() + 1);
    }
}

/// Outcome of the root, shared by the serial and parallel drivers.
enum Root {
    Done(SolveStatus, f64),
    Open(BranchState),
}

fn root(ctx: &BranchContext<'_>, env: &dyn SearchEnv) -> Result<Root, BranchError> {
    let g = ctx.graph;
    let r = env.acg_solve(&ArcSet::full(g.arc_count()), &ctx.deadline.sub(ctx.config.t_acg))?;
    if r.status == CgStatus::RootInfeasible {
        return Ok(Root::Done(SolveStatus::Infeasible, f64::INFINITY));
    }
    if !r.feasible_path.is_empty() {
        env.offer(&r.feasible_path, r.feasible_cost);
    }
    let b0 = BranchState {
        c: 0.0,
        p: Path::empty(),
        p_plus: r.feasible_path,
        allowed: ArcSet::full(g.arc_count()),
        l: r.lagrangian_bound.max(0.0),
        end: g.source(),
    };
    let inc = env.incumbent_cost();
    if b0.l >= inc - PRUNE_TOL {
        return Ok(Root::Done(SolveStatus::Optimal, inc));
    }
    if ctx.config.variant == Variant::AcgR {
        return Ok(Root::Done(SolveStatus::TimeLimit, b0.l));
    }
    Ok(Root::Open(b0))
}

fn finish(status: SolveStatus, inc: Incumbent, bound: f64, stats: Stats) -> Solution {
    let lower_bound = match status {
        SolveStatus::Optimal => inc.cost,
        SolveStatus::Infeasible => f64::INFINITY,
        SolveStatus::TimeLimit => bound.min(inc.cost),
    };
    Solution { status, path: inc.path, cost: inc.cost, lower_bound, stats }
}

/// Closed-search status once the open list is exhausted.
fn exhausted(inc: &Incumbent) -> SolveStatus {
    if inc.path.is_empty() {
        SolveStatus::Infeasible
    } else {
        SolveStatus::Optimal
    }
}

pub fn solve(
    g: &Graph,
    algs: &[AtomicAlgorithm],
    config: &SolverConfig,
    clock: &dyn Clock,
) -> Result<Solution, BranchError> {
    solve_observed(g, algs, config, clock, &NoObserver)
}

pub fn solve_observed(
    g: &Graph,
    algs: &[AtomicAlgorithm],
    config: &SolverConfig,
    clock: &dyn Clock,
    obs: &dyn CgObserver,
) -> Result<Solution, BranchError> {
    config.validate()?;
    let algs = variant_algorithms(algs, config.variant);
    let started = clock.now();
    let deadline = Deadline::after(clock, config.global_limit);
    let ctx = BranchContext::new(g, &algs, config, deadline);
    let master = MasterModel::init(g, &algs, MasterConfig { eager: config.eager_master, t_atomic: config.t_atomic })?;

    #[cfg(feature = "std")]
    if config.variant == Variant::Acg && config.workers > 1 {
        let mut sol = parallel::run(&ctx, master, obs)?;
        sol.stats.wall_ms = (clock.now() - started).as_millis() as u64;
        return Ok(sol);
    }

    let env = SerialEnv {
        inc: RefCell::new(Incumbent::none()),
        master: RefCell::new(master),
        obs,
        atomic_calls: Cell::new(0),
        cg_calls: Cell::new(0),
    };
    let mut nodes_expanded = 0;
    let (status, bound) = match root(&ctx, &env)? {
        Root::Done(status, bound) => (status, bound),
        Root::Open(b0) => {
            let mut open = Frontier::default();
            open.push(b0);
            let mut outcome = None;
            while let Some(b) = open.pop() {
                if b.l >= env.incumbent_cost() - PRUNE_TOL {
                    continue;
                }
                if ctx.deadline.expired() {
                    outcome = Some((SolveStatus::TimeLimit, b.l.min(open.min_bound())));
                    break;
                }
                nodes_expanded += 1;
                let (children, complete) = expand(&ctx, &b, &env)?;
                for child in children {
                    open.push(child);
                }
                if !complete {
                    outcome = Some((SolveStatus::TimeLimit, b.l.min(open.min_bound())));
                    break;
                }
            }
            let inc_cost = env.incumbent_cost();
            match outcome {
                Some((SolveStatus::TimeLimit, bound)) if bound < inc_cost - PRUNE_TOL => (SolveStatus::TimeLimit, bound),
                _ => (exhausted(&env.inc.borrow()), inc_cost),
            }
        }
    };
    let stats = Stats {
        columns: env.master.borrow().path_column_count(),
        nodes_expanded,
        atomic_calls: env.atomic_calls.get(),
        cg_calls: env.cg_calls.get(),
        wall_ms: (clock.now() - started).as_millis() as u64,
    };
    Ok(finish(status, env.inc.into_inner(), bound, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic::ConstraintSpec;
    use crate::clock::FrozenClock;
    use crate::graph::tests::p2;
    use crate::graph::{ArcSpec, Graph};

    fn p2_algs() -> Vec<AtomicAlgorithm> {
        vec![
            AtomicAlgorithm::new(vec![ConstraintSpec::upper(0, 12.0)]),
            AtomicAlgorithm::new(vec![ConstraintSpec::upper(1, 9.0)]),
        ]
    }

    #[test]
    fn filter_on_p2() {
        let g = p2();
        let all = ArcSet::full(4);
        let f = filter(&g, &all, 0, &Path::empty()).unwrap();
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![0, 1, 3]);
        let f2 = filter(&g, &f, 1, &Path::new(vec![0])).unwrap();
        assert_eq!(f2.iter().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(filter(&g, &f, 2, &Path::empty()), Err(BranchError::ArcNotEligible(2)));
        assert_eq!(filter(&g, &all, 1, &Path::empty()), Err(BranchError::ArcNotEligible(1)));
    }

    #[test]
    fn filter_drops_arcs_back_into_prefix() {
        // s=0 -> 1 -> 2=t, with back arcs 1->0 and 2->1
        let arcs = vec![
            ArcSpec::new(0, 1, 1.0, vec![]),
            ArcSpec::new(1, 0, 1.0, vec![]),
            ArcSpec::new(1, 2, 1.0, vec![]),
            ArcSpec::new(2, 1, 1.0, vec![]),
        ];
        let g = Graph::build(3, arcs, 0, 2, 0).unwrap();
        let f = filter(&g, &ArcSet::full(4), 0, &Path::empty()).unwrap();
        assert!(!f.contains(1) && f.contains(2) && !f.contains(3));
    }

    fn serial_env<'a>(g: &'a Graph, algs: &'a [AtomicAlgorithm]) -> SerialEnv<'static, 'a> {
        SerialEnv {
            inc: RefCell::new(Incumbent::none()),
            master: RefCell::new(MasterModel::init(g, algs, MasterConfig::default()).unwrap()),
            obs: &NoObserver,
            atomic_calls: Cell::new(0),
            cg_calls: Cell::new(0),
        }
    }

    fn child(g: &Graph, a: ArcId) -> BranchState {
        BranchState {
            c: g.arc(a).cost,
            p: Path::new(vec![a]),
            p_plus: Path::empty(),
            allowed: filter(g, &ArcSet::full(g.arc_count()), a, &Path::empty()).unwrap(),
            l: 0.0,
            end: g.arc(a).head,
        }
    }

    #[test]
    fn update_prunes_infeasible_branch() {
        let g = p2();
        let algs = p2_algs();
        let cfg = SolverConfig::default();
        let clock = FrozenClock;
        let ctx = BranchContext::new(&g, &algs, &cfg, Deadline::never(&clock));
        let env = serial_env(&g, &algs);
        let mut b = child(&g, 2);
        update(&ctx, &mut b, &env).unwrap();
        assert!(b.l.is_infinite());
        assert!(env.inc.borrow().path.is_empty());
    }

    #[test]
    fn update_closes_branch_with_local_optimum() {
        let g = p2();
        let algs = p2_algs();
        let cfg = SolverConfig::default();
        let clock = FrozenClock;
        let ctx = BranchContext::new(&g, &algs, &cfg, Deadline::never(&clock));
        let env = serial_env(&g, &algs);
        let mut b = child(&g, 0);
        update(&ctx, &mut b, &env).unwrap();
        assert_eq!(*env.inc.borrow(), Incumbent { path: Path::new(vec![0, 1]), cost: 4.0 });
        assert!(b.l >= 4.0);
    }

    #[test]
    fn heuristic_update_keeps_dijkstra_bound() {
        let g = p2();
        let algs = variant_algorithms(&p2_algs(), Variant::AcgH);
        let cfg = SolverConfig::with_variant(Variant::AcgH);
        let clock = FrozenClock;
        let ctx = BranchContext::new(&g, &algs, &cfg, Deadline::never(&clock));
        let env = serial_env(&g, &algs);
        let mut b = BranchState {
            c: 0.0,
            p: Path::empty(),
            p_plus: Path::empty(),
            allowed: ArcSet::full(4),
            l: 0.0,
            end: 0,
        };
        update(&ctx, &mut b, &env).unwrap();
        assert_eq!(b.l, 2.0);
        assert_eq!(b.p_plus, Path::new(vec![0, 1]));
        assert_eq!(env.inc.borrow().cost, 4.0);
        // after su the eligible arcs hold a single useful path: certified
        let mut b = child(&g, 0);
        update(&ctx, &mut b, &env).unwrap();
        assert_eq!(b.l, 4.0);
    }

    #[test]
    fn all_variants_solve_p2() {
        let g = p2();
        let clock = FrozenClock;
        for v in [Variant::Acg, Variant::Acg1, Variant::AcgH, Variant::AcgR] {
            let cfg = SolverConfig { workers: 2, ..SolverConfig::with_variant(v) };
            let s = solve(&g, &p2_algs(), &cfg, &clock).unwrap();
            assert_eq!(s.status, SolveStatus::Optimal, "{v:?}");
            assert_eq!(s.path, Path::new(vec![0, 1]));
            assert_eq!(s.cost, 4.0);
            assert_eq!(s.lower_bound, 4.0);
        }
    }

    #[test]
    fn p2_with_impossible_range_is_infeasible() {
        let g = p2();
        let clock = FrozenClock;
        let mut algs = p2_algs();
        algs.push(AtomicAlgorithm::new(vec![ConstraintSpec::range(0, 13.0, 20.0)]));
        for v in [Variant::Acg1, Variant::AcgH] {
            let s = solve(&g, &algs, &SolverConfig::with_variant(v), &clock).unwrap();
            assert_eq!(s.status, SolveStatus::Infeasible, "{v:?}");
            assert!(s.path.is_empty() && s.cost.is_infinite());
        }
    }

    #[test]
    fn single_arc_without_constraints() {
        let g = Graph::build(2, vec![ArcSpec::new(0, 1, 7.0, vec![])], 0, 1, 0).unwrap();
        let s = solve(&g, &[], &SolverConfig::with_variant(Variant::Acg1), &FrozenClock).unwrap();
        assert_eq!((s.status, s.cost, s.path.clone()), (SolveStatus::Optimal, 7.0, Path::new(vec![0])));
    }

    #[test]
    fn bad_config_rejected() {
        let g = p2();
        let cfg = SolverConfig { gamma_ratio: 0.0, ..SolverConfig::default() };
        assert!(matches!(solve(&g, &p2_algs(), &cfg, &FrozenClock), Err(BranchError::BadConfig(_))));
    }

    #[test]
    fn queue_order() {
        let mk = |l: f64, len: usize| BranchState {
            c: 0.0,
            p: Path::new(vec![0; len]),
            p_plus: Path::empty(),
            allowed: ArcSet::empty(1),
            l,
            end: 0,
        };
        let mut f = Frontier::default();
        f.push(mk(2.0, 1));
        f.push(mk(1.0, 1));
        f.push(mk(1.0, 3));
        f.push(mk(1.0, 3));
        assert_eq!(f.min_bound(), 1.0);
        let order: Vec<(f64, usize)> = core::iter::from_fn(|| f.pop()).map(|s| (s.l, s.p.len())).collect();
        assert_eq!(order, vec![(1.0, 3), (1.0, 3), (1.0, 1), (2.0, 1)]);
    }
}
