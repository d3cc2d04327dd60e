//! The ACG master: one `x_a` variable per arc, one path column `y_p^α` per
//! generated path and algorithm, solved by column generation.
//!
//! Rows are
//! * outdegree: `Σ_{a∈δ⁺(u)} x_a ≤ 1` per node,
//! * convexity: `Σ_p y_p^α = 1` per algorithm (dual β_α),
//! * linking: `x_a − Σ_{p∋a} y_p^α ≥ 0` per (α, a) (dual γ_{a,α} ≥ 0).
//!
//! By default rows and `x` columns are materialized lazily, the first time a
//! path column touches the arc. A missing linking row is `x_a ≥ 0`, so its dual
//! is zero and the LP value is the one of the full model; `eager` builds it
//! all upfront.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::atomic::{AtomicAlgorithm, AtomicResult, DijkstraError};
use crate::clock::Deadline;
use crate::graph::{ArcId, ArcSet, Graph, Path};
use crate::simplex::{ColId, LpError, LpModel, LpStatus, RowId, Sense};

/// Reduced-cost threshold for a column to enter.
pub const RC_TOL: f64 = 1e-6;
const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MasterError {
    #[error("no atomic algorithm given")]
    EmptyAtomicSet,
    #[error("lp: {0}")]
    Lp(#[from] LpError),
    #[error("restricted master ended with status {0:?}")]
    LpStatus(LpStatus),
    #[error("pricing: {0}")]
    Pricing(#[from] DijkstraError),
    #[error("path is not feasible for algorithm {0}")]
    InfeasibleColumn(usize),
    #[error("unknown algorithm {0}")]
    UnknownAlgorithm(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterConfig {
    pub eager: bool,
    pub t_atomic: Duration,
}

impl Default for MasterConfig {
    fn default() -> Self {
        MasterConfig { eager: false, t_atomic: Duration::from_millis(60) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub owner: usize,
    pub path: Path,
    pub lp_id: ColId,
    pub is_dummy: bool,
    /// Passes the check of every algorithm.
    pub feasible_all: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgStatus {
    Converged,
    /// Deadline reached, or no improving column while some pricing call was
    /// not certified.
    DeadlineHit,
    RootInfeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgResult {
    pub lp_value: f64,
    pub lagrangian_bound: f64,
    pub feasible_path: Path,
    pub feasible_cost: f64,
    pub x_fractional: Vec<f64>,
    pub converged: bool,
    pub status: CgStatus,
    pub iterations: usize,
    pub columns_added: usize,
    pub atomic_calls: usize,
    /// Every certified bound computed, in order.
    pub bound_trace: Vec<f64>,
    /// LP value after every RMP solve.
    pub lp_trace: Vec<f64>,
    /// Smallest linking dual seen before clamping.
    pub min_raw_gamma: f64,
}

/// Hooks for inspecting column generation from the outside.
pub trait CgObserver: Sync {
    fn pricing(&self, _alg: usize, _costs: &[f64], _raw_min: f64) {}
    fn finished(&self, _allowed: &ArcSet, _result: &CgResult) {}
}

#[derive(Debug, Default, Clone, Copy)]
pub struct NoObserver;

impl CgObserver for NoObserver {}

/// RMP duals in the form pricing needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Duals {
    pub beta: Vec<f64>,
    /// `gamma[α][a]`, clamped at zero.
    pub gamma: Vec<Vec<f64>>,
    pub raw_min_gamma: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceOutcome {
    pub result: AtomicResult,
    pub reduced_cost: Option<f64>,
    /// Pool index of the column added, if any.
    pub column: Option<usize>,
}

pub fn lagrangian_bound(lp_value: f64, min_reduced_costs: &[f64]) -> f64 {
    lp_value + min_reduced_costs.iter().map(|&r| r.min(0.0)).sum::<f64>()
}

pub struct MasterModel<'a> {
    g: &'a Graph,
    algs: &'a [AtomicAlgorithm],
    cfg: MasterConfig,
    lp: LpModel,
    big_m: f64,
    x_col: Vec<Option<ColId>>,
    outdeg_row: Vec<Option<RowId>>,
    conv_row: Vec<RowId>,
    link_row: Vec<Vec<Option<RowId>>>,
    pool: Vec<Column>,
    index: BTreeMap<(usize, Vec<ArcId>), usize>,
}

impl<'a> MasterModel<'a> {
    pub fn init(g: &'a Graph, algs: &'a [AtomicAlgorithm], cfg: MasterConfig) -> Result<Self, MasterError> {
        if algs.is_empty() {
            return Err(MasterError::EmptyAtomicSet);
        }
        let k = algs.len();
        let mut mm = MasterModel {
            g,
            algs,
            cfg,
            lp: LpModel::new(),
            big_m: g.arc_count() as f64 * g.max_cost() + 1.0,
            x_col: vec![None; g.arc_count()],
            outdeg_row: vec![None; g.node_count()],
            conv_row: Vec::with_capacity(k),
            link_row: vec![vec![None; g.arc_count()]; k],
            pool: Vec::new(),
            index: BTreeMap::new(),
        };
        for _ in 0..k {
            let r = mm.lp.add_row(&[], Sense::Eq, 1.0)?;
            mm.conv_row.push(r);
        }
        if cfg.eager {
            for u in 0..g.node_count() {
                mm.ensure_outdeg_row(u)?;
            }
            for a in 0..g.arc_count() {
                for alpha in 0..k {
                    mm.ensure_link_row(alpha, a)?;
                }
            }
        }
        for alpha in 0..k {
            let lp_id = mm.lp.add_column(mm.big_m, &[(mm.conv_row[alpha], 1.0)])?;
            mm.pool.push(Column { owner: alpha, path: Path::empty(), lp_id, is_dummy: true, feasible_all: false });
        }
        Ok(mm)
    }

    pub fn graph(&self) -> &'a Graph {
        self.g
    }

    pub fn algorithms(&self) -> &'a [AtomicAlgorithm] {
        self.algs
    }

    pub fn big_m(&self) -> f64 {
        self.big_m
    }

    pub fn lp(&self) -> &LpModel {
        &self.lp
    }

    pub fn columns(&self) -> &[Column] {
        &self.pool
    }

    pub fn path_column_count(&self) -> usize {
        self.pool.iter().filter(|c| !c.is_dummy).count()
    }

    pub fn x_column(&self, a: ArcId) -> Option<ColId> {
        self.x_col[a]
    }

    pub fn outdegree_row_count(&self) -> usize {
        self.outdeg_row.iter().flatten().count()
    }

    pub fn linking_row_count(&self) -> usize {
        self.link_row.iter().flatten().flatten().count()
    }

    fn ensure_outdeg_row(&mut self, u: usize) -> Result<RowId, MasterError> {
        if let Some(r) = self.outdeg_row[u] {
            return Ok(r);
        }
        let r = self.lp.add_row(&[], Sense::Le, 1.0)?;
        self.outdeg_row[u] = Some(r);
        Ok(r)
    }

    fn ensure_x(&mut self, a: ArcId) -> Result<ColId, MasterError> {
        if let Some(c) = self.x_col[a] {
            return Ok(c);
        }
        let row = self.ensure_outdeg_row(self.g.arc(a).tail)?;
        let c = self.lp.add_column(self.g.arc(a).cost, &[(row, 1.0)])?;
        self.x_col[a] = Some(c);
        Ok(c)
    }

    fn ensure_link_row(&mut self, alpha: usize, a: ArcId) -> Result<RowId, MasterError> {
        if let Some(r) = self.link_row[alpha][a] {
            return Ok(r);
        }
        let x = self.ensure_x(a)?;
        // paths of α through `a` would already have created the row
        let r = self.lp.add_row(&[(x, 1.0)], Sense::Ge, 0.0)?;
        self.link_row[alpha][a] = Some(r);
        Ok(r)
    }

    pub fn check_all(&self, path: &Path) -> bool {
        self.algs.iter().all(|alg| alg.check(self.g, path))
    }

    /// Registers `path` as a column of `alpha`. Returns the pool index, or
    /// `None` when the column already exists.
    pub fn add_path(&mut self, alpha: usize, path: &Path) -> Result<Option<usize>, MasterError> {
        let alg = self.algs.get(alpha).ok_or(MasterError::UnknownAlgorithm(alpha))?;
        if !alg.check(self.g, path) {
            return Err(MasterError::InfeasibleColumn(alpha));
        }
        let key = (alpha, path.arcs.clone());
        if self.index.contains_key(&key) {
            return Ok(None);
        }
        let mut coeffs = Vec::with_capacity(path.len() + 1);
        coeffs.push((self.conv_row[alpha], 1.0));
        for &a in &path.arcs {
            coeffs.push((self.ensure_link_row(alpha, a)?, -1.0));
        }
        let lp_id = self.lp.add_column(0.0, &coeffs)?;
        let feasible_all = self.check_all(path);
        let idx = self.pool.len();
        self.pool.push(Column { owner: alpha, path: path.clone(), lp_id, is_dummy: false, feasible_all });
        self.index.insert(key, idx);
        Ok(Some(idx))
    }

    fn duals_from(&self, duals: &[f64]) -> Duals {
        let k = self.algs.len();
        let mut gamma = vec![vec![0.0; self.g.arc_count()]; k];
        let mut raw_min_gamma = vec![0.0f64; k];
        for alpha in 0..k {
            for (a, row) in self.link_row[alpha].iter().enumerate() {
                if let Some(r) = *row {
                    let v = duals[r];
                    raw_min_gamma[alpha] = raw_min_gamma[alpha].min(v);
                    gamma[alpha][a] = v.max(0.0);
                }
            }
        }
        Duals { beta: self.conv_row.iter().map(|&r| duals[r]).collect(), gamma, raw_min_gamma }
    }

    fn x_values(&self, primal: &[f64]) -> Vec<f64> {
        self.x_col.iter().map(|c| c.map_or(0.0, |c| primal[c])).collect()
    }

    /// Solves the current RMP.
    pub fn solve_rmp(&mut self) -> Result<(f64, Vec<f64>, Duals), MasterError> {
        let sol = self.lp.solve()?;
        if sol.status != LpStatus::Optimal {
            return Err(MasterError::LpStatus(sol.status));
        }
        let duals = self.duals_from(&sol.duals);
        Ok((sol.objective, self.x_values(&sol.primal), duals))
    }

    /// One pricing call for `alpha` with γ as arc costs.
    pub fn price(
        &mut self,
        alpha: usize,
        duals: &Duals,
        allowed: &ArcSet,
        deadline: &Deadline<'_>,
    ) -> Result<PriceOutcome, MasterError> {
        let alg = self.algs.get(alpha).ok_or(MasterError::UnknownAlgorithm(alpha))?;
        let costs = &duals.gamma[alpha];
        let result = alg.solve(self.g, costs, allowed, deadline)?;
        if result.path.is_empty() {
            return Ok(PriceOutcome { result, reduced_cost: None, column: None });
        }
        let rc = result.path.arcs.iter().map(|&a| costs[a]).sum::<f64>() - duals.beta[alpha];
        let column = if rc < -RC_TOL { self.add_path(alpha, &result.path)? } else { None };
        Ok(PriceOutcome { result, reduced_cost: Some(rc), column })
    }

    pub fn cg_solve(&mut self, allowed: &ArcSet, deadline: &Deadline<'_>) -> Result<CgResult, MasterError> {
        self.cg_solve_observed(allowed, deadline, &NoObserver)
    }

    /// Column generation restricted to `allowed` («ACG-Solve»).
    pub fn cg_solve_observed(
        &mut self,
        allowed: &ArcSet,
        deadline: &Deadline<'_>,
        obs: &dyn CgObserver,
    ) -> Result<CgResult, MasterError> {
        let mut fixed = Vec::new();
        for a in 0..self.g.arc_count() {
            if let Some(c) = self.x_col[a] {
                if !allowed.contains(a) {
                    fixed.push(c);
                }
            }
        }
        for col in &self.pool {
            if !col.is_dummy && col.path.arcs.iter().any(|&a| !allowed.contains(a)) {
                fixed.push(col.lp_id);
            }
        }
        for &c in &fixed {
            self.lp.fix(c, 0.0)?;
        }
        let out = self.cg_loop(allowed, deadline, obs);
        for &c in &fixed {
            self.lp.unfix(c)?;
        }
        let out = out?;
        obs.finished(allowed, &out);
        Ok(out)
    }

    fn cg_loop(
        &mut self,
        allowed: &ArcSet,
        deadline: &Deadline<'_>,
        obs: &dyn CgObserver,
    ) -> Result<CgResult, MasterError> {
        let g = self.g;
        let allowed_cost: f64 = allowed.iter().map(|a| g.arc(a).cost).sum();
        let mut res = CgResult {
            lp_value: f64::INFINITY,
            lagrangian_bound: 0.0,
            feasible_path: Path::empty(),
            feasible_cost: f64::INFINITY,
            x_fractional: vec![0.0; g.arc_count()],
            converged: false,
            status: CgStatus::DeadlineHit,
            iterations: 0,
            columns_added: 0,
            atomic_calls: 0,
            bound_trace: Vec::new(),
            lp_trace: Vec::new(),
            min_raw_gamma: 0.0,
        };
        let offer = |res: &mut CgResult, path: &Path| {
            let cost = g.path_cost(path);
            if cost < res.feasible_cost {
                res.feasible_cost = cost;
                res.feasible_path = path.clone();
            }
        };
        for col in &self.pool {
            if col.feasible_all && col.path.arcs.iter().all(|&a| allowed.contains(a)) {
                offer(&mut res, &col.path);
            }
        }
        loop {
            let (lp_value, x, duals) = self.solve_rmp()?;
            res.iterations += 1;
            res.lp_value = lp_value;
            res.lp_trace.push(lp_value);
            if let Some(p) = integral_path(g, &x) {
                if self.check_all(&p) {
                    offer(&mut res, &p);
                }
            }
            res.x_fractional = x;
            if deadline.expired() {
                res.status = CgStatus::DeadlineHit;
                return Ok(res);
            }
            let mut certified = true;
            let mut rcs = Vec::with_capacity(self.algs.len());
            let mut added = 0;
            for alpha in 0..self.algs.len() {
                let raw = duals.raw_min_gamma[alpha];
                res.min_raw_gamma = res.min_raw_gamma.min(raw);
                obs.pricing(alpha, &duals.gamma[alpha], raw);
                let sub = deadline.sub(self.cfg.t_atomic);
                let out = self.price(alpha, &duals, allowed, &sub)?;
                res.atomic_calls += 1;
                if out.result.unfeas {
                    res.status = CgStatus::RootInfeasible;
                    res.lagrangian_bound = f64::INFINITY;
                    return Ok(res);
                }
                match out.reduced_cost {
                    Some(rc) if out.result.opt => rcs.push(rc),
                    _ => certified = false,
                }
                if out.column.is_some() {
                    added += 1;
                }
                if !out.result.path.is_empty() && self.check_all(&out.result.path) {
                    offer(&mut res, &out.result.path);
                }
            }
            res.columns_added += added;
            if certified {
                let bound = lagrangian_bound(lp_value, &rcs);
                res.bound_trace.push(bound);
                if bound > res.lagrangian_bound {
                    res.lagrangian_bound = bound;
                }
                if bound > allowed_cost + RC_TOL * (1.0 + allowed_cost) {
                    res.status = CgStatus::RootInfeasible;
                    res.lagrangian_bound = f64::INFINITY;
                    return Ok(res);
                }
            }
            if added == 0 {
                res.converged = certified;
                res.status = if certified { CgStatus::Converged } else { CgStatus::DeadlineHit };
                return Ok(res);
            }
        }
    }
}

/// The s–t path formed by an integral `x`, following support arcs from s.
/// Support components not reachable from s are ignored.
pub fn integral_path(g: &Graph, x: &[f64]) -> Option<Path> {
    if x.iter().any(|&v| v > INT_TOL && v < 1.0 - INT_TOL) {
        return None;
    }
    let mut seen = vec![false; g.node_count()];
    let mut u = g.source();
    let mut arcs = Vec::new();
    seen[u] = true;
    while u != g.target() {
        let a = *g.out_arcs(u).iter().find(|&&a| x[a] >= 1.0 - INT_TOL)?;
        u = g.arc(a).head;
        if seen[u] {
            return None;
        }
        seen[u] = true;
        arcs.push(a);
    }
    Some(Path::new(arcs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic::ConstraintSpec;
    use crate::clock::FrozenClock;
    use crate::graph::tests::p2;

    fn p2_algs() -> Vec<AtomicAlgorithm> {
        vec![
            AtomicAlgorithm::new(vec![ConstraintSpec::upper(0, 12.0)]),
            AtomicAlgorithm::new(vec![ConstraintSpec::upper(1, 9.0)]),
        ]
    }

    fn eager() -> MasterConfig {
        MasterConfig { eager: true, ..MasterConfig::default() }
    }

    #[test]
    fn eager_init_counts() {
        let g = p2();
        let algs = p2_algs();
        let mm = MasterModel::init(&g, &algs, eager()).unwrap();
        assert_eq!((0..4).filter(|&a| mm.x_column(a).is_some()).count(), 4);
        assert_eq!(mm.outdegree_row_count(), 4);
        assert_eq!(mm.linking_row_count(), 8);
        assert_eq!(mm.columns().iter().filter(|c| c.is_dummy).count(), 2);
        assert_eq!(mm.lp().row_count(), 4 + 2 + 8);
        assert_eq!(mm.big_m(), 4.0 * 2.0 + 1.0);
    }

    #[test]
    fn empty_atomic_set_rejected() {
        let g = p2();
        assert_eq!(MasterModel::init(&g, &[], MasterConfig::default()).err(), Some(MasterError::EmptyAtomicSet));
    }

    #[test]
    fn dummy_only_solve() {
        let g = p2();
        let algs = p2_algs();
        for cfg in [eager(), MasterConfig::default()] {
            let mut mm = MasterModel::init(&g, &algs, cfg).unwrap();
            let (v, _, duals) = mm.solve_rmp().unwrap();
            assert_eq!(v, 2.0 * mm.big_m());
            assert_eq!(duals.beta, vec![mm.big_m(), mm.big_m()]);
            assert!(duals.gamma.iter().flatten().all(|&g| g == 0.0));
        }
    }

    #[test]
    fn first_pricing_creates_column() {
        let g = p2();
        let algs = p2_algs();
        let clock = FrozenClock;
        let mut mm = MasterModel::init(&g, &algs, MasterConfig::default()).unwrap();
        let (_, _, duals) = mm.solve_rmp().unwrap();
        let out = mm.price(1, &duals, &ArcSet::full(4), &Deadline::never(&clock)).unwrap();
        assert_eq!(out.result.path, Path::new(vec![0, 1]));
        assert_eq!(out.reduced_cost, Some(-mm.big_m()));
        assert!(out.column.is_some());
        let again = mm.price(1, &duals, &ArcSet::full(4), &Deadline::never(&clock)).unwrap();
        assert_eq!(again.column, None);
    }

    #[test]
    fn lagrangian_formula() {
        assert_eq!(lagrangian_bound(10.0, &[-2.0, -1.0]), 7.0);
        assert_eq!(lagrangian_bound(10.0, &[0.0, 0.5]), 10.0);
    }

    #[test]
    fn root_cg_on_p2() {
        let g = p2();
        let algs = p2_algs();
        let clock = FrozenClock;
        for cfg in [eager(), MasterConfig::default()] {
            let mut mm = MasterModel::init(&g, &algs, cfg).unwrap();
            let r = mm.cg_solve(&ArcSet::full(4), &Deadline::never(&clock)).unwrap();
            assert_eq!(r.status, CgStatus::Converged);
            assert!((r.lp_value - 4.0).abs() < 1e-9);
            assert!((r.lagrangian_bound - 4.0).abs() < 1e-9);
            assert_eq!(r.feasible_path, Path::new(vec![0, 1]));
            assert!((r.x_fractional[0] - 1.0).abs() < 1e-9 && (r.x_fractional[1] - 1.0).abs() < 1e-9);
            assert!(r.lp_trace.windows(2).all(|w| w[1] <= w[0] + 1e-9));
        }
    }

    #[test]
    fn restricted_cg_on_p2() {
        let g = p2();
        let algs = p2_algs();
        let clock = FrozenClock;
        let mut mm = MasterModel::init(&g, &algs, MasterConfig::default()).unwrap();
        let r = mm.cg_solve(&ArcSet::from_arcs(4, [0, 1]), &Deadline::never(&clock)).unwrap();
        assert!(r.converged && (r.lp_value - 4.0).abs() < 1e-9);
        let r = mm.cg_solve(&ArcSet::from_arcs(4, [2, 3]), &Deadline::never(&clock)).unwrap();
        assert_eq!(r.status, CgStatus::RootInfeasible);
        assert!(r.lagrangian_bound.is_infinite());
        // the pool survives and the full problem is unaffected by the earlier fixings
        let r = mm.cg_solve(&ArcSet::full(4), &Deadline::never(&clock)).unwrap();
        assert!(r.converged && (r.lp_value - 4.0).abs() < 1e-9);
    }

    #[test]
    fn fixing_everything_leaves_dummies() {
        let g = p2();
        let algs = p2_algs();
        let mut mm = MasterModel::init(&g, &algs, eager()).unwrap();
        for a in 0..4 {
            let c = mm.x_column(a).unwrap();
            mm.lp.fix(c, 0.0).unwrap();
        }
        mm.add_path(0, &Path::new(vec![2, 3])).unwrap();
        let (v, _, _) = mm.solve_rmp().unwrap();
        assert_eq!(v, 2.0 * mm.big_m());
    }

    #[test]
    fn infeasible_column_rejected() {
        let g = p2();
        let algs = p2_algs();
        let mut mm = MasterModel::init(&g, &algs, MasterConfig::default()).unwrap();
        assert_eq!(mm.add_path(1, &Path::new(vec![2, 3])), Err(MasterError::InfeasibleColumn(1)));
        assert_eq!(mm.add_path(0, &Path::new(vec![2, 3])), Ok(Some(2)));
        assert_eq!(mm.add_path(0, &Path::new(vec![2, 3])), Ok(None));
    }

    #[test]
    fn integral_path_skips_detached_circuits() {
        let g = p2();
        assert_eq!(integral_path(&g, &[1.0, 1.0, 0.0, 0.0]), Some(Path::new(vec![0, 1])));
        assert_eq!(integral_path(&g, &[0.5, 0.5, 0.5, 0.5]), None);
        assert_eq!(integral_path(&g, &[0.0, 0.0, 0.0, 1.0]), None);
    }
}
