//! Revised primal simplex for small minimisation LPs with dynamic rows and
//! columns, variable fixing and dual extraction.
//!
//! Every row `i` owns a logical variable with coefficient `+1` (`≤`, `=`) or
//! `-1` (`≥`) and, when the crash basis needs one, an artificial variable. Both
//! only touch row `i`, so a basis splits into row singletons and a square
//! kernel of structural columns restricted to the rows whose singleton is not
//! basic. Only that kernel is factorised.

#![allow(clippy::needless_range_loop)]

use alloc::vec;
use alloc::vec::Vec;

pub type RowId = usize;
pub type ColId = usize;

const FEAS_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("unknown column {0}")]
    UnknownColumn(ColId),
    #[error("unknown row {0}")]
    UnknownRow(RowId),
    #[error("fixed value {0} is not finite")]
    BadFixValue(f64),
    #[error("basis factorisation failed")]
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub primal: Vec<f64>,
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
struct Row {
    sense: Sense,
    rhs: f64,
}

#[derive(Debug, Clone)]
struct Column {
    objective: f64,
    coeffs: Vec<(RowId, f64)>,
    fixed: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    Col(ColId),
    Slack(RowId),
    Art(RowId),
}

#[derive(Debug, Clone, Default)]
pub struct LpModel {
    rows: Vec<Row>,
    cols: Vec<Column>,
    art_sign: Vec<f64>,
    warm: Option<Vec<Var>>,
    iteration_limit: Option<usize>,
}

impl LpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols.len()
    }

    /// Adds a row over existing columns.
    pub fn add_row(&mut self, coeffs: &[(ColId, f64)], sense: Sense, rhs: f64) -> Result<RowId, LpError> {
        if let Some(&(j, _)) = coeffs.iter().find(|(j, _)| *j >= self.cols.len()) {
            return Err(LpError::UnknownColumn(j));
        }
        let id = self.rows.len();
        self.rows.push(Row { sense, rhs });
        self.art_sign.push(1.0);
        for &(j, a) in coeffs {
            if a != 0.0 {
                self.cols[j].coeffs.push((id, a));
            }
        }
        Ok(id)
    }

    /// Appends a column; the stored basis stays usable as a warm start.
    pub fn add_column(&mut self, objective: f64, coeffs: &[(RowId, f64)]) -> Result<ColId, LpError> {
        if let Some(&(i, _)) = coeffs.iter().find(|(i, _)| *i >= self.rows.len()) {
            return Err(LpError::UnknownRow(i));
        }
        let mut c: Vec<(RowId, f64)> = coeffs.iter().copied().filter(|&(_, a)| a != 0.0).collect();
        c.sort_by_key(|&(i, _)| i);
        self.cols.push(Column { objective, coeffs: c, fixed: None });
        Ok(self.cols.len() - 1)
    }

    pub fn fix(&mut self, col: ColId, value: f64) -> Result<(), LpError> {
        if !value.is_finite() {
            return Err(LpError::BadFixValue(value));
        }
        self.cols.get_mut(col).ok_or(LpError::UnknownColumn(col))?.fixed = Some(value);
        Ok(())
    }

    pub fn unfix(&mut self, col: ColId) -> Result<(), LpError> {
        self.cols.get_mut(col).ok_or(LpError::UnknownColumn(col))?.fixed = None;
        Ok(())
    }

    pub fn is_fixed(&self, col: ColId) -> bool {
        self.cols.get(col).is_some_and(|c| c.fixed.is_some())
    }

    pub fn objective_coeff(&self, col: ColId) -> f64 {
        self.cols[col].objective
    }

    pub fn column_coeffs(&self, col: ColId) -> &[(RowId, f64)] {
        &self.cols[col].coeffs
    }

    pub fn row_sense(&self, row: RowId) -> Sense {
        self.rows[row].sense
    }

    pub fn row_rhs(&self, row: RowId) -> f64 {
        self.rows[row].rhs
    }

    pub fn set_iteration_limit(&mut self, limit: Option<usize>) {
        self.iteration_limit = limit;
    }

    /// Forgets the warm-start basis.
    pub fn reset_basis(&mut self) {
        self.warm = None;
    }

    pub fn solve(&mut self) -> Result<LpSolution, LpError> {
        let warm = self.warm.take();
        let mut work = Work::new(self);
        let started = warm.and_then(|b| work.try_warm(b)).is_some();
        if !started {
            work.cold_crash();
            work.refactor()?;
        }
        let outcome = work.run()?;
        let (solution, basis, signs) = outcome;
        self.art_sign = signs;
        self.warm = basis;
        Ok(solution)
    }
}

struct Lu {
    n: usize,
    a: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(n: usize, mut a: Vec<f64>) -> Option<Lu> {
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].abs();
            for r in k + 1..n {
                let v = a[r * n + k].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best < SINGULAR_TOL {
                return None;
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            let piv = a[k * n + k];
            for r in k + 1..n {
                let f = a[r * n + k] / piv;
                if f != 0.0 {
                    a[r * n + k] = f;
                    for c in k + 1..n {
                        a[r * n + c] -= f * a[k * n + c];
                    }
                } else {
                    a[r * n + k] = 0.0;
                }
            }
        }
        Some(Lu { n, a, perm })
    }

    /// Solves `A x = b` in place.
    fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let mut s = x[r];
            for c in 0..r {
                s -= self.a[r * n + c] * x[c];
            }
            x[r] = s;
        }
        for r in (0..n).rev() {
            let mut s = x[r];
            for c in r + 1..n {
                s -= self.a[r * n + c] * x[c];
            }
            x[r] = s / self.a[r * n + r];
        }
        b.copy_from_slice(&x);
    }

    /// Solves `Aᵀ y = c` in place.
    fn solve_transpose(&self, c: &mut [f64]) {
        let n = self.n;
        let mut w = c.to_vec();
        for r in 0..n {
            let mut s = w[r];
            for k in 0..r {
                s -= self.a[k * n + r] * w[k];
            }
            w[r] = s / self.a[r * n + r];
        }
        for r in (0..n).rev() {
            let mut s = w[r];
            for k in r + 1..n {
                s -= self.a[k * n + r] * w[k];
            }
            w[r] = s;
        }
        for (i, &p) in self.perm.iter().enumerate() {
            c[p] = w[i];
        }
    }
}

struct Work<'a> {
    model: &'a LpModel,
    m: usize,
    sigma: Vec<f64>,
    art_sign: Vec<f64>,
    /// Effective right-hand side after moving fixed nonbasic values across.
    rhs: Vec<f64>,
    basis: Vec<Var>,
    singleton_of_row: Vec<Option<usize>>,
    kernel_rows: Vec<RowId>,
    kernel_cols: Vec<usize>,
    row_to_kernel: Vec<Option<usize>>,
    lu: Option<Lu>,
    xb: Vec<f64>,
    phase_one: bool,
    art_allowed: bool,
}

type RunOutcome = (LpSolution, Option<Vec<Var>>, Vec<f64>);

impl<'a> Work<'a> {
    fn new(model: &'a LpModel) -> Self {
        let m = model.rows.len();
        let sigma = model
            .rows
            .iter()
            .map(|r| if r.sense == Sense::Ge { -1.0 } else { 1.0 })
            .collect();
        let mut rhs: Vec<f64> = model.rows.iter().map(|r| r.rhs).collect();
        for c in &model.cols {
            if let Some(v) = c.fixed {
                if v != 0.0 {
                    for &(i, a) in &c.coeffs {
                        rhs[i] -= a * v;
                    }
                }
            }
        }
        Work {
            model,
            m,
            sigma,
            art_sign: model.art_sign.clone(),
            rhs,
            basis: Vec::new(),
            singleton_of_row: vec![None; m],
            kernel_rows: Vec::new(),
            kernel_cols: Vec::new(),
            row_to_kernel: vec![None; m],
            lu: None,
            xb: Vec::new(),
            phase_one: false,
            art_allowed: false,
        }
    }

    fn bounds(&self, v: Var) -> (f64, f64) {
        match v {
            Var::Col(j) => match self.model.cols[j].fixed {
                Some(x) => (x, x),
                None => (0.0, f64::INFINITY),
            },
            Var::Slack(i) => {
                if self.model.rows[i].sense == Sense::Eq {
                    (0.0, 0.0)
                } else {
                    (0.0, f64::INFINITY)
                }
            }
            Var::Art(_) => {
                if self.art_allowed {
                    (0.0, f64::INFINITY)
                } else {
                    (0.0, 0.0)
                }
            }
        }
    }

    fn cost(&self, v: Var) -> f64 {
        match (self.phase_one, v) {
            (true, Var::Art(_)) => 1.0,
            (true, _) => 0.0,
            (false, Var::Col(j)) => self.model.cols[j].objective,
            (false, _) => 0.0,
        }
    }

    fn try_warm(&mut self, mut basis: Vec<Var>) -> Option<()> {
        let valid = basis.iter().all(|v| match *v {
            Var::Col(j) => j < self.model.cols.len(),
            Var::Slack(i) | Var::Art(i) => i < self.m,
        });
        if !valid || basis.len() > self.m {
            return None;
        }
        for i in basis.len()..self.m {
            basis.push(Var::Slack(i));
        }
        self.basis = basis;
        self.art_allowed = false;
        self.phase_one = false;
        self.refactor().ok()?;
        let feasible = self.basis.iter().zip(&self.xb).all(|(&v, &x)| {
            let (lo, hi) = self.bounds(v);
            x >= lo - FEAS_TOL * (1.0 + lo.abs()) && x <= hi + FEAS_TOL * (1.0 + hi.abs())
        });
        feasible.then_some(())
    }

    fn cold_crash(&mut self) {
        let model = self.model;
        let mut singles: Vec<Vec<ColId>> = vec![Vec::new(); self.m];
        for (j, c) in model.cols.iter().enumerate() {
            if c.fixed.is_none() && c.coeffs.len() == 1 {
                singles[c.coeffs[0].0].push(j);
            }
        }
        let mut basis = Vec::with_capacity(self.m);
        let mut needs_phase_one = false;
        for i in 0..self.m {
            let b = self.rhs[i];
            let slack_ok = match model.rows[i].sense {
                Sense::Le => b >= 0.0,
                Sense::Ge => b <= 0.0,
                Sense::Eq => b == 0.0,
            };
            if slack_ok {
                basis.push(Var::Slack(i));
                continue;
            }
            let single = singles[i].iter().copied().find(|&j| {
                let a = model.cols[j].coeffs[0].1;
                b / a >= 0.0
            });
            if let Some(j) = single {
                basis.push(Var::Col(j));
                continue;
            }
            self.art_sign[i] = if b < 0.0 { -1.0 } else { 1.0 };
            basis.push(Var::Art(i));
            needs_phase_one = true;
        }
        self.basis = basis;
        self.phase_one = needs_phase_one;
        self.art_allowed = needs_phase_one;
    }

    fn is_singleton(v: Var) -> Option<RowId> {
        match v {
            Var::Slack(i) | Var::Art(i) => Some(i),
            Var::Col(_) => None,
        }
    }

    fn singleton_coeff(&self, v: Var) -> f64 {
        match v {
            Var::Slack(i) => self.sigma[i],
            Var::Art(i) => self.art_sign[i],
            Var::Col(_) => unreachable!(),
        }
    }

    fn column(&self, v: Var) -> ColumnRef<'_> {
        match v {
            Var::Col(j) => ColumnRef::Sparse(&self.model.cols[j].coeffs),
            Var::Slack(i) => ColumnRef::Unit(i, self.sigma[i]),
            Var::Art(i) => ColumnRef::Unit(i, self.art_sign[i]),
        }
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        self.singleton_of_row.iter_mut().for_each(|s| *s = None);
        self.kernel_cols.clear();
        for (p, &v) in self.basis.iter().enumerate() {
            match Self::is_singleton(v) {
                Some(i) => {
                    if self.singleton_of_row[i].is_some() {
                        return Err(LpError::NumericalFailure);
                    }
                    self.singleton_of_row[i] = Some(p);
                }
                None => self.kernel_cols.push(p),
            }
        }
        self.kernel_rows.clear();
        self.row_to_kernel.iter_mut().for_each(|s| *s = None);
        for i in 0..self.m {
            if self.singleton_of_row[i].is_none() {
                self.row_to_kernel[i] = Some(self.kernel_rows.len());
                self.kernel_rows.push(i);
            }
        }
        let k = self.kernel_rows.len();
        if k != self.kernel_cols.len() {
            return Err(LpError::NumericalFailure);
        }
        let mut mat = vec![0.0; k * k];
        for (c, &p) in self.kernel_cols.iter().enumerate() {
            if let Var::Col(j) = self.basis[p] {
                for &(i, a) in &self.model.cols[j].coeffs {
                    if let Some(r) = self.row_to_kernel[i] {
                        mat[r * k + c] = a;
                    }
                }
            }
        }
        self.lu = Some(Lu::factor(k, mat).ok_or(LpError::NumericalFailure)?);
        let rhs = self.rhs.clone();
        self.xb = self.ftran(&rhs);
        Ok(())
    }

    /// Returns basis coordinates of `a` (dense over rows), indexed by basis position.
    fn ftran(&self, a: &[f64]) -> Vec<f64> {
        let lu = self.lu.as_ref().expect("factorised");
        let mut zk: Vec<f64> = self.kernel_rows.iter().map(|&i| a[i]).collect();
        lu.solve(&mut zk);
        let mut z = vec![0.0; self.m];
        let mut resid = a.to_vec();
        for (c, &p) in self.kernel_cols.iter().enumerate() {
            z[p] = zk[c];
            if let Var::Col(j) = self.basis[p] {
                for &(i, coef) in &self.model.cols[j].coeffs {
                    resid[i] -= coef * zk[c];
                }
            }
        }
        for i in 0..self.m {
            if let Some(p) = self.singleton_of_row[i] {
                z[p] = resid[i] / self.singleton_coeff(self.basis[p]);
            }
        }
        z
    }

    /// Row duals `y` with `Bᵀ y = c_B`.
    fn btran(&self) -> Vec<f64> {
        let lu = self.lu.as_ref().expect("factorised");
        let mut y = vec![0.0; self.m];
        for i in 0..self.m {
            if let Some(p) = self.singleton_of_row[i] {
                let v = self.basis[p];
                y[i] = self.cost(v) / self.singleton_coeff(v);
            }
        }
        let mut rhs: Vec<f64> = Vec::with_capacity(self.kernel_cols.len());
        for &p in &self.kernel_cols {
            let v = self.basis[p];
            let mut r = self.cost(v);
            if let Var::Col(j) = v {
                for &(i, a) in &self.model.cols[j].coeffs {
                    if self.singleton_of_row[i].is_some() {
                        r -= a * y[i];
                    }
                }
            }
            rhs.push(r);
        }
        lu.solve_transpose(&mut rhs);
        for (r, &i) in self.kernel_rows.iter().enumerate() {
            y[i] = rhs[r];
        }
        y
    }

    fn reduced_cost(&self, v: Var, y: &[f64]) -> f64 {
        let mut d = self.cost(v);
        match self.column(v) {
            ColumnRef::Sparse(c) => {
                for &(i, a) in c {
                    d -= a * y[i];
                }
            }
            ColumnRef::Unit(i, a) => d -= a * y[i],
        }
        d
    }

    fn objective(&self) -> f64 {
        let mut obj = 0.0;
        for (&v, &x) in self.basis.iter().zip(&self.xb) {
            obj += self.cost(v) * x;
        }
        if !self.phase_one {
            for c in &self.model.cols {
                if let Some(x) = c.fixed {
                    obj += c.objective * x;
                }
            }
        }
        obj
    }

    fn in_basis(&self) -> Vec<bool> {
        let n = self.model.cols.len();
        let mut flags = vec![false; n + self.m];
        for &v in &self.basis {
            match v {
                Var::Col(j) => flags[j] = true,
                Var::Slack(i) => flags[n + i] = true,
                Var::Art(_) => {}
            }
        }
        flags
    }

    /// One simplex phase. Returns its terminal status.
    fn iterate(&mut self, iterations: &mut usize, limit: usize) -> Result<LpStatus, LpError> {
        let n = self.model.cols.len();
        let stall_limit = 3 * (self.m + n);
        let mut best = self.objective();
        let mut stalled = 0usize;
        loop {
            if *iterations >= limit {
                return Ok(LpStatus::IterationLimit);
            }
            let bland = stalled > stall_limit;
            let y = self.btran();
            let flags = self.in_basis();
            let mut entering: Option<(Var, f64)> = None;
            let mut consider = |v: Var, d: f64| {
                if d < -OPT_TOL {
                    match entering {
                        None => entering = Some((v, d)),
                        Some((_, bd)) if !bland && d < bd => entering = Some((v, d)),
                        _ => {}
                    }
                }
            };
            for (j, c) in self.model.cols.iter().enumerate() {
                if flags[j] || c.fixed.is_some() {
                    continue;
                }
                consider(Var::Col(j), self.reduced_cost(Var::Col(j), &y));
            }
            for i in 0..self.m {
                if flags[n + i] || self.model.rows[i].sense == Sense::Eq {
                    continue;
                }
                consider(Var::Slack(i), self.reduced_cost(Var::Slack(i), &y));
            }
            let Some((q, _)) = entering else {
                return Ok(LpStatus::Optimal);
            };

            let mut a = vec![0.0; self.m];
            match self.column(q) {
                ColumnRef::Sparse(c) => c.iter().for_each(|&(i, v)| a[i] = v),
                ColumnRef::Unit(i, v) => a[i] = v,
            }
            let z = self.ftran(&a);
            let mut leave: Option<(usize, f64, f64)> = None;
            for (p, &zp) in z.iter().enumerate() {
                if zp.abs() <= PIVOT_TOL {
                    continue;
                }
                let (lo, hi) = self.bounds(self.basis[p]);
                let x = self.xb[p];
                let ratio = if zp > 0.0 {
                    (x - lo) / zp
                } else if hi.is_finite() {
                    (hi - x) / -zp
                } else {
                    continue;
                };
                let ratio = ratio.max(0.0);
                let better = match leave {
                    None => true,
                    Some((bp, br, bz)) => {
                        if ratio < br - 1e-12 {
                            true
                        } else if ratio <= br + 1e-12 {
                            if bland {
                                var_order(self.basis[p], n) < var_order(self.basis[bp], n)
                            } else {
                                zp.abs() > bz
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((p, ratio, zp.abs()));
                }
            }
            let Some((p, _, _)) = leave else {
                return Ok(LpStatus::Unbounded);
            };
            self.basis[p] = q;
            *iterations += 1;
            self.refactor()?;
            let obj = self.objective();
            if obj < best - 1e-12 * (1.0 + best.abs()) {
                best = obj;
                stalled = 0;
            } else {
                stalled += 1;
            }
        }
    }

    fn run(mut self) -> Result<RunOutcome, LpError> {
        let n = self.model.cols.len();
        let limit = self.model.iteration_limit.unwrap_or(20_000 + 200 * (self.m + n));
        let mut iterations = 0;
        if self.phase_one {
            let status = self.iterate(&mut iterations, limit)?;
            if status == LpStatus::IterationLimit {
                return Ok(self.finish(LpStatus::IterationLimit, iterations));
            }
            let scale = 1.0 + self.rhs.iter().fold(0.0f64, |m, b| m.max(b.abs()));
            if self.objective() > FEAS_TOL * scale * (1.0 + self.m as f64) {
                return Ok(self.finish(LpStatus::Infeasible, iterations));
            }
            self.phase_one = false;
            self.art_allowed = false;
        }
        let status = self.iterate(&mut iterations, limit)?;
        Ok(self.finish(status, iterations))
    }

    fn finish(self, status: LpStatus, iterations: usize) -> RunOutcome {
        let n = self.model.cols.len();
        let mut primal: Vec<f64> = self.model.cols.iter().map(|c| c.fixed.unwrap_or(0.0)).collect();
        for (&v, &x) in self.basis.iter().zip(&self.xb) {
            if let Var::Col(j) = v {
                primal[j] = x;
            }
        }
        let y = if self.phase_one { vec![0.0; self.m] } else { self.btran() };
        let reduced_costs: Vec<f64> = (0..n).map(|j| self.reduced_cost(Var::Col(j), &y)).collect();
        let objective = self.model.cols.iter().zip(&primal).map(|(c, x)| c.objective * x).sum();
        let keep = matches!(status, LpStatus::Optimal | LpStatus::Unbounded) && !self.phase_one;
        (
            LpSolution { status, objective, primal, duals: y, reduced_costs, iterations },
            keep.then_some(self.basis),
            self.art_sign,
        )
    }
}

fn var_order(v: Var, n: usize) -> usize {
    match v {
        Var::Col(j) => j,
        Var::Slack(i) => n + i,
        Var::Art(i) => usize::MAX / 2 + i,
    }
}

enum ColumnRef<'a> {
    Sparse(&'a [(RowId, f64)]),
    Unit(RowId, f64),
}
