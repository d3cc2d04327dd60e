#![allow(dead_code, clippy::needless_range_loop)]

use acg_core::simplex::{LpModel, LpSolution, LpStatus, Sense};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int_in(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

/// A dense LP `min c·x, rows, x ≥ 0` kept alongside the solver model.
#[derive(Clone, Debug)]
pub struct DenseLp {
    pub costs: Vec<f64>,
    pub rows: Vec<(Vec<f64>, Sense, f64)>,
}

impl DenseLp {
    pub fn random(rng: &mut ChaCha8Rng) -> DenseLp {
        let n = int_in(rng, 2, 4) as usize;
        let m = int_in(rng, 1, 4) as usize;
        let costs = (0..n).map(|_| int_in(rng, -3, 5) as f64).collect();
        let mut rows = Vec::new();
        for _ in 0..m {
            let a: Vec<f64> = (0..n).map(|_| int_in(rng, -2, 4) as f64).collect();
            let sense = match int_in(rng, 0, 2) {
                0 => Sense::Le,
                1 => Sense::Ge,
                _ => Sense::Eq,
            };
            rows.push((a, sense, int_in(rng, 0, 8) as f64));
        }
        // keep the region bounded
        for j in 0..n {
            let mut a = vec![0.0; n];
            a[j] = 1.0;
            rows.push((a, Sense::Le, 10.0));
        }
        DenseLp { costs, rows }
    }

    pub fn to_model(&self) -> LpModel {
        let mut lp = LpModel::new();
        for &c in &self.costs {
            lp.add_column(c, &[]).unwrap();
        }
        for (a, s, b) in &self.rows {
            let coeffs: Vec<(usize, f64)> = a.iter().copied().enumerate().collect();
            lp.add_row(&coeffs, *s, *b).unwrap();
        }
        lp
    }

    /// Rows first, columns added afterwards one at a time with solves in between.
    pub fn to_model_incremental(&self) -> LpModel {
        let mut lp = LpModel::new();
        for (_, s, b) in &self.rows {
            lp.add_row(&[], *s, *b).unwrap();
        }
        for (j, &c) in self.costs.iter().enumerate() {
            let coeffs: Vec<(usize, f64)> = self.rows.iter().enumerate().map(|(i, r)| (i, r.0[j])).collect();
            lp.add_column(c, &coeffs).unwrap();
            let _ = lp.solve().unwrap();
        }
        lp
    }

    /// Optimum by enumerating every vertex, or None if infeasible.
    pub fn vertex_optimum(&self) -> Option<f64> {
        let n = self.costs.len();
        let mut cons: Vec<(Vec<f64>, Sense, f64)> = self.rows.clone();
        for j in 0..n {
            let mut a = vec![0.0; n];
            a[j] = 1.0;
            cons.push((a, Sense::Ge, 0.0));
        }
        let mut best: Option<f64> = None;
        let total = cons.len();
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            if let Some(x) = solve_square(&idx.iter().map(|&i| (cons[i].0.clone(), cons[i].2)).collect::<Vec<_>>()) {
                let feasible = cons.iter().all(|(a, s, b)| {
                    let v: f64 = a.iter().zip(&x).map(|(p, q)| p * q).sum();
                    match s {
                        Sense::Le => v <= b + 1e-9,
                        Sense::Ge => v >= b - 1e-9,
                        Sense::Eq => (v - b).abs() <= 1e-9,
                    }
                });
                if feasible {
                    let obj: f64 = self.costs.iter().zip(&x).map(|(c, v)| c * v).sum();
                    best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                }
            }
            // next combination
            let mut k = n;
            loop {
                if k == 0 {
                    return best;
                }
                k -= 1;
                if idx[k] < total - n + k {
                    idx[k] += 1;
                    for r in k + 1..n {
                        idx[r] = idx[r - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

fn solve_square(rows: &[(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.iter().map(|(r, b)| {
        let mut v = r.clone();
        v.push(*b);
        v
    }).collect();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())?;
        if a[p][k].abs() < 1e-12 {
            return None;
        }
        a.swap(k, p);
        for i in 0..n {
            if i != k {
                let f = a[i][k] / a[k][k];
                for c in k..=n {
                    a[i][c] -= f * a[k][c];
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// Checks the optimality certificate of `sol` against the dense data.
/// Returns the worst violation found.
pub fn certificate_violation(lp: &DenseLp, sol: &LpSolution) -> f64 {
    assert_eq!(sol.status, LpStatus::Optimal);
    let mut worst = 0.0f64;
    let x = &sol.primal;
    let y = &sol.duals;
    let mut dual_obj = 0.0;
    for (i, (a, s, b)) in lp.rows.iter().enumerate() {
        let act: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
        let viol = match s {
            Sense::Le => (act - b).max(0.0),
            Sense::Ge => (b - act).max(0.0),
            Sense::Eq => (act - b).abs(),
        };
        worst = worst.max(viol / (1.0 + b.abs()));
        let sign = match s {
            Sense::Le => y[i].max(0.0),
            Sense::Ge => (-y[i]).max(0.0),
            Sense::Eq => 0.0,
        };
        worst = worst.max(sign);
        worst = worst.max((y[i] * (act - b)).abs());
        dual_obj += y[i] * b;
    }
    for (j, &c) in lp.costs.iter().enumerate() {
        let d = c - lp.rows.iter().enumerate().map(|(i, r)| r.0[j] * y[i]).sum::<f64>();
        worst = worst.max((-d).max(0.0));
        worst = worst.max((d * x[j]).abs());
        worst = worst.max((-x[j]).max(0.0));
    }
    worst = worst.max((dual_obj - sol.objective).abs());
    worst
}
