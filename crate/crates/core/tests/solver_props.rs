//! Randomized agreement between the exact solvers and brute force.

use std::collections::BTreeSet;

use acg_core::atomic::{multipulse, AtomicAlgorithm, ConstraintSpec};
use acg_core::branch::{self, SolveStatus, SolverConfig, Variant};
use acg_core::clock::{Deadline, FrozenClock};
use acg_core::graph::{ArcSet, Graph};
use acg_core::instgen::{self, FeasibleParams, Instance};
use acg_core::master::{CgStatus, MasterConfig, MasterModel};
use acg_core::oracle::{enumerate, enumerate_within, OracleOutcome};
use proptest::prelude::*;

/// `None` when the walk was too short or no constraint was drawn.
fn instance(w: usize, h: usize, n_upper: usize, n_range: usize, include: bool, seed: u64) -> Option<Instance> {
    if n_upper + n_range == 0 && !include {
        return None;
    }
    let g = instgen::grid(w, h, 5, seed).unwrap();
    let params = FeasibleParams { path_size: (w * h) / 2, n_upper, n_range, include };
    instgen::gen_feasible(&g, params, seed).ok().map(|(i, _)| i)
}

fn random_subset(g: &Graph, mask: u64) -> ArcSet {
    ArcSet::from_arcs(g.arc_count(), (0..g.arc_count()).filter(|a| (mask >> (a % 64)) & 1 == 1 || a % 5 == 0))
}

fn config() -> impl Strategy<Value = (usize, usize, usize, usize, bool, u64)> {
    (3usize..=4, 3usize..=4, 0usize..=3, 0usize..=2, any::<bool>(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn arcset_matches_btreeset(ops in proptest::collection::vec((0usize..70, any::<bool>()), 0..200)) {
        let mut set = ArcSet::empty(70);
        let mut model = BTreeSet::new();
        for (a, add) in ops {
            if add {
                prop_assert_eq!(set.insert(a), model.insert(a));
            } else {
                prop_assert_eq!(set.remove(a), model.remove(&a));
            }
        }
        prop_assert_eq!(set.len(), model.len());
        prop_assert_eq!(set.iter().collect::<Vec<_>>(), model.into_iter().collect::<Vec<_>>());
        prop_assert!(set.is_subset(&ArcSet::full(70)));
    }

    #[test]
    fn multipulse_matches_enumeration((w, h, u, r, inc, seed) in config(), mask in any::<u64>()) {
        let Some(inst) = instance(w, h, u, r, inc, seed) else { return Ok(()) };
        let g = &inst.graph;
        let clock = FrozenClock;
        for allowed in [ArcSet::full(g.arc_count()), random_subset(g, mask)] {
            let want = enumerate_within(g, &inst.constraints, &allowed).unwrap();
            let got = multipulse(g, &g.costs(), &inst.constraints, &allowed, &Deadline::never(&clock)).unwrap();
            prop_assert!(got.complete);
            match want {
                OracleOutcome::Optimal { cost, .. } => {
                    prop_assert_eq!(got.cost, cost);
                    let path = got.path.unwrap();
                    prop_assert!(inst.is_feasible_path(&path));
                    prop_assert!(path.arcs.iter().all(|&a| allowed.contains(a)));
                }
                OracleOutcome::Infeasible => prop_assert!(got.path.is_none()),
            }
        }
    }

    #[test]
    fn atomic_certificates_are_sound((w, h, u, r, inc, seed) in config(), mask in any::<u64>()) {
        let Some(inst) = instance(w, h, u, r, inc, seed) else { return Ok(()) };
        let g = &inst.graph;
        let clock = FrozenClock;
        let allowed = random_subset(g, mask);
        for alg in inst.algorithms() {
            let res = alg.solve(g, &g.costs(), &allowed, &Deadline::never(&clock)).unwrap();
            let want = enumerate_within(g, &alg.constraints, &allowed).unwrap();
            prop_assert!(!(res.opt && res.unfeas));
            if res.opt {
                prop_assert_eq!(g.path_cost(&res.path), want.cost());
                prop_assert!(alg.check(g, &res.path));
            }
            if res.unfeas {
                prop_assert_eq!(want, OracleOutcome::Infeasible);
            }
        }
    }

    #[test]
    fn eager_and_lazy_masters_agree((w, h, u, r, inc, seed) in config()) {
        let Some(inst) = instance(w, h, u, r, inc, seed) else { return Ok(()) };
        let algs = inst.algorithms();
        let clock = FrozenClock;
        let all = ArcSet::full(inst.graph.arc_count());
        let mut values = Vec::new();
        for eager in [false, true] {
            let cfg = MasterConfig { eager, ..MasterConfig::default() };
            let mut mm = MasterModel::init(&inst.graph, &algs, cfg).unwrap();
            let res = mm.cg_solve(&all, &Deadline::never(&clock)).unwrap();
            prop_assert_eq!(res.status, CgStatus::Converged);
            values.push(res.lp_value);
            // every column is already there: a second run only re-solves
            let again = mm.cg_solve(&all, &Deadline::never(&clock)).unwrap();
            prop_assert_eq!(again.columns_added, 0);
            prop_assert!((again.lp_value - res.lp_value).abs() <= 1e-6);
        }
        prop_assert!((values[0] - values[1]).abs() <= 1e-6, "lazy {} eager {}", values[0], values[1]);
        let opt = enumerate(&inst.graph, &inst.constraints).unwrap().cost();
        prop_assert!(values[0] <= opt + 1e-6);
    }

    #[test]
    fn branch_and_price_matches_oracle((w, h, u, r, inc, seed) in config()) {
        let Some(inst) = instance(w, h, u, r, inc, seed) else { return Ok(()) };
        let want = enumerate(&inst.graph, &inst.constraints).unwrap().cost();
        let clock = acg_core::clock::StdClock::new();
        for variant in [Variant::Acg1, Variant::AcgH] {
            let sol = branch::solve(&inst.graph, &inst.algorithms(), &SolverConfig::with_variant(variant), &clock).unwrap();
            prop_assert_eq!(sol.status, SolveStatus::Optimal);
            prop_assert_eq!(sol.cost, want);
            prop_assert!(sol.lower_bound <= want + 1e-6);
        }
    }
}

#[test]
fn one_constraint_per_group_or_all_together() {
    let inst = instance(4, 4, 2, 1, true, 99).unwrap();
    let clock = acg_core::clock::StdClock::new();
    let cfg = SolverConfig::with_variant(Variant::Acg1);
    let split = branch::solve(&inst.graph, &inst.algorithms(), &cfg, &clock).unwrap();
    let joint = branch::solve(&inst.graph, &[inst.combined()], &cfg, &clock).unwrap();
    assert_eq!(split.cost, joint.cost);
    let none: Vec<AtomicAlgorithm> = vec![AtomicAlgorithm::new(Vec::<ConstraintSpec>::new())];
    let free = branch::solve(&inst.graph, &none, &cfg, &clock).unwrap();
    assert!(free.cost <= split.cost);
}
