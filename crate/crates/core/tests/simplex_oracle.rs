mod common;

use acg_core::simplex::LpStatus;
use common::{certificate_violation, rng, DenseLp};

#[test]
fn random_lps_match_vertex_enumeration() {
    let mut r = rng(7);
    let mut optimal = 0;
    for _ in 0..300 {
        let lp = DenseLp::random(&mut r);
        let mut model = lp.to_model();
        let sol = model.solve().unwrap();
        match lp.vertex_optimum() {
            Some(v) => {
                assert_eq!(sol.status, LpStatus::Optimal, "{lp:?}");
                assert!((sol.objective - v).abs() <= 1e-6, "{} vs {v} on {lp:?}", sol.objective);
                assert!(certificate_violation(&lp, &sol) <= 1e-6, "{lp:?} {sol:?}");
                optimal += 1;
            }
            None => assert_eq!(sol.status, LpStatus::Infeasible, "{lp:?}"),
        }
    }
    assert!(optimal > 100);
}

#[test]
fn warm_and_cold_solves_agree() {
    let mut r = rng(11);
    for _ in 0..100 {
        let lp = DenseLp::random(&mut r);
        let mut warm = lp.to_model_incremental();
        let w = warm.solve().unwrap();
        let mut cold = lp.to_model();
        let c = cold.solve().unwrap();
        assert_eq!(w.status, c.status);
        if c.status == LpStatus::Optimal {
            assert!((w.objective - c.objective).abs() <= 1e-6);
        }
    }
}

#[test]
fn fix_unfix_restores_objective() {
    let mut r = rng(13);
    for k in 0..100 {
        let lp = DenseLp::random(&mut r);
        let mut model = lp.to_model();
        let base = model.solve().unwrap();
        let col = k % lp.costs.len();
        model.fix(col, 0.0).unwrap();
        let fixed = model.solve().unwrap();
        if fixed.status == LpStatus::Optimal {
            assert_eq!(fixed.primal[col], 0.0);
            if base.status == LpStatus::Optimal {
                assert!(fixed.objective >= base.objective - 1e-9);
            }
        }
        model.unfix(col).unwrap();
        let again = model.solve().unwrap();
        assert_eq!(again.status, base.status);
        if base.status == LpStatus::Optimal {
            assert!((again.objective - base.objective).abs() <= 1e-9);
        }
    }
}
