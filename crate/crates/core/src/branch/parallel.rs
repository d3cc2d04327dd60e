//! Worker pool over a shared open list. The master is behind a mutex, so
//! column generation calls are serialized while atomic calls overlap.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::Duration;

use super::{
    exhausted, expand, finish, root, BranchContext, BranchError, Frontier, Incumbent, Root, SearchEnv, Solution,
    SolveStatus, Stats, PRUNE_TOL,
};
use crate::clock::Deadline;
use crate::graph::{ArcSet, Path};
use crate::master::{CgObserver, CgResult, MasterError, MasterModel};

const IDLE_WAIT: Duration = Duration::from_millis(5);

#[derive(Default)]
struct Queue {
    open: Frontier,
    active: usize,
    stopped: bool,
    /// Bound of states whose expansion the deadline cut short.
    cut_bound: Option<f64>,
    error: Option<BranchError>,
}

struct Shared<'m, 'a> {
    queue: Mutex<Queue>,
    wake: Condvar,
    inc: Mutex<Incumbent>,
    master: Mutex<MasterModel<'a>>,
    obs: &'m dyn CgObserver,
    atomic_calls: AtomicUsize,
    cg_calls: AtomicUsize,
    nodes: AtomicUsize,
}

impl SearchEnv for Shared<'_, '_> {
    fn incumbent_cost(&self) -> f64 {
        self.inc.lock().unwrap().cost
    }

    fn offer(&self, path: &Path, cost: f64) {
        self.inc.lock().unwrap().offer(path, cost);
    }

    fn acg_solve(&self, allowed: &ArcSet, deadline: &Deadline<'_>) -> Result<CgResult, MasterError> {
        let r = self.master.lock().unwrap().cg_solve_observed(allowed, deadline, self.obs)?;
        self.cg_calls.fetch_add(1, Ordering::Relaxed);
        self.atomic_calls.fetch_add(r.atomic_calls, Ordering::Relaxed);
        Ok(r)
    }

    fn record_atomic_call(&self) {
        self.atomic_calls.fetch_add(1, Ordering::Relaxed);
    }
}

fn worker(ctx: &BranchContext<'_>, sh: &Shared<'_, '_>) {
    loop {
        let b = {
            let mut q = sh.queue.lock().unwrap();
            loop {
                if q.stopped {
                    return;
                }
                if ctx.deadline.expired() {
                    q.stopped = true;
                    sh.wake.notify_all();
                    return;
                }
                if let Some(b) = q.open.pop() {
                    if b.l >= sh.incumbent_cost() - PRUNE_TOL {
                        continue;
                    }
                    q.active += 1;
                    break b;
                }
                if q.active == 0 {
                    q.stopped = true;
                    sh.wake.notify_all();
                    return;
                }
                q = sh.wake.wait_timeout(q, IDLE_WAIT).unwrap().0;
            }
        };
        sh.nodes.fetch_add(1, Ordering::Relaxed);
        let out = expand(ctx, &b, sh);
        let mut q = sh.queue.lock().unwrap();
        q.active -= 1;
        match out {
            Ok((children, complete)) => {
                let inc = sh.incumbent_cost();
                for child in children {
                    if child.l < inc - PRUNE_TOL {
                        q.open.push(child);
                    }
                }
                if !complete {
                    q.cut_bound = Some(q.cut_bound.map_or(b.l, |c: f64| c.min(b.l)));
                    q.stopped = true;
                }
            }
            Err(e) => {
                q.error.get_or_insert(e);
                q.stopped = true;
            }
        }
        sh.wake.notify_all();
    }
}

pub(super) fn run(ctx: &BranchContext<'_>, master: MasterModel<'_>, obs: &dyn CgObserver) -> Result<Solution, BranchError> {
    let sh = Shared {
        queue: Mutex::new(Queue::default()),
        wake: Condvar::new(),
        inc: Mutex::new(Incumbent::none()),
        master: Mutex::new(master),
        obs,
        atomic_calls: AtomicUsize::new(0),
        cg_calls: AtomicUsize::new(0),
        nodes: AtomicUsize::new(0),
    };
    let (status, bound) = match root(ctx, &sh)? {
        Root::Done(status, bound) => (status, bound),
        Root::Open(b0) => {
            sh.queue.lock().unwrap().open.push(b0);
            std::thread::scope(|s| {
                for _ in 0..ctx.config.workers {
                    s.spawn(|| worker(ctx, &sh));
                }
            });
            let mut q = sh.queue.lock().unwrap();
            if let Some(e) = q.error.take() {
                return Err(e);
            }
            let inc_cost = sh.incumbent_cost();
            let open_bound = q.open.min_bound().min(q.cut_bound.unwrap_or(f64::INFINITY));
            if open_bound < inc_cost - PRUNE_TOL {
                (SolveStatus::TimeLimit, open_bound)
            } else {
                (exhausted(&sh.inc.lock().unwrap()), inc_cost)
            }
        }
    };
    let stats = Stats {
        columns: sh.master.lock().unwrap().path_column_count(),
        nodes_expanded: sh.nodes.load(Ordering::Relaxed),
        atomic_calls: sh.atomic_calls.load(Ordering::Relaxed),
        cg_calls: sh.cg_calls.load(Ordering::Relaxed),
        wall_ms: 0,
    };
    let inc = sh.inc.into_inner().unwrap();
    Ok(finish(status, inc, bound, stats))
}
