//! High-precision SSPPR solvers.
//!
//! Every engine moves probability mass from a residue vector into a reserve
//! vector through push operations, so `sum(reserve) + sum(residue) = 1` is
//! invariant and `sum(residue)` is the exact l1-error of the reserve.
//!
//! - [`power_iteration`]: dense synchronous iterations.
//! - [`sim_forward_push`]: synchronous pushes over the nonzero residues only;
//!   identical iterates to power iteration.
//! - [`fifo_forward_push`]: forward push driven by a FIFO queue.
//! - [`power_push`]: FIFO pushes while the active set is small, then epochs of
//!   id-ordered sequential scans with tightening thresholds.
//! - [`refine`]: FIFO pushes until nothing is active for a given `r_max`.

mod checkpoint;
mod fifo;
mod power_iteration;
mod power_push;
mod sim_push;

use std::collections::VecDeque;

pub use checkpoint::{write_checkpoint_csv, Checkpoint, Checkpoints};
pub use fifo::{fifo_forward_push, fifo_forward_push_observed, refine, refine_observed, run_fifo};
pub use power_iteration::{power_iteration, power_iteration_observed};
pub use power_push::{power_push, power_push_observed, run_power_push, PowerPushTuning};
pub use sim_push::{sim_forward_push, sim_forward_push_observed};

use crate::graph::{Graph, NodeId};

/// Largest tolerated gap between the incrementally maintained `r_sum` and a
/// fresh summation.
const R_SUM_DRIFT_LIMIT: f64 = 1e-6;

/// Reserve/residue vectors of one query plus the FIFO work queue.
#[derive(Debug, Clone)]
pub struct PushState {
    source: NodeId,
    alpha: f64,
    reserve: Vec<f64>,
    residue: Vec<f64>,
    r_sum: f64,
    in_queue: Vec<bool>,
    queue: VecDeque<NodeId>,
    edge_pushes: u64,
}

impl PushState {
    /// Initial state: all mass in the residue of `source`.
    pub fn new(n: usize, source: NodeId, alpha: f64) -> Self {
        let mut residue = vec![0.0; n];
        residue[source as usize] = 1.0;
        Self {
            source,
            alpha,
            reserve: vec![0.0; n],
            residue,
            r_sum: 1.0,
            in_queue: vec![false; n],
            queue: VecDeque::new(),
            edge_pushes: 0,
        }
    }

    /// State with caller-provided vectors, e.g. to run the Monte Carlo phase
    /// on a fixed residue. Both vectors must have the same length.
    pub fn from_parts(source: NodeId, alpha: f64, reserve: Vec<f64>, residue: Vec<f64>) -> Self {
        assert_eq!(reserve.len(), residue.len());
        let n = reserve.len();
        let r_sum = residue.iter().sum();
        Self {
            source,
            alpha,
            reserve,
            residue,
            r_sum,
            in_queue: vec![false; n],
            queue: VecDeque::new(),
            edge_pushes: 0,
        }
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn reserve(&self) -> &[f64] {
        &self.reserve
    }

    pub fn residue(&self) -> &[f64] {
        &self.residue
    }

    /// Incrementally maintained residue sum.
    pub fn r_sum(&self) -> f64 {
        self.r_sum
    }

    pub fn edge_pushes(&self) -> u64 {
        self.edge_pushes
    }

    pub fn queue(&self) -> &VecDeque<NodeId> {
        &self.queue
    }

    pub fn in_queue(&self, v: NodeId) -> bool {
        self.in_queue[v as usize]
    }

    pub fn reserve_sum(&self) -> f64 {
        self.reserve.iter().sum()
    }

    #[inline]
    pub fn is_active(&self, g: &Graph, v: NodeId, r_max: f64) -> bool {
        self.residue[v as usize] > g.effective_degree(v) as f64 * r_max
    }

    /// One push on `v`: `alpha * r` to the reserve, `(1 - alpha) * r / d`
    /// to each effective out-neighbor. The residue is zeroed before the
    /// neighbors are credited, so a self-loop keeps its share. Returns false
    /// (and does nothing) when the residue is zero.
    #[inline]
    pub fn push_once(&mut self, g: &Graph, v: NodeId) -> bool {
        let r = self.residue[v as usize];
        if r <= 0.0 {
            return false;
        }
        self.residue[v as usize] = 0.0;
        self.reserve[v as usize] += self.alpha * r;
        let nbrs = g.effective_out(v, &self.source);
        let inc = (1.0 - self.alpha) * r / nbrs.len() as f64;
        for &u in nbrs {
            self.residue[u as usize] += inc;
        }
        self.r_sum -= self.alpha * r;
        self.edge_pushes += nbrs.len() as u64;
        true
    }

    /// [`push_once`](Self::push_once) that also appends every neighbor
    /// that becomes active w.r.t. `r_max` and is not yet queued.
    #[inline]
    pub(crate) fn push_enqueue(&mut self, g: &Graph, v: NodeId, r_max: f64) {
        let r = self.residue[v as usize];
        if r <= 0.0 {
            return;
        }
        self.residue[v as usize] = 0.0;
        self.reserve[v as usize] += self.alpha * r;
        let nbrs = g.effective_out(v, &self.source);
        let inc = (1.0 - self.alpha) * r / nbrs.len() as f64;
        for &u in nbrs {
            let slot = u as usize;
            self.residue[slot] += inc;
            if !self.in_queue[slot] && self.residue[slot] > g.effective_degree(u) as f64 * r_max {
                self.in_queue[slot] = true;
                self.queue.push_back(u);
            }
        }
        self.r_sum -= self.alpha * r;
        self.edge_pushes += nbrs.len() as u64;
    }

    pub(crate) fn enqueue(&mut self, v: NodeId) {
        if !self.in_queue[v as usize] {
            self.in_queue[v as usize] = true;
            self.queue.push_back(v);
        }
    }

    pub(crate) fn pop(&mut self) -> Option<NodeId> {
        let v = self.queue.pop_front()?;
        self.in_queue[v as usize] = false;
        Some(v)
    }

    pub(crate) fn clear_queue(&mut self) {
        for v in self.queue.drain(..) {
            self.in_queue[v as usize] = false;
        }
    }

    /// Replaces the incremental `r_sum` with a fresh summation.
    ///
    /// Panics if the two disagree by more than `1e-6`, which would mean mass
    /// was lost or created.
    pub fn recompute_r_sum(&mut self) -> f64 {
        let exact: f64 = self.residue.iter().sum();
        assert!(
            (exact - self.r_sum).abs() <= R_SUM_DRIFT_LIMIT,
            "r_sum drifted: maintained {} vs summed {}",
            self.r_sum,
            exact
        );
        self.r_sum = exact;
        exact
    }

    pub(crate) fn add_edge_pushes(&mut self, k: u64) {
        self.edge_pushes += k;
    }

    pub(crate) fn vectors_mut(&mut self) -> (&mut Vec<f64>, &mut Vec<f64>) {
        (&mut self.reserve, &mut self.residue)
    }

    pub(crate) fn set_r_sum(&mut self, r_sum: f64) {
        self.r_sum = r_sum;
    }

    pub fn into_vector(mut self) -> PPRVector {
        let achieved_r_sum = self.recompute_r_sum();
        PPRVector {
            estimates: self.reserve,
            residues: self.residue,
            source: self.source,
            alpha: self.alpha,
            achieved_r_sum,
            pushes: self.edge_pushes,
            walks: 0,
        }
    }
}

/// Result of a query.
#[derive(Debug, Clone, PartialEq)]
pub struct PPRVector {
    pub estimates: Vec<f64>,
    /// Residues left by a high-precision engine; all zero after the Monte
    /// Carlo phase.
    pub residues: Vec<f64>,
    pub source: NodeId,
    pub alpha: f64,
    pub achieved_r_sum: f64,
    /// Edge pushes: sum of effective degrees over all push operations.
    pub pushes: u64,
    /// Random walks performed or read from an index.
    pub walks: u64,
}

impl PPRVector {
    pub fn estimate_sum(&self) -> f64 {
        self.estimates.iter().sum()
    }
}

/// Hooks called by the engines at observable points: after each individual
/// push, and at the end of each synchronous iteration or sequential scan.
pub trait PushObserver {
    fn on_push(&mut self, _state: &PushState) {}
    fn on_round(&mut self, _state: &PushState) {}
}

impl PushObserver for () {}

impl<T: PushObserver + ?Sized> PushObserver for &mut T {
    fn on_push(&mut self, state: &PushState) {
        (**self).on_push(state)
    }

    fn on_round(&mut self, state: &PushState) {
        (**self).on_round(state)
    }
}
