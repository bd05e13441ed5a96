use crate::config::{check_convergent_alpha, check_lambda, QueryConfig, DEFAULT_EPOCH_NUM};
use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::push::{run_fifo, PPRVector, PushObserver, PushState};

/// Tunable constants of PowerPush.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerPushTuning {
    pub epoch_num: u32,
    pub scan_threshold: usize,
}

impl PowerPushTuning {
    /// `epoch_num = 8`, `scan_threshold = n / 4`.
    pub fn for_graph(g: &Graph) -> Self {
        Self {
            epoch_num: DEFAULT_EPOCH_NUM,
            scan_threshold: g.n() / 4,
        }
    }
}

impl From<&QueryConfig> for PowerPushTuning {
    fn from(cfg: &QueryConfig) -> Self {
        Self {
            epoch_num: cfg.epoch_num,
            scan_threshold: cfg.scan_threshold,
        }
    }
}

/// PowerPush: returns reserves and residues with residue sum at most
/// `lambda`.
///
/// Phase 1 runs FIFO pushes with `r_max = lambda / m` while the queue holds
/// at most `scan_threshold` nodes. If the residue sum is still above
/// `lambda`, the queue is dropped and epoch `i = 1..=epoch_num` repeatedly
/// scans all nodes in id order, pushing those active w.r.t.
/// `lambda^(i / epoch_num) / m`, until the residue sum is at most
/// `lambda^(i / epoch_num)`. Pushes within a scan are asynchronous.
///
/// `m` here counts the conceptual dead-end edges too, see
/// [`Graph::effective_edge_count`].
pub fn power_push(
    g: &Graph,
    s: NodeId,
    alpha: f64,
    lambda: f64,
    tuning: PowerPushTuning,
) -> Result<PPRVector> {
    Ok(run_power_push(g, s, alpha, lambda, tuning, &mut ())?.into_vector())
}

pub fn power_push_observed(
    g: &Graph,
    s: NodeId,
    alpha: f64,
    lambda: f64,
    tuning: PowerPushTuning,
    observer: &mut impl PushObserver,
) -> Result<PPRVector> {
    Ok(run_power_push(g, s, alpha, lambda, tuning, observer)?.into_vector())
}

/// [`power_push`] returning the raw state, for callers that keep pushing.
pub fn run_power_push<O: PushObserver + ?Sized>(
    g: &Graph,
    s: NodeId,
    alpha: f64,
    lambda: f64,
    tuning: PowerPushTuning,
    observer: &mut O,
) -> Result<PushState> {
    check_convergent_alpha(alpha)?;
    check_lambda(lambda)?;
    g.check_node(s as u64)?;
    if tuning.epoch_num == 0 {
        return Err(invalid("epoch_num", "must be positive"));
    }

    let n = g.n();
    let m = g.effective_edge_count() as f64;
    let mut state = PushState::new(n, s, alpha);

    let r_max = lambda / m;
    state.enqueue(s);
    run_fifo(g, &mut state, r_max, observer, |st| {
        st.queue().len() <= tuning.scan_threshold && st.r_sum() > lambda
    });
    state.clear_queue();

    if state.recompute_r_sum() > lambda {
        for epoch in 1..=tuning.epoch_num {
            let target = if epoch == tuning.epoch_num {
                lambda
            } else {
                lambda.powf(epoch as f64 / tuning.epoch_num as f64)
            };
            let epoch_r_max = target / m;
            while state.r_sum() > target {
                let mut pushed = false;
                for v in 0..n as NodeId {
                    if state.is_active(g, v, epoch_r_max) {
                        state.push_once(g, v);
                        observer.on_push(&state);
                        pushed = true;
                    }
                }
                state.recompute_r_sum();
                observer.on_round(&state);
                // With nothing active the sum is already within m * r_max
                // up to rounding.
                if !pushed {
                    break;
                }
            }
        }
    }
    Ok(state)
}
