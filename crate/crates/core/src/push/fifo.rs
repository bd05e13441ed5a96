use crate::config::{check_convergent_alpha, check_lambda};
use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::push::{PPRVector, PushObserver, PushState};

/// FIFO forward push. The source is queued first; afterwards a node is
/// appended when it becomes active (`r > d * r_max`) and is not queued.
///
/// Without `lambda_stop` it runs until the queue is empty, leaving every
/// residue at most `d_v * r_max`. With `lambda_stop` it also stops as soon as
/// the residue sum drops to `lambda_stop`.
pub fn fifo_forward_push(
    g: &Graph,
    s: NodeId,
    alpha: f64,
    r_max: f64,
    lambda_stop: Option<f64>,
) -> Result<PPRVector> {
    fifo_forward_push_observed(g, s, alpha, r_max, lambda_stop, &mut ())
}

pub fn fifo_forward_push_observed(
    g: &Graph,
    s: NodeId,
    alpha: f64,
    r_max: f64,
    lambda_stop: Option<f64>,
    observer: &mut impl PushObserver,
) -> Result<PPRVector> {
    check_convergent_alpha(alpha)?;
    check_r_max(r_max)?;
    if let Some(l) = lambda_stop {
        check_lambda(l)?;
    }
    g.check_node(s as u64)?;

    let mut state = PushState::new(g.n(), s, alpha);
    state.enqueue(s);
    let stop = lambda_stop.unwrap_or(0.0);
    run_fifo(g, &mut state, r_max, observer, |st| {
        lambda_stop.is_none() || st.r_sum() > stop
    });
    Ok(state.into_vector())
}

/// Pops and pushes queued nodes while `keep_going` holds and the queue is
/// nonempty. `r_sum` is re-summed after every `m + |dead_ends|` edge pushes.
pub fn run_fifo<O, F>(g: &Graph, state: &mut PushState, r_max: f64, observer: &mut O, mut keep_going: F)
where
    O: PushObserver + ?Sized,
    F: FnMut(&PushState) -> bool,
{
    let resync_every = g.effective_edge_count().max(1);
    let mut next_resync = state.edge_pushes() + resync_every;
    while !state.queue().is_empty() && keep_going(state) {
        let v = state.pop().expect("queue is nonempty");
        state.push_enqueue(g, v, r_max);
        if state.edge_pushes() >= next_resync {
            state.recompute_r_sum();
            next_resync = state.edge_pushes() + resync_every;
        }
        observer.on_push(state);
    }
}

/// Pushes until no node is active w.r.t. `r_max`. Starting from
/// `r_sum <= lambda`, this costs at most `lambda / (alpha * r_max)` edge
/// pushes.
pub fn refine(g: &Graph, r_max: f64, state: &mut PushState) -> Result<()> {
    refine_observed(g, r_max, state, &mut ())
}

pub fn refine_observed(
    g: &Graph,
    r_max: f64,
    state: &mut PushState,
    observer: &mut impl PushObserver,
) -> Result<()> {
    check_r_max(r_max)?;
    state.clear_queue();
    for v in 0..g.n() as NodeId {
        if state.is_active(g, v, r_max) {
            state.enqueue(v);
        }
    }
    run_fifo(g, state, r_max, observer, |_| true);
    state.recompute_r_sum();
    Ok(())
}

fn check_r_max(r_max: f64) -> Result<()> {
    if r_max > 0.0 && r_max.is_finite() {
        Ok(())
    } else {
        Err(invalid("r_max", format!("{r_max} must be positive")))
    }
}
