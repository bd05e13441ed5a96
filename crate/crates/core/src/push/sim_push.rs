use crate::config::{check_convergent_alpha, check_lambda};
use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::push::{PPRVector, PushObserver, PushState};

/// Simultaneous forward push: with `r_max = 0`, every node holding residue
/// pushes once per iteration, reading the residues of the previous iteration
/// only. Stops when the residue sum is at most `lambda`.
pub fn sim_forward_push(g: &Graph, s: NodeId, alpha: f64, lambda: f64) -> Result<PPRVector> {
    sim_forward_push_observed(g, s, alpha, lambda, &mut ())
}

pub fn sim_forward_push_observed(
    g: &Graph,
    s: NodeId,
    alpha: f64,
    lambda: f64,
    observer: &mut impl PushObserver,
) -> Result<PPRVector> {
    check_convergent_alpha(alpha)?;
    check_lambda(lambda)?;
    g.check_node(s as u64)?;

    let n = g.n();
    let mut state = PushState::new(n, s, alpha);
    let mut next = vec![0.0; n];
    let mut touched = vec![false; n];
    let mut active: Vec<NodeId> = vec![s];
    let mut next_active: Vec<NodeId> = Vec::new();

    while state.r_sum() > lambda {
        let mut pushed_edges = 0u64;
        let (reserve, residue) = state.vectors_mut();
        for &v in &active {
            let r = residue[v as usize];
            residue[v as usize] = 0.0;
            reserve[v as usize] += alpha * r;
            let nbrs = g.effective_out(v, &s);
            let share = (1.0 - alpha) * r / nbrs.len() as f64;
            for &u in nbrs {
                let slot = u as usize;
                if !touched[slot] {
                    touched[slot] = true;
                    next_active.push(u);
                }
                next[slot] += share;
            }
            pushed_edges += nbrs.len() as u64;
        }
        // Every pushed residue is zero now; move the new iterate in.
        let mut r_sum = 0.0;
        for &u in &next_active {
            let slot = u as usize;
            residue[slot] = next[slot];
            r_sum += next[slot];
            next[slot] = 0.0;
            touched[slot] = false;
        }
        std::mem::swap(&mut active, &mut next_active);
        next_active.clear();
        active.retain(|&u| residue[u as usize] > 0.0);

        state.set_r_sum(r_sum);
        state.add_edge_pushes(pushed_edges);
        observer.on_round(&state);
    }
    Ok(state.into_vector())
}
