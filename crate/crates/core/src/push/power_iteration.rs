use crate::config::{check_convergent_alpha, check_lambda};
use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::push::{PPRVector, PushObserver, PushState};

/// Power iteration: `gamma <- (1 - alpha) gamma P` and
/// `pi_hat += alpha gamma` over every node, until `||gamma||_1 <= lambda`.
/// The returned residues are the final `gamma`.
pub fn power_iteration(g: &Graph, s: NodeId, alpha: f64, lambda: f64) -> Result<PPRVector> {
    power_iteration_observed(g, s, alpha, lambda, &mut ())
}

/// [`power_iteration`] calling `observer.on_round` after every iteration.
pub fn power_iteration_observed(
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
    let edges_per_iteration = g.effective_edge_count();

    while state.r_sum() > lambda {
        let (reserve, gamma) = state.vectors_mut();
        for v in 0..n {
            let mass = gamma[v];
            reserve[v] += alpha * mass;
            let nbrs = g.effective_out(v as NodeId, &s);
            let share = (1.0 - alpha) * mass / nbrs.len() as f64;
            for &u in nbrs {
                next[u as usize] += share;
            }
        }
        std::mem::swap(gamma, &mut next);
        next.fill(0.0);
        let r_sum = gamma.iter().sum();
        state.set_r_sum(r_sum);
        state.add_edge_pushes(edges_per_iteration);
        observer.on_round(&state);
    }
    Ok(state.into_vector())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_count_matches_geometric_decay() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0), (2, 1)]).unwrap();
        let lambda = 1e-6;
        let mut rounds = 0usize;
        struct Count<'a>(&'a mut usize);
        impl PushObserver for Count<'_> {
            fn on_round(&mut self, _: &PushState) {
                *self.0 += 1;
            }
        }
        let out = power_iteration_observed(&g, 0, 0.2, lambda, &mut Count(&mut rounds)).unwrap();
        let expected = ((1.0 / lambda).ln() / (1.0 / 0.8f64).ln()).ceil() as usize;
        assert_eq!(rounds, expected);
        assert!(out.achieved_r_sum <= lambda);
        assert_eq!(out.pushes, 4 * rounds as u64);
    }

    #[test]
    fn lambda_one_returns_immediately() {
        let g = Graph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        let out = power_iteration(&g, 0, 0.2, 1.0).unwrap();
        assert_eq!(out.estimates, vec![0.0, 0.0]);
        assert_eq!(out.achieved_r_sum, 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Graph::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(power_iteration(&g, 0, 0.0, 1e-3).is_err());
        assert!(power_iteration(&g, 0, 0.2, 0.0).is_err());
        assert!(power_iteration(&g, 2, 0.2, 1e-3).is_err());
    }
}
