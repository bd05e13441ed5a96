//! One entry point for every algorithm.

use crate::config::{Algorithm, QueryConfig};
use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::push::{
    fifo_forward_push_observed, power_iteration_observed, power_push_observed,
    sim_forward_push_observed, PPRVector, PowerPushTuning, PushObserver,
};
use crate::speedppr::{speedppr_query, WalkIndex};

/// Runs `algorithm` from `s`. High-precision engines stop at residue sum
/// `cfg.lambda`; FIFO forward push uses `r_max = lambda / m` and runs until
/// no node is active. `index` is only read by SpeedPPR.
pub fn run_query(
    g: &Graph,
    s: NodeId,
    algorithm: Algorithm,
    cfg: &QueryConfig,
    index: Option<&WalkIndex>,
) -> Result<PPRVector> {
    run_query_observed(g, s, algorithm, cfg, index, &mut ())
}

/// [`run_query`] reporting pushes to `observer`. SpeedPPR is not observed.
pub fn run_query_observed(
    g: &Graph,
    s: NodeId,
    algorithm: Algorithm,
    cfg: &QueryConfig,
    index: Option<&WalkIndex>,
    observer: &mut impl PushObserver,
) -> Result<PPRVector> {
    cfg.validate()?;
    let (alpha, lambda) = (cfg.alpha, cfg.lambda);
    match algorithm {
        Algorithm::PowerIteration => power_iteration_observed(g, s, alpha, lambda, observer),
        Algorithm::SimForwardPush => sim_forward_push_observed(g, s, alpha, lambda, observer),
        Algorithm::FifoForwardPush => {
            let r_max = lambda / g.effective_edge_count() as f64;
            fifo_forward_push_observed(g, s, alpha, r_max, None, observer)
        }
        Algorithm::PowerPush => {
            power_push_observed(g, s, alpha, lambda, PowerPushTuning::from(cfg), observer)
        }
        Algorithm::SpeedPpr => speedppr_query(g, s, cfg, index),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact_ppr;

    #[test]
    fn every_algorithm_answers() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 3)]).unwrap();
        let mut cfg = QueryConfig::for_graph(&g);
        cfg.lambda = 1e-6;
        cfg.epsilon = Some(0.5);
        let exact = exact_ppr(&g, 0, cfg.alpha).unwrap();
        for algo in Algorithm::ALL {
            let v = run_query(&g, 0, algo, &cfg, None).unwrap();
            let l1: f64 = v.estimates.iter().zip(&exact.pi).map(|(a, b)| (a - b).abs()).sum();
            if algo.is_high_precision() {
                assert!(l1 <= 1e-6, "{algo}: {l1}");
            } else {
                assert!((v.estimate_sum() - 1.0).abs() < 1e-9);
            }
        }
    }
}
