//! Error measures against a reference vector, and ground truth generation.

use crate::error::{PprError, Result};
use crate::graph::{Graph, NodeId};
use crate::oracle::{exact_ppr, ORACLE_NODE_LIMIT};
use crate::push::{power_push, PPRVector, PowerPushTuning};

/// Threshold used for ground truth: as tight as double precision allows.
pub const GROUND_TRUTH_LAMBDA: f64 = 1e-17;
/// Allowed l1 gap between ground truth and the dense oracle.
pub const GROUND_TRUTH_ORACLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub l1_error: f64,
    /// Largest `|est - truth| / truth` over nodes with `truth >= mu`.
    pub max_rel_error_above_mu: f64,
    pub num_nodes_above_mu: usize,
    /// Nodes with `truth >= mu` and relative error above `epsilon`.
    pub violated_nodes: usize,
}

pub fn l1_distance(est: &[f64], truth: &[f64]) -> Result<f64> {
    if est.len() != truth.len() {
        return Err(PprError::ShapeMismatch {
            left: est.len(),
            right: truth.len(),
        });
    }
    Ok(est.iter().zip(truth).map(|(a, b)| (a - b).abs()).sum())
}

/// `sum_v |est[v] - truth[v]|` for two answers to the same query.
pub fn l1_error(est: &PPRVector, truth: &PPRVector) -> Result<f64> {
    if est.source != truth.source {
        return Err(crate::error::invalid(
            "truth",
            format!("source {} differs from {}", truth.source, est.source),
        ));
    }
    l1_distance(&est.estimates, &truth.estimates)
}

pub fn error_report(est: &[f64], truth: &[f64], mu: f64, epsilon: f64) -> Result<ErrorReport> {
    let l1_error = l1_distance(est, truth)?;
    let mut report = ErrorReport {
        l1_error,
        max_rel_error_above_mu: 0.0,
        num_nodes_above_mu: 0,
        violated_nodes: 0,
    };
    for (&e, &t) in est.iter().zip(truth) {
        if t >= mu && t > 0.0 {
            let rel = (e - t).abs() / t;
            report.num_nodes_above_mu += 1;
            report.max_rel_error_above_mu = report.max_rel_error_above_mu.max(rel);
            if rel > epsilon {
                report.violated_nodes += 1;
            }
        }
    }
    Ok(report)
}

/// PowerPush at `lambda = 1e-17` with default tuning. On graphs small
/// enough for the dense oracle the result is checked against it.
pub fn ground_truth(g: &Graph, s: NodeId, alpha: f64) -> Result<PPRVector> {
    let truth = power_push(g, s, alpha, GROUND_TRUTH_LAMBDA, PowerPushTuning::for_graph(g))?;
    if g.n() <= ORACLE_NODE_LIMIT {
        let exact = exact_ppr(g, s, alpha)?;
        let gap = l1_distance(&truth.estimates, &exact.pi)?;
        if gap > GROUND_TRUTH_ORACLE_TOLERANCE {
            return Err(PprError::OracleMismatch { gap });
        }
    }
    Ok(truth)
}
