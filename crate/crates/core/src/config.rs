use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, PprError, Result};
use crate::graph::Graph;

pub const DEFAULT_ALPHA: f64 = 0.2;
pub const DEFAULT_EPOCH_NUM: u32 = 8;

/// `min(1/m, 1e-8)`.
pub fn default_lambda(m: u64) -> f64 {
    (1.0 / m as f64).min(1e-8)
}

/// The solver to run for a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    PowerIteration,
    FifoForwardPush,
    SimForwardPush,
    PowerPush,
    SpeedPpr,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::PowerIteration,
        Algorithm::FifoForwardPush,
        Algorithm::SimForwardPush,
        Algorithm::PowerPush,
        Algorithm::SpeedPpr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::PowerIteration => "powitr",
            Algorithm::FifoForwardPush => "fwdpush-fifo",
            Algorithm::SimForwardPush => "simfwdpush",
            Algorithm::PowerPush => "powerpush",
            Algorithm::SpeedPpr => "speedppr",
        }
    }

    pub fn is_high_precision(self) -> bool {
        self != Algorithm::SpeedPpr
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = PprError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| PprError::UnknownAlgorithm(s.to_string()))
    }
}

/// Parameters of a single-source query.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryConfig {
    /// Stop probability of the random walk.
    pub alpha: f64,
    /// l1-error threshold for high-precision queries.
    pub lambda: f64,
    /// Relative-error threshold; required by approximate queries only.
    pub epsilon: Option<f64>,
    /// PPR values at or above `mu` get the relative-error guarantee.
    pub mu: f64,
    pub seed: u64,
    pub epoch_num: u32,
    /// PowerPush switches from the queue to sequential scans once the queue
    /// holds more than this many nodes.
    pub scan_threshold: usize,
}

impl QueryConfig {
    /// Defaults derived from the graph: `lambda = min(1/m, 1e-8)`,
    /// `mu = 1/n`, `scan_threshold = n/4`.
    pub fn for_graph(g: &Graph) -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            lambda: default_lambda(g.m().max(1)),
            epsilon: None,
            mu: 1.0 / g.n() as f64,
            seed: 0,
            epoch_num: DEFAULT_EPOCH_NUM,
            scan_threshold: g.n() / 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        check_lambda(self.lambda)?;
        if let Some(eps) = self.epsilon {
            check_epsilon(eps)?;
        }
        check_mu(self.mu)?;
        if self.epoch_num == 0 {
            return Err(invalid("epoch_num", "must be positive"));
        }
        Ok(())
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(invalid("alpha", format!("{alpha} not in [0, 1)")))
    }
}

/// Solvers terminated by an error threshold need a positive stop probability.
pub(crate) fn check_convergent_alpha(alpha: f64) -> Result<()> {
    check_alpha(alpha)?;
    if alpha > 0.0 {
        Ok(())
    } else {
        Err(invalid("alpha", "must be positive for the solver to terminate"))
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(invalid("lambda", format!("{lambda} not in (0, 1]")))
    }
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(invalid("epsilon", format!("{eps} must be positive")))
    }
}

pub(crate) fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu <= 1.0 {
        Ok(())
    } else {
        Err(invalid("mu", format!("{mu} not in (0, 1]")))
    }
}
