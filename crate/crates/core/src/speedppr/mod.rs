//! Approximate SSPPR with a relative-error guarantee.
//!
//! SpeedPPR runs PowerPush to `lambda = m / W`, refines until no node is
//! active for `r_max = 1 / W`, then spends `ceil(r(s,v) * W)` random walks on
//! every node with residue. Refinement bounds that count by `d_v`, so the
//! walks can come from a [`WalkIndex`] holding `d_v` precomputed walks per
//! node, independent of epsilon.

mod index;

pub use index::{build_index, WalkIndex};

use crate::config::{check_convergent_alpha, check_epsilon, check_mu, QueryConfig};
use crate::error::{invalid, PprError, Result};
use crate::graph::{Graph, NodeId};
use crate::push::{refine, run_power_push, PPRVector, PowerPushTuning, PushState};
use crate::rng::WalkRng;

/// Total number of walks for a Monte Carlo estimate that is within relative
/// error `epsilon` for every `pi >= mu` with probability `1 - 1/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct WalkBudget(u64);

impl WalkBudget {
    pub fn walks(self) -> u64 {
        self.0
    }
}

/// `ceil(2 (2 eps / 3 + 2) ln n / (eps^2 mu))`.
pub fn compute_walk_budget(n: usize, epsilon: f64, mu: f64) -> Result<WalkBudget> {
    check_epsilon(epsilon)?;
    check_mu(mu)?;
    if n < 2 {
        return Err(invalid("n", "walk budget needs at least two nodes"));
    }
    let w = 2.0 * (2.0 * epsilon / 3.0 + 2.0) * (n as f64).ln() / (epsilon * epsilon * mu);
    let w = w.ceil();
    if w >= u64::MAX as f64 {
        return Err(invalid("epsilon", "walk budget overflows u64"));
    }
    Ok(WalkBudget(w as u64))
}

/// One alpha-random walk from `start`; dead-ends jump to `source`. Returns
/// the node where the walk stops.
#[inline]
pub fn random_walk(g: &Graph, start: NodeId, source: NodeId, alpha: f64, rng: &mut WalkRng) -> NodeId {
    let mut cur = start;
    loop {
        if rng.chance(alpha) {
            return cur;
        }
        let nbrs = g.effective_out(cur, &source);
        cur = if nbrs.len() == 1 {
            nbrs[0]
        } else {
            nbrs[rng.below(nbrs.len() as u32) as usize]
        };
    }
}

/// Supplies walk endpoints to the Monte Carlo phase.
pub trait WalkSource {
    /// Terminal node of the `ordinal`-th walk from `start` in a query from
    /// `source`. Ordinals for one start count up from 0.
    fn terminal(&mut self, g: &Graph, start: NodeId, source: NodeId, alpha: f64, ordinal: usize) -> NodeId;
}

/// Walks simulated on demand.
#[derive(Debug, Clone)]
pub struct FreshWalks {
    rng: WalkRng,
}

impl FreshWalks {
    pub fn new(rng: WalkRng) -> Self {
        Self { rng }
    }
}

impl WalkSource for FreshWalks {
    fn terminal(&mut self, g: &Graph, start: NodeId, source: NodeId, alpha: f64, _ordinal: usize) -> NodeId {
        random_walk(g, start, source, alpha, &mut self.rng)
    }
}

/// Walks read from an index in stored order. Dead-end starts have no stored
/// walks (their walks depend on the source) and are simulated.
#[derive(Debug, Clone)]
pub struct IndexedWalks<'a> {
    index: &'a WalkIndex,
    fallback: WalkRng,
}

impl<'a> IndexedWalks<'a> {
    pub fn new(index: &'a WalkIndex, g: &Graph, alpha: f64, fallback: WalkRng) -> Result<Self> {
        index.check_graph(g)?;
        if index.alpha() != alpha {
            return Err(PprError::IndexMismatch(format!(
                "index built for alpha {} but query uses alpha {}",
                index.alpha(),
                alpha
            )));
        }
        Ok(Self { index, fallback })
    }
}

impl WalkSource for IndexedWalks<'_> {
    fn terminal(&mut self, g: &Graph, start: NodeId, source: NodeId, alpha: f64, ordinal: usize) -> NodeId {
        if g.is_dead_end(start) {
            random_walk(g, start, source, alpha, &mut self.fallback)
        } else {
            self.index.endpoints(start)[ordinal]
        }
    }
}

/// Reassigns every residue by random walks: `ceil(r(s,v) * W)` walks from
/// each `v` with residue, each adding `r(s,v) / W_v` to its terminal.
///
/// Requires `r(s,v) <= d_v / W` for all `v` (no node active for
/// `r_max = 1 / W`), so at most `d_v` walks start at `v`.
pub fn monte_carlo_phase(
    g: &Graph,
    state: &PushState,
    budget: WalkBudget,
    walks: &mut impl WalkSource,
) -> Result<PPRVector> {
    let w = budget.walks() as f64;
    let s = state.source();
    let alpha = state.alpha();
    let mut estimates = state.reserve().to_vec();
    let mut total_walks = 0u64;
    for (v, &r) in state.residue().iter().enumerate() {
        if r <= 0.0 {
            continue;
        }
        let v = v as NodeId;
        let degree = g.effective_degree(v) as u64;
        let scaled = r * w;
        let mut count = scaled.ceil() as u64;
        // r <= d / W can round to just above d after the multiplication.
        if count > degree && scaled <= degree as f64 * (1.0 + 1e-12) {
            count = degree;
        }
        if count > degree {
            return Err(invalid(
                "residue",
                format!("node {v} needs {count} walks but has degree {degree}; refine first"),
            ));
        }
        let share = r / count as f64;
        for ordinal in 0..count as usize {
            let u = walks.terminal(g, v, s, alpha, ordinal);
            estimates[u as usize] += share;
        }
        total_walks += count;
    }
    Ok(PPRVector {
        estimates,
        residues: vec![0.0; g.n()],
        source: s,
        alpha,
        achieved_r_sum: 0.0,
        pushes: state.edge_pushes(),
        walks: total_walks,
    })
}

/// Approximate SSPPR query. Uses `cfg.alpha`, `cfg.epsilon` (required),
/// `cfg.mu`, `cfg.seed` and the PowerPush tuning; `cfg.lambda` is ignored.
///
/// Walks are drawn from stream `s` of `cfg.seed`, so each source gets its
/// own reproducible sequence. When the budget does not exceed the edge
/// count, the query is answered by `W` plain walks from `s`.
pub fn speedppr_query(
    g: &Graph,
    s: NodeId,
    cfg: &QueryConfig,
    index: Option<&WalkIndex>,
) -> Result<PPRVector> {
    cfg.validate()?;
    check_convergent_alpha(cfg.alpha)?;
    g.check_node(s as u64)?;
    let epsilon = cfg
        .epsilon
        .ok_or_else(|| invalid("epsilon", "required for approximate queries"))?;
    let alpha = cfg.alpha;
    let rng = WalkRng::with_stream(cfg.seed, s as u64);

    if g.n() == 1 {
        return Ok(PPRVector {
            estimates: vec![1.0],
            residues: vec![0.0],
            source: s,
            alpha,
            achieved_r_sum: 0.0,
            pushes: 0,
            walks: 0,
        });
    }

    let budget = compute_walk_budget(g.n(), epsilon, cfg.mu)?;
    let m = g.effective_edge_count();

    if budget.walks() <= m {
        if let Some(idx) = index {
            IndexedWalks::new(idx, g, alpha, rng.clone())?;
        }
        return Ok(pure_monte_carlo(g, s, alpha, budget, rng));
    }

    let w = budget.walks() as f64;
    let lambda = m as f64 / w;
    let mut state = run_power_push(g, s, alpha, lambda, PowerPushTuning::from(cfg), &mut ())?;
    refine(g, 1.0 / w, &mut state)?;
    match index {
        Some(idx) => monte_carlo_phase(g, &state, budget, &mut IndexedWalks::new(idx, g, alpha, rng)?),
        None => monte_carlo_phase(g, &state, budget, &mut FreshWalks::new(rng)),
    }
}

fn pure_monte_carlo(g: &Graph, s: NodeId, alpha: f64, budget: WalkBudget, mut rng: WalkRng) -> PPRVector {
    let share = 1.0 / budget.walks() as f64;
    let mut estimates = vec![0.0; g.n()];
    for _ in 0..budget.walks() {
        let u = random_walk(g, s, s, alpha, &mut rng);
        estimates[u as usize] += share;
    }
    PPRVector {
        estimates,
        residues: vec![0.0; g.n()],
        source: s,
        alpha,
        achieved_r_sum: 0.0,
        pushes: 0,
        walks: budget.walks(),
    }
}
