//! Single-source personalized PageRank: push engines, a dense oracle, and
//! SpeedPPR (PowerPush followed by a walk phase).

pub mod bench;
pub mod config;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod oracle;
pub mod push;
pub mod query;
pub mod rng;
pub mod speedppr;

pub use config::{default_lambda, Algorithm, QueryConfig, DEFAULT_ALPHA, DEFAULT_EPOCH_NUM};
pub use error::{PprError, Result};
pub use graph::{Graph, NodeId};
pub use oracle::{exact_ppr, DensePPR};
pub use query::{run_query, run_query_observed};
pub use push::{PPRVector, PowerPushTuning, PushObserver, PushState};
pub use speedppr::{build_index, compute_walk_budget, speedppr_query, WalkBudget, WalkIndex};
