#![allow(dead_code)]

use ppr_core::rng::WalkRng;
use ppr_core::{Graph, NodeId};

/// Five-node test graph with nodes v1..v5 as ids 0..4.
pub fn five_node() -> Graph {
    let edges = [
        (0, 1), (0, 2),
        (1, 0), (1, 2), (1, 3), (1, 4),
        (2, 1), (2, 3),
        (3, 0), (3, 1), (3, 2),
        (4, 1), (4, 2),
    ];
    Graph::from_edges(5, &edges).unwrap()
}

/// Random digraph where every node gets between 1 and `max_deg` distinct
/// out-neighbors (self-loops allowed). `dead_end_share` of the nodes get
/// no out-edges at all.
pub fn random_digraph(n: usize, max_deg: u32, dead_end_share: f64, seed: u64) -> Graph {
    let mut rng = WalkRng::new(seed);
    let mut edges = Vec::new();
    let mut picked = Vec::new();
    for v in 0..n as NodeId {
        if rng.chance(dead_end_share) {
            continue;
        }
        let d = 1 + rng.below(max_deg.min(n as u32));
        picked.clear();
        while picked.len() < d as usize {
            let u = rng.below(n as u32);
            if !picked.contains(&u) {
                picked.push(u);
            }
        }
        edges.extend(picked.iter().map(|&u| (v, u)));
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Like [`random_digraph`] without dead-ends.
pub fn random_strong_digraph(n: usize, max_deg: u32, seed: u64) -> Graph {
    random_digraph(n, max_deg, 0.0, seed)
}

pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
