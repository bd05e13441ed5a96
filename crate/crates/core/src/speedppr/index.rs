use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::config::check_alpha;
use crate::error::{PprError, Result};
use crate::graph::{ByteCursor, Graph, NodeId};
use crate::rng::{WalkRng, RNG_ALGORITHM_ID};
use crate::speedppr::random_walk;

const INDEX_MAGIC: &[u8; 4] = b"PPRW";
const INDEX_VERSION: u8 = 1;
/// Stream reserved for index construction, disjoint from per-source query
/// streams.
const INDEX_STREAM: u64 = u64::MAX;

/// `d_v` precomputed walk endpoints for every node `v` that is not a
/// dead-end. A stored walk treats its origin as the source: reaching a
/// dead-end jumps back to the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkIndex {
    alpha: f64,
    seed: u64,
    rng_id: u8,
    n: usize,
    m: u64,
    offsets: Vec<u64>,
    endpoints: Vec<NodeId>,
}

/// Simulates `d_v` walks from each non-dead-end node, nodes in id order,
/// from a single generator seeded with `seed`.
pub fn build_index(g: &Graph, alpha: f64, seed: u64) -> Result<WalkIndex> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Err(crate::error::invalid("alpha", "walks never stop with alpha = 0"));
    }
    let n = g.n();
    let mut rng = WalkRng::with_stream(seed, INDEX_STREAM);
    let mut offsets = Vec::with_capacity(n + 1);
    let mut endpoints = Vec::with_capacity(g.m() as usize);
    offsets.push(0);
    for v in 0..n as NodeId {
        for _ in 0..g.out_degree(v) {
            endpoints.push(random_walk(g, v, v, alpha, &mut rng));
        }
        offsets.push(endpoints.len() as u64);
    }
    Ok(WalkIndex {
        alpha,
        seed,
        rng_id: RNG_ALGORITHM_ID,
        n,
        m: g.m(),
        offsets,
        endpoints,
    })
}

impl WalkIndex {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng_id(&self) -> u8 {
        self.rng_id
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.endpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.endpoints.is_empty()
    }

    /// Stored walk endpoints of `v`, in generation order.
    pub fn endpoints(&self, v: NodeId) -> &[NodeId] {
        let lo = self.offsets[v as usize] as usize;
        let hi = self.offsets[v as usize + 1] as usize;
        &self.endpoints[lo..hi]
    }

    /// Checks that the index was built for a graph of this shape: same
    /// `n` and `m`, and a slice of exactly `d_v` endpoints per node.
    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.n != g.n() || self.m != g.m() {
            return Err(PprError::IndexMismatch(format!(
                "index has n={} m={}, graph has n={} m={}",
                self.n,
                self.m,
                g.n(),
                g.m()
            )));
        }
        for v in 0..self.n {
            let len = self.offsets[v + 1] - self.offsets[v];
            if len != g.out_degree(v as NodeId) as u64 {
                return Err(PprError::IndexMismatch(format!(
                    "node {v} has {len} stored walks but out-degree {}",
                    g.out_degree(v as NodeId)
                )));
            }
        }
        Ok(())
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(INDEX_MAGIC)?;
        w.write_all(&[INDEX_VERSION, self.rng_id])?;
        w.write_all(&self.alpha.to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        w.write_all(&self.m.to_le_bytes())?;
        for &o in &self.offsets {
            w.write_all(&o.to_le_bytes())?;
        }
        for &e in &self.endpoints {
            w.write_all(&e.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    /// Parses an index file and checks it against `g`.
    pub fn from_bytes(bytes: &[u8], g: &Graph) -> Result<Self> {
        let mut cur = ByteCursor::new(bytes, "walk index");
        if cur.take(4)? != INDEX_MAGIC {
            return Err(cur.fail("bad magic"));
        }
        let version = cur.u8()?;
        if version != INDEX_VERSION {
            return Err(cur.fail(format!("unsupported version {version}")));
        }
        let rng_id = cur.u8()?;
        if rng_id != RNG_ALGORITHM_ID {
            return Err(cur.fail(format!("unknown generator id {rng_id}")));
        }
        let alpha = cur.f64()?;
        let seed = cur.u64()?;
        let n = cur.u64()?;
        let m = cur.u64()?;
        if n != g.n() as u64 || m != g.m() {
            return Err(PprError::IndexMismatch(format!(
                "index has n={n} m={m}, graph has n={} m={}",
                g.n(),
                g.m()
            )));
        }
        let n = n as usize;
        let offsets: Vec<u64> = (0..=n).map(|_| cur.u64()).collect::<Result<_>>()?;
        if offsets[0] != 0 || offsets.windows(2).any(|w| w[0] > w[1]) || offsets[n] > m {
            return Err(cur.fail("inconsistent offsets"));
        }
        let count = offsets[n] as usize;
        if cur.remaining() != count * 4 {
            return Err(cur.fail(format!(
                "expected {} endpoint bytes, found {}",
                count * 4,
                cur.remaining()
            )));
        }
        let endpoints: Vec<NodeId> = (0..count).map(|_| cur.u32()).collect::<Result<_>>()?;
        if endpoints.iter().any(|&e| e as usize >= n) {
            return Err(cur.fail("endpoint out of range"));
        }
        let index = Self {
            alpha,
            seed,
            rng_id,
            n,
            m,
            offsets,
            endpoints,
        };
        index.check_graph(g)?;
        Ok(index)
    }

    pub fn read_from<R: Read>(mut r: R, g: &Graph) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes, g)
    }

    pub fn load(path: impl AsRef<Path>, g: &Graph) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?), g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_node() -> Graph {
        let edges = [
            (0, 1), (0, 2),
            (1, 0), (1, 2), (1, 3), (1, 4),
            (2, 1), (2, 3),
            (3, 0), (3, 1), (3, 2),
            (4, 1), (4, 2),
        ];
        Graph::from_edges(5, &edges).unwrap()
    }

    fn bytes(idx: &WalkIndex) -> Vec<u8> {
        let mut buf = Vec::new();
        idx.write_to(&mut buf).unwrap();
        buf
    }

    #[test]
    fn slices_follow_degrees() {
        let g = five_node();
        let idx = build_index(&g, 0.2, 42).unwrap();
        assert_eq!(idx.len(), 13);
        let lens: Vec<usize> = (0..5).map(|v| idx.endpoints(v).len()).collect();
        assert_eq!(lens, vec![2, 4, 2, 3, 2]);
    }

    #[test]
    fn dead_ends_store_nothing() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 0)]).unwrap();
        let idx = build_index(&g, 0.2, 1).unwrap();
        assert_eq!(idx.endpoints(2).len(), 0);
        assert!(idx.len() as u64 <= g.m());
        // a walk from 0 reaching dead-end 2 restarts at 0, so 2 is only an
        // endpoint if the walk stops there
        assert!(idx.endpoints(0).iter().chain(idx.endpoints(1)).all(|&e| e < 3));
    }

    #[test]
    fn same_seed_same_bytes() {
        let g = five_node();
        let a = bytes(&build_index(&g, 0.2, 42).unwrap());
        let b = bytes(&build_index(&g, 0.2, 42).unwrap());
        let c = bytes(&build_index(&g, 0.2, 43).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn header_layout() {
        let g = five_node();
        let idx = build_index(&g, 0.2, 42).unwrap();
        let buf = bytes(&idx);
        assert_eq!(&buf[..4], b"PPRW");
        assert_eq!(buf[4], 1);
        assert_eq!(buf[5], RNG_ALGORITHM_ID);
        assert_eq!(f64::from_le_bytes(buf[6..14].try_into().unwrap()), 0.2);
        assert_eq!(u64::from_le_bytes(buf[14..22].try_into().unwrap()), 42);
        assert_eq!(buf.len(), 4 + 2 + 8 + 8 + 8 + 8 + 6 * 8 + 13 * 4);
    }

    #[test]
    fn round_trip_and_validation() {
        let g = five_node();
        let idx = build_index(&g, 0.2, 42).unwrap();
        let buf = bytes(&idx);
        let back = WalkIndex::from_bytes(&buf, &g).unwrap();
        assert_eq!(back, idx);
        assert_eq!(bytes(&back), buf);

        for cut in [0, 5, 30, buf.len() - 1] {
            assert!(WalkIndex::from_bytes(&buf[..cut], &g).is_err());
        }
        let mut bad = buf.clone();
        bad[4] = 9;
        assert!(WalkIndex::from_bytes(&bad, &g).is_err());

        let other = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(matches!(
            WalkIndex::from_bytes(&buf, &other),
            Err(PprError::IndexMismatch(_))
        ));
    }
}
