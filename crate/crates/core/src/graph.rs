//! Immutable CSR out-adjacency graph, SNAP edge-list ingestion and the binary
//! cleaned-graph cache.
//!
//! Adjacency lists are concatenated in ascending node-id order so that a
//! sequential scan over nodes is also a sequential scan over the edge array.
//!
//! Dead-ends (out-degree 0) are kept. Every solver reaches neighbors through
//! [`Graph::effective_out`], which wires a dead-end back to the query source.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{PprError, Result};

/// Node identifier. 32 bits is enough for every SNAP graph of interest.
pub type NodeId = u32;

const CACHE_MAGIC: &[u8; 4] = b"PPRG";
const CACHE_VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: u64,
    out_offsets: Vec<u64>,
    out_neighbors: Vec<NodeId>,
    out_degree: Vec<u32>,
    dead_ends: Vec<NodeId>,
}

impl Graph {
    /// Builds a graph over nodes `0..n` from directed edges, without any
    /// cleaning. Each node's neighbor list keeps the order in which its edges
    /// appear; duplicates and self-loops are kept.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        if n == 0 {
            return Err(PprError::EmptyGraph);
        }
        if n > NodeId::MAX as usize {
            return Err(PprError::NodeOutOfRange {
                node: n as u64,
                n: NodeId::MAX as usize,
            });
        }
        let mut out_degree = vec![0u32; n];
        for &(src, dst) in edges {
            for node in [src, dst] {
                if node as usize >= n {
                    return Err(PprError::NodeOutOfRange {
                        node: node as u64,
                        n,
                    });
                }
            }
            out_degree[src as usize] += 1;
        }
        let mut out_offsets = Vec::with_capacity(n + 1);
        out_offsets.push(0u64);
        let mut acc = 0u64;
        for &d in &out_degree {
            acc += d as u64;
            out_offsets.push(acc);
        }
        // Counting sort by source keeps the input order within each list.
        let mut cursor: Vec<u64> = out_offsets[..n].to_vec();
        let mut out_neighbors = vec![0 as NodeId; edges.len()];
        for &(src, dst) in edges {
            let slot = &mut cursor[src as usize];
            out_neighbors[*slot as usize] = dst;
            *slot += 1;
        }
        let dead_ends = (0..n as NodeId)
            .filter(|&v| out_degree[v as usize] == 0)
            .collect();
        let graph = Self {
            n,
            m: edges.len() as u64,
            out_offsets,
            out_neighbors,
            out_degree,
            dead_ends,
        };
        graph.check_invariants()?;
        Ok(graph)
    }

    /// Builds a graph from edges over arbitrary original ids. Ids that appear
    /// in no edge do not exist in the result; the surviving ids are relabeled
    /// to `0..n` preserving their relative order.
    pub fn from_original_edges(edges: &[(u64, u64)]) -> Result<Self> {
        let mut ids: Vec<u64> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.is_empty() {
            return Err(PprError::EmptyGraph);
        }
        if ids.len() > NodeId::MAX as usize {
            return Err(PprError::NodeOutOfRange {
                node: ids.len() as u64,
                n: NodeId::MAX as usize,
            });
        }
        let relabel = |id: u64| ids.binary_search(&id).expect("id collected above") as NodeId;
        let relabeled: Vec<(NodeId, NodeId)> = edges
            .iter()
            .map(|&(a, b)| (relabel(a), relabel(b)))
            .collect();
        Self::from_edges(ids.len(), &relabeled)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn out_offsets(&self) -> &[u64] {
        &self.out_offsets
    }

    pub fn out_neighbors(&self) -> &[NodeId] {
        &self.out_neighbors
    }

    pub fn dead_ends(&self) -> &[NodeId] {
        &self.dead_ends
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> u32 {
        self.out_degree[v as usize]
    }

    #[inline]
    pub fn is_dead_end(&self, v: NodeId) -> bool {
        self.out_degree[v as usize] == 0
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let lo = self.out_offsets[v as usize] as usize;
        let hi = self.out_offsets[v as usize + 1] as usize;
        &self.out_neighbors[lo..hi]
    }

    /// Out-neighbors of `v` under the dead-end convention of a query from
    /// `source`: a dead-end has the single conceptual edge `v -> source`.
    /// Never empty.
    #[inline]
    pub fn effective_out<'a>(&'a self, v: NodeId, source: &'a NodeId) -> &'a [NodeId] {
        if self.out_degree[v as usize] == 0 {
            std::slice::from_ref(source)
        } else {
            self.neighbors(v)
        }
    }

    /// Degree used by activity tests and push accounting: `d_v`, or 1 for a
    /// dead-end.
    #[inline]
    pub fn effective_degree(&self, v: NodeId) -> u32 {
        self.out_degree[v as usize].max(1)
    }

    /// Sum of effective degrees, `m + |dead_ends|`. Equals `m` on graphs
    /// without dead-ends.
    pub fn effective_edge_count(&self) -> u64 {
        self.m + self.dead_ends.len() as u64
    }

    pub fn check_node(&self, v: u64) -> Result<NodeId> {
        if v < self.n as u64 {
            Ok(v as NodeId)
        } else {
            Err(PprError::NodeOutOfRange { node: v, n: self.n })
        }
    }

    fn check_invariants(&self) -> Result<()> {
        let bad = |reason: &str| PprError::Format {
            kind: "graph",
            reason: reason.to_string(),
        };
        if self.out_offsets.len() != self.n + 1 || self.out_offsets[0] != 0 {
            return Err(bad("offset array has wrong shape"));
        }
        if self.out_offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(bad("offsets are not non-decreasing"));
        }
        if self.out_offsets[self.n] != self.m || self.out_neighbors.len() as u64 != self.m {
            return Err(bad("offsets do not end at m"));
        }
        if self.out_neighbors.iter().any(|&u| u as usize >= self.n) {
            return Err(bad("neighbor id out of range"));
        }
        let degree_sum: u64 = self.out_degree.iter().map(|&d| d as u64).sum();
        if degree_sum != self.m {
            return Err(bad("degree sum differs from m"));
        }
        Ok(())
    }

    /// Writes the binary cache: `PPRG`, version, n, m, offsets, neighbors,
    /// all little-endian.
    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&[CACHE_VERSION])?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        w.write_all(&self.m.to_le_bytes())?;
        for &o in &self.out_offsets {
            w.write_all(&o.to_le_bytes())?;
        }
        for &u in &self.out_neighbors {
            w.write_all(&u.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_cache(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_cache(BufWriter::new(File::create(path)?))
    }

    pub fn read_cache<R: Read>(mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        Self::from_cache_bytes(&bytes)
    }

    pub fn load_cache(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_cache(BufReader::new(File::open(path)?))
    }

    pub fn from_cache_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cur = ByteCursor::new(bytes, "graph cache");
        if cur.take(4)? != CACHE_MAGIC {
            return Err(cur.fail("bad magic"));
        }
        let version = cur.u8()?;
        if version != CACHE_VERSION {
            return Err(cur.fail(format!("unsupported version {version}")));
        }
        let n = cur.u64()?;
        let m = cur.u64()?;
        let expected = (n as u128 + 1) * 8 + m as u128 * 4;
        if expected != cur.remaining() as u128 {
            return Err(cur.fail(format!(
                "expected {expected} payload bytes, found {}",
                cur.remaining()
            )));
        }
        let n = n as usize;
        let out_offsets: Vec<u64> = (0..=n).map(|_| cur.u64()).collect::<Result<_>>()?;
        let out_neighbors: Vec<NodeId> = (0..m).map(|_| cur.u32()).collect::<Result<_>>()?;
        if n == 0 {
            return Err(PprError::EmptyGraph);
        }
        if out_offsets.windows(2).any(|w| w[0] > w[1]) || out_offsets[n] != m {
            return Err(cur.fail("inconsistent offsets"));
        }
        let out_degree: Vec<u32> = out_offsets
            .windows(2)
            .map(|w| (w[1] - w[0]) as u32)
            .collect();
        let dead_ends = (0..n as NodeId)
            .filter(|&v| out_degree[v as usize] == 0)
            .collect();
        let graph = Self {
            n,
            m,
            out_offsets,
            out_neighbors,
            out_degree,
            dead_ends,
        };
        graph.check_invariants()?;
        Ok(graph)
    }
}

/// Reads a whitespace-separated `src dst` edge list. Lines starting with `#`
/// and blank lines are skipped. With `undirected`, each pair yields both
/// directions. Isolated ids are dropped and the rest relabeled from 0.
pub fn parse_edge_list<R: BufRead>(reader: R, undirected: bool) -> Result<Graph> {
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut next_id = |what: &str| -> Result<u64> {
            let tok = fields.next().ok_or_else(|| PprError::Parse {
                line: line_no,
                message: format!("missing {what} node id"),
            })?;
            tok.parse::<u64>().map_err(|_| PprError::Parse {
                line: line_no,
                message: format!("invalid {what} node id `{tok}`"),
            })
        };
        let src = next_id("source")?;
        let dst = next_id("target")?;
        if let Some(extra) = fields.next() {
            return Err(PprError::Parse {
                line: line_no,
                message: format!("unexpected trailing field `{extra}`"),
            });
        }
        edges.push((src, dst));
        if undirected {
            edges.push((dst, src));
        }
    }
    Graph::from_original_edges(&edges)
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(BufReader::new(File::open(path)?), false)
}

/// Loads an undirected edge list, replacing every pair by two directed edges.
pub fn undirected_to_directed(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(BufReader::new(File::open(path)?), true)
}

/// Loads either a binary cache (detected by its magic bytes) or a text edge
/// list.
pub fn load_graph(path: impl AsRef<Path>, undirected: bool) -> Result<Graph> {
    let path = path.as_ref();
    let mut head = [0u8; 4];
    let is_cache = {
        let mut f = File::open(path)?;
        matches!(f.read(&mut head), Ok(4)) && &head == CACHE_MAGIC
    };
    if is_cache {
        Graph::load_cache(path)
    } else {
        parse_edge_list(BufReader::new(File::open(path)?), undirected)
    }
}

/// Bounds-checked little-endian reader used by the binary formats.
pub(crate) struct ByteCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    kind: &'static str,
}

impl<'a> ByteCursor<'a> {
    pub(crate) fn new(bytes: &'a [u8], kind: &'static str) -> Self {
        Self {
            bytes,
            pos: 0,
            kind,
        }
    }

    pub(crate) fn fail(&self, reason: impl Into<String>) -> PprError {
        PprError::Format {
            kind: self.kind,
            reason: reason.into(),
        }
    }

    pub(crate) fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    pub(crate) fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.remaining() < len {
            return Err(self.fail(format!("truncated at byte {}", self.pos)));
        }
        let out = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(out)
    }

    pub(crate) fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub(crate) fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}
