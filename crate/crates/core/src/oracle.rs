//! Exact PPR on tiny graphs by dense Gaussian elimination.
//!
//! Solves `pi (I - (1 - alpha) P) = alpha e_s` directly, with dead-end rows of
//! `P` set to the indicator of the source. Shares no code with the push
//! engines, which is what makes it usable as their oracle.

use std::io::{BufRead, Write};

use crate::config::check_alpha;
use crate::error::{invalid, PprError, Result};
use crate::graph::{Graph, NodeId};

/// Largest graph the dense solver accepts.
pub const ORACLE_NODE_LIMIT: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct DensePPR {
    pub source: NodeId,
    pub alpha: f64,
    pub pi: Vec<f64>,
}

/// Row-major dense LU factorisation with partial pivoting.
struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl DenseLu {
    fn factor(n: usize, mut a: Vec<f64>) -> Result<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (pivot_row, pivot_abs) = (k..n)
                .map(|i| (i, a[i * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs < 1e-300 {
                return Err(PprError::Singular);
            }
            if pivot_row != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot_row * n + j);
                }
                perm.swap(k, pivot_row);
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let factor = a[i * n + k] / pivot;
                if factor == 0.0 {
                    continue;
                }
                a[i * n + k] = factor;
                for j in k + 1..n {
                    a[i * n + j] -= factor * a[k * n + j];
                }
            }
        }
        Ok(Self { n, lu: a, perm })
    }

    #[allow(clippy::needless_range_loop)]
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }
}

/// Dense transition matrix for queries from `source`, row-major.
pub fn transition_matrix(g: &Graph, source: NodeId) -> Vec<f64> {
    let n = g.n();
    let mut p = vec![0.0; n * n];
    for v in 0..n {
        let d = g.out_degree(v as NodeId);
        if d == 0 {
            p[v * n + source as usize] = 1.0;
        } else {
            for &u in g.neighbors(v as NodeId) {
                p[v * n + u as usize] += 1.0 / d as f64;
            }
        }
    }
    p
}

fn factor_system(g: &Graph, source: NodeId, alpha: f64) -> Result<DenseLu> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Err(invalid("alpha", "dense oracle needs alpha > 0"));
    }
    let n = g.n();
    if n > ORACLE_NODE_LIMIT {
        return Err(PprError::OracleTooLarge {
            n,
            limit: ORACLE_NODE_LIMIT,
        });
    }
    g.check_node(source as u64)?;
    let p = transition_matrix(g, source);
    // Column form: (I - (1 - alpha) P)^T x = alpha e
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let identity = if i == j { 1.0 } else { 0.0 };
            a[i * n + j] = identity - (1.0 - alpha) * p[j * n + i];
        }
    }
    DenseLu::factor(n, a)
}

/// Exact `pi_s`.
pub fn exact_ppr(g: &Graph, source: NodeId, alpha: f64) -> Result<DensePPR> {
    let lu = factor_system(g, source, alpha)?;
    let mut rhs = vec![0.0; g.n()];
    rhs[source as usize] = alpha;
    Ok(DensePPR {
        source,
        alpha,
        pi: lu.solve(&rhs),
    })
}

/// `rows[v][t]` is the probability that a walk starting at `v` stops at `t`
/// when dead-ends jump to `source`. Row `source` equals [`exact_ppr`].
pub fn exact_ppr_rows(g: &Graph, source: NodeId, alpha: f64) -> Result<Vec<Vec<f64>>> {
    let lu = factor_system(g, source, alpha)?;
    let n = g.n();
    Ok((0..n)
        .map(|v| {
            let mut rhs = vec![0.0; n];
            rhs[v] = alpha;
            lu.solve(&rhs)
        })
        .collect())
}

/// `|| pi - alpha e_s - (1 - alpha) pi P ||_1`.
pub fn residual_l1(g: &Graph, ppr: &DensePPR) -> f64 {
    let n = g.n();
    let p = transition_matrix(g, ppr.source);
    (0..n)
        .map(|t| {
            let flow: f64 = (0..n).map(|v| ppr.pi[v] * p[v * n + t]).sum();
            let e = if t == ppr.source as usize { 1.0 } else { 0.0 };
            (ppr.pi[t] - ppr.alpha * e - (1.0 - ppr.alpha) * flow).abs()
        })
        .sum()
}

/// Writes `node,ppr` rows with 17 significant digits.
pub fn write_ppr_csv<W: Write>(mut w: W, values: &[f64]) -> Result<()> {
    writeln!(w, "node,ppr")?;
    for (v, x) in values.iter().enumerate() {
        writeln!(w, "{v},{x:.16e}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_ppr_csv<R: BufRead>(r: R) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        if idx == 0 {
            if line.trim() != "node,ppr" {
                return Err(PprError::Parse {
                    line: 1,
                    message: "expected header `node,ppr`".into(),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: &str| PprError::Parse {
            line: idx + 1,
            message: message.to_string(),
        };
        let (node, value) = line.split_once(',').ok_or_else(|| bad("missing comma"))?;
        let node: usize = node.trim().parse().map_err(|_| bad("invalid node"))?;
        let value: f64 = value.trim().parse().map_err(|_| bad("invalid value"))?;
        if node != values.len() {
            return Err(bad("nodes must be listed in order"));
        }
        values.push(value);
    }
    Ok(values)
}
