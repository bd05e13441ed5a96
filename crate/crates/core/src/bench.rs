//! Sweep harness: runs every (source, algorithm, parameter) cell, measures
//! it against ground truth and emits summary and checkpoint CSVs.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::config::{Algorithm, QueryConfig};
use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::metrics::{error_report, ground_truth};
use crate::push::{write_checkpoint_csv, Checkpoint, Checkpoints, PowerPushTuning};
use crate::query::run_query_observed;
use crate::rng::WalkRng;
use crate::speedppr::WalkIndex;

/// What to run. High-precision algorithms take every `lambdas` entry;
/// `speedppr` takes every `(epsilon, seed)` pair.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub algorithms: Vec<String>,
    pub lambdas: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub seeds: Vec<u64>,
    pub alpha: f64,
    pub mu: f64,
    pub tuning: PowerPushTuning,
    /// Edge pushes between checkpoint samples; `None` means `4 m`.
    pub checkpoint_every: Option<u64>,
    /// Run cells on the rayon pool. Timings then include contention.
    pub parallel: bool,
}

impl SweepPlan {
    pub fn for_graph(g: &Graph) -> Self {
        let cfg = QueryConfig::for_graph(g);
        Self {
            algorithms: Vec::new(),
            lambdas: vec![cfg.lambda],
            epsilons: Vec::new(),
            seeds: vec![0],
            alpha: cfg.alpha,
            mu: cfg.mu,
            tuning: PowerPushTuning::from(&cfg),
            checkpoint_every: None,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub source: NodeId,
    pub algorithm: Algorithm,
    /// lambda for high-precision engines, epsilon for SpeedPPR.
    pub param: f64,
    pub seed: Option<u64>,
    pub wall_time_ns: u128,
    pub edge_pushes: u64,
    pub walks: u64,
    pub achieved_r_sum: f64,
    pub l1_error: f64,
    pub max_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointSeries {
    pub source: NodeId,
    pub algorithm: Algorithm,
    pub param: f64,
    pub samples: Vec<Checkpoint>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<SummaryRow>,
    pub checkpoints: Vec<CheckpointSeries>,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    source: NodeId,
    algorithm: Algorithm,
    param: f64,
    seed: Option<u64>,
}

/// `k` sources drawn uniformly from `0..n` with replacement.
pub fn random_sources(n: usize, k: usize, seed: u64) -> Vec<NodeId> {
    let mut rng = WalkRng::new(seed);
    (0..k).map(|_| rng.below(n as u32)).collect()
}

/// Runs `plan` from each source. Cells are emitted source-major, then in
/// plan order.
pub fn run_sweep(g: &Graph, sources: &[NodeId], plan: &SweepPlan) -> Result<SweepOutput> {
    run_sweep_with_index(g, sources, plan, None)
}

/// [`run_sweep`] where `speedppr` cells read walks from `index`.
pub fn run_sweep_with_index(
    g: &Graph,
    sources: &[NodeId],
    plan: &SweepPlan,
    index: Option<&WalkIndex>,
) -> Result<SweepOutput> {
    let algorithms: Vec<Algorithm> = plan
        .algorithms
        .iter()
        .map(|name| name.parse())
        .collect::<Result<_>>()?;
    for &s in sources {
        g.check_node(s as u64)?;
    }
    if algorithms.contains(&Algorithm::SpeedPpr) && plan.epsilons.is_empty() {
        return Err(invalid("epsilons", "speedppr needs at least one epsilon"));
    }

    let mut cells = Vec::new();
    for &source in sources {
        for &algorithm in &algorithms {
            if algorithm.is_high_precision() {
                for &param in &plan.lambdas {
                    cells.push(Cell { source, algorithm, param, seed: None });
                }
            } else {
                for &param in &plan.epsilons {
                    for &seed in &plan.seeds {
                        cells.push(Cell { source, algorithm, param, seed: Some(seed) });
                    }
                }
            }
        }
    }

    let mut truths = Vec::with_capacity(sources.len());
    for &s in sources {
        truths.push((s, ground_truth(g, s, plan.alpha)?.estimates));
    }
    let truth_of = |s: NodeId| -> &[f64] {
        &truths.iter().find(|(t, _)| *t == s).expect("truth computed").1
    };

    let results: Vec<Result<(SummaryRow, Option<CheckpointSeries>)>> = if plan.parallel {
        cells
            .par_iter()
            .map(|c| run_cell(g, c, plan, index, truth_of(c.source)))
            .collect()
    } else {
        cells
            .iter()
            .map(|c| run_cell(g, c, plan, index, truth_of(c.source)))
            .collect()
    };

    let mut out = SweepOutput::default();
    for r in results {
        let (row, series) = r?;
        out.rows.push(row);
        out.checkpoints.extend(series);
    }
    Ok(out)
}

fn run_cell(
    g: &Graph,
    cell: &Cell,
    plan: &SweepPlan,
    index: Option<&WalkIndex>,
    truth: &[f64],
) -> Result<(SummaryRow, Option<CheckpointSeries>)> {
    let every = plan
        .checkpoint_every
        .unwrap_or(4 * g.effective_edge_count());
    let mut checkpoints = Checkpoints::new(every);
    let (s, alpha, param) = (cell.source, plan.alpha, cell.param);

    let cfg = QueryConfig {
        alpha,
        lambda: if cell.algorithm.is_high_precision() { param } else { 1.0 },
        epsilon: (!cell.algorithm.is_high_precision()).then_some(param),
        mu: plan.mu,
        seed: cell.seed.unwrap_or(0),
        epoch_num: plan.tuning.epoch_num,
        scan_threshold: plan.tuning.scan_threshold,
    };
    let start = Instant::now();
    let result = run_query_observed(g, s, cell.algorithm, &cfg, index, &mut checkpoints)?;
    let wall_time_ns = start.elapsed().as_nanos();

    let report = error_report(&result.estimates, truth, plan.mu, f64::INFINITY)?;
    let row = SummaryRow {
        source: s,
        algorithm: cell.algorithm,
        param,
        seed: cell.seed,
        wall_time_ns,
        edge_pushes: result.pushes,
        walks: result.walks,
        achieved_r_sum: result.achieved_r_sum,
        l1_error: report.l1_error,
        max_rel_error: report.max_rel_error_above_mu,
    };
    let series = cell.algorithm.is_high_precision().then(|| CheckpointSeries {
        source: s,
        algorithm: cell.algorithm,
        param,
        samples: checkpoints.into_samples(),
    });
    Ok((row, series))
}

pub const SUMMARY_HEADER: &str =
    "source,algo,param,seed,wall_time_ns,edge_pushes,walks,achieved_r_sum,l1_error,max_rel_error";

pub fn write_summary_csv<W: Write>(mut w: W, rows: &[SummaryRow]) -> Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    for r in rows {
        let seed = r.seed.map(|s| s.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{:e},{},{},{},{},{:.16e},{:.16e},{:.16e}",
            r.source,
            r.algorithm,
            r.param,
            seed,
            r.wall_time_ns,
            r.edge_pushes,
            r.walks,
            r.achieved_r_sum,
            r.l1_error,
            r.max_rel_error
        )?;
    }
    w.flush()?;
    Ok(())
}

/// One instrumentation record per query:
/// `algorithm,param,edge_pushes,wall_time_ns,achieved_r_sum`.
pub fn write_instrumentation_row<W: Write>(mut w: W, row: &SummaryRow) -> Result<()> {
    writeln!(
        w,
        "{},{:e},{},{},{:.16e}",
        row.algorithm, row.param, row.edge_pushes, row.wall_time_ns, row.achieved_r_sum
    )?;
    Ok(())
}

/// File name of a checkpoint series: `{graph}_{algo}_{param}_s{source}.csv`.
pub fn checkpoint_file_name(graph: &str, series: &CheckpointSeries) -> String {
    format!(
        "{graph}_{}_{:e}_s{}.csv",
        series.algorithm, series.param, series.source
    )
}

/// Writes `{graph}_sweep.csv` and one checkpoint file per high-precision
/// cell into `dir`. Returns the paths written, summary first.
pub fn write_sweep_files(dir: &Path, graph: &str, out: &SweepOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let summary = dir.join(format!("{graph}_sweep.csv"));
    write_summary_csv(BufWriter::new(fs::File::create(&summary)?), &out.rows)?;
    written.push(summary);
    for series in &out.checkpoints {
        let path = dir.join(checkpoint_file_name(graph, series));
        write_checkpoint_csv(BufWriter::new(fs::File::create(&path)?), &series.samples)?;
        written.push(path);
    }
    Ok(written)
}
