use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ppr_core::bench::{random_sources, run_sweep_with_index, write_sweep_files, SweepPlan};
use ppr_core::graph::load_graph;
use ppr_core::metrics::ground_truth;
use ppr_core::oracle::write_ppr_csv;
use ppr_core::{build_index, run_query, Algorithm, Graph, NodeId, PprError, QueryConfig, WalkIndex};

#[derive(Parser, Debug)]
#[command(name = "ppr", version, about = "Single-source personalized PageRank")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse an edge list and write the binary graph cache.
    Clean {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer queries with one algorithm and write `node,ppr` CSVs.
    Query {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value = "powerpush")]
        algo: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[command(flatten)]
        sources: SourceArgs,
        #[arg(long)]
        index: Option<PathBuf>,
        /// Output file; a directory when several sources are queried.
        /// Standard output when omitted with a single source.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Precompute the walk index used by SpeedPPR.
    BuildIndex {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = ppr_core::DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ground truth (PowerPush at lambda = 1e-17) as `node,ppr` CSVs.
    Groundtruth {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = ppr_core::DEFAULT_ALPHA)]
        alpha: f64,
        #[command(flatten)]
        sources: SourceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep algorithms and parameters; writes summary and checkpoint CSVs.
    Bench {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated algorithm names.
        #[arg(long, value_delimiter = ',', default_value = "powitr,fwdpush-fifo,simfwdpush,powerpush")]
        algo: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated lambda values for high-precision algorithms.
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<f64>,
        /// Comma-separated epsilon values for speedppr.
        #[arg(long, value_delimiter = ',')]
        epsilon: Vec<f64>,
        #[command(flatten)]
        sources: SourceArgs,
        #[arg(long)]
        index: Option<PathBuf>,
        #[arg(long)]
        checkpoint_every: Option<u64>,
        /// Run cells concurrently.
        #[arg(long)]
        parallel: bool,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Edge list (`u v` per line) or binary graph cache.
    #[arg(long)]
    graph: PathBuf,
    /// Treat each line as an undirected edge.
    #[arg(long)]
    undirected: bool,
}

#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(long, default_value_t = ppr_core::DEFAULT_ALPHA)]
    alpha: f64,
    /// Default `1/n`.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, default_value_t = ppr_core::DEFAULT_EPOCH_NUM)]
    epochs: u32,
    /// Default `n/4`.
    #[arg(long)]
    scan_threshold: Option<usize>,
}

#[derive(Args, Debug)]
struct SourceArgs {
    #[arg(long, conflicts_with = "random_sources")]
    source: Option<u64>,
    /// Draw K sources uniformly at random using `--seed`.
    #[arg(long, value_name = "K")]
    random_sources: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Usage(String),
    Data(PprError),
}

impl From<PprError> for Failure {
    fn from(e: PprError) -> Self {
        Failure::Data(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.into())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Clean { graph, out } => {
            let g = load(&graph)?;
            g.save_cache(&out)?;
            eprintln!("wrote {} (n={}, m={})", out.display(), g.n(), g.m());
            Ok(())
        }
        Command::Query { graph, algo, params, epsilon, lambda, sources, index, out } => {
            let algorithm: Algorithm = algo.parse().map_err(|e: PprError| Failure::Usage(e.to_string()))?;
            if algorithm == Algorithm::SpeedPpr && epsilon.is_none() {
                return Err(Failure::Usage("speedppr requires --epsilon".into()));
            }
            let srcs = check_sources(&sources, out.as_deref())?;
            let g = load(&graph)?;
            let mut cfg = config(&g, &params, sources.seed);
            cfg.epsilon = epsilon;
            if let Some(l) = lambda {
                cfg.lambda = l;
            }
            let index = index.map(|p| WalkIndex::load(p, &g)).transpose()?;
            let srcs = resolve_sources(&g, srcs)?;
            write_results(&srcs, out.as_deref(), |s| {
                Ok(run_query(&g, s, algorithm, &cfg, index.as_ref())?.estimates)
            })
        }
        Command::BuildIndex { graph, alpha, seed, out } => {
            let g = load(&graph)?;
            build_index(&g, alpha, seed)?.save(&out)?;
            Ok(())
        }
        Command::Groundtruth { graph, alpha, sources, out } => {
            let srcs = check_sources(&sources, out.as_deref())?;
            let g = load(&graph)?;
            let srcs = resolve_sources(&g, srcs)?;
            write_results(&srcs, out.as_deref(), |s| Ok(ground_truth(&g, s, alpha)?.estimates))
        }
        Command::Bench {
            graph,
            algo,
            params,
            lambda,
            epsilon,
            sources,
            index,
            checkpoint_every,
            parallel,
            out,
        } => {
            for name in &algo {
                name.parse::<Algorithm>().map_err(|e| Failure::Usage(e.to_string()))?;
            }
            if algo.iter().any(|a| a == "speedppr") && epsilon.is_empty() {
                return Err(Failure::Usage("speedppr requires --epsilon".into()));
            }
            let srcs = check_sources(&sources, Some(&out))?;
            let g = load(&graph)?;
            let cfg = config(&g, &params, sources.seed);
            let mut plan = SweepPlan::for_graph(&g);
            plan.algorithms = algo;
            if !lambda.is_empty() {
                plan.lambdas = lambda;
            }
            plan.epsilons = epsilon;
            plan.seeds = vec![sources.seed];
            plan.alpha = cfg.alpha;
            plan.mu = cfg.mu;
            plan.tuning = (&cfg).into();
            plan.checkpoint_every = checkpoint_every;
            plan.parallel = parallel;
            let index = index.map(|p| WalkIndex::load(p, &g)).transpose()?;
            let srcs = resolve_sources(&g, srcs)?;
            let result = run_sweep_with_index(&g, &srcs, &plan, index.as_ref())?;
            let name = graph
                .graph
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "graph".into());
            for path in write_sweep_files(&out, &name, &result)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn load(args: &GraphArgs) -> Result<Graph, PprError> {
    load_graph(&args.graph, args.undirected)
}

fn config(g: &Graph, params: &ParamArgs, seed: u64) -> QueryConfig {
    let mut cfg = QueryConfig::for_graph(g);
    cfg.alpha = params.alpha;
    cfg.seed = seed;
    cfg.epoch_num = params.epochs;
    if let Some(mu) = params.mu {
        cfg.mu = mu;
    }
    if let Some(t) = params.scan_threshold {
        cfg.scan_threshold = t;
    }
    cfg
}

enum Sources {
    One(u64),
    Random { k: usize, seed: u64 },
}

/// Flag-level checks, done before the graph is read.
fn check_sources(args: &SourceArgs, out: Option<&Path>) -> Result<Sources, Failure> {
    match (args.source, args.random_sources) {
        (Some(s), None) => Ok(Sources::One(s)),
        (None, Some(0)) => Err(Failure::Usage("--random-sources must be positive".into())),
        (None, Some(k)) if k > 1 && out.is_none() => {
            Err(Failure::Usage("--out DIR is required with several sources".into()))
        }
        (None, Some(k)) => Ok(Sources::Random { k, seed: args.seed }),
        (None, None) => Err(Failure::Usage("one of --source or --random-sources is required".into())),
        (Some(_), Some(_)) => Err(Failure::Usage("--source conflicts with --random-sources".into())),
    }
}

fn resolve_sources(g: &Graph, sources: Sources) -> Result<Vec<NodeId>, PprError> {
    match sources {
        Sources::One(s) => Ok(vec![g.check_node(s)?]),
        Sources::Random { k, seed } => Ok(random_sources(g.n(), k, seed)),
    }
}

/// One source: `out` is a file (standard output if absent). Several
/// sources: `out` is a directory receiving `ppr_s{source}.csv`.
fn write_results<F>(sources: &[NodeId], out: Option<&Path>, mut answer: F) -> Outcome
where
    F: FnMut(NodeId) -> Result<Vec<f64>, PprError>,
{
    if let [s] = sources {
        let values = answer(*s)?;
        return match out {
            Some(path) => Ok(write_ppr_csv(BufWriter::new(File::create(path)?), &values)?),
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                write_ppr_csv(&mut lock, &values)?;
                lock.flush()?;
                Ok(())
            }
        };
    }
    let dir = out.ok_or_else(|| Failure::Usage("--out DIR is required with several sources".into()))?;
    fs::create_dir_all(dir)?;
    for &s in sources {
        let values = answer(s)?;
        let path = dir.join(format!("ppr_s{s}.csv"));
        write_ppr_csv(BufWriter::new(File::create(path)?), &values)?;
    }
    Ok(())
}
