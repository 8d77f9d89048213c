use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pruned_pivot::dynamic::{DynConfig, DynState, DEFAULT_BUCKET_DIVISOR};
use pruned_pivot::lca::{lca_query, recommended_w, HashFamily, ProbeOracle};
use pruned_pivot::pivot::{narrow_pivot, pruned_pivot_all, r_pivot, sequential_pivot};
use pruned_pivot::{Graph, Ranking, Seed};

use crate::config::merge_config_args;
use crate::experiment::{run_experiment, Algorithm, ExperimentConfig};
use crate::paths::{path_statistics, write_paths};
use crate::sbm::SbmConfig;
use crate::stream::{parse_stream, replay};

#[derive(Debug, Parser)]
#[command(
    name = "pivot-bench",
    version,
    about = "Pivot and Pruned Pivot correlation clustering tools"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster an edge list with one algorithm.
    Cluster(ClusterArgs),
    /// Replay an update stream against the dynamic engine.
    Dynamic(DynamicArgs),
    /// Answer local cluster queries with hashed ranks.
    Lca(LcaArgs),
    /// Path statistics under random permutations.
    Paths(PathsArgs),
    /// SBM cost sweep over the budget R.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Pivot,
    Pruned,
    Rpivot,
    Narrow,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ClusterArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "pivot")]
    pub algo: Algo,
    /// Budget (pruned), depth (rpivot) or width (narrow).
    #[arg(long, visible_alias = "r", default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// key=value option file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct DynamicArgs {
    /// Base edge-list file.
    pub graph: PathBuf,
    /// Update-stream file.
    pub stream: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Audit silently after every N updates.
    #[arg(long)]
    pub audit_every: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUCKET_DIVISOR)]
    pub bucket_divisor: usize,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct LcaArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    /// Nodes to query; all nodes when omitted.
    pub nodes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independence of the hash family (default: min(2·Δ·k, n)).
    #[arg(long)]
    pub w: Option<usize>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct PathsArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Budget for the pruning-cut column.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// Edge `a,b` whose query paths are counted (default: first edge).
    #[arg(long, value_parser = parse_edge)]
    pub edge: Option<(usize, usize)>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ExperimentArgs {
    #[arg(long, default_value_t = 3)]
    pub parts: usize,
    #[arg(long, default_value_t = 200)]
    pub part_size: usize,
    #[arg(long, default_value_t = 0.9)]
    pub p_in: f64,
    #[arg(long, default_value_t = 0.1)]
    pub p_out: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 2)]
    pub r_min: usize,
    #[arg(long, default_value_t = 30)]
    pub r_max: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Comma-separated subset of pivot, r_pivot, narrow_pivot,
    /// pruned_pivot, singleton.
    #[arg(long, default_value = "pivot,r_pivot,narrow_pivot,pruned_pivot")]
    pub algorithms: String,
    #[arg(long)]
    pub out_raw: Option<PathBuf>,
    /// Aggregate CSV path; printed to stdout when omitted.
    #[arg(long)]
    pub out_agg: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected a,b")?;
    let a = a.trim().parse().map_err(|_| format!("bad label {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad label {b:?}"))?;
    Ok((a, b))
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// Entry point over raw arguments (program name first).
pub fn run(args: Vec<String>) -> anyhow::Result<ExitCode> {
    let args = merge_config_args(args)?;
    let cli = Cli::try_parse_from(args).unwrap_or_else(|e| e.exit());
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Cluster(a) => cluster(a, &mut out),
        Command::Dynamic(a) => dynamic(a, &mut out),
        Command::Lca(a) => lca(a, &mut out),
        Command::Paths(a) => paths(a, &mut out),
        Command::Experiment(a) => experiment(a, &mut out),
    }
}

fn cluster(a: ClusterArgs, out: &mut impl Write) -> anyhow::Result<ExitCode> {
    let g = read_graph(&a.graph)?;
    let r = Ranking::random_permutation(g.n(), Seed(a.seed))?;
    let c = match a.algo {
        Algo::Pivot => sequential_pivot(&g, &r)?.0,
        Algo::Pruned => pruned_pivot_all(&g, &r, a.k)?,
        Algo::Rpivot => r_pivot(&g, &r, a.k)?,
        Algo::Narrow => narrow_pivot(&g, &r, a.k)?,
    };
    writeln!(out, "node,cluster,unlucky")?;
    for u in 0..g.n() {
        writeln!(out, "{u},{},{}", c.cluster_of(u), u8::from(c.is_unlucky(u)))?;
    }
    eprintln!("cost {}", c.cost(&g));
    Ok(ExitCode::SUCCESS)
}

fn dynamic(a: DynamicArgs, out: &mut impl Write) -> anyhow::Result<ExitCode> {
    let g = read_graph(&a.graph)?;
    let text = std::fs::read_to_string(&a.stream)
        .with_context(|| format!("reading {}", a.stream.display()))?;
    let cmds = parse_stream(&text).with_context(|| format!("parsing {}", a.stream.display()))?;
    let r = Ranking::random_permutation(g.n(), Seed(a.seed))?;
    let cfg = DynConfig {
        k: a.k,
        bucket_divisor: a.bucket_divisor,
    };
    let mut state = DynState::with_config(g, r, cfg)?;
    let summary = replay(&mut state, &cmds, a.audit_every, out)?;
    Ok(if summary.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn lca(a: LcaArgs, out: &mut impl Write) -> anyhow::Result<ExitCode> {
    let g = read_graph(&a.graph)?;
    let n = g.n();
    let w = a.w.unwrap_or_else(|| recommended_w(g.max_degree(), a.k, n));
    let f = HashFamily::from_seed(Seed(a.seed), w)?;
    let mut oracle = ProbeOracle::new(&g);
    let nodes: Vec<usize> = if a.nodes.is_empty() {
        (0..n).collect()
    } else {
        a.nodes.clone()
    };
    for &v in &nodes {
        oracle.reset();
        let ans = lca_query(&mut oracle, &f, a.k, v)?;
        writeln!(out, "{v} {} {}", ans.cluster, ans.probes_used)?;
    }

    let global = pruned_pivot_all(&g, &f.ranking(n), a.k)?;
    let mut mismatched = Vec::new();
    for v in 0..n {
        if lca_query(&mut oracle, &f, a.k, v)?.cluster != global.cluster_of(v) {
            mismatched.push(v);
        }
    }
    if mismatched.is_empty() {
        writeln!(out, "audit ok")?;
        Ok(ExitCode::SUCCESS)
    } else {
        writeln!(out, "audit mismatch at {mismatched:?}")?;
        Ok(ExitCode::FAILURE)
    }
}

fn paths(a: PathsArgs, out: &mut impl Write) -> anyhow::Result<ExitCode> {
    let g = read_graph(&a.graph)?;
    let edge = match a.edge {
        Some(e) => e,
        None => match g.edges().first() {
            Some(&e) => e,
            None => bail!("graph has no edges"),
        },
    };
    let rows = path_statistics(&g, edge, a.k, a.trials, Seed(a.seed))?;
    match &a.out {
        Some(p) => write_paths(&rows, create(p)?)?,
        None => write_paths(&rows, out)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn experiment(a: ExperimentArgs, out: &mut impl Write) -> anyhow::Result<ExitCode> {
    let algorithms = a
        .algorithms
        .split(',')
        .map(|s| s.trim().parse::<Algorithm>())
        .collect::<Result<Vec<_>, _>>()?;
    let seed = Seed(a.seed);
    let cfg = ExperimentConfig {
        sbm: SbmConfig {
            parts: a.parts,
            part_size: a.part_size,
            p_in: a.p_in,
            p_out: a.p_out,
            seed,
        },
        trials: a.trials,
        r_min: a.r_min,
        r_max: a.r_max,
        algorithms,
        seed,
        jobs: a.jobs,
    };
    let res = run_experiment(&cfg)?;
    if let Some(p) = &a.out_raw {
        let mut w = create(p)?;
        res.write_raw(&mut w)?;
        w.flush()?;
    }
    match &a.out_agg {
        Some(p) => {
            let mut w = create(p)?;
            res.write_agg(&mut w)?;
            w.flush()?;
        }
        None => res.write_agg(out)?,
    }
    Ok(ExitCode::SUCCESS)
}
