use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use auction_graph::io::{
    self, load_matrix_market_bipartite, load_matrix_market_with, save_matrix_market, save_matrix_market_bipartite,
    LoadOptions,
};
use auction_graph::{
    auction_multibid, evaluate, evaluate_bipartite, exact_assignment, exact_bmatching, gen_uniform_bipartite,
    gen_uniform_unipartite, knn_select_bipartite, run_parallel_auction, sparsify, to_bipartite_shadow,
    BipartiteProblem, EpsilonPolicy, Error, Execution, Method, MetricsReport, ProfitFloor, RunInfo, SparsifyConfig,
    Symmetrize,
};
use clap::{Parser, Subcommand, ValueEnum};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 3;
const EXIT_NON_TERMINATION: u8 = 4;

/// Sparse, nearly b-regular graphs from dense weighted graphs.
#[derive(Parser)]
#[command(name = "auction-graph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded instance.
    Gen(GenArgs),
    /// Sparsify a Matrix Market graph.
    Sparsify(SparsifyArgs),
    /// Solve a small instance exactly.
    Oracle(OracleArgs),
    /// Time methods on generated instances.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenType {
    Bipartite,
    Unipartite,
    Moons,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long = "type", value_enum)]
    kind: GenType,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Gaussian noise of the two-moons generator.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(clap::Args)]
struct SparsifyArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long)]
    b: usize,
    #[arg(long, default_value = "auction_multibid")]
    method: Method,
    /// `auto` or a positive number.
    #[arg(long, default_value = "auto")]
    epsilon: String,
    #[arg(long, default_value = "percentile")]
    symmetrize: Symmetrize,
    #[arg(long, default_value_t = 1)]
    partitions: usize,
    /// `none`, `auto` (minus the largest weight) or a number.
    #[arg(long, default_value = "auto")]
    profit_floor: ProfitFloor,
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long, default_value = "threads")]
    execution: Execution,
    /// Treat the matrix as buyers by objects even when it is square.
    #[arg(long)]
    bipartite: bool,
    /// Replace negative entries by their magnitude.
    #[arg(long)]
    absolute: bool,
    #[arg(long, short)]
    output: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    Assignment,
    Bmatching,
}

#[derive(clap::Args)]
struct OracleArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_enum)]
    kind: OracleKind,
    #[arg(long, default_value_t = 1)]
    b: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchKind {
    Bipartite,
    Unipartite,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [100, 200, 500])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    b: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [Method::Knn, Method::AuctionMultibid])]
    methods: Vec<Method>,
    #[arg(long, value_delimiter = ',', default_values_t = [1])]
    partitions: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, value_enum, default_value_t = BenchKind::Unipartite)]
    kind: BenchKind,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Sparsify(args) => cmd_sparsify(&args),
        Command::Oracle(args) => cmd_oracle(&args),
        Command::Bench(args) => cmd_bench(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Parse { .. }) => EXIT_PARSE,
        Some(Error::NonTermination { .. }) => EXIT_NON_TERMINATION,
        _ => EXIT_FAILURE,
    }
}

fn cmd_gen(args: &GenArgs) -> anyhow::Result<()> {
    match args.kind {
        GenType::Unipartite => {
            let g = gen_uniform_unipartite(args.n, args.seed).context("gen")?;
            save_matrix_market(&g, &args.output).context("io")?;
            println!("n = {}, |E| = {}", g.node_count(), g.directed_edge_count());
        }
        GenType::Bipartite => {
            let p = gen_uniform_bipartite(args.n, args.seed).context("gen")?;
            save_matrix_market_bipartite(&p, &args.output).context("io")?;
            println!("n = {}, |E| = {}", args.n, p.directed_edge_count());
        }
        GenType::Moons => {
            let pts = auction_graph::gen_two_moons(args.n, args.noise, args.seed).context("gen")?;
            io::save_points(&pts, &args.output).context("io")?;
            println!("n = {}, |E| = 0", pts.rows());
        }
    }
    Ok(())
}

fn parse_epsilon(text: &str) -> anyhow::Result<EpsilonPolicy> {
    if text == "auto" {
        return Ok(EpsilonPolicy::Auto);
    }
    match text.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(EpsilonPolicy::Fixed(v)),
        _ => bail!("epsilon must be `auto` or a positive number, got `{text}`"),
    }
}

fn config_from(args: &SparsifyArgs) -> anyhow::Result<SparsifyConfig> {
    let config = SparsifyConfig {
        b: args.b,
        epsilon: parse_epsilon(&args.epsilon)?,
        method: args.method,
        symmetrize: args.symmetrize,
        partitions: args.partitions,
        max_rounds: args.max_rounds,
        profit_floor: args.profit_floor,
        execution: args.execution,
    };
    config.validate().context("config")?;
    Ok(config)
}

fn is_rectangular(path: &Path) -> anyhow::Result<bool> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
    let size = text.lines().skip(1).map(str::trim).find(|l| !l.is_empty() && !l.starts_with('%'));
    let dims: Vec<usize> =
        size.map(|l| l.split_whitespace().filter_map(|t| t.parse().ok()).collect()).unwrap_or_default();
    Ok(dims.len() == 3 && dims[0] != dims[1])
}

/// Effective settings echoed into the report.
fn echo(
    args: &SparsifyArgs,
    config: &SparsifyConfig,
    epsilon: Option<f64>,
    max_rounds: Option<usize>,
    floor: Option<f64>,
) -> Vec<(String, String)> {
    let show = |v: Option<f64>| v.map_or_else(|| "none".to_string(), |v| v.to_string());
    vec![
        ("input".into(), args.input.display().to_string()),
        ("b".into(), config.b.to_string()),
        ("method".into(), config.method.to_string()),
        ("epsilon".into(), args.epsilon.clone()),
        ("epsilon_resolved".into(), show(epsilon)),
        ("symmetrize".into(), config.symmetrize.to_string()),
        ("partitions".into(), config.partitions.to_string()),
        ("profit_floor".into(), config.profit_floor.to_string()),
        ("profit_floor_resolved".into(), show(floor)),
        ("max_rounds".into(), max_rounds.map_or_else(|| "none".into(), |r| r.to_string())),
        ("execution".into(), config.execution.to_string()),
        ("bipartite".into(), args.bipartite.to_string()),
        ("absolute".into(), args.absolute.to_string()),
    ]
}

fn cmd_sparsify(args: &SparsifyArgs) -> anyhow::Result<()> {
    let config = config_from(args)?;
    let options = LoadOptions { absolute_values: args.absolute };
    if args.bipartite || is_rectangular(&args.input)? {
        let problem = load_matrix_market_bipartite(&args.input, &options).context("ingest")?;
        return sparsify_bipartite(args, &config, &problem);
    }

    let loaded = load_matrix_market_with(&args.input, &options).context("ingest")?;
    if loaded.self_loops_dropped > 0 {
        eprintln!("ingest: dropped {} self-loops", loaded.self_loops_dropped);
    }
    let graph = if loaded.graph.is_directed() { loaded.graph.to_undirected() } else { loaded.graph };
    let shadow = to_bipartite_shadow(&graph).context("graph")?;
    let (epsilon, max_rounds, floor) = if config.method == Method::Knn {
        (None, None, None)
    } else {
        let eps = config.resolve_epsilon(&shadow);
        (Some(eps), Some(config.resolve_max_rounds(&shadow, eps)), config.resolve_profit_floor(&shadow))
    };

    let start = Instant::now();
    let out = sparsify(&graph, &config).context("sparsify")?;
    let elapsed = start.elapsed().as_secs_f64();

    let run = RunInfo {
        iterations: out.iterations,
        wall_time_seconds: elapsed,
        epsilon: out.epsilon,
        degree_target: Some(config.b),
    };
    let mut report = evaluate(&graph, &out.selection, out.prices.as_ref(), &run).context("metrics")?;
    if let (Some(cs), None) = (out.cs_residual_max, report.cs_residual_max) {
        report.cs_residual_max = Some(cs);
    }
    report.parameters = echo(args, &config, epsilon, max_rounds, floor);
    report.parameters.push(("self_loops_dropped".into(), loaded.self_loops_dropped.to_string()));

    let sparse = auction_graph::apply_selection(&graph, &out.selection).context("graph")?;
    write_outputs(&args.output, args.report.as_deref(), &report, |path| io::save_edge_list(&sparse, path))?;
    print_summary(&report);
    Ok(())
}

fn sparsify_bipartite(args: &SparsifyArgs, config: &SparsifyConfig, problem: &BipartiteProblem) -> anyhow::Result<()> {
    let start = Instant::now();
    let (selection, prices, iterations, epsilon) = match config.method {
        Method::Knn => (knn_select_bipartite(problem, config.b).context("sparsify")?, None, 0, None),
        Method::AuctionMultibid => {
            let out = if config.partitions > 1 {
                run_parallel_auction(problem, config)
            } else {
                auction_multibid(problem, config)
            }
            .context("sparsify")?;
            let eps = out.prices.epsilon();
            (out.selection, Some(out.prices), out.rounds, Some(eps))
        }
        Method::AuctionRounds => bail!("sparsify: auction_rounds needs a unipartite graph"),
    };
    let elapsed = start.elapsed().as_secs_f64();
    let (max_rounds, floor) = match epsilon {
        Some(eps) => (Some(config.resolve_max_rounds(problem, eps)), config.resolve_profit_floor(problem)),
        None => (None, None),
    };
    let run = RunInfo { iterations, wall_time_seconds: elapsed, epsilon, degree_target: Some(config.b) };
    let mut report = evaluate_bipartite(problem, &selection, prices.as_ref(), &run).context("metrics")?;
    report.parameters = echo(args, config, epsilon, max_rounds, floor);

    let kept = BipartiteProblem::new(
        problem.buyer_count(),
        problem.object_count(),
        selection.iter().map(|(i, j)| (i, j, problem.weight(i, j).expect("selected pairs are edges"))),
    )
    .context("graph")?;
    write_outputs(&args.output, args.report.as_deref(), &report, |path| save_matrix_market_bipartite(&kept, path))?;
    print_summary(&report);
    Ok(())
}

/// Writes the main output and the report, removing the output again if the
/// report cannot be written.
fn write_outputs(
    output: &Path,
    report_path: Option<&Path>,
    report: &MetricsReport,
    save: impl FnOnce(&Path) -> auction_graph::Result<()>,
) -> anyhow::Result<()> {
    if let Err(e) = save(output) {
        let _ = fs::remove_file(output);
        return Err(e).context("io");
    }
    if let Some(path) = report_path {
        if let Err(e) = io::save_report(report, path) {
            let _ = fs::remove_file(output);
            let _ = fs::remove_file(path);
            return Err(e).context("io");
        }
    }
    Ok(())
}

fn print_summary(report: &MetricsReport) {
    println!("selected edges = {}", report.selected_edges);
    println!("total weight = {}", report.total_selected_weight);
    println!("degree mean = {}, variance = {}", report.degree_mean, report.degree_variance);
    println!("iterations = {}, wall time = {:.6}s", report.iterations, report.wall_time_seconds);
    if let Some(eps) = report.epsilon_used {
        println!("epsilon = {eps}");
    }
}

fn cmd_oracle(args: &OracleArgs) -> anyhow::Result<()> {
    match args.kind {
        OracleKind::Assignment => {
            let problem = load_matrix_market_bipartite(&args.input, &LoadOptions::default()).context("ingest")?;
            let exact = exact_assignment(&problem).context("oracle")?;
            println!("weight = {}", exact.weight);
            for (i, j) in exact.matching {
                println!("{i} {j}");
            }
        }
        OracleKind::Bmatching => {
            let loaded = load_matrix_market_with(&args.input, &LoadOptions::default()).context("ingest")?;
            let graph = loaded.graph.to_undirected();
            println!("weight = {}", exact_bmatching(&graph, args.b).context("oracle")?);
        }
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> anyhow::Result<()> {
    if args.repeats == 0 {
        bail!("bench: repeats must be at least 1");
    }
    let mut table = String::new();
    let _ = write!(table, "{:>8} {:>4}", "n", "L");
    for m in &args.methods {
        let _ = write!(table, " {:>18}", m.to_string());
    }
    table.push('\n');
    let mut runs = String::new();

    for &n in &args.sizes {
        for &l in &args.partitions {
            let _ = write!(table, "{n:>8} {l:>4}");
            for &method in &args.methods {
                let mut total = 0.0;
                for r in 0..args.repeats {
                    let t = time_one(args, n, l, method)?;
                    let line = format!("run n={n} L={l} method={method} repeat={} seconds={t:.6}", r + 1);
                    eprintln!("{line}");
                    runs.push_str(&line);
                    runs.push('\n');
                    total += t;
                }
                let _ = write!(table, " {:>18.6}", total / args.repeats as f64);
            }
            table.push('\n');
        }
    }
    print!("{table}");
    if let Some(path) = &args.report {
        let mut text = format!(
            "# mean wall time in seconds over {} repeats, kind {}\n",
            args.repeats,
            match args.kind {
                BenchKind::Bipartite => "bipartite",
                BenchKind::Unipartite => "unipartite",
            }
        );
        text.push_str(&table);
        for line in runs.lines() {
            text.push_str("# ");
            text.push_str(line);
            text.push('\n');
        }
        fs::write(path, text).map_err(|e| Error::Io { path: path.clone(), source: e }).context("io")?;
    }
    Ok(())
}

fn time_one(args: &BenchArgs, n: usize, partitions: usize, method: Method) -> anyhow::Result<f64> {
    let config = SparsifyConfig {
        partitions,
        profit_floor: ProfitFloor::Auto,
        symmetrize: if method == Method::Knn { Symmetrize::Max } else { Symmetrize::Percentile },
        ..SparsifyConfig::new(args.b, method)
    };
    match args.kind {
        BenchKind::Unipartite => {
            let graph = gen_uniform_unipartite(n, args.seed).context("gen")?;
            let start = Instant::now();
            sparsify(&graph, &config).context("sparsify")?;
            Ok(start.elapsed().as_secs_f64())
        }
        BenchKind::Bipartite => {
            let problem = gen_uniform_bipartite(n, args.seed).context("gen")?;
            let start = Instant::now();
            match method {
                Method::Knn => drop(knn_select_bipartite(&problem, args.b).context("sparsify")?),
                Method::AuctionMultibid if partitions > 1 => {
                    drop(run_parallel_auction(&problem, &config).context("sparsify")?)
                }
                Method::AuctionMultibid => drop(auction_multibid(&problem, &config).context("sparsify")?),
                Method::AuctionRounds => bail!("bench: auction_rounds needs unipartite instances"),
            }
            Ok(start.elapsed().as_secs_f64())
        }
    }
}
