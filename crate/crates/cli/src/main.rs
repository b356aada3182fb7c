//! Command-line front end: instance generation, sequence planning,
//! execution simulation and the benchmark harness.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cluttersort::executor::TimingParams;
use cluttersort::instance::GenParams;
use cluttersort::metrics::{summarize, BenchConfig, BenchRow};
use cluttersort::planner::{Outcome, PlanResult, Strategy};
use std::path::PathBuf;
use std::time::Duration;

/// Exit codes for plan outcomes; usage errors exit 2 (clap), other
/// failures exit 1.
const EXIT_INFEASIBLE: i32 = 3;
const EXIT_FAILURE: i32 = 4;
const EXIT_TIMEOUT: i32 = 5;

#[derive(Parser)]
#[command(name = "cluttersort", version, about = "Ordered sorting of cluttered disc objects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Generate(GenerateArgs),
    /// Plan a sorting sequence for an instance.
    Plan(PlanArgs),
    /// Simulate multi-robot execution of a planned sequence.
    Simulate(SimulateArgs),
    /// Run the benchmark grid and write a CSV of results.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of objects.
    #[arg(long)]
    n: usize,
    /// Number of groups (1 <= K <= N).
    #[arg(long)]
    k: usize,
    /// Number of robots.
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output instance file.
    #[arg(long, default_value = "instance.json")]
    out: PathBuf,
    /// Side of the square clutter region, meters.
    #[arg(long)]
    workspace: Option<f64>,
    /// Smallest disc diameter, meters.
    #[arg(long)]
    diameter_min: Option<f64>,
    /// Largest disc diameter, meters.
    #[arg(long)]
    diameter_max: Option<f64>,
}

#[derive(Args)]
struct PlanArgs {
    /// Instance file to solve.
    #[arg(long)]
    instance: PathBuf,
    /// Frontier strategy: bfs, dfs, best or astar.
    #[arg(long, value_parser = parse_strategy)]
    strategy: Strategy,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 30.0)]
    time_limit: f64,
    /// Output plan file.
    #[arg(long, default_value = "plan.json")]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Plan file produced by `plan`.
    #[arg(long)]
    plan: PathBuf,
    /// Override every robot's speed, meters per second.
    #[arg(long)]
    speed: Option<f64>,
    /// Pick duration, seconds.
    #[arg(long, default_value_t = 3.0)]
    pick: f64,
    /// Place duration, seconds.
    #[arg(long, default_value_t = 3.0)]
    place: f64,
    /// Output trace file (line-delimited: time,robot,event,object,x,y).
    #[arg(long, default_value = "trace.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Grid as comma-separated Ns and Ks: "10,15,20,25,30x1,3,5".
    #[arg(long, default_value = "10,15,20,25,30x1,3,5")]
    grid: String,
    /// Seeded instances per grid cell.
    #[arg(long, default_value_t = 20)]
    seeds: usize,
    /// Comma-separated strategies to compare.
    #[arg(long, default_value = "best,dfs")]
    strategies: String,
    /// Wall-clock limit per search, seconds.
    #[arg(long, default_value_t = 30.0)]
    time_limit: f64,
    /// Robot count (penalty window and simulation fleet size).
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Worker threads for independent rows; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output CSV file.
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    /// Side of the square clutter region, meters.
    #[arg(long)]
    workspace: Option<f64>,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

fn init_logging() {
    let level = match std::env::var("SORT_PLANNER_LOG").as_deref() {
        Ok("debug") => log::LevelFilter::Debug,
        Ok("info") => log::LevelFilter::Info,
        _ => log::LevelFilter::Off,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Stderr)
        .init();
}

fn main() {
    init_logging();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Plan(args) => cmd_plan(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn gen_params(workspace: Option<f64>, dmin: Option<f64>, dmax: Option<f64>) -> GenParams {
    let mut params = GenParams::default();
    if let Some(side) = workspace {
        params.workspace_side = side;
    }
    if let Some(d) = dmin {
        params.diameter_min = d;
    }
    if let Some(d) = dmax {
        params.diameter_max = d;
    }
    params
}

fn cmd_generate(args: GenerateArgs) -> Result<i32> {
    let params = gen_params(args.workspace, args.diameter_min, args.diameter_max);
    let instance = cluttersort::generate_instance(args.n, args.k, args.m, args.seed, &params)
        .context("instance generation failed")?;
    std::fs::write(&args.out, cluttersort::serialize_instance(&instance))
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "generated N={} K={} M={} seed={} -> {}",
        args.n,
        args.k,
        args.m,
        args.seed,
        args.out.display()
    );
    Ok(0)
}

fn load_instance(path: &PathBuf) -> Result<cluttersort::Instance> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    cluttersort::parse_instance(&text)
        .with_context(|| format!("parsing instance {}", path.display()))
}

fn cmd_plan(args: PlanArgs) -> Result<i32> {
    if args.time_limit <= 0.0 {
        bail!("--time-limit must be positive");
    }
    let instance = load_instance(&args.instance)?;
    let window = instance.robots().len();
    let result = cluttersort::sort_objects(
        &instance,
        args.strategy,
        Duration::from_secs_f64(args.time_limit),
        window,
    )
    .context("planning failed")?;
    std::fs::write(&args.out, serde_json_string(&result)?)
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "outcome={} len={} nodes={} ms={:.3}",
        result.outcome,
        result.sequence.len(),
        result.nodes_expanded,
        result.elapsed * 1e3
    );
    Ok(match result.outcome {
        Outcome::Success => 0,
        Outcome::Infeasible => EXIT_INFEASIBLE,
        Outcome::Failure => EXIT_FAILURE,
        Outcome::Timeout => EXIT_TIMEOUT,
    })
}

fn serde_json_string(result: &PlanResult) -> Result<String> {
    Ok(serde_json::to_string_pretty(result)?)
}

// Re-exported through the library elsewhere; the CLI uses serde_json only
// for the plan file format.
use cluttersort::serde_json;

fn cmd_simulate(args: SimulateArgs) -> Result<i32> {
    let instance = load_instance(&args.instance)?;
    let text = std::fs::read_to_string(&args.plan)
        .with_context(|| format!("reading {}", args.plan.display()))?;
    let plan: PlanResult = serde_json::from_str(&text)
        .with_context(|| format!("parsing plan {}", args.plan.display()))?;
    let timing = TimingParams {
        pick_duration: args.pick,
        place_duration: args.place,
        speed_override: args.speed,
    };
    let trace = cluttersort::simulate(&instance, &plan, &timing).context("simulation failed")?;
    std::fs::write(&args.out, trace.to_lines())
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "makespan={:.3} total_wait={:.3} events={}",
        trace.makespan,
        trace.total_wait(),
        trace.events.len()
    );
    Ok(0)
}

fn parse_grid(spec: &str) -> Result<Vec<(usize, usize)>> {
    let (ns, ks) = spec
        .split_once(['x', 'X'])
        .context("grid must look like \"10,15x1,3,5\"")?;
    let parse_list = |s: &str| -> Result<Vec<usize>> {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().context("bad grid number"))
            .collect()
    };
    let ns = parse_list(ns)?;
    let ks = parse_list(ks)?;
    if ns.is_empty() || ks.is_empty() {
        bail!("grid needs at least one N and one K");
    }
    Ok(ns
        .iter()
        .flat_map(|&n| ks.iter().map(move |&k| (n, k)))
        .collect())
}

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    let strategies = args
        .strategies
        .split(',')
        .map(|s| s.parse::<Strategy>().map_err(anyhow::Error::msg))
        .collect::<Result<Vec<_>>>()?;
    let cfg = BenchConfig {
        grid: parse_grid(&args.grid)?,
        seeds: args.seeds,
        strategies,
        time_limit: args.time_limit,
        m: args.m,
        gen: gen_params(args.workspace, None, None),
        jobs: args.jobs,
    };
    let rows = cluttersort::run_benchmark(&cfg).context("benchmark failed")?;

    let mut csv = String::from(BenchRow::csv_header());
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row.to_csv_line());
        csv.push('\n');
    }
    std::fs::write(&args.out, csv).with_context(|| format!("writing {}", args.out.display()))?;

    for ((n, k, strategy), cell) in summarize(&rows) {
        println!(
            "N={n:>2} K={k} {strategy:>5}: success {}/{} mean_len={:.2} sd={:.2} \
             mean_nodes={:.1} mean_rep={:.2} nonmonotone={:.2}",
            cell.successes,
            cell.runs,
            cell.mean_len,
            cell.sd_len,
            cell.mean_nodes,
            cell.mean_repetitiveness,
            cell.nonmonotone_ratio
        );
    }
    println!("{} rows -> {}", rows.len(), args.out.display());
    Ok(0)
}
