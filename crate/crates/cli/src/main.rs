use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use logpath::bounded::BoundedParams;
use logpath::connectivity::DEFAULT_WALK_FACTOR;
use logpath::generate::{gen_bounded, DEFAULT_WEIGHTS};
use logpath::io::{parse_graph_file, write_graph_file};
use logpath::meter::MeterReport;
use logpath::reference::hopcroft_tarjan;
use logpath::workbench::{
    bench, fit_polynomial, run_query, verify, Algo, BenchConfig, BenchRow, Fault, OracleChoice,
    QueryConfig, VerifyConfig,
};
use logpath::{Error, Graph, RunOptions, Vertex};

const EXIT_FAILURE: u8 = 1;
const EXIT_NO_PATH: u8 = 2;
const EXIT_NEGATIVE_CYCLE: u8 = 3;

/// Shortest paths with a constant number of working registers.
///
/// Set LOGPATH_DEBUG=1 to re-check internal invariants during queries.
#[derive(Debug, Parser)]
#[command(name = "logpath", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random connected graph of bounded degree and block size.
    Gen(GenArgs),
    /// Find a shortest path between two vertices.
    Path(PathArgs),
    /// Print the blocks and articulation points of a graph.
    Blocks { file: PathBuf },
    /// Cross-check both algorithms against Bellman-Ford.
    Verify(VerifyArgs),
    /// Measure registers and steps on generated graphs; writes CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct Bounds {
    /// Maximum vertex degree.
    #[arg(long)]
    delta: Option<usize>,
    /// Maximum block size.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    delta: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = *DEFAULT_WEIGHTS.start(), allow_hyphen_values = true)]
    min_weight: i64,
    #[arg(long, default_value_t = *DEFAULT_WEIGHTS.end(), allow_hyphen_values = true)]
    max_weight: i64,
    /// Write here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    General,
    Bounded,
    Reference,
}

impl From<AlgoArg> for Algo {
    fn from(a: AlgoArg) -> Algo {
        match a {
            AlgoArg::General => Algo::General,
            AlgoArg::Bounded => Algo::Bounded,
            AlgoArg::Reference => Algo::Reference,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    Dfs,
    Walk,
}

#[derive(Debug, Args)]
struct OracleOpts {
    /// Connectivity oracle of the general algorithm.
    #[arg(long, value_enum, default_value_t = OracleArg::Dfs)]
    oracle: OracleArg,
    /// Random-walk length per query, as a multiple of n^3.
    #[arg(long, default_value_t = DEFAULT_WALK_FACTOR)]
    walk_budget: f64,
    /// Seed for the random-walk oracle.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl OracleOpts {
    fn choice(&self) -> anyhow::Result<OracleChoice> {
        Ok(match self.oracle {
            OracleArg::Dfs => OracleChoice::Dfs,
            OracleArg::Walk => {
                if !(self.walk_budget > 0.0 && self.walk_budget.is_finite()) {
                    bail!("--walk-budget must be a positive number");
                }
                OracleChoice::Walk {
                    seed: self.seed,
                    factor: self.walk_budget,
                }
            }
        })
    }
}

#[derive(Debug, Args)]
struct PathArgs {
    file: PathBuf,
    s: Vertex,
    t: Vertex,
    #[arg(long, value_enum, default_value_t = AlgoArg::Bounded)]
    algo: AlgoArg,
    /// Bounds for the bounded algorithm; inferred from the graph if omitted.
    #[command(flatten)]
    bounds: Bounds,
    #[command(flatten)]
    oracle: OracleOpts,
    /// Write the meter CSV here instead of stderr.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Check every connected graph on up to N vertices.
    #[arg(long, default_value_t = 5)]
    exhaustive: usize,
    /// Number of random bounded instances.
    #[arg(long, default_value_t = 200)]
    random: usize,
    #[command(flatten)]
    oracle: OracleOpts,
    /// Corrupt bounded-algorithm results, to check the harness.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 3)]
    delta: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Graph sizes.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "64,128,256,512,1024,2048,4096,8192"
    )]
    sizes: Vec<usize>,
    /// Generator seeds.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    seeds: Vec<u64>,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "bounded,reference"
    )]
    algo: Vec<AlgoArg>,
    #[arg(long, value_enum, default_value_t = OracleArg::Dfs)]
    oracle: OracleArg,
    #[arg(long, default_value_t = DEFAULT_WALK_FACTOR)]
    walk_budget: f64,
    /// Polynomial degree of the step envelope fitted for the general algorithm.
    #[arg(long, default_value_t = 5)]
    fit_exponent: u32,
    /// Report 0 wall-clock milliseconds, making the output reproducible.
    #[arg(long)]
    no_timing: bool,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_FAILURE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let code = match e.downcast_ref::<Error>() {
                Some(Error::NoPath { .. }) => EXIT_NO_PATH,
                Some(Error::NegativeCycle { .. }) => EXIT_NEGATIVE_CYCLE,
                _ => EXIT_FAILURE,
            };
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Path(args) => cmd_path(args),
        Command::Blocks { file } => cmd_blocks(&file),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph_file(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing stdout"),
    }
}

fn cmd_gen(args: GenArgs) -> anyhow::Result<ExitCode> {
    if args.min_weight > args.max_weight {
        bail!("--min-weight exceeds --max-weight");
    }
    let params = BoundedParams::new(args.delta, args.k);
    let g = gen_bounded(args.n, params, args.seed, args.min_weight..=args.max_weight)?;
    let text = format!(
        "c gen n={} delta={} k={} seed={}\n{}",
        args.n,
        args.delta,
        args.k,
        args.seed,
        write_graph_file(&g)
    );
    write_output(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_path(args: PathArgs) -> anyhow::Result<ExitCode> {
    let g = read_graph(&args.file)?;
    let params = match (args.bounds.delta, args.bounds.k) {
        (None, None) => None,
        (delta, k) => {
            let inferred = BoundedParams::of_graph(&g);
            Some(BoundedParams::new(
                delta.unwrap_or(inferred.delta),
                k.unwrap_or(inferred.k),
            ))
        }
    };
    let config = QueryConfig {
        oracle: args.oracle.choice()?,
        params,
        run: RunOptions::from_env(),
        ..QueryConfig::new(args.algo.into())
    };
    let outcome = run_query(&g, args.s, args.t, &config)?;
    println!("{}", outcome.path);
    let meter = format!("{}\n{}\n", MeterReport::CSV_HEADER, outcome.meter.csv_row());
    match args.csv {
        Some(p) => fs::write(&p, meter).with_context(|| format!("writing {}", p.display()))?,
        None => eprint!("{meter}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_blocks(file: &Path) -> anyhow::Result<ExitCode> {
    let g = read_graph(file)?;
    let d = hopcroft_tarjan(&g.full_view());
    let join = |vs: &[Vertex]| vs.iter().map(|v| format!(" {v}")).collect::<String>();
    let mut out = format!(
        "c blocks={} articulation={}\n",
        d.blocks.len(),
        d.art_points.len()
    );
    for block in &d.blocks {
        out += &format!("b{}\n", join(block));
    }
    out += &format!("a{}\n", join(&d.art_points));
    write_output(None, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    if args.exhaustive == 0 && args.random == 0 {
        bail!("empty corpus: give --exhaustive or --random a positive value");
    }
    let config = VerifyConfig {
        exhaustive_max_n: args.exhaustive,
        random_count: args.random,
        seed: args.oracle.seed,
        oracle: args.oracle.choice()?,
        run: RunOptions::from_env(),
        fault: args.inject_fault.then_some(Fault::BoundedWeightOffByOne),
        ..VerifyConfig::default()
    };
    let report = verify(&config);
    println!(
        "c instances={} queries={} ball_violations={}",
        report.instances, report.queries, report.ball_violations
    );
    match report.mismatches.first() {
        None => {
            println!("ok: 0 mismatches");
            Ok(ExitCode::SUCCESS)
        }
        Some(m) => {
            println!("mismatch: {m}");
            println!("c reproducer: {} s={} t={}", m.algo, m.s, m.t);
            print!("{}", write_graph_file(&m.graph));
            Ok(ExitCode::from(EXIT_FAILURE))
        }
    }
}

fn cmd_bench(args: BenchArgs) -> anyhow::Result<ExitCode> {
    if args.sizes.is_empty() || args.seeds.is_empty() || args.algo.is_empty() {
        bail!("--sizes, --seeds and --algo must be nonempty");
    }
    let oracle = OracleOpts {
        oracle: args.oracle,
        walk_budget: args.walk_budget,
        seed: 1,
    }
    .choice()?;
    let config = BenchConfig {
        params: BoundedParams::new(args.delta, args.k),
        sizes: args.sizes,
        seeds: args.seeds,
        algos: args.algo.iter().map(|&a| a.into()).collect(),
        oracle,
        timing: !args.no_timing,
    };
    let rows = bench(&config)?;
    let mut csv = format!("{}\n", BenchRow::CSV_HEADER);
    for row in &rows {
        csv += &row.csv_row();
        csv.push('\n');
    }
    write_output(args.csv.as_deref(), &csv)?;

    let general: Vec<(usize, u64)> = rows
        .iter()
        .filter(|r| r.algo == Algo::General)
        .map(|r| (r.n, r.steps))
        .collect();
    if !general.is_empty() {
        let fit = fit_polynomial(&general, args.fit_exponent, 2);
        eprintln!(
            "c general: steps <= C*n^{} with C={:.6e} (fitted on the two smallest sizes); worst ratio on the rest {:.3}",
            fit.exponent, fit.c, fit.worst_ratio
        );
    }
    Ok(ExitCode::SUCCESS)
}
