//! Query dispatch, cross-verification corpora and scaling benchmarks.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounded::{shortest_path_bounded, BoundedGraph, BoundedParams};
use crate::connectivity::{CachedDfsOracle, ConnectivityOracle, RandomWalkOracle};
use crate::error::{Error, Result};
use crate::general::{shortest_path_general, BellmanFordBlocks};
use crate::generate::{gen_bounded, GenError, DEFAULT_WEIGHTS};
use crate::graph::{Graph, Vertex, Weight};
use crate::meter::{Meter, MeterReport, OracleCalls, SearchTrace};
use crate::path::PathReport;
use crate::reference::{bellman_ford_full, validate_path, Distance};
use crate::RunOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algo {
    General,
    Bounded,
    Reference,
}

impl Algo {
    pub const ALL: [Algo; 3] = [Algo::General, Algo::Bounded, Algo::Reference];

    pub fn name(self) -> &'static str {
        match self {
            Algo::General => "general",
            Algo::Bounded => "bounded",
            Algo::Reference => "reference",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// Connectivity oracle used by the general algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleChoice {
    /// Exact search. Component labels of each vertex-deleted view are
    /// cached for the duration of one query.
    Dfs,
    /// Random walks with budget `ceil(factor * n^3)`.
    Walk { seed: u64, factor: f64 },
}

impl OracleChoice {
    fn build(self, g: &Graph) -> ConnectivityOracle<'_> {
        match self {
            OracleChoice::Dfs => ConnectivityOracle::Cached(CachedDfsOracle::new(g)),
            OracleChoice::Walk { seed, factor } => {
                ConnectivityOracle::Walk(RandomWalkOracle::with_factor(seed, factor))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryConfig {
    pub algo: Algo,
    pub oracle: OracleChoice,
    /// Parameters for the bounded algorithm; inferred from the graph if absent.
    pub params: Option<BoundedParams>,
    pub run: RunOptions,
    /// Record the bounded algorithm's search trace.
    pub traced: bool,
}

impl QueryConfig {
    pub fn new(algo: Algo) -> Self {
        QueryConfig {
            algo,
            oracle: OracleChoice::Dfs,
            params: None,
            run: RunOptions::default(),
            traced: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryOutcome {
    pub path: PathReport,
    pub meter: MeterReport,
    pub trace: Option<SearchTrace>,
    /// Most register words actually live; `meter.high_water` also counts
    /// the declared register file.
    pub register_peak: usize,
    pub ball_checks: u64,
    pub ball_violations: u64,
}

/// Runs one metered `s`-`t` query. The reference algorithm is unmetered and
/// reports zeros.
pub fn run_query(g: &Graph, s: Vertex, t: Vertex, config: &QueryConfig) -> Result<QueryOutcome> {
    let meter = if config.traced {
        Meter::traced()
    } else {
        Meter::new()
    };
    let path = match config.algo {
        Algo::General => shortest_path_general(
            g,
            s,
            t,
            config.oracle.build(g),
            &mut BellmanFordBlocks,
            &meter,
            &config.run,
        )?,
        Algo::Bounded => {
            let params = config.params.unwrap_or_else(|| BoundedParams::of_graph(g));
            let bg = BoundedGraph::new(g, params)?;
            shortest_path_bounded(&bg, s, t, &meter, &config.run)?
        }
        Algo::Reference => reference_path(g, s, t)?,
    };
    Ok(QueryOutcome {
        path,
        meter: meter.report(g.n())?,
        trace: meter.take_trace(),
        register_peak: meter.bank.peak(),
        ball_checks: meter.ball_checks(),
        ball_violations: meter.ball_violations(),
    })
}

fn reference_path(g: &Graph, s: Vertex, t: Vertex) -> Result<PathReport> {
    match bellman_ford_full(g, s, t)? {
        Distance::Path { weight, path } => Ok(PathReport {
            vertices: path,
            weight,
            segments: vec![(s, t)],
        }),
        Distance::Unreachable => Err(Error::NoPath { s, t }),
        Distance::NegativeCycle => Err(Error::NegativeCycle { near: s }),
    }
}

/// Every connected graph on vertices `1..=n` with unit weights, one per edge
/// subset of the complete graph, in increasing subset order.
pub fn connected_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(Vertex, Vertex)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect();
    assert!(pairs.len() < 64, "corpus too large");
    (0u64..1 << pairs.len()).filter_map(move |mask| {
        let edges: Vec<(Vertex, Vertex, Weight)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &(u, v))| (u, v, 1))
            .collect();
        if !spans(n, &edges) {
            return None;
        }
        Some(Graph::build(n, &edges).expect("complete-graph subset is simple"))
    })
}

fn spans(n: usize, edges: &[(Vertex, Vertex, Weight)]) -> bool {
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for &(u, v, _) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components <= 1
}

/// Deliberate defects for checking that verification notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Bounded-algorithm weights are reported one too high on graphs with at
    /// least three vertices.
    BoundedWeightOffByOne,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Largest vertex count of the exhaustive corpus; 0 skips it.
    pub exhaustive_max_n: usize,
    /// Number of random bounded instances; 0 skips them.
    pub random_count: usize,
    pub seed: u64,
    pub pairs_per_instance: usize,
    pub random_max_n: usize,
    pub random_max_delta: usize,
    pub random_max_k: usize,
    pub oracle: OracleChoice,
    pub run: RunOptions,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            exhaustive_max_n: 5,
            random_count: 200,
            seed: 1,
            pairs_per_instance: 5,
            random_max_n: 40,
            random_max_delta: 4,
            random_max_k: 6,
            oracle: OracleChoice::Dfs,
            run: RunOptions::default(),
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub graph: Graph,
    pub s: Vertex,
    pub t: Vertex,
    pub algo: Algo,
    pub expected: String,
    pub got: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} on s={} t={}: expected {}, got {}",
            self.algo, self.s, self.t, self.expected, self.got
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub instances: usize,
    pub queries: usize,
    /// Verification stops at the first mismatch.
    pub mismatches: Vec<Mismatch>,
    pub ball_checks: u64,
    pub ball_violations: u64,
}

fn describe_expected(d: &Distance) -> String {
    match d {
        Distance::Path { weight, .. } => format!("weight {weight}"),
        Distance::Unreachable => "no path".into(),
        Distance::NegativeCycle => "negative cycle".into(),
    }
}

/// Checks one query against the reference distance; `None` when it agrees.
pub fn check_query(
    g: &Graph,
    s: Vertex,
    t: Vertex,
    algo: Algo,
    config: &VerifyConfig,
    expected: &Distance,
) -> (Option<String>, (u64, u64)) {
    let query = QueryConfig {
        oracle: config.oracle,
        run: config.run,
        ..QueryConfig::new(algo)
    };
    let outcome = run_query(g, s, t, &query).map(|mut o| {
        if algo == Algo::Bounded && config.fault == Some(Fault::BoundedWeightOffByOne) && g.n() >= 3
        {
            o.path.weight += 1;
        }
        o
    });
    let balls = outcome
        .as_ref()
        .map_or((0, 0), |o| (o.ball_checks, o.ball_violations));
    let problem = match (expected, &outcome) {
        (Distance::Path { weight, .. }, Ok(o)) => match validate_path(g, &o.path.vertices, s, t) {
            Err(e) => Some(format!("invalid path {:?}: {e}", o.path.vertices)),
            Ok(w) if w != o.path.weight => Some(format!(
                "path weighs {w} but reported weight {}",
                o.path.weight
            )),
            Ok(w) if w != *weight => Some(format!("weight {w}")),
            Ok(_) => None,
        },
        (Distance::Unreachable, Err(Error::NoPath { .. })) => None,
        (Distance::NegativeCycle, Err(Error::NegativeCycle { .. })) => None,
        (_, Ok(o)) => Some(format!("weight {}", o.path.weight)),
        (_, Err(e)) => Some(format!("error: {e}")),
    };
    (problem, balls)
}

/// Compares the general and bounded algorithms with the reference on the
/// exhaustive small-graph corpus, then on random bounded graphs.
pub fn verify(config: &VerifyConfig) -> VerifyReport {
    let mut report = VerifyReport::default();
    let check = |report: &mut VerifyReport, g: &Graph, pairs: &[(Vertex, Vertex)]| -> bool {
        report.instances += 1;
        for &(s, t) in pairs {
            let expected = match bellman_ford_full(g, s, t) {
                Ok(d) => d,
                Err(e) => {
                    report.mismatches.push(Mismatch {
                        graph: g.clone(),
                        s,
                        t,
                        algo: Algo::Reference,
                        expected: "a distance".into(),
                        got: format!("error: {e}"),
                    });
                    return false;
                }
            };
            for algo in [Algo::General, Algo::Bounded] {
                report.queries += 1;
                let (problem, (checks, violations)) = check_query(g, s, t, algo, config, &expected);
                report.ball_checks += checks;
                report.ball_violations += violations;
                if let Some(got) = problem {
                    report.mismatches.push(Mismatch {
                        graph: g.clone(),
                        s,
                        t,
                        algo,
                        expected: describe_expected(&expected),
                        got,
                    });
                    return false;
                }
            }
        }
        true
    };

    for n in 1..=config.exhaustive_max_n {
        let pairs: Vec<(Vertex, Vertex)> =
            (1..=n).flat_map(|s| (1..=n).map(move |t| (s, t))).collect();
        for g in connected_graphs(n) {
            if !check(&mut report, &g, &pairs) {
                return report;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.random_count {
        let g = random_instance(&mut rng, config);
        let pairs: Vec<(Vertex, Vertex)> = (0..config.pairs_per_instance)
            .map(|_| (rng.gen_range(1..=g.n()), rng.gen_range(1..=g.n())))
            .collect();
        if !check(&mut report, &g, &pairs) {
            return report;
        }
    }
    report
}

/// One instance of the random bounded corpus.
pub fn random_instance(rng: &mut ChaCha8Rng, config: &VerifyConfig) -> Graph {
    let delta = rng.gen_range(2..=config.random_max_delta.max(2));
    let k = rng.gen_range(2..=config.random_max_k.max(2));
    let n = rng.gen_range(1..=config.random_max_n.max(1));
    let seed = rng.gen();
    gen_bounded(n, BoundedParams::new(delta, k), seed, DEFAULT_WEIGHTS)
        .expect("delta >= 2 and k >= 2 admit every size")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub params: BoundedParams,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub algos: Vec<Algo>,
    pub oracle: OracleChoice,
    /// Record wall-clock time; otherwise the column is 0 and output is
    /// reproducible byte for byte.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub n: usize,
    pub seed: u64,
    pub algo: Algo,
    pub high_water: usize,
    pub steps: u64,
    pub oracle_calls: OracleCalls,
    pub path_weight: Weight,
    pub wall_millis: u64,
    /// Not part of the CSV.
    pub register_peak: usize,
    pub ball_checks: u64,
    pub ball_violations: u64,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str =
        "n,seed,algo,highWater,steps,oracleCalls,pathWeight,wallMillis";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.seed,
            self.algo,
            self.high_water,
            self.steps,
            self.oracle_calls.total(),
            self.path_weight,
            self.wall_millis
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error("n={n} seed={seed} {algo}: {source}")]
    Query {
        n: usize,
        seed: u64,
        algo: Algo,
        source: Error,
    },
}

/// Bench query on a generated graph: vertex 1 and the last vertex a
/// breadth-first search from it reaches. Labels are shuffled by the
/// generator, so 1 is a random vertex and the path between them is long.
pub fn bench_pair(g: &Graph) -> (Vertex, Vertex) {
    let mut seen = vec![false; g.n() + 1];
    let mut queue = std::collections::VecDeque::from([1]);
    seen[1] = true;
    let mut last = 1;
    while let Some(u) = queue.pop_front() {
        last = u;
        for (w, _) in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    (1, last)
}

/// One row per `(n, seed, algo)`, sorted in that order.
pub fn bench(config: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let mut sizes = config.sizes.clone();
    sizes.sort_unstable();
    let mut seeds = config.seeds.clone();
    seeds.sort_unstable();
    let mut algos = config.algos.clone();
    algos.sort_unstable();
    let mut rows = Vec::new();
    for &n in &sizes {
        for &seed in &seeds {
            let g = gen_bounded(n, config.params, seed, DEFAULT_WEIGHTS)?;
            let (s, t) = bench_pair(&g);
            for &algo in &algos {
                let query = QueryConfig {
                    oracle: config.oracle,
                    params: Some(config.params),
                    ..QueryConfig::new(algo)
                };
                let started = Instant::now();
                let outcome = run_query(&g, s, t, &query).map_err(|source| BenchError::Query {
                    n,
                    seed,
                    algo,
                    source,
                })?;
                let wall_millis = if config.timing {
                    started.elapsed().as_millis() as u64
                } else {
                    0
                };
                rows.push(BenchRow {
                    n,
                    seed,
                    algo,
                    high_water: outcome.meter.high_water,
                    steps: outcome.meter.steps,
                    oracle_calls: outcome.meter.oracle_calls,
                    path_weight: outcome.path.weight,
                    wall_millis,
                    register_peak: outcome.register_peak,
                    ball_checks: outcome.ball_checks,
                    ball_violations: outcome.ball_violations,
                });
            }
        }
    }
    Ok(rows)
}

/// Polynomial envelope `steps <= c * n^exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFit {
    pub exponent: u32,
    /// Largest `steps / n^exponent` among the calibration sizes.
    pub c: f64,
    /// Largest `steps / (c * n^exponent)` over the remaining sizes.
    pub worst_ratio: f64,
}

impl PolyFit {
    pub fn holds(&self) -> bool {
        self.worst_ratio <= 1.0
    }
}

/// Fits `c` on the `calibration` smallest sizes and checks the rest against
/// it. `samples` are `(n, steps)`; repeated sizes are averaged.
pub fn fit_polynomial(samples: &[(usize, u64)], exponent: u32, calibration: usize) -> PolyFit {
    let mut sizes: Vec<usize> = samples.iter().map(|&(n, _)| n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mean = |n: usize| {
        let xs: Vec<f64> = samples
            .iter()
            .filter(|&&(m, _)| m == n)
            .map(|&(_, s)| s as f64)
            .collect();
        xs.iter().sum::<f64>() / xs.len() as f64
    };
    let scaled = |n: usize| mean(n) / (n as f64).powi(exponent as i32);
    let split = calibration.min(sizes.len());
    let c = sizes[..split]
        .iter()
        .map(|&n| scaled(n))
        .fold(0.0, f64::max);
    let worst_ratio = sizes[split..]
        .iter()
        .map(|&n| scaled(n) / c)
        .fold(0.0, f64::max);
    PolyFit {
        exponent,
        c,
        worst_ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn corpus_sizes() {
        // Labeled connected graphs (OEIS A001187).
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs(n).count()).collect();
        assert_eq!(counts, vec![1, 1, 4, 38, 728]);
    }

    #[test]
    fn algorithms_agree_on_bowtie() {
        let g = bowtie();
        for algo in Algo::ALL {
            let o = run_query(&g, 1, 5, &QueryConfig::new(algo)).unwrap();
            assert_eq!((o.path.vertices, o.path.weight), (vec![1, 3, 5], 2));
        }
    }

    #[test]
    fn verify_small_corpus_and_fault() {
        let config = VerifyConfig {
            exhaustive_max_n: 4,
            random_count: 20,
            ..VerifyConfig::default()
        };
        let report = verify(&config);
        assert!(report.mismatches.is_empty(), "{:?}", report.mismatches);
        assert_eq!(report.instances, 1 + 1 + 4 + 38 + 20);
        let faulty = verify(&VerifyConfig {
            fault: Some(Fault::BoundedWeightOffByOne),
            ..config
        });
        assert_eq!(faulty.mismatches.len(), 1);
        assert_eq!(faulty.mismatches[0].algo, Algo::Bounded);
    }

    #[test]
    fn bench_rows_sorted_and_reproducible() {
        let config = BenchConfig {
            params: BoundedParams::new(3, 4),
            sizes: vec![64, 32],
            seeds: vec![2, 1],
            algos: vec![Algo::Reference, Algo::Bounded],
            oracle: OracleChoice::Dfs,
            timing: false,
        };
        let rows = bench(&config).unwrap();
        let keys: Vec<(usize, u64, Algo)> = rows.iter().map(|r| (r.n, r.seed, r.algo)).collect();
        assert_eq!(keys[0], (32, 1, Algo::Bounded));
        assert_eq!(keys.len(), 8);
        assert_eq!(rows, bench(&config).unwrap());
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].path_weight, pair[1].path_weight);
        }
    }

    #[test]
    fn polynomial_fit() {
        let samples = [(2, 8), (4, 64), (8, 512), (8, 512)];
        let fit = fit_polynomial(&samples, 3, 2);
        assert_eq!(fit.c, 1.0);
        assert!(fit.holds());
        let fit = fit_polynomial(&[(2, 8), (4, 64), (8, 1024)], 3, 2);
        assert!(!fit.holds());
    }
}
