//! Browser demo for `logpath`.
//!
//! Every export takes plain values, returns a JSON string, and never
//! throws: failures come back as `{"error": "..."}`. The pure functions
//! behind the exports are public so they can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use logpath::blocks::{BlockOracle, CursorState, TableOracle, TraversalCursor};
use logpath::bounded::BoundedParams;
use logpath::connectivity::CachedDfsOracle;
use logpath::generate::{gen_bounded, DEFAULT_WEIGHTS};
use logpath::io::{parse_graph_file, write_graph_file};
use logpath::meter::{Meter, Tape};
use logpath::reference::hopcroft_tarjan;
use logpath::workbench::{bench, run_query, Algo, BenchConfig, OracleChoice, QueryConfig};
use logpath::{Graph, Vertex, Weight};

/// Largest graph a tour will animate.
pub const MAX_TOUR_VERTICES: usize = 400;
/// Largest size the scaling sweep accepts in the browser.
pub const MAX_SCALING_N: usize = 4096;

#[derive(Debug, Serialize)]
pub struct GraphDto {
    pub text: String,
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex, Weight)>,
    pub blocks: Vec<Vec<Vertex>>,
    pub articulation: Vec<Vertex>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveDto {
    pub algo: String,
    pub vertices: Vec<Vertex>,
    pub weight: Weight,
    pub segments: Vec<(Vertex, Vertex)>,
    pub high_water: usize,
    pub steps: u64,
    pub oracle_calls: u64,
}

#[derive(Debug, Serialize)]
pub struct TourStep {
    pub block: Vec<Vertex>,
    pub pivot: Vertex,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TourDto {
    pub steps: Vec<TourStep>,
    pub found: bool,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalingRow {
    pub n: usize,
    pub algo: String,
    pub high_water: usize,
    pub steps: u64,
    pub path_weight: Weight,
}

#[derive(Serialize)]
struct ErrorDto {
    error: String,
}

fn to_json<T: Serialize>(result: Result<T, String>) -> String {
    let encoded = match &result {
        Ok(value) => serde_json::to_string(value),
        Err(error) => serde_json::to_string(&ErrorDto {
            error: error.clone(),
        }),
    };
    encoded.unwrap_or_else(|e| format!("{{\"error\":\"{e}\"}}"))
}

fn parse(text: &str) -> Result<Graph, String> {
    parse_graph_file(text).map_err(|e| e.to_string())
}

pub fn describe_graph(g: &Graph) -> GraphDto {
    let d = hopcroft_tarjan(&g.full_view());
    GraphDto {
        text: write_graph_file(g),
        n: g.n(),
        edges: g.edges().collect(),
        blocks: d.blocks,
        articulation: d.art_points,
    }
}

pub fn generate_graph(n: usize, delta: usize, k: usize, seed: u64) -> Result<GraphDto, String> {
    let g = gen_bounded(n, BoundedParams::new(delta, k), seed, DEFAULT_WEIGHTS)
        .map_err(|e| e.to_string())?;
    Ok(describe_graph(&g))
}

pub fn solve_query(text: &str, s: Vertex, t: Vertex, algo: &str) -> Result<SolveDto, String> {
    let g = parse(text)?;
    let algo: Algo = algo.parse()?;
    let outcome = run_query(&g, s, t, &QueryConfig::new(algo)).map_err(|e| e.to_string())?;
    Ok(SolveDto {
        algo: algo.to_string(),
        vertices: outcome.path.vertices,
        weight: outcome.path.weight,
        segments: outcome.path.segments,
        high_water: outcome.meter.high_water,
        steps: outcome.meter.steps,
        oracle_calls: outcome.meter.oracle_calls.total(),
    })
}

/// Blocks visited by a full block-tree tour of `s`'s component, in order,
/// and whether `t` was met on the way.
pub fn tour_component(text: &str, s: Vertex, t: Vertex) -> Result<TourDto, String> {
    let g = parse(text)?;
    if g.n() > MAX_TOUR_VERTICES {
        return Err(format!("tour is limited to {MAX_TOUR_VERTICES} vertices"));
    }
    for v in [s, t] {
        g.degree(v).map_err(|e| e.to_string())?;
    }
    let meter = Meter::new();
    let mut oracle = TableOracle::new(Tape::new(&g, &meter), CachedDfsOracle::new(&g));
    let mut cursor = TraversalCursor::component(&mut oracle, s, t).map_err(|e| e.to_string())?;
    let mut steps = Vec::new();
    while cursor.state() == CursorState::Running {
        let (v1, v2) = cursor.block();
        let block = (1..=g.n())
            .filter(|&v| oracle.is_in_block(v1, v2, v).unwrap_or(false))
            .collect();
        steps.push(TourStep {
            block,
            pivot: cursor.pivot(),
        });
        cursor.step(&mut oracle).map_err(|e| e.to_string())?;
    }
    // The closing step re-enters the first block; drop the repeat.
    if steps.len() > 1 {
        steps.pop();
    }
    Ok(TourDto {
        steps,
        found: cursor.state() == CursorState::Found,
    })
}

pub fn scaling_rows(
    delta: usize,
    k: usize,
    sizes: &[usize],
    seed: u64,
) -> Result<Vec<ScalingRow>, String> {
    if let Some(&n) = sizes.iter().find(|&&n| n > MAX_SCALING_N) {
        return Err(format!("size {n} exceeds {MAX_SCALING_N}"));
    }
    let config = BenchConfig {
        params: BoundedParams::new(delta, k),
        sizes: sizes.to_vec(),
        seeds: vec![seed],
        algos: vec![Algo::Bounded],
        oracle: OracleChoice::Dfs,
        timing: false,
    };
    let rows = bench(&config).map_err(|e| e.to_string())?;
    Ok(rows
        .into_iter()
        .map(|r| ScalingRow {
            n: r.n,
            algo: r.algo.to_string(),
            high_water: r.high_water,
            steps: r.steps,
            path_weight: r.path_weight,
        })
        .collect())
}

fn parse_sizes(sizes: &str) -> Result<Vec<usize>, String> {
    sizes
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("bad size {s:?}")))
        .collect()
}

#[wasm_bindgen]
pub fn generate(n: usize, delta: usize, k: usize, seed: u64) -> String {
    to_json(generate_graph(n, delta, k, seed))
}

#[wasm_bindgen]
pub fn inspect(text: &str) -> String {
    to_json(parse(text).map(|g| describe_graph(&g)))
}

#[wasm_bindgen]
pub fn solve(text: &str, s: usize, t: usize, algo: &str) -> String {
    to_json(solve_query(text, s, t, algo))
}

#[wasm_bindgen]
pub fn tour(text: &str, s: usize, t: usize) -> String {
    to_json(tour_component(text, s, t))
}

#[wasm_bindgen]
pub fn scaling(delta: usize, k: usize, sizes: &str, seed: u64) -> String {
    to_json(parse_sizes(sizes).and_then(|sizes| scaling_rows(delta, k, &sizes, seed)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BOWTIE: &str = "p 5 6\ne 1 2 1\ne 1 3 1\ne 2 3 1\ne 3 4 1\ne 3 5 1\ne 4 5 1\n";

    #[test]
    fn solve_bowtie_with_each_algorithm() {
        for algo in ["general", "bounded", "reference"] {
            let r = solve_query(BOWTIE, 1, 5, algo).unwrap();
            assert_eq!((r.vertices, r.weight), (vec![1, 3, 5], 2));
        }
        let json = solve(BOWTIE, 1, 5, "bounded");
        assert!(json.contains("\"highWater\""), "{json}");
    }

    #[test]
    fn errors_become_json() {
        assert!(solve("p 2 0\n", 1, 2, "general").contains("\"error\""));
        assert!(solve(BOWTIE, 1, 5, "dijkstra").contains("\"error\""));
        assert!(inspect("e 1 2 3\n").contains("\"error\""));
        assert!(scaling(3, 4, "64,x", 1).contains("\"error\""));
    }

    #[test]
    fn inspect_lists_blocks() {
        let g = parse(BOWTIE).unwrap();
        let d = describe_graph(&g);
        assert_eq!(d.blocks, vec![vec![1, 2, 3], vec![3, 4, 5]]);
        assert_eq!(d.articulation, vec![3]);
    }

    #[test]
    fn tour_visits_every_block_once() {
        let t = tour_component(BOWTIE, 1, 5).unwrap();
        assert!(t.found);
        let mut blocks: Vec<_> = t.steps.iter().map(|s| s.block.clone()).collect();
        blocks.sort();
        blocks.dedup();
        assert_eq!(blocks, vec![vec![1, 2, 3], vec![3, 4, 5]]);
        let text = "p 4 2\ne 1 2 1\ne 3 4 1\n";
        assert!(!tour_component(text, 1, 4).unwrap().found);
    }

    #[test]
    fn generated_graph_round_trips() {
        let d = generate_graph(30, 3, 4, 7).unwrap();
        assert_eq!(d.n, 30);
        let again = parse(&d.text).unwrap();
        assert_eq!(again.edges().collect::<Vec<_>>(), d.edges);
        assert!(d.blocks.iter().all(|b| b.len() <= 4));
    }

    #[test]
    fn scaling_is_linear_in_steps() {
        let rows = scaling_rows(3, 4, &[64, 128, 256], 1).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.high_water == rows[0].high_water));
        let per_n: Vec<f64> = rows.iter().map(|r| r.steps as f64 / r.n as f64).collect();
        let (lo, hi) = per_n
            .iter()
            .fold((f64::MAX, 0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        assert!(hi / lo < 3.0, "{per_n:?}");
    }
}
