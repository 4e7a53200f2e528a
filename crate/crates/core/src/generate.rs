//! Random graphs of bounded degree and block size.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bounded::BoundedParams;
use crate::graph::{Graph, GraphError, Vertex, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("no connected graph on {n} vertices has degree <= {delta} and blocks <= {k}")]
    Infeasible { n: usize, delta: usize, k: usize },
    #[error("empty weight range")]
    EmptyWeights,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub const DEFAULT_WEIGHTS: RangeInclusive<Weight> = 1..=9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Cycle,
    Clique,
}

/// Connected graph on `n` vertices with every degree `<= delta` and every
/// block `<= k` vertices, deterministic in `seed`.
///
/// Grows a block tree: each round attaches a fresh cycle or clique (a bridge
/// when it has two vertices) at a random vertex with spare degree. Labels are
/// shuffled at the end and weights drawn uniformly from `weights`.
pub fn gen_bounded(
    n: usize,
    params: BoundedParams,
    seed: u64,
    weights: RangeInclusive<Weight>,
) -> Result<Graph, GenError> {
    let BoundedParams { delta, k } = params;
    let feasible = n >= 1 && (n == 1 || (delta >= 1 && k >= 2)) && (n <= 2 || delta >= 2);
    if !feasible {
        return Err(GenError::Infeasible { n, delta, k });
    }
    if weights.is_empty() {
        return Err(GenError::EmptyWeights);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree = vec![0usize; n + 1];
    let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(2 * n);
    // Vertices with spare degree; order depends only on the seed.
    let mut open: Vec<Vertex> = vec![1];
    let mut count = 1;

    while count < n {
        let idx = rng.gen_range(0..open.len());
        let at = open[idx];
        let spare = delta - degree[at];
        let size = rng.gen_range(2..=k.min(n - count + 1));
        let mut shape = pick_shape(&mut rng, size, spare, delta);
        if let Some(chosen) = shape {
            let (used, fresh_full) = match chosen {
                Shape::Cycle => (2, delta == 2),
                Shape::Clique => (size - 1, size - 1 == delta),
            };
            // Never close the last open vertex while more are needed.
            if open.len() == 1 && spare == used && fresh_full && count + size - 1 < n {
                shape = None;
            }
        }
        let members: Vec<Vertex> = match shape {
            None => vec![at, count + 1],
            Some(_) => std::iter::once(at).chain(count + 1..count + size).collect(),
        };
        let before = edges.len();
        match shape {
            None => edges.push((at, count + 1)),
            Some(Shape::Cycle) => {
                for i in 0..members.len() {
                    edges.push((members[i], members[(i + 1) % members.len()]));
                }
            }
            Some(Shape::Clique) => {
                for i in 0..members.len() {
                    for j in i + 1..members.len() {
                        edges.push((members[i], members[j]));
                    }
                }
            }
        }
        for &(u, v) in &edges[before..] {
            degree[u] += 1;
            degree[v] += 1;
        }
        if degree[at] == delta {
            open.swap_remove(idx);
        }
        open.extend(members[1..].iter().copied().filter(|&v| degree[v] < delta));
        count += members.len() - 1;
    }

    let mut labels: Vec<Vertex> = (1..=n).collect();
    labels.shuffle(&mut rng);
    let weighted: Vec<(Vertex, Vertex, Weight)> = edges
        .iter()
        .map(|&(u, v)| (labels[u - 1], labels[v - 1], rng.gen_range(weights.clone())))
        .collect();
    Ok(Graph::build(n, &weighted)?)
}

// `None` means a bridge to one fresh vertex.
fn pick_shape(rng: &mut ChaCha8Rng, size: usize, spare: usize, delta: usize) -> Option<Shape> {
    if size == 2 {
        return None;
    }
    let cycle = spare >= 2 && delta >= 2;
    let clique = spare >= size - 1 && delta >= size - 1;
    match (cycle, clique) {
        (true, true) if size > 3 => Some(if rng.gen_bool(0.5) {
            Shape::Cycle
        } else {
            Shape::Clique
        }),
        (true, _) => Some(Shape::Cycle),
        (false, true) => Some(Shape::Clique),
        (false, false) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounded::BoundedGraph;
    use crate::reference::hopcroft_tarjan;

    #[test]
    fn trees_when_blocks_are_edges() {
        let g = gen_bounded(50, BoundedParams::new(3, 2), 1, DEFAULT_WEIGHTS).unwrap();
        assert_eq!(g.edge_count(), 49);
        assert!(g.max_degree() <= 3);
    }

    #[test]
    fn validated_and_connected() {
        let params = BoundedParams::new(3, 4);
        let g = gen_bounded(200, params, 7, DEFAULT_WEIGHTS).unwrap();
        assert!(BoundedGraph::new(&g, params).is_ok());
        let d = hopcroft_tarjan(&g.full_view());
        assert!(d.blocks.iter().all(|b| b.len() <= 4));
        let mut dfs = crate::connectivity::DfsOracle::new();
        use crate::connectivity::Connectivity;
        assert!((2..=200).all(|v| dfs.connected(&g.full_view(), 1, v).unwrap()));
    }

    #[test]
    fn deterministic() {
        let p = BoundedParams::new(4, 6);
        let a = gen_bounded(120, p, 3, DEFAULT_WEIGHTS).unwrap();
        let b = gen_bounded(120, p, 3, DEFAULT_WEIGHTS).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
    }

    #[test]
    fn tight_degree_still_grows() {
        let p = BoundedParams::new(2, 5);
        let g = gen_bounded(40, p, 11, DEFAULT_WEIGHTS).unwrap();
        assert!(BoundedGraph::new(&g, p).is_ok());
        assert_eq!(g.n(), 40);
    }

    #[test]
    fn infeasible_parameters() {
        assert!(gen_bounded(5, BoundedParams::new(1, 4), 0, DEFAULT_WEIGHTS).is_err());
        assert!(gen_bounded(5, BoundedParams::new(3, 1), 0, DEFAULT_WEIGHTS).is_err());
        assert!(gen_bounded(2, BoundedParams::new(1, 2), 0, DEFAULT_WEIGHTS).is_ok());
        assert!(gen_bounded(1, BoundedParams::new(0, 1), 0, DEFAULT_WEIGHTS).is_ok());
    }
}
