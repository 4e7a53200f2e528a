//! Unmetered exact baselines: Hopcroft–Tarjan block decomposition and
//! Bellman–Ford shortest paths.
//!
//! These stand in for the black-box subroutines the metered algorithms call
//! and double as test ground truth.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::blocks::BlockId;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphView, Vertex, Weight};

/// Blocks (biconnected components) and articulation points of a view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Vertex sets, each ascending; ordered by [`BlockId`].
    pub blocks: Vec<Vec<Vertex>>,
    /// Ascending.
    pub art_points: Vec<Vertex>,
    vertex_to_blocks: BTreeMap<Vertex, Vec<usize>>,
}

impl BlockDecomposition {
    /// Indices into `blocks` of the blocks containing `v`.
    pub fn blocks_of(&self, v: Vertex) -> &[usize] {
        self.vertex_to_blocks
            .get(&v)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn is_articulation(&self, v: Vertex) -> bool {
        self.art_points.binary_search(&v).is_ok()
    }

    pub fn block_id(&self, index: usize) -> BlockId {
        BlockId::of_sorted(&self.blocks[index])
    }

    /// Index of the block containing both `u` and `v`, if any.
    pub fn shared_block(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let bv = self.blocks_of(v);
        self.blocks_of(u).iter().copied().find(|b| bv.contains(b))
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Hopcroft–Tarjan lowpoint DFS, iterative, over any view.
pub fn hopcroft_tarjan(view: &GraphView<'_>) -> BlockDecomposition {
    let verts: Vec<Vertex> = view.vertices().collect();
    let local = |v: Vertex| verts.binary_search(&v).ok();
    let adjacency: Vec<Vec<usize>> = verts
        .iter()
        .map(|&v| view.neighbors(v).filter_map(|(w, _)| local(w)).collect())
        .collect();

    let size = verts.len();
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; size];
    let mut low = vec![0usize; size];
    let mut clock = 0usize;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut blocks: Vec<Vec<Vertex>> = Vec::new();
    // (vertex, parent, next neighbour position)
    let mut frames: Vec<(usize, usize, usize)> = Vec::new();

    for root in 0..size {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        frames.push((root, UNSEEN, 0));
        while let Some(&mut (u, parent, ref mut pos)) = frames.last_mut() {
            if *pos < adjacency[u].len() {
                let w = adjacency[u][*pos];
                *pos += 1;
                if disc[w] == UNSEEN {
                    edges.push((u, w));
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    frames.push((w, u, 0));
                } else if w != parent && disc[w] < disc[u] {
                    edges.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
                continue;
            }
            frames.pop();
            if parent == UNSEEN {
                continue;
            }
            low[parent] = low[parent].min(low[u]);
            if low[u] >= disc[parent] {
                let mut members = Vec::new();
                while let Some((a, b)) = edges.pop() {
                    members.push(verts[a]);
                    members.push(verts[b]);
                    if (a, b) == (parent, u) {
                        break;
                    }
                }
                members.sort_unstable();
                members.dedup();
                blocks.push(members);
            }
        }
    }

    blocks.sort_by_key(|b| BlockId::of_sorted(b));
    let mut vertex_to_blocks: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (i, block) in blocks.iter().enumerate() {
        for &v in block {
            vertex_to_blocks.entry(v).or_default().push(i);
        }
    }
    let art_points = vertex_to_blocks
        .iter()
        .filter(|(_, bs)| bs.len() >= 2)
        .map(|(&v, _)| v)
        .collect();
    BlockDecomposition {
        blocks,
        art_points,
        vertex_to_blocks,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Distance {
    Path { weight: Weight, path: Vec<Vertex> },
    Unreachable,
    NegativeCycle,
}

impl Distance {
    pub fn weight(&self) -> Option<Weight> {
        match self {
            Distance::Path { weight, .. } => Some(*weight),
            _ => None,
        }
    }
}

/// Largest component searched exhaustively when negative edges are present.
pub const NEGATIVE_SEARCH_LIMIT: usize = 12;

/// Shortest simple `s`-`t` path over the whole graph.
pub fn bellman_ford_full(g: &Graph, s: Vertex, t: Vertex) -> Result<Distance> {
    shortest_path_in(&g.full_view(), s, t)
}

/// Shortest simple `s`-`t` path inside a view.
///
/// With non-negative weights this is plain Bellman–Ford over both arc
/// directions. An undirected negative edge is itself a negative two-arc
/// cycle, so when the component of `s` has any negative edge the search
/// switches to exhaustive simple-cycle and simple-path enumeration, which is
/// exact for components up to [`NEGATIVE_SEARCH_LIMIT`] vertices. "Negative
/// cycle" then means a simple cycle of three or more edges.
pub fn shortest_path_in(view: &GraphView<'_>, s: Vertex, t: Vertex) -> Result<Distance> {
    for v in [s, t] {
        view.degree(v)?;
    }
    if s == t {
        return Ok(Distance::Path {
            weight: 0,
            path: vec![s],
        });
    }
    let component = component_of(view, s);
    if component.binary_search(&t).is_err() {
        return Ok(Distance::Unreachable);
    }
    let has_negative = component
        .iter()
        .any(|&u| view.neighbors(u).any(|(_, w)| w < 0));
    if has_negative {
        if component.len() > NEGATIVE_SEARCH_LIMIT {
            return Err(Error::NegativeSearchTooLarge {
                vertices: component.len(),
            });
        }
        if has_negative_simple_cycle(view, &component) {
            return Ok(Distance::NegativeCycle);
        }
        return Ok(best_simple_path(view, s, t));
    }
    Ok(bellman_ford_nonnegative(view, &component, s, t))
}

fn component_of(view: &GraphView<'_>, s: Vertex) -> Vec<Vertex> {
    let mut marked = vec![false; view.base().n() + 1];
    let mut members = vec![s];
    let mut stack = vec![s];
    marked[s] = true;
    while let Some(u) = stack.pop() {
        for (w, _) in view.neighbors(u) {
            if !marked[w] {
                marked[w] = true;
                members.push(w);
                stack.push(w);
            }
        }
    }
    members.sort_unstable();
    members
}

fn bellman_ford_nonnegative(
    view: &GraphView<'_>,
    verts: &[Vertex],
    s: Vertex,
    t: Vertex,
) -> Distance {
    let index = |v: Vertex| verts.binary_search(&v).expect("vertex in component");
    let mut dist: Vec<Option<Weight>> = vec![None; verts.len()];
    let mut pred: Vec<Option<Vertex>> = vec![None; verts.len()];
    dist[index(s)] = Some(0);
    for _ in 1..verts.len().max(2) {
        let mut changed = false;
        for (i, &u) in verts.iter().enumerate() {
            let Some(du) = dist[i] else { continue };
            for (w, weight) in view.neighbors(u) {
                let j = index(w);
                let candidate = du + weight;
                if dist[j].is_none_or(|dw| candidate < dw) {
                    dist[j] = Some(candidate);
                    pred[j] = Some(u);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let Some(weight) = dist[index(t)] else {
        return Distance::Unreachable;
    };
    let mut path = vec![t];
    let mut at = t;
    while at != s {
        at = pred[index(at)].expect("predecessor chain reaches the source");
        path.push(at);
    }
    path.reverse();
    Distance::Path { weight, path }
}

fn has_negative_simple_cycle(view: &GraphView<'_>, verts: &[Vertex]) -> bool {
    // Each cycle is rooted at its smallest vertex.
    fn extend(
        view: &GraphView<'_>,
        root: Vertex,
        at: Vertex,
        path: &mut Vec<Vertex>,
        weight: Weight,
    ) -> bool {
        for (w, ew) in view.neighbors(at) {
            if w == root && path.len() >= 3 && weight + ew < 0 {
                return true;
            }
            if w > root && !path.contains(&w) {
                path.push(w);
                let hit = extend(view, root, w, path, weight + ew);
                path.pop();
                if hit {
                    return true;
                }
            }
        }
        false
    }
    verts
        .iter()
        .any(|&root| extend(view, root, root, &mut vec![root], 0))
}

fn best_simple_path(view: &GraphView<'_>, s: Vertex, t: Vertex) -> Distance {
    fn extend(
        view: &GraphView<'_>,
        t: Vertex,
        path: &mut Vec<Vertex>,
        weight: Weight,
        best: &mut Option<(Weight, Vec<Vertex>)>,
    ) {
        let at = *path.last().expect("nonempty path");
        if at == t {
            if best.as_ref().is_none_or(|(bw, _)| weight < *bw) {
                *best = Some((weight, path.clone()));
            }
            return;
        }
        for (w, ew) in view.neighbors(at) {
            if !path.contains(&w) {
                path.push(w);
                extend(view, t, path, weight + ew, best);
                path.pop();
            }
        }
    }
    let mut best = None;
    extend(view, t, &mut vec![s], 0, &mut best);
    match best {
        Some((weight, path)) => Distance::Path { weight, path },
        None => Distance::Unreachable,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidPath {
    #[error("empty path")]
    Empty,
    #[error("path runs {first}..{last}, expected {s}..{t}")]
    WrongEndpoints {
        first: Vertex,
        last: Vertex,
        s: Vertex,
        t: Vertex,
    },
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(Vertex, Vertex),
}

/// Checks endpoints and adjacency; returns the summed weight.
pub fn validate_path(
    g: &Graph,
    path: &[Vertex],
    s: Vertex,
    t: Vertex,
) -> std::result::Result<Weight, InvalidPath> {
    let (&first, &last) = match (path.first(), path.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(InvalidPath::Empty),
    };
    if first != s || last != t {
        return Err(InvalidPath::WrongEndpoints { first, last, s, t });
    }
    path.windows(2).try_fold(0, |acc, pair| {
        g.weight(pair[0], pair[1])
            .map(|w| acc + w)
            .ok_or(InvalidPath::NotAdjacent(pair[0], pair[1]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn decomposition_examples() {
        let d = hopcroft_tarjan(&p3().full_view());
        assert_eq!(d.blocks, vec![vec![1, 2], vec![2, 3]]);
        assert_eq!(d.art_points, vec![2]);

        let d = hopcroft_tarjan(&k3().full_view());
        assert_eq!(d.blocks, vec![vec![1, 2, 3]]);
        assert!(d.art_points.is_empty());

        let d = hopcroft_tarjan(&bowtie().full_view());
        assert_eq!(d.blocks, vec![vec![1, 2, 3], vec![3, 4, 5]]);
        assert_eq!(d.art_points, vec![3]);
        assert_eq!(d.blocks_of(3), &[0, 1]);
        assert_eq!(d.shared_block(1, 4), None);
        assert_eq!(d.shared_block(4, 5), Some(1));
    }

    #[test]
    fn decomposition_skips_isolated_vertices() {
        let g = Graph::build(4, &[(1, 2, 1), (2, 3, 1)]).unwrap();
        let d = hopcroft_tarjan(&g.full_view());
        assert_eq!(d.blocks.len(), 2);
        assert!(d.blocks_of(4).is_empty());
    }

    #[test]
    fn decomposition_on_keep_set() {
        let g = bridged_triangles();
        let d = hopcroft_tarjan(&GraphView::keep_set(&g, [1, 2, 3, 6]));
        assert_eq!(d.blocks, vec![vec![1, 2, 3], vec![3, 6]]);
        assert_eq!(d.art_points, vec![3]);
    }

    #[test]
    fn bellman_ford_examples() {
        let b = bowtie();
        assert_eq!(
            bellman_ford_full(&b, 1, 5).unwrap(),
            Distance::Path {
                weight: 2,
                path: vec![1, 3, 5]
            }
        );
        assert_eq!(
            bellman_ford_full(&b, 4, 4).unwrap(),
            Distance::Path {
                weight: 0,
                path: vec![4]
            }
        );
        let g = Graph::build(4, &[(1, 2, 1), (2, 3, 1)]).unwrap();
        assert_eq!(bellman_ford_full(&g, 1, 4).unwrap(), Distance::Unreachable);
    }

    #[test]
    fn negative_edges() {
        let g = Graph::build(3, &[(1, 2, -1), (2, 3, 1), (1, 3, 1)]).unwrap();
        assert_eq!(
            bellman_ford_full(&g, 1, 3).unwrap(),
            Distance::Path {
                weight: 0,
                path: vec![1, 2, 3]
            }
        );
        let g = Graph::build(3, &[(1, 2, -2), (2, 3, 1), (1, 3, 0)]).unwrap();
        assert_eq!(
            bellman_ford_full(&g, 1, 3).unwrap(),
            Distance::NegativeCycle
        );
        // A negative bridge alone is not a cycle.
        let g = Graph::build(3, &[(1, 2, -5), (2, 3, -5)]).unwrap();
        assert_eq!(bellman_ford_full(&g, 1, 3).unwrap().weight(), Some(-10));
    }

    #[test]
    fn validate_examples() {
        let b = bowtie();
        assert_eq!(validate_path(&b, &[1, 3, 5], 1, 5), Ok(2));
        assert_eq!(validate_path(&b, &[2], 2, 2), Ok(0));
        assert_eq!(
            validate_path(&b, &[1, 4], 1, 4),
            Err(InvalidPath::NotAdjacent(1, 4))
        );
        assert_eq!(validate_path(&b, &[], 1, 4), Err(InvalidPath::Empty));
        assert!(matches!(
            validate_path(&b, &[1, 3], 1, 5),
            Err(InvalidPath::WrongEndpoints { .. })
        ));
    }
}
