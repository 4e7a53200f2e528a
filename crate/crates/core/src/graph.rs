//! Read-only weighted graphs and induced-subgraph views.
//!
//! Vertices are labelled `1..=n`. Every adjacency list is sorted by neighbour
//! label, so `adj(i, j)` (1-based `j`) has a fixed meaning that the block
//! stepping functions rely on.

use std::fmt;

use thiserror::Error;

/// Vertex label, `1..=n`.
pub type Vertex = usize;

/// Edge weight. Exact signed integers; see [`MAX_ABS_WEIGHT`].
pub type Weight = i64;

/// Largest accepted `|w|`. Keeps every simple-path sum far from overflow.
pub const MAX_ABS_WEIGHT: Weight = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex label {label} out of range 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("weight {0} exceeds the supported magnitude")]
    WeightOutOfRange(Weight),
    #[error("vertex {0} is deleted by the view")]
    Deleted(Vertex),
    #[error("neighbour index {index} out of range for vertex {vertex} (degree {degree})")]
    IndexOutOfRange {
        vertex: Vertex,
        index: usize,
        degree: usize,
    },
}

/// Immutable undirected graph in compressed adjacency form.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    // offsets[v]..offsets[v + 1] indexes the neighbours of v; slot 0 unused.
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    weights: Vec<Weight>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from undirected edges `(u, v, w)`.
    pub fn build(n: usize, edges: &[(Vertex, Vertex, Weight)]) -> Result<Self, GraphError> {
        let mut lists: Vec<Vec<(Vertex, Weight)>> = vec![Vec::new(); n + 1];
        for &(u, v, w) in edges {
            for label in [u, v] {
                if label == 0 || label > n {
                    return Err(GraphError::LabelOutOfRange { label, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if w.abs() > MAX_ABS_WEIGHT {
                return Err(GraphError::WeightOutOfRange(w));
            }
            lists[u].push((v, w));
            lists[v].push((u, w));
        }

        let mut offsets = Vec::with_capacity(n + 2);
        let mut targets = Vec::with_capacity(2 * edges.len());
        let mut weights = Vec::with_capacity(2 * edges.len());
        offsets.push(0);
        for (u, list) in lists.iter_mut().enumerate() {
            list.sort_unstable_by_key(|&(v, _)| v);
            if let Some(pair) = list.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(GraphError::DuplicateEdge(
                    u.min(pair[0].0),
                    u.max(pair[0].0),
                ));
            }
            for &(v, w) in list.iter() {
                targets.push(v);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        Ok(Graph {
            n,
            offsets,
            targets,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (1..=self.n).contains(&v)
    }

    /// Neighbour count of `v`.
    pub fn degree(&self, v: Vertex) -> Result<usize, GraphError> {
        self.check(v)?;
        Ok(self.degree_of(v))
    }

    /// The `j`-th neighbour of `v` (1-based) with its edge weight.
    pub fn adj(&self, v: Vertex, j: usize) -> Result<(Vertex, Weight), GraphError> {
        self.check(v)?;
        let degree = self.degree_of(v);
        if j == 0 || j > degree {
            return Err(GraphError::IndexOutOfRange {
                vertex: v,
                index: j,
                degree,
            });
        }
        Ok(self.adj_of(v, j))
    }

    /// Unchecked degree for callers that already validated `v`.
    #[inline]
    pub(crate) fn degree_of(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub(crate) fn adj_of(&self, v: Vertex, j: usize) -> (Vertex, Weight) {
        let at = self.offsets[v] + j - 1;
        (self.targets[at], self.weights[at])
    }

    /// Neighbours of `v` in ascending label order.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, Weight)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// Weight of edge `u`-`v`, if present.
    pub fn weight(&self, u: Vertex, v: Vertex) -> Option<Weight> {
        if !self.contains(u) || !self.contains(v) {
            return None;
        }
        let range = self.offsets[u]..self.offsets[u + 1];
        self.targets[range.clone()]
            .binary_search(&v)
            .ok()
            .map(|i| self.weights[range.start + i])
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, Weight)> + '_ {
        (1..=self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    pub fn max_degree(&self) -> usize {
        (1..=self.n).map(|v| self.degree_of(v)).max().unwrap_or(0)
    }

    pub fn full_view(&self) -> GraphView<'_> {
        GraphView {
            base: self,
            mode: ViewMode::Full,
        }
    }

    fn check(&self, v: Vertex) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::LabelOutOfRange {
                label: v,
                n: self.n,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViewMode {
    Full,
    DeleteOne(Vertex),
    /// Sorted, deduplicated kept labels.
    KeepSet(Vec<Vertex>),
}

/// Induced subgraph of a [`Graph`], recomputed on every access.
///
/// Labels keep their meaning from the base graph; deleted vertices simply
/// stop answering. `DeleteOne` costs one word; `KeepSet` stores its labels and
/// is only used for sets whose size is bounded by the algorithm parameters.
#[derive(Debug, Clone)]
pub struct GraphView<'g> {
    base: &'g Graph,
    mode: ViewMode,
}

impl<'g> GraphView<'g> {
    pub fn delete_one(base: &'g Graph, x: Vertex) -> Self {
        GraphView {
            base,
            mode: ViewMode::DeleteOne(x),
        }
    }

    pub fn keep_set(base: &'g Graph, kept: impl IntoIterator<Item = Vertex>) -> Self {
        let mut set: Vec<Vertex> = kept.into_iter().filter(|&v| base.contains(v)).collect();
        set.sort_unstable();
        set.dedup();
        GraphView {
            base,
            mode: ViewMode::KeepSet(set),
        }
    }

    pub fn base(&self) -> &'g Graph {
        self.base
    }

    pub fn mode(&self) -> &ViewMode {
        &self.mode
    }

    #[inline]
    pub fn is_alive(&self, v: Vertex) -> bool {
        self.base.contains(v)
            && match &self.mode {
                ViewMode::Full => true,
                ViewMode::DeleteOne(x) => v != *x,
                ViewMode::KeepSet(set) => set.binary_search(&v).is_ok(),
            }
    }

    /// Alive vertices in ascending order.
    pub fn vertices(&self) -> Box<dyn Iterator<Item = Vertex> + '_> {
        match &self.mode {
            ViewMode::KeepSet(set) => Box::new(set.iter().copied()),
            _ => Box::new((1..=self.base.n).filter(move |&v| self.is_alive(v))),
        }
    }

    /// Neighbours of `v` that survive the view, ascending.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, Weight)> + '_ {
        self.base
            .neighbors(v)
            .filter(move |&(u, _)| self.is_alive(u))
    }

    pub fn degree(&self, v: Vertex) -> Result<usize, GraphError> {
        self.check(v)?;
        Ok(self.neighbors(v).count())
    }

    pub fn adj(&self, v: Vertex, j: usize) -> Result<(Vertex, Weight), GraphError> {
        self.check(v)?;
        if j == 0 {
            return Err(GraphError::IndexOutOfRange {
                vertex: v,
                index: j,
                degree: self.neighbors(v).count(),
            });
        }
        self.neighbors(v)
            .nth(j - 1)
            .ok_or_else(|| GraphError::IndexOutOfRange {
                vertex: v,
                index: j,
                degree: self.neighbors(v).count(),
            })
    }

    fn check(&self, v: Vertex) -> Result<(), GraphError> {
        if !self.base.contains(v) {
            Err(GraphError::LabelOutOfRange {
                label: v,
                n: self.base.n,
            })
        } else if !self.is_alive(v) {
            Err(GraphError::Deleted(v))
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn p3() -> Graph {
        Graph::build(3, &[(1, 2, 1), (2, 3, 1)]).unwrap()
    }

    pub fn k3() -> Graph {
        Graph::build(3, &[(1, 2, 1), (2, 3, 1), (1, 3, 1)]).unwrap()
    }

    pub fn bowtie() -> Graph {
        Graph::build(
            5,
            &[
                (1, 2, 1),
                (2, 3, 1),
                (1, 3, 1),
                (3, 4, 1),
                (4, 5, 1),
                (3, 5, 1),
            ],
        )
        .unwrap()
    }

    /// Triangles {1,2,3} and {6,7,8} joined by the bridge 3-6; 4 and 5 hang off 2 and 7.
    pub fn bridged_triangles() -> Graph {
        Graph::build(
            8,
            &[
                (1, 2, 1),
                (2, 3, 1),
                (1, 3, 1),
                (3, 6, 1),
                (6, 7, 1),
                (7, 8, 1),
                (6, 8, 1),
                (2, 4, 1),
                (7, 5, 1),
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            Graph::build(3, &[(1, 4, 1)]),
            Err(GraphError::LabelOutOfRange { label: 4, n: 3 })
        );
        assert_eq!(
            Graph::build(3, &[(0, 1, 1)]),
            Err(GraphError::LabelOutOfRange { label: 0, n: 3 })
        );
        assert_eq!(Graph::build(3, &[(2, 2, 1)]), Err(GraphError::SelfLoop(2)));
        assert_eq!(
            Graph::build(3, &[(1, 2, 1), (2, 1, 5)]),
            Err(GraphError::DuplicateEdge(1, 2))
        );
        assert!(matches!(
            Graph::build(2, &[(1, 2, MAX_ABS_WEIGHT + 1)]),
            Err(GraphError::WeightOutOfRange(_))
        ));
    }

    #[test]
    fn adjacency_is_sorted() {
        assert_eq!(k3().adj(3, 1), Ok((1, 1)));
        assert_eq!(bowtie().adj(3, 3), Ok((4, 1)));
        assert_eq!(bowtie().degree(3), Ok(4));
        assert_eq!(p3().degree(2), Ok(2));
        let g = bowtie();
        let order: Vec<_> = g.neighbors(3).map(|(v, _)| v).collect();
        assert_eq!(order, vec![1, 2, 4, 5]);
    }

    #[test]
    fn adj_index_errors() {
        let g = p3();
        assert!(matches!(
            g.adj(1, 0),
            Err(GraphError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            g.adj(1, 2),
            Err(GraphError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            g.degree(9),
            Err(GraphError::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn delete_one_view() {
        let g = k3();
        let view = GraphView::delete_one(&g, 2);
        assert_eq!(view.adj(1, 1), Ok((3, 1)));
        assert_eq!(view.degree(1), Ok(1));
        assert_eq!(view.degree(2), Err(GraphError::Deleted(2)));
        assert_eq!(view.adj(2, 1), Err(GraphError::Deleted(2)));

        let b = bowtie();
        let view = GraphView::delete_one(&b, 3);
        assert_eq!(view.degree(4), Ok(1));
    }

    #[test]
    fn keep_set_view() {
        let g = bowtie();
        let view = GraphView::keep_set(&g, [5, 3, 4, 3]);
        assert_eq!(view.vertices().collect::<Vec<_>>(), vec![3, 4, 5]);
        assert_eq!(view.degree(3), Ok(2));
        assert_eq!(view.adj(3, 1), Ok((4, 1)));
        assert_eq!(view.degree(1), Err(GraphError::Deleted(1)));
    }

    #[test]
    fn weights_and_edges() {
        let g = Graph::build(3, &[(3, 1, -4), (2, 1, 7)]).unwrap();
        assert_eq!(g.weight(1, 3), Some(-4));
        assert_eq!(g.weight(3, 1), Some(-4));
        assert_eq!(g.weight(2, 3), None);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2, 7), (1, 3, -4)]);
        assert_eq!(g.edge_count(), 2);
    }
}
