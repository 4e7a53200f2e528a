//! Undirected st-connectivity oracles.
//!
//! [`DfsOracle`] is exact. [`RandomWalkOracle`] only ever errs towards
//! "not connected": a walk that reaches the target proves connectivity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphError, GraphView, Vertex, ViewMode};

pub trait Connectivity {
    fn connected(
        &mut self,
        view: &GraphView<'_>,
        v1: Vertex,
        v2: Vertex,
    ) -> Result<bool, GraphError>;
}

fn check_alive(view: &GraphView<'_>, v: Vertex) -> Result<(), GraphError> {
    if !view.base().contains(v) {
        Err(GraphError::LabelOutOfRange {
            label: v,
            n: view.base().n(),
        })
    } else if !view.is_alive(v) {
        Err(GraphError::Deleted(v))
    } else {
        Ok(())
    }
}

/// Iterative depth-first search with reusable epoch-stamped buffers.
#[derive(Debug, Default, Clone)]
pub struct DfsOracle {
    seen: Vec<u32>,
    epoch: u32,
    stack: Vec<Vertex>,
}

impl DfsOracle {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Connectivity for DfsOracle {
    fn connected(
        &mut self,
        view: &GraphView<'_>,
        v1: Vertex,
        v2: Vertex,
    ) -> Result<bool, GraphError> {
        check_alive(view, v1)?;
        check_alive(view, v2)?;
        if v1 == v2 {
            return Ok(true);
        }
        let n = view.base().n();
        if self.seen.len() < n + 1 {
            self.seen = vec![0; n + 1];
            self.epoch = 0;
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.stack.clear();
        self.stack.push(v1);
        self.seen[v1] = epoch;
        while let Some(u) = self.stack.pop() {
            for (w, _) in view.neighbors(u) {
                if self.seen[w] != epoch {
                    if w == v2 {
                        return Ok(true);
                    }
                    self.seen[w] = epoch;
                    self.stack.push(w);
                }
            }
        }
        Ok(false)
    }
}

/// Exact oracle for one graph that labels the components of `G` and of each
/// `G - x` once and answers later queries on those views by lookup.
///
/// Queries on other graphs or on key-set views fall back to plain DFS.
#[derive(Debug, Clone)]
pub struct CachedDfsOracle<'g> {
    graph: &'g Graph,
    // Index 0 is the full graph, index x is `G - x`. Label 0 marks deleted.
    labels: Vec<Option<Vec<u32>>>,
    dfs: DfsOracle,
}

impl<'g> CachedDfsOracle<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        CachedDfsOracle {
            graph,
            labels: vec![None; graph.n() + 1],
            dfs: DfsOracle::new(),
        }
    }

    fn labels_for(&mut self, view: &GraphView<'_>, slot: usize) -> &[u32] {
        let n = self.graph.n();
        self.labels[slot].get_or_insert_with(|| {
            let mut label = vec![0u32; n + 1];
            let mut stack = Vec::new();
            let mut next = 0;
            for root in view.vertices() {
                if label[root] != 0 {
                    continue;
                }
                next += 1;
                label[root] = next;
                stack.push(root);
                while let Some(u) = stack.pop() {
                    for (w, _) in view.neighbors(u) {
                        if label[w] == 0 {
                            label[w] = next;
                            stack.push(w);
                        }
                    }
                }
            }
            label
        })
    }
}

impl Connectivity for CachedDfsOracle<'_> {
    fn connected(
        &mut self,
        view: &GraphView<'_>,
        v1: Vertex,
        v2: Vertex,
    ) -> Result<bool, GraphError> {
        let slot = match view.mode() {
            _ if !std::ptr::eq(view.base(), self.graph) => None,
            ViewMode::Full => Some(0),
            ViewMode::DeleteOne(x) => Some(*x),
            ViewMode::KeepSet(_) => None,
        };
        let Some(slot) = slot else {
            return self.dfs.connected(view, v1, v2);
        };
        check_alive(view, v1)?;
        check_alive(view, v2)?;
        let label = self.labels_for(view, slot);
        Ok(label[v1] == label[v2])
    }
}

/// Default walk length multiplier: budget is `ceil(c * n^3)`.
pub const DEFAULT_WALK_FACTOR: f64 = 64.0;

/// Walks at most `budget` steps from `v1`; true iff `v2` is reached.
///
/// State is the current vertex, the step count and the generator.
pub fn random_walk_connected(
    view: &GraphView<'_>,
    v1: Vertex,
    v2: Vertex,
    budget: u64,
    seed: u64,
) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    walk(view, v1, v2, budget, &mut rng)
}

fn walk(view: &GraphView<'_>, v1: Vertex, v2: Vertex, budget: u64, rng: &mut ChaCha8Rng) -> bool {
    let mut at = v1;
    for _ in 0..budget {
        if at == v2 {
            return true;
        }
        let degree = view.neighbors(at).count();
        if degree == 0 {
            return false;
        }
        let pick = rng.gen_range(0..degree);
        at = view
            .neighbors(at)
            .nth(pick)
            .map(|(w, _)| w)
            .expect("pick below degree");
    }
    at == v2
}

/// Random-walk oracle with a per-query budget of `ceil(factor * n^3)`.
///
/// For a connected pair the expected hitting time is below `2m(n-1) < n^3`,
/// so by Markov's inequality a single query errs with probability at most
/// `1 / factor`.
#[derive(Debug, Clone)]
pub struct RandomWalkOracle {
    rng: ChaCha8Rng,
    factor: f64,
}

impl RandomWalkOracle {
    pub fn new(seed: u64) -> Self {
        Self::with_factor(seed, DEFAULT_WALK_FACTOR)
    }

    pub fn with_factor(seed: u64, factor: f64) -> Self {
        RandomWalkOracle {
            rng: ChaCha8Rng::seed_from_u64(seed),
            factor: factor.max(f64::MIN_POSITIVE),
        }
    }

    pub fn budget(&self, n: usize) -> u64 {
        let n = n as f64;
        (self.factor * n * n * n).ceil().max(1.0) as u64
    }

    /// Markov bound on the per-query error probability.
    pub fn error_bound(&self) -> f64 {
        (1.0 / self.factor).min(1.0)
    }
}

impl Connectivity for RandomWalkOracle {
    fn connected(
        &mut self,
        view: &GraphView<'_>,
        v1: Vertex,
        v2: Vertex,
    ) -> Result<bool, GraphError> {
        check_alive(view, v1)?;
        check_alive(view, v2)?;
        let budget = self.budget(view.base().n());
        Ok(walk(view, v1, v2, budget, &mut self.rng))
    }
}

/// Runtime-selected oracle, as chosen on the command line.
// One lives per query, so the unboxed walk state costs nothing.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum ConnectivityOracle<'g> {
    Dfs(DfsOracle),
    Cached(CachedDfsOracle<'g>),
    Walk(RandomWalkOracle),
}

impl Connectivity for ConnectivityOracle<'_> {
    fn connected(
        &mut self,
        view: &GraphView<'_>,
        v1: Vertex,
        v2: Vertex,
    ) -> Result<bool, GraphError> {
        match self {
            ConnectivityOracle::Dfs(o) => o.connected(view, v1, v2),
            ConnectivityOracle::Cached(o) => o.connected(view, v1, v2),
            ConnectivityOracle::Walk(o) => o.connected(view, v1, v2),
        }
    }
}
