//! Linear-time shortest path for graphs with maximum degree `delta` and
//! maximum block size `k`.
//!
//! Every block containing a vertex lies within distance `k` of it, so block
//! queries are answered by decomposing a bounded ball ([`blocks_containing`])
//! instead of by connectivity queries. The main loop keeps `(previous,
//! current)`, never looks back into the block it arrived through, and picks
//! the next articulation point by racing two subgraph traversals.

use crate::blocks::{
    next, prefers_first, traverse_component_counted, BlockId, BlockOracle, CursorState,
    TraversalCursor,
};
use crate::error::{Error, Result};
use crate::general::{check_endpoints, emit_distance};
use crate::graph::{Graph, GraphView, Vertex};
use crate::meter::{LevelTrace, Meter, OracleKind, RegisterScope, SeedTrace, Tape};
use crate::path::{PathEmitter, PathReport};
use crate::reference::{hopcroft_tarjan, shortest_path_in};
use crate::RunOptions;

// s, t, previous, current and the chosen candidate.
const MAIN_WORDS: usize = 5;
// Two cursor slots, their candidate indices, the next unexplored index and
// the count of unresolved candidates.
const TWIN_WORDS: usize = 2 * TraversalCursor::WORDS + 5;

/// Declared maximum degree and maximum block size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedParams {
    pub delta: usize,
    pub k: usize,
}

impl BoundedParams {
    pub fn new(delta: usize, k: usize) -> Self {
        BoundedParams { delta, k }
    }

    /// Smallest parameters a graph satisfies.
    pub fn of_graph(g: &Graph) -> Self {
        let decomposition = hopcroft_tarjan(&g.full_view());
        BoundedParams {
            delta: g.max_degree(),
            k: decomposition.max_block_size().max(1),
        }
    }

    /// `floor((delta^(k+1) - 1) / (delta - 1))`: vertices within distance `k`.
    pub fn ball_bound(&self) -> usize {
        match self.delta {
            0 => 1,
            1 => self.k + 1,
            d => {
                let mut total: usize = 1;
                let mut layer: usize = 1;
                for _ in 0..self.k {
                    layer = layer.saturating_mul(d);
                    total = total.saturating_add(layer);
                }
                total
            }
        }
    }

    /// Register words held by one [`LocalBlocks`] result.
    pub fn local_blocks_words(&self) -> usize {
        (2 * self.delta * self.k + self.delta).max(1)
    }

    /// Register words for an articulation-point candidate list.
    pub fn candidate_words(&self) -> usize {
        (self.delta * self.k).max(1)
    }

    /// Register words of the deepest call chain: the main loop, the twin
    /// search with both cursors, a cursor step, `next_block`, `block_id` and
    /// one `blocks_containing` with its ball.
    pub fn register_file(&self) -> usize {
        MAIN_WORDS
            + self.candidate_words()
            + TWIN_WORDS
            + 2
            + 11
            + 4
            + self.local_blocks_words()
            + self.ball_bound()
            + 3
    }

    /// Checks both bounds exactly (whole-graph decomposition, unmetered).
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if let Some(v) = (1..=g.n()).find(|&v| g.degree_of(v) > self.delta) {
            return Err(Error::ParamsViolation(format!(
                "vertex {v} has degree {} > delta = {}",
                g.degree_of(v),
                self.delta
            )));
        }
        let decomposition = hopcroft_tarjan(&g.full_view());
        if let Some(block) = decomposition.blocks.iter().find(|b| b.len() > self.k) {
            return Err(Error::ParamsViolation(format!(
                "block {:?} has {} vertices > k = {}",
                BlockId::of_sorted(block),
                block.len(),
                self.k
            )));
        }
        Ok(())
    }
}

/// A graph checked against its [`BoundedParams`].
#[derive(Debug, Clone, Copy)]
pub struct BoundedGraph<'g> {
    graph: &'g Graph,
    params: BoundedParams,
}

impl<'g> BoundedGraph<'g> {
    pub fn new(graph: &'g Graph, params: BoundedParams) -> Result<Self> {
        params.validate(graph)?;
        Ok(BoundedGraph { graph, params })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn params(&self) -> BoundedParams {
        self.params
    }
}

/// Blocks containing one vertex and their articulation points.
#[derive(Debug)]
pub struct LocalBlocks<'m> {
    pub center: Vertex,
    /// Each ascending.
    pub blocks: Vec<Vec<Vertex>>,
    /// Ascending.
    pub art_points: Vec<Vertex>,
    _regs: RegisterScope<'m>,
}

impl LocalBlocks<'_> {
    /// The block holding both the center and `v`.
    pub fn block_with(&self, v: Vertex) -> Option<&[Vertex]> {
        self.blocks
            .iter()
            .find(|b| b.binary_search(&v).is_ok())
            .map(Vec::as_slice)
    }

    fn block_with_or_breach(&self, v: Vertex) -> Result<&[Vertex]> {
        self.block_with(v).ok_or_else(|| {
            Error::InvariantBreach(format!("{} and {v} share no block", self.center))
        })
    }

    /// Articulation points in `block`, ascending.
    pub fn art_points_in<'a>(&'a self, block: &'a [Vertex]) -> impl Iterator<Item = Vertex> + 'a {
        self.art_points
            .iter()
            .copied()
            .filter(move |a| block.binary_search(a).is_ok())
    }
}

/// All blocks containing `v` and the articulation points in them.
///
/// Grows the closed ball of radius `k` around `v` from the adjacency lists,
/// decomposes the induced subgraph, and keeps the blocks through `v`. Those
/// are exactly `v`'s blocks in the whole graph, and an articulation point of
/// the ball lying in one of them is an articulation point of the graph, as
/// its other neighbours are at most `k` away from `v`.
pub fn blocks_containing<'m>(
    tape: Tape<'m>,
    params: BoundedParams,
    v: Vertex,
) -> Result<LocalBlocks<'m>> {
    let m = tape.meter();
    let bound = params.ball_bound();
    let result_regs = m.scope(params.local_blocks_words());
    let _ball_regs = m.scope(bound + 3);

    let mut ball = vec![v];
    let mut frontier_start = 0;
    for _ in 0..params.k {
        let frontier_end = ball.len();
        if frontier_start == frontier_end {
            break;
        }
        for idx in frontier_start..frontier_end {
            let u = ball[idx];
            for j in 1..=tape.degree(u) {
                let w = tape.nb(u, j);
                if !ball.contains(&w) {
                    ball.push(w);
                    m.write(1);
                }
            }
        }
        frontier_start = frontier_end;
    }
    let within = ball.len() <= bound;
    m.record_ball(within);
    if !within {
        return Err(Error::BallBoundExceeded {
            center: v,
            size: ball.len(),
            bound,
        });
    }

    m.oracle(OracleKind::Decomposition);
    let decomposition = {
        let _exempt = m.exempt();
        hopcroft_tarjan(&GraphView::keep_set(tape.graph(), ball))
    };
    let blocks: Vec<Vec<Vertex>> = decomposition
        .blocks_of(v)
        .iter()
        .map(|&i| decomposition.blocks[i].clone())
        .collect();
    let mut art_points: Vec<Vertex> = decomposition
        .art_points
        .iter()
        .copied()
        .filter(|a| blocks.iter().any(|b| b.binary_search(a).is_ok()))
        .collect();
    art_points.dedup();
    m.write((blocks.iter().map(Vec::len).sum::<usize>() + art_points.len()) as u64);
    Ok(LocalBlocks {
        center: v,
        blocks,
        art_points,
        _regs: result_regs,
    })
}

/// Block queries answered from [`blocks_containing`] in constant time.
#[derive(Clone, Copy)]
pub struct LocalOracle<'m> {
    tape: Tape<'m>,
    params: BoundedParams,
}

impl<'m> LocalOracle<'m> {
    pub fn new(tape: Tape<'m>, params: BoundedParams) -> Self {
        LocalOracle { tape, params }
    }

    pub fn tape(&self) -> Tape<'m> {
        self.tape
    }

    pub fn blocks_containing(&self, v: Vertex) -> Result<LocalBlocks<'m>> {
        blocks_containing(self.tape, self.params, v)
    }
}

impl<'m> BlockOracle<'m> for LocalOracle<'m> {
    fn meter(&self) -> &'m Meter {
        self.tape.meter()
    }

    fn degree(&mut self, v: Vertex) -> usize {
        self.tape.degree(v)
    }

    fn neighbor(&mut self, v: Vertex, j: usize) -> Vertex {
        self.tape.nb(v, j)
    }

    fn is_in_block(&mut self, v1: Vertex, v2: Vertex, v: Vertex) -> Result<bool> {
        let _regs = self.meter().scope(3);
        if v == v1 || v == v2 {
            return Ok(true);
        }
        let local = self.blocks_containing(v1)?;
        Ok(local.block_with_or_breach(v2)?.binary_search(&v).is_ok())
    }

    fn are_in_block(&mut self, u: Vertex, v: Vertex) -> Result<bool> {
        let _regs = self.meter().scope(2);
        if u == v {
            return Ok(true);
        }
        Ok(self.blocks_containing(u)?.block_with(v).is_some())
    }

    fn is_articulation(&mut self, v: Vertex) -> Result<bool> {
        let _regs = self.meter().scope(1);
        Ok(self.blocks_containing(v)?.blocks.len() >= 2)
    }

    fn block_id(&mut self, v1: Vertex, v2: Vertex) -> Result<BlockId> {
        let _regs = self.meter().scope(4);
        let local = self.blocks_containing(v1)?;
        Ok(BlockId::of_sorted(local.block_with_or_breach(v2)?))
    }

    fn next_articulation(&mut self, v1: Vertex, v2: Vertex, p: Vertex) -> Result<Vertex> {
        let m = self.meter();
        let _regs = m.scope(5);
        let local = self.blocks_containing(v1)?;
        let block = local.block_with_or_breach(v2)?;
        let mut a = p;
        for x in local.art_points_in(block) {
            a = next(a, x, p);
            m.write(1);
        }
        Ok(a)
    }

    fn next_block(&mut self, v1: Vertex, v2: Vertex, p: Vertex) -> Result<Vertex> {
        let m = self.meter();
        let _regs = m.scope(11);
        let degree = self.tape.degree(p);
        if degree == 0 {
            return Err(Error::InvariantBreach(format!(
                "next_block around isolated vertex {p}"
            )));
        }
        let id_star = self.block_id(v1, v2)?;
        let around = self.blocks_containing(p)?;
        let id_via = |w: Vertex| around.block_with_or_breach(w).map(BlockId::of_sorted);
        let mut a = id_via(self.tape.nb(p, 1))?;
        let mut best = 1;
        m.write(5);
        for i in 2..=degree {
            let b = id_via(self.tape.nb(p, i))?;
            m.write(3);
            if prefers_first(&b, &a, &id_star) {
                a = b;
                best = i;
                m.write(3);
            }
        }
        Ok(self.tape.nb(p, best))
    }
}

/// Articulation points of the blocks containing `v2` but not `v1` (all of
/// `v2`'s blocks when `v1 == v2`), ascending. Includes `v2` when it is one.
pub fn adjacent_points(oracle: &LocalOracle<'_>, v1: Vertex, v2: Vertex) -> Result<Vec<Vertex>> {
    let local = oracle.blocks_containing(v2)?;
    let mut points: Vec<Vertex> = local
        .blocks
        .iter()
        .filter(|b| v1 == v2 || b.binary_search(&v1).is_err())
        .flat_map(|b| local.art_points_in(b))
        .collect();
    points.sort_unstable();
    points.dedup();
    oracle.meter().write(points.len() as u64);
    Ok(points)
}

pub fn last_of<T: Copy>(list: &[T]) -> Result<T> {
    list.last().copied().ok_or(Error::EmptyList)
}

/// The candidate whose subgraph (rooted at its block with `current`)
/// contains `t`.
///
/// Two cursors traverse candidate subgraphs in strict alternation, one
/// block-step per turn. A cursor that finishes without meeting `t` rules its
/// candidate out and takes the next unexplored one. Once a single candidate
/// is left it is returned untraversed, so the work is at most twice the size
/// of the subgraphs that do not contain `t`.
pub fn twin_cursor_search(
    oracle: &mut LocalOracle<'_>,
    current: Vertex,
    candidates: &[Vertex],
    t: Vertex,
) -> Result<Vertex> {
    twin_search(oracle, current, candidates, t, &mut Vec::new())
}

fn twin_search(
    oracle: &mut LocalOracle<'_>,
    current: Vertex,
    candidates: &[Vertex],
    t: Vertex,
    seeds: &mut Vec<SeedTrace>,
) -> Result<Vertex> {
    let m = oracle.meter();
    let _regs = m.scope(TWIN_WORDS);
    let last = last_of(candidates)?;
    if candidates.len() == 1 {
        return Ok(last);
    }
    let mut slots: [Option<(usize, TraversalCursor)>; 2] = [None, None];
    let mut next_unexplored = 0;
    let mut unresolved = candidates.len();
    let mut ruled_out = vec![false; candidates.len()];

    let seed = |oracle: &mut LocalOracle<'_>, idx: usize| -> Result<(usize, TraversalCursor)> {
        let cursor = TraversalCursor::subgraph(oracle, current, candidates[idx], t)?;
        m.write(2);
        Ok((idx, cursor))
    };

    for slot in slots.iter_mut() {
        *slot = Some(seed(oracle, next_unexplored)?);
        next_unexplored += 1;
    }
    let mut turn = 0;
    loop {
        let Some((idx, cursor)) = slots[turn].as_mut() else {
            turn ^= 1;
            continue;
        };
        let idx = *idx;
        match cursor.step(oracle)? {
            CursorState::Running => {}
            CursorState::Found => {
                record_seed(oracle, seeds, current, candidates[idx], cursor, true)?;
                return Ok(candidates[idx]);
            }
            CursorState::Exhausted => {
                record_seed(oracle, seeds, current, candidates[idx], cursor, false)?;
                ruled_out[idx] = true;
                unresolved -= 1;
                m.write(2);
                if unresolved == 1 {
                    let remaining = ruled_out.iter().position(|&r| !r).expect("one left");
                    if let Some((other, cursor)) = slots[turn ^ 1].as_ref() {
                        if *other == remaining {
                            record_seed(
                                oracle,
                                seeds,
                                current,
                                candidates[remaining],
                                cursor,
                                false,
                            )?;
                        }
                    }
                    return Ok(candidates[remaining]);
                }
                slots[turn] = if next_unexplored < candidates.len() {
                    next_unexplored += 1;
                    Some(seed(oracle, next_unexplored - 1)?)
                } else {
                    None
                };
            }
        }
        turn ^= 1;
        m.write(1);
    }
}

fn record_seed(
    oracle: &mut LocalOracle<'_>,
    seeds: &mut Vec<SeedTrace>,
    current: Vertex,
    pivot: Vertex,
    cursor: &TraversalCursor,
    found_target: bool,
) -> Result<()> {
    let m = oracle.meter();
    let mut traced = false;
    m.with_trace(|_| traced = true);
    if traced {
        let _exempt = m.exempt();
        seeds.push(SeedTrace {
            root: oracle.block_id(current, pivot)?,
            pivot,
            block_steps: cursor.block_steps(),
            found_target,
        });
    }
    Ok(())
}

fn emit_block_path(
    oracle: &LocalOracle<'_>,
    from: Vertex,
    to: Vertex,
    out: &mut PathEmitter<'_>,
) -> Result<()> {
    let local = oracle.blocks_containing(from)?;
    let block = local.block_with_or_breach(to)?;
    let m = oracle.meter();
    m.oracle(OracleKind::PathInBlock);
    let _exempt = m.exempt();
    let view = GraphView::keep_set(oracle.tape().graph(), block.iter().copied());
    emit_distance(shortest_path_in(&view, from, to)?, from, to, out)
}

/// Shortest `s`-`t` path on a bounded graph in linear time and constant
/// registers.
///
/// Declares [`BoundedParams::register_file`] words up front and fails with a
/// register overflow if its callees ever need more.
pub fn shortest_path_bounded(
    bg: &BoundedGraph<'_>,
    s: Vertex,
    t: Vertex,
    meter: &Meter,
    options: &RunOptions,
) -> Result<PathReport> {
    let ceiling = meter.declare_registers(bg.params().register_file());
    let report = bounded_loop(bg, s, t, meter, options)?;
    meter.check_registers(ceiling)?;
    Ok(report)
}

fn bounded_loop(
    bg: &BoundedGraph<'_>,
    s: Vertex,
    t: Vertex,
    meter: &Meter,
    options: &RunOptions,
) -> Result<PathReport> {
    let g = bg.graph();
    let params = bg.params();
    check_endpoints(g, s, t)?;
    let mut out = PathEmitter::new(g);
    let _regs = meter.scope(MAIN_WORDS + params.candidate_words());
    if s == t {
        out.emit(s)?;
        return Ok(out.finish());
    }
    let mut oracle = LocalOracle::new(Tape::new(g, meter), params);

    let (reachable, gate_steps) = traverse_component_counted(&mut oracle, s, t)?;
    meter.with_trace(|trace| trace.gate_block_steps = gate_steps);
    if !reachable {
        return Err(Error::NoPath { s, t });
    }

    let mut previous = s;
    let mut current = s;
    meter.write(2);
    loop {
        if oracle.are_in_block(current, t)? {
            emit_block_path(&oracle, current, t, &mut out)?;
            return Ok(out.finish());
        }
        let mut candidates = adjacent_points(&oracle, previous, current)?;
        candidates.retain(|&p| p != current);
        let mut seeds = Vec::new();
        let chosen = twin_search(&mut oracle, current, &candidates, t, &mut seeds)?;
        meter.write(1);
        if options.debug_checks {
            let _exempt = meter.exempt();
            if !crate::blocks::is_in_subgraph(&mut oracle, current, chosen, t)? {
                return Err(Error::InvariantBreach(format!(
                    "chose {chosen} after {current} but its subgraph misses {t}"
                )));
            }
        }
        meter.with_trace(|trace| {
            trace.levels.push(LevelTrace {
                previous,
                current,
                candidates: candidates.clone(),
                seeds,
                chosen,
            })
        });
        emit_block_path(&oracle, current, chosen, &mut out)?;
        previous = current;
        current = chosen;
        meter.write(2);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn local<R>(g: &Graph, params: BoundedParams, f: impl FnOnce(&mut LocalOracle<'_>) -> R) -> R {
        let meter = Meter::new();
        let mut o = LocalOracle::new(Tape::new(g, &meter), params);
        let r = f(&mut o);
        assert_eq!(meter.bank.live(), 0);
        r
    }

    #[test]
    fn ball_bound_formula() {
        assert_eq!(BoundedParams::new(3, 4).ball_bound(), 121);
        assert_eq!(BoundedParams::new(2, 3).ball_bound(), 15);
        assert_eq!(BoundedParams::new(1, 5).ball_bound(), 6);
        assert_eq!(BoundedParams::new(0, 5).ball_bound(), 1);
    }

    #[test]
    fn blocks_containing_examples() {
        local(&bowtie(), BoundedParams::new(4, 3), |o| {
            let lb = o.blocks_containing(3).unwrap();
            assert_eq!(lb.blocks, vec![vec![1, 2, 3], vec![3, 4, 5]]);
            assert_eq!(lb.art_points, vec![3]);
        });
        local(&p3(), BoundedParams::new(2, 2), |o| {
            let lb = o.blocks_containing(1).unwrap();
            assert_eq!(lb.blocks, vec![vec![1, 2]]);
            assert_eq!(lb.art_points, vec![2]);
        });
        local(&k3(), BoundedParams::new(2, 3), |o| {
            let lb = o.blocks_containing(2).unwrap();
            assert_eq!(lb.blocks, vec![vec![1, 2, 3]]);
            assert!(lb.art_points.is_empty());
        });
    }

    #[test]
    fn ball_violation_is_reported() {
        // Degree 4 at vertex 3 against a declared delta of 2.
        let meter = Meter::new();
        let g = bowtie();
        let err =
            blocks_containing(Tape::new(&g, &meter), BoundedParams::new(2, 1), 3).unwrap_err();
        assert!(matches!(
            err,
            Error::BallBoundExceeded {
                size: 5,
                bound: 3,
                ..
            }
        ));
        assert_eq!(meter.ball_violations(), 1);
    }

    #[test]
    fn adjacent_points_examples() {
        local(&bowtie(), BoundedParams::new(4, 3), |o| {
            assert_eq!(adjacent_points(o, 1, 1).unwrap(), vec![3]);
            assert_eq!(adjacent_points(o, 1, 3).unwrap(), vec![3]);
        });
        local(&k3(), BoundedParams::new(2, 3), |o| {
            assert!(adjacent_points(o, 1, 2).unwrap().is_empty());
        });
    }

    #[test]
    fn last_of_examples() {
        assert_eq!(last_of(&[3]), Ok(3));
        assert_eq!(last_of(&[2, 5, 9]), Ok(9));
        assert_eq!(last_of::<u32>(&[]), Err(Error::EmptyList));
    }

    #[test]
    fn twin_search_single_candidate() {
        local(&bowtie(), BoundedParams::new(4, 3), |o| {
            assert_eq!(twin_cursor_search(o, 1, &[3], 5).unwrap(), 3);
            assert_eq!(o.meter().counter.steps(), 0);
        });
    }

    #[test]
    fn validation() {
        let g = bowtie();
        assert!(BoundedGraph::new(&g, BoundedParams::new(4, 3)).is_ok());
        assert!(matches!(
            BoundedGraph::new(&g, BoundedParams::new(3, 3)),
            Err(Error::ParamsViolation(_))
        ));
        assert!(matches!(
            BoundedGraph::new(&g, BoundedParams::new(4, 2)),
            Err(Error::ParamsViolation(_))
        ));
        assert_eq!(BoundedParams::of_graph(&g), BoundedParams::new(4, 3));
    }

    fn run(g: &Graph, s: Vertex, t: Vertex) -> Result<PathReport> {
        let bg = BoundedGraph::new(g, BoundedParams::of_graph(g)).unwrap();
        let meter = Meter::new();
        let r = shortest_path_bounded(&bg, s, t, &meter, &RunOptions { debug_checks: true });
        assert_eq!(meter.bank.live(), 0);
        assert_eq!(meter.bank.high_water(), bg.params().register_file());
        r
    }

    #[test]
    fn bowtie_path() {
        let r = run(&bowtie(), 1, 5).unwrap();
        assert_eq!((r.vertices, r.weight), (vec![1, 3, 5], 2));
        let r = run(&bowtie(), 2, 2).unwrap();
        assert_eq!((r.vertices, r.weight), (vec![2], 0));
    }

    #[test]
    fn several_blocks_and_missing_path() {
        let r = run(&bridged_triangles(), 4, 5).unwrap();
        assert_eq!(r.vertices, vec![4, 2, 3, 6, 7, 5]);
        let g = Graph::build(4, &[(1, 2, 1), (2, 3, 1)]).unwrap();
        assert_eq!(run(&g, 1, 4), Err(Error::NoPath { s: 1, t: 4 }));
        assert_eq!(run(&g, 4, 1), Err(Error::NoPath { s: 4, t: 1 }));
    }
}
