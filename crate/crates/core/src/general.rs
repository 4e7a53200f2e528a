//! Block-at-a-time shortest path for arbitrary graphs.
//!
//! The path is printed one block at a time. From the last printed
//! articulation point `current`, the next one is the unique articulation
//! point `p` sharing a block with `current` whose hanging subgraph contains
//! `t`. Inside each block the path comes from a shortest-path oracle.

use crate::blocks::{is_in_subgraph, BlockOracle, TableOracle, TraversalCursor};
use crate::connectivity::Connectivity;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphView, Vertex};
use crate::meter::{Meter, OracleKind, Tape};
use crate::path::{PathEmitter, PathReport};
use crate::reference::{shortest_path_in, Distance};
use crate::RunOptions;

/// Shortest path inside one block, written straight to the emitter.
pub trait PathInBlock {
    fn emit_block_path<C: Connectivity>(
        &mut self,
        oracle: &mut TableOracle<'_, C>,
        from: Vertex,
        to: Vertex,
        out: &mut PathEmitter<'_>,
    ) -> Result<()>;
}

/// Bellman–Ford over the block of `(from, to)`.
///
/// Block membership is recomputed with `is_in_block`; the membership scan and
/// the search itself run as exempt oracle work.
#[derive(Debug, Default, Clone, Copy)]
pub struct BellmanFordBlocks;

impl PathInBlock for BellmanFordBlocks {
    fn emit_block_path<C: Connectivity>(
        &mut self,
        oracle: &mut TableOracle<'_, C>,
        from: Vertex,
        to: Vertex,
        out: &mut PathEmitter<'_>,
    ) -> Result<()> {
        let tape = oracle.tape();
        tape.meter().oracle(OracleKind::PathInBlock);
        let _exempt = tape.meter().exempt();
        let mut members = Vec::new();
        for v in 1..=tape.n() {
            if oracle.is_in_block(from, to, v)? {
                members.push(v);
            }
        }
        let view = GraphView::keep_set(tape.graph(), members);
        emit_distance(shortest_path_in(&view, from, to)?, from, to, out)
    }
}

pub(crate) fn emit_distance(
    distance: Distance,
    from: Vertex,
    to: Vertex,
    out: &mut PathEmitter<'_>,
) -> Result<()> {
    match distance {
        Distance::Path { path, .. } => out.emit_segment(&path),
        Distance::NegativeCycle => Err(Error::NegativeCycle { near: from }),
        Distance::Unreachable => Err(Error::InvariantBreach(format!(
            "block of {from} and {to} does not connect them"
        ))),
    }
}

pub(crate) fn check_endpoints(g: &Graph, s: Vertex, t: Vertex) -> Result<()> {
    g.degree(s)?;
    g.degree(t)?;
    Ok(())
}

/// Register words of the deepest call chain: the main loop, a subgraph
/// cursor and its step, then `next_block`, `block_id` and `is_in_block`.
pub const REGISTER_FILE: usize = 6 + TraversalCursor::WORDS + 2 + 11 + 5 + 4;

/// Shortest `s`-`t` path using connectivity queries and a per-block oracle.
///
/// Declares a [`REGISTER_FILE`] of working registers up front and fails with
/// a register overflow if its callees ever need more.
pub fn shortest_path_general<C: Connectivity, B: PathInBlock>(
    g: &Graph,
    s: Vertex,
    t: Vertex,
    conn: C,
    block_paths: &mut B,
    meter: &Meter,
    options: &RunOptions,
) -> Result<PathReport> {
    let ceiling = meter.declare_registers(REGISTER_FILE);
    let report = general_loop(g, s, t, conn, block_paths, meter, options)?;
    meter.check_registers(ceiling)?;
    Ok(report)
}

fn general_loop<C: Connectivity, B: PathInBlock>(
    g: &Graph,
    s: Vertex,
    t: Vertex,
    conn: C,
    block_paths: &mut B,
    meter: &Meter,
    options: &RunOptions,
) -> Result<PathReport> {
    check_endpoints(g, s, t)?;
    let mut out = PathEmitter::new(g);
    let tape = Tape::new(g, meter);
    let _regs = meter.scope(6);
    if s == t {
        out.emit(s)?;
        return Ok(out.finish());
    }
    let mut oracle = TableOracle::new(tape, conn).with_debug_checks(options.debug_checks);
    if !oracle.connected(&g.full_view(), s, t)? {
        return Err(Error::NoPath { s, t });
    }

    let mut current = s;
    meter.write(1);
    loop {
        if oracle.are_in_block(current, t)? {
            block_paths.emit_block_path(&mut oracle, current, t, &mut out)?;
            return Ok(out.finish());
        }
        let next = next_cut_vertex(&mut oracle, current, t)?.ok_or_else(|| {
            Error::InvariantBreach(format!(
                "no articulation point after {current} leads to {t}"
            ))
        })?;
        block_paths.emit_block_path(&mut oracle, current, next, &mut out)?;
        current = next;
        meter.write(1);
    }
}

// Scans every block around `current` for the articulation point whose
// subgraph holds `t`. Skips `current` itself.
fn next_cut_vertex<C: Connectivity>(
    oracle: &mut TableOracle<'_, C>,
    current: Vertex,
    t: Vertex,
) -> Result<Option<Vertex>> {
    let tape = oracle.tape();
    let m = tape.meter();
    for i in 1..=tape.degree(current) {
        m.write(1);
        let u = tape.nb(current, i);
        m.write(1);
        for potential in 1..=tape.n() {
            m.write(1);
            if potential == current {
                continue;
            }
            if oracle.is_in_block(current, u, potential)?
                && oracle.is_articulation(potential)?
                && is_in_subgraph(oracle, current, potential, t)?
            {
                return Ok(Some(potential));
            }
        }
    }
    Ok(None)
}
