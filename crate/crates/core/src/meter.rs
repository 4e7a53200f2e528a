//! Register and step accounting.
//!
//! A run charges two things: working registers (words of `O(log n)` bits,
//! counted while live) and primitive steps. Reading the input graph through
//! [`Tape`] costs one step per access. The write-only output and the
//! internals of the reference oracles are not charged; only their invocation
//! counts are recorded.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::blocks::BlockId;
use crate::graph::{Graph, Vertex, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeterError {
    #[error("register allocation of zero words")]
    EmptyAllocation,
    #[error("scope token {0} released twice")]
    DoubleRelease(u64),
    #[error("{live} register words still live at report time")]
    LeakedScope { live: usize },
    #[error("{peak} register words live, declared register file holds {ceiling}")]
    RegisterOverflow { peak: usize, ceiling: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleKind {
    Connectivity,
    PathInBlock,
    Decomposition,
}

impl OracleKind {
    pub const ALL: [OracleKind; 3] = [
        OracleKind::Connectivity,
        OracleKind::PathInBlock,
        OracleKind::Decomposition,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    AdjAccess,
    RegisterWrite,
    Oracle(OracleKind),
}

impl StepKind {
    fn slot(self) -> usize {
        match self {
            StepKind::AdjAccess => 0,
            StepKind::RegisterWrite => 1,
            StepKind::Oracle(OracleKind::Connectivity) => 2,
            StepKind::Oracle(OracleKind::PathInBlock) => 3,
            StepKind::Oracle(OracleKind::Decomposition) => 4,
        }
    }
}

/// Opaque handle returned by [`RegisterBank::alloc`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScopeToken(u64);

#[derive(Debug, Default)]
pub struct RegisterBank {
    live: Cell<usize>,
    peak: Cell<usize>,
    declared: Cell<usize>,
    next_token: Cell<u64>,
    outstanding: RefCell<HashMap<u64, usize>>,
}

impl RegisterBank {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn live(&self) -> usize {
        self.live.get()
    }

    /// Largest of the live peak and every declared register file.
    pub fn high_water(&self) -> usize {
        self.peak.get().max(self.declared.get())
    }

    /// Most words ever live at once.
    pub fn peak(&self) -> usize {
        self.peak.get()
    }

    /// Declares a fixed register file of `words` on top of the live words and
    /// returns its ceiling. Allocations are still tracked individually, so
    /// the owner can check [`peak`](Self::peak) against the ceiling.
    pub fn declare(&self, words: usize) -> usize {
        let ceiling = self.live.get() + words;
        if ceiling > self.declared.get() {
            self.declared.set(ceiling);
        }
        ceiling
    }

    /// Explicit allocation; pair with [`release`](Self::release).
    pub fn alloc(&self, words: usize) -> Result<ScopeToken, MeterError> {
        if words == 0 {
            return Err(MeterError::EmptyAllocation);
        }
        let id = self.next_token.get();
        self.next_token.set(id + 1);
        self.outstanding.borrow_mut().insert(id, words);
        self.grow(words);
        Ok(ScopeToken(id))
    }

    pub fn release(&self, token: ScopeToken) -> Result<(), MeterError> {
        let words = self
            .outstanding
            .borrow_mut()
            .remove(&token.0)
            .ok_or(MeterError::DoubleRelease(token.0))?;
        self.live.set(self.live.get() - words);
        Ok(())
    }

    /// Allocation released when the guard drops.
    pub fn scope(&self, words: usize) -> RegisterScope<'_> {
        self.grow(words);
        RegisterScope { bank: self, words }
    }

    fn grow(&self, words: usize) {
        let live = self.live.get() + words;
        self.live.set(live);
        if live > self.peak.get() {
            self.peak.set(live);
        }
    }
}

#[must_use = "registers are released as soon as the scope is dropped"]
#[derive(Debug)]
pub struct RegisterScope<'a> {
    bank: &'a RegisterBank,
    words: usize,
}

impl Drop for RegisterScope<'_> {
    fn drop(&mut self) {
        self.bank.live.set(self.bank.live.get() - self.words);
    }
}

#[derive(Debug, Default)]
pub struct StepCounter {
    steps: Cell<u64>,
    by_kind: [Cell<u64>; 5],
}

impl StepCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn charge(&self, kind: StepKind) {
        self.charge_n(kind, 1);
    }

    #[inline]
    pub fn charge_n(&self, kind: StepKind, count: u64) {
        self.steps.set(self.steps.get() + count);
        let slot = &self.by_kind[kind.slot()];
        slot.set(slot.get() + count);
    }

    pub fn steps(&self) -> u64 {
        self.steps.get()
    }

    pub fn count(&self, kind: StepKind) -> u64 {
        self.by_kind[kind.slot()].get()
    }
}

/// One subgraph traversal started by the two-cursor search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedTrace {
    pub root: BlockId,
    pub pivot: Vertex,
    pub block_steps: u64,
    pub found_target: bool,
}

/// One round of the bounded algorithm's main loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelTrace {
    pub previous: Vertex,
    pub current: Vertex,
    pub candidates: Vec<Vertex>,
    pub seeds: Vec<SeedTrace>,
    pub chosen: Vertex,
}

/// Side channel for tests: what the bounded search explored. Never charged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchTrace {
    pub levels: Vec<LevelTrace>,
    pub gate_block_steps: u64,
}

/// Register bank, step counter and uncharged diagnostics for one run.
#[derive(Debug, Default)]
pub struct Meter {
    pub bank: RegisterBank,
    pub counter: StepCounter,
    exempt_depth: Cell<u32>,
    ball_checks: Cell<u64>,
    ball_violations: Cell<u64>,
    trace: RefCell<Option<SearchTrace>>,
}

impl Meter {
    pub fn new() -> Self {
        Self::default()
    }

    /// A meter that also records a [`SearchTrace`].
    pub fn traced() -> Self {
        let m = Self::default();
        *m.trace.borrow_mut() = Some(SearchTrace::default());
        m
    }

    #[inline]
    fn charging(&self) -> bool {
        self.exempt_depth.get() == 0
    }

    #[inline]
    pub fn scope(&self, words: usize) -> RegisterScope<'_> {
        self.bank.scope(if self.charging() { words } else { 0 })
    }

    /// Declares the caller's whole register file; see [`RegisterBank::declare`].
    pub fn declare_registers(&self, words: usize) -> usize {
        if self.charging() {
            self.bank.declare(words)
        } else {
            0
        }
    }

    /// Fails if more than `ceiling` words were ever live while charging.
    pub fn check_registers(&self, ceiling: usize) -> Result<(), MeterError> {
        let peak = self.bank.peak();
        if self.charging() && peak > ceiling {
            return Err(MeterError::RegisterOverflow { peak, ceiling });
        }
        Ok(())
    }

    #[inline]
    pub fn write(&self, words: u64) {
        self.charge(StepKind::RegisterWrite, words);
    }

    #[inline]
    pub fn oracle(&self, kind: OracleKind) {
        self.charge(StepKind::Oracle(kind), 1);
    }

    #[inline]
    pub fn charge(&self, kind: StepKind, count: u64) {
        if self.charging() {
            self.counter.charge_n(kind, count);
        }
    }

    /// Suspends all charging until the guard drops. Used for oracle internals.
    pub fn exempt(&self) -> ExemptGuard<'_> {
        self.exempt_depth.set(self.exempt_depth.get() + 1);
        ExemptGuard { meter: self }
    }

    pub(crate) fn record_ball(&self, within_bound: bool) {
        self.ball_checks.set(self.ball_checks.get() + 1);
        if !within_bound {
            self.ball_violations.set(self.ball_violations.get() + 1);
        }
    }

    pub fn ball_checks(&self) -> u64 {
        self.ball_checks.get()
    }

    pub fn ball_violations(&self) -> u64 {
        self.ball_violations.get()
    }

    pub(crate) fn with_trace(&self, f: impl FnOnce(&mut SearchTrace)) {
        if let Some(trace) = self.trace.borrow_mut().as_mut() {
            f(trace);
        }
    }

    pub fn take_trace(&self) -> Option<SearchTrace> {
        self.trace.borrow_mut().take()
    }

    /// Snapshot after a finished run; fails if any register scope leaked.
    pub fn report(&self, n: usize) -> Result<MeterReport, MeterError> {
        let live = self.bank.live();
        if live != 0 {
            return Err(MeterError::LeakedScope { live });
        }
        Ok(MeterReport {
            n,
            high_water: self.bank.high_water(),
            steps: self.counter.steps(),
            oracle_calls: OracleCalls {
                connectivity: self
                    .counter
                    .count(StepKind::Oracle(OracleKind::Connectivity)),
                path_in_block: self
                    .counter
                    .count(StepKind::Oracle(OracleKind::PathInBlock)),
                decomposition: self
                    .counter
                    .count(StepKind::Oracle(OracleKind::Decomposition)),
            },
        })
    }
}

#[must_use]
pub struct ExemptGuard<'a> {
    meter: &'a Meter,
}

impl Drop for ExemptGuard<'_> {
    fn drop(&mut self) {
        let depth = &self.meter.exempt_depth;
        depth.set(depth.get() - 1);
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleCalls {
    pub connectivity: u64,
    pub path_in_block: u64,
    pub decomposition: u64,
}

impl OracleCalls {
    pub fn total(&self) -> u64 {
        self.connectivity + self.path_in_block + self.decomposition
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeterReport {
    pub n: usize,
    pub high_water: usize,
    pub steps: u64,
    pub oracle_calls: OracleCalls,
}

impl MeterReport {
    pub const CSV_HEADER: &'static str = "n,highWater,steps,oracleCalls";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.n,
            self.high_water,
            self.steps,
            self.oracle_calls.total()
        )
    }
}

impl fmt::Display for MeterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} highWater={} steps={} oracleCalls(conn={}, block={}, decomp={})",
            self.n,
            self.high_water,
            self.steps,
            self.oracle_calls.connectivity,
            self.oracle_calls.path_in_block,
            self.oracle_calls.decomposition
        )
    }
}

/// Charged read access to the input graph.
#[derive(Clone, Copy)]
pub struct Tape<'a> {
    graph: &'a Graph,
    meter: &'a Meter,
}

impl<'a> Tape<'a> {
    pub fn new(graph: &'a Graph, meter: &'a Meter) -> Self {
        Tape { graph, meter }
    }

    pub fn graph(&self) -> &'a Graph {
        self.graph
    }

    pub fn meter(&self) -> &'a Meter {
        self.meter
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.meter.charge(StepKind::AdjAccess, 1);
        self.graph.degree_of(v)
    }

    #[inline]
    pub fn adj(&self, v: Vertex, j: usize) -> (Vertex, Weight) {
        self.meter.charge(StepKind::AdjAccess, 1);
        self.graph.adj_of(v, j)
    }

    /// Neighbour label only.
    #[inline]
    pub fn nb(&self, v: Vertex, j: usize) -> Vertex {
        self.adj(v, j).0
    }
}
