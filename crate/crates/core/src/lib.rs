//! Shortest paths in undirected weighted graphs with a constant number of
//! working registers.
//!
//! Two solvers share one block machinery ([`blocks`]):
//!
//! * [`general::shortest_path_general`] works on any graph. It recomputes
//!   every block fact from connectivity queries and runs in polynomial time.
//! * [`bounded::shortest_path_bounded`] needs maximum degree `delta` and
//!   maximum block size `k`. It discovers blocks locally and runs in linear
//!   time.
//!
//! Both charge their working memory and steps to a [`meter::Meter`], which
//! makes the space and time bounds observable.

pub mod blocks;
pub mod bounded;
pub mod connectivity;
mod error;
pub mod general;
pub mod generate;
pub mod graph;
pub mod io;
pub mod meter;
pub mod path;
pub mod reference;
pub mod workbench;

pub use error::{Error, Result};
pub use graph::{Graph, GraphView, Vertex, Weight};
pub use path::PathReport;

/// Switches shared by both solvers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Re-check internal invariants with unmetered oracle calls.
    pub debug_checks: bool,
}

impl RunOptions {
    pub const DEBUG_ENV: &'static str = "LOGPATH_DEBUG";

    /// Debug checks are on when `LOGPATH_DEBUG` is set to anything but `0`
    /// or the empty string.
    pub fn from_env() -> Self {
        let debug_checks = std::env::var(Self::DEBUG_ENV)
            .map(|v| !v.is_empty() && v != "0")
            .unwrap_or(false);
        RunOptions { debug_checks }
    }
}
