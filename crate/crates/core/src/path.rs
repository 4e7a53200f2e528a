use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, Weight};

/// Result of a shortest-path query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathReport {
    pub vertices: Vec<Vertex>,
    pub weight: Weight,
    /// Endpoints of each per-block emission, in order.
    pub segments: Vec<(Vertex, Vertex)>,
}

impl fmt::Display for PathReport {
    /// `1 3 5` on one line, `weight 2` on the next.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        write!(f, "{}\nweight {}", labels.join(" "), self.weight)
    }
}

/// Write-only output stream for a path.
///
/// Consecutive duplicates are dropped, so per-block emissions can each
/// include both of their endpoints. The weight total is a verification side
/// channel and is not charged to the algorithm.
#[derive(Debug)]
pub struct PathEmitter<'g> {
    graph: &'g Graph,
    vertices: Vec<Vertex>,
    weight: Weight,
    segments: Vec<(Vertex, Vertex)>,
}

impl<'g> PathEmitter<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        PathEmitter {
            graph,
            vertices: Vec::new(),
            weight: 0,
            segments: Vec::new(),
        }
    }

    pub fn emit(&mut self, v: Vertex) -> Result<()> {
        match self.vertices.last() {
            Some(&last) if last == v => {}
            Some(&last) => {
                let w = self.graph.weight(last, v).ok_or_else(|| {
                    Error::InvariantBreach(format!("emitted {last} then non-adjacent {v}"))
                })?;
                self.weight += w;
                self.vertices.push(v);
            }
            None => self.vertices.push(v),
        }
        Ok(())
    }

    /// Emits one block's sub-path from `path[0]` to its last vertex.
    pub fn emit_segment(&mut self, path: &[Vertex]) -> Result<()> {
        if let (Some(&from), Some(&to)) = (path.first(), path.last()) {
            self.segments.push((from, to));
        }
        path.iter().try_for_each(|&v| self.emit(v))
    }

    pub fn last(&self) -> Option<Vertex> {
        self.vertices.last().copied()
    }

    pub fn finish(self) -> PathReport {
        PathReport {
            vertices: self.vertices,
            weight: self.weight,
            segments: self.segments,
        }
    }
}
