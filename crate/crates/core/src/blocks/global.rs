use crate::blocks::{prefers_first, BlockId, BlockOracle};
use crate::connectivity::Connectivity;
use crate::error::{Error, Result};
use crate::graph::{GraphView, Vertex};
use crate::meter::{Meter, OracleKind, Tape};

/// Block queries answered from connectivity queries on vertex-deleted views.
///
/// Every answer is recomputed: nothing about blocks is ever stored. Each
/// method holds a constant number of registers besides its callees.
pub struct TableOracle<'a, C> {
    tape: Tape<'a>,
    conn: C,
    debug: bool,
    checking: bool,
}

impl<'a, C: Connectivity> TableOracle<'a, C> {
    pub fn new(tape: Tape<'a>, conn: C) -> Self {
        TableOracle {
            tape,
            conn,
            debug: false,
            checking: false,
        }
    }

    /// Also assert the co-block precondition of `is_in_block` on every call.
    pub fn with_debug_checks(mut self, on: bool) -> Self {
        self.debug = on;
        self
    }

    pub fn tape(&self) -> Tape<'a> {
        self.tape
    }

    pub fn into_inner(self) -> C {
        self.conn
    }

    /// One charged connectivity query.
    pub fn connected(&mut self, view: &GraphView<'_>, a: Vertex, b: Vertex) -> Result<bool> {
        self.tape.meter().oracle(OracleKind::Connectivity);
        Ok(self.conn.connected(view, a, b)?)
    }

    fn connected_without(&mut self, deleted: Vertex, a: Vertex, b: Vertex) -> Result<bool> {
        let view = GraphView::delete_one(self.tape.graph(), deleted);
        self.connected(&view, a, b)
    }
}

impl<'a, C: Connectivity> BlockOracle<'a> for TableOracle<'a, C> {
    fn meter(&self) -> &'a Meter {
        self.tape.meter()
    }

    fn degree(&mut self, v: Vertex) -> usize {
        self.tape.degree(v)
    }

    fn neighbor(&mut self, v: Vertex, j: usize) -> Vertex {
        self.tape.nb(v, j)
    }

    fn is_in_block(&mut self, v1: Vertex, v2: Vertex, v: Vertex) -> Result<bool> {
        let m = self.tape.meter();
        let _regs = m.scope(4);
        if v == v1 || v == v2 {
            return Ok(true);
        }
        if self.debug && !self.checking {
            self.checking = true;
            let exempt = m.exempt();
            let co_block = self.are_in_block(v1, v2);
            drop(exempt);
            self.checking = false;
            if !co_block? {
                return Err(Error::InvariantBreach(format!(
                    "is_in_block({v1}, {v2}, {v}) on vertices that share no block"
                )));
            }
        }
        for i in 1..=self.tape.n() {
            m.write(1);
            if i == v1 || i == v {
                continue;
            }
            if !self.connected_without(i, v1, v)? {
                return Ok(false);
            }
        }
        self.connected_without(v1, v2, v)
    }

    fn are_in_block(&mut self, u: Vertex, v: Vertex) -> Result<bool> {
        let m = self.tape.meter();
        let _regs = m.scope(3);
        if u == v {
            return Ok(true);
        }
        for i in 1..=self.tape.degree(u) {
            m.write(1);
            let w = self.tape.nb(u, i);
            if self.is_in_block(u, w, v)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn is_articulation(&mut self, v: Vertex) -> Result<bool> {
        let m = self.tape.meter();
        let _regs = m.scope(3);
        for i in 2..=self.tape.degree(v) {
            m.write(1);
            let first = self.tape.nb(v, 1);
            let other = self.tape.nb(v, i);
            if !self.is_in_block(v, first, other)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn block_id(&mut self, v1: Vertex, v2: Vertex) -> Result<BlockId> {
        let m = self.tape.meter();
        let _regs = m.scope(5);
        let mut id = BlockId::new(v1.max(v2), v1.min(v2));
        for x in 1..=self.tape.n() {
            m.write(1);
            if (x > id.largest || x < id.smallest) && self.is_in_block(v1, v2, x)? {
                id.largest = id.largest.max(x);
                id.smallest = id.smallest.min(x);
                m.write(1);
            }
        }
        Ok(id)
    }

    fn next_articulation(&mut self, v1: Vertex, v2: Vertex, p: Vertex) -> Result<Vertex> {
        let m = self.tape.meter();
        let _regs = m.scope(5);
        let mut a = p;
        for v in 1..=self.tape.n() {
            m.write(1);
            if self.is_in_block(v1, v2, v)? && self.is_articulation(v)? {
                a = super::next(a, v, p);
                m.write(1);
            }
        }
        Ok(a)
    }

    fn next_block(&mut self, v1: Vertex, v2: Vertex, p: Vertex) -> Result<Vertex> {
        let m = self.tape.meter();
        let _regs = m.scope(11);
        let degree = self.tape.degree(p);
        if degree == 0 {
            return Err(Error::InvariantBreach(format!(
                "next_block around isolated vertex {p}"
            )));
        }
        let id_star = self.block_id(v1, v2)?;
        let first = self.tape.nb(p, 1);
        let mut a = self.block_id(p, first)?;
        let mut best = 1;
        m.write(5);
        for i in 2..=degree {
            m.write(1);
            let w = self.tape.nb(p, i);
            let b = self.block_id(p, w)?;
            m.write(2);
            if prefers_first(&b, &a, &id_star) {
                a = b;
                best = i;
                m.write(3);
            }
        }
        Ok(self.tape.nb(p, best))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{is_in_subgraph, traverse_component};
    use crate::connectivity::DfsOracle;
    use crate::graph::fixtures::*;
    use crate::graph::Graph;

    fn with_oracle<R>(g: &Graph, f: impl FnOnce(&mut TableOracle<'_, DfsOracle>) -> R) -> R {
        let meter = Meter::new();
        let mut o =
            TableOracle::new(Tape::new(g, &meter), DfsOracle::new()).with_debug_checks(true);
        let r = f(&mut o);
        assert_eq!(meter.bank.live(), 0);
        r
    }

    #[test]
    fn membership_examples() {
        with_oracle(&k3(), |o| assert!(o.is_in_block(1, 2, 3).unwrap()));
        with_oracle(&p3(), |o| {
            assert!(!o.is_in_block(1, 2, 3).unwrap());
            assert!(o.is_in_block(1, 2, 1).unwrap());
        });
        with_oracle(&bowtie(), |o| {
            assert!(o.are_in_block(1, 3).unwrap());
            assert!(!o.are_in_block(1, 4).unwrap());
            assert!(o.are_in_block(4, 4).unwrap());
        });
    }

    #[test]
    fn debug_check_rejects_foreign_pair() {
        with_oracle(&bowtie(), |o| {
            assert!(matches!(
                o.is_in_block(1, 4, 2),
                Err(Error::InvariantBreach(_))
            ));
        });
    }

    #[test]
    fn articulation_examples() {
        with_oracle(&p3(), |o| {
            assert!(o.is_articulation(2).unwrap());
            assert!(!o.is_articulation(1).unwrap());
        });
        with_oracle(&k3(), |o| assert!(!o.is_articulation(1).unwrap()));
        let lone = Graph::build(2, &[]).unwrap();
        with_oracle(&lone, |o| assert!(!o.is_articulation(1).unwrap()));
    }

    #[test]
    fn block_id_examples() {
        with_oracle(&k3(), |o| {
            assert_eq!(o.block_id(1, 2).unwrap(), BlockId::new(3, 1))
        });
        with_oracle(&bowtie(), |o| {
            assert_eq!(o.block_id(3, 4).unwrap(), BlockId::new(5, 3))
        });
        with_oracle(&p3(), |o| {
            assert_eq!(o.block_id(1, 2).unwrap(), BlockId::new(2, 1))
        });
    }

    #[test]
    fn next_articulation_examples() {
        with_oracle(&bowtie(), |o| {
            assert_eq!(o.next_articulation(1, 2, 3).unwrap(), 3)
        });
        with_oracle(&bridged_triangles(), |o| {
            assert_eq!(o.next_articulation(3, 6, 3).unwrap(), 6);
            assert_eq!(o.next_articulation(3, 6, 6).unwrap(), 3);
        });
        with_oracle(&k3(), |o| {
            assert_eq!(o.next_articulation(1, 2, 2).unwrap(), 2)
        });
    }

    #[test]
    fn next_block_examples() {
        with_oracle(&bowtie(), |o| {
            // Neighbours 4 and 5 both lead to (5,3); the scan keeps the last.
            assert_eq!(o.next_block(1, 2, 3).unwrap(), 5);
            let u = o.next_block(3, 4, 3).unwrap();
            assert_eq!(o.block_id(3, u).unwrap(), BlockId::new(3, 1));
        });
        with_oracle(&k3(), |o| {
            let u = o.next_block(1, 2, 1).unwrap();
            assert_eq!(o.block_id(1, u).unwrap(), BlockId::new(3, 1));
        });
        let lone = Graph::build(2, &[]).unwrap();
        with_oracle(&lone, |o| assert!(o.next_block(1, 1, 1).is_err()));
    }

    #[test]
    fn subgraph_examples() {
        with_oracle(&bowtie(), |o| {
            assert!(is_in_subgraph(o, 1, 3, 5).unwrap());
            assert!(is_in_subgraph(o, 4, 3, 1).unwrap());
            assert!(!is_in_subgraph(o, 1, 3, 2).unwrap());
            assert!(is_in_subgraph(o, 1, 3, 3).unwrap());
        });
    }

    #[test]
    fn component_examples() {
        let g = Graph::build(4, &[(1, 2, 1), (2, 3, 1)]).unwrap();
        with_oracle(&g, |o| {
            assert!(!traverse_component(o, 1, 4).unwrap());
            assert!(traverse_component(o, 1, 3).unwrap());
            assert!(traverse_component(o, 4, 4).unwrap());
            assert!(!traverse_component(o, 4, 1).unwrap());
        });
        with_oracle(&bowtie(), |o| assert!(traverse_component(o, 1, 5).unwrap()));
    }
}
