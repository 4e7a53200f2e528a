//! Block machinery computed rather than stored.
//!
//! A block is named by its [`BlockId`] and designated at runtime by any two
//! of its vertices `(v1, v2)`. The [`BlockOracle`] trait answers membership,
//! articulation and stepping queries; [`TableOracle`] answers them from a
//! connectivity oracle over the whole graph, and
//! [`LocalOracle`](crate::bounded::LocalOracle) from a bounded neighbourhood.
//! On top of either, [`TraversalCursor`] walks the block tree in Euler-tour
//! order without ever materialising it.

mod global;

pub use global::TableOracle;

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::meter::Meter;

/// `(largest, smallest)` vertex label of a block. Field order gives the
/// lexicographic comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockId {
    pub largest: Vertex,
    pub smallest: Vertex,
}

impl BlockId {
    pub fn new(largest: Vertex, smallest: Vertex) -> Self {
        BlockId { largest, smallest }
    }

    /// Id of an ascending, nonempty vertex list.
    pub fn of_sorted(block: &[Vertex]) -> Self {
        BlockId {
            largest: *block.last().expect("nonempty block"),
            smallest: block[0],
        }
    }
}

/// True when `next(a1, a2, p)` selects `a1`.
#[inline]
pub fn prefers_first<T: Ord>(a1: &T, a2: &T, p: &T) -> bool {
    (a2 <= p && p < a1) || (p < a1 && a1 <= a2) || (a1 <= a2 && a2 <= p)
}

/// Of two values, the one that is the better cyclic successor of `p`:
/// the smallest value above `p`, or failing that the smallest overall.
#[inline]
pub fn next<T: Ord + Copy>(a1: T, a2: T, p: T) -> T {
    if prefers_first(&a1, &a2, &p) {
        a1
    } else {
        a2
    }
}

/// Cyclic successor of `p` in a generated sequence, folding [`next`] so only
/// one candidate is held at a time.
pub fn next_in_list<T: Ord + Copy>(list: impl IntoIterator<Item = T>, p: T) -> Result<T> {
    let mut items = list.into_iter();
    let first = items.next().ok_or(Error::EmptyList)?;
    Ok(items.fold(first, |a, x| next(a, x, p)))
}

/// The block queries every traversal is built from.
///
/// Arguments follow the conventions of the original subroutines: `(v1, v2)`
/// designate a block (adjacent, or known to share one), `p` is a vertex of it.
pub trait BlockOracle<'m> {
    fn meter(&self) -> &'m Meter;
    fn degree(&mut self, v: Vertex) -> usize;
    fn neighbor(&mut self, v: Vertex, j: usize) -> Vertex;
    fn is_in_block(&mut self, v1: Vertex, v2: Vertex, v: Vertex) -> Result<bool>;
    fn are_in_block(&mut self, u: Vertex, v: Vertex) -> Result<bool>;
    fn is_articulation(&mut self, v: Vertex) -> Result<bool>;
    fn block_id(&mut self, v1: Vertex, v2: Vertex) -> Result<BlockId>;
    fn next_articulation(&mut self, v1: Vertex, v2: Vertex, p: Vertex) -> Result<Vertex>;
    fn next_block(&mut self, v1: Vertex, v2: Vertex, p: Vertex) -> Result<Vertex>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CursorState {
    Running,
    Found,
    Exhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tour {
    /// Subgraph hanging off a root block; ends on re-entering the root.
    Subgraph,
    /// Whole component; ends when the first (block, exit) pair recurs,
    /// whether or not the target was met on the way.
    Component {
        first_exit: Option<Vertex>,
        met: bool,
    },
}

/// Resumable Euler-subtour over the block tree, looking for `target`.
///
/// `(v1, v2)` designates the block being visited and `p` the articulation
/// point it was entered through. Each [`step`](Self::step) is one block-step:
/// one `next_articulation` and one `next_block`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraversalCursor {
    v1: Vertex,
    v2: Vertex,
    p: Vertex,
    target: Vertex,
    start_id: BlockId,
    tour: Tour,
    state: CursorState,
    block_steps: u64,
}

impl TraversalCursor {
    /// Register words a cursor occupies in its owner's frame.
    pub const WORDS: usize = 10;

    /// Cursor over the subgraph rooted at `block(v, p)` on `p`'s side.
    pub fn subgraph<'m, O: BlockOracle<'m>>(
        oracle: &mut O,
        v: Vertex,
        p: Vertex,
        target: Vertex,
    ) -> Result<Self> {
        let m = oracle.meter();
        let start_id = oracle.block_id(p, v)?;
        let mut cursor = TraversalCursor {
            v1: p,
            v2: v,
            p,
            target,
            start_id,
            tour: Tour::Subgraph,
            state: CursorState::Running,
            block_steps: 0,
        };
        m.write(5);
        if target == p {
            cursor.state = CursorState::Found;
            return Ok(cursor);
        }
        cursor.v2 = oracle.next_block(p, v, p)?;
        m.write(1);
        if oracle.block_id(cursor.v1, cursor.v2)? == start_id {
            cursor.state = CursorState::Exhausted;
        }
        Ok(cursor)
    }

    /// Cursor over the whole component of `s`. It always completes the tour
    /// and then reports `Found` iff `target` was met.
    pub fn component<'m, O: BlockOracle<'m>>(
        oracle: &mut O,
        s: Vertex,
        target: Vertex,
    ) -> Result<Self> {
        let m = oracle.meter();
        let mut cursor = TraversalCursor {
            v1: s,
            v2: s,
            p: s,
            target,
            start_id: BlockId::new(s, s),
            tour: Tour::Component {
                first_exit: None,
                met: s == target,
            },
            state: CursorState::Running,
            block_steps: 0,
        };
        m.write(6);
        if oracle.degree(s) == 0 {
            cursor.state = cursor.finished();
        } else {
            cursor.v2 = oracle.neighbor(s, 1);
            cursor.start_id = oracle.block_id(s, cursor.v2)?;
            m.write(3);
        }
        Ok(cursor)
    }

    fn finished(&self) -> CursorState {
        match self.tour {
            Tour::Component { met: true, .. } => CursorState::Found,
            _ => CursorState::Exhausted,
        }
    }

    pub fn state(&self) -> CursorState {
        self.state
    }

    pub fn block_steps(&self) -> u64 {
        self.block_steps
    }

    /// The two vertices designating the block currently visited.
    pub fn block(&self) -> (Vertex, Vertex) {
        (self.v1, self.v2)
    }

    /// Articulation point the current block was entered through.
    pub fn pivot(&self) -> Vertex {
        self.p
    }

    pub fn step<'m, O: BlockOracle<'m>>(&mut self, oracle: &mut O) -> Result<CursorState> {
        if self.state != CursorState::Running {
            return Ok(self.state);
        }
        let m = oracle.meter();
        let _regs = m.scope(2);
        let exit = oracle.next_articulation(self.v1, self.v2, self.p)?;
        m.write(1);
        if let Tour::Component { first_exit, .. } = &mut self.tour {
            match *first_exit {
                None => {
                    *first_exit = Some(exit);
                    m.write(1);
                }
                Some(first) => {
                    if exit == first && oracle.block_id(self.v1, self.v2)? == self.start_id {
                        self.state = self.finished();
                        return Ok(self.state);
                    }
                }
            }
        }
        let entry = oracle.next_block(self.v1, self.v2, exit)?;
        m.write(1);
        if oracle.is_in_block(self.v1, self.v2, self.target)? {
            match &mut self.tour {
                Tour::Subgraph => {
                    self.state = CursorState::Found;
                    return Ok(self.state);
                }
                Tour::Component { met, .. } => {
                    *met = true;
                    m.write(1);
                }
            }
        }
        self.v1 = exit;
        self.v2 = entry;
        self.p = exit;
        self.block_steps += 1;
        m.write(4);
        if self.tour == Tour::Subgraph && oracle.block_id(self.v1, self.v2)? == self.start_id {
            self.state = CursorState::Exhausted;
        }
        Ok(self.state)
    }

    /// Steps until the cursor stops.
    pub fn run<'m, O: BlockOracle<'m>>(&mut self, oracle: &mut O) -> Result<CursorState> {
        while self.step(oracle)? == CursorState::Running {}
        Ok(self.state)
    }
}

/// Whether `t` lies in the component of `G - (block(v, p) \ {p})` holding `p`.
pub fn is_in_subgraph<'m, O: BlockOracle<'m>>(
    oracle: &mut O,
    v: Vertex,
    p: Vertex,
    t: Vertex,
) -> Result<bool> {
    let _regs = oracle.meter().scope(TraversalCursor::WORDS);
    let mut cursor = TraversalCursor::subgraph(oracle, v, p, t)?;
    Ok(cursor.run(oracle)? == CursorState::Found)
}

/// Full block-tree tour of `s`'s component; true iff `t` is met.
pub fn traverse_component<'m, O: BlockOracle<'m>>(
    oracle: &mut O,
    s: Vertex,
    t: Vertex,
) -> Result<bool> {
    Ok(traverse_component_counted(oracle, s, t)?.0)
}

pub(crate) fn traverse_component_counted<'m, O: BlockOracle<'m>>(
    oracle: &mut O,
    s: Vertex,
    t: Vertex,
) -> Result<(bool, u64)> {
    let _regs = oracle.meter().scope(TraversalCursor::WORDS);
    let mut cursor = TraversalCursor::component(oracle, s, t)?;
    let state = cursor.run(oracle)?;
    Ok((state == CursorState::Found, cursor.block_steps()))
}
