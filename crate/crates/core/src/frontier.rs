//! The frontier: an ordered doubly-linked list of parameter pairs.
//!
//! The list holds the minimal elements of the not-yet-emitted region,
//! strictly increasing in `a` and strictly decreasing in `b` from head to
//! tail. Nodes live in a slab so that identifiers stay stable while priority
//! queue entries point at them; the virtual predecessor of the head is
//! `(-inf, +inf)` and the virtual successor of the tail is `(+inf, -inf)`.

use crate::axis::Param;

const NIL: u32 = u32::MAX;

/// Stable identifier of a frontier node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

#[derive(Debug, Clone, Copy)]
struct Node {
    a: Param,
    b: Param,
    prev: u32,
    next: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("frontier ordering violated: a must strictly increase while b strictly decreases")]
pub struct OrderViolation;

/// Ordered doubly-linked list with stable node handles.
#[derive(Debug, Clone, Default)]
pub struct Frontier {
    nodes: Vec<Node>,
    free: Vec<u32>,
    head: u32,
    tail: u32,
    len: usize,
}

impl Frontier {
    pub fn new() -> Self {
        Frontier {
            nodes: Vec::new(),
            free: Vec::new(),
            head: NIL,
            tail: NIL,
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn head(&self) -> Option<NodeId> {
        (self.head != NIL).then_some(NodeId(self.head))
    }

    pub fn tail(&self) -> Option<NodeId> {
        (self.tail != NIL).then_some(NodeId(self.tail))
    }

    pub fn pair(&self, id: NodeId) -> (Param, Param) {
        let n = &self.nodes[id.0 as usize];
        (n.a, n.b)
    }

    pub fn prev(&self, id: NodeId) -> Option<NodeId> {
        let p = self.nodes[id.0 as usize].prev;
        (p != NIL).then_some(NodeId(p))
    }

    pub fn next(&self, id: NodeId) -> Option<NodeId> {
        let n = self.nodes[id.0 as usize].next;
        (n != NIL).then_some(NodeId(n))
    }

    fn alloc(&mut self, node: Node) -> u32 {
        if let Some(idx) = self.free.pop() {
            self.nodes[idx as usize] = node;
            idx
        } else {
            let idx = u32::try_from(self.nodes.len()).expect("frontier larger than u32 range");
            self.nodes.push(node);
            idx
        }
    }

    /// Append to the tail. The pair must extend the ordering.
    pub fn push_back(&mut self, a: Param, b: Param) -> Result<NodeId, OrderViolation> {
        if self.tail != NIL {
            let t = &self.nodes[self.tail as usize];
            if a <= t.a || b >= t.b {
                return Err(OrderViolation);
            }
        }
        let idx = self.alloc(Node {
            a,
            b,
            prev: self.tail,
            next: NIL,
        });
        if self.tail != NIL {
            self.nodes[self.tail as usize].next = idx;
        } else {
            self.head = idx;
        }
        self.tail = idx;
        self.len += 1;
        Ok(NodeId(idx))
    }

    /// Insert immediately after `after`.
    ///
    /// No ordering check: mid-update states legally hold the removed-to-be
    /// pair next to its replacements. The enumeration step restores and
    /// asserts strict ordering once the popped node is gone.
    pub fn insert_after(&mut self, after: NodeId, a: Param, b: Param) -> NodeId {
        let after = after.0;
        let next = self.nodes[after as usize].next;
        let idx = self.alloc(Node {
            a,
            b,
            prev: after,
            next,
        });
        self.nodes[after as usize].next = idx;
        if next != NIL {
            self.nodes[next as usize].prev = idx;
        } else {
            self.tail = idx;
        }
        self.len += 1;
        NodeId(idx)
    }

    pub fn remove(&mut self, id: NodeId) -> (Param, Param) {
        let idx = id.0;
        let Node { a, b, prev, next } = self.nodes[idx as usize];
        if prev != NIL {
            self.nodes[prev as usize].next = next;
        } else {
            self.head = next;
        }
        if next != NIL {
            self.nodes[next as usize].prev = prev;
        } else {
            self.tail = prev;
        }
        self.free.push(idx);
        self.len -= 1;
        (a, b)
    }

    /// Head-to-tail pairs.
    pub fn pairs(&self) -> Vec<(Param, Param)> {
        let mut out = Vec::with_capacity(self.len);
        let mut cur = self.head;
        while cur != NIL {
            let n = &self.nodes[cur as usize];
            out.push((n.a, n.b));
            cur = n.next;
        }
        out
    }

    /// Rebuild a frontier from an already-ordered pair list.
    pub fn from_pairs<I>(pairs: I) -> Result<(Self, Vec<NodeId>), OrderViolation>
    where
        I: IntoIterator<Item = (Param, Param)>,
    {
        let mut frontier = Frontier::new();
        let mut ids = Vec::new();
        for (a, b) in pairs {
            ids.push(frontier.push_back(a, b)?);
        }
        Ok((frontier, ids))
    }

    /// Check strict ordering around a node, treating the list ends as the
    /// virtual sentinels. Cheap enough to run after every step.
    pub fn locally_ordered(&self, id: NodeId) -> bool {
        let (a, b) = self.pair(id);
        let prev_ok = match self.prev(id) {
            Some(p) => {
                let (pa, pb) = self.pair(p);
                pa < a && pb > b
            }
            None => true,
        };
        let next_ok = match self.next(id) {
            Some(n) => {
                let (na, nb) = self.pair(n);
                a < na && b > nb
            }
            None => true,
        };
        prev_ok && next_ok
    }

    /// Walk the whole list and panic on any ordering breach. O(m), meant
    /// for tests; the streams rely on [`Frontier::locally_ordered`].
    pub fn assert_ordered(&self) {
        let pairs = self.pairs();
        for w in pairs.windows(2) {
            assert!(
                w[0].0 < w[1].0 && w[0].1 > w[1].1,
                "frontier out of order: {pairs:?}"
            );
        }
        assert_eq!(pairs.len(), self.len);
    }
}
