//! The value priority queue.
//!
//! Entries are totally ordered lexicographically on `(value, b, a)`
//! ascending. Ties on value break toward the smaller `b` coordinate, which
//! keeps the pop order deterministic and keeps the popped element minimal
//! for both the one-variable and the two-variable partial orders. Entries
//! are pushed and popped but never re-keyed, so a plain binary heap is the
//! whole implementation.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::axis::Param;
use crate::frontier::NodeId;
use crate::value::Value;

/// A queued value plus the frontier node holding its parameter pair.
///
/// Field order carries the total order: value, then b, then a.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QueueEntry<V: Value> {
    pub value: V,
    pub b: Param,
    pub a: Param,
    pub node: NodeId,
}

/// Min-queue over [`QueueEntry`].
#[derive(Debug, Clone, Default)]
pub struct ValueQueue<V: Value> {
    heap: BinaryHeap<Reverse<QueueEntry<V>>>,
}

impl<V: Value> ValueQueue<V> {
    pub fn new() -> Self {
        ValueQueue {
            heap: BinaryHeap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn push(&mut self, entry: QueueEntry<V>) {
        self.heap.push(Reverse(entry));
    }

    pub fn peek(&self) -> Option<&QueueEntry<V>> {
        self.heap.peek().map(|Reverse(e)| e)
    }

    pub fn pop(&mut self) -> Option<QueueEntry<V>> {
        self.heap.pop().map(|Reverse(e)| e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontier::Frontier;

    #[test]
    fn pop_order_is_value_then_b_then_a() {
        // Real node ids so entries resolve; their pairs are irrelevant here.
        let (_, ids) =
            Frontier::from_pairs((0..4u64).map(|i| (Param(i + 1), Param(10 - i)))).unwrap();
        let mut q = ValueQueue::new();
        q.push(QueueEntry {
            value: 5i128,
            b: Param(2),
            a: Param(9),
            node: ids[0],
        });
        q.push(QueueEntry {
            value: 3,
            b: Param(7),
            a: Param(1),
            node: ids[1],
        });
        q.push(QueueEntry {
            value: 5,
            b: Param(1),
            a: Param(4),
            node: ids[2],
        });
        q.push(QueueEntry {
            value: 5,
            b: Param(2),
            a: Param(3),
            node: ids[3],
        });

        let popped: Vec<(i128, u64, u64)> =
            std::iter::from_fn(|| q.pop().map(|e| (e.value, e.b.0, e.a.0))).collect();
        assert_eq!(popped, vec![(3, 7, 1), (5, 1, 4), (5, 2, 3), (5, 2, 9)]);
    }
}
