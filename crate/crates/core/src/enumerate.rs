//! Sorted enumeration algorithms.
//!
//! Four strategies, all emitting every domain point exactly once with
//! non-decreasing values and the `(value, b, a)` tie-break:
//!
//! * [`enumerate_sorted_generic`]: materialize and sort, the baseline that
//!   works for any function on an explicit finite point set.
//! * [`SemiFiniteStream`]: one queue entry per element of a finite `B`,
//!   advancing through `A`; needs monotonicity in `a` only.
//! * [`AdaptiveStream`]: both axes may be unbounded; the working window of
//!   `B` grows exactly when the current minimum sits on its edge.
//! * [`BimonotoneStream`]: the frontier algorithm. Keeps only the minimal
//!   elements of the not-yet-emitted region in an ordered list plus a
//!   priority queue of their values; after `n` outputs the queue never
//!   holds more than `sqrt(2n) + 1` entries.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::axis::{Axis, ExtParam, Param};
use crate::domain::BimonotoneDomain;
use crate::eval::Evaluator;
use crate::frontier::{Frontier, NodeId, OrderViolation};
use crate::queue::{QueueEntry, ValueQueue};
use crate::value::{Overflow, Value};

/// One emitted point. Ordinals are 1-based and increase by exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamItem<V> {
    pub value: V,
    pub a: Param,
    pub b: Param,
    pub ordinal: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumError {
    #[error(transparent)]
    Overflow(#[from] Overflow),
    /// The popped value decreased, or a frontier update broke the list
    /// ordering: the evaluator or the domain does not honor its contract.
    #[error(
        "sorted order violated at ({a}, {b}): evaluator or domain breaks the bimonotone contract"
    )]
    ContractViolation { a: Param, b: Param },
}

/// Sort an explicit point set by `(value, b, a)`.
///
/// This is the memory-hungry baseline: it stores every pair before emitting.
/// The streams below exist to avoid exactly that, and their outputs are
/// checked against this one in tests.
pub fn enumerate_sorted_generic<V, E>(
    eval: &E,
    points: &[(Param, Param)],
) -> Result<Vec<StreamItem<V>>, Overflow>
where
    V: Value,
    E: Evaluator<V>,
{
    let mut keyed: Vec<(V, Param, Param)> = points
        .iter()
        .map(|&(a, b)| eval.eval_checked(a, b).map(|v| (v, b, a)))
        .collect::<Result<_, _>>()?;
    keyed.sort();
    Ok(keyed
        .into_iter()
        .zip(1u64..)
        .map(|((value, b, a), ordinal)| StreamItem {
            value,
            a,
            b,
            ordinal,
        })
        .collect())
}

/// Queue record for the frontier-free streams.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct SemiEntry<V: Value> {
    value: V,
    b: Param,
    a: Param,
}

/// Sorted enumeration of `axis_a x B` for a function monotone in `a`.
///
/// Holds one queue entry per element of `B` throughout.
pub struct SemiFiniteStream<V: Value, E> {
    eval: E,
    axis_a: Axis,
    heap: BinaryHeap<Reverse<SemiEntry<V>>>,
    emitted: u64,
    peak: usize,
    failed: bool,
}

/// Build a [`SemiFiniteStream`]. Duplicate entries in `b_set` are ignored.
pub fn enumerate_semimonotone_finite<V, E>(
    eval: E,
    axis_a: Axis,
    b_set: &[Param],
) -> Result<SemiFiniteStream<V, E>, Overflow>
where
    V: Value,
    E: Evaluator<V>,
{
    let mut bs: Vec<Param> = b_set.to_vec();
    bs.sort();
    bs.dedup();
    let mut heap = BinaryHeap::with_capacity(bs.len());
    let a_min = axis_a.min();
    for b in bs {
        let value = eval.eval_checked(a_min, b)?;
        heap.push(Reverse(SemiEntry { value, b, a: a_min }));
    }
    let peak = heap.len();
    Ok(SemiFiniteStream {
        eval,
        axis_a,
        heap,
        emitted: 0,
        peak,
        failed: false,
    })
}

impl<V: Value, E: Evaluator<V>> SemiFiniteStream<V, E> {
    pub fn queue_len(&self) -> usize {
        self.heap.len()
    }

    pub fn peak_queue(&self) -> usize {
        self.peak
    }

    pub fn peek_value(&self) -> Option<&V> {
        self.heap.peek().map(|Reverse(e)| &e.value)
    }
}

impl<V: Value, E: Evaluator<V>> Iterator for SemiFiniteStream<V, E> {
    type Item = Result<StreamItem<V>, EnumError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let Reverse(SemiEntry { value, b, a }) = self.heap.pop()?;
        if let ExtParam::Finite(next_a) = self.axis_a.succ(a) {
            match self.eval.eval_checked(next_a, b) {
                Ok(v) => self.heap.push(Reverse(SemiEntry {
                    value: v,
                    b,
                    a: next_a,
                })),
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e.into()));
                }
            }
        }
        self.peak = self.peak.max(self.heap.len());
        self.emitted += 1;
        Some(Ok(StreamItem {
            value,
            a,
            b,
            ordinal: self.emitted,
        }))
    }
}

/// Sorted enumeration of a full product when both axes may be unbounded.
///
/// Requires monotonicity in `a` and a non-decreasing first column
/// `b -> f(a_min, b)`; the active window `[b_min, b_max]` widens whenever
/// the popped minimum sits at `b_max`. After `n` outputs the queue holds at
/// most `n + 1` entries.
pub struct AdaptiveStream<V: Value, E> {
    eval: E,
    axis_a: Axis,
    axis_b: Axis,
    heap: BinaryHeap<Reverse<SemiEntry<V>>>,
    b_max: Param,
    emitted: u64,
    peak: usize,
    failed: bool,
}

pub fn enumerate_semimonotone_adaptive<V, E>(
    eval: E,
    axis_a: Axis,
    axis_b: Axis,
) -> Result<AdaptiveStream<V, E>, Overflow>
where
    V: Value,
    E: Evaluator<V>,
{
    let mut heap = BinaryHeap::new();
    let value = eval.eval_checked(axis_a.min(), axis_b.min())?;
    heap.push(Reverse(SemiEntry {
        value,
        b: axis_b.min(),
        a: axis_a.min(),
    }));
    Ok(AdaptiveStream {
        eval,
        axis_a,
        axis_b,
        heap,
        b_max: axis_b.min(),
        emitted: 0,
        peak: 1,
        failed: false,
    })
}

impl<V: Value, E: Evaluator<V>> AdaptiveStream<V, E> {
    pub fn queue_len(&self) -> usize {
        self.heap.len()
    }

    pub fn peak_queue(&self) -> usize {
        self.peak
    }

    pub fn peek_value(&self) -> Option<&V> {
        self.heap.peek().map(|Reverse(e)| &e.value)
    }

    /// Parameter pairs currently queued. The bimonotone frontier at the same
    /// level is always a subset of these.
    pub fn queue_pairs(&self) -> Vec<(Param, Param)> {
        self.heap.iter().map(|Reverse(e)| (e.a, e.b)).collect()
    }

    fn push_eval(&mut self, a: Param, b: Param) -> Result<(), Overflow> {
        let value = self.eval.eval_checked(a, b)?;
        self.heap.push(Reverse(SemiEntry { value, b, a }));
        Ok(())
    }
}

impl<V: Value, E: Evaluator<V>> Iterator for AdaptiveStream<V, E> {
    type Item = Result<StreamItem<V>, EnumError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let Reverse(SemiEntry { value, b, a }) = self.heap.pop()?;
        let mut advance = || -> Result<(), Overflow> {
            if let ExtParam::Finite(next_a) = self.axis_a.succ(a) {
                self.push_eval(next_a, b)?;
            }
            if b == self.b_max {
                if let ExtParam::Finite(next_b) = self.axis_b.succ(self.b_max) {
                    self.b_max = next_b;
                    self.push_eval(self.axis_a.min(), next_b)?;
                }
            }
            Ok(())
        };
        if let Err(e) = advance() {
            self.failed = true;
            return Some(Err(e.into()));
        }
        self.peak = self.peak.max(self.heap.len());
        self.emitted += 1;
        Some(Ok(StreamItem {
            value,
            a,
            b,
            ordinal: self.emitted,
        }))
    }
}

/// Remove `node` from the frontier, first inserting the up-to-two new
/// minima it uncovers. Returns the inserted nodes as `(right, up)`, i.e.
/// the successor-in-`a` and successor-in-`b` candidates.
///
/// The candidate `(succ a, b)` is blocked by the list successor when one
/// exists and only consults the domain at the tail; symmetrically for
/// `(a, succ b)` against the list predecessor at the head. Interior
/// candidates are always inside a valid domain, so no membership test is
/// needed there.
fn settle_removal<D: BimonotoneDomain>(
    frontier: &mut Frontier,
    node: NodeId,
    domain: &D,
) -> (Option<NodeId>, Option<NodeId>) {
    let (a, b) = frontier.pair(node);
    let succ_a = domain.axis_a().succ(a);
    let succ_b = domain.axis_b().succ(b);

    let insert_right = match frontier.next(node) {
        Some(s) => succ_a < ExtParam::Finite(frontier.pair(s).0),
        None => domain.contains_ext(succ_a, ExtParam::Finite(b)),
    };
    let insert_up = match frontier.prev(node) {
        Some(p) => succ_b < ExtParam::Finite(frontier.pair(p).1),
        None => domain.contains_ext(ExtParam::Finite(a), succ_b),
    };

    let right = insert_right.then(|| {
        let sa = succ_a
            .finite()
            .expect("guard admits finite successors only");
        frontier.insert_after(node, sa, b)
    });
    let up = insert_up.then(|| {
        let sb = succ_b
            .finite()
            .expect("guard admits finite successors only");
        frontier.insert_after(node, a, sb)
    });

    frontier.remove(node);
    (right, up)
}

/// Sorted enumeration of a bimonotone domain by frontier maintenance.
pub struct BimonotoneStream<V: Value, E, D> {
    eval: E,
    domain: D,
    frontier: Frontier,
    queue: ValueQueue<V>,
    emitted: u64,
    peak: usize,
    last_value: Option<V>,
    ceiling: Option<V>,
    // The sqrt(2n)+1 bound only applies to streams that started at the
    // domain minimum, not to streams seeded mid-level.
    from_scratch: bool,
    failed: bool,
}

/// Stream the whole domain in sorted order.
pub fn enumerate_bimonotone<V, E, D>(
    eval: E,
    domain: D,
) -> Result<BimonotoneStream<V, E, D>, Overflow>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
{
    BimonotoneStream::new(eval, domain)
}

impl<V, E, D> BimonotoneStream<V, E, D>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
{
    pub fn new(eval: E, domain: D) -> Result<Self, Overflow> {
        let a_min = domain.axis_a().min();
        let b_min = domain.axis_b().min();
        let mut frontier = Frontier::new();
        let mut queue = ValueQueue::new();
        if domain.contains(a_min, b_min) {
            let value = eval.eval_checked(a_min, b_min)?;
            let node = frontier
                .push_back(a_min, b_min)
                .expect("a single pair is trivially ordered");
            queue.push(QueueEntry {
                value,
                b: b_min,
                a: a_min,
                node,
            });
        }
        let peak = frontier.len();
        Ok(BimonotoneStream {
            eval,
            domain,
            frontier,
            queue,
            emitted: 0,
            peak,
            last_value: None,
            ceiling: None,
            from_scratch: true,
            failed: false,
        })
    }

    /// Seed a stream from an ordered frontier, an antichain whose upper set
    /// within the domain is exactly the not-yet-emitted region.
    pub fn from_frontier<I>(eval: E, domain: D, pairs: I, emitted: u64) -> Result<Self, ResumeError>
    where
        I: IntoIterator<Item = (Param, Param)>,
    {
        let (frontier, ids) = Frontier::from_pairs(pairs)?;
        let mut queue = ValueQueue::new();
        for id in ids {
            let (a, b) = frontier.pair(id);
            let value = eval.eval_checked(a, b).map_err(ResumeError::Overflow)?;
            queue.push(QueueEntry {
                value,
                b,
                a,
                node: id,
            });
        }
        let peak = frontier.len();
        Ok(BimonotoneStream {
            eval,
            domain,
            frontier,
            queue,
            emitted,
            peak,
            last_value: None,
            ceiling: None,
            from_scratch: false,
            failed: false,
        })
    }

    /// Stop the stream before the first value `>= hi`.
    pub fn with_ceiling(mut self, hi: V) -> Self {
        self.ceiling = Some(hi);
        self
    }

    /// Value of the next item, were one to be popped.
    pub fn peek_value(&self) -> Option<&V> {
        self.queue.peek().map(|e| &e.value)
    }

    pub fn frontier_len(&self) -> usize {
        self.frontier.len()
    }

    /// Largest frontier length seen so far.
    pub fn peak_frontier(&self) -> usize {
        self.peak
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    pub fn last_value(&self) -> Option<&V> {
        self.last_value.as_ref()
    }

    /// Ordered snapshot of the live frontier.
    pub fn frontier_pairs(&self) -> Vec<(Param, Param)> {
        self.frontier.pairs()
    }

    /// True when every emitted value is strictly below every pending one,
    /// i.e. the not-yet-emitted region is exactly an upper level set.
    pub fn at_boundary(&self) -> bool {
        match (&self.last_value, self.peek_value()) {
            (None, _) => true,
            (_, None) => true,
            (Some(last), Some(next)) => last < next,
        }
    }

    /// Pop the minimal entry and restore the frontier invariants.
    ///
    /// Callers must ensure the queue is non-empty; the iterator wrapper
    /// handles exhaustion and the value ceiling.
    pub fn step(&mut self) -> Result<StreamItem<V>, EnumError> {
        let entry = self.queue.pop().expect("step requires a non-empty queue");
        let QueueEntry { value, b, a, node } = entry;
        debug_assert_eq!(
            self.frontier.pair(node),
            (a, b),
            "queue entry lost its node"
        );

        if let Some(last) = &self.last_value {
            if value < *last {
                self.failed = true;
                return Err(EnumError::ContractViolation { a, b });
            }
        }

        let (right, up) = settle_removal(&mut self.frontier, node, &self.domain);
        for id in [up, right].into_iter().flatten() {
            let (na, nb) = self.frontier.pair(id);
            if !self.frontier.locally_ordered(id) {
                self.failed = true;
                return Err(EnumError::ContractViolation { a: na, b: nb });
            }
            match self.eval.eval_checked(na, nb) {
                Ok(v) => self.queue.push(QueueEntry {
                    value: v,
                    b: nb,
                    a: na,
                    node: id,
                }),
                Err(e) => {
                    self.failed = true;
                    return Err(e.into());
                }
            }
        }

        self.emitted += 1;
        self.peak = self.peak.max(self.frontier.len());
        debug_assert_eq!(self.queue.len(), self.frontier.len());
        if self.from_scratch {
            // m <= sqrt(2n) + 1, kept exact in integers as (m-1)^2 <= 2n.
            let m = self.frontier.len() as u128;
            debug_assert!(
                m.saturating_sub(1).pow(2) <= 2 * self.emitted as u128,
                "frontier bound exceeded: m = {m} after n = {} outputs",
                self.emitted
            );
        }
        if let (Some(k), Some(la)) = (self.domain.axis_a().len(), self.domain.axis_b().len()) {
            debug_assert!(self.frontier.len() as u64 <= k.min(la));
        }

        self.last_value = Some(value.clone());
        Ok(StreamItem {
            value,
            a,
            b,
            ordinal: self.emitted,
        })
    }
}

impl<V, E, D> Iterator for BimonotoneStream<V, E, D>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
{
    type Item = Result<StreamItem<V>, EnumError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.queue.is_empty() {
            return None;
        }
        if let (Some(hi), Some(next)) = (&self.ceiling, self.peek_value()) {
            if next >= hi {
                return None;
            }
        }
        Some(self.step())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResumeError {
    #[error("frontier pairs are not strictly ordered")]
    CorruptFrontier(#[from] OrderViolation),
    #[error(transparent)]
    Overflow(Overflow),
}

/// Direction of a failed monotonicity probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeAxis {
    /// `f(a, b) > f(a+1, b)`
    AStep,
    /// `f(a, b) > f(a, b+1)`
    BStep,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub a: Param,
    pub b: Param,
    pub axis: ProbeAxis,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MonotonicityReport {
    pub violations: Vec<MonotonicityViolation>,
}

impl MonotonicityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively check `f(a,b) <= f(a+1,b)` and `f(a,b) <= f(a,b+1)` for all
/// probe pairs that lie inside both the window `[min, a_hi] x [min, b_hi]`
/// and the domain. Opt-in: it costs one evaluation per edge of the window
/// grid, so production streams rely on the lazy in-stream check instead.
pub fn detect_monotonicity_violation<V, E, D>(
    eval: &E,
    domain: &D,
    a_hi: Param,
    b_hi: Param,
) -> Result<MonotonicityReport, Overflow>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
{
    let mut report = MonotonicityReport::default();
    let a_min = domain.axis_a().min();
    let b_min = domain.axis_b().min();
    for a in a_min.0..=a_hi.0 {
        for b in b_min.0..=b_hi.0 {
            let here = (Param(a), Param(b));
            if !domain.contains(here.0, here.1) {
                continue;
            }
            let value: V = eval.eval_checked(here.0, here.1)?;
            if a < a_hi.0
                && domain.contains(Param(a + 1), Param(b))
                && eval.eval_checked(Param(a + 1), Param(b))? < value
            {
                report.violations.push(MonotonicityViolation {
                    a: here.0,
                    b: here.1,
                    axis: ProbeAxis::AStep,
                });
            }
            if b < b_hi.0
                && domain.contains(Param(a), Param(b + 1))
                && eval.eval_checked(Param(a), Param(b + 1))? < value
            {
                report.violations.push(MonotonicityViolation {
                    a: here.0,
                    b: here.1,
                    axis: ProbeAxis::BStep,
                });
            }
        }
    }
    Ok(report)
}
