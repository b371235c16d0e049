//! Collision and multiple-value search over sorted streams.
//!
//! Two sorted streams collide by a two-pointer walk: advance whichever side
//! shows the smaller value, and when both sides agree emit the cross product
//! of the equal-value blocks. A single stream grouped into equal-value runs
//! yields k-fold values: the least value reached by `k` distinct parameter
//! pairs. Equal-value blocks are buffered whole before emission; their size
//! is the multiplicity of one value, which stays tiny in practice.

use crate::axis::Param;
use crate::contour::{enumerate_range, RangeError};
use crate::domain::{BimonotoneDomain, LeqTriangle};
use crate::enumerate::{EnumError, StreamItem};
use crate::eval::{Evaluator, SumOfCubes};
use crate::parallel::{partition_levels, run_partitioned, PartitionError, RunError};
use crate::value::Value;

/// One solution of `f(left) = g(right)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionHit<V> {
    pub value: V,
    pub left: (Param, Param),
    pub right: (Param, Param),
}

/// A value reached by at least `k` distinct parameter pairs.
///
/// Representations keep the stream's own tie-break order: ascending `b`,
/// hence descending `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KFoldHit<V> {
    pub value: V,
    pub representations: Vec<(Param, Param)>,
}

/// One maximal run of equal-valued items.
type Block<V> = (V, Vec<(Param, Param)>);

/// Groups a sorted stream into maximal runs of equal value.
struct Blocks<V, I> {
    src: I,
    lookahead: Option<StreamItem<V>>,
    failed: bool,
}

impl<V, I> Blocks<V, I>
where
    V: Value,
    I: Iterator<Item = Result<StreamItem<V>, EnumError>>,
{
    fn new(src: I) -> Self {
        Blocks {
            src,
            lookahead: None,
            failed: false,
        }
    }

    fn next_block(&mut self) -> Option<Result<Block<V>, EnumError>> {
        if self.failed {
            return None;
        }
        let first = match self.lookahead.take() {
            Some(item) => item,
            None => match self.src.next()? {
                Ok(item) => item,
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
            },
        };
        let value = first.value.clone();
        let mut reps = vec![(first.a, first.b)];
        loop {
            match self.src.next() {
                None => break,
                Some(Err(e)) => {
                    self.failed = true;
                    return Some(Err(e));
                }
                Some(Ok(item)) => {
                    if item.value == value {
                        reps.push((item.a, item.b));
                    } else {
                        self.lookahead = Some(item);
                        break;
                    }
                }
            }
        }
        Some(Ok((value, reps)))
    }
}

/// Collide two sorted streams, emitting every cross pair with equal value
/// in non-decreasing value order.
pub struct Collide<V, L, R>
where
    V: Value,
{
    left: Blocks<V, L>,
    right: Blocks<V, R>,
    left_block: Option<(V, Vec<(Param, Param)>)>,
    right_block: Option<(V, Vec<(Param, Param)>)>,
    emit: Vec<CollisionHit<V>>,
    failed: bool,
}

pub fn collide<V, L, R>(left: L, right: R) -> Collide<V, L, R>
where
    V: Value,
    L: Iterator<Item = Result<StreamItem<V>, EnumError>>,
    R: Iterator<Item = Result<StreamItem<V>, EnumError>>,
{
    Collide {
        left: Blocks::new(left),
        right: Blocks::new(right),
        left_block: None,
        right_block: None,
        emit: Vec::new(),
        failed: false,
    }
}

impl<V, L, R> Iterator for Collide<V, L, R>
where
    V: Value,
    L: Iterator<Item = Result<StreamItem<V>, EnumError>>,
    R: Iterator<Item = Result<StreamItem<V>, EnumError>>,
{
    type Item = Result<CollisionHit<V>, EnumError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(hit) = self.emit.pop() {
                return Some(Ok(hit));
            }
            if self.failed {
                return None;
            }
            if self.left_block.is_none() {
                match self.left.next_block()? {
                    Ok(block) => self.left_block = Some(block),
                    Err(e) => {
                        self.failed = true;
                        return Some(Err(e));
                    }
                }
            }
            if self.right_block.is_none() {
                match self.right.next_block()? {
                    Ok(block) => self.right_block = Some(block),
                    Err(e) => {
                        self.failed = true;
                        return Some(Err(e));
                    }
                }
            }
            let lv = &self.left_block.as_ref().unwrap().0;
            let rv = &self.right_block.as_ref().unwrap().0;
            if lv < rv {
                self.left_block = None;
            } else if rv < lv {
                self.right_block = None;
            } else {
                let (value, lreps) = self.left_block.take().unwrap();
                let (_, rreps) = self.right_block.take().unwrap();
                // Left-major cross product; emit pops from the back.
                for l in lreps.iter().rev() {
                    for r in rreps.iter().rev() {
                        self.emit.push(CollisionHit {
                            value: value.clone(),
                            left: *l,
                            right: *r,
                        });
                    }
                }
            }
        }
    }
}

/// Stream of values attained at least `k` times, each with all of its
/// representations. Consecutive hits have strictly increasing value.
pub struct KFold<V, I>
where
    V: Value,
{
    blocks: Blocks<V, I>,
    k: usize,
}

pub fn k_fold_values<V, I>(src: I, k: usize) -> KFold<V, I>
where
    V: Value,
    I: Iterator<Item = Result<StreamItem<V>, EnumError>>,
{
    assert!(k >= 1, "k-fold search needs k >= 1");
    KFold {
        blocks: Blocks::new(src),
        k,
    }
}

impl<V, I> Iterator for KFold<V, I>
where
    V: Value,
    I: Iterator<Item = Result<StreamItem<V>, EnumError>>,
{
    type Item = Result<KFoldHit<V>, EnumError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            match self.blocks.next_block()? {
                Err(e) => return Some(Err(e)),
                Ok((value, reps)) if reps.len() >= self.k => {
                    return Some(Ok(KFoldHit {
                        value,
                        representations: reps,
                    }));
                }
                Ok(_) => continue,
            }
        }
    }
}

/// Failure inside one interval task.
#[derive(Debug, thiserror::Error)]
pub enum TaskError {
    #[error(transparent)]
    Range(#[from] RangeError),
    #[error(transparent)]
    Stream(#[from] EnumError),
}

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Run(#[from] RunError<TaskError>),
    #[error(transparent)]
    Stream(#[from] EnumError),
    #[error(transparent)]
    Range(#[from] RangeError),
}

/// Fixed interval fan-out for partitioned value searches. Independent of
/// the worker count so that results cannot depend on it.
const SEARCH_PARTS: u64 = 32;

/// Smallest `limit` k-fold values of `f` on `domain` within `[lo, hi)`,
/// searched over level intervals with up to `workers` running concurrently.
///
/// The merged result is identical for any worker count: intervals are
/// merged strictly in order and the subdivision depends only on the range.
pub fn first_k_fold<V, E, D>(
    eval: &E,
    domain: &D,
    k: usize,
    lo: &V,
    hi: &V,
    workers: usize,
    limit: usize,
) -> Result<Vec<KFoldHit<V>>, SearchError>
where
    V: Value,
    E: Evaluator<V> + Clone + Sync,
    D: BimonotoneDomain + Clone + Sync,
{
    let intervals = partition_levels(lo, hi, SEARCH_PARTS)?;
    let mut hits: Vec<KFoldHit<V>> = Vec::new();
    run_partitioned(
        &intervals,
        workers,
        |interval| -> Result<Vec<KFoldHit<V>>, TaskError> {
            let stream = enumerate_range(eval.clone(), domain.clone(), interval)?;
            k_fold_values(stream, k)
                .take(limit)
                .collect::<Result<Vec<_>, _>>()
                .map_err(TaskError::from)
        },
        |batch: Vec<KFoldHit<V>>| {
            for hit in batch {
                if hits.len() < limit {
                    hits.push(hit);
                }
            }
            hits.len() >= limit
        },
    )?;
    Ok(hits)
}

/// The smallest value below `z_max` expressible as `a^3 + b^3` with
/// `1 <= a <= b` in at least `k` ways, with all of its decompositions.
pub fn taxicab<V: Value>(
    k: usize,
    z_max: &V,
    workers: usize,
) -> Result<Option<KFoldHit<V>>, SearchError> {
    let lo = V::from_u64(2);
    if *z_max <= lo {
        return Ok(None);
    }
    let domain = LeqTriangle::from_min(1);
    let hits = first_k_fold(&SumOfCubes, &domain, k, &lo, z_max, workers, 1)?;
    Ok(hits.into_iter().next())
}
