//! Sorted enumeration of bimonotone functions and searches built on it.
//!
//! A function `f(a, b)` on a pair of integer axes is *bimonotone* when it is
//! non-decreasing in each argument, and *proper* when every sublevel set
//! `{f <= z}` is finite. Under those two contracts this crate streams every
//! parameter pair in non-decreasing value order while holding only the
//! frontier of the remaining region: an antichain kept as an ordered list
//! plus a priority queue of its values, whose length never exceeds
//! `sqrt(2n) + 1` after `n` outputs.
//!
//! On top of the streams sit diophantine searches (collisions
//! `f(a,b) = g(c,d)` and k-fold values such as taxicab numbers), contour
//! tracing to start a stream at any level without touching the values below
//! it, exact counting of huge sublevel sets, level-interval parallelization
//! with deterministic merges, and text checkpoints for resumable runs.

pub mod axis;
pub mod contour;
pub mod domain;
pub mod enumerate;
pub mod eval;
pub mod frontier;
pub mod parallel;
pub mod queue;
pub mod search;
pub mod value;

pub use axis::{Axis, ExtParam, Param};
pub use contour::{
    construct_minima, count_at_level, count_below_level, enumerate_range, LevelCounts,
    LevelInterval,
};
pub use domain::{BimonotoneDomain, FnDomain, GeqTriangle, LeqTriangle, Rect};
pub use enumerate::{
    detect_monotonicity_violation, enumerate_bimonotone, enumerate_semimonotone_adaptive,
    enumerate_semimonotone_finite, enumerate_sorted_generic, AdaptiveStream, BimonotoneStream,
    EnumError, SemiFiniteStream, StreamItem,
};
pub use eval::{Evaluator, SumOfCubes};
pub use parallel::{
    checkpoint_resume, checkpoint_save, partition_levels, run_partitioned, Checkpoint,
    CheckpointError, TaskKind, WorkPlan,
};
pub use search::{collide, first_k_fold, k_fold_values, taxicab, CollisionHit, KFoldHit};
pub use value::{Overflow, Value};
