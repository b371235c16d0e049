//! Level initialization by contour tracing.
//!
//! To start enumerating at level `z` without touching anything below it,
//! walk the boundary between `{f < z}` and `{f >= z}` inside the domain and
//! record the minimal elements of the upper part. The walk costs one pass
//! along each axis extent, not one pass per point, and as a by-product it
//! counts the points below the contour; that count is how exact sizes of
//! huge sublevel sets are obtained without enumerating them.
//!
//! Inner searches use galloping (exponential then binary) probes instead of
//! the plain linear scans, cutting each column or row search to a
//! logarithmic number of evaluations. A linear reference walker is kept in
//! the test suite to pin the optimized walk down.

use crate::axis::{ExtParam, Param};
use crate::domain::BimonotoneDomain;
use crate::enumerate::BimonotoneStream;
use crate::eval::Evaluator;
use crate::frontier::OrderViolation;
use crate::value::{Overflow, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContourError {
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error("point count exceeds the 128-bit counter")]
    CountOverflow,
}

/// Exact sizes at a level: `n` points with `f <= z`, and the length `m` of
/// the minima list of `{f > z}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelCounts {
    pub n: u128,
    pub m: u64,
}

/// Half-open value interval `[lo, hi)`.
///
/// Half-open intervals glue: a partition of `[lo, hi)` yields streams whose
/// concatenation reproduces the whole range item for item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelInterval<V> {
    pub lo: V,
    pub hi: V,
}

impl<V: Value> LevelInterval<V> {
    pub fn new(lo: V, hi: V) -> Result<Self, InvalidInterval> {
        if lo < hi {
            Ok(LevelInterval { lo, hi })
        } else {
            Err(InvalidInterval)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("interval is empty: lo must be strictly below hi")]
pub struct InvalidInterval;

/// Smallest `x >= start` with `bad(x)`, where `bad` is monotone
/// (false then true along increasing `x`) and guaranteed true somewhere.
/// Gallops upward then bisects the final bracket.
fn gallop_up<E>(start: u64, mut bad: impl FnMut(u64) -> Result<bool, E>) -> Result<u64, E> {
    if bad(start)? {
        return Ok(start);
    }
    // Invariant: !bad(lo_good).
    let mut lo_good = start;
    let mut step = 1u64;
    let mut hi_bad = loop {
        let probe = lo_good.saturating_add(step);
        if probe == lo_good {
            // saturated at u64::MAX and still good: caller's properness
            // contract is broken; report the probe itself as the bound.
            break probe;
        }
        if bad(probe)? {
            break probe;
        }
        lo_good = probe;
        step = step.saturating_mul(2);
    };
    while hi_bad - lo_good > 1 {
        let mid = lo_good + (hi_bad - lo_good) / 2;
        if bad(mid)? {
            hi_bad = mid;
        } else {
            lo_good = mid;
        }
    }
    Ok(hi_bad)
}

/// Smallest `x` in `[floor, start]` with `good(x)`, given `good(start)` and
/// that the good region is a contiguous interval containing `start`.
fn gallop_down<E>(
    start: u64,
    floor: u64,
    mut good: impl FnMut(u64) -> Result<bool, E>,
) -> Result<u64, E> {
    debug_assert!(start >= floor);
    // Invariant: good(hi_good).
    let mut hi_good = start;
    let mut step = 1u64;
    let mut lo_bad = loop {
        if hi_good == floor {
            return Ok(floor);
        }
        let probe = hi_good.saturating_sub(step).max(floor);
        if good(probe)? {
            hi_good = probe;
            if probe == floor {
                return Ok(floor);
            }
            step = step.saturating_mul(2);
        } else {
            break probe;
        }
    };
    while hi_good - lo_bad > 1 {
        let mid = lo_bad + (hi_good - lo_bad) / 2;
        if good(mid)? {
            hi_good = mid;
        } else {
            lo_bad = mid;
        }
    }
    Ok(hi_good)
}

struct Walk<'a, V, E, D> {
    eval: &'a E,
    domain: &'a D,
    z: &'a V,
    /// #{x in domain : f(x) < z}, accumulated while walking.
    below: u128,
    m: u64,
    /// Last recorded minimum, owed its column-range count.
    pending: Option<(Param, Param)>,
}

impl<'a, V, E, D> Walk<'a, V, E, D>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
{
    /// `f(a, b) < z`, evaluated checked.
    fn under(&self, a: Param, b: Param) -> Result<bool, ContourError> {
        Ok(self.eval.eval_checked(a, b)? < *self.z)
    }

    fn add_count(&mut self, extra: u128) -> Result<(), ContourError> {
        self.below = self
            .below
            .checked_add(extra)
            .ok_or(ContourError::CountOverflow)?;
        Ok(())
    }

    /// Count a column that lies entirely under the level: `[alpha(a), top]`.
    fn add_full_column(&mut self, a: Param, top: Param) -> Result<(), ContourError> {
        let alpha = self.domain.alpha(a);
        debug_assert!(alpha <= top);
        self.add_count((top.0 - alpha.0 + 1) as u128)
    }

    /// Count the below-contour part of columns `[lo, hi)` whose cut height
    /// is `cut`: each contributes `cut - alpha(a)`, never negative inside a
    /// contour segment.
    fn add_segment(&mut self, lo: Param, hi: Param, cut: Param) -> Result<(), ContourError> {
        if hi <= lo {
            return Ok(());
        }
        let cols = (hi.0 - lo.0) as u128;
        let alpha_sum = match self.domain.alpha_prefix_sum(lo, hi) {
            Some(s) => s,
            None => {
                let mut s: u128 = 0;
                for a in lo.0..hi.0 {
                    s = s
                        .checked_add(self.domain.alpha(Param(a)).0 as u128)
                        .ok_or(ContourError::CountOverflow)?;
                }
                s
            }
        };
        let total = cols
            .checked_mul(cut.0 as u128)
            .and_then(|t| t.checked_sub(alpha_sum))
            .ok_or(ContourError::CountOverflow)?;
        self.add_count(total)
    }

    /// Settle the column-range count owed by the previous minimum, up to
    /// (excluding) column `next_a`.
    fn flush_pending(&mut self, next_a: Param) -> Result<(), ContourError> {
        if let Some((a, b)) = self.pending.take() {
            self.add_segment(a, next_a, b)?;
        }
        Ok(())
    }

    /// Count the columns beyond the last minimum: their cut stays at the
    /// last minimum's height until `alpha` climbs past it or the axis ends.
    fn flush_tail(&mut self) -> Result<(), ContourError> {
        let Some((a, b)) = self.pending.take() else {
            return Ok(());
        };
        if self.domain.alpha(a) >= b {
            return Ok(());
        }
        // Smallest column with alpha(a') >= b, capped by the axis end.
        let axis_a = self.domain.axis_a();
        let crossed = |x: u64| -> Result<bool, ContourError> {
            if !axis_a.contains(Param(x)) {
                return Ok(true);
            }
            Ok(self.domain.alpha(Param(x)) >= b)
        };
        let end = gallop_up(a.0, crossed)?;
        self.add_segment(a, Param(end), b)
    }
}

/// Trace the contour of `{x in domain : f(x) >= z}` and hand each minimum
/// to `emit` in order (`a` ascending, `b` descending). Returns the exact
/// size of the complement `{f < z}` and the number of minima.
fn trace_contour<V, E, D>(
    eval: &E,
    domain: &D,
    z: &V,
    mut emit: impl FnMut(Param, Param),
) -> Result<LevelCounts, ContourError>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
{
    let mut walk = Walk {
        eval,
        domain,
        z,
        below: 0,
        m: 0,
        pending: None,
    };
    let axis_a = domain.axis_a();
    let axis_b = domain.axis_b();

    let mut a = axis_a.min();
    let mut b = axis_b.min();
    if !domain.contains(a, b) {
        // Degenerate domain with no points at all.
        return Ok(LevelCounts { n: 0, m: 0 });
    }

    // Phase one: find the first column that reaches the level, counting the
    // columns that lie entirely below it.
    let first_found = loop {
        // Climb the column to the smallest b' where the level is reached or
        // the column tops out.
        let stop = gallop_up(b.0, |x| -> Result<bool, ContourError> {
            let p = Param(x);
            if !domain.contains(a, p) {
                return Ok(true);
            }
            if !walk.under(a, p)? {
                return Ok(true);
            }
            Ok(!domain.contains_ext(ExtParam::Finite(a), axis_b.succ(p)))
        })?;
        b = Param(stop);
        debug_assert!(domain.contains(a, b));
        if !walk.under(a, b)? {
            break true;
        }
        // Column exhausted below the level.
        walk.add_full_column(a, b)?;
        match axis_a.succ(a) {
            ExtParam::Finite(next) if domain.contains(next, b) => a = next,
            _ => break false,
        }
    };

    if !first_found {
        return Ok(LevelCounts {
            n: walk.below,
            m: 0,
        });
    }

    // Phase two: walk down the contour. At each step (a, b) is in the
    // domain with f(a, b) >= z and a is minimal for that property outside
    // the already-recorded upper set.
    loop {
        // Minimize b within the column.
        let floor = domain.alpha(a).0;
        let low = gallop_down(b.0, floor, |x| -> Result<bool, ContourError> {
            let p = Param(x);
            if !domain.contains(a, p) {
                return Ok(false);
            }
            Ok(!walk.under(a, p)?)
        })?;
        b = Param(low);

        walk.flush_pending(a)?;
        emit(a, b);
        walk.m += 1;
        walk.pending = Some((a, b));

        // Step diagonally, then advance a until the level is reached again.
        let (next_a, next_b) = match (axis_a.succ(a), axis_b.pred(b)) {
            (ExtParam::Finite(na), ExtParam::Finite(nb)) => (na, nb),
            _ => break,
        };
        if !domain.contains(next_a, next_b) {
            break;
        }
        a = next_a;
        b = next_b;
        let stop = gallop_up(a.0, |x| -> Result<bool, ContourError> {
            let p = Param(x);
            if !domain.contains(p, b) {
                return Ok(true);
            }
            Ok(!walk.under(p, b)?)
        })?;
        a = Param(stop);
        if !domain.contains(a, b) || walk.under(a, b)? {
            // Ran out of the domain sideways: every remaining column is
            // already covered by the recorded minima.
            break;
        }
    }

    walk.flush_tail()?;
    Ok(LevelCounts {
        n: walk.below,
        m: walk.m,
    })
}

/// The ordered minima list of `{x in domain : f(x) >= z}`.
///
/// Empty exactly when no domain point reaches `z`; the single pair
/// `(a_min, b_min)` when every point does.
pub fn construct_minima<V, E, D>(
    eval: &E,
    domain: &D,
    z: &V,
) -> Result<Vec<(Param, Param)>, ContourError>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
{
    let mut minima = Vec::new();
    trace_contour(eval, domain, z, |a, b| minima.push((a, b)))?;
    Ok(minima)
}

/// Exact `n = #{f <= z}` and `m = #Min{f > z}` from one contour walk.
pub fn count_at_level<V, E, D>(eval: &E, domain: &D, z: &V) -> Result<LevelCounts, ContourError>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
{
    let above = z.succ().map_err(ContourError::Overflow)?;
    trace_contour(eval, domain, &above, |_, _| {})
}

/// Exact sizes at a level boundary: `n = #{f < z}` items emitted before a
/// stream seeded at `z` starts, and `m = #Min{f >= z}`, the length of that
/// stream's initial frontier. One contour walk at `z` itself.
pub fn count_below_level<V, E, D>(eval: &E, domain: &D, z: &V) -> Result<LevelCounts, ContourError>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
{
    trace_contour(eval, domain, z, |_, _| {})
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RangeError {
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error("seeded frontier is not strictly ordered")]
    Corrupt(#[from] OrderViolation),
}

/// Sorted stream over exactly the domain points with `lo <= f < hi`.
///
/// Seeds the frontier at level `lo` by contour tracing and stops before the
/// first value `>= hi`; ordinals restart at 1 within the range.
pub fn enumerate_range<V, E, D>(
    eval: E,
    domain: D,
    interval: &LevelInterval<V>,
) -> Result<BimonotoneStream<V, E, D>, RangeError>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
{
    let minima = construct_minima(&eval, &domain, &interval.lo)?;
    let stream = BimonotoneStream::from_frontier(eval, domain, minima, 0).map_err(|e| match e {
        crate::enumerate::ResumeError::CorruptFrontier(o) => RangeError::Corrupt(o),
        crate::enumerate::ResumeError::Overflow(o) => RangeError::Contour(o.into()),
    })?;
    Ok(stream.with_ceiling(interval.hi.clone()))
}
