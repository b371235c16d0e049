//! Level-interval parallelization and resumable checkpoints.
//!
//! A value range splits into contiguous half-open intervals; each interval
//! is an independent task seeded by one contour trace, so intervals can run
//! on separate workers. Results are released strictly in interval order,
//! which makes the merged output identical to a single-worker run no matter
//! how many workers execute, and lets a search stop as soon as the in-order
//! prefix contains what it was looking for.
//!
//! Checkpoints persist `(function, domain, level, emitted, frontier)` as a
//! small text file. Saving is only allowed at a value boundary, where every
//! pending value is at least the level and everything below it has been
//! emitted; equal-value runs therefore never split across a save. Resuming
//! rebuilds the queue by evaluating the frontier and continues the exact
//! stream.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::sync::{Condvar, Mutex};

use crate::axis::Param;
use crate::contour::LevelInterval;
use crate::domain::BimonotoneDomain;
use crate::enumerate::{BimonotoneStream, ResumeError};
use crate::eval::Evaluator;
use crate::frontier::Frontier;
use crate::value::{Overflow, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("range is empty: lo must be strictly below hi")]
    InvalidRange,
    #[error("cannot split into zero parts")]
    ZeroParts,
    #[error("range width exceeds the value backend")]
    WidthOverflow,
}

/// Split `[lo, hi)` into at most `parts` contiguous half-open intervals
/// whose sizes differ by at most one, remainder spread over the leading
/// intervals. Fewer than `parts` intervals come back only when the range
/// holds fewer than `parts` values.
pub fn partition_levels<V: Value>(
    lo: &V,
    hi: &V,
    parts: u64,
) -> Result<Vec<LevelInterval<V>>, PartitionError> {
    if lo >= hi {
        return Err(PartitionError::InvalidRange);
    }
    if parts == 0 {
        return Err(PartitionError::ZeroParts);
    }
    let width = hi.checked_sub(lo).ok_or(PartitionError::WidthOverflow)?;
    let (base, remainder) = width.div_rem_u64(parts);
    let zero = V::from_u64(0);
    let one = V::from_u64(1);

    let mut out = Vec::new();
    let mut cursor = lo.clone();
    for i in 0..parts {
        let mut size = base.clone();
        if i < remainder {
            size = size
                .checked_add(&one)
                .ok_or(PartitionError::WidthOverflow)?;
        }
        if size == zero {
            // Only possible when base is zero; the covered prefix already
            // reaches hi after `remainder` unit intervals.
            break;
        }
        let next = cursor
            .checked_add(&size)
            .ok_or(PartitionError::WidthOverflow)?;
        out.push(LevelInterval {
            lo: cursor.clone(),
            hi: next.clone(),
        });
        cursor = next;
    }
    debug_assert!(cursor == *hi);
    Ok(out)
}

/// What each interval task computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    Enumerate,
    Collide,
    KFold { k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("plan has no intervals")]
    Empty,
    #[error("interval {index} is empty")]
    EmptyInterval { index: usize },
    #[error("intervals {index} and {} are not contiguous ascending", index + 1)]
    Gap { index: usize },
}

/// A validated batch of interval tasks: pairwise disjoint, contiguous and
/// ascending, all of one kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkPlan<V> {
    intervals: Vec<LevelInterval<V>>,
    kind: TaskKind,
}

impl<V: Value> WorkPlan<V> {
    pub fn new(intervals: Vec<LevelInterval<V>>, kind: TaskKind) -> Result<Self, PlanError> {
        if intervals.is_empty() {
            return Err(PlanError::Empty);
        }
        for (index, iv) in intervals.iter().enumerate() {
            if iv.lo >= iv.hi {
                return Err(PlanError::EmptyInterval { index });
            }
        }
        for (index, pair) in intervals.windows(2).enumerate() {
            if pair[0].hi != pair[1].lo {
                return Err(PlanError::Gap { index });
            }
        }
        Ok(WorkPlan { intervals, kind })
    }

    pub fn intervals(&self) -> &[LevelInterval<V>] {
        &self.intervals
    }

    pub fn kind(&self) -> TaskKind {
        self.kind
    }
}

/// An interval task failed; earlier intervals were already merged.
#[derive(Debug, thiserror::Error)]
#[error("interval {index} failed: {source}")]
pub struct RunError<E: std::error::Error + 'static> {
    pub index: usize,
    #[source]
    pub source: E,
}

struct PoolState<T, E> {
    results: BTreeMap<usize, Result<Vec<T>, E>>,
    next_claim: usize,
    merged: usize,
    stop: bool,
    panic: Option<Box<dyn std::any::Any + Send>>,
}

/// Run one task per interval on up to `workers` threads, handing each
/// result batch to `consume` strictly in interval order. `consume`
/// returning `true` stops the run early; remaining intervals are skipped.
///
/// Workers buffer at most one finished interval each ahead of the merge
/// point, so memory stays proportional to the worker count.
pub fn run_partitioned<V, T, E, F, C>(
    intervals: &[LevelInterval<V>],
    workers: usize,
    task: F,
    mut consume: C,
) -> Result<(), RunError<E>>
where
    V: Value,
    T: Send,
    E: std::error::Error + Send + 'static,
    F: Fn(&LevelInterval<V>) -> Result<Vec<T>, E> + Sync,
    C: FnMut(Vec<T>) -> bool,
{
    let n = intervals.len();
    if n == 0 {
        return Ok(());
    }
    let workers = workers.max(1).min(n);
    if workers == 1 {
        for (index, interval) in intervals.iter().enumerate() {
            let batch = task(interval).map_err(|source| RunError { index, source })?;
            if consume(batch) {
                break;
            }
        }
        return Ok(());
    }

    let state = Mutex::new(PoolState::<T, E> {
        results: BTreeMap::new(),
        next_claim: 0,
        merged: 0,
        stop: false,
        panic: None,
    });
    let ready = Condvar::new();
    let space = Condvar::new();
    // At most one unmerged interval per worker: memory stays proportional
    // to the worker count however far the merge point lags.
    let window = workers;

    let mut outcome: Result<(), RunError<E>> = Ok(());
    let mut repanic: Option<Box<dyn std::any::Any + Send>> = None;

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = {
                    let mut st = state.lock().unwrap();
                    loop {
                        if st.stop || st.next_claim >= n {
                            return;
                        }
                        if st.next_claim < st.merged + window {
                            let i = st.next_claim;
                            st.next_claim += 1;
                            break i;
                        }
                        st = space.wait(st).unwrap();
                    }
                };
                let result = panic::catch_unwind(AssertUnwindSafe(|| task(&intervals[index])));
                let mut st = state.lock().unwrap();
                match result {
                    Ok(r) => {
                        st.results.insert(index, r);
                    }
                    Err(payload) => {
                        st.panic = Some(payload);
                        st.stop = true;
                        space.notify_all();
                    }
                }
                ready.notify_all();
            });
        }

        for index in 0..n {
            let batch = {
                let mut st = state.lock().unwrap();
                loop {
                    if let Some(payload) = st.panic.take() {
                        repanic = Some(payload);
                        st.stop = true;
                        space.notify_all();
                        return;
                    }
                    if let Some(r) = st.results.remove(&index) {
                        st.merged = index + 1;
                        space.notify_all();
                        break r;
                    }
                    st = ready.wait(st).unwrap();
                }
            };
            match batch {
                Ok(items) => {
                    if consume(items) {
                        let mut st = state.lock().unwrap();
                        st.stop = true;
                        space.notify_all();
                        return;
                    }
                }
                Err(source) => {
                    outcome = Err(RunError { index, source });
                    let mut st = state.lock().unwrap();
                    st.stop = true;
                    space.notify_all();
                    return;
                }
            }
        }
    });

    if let Some(payload) = repanic {
        panic::resume_unwind(payload);
    }
    outcome
}

const CHECKPOINT_HEADER: &str = "BIMONO-CKPT 1";

#[derive(Debug, thiserror::Error)]
pub enum CheckpointError {
    #[error("stream is not at a value boundary for this level")]
    NotAtBoundary,
    #[error("checkpoint io failed: {0}")]
    Io(#[from] io::Error),
    #[error("checkpoint format error at line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("checkpoint was written for a different function")]
    FunctionMismatch,
    #[error("checkpoint was written for a different domain")]
    DomainMismatch,
    #[error("checkpoint frontier is not strictly ordered")]
    CorruptFrontier,
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

/// A saved enumeration boundary.
///
/// The wire format is line-oriented text, decimal numbers without leading
/// zeros, single spaces, every line newline-terminated:
///
/// ```text
/// BIMONO-CKPT 1
/// f <canonical function>
/// domain <canonical domain>
/// level <decimal>
/// emitted <decimal>
/// frontier <m>
/// <a> <b>        (m lines, ascending a)
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint<V> {
    pub function_text: String,
    pub domain_text: String,
    pub level: V,
    pub emitted: u64,
    pub frontier: Vec<(Param, Param)>,
}

impl<V: Value> Checkpoint<V> {
    /// Snapshot a stream at a boundary: everything below `level` emitted,
    /// everything pending at or above it.
    pub fn from_stream<E, D>(
        stream: &BimonotoneStream<V, E, D>,
        level: V,
        function_text: &str,
        domain_text: &str,
    ) -> Result<Self, CheckpointError>
    where
        E: Evaluator<V>,
        D: BimonotoneDomain,
    {
        if let Some(last) = stream.last_value() {
            if *last >= level {
                return Err(CheckpointError::NotAtBoundary);
            }
        }
        if let Some(next) = stream.peek_value() {
            if *next < level {
                return Err(CheckpointError::NotAtBoundary);
            }
        }
        Ok(Checkpoint {
            function_text: function_text.to_string(),
            domain_text: domain_text.to_string(),
            level,
            emitted: stream.emitted(),
            frontier: stream.frontier_pairs(),
        })
    }

    pub fn write_to<W: Write>(&self, mut sink: W) -> Result<(), CheckpointError> {
        for text in [&self.function_text, &self.domain_text] {
            if text.is_empty() || text.contains('\n') {
                return Err(CheckpointError::Format {
                    line: 0,
                    reason: "function and domain texts must be non-empty single lines".into(),
                });
            }
        }
        write!(
            sink,
            "{CHECKPOINT_HEADER}\nf {}\ndomain {}\nlevel {}\nemitted {}\nfrontier {}\n",
            self.function_text,
            self.domain_text,
            self.level,
            self.emitted,
            self.frontier.len()
        )?;
        for (a, b) in &self.frontier {
            writeln!(sink, "{a} {b}")?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(mut source: R) -> Result<Self, CheckpointError> {
        let mut raw = String::new();
        source.read_to_string(&mut raw)?;
        let format = |line: usize, reason: &str| CheckpointError::Format {
            line,
            reason: reason.to_string(),
        };
        let Some(body) = raw.strip_suffix('\n') else {
            return Err(format(0, "missing trailing newline"));
        };
        let lines: Vec<&str> = body.split('\n').collect();
        if lines.len() < 6 {
            return Err(format(lines.len(), "truncated checkpoint"));
        }
        if lines[0] != CHECKPOINT_HEADER {
            return Err(format(1, "unrecognized header or version"));
        }
        let function_text = lines[1]
            .strip_prefix("f ")
            .ok_or_else(|| format(2, "expected `f <function>`"))?
            .to_string();
        let domain_text = lines[2]
            .strip_prefix("domain ")
            .ok_or_else(|| format(3, "expected `domain <domain>`"))?
            .to_string();
        let level_text = lines[3]
            .strip_prefix("level ")
            .ok_or_else(|| format(4, "expected `level <decimal>`"))?;
        let level = V::parse_decimal(level_text).ok_or_else(|| format(4, "bad level literal"))?;
        let emitted: u64 = lines[4]
            .strip_prefix("emitted ")
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| format(5, "expected `emitted <decimal>`"))?;
        let m: usize = lines[5]
            .strip_prefix("frontier ")
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| format(6, "expected `frontier <count>`"))?;
        if lines.len() != 6 + m {
            return Err(format(lines.len(), "frontier line count mismatch"));
        }
        let mut frontier = Vec::with_capacity(m);
        for (i, line) in lines[6..].iter().enumerate() {
            let (a, b) = line
                .split_once(' ')
                .and_then(|(a, b)| Some((a.parse::<u64>().ok()?, b.parse::<u64>().ok()?)))
                .ok_or_else(|| format(7 + i, "expected `<a> <b>`"))?;
            frontier.push((Param(a), Param(b)));
        }
        if Frontier::from_pairs(frontier.iter().copied()).is_err() {
            return Err(CheckpointError::CorruptFrontier);
        }
        Ok(Checkpoint {
            function_text,
            domain_text,
            level,
            emitted,
            frontier,
        })
    }

    /// Write via a sibling temp file and rename, so a crash never leaves a
    /// half-written checkpoint behind the real name.
    pub fn save_atomic(&self, path: &Path) -> Result<(), CheckpointError> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = std::path::PathBuf::from(tmp);
        {
            let mut file = io::BufWriter::new(std::fs::File::create(&tmp)?);
            self.write_to(&mut file)?;
            file.flush()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        let file = std::fs::File::open(path)?;
        Self::read_from(io::BufReader::new(file))
    }
}

/// Capture a checkpoint and write it to `sink` in one call.
pub fn checkpoint_save<V, E, D, W>(
    stream: &BimonotoneStream<V, E, D>,
    level: V,
    function_text: &str,
    domain_text: &str,
    sink: W,
) -> Result<Checkpoint<V>, CheckpointError>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
    W: Write,
{
    let cp = Checkpoint::from_stream(stream, level, function_text, domain_text)?;
    cp.write_to(sink)?;
    Ok(cp)
}

/// Rebuild the enumeration state a checkpoint described.
///
/// The caller supplies the evaluator and domain matching the recorded
/// canonical texts; the queue is rebuilt by evaluating the frontier, and
/// the continuation stream is identical to an uninterrupted run from the
/// recorded boundary.
pub fn checkpoint_resume<V, E, D>(
    cp: &Checkpoint<V>,
    eval: E,
    domain: D,
    function_text: &str,
    domain_text: &str,
) -> Result<BimonotoneStream<V, E, D>, CheckpointError>
where
    V: Value,
    E: Evaluator<V>,
    D: BimonotoneDomain,
{
    if cp.function_text != function_text {
        return Err(CheckpointError::FunctionMismatch);
    }
    if cp.domain_text != domain_text {
        return Err(CheckpointError::DomainMismatch);
    }
    BimonotoneStream::from_frontier(eval, domain, cp.frontier.iter().copied(), cp.emitted).map_err(
        |e| match e {
            ResumeError::CorruptFrontier(_) => CheckpointError::CorruptFrontier,
            ResumeError::Overflow(o) => CheckpointError::Overflow(o),
        },
    )
}
