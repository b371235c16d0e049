//! Command-line front end.
//!
//! Machine-readable TSV goes to stdout, diagnostics to stderr. Exit codes:
//! 0 success, 1 usage or parse error, 2 value overflow (rerun with
//! `--bigint`), 3 invalid domain, 4 checkpoint mismatch.

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use bimono_core::axis::{Axis, Param};
use bimono_core::contour::{
    construct_minima, count_below_level, enumerate_range, ContourError, LevelInterval, RangeError,
};
use bimono_core::domain::{BimonotoneDomain, GeqTriangle, InvalidDomain, LeqTriangle, Rect};
use bimono_core::enumerate::{BimonotoneStream, EnumError, ResumeError, StreamItem};
use bimono_core::parallel::{
    checkpoint_resume, partition_levels, run_partitioned, Checkpoint, CheckpointError,
    PartitionError, TaskKind, WorkPlan,
};
use bimono_core::search::{collide, first_k_fold, k_fold_values, KFoldHit, SearchError, TaskError};
use bimono_core::value::{Overflow, Value};

use crate::bench::{bench_frontier, BenchAlgo, BenchError, MaxOfParams};
use crate::poly::{PolyError, Polynomial};
use crate::tropical::{tropical_delta, TropicalError};

#[derive(Parser)]
#[command(
    name = "bimono",
    version,
    about = "Sorted enumeration of bimonotone polynomials: streams, level counts, \
             collision and multiple-value searches, partition plans and frontier benchmarks"
)]
struct Cli {
    /// Use the arbitrary-precision value backend instead of checked 128-bit
    #[arg(long, global = true)]
    bigint: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream domain points in non-decreasing value order: value<TAB>a<TAB>b
    Enum(EnumArgs),
    /// Exact sizes at a level boundary: points below it, frontier on it
    Count(CountArgs),
    /// Solutions of f(a,b) = g(c,d): value<TAB>a<TAB>b<TAB>c<TAB>d
    Collide(CollideArgs),
    /// Smallest values attained in at least k distinct ways
    Multi(MultiArgs),
    /// Print a uniform subdivision of a value range: lo<TAB>hi
    Partition(PartitionArgs),
    /// Exact sublevel-growth exponent of a polynomial
    Delta(DeltaArgs),
    /// Frontier length samples and the fitted growth slope
    Bench(BenchArgs),
}

#[derive(Args)]
struct DomainArgs {
    /// Parameter domain: all, a<=b, or a>=b
    #[arg(long, default_value = "all")]
    domain: String,
    /// Upper bound for a (domain `all` only)
    #[arg(long)]
    amax: Option<u64>,
    /// Upper bound for b (domain `all` only)
    #[arg(long)]
    bmax: Option<u64>,
}

#[derive(Args)]
struct RangeArgs {
    /// Start level (inclusive); defaults to the value at the domain corner
    #[arg(long)]
    from: Option<String>,
    /// Stop level (exclusive)
    #[arg(long)]
    below: Option<String>,
}

#[derive(Args)]
struct EnumArgs {
    /// Polynomial in a and b with non-negative coefficients
    #[arg(long)]
    f: String,
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    range: RangeArgs,
    /// Emit at most this many items
    #[arg(long)]
    limit: Option<u64>,
    /// Concurrent interval workers (needs --below)
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Write a resumable checkpoint here when the run stops
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Also rewrite the checkpoint after roughly this many items
    #[arg(long, requires = "checkpoint")]
    checkpoint_every: Option<u64>,
    /// Resume from a checkpoint written by --checkpoint
    #[arg(long, conflicts_with = "from")]
    resume: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    f: String,
    #[command(flatten)]
    domain: DomainArgs,
    /// Level boundary: count points strictly below it
    #[arg(long)]
    level: String,
}

#[derive(Args)]
struct CollideArgs {
    /// Left polynomial
    #[arg(long)]
    f: String,
    /// Right polynomial
    #[arg(long)]
    g: String,
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    range: RangeArgs,
    /// Emit at most this many solution pairs
    #[arg(long)]
    limit: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct MultiArgs {
    #[arg(long)]
    f: String,
    #[command(flatten)]
    domain: DomainArgs,
    /// Required number of distinct representations
    #[arg(short)]
    k: usize,
    #[command(flatten)]
    range: RangeArgs,
    /// Emit at most this many hits (default: the first one)
    #[arg(long, default_value_t = 1)]
    limit: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    from: String,
    #[arg(long)]
    below: String,
    /// Number of intervals
    #[arg(long)]
    parts: u64,
}

#[derive(Args)]
struct DeltaArgs {
    #[arg(long)]
    f: String,
}

#[derive(Args)]
struct BenchArgs {
    /// Polynomial to enumerate
    #[arg(long, conflicts_with = "builtin")]
    f: Option<String>,
    /// Built-in non-polynomial test function: max
    #[arg(long)]
    builtin: Option<String>,
    #[command(flatten)]
    domain: DomainArgs,
    /// Algorithm: bimono or semi
    #[arg(long, default_value = "bimono")]
    algo: String,
    /// Outputs to enumerate
    #[arg(long, default_value_t = 1_000_000)]
    n_max: u64,
    /// Sample the frontier every this many outputs
    #[arg(long, default_value_t = 1000)]
    sample_every: u64,
}

/// Failure classified by exit code.
enum Failure {
    /// Stdout consumer went away; finish quietly.
    Pipe,
    Usage(String),
    Overflow(String),
    Domain(String),
    Checkpoint(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Pipe => 0,
            Failure::Usage(_) => 1,
            Failure::Overflow(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Checkpoint(_) => 4,
        }
    }

    fn report(&self) {
        match self {
            Failure::Pipe => {}
            Failure::Usage(m)
            | Failure::Overflow(m)
            | Failure::Domain(m)
            | Failure::Checkpoint(m) => eprintln!("bimono: {m}"),
        }
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<Overflow> for Failure {
    fn from(_: Overflow) -> Self {
        Failure::Overflow("value overflow in the 128-bit backend; rerun with --bigint".into())
    }
}

impl From<EnumError> for Failure {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::Overflow(o) => o.into(),
            EnumError::ContractViolation { .. } => Failure::Domain(e.to_string()),
        }
    }
}

impl From<ContourError> for Failure {
    fn from(e: ContourError) -> Self {
        match e {
            ContourError::Overflow(o) => o.into(),
            ContourError::CountOverflow => Failure::Overflow(e.to_string()),
        }
    }
}

impl From<RangeError> for Failure {
    fn from(e: RangeError) -> Self {
        match e {
            RangeError::Contour(c) => c.into(),
            RangeError::Corrupt(_) => Failure::Domain(e.to_string()),
        }
    }
}

impl From<ResumeError> for Failure {
    fn from(e: ResumeError) -> Self {
        match e {
            ResumeError::Overflow(o) => o.into(),
            ResumeError::CorruptFrontier(_) => Failure::Checkpoint(e.to_string()),
        }
    }
}

impl From<PartitionError> for Failure {
    fn from(e: PartitionError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<InvalidDomain> for Failure {
    fn from(e: InvalidDomain) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<CheckpointError> for Failure {
    fn from(e: CheckpointError) -> Self {
        match e {
            CheckpointError::Overflow(o) => o.into(),
            other => Failure::Checkpoint(other.to_string()),
        }
    }
}

impl From<TaskError> for Failure {
    fn from(e: TaskError) -> Self {
        match e {
            TaskError::Range(r) => r.into(),
            TaskError::Stream(s) => s.into(),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Partition(p) => p.into(),
            SearchError::Run(r) => r.source.into(),
            SearchError::Stream(s) => s.into(),
            SearchError::Range(r) => r.into(),
        }
    }
}

impl From<TropicalError> for Failure {
    fn from(e: TropicalError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Overflow(o) => o.into(),
            BenchError::Stream(s) => s.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn write_line(out: &mut impl Write, args: fmt::Arguments) -> Result<(), Failure> {
    out.write_fmt(args).map_err(|e| {
        if e.kind() == io::ErrorKind::BrokenPipe {
            Failure::Pipe
        } else {
            Failure::Usage(format!("write failed: {e}"))
        }
    })
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version land here too; they exit cleanly.
            let failed = e.use_stderr();
            let _ = e.print();
            return if failed { 1 } else { 0 };
        }
    };
    let stdout = io::stdout().lock();
    let mut out = io::BufWriter::new(stdout);
    let result = if cli.bigint {
        dispatch::<BigInt>(cli.command, &mut out)
    } else {
        dispatch::<i128>(cli.command, &mut out)
    };
    let result = result.and_then(|()| {
        out.flush().map_err(|e| {
            if e.kind() == io::ErrorKind::BrokenPipe {
                Failure::Pipe
            } else {
                Failure::Usage(format!("write failed: {e}"))
            }
        })
    });
    match result {
        Ok(()) => 0,
        Err(failure) => {
            failure.report();
            failure.code()
        }
    }
}

fn dispatch<V: Value>(command: Command, out: &mut impl Write) -> Result<(), Failure> {
    match command {
        Command::Enum(args) => cmd_enum::<V>(args, out),
        Command::Count(args) => cmd_count::<V>(args, out),
        Command::Collide(args) => cmd_collide::<V>(args, out),
        Command::Multi(args) => cmd_multi::<V>(args, out),
        Command::Partition(args) => cmd_partition::<V>(args, out),
        Command::Delta(args) => cmd_delta(args, out),
        Command::Bench(args) => cmd_bench::<V>(args, out),
    }
}

/// The three named CLI domains behind one concrete type.
#[derive(Clone, Copy)]
enum CliDomain {
    All(Rect),
    Leq(LeqTriangle),
    Geq(GeqTriangle),
}

impl BimonotoneDomain for CliDomain {
    fn axis_a(&self) -> Axis {
        match self {
            CliDomain::All(d) => d.axis_a(),
            CliDomain::Leq(d) => d.axis_a(),
            CliDomain::Geq(d) => d.axis_a(),
        }
    }

    fn axis_b(&self) -> Axis {
        match self {
            CliDomain::All(d) => d.axis_b(),
            CliDomain::Leq(d) => d.axis_b(),
            CliDomain::Geq(d) => d.axis_b(),
        }
    }

    fn alpha(&self, a: Param) -> Param {
        match self {
            CliDomain::All(d) => d.alpha(a),
            CliDomain::Leq(d) => d.alpha(a),
            CliDomain::Geq(d) => d.alpha(a),
        }
    }

    fn beta(&self, b: Param) -> Param {
        match self {
            CliDomain::All(d) => d.beta(b),
            CliDomain::Leq(d) => d.beta(b),
            CliDomain::Geq(d) => d.beta(b),
        }
    }

    fn alpha_prefix_sum(&self, lo: Param, hi: Param) -> Option<u128> {
        match self {
            CliDomain::All(d) => d.alpha_prefix_sum(lo, hi),
            CliDomain::Leq(d) => d.alpha_prefix_sum(lo, hi),
            CliDomain::Geq(d) => d.alpha_prefix_sum(lo, hi),
        }
    }
}

/// Build the named domain and its canonical text.
fn build_domain(args: &DomainArgs) -> Result<(CliDomain, String), Failure> {
    let bounds_forbidden = || -> Result<(), Failure> {
        if args.amax.is_some() || args.bmax.is_some() {
            Err(Failure::Domain(format!(
                "--amax/--bmax apply to domain `all` only, not `{}`",
                args.domain
            )))
        } else {
            Ok(())
        }
    };
    match args.domain.as_str() {
        "all" => {
            let axis_a = Axis::new(1, args.amax)
                .map_err(|_| Failure::Domain("--amax must be at least 1".into()))?;
            let axis_b = Axis::new(1, args.bmax)
                .map_err(|_| Failure::Domain("--bmax must be at least 1".into()))?;
            let mut text = String::from("all");
            if let Some(m) = args.amax {
                text.push_str(&format!(" amax={m}"));
            }
            if let Some(m) = args.bmax {
                text.push_str(&format!(" bmax={m}"));
            }
            Ok((CliDomain::All(Rect::new(axis_a, axis_b)), text))
        }
        "a<=b" => {
            bounds_forbidden()?;
            Ok((CliDomain::Leq(LeqTriangle::from_min(1)), "a<=b".into()))
        }
        "a>=b" => {
            bounds_forbidden()?;
            Ok((CliDomain::Geq(GeqTriangle::from_min(1)), "a>=b".into()))
        }
        other => Err(Failure::Domain(format!(
            "unknown domain `{other}` (expected all, a<=b, a>=b)"
        ))),
    }
}

fn parse_poly(text: &str) -> Result<Polynomial, Failure> {
    Ok(Polynomial::parse(text)?)
}

/// Infinite axes demand properness, which for non-negative polynomials
/// means a positive-degree pure power of each variable.
fn check_properness(poly: &Polynomial, domain: &CliDomain) -> Result<(), Failure> {
    let finite = domain.axis_a().is_finite() && domain.axis_b().is_finite();
    if !finite && !poly.is_proper() {
        return Err(Failure::Usage(format!(
            "`{}` is not proper on an unbounded domain: it needs a pure positive-degree \
             a term and b term (or bound the domain with --amax/--bmax)",
            poly.canonical_text()
        )));
    }
    Ok(())
}

fn parse_level<V: Value>(text: &str, what: &str) -> Result<V, Failure> {
    V::parse_decimal(text).ok_or_else(|| {
        let digits = text.strip_prefix('-').unwrap_or(text);
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            Failure::Overflow(format!(
                "{what} value `{text}` exceeds the 128-bit backend; rerun with --bigint"
            ))
        } else {
            Failure::Usage(format!("{what} must be a decimal integer, got `{text}`"))
        }
    })
}

fn parse_range<V: Value>(range: &RangeArgs) -> Result<(Option<V>, Option<V>), Failure> {
    let from = range
        .from
        .as_deref()
        .map(|t| parse_level::<V>(t, "--from"))
        .transpose()?;
    let below = range
        .below
        .as_deref()
        .map(|t| parse_level::<V>(t, "--below"))
        .transpose()?;
    if let (Some(lo), Some(hi)) = (&from, &below) {
        if lo >= hi {
            return Err(Failure::Usage(
                "--from must be strictly below --below".into(),
            ));
        }
    }
    Ok((from, below))
}

/// A stream over `[from or corner, below or infinity)`.
fn open_stream<V: Value>(
    poly: &Polynomial,
    domain: CliDomain,
    from: Option<&V>,
    below: Option<&V>,
) -> Result<BimonotoneStream<V, Polynomial, CliDomain>, Failure> {
    let mut stream = match from {
        None => BimonotoneStream::new(poly.clone(), domain)?,
        Some(lo) => {
            let minima = construct_minima(poly, &domain, lo)?;
            BimonotoneStream::from_frontier(poly.clone(), domain, minima, 0)?
        }
    };
    if let Some(hi) = below {
        stream = stream.with_ceiling(hi.clone());
    }
    Ok(stream)
}

fn cmd_enum<V: Value>(args: EnumArgs, out: &mut impl Write) -> Result<(), Failure> {
    let poly = parse_poly(&args.f)?;
    let (domain, domain_text) = build_domain(&args.domain)?;
    check_properness(&poly, &domain)?;
    let (from, below) = parse_range::<V>(&args.range)?;
    let wants_checkpoint = args.checkpoint.is_some() || args.resume.is_some();

    if args.workers > 1 && wants_checkpoint {
        return Err(Failure::Usage(
            "checkpointing runs single-worker; drop --workers or the checkpoint flags".into(),
        ));
    }
    if args.workers > 1 && below.is_none() {
        eprintln!("bimono: --workers needs --below to partition; running single-worker");
    }

    if args.workers > 1 && below.is_some() && !wants_checkpoint {
        let hi = below.clone().unwrap();
        let lo = match from {
            Some(lo) => lo,
            None => corner_value::<V>(&poly, &domain)?,
        };
        if lo >= hi {
            return Ok(());
        }
        return enum_partitioned(&poly, domain, &lo, &hi, args.workers, args.limit, out);
    }

    let stream = match &args.resume {
        Some(path) => {
            let cp = Checkpoint::<V>::load(path)?;
            let mut stream = checkpoint_resume(
                &cp,
                poly.clone(),
                domain,
                &poly.canonical_text(),
                &domain_text,
            )?;
            if let Some(hi) = &below {
                stream = stream.with_ceiling(hi.clone());
            }
            stream
        }
        None => open_stream(&poly, domain, from.as_ref(), below.as_ref())?,
    };
    drive_enum(
        stream,
        args.limit,
        below,
        args.checkpoint.as_deref(),
        args.checkpoint_every,
        &poly.canonical_text(),
        &domain_text,
        out,
    )
}

fn corner_value<V: Value>(poly: &Polynomial, domain: &CliDomain) -> Result<V, Failure> {
    Ok(poly.eval(domain.axis_a().min().0, domain.axis_b().min().0)?)
}

/// Single-stream enumeration loop with checkpoint handling.
///
/// A checkpoint needs a value boundary, so when `--limit` lands inside an
/// equal-value block the loop keeps emitting until the block completes.
#[allow(clippy::too_many_arguments)]
fn drive_enum<V: Value>(
    mut stream: BimonotoneStream<V, Polynomial, CliDomain>,
    limit: Option<u64>,
    below: Option<V>,
    checkpoint: Option<&Path>,
    checkpoint_every: Option<u64>,
    function_text: &str,
    domain_text: &str,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let mut printed = 0u64;
    let mut since_save = 0u64;
    loop {
        let limit_reached = limit.is_some_and(|l| printed >= l);
        if limit_reached && (checkpoint.is_none() || stream.at_boundary()) {
            break;
        }
        if let (Some(path), Some(every)) = (checkpoint, checkpoint_every) {
            if since_save >= every && stream.at_boundary() {
                if let Some(level) = checkpoint_level(&stream, below.as_ref()) {
                    let cp = Checkpoint::from_stream(&stream, level, function_text, domain_text)?;
                    cp.save_atomic(path)?;
                    since_save = 0;
                }
            }
        }
        match stream.next() {
            None => break,
            Some(item) => {
                let item = item?;
                write_line(
                    out,
                    format_args!("{}\t{}\t{}\n", item.value, item.a, item.b),
                )?;
                printed += 1;
                since_save += 1;
            }
        }
    }
    if let Some(path) = checkpoint {
        match checkpoint_level(&stream, below.as_ref()) {
            Some(level) => {
                let cp = Checkpoint::from_stream(&stream, level, function_text, domain_text)?;
                cp.save_atomic(path)?;
            }
            None => {
                eprintln!("bimono: domain exhausted, nothing to resume; checkpoint not written");
            }
        }
    }
    Ok(())
}

/// The boundary level a stopped stream should be saved at: the stop cap
/// when the stream ran into it, otherwise the next pending value.
fn checkpoint_level<V: Value>(
    stream: &BimonotoneStream<V, Polynomial, CliDomain>,
    below: Option<&V>,
) -> Option<V> {
    let peek = stream.peek_value()?;
    match below {
        Some(hi) if peek >= hi => Some(hi.clone()),
        _ => Some(peek.clone()),
    }
}

fn enum_partitioned<V: Value>(
    poly: &Polynomial,
    domain: CliDomain,
    lo: &V,
    hi: &V,
    workers: usize,
    limit: Option<u64>,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let parts = (workers as u64) * 8;
    let plan = WorkPlan::new(partition_levels(lo, hi, parts)?, TaskKind::Enumerate)
        .expect("uniform partitions are contiguous");
    let mut printed = 0u64;
    let mut sink: Result<(), Failure> = Ok(());
    run_partitioned(
        plan.intervals(),
        workers,
        |interval| -> Result<Vec<StreamItem<V>>, TaskError> {
            let stream = enumerate_range(poly.clone(), domain, interval)?;
            stream
                .collect::<Result<Vec<_>, _>>()
                .map_err(TaskError::from)
        },
        |batch| {
            for item in batch {
                if limit.is_some_and(|l| printed >= l) {
                    return true;
                }
                if let Err(e) = write_line(
                    out,
                    format_args!("{}\t{}\t{}\n", item.value, item.a, item.b),
                ) {
                    sink = Err(e);
                    return true;
                }
                printed += 1;
            }
            limit.is_some_and(|l| printed >= l)
        },
    )
    .map_err(|e| Failure::from(e.source))?;
    sink
}

fn cmd_count<V: Value>(args: CountArgs, out: &mut impl Write) -> Result<(), Failure> {
    let poly = parse_poly(&args.f)?;
    let (domain, _) = build_domain(&args.domain)?;
    check_properness(&poly, &domain)?;
    let level = parse_level::<V>(&args.level, "--level")?;
    let counts = count_below_level(&poly, &domain, &level)?;
    write_line(out, format_args!("n={} m={}\n", counts.n, counts.m))
}

fn cmd_collide<V: Value>(args: CollideArgs, out: &mut impl Write) -> Result<(), Failure> {
    let left = parse_poly(&args.f)?;
    let right = parse_poly(&args.g)?;
    let (domain, _) = build_domain(&args.domain)?;
    check_properness(&left, &domain)?;
    check_properness(&right, &domain)?;
    let (from, below) = parse_range::<V>(&args.range)?;

    let mut printed = 0u64;
    let limit = args.limit;
    if let (true, Some(hi)) = (args.workers > 1, below.clone()) {
        let lo = match from {
            Some(lo) => lo,
            None => {
                let fc = corner_value::<V>(&left, &domain)?;
                let gc = corner_value::<V>(&right, &domain)?;
                fc.min(gc)
            }
        };
        if lo >= hi {
            return Ok(());
        }
        let parts = (args.workers as u64) * 8;
        let plan = WorkPlan::new(partition_levels(&lo, &hi, parts)?, TaskKind::Collide)
            .expect("uniform partitions are contiguous");
        let mut sink: Result<(), Failure> = Ok(());
        run_partitioned(
            plan.intervals(),
            args.workers,
            |interval| {
                let l = enumerate_range(left.clone(), domain, interval)?;
                let r = enumerate_range(right.clone(), domain, interval)?;
                collide(l, r)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(TaskError::from)
            },
            |batch| {
                for hit in batch {
                    if limit.is_some_and(|l| printed >= l) {
                        return true;
                    }
                    if let Err(e) = write_line(
                        out,
                        format_args!(
                            "{}\t{}\t{}\t{}\t{}\n",
                            hit.value, hit.left.0, hit.left.1, hit.right.0, hit.right.1
                        ),
                    ) {
                        sink = Err(e);
                        return true;
                    }
                    printed += 1;
                }
                limit.is_some_and(|l| printed >= l)
            },
        )
        .map_err(|e| Failure::from(e.source))?;
        return sink;
    }

    if args.workers > 1 {
        eprintln!("bimono: --workers needs --below to partition; running single-worker");
    }
    let l = open_stream(&left, domain, from.as_ref(), below.as_ref())?;
    let r = open_stream(&right, domain, from.as_ref(), below.as_ref())?;
    for hit in collide(l, r) {
        if limit.is_some_and(|cap| printed >= cap) {
            break;
        }
        let hit = hit?;
        write_line(
            out,
            format_args!(
                "{}\t{}\t{}\t{}\t{}\n",
                hit.value, hit.left.0, hit.left.1, hit.right.0, hit.right.1
            ),
        )?;
        printed += 1;
    }
    Ok(())
}

fn format_multi_hit<V: Value>(hit: &KFoldHit<V>) -> String {
    let mut reps = hit.representations.clone();
    reps.sort();
    let mut line = hit.value.to_string();
    for (a, b) in reps {
        line.push_str(&format!("\t({a},{b})"));
    }
    line.push('\n');
    line
}

fn cmd_multi<V: Value>(args: MultiArgs, out: &mut impl Write) -> Result<(), Failure> {
    if args.k == 0 {
        return Err(Failure::Usage("-k must be at least 1".into()));
    }
    let poly = parse_poly(&args.f)?;
    let (domain, _) = build_domain(&args.domain)?;
    check_properness(&poly, &domain)?;
    let (from, below) = parse_range::<V>(&args.range)?;

    match below {
        Some(hi) => {
            let lo = match from {
                Some(lo) => lo,
                None => corner_value::<V>(&poly, &domain)?,
            };
            if lo >= hi {
                return Ok(());
            }
            let hits = first_k_fold(&poly, &domain, args.k, &lo, &hi, args.workers, args.limit)?;
            for hit in hits {
                write_line(out, format_args!("{}", format_multi_hit(&hit)))?;
            }
        }
        None => {
            // Unbounded scan: terminates per hit found, forever if none.
            let stream = open_stream(&poly, domain, from.as_ref(), None)?;
            for hit in k_fold_values(stream, args.k).take(args.limit) {
                let hit = hit?;
                write_line(out, format_args!("{}", format_multi_hit(&hit)))?;
            }
        }
    }
    Ok(())
}

fn cmd_partition<V: Value>(args: PartitionArgs, out: &mut impl Write) -> Result<(), Failure> {
    let lo = parse_level::<V>(&args.from, "--from")?;
    let hi = parse_level::<V>(&args.below, "--below")?;
    let intervals: Vec<LevelInterval<V>> = partition_levels(&lo, &hi, args.parts)?;
    for interval in intervals {
        write_line(out, format_args!("{}\t{}\n", interval.lo, interval.hi))?;
    }
    Ok(())
}

fn cmd_delta(args: DeltaArgs, out: &mut impl Write) -> Result<(), Failure> {
    let poly = parse_poly(&args.f)?;
    let result = tropical_delta(&poly)?;
    write_line(
        out,
        format_args!(
            "delta={}/{} d={}\n",
            result.delta.numer(),
            result.delta.denom(),
            result.dimension
        ),
    )
}

fn cmd_bench<V: Value>(args: BenchArgs, out: &mut impl Write) -> Result<(), Failure> {
    let algo = match args.algo.as_str() {
        "bimono" => BenchAlgo::Bimonotone,
        "semi" => BenchAlgo::SemimonotoneAdaptive,
        other => {
            return Err(Failure::Usage(format!(
                "unknown algorithm `{other}` (expected bimono or semi)"
            )))
        }
    };
    let (domain, _) = build_domain(&args.domain)?;
    if algo == BenchAlgo::SemimonotoneAdaptive && !matches!(domain, CliDomain::All(_)) {
        return Err(Failure::Usage(
            "--algo semi enumerates full rectangles only; use --domain all".into(),
        ));
    }

    let report = match (&args.f, args.builtin.as_deref()) {
        (Some(text), None) => {
            let poly = parse_poly(text)?;
            check_properness(&poly, &domain)?;
            bench_frontier::<V, _, _>(poly, domain, algo, args.n_max, args.sample_every)?
        }
        (None, Some("max")) => {
            bench_frontier::<V, _, _>(MaxOfParams, domain, algo, args.n_max, args.sample_every)?
        }
        (None, Some(other)) => {
            return Err(Failure::Usage(format!(
                "unknown builtin `{other}` (expected max)"
            )))
        }
        (None, None) => return Err(Failure::Usage("bench needs --f or --builtin".into())),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };

    for s in &report.samples {
        write_line(
            out,
            format_args!("{}\t{}\t{}\t{}\n", s.n, s.m, s.m_max, s.value),
        )?;
    }
    write_line(out, format_args!("slope={:.4}\n", report.slope))
}
