//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the default test harness so the report reads as a
//! checklist; any failed criterion fails the whole target. Heavy searches
//! go through the installed binary exactly as a user would run them.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use bimono::bench::{bench_frontier, BenchAlgo, MaxOfParams};
use bimono::poly::Polynomial;
use bimono::tropical::tropical_delta;
use bimono_core::axis::{Axis, Param};
use bimono_core::contour::{construct_minima, enumerate_range, LevelInterval};
use bimono_core::domain::{BimonotoneDomain, GeqTriangle, LeqTriangle, Rect};
use bimono_core::enumerate::{enumerate_bimonotone, enumerate_sorted_generic};
use bimono_core::eval::SumOfCubes;
use bimono_core::parallel::{checkpoint_resume, partition_levels, run_partitioned, Checkpoint};
use bimono_core::search::TaskError;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type CriterionFn = fn() -> Result<String, String>;

fn main() {
    let criteria: &[(u32, &str, CriterionFn)] = &[
        (1, "taxicab ground truth T(1)..T(4) via the CLI", c1_taxicab),
        (
            2,
            "exact contour counts at the six-fold candidate level",
            c2_counts,
        ),
        (
            3,
            "frontier bound sqrt(2n)+1 after every output",
            c3_memory_bound,
        ),
        (4, "worst and best case frontiers", c4_extremes),
        (5, "oracle equivalence on random domains", c5_oracle),
        (6, "frontier/level consistency", c6_levels),
        (
            7,
            "gluing, worker determinism, checkpoint resume",
            c7_determinism,
        ),
        (8, "tropical exponents", c8_tropical),
        (9, "empirical growth exponents", c9_slopes),
        (10, "declared out of desk scale", c10_declared),
    ];

    let mut failures = 0;
    for (id, title, body) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(note) => {
                println!("criterion {id:2} PASS [{elapsed:7.2?}] {title}: {note}");
            }
            Err(why) => {
                failures += 1;
                println!("criterion {id:2} FAIL [{elapsed:7.2?}] {title}: {why}");
            }
        }
    }
    if failures > 0 {
        println!("acceptance: {failures} criterion(s) failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}

fn bimono_cmd(args: &[&str]) -> Result<String, String> {
    let output = Command::new(env!("CARGO_BIN_EXE_bimono"))
        .args(args)
        .output()
        .map_err(|e| format!("spawn failed: {e}"))?;
    if !output.status.success() {
        return Err(format!(
            "bimono {args:?} exited {:?}: {}",
            output.status.code(),
            String::from_utf8_lossy(&output.stderr)
        ));
    }
    String::from_utf8(output.stdout).map_err(|e| format!("non-utf8 output: {e}"))
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

// Criterion 1: multi -k 1..4 reproduces the first four least k-fold cube
// sums with exactly the published decomposition sets. T(1)-T(3) in under a
// second total; T(4) within the single-core budget (this sandbox exposes
// one core, so the 4-worker wall-clock arm equals the single-core arm).
fn c1_taxicab() -> Result<String, String> {
    let small = Instant::now();
    let cases: [(&str, &str, &str); 3] = [
        ("1", "10", "2\t(1,1)\n"),
        ("2", "10000", "1729\t(1,12)\t(9,10)\n"),
        (
            "3",
            "100000000",
            "87539319\t(167,436)\t(228,423)\t(255,414)\n",
        ),
    ];
    for (k, below, want) in cases {
        let got = bimono_cmd(&[
            "multi", "--f", "a^3+b^3", "--domain", "a<=b", "-k", k, "--below", below,
        ])?;
        expect_eq(&format!("T({k})"), got.as_str(), want)?;
    }
    let small_elapsed = small.elapsed();
    if small_elapsed > Duration::from_secs(1) {
        return Err(format!("T(1)-T(3) took {small_elapsed:?}, budget 1s"));
    }

    let big = Instant::now();
    let got = bimono_cmd(&[
        "multi",
        "--f",
        "a^3+b^3",
        "--domain",
        "a<=b",
        "-k",
        "4",
        "--below",
        "10000000000000",
        "--workers",
        "4",
    ])?;
    expect_eq(
        "T(4)",
        got.as_str(),
        "6963472309248\t(2421,19083)\t(5436,18948)\t(10200,18072)\t(13322,16630)\n",
    )?;
    let big_elapsed = big.elapsed();
    if big_elapsed > Duration::from_secs(30 * 60) {
        return Err(format!(
            "T(4) took {big_elapsed:?}, budget 30min on one core"
        ));
    }
    Ok(format!(
        "T(1)-T(3) in {small_elapsed:.2?}, T(4) in {big_elapsed:.2?} on {} core(s)",
        std::thread::available_parallelism().map_or(1, |n| n.get())
    ))
}

// Criterion 2: the count command returns the exact published pair at the
// six-fold candidate level, from a contour walk rather than enumeration.
fn c2_counts() -> Result<String, String> {
    let start = Instant::now();
    let got = bimono_cmd(&[
        "count",
        "--f",
        "a^3+b^3",
        "--domain",
        "a<=b",
        "--level",
        "24153319581254312065344",
    ])?;
    expect_eq("count", got.as_str(), "n=369039037733393 m=5963352\n")?;
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("count took {elapsed:?}, budget 60s"));
    }
    Ok(format!("exact pair in {elapsed:.2?}"))
}

// Criterion 3: after every output of a from-scratch enumeration the
// frontier holds at most sqrt(2n)+1 entries, checked exactly as integers.
// The same check also runs as a debug assertion inside every enumeration
// in the whole test suite; here representative workloads run it manually.
fn c3_memory_bound() -> Result<String, String> {
    let mut checked: u64 = 0;
    let mut worst_margin: f64 = f64::INFINITY;

    let mut run = |mut stream: Box<dyn FnMut() -> Option<usize>>| -> Result<(), String> {
        let mut n: u128 = 0;
        while let Some(m) = stream() {
            n += 1;
            checked += 1;
            let m = m as u128;
            if m.saturating_sub(1).pow(2) > 2 * n {
                return Err(format!("violated: m={m} after n={n}"));
            }
            let bound = (2.0 * n as f64).sqrt() + 1.0;
            worst_margin = worst_margin.min(bound - m as f64);
        }
        Ok(())
    };

    // Sum of cubes on the ordered triangle (the taxicab stream).
    let mut cubes = enumerate_bimonotone::<i128, _, _>(SumOfCubes, LeqTriangle::from_min(1))
        .map_err(|e| e.to_string())?;
    let mut left = 200_000u32;
    run(Box::new(move || {
        if left == 0 {
            return None;
        }
        left -= 1;
        cubes.next().unwrap().unwrap();
        Some(cubes.frontier_len())
    }))?;

    // The worst-case function on the plane.
    let plane = Rect::new(Axis::from_min(1), Axis::from_min(1));
    let sum = Polynomial::parse("a+b").unwrap();
    let mut stream = enumerate_bimonotone::<i128, _, _>(sum, plane).map_err(|e| e.to_string())?;
    let mut left = 200_000u32;
    run(Box::new(move || {
        if left == 0 {
            return None;
        }
        left -= 1;
        stream.next().unwrap().unwrap();
        Some(stream.frontier_len())
    }))?;

    // Random polynomials on finite rectangles, run to exhaustion.
    let mut rng = StdRng::seed_from_u64(0xacc3);
    for _ in 0..5 {
        let poly = random_poly(&mut rng);
        let domain = random_domain(&mut rng, 60);
        let mut stream =
            enumerate_bimonotone::<i128, _, _>(poly, domain).map_err(|e| e.to_string())?;
        run(Box::new(move || {
            stream.next().map(|r| {
                r.unwrap();
                stream.frontier_len()
            })
        }))?;
    }

    Ok(format!(
        "zero violations over {checked} outputs (tightest slack {worst_margin:.2})"
    ))
}

// Criterion 4: the two extreme frontier shapes, exactly.
fn c4_extremes() -> Result<String, String> {
    let sum = Polynomial::parse("a+b").unwrap();
    let square = Rect::new(
        Axis::bounded(1, 100).unwrap(),
        Axis::bounded(1, 100).unwrap(),
    );
    let mut stream = enumerate_bimonotone::<i128, _, _>(sum, square).map_err(|e| e.to_string())?;
    while stream.peek_value().is_some_and(|v| *v <= 100) {
        stream.next().unwrap().map_err(|e| e.to_string())?;
    }
    let want: Vec<(Param, Param)> = (1..=100).map(|a| (Param(a), Param(101 - a))).collect();
    expect_eq("antidiagonal frontier", stream.frontier_pairs(), want)?;
    expect_eq("antidiagonal length", stream.frontier_len(), 100)?;

    let plane = Rect::new(Axis::from_min(1), Axis::from_min(1));
    let mut stream =
        enumerate_bimonotone::<i128, _, _>(MaxOfParams, plane).map_err(|e| e.to_string())?;
    for _ in 0..1_000_000 {
        stream.next().unwrap().map_err(|e| e.to_string())?;
    }
    if stream.peak_frontier() > 4 {
        return Err(format!("max(a,b) peak frontier {}", stream.peak_frontier()));
    }
    Ok(format!(
        "antidiagonal of 100 exact; max(a,b) peak {} over 1e6 outputs",
        stream.peak_frontier()
    ))
}

// Criterion 5: the frontier stream equals the sort-everything baseline,
// item for item, on 20 random polynomial/domain pairs.
fn c5_oracle() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xacc5);
    let mut items_total = 0usize;
    for round in 0..20 {
        let poly = random_poly(&mut rng);
        let domain = random_domain(&mut rng, 50);
        let points = all_points(&domain);
        let expected =
            enumerate_sorted_generic::<i128, _>(&poly, &points).map_err(|e| e.to_string())?;
        let got: Vec<_> = enumerate_bimonotone::<i128, _, _>(poly.clone(), domain)
            .map_err(|e| e.to_string())?
            .map(|r| r.unwrap())
            .collect();
        if got != expected {
            return Err(format!("round {round}: {} diverged", poly.canonical_text()));
        }
        items_total += got.len();
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        return Err(format!("took {elapsed:?}, budget 10s"));
    }
    Ok(format!("20 domains, {items_total} items, {elapsed:.2?}"))
}

// Criterion 6: contour initialization equals the brute-force antichain and
// the live frontier of a paused enumeration, on 50 random instances.
fn c6_levels() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0xacc6);
    for round in 0..50 {
        let poly = random_poly(&mut rng);
        let domain = random_domain(&mut rng, 30);
        let points = all_points(&domain);
        let top = points
            .iter()
            .map(|p| poly.eval::<i128>(p.0 .0, p.1 .0).unwrap())
            .max()
            .unwrap();
        let z = rng.gen_range(0..=top + 2);

        let traced = construct_minima(&poly, &domain, &z).map_err(|e| e.to_string())?;

        // Brute force: level points that nothing else below-left reaches.
        let level: Vec<(Param, Param)> = points
            .iter()
            .copied()
            .filter(|p| poly.eval::<i128>(p.0 .0, p.1 .0).unwrap() >= z)
            .collect();
        let brute: Vec<(Param, Param)> = level
            .iter()
            .copied()
            .filter(|&(a, b)| {
                !level
                    .iter()
                    .any(|&(x, y)| (x, y) != (a, b) && x <= a && y <= b)
            })
            .collect();
        expect_eq(&format!("round {round} brute"), traced.clone(), brute)?;

        let mut stream =
            enumerate_bimonotone::<i128, _, _>(poly.clone(), domain).map_err(|e| e.to_string())?;
        while stream.peek_value().is_some_and(|v| *v < z) {
            stream.next().unwrap().unwrap();
        }
        expect_eq(
            &format!("round {round} paused"),
            traced,
            stream.frontier_pairs(),
        )?;
    }
    Ok("50 instances, three-way agreement".into())
}

// Criterion 7: random range partitions glue exactly, merged results do not
// depend on the worker count, and checkpoints reproduce the suffix at ten
// random boundaries.
fn c7_determinism() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0xacc7);

    for round in 0..8 {
        let poly = random_poly(&mut rng);
        let domain = random_domain(&mut rng, 25);
        let points = all_points(&domain);
        let top = points
            .iter()
            .map(|p| poly.eval::<i128>(p.0 .0, p.1 .0).unwrap())
            .max()
            .unwrap();
        let lo = 0i128;
        let hi = top + 2;
        let whole: Vec<(i128, u64, u64)> =
            enumerate_range(poly.clone(), domain, &LevelInterval::new(lo, hi).unwrap())
                .map_err(|e| e.to_string())?
                .map(|r| {
                    let i = r.unwrap();
                    (i.value, i.a.0, i.b.0)
                })
                .collect();

        let parts = rng.gen_range(2..=7);
        let intervals = partition_levels(&lo, &hi, parts).map_err(|e| e.to_string())?;
        for workers in [1usize, 2, 4, 8] {
            let mut merged: Vec<(i128, u64, u64)> = Vec::new();
            run_partitioned(
                &intervals,
                workers,
                |interval| -> Result<Vec<(i128, u64, u64)>, TaskError> {
                    Ok(enumerate_range(poly.clone(), domain, interval)
                        .map_err(TaskError::from)?
                        .map(|r| r.map(|i| (i.value, i.a.0, i.b.0)))
                        .collect::<Result<_, _>>()?)
                },
                |batch| {
                    merged.extend(batch);
                    false
                },
            )
            .map_err(|e| e.to_string())?;
            if merged != whole {
                return Err(format!("round {round}: workers={workers} diverged"));
            }
        }
    }

    // Checkpoint boundaries.
    let mut resumed_rounds = 0;
    for _ in 0..40 {
        if resumed_rounds >= 10 {
            break;
        }
        let poly = random_poly(&mut rng);
        let domain = random_domain(&mut rng, 20);
        let full: Vec<_> = enumerate_bimonotone::<i128, _, _>(poly.clone(), domain)
            .map_err(|e| e.to_string())?
            .map(|r| r.unwrap())
            .collect();
        let mut idx = rng.gen_range(0..full.len());
        while idx < full.len() && idx > 0 && full[idx].value == full[idx - 1].value {
            idx += 1;
        }
        if idx == 0 || idx >= full.len() {
            continue;
        }
        let level = full[idx].value;
        let mut stream =
            enumerate_bimonotone::<i128, _, _>(poly.clone(), domain).map_err(|e| e.to_string())?;
        while stream.peek_value().is_some_and(|v| *v < level) {
            stream.next().unwrap().unwrap();
        }
        let cp = Checkpoint::from_stream(&stream, level, "f", "d").map_err(|e| e.to_string())?;
        let mut wire = Vec::new();
        cp.write_to(&mut wire).map_err(|e| e.to_string())?;
        let cp = Checkpoint::<i128>::read_from(&wire[..]).map_err(|e| e.to_string())?;
        let suffix: Vec<_> = checkpoint_resume(&cp, poly.clone(), domain, "f", "d")
            .map_err(|e| e.to_string())?
            .map(|r| r.unwrap())
            .collect();
        if suffix != full[idx..] {
            return Err("resumed suffix diverged".into());
        }
        resumed_rounds += 1;
    }
    if resumed_rounds < 10 {
        return Err(format!("only {resumed_rounds} usable boundaries found"));
    }
    Ok("gluing, workers 1/2/4/8, and 10 checkpoint resumes all exact".into())
}

// Criterion 8: the three published growth exponents, exact rationals.
fn c8_tropical() -> Result<String, String> {
    let case = |text: &str| -> Result<(i64, i64, u8), String> {
        let r = tropical_delta(&Polynomial::parse(text).unwrap()).map_err(|e| e.to_string())?;
        Ok((*r.delta.numer(), *r.delta.denom(), r.dimension))
    };
    expect_eq("a^4+b^5", case("a^4+b^5")?, (9, 20, 0))?;
    expect_eq("a^4+a^3*b^3+b^5", case("a^4+a^3*b^3+b^5")?, (1, 3, 1))?;
    let (n, d, _) = case("a^4+a^3*b^4+b^5")?;
    expect_eq("a^4+a^3*b^4+b^5 delta", (n, d), (5, 16))?;
    Ok("9/20 (d=0), 1/3 (d=1), 5/16".into())
}

// Criterion 9: measured growth exponents. Separated variables a^3+b^7 fit
// 3/10; the mixed-term polynomial splits the two algorithms apart.
fn c9_slopes() -> Result<String, String> {
    let plane = || Rect::new(Axis::from_min(1), Axis::from_min(1));
    let n_max = 1_000_000;

    let cubes = Polynomial::parse("a^3+b^7").unwrap();
    let bi = bench_frontier::<i128, _, _>(cubes, plane(), BenchAlgo::Bimonotone, n_max, 1000)
        .map_err(|e| e.to_string())?;
    if (bi.slope - 0.30).abs() > 0.04 {
        return Err(format!("a^3+b^7 slope {:.4}, want 0.30 +- 0.04", bi.slope));
    }

    let mixed = Polynomial::parse("a^2+a^2*b^4+b^4").unwrap();
    let semi = bench_frontier::<i128, _, _>(
        mixed.clone(),
        plane(),
        BenchAlgo::SemimonotoneAdaptive,
        n_max,
        1000,
    )
    .map_err(|e| e.to_string())?;
    if (semi.slope - 0.50).abs() > 0.05 {
        return Err(format!(
            "semimonotone slope {:.4}, want 0.50 +- 0.05",
            semi.slope
        ));
    }
    let bi2 = bench_frontier::<i128, _, _>(mixed, plane(), BenchAlgo::Bimonotone, n_max, 1000)
        .map_err(|e| e.to_string())?;
    if bi2.slope > 0.38 {
        return Err(format!("bimonotone slope {:.4}, want <= 0.38", bi2.slope));
    }
    Ok(format!(
        "a^3+b^7 -> {:.3}; mixed: semimonotone {:.3} vs bimonotone {:.3}",
        bi.slope, semi.slope, bi2.slope
    ))
}

// Criterion 10: runs ruled out at desk scale, stated for the record: the
// full six-fold verification (~25 CPU-years) and the partial lower-bound
// scan (~650 CPU-days). Criterion 2's exact counts stand in for both.
fn c10_declared() -> Result<String, String> {
    Ok(
        "six-fold verification and lower-bound scan excluded as out of desk \
        scale; exact counting (criterion 2) is the stand-in"
            .into(),
    )
}

// Shared generators, independent of the library internals under test.

fn random_poly(rng: &mut StdRng) -> Polynomial {
    let mut text = String::new();
    for t in 0..rng.gen_range(1..=4) {
        if t > 0 {
            text.push('+');
        }
        text.push_str(&format!(
            "{}*a^{}*b^{}",
            rng.gen_range(0..=4u32),
            rng.gen_range(0..=3u32),
            rng.gen_range(0..=3u32)
        ));
    }
    let poly = Polynomial::parse(&text).unwrap();
    if poly.support().is_empty() {
        Polynomial::parse("a*b+1").unwrap()
    } else {
        poly
    }
}

#[derive(Clone, Copy)]
enum AnyDomain {
    Rect(Rect),
    Leq(LeqTriangle),
    Geq(GeqTriangle),
}

fn random_domain(rng: &mut StdRng, max_side: u64) -> AnyDomain {
    match rng.gen_range(0..3) {
        0 => AnyDomain::Rect(Rect::new(
            Axis::bounded(1, rng.gen_range(1..=max_side)).unwrap(),
            Axis::bounded(1, rng.gen_range(1..=max_side)).unwrap(),
        )),
        1 => {
            let side = Axis::bounded(1, rng.gen_range(1..=max_side)).unwrap();
            AnyDomain::Leq(LeqTriangle::new(side, side).unwrap())
        }
        _ => {
            let side = Axis::bounded(1, rng.gen_range(1..=max_side)).unwrap();
            AnyDomain::Geq(GeqTriangle::new(side, side).unwrap())
        }
    }
}

impl BimonotoneDomain for AnyDomain {
    fn axis_a(&self) -> Axis {
        match self {
            AnyDomain::Rect(d) => d.axis_a(),
            AnyDomain::Leq(d) => d.axis_a(),
            AnyDomain::Geq(d) => d.axis_a(),
        }
    }
    fn axis_b(&self) -> Axis {
        match self {
            AnyDomain::Rect(d) => d.axis_b(),
            AnyDomain::Leq(d) => d.axis_b(),
            AnyDomain::Geq(d) => d.axis_b(),
        }
    }
    fn alpha(&self, a: Param) -> Param {
        match self {
            AnyDomain::Rect(d) => d.alpha(a),
            AnyDomain::Leq(d) => d.alpha(a),
            AnyDomain::Geq(d) => d.alpha(a),
        }
    }
    fn beta(&self, b: Param) -> Param {
        match self {
            AnyDomain::Rect(d) => d.beta(b),
            AnyDomain::Leq(d) => d.beta(b),
            AnyDomain::Geq(d) => d.beta(b),
        }
    }
    fn alpha_prefix_sum(&self, lo: Param, hi: Param) -> Option<u128> {
        match self {
            AnyDomain::Rect(d) => d.alpha_prefix_sum(lo, hi),
            AnyDomain::Leq(d) => d.alpha_prefix_sum(lo, hi),
            AnyDomain::Geq(d) => d.alpha_prefix_sum(lo, hi),
        }
    }
}

fn all_points(domain: &AnyDomain) -> Vec<(Param, Param)> {
    let a_max = domain.axis_a().max().unwrap().0;
    let b_max = domain.axis_b().max().unwrap().0;
    let mut out = Vec::new();
    for a in 1..=a_max {
        for b in 1..=b_max {
            if domain.contains(Param(a), Param(b)) {
                out.push((Param(a), Param(b)));
            }
        }
    }
    out
}
