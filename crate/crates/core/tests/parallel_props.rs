//! Determinism and resumability of partitioned runs.

mod common;

use bimono_core::contour::{enumerate_range, LevelInterval};
use bimono_core::enumerate::{enumerate_bimonotone, EnumError, StreamItem};
use bimono_core::parallel::{
    checkpoint_resume, partition_levels, run_partitioned, Checkpoint, TaskKind, WorkPlan,
};
use bimono_core::search::{first_k_fold, KFoldHit};
use bimono_core::SumOfCubes;
use common::{domain_points, random_poly, AnyDomain};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn strip(items: &[StreamItem<i128>]) -> Vec<(i128, u64, u64)> {
    items.iter().map(|i| (i.value, i.a.0, i.b.0)).collect()
}

#[test]
fn merged_enumeration_is_invariant_under_worker_count() {
    let mut rng = StdRng::seed_from_u64(0xd001);
    for _ in 0..8 {
        let poly = random_poly(&mut rng, false);
        let domain = AnyDomain::random(&mut rng, 25);
        let points = domain_points(&domain);
        let top = points
            .iter()
            .map(|p| poly.eval(p.0 .0, p.1 .0))
            .max()
            .unwrap();
        let lo = 0i128;
        let hi = top + 2;

        let whole: Vec<_> =
            enumerate_range(poly.clone(), domain, &LevelInterval::new(lo, hi).unwrap())
                .unwrap()
                .map(|r| r.unwrap())
                .collect();

        let parts = rng.gen_range(1..=6);
        let intervals = partition_levels(&lo, &hi, parts).unwrap();
        let plan = WorkPlan::new(intervals, TaskKind::Enumerate).unwrap();
        let mut reference: Option<Vec<(i128, u64, u64)>> = None;
        for workers in [1usize, 2, 4, 8] {
            let mut merged: Vec<StreamItem<i128>> = Vec::new();
            run_partitioned(
                plan.intervals(),
                workers,
                |interval| -> Result<Vec<StreamItem<i128>>, EnumError> {
                    enumerate_range(poly.clone(), domain, interval)
                        .unwrap()
                        .collect()
                },
                |batch| {
                    merged.extend(batch);
                    false
                },
            )
            .unwrap();
            let flat = strip(&merged);
            assert_eq!(flat, strip(&whole));
            if let Some(prev) = &reference {
                assert_eq!(&flat, prev);
            }
            reference = Some(flat);
        }
    }
}

#[test]
fn partitioned_k_fold_matches_the_plain_scan() {
    // Two-fold squares below 10000 via one stream, then via partitions.
    let domain = bimono_core::LeqTriangle::from_min(1);
    let f = SumOfCubes;
    let plain: Vec<KFoldHit<i128>> = bimono_core::k_fold_values(
        enumerate_range(f, domain, &LevelInterval::new(2, 10_000).unwrap()).unwrap(),
        2,
    )
    .map(|r| r.unwrap())
    .collect();
    assert_eq!(plain.len(), 2); // 1729 and 4104
    for workers in [1, 2, 4] {
        let hits = first_k_fold(&f, &domain, 2, &2, &10_000, workers, usize::MAX).unwrap();
        assert_eq!(hits, plain);
    }
}

#[test]
fn resume_reproduces_the_suffix_at_random_boundaries() {
    let mut rng = StdRng::seed_from_u64(0xd002);
    for round in 0..10 {
        let poly = random_poly(&mut rng, false);
        let domain = AnyDomain::random(&mut rng, 20);
        let full: Vec<_> = enumerate_bimonotone(poly.clone(), domain)
            .unwrap()
            .map(|r| r.unwrap())
            .collect();

        // Pick a boundary: the first index where the value strictly rises.
        let split_at = rng.gen_range(0..full.len());
        let mut idx = split_at;
        while idx < full.len() && idx > 0 && full[idx].value == full[idx - 1].value {
            idx += 1;
        }
        if idx == 0 || idx >= full.len() {
            continue;
        }
        let level = full[idx].value;

        let mut stream = enumerate_bimonotone(poly.clone(), domain).unwrap();
        while stream.peek_value().is_some_and(|v| *v < level) {
            stream.next().unwrap().unwrap();
        }
        let cp = Checkpoint::from_stream(&stream, level, "test-fn", "test-domain").unwrap();
        assert_eq!(cp.emitted as usize, idx, "round {round}");

        // Through the wire format and back.
        let mut buffer = Vec::new();
        cp.write_to(&mut buffer).unwrap();
        let cp = Checkpoint::<i128>::read_from(&buffer[..]).unwrap();

        let resumed =
            checkpoint_resume(&cp, poly.clone(), domain, "test-fn", "test-domain").unwrap();
        let suffix: Vec<_> = resumed.map(|r| r.unwrap()).collect();
        assert_eq!(strip(&suffix), strip(&full[idx..]), "round {round}");
        assert!(
            suffix
                .iter()
                .zip(&full[idx..])
                .all(|(s, f)| s.ordinal == f.ordinal),
            "ordinals continue across the boundary"
        );
    }
}
