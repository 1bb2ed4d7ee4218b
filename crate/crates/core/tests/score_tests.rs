//! Aggregation invariants over randomized result sets, plus exhaustive
//! grids for the cost-comparison predicates.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabbench_core::circuit::CostTuple;
use stabbench_core::code::{build_default_manifest, load_suite, LoadedSuite};
use stabbench_core::error::Error;
use stabbench_core::score::{
    aggregate, b2_improvement, b2_quality, score_int, score_ratio, InstanceResult, Score, Task,
};

fn result(code_id: &str, task: Task, success: bool, quality: Score) -> InstanceResult {
    InstanceResult {
        code_id: code_id.into(),
        task,
        success,
        quality,
        satisfied_generators: 0,
        candidate_cost: None,
        ft: None,
        attempts_used: 1,
    }
}

fn random_results(rng: &mut ChaCha8Rng, suite: &LoadedSuite, task: Task) -> Vec<InstanceResult> {
    let mut out = Vec::new();
    for c in &suite.instances {
        if !rng.gen_bool(0.5) {
            continue;
        }
        let success = rng.gen_bool(0.6);
        let quality = if success {
            let den = rng.gen_range(1..=12i64);
            score_ratio(rng.gen_range(0..=den), den)
        } else {
            Score::zero()
        };
        out.push(result(&c.id, task, success, quality));
    }
    out
}

#[test]
fn caps_hold_over_random_result_sets() {
    let suite = load_suite(&build_default_manifest()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5C0_0001);
    for trial in 0..10_000 {
        let task = [Task::B1, Task::B2, Task::B3][trial % 3];
        let results = random_results(&mut rng, &suite, task);
        let report = aggregate(&results, &suite, 0).unwrap();
        assert_eq!(report.k_max, 9945);
        assert!(report.s_cap <= report.k_max, "trial {trial}");
        assert!(
            report.s_qual <= score_int(report.s_cap),
            "trial {trial}: quality exceeded capability"
        );
        assert!(report.s_qual >= Score::zero(), "trial {trial}");
    }
}

#[test]
fn aggregation_is_permutation_invariant() {
    let suite = load_suite(&build_default_manifest()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5C0_0002);
    for trial in 0..300 {
        let mut results = random_results(&mut rng, &suite, Task::B2);
        let before = aggregate(&results, &suite, 6).unwrap();
        results.shuffle(&mut rng);
        let after = aggregate(&results, &suite, 6).unwrap();
        assert_eq!(before.s_cap, after.s_cap, "trial {trial}");
        assert_eq!(before.s_qual, after.s_qual, "trial {trial}");
        assert_eq!(before.buckets, after.buckets, "trial {trial}");
    }
}

#[test]
fn aggregation_is_additive_over_disjoint_sets() {
    let suite = load_suite(&build_default_manifest()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5C0_0003);
    for trial in 0..300 {
        let results = random_results(&mut rng, &suite, Task::B1);
        let (a, b): (Vec<_>, Vec<_>) = results.iter().cloned().partition(|_| rng.gen_bool(0.5));
        let whole = aggregate(&results, &suite, 0).unwrap();
        let left = aggregate(&a, &suite, 0).unwrap();
        let right = aggregate(&b, &suite, 0).unwrap();
        assert_eq!(whole.s_cap, left.s_cap + right.s_cap, "trial {trial}");
        assert_eq!(whole.s_qual, left.s_qual + right.s_qual, "trial {trial}");
    }
}

#[test]
fn duplicate_and_unknown_results_are_rejected() {
    let suite = load_suite(&build_default_manifest()).unwrap();
    let dup = vec![
        result("steane_7", Task::B1, true, score_int(1)),
        result("steane_7", Task::B1, false, Score::zero()),
    ];
    assert!(matches!(
        aggregate(&dup, &suite, 0),
        Err(Error::DuplicateCodeId(_))
    ));

    // The same code under different tasks is two distinct results.
    let two_tasks = vec![
        result("steane_7", Task::B1, true, score_int(1)),
        result("steane_7", Task::B2, true, score_ratio(1, 2)),
    ];
    assert!(aggregate(&two_tasks, &suite, 0).is_ok());

    let unknown = vec![result("no_such_code", Task::B1, true, score_int(1))];
    assert!(matches!(
        aggregate(&unknown, &suite, 0),
        Err(Error::UnknownCodeId(_))
    ));
}

#[test]
fn improvement_matches_lexicographic_order_exhaustively() {
    for bg in 0..=20u64 {
        for bd in 0..=20u64 {
            let baseline = CostTuple { g2q: bg, depth: bd };
            for cg in 0..=20u64 {
                for cd in 0..=20u64 {
                    let candidate = CostTuple { g2q: cg, depth: cd };
                    let expected = (cg, cd) < (bg, bd);
                    assert_eq!(
                        b2_improvement(&candidate, &baseline),
                        expected,
                        "candidate {candidate:?} vs baseline {baseline:?}"
                    );
                    if candidate == baseline {
                        assert!(!b2_improvement(&candidate, &baseline));
                    }
                }
            }
        }
    }
}

#[test]
fn quality_stays_in_unit_interval_on_grid() {
    for bg in 0..=12u64 {
        for bd in 0..=12u64 {
            let baseline = CostTuple { g2q: bg, depth: bd };
            for cg in 0..=12u64 {
                for cd in 0..=12u64 {
                    let candidate = CostTuple { g2q: cg, depth: cd };
                    let q = b2_quality(&baseline, &candidate);
                    assert!(q >= Score::zero());
                    assert!(q <= score_int(1));
                    if candidate == baseline {
                        assert_eq!(q, Score::zero());
                    }
                }
            }
        }
    }
}

#[test]
fn buckets_partition_the_suite() {
    let suite = load_suite(&build_default_manifest()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5C0_0004);
    for &num_buckets in &[1usize, 3, 6, 10] {
        let results = random_results(&mut rng, &suite, Task::B3);
        let report = aggregate(&results, &suite, num_buckets).unwrap();
        assert!(!report.buckets.is_empty());
        let codes: usize = report.buckets.iter().map(|b| b.codes).sum();
        let k: u64 = report.buckets.iter().map(|b| b.k_max).sum();
        let cap: u64 = report.buckets.iter().map(|b| b.s_cap).sum();
        let qual: Score = report
            .buckets
            .iter()
            .map(|b| b.s_qual.clone())
            .fold(Score::zero(), |a, b| a + b);
        assert_eq!(codes, suite.instances.len());
        assert_eq!(k, report.k_max);
        assert_eq!(cap, report.s_cap);
        assert_eq!(qual, report.s_qual);
        for b in &report.buckets {
            assert!(b.lo <= b.hi);
            assert!(b.successes <= b.codes);
            assert!(b.s_cap <= b.k_max);
        }
    }
}
