use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use hurwitz_core::chamber::{chamber_points, same_chamber, wall_signs, ChamberPoint};
use hurwitz_core::characters::{character, TableCache};
use hurwitz_core::content::RegularFunction;
use hurwitz_core::engine::{parity_vanishes, EngineConfig};
use hurwitz_core::partitions::factorial;
use hurwitz_core::toda::{build_tau, TauOptions};
use hurwitz_core::walks::count_walks_direct;
use hurwitz_core::{HurwitzEngine, HurwitzQuery, Partition, Truncation};

fn partition_of(d: u32) -> impl Strategy<Value = Partition> {
    let all = Partition::all(d);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn query(max_d: u32, max_steps: u32) -> impl Strategy<Value = HurwitzQuery> {
    (1..=max_d, 0..=max_steps, 0..=max_steps)
        .prop_flat_map(|(d, k, l)| (partition_of(d), partition_of(d), Just(k), Just(l)))
        .prop_map(|(a, b, k, l)| HurwitzQuery::new(k, l, a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn w_is_symmetric_and_integral(q in query(9, 3)) {
        let engine = HurwitzEngine::default();
        let w = engine.w_char(&q).unwrap();
        let swapped = HurwitzQuery::new(q.k, q.l, q.beta().clone(), q.alpha().clone()).unwrap();
        prop_assert_eq!(&w, &engine.w_char(&swapped).unwrap());
        prop_assert!(w >= BigInt::zero());
        if parity_vanishes(&q) {
            prop_assert!(w.is_zero());
        }
    }

    #[test]
    fn w_matches_direct_enumeration(q in query(5, 3).prop_filter("short walks", |q| q.k + q.l <= 3)) {
        let engine = HurwitzEngine::default();
        prop_assert_eq!(engine.w_char(&q).unwrap(), count_walks_direct(&q, Default::default()).unwrap());
    }

    #[test]
    fn h_char_is_w_over_d_factorial(q in query(12, 3)) {
        let engine = HurwitzEngine::default();
        let w = BigRational::from_integer(engine.w_char(&q).unwrap());
        match engine.h_char(&q) {
            Ok(h) => prop_assert_eq!(h * BigRational::from_integer(factorial(q.d()).into()), w),
            Err(hurwitz_core::Error::OnWall { .. }) => {
                prop_assert!(hurwitz_core::engine::is_on_wall(q.alpha(), q.beta()).unwrap())
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn s_transform_pads_with_unicellular_rows(
        (a, b) in (1u32..=5, 1u32..=5).prop_flat_map(|(m, n)| (partition_of(m), partition_of(n)))
    ) {
        let engine = HurwitzEngine::default();
        let f: RegularFunction = "H2 + 2*E1*SIZE - P3".parse().unwrap();
        let d = a.size().max(b.size());
        prop_assert_eq!(
            engine.s_transform(&f, &a, &b).unwrap(),
            engine.s_transform(&f, &a.pad_with_ones(d).unwrap(), &b.pad_with_ones(d).unwrap()).unwrap()
        );
    }

    #[test]
    fn sign_twist_of_characters(lambda in (1u32..=9).prop_flat_map(partition_of), mu_i in 0usize..30) {
        let classes = Partition::all(lambda.size());
        let mu = &classes[mu_i % classes.len()];
        prop_assert_eq!(
            character(&lambda.conjugate(), mu).unwrap(),
            mu.sign() * character(&lambda, mu).unwrap()
        );
    }

    #[test]
    fn walls_are_antisymmetric_and_chambers_are_consistent(
        x in proptest::collection::btree_set(1u32..40, 1..4),
        y_split in proptest::collection::vec(1u32..40, 1..4),
    ) {
        let x: Vec<u32> = x.into_iter().rev().collect();
        let total: u32 = x.iter().sum();
        // spread `total` over y with positive parts
        let mut y: Vec<u32> = y_split.iter().map(|&v| 1 + v % total.max(1)).collect();
        let s: u32 = y.iter().sum();
        prop_assume!(s <= total);
        y[0] += total - s;
        y.sort_unstable_by(|a, b| b.cmp(a));
        let p = ChamberPoint::new(x, y).unwrap();
        for (w, s) in wall_signs(&p) {
            prop_assert_eq!(p.sign_at(&w.complement(p.m(), p.n())), s.flip());
        }
        if p.first_wall().is_none() {
            prop_assert!(same_chamber(&p, &p).unwrap());
        }
    }
}

#[test]
fn sampled_chamber_points_satisfy_w_equals_d_factorial_h() {
    let engine = HurwitzEngine::default();
    for base in [("3,1", "2,2"), ("5,2", "4,3"), ("6,2,1", "5,4")] {
        let base =
            ChamberPoint::from_partitions(&base.0.parse().unwrap(), &base.1.parse().unwrap())
                .unwrap();
        for p in chamber_points(&base, 9).unwrap().into_iter().take(25) {
            for (k, l) in [(0, 2), (1, 1), (2, 0), (1, 2), (0, 3)] {
                let q = HurwitzQuery::new(k, l, p.alpha(), p.beta()).unwrap();
                let h = engine.h_char(&q).unwrap();
                let w = engine.w_char(&q).unwrap();
                assert_eq!(
                    h * BigRational::from_integer(factorial(p.d()).into()),
                    BigRational::from_integer(w)
                );
            }
        }
    }
}

#[test]
fn w_series_exp_log_round_trip() {
    let engine = HurwitzEngine::default();
    let w = engine.w_series(Truncation::new(4, 2, 2)).unwrap();
    assert_eq!(w.log().unwrap().exp().unwrap(), w);
}

#[test]
fn tau_zero_reproduces_w() {
    let engine = HurwitzEngine::default();
    let trunc = Truncation::new(5, 2, 2);
    let tau = build_tau(
        0,
        trunc,
        TauOptions::with_profile(hurwitz_core::toda::PowerSumProfile::Full),
    )
    .unwrap();
    assert_eq!(tau, engine.w_series(trunc).unwrap());
}

#[test]
fn engine_uses_the_table_cache() {
    let dir = tempfile::tempdir().unwrap();
    let engine = HurwitzEngine::new(EngineConfig {
        cache_dir: Some(dir.path().to_path_buf()),
        ..EngineConfig::default()
    });
    let q = HurwitzQuery::new(1, 1, "3,2".parse().unwrap(), "4,1".parse().unwrap()).unwrap();
    let w = engine.w_char(&q).unwrap();
    let cache = TableCache::new(dir.path());
    assert!(cache.path_for(5).exists());
    assert!(cache.load(5).is_some());
    let again = HurwitzEngine::new(EngineConfig {
        cache_dir: Some(dir.path().to_path_buf()),
        ..EngineConfig::default()
    });
    assert_eq!(again.w_char(&q).unwrap(), w);
}
