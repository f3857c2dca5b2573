// the oracles index explicitly on purpose
#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use quasar_core::assessment::{
    compute_pqr, gap_analysis, readiness_score, risk_vector, scores_from, DomainScores, RiskMatrix,
    WeightVector,
};

fn unit() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

/// Areas with T, S, O scores and raw positive weights.
fn instance(max: usize) -> impl Strategy<Value = (Vec<[f64; 3]>, Vec<f64>)> {
    (1..=max).prop_flat_map(|n| {
        (
            prop::collection::vec([unit(), unit(), unit()], n),
            prop::collection::vec(0.01..10.0f64, n),
        )
    })
}

fn weights(raw: &[f64]) -> WeightVector {
    let sum: f64 = raw.iter().sum();
    WeightVector::normalize(raw.iter().map(|w| w / sum).collect())
        .unwrap()
        .0
}

fn scores(areas: &[[f64; 3]]) -> DomainScores {
    let col = |k: usize| areas.iter().map(|a| a[k]).collect::<Vec<_>>();
    DomainScores::from_values(&col(0), &col(1), &col(2)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pqr_matches_naive_loop((areas, raw) in instance(12)) {
        let w = weights(&raw);
        let pqr = compute_pqr(&scores(&areas), &w).unwrap();
        let mut naive = 0.0;
        for i in 0..areas.len() {
            naive += w.as_slice()[i] * (areas[i][0] + areas[i][1] + areas[i][2]);
        }
        prop_assert!((pqr.literal - naive).abs() <= 1e-12);
        prop_assert!((0.0..=3.0).contains(&pqr.literal));
        prop_assert!((pqr.normalized - pqr.literal / 3.0).abs() <= 1e-15);
    }
}

proptest! {
    #[test]
    fn pqr_is_monotone((areas, raw) in instance(8), pick in any::<prop::sample::Index>(), dim in 0..3usize, bump in unit()) {
        let w = weights(&raw);
        let before = compute_pqr(&scores(&areas), &w).unwrap().literal;
        let mut raised = areas.clone();
        let i = pick.index(areas.len());
        raised[i][dim] = (raised[i][dim] + bump).min(1.0);
        let after = compute_pqr(&scores(&raised), &w).unwrap().literal;
        prop_assert!(after >= before - 1e-15);
    }

    #[test]
    fn pqr_is_permutation_invariant((areas, raw) in instance(8), seed in any::<u64>()) {
        let n = areas.len();
        let mut order: Vec<usize> = (0..n).collect();
        // deterministic shuffle from the seed
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let permuted: Vec<[f64; 3]> = order.iter().map(|&i| areas[i]).collect();
        let permuted_w: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
        let a = compute_pqr(&scores(&areas), &weights(&raw)).unwrap().literal;
        let b = compute_pqr(&scores(&permuted), &weights(&permuted_w)).unwrap().literal;
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn readiness_is_bounded_by_weighted_sum(values in prop::collection::vec(unit(), 1..10), seed in 0.01..10.0f64) {
        let raw: Vec<f64> = (0..values.len()).map(|i| seed + i as f64).collect();
        let w = weights(&raw);
        let rs = readiness_score(&scores_from(&values).unwrap(), &w).unwrap();
        let one_norm: f64 = values.iter().zip(w.as_slice()).map(|(r, w)| r * w).sum();
        prop_assert!(rs >= 0.0);
        prop_assert!(rs <= one_norm + 1e-12);
    }

    #[test]
    fn gap_ranking_is_sorted_and_stable(pairs in prop::collection::vec((unit(), unit()), 1..12)) {
        let current = scores_from(&pairs.iter().map(|p| p.0).collect::<Vec<_>>()).unwrap();
        let target = scores_from(&pairs.iter().map(|p| p.1).collect::<Vec<_>>()).unwrap();
        let g = gap_analysis(&current, &target).unwrap();
        for (i, (c, t)) in pairs.iter().enumerate() {
            prop_assert_eq!(g.gaps[i], t - c);
        }
        for w in g.ranking.windows(2) {
            let (a, b) = (g.gaps[w[0]], g.gaps[w[1]]);
            prop_assert!(a > b || (a == b && w[0] < w[1]));
        }
    }

    #[test]
    fn risk_vector_is_bounded(entries in [[unit(), unit(), unit()], [unit(), unit(), unit()], [unit(), unit(), unit()]], raw in [0.01..1.0f64, 0.01..1.0f64, 0.01..1.0f64]) {
        let m = RiskMatrix::new(entries, weights(&raw)).unwrap();
        let r = risk_vector(&m);
        for (k, row) in entries.iter().enumerate() {
            prop_assert!((0.0..=1.0).contains(&r[k]));
            prop_assert!(r[k] <= row.iter().cloned().fold(0.0, f64::max) + 1e-12);
        }
    }
}
