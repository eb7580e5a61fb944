use std::collections::BTreeSet;

use wmgraph::analysis::{collision_sets, edge_distance, keys_of_size};
use wmgraph::encode;

// |Ω'_n(k)| for k = 3, 4, 5, n = 3..=13. Computed once, kept as a regression
// fixture; small n are re-derived below from raw edge sets.
const COUNTS: [(usize, [usize; 3]); 11] = [
    (3, [2, 4, 4]),
    (4, [2, 8, 8]),
    (5, [8, 15, 16]),
    (6, [22, 29, 32]),
    (7, [52, 59, 63]),
    (8, [114, 121, 125]),
    (9, [240, 247, 251]),
    (10, [494, 501, 505]),
    (11, [1004, 1011, 1015]),
    (12, [2026, 2033, 2037]),
    (13, [4072, 4079, 4083]),
];

fn edge_set(omega: u64) -> BTreeSet<(usize, usize)> {
    encode(omega).unwrap().edges().into_iter().collect()
}

fn brute_force(n: usize, k: usize) -> Vec<u64> {
    let sets: Vec<(u64, BTreeSet<_>)> = keys_of_size(n).map(|w| (w, edge_set(w))).collect();
    sets.iter()
        .filter(|(a, ea)| sets.iter().any(|(b, eb)| a != b && ea.difference(eb).count() <= k))
        .map(|&(w, _)| w)
        .collect()
}

#[test]
fn frozen_counts() {
    for (n, counts) in COUNTS {
        for (k, want) in (3..=5).zip(counts) {
            assert_eq!(collision_sets(n, k).members.len(), want, "n={n} k={k}");
        }
    }
}

#[test]
fn matches_edge_set_oracle() {
    for n in 2..=8 {
        for k in 1..=5 {
            assert_eq!(collision_sets(n, k).members, brute_force(n, k), "n={n} k={k}");
        }
    }
}

#[test]
fn distance_is_symmetric_and_positive() {
    let keys: Vec<u64> = keys_of_size(6).collect();
    for &a in &keys {
        for &b in &keys {
            let d = edge_distance(a, b);
            assert_eq!(d, edge_distance(b, a));
            assert_eq!(d == 0, a == b);
            assert_eq!(d, edge_set(a).difference(&edge_set(b)).count());
        }
    }
}

#[test]
fn ratio_grows_with_n() {
    let ratios: Vec<f64> = (4..=12).map(|n| collision_sets(n, 3).ratio).collect();
    assert!(ratios.windows(2).all(|w| w[0] <= w[1]), "{ratios:?}");
}
