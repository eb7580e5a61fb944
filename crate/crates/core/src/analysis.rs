//! Experiments: collision sets between same-size watermarks, exhaustive
//! recovery sweeps and decoder timing.

use std::hint::black_box;
use std::ops::RangeInclusive;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::attack::{apply_attack, attack_space_size, enumerate_attacks, random_attack, AttackKind};
use crate::codec::{decode_fast, decode_via_permutation, encode};
use crate::error::AnalysisError;
use crate::recovery::{recover, recover_removals};

/// Keys of bit-length `n`.
pub fn keys_of_size(n: usize) -> RangeInclusive<u64> {
    assert!((1..=64).contains(&n), "key size {n} out of range");
    let lo = 1u64 << (n - 1);
    lo..=lo | (lo - 1)
}

/// Keys of size `n` whose watermark is within `k` edges of another
/// watermark of the same size.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionSet {
    pub n: usize,
    pub k: usize,
    pub members: Vec<u64>,
    /// `members.len() / 2^(n-1)`.
    pub ratio: f64,
}

fn tree_parents(omega: u64) -> Vec<u8> {
    encode(omega).expect("positive key").tree_edges().iter().map(|&(_, q)| q as u8).collect()
}

/// Number of edges of the first watermark missing from the second. Path
/// edges coincide for equal `n` and every vertex has one tree edge, so
/// this counts vertices whose tree parent differs.
pub fn edge_distance(a: u64, b: u64) -> usize {
    let (pa, pb) = (tree_parents(a), tree_parents(b));
    assert_eq!(pa.len(), pb.len(), "keys of different sizes");
    pa.iter().zip(&pb).filter(|(x, y)| x != y).count()
}

/// Exact `Ω'_n(k)` by pairwise comparison of tree-parent arrays.
pub fn collision_sets(n: usize, k: usize) -> CollisionSet {
    let keys: Vec<u64> = keys_of_size(n).collect();
    let parents: Vec<Vec<u8>> = keys.par_iter().map(|&w| tree_parents(w)).collect();
    let within = |a: &[u8], b: &[u8]| {
        let mut d = 0;
        for (x, y) in a.iter().zip(b) {
            if x != y {
                d += 1;
                if d > k {
                    return false;
                }
            }
        }
        true
    };
    let hit: Vec<bool> = (0..keys.len())
        .into_par_iter()
        .map(|i| (0..keys.len()).any(|j| j != i && within(&parents[i], &parents[j])))
        .collect();
    let members: Vec<u64> = keys.iter().zip(&hit).filter(|(_, &h)| h).map(|(&w, _)| w).collect();
    let ratio = members.len() as f64 / keys.len() as f64;
    CollisionSet { n, k, members, ratio }
}

/// Smallest edge distance between two distinct watermarks of size `n`.
pub fn minimum_distance(n: usize) -> Option<usize> {
    let parents: Vec<Vec<u8>> = keys_of_size(n).map(tree_parents).collect();
    (0..parents.len())
        .into_par_iter()
        .filter_map(|i| {
            (i + 1..parents.len())
                .map(|j| parents[i].iter().zip(&parents[j]).filter(|(x, y)| x != y).count())
                .min()
        })
        .min()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryRow {
    pub n: usize,
    pub kind: AttackKind,
    pub k: usize,
    pub attacks: u64,
    pub failures: u64,
    /// Attacks where several keys, the right one among them, explain the
    /// damage. Only expected for `n <= 2`.
    pub ambiguous: u64,
    /// Serialized counterexample: key, then the attack spec.
    pub first_failure: Option<String>,
}

impl RecoveryRow {
    /// Label used in reports, e.g. `removals2`.
    pub fn label(&self) -> String {
        format!("{}{}", self.kind, self.k)
    }
}

/// Runs every attack of each `(kind, k)` against every key of each size
/// in `ns` and checks that recovery returns the original key. Damaged
/// graphs are relabeled with a per-attack seed.
pub fn verify_recovery_exhaustive(ns: RangeInclusive<usize>, kinds: &[(AttackKind, usize)]) -> Vec<RecoveryRow> {
    let mut rows = Vec::new();
    for n in ns {
        for &(kind, k) in kinds {
            let per_key: Vec<(u64, u64, u64, Option<String>)> = keys_of_size(n)
                .into_par_iter()
                .map(|omega| {
                    let g = encode(omega).expect("positive key").to_digraph();
                    let (mut attacks, mut failures, mut ambiguous, mut first) = (0, 0, 0, None);
                    for (i, spec) in enumerate_attacks(&g, k, kind).expect("small k").enumerate() {
                        attacks += 1;
                        let spec = spec.with_seed(omega.wrapping_mul(1_000_003).wrapping_add(i as u64));
                        let damaged = apply_attack(&g, &spec, true).expect("enumerated specs are valid");
                        let ok = match recover(&damaged.graph, n) {
                            Ok(r) if !r.ambiguous() => r.key == omega,
                            Ok(r) if n <= 2 && r.alternatives.contains(&omega) => {
                                ambiguous += 1;
                                true
                            }
                            _ => false,
                        };
                        if !ok {
                            failures += 1;
                            first.get_or_insert_with(|| format!("key {omega}\n{}", spec.to_text()));
                        }
                    }
                    (attacks, failures, ambiguous, first)
                })
                .collect();
            let mut row = RecoveryRow { n, kind, k, attacks: 0, failures: 0, ambiguous: 0, first_failure: None };
            for (a, f, amb, first) in per_key {
                row.attacks += a;
                row.failures += f;
                row.ambiguous += amb;
                if row.first_failure.is_none() {
                    row.first_failure = first;
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Closed-form attack count for a sweep row: every key of size `n` has
/// the same number of edges and non-edges.
pub fn expected_attacks(n: usize, kind: AttackKind, k: usize) -> u64 {
    let g = encode(*keys_of_size(n).start()).expect("positive key").to_digraph();
    (attack_space_size(&g, k, kind) as u64) << (n - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoder {
    Fast,
    Permutation,
}

impl std::fmt::Display for Decoder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Fast => "fast",
            Self::Permutation => "permutation",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Undamaged,
    /// Two random edges removed; the time includes recovery.
    TwoRemovals,
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Undamaged => "none",
            Self::TwoRemovals => "two-removals",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingReport {
    pub n: usize,
    pub decoder: Decoder,
    pub condition: Condition,
    pub mean_ns: f64,
    pub samples: usize,
}

/// `count` keys of size `n`, uniform, reproducible per seed.
pub fn sample_keys(n: usize, count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).rotate_left(32));
    let range = keys_of_size(n);
    (0..count).map(|_| rng.gen_range(range.clone())).collect()
}

const BATCHES: usize = 10;

/// Median over batches of the mean time per call of `op`. The inputs are
/// split into `BATCHES` chunks and each chunk is timed in a single pass:
/// replaying a chunk lets the branch predictor learn it, and keeps small
/// inputs cache-resident while large ones spill, both of which bend the
/// measured scaling.
pub fn median_of_means<T>(inputs: &[T], mut op: impl FnMut(&T)) -> f64 {
    assert!(!inputs.is_empty(), "nothing to time");
    let size = inputs.len().div_ceil(BATCHES);
    let mut means: Vec<f64> = inputs
        .chunks(size)
        .map(|chunk| {
            let t = Instant::now();
            chunk.iter().for_each(&mut op);
            t.elapsed().as_nanos() as f64 / chunk.len() as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let mid = means.len() / 2;
    if means.len() % 2 == 1 {
        means[mid]
    } else {
        (means[mid - 1] + means[mid]) / 2.0
    }
}

/// Mean decode times for random keys of each size, with both decoders,
/// undamaged and after two random removals. Runs on the calling thread.
pub fn timing_bench(ns: &[usize], samples: usize, seed: u64) -> Result<Vec<TimingReport>, AnalysisError> {
    if samples < 100 {
        return Err(AnalysisError::TooFewSamples(samples));
    }
    if let Some(&n) = ns.iter().find(|&&n| !(3..=64).contains(&n)) {
        return Err(AnalysisError::KeySize(n));
    }
    let mut out = Vec::new();
    for &n in ns {
        let keys = sample_keys(n, samples, seed);
        let clean: Vec<_> = keys.iter().map(|&w| encode(w).expect("positive key").to_digraph()).collect();
        let damaged: Vec<_> = clean
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let s = seed.wrapping_add(i as u64);
                let spec = random_attack(g, 2, AttackKind::Removals, s).expect("enough edges");
                apply_attack(g, &spec, true).expect("valid spec").graph
            })
            .collect();
        let mut row = |decoder, condition, mean_ns| out.push(TimingReport { n, decoder, condition, mean_ns, samples });
        row(Decoder::Fast, Condition::Undamaged, median_of_means(&clean, |g| {
            black_box(decode_fast(black_box(g)).ok());
        }));
        row(Decoder::Permutation, Condition::Undamaged, median_of_means(&clean, |g| {
            black_box(decode_via_permutation(black_box(g)).ok());
        }));
        row(Decoder::Fast, Condition::TwoRemovals, median_of_means(&damaged, |g| {
            let r = recover_removals(black_box(g), n).ok();
            black_box(r.map(|r| decode_fast(&r.watermark.to_digraph()).ok()));
        }));
        row(Decoder::Permutation, Condition::TwoRemovals, median_of_means(&damaged, |g| {
            let r = recover_removals(black_box(g), n).ok();
            black_box(r.map(|r| decode_via_permutation(&r.watermark.to_digraph()).ok()));
        }));
    }
    Ok(out)
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

pub fn collisions_csv(sets: &[CollisionSet]) -> String {
    csv_string(
        &["n", "k", "count", "ratio"],
        sets.iter().map(|s| vec![s.n.to_string(), s.k.to_string(), s.members.len().to_string(), format!("{:.6}", s.ratio)]),
    )
}

pub fn recovery_csv(rows: &[RecoveryRow]) -> String {
    csv_string(
        &["n", "kind", "attacks", "failures"],
        rows.iter().map(|r| vec![r.n.to_string(), r.label(), r.attacks.to_string(), r.failures.to_string()]),
    )
}

pub fn timing_csv(rows: &[TimingReport]) -> String {
    csv_string(
        &["n", "decoder", "condition", "mean_ns", "samples"],
        rows.iter().map(|r| {
            vec![r.n.to_string(), r.decoder.to_string(), r.condition.to_string(), format!("{:.1}", r.mean_ns), r.samples.to_string()]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_of_size_bounds() {
        assert_eq!(keys_of_size(1), 1..=1);
        assert_eq!(keys_of_size(4), 8..=15);
        assert_eq!(keys_of_size(64), 1 << 63..=u64::MAX);
    }

    #[test]
    fn eight_and_nine_are_three_apart() {
        assert_eq!(edge_distance(8, 9), 3);
        let c = collision_sets(4, 3);
        assert!(c.members.contains(&8) && c.members.contains(&9));
    }

    #[test]
    fn two_and_three_are_two_apart() {
        assert_eq!(edge_distance(2, 3), 2);
        assert_eq!(collision_sets(2, 2).members, vec![2, 3]);
    }

    #[test]
    fn no_collisions_below_three() {
        assert!(collision_sets(3, 2).members.is_empty());
        assert_eq!(minimum_distance(4), Some(3));
    }

    #[test]
    fn sweep_counts_match_binomials() {
        let rows = verify_recovery_exhaustive(3..=3, &[(AttackKind::Removals, 1), (AttackKind::Removals, 2)]);
        assert_eq!(rows[0].attacks, 4 * 15);
        assert_eq!(rows[1].attacks, 4 * 105);
        for r in &rows {
            assert_eq!(r.attacks, expected_attacks(r.n, r.kind, r.k));
            assert_eq!(r.failures, 0, "{:?}", r.first_failure);
        }
    }

    #[test]
    fn n2_ambiguity_is_not_a_failure() {
        let rows = verify_recovery_exhaustive(2..=2, &[(AttackKind::Removals, 2)]);
        assert!(rows[0].ambiguous > 0);
        assert_eq!(rows[0].failures, 0, "{:?}", rows[0].first_failure);
    }

    #[test]
    fn sampling_is_reproducible() {
        assert_eq!(sample_keys(20, 50, 4), sample_keys(20, 50, 4));
        assert!(sample_keys(20, 50, 4).iter().all(|w| keys_of_size(20).contains(w)));
        assert_eq!(timing_bench(&[10], 0, 1), Err(AnalysisError::TooFewSamples(0)));
    }

    #[test]
    fn csv_headers() {
        let c = collisions_csv(&[collision_sets(4, 3)]);
        assert!(c.starts_with("n,k,count,ratio\n4,3,"));
        let t = timing_csv(&[]);
        assert_eq!(t, "n,decoder,condition,mean_ns,samples\n");
    }
}
