use rayon::prelude::*;
use wmgraph::attack::{apply_attack, enumerate_attacks, AttackKind};
use wmgraph::{encode, recover_removals};

fn failures(n: usize, k: usize, shuffle: bool) -> Vec<(u64, String)> {
    (1u64 << (n - 1)..1u64 << n)
        .into_par_iter()
        .flat_map_iter(|omega| {
            let g = encode(omega).unwrap().to_digraph();
            enumerate_attacks(&g, k, AttackKind::Removals)
                .unwrap()
                .enumerate()
                .filter_map(|(i, spec)| {
                    let spec = spec.with_seed(omega * 1000 + i as u64);
                    let damaged = apply_attack(&g, &spec, shuffle).unwrap();
                    match recover_removals(&damaged.graph, n) {
                        Ok(r) if r.key == omega && !r.ambiguous() => None,
                        other => Some((omega, format!("{:?} -> {:?}", spec.removals, other.map(|r| r.alternatives)))),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

#[test]
fn every_one_and_two_removal_is_undone() {
    for n in 3..=7 {
        for k in 1..=2 {
            let f = failures(n, k, true);
            assert!(f.is_empty(), "n={n} k={k}: {} failures, first {:?}", f.len(), &f[..f.len().min(5)]);
        }
    }
}
