//! Structural properties every encoded key satisfies, numbered 1 to 9.
//! Used as an oracle by the test suites.

use crate::codec::Key;

/// Numbers of the properties that `omega` violates; empty when all hold.
pub fn violated_properties(omega: u64) -> Vec<u8> {
    let key = Key::new(omega).expect("positive key");
    let n = key.n();
    let top = 2 * n + 1;
    let pb = key.extended_binary().bitonic_permutation();
    let ps = pb.self_inverting();
    let s = |i: usize| ps.get(i);
    let f = ps.fixed();
    let w = ps.watermark();
    let mut pos = vec![0; top + 1];
    for i in 1..=top {
        pos[s(i)] = i;
    }

    let checks: [(u8, bool); 9] = [
        (1, (1..=n).all(|i| pb.get(n + i + 1) == n - i + 1)),
        (2, (1..=n).all(|i| s(i) > n)),
        (
            3,
            match key.first_zero() {
                Some(f0) => f == n + f0 && omega.wrapping_add(1) & omega != 0,
                None => f == top && omega.wrapping_add(1) & omega == 0,
            },
        ),
        (4, (1..f - n).all(|i| s(i) == n + i && s(n + i) == i)),
        (5, s(1) == n + 1 && s(n + 1) == 1),
        (6, if f == top { pos[top] == top } else { pos[top] == key.ones() + 1 && s(key.ones() + 1) == top }),
        (7, {
            let prefix: Vec<usize> = (1..=n + 1).map(s).collect();
            let peak = prefix.windows(2).take_while(|p| p[0] < p[1]).count();
            prefix[peak..].windows(2).all(|p| p[0] > p[1])
        }),
        (8, (1..top).all(|u| (w.tree_parent(u) == top + 1) == (u > n && key.bit(u - n) == 1))),
        (
            9,
            w.tree_edges().iter().filter(|&&(_, k)| k != top + 1).all(|&(u, k)| {
                pos[k] < pos[u] && (pos[k] + 1..pos[u]).all(|i| s(i) < u)
            }),
        ),
    ];
    checks.iter().filter(|(_, ok)| !ok).map(|&(p, _)| p).collect()
}
