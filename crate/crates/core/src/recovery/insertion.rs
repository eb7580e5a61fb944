//! Undoing insertions (and one removal plus one insertion) by trying
//! every modification set of the right shape against the recognizer.

use rayon::prelude::*;

use super::{check_size, delta, merge, recover_removals, RecoveryResult};
use crate::codec::{decode_fast, encode};
use crate::error::RecoveryError;
use crate::graph::{Digraph, Edge};
use crate::recognition::recognize;

/// Out-degrees plus their histogram, everything above 2 lumped together.
/// A watermark has exactly one vertex of out-degree 0, one of out-degree
/// 1 and the rest of out-degree 2.
struct Degrees {
    deg: Vec<usize>,
    hist: [usize; 4],
}

impl Degrees {
    fn new(g: &Digraph) -> Self {
        let deg = g.out_degrees();
        let mut hist = [0; 4];
        for &d in &deg {
            hist[d.min(3)] += 1;
        }
        Self { deg, hist }
    }

    /// Histogram after removing edges out of `minus` and adding edges out
    /// of `plus`; `None` when some degree would go negative.
    fn after(&self, minus: &[usize], plus: &[usize]) -> Option<[usize; 4]> {
        let mut touched: [(usize, isize); 4] = [(usize::MAX, 0); 4];
        let mut len = 0;
        for (&v, s) in minus.iter().map(|v| (v, -1)).chain(plus.iter().map(|v| (v, 1))) {
            match touched[..len].iter_mut().find(|t| t.0 == v) {
                Some(t) => t.1 += s,
                None => {
                    touched[len] = (v, s);
                    len += 1;
                }
            }
        }
        let mut h = self.hist;
        for &(v, d) in &touched[..len] {
            let old = self.deg[v];
            let new = usize::try_from(old as isize + d).ok()?;
            h[old.min(3)] -= 1;
            h[new.min(3)] += 1;
        }
        Some(h)
    }

    fn watermark_like(&self, minus: &[usize], plus: &[usize]) -> bool {
        self.after(minus, plus) == Some([1, 1, self.deg.len() - 2, 0])
    }

    /// Whether one more edge somewhere can restore a watermark histogram.
    fn one_short(&self, minus: &[usize]) -> bool {
        let vc = self.deg.len();
        matches!(self.after(minus, &[]), Some(h) if h == [2, 0, vc - 2, 0] || h == [1, 2, vc - 3, 0])
    }
}

fn explanation(g: &Digraph, removed: &[Edge], added: &[Edge]) -> Option<RecoveryResult> {
    let h = g.without_edges(removed).with_edges(added);
    let rec = recognize(&h).ok()?;
    let sigma = rec.labeling.sigma;
    let key = decode_fast(&h.relabel(&sigma)).ok()?;
    Some(RecoveryResult {
        watermark: encode(key).ok()?,
        key,
        labeling: sigma,
        restored_edges: added.to_vec(),
        discarded_edges: removed.to_vec(),
        scenario: None,
        alternatives: Vec::new(),
    })
}

/// Restores a watermark that received one or two extra edges.
pub fn recover_insertions(g: &Digraph, n: usize) -> Result<RecoveryResult, RecoveryError> {
    check_size(g, n)?;
    let k = match delta(g, n) {
        d @ 1..=2 => d as usize,
        d => return Err(RecoveryError::OutOfContract(d)),
    };
    let edges = g.edges();
    let degs = Degrees::new(g);
    let found: Vec<RecoveryResult> = if k == 1 {
        edges
            .par_iter()
            .filter(|e| degs.watermark_like(&[e.0], &[]))
            .filter_map(|&e| explanation(g, &[e], &[]))
            .collect()
    } else {
        (0..edges.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let degs = &degs;
                (i + 1..edges.len()).filter_map(move |j| {
                    let (a, b) = (edges[i], edges[j]);
                    if !degs.watermark_like(&[a.0, b.0], &[]) {
                        return None;
                    }
                    explanation(g, &[a, b], &[])
                })
            })
            .collect()
    };
    merge(found, k).map_err(|_| RecoveryError::NoExplanation)
}

/// Restores a watermark that lost one edge and received another. Each
/// edge whose removal leaves a plausible degree histogram is dropped in
/// turn and the single-removal recovery fills the remaining gap.
pub fn recover_mixed(g: &Digraph, n: usize) -> Result<RecoveryResult, RecoveryError> {
    check_size(g, n)?;
    if delta(g, n) != 0 {
        return Err(RecoveryError::OutOfContract(delta(g, n)));
    }
    let degs = Degrees::new(g);
    let found: Vec<RecoveryResult> = g
        .edges()
        .par_iter()
        .filter(|e| degs.one_short(&[e.0]))
        .filter_map(|&extra| {
            let rest = recover_removals(&g.without_edges(&[extra]), n).ok()?;
            // Putting the dropped edge straight back is not a modification.
            if rest.restored_edges == [extra] {
                return None;
            }
            let mut alternatives = rest.alternatives.clone();
            alternatives.retain(|&k| k != rest.key);
            Some(std::iter::once(RecoveryResult { discarded_edges: vec![extra], ..rest }).chain(
                alternatives.into_iter().filter_map(move |k| {
                    let watermark = encode(k).ok()?;
                    Some(RecoveryResult {
                        watermark,
                        key: k,
                        labeling: Vec::new(),
                        restored_edges: Vec::new(),
                        discarded_edges: vec![extra],
                        scenario: None,
                        alternatives: Vec::new(),
                    })
                }),
            ))
        })
        .flatten_iter()
        .collect();
    merge(found, 1).map_err(|_| RecoveryError::NoExplanation)
}

/// Dispatches on the edge-count change: positive means insertions, zero
/// means one removal plus one insertion.
pub fn recover_insertions_or_mixed(g: &Digraph, n: usize) -> Result<RecoveryResult, RecoveryError> {
    check_size(g, n)?;
    match delta(g, n) {
        0 => recover_mixed(g, n),
        _ => recover_insertions(g, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::encode;

    #[test]
    fn single_insertion() {
        let g = encode(43).unwrap().to_digraph().with_edges(&[(3, 9)]);
        let r = recover_insertions(&g, 6).unwrap();
        assert_eq!(r.key, 43);
        assert_eq!(r.discarded_edges, vec![(3, 9)]);
        assert!(!r.ambiguous());
    }

    #[test]
    fn double_insertion() {
        let g = encode(43).unwrap().to_digraph().with_edges(&[(3, 9), (2, 11)]);
        let r = recover_insertions(&g, 6).unwrap();
        assert_eq!(r.key, 43);
        assert_eq!(r.discarded_edges, vec![(2, 11), (3, 9)]);
    }

    #[test]
    fn one_removal_one_insertion() {
        let g = encode(43).unwrap().to_digraph().without_edges(&[(6, 8)]).with_edges(&[(6, 9)]);
        let r = recover_insertions_or_mixed(&g, 6).unwrap();
        assert_eq!(r.key, 43);
        assert_eq!(r.discarded_edges, vec![(6, 9)]);
        assert_eq!(r.restored_edges, vec![(6, 8)]);
    }

    #[test]
    fn wrong_magnitude_is_out_of_contract() {
        let g = encode(43).unwrap().to_digraph().without_edges(&[(6, 8)]);
        assert_eq!(recover_insertions(&g, 6), Err(RecoveryError::OutOfContract(-1)));
    }
}
