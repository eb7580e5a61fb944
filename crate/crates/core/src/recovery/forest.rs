//! Rebuilding a representative tree that lost up to two edges: locate the
//! fixed vertex, recover the children of the root, then regenerate the
//! preorder traversal.

use crate::error::{RecoveryError, TreeError};
use crate::graph::Edge;
use crate::recognition::is_canonical_sip;
use crate::tree::{preorder_from, RepresentativeTree};

/// A representative tree with some parent edges removed. Indexed by label
/// `0..=2n+2`; slot 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    n: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl Forest {
    pub fn new(n: usize, mut parent: Vec<Option<usize>>) -> Result<Self, TreeError> {
        let root = 2 * n + 2;
        parent.resize(root + 1, None);
        parent[0] = None;
        parent[root] = None;
        let mut children = vec![Vec::new(); root + 1];
        for v in 1..root {
            if let Some(p) = parent[v] {
                if p <= v || p > root {
                    return Err(TreeError::NotDescending { child: v, parent: p });
                }
                children[p].push(v);
            }
        }
        Ok(Self { n, parent, children })
    }

    /// `tree` with the tree edges `removed` deleted.
    pub fn from_tree(tree: &RepresentativeTree, removed: &[Edge]) -> Self {
        let root = tree.root();
        let parent = (0..=root)
            .map(|v| tree.parent(v).filter(|&p| v > 0 && !removed.contains(&(v, p))))
            .collect();
        Self::new(tree.n(), parent).expect("subforest of a valid tree")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        2 * self.n + 2
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Non-root vertices without a parent.
    pub fn orphans(&self) -> Vec<usize> {
        (1..self.root()).filter(|&v| self.parent[v].is_none()).collect()
    }

    /// Roots of the trees of the forest, the main root first.
    pub fn component_roots(&self) -> Vec<usize> {
        let mut r = vec![self.root()];
        r.extend(self.orphans());
        r
    }

    pub fn preorder(&self, component_root: usize) -> Vec<usize> {
        preorder_from(&self.children, component_root)
    }

    /// Descendants of `v` in preorder, `v` excluded.
    pub fn descendants(&self, v: usize) -> Vec<usize> {
        let mut p = self.preorder(v);
        p.remove(0);
        p
    }

    pub fn rightmost(&self, component_root: usize) -> usize {
        let mut v = component_root;
        while let Some(&c) = self.children[v].last() {
            v = c;
        }
        v
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.parent[v].is_none() && self.children[v].is_empty()
    }

    fn is_large(&self, v: usize) -> bool {
        v > self.n && v <= 2 * self.n + 1
    }

    fn is_small(&self, v: usize) -> bool {
        v >= 1 && v <= self.n
    }

    /// Completes the forest into a tree if all parents are present.
    pub fn to_tree(&self) -> Result<RepresentativeTree, TreeError> {
        RepresentativeTree::from_parents(self.n, self.parent.clone())
    }
}

/// Returns `2n+1` when the forest can only come from the type-1 tree:
/// `2n+1` is a leaf and every small vertex hangs from `2n`, except at
/// most two isolated ones.
pub fn find_fixed_vertex_type1(f: &Forest) -> Option<usize> {
    let n = f.n();
    let top = 2 * n + 1;
    if !f.is_leaf(top) {
        return None;
    }
    let mut isolated = 0;
    for y in 1..=n {
        if f.parent(y) == Some(2 * n) {
            continue;
        }
        if !f.is_isolated(y) {
            return None;
        }
        isolated += 1;
    }
    (isolated <= 2).then_some(top)
}

/// The fixed vertex when it is below `2n+1`.
///
/// 1. A large vertex outside the root's children with a sibling: the
///    largest child of their parent is `f`.
/// 2. A large vertex `x` with small children whose descendants fit in
///    `Y' = {x-n..n}`, the rest of `Y'` being empty or one whole tree of
///    the forest.
/// 3. The unique large vertex that ends the preorder of some tree.
pub fn find_fixed_vertex(f: &Forest) -> Result<usize, RecoveryError> {
    let n = f.n();
    let root = f.root();
    let inner_large = n + 1..=2 * n;

    for x in inner_large.clone() {
        if let Some(p) = f.parent(x).filter(|&p| p != root) {
            let siblings = f.children(p);
            if siblings.len() >= 2 {
                return Ok(*siblings.last().unwrap());
            }
        }
    }

    for x in inner_large.clone() {
        if f.parent(x) == Some(root) || !f.children(x).iter().any(|&c| f.is_small(c)) {
            continue;
        }
        if step2_holds(f, x) {
            return Ok(x);
        }
    }

    let mut ends = f.component_roots().into_iter().map(|r| f.rightmost(r)).filter(|&v| inner_large.contains(&v));
    match (ends.next(), ends.next()) {
        (Some(x), None) => Ok(x),
        _ => Err(RecoveryError::InconsistentForest("no vertex qualifies as the fixed vertex".into())),
    }
}

fn step2_holds(f: &Forest, x: usize) -> bool {
    let n = f.n();
    let lo = x - n;
    let desc = f.descendants(x);
    if desc.iter().any(|&y| y < lo || y > n) {
        return false;
    }
    let mut in_desc = vec![false; n + 1];
    for &y in &desc {
        in_desc[y] = true;
    }
    let mut rest: Vec<usize> = (lo..=n).filter(|&y| !in_desc[y]).collect();
    if rest.is_empty() {
        return true;
    }
    let Some(&r) = rest.iter().find(|&&y| f.parent(y).is_none()) else { return false };
    let mut comp = f.preorder(r);
    comp.sort_unstable();
    rest.sort_unstable();
    comp == rest
}

/// The children of the root in the original tree, given the fixed vertex
/// `fixed < 2n+1`. Connectivity and isolation refer to the large cyclic
/// vertices together with the root.
pub fn ascending_set(f: &Forest, fixed: usize) -> Vec<usize> {
    let n = f.n();
    let root = f.root();
    let top = 2 * n + 1;
    let xc: Vec<usize> = (n + 1..=top).filter(|&x| x != fixed).collect();
    let mut a: Vec<usize> = f.children(root).iter().copied().filter(|&x| f.is_large(x)).collect();
    let add = |a: &mut Vec<usize>, v: usize| {
        if !a.contains(&v) {
            a.push(v);
        }
    };

    let in_set = |v: usize| v == root || (f.is_large(v) && v != fixed);
    let reached = {
        let mut seen = vec![false; root + 1];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            let nbrs = f.children(v).iter().copied().chain(f.parent(v));
            for w in nbrs {
                if in_set(w) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        xc.iter().filter(|&&x| seen[x]).count()
    };

    if reached < xc.len() {
        let isolated: Vec<usize> = xc.iter().copied().filter(|&x| f.is_isolated(x)).collect();
        match isolated.as_slice() {
            [] => add(&mut a, top),
            [x, x2] => {
                add(&mut a, *x);
                add(&mut a, *x2);
            }
            [x] => {
                let below = f.descendants(fixed);
                if below.len() == 2 * n - fixed + 1 {
                    let y_r = below.last().copied().unwrap_or(0);
                    if a.len() < y_r {
                        add(&mut a, *x);
                        add(&mut a, top);
                    }
                } else {
                    add(&mut a, *x);
                }
            }
            _ => {}
        }
    }
    a.sort_unstable();
    a
}

/// The root-free preorder traversal determined by the fixed vertex, the
/// ascending set `a` and the large cyclic vertices `xc`.
pub fn rebuild_preorder(fixed: usize, a: &[usize], xc: &[usize], n: usize) -> Result<Vec<usize>, RecoveryError> {
    let bad = |why: &str| RecoveryError::InconsistentForest(why.to_string());
    if fixed == 2 * n + 1 {
        return Ok((n + 1..=2 * n).chain(1..=n).chain([fixed]).collect());
    }
    if fixed <= n || fixed > 2 * n + 1 || xc.len() != n || xc.contains(&fixed) {
        return Err(bad("fixed vertex and cyclic vertices do not fit together"));
    }
    if a.iter().any(|x| !xc.contains(x)) {
        return Err(bad("ascending set is not made of cyclic vertices"));
    }
    let mut asc = a.to_vec();
    asc.sort_unstable();
    let mut desc: Vec<usize> = xc.iter().copied().filter(|x| !a.contains(x)).collect();
    desc.sort_unstable_by(|p, q| q.cmp(p));

    let mut p = vec![0; 2 * n + 2];
    let mut pos = 1;
    for v in asc.into_iter().chain(desc).chain(1..fixed - n).chain([fixed]) {
        p[pos] = v;
        pos += 1;
    }
    for y in fixed - n..=n {
        let x = p[y];
        if x <= n || x > 2 * n + 1 || p[x] != 0 {
            return Err(bad("small vertex has no free slot"));
        }
        p[x] = y;
    }
    p.remove(0);
    if is_canonical_sip(&p) {
        Ok(p)
    } else {
        Err(bad("rebuilt traversal is not a canonical self-inverting permutation"))
    }
}

/// Runs the fixed-vertex, ascending-set and preorder steps on a forest
/// with missing parents. Complete forests are returned as they are.
pub fn restore_tree(f: &Forest) -> Result<RepresentativeTree, RecoveryError> {
    let n = f.n();
    if f.orphans().is_empty() {
        return f.to_tree().map_err(|e| RecoveryError::InconsistentForest(e.to_string()));
    }
    let (fixed, a) = match find_fixed_vertex_type1(f) {
        Some(top) => (top, Vec::new()),
        None => {
            let fixed = find_fixed_vertex(f)?;
            (fixed, ascending_set(f, fixed))
        }
    };
    let xc: Vec<usize> = (n + 1..=2 * n + 1).filter(|&x| x != fixed).collect();
    let p = rebuild_preorder(fixed, &a, &xc, n)?;
    let mut full = vec![2 * n + 2];
    full.extend(p);
    RepresentativeTree::from_preorder(&full).map_err(|e| RecoveryError::InconsistentForest(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::encode;

    fn forest(omega: u64, removed: &[Edge]) -> Forest {
        Forest::from_tree(&encode(omega).unwrap().representative_tree(), removed)
    }

    #[test]
    fn type1_forest_is_detected() {
        let f = forest(31, &[(3, 10), (7, 12)]);
        assert_eq!(find_fixed_vertex_type1(&f), Some(11));
        assert_eq!(find_fixed_vertex_type1(&forest(31, &[])), Some(11));
    }

    #[test]
    fn type2_forests_fail_type1_test() {
        let t = encode(43).unwrap().representative_tree();
        let edges: Vec<Edge> = (1..=13).map(|u| (u, t.parent(u).unwrap())).collect();
        for (i, &e1) in edges.iter().enumerate() {
            for &e2 in &edges[i + 1..] {
                assert_eq!(find_fixed_vertex_type1(&forest(43, &[e1, e2])), None, "{e1:?} {e2:?}");
            }
        }
    }

    #[test]
    fn fixed_vertex_of_43() {
        assert_eq!(find_fixed_vertex(&forest(43, &[(6, 8), (3, 6)])), Ok(8));
        assert_eq!(find_fixed_vertex(&forest(43, &[(8, 10), (2, 8)])), Ok(8));
        assert_eq!(find_fixed_vertex(&forest(43, &[(7, 14), (1, 10)])), Ok(8));
    }

    #[test]
    fn ascending_set_of_43() {
        let want = vec![7, 9, 11, 12, 13];
        assert_eq!(ascending_set(&forest(43, &[(6, 8), (3, 6)]), 8), want);
        assert_eq!(ascending_set(&forest(43, &[(13, 14), (7, 14)]), 8), want);
        assert_eq!(ascending_set(&forest(43, &[(13, 14), (8, 10)]), 8), want);
    }

    #[test]
    fn preorder_of_43_is_rebuilt() {
        let p = rebuild_preorder(8, &[7, 9, 11, 12, 13], &[7, 9, 10, 11, 12, 13], 6).unwrap();
        assert_eq!(p, vec![7, 9, 11, 12, 13, 10, 1, 8, 2, 6, 3, 4, 5]);
    }

    #[test]
    fn type1_preorder() {
        assert_eq!(rebuild_preorder(7, &[], &[], 3).unwrap(), vec![4, 5, 6, 1, 2, 3, 7]);
    }

    #[test]
    fn restore_tree_of_43_from_any_two_tree_losses() {
        let t = encode(43).unwrap().representative_tree();
        let edges: Vec<Edge> = (1..=13).map(|u| (u, t.parent(u).unwrap())).collect();
        for (i, &e1) in edges.iter().enumerate() {
            for &e2 in &edges[i + 1..] {
                assert_eq!(restore_tree(&forest(43, &[e1, e2])).as_ref(), Ok(&t), "{e1:?} {e2:?}");
            }
        }
    }
}
