//! Linear-time recognition of canonical reducible permutation graphs.
//!
//! A digraph is accepted when (1) it is a self-labeling reducible flow
//! graph, whose unique Hamiltonian path forces the labels `2n+2, …, 0`, and
//! (2) its representative tree is a type-1 tree with fixed vertex `2n+1` or
//! a type-2 tree with fixed vertex in `[n+2, 2n]`.

use crate::error::Rejection;
use crate::graph::Digraph;
use crate::tree::RepresentativeTree;

/// The labeling forced by the unique Hamiltonian path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelingResult {
    /// `sigma[v]` is the canonical label of input vertex `v`.
    pub sigma: Vec<usize>,
    /// Input vertices along the Hamiltonian path, from label `2n+2` down to `0`.
    pub hamiltonian_path: Vec<usize>,
}

impl LabelingResult {
    pub fn n(&self) -> usize {
        (self.sigma.len() - 3) / 2
    }
}

/// Checks the self-labeling clauses and returns the forced labeling.
///
/// The Hamiltonian path is recovered by walking backwards from the unique
/// sink: under a valid labeling every in-neighbor of `v` other than `v+1`
/// is a tree child, hence smaller than `v` and already visited. So the walk
/// is forced at every step, and an ambiguous step proves that no labeling
/// satisfies the degree clauses.
pub fn check_self_labeling(g: &Digraph) -> Result<LabelingResult, Rejection> {
    let vc = g.vertex_count();
    let n = g.key_size().ok_or(Rejection::SizeMismatch(vc))?;
    let expected = 4 * n + 3;
    if g.edge_count() != expected {
        return Err(Rejection::EdgeCount { expected, found: g.edge_count() });
    }
    let adj = g.adjacency();
    let mut sinks = (0..vc).filter(|&v| adj.out(v).is_empty());
    let sink = match (sinks.next(), sinks.next()) {
        (Some(s), None) => s,
        (None, _) => return Err(Rejection::NoHamiltonianPath("no vertex of out-degree 0".into())),
        (Some(_), Some(_)) => {
            return Err(Rejection::NoHamiltonianPath("several vertices of out-degree 0".into()))
        }
    };

    let mut visited = vec![false; vc];
    let mut path = Vec::with_capacity(vc);
    visited[sink] = true;
    path.push(sink);
    let mut cur = sink;
    while path.len() < vc {
        let mut next = None;
        for &p in adj.inn(cur) {
            if !visited[p] {
                if next.is_some() {
                    return Err(Rejection::AmbiguousPath { label: path.len() - 1 });
                }
                next = Some(p);
            }
        }
        let Some(p) = next else {
            return Err(Rejection::NoHamiltonianPath(format!(
                "backward walk from the sink stops after {} of {vc} vertices",
                path.len()
            )));
        };
        visited[p] = true;
        path.push(p);
        cur = p;
    }

    let mut sigma = vec![0; vc];
    for (label, &v) in path.iter().enumerate() {
        sigma[v] = label;
    }
    let top = vc - 1;
    for (label, &v) in path.iter().enumerate() {
        let outs = adj.out(v);
        let violation = |detail: String| Err(Rejection::DegreeViolation { label, detail });
        if label == 0 {
            let ins = adj.inn(v);
            if ins.len() != 1 || sigma[ins[0]] != 1 {
                return violation("in-neighborhood of 0 must be {1}".into());
            }
        } else if label == top {
            if outs.len() != 1 || sigma[outs[0]] != top - 1 {
                return violation("out-neighborhood of the root must be {2n+1}".into());
            }
            if adj.inn(v).len() < 2 {
                return violation("root needs at least two in-neighbors".into());
            }
        } else {
            let mut labels = outs.iter().map(|&w| sigma[w]);
            let ok = match (labels.next(), labels.next(), labels.next()) {
                (Some(a), Some(b), None) => {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    lo + 1 == label && hi > label
                }
                _ => false,
            };
            if !ok {
                return violation("out-neighborhood must be {v-1, w} with w > v".into());
            }
        }
    }
    path.reverse();
    Ok(LabelingResult { sigma, hamiltonian_path: path })
}

/// Builds the representative tree of a canonically labeled self-labeling
/// graph: the parent of `u` is its out-neighbor other than `u - 1`.
pub fn extract_representative_tree(labeled: &Digraph) -> Result<RepresentativeTree, Rejection> {
    let n = labeled.key_size().ok_or(Rejection::SizeMismatch(labeled.vertex_count()))?;
    let root = 2 * n + 2;
    let mut parent = vec![None; root + 1];
    for &(u, v) in labeled.edges() {
        if v + 1 == u {
            continue;
        }
        if u == 0 || u >= root || parent[u].replace(v).is_some() {
            return Err(Rejection::DegreeViolation {
                label: u,
                detail: "vertex does not have exactly one tree edge".into(),
            });
        }
    }
    Ok(RepresentativeTree::from_parents(n, parent)?)
}

/// True when `s` is a self-inverting permutation of `1..=2n+1` with a single
/// fixed point, every 2-cycle has its smaller index in `1..=n`, and
/// `s[1..=n+1]` is bitonic from `n+1` down to `1`.
pub fn is_canonical_sip(s: &[usize]) -> bool {
    let len = s.len();
    if len < 3 || len % 2 == 0 {
        return false;
    }
    let n = (len - 1) / 2;
    let mut fixed = 0;
    for (i, &v) in s.iter().enumerate() {
        let idx = i + 1;
        if v == 0 || v > len || s[v - 1] != idx {
            return false;
        }
        if v == idx {
            fixed += 1;
        } else if idx.min(v) > n {
            return false;
        }
    }
    if fixed != 1 || s[0] != n + 1 || s[n] != 1 {
        return false;
    }
    let prefix = &s[..=n];
    let peak = 1 + prefix.windows(2).take_while(|w| w[0] < w[1]).count();
    prefix[peak - 1..].windows(2).all(|w| w[0] > w[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeKind {
    Type1,
    Type2,
}

/// The large-vertex skeleton of a canonical representative tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeShape {
    pub n: usize,
    pub fixed: usize,
    /// Number of cyclic large vertices hanging from the root.
    pub ell: usize,
    /// Bitonic index of the parent of the fixed vertex (type-2 only).
    pub q: Option<usize>,
    /// Cyclic large children of the root, ascending.
    pub ascending: Vec<usize>,
    /// The remaining cyclic large vertices, a descending chain.
    pub descending: Vec<usize>,
}

impl TreeShape {
    /// Cyclic large vertices in bitonic order `x_1, …, x_n`.
    pub fn cyclic_large(&self) -> Vec<usize> {
        self.ascending.iter().chain(&self.descending).copied().collect()
    }

    pub fn large(&self) -> std::ops::RangeInclusive<usize> {
        self.n + 1..=2 * self.n + 1
    }

    pub fn small(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeClass {
    Type1(TreeShape),
    Type2(TreeShape),
    NotCanonical(String),
}

impl TreeClass {
    pub fn kind(&self) -> Option<TreeKind> {
        match self {
            TreeClass::Type1(_) => Some(TreeKind::Type1),
            TreeClass::Type2(_) => Some(TreeKind::Type2),
            TreeClass::NotCanonical(_) => None,
        }
    }

    pub fn shape(&self) -> Option<&TreeShape> {
        match self {
            TreeClass::Type1(s) | TreeClass::Type2(s) => Some(s),
            TreeClass::NotCanonical(_) => None,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.kind().is_some()
    }
}

/// Classifies a representative tree as type-1, type-2 or neither by
/// checking the structural conditions directly, in time linear in `n`.
pub fn classify_tree(t: &RepresentativeTree) -> TreeClass {
    let n = t.n();
    if n == 0 {
        return TreeClass::NotCanonical("empty key".into());
    }
    let root = t.root();
    let top = 2 * n + 1;
    let root_children = t.children(root);

    if root_children.iter().copied().eq(n + 1..=top) && t.children(2 * n).iter().copied().eq(1..=n) {
        return TreeClass::Type1(TreeShape {
            n,
            fixed: top,
            ell: n,
            q: None,
            ascending: (n + 1..=2 * n).collect(),
            descending: Vec::new(),
        });
    }
    match classify_type2(t) {
        Ok(shape) => TreeClass::Type2(shape),
        Err(reason) => TreeClass::NotCanonical(reason),
    }
}

fn classify_type2(t: &RepresentativeTree) -> Result<TreeShape, String> {
    let n = t.n();
    let root = t.root();
    let top = 2 * n + 1;
    let ascending = t.children(root);
    let ell = ascending.len();
    if !(2..=n).contains(&ell) {
        return Err(format!("root has {ell} children, expected between 2 and n"));
    }
    if ascending[0] != n + 1 || ascending[ell - 1] != top {
        return Err("children of the root must run from n+1 to 2n+1".into());
    }
    if let Some(&x) = ascending[..ell - 1].iter().find(|&&x| !t.children(x).is_empty()) {
        return Err(format!("root child {x} is not a leaf"));
    }

    // Walk the descending chain below 2n+1. At each chain vertex the
    // smallest large child continues the chain; a second large child can
    // only be the fixed vertex.
    let mut descending = Vec::with_capacity(n - ell);
    let mut fixed = None;
    let mut q = None;
    let mut cur = top;
    for i in ell..n {
        let children = t.children(cur);
        if children.iter().any(|&c| c <= n) {
            return Err(format!("chain vertex {cur} has a small child"));
        }
        match *children {
            [next] => cur = next,
            [next, f] => {
                fixed = Some(f);
                q = Some(i);
                cur = next;
            }
            _ => return Err(format!("chain vertex {cur} has {} children", children.len())),
        }
        descending.push(cur);
    }
    let last = cur;
    let children = t.children(last);
    let smalls = children.iter().take_while(|&&c| c <= n).count();
    match children[smalls..] {
        [] => {}
        [f] if fixed.is_none() => {
            fixed = Some(f);
            q = Some(n);
        }
        _ => return Err(format!("last chain vertex {last} has unexpected large children")),
    }
    let f = fixed.ok_or("no fixed vertex found on the chain")?;
    if !(n + 2..=2 * n).contains(&f) {
        return Err(format!("fixed vertex {f} outside [n+2, 2n]"));
    }
    if !children[..smalls].iter().copied().eq(1..f - n) {
        return Err(format!("children of {last} must be 1..=f-n-1"));
    }

    let bitonic: Vec<usize> = ascending.iter().chain(&descending).copied().collect();
    if !bitonic[..f - n - 1].iter().copied().eq(n + 1..f) {
        return Err("leading cyclic large vertices must be n+1..f-1".into());
    }

    // Descendants of f are exactly {f-n, …, n}; in the global traversal the
    // small y sits at the index given by the large vertex x_y.
    let below = t.descendants(f);
    if below.len() != 2 * n - f + 1 {
        return Err(format!("fixed vertex {f} has {} descendants", below.len()));
    }
    for (j, &y) in below.iter().enumerate() {
        if y < f - n || y > n || bitonic[y - 1] != f + 1 + j {
            return Err(format!("descendant {y} of the fixed vertex is misplaced"));
        }
    }
    Ok(TreeShape { n, fixed: f, ell, q, ascending: ascending.to_vec(), descending })
}

/// A successful recognition: the forced labeling, the representative tree
/// in canonical labels, and its classification.
#[derive(Debug, Clone)]
pub struct Recognized {
    pub labeling: LabelingResult,
    pub tree: RepresentativeTree,
    pub shape: TreeShape,
    pub kind: TreeKind,
}

impl Recognized {
    pub fn n(&self) -> usize {
        self.tree.n()
    }
}

/// Full recognizer. `Ok` exactly when `g` is isomorphic to the encoding of
/// some key; otherwise the first failing clause.
pub fn recognize(g: &Digraph) -> Result<Recognized, Rejection> {
    let labeling = check_self_labeling(g)?;
    let tree = extract_representative_tree(&g.relabel(&labeling.sigma))?;
    match classify_tree(&tree) {
        TreeClass::Type1(shape) => Ok(Recognized { labeling, tree, shape, kind: TreeKind::Type1 }),
        TreeClass::Type2(shape) => Ok(Recognized { labeling, tree, shape, kind: TreeKind::Type2 }),
        TreeClass::NotCanonical(reason) => Err(Rejection::NotCanonical(reason)),
    }
}

pub fn is_watermark(g: &Digraph) -> bool {
    recognize(g).is_ok()
}
