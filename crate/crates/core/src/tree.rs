//! Representative trees: rooted, ordered, descending trees on `1..=2n+2`
//! and their preorder traversals.

use crate::error::TreeError;

/// Rooted ordered tree on vertices `1..=2n+2`, root `2n+2`. Children are
/// kept in ascending order and every child is smaller than its parent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepresentativeTree {
    n: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl RepresentativeTree {
    /// Builds a tree from a parent map indexed by label (`parent[0]` and
    /// `parent[2n+2]` are ignored).
    pub fn from_parents(n: usize, mut parent: Vec<Option<usize>>) -> Result<Self, TreeError> {
        let root = 2 * n + 2;
        parent.resize(root + 1, None);
        parent[0] = None;
        parent[root] = None;
        let mut children = vec![Vec::new(); root + 1];
        for v in 1..root {
            let p = parent[v].ok_or(TreeError::Unreachable(v))?;
            if p <= v || p > root {
                return Err(TreeError::NotDescending { child: v, parent: p });
            }
            children[p].push(v);
        }
        Ok(Self { n, parent, children })
    }

    /// Rebuilds the tree from its preorder traversal (root first). Each
    /// vertex becomes the rightmost child of the nearest ancestor of the
    /// previous vertex that exceeds it.
    pub fn from_preorder(preorder: &[usize]) -> Result<Self, TreeError> {
        let &root = preorder.first().ok_or(TreeError::Empty)?;
        let len = preorder.len();
        if len % 2 != 0 || root != len {
            return Err(TreeError::NotAPermutation(len));
        }
        let mut seen = vec![false; len + 1];
        for &v in preorder {
            if v == 0 || v > len || std::mem::replace(&mut seen[v], true) {
                return Err(TreeError::NotAPermutation(len));
            }
        }
        let n = (len - 2) / 2;
        let mut parent = vec![None; len + 1];
        let mut children = vec![Vec::new(); len + 1];
        // The stack holds the rightmost root-to-leaf path, decreasing upward.
        let mut stack = vec![root];
        for &v in &preorder[1..] {
            while stack.last().is_some_and(|&top| top < v) {
                stack.pop();
            }
            let &p = stack.last().ok_or(TreeError::NoLargerAncestor { vertex: v })?;
            parent[v] = Some(p);
            children[p].push(v);
            stack.push(v);
        }
        Ok(Self { n, parent, children })
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

    /// Preorder traversal, root first.
    pub fn preorder(&self) -> Vec<usize> {
        preorder_from(&self.children, self.root())
    }

    /// Preorder traversal without the root: for a canonical tree this is
    /// the self-inverting permutation the watermark was built from.
    pub fn root_free_preorder(&self) -> Vec<usize> {
        let mut p = self.preorder();
        p.remove(0);
        p
    }

    /// Descendants of `v`, excluding `v`, in preorder.
    pub fn descendants(&self, v: usize) -> Vec<usize> {
        let mut p = preorder_from(&self.children, v);
        p.remove(0);
        p
    }

    /// The last vertex of the preorder traversal.
    pub fn rightmost(&self) -> usize {
        let mut v = self.root();
        while let Some(&c) = self.children[v].last() {
            v = c;
        }
        v
    }

    /// Vertices `n+1..=2n+1`.
    pub fn large(&self) -> std::ops::RangeInclusive<usize> {
        self.n + 1..=2 * self.n + 1
    }

    /// Vertices `1..=n`.
    pub fn small(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    /// The fixed point of the root-free preorder traversal, if it has
    /// exactly one.
    pub fn fixed_vertex(&self) -> Option<usize> {
        let p = self.root_free_preorder();
        let mut fixed = p.iter().enumerate().filter(|&(i, &v)| i + 1 == v).map(|(_, &v)| v);
        match (fixed.next(), fixed.next()) {
            (Some(f), None) => Some(f),
            _ => None,
        }
    }

    /// Large vertices other than the fixed vertex.
    pub fn cyclic_large(&self) -> Vec<usize> {
        let f = self.fixed_vertex();
        self.large().filter(|&x| Some(x) != f).collect()
    }

    /// Children of the root in ascending order.
    pub fn ascending(&self) -> &[usize] {
        self.children(self.root())
    }

    /// Cyclic large vertices that are not children of the root, descending.
    pub fn descending(&self) -> Vec<usize> {
        let root = self.root();
        let mut d: Vec<usize> =
            self.cyclic_large().into_iter().filter(|&x| self.parent[x] != Some(root)).collect();
        d.reverse();
        d
    }
}

pub(crate) fn preorder_from(children: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        out.push(v);
        stack.extend(children[v].iter().rev());
    }
    out
}
