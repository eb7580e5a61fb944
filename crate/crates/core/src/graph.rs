//! Plain directed graphs over integer vertex identifiers, plus the
//! `wmgraph v1` text format and DOT export.

use std::fmt::Write as _;

use crate::error::GraphError;

/// A directed edge `(tail, head)`.
pub type Edge = (usize, usize);

/// A simple digraph on vertices `0..vertex_count`.
///
/// Edges are kept sorted and unique; self-loops and parallel edges are
/// outside the model and rejected on construction. Vertex identifiers carry
/// no meaning by themselves: a watermark uses its canonical labels, a
/// damaged graph may use any permutation of them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

/// The graph a recovery pipeline receives: an unlabeled digraph suspected to
/// be a watermark with a few edges removed or inserted.
pub type DamagedGraph = Digraph;

impl Digraph {
    pub fn new(vertex_count: usize, mut edges: Vec<Edge>) -> Result<Self, GraphError> {
        for &(u, v) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::VertexOutOfRange { u, v, vertex_count });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::ParallelEdge(w[0].0, w[0].1));
        }
        Ok(Self { vertex_count, edges })
    }

    /// Builds a graph from edges already known to be valid, sorted and unique.
    pub(crate) fn from_sorted_unchecked(vertex_count: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Self { vertex_count, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// `n` such that `vertex_count = 2n + 3`, if the vertex count has that shape.
    pub fn key_size(&self) -> Option<usize> {
        if self.vertex_count >= 5 && self.vertex_count % 2 == 1 {
            Some((self.vertex_count - 3) / 2)
        } else {
            None
        }
    }

    /// Renames every vertex `v` to `sigma[v]`. `sigma` must be a permutation.
    pub fn relabel(&self, sigma: &[usize]) -> Digraph {
        assert_eq!(sigma.len(), self.vertex_count, "relabeling has wrong length");
        let mut edges: Vec<Edge> = self.edges.iter().map(|&(u, v)| (sigma[u], sigma[v])).collect();
        edges.sort_unstable();
        Self::from_sorted_unchecked(self.vertex_count, edges)
    }

    pub fn without_edges(&self, removed: &[Edge]) -> Digraph {
        let edges = self.edges.iter().copied().filter(|e| !removed.contains(e)).collect();
        Self::from_sorted_unchecked(self.vertex_count, edges)
    }

    /// Adds edges; the caller guarantees they are new, in range and loop-free.
    pub fn with_edges(&self, added: &[Edge]) -> Digraph {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(added);
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted_unchecked(self.vertex_count, edges)
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(u, _) in &self.edges {
            deg[u] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::new(self)
    }

    /// Serializes to the `wmgraph v1` text format. The header stores `n` with
    /// `vertex_count = 2n + 3`.
    pub fn to_text(&self) -> String {
        let n = self.key_size().unwrap_or(0);
        let mut out = String::with_capacity(16 + self.edges.len() * 8);
        let _ = writeln!(out, "wmgraph v1 n={n}");
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the `wmgraph v1` text format. Blank lines and lines starting
    /// with `#` are ignored.
    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or(GraphError::MissingHeader)?;
        let n = header
            .strip_prefix("wmgraph v1 n=")
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(|| GraphError::BadHeader(header.to_string()))?;
        let vertex_count = 2 * n + 3;
        let mut edges = Vec::new();
        for (line_no, line) in lines {
            let mut parts = line.split_whitespace();
            let parse = |s: Option<&str>| s.and_then(|t| t.parse::<usize>().ok());
            match (parse(parts.next()), parse(parts.next()), parts.next()) {
                (Some(u), Some(v), None) => edges.push((u, v)),
                _ => {
                    return Err(GraphError::BadLine { line: line_no, content: line.to_string() })
                }
            }
        }
        Self::new(vertex_count, edges)
    }
}

/// Compressed in/out adjacency of a [`Digraph`]; neighbor lists are ascending.
#[derive(Debug, Clone)]
pub struct Adjacency {
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
}

impl Adjacency {
    fn new(g: &Digraph) -> Self {
        let n = g.vertex_count;
        let mut out_offsets = vec![0; n + 1];
        let mut in_offsets = vec![0; n + 1];
        for &(u, v) in &g.edges {
            out_offsets[u + 1] += 1;
            in_offsets[v + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        let out_targets = g.edges.iter().map(|&(_, v)| v).collect();
        let mut in_sources = vec![0; g.edges.len()];
        let mut cursor = in_offsets.clone();
        // Edges are sorted by tail, so every in-list comes out ascending.
        for &(u, v) in &g.edges {
            in_sources[cursor[v]] = u;
            cursor[v] += 1;
        }
        Self { out_offsets, out_targets, in_offsets, in_sources }
    }

    pub fn vertex_count(&self) -> usize {
        self.out_offsets.len() - 1
    }

    pub fn out(&self, v: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    pub fn inn(&self, v: usize) -> &[usize] {
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }
}

/// DOT rendering of a canonically labeled watermark-shaped graph. Edges of
/// the form `(u, u-1)` are drawn as the Hamiltonian spine; every other edge
/// is drawn dashed as a tree edge.
pub fn to_dot(g: &Digraph) -> String {
    let mut out = String::from("digraph watermark {\n  rankdir=LR;\n  node [shape=circle];\n");
    for v in (0..g.vertex_count()).rev() {
        let _ = writeln!(out, "  {v};");
    }
    for &(u, v) in g.edges() {
        if v + 1 == u {
            let _ = writeln!(out, "  {u} -> {v} [weight=10];");
        } else {
            let _ = writeln!(out, "  {u} -> {v} [style=dashed, color=blue, constraint=false];");
        }
    }
    out.push_str("}\n");
    out
}
