//! Rebuilding the Hamiltonian path of a watermark that lost up to two
//! edges, by sewing together the maximal backward walks that survive.

use std::fmt;

use crate::graph::{Adjacency, Digraph, Edge};

/// The shape of the surviving path, by the number of out-degree-0
/// vertices and the number of segments the path was cut into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Path intact: every missing edge is a tree edge.
    A,
    /// One sink, two segments: one path edge and one tree edge missing.
    BC,
    /// One sink, three segments: two path edges missing.
    D,
    /// Two sinks, two segments: one path edge and one tree edge missing
    /// (or the root lost its only edge).
    EF,
    /// Two sinks, three segments: two path edges missing.
    GH,
}

impl Scenario {
    fn classify(sinks: usize, segments: usize) -> Option<Self> {
        match (sinks, segments) {
            (_, 1) => Some(Self::A),
            (1, 2) => Some(Self::BC),
            (1, 3) => Some(Self::D),
            (_, 2) => Some(Self::EF),
            (_, 3) => Some(Self::GH),
            _ => None,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::A => "a",
            Self::BC => "b/c",
            Self::D => "d",
            Self::EF => "e/f",
            Self::GH => "g/h",
        })
    }
}

/// One way of sewing the surviving segments into a full path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathReconstruction {
    /// Vertex identifiers in path order, root first, sink last.
    pub path: Vec<usize>,
    /// `sigma[v]` is the label of vertex `v` (its distance to the sink).
    pub sigma: Vec<usize>,
    /// Missing path edges, in labels.
    pub missing_path_edges: Vec<Edge>,
    pub scenario: Scenario,
}

impl PathReconstruction {
    pub fn segments(&self) -> usize {
        self.missing_path_edges.len() + 1
    }
}

/// All ways to cover the vertex set by at most `max_cuts + 1` backward
/// walks, lowest segment first.
///
/// Each segment starts at a vertex of out-degree 0 or 1 (the sink, or a
/// vertex whose path edge is gone) and extends through the unique
/// unvisited in-neighbor until none is left. Under the true ordering the
/// choice is always forced; a walk that meets two unvisited in-neighbors
/// is discarded. Several reconstructions may be returned, callers are
/// expected to validate them.
pub fn reconstruct_hamiltonian(g: &Digraph, max_cuts: usize) -> Vec<PathReconstruction> {
    let adj = g.adjacency();
    let vc = g.vertex_count();
    let outdeg: Vec<usize> = (0..vc).map(|v| adj.out(v).len()).collect();
    let sinks: Vec<usize> = (0..vc).filter(|&v| outdeg[v] == 0).collect();
    let ends: Vec<usize> = (0..vc).filter(|&v| outdeg[v] <= 1).collect();

    let mut found = Vec::new();
    let mut visited = vec![false; vc];
    let mut order = Vec::with_capacity(vc);
    let mut cuts = Vec::new();
    for &s in &sinks {
        search(&adj, &ends, s, max_cuts, &mut visited, &mut order, &mut cuts, &mut |order, cuts| {
            let mut sigma = vec![0; vc];
            for (label, &v) in order.iter().enumerate() {
                sigma[v] = label;
            }
            let Some(scenario) = Scenario::classify(sinks.len(), cuts.len() + 1) else { return };
            found.push(PathReconstruction {
                path: order.iter().rev().copied().collect(),
                sigma,
                missing_path_edges: cuts.iter().map(|&c| (c, c - 1)).collect(),
                scenario,
            });
        });
    }
    found
}

#[allow(clippy::too_many_arguments)]
fn search(
    adj: &Adjacency,
    ends: &[usize],
    start: usize,
    cuts_left: usize,
    visited: &mut Vec<bool>,
    order: &mut Vec<usize>,
    cuts: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize], &[usize]),
) {
    let before = order.len();
    if walk(adj, start, visited, order) {
        if order.len() == visited.len() {
            emit(order, cuts);
        } else if cuts_left > 0 {
            cuts.push(order.len());
            for &e in ends {
                if !visited[e] {
                    search(adj, ends, e, cuts_left - 1, visited, order, cuts, emit);
                }
            }
            cuts.pop();
        }
    }
    for &v in &order[before..] {
        visited[v] = false;
    }
    order.truncate(before);
}

/// Backward walk from `start`; false when some step is ambiguous.
fn walk(adj: &Adjacency, start: usize, visited: &mut [bool], order: &mut Vec<usize>) -> bool {
    visited[start] = true;
    order.push(start);
    let mut cur = start;
    loop {
        let mut unvisited = adj.inn(cur).iter().filter(|&&p| !visited[p]);
        match (unvisited.next(), unvisited.next()) {
            (None, _) => return true,
            (Some(_), Some(_)) => return false,
            (Some(&p), None) => {
                visited[p] = true;
                order.push(p);
                cur = p;
            }
        }
    }
}
