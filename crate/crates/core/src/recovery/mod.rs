//! Detecting and undoing small edge modifications of a watermark.

pub mod forest;
pub mod hamiltonian;
pub mod insertion;

use std::fmt::Write as _;

use crate::codec::{decode_fast, encode, Watermark};
use crate::error::RecoveryError;
use crate::graph::{Digraph, Edge};
use crate::recognition::recognize;

pub use forest::{
    ascending_set, find_fixed_vertex, find_fixed_vertex_type1, rebuild_preorder, restore_tree, Forest,
};
pub use hamiltonian::{reconstruct_hamiltonian, PathReconstruction, Scenario};
pub use insertion::{recover_insertions, recover_insertions_or_mixed, recover_mixed};

/// Largest edge-count change that is still reported as an attack.
pub const DETECTABLE: i64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DamageClass {
    Undamaged,
    Removals(usize),
    Insertions(usize),
    /// Right edge count but not a watermark: one removal plus one insertion.
    MixedSuspected,
    OutOfContract,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DamageReport {
    pub n: usize,
    /// `|E| - (4n+3)`.
    pub k: i64,
    pub class: DamageClass,
    pub removed_path_edges: Option<usize>,
    pub removed_tree_edges: Option<usize>,
    pub scenario: Option<Scenario>,
    pub recoverable: bool,
}

impl DamageReport {
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        let class = match self.class {
            DamageClass::Undamaged => "undamaged".to_string(),
            DamageClass::Removals(r) => format!("removals {r}"),
            DamageClass::Insertions(i) => format!("insertions {i}"),
            DamageClass::MixedSuspected => "mixed".to_string(),
            DamageClass::OutOfContract => "out-of-contract".to_string(),
        };
        let _ = writeln!(out, "n {}\nk {}\nclass {class}", self.n, self.k);
        if let Some(s) = self.scenario {
            let _ = writeln!(out, "scenario {s}");
        }
        if let (Some(p), Some(t)) = (self.removed_path_edges, self.removed_tree_edges) {
            let _ = writeln!(out, "path_edges {p}\ntree_edges {t}");
        }
        let _ = writeln!(out, "recoverable {}", self.recoverable);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryResult {
    pub watermark: Watermark,
    pub key: u64,
    /// `labeling[v]` is the canonical label of input vertex `v`.
    pub labeling: Vec<usize>,
    /// Edges put back, in input identifiers.
    pub restored_edges: Vec<Edge>,
    /// Edges dropped as insertions, in input identifiers.
    pub discarded_edges: Vec<Edge>,
    pub scenario: Option<Scenario>,
    /// Every key whose watermark explains the damage, ascending. More than
    /// one means `key` is not authoritative.
    pub alternatives: Vec<u64>,
}

impl RecoveryResult {
    pub fn ambiguous(&self) -> bool {
        self.alternatives.len() > 1
    }

    pub fn removed_path_edges(&self) -> usize {
        self.restored_labeled().filter(|&(u, v)| v + 1 == u).count()
    }

    pub fn removed_tree_edges(&self) -> usize {
        self.restored_labeled().filter(|&(u, v)| v > u).count()
    }

    fn restored_labeled(&self) -> impl Iterator<Item = Edge> + '_ {
        self.restored_edges.iter().map(|&(u, v)| (self.labeling[u], self.labeling[v]))
    }

    pub fn to_record(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "key {}", self.key);
        if let Some(s) = self.scenario {
            let _ = writeln!(out, "scenario {s}");
        }
        for (u, v) in &self.restored_edges {
            let _ = writeln!(out, "restored {u} {v}");
        }
        for (u, v) in &self.discarded_edges {
            let _ = writeln!(out, "discarded {u} {v}");
        }
        let alts: Vec<String> = self.alternatives.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "ambiguous {}\nalternatives {}", self.ambiguous(), alts.join(" "));
        out
    }
}

pub(crate) fn check_size(g: &Digraph, n: usize) -> Result<(), RecoveryError> {
    let expected = 2 * n + 3;
    if n == 0 || g.vertex_count() != expected {
        return Err(RecoveryError::SizeMismatch { n, expected, found: g.vertex_count() });
    }
    Ok(())
}

pub(crate) fn delta(g: &Digraph, n: usize) -> i64 {
    g.edge_count() as i64 - (4 * n + 3) as i64
}

/// Classifies the damage by edge count, and for removals also by which
/// edges went missing.
pub fn detect(g: &Digraph, n: usize) -> Result<DamageReport, RecoveryError> {
    check_size(g, n)?;
    let k = delta(g, n);
    let mut report = DamageReport {
        n,
        k,
        class: DamageClass::OutOfContract,
        removed_path_edges: None,
        removed_tree_edges: None,
        scenario: None,
        recoverable: false,
    };
    match k {
        0 if recognize(g).is_ok() => {
            report.class = DamageClass::Undamaged;
            report.recoverable = true;
        }
        0 => {
            report.class = DamageClass::MixedSuspected;
            report.recoverable = true;
        }
        -2..=-1 => {
            report.class = DamageClass::Removals(k.unsigned_abs() as usize);
            report.recoverable = true;
            if let Ok(r) = recover_removals(g, n) {
                report.removed_path_edges = Some(r.removed_path_edges());
                report.removed_tree_edges = Some(r.removed_tree_edges());
                report.scenario = r.scenario;
            }
        }
        1..=2 => {
            report.class = DamageClass::Insertions(k as usize);
            report.recoverable = true;
        }
        k if k.abs() <= DETECTABLE => {
            report.class = if k < 0 {
                DamageClass::Removals(k.unsigned_abs() as usize)
            } else {
                DamageClass::Insertions(k as usize)
            };
        }
        _ => {}
    }
    Ok(report)
}

/// Restores the watermark behind `g` for every damage class with a
/// recovery guarantee: up to two removals, up to two insertions, or one
/// of each.
pub fn recover(g: &Digraph, n: usize) -> Result<RecoveryResult, RecoveryError> {
    check_size(g, n)?;
    match delta(g, n) {
        -2..=-1 => recover_removals(g, n),
        0 => match undamaged(g) {
            Some(r) => Ok(r),
            None => recover_mixed(g, n),
        },
        1..=2 => recover_insertions(g, n),
        k => Err(RecoveryError::OutOfContract(k)),
    }
}

fn undamaged(g: &Digraph) -> Option<RecoveryResult> {
    let rec = recognize(g).ok()?;
    let sigma = rec.labeling.sigma;
    let key = decode_fast(&g.relabel(&sigma)).ok()?;
    Some(RecoveryResult {
        watermark: encode(key).ok()?,
        key,
        labeling: sigma,
        restored_edges: Vec::new(),
        discarded_edges: Vec::new(),
        scenario: None,
        alternatives: vec![key],
    })
}

/// Splits a labeled graph into path and tree edges; `None` when some edge
/// fits neither role or a vertex has two tree edges.
fn forest_of(labeled: &Digraph, n: usize) -> Option<Forest> {
    let mut parent = vec![None; 2 * n + 3];
    for &(u, v) in labeled.edges() {
        if u == v + 1 {
            continue;
        }
        if v < u || u == 0 || parent[u].replace(v).is_some() {
            return None;
        }
    }
    Forest::new(n, parent).ok()
}

/// Candidate watermarks for a labeled damaged graph.
fn candidate_watermarks(labeled: &Digraph, n: usize) -> Vec<Watermark> {
    if n <= 2 {
        // Too small for the structural argument: every key is tried.
        return (1u64 << (n - 1)..1u64 << n).filter_map(|w| encode(w).ok()).collect();
    }
    forest_of(labeled, n)
        .and_then(|f| restore_tree(&f).ok())
        .map(|t| Watermark::from_tree(&t))
        .into_iter()
        .collect()
}

/// True when `labeled` is `w` minus exactly `k` edges.
fn explains(w: &Watermark, labeled: &Digraph, k: usize) -> bool {
    let full = w.to_digraph();
    full.edge_count() == labeled.edge_count() + k && labeled.edges().iter().all(|&e| full.contains_edge(e))
}

/// Restores a watermark that lost one or two edges. Vertex identifiers
/// of `g` are arbitrary.
pub fn recover_removals(g: &Digraph, n: usize) -> Result<RecoveryResult, RecoveryError> {
    check_size(g, n)?;
    let k = match delta(g, n) {
        0 => return undamaged(g).ok_or(RecoveryError::NotRecoverable(0)),
        d @ -2..=-1 => d.unsigned_abs() as usize,
        d => return Err(RecoveryError::OutOfContract(d)),
    };

    let mut found: Vec<RecoveryResult> = Vec::new();
    for rec in reconstruct_hamiltonian(g, k) {
        let labeled = g.relabel(&rec.sigma);
        for w in candidate_watermarks(&labeled, n) {
            if !explains(&w, &labeled, k) {
                continue;
            }
            // A tree rebuilt under a wrong labeling need not be canonical.
            let Ok(key) = decode_fast(&w.to_digraph()) else { continue };
            if encode(key).as_ref() != Ok(&w) {
                continue;
            }
            if found.iter().any(|r| r.key == key) {
                continue;
            }
            let mut inv = vec![0; rec.sigma.len()];
            for (v, &l) in rec.sigma.iter().enumerate() {
                inv[l] = v;
            }
            let restored_edges =
                w.edges().into_iter().filter(|&e| !labeled.contains_edge(e)).map(|(a, b)| (inv[a], inv[b])).collect();
            found.push(RecoveryResult {
                watermark: w,
                key,
                labeling: rec.sigma.clone(),
                restored_edges,
                discarded_edges: Vec::new(),
                scenario: Some(rec.scenario),
                alternatives: Vec::new(),
            });
        }
    }
    merge(found, k)
}

/// Picks the explanation with the smallest key and records all keys.
pub(crate) fn merge(mut found: Vec<RecoveryResult>, k: usize) -> Result<RecoveryResult, RecoveryError> {
    found.sort_by_key(|r| r.key);
    found.dedup_by_key(|r| r.key);
    let keys: Vec<u64> = found.iter().map(|r| r.key).collect();
    let mut best = found.into_iter().next().ok_or(RecoveryError::NotRecoverable(k))?;
    best.alternatives = keys;
    Ok(best)
}
