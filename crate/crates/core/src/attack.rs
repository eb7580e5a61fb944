//! Distortive attacks: edge removals and insertions against a labeled
//! graph, exhaustive enumeration of attack spaces and seeded sampling.

use std::fmt;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::AttackError;
use crate::graph::{Digraph, Edge};

/// Largest attack magnitude the toolkit reasons about.
pub const MAX_MAGNITUDE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttackKind {
    Removals,
    Insertions,
    /// At least one removal and at least one insertion.
    Mixed,
}

impl std::str::FromStr for AttackKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "removals" | "remove" => Ok(Self::Removals),
            "insertions" | "insert" => Ok(Self::Insertions),
            "mixed" => Ok(Self::Mixed),
            other => Err(format!("unknown attack kind `{other}`")),
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Removals => "removals",
            Self::Insertions => "insertions",
            Self::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AttackSpec {
    pub removals: Vec<Edge>,
    pub insertions: Vec<Edge>,
    /// Seed of the vertex relabeling applied to the damaged graph.
    pub seed: Option<u64>,
}

impl AttackSpec {
    pub fn removing(edges: &[Edge]) -> Self {
        Self { removals: edges.to_vec(), ..Self::default() }
    }

    pub fn inserting(edges: &[Edge]) -> Self {
        Self { insertions: edges.to_vec(), ..Self::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn magnitude(&self) -> usize {
        self.removals.len() + self.insertions.len()
    }

    pub fn validate(&self, g: &Digraph) -> Result<(), AttackError> {
        let vc = g.vertex_count();
        let all = self.removals.iter().chain(&self.insertions);
        for &(u, v) in all.clone() {
            if u >= vc || v >= vc {
                return Err(AttackError::OutOfRange(u, v));
            }
        }
        if let Some(&(u, v)) = all.duplicates().next() {
            return Err(AttackError::Duplicate(u, v));
        }
        if let Some(&(u, v)) = self.removals.iter().find(|&&e| !g.contains_edge(e)) {
            return Err(AttackError::RemovalNotPresent(u, v));
        }
        if let Some(&(u, _)) = self.insertions.iter().find(|&&(u, v)| u == v) {
            return Err(AttackError::SelfLoop(u));
        }
        if let Some(&(u, v)) = self.insertions.iter().find(|&&e| g.contains_edge(e)) {
            return Err(AttackError::InsertionPresent(u, v));
        }
        Ok(())
    }

    /// Parses `remove u v` / `insert u v` lines; an optional `seed S` line
    /// sets the relabeling seed. `#` starts a comment line.
    pub fn from_text(text: &str) -> Result<Self, AttackError> {
        let mut spec = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || AttackError::BadLine { line: i + 1, content: line.to_string() };
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<u64>().map_err(|_| bad());
            match parts.as_slice() {
                ["remove", u, v] => spec.removals.push((num(u)? as usize, num(v)? as usize)),
                ["insert", u, v] => spec.insertions.push((num(u)? as usize, num(v)? as usize)),
                ["seed", s] => spec.seed = Some(num(s)?),
                _ => return Err(bad()),
            }
        }
        Ok(spec)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed {seed}\n"));
        }
        for (u, v) in &self.removals {
            out.push_str(&format!("remove {u} {v}\n"));
        }
        for (u, v) in &self.insertions {
            out.push_str(&format!("insert {u} {v}\n"));
        }
        out
    }
}

/// A damaged graph together with the relabeling that produced it:
/// `relabeling[v]` is the identifier given to original vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attacked {
    pub graph: Digraph,
    pub relabeling: Vec<usize>,
}

/// Applies `spec` to `g`. With `shuffle`, vertex identifiers are permuted
/// by a permutation drawn from the spec's seed (0 when unset), so the
/// result carries no trace of the original labels.
pub fn apply_attack(g: &Digraph, spec: &AttackSpec, shuffle: bool) -> Result<Attacked, AttackError> {
    spec.validate(g)?;
    let damaged = g.without_edges(&spec.removals).with_edges(&spec.insertions);
    let vc = g.vertex_count();
    let mut relabeling: Vec<usize> = (0..vc).collect();
    if shuffle {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.unwrap_or(0));
        relabeling.shuffle(&mut rng);
    }
    let graph = if shuffle { damaged.relabel(&relabeling) } else { damaged };
    Ok(Attacked { graph, relabeling })
}

fn non_edges(g: &Digraph) -> Vec<Edge> {
    let vc = g.vertex_count();
    (0..vc)
        .flat_map(|u| (0..vc).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && !g.contains_edge((u, v)))
        .collect()
}

/// (removals, insertions) splits of magnitude `k` for `kind`.
fn splits(k: usize, kind: AttackKind) -> Vec<(usize, usize)> {
    match kind {
        _ if k == 0 => vec![(0, 0)],
        AttackKind::Removals => vec![(k, 0)],
        AttackKind::Insertions => vec![(0, k)],
        AttackKind::Mixed => (1..k).map(|r| (r, k - r)).collect(),
    }
}

/// Every attack of the given kind and magnitude, exactly once, in a
/// deterministic order (lexicographic over sorted edge lists).
pub fn enumerate_attacks(
    g: &Digraph,
    k: usize,
    kind: AttackKind,
) -> Result<impl Iterator<Item = AttackSpec>, AttackError> {
    if k > MAX_MAGNITUDE {
        return Err(AttackError::TooLarge(k));
    }
    let present = g.edges().to_vec();
    let absent = if matches!(kind, AttackKind::Removals) { Vec::new() } else { non_edges(g) };
    Ok(splits(k, kind).into_iter().flat_map(move |(r, i)| {
        let absent = absent.clone();
        present.clone().into_iter().combinations(r).flat_map(move |removals| {
            absent.clone().into_iter().combinations(i).map(move |insertions| AttackSpec {
                removals: removals.clone(),
                insertions,
                seed: None,
            })
        })
    }))
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of attacks [`enumerate_attacks`] yields.
pub fn attack_space_size(g: &Digraph, k: usize, kind: AttackKind) -> u128 {
    let e = g.edge_count();
    let vc = g.vertex_count();
    let ne = vc * vc.saturating_sub(1) - e;
    splits(k, kind).iter().map(|&(r, i)| (binomial(e, r) * binomial(ne, i)).round() as u128).sum()
}

/// One attack drawn uniformly from the [`enumerate_attacks`] space; the
/// same seed always yields the same spec. The seed is recorded in the spec.
pub fn random_attack(g: &Digraph, k: usize, kind: AttackKind, seed: u64) -> Result<AttackSpec, AttackError> {
    if k > MAX_MAGNITUDE {
        return Err(AttackError::TooLarge(k));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let present = g.edges();
    let absent = if matches!(kind, AttackKind::Removals) { Vec::new() } else { non_edges(g) };
    let options = splits(k, kind);
    let weights: Vec<f64> = options
        .iter()
        .map(|&(r, i)| binomial(present.len(), r) * binomial(absent.len(), i))
        .collect();
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return Err(AttackError::EmptySpace);
    }
    let mut pick = rng.gen::<f64>() * total;
    let mut chosen = options[options.len() - 1];
    for (&opt, &w) in options.iter().zip(&weights) {
        if pick < w {
            chosen = opt;
            break;
        }
        pick -= w;
    }
    let (r, i) = chosen;
    let mut removals: Vec<Edge> = sample(&mut rng, present.len(), r).into_iter().map(|j| present[j]).collect();
    let mut insertions: Vec<Edge> = sample(&mut rng, absent.len(), i).into_iter().map(|j| absent[j]).collect();
    removals.sort_unstable();
    insertions.sort_unstable();
    Ok(AttackSpec { removals, insertions, seed: Some(seed) })
}
