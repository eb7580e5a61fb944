//! Key-to-watermark encoding and the two watermark-to-key decoders.
//!
//! Sequences follow the 1-based convention of the construction: `get(i)`
//! accessors take indices starting at 1, and every stored element is a
//! 1-based label. Internally the storage is an ordinary `Vec`.

use crate::error::{CodecError, Rejection};
use crate::graph::{Digraph, Edge};
use crate::recognition;
use crate::tree::RepresentativeTree;

/// A positive integer key together with its binary statistics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Key {
    omega: u64,
    bits: Vec<u8>,
    n0: usize,
    n1: usize,
    f0: Option<usize>,
}

impl Key {
    pub fn new(omega: u64) -> Result<Self, CodecError> {
        if omega == 0 {
            return Err(CodecError::NonPositiveKey);
        }
        let n = 64 - omega.leading_zeros() as usize;
        let bits: Vec<u8> = (0..n).rev().map(|s| ((omega >> s) & 1) as u8).collect();
        let n1 = bits.iter().filter(|&&b| b == 1).count();
        let f0 = bits.iter().position(|&b| b == 0).map(|i| i + 1);
        Ok(Self { omega, bits, n0: n - n1, n1, f0 })
    }

    pub fn omega(&self) -> u64 {
        self.omega
    }

    /// Bit length of the key.
    pub fn n(&self) -> usize {
        self.bits.len()
    }

    /// Binary digits, most significant first.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// The `i`-th binary digit, 1-based.
    pub fn bit(&self, i: usize) -> u8 {
        self.bits[i - 1]
    }

    pub fn zeros(&self) -> usize {
        self.n0
    }

    pub fn ones(&self) -> usize {
        self.n1
    }

    /// 1-based index of the leftmost zero digit; `None` when every digit is one.
    pub fn first_zero(&self) -> Option<usize> {
        self.f0
    }

    pub fn extended_binary(&self) -> ExtendedBinary {
        let n = self.n();
        let mut digits = Vec::with_capacity(2 * n + 1);
        digits.extend(std::iter::repeat(1).take(n));
        digits.extend(self.bits.iter().map(|b| 1 - b));
        digits.push(0);
        let z0 = (1..=digits.len()).filter(|&i| digits[i - 1] == 0).collect();
        let z1 = (1..=digits.len()).filter(|&i| digits[i - 1] == 1).collect();
        ExtendedBinary { digits, z0, z1 }
    }

    /// Runs the full encoding pipeline.
    pub fn watermark(&self) -> Watermark {
        self.extended_binary().bitonic_permutation().self_inverting().watermark()
    }
}

/// `n` ones, the one's complement of the key, then a single zero; with the
/// ascending index lists of its zeros and ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedBinary {
    digits: Vec<u8>,
    z0: Vec<usize>,
    z1: Vec<usize>,
}

impl ExtendedBinary {
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn zero_indices(&self) -> &[usize] {
        &self.z0
    }

    pub fn one_indices(&self) -> &[usize] {
        &self.z1
    }

    pub fn bitonic_permutation(&self) -> BitonicPermutation {
        let elems = self.z0.iter().chain(self.z1.iter().rev()).copied().collect();
        BitonicPermutation { elems }
    }
}

/// Zero indices ascending followed by one indices descending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitonicPermutation {
    elems: Vec<usize>,
}

impl BitonicPermutation {
    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> usize {
        self.elems[i - 1]
    }

    pub fn n(&self) -> usize {
        (self.elems.len() - 1) / 2
    }

    /// Pairs the elements equidistant from both ends into 2-cycles; the
    /// central element becomes the single fixed point.
    pub fn self_inverting(&self) -> SelfInvertingPermutation {
        let len = self.elems.len();
        let mut elems = vec![0; len];
        for i in 0..len {
            let (p, q) = (self.elems[i], self.elems[len - 1 - i]);
            elems[p - 1] = q;
        }
        let fixed = self.elems[len / 2];
        SelfInvertingPermutation { elems, fixed }
    }
}

/// A permutation `S` with `S[S[i]] = i` and exactly one fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfInvertingPermutation {
    elems: Vec<usize>,
    fixed: usize,
}

impl SelfInvertingPermutation {
    /// Accepts any self-inverting permutation of `1..=len` with a single
    /// fixed point. Canonicity is a separate check, see
    /// [`recognition::is_canonical_sip`].
    pub fn from_elems(elems: Vec<usize>) -> Option<Self> {
        let len = elems.len();
        let mut fixed = None;
        for (i, &s) in elems.iter().enumerate() {
            if s == 0 || s > len || elems[s - 1] != i + 1 {
                return None;
            }
            if s == i + 1 {
                if fixed.is_some() {
                    return None;
                }
                fixed = Some(s);
            }
        }
        fixed.map(|fixed| Self { elems, fixed })
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> usize {
        self.elems[i - 1]
    }

    pub fn fixed(&self) -> usize {
        self.fixed
    }

    pub fn n(&self) -> usize {
        (self.elems.len() - 1) / 2
    }

    /// Builds the watermark: each `u` gets a tree edge to the nearest
    /// element before it in the permutation that is larger than `u`, or to
    /// the root `2n + 2` when there is none.
    pub fn watermark(&self) -> Watermark {
        let n = self.n();
        let root = 2 * n + 2;
        let mut parent = vec![0; 2 * n + 1];
        let mut stack: Vec<usize> = Vec::with_capacity(self.elems.len());
        for &u in &self.elems {
            while stack.last().is_some_and(|&top| top < u) {
                stack.pop();
            }
            parent[u - 1] = stack.last().copied().unwrap_or(root);
            stack.push(u);
        }
        let tree_edges = parent.iter().enumerate().map(|(i, &q)| (i + 1, q)).collect();
        Watermark { n, tree_edges }
    }
}

/// A canonically labeled watermark on vertices `0..=2n+2`.
///
/// Path edges `(u, u-1)` are implicit; tree edges are stored as
/// `tree_edges[u-1] = (u, q(u))` for `u = 1..=2n+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Watermark {
    n: usize,
    tree_edges: Vec<Edge>,
}

impl Watermark {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n + 3
    }

    pub fn root(&self) -> usize {
        2 * self.n + 2
    }

    pub fn path_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (1..=self.root()).map(|u| (u, u - 1))
    }

    pub fn tree_edges(&self) -> &[Edge] {
        &self.tree_edges
    }

    /// Tree parent `q(u)` of `u` in `1..=2n+1`.
    pub fn tree_parent(&self, u: usize) -> usize {
        self.tree_edges[u - 1].1
    }

    /// All `4n + 3` edges, ascending.
    pub fn edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = self.path_edges().chain(self.tree_edges.iter().copied()).collect();
        edges.sort_unstable();
        edges
    }

    pub fn to_digraph(&self) -> Digraph {
        Digraph::from_sorted_unchecked(self.vertex_count(), self.edges())
    }

    pub fn representative_tree(&self) -> RepresentativeTree {
        let mut parent = vec![None; self.root() + 1];
        for &(u, q) in &self.tree_edges {
            parent[u] = Some(q);
        }
        RepresentativeTree::from_parents(self.n, parent)
            .expect("tree edges of a watermark always point upward")
    }

    /// The watermark whose representative tree is `tree`.
    pub fn from_tree(tree: &RepresentativeTree) -> Self {
        let n = tree.n();
        let tree_edges = (1..=2 * n + 1)
            .map(|u| (u, tree.parent(u).expect("non-root vertices have parents")))
            .collect();
        Self { n, tree_edges }
    }

    pub fn key_fast(&self) -> u64 {
        decode_fast(&self.to_digraph()).expect("watermarks decode")
    }
}

/// Encodes `omega` as its canonical reducible permutation graph.
pub fn encode(omega: u64) -> Result<Watermark, CodecError> {
    Ok(Key::new(omega)?.watermark())
}

/// Reads the key off the in-neighborhood of the root of a canonically
/// labeled watermark: every tree edge `(x, 2n+2)` with `x != 2n+1`
/// contributes `2^(2n-x)`.
///
/// One pass over the edge list, no allocation. The input must carry
/// canonical labels; use [`recognition::recognize`] first for graphs of
/// unknown labeling.
pub fn decode_fast(g: &Digraph) -> Result<u64, CodecError> {
    let n = g.key_size().ok_or(CodecError::VertexCount(g.vertex_count()))?;
    let expected = 4 * n + 3;
    if g.edge_count() != expected {
        return Err(CodecError::EdgeCount { n, expected, found: g.edge_count() });
    }
    if n > 64 {
        return Err(CodecError::Malformed(format!("n = {n} exceeds 64-bit keys")));
    }
    let root = 2 * n + 2;
    let mut omega: u64 = 0;
    let mut leading = false;
    for &(u, v) in g.edges() {
        if v + 1 == u {
            continue;
        }
        if v < u {
            return Err(CodecError::Malformed(format!("edge ({u}, {v}) points downward")));
        }
        if v == root && u != root - 1 {
            if u <= n {
                return Err(CodecError::Malformed(format!("small vertex {u} is a child of the root")));
            }
            omega |= 1u64 << (2 * n - u);
            leading |= u == n + 1;
        }
    }
    if !leading {
        return Err(CodecError::Malformed(format!("vertex {} is not a child of the root", n + 1)));
    }
    Ok(omega)
}

/// Decodes by reconstructing the self-inverting permutation and inverting
/// the encoding pipeline step by step. Independent of [`decode_fast`]; the
/// input may carry arbitrary vertex identifiers.
pub fn decode_via_permutation(g: &Digraph) -> Result<u64, CodecError> {
    let labeling = recognition::check_self_labeling(g)?;
    let labeled = g.relabel(&labeling.sigma);
    let tree = recognition::extract_representative_tree(&labeled)?;
    let traversal = tree.root_free_preorder();
    if !recognition::is_canonical_sip(&traversal) {
        return Err(Rejection::NotCanonical("preorder is not a canonical SIP".into()).into());
    }
    let sip = SelfInvertingPermutation::from_elems(traversal)
        .ok_or_else(|| CodecError::Malformed("preorder is not self-inverting".into()))?;
    let n = sip.n();
    let len = 2 * n + 1;

    // Each 2-cycle holds one small and one large element; the small element
    // y sits at position len + 1 - y of the bitonic permutation, its partner
    // at position y. The fixed element takes the centre.
    let mut bitonic = vec![0; len];
    bitonic[n] = sip.fixed();
    for y in 1..=n {
        let x = sip.get(y);
        bitonic[y - 1] = x;
        bitonic[len - y] = y;
    }

    let ascending = 1 + bitonic.windows(2).take_while(|w| w[0] < w[1]).count();
    let mut digits = vec![1u8; len];
    for &z in &bitonic[..ascending] {
        digits[z - 1] = 0;
    }
    if digits[..n].iter().any(|&d| d != 1) || digits[len - 1] != 0 {
        return Err(CodecError::Malformed("extended binary has the wrong frame".into()));
    }
    let bits: Vec<u8> = digits[n..2 * n].iter().map(|d| 1 - d).collect();
    if bits[0] != 1 || n > 64 {
        return Err(CodecError::Malformed("recovered binary has a leading zero".into()));
    }
    Ok(bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
}
