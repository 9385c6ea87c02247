//! Small-graph kernel: bitset adjacency, graph6/edge-list I/O, exact
//! independence number, subgraph search, joins, and a canonical form.
//!
//! Adjacency is stored as one bitset row per vertex. Rows are blocked in
//! 64-bit words, so graphs up to 64 vertices get single-word rows and larger
//! hosts (the embedding pipeline works around n = 100) transparently use the
//! same interface with multi-word rows.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::comb::Combinations;
use crate::seq::GraphicSequence;

/// Hard capacity for any graph handled by the crate.
pub const MAX_ORDER: usize = 1024;

const WORD_BITS: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph order {0} exceeds capacity {MAX_ORDER}")]
    TooLarge(usize),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("subgraph enumeration is capped at 10 vertices (pattern has {0})")]
    OrderTooLarge(usize),
}

fn parse_err(offset: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        offset,
        message: message.into(),
    }
}

/// An injective vertex map from a pattern into a host, carrying every
/// pattern edge to a host edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding(pub Vec<usize>);

/// Labeled simple graph with per-vertex neighbor bitmasks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl SmallGraph {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n > MAX_ORDER {
            return Err(GraphError::TooLarge(n));
        }
        let words = words_for(n).max(1);
        Ok(SmallGraph {
            n,
            words,
            bits: vec![0u64; n * words],
        })
    }

    /// Builds a graph from an explicit edge list; errors on out-of-range
    /// endpoints or loops.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = SmallGraph::new(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(parse_err(0, format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(parse_err(0, format!("loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.bits[u * self.words + v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v, "bad edge ({u},{v})");
        self.bits[u * self.words + v / WORD_BITS] |= 1u64 << (v % WORD_BITS);
        self.bits[v * self.words + u / WORD_BITS] |= 1u64 << (u % WORD_BITS);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "bad edge ({u},{v})");
        self.bits[u * self.words + v / WORD_BITS] &= !(1u64 << (v % WORD_BITS));
        self.bits[v * self.words + u / WORD_BITS] &= !(1u64 << (u % WORD_BITS));
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Sorted (nonincreasing) degree sequence.
    pub fn degree_sequence(&self) -> GraphicSequence {
        GraphicSequence::from_unsorted(self.degrees())
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(v);
        row.iter().enumerate().flat_map(|(wi, &w)| {
            let base = wi * WORD_BITS;
            BitIter(w).map(move |b| base + b)
        })
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Appends an isolated vertex and returns its index.
    pub fn add_vertex(&mut self) -> usize {
        let n = self.n + 1;
        assert!(n <= MAX_ORDER, "graph capacity exceeded");
        let words = words_for(n).max(1);
        if words == self.words {
            self.bits.extend(std::iter::repeat(0).take(words));
        } else {
            let mut bits = vec![0u64; n * words];
            for v in 0..self.n {
                bits[v * words..v * words + self.words]
                    .copy_from_slice(self.row(v));
            }
            self.bits = bits;
            self.words = words;
        }
        self.n = n;
        self.n - 1
    }

    /// Induced subgraph on the given vertices, relabeled 0..len in the
    /// order supplied.
    pub fn induced(&self, verts: &[usize]) -> SmallGraph {
        let mut g = SmallGraph::new(verts.len()).expect("induced subgraph within capacity");
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Disjoint union, second operand relabeled after the first.
    pub fn union_disjoint(a: &SmallGraph, b: &SmallGraph) -> Result<SmallGraph, GraphError> {
        let n = a.n + b.n;
        let mut g = SmallGraph::new(n)?;
        for (u, v) in a.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in b.edges() {
            g.add_edge(a.n + u, a.n + v);
        }
        Ok(g)
    }

    /// Join: disjoint union plus every edge between the two parts.
    pub fn join(a: &SmallGraph, b: &SmallGraph) -> Result<SmallGraph, GraphError> {
        let mut g = SmallGraph::union_disjoint(a, b)?;
        for u in 0..a.n {
            for v in 0..b.n {
                g.add_edge(u, a.n + v);
            }
        }
        Ok(g)
    }

    fn neighbor_mask(&self, v: usize) -> Vec<u64> {
        self.row(v).to_vec()
    }
}

impl fmt::Debug for SmallGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmallGraph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Serialize for SmallGraph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_graph6())
    }
}

impl<'de> Deserialize<'de> for SmallGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_graph6(&text).map_err(D::Error::custom)
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let b = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(b)
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing and emission
// ---------------------------------------------------------------------------

/// Parses either a graph6 string or an edge list with an `n <count>` header.
///
/// A leading line matching the edge-list header selects the edge-list
/// format; everything else is treated as graph6.
pub fn parse(text: &str) -> Result<SmallGraph, GraphError> {
    let trimmed = text.trim();
    let mut toks = trimmed.split_whitespace();
    if let (Some("n"), Some(tok)) = (toks.next(), toks.next()) {
        if tok.chars().all(|c| c.is_ascii_digit()) {
            return parse_edge_list(text);
        }
    }
    parse_graph6(trimmed)
}

/// Parses a graph6 string (optionally prefixed with the `>>graph6<<` header).
pub fn parse_graph6(text: &str) -> Result<SmallGraph, GraphError> {
    let text = text.trim();
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(parse_err(0, "empty graph6 input"));
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_err(i, format!("invalid graph6 byte 0x{b:02x}")));
        }
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(parse_err(0, "graph6 orders above 258047 are not supported"));
        }
        if bytes.len() < 4 {
            return Err(parse_err(bytes.len(), "truncated graph6 order"));
        }
        let n = ((bytes[1] as usize - 63) << 12)
            | ((bytes[2] as usize - 63) << 6)
            | (bytes[3] as usize - 63);
        (n, 4)
    } else {
        (bytes[0] as usize - 63, 1)
    };
    if n > MAX_ORDER {
        return Err(GraphError::TooLarge(n));
    }
    let mut g = SmallGraph::new(n)?;
    let total_bits = n * n.saturating_sub(1) / 2;
    let needed = total_bits.div_ceil(6);
    if bytes.len() - pos < needed {
        return Err(parse_err(bytes.len(), "truncated graph6 edge data"));
    }
    if bytes.len() - pos > needed {
        return Err(parse_err(pos + needed, "trailing bytes after graph6 data"));
    }
    let mut bit = 0usize;
    let mut pairs = upper_triangle_pairs(n);
    let mut cur = 0u8;
    while bit < total_bits {
        if bit % 6 == 0 {
            cur = bytes[pos] - 63;
            pos += 1;
        }
        let set = (cur >> (5 - bit % 6)) & 1 == 1;
        let (i, j) = pairs.next().expect("pair per bit");
        if set {
            g.add_edge(i, j);
        }
        bit += 1;
    }
    // padding bits must be zero for a canonical encoding
    if total_bits % 6 != 0 {
        let pad = 6 - total_bits % 6;
        if cur & ((1 << pad) - 1) != 0 {
            return Err(parse_err(pos - 1, "nonzero graph6 padding bits"));
        }
    }
    Ok(g)
}

fn upper_triangle_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(move |j| (0..j).map(move |i| (i, j)))
}

/// Parses an edge list: a header `n <count>` followed by `u v` lines.
pub fn parse_edge_list(text: &str) -> Result<SmallGraph, GraphError> {
    let mut offset = 0usize;
    let mut n: Option<usize> = None;
    let mut g: Option<SmallGraph> = None;
    for line in text.split('\n') {
        let line_offset = offset;
        offset += line.len() + 1;
        let body = line.trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match n {
            None => {
                if toks.len() != 2 || toks[0] != "n" {
                    return Err(parse_err(line_offset, "expected header `n <count>`"));
                }
                let count: usize = toks[1]
                    .parse()
                    .map_err(|_| parse_err(line_offset, "bad vertex count in header"))?;
                if count > MAX_ORDER {
                    return Err(GraphError::TooLarge(count));
                }
                n = Some(count);
                g = Some(SmallGraph::new(count)?);
            }
            Some(count) => {
                if toks.len() != 2 {
                    return Err(parse_err(line_offset, "expected edge line `u v`"));
                }
                let u: usize = toks[0]
                    .parse()
                    .map_err(|_| parse_err(line_offset, "bad vertex id"))?;
                let v: usize = toks[1]
                    .parse()
                    .map_err(|_| parse_err(line_offset, "bad vertex id"))?;
                if u >= count || v >= count {
                    return Err(parse_err(
                        line_offset,
                        format!("edge ({u},{v}) out of range for n={count}"),
                    ));
                }
                if u == v {
                    return Err(parse_err(line_offset, format!("loop at vertex {u}")));
                }
                g.as_mut().unwrap().add_edge(u, v);
            }
        }
    }
    g.ok_or_else(|| parse_err(0, "empty edge-list input"))
}

impl SmallGraph {
    /// Canonical graph6 encoding of this labeling.
    pub fn to_graph6(&self) -> String {
        let mut out = Vec::new();
        let n = self.n;
        if n <= 62 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            out.push(((n >> 12) & 0x3f) as u8 + 63);
            out.push(((n >> 6) & 0x3f) as u8 + 63);
            out.push((n & 0x3f) as u8 + 63);
        }
        let mut cur = 0u8;
        let mut filled = 0usize;
        for (i, j) in upper_triangle_pairs(n) {
            cur = (cur << 1) | self.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(cur + 63);
                cur = 0;
                filled = 0;
            }
        }
        if filled > 0 {
            out.push((cur << (6 - filled)) + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are ascii")
    }

    /// Edge-list text with the `n <count>` header, edges sorted.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

impl FromStr for SmallGraph {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, GraphError> {
        parse(s)
    }
}

// ---------------------------------------------------------------------------
// Independence number
// ---------------------------------------------------------------------------

/// Exact maximum independent set size, by branch and bound on the vertex
/// with most candidate neighbors.
pub fn independence_number(g: &SmallGraph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    let words = words_for(n).max(1);
    let mut cands = vec![u64::MAX; words];
    clear_above(&mut cands, n);
    let masks: Vec<Vec<u64>> = (0..n).map(|v| g.neighbor_mask(v)).collect();
    let mut best = 0usize;
    mis_rec(&masks, cands.clone(), 0, &mut best);
    best
}

fn clear_above(mask: &mut [u64], n: usize) {
    for (wi, w) in mask.iter_mut().enumerate() {
        let lo = wi * WORD_BITS;
        if lo >= n {
            *w = 0;
        } else if lo + WORD_BITS > n {
            *w &= (1u64 << (n - lo)) - 1;
        }
    }
}

fn popcount(mask: &[u64]) -> usize {
    mask.iter().map(|w| w.count_ones() as usize).sum()
}

fn first_bit(mask: &[u64]) -> Option<usize> {
    for (wi, &w) in mask.iter().enumerate() {
        if w != 0 {
            return Some(wi * WORD_BITS + w.trailing_zeros() as usize);
        }
    }
    None
}

fn mask_bits(mask: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (wi, &w) in mask.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            out.push(wi * WORD_BITS + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
    out
}

fn mis_rec(masks: &[Vec<u64>], cands: Vec<u64>, size: usize, best: &mut usize) {
    let remaining = popcount(&cands);
    if size + remaining <= *best {
        return;
    }
    if remaining == 0 {
        *best = (*best).max(size);
        return;
    }
    // branch on a candidate with the most candidate neighbors
    let mut pivot = first_bit(&cands).unwrap();
    let mut pivot_deg = 0usize;
    for v in mask_bits(&cands) {
        let deg = masks[v]
            .iter()
            .zip(cands.iter())
            .map(|(m, c)| (m & c).count_ones() as usize)
            .sum();
        if deg > pivot_deg {
            pivot_deg = deg;
            pivot = v;
        }
    }
    // include pivot
    let mut inc = cands.clone();
    for (wi, w) in inc.iter_mut().enumerate() {
        *w &= !masks[pivot][wi];
    }
    inc[pivot / WORD_BITS] &= !(1u64 << (pivot % WORD_BITS));
    mis_rec(masks, inc, size + 1, best);
    // exclude pivot
    let mut exc = cands;
    exc[pivot / WORD_BITS] &= !(1u64 << (pivot % WORD_BITS));
    mis_rec(masks, exc, size, best);
}

// ---------------------------------------------------------------------------
// Subgraph containment
// ---------------------------------------------------------------------------

/// Searches for an injective map carrying every pattern edge to a host edge
/// (ordinary subgraph containment, not induced).
///
/// Pattern vertices are matched in order of decreasing degree; candidates
/// are filtered by degree and by the bitmask rows of already-matched
/// neighbors. The first embedding in that deterministic order is returned.
pub fn contains_subgraph(host: &SmallGraph, pattern: &SmallGraph) -> Option<Embedding> {
    let k = pattern.order();
    let n = host.order();
    if k > n {
        return None;
    }
    if k == 0 {
        return Some(Embedding(Vec::new()));
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(pattern.degree(v)), v));
    let words = words_for(n).max(1);
    // eligible hosts per pattern vertex, by degree
    let host_deg: Vec<usize> = host.degrees();
    let mut eligible: Vec<Vec<u64>> = Vec::with_capacity(k);
    for &p in &order {
        let need = pattern.degree(p);
        let mut mask = vec![0u64; words];
        for (v, &d) in host_deg.iter().enumerate() {
            if d >= need {
                mask[v / WORD_BITS] |= 1u64 << (v % WORD_BITS);
            }
        }
        eligible.push(mask);
    }
    let mut assignment = vec![usize::MAX; k];
    let mut used = vec![0u64; words];
    if match_rec(host, pattern, &order, &eligible, 0, &mut assignment, &mut used) {
        Some(Embedding(assignment))
    } else {
        None
    }
}

fn match_rec(
    host: &SmallGraph,
    pattern: &SmallGraph,
    order: &[usize],
    eligible: &[Vec<u64>],
    depth: usize,
    assignment: &mut [usize],
    used: &mut [u64],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let p = order[depth];
    let mut cand = eligible[depth].clone();
    for (wi, w) in cand.iter_mut().enumerate() {
        *w &= !used[wi];
    }
    // every already-assigned pattern neighbor constrains the candidate set
    for q in pattern.neighbors(p) {
        let hq = assignment[q];
        if hq != usize::MAX {
            let row = host.row(hq);
            for (wi, w) in cand.iter_mut().enumerate() {
                *w &= row[wi];
            }
        }
    }
    for v in mask_bits(&cand) {
        assignment[p] = v;
        used[v / WORD_BITS] |= 1u64 << (v % WORD_BITS);
        if match_rec(host, pattern, order, eligible, depth + 1, assignment, used) {
            return true;
        }
        used[v / WORD_BITS] &= !(1u64 << (v % WORD_BITS));
        assignment[p] = usize::MAX;
    }
    false
}

/// Verifies that an embedding is injective and carries pattern edges to
/// host edges. Used by tests and witness checks.
pub fn verify_embedding(host: &SmallGraph, pattern: &SmallGraph, emb: &Embedding) -> bool {
    if emb.0.len() != pattern.order() {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    for &v in &emb.0 {
        if v >= host.order() || !seen.insert(v) {
            return false;
        }
    }
    pattern
        .edges()
        .iter()
        .all(|&(u, v)| host.has_edge(emb.0[u], emb.0[v]))
}

// ---------------------------------------------------------------------------
// Induced subgraph streams
// ---------------------------------------------------------------------------

/// All induced subgraphs of the given order, one per vertex subset in
/// lexicographic subset order (labeled; no isomorphism dedup).
pub fn induced_subgraphs(
    g: &SmallGraph,
    order: usize,
) -> impl Iterator<Item = SmallGraph> + '_ {
    Combinations::new(g.order(), order).map(move |subset| g.induced(&subset))
}

// ---------------------------------------------------------------------------
// Canonical form
// ---------------------------------------------------------------------------

/// Canonical key: vertex count plus the upper-triangle bit rows of the
/// lexicographically smallest adjacency matrix over all orderings that
/// respect iterated degree refinement. Equal keys iff isomorphic.
///
/// Supports up to 64 vertices; intended for pattern-scale graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub n: usize,
    pub rows: Vec<u64>,
}

pub fn canonical_key(g: &SmallGraph) -> CanonicalKey {
    let (key, _) = canonical_with_order(g);
    key
}

/// Relabels the graph into its canonical ordering.
pub fn canonical_relabel(g: &SmallGraph) -> SmallGraph {
    let (_, order) = canonical_with_order(g);
    let mut out = SmallGraph::new(g.order()).expect("within capacity");
    for i in 0..g.order() {
        for j in i + 1..g.order() {
            if g.has_edge(order[i], order[j]) {
                out.add_edge(i, j);
            }
        }
    }
    out
}

fn canonical_with_order(g: &SmallGraph) -> (CanonicalKey, Vec<usize>) {
    let n = g.order();
    assert!(n <= 64, "canonical form supports at most 64 vertices");
    if n == 0 {
        return (CanonicalKey { n: 0, rows: vec![] }, vec![]);
    }
    let colors = refine_colors(g);
    // group vertices by color; colors are already invariant-ordered
    let classes: Vec<Vec<usize>> = {
        let max = colors.iter().copied().max().unwrap();
        let mut cls = vec![Vec::new(); max + 1];
        for (v, &c) in colors.iter().enumerate() {
            cls[c].push(v);
        }
        cls
    };
    // class index per position in the canonical order
    let mut slot_class = Vec::with_capacity(n);
    for (ci, cl) in classes.iter().enumerate() {
        slot_class.extend(std::iter::repeat(ci).take(cl.len()));
    }
    let mut best_rows: Option<Vec<u64>> = None;
    let mut best_order: Vec<usize> = Vec::new();
    let mut cur_rows = vec![0u64; n];
    let mut cur_order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    canon_rec(
        g,
        &classes,
        &slot_class,
        0,
        true,
        &mut cur_rows,
        &mut cur_order,
        &mut used,
        &mut best_rows,
        &mut best_order,
    );
    (
        CanonicalKey {
            n,
            rows: best_rows.expect("at least one ordering"),
        },
        best_order,
    )
}

#[allow(clippy::too_many_arguments)]
fn canon_rec(
    g: &SmallGraph,
    classes: &[Vec<usize>],
    slot_class: &[usize],
    depth: usize,
    tight: bool,
    cur_rows: &mut [u64],
    cur_order: &mut Vec<usize>,
    used: &mut [bool],
    best_rows: &mut Option<Vec<u64>>,
    best_order: &mut Vec<usize>,
) {
    let n = slot_class.len();
    if depth == n {
        if best_rows.is_none() || tight_less(cur_rows, best_rows.as_ref().unwrap()) {
            *best_rows = Some(cur_rows.to_vec());
            *best_order = cur_order.clone();
        }
        return;
    }
    let mut tried: Vec<usize> = Vec::new();
    for &v in &classes[slot_class[depth]] {
        if used[v] {
            continue;
        }
        // interchangeable siblings (twins) produce identical completions
        if tried.iter().any(|&w| twins(g, v, w)) {
            continue;
        }
        tried.push(v);
        // adjacency bits against the already-placed prefix
        let mut row = 0u64;
        for (i, &u) in cur_order.iter().enumerate() {
            if g.has_edge(v, u) {
                row |= 1u64 << i;
            }
        }
        let (next_tight, prune) = match best_rows.as_ref() {
            Some(best) if tight => {
                let b = best[depth];
                if row_greater(row, b, depth) {
                    (false, true)
                } else {
                    (row == b, false)
                }
            }
            // prefix already strictly below best: explore everything
            Some(_) => (false, false),
            // first descent defines the initial best
            None => (true, false),
        };
        if prune {
            continue;
        }
        cur_rows[depth] = row;
        cur_order.push(v);
        used[v] = true;
        canon_rec(
            g,
            classes,
            slot_class,
            depth + 1,
            tight && next_tight,
            cur_rows,
            cur_order,
            used,
            best_rows,
            best_order,
        );
        used[v] = false;
        cur_order.pop();
    }
}

/// True when swapping `v` and `w` is an automorphism: identical
/// neighborhoods outside the pair.
fn twins(g: &SmallGraph, v: usize, w: usize) -> bool {
    let n = g.order();
    for u in 0..n {
        if u == v || u == w {
            continue;
        }
        if g.has_edge(v, u) != g.has_edge(w, u) {
            return false;
        }
    }
    true
}

// rows are compared bit-by-bit from the earliest placed vertex; a set bit
// earlier means lexicographically smaller overall matrix? We define the
// canonical matrix as the minimum of the bit string read row by row with
// 1-bits treated as smaller than 0-bits reversed; to keep it simple we
// compare reversed-bit integers so that ordinary integer order works.
fn row_key(row: u64, len: usize) -> u64 {
    // reverse the low `len` bits so earlier prefix positions are more
    // significant in integer comparison
    let mut out = 0u64;
    for i in 0..len {
        out = (out << 1) | ((row >> i) & 1);
    }
    out
}

fn row_greater(row: u64, best: u64, len: usize) -> bool {
    row_key(row, len) > row_key(best, len)
}

fn tight_less(cur: &[u64], best: &[u64]) -> bool {
    for (depth, (&c, &b)) in cur.iter().zip(best.iter()).enumerate() {
        let ck = row_key(c, depth);
        let bk = row_key(b, depth);
        if ck != bk {
            return ck < bk;
        }
    }
    false
}

/// Iterated degree refinement; returns a color per vertex. Colors are
/// numbered in an isomorphism-invariant order (high degree first), and the
/// partition refines each round until stable.
fn refine_colors(g: &SmallGraph) -> Vec<usize> {
    let n = g.order();
    let initial: Vec<Vec<usize>> = (0..n).map(|v| vec![usize::MAX - g.degree(v)]).collect();
    let mut colors = rank_by_signature(&initial);
    loop {
        let sigs: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                let mut s = vec![colors[v]];
                let mut nb: Vec<usize> = g.neighbors(v).map(|u| colors[u]).collect();
                nb.sort_unstable();
                s.extend(nb);
                s
            })
            .collect();
        let next = rank_by_signature(&sigs);
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

fn rank_by_signature(keys: &[Vec<usize>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut colors = vec![0usize; keys.len()];
    let mut c = 0usize;
    for i in 0..idx.len() {
        if i > 0 && keys[idx[i]] != keys[idx[i - 1]] {
            c += 1;
        }
        colors[idx[i]] = c;
    }
    colors
}

// ---------------------------------------------------------------------------
// Subgraph enumeration up to isomorphism
// ---------------------------------------------------------------------------

/// Every subgraph of `g` with at least one edge and at most `max_order`
/// vertices, deduplicated by canonical form. Walks the deletion lattice
/// (single edge or vertex removals) with canonical-form memoization.
pub fn enumerate_subgraphs_up_to_iso(
    g: &SmallGraph,
    max_order: usize,
) -> Result<Vec<SmallGraph>, GraphError> {
    if g.order() > 10 {
        return Err(GraphError::OrderTooLarge(g.order()));
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![canonical_relabel(g)];
    seen.insert(canonical_key(g));
    while let Some(cur) = stack.pop() {
        if cur.edge_count() >= 1 && cur.order() <= max_order {
            out.push(cur.clone());
        }
        if cur.edge_count() == 0 {
            continue;
        }
        for (u, v) in cur.edges() {
            let mut next = cur.clone();
            next.remove_edge(u, v);
            let key = canonical_key(&next);
            if seen.insert(key) {
                stack.push(canonical_relabel(&next));
            }
        }
        for v in 0..cur.order() {
            let keep: Vec<usize> = (0..cur.order()).filter(|&u| u != v).collect();
            let next = cur.induced(&keep);
            let key = canonical_key(&next);
            if seen.insert(key) {
                stack.push(canonical_relabel(&next));
            }
        }
    }
    out.sort_by_key(|g| (g.order(), g.edge_count(), canonical_key(g)));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Standard families
// ---------------------------------------------------------------------------

/// Constructors for the standard small graphs used throughout the tests and
/// the CLI examples.
pub mod families {
    use super::SmallGraph;

    pub fn edgeless(n: usize) -> SmallGraph {
        SmallGraph::new(n).expect("within capacity")
    }

    pub fn complete(n: usize) -> SmallGraph {
        let mut g = edgeless(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> SmallGraph {
        let mut g = edgeless(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    pub fn cycle(n: usize) -> SmallGraph {
        assert!(n >= 3, "cycles need at least 3 vertices");
        let mut g = path(n);
        g.add_edge(n - 1, 0);
        g
    }

    /// Star with the given number of leaves (order = leaves + 1, center 0).
    pub fn star(leaves: usize) -> SmallGraph {
        let mut g = edgeless(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v);
        }
        g
    }

    /// Disjoint union of k edges.
    pub fn matching(k: usize) -> SmallGraph {
        let mut g = edgeless(2 * k);
        for i in 0..k {
            g.add_edge(2 * i, 2 * i + 1);
        }
        g
    }

    /// Complete split graph: an r-clique joined to s independent vertices.
    pub fn complete_split(r: usize, s: usize) -> SmallGraph {
        SmallGraph::join(&complete(r), &edgeless(s)).expect("within capacity")
    }

    /// Triangle with a pendant vertex.
    pub fn paw() -> SmallGraph {
        let mut g = complete(3);
        let v = g.add_vertex();
        g.add_edge(0, v);
        g
    }
}
