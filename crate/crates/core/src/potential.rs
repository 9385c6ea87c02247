//! Pattern profiles and extremal machinery: the minimum max-degree over
//! induced subgraphs of each order, the slope terms built from it, extremal
//! sequences with parity fix and their pattern-free realizations, the
//! additive lower bound, the Yin–Li clique sufficiency test, and
//! split-graph canonicalization by degree-preserving 2-switches.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comb::Combinations;
use crate::graph::{
    canonical_key, contains_subgraph, enumerate_subgraphs_up_to_iso, families,
    independence_number, GraphError, SmallGraph,
};
use crate::parallel::par_map;
use crate::seq::GraphicSequence;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PotentialError {
    #[error("pattern has no edges")]
    EmptyPattern,
    #[error("index i = {i} outside valid range {lo}..={hi}")]
    IndexOutOfRange { i: usize, lo: usize, hi: usize },
    #[error("n = {n} too small (need at least {min})")]
    NTooSmall { n: usize, min: usize },
    #[error("graph does not contain the required split pattern")]
    NotPotentially,
    #[error("2-switch search stalled with {placed} of {needed} target edges placed")]
    SwitchStalled { placed: usize, needed: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One row of a pattern profile: at order `i`, the minimum over all
/// i-vertex induced subgraphs of the maximum degree, and the slope term
/// `2(k - i) + min_max_degree - 1` derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub i: usize,
    pub min_max_degree: usize,
    pub slope_term: usize,
}

/// Per-pattern table over the valid order range (independence number + 1
/// through the full order), plus the maximal slope and its argmax set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HProfile {
    pub order: usize,
    pub independence: usize,
    pub rows: Vec<ProfileRow>,
    pub slope: usize,
    pub argmax: Vec<usize>,
}

impl HProfile {
    pub fn min_max_degree(&self, i: usize) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.i == i)
            .map(|r| r.min_max_degree)
    }

    pub fn slope_term(&self, i: usize) -> Option<usize> {
        self.rows.iter().find(|r| r.i == i).map(|r| r.slope_term)
    }

    pub fn valid_range(&self) -> std::ops::RangeInclusive<usize> {
        self.independence + 1..=self.order
    }
}

/// Exact profile of a pattern with at least one edge, by exhausting the
/// induced subgraphs of every order in the valid range.
pub fn profile(h: &SmallGraph) -> Result<HProfile, PotentialError> {
    if h.edge_count() == 0 {
        return Err(PotentialError::EmptyPattern);
    }
    let k = h.order();
    let alpha = independence_number(h);
    let indices: Vec<usize> = (alpha + 1..=k).collect();
    let rows: Vec<ProfileRow> = par_map(indices, |i| {
        let mmd = Combinations::new(k, i)
            .map(|subset| h.induced(&subset).max_degree())
            .min()
            .expect("order range is nonempty");
        ProfileRow {
            i,
            min_max_degree: mmd,
            slope_term: 2 * (k - i) + mmd - 1,
        }
    });
    let slope = rows.iter().map(|r| r.slope_term).max().expect("rows");
    let argmax = rows
        .iter()
        .filter(|r| r.slope_term == slope)
        .map(|r| r.i)
        .collect();
    Ok(HProfile {
        order: k,
        independence: alpha,
        rows,
        slope,
        argmax,
    })
}

// ---------------------------------------------------------------------------
// Extremal sequences
// ---------------------------------------------------------------------------

/// The extremal sequence at index i and order n:
/// `((n-1)^(k-i), (k-i+D-1)^(n-k+i))` with `D = min_max_degree(i)`, the
/// smallest term reduced by one when `n-k+i` and `D-1` are both odd.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalSpec {
    pub i: usize,
    pub sequence: GraphicSequence,
    pub parity_adjusted: bool,
    pub clique_part: usize,
    pub regular_degree: usize,
}

pub fn extremal_sequence(
    h: &SmallGraph,
    i: usize,
    n: usize,
) -> Result<ExtremalSpec, PotentialError> {
    let prof = profile(h)?;
    extremal_sequence_from_profile(&prof, i, n)
}

pub fn extremal_sequence_from_profile(
    prof: &HProfile,
    i: usize,
    n: usize,
) -> Result<ExtremalSpec, PotentialError> {
    let k = prof.order;
    let (lo, hi) = (prof.independence + 1, k);
    let d = prof
        .min_max_degree(i)
        .ok_or(PotentialError::IndexOutOfRange { i, lo, hi })?;
    // the regular part needs order n-k+i >= D, which also makes the
    // sequence nonincreasing (n-1 >= k-i+D-1)
    if n + i < k + d {
        return Err(PotentialError::NTooSmall { n, min: k + d - i });
    }
    let low_count = n - k + i;
    let low_value = k - i + d - 1;
    let parity_adjusted = low_count % 2 == 1 && (d - 1) % 2 == 1;
    if parity_adjusted && low_value == 0 {
        // the reduced term would be negative; no such sequence
        return Err(PotentialError::NTooSmall { n, min: k + d - i + 1 });
    }
    let mut terms = vec![n - 1; k - i];
    terms.extend(std::iter::repeat(low_value).take(low_count));
    if parity_adjusted {
        *terms.last_mut().expect("low part nonempty") -= 1;
    }
    let sequence = GraphicSequence::new(terms).expect("constructed nonincreasing");
    debug_assert!(sequence.sum() % 2 == 0);
    Ok(ExtremalSpec {
        i,
        sequence,
        parity_adjusted,
        clique_part: k - i,
        regular_degree: d - 1,
    })
}

/// Canonical realization of an extremal spec: a clique on `clique_part`
/// vertices joined to a circulant `regular_degree`-regular graph (or the
/// near-regular Havel–Hakimi realization in the parity case).
pub fn extremal_realization(spec: &ExtremalSpec) -> Result<SmallGraph, PotentialError> {
    let n = spec.sequence.len();
    let m = n - spec.clique_part;
    let low = if spec.parity_adjusted {
        let mut terms = vec![spec.regular_degree; m - 1];
        terms.push(spec.regular_degree - 1);
        GraphicSequence::new(terms)
            .expect("nonincreasing")
            .realize()
            .map_err(|_| PotentialError::NTooSmall { n, min: n + 1 })?
    } else {
        circulant(m, spec.regular_degree)
    };
    let g = SmallGraph::join(&families::complete(spec.clique_part), &low)?;
    debug_assert_eq!(g.degree_sequence(), spec.sequence);
    Ok(g)
}

/// Circulant graph on m vertices with connection offsets 1..=d/2 (plus the
/// antipode when d is odd, which requires even m).
fn circulant(m: usize, d: usize) -> SmallGraph {
    assert!(d < m.max(1), "degree must be below order");
    let mut g = SmallGraph::new(m).expect("within capacity");
    for off in 1..=d / 2 {
        for v in 0..m {
            let u = (v + off) % m;
            g.add_edge(v, u);
        }
    }
    if d % 2 == 1 {
        assert!(m % 2 == 0, "odd-regular circulant needs even order");
        for v in 0..m / 2 {
            g.add_edge(v, v + m / 2);
        }
    }
    debug_assert!((0..m).all(|v| g.degree(v) == d));
    g
}

/// Best additive lower bound on the potential number at order n: the
/// maximum over valid i of `sum(extremal sequence) + 2`.
pub fn lower_bound(h: &SmallGraph, n: usize) -> Result<usize, PotentialError> {
    let prof = profile(h)?;
    let mut best: Option<usize> = None;
    for i in prof.valid_range() {
        if let Ok(spec) = extremal_sequence_from_profile(&prof, i, n) {
            let v = spec.sequence.sum() + 2;
            best = Some(best.map_or(v, |b: usize| b.max(v)));
        }
    }
    best.ok_or(PotentialError::NTooSmall {
        n,
        min: prof.order + 1,
    })
}

/// Yin–Li sufficiency test for potentially `K_k`-graphic:
/// `d_k >= k-1` and `d_i >= 2(k-1)-i` for `1 <= i <= k-1`.
pub fn yin_li_check(seq: &GraphicSequence, k: usize) -> bool {
    let terms = seq.terms();
    if terms.len() < k || k == 0 {
        return false;
    }
    if terms[k - 1] < k - 1 {
        return false;
    }
    (1..k).all(|i| terms[i - 1] + i >= 2 * (k - 1))
}

// ---------------------------------------------------------------------------
// Split-graph canonicalization
// ---------------------------------------------------------------------------

/// Rearranges a realization, by degree-preserving 2-switches, so that the
/// `r` highest-degree vertices form a clique completely joined to the next
/// `s` highest-degree vertices. The input must contain the split pattern
/// somewhere; each switch creates one missing target edge without removing
/// a present one, so the search either finishes or reports a stall.
pub fn split_canonicalize(
    g: &SmallGraph,
    r: usize,
    s: usize,
) -> Result<SmallGraph, PotentialError> {
    let pattern = families::complete_split(r, s);
    if contains_subgraph(g, &pattern).is_none() {
        return Err(PotentialError::NotPotentially);
    }
    let n = g.order();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    // target edges among the top r+s positions: the clique pairs plus all
    // clique-to-independent-part pairs
    let mut targets: Vec<(usize, usize)> = Vec::new();
    for a in 0..r {
        for b in a + 1..r + s {
            targets.push((order[a], order[b]));
        }
    }
    let is_target = |u: usize, v: usize| {
        targets
            .iter()
            .any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    };
    let mut cur = g.clone();
    loop {
        let missing: Vec<(usize, usize)> = targets
            .iter()
            .copied()
            .filter(|&(u, v)| !cur.has_edge(u, v))
            .collect();
        if missing.is_empty() {
            debug_assert_eq!(cur.degree_sequence(), g.degree_sequence());
            return Ok(cur);
        }
        let mut advanced = false;
        'edges: for &(u, v) in &missing {
            // a 2-switch: remove ua and vb, add uv and ab
            let a_cands: Vec<usize> = (0..n)
                .filter(|&a| a != u && a != v && cur.has_edge(u, a) && !is_target(u, a))
                .collect();
            let b_cands: Vec<usize> = (0..n)
                .filter(|&b| b != u && b != v && cur.has_edge(v, b) && !is_target(v, b))
                .collect();
            for &a in &a_cands {
                for &b in &b_cands {
                    if a == b || cur.has_edge(a, b) {
                        continue;
                    }
                    cur.remove_edge(u, a);
                    cur.remove_edge(v, b);
                    cur.add_edge(u, v);
                    cur.add_edge(a, b);
                    advanced = true;
                    break 'edges;
                }
            }
        }
        if !advanced {
            return Err(PotentialError::SwitchStalled {
                placed: targets.len() - missing.len(),
                needed: targets.len(),
            });
        }
    }
}

// ---------------------------------------------------------------------------
// Conjectured subgraph form of the slope
// ---------------------------------------------------------------------------

/// Comparison of the slope with its subgraph maximization: the maximum over
/// all subgraphs H' (up to isomorphism, at least one edge) of the slope
/// term of H' at index `independence(H') + 1`. The two are conjectured
/// equal; the gap is reported with sign, never asserted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub slope: usize,
    pub subgraph_max: usize,
    pub gap: i64,
    pub witness: SmallGraph,
}

pub fn conjecture_gap(h: &SmallGraph) -> Result<ConjectureReport, PotentialError> {
    let prof = profile(h)?;
    let subs = enumerate_subgraphs_up_to_iso(h, h.order())?;
    let mut best: Option<(usize, SmallGraph)> = None;
    for sub in subs {
        let sp = profile(&sub)?;
        let term = sp
            .slope_term(sp.independence + 1)
            .expect("first valid index always present");
        let better = match &best {
            None => true,
            Some((b, w)) => {
                term > *b
                    || (term == *b
                        && (sub.order(), sub.edge_count(), canonical_key(&sub))
                            < (w.order(), w.edge_count(), canonical_key(w)))
            }
        };
        if better {
            best = Some((term, sub));
        }
    }
    let (subgraph_max, witness) = best.expect("pattern has an edge, so a subgraph exists");
    Ok(ConjectureReport {
        slope: prof.slope,
        subgraph_max,
        gap: subgraph_max as i64 - prof.slope as i64,
        witness,
    })
}
