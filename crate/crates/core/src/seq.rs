//! Degree-sequence primitives: graphicality, realization, layoffs, the
//! iterated minimum-term reduction, degree sufficiency, and enumeration.
//!
//! Sequences are nonincreasing lists of nonnegative integers. Positions are
//! 1-based throughout this module, matching the usual `d_1 >= ... >= d_n`
//! convention; graph vertices elsewhere are 0-based.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::SmallGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("sequence terms must be nonincreasing")]
    Unsorted,
    #[error("empty sequence text")]
    EmptyInput,
    #[error("bad sequence token `{0}`")]
    BadToken(String),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("term {term} exceeds n-1 = {max}")]
    TermTooLarge { term: usize, max: usize },
    #[error("layoff would need a negative term; the input is not graphic")]
    DegenerateLayoff,
    #[error("sequence is not graphic")]
    NonGraphic,
    #[error("sum {sum} is below the required {required}")]
    SumTooSmall { sum: usize, required: usize },
    #[error("slope m = {m} must satisfy 1 <= m < 2(k-2) = {limit}")]
    BadSlope { m: usize, limit: usize },
    #[error("clique order k = {0} must be at least 3")]
    BadCliqueOrder(usize),
}

/// Nonincreasing sequence of nonnegative integers.
///
/// Construction enforces sortedness only. A term exceeding `n - 1` cannot be
/// realized by any simple graph, so [`GraphicSequence::is_graphic`] simply
/// reports `false` for such sequences; this keeps the Kleitman–Wang layoff
/// total on non-graphic inputs, whose reduced sequences can leave the
/// degree-sequence range while preserving the graphicality equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphicSequence {
    terms: Vec<usize>,
}

impl GraphicSequence {
    /// Wraps an already-nonincreasing list.
    pub fn new(terms: Vec<usize>) -> Result<Self, SeqError> {
        if terms.windows(2).any(|w| w[0] < w[1]) {
            return Err(SeqError::Unsorted);
        }
        Ok(GraphicSequence { terms })
    }

    /// Sorts the list nonincreasing and wraps it.
    pub fn from_unsorted(mut terms: Vec<usize>) -> Self {
        terms.sort_unstable_by(|a, b| b.cmp(a));
        GraphicSequence { terms }
    }

    pub(crate) fn from_sorted_unchecked(terms: Vec<usize>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0] >= w[1]));
        GraphicSequence { terms }
    }

    #[inline]
    pub fn terms(&self) -> &[usize] {
        &self.terms
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of the terms (twice the edge count of any realization).
    pub fn sum(&self) -> usize {
        self.terms.iter().sum()
    }

    pub fn max_term(&self) -> usize {
        self.terms.first().copied().unwrap_or(0)
    }

    pub fn min_term(&self) -> usize {
        self.terms.last().copied().unwrap_or(0)
    }

    /// Erdős–Gallai test: even sum and all n prefix inequalities.
    pub fn is_graphic(&self) -> bool {
        let n = self.terms.len();
        if n == 0 {
            return true;
        }
        if self.terms[0] >= n {
            return false;
        }
        if self.sum() % 2 != 0 {
            return false;
        }
        let mut prefix = 0usize;
        for k in 1..=n {
            prefix += self.terms[k - 1];
            let mut rhs = k * (k - 1);
            for &d in &self.terms[k..] {
                rhs += d.min(k);
            }
            if prefix > rhs {
                return false;
            }
        }
        true
    }

    /// Havel–Hakimi construction. Vertex `i` of the result has degree
    /// `terms[i]`, and the first vertex is adjacent to the next `d_1`
    /// highest-degree vertices.
    pub fn realize(&self) -> Result<SmallGraph, SeqError> {
        if !self.is_graphic() {
            return Err(SeqError::NonGraphic);
        }
        let n = self.terms.len();
        let mut g = SmallGraph::new(n).expect("sequence length within graph capacity");
        let mut demand = self.terms.clone();
        loop {
            // pivot: max remaining demand, lowest index
            let (pivot, &d) = match demand
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            {
                Some(p) => p,
                None => break,
            };
            demand[pivot] = 0;
            // connect to the d largest remaining demands (lowest index first)
            let mut targets: Vec<usize> = (0..n).filter(|&v| demand[v] > 0).collect();
            targets.sort_by_key(|&v| (std::cmp::Reverse(demand[v]), v));
            if targets.len() < d {
                return Err(SeqError::NonGraphic);
            }
            for &t in targets.iter().take(d) {
                debug_assert!(!g.has_edge(pivot, t));
                g.add_edge(pivot, t);
                demand[t] -= 1;
            }
        }
        debug_assert_eq!(g.degrees(), self.terms);
        Ok(g)
    }

    /// True iff the top `|h|` terms dominate h's sorted degree sequence
    /// termwise; false when the sequence is shorter than h.
    pub fn degree_sufficient_for(&self, h: &SmallGraph) -> bool {
        let k = h.order();
        if self.terms.len() < k {
            return false;
        }
        let hs = h.degree_sequence();
        self.terms
            .iter()
            .zip(hs.terms().iter())
            .all(|(&d, &hd)| d >= hd)
    }
}

impl fmt::Display for GraphicSequence {
    /// Multiplicity notation: runs of equal terms collapse to `d^m`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.terms.len() {
            let mut j = i;
            while j < self.terms.len() && self.terms[j] == self.terms[i] {
                j += 1;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if j - i == 1 {
                write!(f, "{}", self.terms[i])?;
            } else {
                write!(f, "{}^{}", self.terms[i], j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for GraphicSequence {
    type Err = SeqError;

    /// Parses comma-separated terms with optional `d^m` multiplicities,
    /// whitespace-insensitive; the result is sorted nonincreasing.
    fn from_str(s: &str) -> Result<Self, SeqError> {
        let mut terms = Vec::new();
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(SeqError::EmptyInput);
        }
        for tok in cleaned.split(',') {
            if tok.is_empty() {
                return Err(SeqError::BadToken(tok.to_string()));
            }
            let (d, m) = match tok.split_once('^') {
                Some((d, m)) => (
                    d.parse::<usize>()
                        .map_err(|_| SeqError::BadToken(tok.to_string()))?,
                    m.parse::<usize>()
                        .map_err(|_| SeqError::BadToken(tok.to_string()))?,
                ),
                None => (
                    tok.parse::<usize>()
                        .map_err(|_| SeqError::BadToken(tok.to_string()))?,
                    1,
                ),
            };
            if m == 0 {
                return Err(SeqError::BadToken(tok.to_string()));
            }
            terms.extend(std::iter::repeat(d).take(m));
        }
        Ok(GraphicSequence::from_unsorted(terms))
    }
}

impl Serialize for GraphicSequence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GraphicSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Kleitman–Wang layoff
// ---------------------------------------------------------------------------

/// The degrees touched by one layoff: the removed value and the new values
/// of the decremented positions (enough to reverse the step against any
/// realization of the reduced sequence).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoffRecord {
    pub value: usize,
    pub lowered: Vec<usize>,
}

/// Lays off the term at 1-based `index`: removes it and decrements the
/// `d_index` largest remaining terms (the positions before `index` first,
/// continuing past it when `d_index >= index`). The result is re-sorted;
/// the sum always drops by exactly `2 * d_index`. The input is graphic iff
/// the output is.
pub fn layoff(seq: &GraphicSequence, index: usize) -> Result<GraphicSequence, SeqError> {
    layoff_with_record(seq, index).map(|(s, _)| s)
}

/// As [`layoff`], also returning the record needed to reverse the step.
pub fn layoff_with_record(
    seq: &GraphicSequence,
    index: usize,
) -> Result<(GraphicSequence, LayoffRecord), SeqError> {
    let n = seq.len();
    if index == 0 || index > n {
        return Err(SeqError::IndexOutOfRange { index, len: n });
    }
    if seq.max_term() > n.saturating_sub(1) {
        return Err(SeqError::TermTooLarge {
            term: seq.max_term(),
            max: n.saturating_sub(1),
        });
    }
    let terms = seq.terms();
    let d = terms[index - 1];
    let mut out = Vec::with_capacity(n - 1);
    let mut lowered = Vec::with_capacity(d);
    if d < index {
        // decrement the d largest terms, all before position index
        for (pos, &t) in terms.iter().enumerate() {
            if pos + 1 == index {
                continue;
            }
            if pos < d {
                out.push(t - 1);
                lowered.push(t - 1);
            } else {
                out.push(t);
            }
        }
    } else {
        // decrement positions 1..index-1 and index+1..=d+1; hitting a zero
        // there proves the input non-graphic (the term at `index` would
        // need more positive-degree partners than exist)
        for (pos, &t) in terms.iter().enumerate() {
            if pos + 1 == index {
                continue;
            }
            if pos + 1 <= d + 1 {
                if t == 0 {
                    return Err(SeqError::DegenerateLayoff);
                }
                out.push(t - 1);
                lowered.push(t - 1);
            } else {
                out.push(t);
            }
        }
    }
    debug_assert_eq!(lowered.len(), d);
    out.sort_unstable_by(|a, b| b.cmp(a));
    lowered.sort_unstable_by(|a, b| b.cmp(a));
    let reduced = GraphicSequence::from_sorted_unchecked(out);
    debug_assert_eq!(reduced.sum() + 2 * d, seq.sum());
    Ok((reduced, LayoffRecord { value: d, lowered }))
}

// ---------------------------------------------------------------------------
// Slack functions and the iterated minimum-term reduction
// ---------------------------------------------------------------------------

/// Nondecreasing slack term `omega(n)`, evaluated exactly in integers.
/// The `shift` halves the value per reduction stage (`floor(omega / 2^s)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackFunction {
    kind: SlackKind,
    shift: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum SlackKind {
    Constant(usize),
    /// `scale * floor(sqrt(n))`
    SqrtScale(usize),
}

impl SlackFunction {
    pub fn constant(c: usize) -> Self {
        SlackFunction {
            kind: SlackKind::Constant(c),
            shift: 0,
        }
    }

    pub fn sqrt_scale(scale: usize) -> Self {
        SlackFunction {
            kind: SlackKind::SqrtScale(scale),
            shift: 0,
        }
    }

    /// The same slack divided by `2^extra` (floor).
    pub fn halved(&self, extra: u32) -> Self {
        SlackFunction {
            kind: self.kind,
            shift: self.shift + extra,
        }
    }

    pub fn eval(&self, n: usize) -> usize {
        let base = match self.kind {
            SlackKind::Constant(c) => c,
            SlackKind::SqrtScale(s) => s * isqrt(n),
        };
        base >> self.shift
    }
}

impl fmt::Display for SlackFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SlackKind::Constant(c) => write!(f, "const:{c}")?,
            SlackKind::SqrtScale(s) => write!(f, "sqrt:{s}")?,
        }
        if self.shift > 0 {
            write!(f, "/2^{}", self.shift)?;
        }
        Ok(())
    }
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Exact potential number of the clique `K_k` at order `n`:
/// `(k-2)(2n-k+1) + 2`, valid for `n >= C(k,2) + 3`.
pub fn clique_potential_number(k: usize, n: usize) -> usize {
    (k - 2) * (2 * n + 1 - k) + 2
}

/// Certificate that a sequence is potentially `K_k`-graphic because an
/// intermediate reduced sequence crossed the clique sum threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueCertificate {
    pub clique_order: usize,
    /// Number of layoffs applied before the threshold was crossed.
    pub layoffs_applied: usize,
    pub residual_length: usize,
    pub residual_sum: usize,
    pub threshold: usize,
}

/// Residual output of the iterated reduction, with the ordered layoff log
/// and the exact length bound report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualReduction {
    pub sequence: GraphicSequence,
    pub log: Vec<LayoffRecord>,
    pub initial_len: usize,
    /// Whether `n' * (2(k-2) - m) >= omega(n)` held (guaranteed only for
    /// large n; reported, not assumed).
    pub length_bound_met: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LayoffOutcome {
    Residual(ResidualReduction),
    Clique(CliqueCertificate),
}

/// Repeatedly lays off a minimum term (largest index among ties) until the
/// minimum exceeds `m/2`, short-circuiting with a clique certificate when
/// the running sum reaches the `K_k` threshold at a length where the closed
/// form applies.
///
/// Requires `sigma >= m*n + slack(n)`, `k >= 3`, and `1 <= m < 2(k-2)`.
/// On the residual branch the output satisfies `sigma' >= m*n' + slack(n')`
/// and `2*min' > m`; the length bound is reported in the result.
pub fn iterated_min_layoff(
    seq: &GraphicSequence,
    m: usize,
    slack: &SlackFunction,
    k: usize,
) -> Result<LayoffOutcome, SeqError> {
    if k < 3 {
        return Err(SeqError::BadCliqueOrder(k));
    }
    if m == 0 || m >= 2 * (k - 2) {
        return Err(SeqError::BadSlope {
            m,
            limit: 2 * (k - 2),
        });
    }
    let n0 = seq.len();
    let required = m * n0 + slack.eval(n0);
    if seq.sum() < required {
        return Err(SeqError::SumTooSmall {
            sum: seq.sum(),
            required,
        });
    }
    let min_len_for_formula = k * (k - 1) / 2 + 3;
    let mut cur = seq.clone();
    let mut log = Vec::new();
    loop {
        if !cur.is_empty() && 2 * cur.min_term() > m {
            let bound_met = cur.len() * (2 * (k - 2) - m) >= slack.eval(n0);
            return Ok(LayoffOutcome::Residual(ResidualReduction {
                sequence: cur,
                log,
                initial_len: n0,
                length_bound_met: bound_met,
            }));
        }
        if cur.len() >= min_len_for_formula
            && cur.sum() >= clique_potential_number(k, cur.len())
        {
            return Ok(LayoffOutcome::Clique(CliqueCertificate {
                clique_order: k,
                layoffs_applied: log.len(),
                residual_length: cur.len(),
                residual_sum: cur.sum(),
                threshold: clique_potential_number(k, cur.len()),
            }));
        }
        if cur.is_empty() {
            // cannot happen while the sum precondition holds; return the
            // degenerate residual rather than loop
            return Ok(LayoffOutcome::Residual(ResidualReduction {
                sequence: cur,
                log,
                initial_len: n0,
                length_bound_met: false,
            }));
        }
        let last = cur.len();
        let (next, rec) = layoff_with_record(&cur, last)?;
        log.push(rec);
        cur = next;
    }
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Streams every graphic sequence of length `n` (terms may be 0) in
/// lexicographically decreasing order, optionally restricted to a fixed
/// (even) sum. No duplicates.
pub fn enumerate_graphic(n: usize, sum: Option<usize>) -> GraphicSequences {
    let dead = matches!(sum, Some(s) if s % 2 == 1 || s > n * n.saturating_sub(1));
    GraphicSequences {
        n,
        sum,
        prefix: Vec::with_capacity(n),
        prefix_sum: 0,
        fresh: true,
        done: dead || n == 0,
    }
}

pub struct GraphicSequences {
    n: usize,
    sum: Option<usize>,
    prefix: Vec<usize>,
    prefix_sum: usize,
    fresh: bool,
    done: bool,
}

impl GraphicSequences {
    /// Fills the prefix to full length with the greedy maximum at each slot;
    /// false when the current prefix admits no completion.
    fn descend(&mut self) -> bool {
        while self.prefix.len() < self.n {
            let bound = self.prefix.last().copied().unwrap_or(self.n - 1);
            let v = match self.sum {
                None => bound,
                Some(s) => {
                    let remaining = s - self.prefix_sum;
                    let slots_here_on = self.n - self.prefix.len();
                    let v = bound.min(remaining);
                    if remaining > v * slots_here_on {
                        return false;
                    }
                    v
                }
            };
            self.prefix.push(v);
            self.prefix_sum += v;
        }
        true
    }

    /// Largest feasible value strictly below `v` at `slot`, or None.
    fn next_value_down(&self, v: usize, slot: usize) -> Option<usize> {
        if v == 0 {
            return None;
        }
        match self.sum {
            None => Some(v - 1),
            Some(s) => {
                let remaining = s - self.prefix_sum;
                let slots_here_on = self.n - slot;
                let cand = (v - 1).min(remaining);
                if remaining > cand * slots_here_on {
                    None
                } else {
                    Some(cand)
                }
            }
        }
    }

    /// Backtracks to the next unexplored branch; false when exhausted.
    fn step(&mut self) -> bool {
        while let Some(v) = self.prefix.pop() {
            self.prefix_sum -= v;
            let slot = self.prefix.len();
            if let Some(v2) = self.next_value_down(v, slot) {
                self.prefix.push(v2);
                self.prefix_sum += v2;
                return true;
            }
        }
        false
    }
}

impl Iterator for GraphicSequences {
    type Item = GraphicSequence;

    fn next(&mut self) -> Option<GraphicSequence> {
        if self.done {
            return None;
        }
        loop {
            let complete = if self.fresh {
                self.fresh = false;
                self.descend()
            } else if self.step() {
                self.descend()
            } else {
                self.done = true;
                return None;
            };
            if complete {
                debug_assert_eq!(self.prefix.len(), self.n);
                let cand = GraphicSequence::from_sorted_unchecked(self.prefix.clone());
                if cand.is_graphic() {
                    return Some(cand);
                }
                // fall through: leave this leaf on the next step()
                self.fresh = false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{canonical_key, families};

    fn seq(terms: &[usize]) -> GraphicSequence {
        GraphicSequence::new(terms.to_vec()).unwrap()
    }

    #[test]
    fn graphic_known_cases() {
        assert!(seq(&[2, 2, 2, 2, 2]).is_graphic());
        assert!(seq(&[0, 0, 0]).is_graphic());
        assert!(!seq(&[3, 3, 1, 1]).is_graphic());
    }

    /// Independent check for (3,3,1,1): no 4-vertex labeled graph realizes it.
    #[test]
    fn graphic_rejection_matches_brute_force() {
        let target = [3usize, 3, 1, 1];
        let mut found = false;
        for code in 0u32..1 << 6 {
            let mut degs = [0usize; 4];
            let mut bit = 0;
            for i in 0..4 {
                for j in i + 1..4 {
                    if code >> bit & 1 == 1 {
                        degs[i] += 1;
                        degs[j] += 1;
                    }
                    bit += 1;
                }
            }
            degs.sort_unstable_by(|a, b| b.cmp(a));
            if degs == target {
                found = true;
            }
        }
        assert!(!found);
    }

    #[test]
    fn constructor_rejects_unsorted() {
        assert_eq!(
            GraphicSequence::new(vec![1, 2]).unwrap_err(),
            SeqError::Unsorted
        );
    }

    #[test]
    fn realize_triangle() {
        let g = seq(&[2, 2, 2]).realize().unwrap();
        assert_eq!(canonical_key(&g), canonical_key(&families::cycle(3)));
    }

    #[test]
    fn realize_two_disjoint_edges() {
        let g = seq(&[1, 1, 1, 1]).realize().unwrap();
        assert_eq!(canonical_key(&g), canonical_key(&families::matching(2)));
    }

    #[test]
    fn realize_k4() {
        let g = seq(&[3, 3, 3, 3]).realize().unwrap();
        assert_eq!(canonical_key(&g), canonical_key(&families::complete(4)));
    }

    #[test]
    fn realize_rejects_non_graphic() {
        assert_eq!(seq(&[3, 3, 1, 1]).realize().unwrap_err(), SeqError::NonGraphic);
    }

    #[test]
    fn realize_first_vertex_dominates_top_block() {
        let s = seq(&[4, 3, 3, 2, 2, 2]);
        let g = s.realize().unwrap();
        assert_eq!(g.degrees(), s.terms());
        for v in 1..=4 {
            assert!(g.has_edge(0, v));
        }
    }

    #[test]
    fn layoff_low_branch() {
        let (r, rec) = layoff_with_record(&seq(&[3, 3, 2, 2, 2]), 5).unwrap();
        assert_eq!(r.terms(), &[2, 2, 2, 2]);
        assert!(r.is_graphic());
        assert_eq!(rec.value, 2);
        assert_eq!(rec.lowered, vec![2, 2]);
    }

    #[test]
    fn layoff_high_branch_triangle() {
        let r = layoff(&seq(&[2, 2, 2]), 1).unwrap();
        assert_eq!(r.terms(), &[1, 1]);
    }

    #[test]
    fn layoff_isolated_vertex() {
        let r = layoff(&seq(&[0, 0]), 2).unwrap();
        assert_eq!(r.terms(), &[0]);
    }

    #[test]
    fn layoff_index_out_of_range() {
        assert!(matches!(
            layoff(&seq(&[2, 2, 2]), 4),
            Err(SeqError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            layoff(&seq(&[2, 2, 2]), 0),
            Err(SeqError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn layoff_drops_sum_by_twice_the_term() {
        let s = seq(&[4, 3, 3, 2, 2, 1, 1]);
        for index in 1..=s.len() {
            let d = s.terms()[index - 1];
            let r = layoff(&s, index).unwrap();
            assert_eq!(r.sum() + 2 * d, s.sum());
        }
    }

    #[test]
    fn layoff_preserves_graphicality_both_ways() {
        // include non-graphic inputs: the equivalence is an iff
        let cases = [
            vec![3, 3, 2, 2, 2],
            vec![3, 3, 3, 1],
            vec![4, 4, 4, 4, 4],
            vec![5, 1, 1, 1, 1, 1],
            vec![3, 2, 1, 1, 1],
        ];
        for terms in cases {
            let s = GraphicSequence::new(terms).unwrap();
            for index in 1..=s.len() {
                let r = layoff(&s, index).unwrap();
                assert_eq!(s.is_graphic(), r.is_graphic(), "seq {s} index {index}");
            }
        }
    }

    #[test]
    fn degree_sufficiency_cases() {
        assert!(seq(&[3, 2, 2, 1]).degree_sufficient_for(&families::path(4)));
        assert!(!seq(&[2, 2, 2, 2, 2]).degree_sufficient_for(&families::complete(4)));
        assert!(!seq(&[1, 1]).degree_sufficient_for(&families::complete(3)));
    }

    #[test]
    fn display_and_parse_multiplicity() {
        let s = seq(&[7, 2, 2, 2, 2, 2, 2, 1]);
        assert_eq!(s.to_string(), "7,2^6,1");
        let back: GraphicSequence = "7, 2^6 ,1".parse().unwrap();
        assert_eq!(back, s);
        let unsorted: GraphicSequence = "1,7,2^6".parse().unwrap();
        assert_eq!(unsorted, s);
        assert!(" ".parse::<GraphicSequence>().is_err());
        assert!("2^0".parse::<GraphicSequence>().is_err());
        assert!("a,b".parse::<GraphicSequence>().is_err());
    }

    #[test]
    fn enumerate_n3_exact_set_in_order() {
        let got: Vec<GraphicSequence> = enumerate_graphic(3, None).collect();
        let want: Vec<GraphicSequence> = [
            vec![2, 2, 2],
            vec![2, 1, 1],
            vec![1, 1, 0],
            vec![0, 0, 0],
        ]
        .into_iter()
        .map(|t| GraphicSequence::new(t).unwrap())
        .collect();
        assert_eq!(got, want);
    }

    /// The n = 3 catalog agrees with brute force over all labeled graphs.
    #[test]
    fn enumerate_n3_matches_brute_force() {
        let mut expect: Vec<Vec<usize>> = Vec::new();
        for code in 0u32..1 << 3 {
            let mut degs = vec![0usize; 3];
            let mut bit = 0;
            for i in 0..3 {
                for j in i + 1..3 {
                    if code >> bit & 1 == 1 {
                        degs[i] += 1;
                        degs[j] += 1;
                    }
                    bit += 1;
                }
            }
            degs.sort_unstable_by(|a, b| b.cmp(a));
            if !expect.contains(&degs) {
                expect.push(degs);
            }
        }
        let got: Vec<Vec<usize>> = enumerate_graphic(3, None)
            .map(|s| s.terms().to_vec())
            .collect();
        assert_eq!(got.len(), expect.len());
        for e in expect {
            assert!(got.contains(&e));
        }
    }

    #[test]
    fn enumerate_with_sum_filter() {
        let got: Vec<GraphicSequence> = enumerate_graphic(2, Some(2)).collect();
        assert_eq!(got, vec![seq(&[1, 1])]);
        assert_eq!(enumerate_graphic(2, Some(3)).count(), 0);
        let singles: Vec<GraphicSequence> = enumerate_graphic(1, None).collect();
        assert_eq!(singles, vec![seq(&[0])]);
    }

    #[test]
    fn enumerate_sums_partition_the_catalog() {
        let all: Vec<GraphicSequence> = enumerate_graphic(6, None).collect();
        let mut by_sum = 0usize;
        for s in (0..=30).step_by(2) {
            by_sum += enumerate_graphic(6, Some(s)).count();
        }
        assert_eq!(all.len(), by_sum);
    }

    #[test]
    fn min_layoff_zero_iterations() {
        let s = seq(&[3, 3, 2, 2, 2]);
        let out = iterated_min_layoff(&s, 2, &SlackFunction::constant(0), 5).unwrap();
        match out {
            LayoffOutcome::Residual(r) => {
                assert_eq!(r.sequence, s);
                assert!(r.log.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn min_layoff_trims_exactly_the_ones() {
        // a graphic heavy-sum input whose only sub-threshold terms are 1s:
        // C4 with two degree-2 apexes, each carrying a pendant
        let g = {
            let mut g = families::cycle(4);
            let a = g.add_vertex();
            let b = g.add_vertex();
            for v in 0..4 {
                g.add_edge(if v % 2 == 0 { a } else { b }, v);
            }
            let p = g.add_vertex();
            let q = g.add_vertex();
            g.add_edge(a, p);
            g.add_edge(b, q);
            g
        };
        let s = g.degree_sequence();
        assert_eq!(s.terms(), &[3, 3, 3, 3, 3, 3, 1, 1]);
        let out = iterated_min_layoff(&s, 2, &SlackFunction::constant(4), 5).unwrap();
        match out {
            LayoffOutcome::Residual(r) => {
                assert_eq!(r.log.len(), 2);
                assert!(r.log.iter().all(|rec| rec.value == 1));
                assert!(r.sequence.min_term() >= 2);
                assert!(r.sequence.is_graphic());
                // sum bound with the same slack at the reduced length
                assert!(r.sequence.sum() >= 2 * r.sequence.len() + 4);
                assert!(r.length_bound_met);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn min_layoff_clique_certificate() {
        // K8 with two pendants: near-complete with a light tail, so the
        // clique sum threshold fires
        let mut g = families::complete(8);
        let p = g.add_vertex();
        let q = g.add_vertex();
        g.add_edge(0, p);
        g.add_edge(1, q);
        let s = g.degree_sequence();
        assert_eq!(s.terms(), &[8, 8, 7, 7, 7, 7, 7, 7, 1, 1]);
        let out = iterated_min_layoff(&s, 3, &SlackFunction::constant(2), 4).unwrap();
        match out {
            LayoffOutcome::Clique(cert) => {
                assert_eq!(cert.clique_order, 4);
                assert!(cert.residual_sum >= cert.threshold);
                assert!(cert.residual_length >= 4 * 3 / 2 + 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn min_layoff_preconditions() {
        let s = seq(&[2, 2, 2]);
        assert!(matches!(
            iterated_min_layoff(&s, 2, &SlackFunction::constant(100), 5),
            Err(SeqError::SumTooSmall { .. })
        ));
        assert!(matches!(
            iterated_min_layoff(&s, 2, &SlackFunction::constant(0), 3),
            Err(SeqError::BadSlope { .. })
        ));
        assert!(matches!(
            iterated_min_layoff(&s, 2, &SlackFunction::constant(0), 2),
            Err(SeqError::BadCliqueOrder(2))
        ));
    }

    #[test]
    fn slack_functions() {
        let c = SlackFunction::constant(10);
        assert_eq!(c.eval(5), 10);
        assert_eq!(c.halved(2).eval(5), 2);
        let s = SlackFunction::sqrt_scale(3);
        assert_eq!(s.eval(16), 12);
        assert_eq!(s.eval(17), 12);
        assert_eq!(s.eval(25), 15);
        assert_eq!(s.halved(1).eval(16), 6);
    }

    #[test]
    fn clique_potential_closed_form() {
        assert_eq!(clique_potential_number(3, 6), 12);
        assert_eq!(clique_potential_number(4, 8), 28);
        assert_eq!(clique_potential_number(5, 13), 3 * (2 * 13 - 4) + 2);
    }
}
