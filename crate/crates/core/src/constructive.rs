//! Constructive embedding machinery: the bounded-maximum-degree embedding
//! by degree-preserving 2-switch repair, and the two-stage reduce /
//! reconstruct pipeline that shrinks a heavy sequence to a residual,
//! embeds a pattern piece there, and reverses every reduction step.

use std::cmp::Reverse;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comb::{binomial, Combinations};
use crate::graph::{families, independence_number, SmallGraph};
use crate::potential::{profile, split_canonicalize, PotentialError};
use crate::seq::{
    clique_potential_number, iterated_min_layoff, layoff_with_record, CliqueCertificate,
    GraphicSequence, LayoffOutcome, LayoffRecord, SeqError, SlackFunction,
};

#[derive(Debug, Error)]
pub enum ConstructiveError {
    #[error("sequence is not graphic")]
    NotGraphic,
    #[error("sequence is not degree sufficient for the pattern")]
    NotDegreeSufficient,
    #[error("minimum term {min} is below the required {need}")]
    MinTermTooSmall { min: usize, need: usize },
    #[error("maximum degree {d1} is not below the margin {limit}")]
    MaxDegreeTooLarge { d1: usize, limit: usize },
    #[error("n = {n} is below the supported minimum {min}")]
    OrderTooSmall { n: usize, min: usize },
    #[error("pattern order {0} is too small for the reduction (need at least 3)")]
    PatternTooSmall(usize),
    #[error("pattern slope is zero; the reduction does not apply")]
    SlopeZero,
    #[error("sum {sum} is below the required {required}")]
    SumTooSmall { sum: usize, required: usize },
    #[error("n = {n} is below the clique-formula range {min}")]
    NTooSmall { n: usize, min: usize },
    #[error("2-switch repair stalled with {placed} of {needed} pattern edges placed")]
    RepairStalled { placed: usize, needed: usize },
    #[error("stage {stage}: {detail}")]
    SlackInsufficient { stage: usize, detail: String },
    #[error("realization does not match the recorded residual sequence")]
    TraceMismatch,
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

/// The embedding constants of a pattern: `g` bounds the number of vertices
/// outside the target set whose neighborhoods lie entirely inside it, and
/// `f = g + 4k^2 + k + 1` is the max-degree margin for guaranteed repair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BmdtConstants {
    pub pattern_order: usize,
    pub independence: usize,
    pub g_value: u64,
    pub f_value: u64,
}

impl BmdtConstants {
    pub fn from_parameters(alpha: usize, k: usize) -> Self {
        let g = binomial(k as u64, (k - alpha) as u64)
            * (2 * binomial((k - alpha) as u64, 2) + alpha as u64 - 1);
        let f = g + 4 * (k as u64) * (k as u64) + k as u64 + 1;
        BmdtConstants {
            pattern_order: k,
            independence: alpha,
            g_value: g,
            f_value: f,
        }
    }

    /// Smallest order the embedding accepts at all.
    pub fn min_order(&self) -> usize {
        2 * self.pattern_order + 2
    }

    /// Whether the guaranteed margin `d_1 < n - f` is satisfiable at n.
    pub fn guaranteed_margin(&self, n: usize) -> bool {
        n as u64 >= self.f_value + 2
    }

    /// Exclusive upper bound for `d_1`: the guaranteed margin when it is
    /// satisfiable, otherwise the reported desk-scale margin `n - 2k`.
    pub fn max_degree_limit(&self, n: usize) -> usize {
        if self.guaranteed_margin(n) {
            n - self.f_value as usize
        } else {
            n.saturating_sub(2 * self.pattern_order)
        }
    }
}

/// Computes the constants for a concrete pattern.
pub fn bmdt_constants(h: &SmallGraph) -> BmdtConstants {
    BmdtConstants::from_parameters(independence_number(h), h.order())
}

// ---------------------------------------------------------------------------
// Bounded-maximum-degree embedding
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbedReport {
    pub switches: usize,
    /// True when the run was inside the guaranteed `d_1 < n - f` margin.
    pub guaranteed_margin: bool,
}

/// Embeds `h` on the `k` highest-degree vertices of some realization of
/// `seq`, starting from the Havel–Hakimi realization and repeatedly
/// applying degree-preserving 2-switches, each placing one missing pattern
/// edge without disturbing those already placed.
pub fn bmdt_embed(seq: &GraphicSequence, h: &SmallGraph) -> Result<SmallGraph, ConstructiveError> {
    bmdt_embed_report(seq, h).map(|(g, _)| g)
}

pub fn bmdt_embed_report(
    seq: &GraphicSequence,
    h: &SmallGraph,
) -> Result<(SmallGraph, EmbedReport), ConstructiveError> {
    let consts = bmdt_constants(h);
    let k = h.order();
    let n = seq.len();
    if !seq.is_graphic() {
        return Err(ConstructiveError::NotGraphic);
    }
    if !seq.degree_sufficient_for(h) {
        return Err(ConstructiveError::NotDegreeSufficient);
    }
    let need_min = k - consts.independence;
    if seq.min_term() < need_min {
        return Err(ConstructiveError::MinTermTooSmall {
            min: seq.min_term(),
            need: need_min,
        });
    }
    if n < consts.min_order() {
        return Err(ConstructiveError::OrderTooSmall {
            n,
            min: consts.min_order(),
        });
    }
    let limit = consts.max_degree_limit(n);
    if seq.max_term() >= limit {
        return Err(ConstructiveError::MaxDegreeTooLarge {
            d1: seq.max_term(),
            limit,
        });
    }
    let g = seq.realize()?;
    let (g, switches) = repair_to_pattern(g, h, k)?;
    Ok((
        g,
        EmbedReport {
            switches,
            guaranteed_margin: consts.guaranteed_margin(n),
        },
    ))
}

/// The repair loop. Positions 0..k host the pattern: position i plays the
/// role of the i-th pattern vertex in degree-descending order.
fn repair_to_pattern(
    mut g: SmallGraph,
    h: &SmallGraph,
    k: usize,
) -> Result<(SmallGraph, usize), ConstructiveError> {
    let n = g.order();
    let mut roles: Vec<usize> = (0..k).collect();
    roles.sort_by_key(|&v| (Reverse(h.degree(v)), v));
    // hs[i][j]: positions i,j carry a pattern edge
    let mut hs = vec![vec![false; k]; k];
    let mut needed = 0usize;
    for i in 0..k {
        for j in i + 1..k {
            if h.has_edge(roles[i], roles[j]) {
                hs[i][j] = true;
                hs[j][i] = true;
                needed += 1;
            }
        }
    }
    let is_hs = |u: usize, v: usize| u < k && v < k && hs[u][v];
    let mut switches = 0usize;
    loop {
        let missing: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| hs[i][j] && !g.has_edge(i, j))
            .collect();
        if missing.is_empty() {
            return Ok((g, switches));
        }
        let mut advanced = false;
        'missing: for &(vi, vj) in &missing {
            // partners whose removal does not disturb placed pattern edges
            let a_cands: Vec<usize> = g
                .neighbors(vi)
                .filter(|&a| a != vj && !is_hs(vi, a))
                .collect();
            let b_cands: Vec<usize> = g
                .neighbors(vj)
                .filter(|&b| b != vi && !is_hs(vj, b))
                .collect();
            // plain switch: vi-a, vj-b  ->  vi-vj, a-b
            for &a in &a_cands {
                for &b in &b_cands {
                    if apply_switch(&mut g, &[(vi, a), (vj, b)], &[(vi, vj), (a, b)]) {
                        switches += 1;
                        advanced = true;
                        continue 'missing;
                    }
                }
            }
            // four-edge switch through the outside-of-S structure:
            // vi-ai, vj-aj, xi-yi, xj-yj  ->  vi-vj, ai-xi, aj-xj, yi-yj
            let deg_out: Vec<usize> = (0..n)
                .map(|v| g.neighbors(v).filter(|&u| u >= k).count())
                .collect();
            for &ai in &a_cands {
                for &aj in &b_cands {
                    let xi_set: Vec<usize> = (k..n)
                        .filter(|&v| v != ai && !g.has_edge(ai, v) && deg_out[v] > 0)
                        .collect();
                    let xj_set: Vec<usize> = (k..n)
                        .filter(|&v| v != aj && !g.has_edge(aj, v) && deg_out[v] > 0)
                        .collect();
                    for &xi in &xi_set {
                        let yi_set: Vec<usize> =
                            g.neighbors(xi).filter(|&y| y >= k).collect();
                        for &yi in &yi_set {
                            for &xj in xj_set.iter().filter(|&&x| x != xi) {
                                let yj_set: Vec<usize> = g
                                    .neighbors(xj)
                                    .filter(|&y| y >= k && y != yi && !g.has_edge(yi, y))
                                    .collect();
                                for &yj in &yj_set {
                                    if apply_switch(
                                        &mut g,
                                        &[(vi, ai), (vj, aj), (xi, yi), (xj, yj)],
                                        &[(vi, vj), (ai, xi), (aj, xj), (yi, yj)],
                                    ) {
                                        switches += 1;
                                        advanced = true;
                                        continue 'missing;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        if !advanced {
            return Err(ConstructiveError::RepairStalled {
                placed: needed - missing.len(),
                needed,
            });
        }
    }
}

/// Applies an edge exchange when it is valid: removed pairs present and
/// pairwise distinct, added pairs absent, loop-free, pairwise distinct,
/// and disjoint from the removed set. Every vertex occurs equally often on
/// both sides by construction, so validity implies degree preservation.
fn apply_switch(
    g: &mut SmallGraph,
    removed: &[(usize, usize)],
    added: &[(usize, usize)],
) -> bool {
    let norm = |&(a, b): &(usize, usize)| (a.min(b), a.max(b));
    let rem: Vec<(usize, usize)> = removed.iter().map(norm).collect();
    let add: Vec<(usize, usize)> = added.iter().map(norm).collect();
    for &(a, b) in &add {
        if a == b {
            return false;
        }
    }
    for (idx, &e) in rem.iter().enumerate() {
        if rem[idx + 1..].contains(&e) || add.contains(&e) {
            return false;
        }
        if !g.has_edge(e.0, e.1) {
            return false;
        }
    }
    for (idx, &e) in add.iter().enumerate() {
        if add[idx + 1..].contains(&e) {
            return false;
        }
        if g.has_edge(e.0, e.1) {
            return false;
        }
    }
    #[cfg(debug_assertions)]
    let before = g.degree_sequence();
    for &(a, b) in &rem {
        g.remove_edge(a, b);
    }
    for &(a, b) in &add {
        g.add_edge(a, b);
    }
    #[cfg(debug_assertions)]
    debug_assert_eq!(g.degree_sequence(), before, "switch must preserve degrees");
    true
}

// ---------------------------------------------------------------------------
// Reduction traces
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// The stage index reached `k - independence`.
    IndexLimit,
    /// The top degree dropped below `n - f(independence, k - i)`.
    MaxDegreeSmall,
}

/// Record of one deletion of the non-neighbors of the top vertex: the
/// removed graph, its edges into the kept part (keyed by position in the
/// sorted kept sequence), and the kept sequence itself.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeletionRecord {
    pub removed: SmallGraph,
    pub cross_links: Vec<Vec<usize>>,
    pub kept: GraphicSequence,
}

/// One full reduction stage applied to `sequence`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionStage {
    pub sequence: GraphicSequence,
    pub top_degree: usize,
    pub deletion: DeletionRecord,
    pub trims: Vec<LayoffRecord>,
    pub crown: LayoffRecord,
}

/// Everything needed to reverse the reduction: the initial trim log, the
/// per-stage records, and the residual sequence with its context.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub original: GraphicSequence,
    pub intro_trims: Vec<LayoffRecord>,
    pub stages: Vec<ReductionStage>,
    pub residual: GraphicSequence,
    pub termination: Termination,
    /// `t`: the number of leading residual terms at least `k - l - 1`.
    pub high_degree_count: usize,
    pub slack: SlackFunction,
    pub slope: usize,
    pub pattern_order: usize,
    pub independence: usize,
    /// Upper bound on the sum lost to one deletion round.
    pub deletion_sum_bound: usize,
}

impl ReductionTrace {
    pub fn ell(&self) -> usize {
        self.stages.len()
    }

    /// Replays the stored bounds: stage count, per-stage sums, and
    /// per-stage minimum terms.
    pub fn audit(&self) -> Result<(), String> {
        let k = self.pattern_order;
        let alpha = self.independence;
        if self.stages.len() > k - alpha {
            return Err(format!(
                "stage count {} exceeds {}",
                self.stages.len(),
                k - alpha
            ));
        }
        let seqs: Vec<&GraphicSequence> = self
            .stages
            .iter()
            .map(|s| &s.sequence)
            .chain(std::iter::once(&self.residual))
            .collect();
        for (i, seq) in seqs.iter().enumerate() {
            let n_i = seq.len() as i64;
            let lhs = seq.sum() as i64;
            let slope_i = self.slope as i64 - 2 * i as i64;
            let rhs = slope_i * n_i + (self.slack.eval(seq.len()) >> i) as i64;
            if lhs < rhs {
                return Err(format!(
                    "stage {i}: sum {lhs} below bound {rhs}"
                ));
            }
            let min2 = 2 * seq.min_term() as i64;
            let need = self.slope as i64 - 2 * i as i64;
            if !seq.is_empty() && min2 < need {
                return Err(format!(
                    "stage {i}: twice the minimum term {min2} below {need}"
                ));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Stage 1: reduce
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ReduceOutcome {
    Reduced(ReductionTrace),
    /// The sequence was proved potentially `K_k`-graphic en route; a
    /// success outcome carrying the certificate.
    PotentiallyClique(CliqueCertificate),
}

/// Reduces a heavy sequence stage by stage: realize with the top vertex
/// dominating the next `d_1` positions, delete its non-neighbors, trim
/// minimum terms, lay off the top, and repeat until the stage index or the
/// max-degree condition stops the process.
pub fn reduce(
    seq: &GraphicSequence,
    h: &SmallGraph,
    slack: &SlackFunction,
) -> Result<ReduceOutcome, ConstructiveError> {
    let prof = profile(h)?;
    let k = prof.order;
    let alpha = prof.independence;
    if k < 3 {
        return Err(ConstructiveError::PatternTooSmall(k));
    }
    let slope = prof.slope;
    if slope == 0 {
        return Err(ConstructiveError::SlopeZero);
    }
    let n = seq.len();
    let required = slope * n + slack.eval(n);
    if seq.sum() < required {
        return Err(ConstructiveError::SumTooSmall {
            sum: seq.sum(),
            required,
        });
    }
    if !seq.is_graphic() {
        return Err(ConstructiveError::NotGraphic);
    }
    if h.edge_count() == k * (k - 1) / 2 {
        // complete pattern: the slope equals 2(k-2), so the sum bound is
        // already above the clique threshold wherever the formula applies
        let min_len = k * (k - 1) / 2 + 3;
        if n < min_len {
            return Err(ConstructiveError::NTooSmall { n, min: min_len });
        }
        debug_assert!(seq.sum() >= clique_potential_number(k, n));
        return Ok(ReduceOutcome::PotentiallyClique(CliqueCertificate {
            clique_order: k,
            layoffs_applied: 0,
            residual_length: n,
            residual_sum: seq.sum(),
            threshold: clique_potential_number(k, n),
        }));
    }
    // initial trim at the full slope
    let (mut cur, intro_trims) = match iterated_min_layoff(seq, slope, slack, k)? {
        LayoffOutcome::Clique(cert) => return Ok(ReduceOutcome::PotentiallyClique(cert)),
        LayoffOutcome::Residual(r) => (r.sequence, r.log),
    };
    let mut stages: Vec<ReductionStage> = Vec::new();
    let termination;
    loop {
        let i = stages.len();
        if i == k - alpha {
            termination = Termination::IndexLimit;
            break;
        }
        let n_i = cur.len();
        if n_i == 0 {
            return Err(ConstructiveError::SlackInsufficient {
                stage: i,
                detail: "sequence exhausted before termination".into(),
            });
        }
        let f_i = BmdtConstants::from_parameters(alpha, k - i).f_value as usize;
        let d1 = cur.max_term();
        if f_i < n_i && d1 < n_i - f_i {
            termination = Termination::MaxDegreeSmall;
            break;
        }
        let (stage, next) = run_stage(&cur, i, slope, slack, k)?;
        match next {
            StageNext::Sequence(s) => {
                stages.push(stage);
                cur = s;
            }
            StageNext::Clique(cert) => {
                return Ok(ReduceOutcome::PotentiallyClique(cert));
            }
        }
    }
    let ell = stages.len();
    let threshold = k - ell - 1;
    let t = cur.terms().iter().take_while(|&&d| d >= threshold).count();
    let m_bound = (0..(k - alpha).max(1))
        .map(|i| {
            2 * BmdtConstants::from_parameters(alpha, k - i).f_value as usize * (2 * k - 4)
        })
        .max()
        .unwrap_or(0);
    Ok(ReduceOutcome::Reduced(ReductionTrace {
        original: seq.clone(),
        intro_trims,
        stages,
        residual: cur,
        termination,
        high_degree_count: t,
        slack: *slack,
        slope,
        pattern_order: k,
        independence: alpha,
        deletion_sum_bound: m_bound,
    }))
}

enum StageNext {
    Sequence(GraphicSequence),
    Clique(CliqueCertificate),
}

fn run_stage(
    cur: &GraphicSequence,
    i: usize,
    slope: usize,
    slack: &SlackFunction,
    k: usize,
) -> Result<(ReductionStage, StageNext), ConstructiveError> {
    let g = cur.realize()?;
    let n = g.order();
    let d1 = cur.max_term();
    // kept part: the closed neighborhood of the top vertex
    let mut kept_ids: Vec<usize> = vec![0];
    kept_ids.extend(g.neighbors(0));
    kept_ids.sort_unstable();
    let deleted_ids: Vec<usize> = (0..n).filter(|v| !kept_ids.contains(v)).collect();
    let kept_graph = g.induced(&kept_ids);
    let removed = g.induced(&deleted_ids);
    // kept positions sorted by degree within the kept graph
    let mut kept_order: Vec<usize> = (0..kept_ids.len()).collect();
    kept_order.sort_by_key(|&loc| (Reverse(kept_graph.degree(loc)), loc));
    let mut pos_of_local = vec![0usize; kept_ids.len()];
    for (pos, &loc) in kept_order.iter().enumerate() {
        pos_of_local[loc] = pos;
    }
    let local_of_id = |id: usize| kept_ids.binary_search(&id).expect("kept id");
    let cross_links: Vec<Vec<usize>> = deleted_ids
        .iter()
        .map(|&w| {
            let mut links: Vec<usize> = g
                .neighbors(w)
                .filter(|v| kept_ids.binary_search(v).is_ok())
                .map(|v| pos_of_local[local_of_id(v)])
                .collect();
            links.sort_unstable();
            links
        })
        .collect();
    let kept_seq = kept_graph.degree_sequence();
    debug_assert_eq!(kept_seq.max_term(), kept_seq.len() - 1);
    let deletion = DeletionRecord {
        removed,
        cross_links,
        kept: kept_seq.clone(),
    };
    // trim minimum terms at the reduced slope
    let m_i = slope as i64 - 2 * i as i64;
    let (after_trims, trims) = if m_i >= 1 {
        match iterated_min_layoff(&kept_seq, m_i as usize, &slack.halved(i as u32 + 1), k) {
            Ok(LayoffOutcome::Residual(r)) => (r.sequence, r.log),
            Ok(LayoffOutcome::Clique(cert)) => {
                let stage = ReductionStage {
                    sequence: cur.clone(),
                    top_degree: d1,
                    deletion,
                    trims: Vec::new(),
                    crown: LayoffRecord {
                        value: 0,
                        lowered: Vec::new(),
                    },
                };
                return Ok((stage, StageNext::Clique(cert)));
            }
            Err(SeqError::SumTooSmall { sum, required }) => {
                return Err(ConstructiveError::SlackInsufficient {
                    stage: i,
                    detail: format!(
                        "trim precondition failed after deletion: sum {sum} < {required}"
                    ),
                });
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        (kept_seq.clone(), Vec::new())
    };
    // the top vertex stays universal through the trims
    debug_assert_eq!(after_trims.max_term(), after_trims.len() - 1);
    let (next, crown) = layoff_with_record(&after_trims, 1)?;
    let stage = ReductionStage {
        sequence: cur.clone(),
        top_degree: d1,
        deletion,
        trims,
        crown,
    };
    Ok((stage, StageNext::Sequence(next)))
}

// ---------------------------------------------------------------------------
// Stage 2: reconstruct
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ReconstructReport {
    /// The residual realization occupies vertices `0..core_len`.
    pub core_len: usize,
    /// Dominating clique vertices, one per reversed stage.
    pub clique: Vec<usize>,
}

/// Rebuilds a realization of the original sequence around any realization
/// of the residual, reversing each stage: re-add the dominating top vertex,
/// re-add trimmed vertices against matching degrees, and re-add the deleted
/// non-neighbors with their recorded edges. The residual copy stays induced
/// because no step adds an edge between pre-existing vertices.
pub fn reconstruct(
    trace: &ReductionTrace,
    g_ell: &SmallGraph,
) -> Result<SmallGraph, ConstructiveError> {
    reconstruct_report(trace, g_ell).map(|(g, _)| g)
}

pub fn reconstruct_report(
    trace: &ReductionTrace,
    g_ell: &SmallGraph,
) -> Result<(SmallGraph, ReconstructReport), ConstructiveError> {
    if g_ell.degree_sequence() != trace.residual {
        return Err(ConstructiveError::TraceMismatch);
    }
    let mut g = g_ell.clone();
    let mut clique = Vec::new();
    for stage in trace.stages.iter().rev() {
        // reverse the crown layoff: a vertex adjacent to everything
        let dom = g.add_vertex();
        for v in 0..dom {
            g.add_edge(dom, v);
        }
        clique.push(dom);
        for rec in stage.trims.iter().rev() {
            reattach(&mut g, rec)?;
        }
        debug_assert_eq!(g.degree_sequence(), stage.deletion.kept);
        // reverse the deletion: recorded subgraph plus positional cross links
        let base = g.order();
        let del = &stage.deletion;
        for _ in 0..del.removed.order() {
            g.add_vertex();
        }
        for (u, v) in del.removed.edges() {
            g.add_edge(base + u, base + v);
        }
        let mut order: Vec<usize> = (0..base).collect();
        order.sort_by_key(|&v| (Reverse(g.degree(v)), v));
        for (di, links) in del.cross_links.iter().enumerate() {
            for &pos in links {
                g.add_edge(base + di, order[pos]);
            }
        }
        debug_assert_eq!(g.degree_sequence(), stage.sequence);
    }
    for rec in trace.intro_trims.iter().rev() {
        reattach(&mut g, rec)?;
    }
    if g.degree_sequence() != trace.original {
        return Err(ConstructiveError::TraceMismatch);
    }
    Ok((
        g,
        ReconstructReport {
            core_len: g_ell.order(),
            clique,
        },
    ))
}

/// Reverses one layoff: adds a vertex joined to distinct vertices whose
/// current degrees match the recorded post-layoff values.
fn reattach(g: &mut SmallGraph, rec: &LayoffRecord) -> Result<(), ConstructiveError> {
    let w = g.add_vertex();
    let degs: Vec<usize> = (0..w).map(|v| g.degree(v)).collect();
    let mut chosen = vec![false; w];
    for &target in &rec.lowered {
        let v = (0..w)
            .find(|&v| !chosen[v] && degs[v] == target)
            .ok_or(ConstructiveError::TraceMismatch)?;
        chosen[v] = true;
        g.add_edge(w, v);
    }
    debug_assert_eq!(g.degree(w), rec.value);
    Ok(())
}

// ---------------------------------------------------------------------------
// Final-stage embedding
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum FinalBranch {
    /// The residual was degree sufficient for a split pattern
    /// `K_(k-a-l) join empty(a)`, embedded directly.
    SplitEmbed { clique: usize, independent: usize },
    /// The low-top-degree branch: a clique of size t joined to an induced
    /// piece of the pattern achieving the minimum max degree at its order.
    InducedPiece { clique: usize, piece: SmallGraph },
}

#[derive(Debug, Clone)]
pub struct FinalStage {
    /// A realization of the residual sequence.
    pub graph: SmallGraph,
    /// Vertices carrying the pattern piece; joined with the reconstruction
    /// clique they contain the full pattern.
    pub core: Vec<usize>,
    pub branch: FinalBranch,
}

/// Builds a realization of the residual containing a `(k - l)`-vertex graph
/// that, joined with the reconstruction clique, contains the pattern.
pub fn final_stage_embed(
    trace: &ReductionTrace,
    h: &SmallGraph,
) -> Result<FinalStage, ConstructiveError> {
    let k = trace.pattern_order;
    let alpha = trace.independence;
    let ell = trace.ell();
    let seq = &trace.residual;
    let n = seq.len();
    let t = trace.high_degree_count;
    if n < k - ell {
        return Err(ConstructiveError::SlackInsufficient {
            stage: ell,
            detail: format!("residual length {n} below pattern remainder {}", k - ell),
        });
    }
    if t + alpha + ell >= k {
        // high-top-degree branch: embed the split pattern directly
        let r = k - alpha - ell;
        if r == 0 {
            // the reconstruction clique alone absorbs the non-independent
            // part; any realization carries the independent remainder
            let g = seq.realize()?;
            return Ok(FinalStage {
                graph: g,
                core: (0..alpha).collect(),
                branch: FinalBranch::SplitEmbed {
                    clique: 0,
                    independent: alpha,
                },
            });
        }
        let pattern = families::complete_split(r, alpha);
        let g = bmdt_embed(seq, &pattern).map_err(|e| match e {
            ConstructiveError::RepairStalled { .. } => e,
            other => ConstructiveError::SlackInsufficient {
                stage: ell,
                detail: format!("split embedding preconditions failed: {other}"),
            },
        })?;
        Ok(FinalStage {
            graph: g,
            core: (0..k - ell).collect(),
            branch: FinalBranch::SplitEmbed {
                clique: r,
                independent: alpha,
            },
        })
    } else {
        induced_piece_branch(trace, h, t)
    }
}

/// The `t < k - l - alpha` branch: embed `K_t join empty(k-l-t)`, move it
/// onto the top-degree vertices, delete the clique part, rebuild the rest
/// around a copy of a minimum-max-degree induced piece of the pattern, and
/// re-add the clique.
fn induced_piece_branch(
    trace: &ReductionTrace,
    h: &SmallGraph,
    t: usize,
) -> Result<FinalStage, ConstructiveError> {
    let k = trace.pattern_order;
    let ell = trace.ell();
    let seq = &trace.residual;
    let n = seq.len();
    let fail = |detail: String| ConstructiveError::SlackInsufficient {
        stage: ell,
        detail,
    };
    if t == 0 {
        return Err(fail("no residual term reaches k - l - 1".into()));
    }
    let piece_order = k - ell - t;
    let prof = profile(h)?;
    let target = prof
        .min_max_degree(piece_order)
        .ok_or_else(|| fail(format!("no profile row at order {piece_order}")))?;
    let piece = Combinations::new(k, piece_order)
        .map(|subset| h.induced(&subset))
        .find(|p| p.max_degree() == target)
        .expect("some induced subgraph achieves the minimum");
    // degree sufficiency for the clique-joined piece
    let joined = SmallGraph::join(&families::complete(t), &piece)?;
    if !seq.degree_sufficient_for(&joined) {
        return Err(fail("residual not degree sufficient for the joined piece".into()));
    }
    // embed the split pattern and canonicalize it onto the top vertices
    let split = families::complete_split(t, piece_order);
    let g = bmdt_embed(seq, &split)
        .map_err(|e| fail(format!("split embedding preconditions failed: {e}")))?;
    let g = split_canonicalize(&g, t, piece_order)
        .map_err(|e| fail(format!("canonicalization failed: {e}")))?;
    // top-degree vertex blocks
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (Reverse(g.degree(v)), v));
    let top: Vec<usize> = order[..t].to_vec();
    let sblock: Vec<usize> = order[t..k - ell].to_vec();
    let in_top = |v: usize| top.contains(&v);
    let in_sblock = |v: usize| sblock.contains(&v);
    // demands once the top clique is deleted
    let mut demand: Vec<usize> = (0..n)
        .map(|v| {
            if in_top(v) {
                0
            } else {
                g.degree(v) - top.iter().filter(|&&w| g.has_edge(w, v)).count()
            }
        })
        .collect();
    // record the top block's edges for exact re-insertion
    let top_edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(u, v)| in_top(u) || in_top(v))
        .collect();
    // rebuild: piece on the s-block, spread, residual realization
    let mut rebuilt = SmallGraph::new(n)?;
    let mut piece_verts: Vec<usize> = (0..piece_order).collect();
    piece_verts.sort_by_key(|&v| (Reverse(piece.degree(v)), v));
    for (ra, &pa) in piece_verts.iter().enumerate() {
        for (rb, &pb) in piece_verts.iter().enumerate().skip(ra + 1) {
            if piece.has_edge(pa, pb) {
                rebuilt.add_edge(sblock[ra], sblock[rb]);
                let (da, db) = (demand[sblock[ra]], demand[sblock[rb]]);
                if da == 0 || db == 0 {
                    return Err(fail("piece degrees exceed the residual demand".into()));
                }
                demand[sblock[ra]] = da - 1;
                demand[sblock[rb]] = db - 1;
            }
        }
    }
    // spread the remaining s-block demand to distinct outside vertices
    for &v in &sblock {
        while demand[v] > 0 {
            let u = (0..n)
                .filter(|&u| {
                    u != v
                        && !in_top(u)
                        && !in_sblock(u)
                        && demand[u] > 0
                        && !rebuilt.has_edge(v, u)
                })
                .max_by_key(|&u| (demand[u], Reverse(u)));
            match u {
                Some(u) => {
                    rebuilt.add_edge(v, u);
                    demand[v] -= 1;
                    demand[u] -= 1;
                }
                None => return Err(fail("no partner for leftover s-block demand".into())),
            }
        }
    }
    // realize the residual demand among the remaining vertices
    let rest: Vec<usize> = (0..n).filter(|&v| !in_top(v) && !in_sblock(v)).collect();
    let mut rest_sorted = rest.clone();
    rest_sorted.sort_by_key(|&v| (Reverse(demand[v]), v));
    let rest_seq = GraphicSequence::from_unsorted(rest.iter().map(|&v| demand[v]).collect());
    let rest_graph = rest_seq
        .realize()
        .map_err(|_| fail("residual demand after placement is not graphic".into()))?;
    for (a, b) in rest_graph.edges() {
        rebuilt.add_edge(rest_sorted[a], rest_sorted[b]);
    }
    // re-insert the clique part with its original edges
    for (u, v) in top_edges {
        rebuilt.add_edge(u, v);
    }
    if rebuilt.degree_sequence() != *seq {
        return Err(fail("rebuilt graph does not realize the residual".into()));
    }
    let mut core = top;
    core.extend(sblock);
    Ok(FinalStage {
        graph: rebuilt,
        core,
        branch: FinalBranch::InducedPiece {
            clique: t,
            piece,
        },
    })
}

// ---------------------------------------------------------------------------
// Pipeline driver
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub enum PipelineOutcome {
    /// Full success: a realization of the input containing the pattern.
    Embedded {
        graph: SmallGraph,
        trace: ReductionTrace,
    },
    /// Proved potentially clique-graphic, which subsumes the pattern.
    CliqueCertificate(CliqueCertificate),
    /// The reduction succeeded but the final embedding hit a desk-scale
    /// constant; the trace is still valid for reconstruction.
    SlackInsufficient {
        trace: ReductionTrace,
        detail: String,
    },
}

/// Runs reduce, the final-stage embedding, and reconstruct end to end.
pub fn pipeline_embed(
    seq: &GraphicSequence,
    h: &SmallGraph,
    slack: &SlackFunction,
) -> Result<PipelineOutcome, ConstructiveError> {
    let trace = match reduce(seq, h, slack)? {
        ReduceOutcome::PotentiallyClique(cert) => {
            return Ok(PipelineOutcome::CliqueCertificate(cert))
        }
        ReduceOutcome::Reduced(trace) => trace,
    };
    match final_stage_embed(&trace, h) {
        Ok(stage) => {
            let graph = reconstruct(&trace, &stage.graph)?;
            Ok(PipelineOutcome::Embedded { graph, trace })
        }
        Err(ConstructiveError::SlackInsufficient { detail, .. }) => {
            Ok(PipelineOutcome::SlackInsufficient { trace, detail })
        }
        Err(other) => Err(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{contains_subgraph, verify_embedding};
    use crate::potential::yin_li_check;

    fn seq(text: &str) -> GraphicSequence {
        text.parse().unwrap()
    }

    #[test]
    fn constants_small_patterns() {
        let c3 = bmdt_constants(&families::complete(3));
        assert_eq!((c3.g_value, c3.f_value), (6, 46));
        let c4 = bmdt_constants(&families::complete(4));
        assert_eq!((c4.g_value, c4.f_value), (24, 93));
    }

    #[test]
    fn constants_star_closed_form() {
        for k in 3..=8u64 {
            let c = BmdtConstants::from_parameters(k as usize - 1, k as usize);
            assert_eq!(c.g_value, k * (k - 2));
        }
    }

    #[test]
    fn constants_identities_hold() {
        for k in 2..=10usize {
            for alpha in 1..k {
                let c = BmdtConstants::from_parameters(alpha, k);
                let g = binomial(k as u64, (k - alpha) as u64)
                    * (2 * binomial((k - alpha) as u64, 2) + alpha as u64 - 1);
                assert_eq!(c.g_value, g);
                assert_eq!(c.f_value, g + 4 * (k as u64).pow(2) + k as u64 + 1);
            }
        }
    }

    #[test]
    fn embed_regular_sequence_with_triangle() {
        let s = GraphicSequence::from_unsorted(vec![4; 60]);
        let (g, report) = bmdt_embed_report(&s, &families::complete(3)).unwrap();
        assert!(report.guaranteed_margin);
        assert_eq!(g.degree_sequence(), s);
        let emb = contains_subgraph(&g, &families::complete(3)).unwrap();
        assert!(verify_embedding(&g, &families::complete(3), &emb));
    }

    #[test]
    fn embed_path3_needs_no_switch() {
        let s = GraphicSequence::from_unsorted(vec![4; 60]);
        let (_, report) = bmdt_embed_report(&s, &families::path(3)).unwrap();
        assert_eq!(report.switches, 0);
    }

    #[test]
    fn embed_clique_padded_sequence() {
        // K4 next to a long cycle: degree sufficient for the paw with the
        // guaranteed margin satisfied at n = 110
        let g0 = SmallGraph::union_disjoint(&families::complete(4), &families::cycle(106))
            .unwrap();
        let s = g0.degree_sequence();
        let h = families::paw();
        let (g, report) = bmdt_embed_report(&s, &h).unwrap();
        assert!(report.guaranteed_margin);
        assert_eq!(g.degree_sequence(), s);
        assert!(contains_subgraph(&g, &h).is_some());
    }

    #[test]
    fn embed_precondition_errors() {
        let h = families::complete(3);
        assert!(matches!(
            bmdt_embed(&seq("3,3,1,1"), &h),
            Err(ConstructiveError::NotGraphic)
        ));
        // degree insufficient: all ones
        let ones = GraphicSequence::from_unsorted(vec![1; 60]);
        assert!(matches!(
            bmdt_embed(&ones, &h),
            Err(ConstructiveError::NotDegreeSufficient)
        ));
        // min term below k - alpha
        let mixed = {
            let mut g = families::cycle(59);
            let p = g.add_vertex();
            g.add_edge(0, p);
            g.degree_sequence()
        };
        assert!(matches!(
            bmdt_embed(&mixed, &h),
            Err(ConstructiveError::MinTermTooSmall { .. })
        ));
        // max degree above the margin
        let star_heavy = {
            let g = SmallGraph::join(&families::edgeless(1), &families::cycle(59)).unwrap();
            g.degree_sequence()
        };
        assert!(matches!(
            bmdt_embed(&star_heavy, &h),
            Err(ConstructiveError::MaxDegreeTooLarge { .. })
        ));
        // too small outright
        assert!(matches!(
            bmdt_embed(&seq("2,2,2"), &h),
            Err(ConstructiveError::OrderTooSmall { .. })
        ));
    }

    #[test]
    fn reduce_immediate_termination() {
        // the margin f(2,4) = 87 is satisfiable at n = 100, so a 2-regular
        // sequence terminates before any stage runs
        let s = GraphicSequence::from_unsorted(vec![2; 100]);
        let out = reduce(&s, &families::path(4), &SlackFunction::constant(0)).unwrap();
        match out {
            ReduceOutcome::Reduced(trace) => {
                assert_eq!(trace.ell(), 0);
                assert_eq!(trace.residual, s);
                assert!(trace.intro_trims.is_empty());
                assert_eq!(trace.termination, Termination::MaxDegreeSmall);
                trace.audit().unwrap();
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reduce_complete_pattern_short_circuits() {
        let s = GraphicSequence::from_unsorted(vec![2; 60]);
        let out = reduce(&s, &families::complete(3), &SlackFunction::constant(0)).unwrap();
        match out {
            ReduceOutcome::PotentiallyClique(cert) => {
                assert_eq!(cert.clique_order, 3);
                assert!(cert.residual_sum >= cert.threshold);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reduce_clique_certificate_en_route() {
        // K16 plus a 7-edge matching: heavy enough that the clique
        // threshold fires during the initial trim
        let g = SmallGraph::union_disjoint(&families::complete(16), &families::matching(7))
            .unwrap();
        let s = g.degree_sequence();
        let out = reduce(&s, &families::path(4), &SlackFunction::constant(10)).unwrap();
        match out {
            ReduceOutcome::PotentiallyClique(cert) => {
                assert_eq!(cert.clique_order, 4);
                assert!(yin_li_check(&s, 4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reduce_full_stages_and_reconstruct_identity() {
        // a single vertex joined to a cycle, degrees (19, 3^19): the top
        // degree stays at n-1, so stages run to the index limit
        let host = SmallGraph::join(&families::edgeless(1), &families::cycle(19)).unwrap();
        let s = host.degree_sequence();
        assert_eq!(s.terms()[0], 19);
        let out = reduce(&s, &families::complete(3), &SlackFunction::constant(30));
        // complete pattern short-circuits; use the paw instead (same order
        // range, not complete)
        assert!(matches!(out, Ok(ReduceOutcome::PotentiallyClique(_))));
        let h = families::paw();
        let out = reduce(&s, &h, &SlackFunction::constant(10)).unwrap();
        let trace = match out {
            ReduceOutcome::Reduced(t) => t,
            other => panic!("unexpected {other:?}"),
        };
        assert!(trace.ell() >= 1);
        trace.audit().unwrap();
        let g_ell = trace.residual.realize().unwrap();
        let (g, report) = reconstruct_report(&trace, &g_ell).unwrap();
        assert_eq!(g.degree_sequence(), s);
        // residual copy is induced at 0..core_len
        let core: Vec<usize> = (0..report.core_len).collect();
        assert_eq!(g.induced(&core), g_ell);
        // the dominating clique is complete and joined to the copy
        for (ci, &c) in report.clique.iter().enumerate() {
            for &d in &report.clique[ci + 1..] {
                assert!(g.has_edge(c, d));
            }
            for &v in &core {
                assert!(g.has_edge(c, v));
            }
        }
        assert_eq!(report.clique.len(), trace.ell());
    }

    #[test]
    fn reconstruct_rejects_wrong_residual() {
        let s = GraphicSequence::from_unsorted(vec![2; 60]);
        let out = reduce(&s, &families::path(4), &SlackFunction::constant(0)).unwrap();
        let trace = match out {
            ReduceOutcome::Reduced(t) => t,
            other => panic!("unexpected {other:?}"),
        };
        let wrong = families::complete(4);
        assert!(matches!(
            reconstruct(&trace, &wrong),
            Err(ConstructiveError::TraceMismatch)
        ));
    }

    #[test]
    fn pipeline_paw_at_96() {
        // 3-regular at n = 96: above the f(2,4) = 87 margin, so the
        // reduction terminates immediately and the split branch embeds a
        // diamond, which carries the paw
        let host = {
            let mut g = families::cycle(96);
            for v in 0..48 {
                g.add_edge(v, v + 48);
            }
            g
        };
        let s = host.degree_sequence();
        assert_eq!(s.terms(), vec![3; 96]);
        let h = families::paw();
        let out = pipeline_embed(&s, &h, &SlackFunction::constant(5)).unwrap();
        match out {
            PipelineOutcome::Embedded { graph, trace } => {
                assert_eq!(trace.ell(), 0);
                assert_eq!(graph.degree_sequence(), s);
                assert!(contains_subgraph(&graph, &h).is_some());
                trace.audit().unwrap();
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn final_stage_low_top_degree_branch() {
        // exactly one vertex of degree 40 over a sea of 2s at n = 140:
        // immediate termination with t = 1 for the path pattern, forcing
        // the induced-piece branch
        let host = {
            let mut g = SmallGraph::new(41).unwrap();
            // 20 triangles through vertex 0 keep every other degree at 2
            for i in 0..20 {
                let (x, y) = (1 + 2 * i, 2 + 2 * i);
                g.add_edge(0, x);
                g.add_edge(0, y);
                g.add_edge(x, y);
            }
            SmallGraph::union_disjoint(&g, &families::cycle(99)).unwrap()
        };
        let s = host.degree_sequence();
        assert_eq!(s.max_term(), 40);
        assert_eq!(s.terms()[1], 2);
        let h = families::path(4);
        let out = reduce(&s, &h, &SlackFunction::constant(10)).unwrap();
        let trace = match out {
            ReduceOutcome::Reduced(t) => t,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(trace.ell(), 0);
        assert_eq!(trace.high_degree_count, 1);
        let stage = final_stage_embed(&trace, &h).unwrap();
        match &stage.branch {
            FinalBranch::InducedPiece { clique, piece } => {
                assert_eq!(*clique, 1);
                assert_eq!(piece.order(), 3);
                assert_eq!(piece.max_degree(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(stage.graph.degree_sequence(), trace.residual);
        let g = reconstruct(&trace, &stage.graph).unwrap();
        assert_eq!(g.degree_sequence(), s);
        assert!(contains_subgraph(&g, &h).is_some());
    }

    #[test]
    fn reduce_with_trims_and_partial_dominance_round_trips() {
        // a near-dominating vertex plus two pendants: the initial trim
        // strips the pendant 1s (and is replayed on reconstruction), and
        // the stage realization has genuine non-neighbors to delete
        let host = {
            let mut g = SmallGraph::join(&families::edgeless(1), &families::cycle(19)).unwrap();
            let p = g.add_vertex();
            let q = g.add_vertex();
            g.add_edge(1, p);
            g.add_edge(2, q);
            g
        };
        let s = host.degree_sequence();
        assert_eq!(s.min_term(), 1);
        let h = families::paw();
        let out = reduce(&s, &h, &SlackFunction::constant(4)).unwrap();
        let trace = match out {
            ReduceOutcome::Reduced(t) => t,
            other => panic!("unexpected {other:?}"),
        };
        assert!(!trace.intro_trims.is_empty(), "trims must fire");
        assert!(
            trace
                .stages
                .iter()
                .any(|st| st.deletion.removed.order() > 0),
            "some stage must delete non-neighbors"
        );
        trace.audit().unwrap();
        let g_ell = trace.residual.realize().unwrap();
        let (g, report) = reconstruct_report(&trace, &g_ell).unwrap();
        assert_eq!(g.degree_sequence(), s);
        let core: Vec<usize> = (0..report.core_len).collect();
        assert_eq!(g.induced(&core), g_ell);
    }

    #[test]
    fn pipeline_deep_reduction_embeds_triangle_via_paw() {
        // dominant vertex over a cycle at n = 20: two full stages for the
        // paw, then the degenerate split branch covers the remainder
        let host = SmallGraph::join(&families::edgeless(1), &families::cycle(19)).unwrap();
        let s = host.degree_sequence();
        let h = families::paw();
        let out = pipeline_embed(&s, &h, &SlackFunction::constant(10)).unwrap();
        match out {
            PipelineOutcome::Embedded { graph, trace } => {
                assert_eq!(graph.degree_sequence(), s);
                assert!(contains_subgraph(&graph, &h).is_some());
                assert!(trace.ell() >= 1);
            }
            PipelineOutcome::SlackInsufficient { trace, detail } => {
                // reported, never hidden; the reduction itself must be sound
                trace.audit().unwrap();
                let g_ell = trace.residual.realize().unwrap();
                let g = reconstruct(&trace, &g_ell).unwrap();
                assert_eq!(g.degree_sequence(), s);
                panic!("slack unexpectedly insufficient: {detail}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
