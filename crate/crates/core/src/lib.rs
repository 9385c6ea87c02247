//! Potential-number toolkit for degree sequences.
//!
//! A nonincreasing sequence of nonnegative integers is *graphic* if some
//! simple graph realizes it, and *potentially H-graphic* if some realization
//! contains the pattern graph `H` as a subgraph. The potential number
//! `sigma(H, n)` is the least even integer such that every n-term graphic
//! sequence with at least that sum is potentially H-graphic.
//!
//! The crate provides:
//!
//! * [`seq`] — degree-sequence primitives: the Erdős–Gallai test,
//!   Havel–Hakimi realization, Kleitman–Wang layoffs, iterated minimum-term
//!   reduction, and graphic-sequence enumeration;
//! * [`graph`] — a small-graph kernel with bitset adjacency rows, graph6 and
//!   edge-list I/O, exact independence number, subgraph search, joins, and a
//!   canonical form for isomorphism dedup;
//! * [`potential`] — the profile of a pattern (minimum max-degree over
//!   induced subgraphs of each order, the slope terms derived from it),
//!   extremal sequences with their pattern-free realizations, lower bounds,
//!   the Yin–Li clique sufficiency test, and split-graph canonicalization by
//!   2-switches;
//! * [`oracle`] — an exact desk-scale decision procedure for
//!   potentially-H-graphic, with `sigma(H, n)` computed by descending-sum
//!   sweep and an append-only verdict cache;
//! * [`constructive`] — the bounded-maximum-degree embedding via 2-switch
//!   repair, and the reduce/reconstruct pipeline that shrinks a heavy
//!   sequence to a residual, embeds there, and reverses every step.
//!
//! With the default `parallel` feature the sweeps and batch decisions run on
//! a rayon pool; disabling it yields an identical sequential build.

pub mod constructive;
pub mod graph;
pub mod oracle;
pub mod potential;
pub mod seq;

mod comb;
mod parallel;

pub use graph::{Embedding, GraphError, SmallGraph, MAX_ORDER};
pub use oracle::{Oracle, OracleError, PotentialVerdict, SigmaExact};
pub use potential::{
    ConjectureReport, ExtremalSpec, HProfile, PotentialError, ProfileRow,
};
pub use seq::{
    clique_potential_number, enumerate_graphic, iterated_min_layoff, layoff,
    layoff_with_record, CliqueCertificate, GraphicSequence, LayoffOutcome, LayoffRecord,
    ResidualReduction, SeqError, SlackFunction,
};
pub use constructive::{
    bmdt_constants, bmdt_embed, final_stage_embed, reconstruct, reduce, BmdtConstants,
    ConstructiveError, FinalStage, ReduceOutcome, ReductionTrace,
};
