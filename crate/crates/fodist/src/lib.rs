//! Exact first-order distinguishability measures for finite graphs.
//!
//! Two finite graphs that are not isomorphic can be told apart by a first-order
//! sentence over the vocabulary {adjacency, equality}; this crate computes how
//! *cheaply* that can be done, exactly, at desk scale:
//!
//! * [`solver`] — the quantifier rank `D(G,H)` needed to distinguish two graphs,
//!   its alternation-bounded refinements `D^k`, and the pebble number `V(G,H)`
//!   (minimum number of variables), all via exhaustive
//!   Ehrenfeucht–Fraïssé game search, plus extraction of an optimal
//!   distinguishing sentence.
//! * [`similarity`] — the vertex-similarity partition (transposition
//!   automorphisms), the exceptional classes of graphs whose defining rank
//!   exceeds the generic `(n+5)/2` bound, and exact rank formulas for them.
//! * [`strategy`] — a constructive Spoiler strategy that wins the game within
//!   `(n+3)/2` rounds and one structure alternation on any non-isomorphic pair
//!   of the same order, built from class-partition defects rather than search.
//! * [`wl`] — the k-dimensional Weisfeiler–Leman color refinement (set and
//!   multiset variants), its stabilization length, an isomorphism test, a
//!   canonization mode, and the optimal-dimension search tied to the pebble
//!   number.
//! * [`cfi`] — Cai–Fürer–Immerman style lower-bound instances over regular
//!   seed graphs, with brute-force separators and exact vertex/edge expansion
//!   certificates.
//! * [`graph`] / [`catalog`] — bit-row graphs with byte-exact graph6 I/O, and
//!   exhaustive catalogues of small graphs up to isomorphism.
//! * [`formula`] — the first-order formula AST: quantifier rank, nest
//!   sequences, alternation number, evaluation, canonical distinguishing /
//!   defining sentences, and variable-reuse reduction.
//! * [`report`] — JSON reports and graph-expression parsing for the CLI.
//!
//! Everything is exact and deterministic: no floating point in any decision,
//! no unseeded randomness, lowest-index tie-breaking throughout.

pub mod catalog;
pub mod cfi;
pub mod formula;
pub mod graph;
pub mod report;
pub mod similarity;
pub mod solver;
pub mod strategy;
pub mod wl;
