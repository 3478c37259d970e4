//! Exact-arithmetic toolkit for reducing word problems in finitely presented
//! groups to multilinear matroid representability questions.
//!
//! The crate is organized bottom-up:
//! - [`exactla`]: matrices and subspaces over prime fields, exact ranks;
//! - [`matroids`]: rank-3 triangle matroids and integer polymatroids;
//! - [`groups`]: presentations, finite groups as multiplication tables,
//!   normalization of presentations to length-3 relators;
//! - [`dowling`]: generalized Dowling geometries and weak representations;
//! - [`inflation`]: algebraic inflation of extension arrangements;
//! - [`expansion`]: expansions of polymatroids, c-bases, separation;
//! - [`pipeline`]: the end-to-end reduction, certification and verification.

pub mod dowling;
pub mod exactla;
pub mod expansion;
pub mod groups;
pub mod inflation;
pub mod matroids;
pub mod pipeline;

/// Default field modulus; large primes keep generic constructions generic.
pub const DEFAULT_PRIME: u64 = 1_000_003;
