//! Exact-arithmetic toolkit for the algebra of equidecomposition types over
//! finitely presented smooth equivalence relations.
//!
//! The crate is organized around a small tower of modules:
//!
//! - [`extnum`] — the carrier algebra: exact values in `[0, ∞]` and countable
//!   sequences with a finite prefix and a constant tail.
//! - [`transport`] — the refinement operator `d`: given two equal-sum
//!   sequences, a deterministic matrix with those row and column marginals.
//! - [`eqrel`] — class tables, weighted functions, Borel set descriptions and
//!   the calculus of equidecomposition witnesses (domain/range, composition,
//!   splitting, concentration, dyadic spreading).
//! - [`klalg`] — the cardinal algebras `K` (per-class counts) and `L`
//!   (per-class extended-real sums): sums, comparison partitions, meets and
//!   joins, countable joins, division, real multiples and the `χ` embedding.
//! - [`measures`] — invariant measures as sum-homomorphisms, ergodicity via
//!   meet preservation, measure extension from a subset, separation, and the
//!   duality between `L` and equivariant functionals.
//! - [`topdec`] — finite topological spaces, T0 quotients of saturated
//!   relations, towers and their limits, Beck–Chevalley ladders, lax colimits,
//!   and the patch/upper topology round trip.
//! - [`hornlang`] — a Horn-axiom DSL over `(sum, meet, join, scalar)` with a
//!   parser, evaluators for both carrier algebras, and a randomized checker.
//! - [`sample`] — deterministic seeded generators used by the checker, the
//!   test suites and the CLI.
//!
//! All values are immutable after construction and all operations are pure;
//! the only interior mutability is transport-plan memoization, which is
//! observationally transparent (plans are deterministic but not `Sync`).
//!
//! No floating point is used anywhere: every quantity is a ratio of
//! arbitrary-precision integers or the formal value `inf`.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod eqrel;
pub mod extnum;
pub mod hornlang;
pub mod klalg;
pub mod measures;
pub mod sample;
pub mod topdec;
pub mod transport;

pub use extnum::{ExtReal, Tail, TailSeq};
