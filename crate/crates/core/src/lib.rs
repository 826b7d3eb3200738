//! Proof nets for the Displacement calculus.
//!
//! The pipeline for a sequent `A1, ..., An ⊢ C`:
//!
//! 1. [`proof_structure::unfold`] decomposes the formulas into tensor and par
//!    links, leaving atomic leaves.
//! 2. [`proof_structure::Linkings`] enumerates the ways of identifying atomic
//!    hypotheses with atomic conclusions.
//! 3. [`aps::Aps::from_structure`] erases formulas, turning `+` links and input
//!    formulas into combs.
//! 4. [`contraction::contract`] rewrites the abstract structure; it is a proof
//!    net exactly when a single comb remains.
//! 5. [`nd::extract`] reads a natural-deduction proof off a successful
//!    contraction, and [`nd::net_of_nd`] goes the other way.
//!
//! [`prover`] strings these together for sequents and sentences.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod aps;
pub mod contraction;
pub mod formula;
#[cfg(any(test, feature = "gen"))]
pub mod gen;
pub mod lexicon;
pub mod nd;
pub mod proof_structure;
pub mod prover;
pub mod terms;

pub use formula::{Connective, Formula, Signature};
pub use terms::{Item, Mode, Sort, StringTerm, Symbol};
