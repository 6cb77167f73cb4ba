//! Finite combinatorics of higher operads.
//!
//! The crate builds, from the ground up:
//!
//! * maps of finite ordinals with their unique permutation-then-monotone
//!   factorization, and the permutation operad ([`ordmaps`]);
//! * `n`-trees and their morphisms ([`trees`], [`omegan`]);
//! * finite symmetric operads and finite `n`-operads over sets, the
//!   desymmetrisation functor between them, and the comparison permutation
//!   `chi` ([`symops`], [`nops`]);
//! * free `n`-operads on tree-indexed generators ([`nops`]);
//! * presented categorical operads, their connected components and colimit
//!   symmetrisation, and a nerve-level comparison ([`hcat`]);
//! * the internal operad of an iterated monoidal structure ([`itmon`]).
//!
//! Runnable walkthroughs for each capability live under `examples/`; the thin
//! `operads` binary exposes the same functionality as subcommands.

pub mod error;
pub mod free;
pub mod hcat;
pub mod itmon;
pub mod nops;
pub mod ordmaps;
pub mod report;
pub mod symops;
pub mod trees;
pub mod omegan;
pub mod unionfind;

pub use error::{Error, Result};
