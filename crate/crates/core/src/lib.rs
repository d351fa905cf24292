//! Fundamental groups of finite graph quotients and marked orbispaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`]: words, presentations, permutation groups, coset enumeration,
//!   low-index subgroups and Stallings folding.
//! * [`groupoid`]: finite groupoids, normal subgroupoids and their closures.
//! * [`graph`]: Serre graphs, covers, lifting and factorization of morphisms.
//! * [`quotient`]: finite group actions on graphs and the kernel/cokernel of
//!   the induced map on fundamental groups.
//! * [`orbispace`]: presentations with finite hidden groups and the
//!   homomorphisms that carry them into the fundamental group.

pub mod error;
pub mod graph;
pub mod group;
pub mod groupoid;
pub mod orbispace;
pub mod quotient;
pub mod verdict;

pub use error::{Error, Result};
pub use group::{
    coset_enumerate, low_index_subgroups, normal_closure_perm, reduce_word, CosetTable, FinitePermGroup, Letter,
    Perm, Presentation, Word,
};
pub use verdict::{Bounds, Budget, Check, Verdict};
