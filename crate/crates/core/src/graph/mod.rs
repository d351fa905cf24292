//! Serre graphs, their fundamental groups, covers, lifting and factorization.

pub mod cover;
pub mod lift;
pub mod morphism;
pub mod serre;

pub use cover::{cover_from_subgroup, enumerate_covers, monodromy, Cover, EnumeratedCover, Monodromy};
pub use lift::{
    check_cover_sequence, check_realized_cover, decompose_morphism, lift_morphism, pullback_cover,
    CoverSequenceReport, Decomposition, Lift, Pullback,
};
pub use morphism::GraphMorphism;
pub use serre::{pi1_presentation, spanning_tree, GraphJson, Pi1, SerreGraph};
