//! Finite group actions on graphs, their quotients, and the induced map on
//! fundamental groups.

pub mod action;

pub use action::{
    fixed_point_subgroup, quotient_graph, ActionJson, FixedPoint, FixedPointSubgroup, GroupAction, QuotientGraph,
    Subdivision, Witness,
};
pub mod sequence;

pub use sequence::{mx_from_action, quotient_pi1_sequence, CosetLabel, QuotientReport, SequenceData};
pub mod doomed;

pub use doomed::{doomed_kernel, DoomedElement, DoomedReport, KernelCertificate};
pub mod corpus;

pub use corpus::{random_action, random_corpus, small_groups, CorpusShape};
