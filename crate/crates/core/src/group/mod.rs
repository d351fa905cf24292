//! Exact word, presentation and permutation-group machinery.

pub mod coset;
pub mod equality;
pub mod fingerprint;
pub mod folding;
pub mod low_index;
pub mod perm;
pub mod presentation;
pub mod snf;
pub mod tietze;
pub mod word;

pub use coset::{coset_enumerate, CosetTable};
pub use fingerprint::{group_fingerprint, Fingerprint};
pub use low_index::{low_index_subgroups, SubgroupClass};
pub use perm::{normal_closure_perm, FinitePermGroup, Perm};
pub use presentation::{Presentation, PresentationJson};
pub use word::{reduce_word, Letter, Word};
