//! Marked orbispaces: presentations carrying finite hidden groups at the base.

pub mod corpus;
pub mod cover;
pub mod ggraph;
pub mod model;
pub mod uniformize;

pub use corpus::orbispace_corpus;
pub use cover::{enumerate_fpr_covers, galois_sequence_check, is_fpr, FprClass, FprReport, GaloisReport, InducedPoint, OrbiCover};
pub use ggraph::from_ggraph;
pub use model::{moduli_pi1, Marking, MarkingJson, MarkedOrbispace, OrbispaceJson};
pub use uniformize::{
    is_uniformizable, kill_omega_cover, moduli_sequence_check, omega_injectivity, KernelWitness, ModuliReport,
    Uniformization,
};
