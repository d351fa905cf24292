use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for {count} generators")]
    InvalidGenerator { index: usize, count: usize },
    #[error("unknown generator name `{0}`")]
    UnknownGeneratorName(String),
    #[error("coset enumeration exceeded {max_cosets} cosets")]
    Exceeded { max_cosets: usize },
    #[error("search exceeded node budget of {budget}")]
    BudgetExceeded { budget: u64 },
    #[error("permutation is not an element of the group")]
    NotAnElement,
    #[error("group too large to enumerate ({order} elements, cap {cap})")]
    TooLarge { order: u128, cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("unknown object {0}")]
    UnknownObject(usize),
    #[error("arrow set is not a subgroup of the vertex group")]
    NotASubgroup,
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("dart path is not a closed path at the base vertex")]
    NotClosedPath,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid graph morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid coset table: {0}")]
    InvalidTable(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
    #[error("image subgroup has infinite index")]
    InfiniteIndexImage,
    #[error("image subgroup index {index} exceeds bound {bound}")]
    IndexBoundExceeded { index: usize, bound: usize },
    #[error("cover is not Galois")]
    NotGalois,
    #[error("relator string cannot encode generator name `{0}`")]
    NotEncodable(String),
    #[error("malformed relator string `{0}`")]
    MalformedRelator(String),
}
