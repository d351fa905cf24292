//! Shared fixtures for the criterion benches.

use orbifund::quotient::{random_corpus, CorpusShape, GroupAction};
use orbifund::Presentation;

/// Fixed corpus of random actions.
pub fn actions(count: usize) -> Vec<GroupAction> {
    random_corpus(2024, count, CorpusShape::default()).expect("corpus generation is total")
}

/// Finite groups given by presentations, smallest first.
pub fn finite_presentations() -> Vec<(&'static str, Presentation)> {
    vec![
        ("z12", Presentation::parse(&["a"], &["aaaaaaaaaaaa"]).unwrap()),
        ("s3", Presentation::parse(&["a", "b"], &["aa", "bbb", "abab"]).unwrap()),
        ("s4", Presentation::parse(&["a", "b"], &["aa", "bbb", "abababab"]).unwrap()),
        ("a5", Presentation::parse(&["a", "b"], &["aa", "bbb", "ababababab"]).unwrap()),
    ]
}
