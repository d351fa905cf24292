//! Bounded word problem: certificates of triviality and non-triviality.

use std::cell::OnceCell;

use serde::{Deserialize, Serialize};

use super::coset::{CosetTable, Enumerator};
use super::low_index::subgroups_within_budget;
use super::presentation::Presentation;
use super::word::Word;
use crate::{Bounds, Budget, Verdict};

/// Coset bound used to detect that a presented group is small and finite.
const FINITE_PROBE_COSETS: usize = 20_000;

/// Outcome of the bounded word test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordTest {
    Trivial,
    Nontrivial,
    Unknown,
}

impl WordTest {
    /// Verdict of the claim "the word is trivial".
    pub fn as_verdict(self) -> Verdict {
        match self {
            WordTest::Trivial => Verdict::Pass,
            WordTest::Nontrivial => Verdict::Fail,
            WordTest::Unknown => Verdict::Unknown,
        }
    }
}

/// Answers word-problem queries in one presentation, caching the finite quotients
/// it has found.
pub struct WordOracle<'p> {
    pres: &'p Presentation,
    bounds: Bounds,
    regular: OnceCell<Option<CosetTable>>,
    quotients: OnceCell<Vec<CosetTable>>,
}

impl<'p> WordOracle<'p> {
    pub fn new(pres: &'p Presentation, bounds: Bounds) -> Self {
        WordOracle {
            pres,
            bounds,
            regular: OnceCell::new(),
            quotients: OnceCell::new(),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        self.pres
    }

    /// Regular representation when the group is finite and small.
    pub fn regular(&self) -> Option<&CosetTable> {
        self.regular
            .get_or_init(|| {
                let mut e = Enumerator::new(self.pres, FINITE_PROBE_COSETS.min(self.bounds.max_cosets));
                e.run(&[]).ok().map(|_| e.into_table())
            })
            .as_ref()
    }

    fn quotients(&self) -> &[CosetTable] {
        self.quotients.get_or_init(|| {
            let mut budget = Budget::new(self.bounds.node_budget);
            subgroups_within_budget(self.pres, self.bounds.separation_index, &mut budget)
                .0
                .into_iter()
                .filter(|t| t.index() > 1)
                .collect()
        })
    }

    /// A finite permutation quotient in which `w` acts nontrivially.
    pub fn separating_quotient(&self, w: &Word) -> Option<&CosetTable> {
        self.quotients().iter().find(|t| !t.word_perm(w).is_identity())
    }

    pub fn is_trivial(&self, w: &Word) -> WordTest {
        let w = w.cyclically_reduced();
        if w.is_identity() || self.pres.is_relator_conjugate(&w) {
            return WordTest::Trivial;
        }
        if self.pres.relators().is_empty() {
            return WordTest::Nontrivial;
        }
        if let Some(t) = self.regular() {
            return if t.contains(&w) {
                WordTest::Trivial
            } else {
                WordTest::Nontrivial
            };
        }
        if self.separating_quotient(&w).is_some() {
            return WordTest::Nontrivial;
        }
        self.enumerate_along(&w)
    }

    /// Defines cosets of the trivial subgroup along `w`, then enumerates: a coincidence
    /// of its endpoint with the base proves `w = 1`.
    fn enumerate_along(&self, w: &Word) -> WordTest {
        let mut e = Enumerator::new(self.pres, self.bounds.max_cosets);
        if e.predefine_path(w).is_err() {
            return WordTest::Unknown;
        }
        let done = e.run(&[]).is_ok();
        match e.trace_from_base(w) {
            Some(0) => WordTest::Trivial,
            _ if done => WordTest::Nontrivial,
            _ => WordTest::Unknown,
        }
    }

    pub fn are_equal(&self, u: &Word, v: &Word) -> WordTest {
        self.is_trivial(&u.mul(&v.inverse()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_and_finite_groups() {
        let f2 = Presentation::free(2);
        let o = WordOracle::new(&f2, Bounds::default());
        assert_eq!(o.is_trivial(&Word::from_signed(&[1, 2, -1, -2])), WordTest::Nontrivial);
        assert_eq!(o.is_trivial(&Word::from_signed(&[1, -1])), WordTest::Trivial);
        let s3 = Presentation::parse(&["a", "b"], &["aa", "bb", "ababab"]).unwrap();
        let o = WordOracle::new(&s3, Bounds::default());
        assert_eq!(o.is_trivial(&Word::from_signed(&[2, 1, 2, 1, 2, 1])), WordTest::Trivial);
        assert_eq!(o.is_trivial(&Word::from_signed(&[1, 2])), WordTest::Nontrivial);
    }

    #[test]
    fn infinite_amalgam() {
        let sl = Presentation::parse(&["s", "u"], &["ssss", "ssUUU"]).unwrap();
        let o = WordOracle::new(&sl, Bounds::default());
        // u^6 = s^4 = 1
        assert_eq!(o.is_trivial(&Word::generator(1).pow(6)), WordTest::Trivial);
        assert_eq!(o.is_trivial(&Word::generator(1).pow(2)), WordTest::Nontrivial);
        assert_eq!(o.is_trivial(&Word::from_signed(&[1, 2])), WordTest::Nontrivial);
    }
}
