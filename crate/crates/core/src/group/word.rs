use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A generator or its inverse. Serialized as a signed index: `k + 1` for generator `k`,
/// `-(k + 1)` for its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "i64", try_from = "i64")]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub const fn pos(generator: usize) -> Self {
        Letter::new(generator, false)
    }

    pub const fn neg(generator: usize) -> Self {
        Letter::new(generator, true)
    }

    pub fn inv(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }

    /// Column of this letter in a coset table laid out as `g0, g0^-1, g1, g1^-1, ...`.
    pub fn column(self) -> usize {
        2 * self.generator + self.inverse as usize
    }

    pub fn from_column(col: usize) -> Self {
        Letter::new(col / 2, col % 2 == 1)
    }
}

impl From<Letter> for i64 {
    fn from(l: Letter) -> i64 {
        let k = l.generator as i64 + 1;
        if l.inverse {
            -k
        } else {
            k
        }
    }
}

impl TryFrom<i64> for Letter {
    type Error = String;

    fn try_from(k: i64) -> std::result::Result<Self, String> {
        if k == 0 {
            return Err("letter 0 is not a generator".into());
        }
        Ok(Letter::new(k.unsigned_abs() as usize - 1, k < 0))
    }
}

/// A freely reduced word in signed generators. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Freely reduces `letters`, checking each against `generator_count`.
pub fn reduce_word(letters: &[Letter], generator_count: usize) -> Result<Word> {
    if let Some(bad) = letters.iter().find(|l| l.generator >= generator_count) {
        return Err(Error::InvalidGenerator {
            index: bad.generator,
            count: generator_count,
        });
    }
    Ok(Word::from_letters(letters.iter().copied()))
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn generator(g: usize) -> Self {
        Word {
            letters: vec![Letter::pos(g)],
        }
    }

    /// Builds a word from signed indices: `k > 0` is generator `k-1`, `k < 0` its inverse.
    pub fn from_signed(signed: &[i32]) -> Self {
        Word::from_letters(signed.iter().map(|&k| {
            assert!(k != 0, "signed letter 0 is not a generator");
            Letter::new(k.unsigned_abs() as usize - 1, k < 0)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `by^-1 * self * by`
    pub fn conjugate_by(&self, by: &Word) -> Word {
        by.inverse().mul(self).mul(by)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    /// Strips matching letter/inverse pairs from both ends.
    pub fn cyclically_reduced(&self) -> Word {
        let l = &self.letters;
        let (mut i, mut j) = (0, l.len());
        while j >= i + 2 && l[i] == l[j - 1].inv() {
            i += 1;
            j -= 1;
        }
        Word {
            letters: l[i..j].to_vec(),
        }
    }

    /// Rotation starting at position `k` (the word is assumed cyclically reduced).
    pub fn rotated(&self, k: usize) -> Word {
        let n = self.letters.len();
        if n == 0 {
            return Word::identity();
        }
        let k = k % n;
        Word {
            letters: self.letters[k..]
                .iter()
                .chain(self.letters[..k].iter())
                .copied()
                .collect(),
        }
    }

    /// Renames generators through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Word {
        Word::from_letters(
            self.letters
                .iter()
                .map(|l| Letter::new(map(l.generator), l.inverse)),
        )
    }

    /// Replaces each generator by a word (a homomorphism on the free group).
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for l in &self.letters {
            let img = &images[l.generator];
            if l.inverse {
                out.extend(img.inverse().letters);
            } else {
                out.extend(img.letters.iter().copied());
            }
        }
        Word::from_letters(out)
    }

    /// Exponent sum per generator.
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generator_count];
        for l in &self.letters {
            sums[l.generator] += if l.inverse { -1 } else { 1 };
        }
        sums
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::from_letters(iter)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return write!(f, "1");
        }
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = self
                .names
                .get(l.generator)
                .cloned()
                .unwrap_or_else(|| format!("x{}", l.generator));
            if l.inverse {
                write!(f, "{name}^-1")?;
            } else {
                write!(f, "{name}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const A: Letter = Letter::pos(0);
    const A_: Letter = Letter::neg(0);
    const B: Letter = Letter::pos(1);
    const B_: Letter = Letter::neg(1);

    #[test]
    fn signed_serialization() {
        let w = Word::from_letters([A, B_]);
        assert_eq!(serde_json::to_string(&w).unwrap(), "[1,-2]");
        assert_eq!(serde_json::from_str::<Word>("[1,-2]").unwrap(), w);
        assert!(serde_json::from_str::<Word>("[0]").is_err());
    }

    #[test]
    fn cancellation() {
        assert!(reduce_word(&[A, A_], 2).unwrap().is_identity());
        assert_eq!(reduce_word(&[A, B, B_, A], 2).unwrap().letters(), &[A, A]);
        assert_eq!(reduce_word(&[A, B, A_], 2).unwrap().letters(), &[A, B, A_]);
    }

    #[test]
    fn out_of_range_letter() {
        assert_eq!(
            reduce_word(&[A, Letter::pos(2)], 2),
            Err(Error::InvalidGenerator { index: 2, count: 2 })
        );
    }

    #[test]
    fn cyclic_reduction() {
        let w = Word::from_letters([A, B, A, A_, B_, A_].iter().copied());
        assert!(w.is_identity());
        let w = Word::from_letters([A, B, A_].iter().copied());
        assert_eq!(w.cyclically_reduced().letters(), &[B]);
    }

    fn letters() -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((0usize..3, any::<bool>()), 0..30)
            .prop_map(|v| v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent_and_shortens(raw in letters()) {
            let w = reduce_word(&raw, 3).unwrap();
            prop_assert!(w.len() <= raw.len());
            let again = reduce_word(w.letters(), 3).unwrap();
            prop_assert_eq!(&again, &w);
            for pair in w.letters().windows(2) {
                prop_assert_ne!(pair[0], pair[1].inv());
            }
        }

        #[test]
        fn inverse_cancels(raw in letters()) {
            let w = Word::from_letters(raw);
            prop_assert!(w.mul(&w.inverse()).is_identity());
        }
    }
}
