//! Tietze elimination of generators that occur exactly once in some relator, helped
//! along by length-reducing Nielsen moves when elimination stalls.

use super::presentation::Presentation;
use super::word::Word;

/// Relator length beyond which substitution stops, to keep words bounded.
const MAX_RELATOR_LEN: usize = 4096;

/// Result of repeatedly eliminating generators.
#[derive(Debug, Clone)]
pub struct Simplified {
    /// Original indices of the generators that survive.
    pub kept: Vec<usize>,
    /// Remaining relators over the surviving generator slots. After Nielsen moves the
    /// slots hold a transformed basis, so these are not words in the input generators.
    pub relators: Vec<Word>,
}

impl Simplified {
    /// Rank when the group is certified free, i.e. no relators remain.
    pub fn free_rank(&self) -> Option<usize> {
        self.relators.is_empty().then_some(self.kept.len())
    }
}

fn occurrences(r: &Word, g: usize) -> usize {
    r.letters().iter().filter(|l| l.generator == g).count()
}

/// Eliminates generators while some relator contains one exactly once.
pub fn simplify(generator_count: usize, relators: &[Word]) -> Simplified {
    let mut alive = vec![true; generator_count];
    let mut rels: Vec<Word> = relators
        .iter()
        .map(|r| r.cyclically_reduced())
        .filter(|r| !r.is_identity())
        .collect();
    loop {
        rels.sort_by_key(|r| r.len());
        rels.dedup();
        let mut pick = None;
        'search: for (ri, r) in rels.iter().enumerate() {
            for (pos, l) in r.letters().iter().enumerate() {
                if occurrences(r, l.generator) == 1 {
                    pick = Some((ri, pos, *l));
                    break 'search;
                }
            }
        }
        let Some((ri, pos, l)) = pick else {
            match nielsen_step(generator_count, &alive, &rels) {
                Some(next) => {
                    rels = next;
                    continue;
                }
                None => break,
            }
        };
        let r = rels.remove(ri);
        let r_full = r.clone();
        // r = A x^e B = 1  =>  x^e = A^-1 B^-1  (as a cyclic word: x^e = (B A)^-1)
        let rot = r.rotated(pos);
        let rest = Word::from_letters(rot.letters()[1..].iter().copied());
        let x_value = if l.inverse { rest } else { rest.inverse() };
        let g = l.generator;
        alive[g] = false;
        let mut images: Vec<Word> = (0..generator_count).map(Word::generator).collect();
        images[g] = x_value;
        let mut next = Vec::with_capacity(rels.len());
        for r in &rels {
            let s = r.substitute(&images).cyclically_reduced();
            if s.len() > MAX_RELATOR_LEN {
                // stop here; the undone step keeps the result a valid presentation
                alive[g] = true;
                let mut relators = rels.clone();
                relators.push(r_full.clone());
                return Simplified {
                    kept: (0..generator_count).filter(|&i| alive[i]).collect(),
                    relators,
                };
            }
            if !s.is_identity() {
                next.push(s);
            }
        }
        rels = next;
    }
    Simplified {
        kept: (0..generator_count).filter(|&i| alive[i]).collect(),
        relators: rels,
    }
}

fn total_len(rels: &[Word]) -> usize {
    rels.iter().map(Word::len).sum()
}

/// Best automorphism `x -> x y^e` or `x -> y^e x` that shortens the relators.
fn nielsen_step(generator_count: usize, alive: &[bool], rels: &[Word]) -> Option<Vec<Word>> {
    let kept: Vec<usize> = (0..generator_count).filter(|&i| alive[i]).collect();
    let mut best: Option<(usize, Vec<Word>)> = None;
    let current = total_len(rels);
    for &x in &kept {
        for &y in &kept {
            if x == y {
                continue;
            }
            for (right, e) in [(true, 1), (true, -1), (false, 1), (false, -1)] {
                let mut images: Vec<Word> = (0..generator_count).map(Word::generator).collect();
                let ye = Word::generator(y).pow(e);
                images[x] = if right {
                    Word::generator(x).mul(&ye)
                } else {
                    ye.mul(&Word::generator(x))
                };
                let next: Vec<Word> = rels
                    .iter()
                    .map(|r| r.substitute(&images).cyclically_reduced())
                    .filter(|r| !r.is_identity())
                    .collect();
                let len = total_len(&next);
                if len < current && best.as_ref().is_none_or(|(b, _)| len < *b) {
                    best = Some((len, next));
                }
            }
        }
    }
    best.map(|(_, r)| r)
}

/// Rank of `p` when elimination proves it free.
pub fn certify_free(p: &Presentation) -> Option<usize> {
    simplify(p.generator_count(), p.relators()).free_rank()
}
