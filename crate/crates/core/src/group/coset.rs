//! Coset tables and HLT coset enumeration.

use serde::{Deserialize, Serialize};

use super::perm::Perm;
use super::presentation::Presentation;
use super::word::{Letter, Word};
use crate::{Error, Result};

pub const DEFAULT_MAX_COSETS: usize = 100_000;

const NONE: u32 = u32::MAX;

/// Right action of a presented group on the cosets of a finite-index subgroup.
/// Coset 0 is the subgroup itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetTable {
    index: usize,
    /// One permutation of the coset ids per generator.
    action: Vec<Perm>,
}

impl CosetTable {
    /// Validates the relator and transitivity invariants against `p`.
    pub fn new(p: &Presentation, action: Vec<Perm>) -> Result<Self> {
        let t = Self::from_action_unchecked(p.generator_count(), action)?;
        t.check(p)?;
        Ok(t)
    }

    pub(crate) fn from_action_unchecked(generator_count: usize, action: Vec<Perm>) -> Result<Self> {
        if action.len() != generator_count {
            return Err(Error::InvalidTable(format!(
                "{} permutations for {generator_count} generators",
                action.len()
            )));
        }
        let index = action.first().map(|p| p.degree()).unwrap_or(1);
        if action.iter().any(|p| p.degree() != index) {
            return Err(Error::InvalidTable("permutations of differing degree".into()));
        }
        Ok(CosetTable { index, action })
    }

    /// Index-1 table.
    pub fn trivial(generator_count: usize) -> Self {
        CosetTable {
            index: 1,
            action: vec![Perm::identity(1); generator_count],
        }
    }

    pub fn check(&self, p: &Presentation) -> Result<()> {
        if self.action.len() != p.generator_count() {
            return Err(Error::InvalidTable("generator count mismatch".into()));
        }
        for r in p.relators() {
            if !self.word_perm(r).is_identity() {
                return Err(Error::InvalidTable("a relator acts nontrivially".into()));
            }
        }
        if !self.is_transitive() {
            return Err(Error::InvalidTable("action is not transitive".into()));
        }
        Ok(())
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn generator_count(&self) -> usize {
        self.action.len()
    }

    pub fn action(&self) -> &[Perm] {
        &self.action
    }

    /// Image of `coset` under one letter.
    pub fn act(&self, coset: usize, l: Letter) -> usize {
        let p = &self.action[l.generator];
        if l.inverse {
            // degree is small; inverse lookup by scan is avoided by the caller in hot loops
            p.inverse().apply(coset)
        } else {
            p.apply(coset)
        }
    }

    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        let inv: Vec<Perm> = self.action.iter().map(|p| p.inverse()).collect();
        w.letters().iter().fold(coset, |c, l| {
            if l.inverse {
                inv[l.generator].apply(c)
            } else {
                self.action[l.generator].apply(c)
            }
        })
    }

    pub fn word_perm(&self, w: &Word) -> Perm {
        Perm::of_word(w, &self.action, self.index)
    }

    /// Whether `w` lies in the stabilizer of coset 0.
    pub fn contains(&self, w: &Word) -> bool {
        self.trace(0, w) == 0
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.index];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(c) = stack.pop() {
            for p in &self.action {
                for d in [p.apply(c), p.inverse().apply(c)] {
                    if !seen[d] {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Flat table in column order `g0, g0^-1, g1, g1^-1, ...`.
    fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = Vec::with_capacity(2 * self.action.len());
        for p in &self.action {
            cols.push(p.to_vec());
            cols.push(p.inverse().to_vec());
        }
        cols
    }

    /// Renumbering of cosets by first appearance in a row-major scan starting at `base`.
    fn standard_order(&self, base: usize) -> Vec<usize> {
        let cols = self.columns();
        let mut new_of = vec![usize::MAX; self.index];
        let mut order = vec![base];
        new_of[base] = 0;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for col in &cols {
                let d = col[c];
                if new_of[d] == usize::MAX {
                    new_of[d] = order.len();
                    order.push(d);
                }
            }
            i += 1;
        }
        new_of
    }

    /// Standardized table of the stabilizer of `base`, i.e. the conjugate subgroup `g^-1 U g`
    /// when `base` is the coset `Ug`.
    pub fn rebased(&self, base: usize) -> CosetTable {
        let new_of = self.standard_order(base);
        let action = self
            .action
            .iter()
            .map(|p| {
                let mut images = vec![0; self.index];
                for c in 0..self.index {
                    images[new_of[c]] = new_of[p.apply(c)];
                }
                Perm::from_images(images).unwrap()
            })
            .collect();
        CosetTable {
            index: self.index,
            action,
        }
    }

    pub fn standardized(&self) -> CosetTable {
        self.rebased(0)
    }

    /// Serialization used for canonical ordering: index then row-major entries.
    pub fn serialization(&self) -> Vec<u32> {
        let cols = self.columns();
        let mut out = Vec::with_capacity(1 + self.index * cols.len());
        out.push(self.index as u32);
        for c in 0..self.index {
            for col in &cols {
                out.push(col[c] as u32);
            }
        }
        out
    }

    /// Minimal serialization over all conjugates.
    pub fn conjugacy_key(&self) -> Vec<u32> {
        (0..self.index)
            .map(|b| self.rebased(b).serialization())
            .min()
            .unwrap()
    }

    /// Whether the subgroup is normal: every coset has the same stabilizer.
    pub fn is_normal(&self) -> bool {
        let s = self.standardized();
        (1..self.index).all(|b| self.rebased(b) == s)
    }

    /// Shortest-first representative word for each coset.
    pub fn transversal(&self) -> Vec<Word> {
        let cols = self.columns();
        let mut reps: Vec<Option<Word>> = vec![None; self.index];
        reps[0] = Some(Word::identity());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for (k, col) in cols.iter().enumerate() {
                let d = col[c];
                if reps[d].is_none() {
                    let w = reps[c].as_ref().unwrap().mul(&Word::from_letters([Letter::from_column(k)]));
                    reps[d] = Some(w);
                    queue.push_back(d);
                }
            }
        }
        reps.into_iter().map(|w| w.unwrap()).collect()
    }

    /// Free generators of the subgroup (Schreier generators over the transversal),
    /// dropping trivial ones.
    pub fn schreier_generators(&self) -> Vec<Word> {
        let reps = self.transversal();
        let mut out = Vec::new();
        for (c, rep) in reps.iter().enumerate() {
            for (g, p) in self.action.iter().enumerate() {
                let d = p.apply(c);
                let w = rep.mul(&Word::generator(g)).mul(&reps[d].inverse());
                if !w.is_identity() && !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        out
    }
}

/// State of an HLT enumeration; may be inspected after hitting the bound.
pub struct Enumerator<'p> {
    pres: &'p Presentation,
    relators: Vec<Vec<usize>>,
    ncols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    max_cosets: usize,
}

impl<'p> Enumerator<'p> {
    pub fn new(pres: &'p Presentation, max_cosets: usize) -> Self {
        let ncols = 2 * pres.generator_count();
        let relators = pres
            .relators()
            .iter()
            .map(|r| r.letters().iter().map(|l| l.column()).collect())
            .collect();
        Enumerator {
            pres,
            relators,
            ncols,
            table: vec![NONE; ncols],
            parent: vec![0],
            max_cosets: max_cosets.max(1),
        }
    }

    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: usize, x: usize) -> Option<usize> {
        let v = self.table[c * self.ncols + x];
        (v != NONE).then_some(v as usize)
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.table[c * self.ncols + x] = d as u32;
    }

    fn unset(&mut self, c: usize, x: usize) {
        self.table[c * self.ncols + x] = NONE;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut m = c;
        while self.parent[m] as usize != m {
            m = self.parent[m] as usize;
        }
        let mut j = c;
        while self.parent[j] as usize != m {
            let next = self.parent[j] as usize;
            self.parent[j] = m as u32;
            j = next;
        }
        m
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize> {
        let d = self.rows();
        if d >= self.max_cosets {
            return Err(Error::Exceeded {
                max_cosets: self.max_cosets,
            });
        }
        self.parent.push(d as u32);
        self.table.extend(std::iter::repeat_n(NONE, self.ncols));
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(d)
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let (k1, l1) = (self.rep(k), self.rep(l));
        if k1 != l1 {
            let (m, n) = (k1.min(l1), k1.max(l1));
            self.parent[n] = m as u32;
            queue.push(n);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.ncols {
                if let Some(f) = self.get(e, x) {
                    self.unset(f, x ^ 1);
                    let e1 = self.rep(e);
                    let f1 = self.rep(f);
                    if let Some(t) = self.get(e1, x) {
                        self.merge(f1, t, &mut queue);
                    } else if let Some(t) = self.get(f1, x ^ 1) {
                        self.merge(e1, t, &mut queue);
                    } else {
                        self.set(e1, x, f1);
                        self.set(f1, x ^ 1, e1);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, alpha: usize, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j {
                match self.get(f, w[i]) {
                    Some(n) => {
                        f = n;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != alpha {
                    self.coincidence(f, alpha);
                }
                return Ok(());
            }
            while j >= i as isize {
                match self.get(b, w[j as usize] ^ 1) {
                    Some(n) => {
                        b = n;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i as isize {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            } else {
                self.define(f, w[i])?;
            }
        }
    }

    /// Defines cosets along `w` from coset 0 without imposing anything.
    pub fn predefine_path(&mut self, w: &Word) -> Result<()> {
        let mut c = 0;
        for l in w.letters() {
            c = match self.get(c, l.column()) {
                Some(d) => d,
                None => self.define(c, l.column())?,
            };
        }
        Ok(())
    }

    /// Runs HLT to completion for the subgroup generated by `subgroup_gens`.
    pub fn run(&mut self, subgroup_gens: &[Word]) -> Result<()> {
        for w in subgroup_gens {
            let cols: Vec<usize> = w.letters().iter().map(|l| l.column()).collect();
            self.scan_and_fill(0, &cols)?;
        }
        let relators = std::mem::take(&mut self.relators);
        let result = self.run_relators(&relators);
        self.relators = relators;
        result
    }

    fn run_relators(&mut self, relators: &[Vec<usize>]) -> Result<()> {
        let mut alpha = 0;
        while alpha < self.rows() {
            for r in relators {
                if !self.is_live(alpha) {
                    break;
                }
                self.scan_and_fill(alpha, r)?;
            }
            if self.is_live(alpha) {
                for x in 0..self.ncols {
                    if self.get(alpha, x).is_none() {
                        self.define(alpha, x)?;
                    }
                }
            }
            alpha += 1;
        }
        Ok(())
    }

    /// Follows `w` from coset 0 through defined entries; `None` if it leaves the table.
    pub fn trace_from_base(&mut self, w: &Word) -> Option<usize> {
        let mut c = self.rep(0);
        for l in w.letters() {
            let d = self.get(c, l.column())?;
            c = self.rep(d);
        }
        Some(c)
    }

    pub fn live_count(&self) -> usize {
        (0..self.rows()).filter(|&c| self.is_live(c)).count()
    }

    /// Compacted, standardized table. Only valid after a successful [`run`](Self::run).
    pub fn into_table(mut self) -> CosetTable {
        let live: Vec<usize> = (0..self.rows()).filter(|&c| self.is_live(c)).collect();
        let mut new_of = vec![usize::MAX; self.rows()];
        for (i, &c) in live.iter().enumerate() {
            new_of[c] = i;
        }
        let n = live.len();
        let gens = self.pres.generator_count();
        let mut action = Vec::with_capacity(gens);
        for g in 0..gens {
            let mut images = vec![0; n];
            for (i, &c) in live.iter().enumerate() {
                let d = self.get(c, 2 * g).expect("complete table");
                images[i] = new_of[self.rep(d)];
            }
            action.push(Perm::from_images(images).expect("coset action is a bijection"));
        }
        if gens == 0 {
            return CosetTable::trivial(0);
        }
        CosetTable { index: n, action }.standardized()
    }
}

/// Coset table of the subgroup generated by `subgroup_gens`, or `Exceeded`.
pub fn coset_enumerate(p: &Presentation, subgroup_gens: &[Word], max_cosets: usize) -> Result<CosetTable> {
    for w in subgroup_gens {
        if let Some(g) = w.max_generator() {
            if g >= p.generator_count() {
                return Err(Error::InvalidGenerator {
                    index: g,
                    count: p.generator_count(),
                });
            }
        }
    }
    let mut e = Enumerator::new(p, max_cosets);
    e.run(subgroup_gens)?;
    Ok(e.into_table())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_order() {
        let p = Presentation::parse(&["a"], &["aaaa"]).unwrap();
        let t = coset_enumerate(&p, &[], 100).unwrap();
        assert_eq!(t.index(), 4);
        t.check(&p).unwrap();
    }

    #[test]
    fn sl2z_generators_give_index_one() {
        let p = Presentation::parse(&["s", "u"], &["ssss", "ssUUU"]).unwrap();
        let t = coset_enumerate(&p, &[Word::generator(0), Word::generator(1)], 100).unwrap();
        assert_eq!(t.index(), 1);
    }

    #[test]
    fn infinite_index_exceeds() {
        let p = Presentation::parse(&["a", "b"], &[]).unwrap();
        assert_eq!(
            coset_enumerate(&p, &[Word::generator(0)], 100),
            Err(Error::Exceeded { max_cosets: 100 })
        );
    }

    #[test]
    fn finite_groups() {
        let s3 = Presentation::parse(&["a", "b"], &["aa", "bb", "ababab"]).unwrap();
        assert_eq!(coset_enumerate(&s3, &[], 1000).unwrap().index(), 6);
        assert_eq!(coset_enumerate(&s3, &[Word::generator(0)], 1000).unwrap().index(), 3);
        let a5 = Presentation::parse(&["a", "b"], &["aa", "bbb", "ababababab"]).unwrap();
        assert_eq!(coset_enumerate(&a5, &[], 10_000).unwrap().index(), 60);
        // binary-ish: <s,u | s^4, s^2 u^-3> modulo u^6 and (su)^... is SL2(Z)-quotient;
        // here just ensure a non-trivial finite quotient closes
        let q = Presentation::parse(&["s", "u"], &["ssss", "ssUUU", "suususuusu"]).unwrap();
        let t = coset_enumerate(&q, &[], 10_000).unwrap();
        t.check(&q).unwrap();
    }

    #[test]
    fn rebasing_conjugates() {
        let s3 = Presentation::parse(&["a", "b"], &["aa", "bb", "ababab"]).unwrap();
        let t = coset_enumerate(&s3, &[Word::generator(0)], 1000).unwrap();
        assert!(!t.is_normal());
        let keys: Vec<_> = (0..3).map(|b| t.rebased(b).conjugacy_key()).collect();
        assert!(keys.windows(2).all(|w| w[0] == w[1]));
        let a3 = coset_enumerate(&s3, &[Word::from_signed(&[1, 2])], 1000).unwrap();
        assert_eq!(a3.index(), 2);
        assert!(a3.is_normal());
    }

    #[test]
    fn schreier_generators_lie_in_subgroup() {
        let s3 = Presentation::parse(&["a", "b"], &["aa", "bb", "ababab"]).unwrap();
        let t = coset_enumerate(&s3, &[Word::generator(1)], 1000).unwrap();
        for w in t.schreier_generators() {
            assert!(t.contains(&w));
        }
    }
}
