use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::presentation::Presentation;
use super::word::{Letter, Word};
use crate::{Error, Result};

/// Largest group whose elements are enumerated and cached.
pub const ELEMENT_CACHE_CAP: usize = 1_000_000;

/// A bijection of `{0..n-1}`, acting on the right: `i^(p*q) = (i^p)^q`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Perm {
            images: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    /// Permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for c in cycles {
            for k in 0..c.len() {
                images[c[k]] = c[(k + 1) % c.len()];
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&i| i as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.images().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            out = out.then(&base);
        }
        out
    }

    /// `by^-1 * self * by`
    pub fn conjugate(&self, by: &Perm) -> Perm {
        by.inverse().then(self).then(by)
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &j)| *i as u32 != j)
            .map(|(i, _)| i)
    }

    pub fn fixes(&self, i: usize) -> bool {
        self.apply(i) == i
    }

    /// Applies a word given per-generator images.
    pub fn of_word(word: &Word, gens: &[Perm], degree: usize) -> Perm {
        let mut out = Perm::identity(degree);
        for l in word.letters() {
            let g = &gens[l.generator];
            out = if l.inverse { out.then(&g.inverse()) } else { out.then(g) };
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for s in 0..self.degree() {
            if seen[s] || self.fixes(s) {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = s;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.apply(i);
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    /// `transversal[b]` maps the base point to `b`.
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(Perm::identity(degree));
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            transversal,
        }
    }
}

/// Base and strong generating set built by deterministic Schreier–Sims.
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Perm]) -> Self {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for g in gens {
            if let Some((r, depth)) = chain.sift_from(g, 0) {
                chain.insert(r, depth);
            }
        }
        chain.complete();
        chain
    }

    /// Sifts `g` through levels `from..`; returns the nontrivial residue and its depth.
    fn sift_from(&self, g: &Perm, from: usize) -> Option<(Perm, usize)> {
        let mut h = g.clone();
        for (depth, level) in self.levels.iter().enumerate().skip(from) {
            let b = h.apply(level.base);
            match &level.transversal[b] {
                Some(u) => h = h.then(&u.inverse()),
                None => return Some((h, depth)),
            }
        }
        if h.is_identity() {
            None
        } else {
            Some((h, self.levels.len()))
        }
    }

    fn insert(&mut self, g: Perm, depth: usize) {
        if depth == self.levels.len() {
            let base = g.first_moved().expect("nontrivial residue");
            self.levels.push(Level::new(base, self.degree));
        }
        // a generator at depth d belongs to every level above it as well
        for level in &mut self.levels[..=depth] {
            level.gens.push(g.clone());
        }
        for d in 0..=depth {
            self.rebuild_orbit(d);
        }
    }

    fn rebuild_orbit(&mut self, d: usize) {
        let level = &mut self.levels[d];
        let mut queue: VecDeque<usize> = level.orbit.iter().copied().collect();
        while let Some(b) = queue.pop_front() {
            let ub = level.transversal[b].clone().unwrap();
            for s in &level.gens {
                let c = s.apply(b);
                if level.transversal[c].is_none() {
                    level.transversal[c] = Some(ub.then(s));
                    level.orbit.push(c);
                    queue.push_back(c);
                }
            }
        }
    }

    fn complete(&mut self) {
        while let Some((r, depth)) = self.find_unsifted() {
            self.insert(r, depth);
        }
    }

    fn find_unsifted(&self) -> Option<(Perm, usize)> {
        for d in (0..self.levels.len()).rev() {
            let level = &self.levels[d];
            for &b in &level.orbit {
                let ub = level.transversal[b].as_ref().unwrap();
                for s in &level.gens {
                    let c = s.apply(b);
                    let uc = level.transversal[c].as_ref().unwrap();
                    let schreier = ub.then(s).then(&uc.inverse());
                    if schreier.is_identity() {
                        continue;
                    }
                    if let Some(found) = self.sift_from(&schreier, d + 1) {
                        return Some(found);
                    }
                }
            }
        }
        None
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift_from(g, 0).is_none()
    }
}

/// A finite permutation group given by generators.
#[derive(Clone)]
pub struct FinitePermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: StabChain,
    elements: OnceLock<Vec<Perm>>,
}

impl fmt::Debug for FinitePermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinitePermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .field("order", &self.order())
            .finish()
    }
}

impl PartialEq for FinitePermGroup {
    /// Equality as subgroups of the symmetric group.
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && other.generators.iter().all(|g| self.contains(g))
    }
}

impl Eq for FinitePermGroup {}

/// Wire form of a permutation group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermGroupJson {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl FinitePermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidPermutation(format!(
                "generator of degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
        let chain = StabChain::new(degree, &generators);
        Ok(FinitePermGroup {
            degree,
            generators,
            chain,
            elements: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        FinitePermGroup::new(degree, Vec::new()).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        let gen = Perm::from_images((0..n).map(|i| (i + 1) % n).collect()).unwrap();
        FinitePermGroup::new(n, vec![gen]).unwrap()
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[&[0, 1]]).unwrap());
        }
        if n >= 3 {
            let cycle: Vec<usize> = (0..n).collect();
            gens.push(Perm::from_cycles(n, &[&cycle]).unwrap());
        }
        FinitePermGroup::new(n, gens).unwrap()
    }

    pub fn from_json(json: &PermGroupJson) -> Result<Self> {
        let gens = json
            .generators
            .iter()
            .map(|g| {
                if g.len() != json.degree {
                    return Err(Error::InvalidPermutation(format!(
                        "{g:?} does not have degree {}",
                        json.degree
                    )));
                }
                Perm::from_images(g.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        FinitePermGroup::new(json.degree, gens)
    }

    pub fn to_json(&self, names: Option<Vec<String>>) -> PermGroupJson {
        PermGroupJson {
            degree: self.degree,
            generators: self.generators.iter().map(|g| g.to_vec()).collect(),
            names,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.chain.contains(g)
    }

    /// All elements in breadth-first order from the identity over the generators.
    pub fn elements(&self) -> Result<&[Perm]> {
        let order = self.order();
        if order > ELEMENT_CACHE_CAP as u128 {
            return Err(Error::TooLarge {
                order,
                cap: ELEMENT_CACHE_CAP,
            });
        }
        Ok(self.elements.get_or_init(|| self.words_bfs().0))
    }

    /// Breadth-first enumeration with a shortest word for every element.
    fn words_bfs(&self) -> (Vec<Perm>, Vec<Word>) {
        let id = self.identity();
        let mut index: HashMap<Perm, usize> = HashMap::new();
        index.insert(id.clone(), 0);
        let mut elems = vec![id];
        let mut words = vec![Word::identity()];
        let mut i = 0;
        while i < elems.len() {
            for (j, g) in self.generators.iter().enumerate() {
                let next = elems[i].then(g);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), elems.len());
                    words.push(words[i].mul(&Word::generator(j)));
                    elems.push(next);
                }
            }
            i += 1;
        }
        (elems, words)
    }

    /// Every element paired with a shortest word over the generators.
    pub fn element_words(&self) -> Result<Vec<(Perm, Word)>> {
        self.elements()?;
        let (e, w) = self.words_bfs();
        Ok(e.into_iter().zip(w).collect())
    }

    /// Subgroup generated by `gens`, which must all lie in `self`.
    pub fn subgroup(&self, gens: Vec<Perm>) -> Result<FinitePermGroup> {
        if gens.iter().any(|g| !self.contains(g)) {
            return Err(Error::NotAnElement);
        }
        FinitePermGroup::new(self.degree, gens)
    }

    pub fn is_subgroup_of(&self, other: &FinitePermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn is_normal_in(&self, other: &FinitePermGroup) -> bool {
        self.is_subgroup_of(other)
            && other.generators.iter().all(|s| {
                self.generators
                    .iter()
                    .all(|h| self.contains(&h.conjugate(s)))
            })
    }

    /// Presentation read off the Cayley graph: one relator per non-tree edge.
    pub fn cayley_presentation(&self, names: Vec<String>) -> Result<(Presentation, Vec<(Perm, Word)>)> {
        assert_eq!(names.len(), self.generators.len());
        let ew = self.element_words()?;
        let index: HashMap<&Perm, usize> = ew.iter().enumerate().map(|(i, (p, _))| (p, i)).collect();
        let mut relators = Vec::new();
        for (p, w) in &ew {
            for (j, g) in self.generators.iter().enumerate() {
                let q = p.then(g);
                let k = index[&q];
                let rel = w.mul(&Word::generator(j)).mul(&ew[k].1.inverse());
                relators.push(rel);
            }
        }
        let pres = Presentation::new(names, relators)?;
        Ok((pres, ew))
    }

    /// Orbit of `point` with a transversal word for each orbit element.
    pub fn orbit_words(&self, point: usize) -> Vec<(usize, Word)> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut out = vec![(point, Word::identity())];
        let mut i = 0;
        while i < out.len() {
            let (b, w) = out[i].clone();
            for (j, g) in self.generators.iter().enumerate() {
                let c = g.apply(b);
                if !seen[c] {
                    seen[c] = true;
                    out.push((c, w.mul(&Word::generator(j))));
                }
            }
            i += 1;
        }
        out
    }
}

/// Smallest normal subgroup of `group` containing `gens`.
pub fn normal_closure_perm(group: &FinitePermGroup, gens: &[Perm]) -> Result<FinitePermGroup> {
    if gens.iter().any(|g| !group.contains(g)) {
        return Err(Error::NotAnElement);
    }
    let mut current: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    let mut sub = FinitePermGroup::new(group.degree(), current.clone())?;
    let mut i = 0;
    while i < current.len() {
        let mut grew = false;
        for s in group.generators() {
            let c = current[i].conjugate(s);
            if !sub.contains(&c) {
                current.push(c);
                grew = true;
            }
        }
        if grew {
            sub = FinitePermGroup::new(group.degree(), current.clone())?;
        }
        i += 1;
    }
    Ok(sub)
}

/// Permutation image of each generator letter, including inverse letters.
pub fn letter_perm(gens: &[Perm], l: Letter) -> Perm {
    if l.inverse {
        gens[l.generator].inverse()
    } else {
        gens[l.generator].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FinitePermGroup {
        FinitePermGroup::symmetric(3)
    }

    #[test]
    fn orders() {
        assert_eq!(s3().order(), 6);
        assert_eq!(FinitePermGroup::symmetric(5).order(), 120);
        assert_eq!(FinitePermGroup::cyclic(7).order(), 7);
        assert_eq!(FinitePermGroup::trivial(4).order(), 1);
        let d4 = FinitePermGroup::new(
            4,
            vec![
                Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
                Perm::from_cycles(4, &[&[1, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(d4.order(), 8);
        assert_eq!(d4.elements().unwrap().len(), 8);
    }

    #[test]
    fn membership() {
        let a4 = FinitePermGroup::new(
            4,
            vec![
                Perm::from_cycles(4, &[&[0, 1, 2]]).unwrap(),
                Perm::from_cycles(4, &[&[1, 2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(a4.order(), 12);
        assert!(a4.contains(&Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()));
        assert!(!a4.contains(&Perm::from_cycles(4, &[&[0, 1]]).unwrap()));
    }

    #[test]
    fn normal_closure_examples() {
        let t = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        assert_eq!(normal_closure_perm(&s3(), &[t]).unwrap().order(), 6);
        assert_eq!(normal_closure_perm(&s3(), &[]).unwrap().order(), 1);
        let c4 = FinitePermGroup::cyclic(4);
        let sq = c4.generators()[0].pow(2);
        assert_eq!(normal_closure_perm(&c4, &[sq]).unwrap().order(), 2);
        let outside = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        assert_eq!(normal_closure_perm(&c4, &[outside]), Err(Error::NotAnElement));
    }

    #[test]
    fn normal_closure_is_normal_exhaustively() {
        let s4 = FinitePermGroup::symmetric(4);
        let elems = s4.elements().unwrap().to_vec();
        for h in &elems {
            let n = normal_closure_perm(&s4, std::slice::from_ref(h)).unwrap();
            assert!(n.contains(h));
            for g in &elems {
                for x in n.elements().unwrap() {
                    assert!(n.contains(&x.conjugate(g)));
                }
            }
        }
    }

    #[test]
    fn cayley_presentation_defines_the_group() {
        let (p, ew) = s3().cayley_presentation(vec!["x".into(), "y".into()]).unwrap();
        assert_eq!(ew.len(), 6);
        let gens = s3().generators().to_vec();
        for r in p.relators() {
            assert!(Perm::of_word(r, &gens, 3).is_identity());
        }
    }
}
