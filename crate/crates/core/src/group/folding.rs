//! Stallings folding of subgroup graphs, with edges labelled by elements of a second
//! free group so that a homomorphism `F(Y) -> F(X)` can be analysed exactly.
//!
//! Folding the wedge of petals spelling `phi(y_j)` yields the core graph of the image
//! subgroup. Each fold either merges two vertices (after a gauge change that equalises
//! the two labels) or deletes a parallel edge, in which case the discrepancy of the
//! labels is recorded. The recorded elements normally generate the kernel of `phi`.

use std::collections::{HashMap, VecDeque};

use super::coset::CosetTable;
use super::perm::Perm;
use super::word::{Letter, Word};

#[derive(Debug, Clone)]
struct Edge {
    from: usize,
    to: usize,
    generator: usize,
    label: Word,
}

/// One side of an edge seen from a vertex.
#[derive(Debug, Clone, Copy)]
struct Dart {
    edge: usize,
    forward: bool,
}

/// Folded subgroup graph in reduced form.
#[derive(Debug, Clone)]
pub struct Folding {
    generator_count: usize,
    /// `adj[v][column] = (target, label read along the dart)`
    adj: Vec<Vec<Option<(usize, Word)>>>,
    edge_count: usize,
    kernel: Vec<Word>,
}

struct Builder {
    alive: Vec<bool>,
    edges: Vec<Option<Edge>>,
    kernel: Vec<Word>,
}

impl Builder {
    fn dart_end(&self, d: Dart) -> usize {
        let e = self.edges[d.edge].as_ref().unwrap();
        if d.forward {
            e.to
        } else {
            e.from
        }
    }

    fn dart_label(&self, d: Dart) -> Word {
        let e = self.edges[d.edge].as_ref().unwrap();
        if d.forward {
            e.label.clone()
        } else {
            e.label.inverse()
        }
    }

    fn add_vertex(&mut self) -> usize {
        self.alive.push(true);
        self.alive.len() - 1
    }

    fn add_path(&mut self, word: &Word, label: Word) {
        let n = word.len();
        let mut cur = 0;
        for (i, l) in word.letters().iter().enumerate() {
            let next = if i + 1 == n { 0 } else { self.add_vertex() };
            let lab = if i == 0 { label.clone() } else { Word::identity() };
            let edge = if l.inverse {
                Edge {
                    from: next,
                    to: cur,
                    generator: l.generator,
                    label: lab.inverse(),
                }
            } else {
                Edge {
                    from: cur,
                    to: next,
                    generator: l.generator,
                    label: lab,
                }
            };
            self.edges.push(Some(edge));
            cur = next;
        }
    }

    fn find_fold(&self) -> Option<(usize, Dart, Dart)> {
        let mut seen: HashMap<(usize, usize), Dart> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            let Some(e) = e else { continue };
            for (v, col, forward) in [(e.from, 2 * e.generator, true), (e.to, 2 * e.generator + 1, false)] {
                let d = Dart { edge: i, forward };
                if let Some(&other) = seen.get(&(v, col)) {
                    return Some((v, other, d));
                }
                seen.insert((v, col), d);
            }
        }
        None
    }

    fn gauge(&mut self, w: usize, c: &Word) {
        let ci = c.inverse();
        for e in self.edges.iter_mut().flatten() {
            if e.from == w {
                e.label = ci.mul(&e.label);
            }
            if e.to == w {
                e.label = e.label.mul(c);
            }
        }
    }

    fn merge(&mut self, from: usize, into: usize) {
        for e in self.edges.iter_mut().flatten() {
            if e.from == from {
                e.from = into;
            }
            if e.to == from {
                e.to = into;
            }
        }
        self.alive[from] = false;
    }

    /// Label of some path from the base to every reachable vertex.
    fn labels_from_base(&self) -> Vec<Option<Word>> {
        let mut out: Vec<Option<Word>> = vec![None; self.alive.len()];
        out[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for e in self.edges.iter().flatten() {
                for (a, b, lab) in [(e.from, e.to, e.label.clone()), (e.to, e.from, e.label.inverse())] {
                    if a == v && out[b].is_none() {
                        out[b] = Some(out[v].as_ref().unwrap().mul(&lab));
                        queue.push_back(b);
                    }
                }
            }
        }
        out
    }

    fn fold_all(&mut self) {
        while let Some((u, mut d1, mut d2)) = self.find_fold() {
            let (mut v1, mut v2) = (self.dart_end(d1), self.dart_end(d2));
            if v1 == v2 {
                let diff = self.dart_label(d1).mul(&self.dart_label(d2).inverse());
                if !diff.is_identity() {
                    let p = self.labels_from_base()[u].clone().unwrap();
                    let k = p.mul(&diff).mul(&p.inverse());
                    if !self.kernel.contains(&k) {
                        self.kernel.push(k);
                    }
                }
                self.edges[d2.edge] = None;
                continue;
            }
            if v2 == 0 || v2 == u {
                std::mem::swap(&mut d1, &mut d2);
                std::mem::swap(&mut v1, &mut v2);
            }
            if v2 != 0 && v2 != u {
                // make the label of d2 agree with d1 by re-gauging its far end
                let c = self.dart_label(d2).inverse().mul(&self.dart_label(d1));
                if !c.is_identity() {
                    self.gauge(v2, &c);
                }
                self.edges[d2.edge] = None;
                self.merge(v2, v1);
            } else {
                // {v1, v2} = {u, base}, with v2 == u or v2 == base after the swap
                let (loop_dart, other) = if v2 == u { (d2, d1) } else { (d1, d2) };
                let c = self.dart_label(loop_dart).inverse().mul(&self.dart_label(other));
                if !c.is_identity() {
                    self.gauge(u, &c);
                }
                self.edges[loop_dart.edge] = None;
                self.merge(u, 0);
            }
        }
    }
}

impl Folding {
    /// Folds the petals `images[j]` (words over `generator_count` generators), each
    /// labelled by domain generator `j`.
    pub fn new(generator_count: usize, images: &[Word]) -> Self {
        let mut b = Builder {
            alive: vec![true],
            edges: Vec::new(),
            kernel: Vec::new(),
        };
        for (j, w) in images.iter().enumerate() {
            if w.is_identity() {
                b.kernel.push(Word::generator(j));
            } else {
                b.add_path(w, Word::generator(j));
            }
        }
        b.fold_all();
        Self::finish(generator_count, b)
    }

    /// Unlabelled folding of the subgroup generated by `gens`.
    pub fn of_subgroup(generator_count: usize, gens: &[Word]) -> Self {
        Self::new(generator_count, gens)
    }

    fn finish(generator_count: usize, b: Builder) -> Self {
        // renumber by breadth-first order from the base
        let mut id = vec![usize::MAX; b.alive.len()];
        id[0] = 0;
        let mut order = vec![0];
        let mut by_vertex: HashMap<usize, Vec<(usize, usize, Word)>> = HashMap::new();
        let mut edge_count = 0;
        for e in b.edges.iter().flatten() {
            edge_count += 1;
            by_vertex
                .entry(e.from)
                .or_default()
                .push((2 * e.generator, e.to, e.label.clone()));
            by_vertex
                .entry(e.to)
                .or_default()
                .push((2 * e.generator + 1, e.from, e.label.inverse()));
        }
        for list in by_vertex.values_mut() {
            list.sort_by_key(|x| x.0);
        }
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            if let Some(list) = by_vertex.get(&v) {
                for (_, w, _) in list {
                    if id[*w] == usize::MAX {
                        id[*w] = order.len();
                        order.push(*w);
                    }
                }
            }
            i += 1;
        }
        let mut adj = vec![vec![None; 2 * generator_count]; order.len()];
        for (&v, list) in &by_vertex {
            for (col, w, lab) in list {
                adj[id[v]][*col] = Some((id[*w], lab.clone()));
            }
        }
        Folding {
            generator_count,
            adj,
            edge_count,
            kernel: b.kernel,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Rank of the image subgroup.
    pub fn rank(&self) -> usize {
        self.edge_count + 1 - self.vertex_count()
    }

    /// Follows `w` from the base; returns the endpoint and the accumulated label.
    pub fn trace(&self, w: &Word) -> Option<(usize, Word)> {
        let mut v = 0;
        let mut label = Word::identity();
        for l in w.letters() {
            let (next, lab) = self.adj[v][l.column()].as_ref()?;
            label = label.mul(lab);
            v = *next;
        }
        Some((v, label))
    }

    /// Membership in the image subgroup.
    pub fn contains(&self, w: &Word) -> bool {
        matches!(self.trace(w), Some((0, _)))
    }

    /// A domain element mapping to `w`, if `w` is in the image.
    pub fn preimage(&self, w: &Word) -> Option<Word> {
        match self.trace(w) {
            Some((0, label)) => Some(label),
            _ => None,
        }
    }

    /// Elements whose normal closure in the domain is the kernel.
    pub fn kernel_generators(&self) -> &[Word] {
        &self.kernel
    }

    pub fn is_complete(&self) -> bool {
        self.adj.iter().all(|row| row.iter().all(|e| e.is_some()))
    }

    /// Index of the image when it is finite.
    pub fn index(&self) -> Option<usize> {
        self.is_complete().then(|| self.vertex_count())
    }

    /// Action of the generators on the vertices, when the graph is complete.
    pub fn coset_table(&self) -> Option<CosetTable> {
        if !self.is_complete() {
            return None;
        }
        let action = (0..self.generator_count)
            .map(|g| Perm::from_images(self.adj.iter().map(|row| row[2 * g].as_ref().unwrap().0).collect()).unwrap())
            .collect();
        Some(
            CosetTable::from_action_unchecked(self.generator_count, action)
                .unwrap()
                .standardized(),
        )
    }

    /// Free basis of the image: one word per edge outside a breadth-first spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        let n = self.vertex_count();
        let mut path: Vec<Option<Word>> = vec![None; n];
        let mut tree_parent: Vec<Option<(usize, usize)>> = vec![None; n];
        path[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for col in 0..2 * self.generator_count {
                if let Some((w, _)) = &self.adj[v][col] {
                    if path[*w].is_none() {
                        path[*w] = Some(path[v].as_ref().unwrap().mul(&Word::from_letters([Letter::from_column(col)])));
                        tree_parent[*w] = Some((v, col));
                        queue.push_back(*w);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for v in 0..n {
            for g in 0..self.generator_count {
                if let Some((w, _)) = &self.adj[v][2 * g] {
                    let is_tree = tree_parent[*w] == Some((v, 2 * g)) || tree_parent[v] == Some((*w, 2 * g + 1));
                    if !is_tree {
                        let p = path[v].as_ref().unwrap();
                        let q = path[*w].as_ref().unwrap();
                        out.push(p.mul(&Word::generator(g)).mul(&q.inverse()));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn image(word: &Word, images: &[Word]) -> Word {
        word.substitute(images)
    }

    #[test]
    fn membership_and_index() {
        // <a^2, b, a b a^-1> has index 2 in F2
        let gens = [Word::from_signed(&[1, 1]), Word::from_signed(&[2]), Word::from_signed(&[1, 2, -1])];
        let f = Folding::of_subgroup(2, &gens);
        assert_eq!(f.index(), Some(2));
        assert_eq!(f.rank(), 3);
        assert!(f.contains(&Word::from_signed(&[1, 1, 2])));
        assert!(!f.contains(&Word::from_signed(&[1])));
        let t = f.coset_table().unwrap();
        assert_eq!(t.index(), 2);
        // <a> has infinite index
        assert_eq!(Folding::of_subgroup(2, &[Word::generator(0)]).index(), None);
    }

    #[test]
    fn kernel_of_a_collapse() {
        // x, y -> a, a: kernel is normally generated by x y^-1
        let f = Folding::new(1, &[Word::generator(0), Word::generator(0)]);
        assert_eq!(f.rank(), 1);
        assert_eq!(f.kernel_generators().len(), 1);
        let k = &f.kernel_generators()[0];
        assert!(image(k, &[Word::generator(0), Word::generator(0)]).is_identity());
        assert!(!k.is_identity());
    }

    #[test]
    fn preimages_map_back() {
        let images = [Word::from_signed(&[1, 2]), Word::from_signed(&[2, -1]), Word::from_signed(&[2, 2])];
        let f = Folding::new(2, &images);
        for w in [Word::from_signed(&[1, 2, 2, -1]), Word::from_signed(&[2, 2, 2, 2])] {
            let pre = f.preimage(&w).unwrap();
            assert_eq!(image(&pre, &images), w);
        }
    }

    fn word_strategy(gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..gens, any::<bool>()), 0..=max_len)
            .prop_map(|v| Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i))))
    }

    proptest! {
        #[test]
        fn recorded_kernel_elements_die(images in prop::collection::vec(word_strategy(2, 5), 1..5)) {
            let f = Folding::new(2, &images);
            for k in f.kernel_generators() {
                prop_assert!(image(k, &images).is_identity());
            }
            for (j, w) in images.iter().enumerate() {
                prop_assert!(f.contains(w));
                let pre = f.preimage(w).unwrap();
                prop_assert_eq!(image(&pre, &images), w.clone());
                let _ = j;
            }
            // basis words are members and their number is the rank
            let basis = f.basis();
            prop_assert_eq!(basis.len(), f.rank());
            for b in basis {
                prop_assert!(f.contains(&b));
            }
        }
    }
}
