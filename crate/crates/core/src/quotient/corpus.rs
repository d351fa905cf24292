//! Seeded random actions of small groups on small connected graphs.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::action::GroupAction;
use crate::graph::serre::SerreGraph;
use crate::group::perm::{FinitePermGroup, Perm};
use crate::Result;

fn perm(images: &[usize]) -> Perm {
    Perm::from_images(images.to_vec()).unwrap()
}

/// Every group of order at most 8, as a permutation group.
pub fn small_groups() -> Vec<(&'static str, FinitePermGroup)> {
    let mut out: Vec<(&'static str, FinitePermGroup)> = vec![("1", FinitePermGroup::trivial(1))];
    for (name, n) in [("C2", 2), ("C3", 3), ("C4", 4), ("C5", 5), ("C6", 6), ("C7", 7), ("C8", 8)] {
        out.push((name, FinitePermGroup::cyclic(n)));
    }
    let g = |degree: usize, gens: &[&[usize]]| FinitePermGroup::new(degree, gens.iter().map(|p| perm(p)).collect()).unwrap();
    out.push(("C2xC2", g(4, &[&[1, 0, 2, 3], &[0, 1, 3, 2]])));
    out.push(("S3", FinitePermGroup::symmetric(3)));
    out.push(("D4", g(4, &[&[1, 2, 3, 0], &[0, 3, 2, 1]])));
    out.push(("Q8", g(8, &[&[1, 3, 5, 6, 2, 7, 0, 4], &[2, 4, 3, 7, 6, 1, 5, 0]])));
    out.push(("C2xC4", g(6, &[&[1, 0, 2, 3, 4, 5], &[0, 1, 3, 4, 5, 2]])));
    out.push(("C2xC2xC2", g(6, &[&[1, 0, 2, 3, 4, 5], &[0, 1, 3, 2, 4, 5], &[0, 1, 2, 3, 5, 4]])));
    out
}

/// Parameters of the random corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusShape {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_vertex_orbits: usize,
}

impl Default for CorpusShape {
    fn default() -> Self {
        CorpusShape {
            max_vertices: 12,
            max_edges: 24,
            max_vertex_orbits: 3,
        }
    }
}

struct Table {
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    /// `then[a][b]`: `a` then `b`.
    then: Vec<Vec<usize>>,
}

impl Table {
    fn new(group: &FinitePermGroup) -> Result<Self> {
        let elements = group.elements()?.to_vec();
        let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let then = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&a.then(b)]).collect())
            .collect();
        Ok(Table { elements, index, then })
    }

    fn closure(&self, seeds: &[usize]) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &s in seeds {
                let y = self.then[x][s];
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    /// Subgroups generated by at most two elements, plus the whole group.
    fn subgroups(&self) -> Vec<BTreeSet<usize>> {
        let n = self.elements.len();
        let mut out = BTreeSet::new();
        out.insert((0..n).collect::<BTreeSet<_>>());
        for a in 0..n {
            for b in a..n {
                out.insert(self.closure(&[a, b]));
            }
        }
        out.into_iter().collect()
    }
}

/// Vertices of the graph under construction: right cosets `Hg`, with `Hg·k = H(gk)`.
struct Builder<'t> {
    table: &'t Table,
    gens: Vec<usize>,
    /// Coset id of every element, per orbit.
    coset_of: Vec<Vec<usize>>,
    /// First vertex id of each orbit and the coset representatives.
    orbit_start: Vec<usize>,
    reps: Vec<Vec<usize>>,
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    /// Forward dart image of every edge under every generator.
    dart_images: Vec<Vec<usize>>,
}

impl<'t> Builder<'t> {
    fn add_orbit(&mut self, h: &BTreeSet<usize>) {
        let t = self.table;
        let n = t.elements.len();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] == usize::MAX {
                for &x in h {
                    coset_of[t.then[x][g]] = reps.len();
                }
                reps.push(g);
            }
        }
        self.orbit_start.push(self.vertex_count);
        self.vertex_count += reps.len();
        self.coset_of.push(coset_of);
        self.reps.push(reps);
    }

    fn locate(&self, v: usize) -> (usize, usize) {
        let o = self.orbit_start.iter().rposition(|&s| s <= v).unwrap();
        (o, v - self.orbit_start[o])
    }

    fn act(&self, v: usize, k: usize) -> usize {
        let (o, c) = self.locate(v);
        let g = self.reps[o][c];
        self.orbit_start[o] + self.coset_of[o][self.table.then[g][k]]
    }

    fn orbit_size(&self, u: usize, v: usize) -> usize {
        let mut seen = BTreeSet::new();
        for k in 0..self.table.elements.len() {
            let (a, b) = (self.act(u, k), self.act(v, k));
            if !seen.contains(&(b, a)) {
                seen.insert((a, b));
            }
        }
        seen.len()
    }

    /// Adds the orbit of the edge `u -> v`.
    fn add_edge_orbit(&mut self, u: usize, v: usize) {
        let first = self.edges.len();
        let mut key: HashMap<(usize, usize), usize> = HashMap::new();
        key.insert((u, v), first);
        self.edges.push((u, v));
        let mut i = first;
        while i < self.edges.len() {
            let (a, b) = self.edges[i];
            for s in 0..self.gens.len() {
                let (a2, b2) = (self.act(a, self.gens[s]), self.act(b, self.gens[s]));
                if !key.contains_key(&(a2, b2)) && !(a2 != b2 && key.contains_key(&(b2, a2))) {
                    key.insert((a2, b2), self.edges.len());
                    self.edges.push((a2, b2));
                }
            }
            i += 1;
        }
        for s in 0..self.gens.len() {
            let images: Vec<usize> = (first..self.edges.len())
                .map(|e| {
                    let (a, b) = self.edges[e];
                    let (a2, b2) = (self.act(a, self.gens[s]), self.act(b, self.gens[s]));
                    match key.get(&(a2, b2)) {
                        Some(&f) => 2 * f,
                        None => 2 * key[&(b2, a2)] + 1,
                    }
                })
                .collect();
            self.dart_images[s].extend(images);
        }
    }

    fn graph(&self) -> SerreGraph {
        SerreGraph::new(self.vertex_count, self.edges.clone(), 0).unwrap()
    }
}

/// One random connected action.
pub fn random_action(rng: &mut ChaCha8Rng, shape: CorpusShape) -> Result<GroupAction> {
    let groups = small_groups();
    let (_, group) = groups.choose(rng).unwrap().clone();
    let table = Table::new(&group)?;
    let order = table.elements.len();
    let gens: Vec<usize> = group.generators().iter().map(|g| table.index[g]).collect();
    let subgroups = table.subgroups();
    let mut b = Builder {
        table: &table,
        gens: gens.clone(),
        coset_of: Vec::new(),
        orbit_start: Vec::new(),
        reps: Vec::new(),
        vertex_count: 0,
        edges: Vec::new(),
        dart_images: vec![Vec::new(); gens.len()],
    };
    let orbits = rng.gen_range(1..=shape.max_vertex_orbits);
    for _ in 0..orbits {
        let room = shape.max_vertices - b.vertex_count;
        let fits: Vec<&BTreeSet<usize>> = subgroups.iter().filter(|h| order / h.len() <= room).collect();
        match fits.choose(rng) {
            Some(h) => b.add_orbit(h),
            None => break,
        }
    }
    loop {
        let g = b.graph();
        let comp = g.components();
        if g.is_connected() {
            break;
        }
        let inside: Vec<usize> = (0..b.vertex_count).filter(|&v| comp[v] == comp[0]).collect();
        let outside: Vec<usize> = (0..b.vertex_count).filter(|&v| comp[v] != comp[0]).collect();
        let u = *inside.choose(rng).unwrap();
        let v = *outside.choose(rng).unwrap();
        b.add_edge_orbit(u, v);
    }
    let extra = rng.gen_range(0..=2);
    for _ in 0..extra {
        let u = rng.gen_range(0..b.vertex_count);
        let v = if rng.gen_bool(0.2) { u } else { rng.gen_range(0..b.vertex_count) };
        if b.edges.len() + b.orbit_size(u, v) <= shape.max_edges {
            b.add_edge_orbit(u, v);
        }
    }
    let space = b.graph();
    let vertex_maps: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (0..b.vertex_count).map(|v| b.act(v, s)).collect())
        .collect();
    let dart_maps: Vec<Vec<usize>> = b
        .dart_images
        .iter()
        .map(|forward| forward.iter().flat_map(|&d| [d, d ^ 1]).collect())
        .collect();
    GroupAction::new(group, space, vertex_maps, dart_maps)
}

/// `count` actions from a fixed seed; instance `i` depends only on `(seed, i)`.
pub fn random_corpus(seed: u64, count: usize, shape: CorpusShape) -> Result<Vec<GroupAction>> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64));
            random_action(&mut rng, shape)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_group_orders() {
        let orders: Vec<u128> = small_groups().iter().map(|(_, g)| g.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 5, 6, 7, 8, 4, 6, 8, 8, 8, 8]);
        let q8 = &small_groups()[11].1;
        // a unique involution
        let involutions = q8.elements().unwrap().iter().filter(|p| !p.is_identity() && p.then(p).is_identity()).count();
        assert_eq!(involutions, 1);
        assert!(q8.elements().unwrap().iter().all(|p| p.then(p).then(p).then(p).is_identity()));
    }

    #[test]
    fn corpus_is_valid_and_reproducible() {
        let shape = CorpusShape::default();
        let a = random_corpus(7, 30, shape).unwrap();
        let b = random_corpus(7, 30, shape).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(x.space().is_connected());
            assert!(x.space().vertex_count() <= 12);
            assert_eq!(x.to_json(), y.to_json());
        }
    }
}
