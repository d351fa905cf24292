//! The map `pi1(X) -> pi1(X/G)`, its image index and its cokernel `G/I`.

use std::collections::HashMap;

use serde::Serialize;

use super::action::{fixed_point_subgroup, quotient_graph, FixedPointSubgroup, GroupAction, QuotientGraph, Witness};
use crate::graph::cover::{cover_from_subgroup, monodromy};
use crate::graph::serre::{GraphJson, Pi1};
use crate::group::folding::Folding;
use crate::group::word::Word;
use crate::groupoid::{component_quotient_mx, FiniteGroupoid, PointedSet};
use crate::{Check, Error, Result, Verdict};

/// Shared data for the sequence and kernel computations.
#[derive(Debug, Clone)]
pub struct SequenceData {
    pub quotient: QuotientGraph,
    pub fixed: FixedPointSubgroup,
    pub pi1_space: Pi1,
    pub pi1_subdivided: Pi1,
    pub pi1_quotient: Pi1,
    /// Image in `pi1(X/G)` of each generator of `pi1(X)`.
    pub images: Vec<Word>,
    pub folding: Folding,
}

impl SequenceData {
    pub fn new(a: &GroupAction) -> Result<Self> {
        if !a.space().is_connected() {
            return Err(Error::Disconnected);
        }
        let quotient = quotient_graph(a)?;
        let fixed = fixed_point_subgroup(a);
        let pi1_space = a.space().pi1()?;
        let pi1_subdivided = quotient.subdivision.action().space().pi1()?;
        let pi1_quotient = quotient.graph.pi1()?;
        let images = (0..pi1_space.rank())
            .map(|k| {
                let path = quotient.subdivision.push_path(&pi1_space.generator_loop(k));
                pi1_quotient.loop_word(&quotient.projection.map_path(&path))
            })
            .collect::<Result<Vec<_>>>()?;
        let folding = Folding::new(pi1_quotient.rank(), &images);
        Ok(SequenceData {
            quotient,
            fixed,
            pi1_space,
            pi1_subdivided,
            pi1_quotient,
            images,
            folding,
        })
    }

    /// Word in `pi1(X)` of a closed path at the base of the subdivided graph.
    pub fn subdivided_loop_word(&self, path: &[usize]) -> Result<Word> {
        let pulled = self.quotient.subdivision.pull_path(path)?;
        self.pi1_space.loop_word(&pulled)
    }
}

/// Left cosets of `I` in `G`: class index of every element.
pub fn coset_classes(a: &GroupAction, i: &FixedPointSubgroup) -> (Vec<usize>, usize) {
    let mut class = vec![usize::MAX; a.order()];
    let mut count = 0;
    for g in 0..a.order() {
        if class[g] == usize::MAX {
            for &h in &i.members {
                class[a.compose(g, h)] = count;
            }
            count += 1;
        }
    }
    (class, count)
}

/// Label of one coset of the image subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetLabel {
    pub coset: usize,
    /// Transversal word in `pi1(X/G)`.
    pub word: Word,
    /// An element carrying the base to the endpoint of the lifted word.
    pub element: usize,
    /// Class of `element` in `G/I`.
    pub class: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientReport {
    pub group_order: usize,
    pub fixed_point_order: usize,
    pub witnesses: Vec<Witness>,
    pub subdivided_edges: Vec<usize>,
    pub quotient: GraphJson,
    pub vertex_orbits: Vec<Vec<usize>>,
    pub edge_orbits: Vec<Vec<usize>>,
    pub space_rank: usize,
    pub quotient_rank: usize,
    pub image_generators: Vec<Word>,
    pub image_rank: usize,
    pub image_index: Option<usize>,
    /// `|G/I|`.
    pub cokernel_size: usize,
    pub cokernel: Vec<CosetLabel>,
    pub kernel_generators: Vec<Word>,
    pub checks: Vec<Check>,
}

impl QuotientReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.checks.iter().map(|c| c.verdict))
    }

    pub fn check(&self, name: &str) -> Option<Verdict> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.verdict)
    }
}

/// Lifts a word of `pi1(X/G)` to the subdivided graph from the base and returns the
/// endpoint.
fn lift_endpoint(data: &SequenceData, index: &HashMap<(usize, usize), usize>, w: &Word) -> usize {
    let x = data.quotient.subdivision.action().space();
    let mut at = x.base();
    for l in w.letters() {
        let mut path = data.pi1_quotient.generator_loop(l.generator);
        if l.inverse {
            path = Pi1::reverse_path(&path);
        }
        for d in path {
            at = x.terminus(index[&(at, d)]);
        }
    }
    at
}

pub fn quotient_pi1_sequence(a: &GroupAction) -> Result<QuotientReport> {
    let data = SequenceData::new(a)?;
    let sub = data.quotient.subdivision.action();
    let x = sub.space();
    let (class, cokernel_size) = coset_classes(a, &data.fixed);
    let mut checks = Vec::new();
    let image_index = data.folding.index();
    checks.push(Check::new(
        "image_index_equals_cokernel",
        Verdict::from_bool(image_index == Some(cokernel_size)),
        format!("index {image_index:?}, |G/I| = {cokernel_size}"),
    ));

    let mut cokernel = Vec::new();
    if let Some(table) = data.folding.coset_table() {
        let mut index = HashMap::new();
        for d in (0..x.dart_count()).rev() {
            index.insert((x.origin(d), data.quotient.projection.dart(d)), d);
        }
        for (coset, word) in table.transversal().into_iter().enumerate() {
            let end = lift_endpoint(&data, &index, &word);
            let element = (0..sub.order()).find(|&g| sub.act_vertex(g, x.base()) == end).unwrap();
            cokernel.push(CosetLabel {
                coset,
                word,
                element,
                class: class[element],
            });
        }
        let mut hit = vec![false; cokernel_size];
        let injective = cokernel.iter().all(|l| !std::mem::replace(&mut hit[l.class], true));
        checks.push(Check::new(
            "cokernel_labeling_bijective",
            Verdict::from_bool(injective && hit.iter().all(|&h| h) && cokernel[0].class == class[0]),
            "",
        ));
    } else {
        checks.push(Check::new("cokernel_labeling_bijective", Verdict::Fail, "image has infinite index"));
    }

    if data.fixed.order() == 1 {
        let injective = data.folding.kernel_generators().is_empty();
        checks.push(Check::new("free_action_injective", Verdict::from_bool(injective), ""));
        let cover_ok = match data.folding.coset_table() {
            Some(t) => {
                let c = cover_from_subgroup(&data.quotient.graph, &t)?;
                let m = monodromy(&c)?;
                m.is_galois
                    && m.deck_order == a.order() as u128
                    && data.quotient.projection.is_star_bijective()
                    && c.realized().vertex_count() == x.vertex_count()
            }
            None => false,
        };
        checks.push(Check::new(
            "free_action_galois_cover",
            Verdict::from_bool(cover_ok),
            "deck group of the quotient cover has order |G|",
        ));
    }
    if data.pi1_space.rank() == 0 {
        checks.push(Check::new(
            "simply_connected_isomorphism",
            Verdict::from_bool(data.pi1_quotient.rank() == 0 && cokernel_size == 1),
            "pi1(X/G) and G/I are both trivial",
        ));
    }

    Ok(QuotientReport {
        group_order: a.order(),
        fixed_point_order: data.fixed.order(),
        witnesses: data.fixed.witnesses.clone(),
        subdivided_edges: a.inverted_edges(),
        quotient: data.quotient.graph.to_json(),
        vertex_orbits: data.quotient.vertex_orbits.clone(),
        edge_orbits: data.quotient.edge_orbits.clone(),
        space_rank: data.pi1_space.rank(),
        quotient_rank: data.pi1_quotient.rank(),
        image_generators: data.images.clone(),
        image_rank: data.folding.rank(),
        image_index,
        cokernel_size,
        cokernel,
        kernel_generators: data.folding.kernel_generators().to_vec(),
        checks,
    })
}

/// Action groupoid of the subdivided action, with arrow `(g, v)` at id `g * |V| + v`.
pub fn action_groupoid(a: &GroupAction) -> Result<FiniteGroupoid> {
    let x = a.space();
    let (n, k) = (x.vertex_count(), a.order());
    let id = |g: usize, v: usize| g * n + v;
    let mut src = Vec::with_capacity(n * k);
    let mut tgt = Vec::with_capacity(n * k);
    let mut inv = Vec::with_capacity(n * k);
    for g in 0..k {
        for v in 0..n {
            src.push(v);
            tgt.push(a.act_vertex(g, v));
            inv.push(id(a.inverse(g), a.act_vertex(g, v)));
        }
    }
    let compose = (0..k).flat_map(|g| {
        (0..n).flat_map(move |v| (0..k).map(move |h| (id(g, v), id(h, a.act_vertex(g, v)), id(a.compose(h, g), v))))
    });
    FiniteGroupoid::new(x.vertex_names().to_vec(), src, tgt, inv, compose)
}

/// The pointed set `M_x` of the action: arrows out of the base modulo stabilizers and
/// the connectivity of the space.
pub fn mx_from_action(a: &GroupAction) -> Result<PointedSet> {
    let sub = super::action::Subdivision::new(a)?;
    let sa = sub.action();
    let x = sa.space();
    let n = x.vertex_count();
    let groupoid = action_groupoid(sa)?;
    let family: Vec<Vec<usize>> = (0..n)
        .map(|v| sa.stabilizer(v).into_iter().map(|g| g * n + v).collect())
        .collect();
    let links: Vec<(usize, usize)> = (0..sa.order())
        .flat_map(|g| x.edges().iter().map(move |&(u, v)| (g * n + u, g * n + v)))
        .collect();
    component_quotient_mx(&groupoid, x.base(), &family, &links)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::serre::SerreGraph;
    use crate::group::perm::{FinitePermGroup, Perm};

    fn on_cycle(n: usize, gens: &[&[usize]]) -> GroupAction {
        let perms: Vec<Perm> = gens.iter().map(|g| Perm::from_images(g.to_vec()).unwrap()).collect();
        let group = FinitePermGroup::new(n, perms).unwrap();
        let maps = gens.iter().map(|g| g.to_vec()).collect();
        GroupAction::from_vertex_maps(group, SerreGraph::cycle(n), maps).unwrap()
    }

    #[test]
    fn free_rotation_of_the_square() {
        let a = on_cycle(4, &[&[2, 3, 0, 1]]);
        let r = quotient_pi1_sequence(&a).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass, "{:?}", r.checks);
        assert_eq!((r.quotient_rank, r.image_index, r.cokernel_size), (1, Some(2), 2));
        assert_eq!(r.image_generators, vec![Word::generator(0).pow(2)]);
        assert!(r.kernel_generators.is_empty());
        assert_eq!(r.check("free_action_galois_cover"), Some(Verdict::Pass));
        assert_eq!(mx_from_action(&a).unwrap().size, 2);
    }

    #[test]
    fn reflection_of_the_square() {
        let a = on_cycle(4, &[&[0, 3, 2, 1]]);
        let r = quotient_pi1_sequence(&a).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass, "{:?}", r.checks);
        assert_eq!((r.quotient_rank, r.image_index, r.cokernel_size), (0, Some(1), 1));
        assert_eq!(r.kernel_generators, vec![Word::generator(0)]);
        assert_eq!(mx_from_action(&a).unwrap().size, 1);
    }

    #[test]
    fn full_rotation_group() {
        let a = on_cycle(4, &[&[1, 2, 3, 0]]);
        let r = quotient_pi1_sequence(&a).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass);
        assert_eq!(r.cokernel_size, 4);
        assert_eq!(mx_from_action(&a).unwrap().size, 4);
    }

    #[test]
    fn symmetric_group_on_triangle() {
        let s3 = FinitePermGroup::symmetric(3);
        let maps = s3.generators().iter().map(|g| g.to_vec()).collect();
        let a = GroupAction::from_vertex_maps(s3, SerreGraph::cycle(3), maps).unwrap();
        let r = quotient_pi1_sequence(&a).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass);
        assert_eq!((r.fixed_point_order, r.cokernel_size), (6, 1));
        assert_eq!(mx_from_action(&a).unwrap().size, 1);
    }

    #[test]
    fn tree_quotients_are_trees() {
        // path on 3 vertices flipped about its centre
        let g = FinitePermGroup::cyclic(2);
        let a = GroupAction::from_vertex_maps(g, SerreGraph::path(3), vec![vec![2, 1, 0]]).unwrap();
        let r = quotient_pi1_sequence(&a).unwrap();
        assert_eq!(r.check("simply_connected_isomorphism"), Some(Verdict::Pass));
        // path on 2 vertices with its edge inverted
        let g = FinitePermGroup::cyclic(2);
        let a = GroupAction::from_vertex_maps(g, SerreGraph::path(2), vec![vec![1, 0]]).unwrap();
        let r = quotient_pi1_sequence(&a).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass);
        assert_eq!(r.subdivided_edges, vec![0]);
    }

    #[test]
    fn edge_swap_on_the_two_cycle() {
        // two vertices, two parallel edges; the generator swaps the vertices and
        // reverses each edge
        let g = SerreGraph::theta(2);
        let group = FinitePermGroup::cyclic(2);
        let a = GroupAction::new(group, g, vec![vec![1, 0]], vec![vec![1, 0, 3, 2]]).unwrap();
        let r = quotient_pi1_sequence(&a).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass, "{:?}", r.checks);
        assert_eq!((r.fixed_point_order, r.cokernel_size), (2, 1));
        assert_eq!(mx_from_action(&a).unwrap().size, 1);
    }
}
