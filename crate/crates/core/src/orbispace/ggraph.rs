//! The quotient graph of groups of an action, as a marked orbispace.
//!
//! Vertex groups are the stabilizers of lifted quotient vertices, one stable letter
//! is added per quotient edge outside the spanning tree, and each quotient edge
//! identifies its edge group with its conjugate in the far vertex group.

use std::collections::{HashMap, VecDeque};

use crate::group::perm::FinitePermGroup;
use crate::group::presentation::{default_names, Presentation};
use crate::group::word::Word;
use crate::quotient::{quotient_graph, GroupAction};
use crate::Result;

use super::model::{Marking, MarkedOrbispace};

/// Greedy generators of the subgroup with the given members.
fn span_generators(a: &GroupAction, members: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![false; a.order()];
    span[0] = true;
    for &m in members {
        if span[m] {
            continue;
        }
        gens.push(m);
        let mut queue: VecDeque<usize> = (0..a.order()).filter(|&x| span[x]).collect();
        while let Some(x) = queue.pop_front() {
            for &s in &gens {
                let y = a.compose(x, s);
                if !span[y] {
                    span[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    gens
}

/// Words in `gens` (letters offset by `offset`) for every element of the subgroup
/// they generate, multiplied as `compose`, with the Cayley relators.
fn local_cayley(a: &GroupAction, gens: &[usize], offset: usize) -> (HashMap<usize, Word>, Vec<Word>) {
    let mut words = HashMap::from([(0, Word::identity())]);
    let mut order = vec![0];
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for (k, &s) in gens.iter().enumerate() {
            let y = a.compose(x, s);
            if !words.contains_key(&y) {
                let w = words[&x].mul(&Word::generator(offset + k));
                words.insert(y, w);
                order.push(y);
            }
        }
        i += 1;
    }
    let mut relators = Vec::new();
    for &x in &order {
        for (k, &s) in gens.iter().enumerate() {
            let y = a.compose(x, s);
            let r = words[&x].mul(&Word::generator(offset + k)).mul(&words[&y].inverse());
            if !r.cyclically_reduced().is_identity() {
                relators.push(r);
            }
        }
    }
    (words, relators)
}

/// Marked orbispace of the action: its fundamental group is the group of the quotient
/// graph of groups and each quotient vertex carries its stabilizer.
pub fn from_ggraph(a: &GroupAction) -> Result<MarkedOrbispace> {
    let q = quotient_graph(a)?;
    let sub = q.subdivision.action();
    let x = sub.space();
    let qg = &q.graph;
    let proj = &q.projection;
    let pi1q = qg.pi1()?;

    // lift the spanning tree
    let mut lift = vec![usize::MAX; qg.vertex_count()];
    lift[qg.base()] = x.base();
    let mut tree_lift: HashMap<usize, usize> = HashMap::new();
    for &d in pi1q.tree_darts() {
        let u = qg.origin(d);
        let dl = x
            .star(lift[u])
            .into_iter()
            .find(|&e| proj.dart(e) == d)
            .expect("stars surject onto quotient stars");
        lift[qg.terminus(d)] = x.terminus(dl);
        // stored in the orientation of the quotient edge
        let (edge_dart, lifted) = if d % 2 == 0 { (d, dl) } else { (d ^ 1, dl ^ 1) };
        tree_lift.insert(edge_dart / 2, lifted);
        debug_assert_eq!(proj.dart(lifted), edge_dart);
    }

    let stable = pi1q.rank();
    let vertex_gens: Vec<Vec<usize>> = lift
        .iter()
        .map(|&v| span_generators(sub, &sub.stabilizer(v)))
        .collect();
    let total = stable + vertex_gens.iter().map(Vec::len).sum::<usize>();
    let names = default_names(total);

    let mut relators = Vec::new();
    let mut offsets = Vec::new();
    let mut local_words = Vec::new();
    let mut offset = stable;
    for gens in &vertex_gens {
        let (words, rels) = local_cayley(sub, gens, offset);
        offsets.push(offset);
        relators.extend(rels);
        local_words.push(words);
        offset += gens.len();
    }

    for e in 0..qg.edge_count() {
        let (u, w) = qg.edges()[e];
        let dl = match tree_lift.get(&e) {
            Some(&d) => d,
            None => x
                .star(lift[u])
                .into_iter()
                .find(|&d| proj.dart(d) == 2 * e)
                .expect("stars surject onto quotient stars"),
        };
        let t = x.terminus(dl);
        let g = (0..sub.order())
            .find(|&g| sub.act_vertex(g, lift[w]) == t)
            .expect("the terminus lies over the far vertex");
        let letter = pi1q
            .dart_letter(2 * e)
            .map_or_else(Word::identity, |l| Word::from_letters([l]));
        let ginv = sub.inverse(g);
        let edge_group: Vec<usize> = (0..sub.order()).filter(|&s| sub.act_dart(s, dl) == dl).collect();
        for s in span_generators(sub, &edge_group) {
            let far = sub.compose(ginv, sub.compose(s, g));
            let r = local_words[u][&s]
                .mul(&letter)
                .mul(&local_words[w][&far].inverse())
                .mul(&letter.inverse());
            if !r.cyclically_reduced().is_identity() {
                relators.push(r);
            }
        }
    }
    let pi1 = Presentation::new(names, relators)?;

    // hidden permutations are inverted so that composition order matches words
    let markings = lift
        .iter()
        .zip(&vertex_gens)
        .zip(&offsets)
        .map(|((&v, gens), &off)| {
            let perms = gens.iter().map(|&s| sub.element(s).inverse()).collect();
            let hidden = FinitePermGroup::new(a.group().degree(), perms)?;
            let omega = (0..gens.len()).map(|k| Word::generator(off + k)).collect();
            Marking::new(x.vertex_names()[v].clone(), hidden, omega)
        })
        .collect::<Result<Vec<_>>>()?;
    MarkedOrbispace::new(pi1, markings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::serre::SerreGraph;
    use crate::group::fingerprint::abelian_invariants;
    use crate::group::perm::Perm;
    use crate::orbispace::model::moduli_pi1;

    fn on_cycle(n: usize, gens: &[&[usize]]) -> GroupAction {
        let perms: Vec<Perm> = gens.iter().map(|g| Perm::from_images(g.to_vec()).unwrap()).collect();
        let group = FinitePermGroup::new(n, perms).unwrap();
        let maps = gens.iter().map(|g| g.to_vec()).collect();
        GroupAction::from_vertex_maps(group, SerreGraph::cycle(n), maps).unwrap()
    }

    #[test]
    fn trivial_action_on_a_point_is_bg() {
        let s3 = FinitePermGroup::symmetric(3);
        let g = SerreGraph::new(1, vec![], 0).unwrap();
        let maps = vec![vec![0]; s3.generators().len()];
        let a = GroupAction::from_vertex_maps(s3, g, maps).unwrap();
        let o = from_ggraph(&a).unwrap();
        assert_eq!(o.markings().len(), 1);
        assert_eq!(o.markings()[0].order(), 6);
        let t = crate::coset_enumerate(o.pi1(), &[], 1000).unwrap();
        assert_eq!(t.index(), 6);
        assert_eq!(abelian_invariants(o.pi1()), (0, vec![2]));
    }

    #[test]
    fn reflected_square_is_a_free_product() {
        // Z/2 * Z/2: two order-two vertex groups joined through a trivial one
        let o = from_ggraph(&on_cycle(4, &[&[0, 3, 2, 1]])).unwrap();
        let orders: Vec<u128> = o.markings().iter().map(|m| m.order()).collect();
        assert_eq!(orders, vec![2, 1, 2]);
        assert_eq!(o.pi1().generator_count(), 2);
        assert_eq!(abelian_invariants(o.pi1()), (0, vec![2, 2]));
        assert_eq!(abelian_invariants(&moduli_pi1(&o).unwrap()), (0, vec![]));
    }

    #[test]
    fn free_rotation_gives_the_quotient_circle() {
        let o = from_ggraph(&on_cycle(4, &[&[1, 2, 3, 0]])).unwrap();
        assert!(o.markings().iter().all(|m| m.order() == 1));
        assert_eq!(abelian_invariants(o.pi1()), (1, vec![]));
    }
}
