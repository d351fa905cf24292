use std::collections::BTreeSet;

use orbifund::group::low_index::all_subgroups;
use orbifund::group::tietze::simplify;
use orbifund::orbispace::corpus::{bg_cyclic, football, gerbe, pathological, sl2z, teardrop};
use orbifund::orbispace::{
    enumerate_fpr_covers, from_ggraph, galois_sequence_check, moduli_pi1, orbispace_corpus, MarkedOrbispace,
    OrbiCover,
};
use orbifund::quotient::{quotient_graph, random_corpus, CorpusShape};
use orbifund::{coset_enumerate, Bounds, Budget, CosetTable, Perm, Verdict};

fn budget() -> Budget {
    Budget::new(Bounds::default().node_budget)
}

fn covers(o: &MarkedOrbispace, max_index: usize) -> Vec<OrbiCover> {
    all_subgroups(o.pi1(), max_index, &mut budget())
        .unwrap()
        .into_iter()
        .map(|t| OrbiCover::new(o.clone(), t).unwrap())
        .collect()
}

/// Hidden elements whose image word, traced letter by letter, returns to `coset`.
fn fixing_elements(o: &MarkedOrbispace, marking: usize, t: &CosetTable, coset: usize) -> BTreeSet<Perm> {
    let m = &o.markings()[marking];
    m.hidden
        .element_words()
        .unwrap()
        .into_iter()
        .filter(|(_, w)| {
            let image = w.substitute(&m.omega);
            image.letters().iter().fold(coset, |c, &l| t.act(c, l)) == coset
        })
        .map(|(p, _)| p)
        .collect()
}

#[test]
fn fpr_covers_match_moduli_covers() {
    for (name, o) in orbispace_corpus().unwrap() {
        let r = enumerate_fpr_covers(&o, 4, &mut budget()).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass, "{name}: {:?}", r.checks);
    }
}

#[test]
fn hidden_groups_are_pullbacks_of_coset_stabilizers() {
    for (name, o) in orbispace_corpus().unwrap() {
        for c in covers(&o, 4) {
            for i in 0..o.markings().len() {
                for coset in 0..c.index() {
                    let got: BTreeSet<Perm> = c.hidden_group_at(i, coset).unwrap().elements().unwrap().iter().cloned().collect();
                    assert_eq!(got, fixing_elements(&o, i, c.table(), coset), "{name}");
                }
                let covered: usize = c.points(i).iter().map(|p| p.cosets.len()).sum();
                assert_eq!(covered, c.index());
            }
        }
    }
}

#[test]
fn fpr_over_a_subset_is_containing_the_normal_closure() {
    for (name, o) in orbispace_corpus().unwrap() {
        let k = o.markings().len();
        for c in covers(&o, 4) {
            let transversal = c.table().transversal();
            for subset in 0u32..(1 << k) {
                let chosen: Vec<usize> = (0..k).filter(|i| subset >> i & 1 == 1).collect();
                let fpr = chosen
                    .iter()
                    .all(|&i| c.points(i).iter().all(|p| p.hidden.order() == o.markings()[i].order()));
                let contains = chosen.iter().all(|&i| {
                    o.markings()[i]
                        .omega
                        .iter()
                        .all(|w| transversal.iter().all(|t| c.table().contains(&w.conjugate_by(&t.inverse()))))
                });
                assert_eq!(fpr, contains, "{name} subset {subset:b}");
            }
        }
    }
}

#[test]
fn galois_sequences_are_exact() {
    for (name, o) in orbispace_corpus().unwrap() {
        for c in covers(&o, 4).into_iter().filter(|c| c.table().is_normal()) {
            for i in 0..o.markings().len() {
                for p in 0..c.points(i).len() {
                    let r = galois_sequence_check(&c, i, p).unwrap();
                    assert_eq!(r.verdict(), Verdict::Pass, "{name}: {:?}", r.checks);
                }
            }
        }
    }
}

#[test]
fn hidden_kernel_is_the_intersection_over_covers() {
    // finite fundamental groups, so every cover up to the order is available
    for o in [bg_cyclic(2), bg_cyclic(4), football(3), gerbe(2), teardrop(3), pathological()] {
        let regular = coset_enumerate(o.pi1(), &[], 100).unwrap();
        let all = covers(&o, regular.index());
        for (i, m) in o.markings().iter().enumerate() {
            let kernel: BTreeSet<Perm> = m
                .element_images()
                .unwrap()
                .into_iter()
                .filter(|(_, w)| regular.word_perm(w).is_identity())
                .map(|(p, _)| p)
                .collect();
            let mut meet: BTreeSet<Perm> = m.hidden.elements().unwrap().iter().cloned().collect();
            for c in &all {
                for coset in 0..c.index() {
                    let here: BTreeSet<Perm> = c.hidden_group_at(i, coset).unwrap().elements().unwrap().iter().cloned().collect();
                    meet = meet.intersection(&here).cloned().collect();
                }
            }
            assert_eq!(meet, kernel);
        }
    }
}

#[test]
fn moduli_examples() {
    let trivial = coset_enumerate(&moduli_pi1(&sl2z()).unwrap(), &[], 1000).unwrap();
    assert_eq!(trivial.index(), 1);
    let z4 = coset_enumerate(&moduli_pi1(&pathological()).unwrap(), &[], 1000).unwrap();
    assert_eq!(z4.index(), 4);
    let unmarked = MarkedOrbispace::unmarked(sl2z().pi1().clone());
    assert_eq!(&moduli_pi1(&unmarked).unwrap(), unmarked.pi1());
}

#[test]
fn graph_of_groups_moduli_is_the_quotient_graph() {
    for a in random_corpus(11, 60, CorpusShape::default()).unwrap() {
        let o = from_ggraph(&a).unwrap();
        let rank = quotient_graph(&a).unwrap().graph.pi1().unwrap().rank();
        let moduli = moduli_pi1(&o).unwrap();
        assert_eq!(simplify(moduli.generator_count(), moduli.relators()).free_rank(), Some(rank));
        let orders: u128 = o.markings().iter().map(|m| m.order()).sum();
        assert!(orders >= o.markings().len() as u128);
        if a.is_free() {
            assert!(o.markings().iter().all(|m| m.order() == 1));
            assert_eq!(simplify(o.pi1().generator_count(), o.pi1().relators()).free_rank(), Some(rank));
        }
    }
}

#[test]
fn trivial_action_on_a_point_recovers_the_group() {
    // the group acting trivially on a single vertex comes back as itself
    for (_, g) in orbifund::quotient::small_groups() {
        let space = orbifund::graph::SerreGraph::new(1, vec![], 0).unwrap();
        let maps = vec![vec![0]; g.generators().len()];
        let a = orbifund::quotient::GroupAction::from_vertex_maps(g.clone(), space, maps).unwrap();
        let o = from_ggraph(&a).unwrap();
        assert_eq!(o.markings().len(), 1);
        let t = coset_enumerate(o.pi1(), &[], 1000).unwrap();
        assert_eq!(t.index() as u128, g.order());
        // omega is injective because the regular action is faithful
        let images: BTreeSet<Perm> = o.markings()[0]
            .element_images()
            .unwrap()
            .into_iter()
            .map(|(_, w)| t.word_perm(&w))
            .collect();
        assert_eq!(images.len() as u128, g.order());
    }
}
