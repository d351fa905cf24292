use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbifund::graph::{cover_from_subgroup, monodromy};
use orbifund::group::folding::Folding;
use orbifund::quotient::{
    doomed_kernel, mx_from_action, quotient_graph, quotient_pi1_sequence, random_action, CorpusShape, GroupAction,
    SequenceData,
};
use orbifund::{coset_enumerate, Presentation, Verdict};

fn action(seed: u64) -> GroupAction {
    random_action(&mut ChaCha8Rng::seed_from_u64(seed), CorpusShape::default()).unwrap()
}

/// Order of the subgroup generated by elements with a fixed vertex or a stabilized edge.
fn fixed_point_order(a: &GroupAction) -> usize {
    let x = a.space();
    let witnesses: Vec<usize> = (1..a.order())
        .filter(|&g| {
            (0..x.vertex_count()).any(|v| a.act_vertex(g, v) == v)
                || (0..x.edge_count()).any(|e| a.act_dart(g, 2 * e) / 2 == e)
        })
        .collect();
    let mut span = BTreeSet::from([0]);
    let mut stack = vec![0];
    while let Some(h) = stack.pop() {
        for &w in &witnesses {
            let k = a.compose(h, w);
            if span.insert(k) {
                stack.push(k);
            }
        }
    }
    span.len()
}

/// Orbit count of a set under the generators, by flooding.
fn orbit_count(n: usize, a: &GroupAction, image: impl Fn(usize, usize) -> usize) -> usize {
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(y) = stack.pop() {
            for &g in a.generators() {
                let z = image(g, y);
                if !seen[z] {
                    seen[z] = true;
                    stack.push(z);
                }
            }
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quotient_has_one_cell_per_orbit(seed in any::<u64>()) {
        let a = action(seed);
        let q = quotient_graph(&a).unwrap();
        let sub = q.subdivision.action();
        let x = sub.space();
        prop_assert_eq!(q.graph.vertex_count(), orbit_count(x.vertex_count(), sub, |g, v| sub.act_vertex(g, v)));
        prop_assert_eq!(q.graph.edge_count(), orbit_count(x.edge_count(), sub, |g, e| sub.act_dart(g, 2 * e) / 2));
        prop_assert!(q.graph.is_connected());
    }

    #[test]
    fn image_index_is_the_fixed_point_cokernel(seed in any::<u64>()) {
        let a = action(seed);
        let r = quotient_pi1_sequence(&a).unwrap();
        prop_assert_eq!(r.verdict(), Verdict::Pass, "{:?}", r.checks);
        let expected = a.order() / fixed_point_order(&a);
        // coset enumeration over the free group, independent of folding
        let free = Presentation::free(r.quotient_rank);
        let t = coset_enumerate(&free, &r.image_generators, 10_000).unwrap();
        prop_assert_eq!(t.index(), expected);
        prop_assert_eq!(r.image_index, Some(expected));
        prop_assert_eq!(mx_from_action(&a).unwrap().size, expected);
    }

    #[test]
    fn doomed_loops_lie_in_the_kernel(seed in any::<u64>()) {
        let a = action(seed);
        let r = doomed_kernel(&a, 12).unwrap();
        prop_assert_eq!(r.doomed_in_kernel(), Verdict::Pass);
        prop_assert!(!r.kernel_in_doomed().is_fail());
        let data = SequenceData::new(&a).unwrap();
        for w in &r.doomed_generators {
            prop_assert!(w.substitute(&data.images).is_identity());
        }
    }

    #[test]
    fn free_actions_give_regular_covers(seed in any::<u64>()) {
        let a = action(seed);
        if !a.is_free() {
            return Ok(());
        }
        let data = SequenceData::new(&a).unwrap();
        let fold = Folding::new(data.pi1_quotient.rank(), &data.images);
        let table = fold.coset_table().unwrap();
        prop_assert_eq!(table.index(), a.order());
        prop_assert!(table.is_normal());
        let c = cover_from_subgroup(&data.quotient.graph, &table).unwrap();
        let m = monodromy(&c).unwrap();
        prop_assert!(m.is_galois);
        prop_assert_eq!(c.realized().vertex_count(), a.space().vertex_count());
        prop_assert_eq!(c.realized().edge_count(), a.space().edge_count());
    }
}
