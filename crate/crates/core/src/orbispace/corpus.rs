//! Named marked orbispaces used as fixtures by tests and the command line.

use super::ggraph::from_ggraph;
use super::model::{Marking, MarkedOrbispace};
use crate::graph::serre::SerreGraph;
use crate::group::perm::{FinitePermGroup, Perm};
use crate::group::presentation::Presentation;
use crate::quotient::GroupAction;
use crate::Result;

/// `pi1 = Z/n` with a single marking mapping `Z/n` isomorphically.
pub fn bg_cyclic(n: usize) -> MarkedOrbispace {
    let pi1 = Presentation::parse(&["a"], &[&"a".repeat(n)]).unwrap();
    let m = Marking::new("g", FinitePermGroup::cyclic(n), vec![pi1.parse_word("a").unwrap()]).unwrap();
    MarkedOrbispace::new(pi1, vec![m]).unwrap()
}

/// BG of the symmetric group on three letters.
pub fn bg_s3() -> MarkedOrbispace {
    let pi1 = Presentation::parse(&["a", "b"], &["aa", "bbb", "abab"]).unwrap();
    // transposition (0 1) and three-cycle (0 1 2)
    let hidden = FinitePermGroup::new(
        3,
        vec![Perm::from_images(vec![1, 0, 2]).unwrap(), Perm::from_images(vec![1, 2, 0]).unwrap()],
    )
    .unwrap();
    let omega = vec![pi1.parse_word("a").unwrap(), pi1.parse_word("b").unwrap()];
    MarkedOrbispace::new(pi1, vec![Marking::new("g", hidden, omega).unwrap()]).unwrap()
}

/// Sphere with two cone points of order `n`: `pi1 = Z/n`, markings `a` and `a^-1`.
pub fn football(n: usize) -> MarkedOrbispace {
    let pi1 = Presentation::parse(&["a"], &[&"a".repeat(n)]).unwrap();
    let a = pi1.parse_word("a").unwrap();
    let north = Marking::new("north", FinitePermGroup::cyclic(n), vec![a.clone()]).unwrap();
    let south = Marking::new("south", FinitePermGroup::cyclic(n), vec![a.inverse()]).unwrap();
    MarkedOrbispace::new(pi1, vec![north, south]).unwrap()
}

/// Sphere with one cone point of order `n`: trivial `pi1`, marking with zero map.
pub fn teardrop(n: usize) -> MarkedOrbispace {
    MarkedOrbispace::new(Presentation::free(0), vec![Marking::zero("cone", FinitePermGroup::cyclic(n))]).unwrap()
}

/// A `Z/n`-gerbe over a simply connected space.
pub fn gerbe(n: usize) -> MarkedOrbispace {
    MarkedOrbispace::new(Presentation::free(0), vec![Marking::zero("band", FinitePermGroup::cyclic(n))]).unwrap()
}

/// `<s, u | s^4, s^2 u^-3>` with its order-4 and order-6 subgroups marked.
pub fn sl2z() -> MarkedOrbispace {
    let pi1 = Presentation::parse(&["s", "u"], &["ssss", "ssUUU"]).unwrap();
    let s = Marking::new("i", FinitePermGroup::cyclic(4), vec![pi1.parse_word("s").unwrap()]).unwrap();
    let u = Marking::new("rho", FinitePermGroup::cyclic(6), vec![pi1.parse_word("u").unwrap()]).unwrap();
    MarkedOrbispace::new(pi1, vec![s, u]).unwrap()
}

/// `Z/4` carrying a `Z/3` with the zero map.
pub fn pathological() -> MarkedOrbispace {
    let pi1 = Presentation::parse(&["a"], &["aaaa"]).unwrap();
    MarkedOrbispace::new(pi1, vec![Marking::zero("z", FinitePermGroup::cyclic(3))]).unwrap()
}

fn cycle_action(n: usize, gens: &[&[usize]]) -> Result<GroupAction> {
    let perms = gens.iter().map(|g| Perm::from_images(g.to_vec())).collect::<Result<Vec<_>>>()?;
    let group = FinitePermGroup::new(n, perms)?;
    GroupAction::from_vertex_maps(group, SerreGraph::cycle(n), gens.iter().map(|g| g.to_vec()).collect())
}

/// Actions whose graphs of groups complete the fixture corpus.
pub fn ggraph_actions() -> Result<Vec<(&'static str, GroupAction)>> {
    let s3 = FinitePermGroup::symmetric(3);
    let s3_maps = s3.generators().iter().map(|g| g.to_vec()).collect();
    let rose = GroupAction::new(FinitePermGroup::cyclic(2), SerreGraph::rose(2), vec![vec![0]], vec![vec![2, 3, 0, 1]])?;
    Ok(vec![
        ("reflected-square", cycle_action(4, &[&[0, 3, 2, 1]])?),
        ("s3-triangle", GroupAction::from_vertex_maps(s3, SerreGraph::cycle(3), s3_maps)?),
        ("swapped-rose", rose),
    ])
}

/// The ten fixture orbispaces.
pub fn orbispace_corpus() -> Result<Vec<(String, MarkedOrbispace)>> {
    let mut out = vec![
        ("bg-z2".to_string(), bg_cyclic(2)),
        ("bg-s3".to_string(), bg_s3()),
        ("football-3".to_string(), football(3)),
        ("gerbe-2".to_string(), gerbe(2)),
        ("teardrop-3".to_string(), teardrop(3)),
        ("sl2z".to_string(), sl2z()),
        ("pathological".to_string(), pathological()),
    ];
    for (name, a) in ggraph_actions()? {
        out.push((format!("ggraph-{name}"), from_ggraph(&a)?));
    }
    Ok(out)
}
