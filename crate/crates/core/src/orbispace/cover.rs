//! Finite covers of a marked orbispace and the hidden groups they induce.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::model::{moduli_pi1, MarkedOrbispace};
use crate::group::coset::CosetTable;
use crate::group::low_index::subgroup_classes;
use crate::group::perm::{FinitePermGroup, Perm};
use crate::{Budget, Check, Error, Result, Verdict};

/// A point of the cover over a marking: an orbit of cosets under the hidden group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedPoint {
    /// Cosets in the orbit, ascending.
    pub cosets: Vec<usize>,
    /// Hidden group at the smallest coset of the orbit.
    pub hidden: FinitePermGroup,
}

/// The cover of `parent` given by a subgroup of finite index of its fundamental group.
#[derive(Debug, Clone)]
pub struct OrbiCover {
    parent: MarkedOrbispace,
    table: CosetTable,
    /// Coset permutation of every hidden generator, per marking.
    generator_actions: Vec<Vec<Perm>>,
    points: Vec<Vec<InducedPoint>>,
}

impl OrbiCover {
    pub fn new(parent: MarkedOrbispace, table: CosetTable) -> Result<Self> {
        table.check(parent.pi1())?;
        let generator_actions: Vec<Vec<Perm>> = parent
            .markings()
            .iter()
            .map(|m| m.omega.iter().map(|w| table.word_perm(w)).collect())
            .collect();
        let mut cover = OrbiCover {
            parent,
            table,
            generator_actions,
            points: Vec::new(),
        };
        for i in 0..cover.parent.markings().len() {
            cover.check_homomorphism(i)?;
        }
        cover.points = (0..cover.parent.markings().len())
            .map(|i| cover.induced_points(i))
            .collect::<Result<_>>()?;
        Ok(cover)
    }

    /// The identity cover.
    pub fn trivial(parent: MarkedOrbispace) -> Self {
        let table = CosetTable::trivial(parent.pi1().generator_count());
        Self::new(parent, table).expect("the index-one table is valid for every presentation")
    }

    pub fn parent(&self) -> &MarkedOrbispace {
        &self.parent
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn index(&self) -> usize {
        self.table.index()
    }

    pub fn points(&self, marking: usize) -> &[InducedPoint] {
        &self.points[marking]
    }

    /// The coset action must factor through the hidden group.
    fn check_homomorphism(&self, marking: usize) -> Result<()> {
        let m = &self.parent.markings()[marking];
        let acts = &self.generator_actions[marking];
        let elements = m.hidden.elements()?;
        let index: HashMap<&Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let coset_perms = self.element_actions(marking)?;
        for (i, p) in elements.iter().enumerate() {
            for (k, g) in m.hidden.generators().iter().enumerate() {
                let j = index[&p.then(g)];
                if coset_perms[i].then(&acts[k]) != coset_perms[j] {
                    return Err(Error::InvalidMarking(format!(
                        "omega of `{}` is not a homomorphism on this cover",
                        m.id
                    )));
                }
            }
        }
        Ok(())
    }

    /// Coset permutation of every hidden element, aligned with `hidden.elements()`.
    fn element_actions(&self, marking: usize) -> Result<Vec<Perm>> {
        let m = &self.parent.markings()[marking];
        let acts = &self.generator_actions[marking];
        let elements = m.hidden.elements()?;
        let index: HashMap<&Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut out: Vec<Option<Perm>> = vec![None; elements.len()];
        out[index[&m.hidden.identity()]] = Some(Perm::identity(self.index()));
        let mut queue = vec![m.hidden.identity()];
        while let Some(p) = queue.pop() {
            let cp = out[index[&p]].clone().unwrap();
            for (k, g) in m.hidden.generators().iter().enumerate() {
                let q = p.then(g);
                let slot = &mut out[index[&q]];
                if slot.is_none() {
                    *slot = Some(cp.then(&acts[k]));
                    queue.push(q);
                }
            }
        }
        Ok(out.into_iter().map(Option::unwrap).collect())
    }

    /// Hidden elements whose image fixes `coset`.
    pub fn hidden_group_at(&self, marking: usize, coset: usize) -> Result<FinitePermGroup> {
        let m = &self.parent.markings()[marking];
        let elements = m.hidden.elements()?;
        let acts = self.element_actions(marking)?;
        let fixing = elements
            .iter()
            .zip(&acts)
            .filter(|(_, a)| a.apply(coset) == coset)
            .map(|(p, _)| p.clone())
            .collect();
        m.hidden.subgroup(fixing)
    }

    fn induced_points(&self, marking: usize) -> Result<Vec<InducedPoint>> {
        let acts = &self.generator_actions[marking];
        let n = self.index();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < orbit.len() {
                for a in acts {
                    let c = a.apply(orbit[i]);
                    if !seen[c] {
                        seen[c] = true;
                        orbit.push(c);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(InducedPoint {
                hidden: self.hidden_group_at(marking, start)?,
                cosets: orbit,
            });
        }
        Ok(out)
    }

    /// Every induced point over every marking has its full hidden group.
    pub fn is_fpr(&self) -> bool {
        self.generator_actions
            .iter()
            .all(|acts| acts.iter().all(Perm::is_identity))
    }

    /// Every induced point over every marking has trivial hidden group.
    pub fn is_schematic(&self) -> bool {
        self.points.iter().flatten().all(|p| p.hidden.is_trivial())
    }
}

pub fn is_fpr(c: &OrbiCover) -> bool {
    c.is_fpr()
}

/// A fixed-point-reflecting class and its image among moduli subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FprClass {
    pub index: usize,
    pub conjugates: usize,
    /// Position of the transported table among the moduli classes.
    pub moduli_class: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FprReport {
    pub max_index: usize,
    pub fpr_counts: BTreeMap<usize, usize>,
    pub moduli_counts: BTreeMap<usize, usize>,
    pub classes: Vec<FprClass>,
    pub checks: Vec<Check>,
}

impl FprReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.checks.iter().map(|c| c.verdict))
    }
}

/// Fixed-point-reflecting covers up to `max_index`, matched against the covers of the
/// moduli group.
pub fn enumerate_fpr_covers(o: &MarkedOrbispace, max_index: usize, budget: &mut Budget) -> Result<FprReport> {
    let moduli = moduli_pi1(o)?;
    let moduli_classes = subgroup_classes(&moduli, max_index, budget)?;
    let moduli_keys: HashMap<Vec<u32>, usize> = moduli_classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.table.conjugacy_key(), i))
        .collect();
    let mut moduli_counts: BTreeMap<usize, usize> = (1..=max_index).map(|i| (i, 0)).collect();
    for c in &moduli_classes {
        *moduli_counts.get_mut(&c.index()).unwrap() += 1;
    }

    let mut fpr_counts: BTreeMap<usize, usize> = (1..=max_index).map(|i| (i, 0)).collect();
    let mut classes = Vec::new();
    for c in subgroup_classes(o.pi1(), max_index, budget)? {
        let cover = OrbiCover::new(o.clone(), c.table.clone())?;
        if !cover.is_fpr() {
            continue;
        }
        *fpr_counts.get_mut(&c.index()).unwrap() += 1;
        let moduli_class = CosetTable::new(&moduli, c.table.action().to_vec())
            .ok()
            .and_then(|t| moduli_keys.get(&t.conjugacy_key()).copied());
        classes.push(FprClass {
            index: c.index(),
            conjugates: c.conjugates,
            moduli_class,
        });
    }

    let hit: BTreeSet<usize> = classes.iter().filter_map(|c| c.moduli_class).collect();
    let transported = classes.iter().all(|c| c.moduli_class.is_some());
    let bijective = transported && hit.len() == classes.len() && hit.len() == moduli_classes.len();
    let checks = vec![
        Check::new(
            "counts_per_index_equal",
            Verdict::from_bool(fpr_counts == moduli_counts),
            format!("fixed-point-reflecting {fpr_counts:?}, moduli {moduli_counts:?}"),
        ),
        Check::new("transport_is_bijective", Verdict::from_bool(bijective), ""),
    ];
    Ok(FprReport {
        max_index,
        fpr_counts,
        moduli_counts,
        classes,
        checks,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GaloisReport {
    pub marking: String,
    pub point: Vec<usize>,
    pub hidden_order: u128,
    pub point_hidden_order: u128,
    /// Deck transformations, named by the coset they send the base coset to, that
    /// preserve the point.
    pub point_stabilizer: Vec<usize>,
    pub checks: Vec<Check>,
}

impl GaloisReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.checks.iter().map(|c| c.verdict))
    }
}

/// The sequence `1 -> hidden at the point -> hidden group -> deck stabilizer -> 1` of
/// a Galois cover, with the connecting map `h -> deck element sending the point's
/// coset to its image under omega(h)`.
pub fn galois_sequence_check(c: &OrbiCover, marking: usize, point: usize) -> Result<GaloisReport> {
    let table = c.table();
    if !table.is_normal() {
        return Err(Error::NotGalois);
    }
    let n = table.index();
    let transversal = table.transversal();
    // deck[k] sends coset j to the coset of t_k t_j
    let deck: Vec<Perm> = (0..n)
        .map(|k| Perm::from_images((0..n).map(|j| table.trace(k, &transversal[j])).collect()))
        .collect::<Result<_>>()?;
    let ip = &c.points(marking)[point];
    let orbit: BTreeSet<usize> = ip.cosets.iter().copied().collect();
    let stabilizer: Vec<usize> = (0..n)
        .filter(|&k| orbit.iter().all(|&j| orbit.contains(&deck[k].apply(j))))
        .collect();

    let m = &c.parent().markings()[marking];
    let elements = m.hidden.elements()?;
    let acts = c.element_actions(marking)?;
    let rep = ip.cosets[0];
    // the deck element sending rep to rep·omega(h)
    let connecting: Vec<usize> = acts
        .iter()
        .map(|a| (0..n).find(|&k| deck[k].apply(rep) == a.apply(rep)).unwrap())
        .collect();
    let index: HashMap<&Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut homomorphism = true;
    for (i, p) in elements.iter().enumerate() {
        for (j, q) in elements.iter().enumerate() {
            let pq = index[&p.then(q)];
            homomorphism &= deck[connecting[j]].then(&deck[connecting[i]]) == deck[connecting[pq]];
        }
    }
    let kernel: BTreeSet<&Perm> = elements
        .iter()
        .zip(&connecting)
        .filter(|(_, &k)| k == 0)
        .map(|(p, _)| p)
        .collect();
    let hidden_here: BTreeSet<&Perm> = ip.hidden.elements()?.iter().collect();
    let image: BTreeSet<usize> = connecting.iter().copied().collect();
    let stab_set: BTreeSet<usize> = stabilizer.iter().copied().collect();

    let order = m.order();
    let here = ip.hidden.order();
    let checks = vec![
        Check::new(
            "orders_multiply",
            Verdict::from_bool(here * stabilizer.len() as u128 == order),
            format!("{here} * {} vs {order}", stabilizer.len()),
        ),
        Check::new("connecting_map_is_homomorphism", Verdict::from_bool(homomorphism), ""),
        Check::new("exact_at_hidden_group", Verdict::from_bool(kernel == hidden_here), ""),
        Check::new("exact_at_deck_stabilizer", Verdict::from_bool(image == stab_set), ""),
    ];
    Ok(GaloisReport {
        marking: m.id.clone(),
        point: ip.cosets.clone(),
        hidden_order: order,
        point_hidden_order: here,
        point_stabilizer: stabilizer,
        checks,
    })
}
