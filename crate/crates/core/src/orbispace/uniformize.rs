//! Uniformization, covers killing the hidden images and the moduli sequence.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::cover::OrbiCover;
use super::model::{moduli_pi1, MarkedOrbispace};
use crate::group::coset::CosetTable;
use crate::group::equality::{WordOracle, WordTest};
use crate::group::low_index::subgroups_within_budget;
use crate::group::perm::normal_closure_perm;
use crate::group::word::Word;
use crate::{Bounds, Budget, Check, Result, Verdict};

/// Image word of every nontrivial hidden element, per marking.
fn nontrivial_images(o: &MarkedOrbispace) -> Result<Vec<Vec<(Word, Word)>>> {
    o.markings()
        .iter()
        .map(|m| {
            Ok(m.hidden
                .element_words()?
                .into_iter()
                .filter(|(p, _)| !p.is_identity())
                .map(|(_, w)| {
                    let img = w.substitute(&m.omega);
                    (w, img)
                })
                .collect())
        })
        .collect()
}

/// A hidden element with trivial image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelWitness {
    pub marking: String,
    /// The element as a word over the hidden generators.
    pub element: Word,
    /// Its image, trivial in the fundamental group.
    pub image: Word,
}

#[derive(Debug, Clone)]
pub enum Uniformization {
    Yes(Box<OrbiCover>),
    No(KernelWitness),
    Unknown,
}

/// Test of each marking's injectivity: `Fail` with a witness when some nontrivial
/// element is certified to map to the identity.
pub fn omega_injectivity(o: &MarkedOrbispace, bounds: Bounds) -> Result<(Verdict, Option<KernelWitness>)> {
    let oracle = WordOracle::new(o.pi1(), bounds);
    let mut verdict = Verdict::Pass;
    for (m, images) in o.markings().iter().zip(nontrivial_images(o)?) {
        for (element, image) in images {
            match oracle.is_trivial(&image) {
                WordTest::Trivial => {
                    let w = KernelWitness {
                        marking: m.id.clone(),
                        element,
                        image,
                    };
                    return Ok((Verdict::Fail, Some(w)));
                }
                WordTest::Nontrivial => {}
                WordTest::Unknown => verdict = Verdict::Unknown,
            }
        }
    }
    Ok((verdict, None))
}

/// One table per conjugacy class of index at most `bound`, ascending by index, and
/// whether the enumeration completed.
fn classes_by_index(o: &MarkedOrbispace, bound: usize, budget: &mut Budget) -> (Vec<CosetTable>, bool) {
    let (tables, complete) = subgroups_within_budget(o.pi1(), bound, budget);
    let mut seen = HashSet::new();
    let mut out: Vec<CosetTable> = tables.into_iter().filter(|t| seen.insert(t.conjugacy_key())).collect();
    out.sort_by_key(|t| t.index());
    (out, complete)
}

/// Looks for a cover on which every induced hidden group is trivial.
pub fn is_uniformizable(o: &MarkedOrbispace, bound: usize, bounds: Bounds) -> Result<Uniformization> {
    if let (_, Some(w)) = omega_injectivity(o, bounds)? {
        return Ok(Uniformization::No(w));
    }
    let images = nontrivial_images(o)?;
    let mut budget = Budget::new(bounds.node_budget);
    let (tables, _) = classes_by_index(o, bound, &mut budget);
    for t in tables {
        let free = images
            .iter()
            .flatten()
            .all(|(_, img)| (0..t.index()).all(|c| t.trace(c, img) != c));
        if free {
            return Ok(Uniformization::Yes(Box::new(OrbiCover::new(o.clone(), t)?)));
        }
    }
    Ok(Uniformization::Unknown)
}

/// A Galois cover whose subgroup contains no nontrivial hidden image, so that every
/// hidden group maps trivially into it. `None` when none is found within `bound`.
pub fn kill_omega_cover(o: &MarkedOrbispace, bound: usize, bounds: Bounds) -> Result<Option<OrbiCover>> {
    let oracle = WordOracle::new(o.pi1(), bounds);
    let images: Vec<Word> = nontrivial_images(o)?.into_iter().flatten().map(|(_, w)| w).collect();
    let mut trivial = vec![None; images.len()];
    let mut budget = Budget::new(bounds.node_budget);
    let (tables, _) = classes_by_index(o, bound, &mut budget);
    for t in tables.into_iter().filter(CosetTable::is_normal) {
        let ok = images.iter().zip(trivial.iter_mut()).all(|(w, known)| {
            !t.contains(w) || *known.get_or_insert_with(|| oracle.is_trivial(w) == WordTest::Trivial)
        });
        if ok {
            return Ok(Some(OrbiCover::new(o.clone(), t)?));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuliReport {
    pub moduli_generators: usize,
    pub moduli_relators: usize,
    pub pi1_order: Option<usize>,
    pub moduli_order: Option<usize>,
    pub kernel_order: Option<usize>,
    /// Whether every marking maps injectively.
    pub left_exact: Verdict,
    pub kernel_witness: Option<KernelWitness>,
    pub omega_relations: BTreeMap<String, Verdict>,
    pub checks: Vec<Check>,
}

impl ModuliReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.checks.iter().map(|c| c.verdict))
    }
}

/// Checks `hidden groups -> pi1 -> moduli -> 1`: the kernel of the last map is
/// normally generated by the hidden images. Left exactness is reported separately.
pub fn moduli_sequence_check(o: &MarkedOrbispace, bounds: Bounds) -> Result<ModuliReport> {
    let moduli = moduli_pi1(o)?;
    let omega_relations = o
        .markings()
        .iter()
        .map(|m| Ok((m.id.clone(), m.check_omega(o.pi1(), bounds)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let (left_exact, kernel_witness) = omega_injectivity(o, bounds)?;

    let pi1_oracle = WordOracle::new(o.pi1(), bounds);
    let moduli_oracle = WordOracle::new(&moduli, bounds);
    let pi1_regular = pi1_oracle.regular();
    let moduli_regular = moduli_oracle.regular();
    let mut checks = vec![Check::new(
        "omega_respects_relations",
        Verdict::all(omega_relations.values().copied()),
        "",
    )];

    // kernel generators of pi1 -> moduli, read off the moduli's regular table, must die
    // modulo the hidden images
    let kernel_generated = if o.markings().is_empty() {
        Check::new("kernel_generated_by_images", Verdict::Pass, "no markings")
    } else {
        match moduli_regular {
            Some(t) => {
                let v = Verdict::all(t.schreier_generators().iter().map(|w| moduli_oracle.is_trivial(w).as_verdict()));
                Check::new("kernel_generated_by_images", v, format!("moduli of order {}", t.index()))
            }
            None => Check::new("kernel_generated_by_images", Verdict::Unknown, "moduli group not enumerated"),
        }
    };
    checks.push(kernel_generated);

    let mut kernel_order = None;
    let orders = match (pi1_regular, moduli_regular) {
        (Some(p), Some(m)) => {
            // the normal closure of the images inside the regular representation
            let group = crate::FinitePermGroup::new(p.index(), p.action().to_vec())?;
            let images: Vec<_> = o.omega_words().iter().map(|w| p.word_perm(w)).collect();
            let n = normal_closure_perm(&group, &images)?.order() as usize;
            kernel_order = Some(n);
            Check::new(
                "orders_multiply",
                Verdict::from_bool(n * m.index() == p.index()),
                format!("{} = {n} * {}", p.index(), m.index()),
            )
        }
        _ => Check::new("orders_multiply", Verdict::Unknown, "fundamental group not enumerated"),
    };
    checks.push(orders);
    Ok(ModuliReport {
        moduli_generators: moduli.generator_count(),
        moduli_relators: moduli.relators().len(),
        pi1_order: pi1_regular.map(CosetTable::index),
        moduli_order: moduli_regular.map(CosetTable::index),
        kernel_order,
        left_exact,
        kernel_witness,
        omega_relations,
        checks,
    })
}
