//! Cheap isomorphism invariants of a presented group.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::low_index::subgroup_classes;
use super::presentation::Presentation;
use super::snf::smith_diagonal;
use crate::{Budget, Result};

/// Abelianization plus subgroup counts. Equal fingerprints are necessary, not sufficient,
/// for isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    /// Rank of the free part of the abelianization.
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<u64>,
    /// Index -> number of conjugacy classes of subgroups of that index.
    pub class_counts: BTreeMap<usize, usize>,
    /// Index -> number of subgroups of that index.
    pub subgroup_counts: BTreeMap<usize, usize>,
}

impl Fingerprint {
    pub fn is_trivial_group(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty() && self.subgroup_counts.values().sum::<usize>() == 1
    }

    /// Abelianization as a display string such as `Z^2 x Z/4`.
    pub fn abelianization(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" x ")
        }
    }
}

/// Free rank and invariant factors of the abelianization.
pub fn abelian_invariants(p: &Presentation) -> (usize, Vec<u64>) {
    let n = p.generator_count();
    let m: Vec<Vec<i128>> = p
        .relators()
        .iter()
        .map(|r| r.exponent_sums(n).into_iter().map(|e| e as i128).collect())
        .collect();
    let diag = smith_diagonal(m, n);
    let torsion = diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
    (n - diag.len(), torsion)
}

pub fn group_fingerprint(p: &Presentation, depth: usize, budget: &mut Budget) -> Result<Fingerprint> {
    let (free_rank, torsion) = abelian_invariants(p);
    let mut class_counts = BTreeMap::new();
    let mut subgroup_counts = BTreeMap::new();
    for k in 1..=depth {
        class_counts.insert(k, 0);
        subgroup_counts.insert(k, 0);
    }
    for c in subgroup_classes(p, depth, budget)? {
        *class_counts.get_mut(&c.index()).unwrap() += 1;
        *subgroup_counts.get_mut(&c.index()).unwrap() += c.conjugates;
    }
    Ok(Fingerprint {
        free_rank,
        torsion,
        class_counts,
        subgroup_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: &Presentation, d: usize) -> Fingerprint {
        group_fingerprint(p, d, &mut Budget::new(1_000_000)).unwrap()
    }

    #[test]
    fn free_rank_two() {
        let f = fp(&Presentation::free(2), 2);
        assert_eq!((f.free_rank, f.torsion.clone()), (2, vec![]));
        assert_eq!(f.class_counts[&2], 3);
        assert_eq!(f.abelianization(), "Z^2");
    }

    #[test]
    fn cyclic_four() {
        let f = fp(&Presentation::parse(&["a"], &["aaaa"]).unwrap(), 2);
        assert_eq!(f.torsion, vec![4]);
        assert_eq!(f.class_counts, BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(f.abelianization(), "Z/4");
    }

    #[test]
    fn trivial_group() {
        let f = fp(&Presentation::free(0), 1);
        assert!(f.is_trivial_group());
        assert_eq!(f.class_counts, BTreeMap::from([(1, 1)]));
        let sl = Presentation::parse(&["s", "u"], &["ssss", "ssUUU", "s", "u"]).unwrap();
        assert!(fp(&sl, 3).is_trivial_group());
        let sl2 = Presentation::parse(&["s", "u"], &["ssss", "ssUUU"]).unwrap();
        assert_eq!(fp(&sl2, 1).torsion, vec![12]);
    }
}
