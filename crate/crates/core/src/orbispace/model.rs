//! Presentations carrying finite hidden groups and their images.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::group::equality::{WordOracle, WordTest};
use crate::group::perm::{FinitePermGroup, Perm, PermGroupJson};
use crate::group::presentation::{Presentation, PresentationJson};
use crate::group::word::Word;
use crate::{Bounds, Error, Result, Verdict};

fn default_hidden_names(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("h{i}")).collect()
}

/// A finite hidden group at the base point with its homomorphism `omega` into the
/// fundamental group, given on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marking {
    pub id: String,
    pub hidden: FinitePermGroup,
    pub hidden_names: Vec<String>,
    /// Image of each hidden generator, as a word in the ambient presentation.
    pub omega: Vec<Word>,
}

impl Marking {
    pub fn new(id: impl Into<String>, hidden: FinitePermGroup, omega: Vec<Word>) -> Result<Self> {
        let id = id.into();
        let hidden_names = default_hidden_names(hidden.generators().len());
        Self::with_names(id, hidden, hidden_names, omega)
    }

    pub fn with_names(id: String, hidden: FinitePermGroup, hidden_names: Vec<String>, omega: Vec<Word>) -> Result<Self> {
        let k = hidden.generators().len();
        if hidden_names.len() != k || omega.len() != k {
            return Err(Error::InvalidMarking(format!(
                "marking `{id}` needs one name and one image per hidden generator"
            )));
        }
        Ok(Marking {
            id,
            hidden,
            hidden_names,
            omega,
        })
    }

    /// The marking whose every image is trivial.
    pub fn zero(id: impl Into<String>, hidden: FinitePermGroup) -> Self {
        let omega = vec![Word::identity(); hidden.generators().len()];
        Self::new(id, hidden, omega).unwrap()
    }

    pub fn order(&self) -> u128 {
        self.hidden.order()
    }

    /// Every hidden element with its image word, in breadth-first order.
    pub fn element_images(&self) -> Result<Vec<(Perm, Word)>> {
        Ok(self
            .hidden
            .element_words()?
            .into_iter()
            .map(|(p, w)| {
                let img = w.substitute(&self.omega);
                (p, img)
            })
            .collect())
    }

    /// Whether `omega` kills every relation of the hidden group.
    pub fn check_omega(&self, pi1: &Presentation, bounds: Bounds) -> Result<Verdict> {
        let (cayley, _) = self.hidden.cayley_presentation(self.hidden_names.clone())?;
        let oracle = WordOracle::new(pi1, bounds);
        Ok(Verdict::all(cayley.relators().iter().map(|r| {
            match oracle.is_trivial(&r.substitute(&self.omega)) {
                WordTest::Trivial => Verdict::Pass,
                WordTest::Nontrivial => Verdict::Fail,
                WordTest::Unknown => Verdict::Unknown,
            }
        })))
    }
}

/// A fundamental group with finitely many markings at the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedOrbispace {
    pi1: Presentation,
    markings: Vec<Marking>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkingJson {
    pub id: String,
    pub hidden: PermGroupJson,
    /// Hidden generator name to image word; missing generators map to the identity.
    #[serde(default)]
    pub omega: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbispaceJson {
    pub pi1: PresentationJson,
    #[serde(default)]
    pub markings: Vec<MarkingJson>,
}

impl MarkedOrbispace {
    pub fn new(pi1: Presentation, markings: Vec<Marking>) -> Result<Self> {
        let ambient: HashSet<&str> = pi1.names().iter().map(String::as_str).collect();
        let mut ids = HashSet::new();
        for m in &markings {
            if !ids.insert(m.id.as_str()) {
                return Err(Error::InvalidMarking(format!("duplicate marking id `{}`", m.id)));
            }
            if let Some(n) = m.hidden_names.iter().find(|n| ambient.contains(n.as_str())) {
                return Err(Error::InvalidMarking(format!(
                    "hidden generator `{n}` of `{}` clashes with the ambient group",
                    m.id
                )));
            }
            let mut local = HashSet::new();
            if let Some(n) = m.hidden_names.iter().find(|n| !local.insert(n.as_str())) {
                return Err(Error::InvalidMarking(format!("duplicate hidden generator `{n}`")));
            }
            if let Some(g) = m.omega.iter().filter_map(Word::max_generator).find(|&g| g >= pi1.generator_count()) {
                return Err(Error::InvalidGenerator {
                    index: g,
                    count: pi1.generator_count(),
                });
            }
        }
        Ok(MarkedOrbispace { pi1, markings })
    }

    pub fn unmarked(pi1: Presentation) -> Self {
        MarkedOrbispace {
            pi1,
            markings: Vec::new(),
        }
    }

    pub fn pi1(&self) -> &Presentation {
        &self.pi1
    }

    pub fn markings(&self) -> &[Marking] {
        &self.markings
    }

    pub fn marking(&self, id: &str) -> Option<usize> {
        self.markings.iter().position(|m| m.id == id)
    }

    /// Images of all hidden generators of all markings.
    pub fn omega_words(&self) -> Vec<Word> {
        self.markings.iter().flat_map(|m| m.omega.iter().cloned()).collect()
    }

    pub fn from_json(json: &OrbispaceJson) -> Result<Self> {
        let pi1 = json.pi1.to_presentation()?;
        let markings = json
            .markings
            .iter()
            .map(|m| {
                let hidden = FinitePermGroup::from_json(&m.hidden)?;
                let k = hidden.generators().len();
                let names = match &m.hidden.names {
                    Some(n) => n.clone(),
                    None => default_hidden_names(k),
                };
                if names.len() != k {
                    return Err(Error::InvalidMarking(format!("marking `{}` names {} of {k} generators", m.id, names.len())));
                }
                let mut omega = vec![Word::identity(); k];
                for (name, word) in &m.omega {
                    let i = names
                        .iter()
                        .position(|n| n == name)
                        .ok_or_else(|| Error::InvalidMarking(format!("`{name}` is not a generator of `{}`", m.id)))?;
                    omega[i] = pi1.parse_word(word)?;
                }
                Marking::with_names(m.id.clone(), hidden, names, omega)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pi1, markings)
    }

    pub fn to_json(&self) -> Result<OrbispaceJson> {
        Ok(OrbispaceJson {
            pi1: self.pi1.to_json()?,
            markings: self
                .markings
                .iter()
                .map(|m| {
                    Ok(MarkingJson {
                        id: m.id.clone(),
                        hidden: m.hidden.to_json((m.hidden_names != default_hidden_names(m.hidden_names.len())).then(|| m.hidden_names.clone())),
                        omega: m
                            .hidden_names
                            .iter()
                            .zip(&m.omega)
                            .map(|(n, w)| Ok((n.clone(), self.pi1.format_word(w)?)))
                            .collect::<Result<_>>()?,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }
}

/// The fundamental group with every hidden image killed.
pub fn moduli_pi1(o: &MarkedOrbispace) -> Result<Presentation> {
    o.pi1.quotient(&o.omega_words())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_validation() {
        let json: OrbispaceJson = serde_json::from_str(
            r#"{"pi1": {"generators": ["s", "u"], "relators": ["ssss", "ssUUU"]},
                "markings": [
                  {"id": "i", "hidden": {"degree": 4, "generators": [[1, 2, 3, 0]]}, "omega": {"h0": "s"}},
                  {"id": "rho", "hidden": {"degree": 6, "generators": [[1, 2, 3, 4, 5, 0]]}, "omega": {"h0": "u"}}
                ]}"#,
        )
        .unwrap();
        let o = MarkedOrbispace::from_json(&json).unwrap();
        assert_eq!(o.markings().len(), 2);
        assert_eq!(o.to_json().unwrap(), json);
        let m = moduli_pi1(&o).unwrap();
        assert_eq!(m.relators().len(), 4);

        let clash: OrbispaceJson = serde_json::from_str(
            r#"{"pi1": {"generators": ["a"]},
                "markings": [{"id": "x", "hidden": {"degree": 2, "generators": [[1, 0]], "names": ["a"]}}]}"#,
        )
        .unwrap();
        assert!(matches!(MarkedOrbispace::from_json(&clash), Err(Error::InvalidMarking(_))));
    }

    #[test]
    fn omega_respects_relations() {
        let pi1 = Presentation::parse(&["a"], &["aaaa"]).unwrap();
        let good = Marking::new("m", FinitePermGroup::cyclic(2), vec![pi1.parse_word("aa").unwrap()]).unwrap();
        assert_eq!(good.check_omega(&pi1, Bounds::default()).unwrap(), Verdict::Pass);
        let bad = Marking::new("m", FinitePermGroup::cyclic(2), vec![pi1.parse_word("a").unwrap()]).unwrap();
        assert_eq!(bad.check_omega(&pi1, Bounds::default()).unwrap(), Verdict::Fail);
    }
}
