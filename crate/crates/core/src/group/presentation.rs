use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::word::{Letter, Word};
use crate::{Error, Result};

/// A finite presentation `<generators | relators>`.
///
/// Relators are kept freely and cyclically reduced, without empty or
/// duplicate entries, in insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

/// Wire form: `{"generators": ["a","b"], "relators": ["aaaa","aaB"]}`, uppercase = inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidGraph(format!("duplicate generator name `{n}`")));
            }
        }
        let mut p = Presentation {
            names,
            relators: Vec::new(),
        };
        p.add_relators(relators)?;
        Ok(p)
    }

    /// Free group on `rank` generators named by [`default_names`].
    pub fn free(rank: usize) -> Self {
        Presentation {
            names: default_names(rank),
            relators: Vec::new(),
        }
    }

    /// Convenience constructor from relator strings in the wire grammar.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self> {
        PresentationJson {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            relators: relators.iter().map(|s| s.to_string()).collect(),
        }
        .to_presentation()
    }

    fn add_relators(&mut self, relators: Vec<Word>) -> Result<()> {
        let count = self.names.len();
        let mut have: HashSet<Word> = self.relators.iter().cloned().collect();
        for r in relators {
            if let Some(g) = r.max_generator() {
                if g >= count {
                    return Err(Error::InvalidGenerator { index: g, count });
                }
            }
            let r = r.cyclically_reduced();
            if r.is_identity() || !have.insert(r.clone()) {
                continue;
            }
            self.relators.push(r);
        }
        Ok(())
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same generators with `extra` adjoined as relators.
    pub fn quotient(&self, extra: &[Word]) -> Result<Presentation> {
        let mut p = self.clone();
        p.add_relators(extra.to_vec())?;
        Ok(p)
    }

    /// Whether `w` is a cyclic rotation of a relator or of a relator's inverse.
    pub fn is_relator_conjugate(&self, w: &Word) -> bool {
        let w = w.cyclically_reduced();
        if w.is_identity() {
            return true;
        }
        let inv = w.inverse();
        self.relators.iter().any(|r| {
            r.len() == w.len() && (0..r.len()).any(|k| {
                let rot = r.rotated(k);
                rot == w || rot == inv
            })
        })
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        parse_relator(s, &self.names)
    }

    pub fn format_word(&self, w: &Word) -> Result<String> {
        format_relator(w, &self.names)
    }

    pub fn to_json(&self) -> Result<PresentationJson> {
        Ok(PresentationJson {
            generators: self.names.clone(),
            relators: self
                .relators
                .iter()
                .map(|r| format_relator(r, &self.names))
                .collect::<Result<_>>()?,
        })
    }
}

impl PresentationJson {
    pub fn to_presentation(&self) -> Result<Presentation> {
        for n in &self.generators {
            if !is_relator_name(n) {
                return Err(Error::NotEncodable(n.clone()));
            }
        }
        let relators = self
            .relators
            .iter()
            .map(|s| parse_relator(s, &self.generators))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(self.generators.clone(), relators)
    }
}

/// `a`, `b`, ... for up to 26 generators; `x0`, `x1`, ... beyond that.
pub fn default_names(rank: usize) -> Vec<String> {
    if rank <= 26 {
        (0..rank)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        (0..rank).map(|i| format!("x{i}")).collect()
    }
}

fn is_relator_name(n: &str) -> bool {
    let mut chars = n.chars();
    matches!((chars.next(), chars.next()), (Some(c), None) if c.is_ascii_lowercase())
}

pub fn parse_relator(s: &str, names: &[String]) -> Result<Word> {
    let mut letters = Vec::with_capacity(s.len());
    for c in s.chars() {
        if c.is_whitespace() {
            continue;
        }
        if !c.is_ascii_alphabetic() {
            return Err(Error::MalformedRelator(s.to_string()));
        }
        let lower = c.to_ascii_lowercase().to_string();
        let g = names
            .iter()
            .position(|n| *n == lower)
            .ok_or_else(|| Error::UnknownGeneratorName(lower.clone()))?;
        letters.push(Letter::new(g, c.is_ascii_uppercase()));
    }
    Ok(Word::from_letters(letters))
}

pub fn format_relator(w: &Word, names: &[String]) -> Result<String> {
    let mut out = String::with_capacity(w.len());
    for l in w.letters() {
        let name = &names[l.generator];
        if !is_relator_name(name) {
            return Err(Error::NotEncodable(name.clone()));
        }
        let c = name.chars().next().unwrap();
        out.push(if l.inverse { c.to_ascii_uppercase() } else { c });
    }
    Ok(out)
}

/// Generators that occur in some relator.
pub fn occurring_generators(p: &Presentation) -> BTreeSet<usize> {
    p.relators
        .iter()
        .flat_map(|r| r.letters().iter().map(|l| l.generator))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_grammar() {
        let p = Presentation::parse(&["a", "b"], &["aaaa", "aaB"]).unwrap();
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.relators()[1].letters(), &[Letter::pos(0), Letter::pos(0), Letter::neg(1)]);
        let json = p.to_json().unwrap();
        assert_eq!(json.relators, vec!["aaaa", "aaB"]);
    }

    #[test]
    fn relators_are_cyclically_reduced_and_deduplicated() {
        let p = Presentation::parse(&["a", "b"], &["baB", "a", "aA", "a"]).unwrap();
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0], Word::generator(0));
    }

    #[test]
    fn quotient_adjoins() {
        let f2 = Presentation::parse(&["a", "b"], &[]).unwrap();
        let q = f2.quotient(&[Word::generator(0)]).unwrap();
        assert_eq!(q.to_json().unwrap().relators, vec!["a"]);
        let c4 = Presentation::parse(&["a"], &["aaaa"]).unwrap();
        assert_eq!(c4.quotient(&[]).unwrap(), c4);
        assert!(matches!(
            c4.quotient(&[Word::generator(3)]),
            Err(Error::InvalidGenerator { index: 3, count: 1 })
        ));
    }

    #[test]
    fn rejects_unknown_letters() {
        assert!(matches!(
            Presentation::parse(&["a"], &["ab"]),
            Err(Error::UnknownGeneratorName(_))
        ));
        assert!(Presentation::parse(&["ab"], &[]).is_err());
    }

    #[test]
    fn relator_conjugates() {
        let p = Presentation::parse(&["s", "u"], &["ssss", "ssUUU"]).unwrap();
        assert!(p.is_relator_conjugate(&p.parse_word("UssUU").unwrap()));
        assert!(p.is_relator_conjugate(&p.parse_word("uuuSS").unwrap()));
        assert!(!p.is_relator_conjugate(&p.parse_word("ss").unwrap()));
    }
}
