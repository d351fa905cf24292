//! Enumeration of finite-index subgroups by backtracking over partial coset tables.

use std::collections::BTreeMap;

use super::coset::CosetTable;
use super::perm::Perm;
use super::presentation::Presentation;
use crate::{Bounds, Budget, Result};

const NONE: u32 = u32::MAX;

/// A conjugacy class of finite-index subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupClass {
    /// The conjugate with minimal serialization.
    pub table: CosetTable,
    /// Number of distinct subgroups in the class.
    pub conjugates: usize,
}

impl SubgroupClass {
    pub fn index(&self) -> usize {
        self.table.index()
    }
}

struct Search<'a> {
    ncols: usize,
    max_index: usize,
    relators: Vec<Vec<usize>>,
    budget: &'a mut Budget,
    found: Vec<Vec<u32>>,
}

impl Search<'_> {
    /// Applies every single-gap deduction; `false` on a contradiction.
    fn propagate(&self, table: &mut [u32], n: usize) -> bool {
        let nc = self.ncols;
        loop {
            let mut changed = false;
            for r in &self.relators {
                let len = r.len();
                for c in 0..n {
                    let mut f = c;
                    let mut i = 0;
                    while i < len {
                        let next = table[f * nc + r[i]];
                        if next == NONE {
                            break;
                        }
                        f = next as usize;
                        i += 1;
                    }
                    if i == len {
                        if f != c {
                            return false;
                        }
                        continue;
                    }
                    let mut b = c;
                    let mut j = len;
                    while j > i {
                        let prev = table[b * nc + (r[j - 1] ^ 1)];
                        if prev == NONE {
                            break;
                        }
                        b = prev as usize;
                        j -= 1;
                    }
                    if j == i {
                        // f --r[..i]--> ... then the full word traced; must close
                        if f != b {
                            return false;
                        }
                    } else if j == i + 1 {
                        let x = r[i];
                        if table[b * nc + (x ^ 1)] != NONE {
                            return false;
                        }
                        table[f * nc + x] = b as u32;
                        table[b * nc + (x ^ 1)] = f as u32;
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn descend(&mut self, mut table: Vec<u32>, n: usize) -> Result<()> {
        self.budget.tick()?;
        if !self.propagate(&mut table, n) {
            return Ok(());
        }
        let nc = self.ncols;
        let Some(pos) = (0..n * nc).find(|&k| table[k] == NONE) else {
            self.found.push(table[..n * nc].to_vec());
            return Ok(());
        };
        let (c, x) = (pos / nc, pos % nc);
        for d in 0..n {
            if table[d * nc + (x ^ 1)] == NONE {
                let mut t = table.clone();
                t[c * nc + x] = d as u32;
                t[d * nc + (x ^ 1)] = c as u32;
                self.descend(t, n)?;
            }
        }
        if n < self.max_index {
            let mut t = table;
            t[c * nc + x] = n as u32;
            t[n * nc + (x ^ 1)] = c as u32;
            self.descend(t, n + 1)?;
        }
        Ok(())
    }
}

fn table_from_rows(generator_count: usize, rows: &[u32]) -> CosetTable {
    let nc = 2 * generator_count;
    let n = rows.len() / nc;
    let action = (0..generator_count)
        .map(|g| Perm::from_images((0..n).map(|c| rows[c * nc + 2 * g] as usize).collect()).unwrap())
        .collect();
    CosetTable::from_action_unchecked(generator_count, action)
        .unwrap()
        .standardized()
}

/// Every subgroup of index at most `max_index` (one table each, with conjugates listed
/// separately), ordered by index and then serialization.
pub fn all_subgroups(p: &Presentation, max_index: usize, budget: &mut Budget) -> Result<Vec<CosetTable>> {
    let (tables, outcome) = search(p, max_index, budget);
    outcome.map(|_| tables)
}

/// Like [`all_subgroups`], but keeps whatever was found when the budget runs out.
/// The flag reports whether the search finished.
pub fn subgroups_within_budget(p: &Presentation, max_index: usize, budget: &mut Budget) -> (Vec<CosetTable>, bool) {
    let (tables, outcome) = search(p, max_index, budget);
    (tables, outcome.is_ok())
}

fn search(p: &Presentation, max_index: usize, budget: &mut Budget) -> (Vec<CosetTable>, Result<()>) {
    let gens = p.generator_count();
    if gens == 0 || max_index == 0 {
        let tables = if max_index == 0 {
            Vec::new()
        } else {
            vec![CosetTable::trivial(gens)]
        };
        return (tables, Ok(()));
    }
    let ncols = 2 * gens;
    let relators = p
        .relators()
        .iter()
        .map(|r| r.letters().iter().map(|l| l.column()).collect())
        .collect();
    let mut search = Search {
        ncols,
        max_index,
        relators,
        budget,
        found: Vec::new(),
    };
    let outcome = search.descend(vec![NONE; ncols * max_index], 1);
    let mut tables: Vec<CosetTable> = search
        .found
        .iter()
        .map(|rows| table_from_rows(gens, rows))
        .collect();
    tables.sort_by_key(|t| t.serialization());
    tables.dedup();
    (tables, outcome)
}

/// Conjugacy classes of subgroups of index at most `max_index`.
pub fn subgroup_classes(p: &Presentation, max_index: usize, budget: &mut Budget) -> Result<Vec<SubgroupClass>> {
    let mut classes: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for t in all_subgroups(p, max_index, budget)? {
        *classes.entry(t.conjugacy_key()).or_default() += 1;
    }
    let gens = p.generator_count();
    Ok(classes
        .into_iter()
        .map(|(key, conjugates)| SubgroupClass {
            table: table_from_key(gens, &key),
            conjugates,
        })
        .collect())
}

fn table_from_key(generator_count: usize, key: &[u32]) -> CosetTable {
    if generator_count == 0 {
        return CosetTable::trivial(0);
    }
    table_from_rows(generator_count, &key[1..])
}

/// One table per conjugacy class of subgroups of index at most `max_index`, using the
/// default node budget.
pub fn low_index_subgroups(p: &Presentation, max_index: usize) -> Result<Vec<CosetTable>> {
    let mut budget = Budget::new(Bounds::default().node_budget);
    Ok(subgroup_classes(p, max_index, &mut budget)?
        .into_iter()
        .map(|c| c.table)
        .collect())
}
