//! Finite connected covers of a Serre graph, realized from coset tables.

use std::collections::HashMap;

use serde::Serialize;

use super::morphism::GraphMorphism;
use super::serre::{Pi1, SerreGraph};
use crate::group::coset::CosetTable;
use crate::group::low_index::subgroup_classes;
use crate::group::perm::{FinitePermGroup, Perm};
use crate::group::word::Word;
use crate::{Budget, Error, Result};

/// A covering graph over `base_graph` of degree `table.index()`.
///
/// Realized vertex `(c, v)` has id `c * |V| + v`; realized edge `(c, e)` has id
/// `c * |E| + e` and runs from `(c, origin e)` to `(c·x, terminus e)` where `x` is the
/// letter of `e` (identity on tree edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    base_graph: SerreGraph,
    table: CosetTable,
    realized: SerreGraph,
    projection: GraphMorphism,
}

impl Cover {
    pub fn base_graph(&self) -> &SerreGraph {
        &self.base_graph
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn realized(&self) -> &SerreGraph {
        &self.realized
    }

    pub fn projection(&self) -> &GraphMorphism {
        &self.projection
    }

    pub fn degree(&self) -> usize {
        self.table.index()
    }

    /// Realized vertex over `v` on sheet `c`.
    pub fn vertex_at(&self, sheet: usize, v: usize) -> usize {
        sheet * self.base_graph.vertex_count() + v
    }

    /// Fiber over each base vertex, for colouring drawings.
    pub fn sheets(&self) -> Vec<usize> {
        let n = self.base_graph.vertex_count();
        (0..self.realized.vertex_count()).map(|i| i / n).collect()
    }

    pub fn to_dot(&self, name: &str) -> String {
        let fibers: Vec<usize> = (0..self.realized.vertex_count())
            .map(|i| i % self.base_graph.vertex_count())
            .collect();
        self.realized.to_dot(name, Some(&fibers))
    }

    /// Every star of the realized graph maps bijectively to the star below.
    pub fn is_star_bijective(&self) -> bool {
        self.projection.is_star_bijective()
    }
}

/// Realizes the cover of `g` for a coset table over `pi1`.
pub fn cover_from_subgroup(g: &SerreGraph, t: &CosetTable) -> Result<Cover> {
    let pi1 = g.pi1()?;
    cover_with_pi1(g, &pi1, t)
}

pub(crate) fn cover_with_pi1(g: &SerreGraph, pi1: &Pi1, t: &CosetTable) -> Result<Cover> {
    if t.generator_count() != pi1.rank() {
        return Err(Error::InvalidTable(format!(
            "table has {} generators, graph has rank {}",
            t.generator_count(),
            pi1.rank()
        )));
    }
    let (nv, ne, n) = (g.vertex_count(), g.edge_count(), t.index());
    let mut vnames = Vec::with_capacity(n * nv);
    let mut vertex_map = Vec::with_capacity(n * nv);
    for c in 0..n {
        for v in 0..nv {
            vnames.push(format!("{}@{c}", g.vertex_names()[v]));
            vertex_map.push(v);
        }
    }
    let mut enames = Vec::with_capacity(n * ne);
    let mut edges = Vec::with_capacity(n * ne);
    let mut dart_map = Vec::with_capacity(2 * n * ne);
    for c in 0..n {
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let d = match pi1.dart_letter(2 * e) {
                Some(l) => t.act(c, l),
                None => c,
            };
            enames.push(format!("{}@{c}", g.edge_names()[e]));
            edges.push((c * nv + u, d * nv + v));
            dart_map.push(2 * e);
            dart_map.push(2 * e + 1);
        }
    }
    let realized = SerreGraph::with_names(vnames, enames, edges, g.base())?;
    let projection = GraphMorphism::new(realized.clone(), g.clone(), vertex_map, dart_map)?;
    Ok(Cover {
        base_graph: g.clone(),
        table: t.clone(),
        realized,
        projection,
    })
}

/// A cover together with the size of its conjugacy class of subgroups.
#[derive(Debug, Clone)]
pub struct EnumeratedCover {
    pub cover: Cover,
    /// Number of pointed covers (distinct subgroups) isomorphic to this one unpointed.
    pub conjugates: usize,
}

/// One connected cover per conjugacy class of subgroups of index at most `max_degree`.
pub fn enumerate_covers(g: &SerreGraph, max_degree: usize, budget: &mut Budget) -> Result<Vec<EnumeratedCover>> {
    let pi1 = g.pi1()?;
    subgroup_classes(pi1.presentation(), max_degree, budget)?
        .into_iter()
        .map(|c| {
            Ok(EnumeratedCover {
                cover: cover_with_pi1(g, &pi1, &c.table)?,
                conjugates: c.conjugates,
            })
        })
        .collect()
}

/// Fiber action and deck group of a cover.
#[derive(Debug, Clone, Serialize)]
pub struct Monodromy {
    /// Action of each generator on the fiber over the base, read off by path lifting.
    pub action: Vec<Perm>,
    pub is_galois: bool,
    /// Deck transformations restricted to the fiber.
    #[serde(skip)]
    pub deck_group: FinitePermGroup,
    pub deck_order: u128,
}

/// Lifts the dart path `path` (starting at the origin of its first dart) from realized
/// vertex `at`; returns the realized darts.
pub fn lift_path(c: &Cover, at: usize, path: &[usize], index: &HashMap<(usize, usize), usize>) -> Vec<usize> {
    let mut cur = at;
    let mut out = Vec::with_capacity(path.len());
    for &d in path {
        let lifted = index[&(cur, d)];
        out.push(lifted);
        cur = c.realized.terminus(lifted);
    }
    out
}

/// `(realized origin, base dart) -> realized dart`.
pub fn lift_index(c: &Cover) -> HashMap<(usize, usize), usize> {
    (0..c.realized.dart_count())
        .map(|d| ((c.realized.origin(d), c.projection.dart(d)), d))
        .collect()
}

pub fn monodromy(c: &Cover) -> Result<Monodromy> {
    let g = &c.base_graph;
    let pi1 = g.pi1()?;
    let index = lift_index(c);
    let n = c.degree();
    let base = g.base();
    let action = (0..pi1.rank())
        .map(|k| {
            let path = pi1.generator_loop(k);
            let images = (0..n)
                .map(|sheet| {
                    let lifted = lift_path(c, c.vertex_at(sheet, base), &path, &index);
                    let end = lifted.last().map_or(c.vertex_at(sheet, base), |&d| c.realized.terminus(d));
                    end / g.vertex_count()
                })
                .collect();
            Perm::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    let reps: Vec<Word> = c.table.transversal();
    let reference = c.table.standardized();
    let mut deck = Vec::new();
    for k in 0..n {
        if c.table.rebased(k) == reference {
            // 0·w ↦ k·w
            deck.push(Perm::from_images(reps.iter().map(|w| c.table.trace(k, w)).collect())?);
        }
    }
    let deck_group = FinitePermGroup::new(n, deck)?;
    let deck_order = deck_group.order();
    Ok(Monodromy {
        action,
        is_galois: deck_order == n as u128,
        deck_group,
        deck_order,
    })
}
