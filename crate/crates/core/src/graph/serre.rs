//! Serre graphs: darts with a fixed-point-free reversal involution.
//!
//! Edge `e` from `u` to `v` contributes dart `2e` (`u -> v`) and dart `2e + 1`
//! (`v -> u`). Loops are allowed; the two darts of a loop are still distinct.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::group::presentation::{default_names, Presentation};
use crate::group::word::{Letter, Word};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SerreGraph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    /// `(origin, terminus)` of dart `2e`.
    edges: Vec<(usize, usize)>,
    base: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
    pub base: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: String,
    pub u: String,
    pub v: String,
}

pub fn reverse(d: usize) -> usize {
    d ^ 1
}

pub fn edge_of(d: usize) -> usize {
    d / 2
}

impl SerreGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>, base: usize) -> Result<Self> {
        let vertex_names = (0..vertex_count).map(|i| format!("v{i}")).collect();
        let edge_names = (0..edges.len()).map(|i| format!("e{i}")).collect();
        Self::with_names(vertex_names, edge_names, edges, base)
    }

    pub fn with_names(
        vertex_names: Vec<String>,
        edge_names: Vec<String>,
        edges: Vec<(usize, usize)>,
        base: usize,
    ) -> Result<Self> {
        let n = vertex_names.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if base >= n {
            return Err(Error::InvalidGraph("base is not a vertex".into()));
        }
        if edge_names.len() != edges.len() {
            return Err(Error::InvalidGraph("edge names and edges differ in length".into()));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::InvalidGraph(format!("edge endpoint out of range: ({u}, {v})")));
        }
        Ok(SerreGraph {
            vertex_names,
            edge_names,
            edges,
            base,
        })
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Self {
        SerreGraph::new(n, (1..n).map(|i| (i - 1, i)).collect(), 0).unwrap()
    }

    /// Cycle on `n >= 1` vertices.
    pub fn cycle(n: usize) -> Self {
        SerreGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect(), 0).unwrap()
    }

    /// One vertex with `r` loops.
    pub fn rose(r: usize) -> Self {
        SerreGraph::new(1, vec![(0, 0); r], 0).unwrap()
    }

    /// Two vertices joined by `k` parallel edges.
    pub fn theta(k: usize) -> Self {
        SerreGraph::new(2, vec![(0, 1); k], 0).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dart_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn with_base(&self, base: usize) -> Result<SerreGraph> {
        if base >= self.vertex_count() {
            return Err(Error::InvalidGraph("base is not a vertex".into()));
        }
        let mut g = self.clone();
        g.base = base;
        Ok(g)
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn origin(&self, d: usize) -> usize {
        let (u, v) = self.edges[d / 2];
        if d.is_multiple_of(2) {
            u
        } else {
            v
        }
    }

    pub fn terminus(&self, d: usize) -> usize {
        self.origin(d ^ 1)
    }

    /// Darts leaving `v`, in increasing id order.
    pub fn star(&self, v: usize) -> Vec<usize> {
        (0..self.dart_count()).filter(|&d| self.origin(d) == v).collect()
    }

    /// `stars()[v]` lists the darts leaving `v`.
    pub fn stars(&self) -> Vec<Vec<usize>> {
        let mut s = vec![Vec::new(); self.vertex_count()];
        for d in 0..self.dart_count() {
            s[self.origin(d)].push(d);
        }
        s
    }

    /// Dart name: `e` for the forward dart of edge `e`, `-e` for its reverse.
    pub fn dart_name(&self, d: usize) -> String {
        let e = &self.edge_names[d / 2];
        if d.is_multiple_of(2) {
            e.clone()
        } else {
            format!("-{e}")
        }
    }

    pub fn dart_by_name(&self, name: &str) -> Option<usize> {
        let (stripped, rev) = match name.strip_prefix('-') {
            Some(s) => (s, 1),
            None => (name, 0),
        };
        self.edge_names.iter().position(|e| e == stripped).map(|e| 2 * e + rev)
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|v| v == name)
    }

    /// Component label per vertex, numbered by first appearance.
    pub fn components(&self) -> Vec<usize> {
        let stars = self.stars();
        let mut comp = vec![usize::MAX; self.vertex_count()];
        let mut next = 0;
        for s in 0..self.vertex_count() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &d in &stars[v] {
                    let w = self.terminus(d);
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Breadth-first spanning tree from the base, scanning darts in increasing id order.
    /// Returns the tree darts, each oriented away from the base, in discovery order.
    pub fn spanning_tree(&self) -> Result<Vec<usize>> {
        Ok(self.tree()?.darts)
    }

    fn tree(&self) -> Result<Tree> {
        let stars = self.stars();
        let mut parent: Vec<Option<usize>> = vec![None; self.vertex_count()];
        let mut seen = vec![false; self.vertex_count()];
        seen[self.base] = true;
        let mut darts = Vec::new();
        let mut queue = VecDeque::from([self.base]);
        while let Some(v) = queue.pop_front() {
            for &d in &stars[v] {
                let w = self.terminus(d);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(d);
                    darts.push(d);
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Disconnected);
        }
        Ok(Tree { darts, parent })
    }

    /// Free presentation of the fundamental group at the base.
    pub fn pi1(&self) -> Result<Pi1> {
        Pi1::new(self)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertex_names.clone(),
            edges: self
                .edges
                .iter()
                .zip(&self.edge_names)
                .map(|(&(u, v), id)| EdgeJson {
                    id: id.clone(),
                    u: self.vertex_names[u].clone(),
                    v: self.vertex_names[v].clone(),
                })
                .collect(),
            base: self.vertex_names[self.base].clone(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, v) in json.vertices.iter().enumerate() {
            if index.insert(v.as_str(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{v}`")));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex `{name}`")))
        };
        let mut names = std::collections::HashSet::new();
        let mut edges = Vec::new();
        for e in &json.edges {
            if e.id.starts_with('-') || !names.insert(e.id.as_str()) {
                return Err(Error::InvalidGraph(format!("bad or duplicate edge id `{}`", e.id)));
            }
            edges.push((lookup(&e.u)?, lookup(&e.v)?));
        }
        Self::with_names(
            json.vertices.clone(),
            json.edges.iter().map(|e| e.id.clone()).collect(),
            edges,
            lookup(&json.base)?,
        )
    }

    /// Graphviz rendering; `colors[v]` (if given) groups vertices into fibers.
    pub fn to_dot(&self, name: &str, colors: Option<&[usize]>) -> String {
        const PALETTE: [&str; 8] = [
            "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
        ];
        let mut out = String::new();
        writeln!(out, "graph \"{name}\" {{").unwrap();
        for (i, v) in self.vertex_names.iter().enumerate() {
            let mut attrs = Vec::new();
            if i == self.base {
                attrs.push("shape=doublecircle".to_string());
            }
            if let Some(c) = colors {
                attrs.push(format!("color=\"{}\"", PALETTE[c[i] % PALETTE.len()]));
            }
            writeln!(out, "  \"{v}\" [{}];", attrs.join(", ")).unwrap();
        }
        for (&(u, v), id) in self.edges.iter().zip(&self.edge_names) {
            writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{id}\"];",
                self.vertex_names[u], self.vertex_names[v]
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

struct Tree {
    darts: Vec<usize>,
    /// Tree dart entering each non-base vertex.
    parent: Vec<Option<usize>>,
}

/// Fundamental group of a connected Serre graph at its base: one free generator per
/// edge outside the spanning tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi1 {
    presentation: Presentation,
    /// Edge id of each generator.
    generator_edges: Vec<usize>,
    /// Generator of each edge, `None` on tree edges.
    generator_of_edge: Vec<Option<usize>>,
    tree_darts: Vec<usize>,
    /// Tree path (dart list) from the base to each vertex.
    tree_paths: Vec<Vec<usize>>,
    base: usize,
    origins: Vec<usize>,
}

impl Pi1 {
    fn new(g: &SerreGraph) -> Result<Self> {
        let tree = g.tree()?;
        let mut in_tree = vec![false; g.edge_count()];
        for &d in &tree.darts {
            in_tree[d / 2] = true;
        }
        let generator_edges: Vec<usize> = (0..g.edge_count()).filter(|&e| !in_tree[e]).collect();
        let mut generator_of_edge = vec![None; g.edge_count()];
        for (k, &e) in generator_edges.iter().enumerate() {
            generator_of_edge[e] = Some(k);
        }
        let mut tree_paths = vec![Vec::new(); g.vertex_count()];
        for &d in &tree.darts {
            let mut p = tree_paths[g.origin(d)].clone();
            p.push(d);
            tree_paths[g.terminus(d)] = p;
        }
        debug_assert!(tree.parent[g.base].is_none());
        Ok(Pi1 {
            presentation: Presentation::new(default_names(generator_edges.len()), Vec::new())?,
            generator_edges,
            generator_of_edge,
            tree_darts: tree.darts,
            tree_paths,
            base: g.base,
            origins: (0..g.dart_count()).map(|d| g.origin(d)).collect(),
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn rank(&self) -> usize {
        self.generator_edges.len()
    }

    pub fn generator_edges(&self) -> &[usize] {
        &self.generator_edges
    }

    pub fn tree_darts(&self) -> &[usize] {
        &self.tree_darts
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.generator_of_edge[e].is_none()
    }

    /// Letter read along a dart; tree darts read nothing.
    pub fn dart_letter(&self, d: usize) -> Option<Letter> {
        self.generator_of_edge[d / 2].map(|g| Letter::new(g, d % 2 == 1))
    }

    /// Word read along any dart path (not necessarily closed).
    pub fn path_word(&self, path: &[usize]) -> Word {
        path.iter().filter_map(|&d| self.dart_letter(d)).collect()
    }

    fn terminus(&self, d: usize) -> usize {
        self.origins[d ^ 1]
    }

    /// Word of a closed dart path at the base.
    pub fn loop_word(&self, path: &[usize]) -> Result<Word> {
        let mut at = self.base;
        for &d in path {
            if d >= self.origins.len() || self.origins[d] != at {
                return Err(Error::NotClosedPath);
            }
            at = self.terminus(d);
        }
        if at != self.base {
            return Err(Error::NotClosedPath);
        }
        Ok(self.path_word(path))
    }

    /// Tree path from the base to `v`.
    pub fn tree_path(&self, v: usize) -> &[usize] {
        &self.tree_paths[v]
    }

    /// Reverse of a dart path.
    pub fn reverse_path(path: &[usize]) -> Vec<usize> {
        path.iter().rev().map(|&d| d ^ 1).collect()
    }

    /// Closed dart path at the base representing generator `k`.
    pub fn generator_loop(&self, k: usize) -> Vec<usize> {
        let d = 2 * self.generator_edges[k];
        let mut p = self.tree_paths[self.origins[d]].clone();
        p.push(d);
        p.extend(Self::reverse_path(&self.tree_paths[self.terminus(d)]));
        p
    }
}

/// Free presentation of `pi1(g, base)` together with its loop-word map.
pub fn pi1_presentation(g: &SerreGraph) -> Result<Pi1> {
    g.pi1()
}

pub fn spanning_tree(g: &SerreGraph) -> Result<Vec<usize>> {
    g.spanning_tree()
}
