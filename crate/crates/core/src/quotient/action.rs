//! Finite groups acting on Serre graphs by automorphisms.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::graph::morphism::GraphMorphism;
use crate::graph::serre::{GraphJson, SerreGraph};
use crate::group::perm::{FinitePermGroup, Perm};
use crate::group::word::Word;
use crate::{Error, Result};

/// Largest group whose element table is built.
pub const MAX_ACTION_ORDER: u128 = 10_000;

/// A finite group acting on the left on a Serre graph.
///
/// Elements are indexed in breadth-first order over the generators, with the identity
/// at index 0. Element `g` moves vertex `v` to `act_vertex(g, v)` and
/// `compose(a, b)` is the element acting as `b` first, then `a`.
#[derive(Debug, Clone)]
pub struct GroupAction {
    group: FinitePermGroup,
    elements: Vec<Perm>,
    words: Vec<Word>,
    index: HashMap<Perm, usize>,
    compose: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    space: SerreGraph,
    vertex: Vec<Vec<usize>>,
    dart: Vec<Vec<usize>>,
}

/// Generators of the acting group, as image lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionGroupJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub generators: Vec<Vec<usize>>,
}

/// Wire form of an action. Maps are keyed by generator index; `vertex_action` sends
/// vertex names to vertex names and `dart_action` sends edge ids to the dart name
/// (`"e"` or `"-e"`) of the image of the edge's forward dart. Missing edges in
/// `dart_action` are inferred from the vertex action when that is unambiguous.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionJson {
    pub graph: GraphJson,
    pub group: ActionGroupJson,
    pub vertex_action: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub dart_action: BTreeMap<String, BTreeMap<String, String>>,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidAction(msg.into()))
}

fn is_bijection(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    map.iter().all(|&x| x < map.len() && !std::mem::replace(&mut seen[x], true))
}

/// Forward dart image of every edge, inferred from a vertex map.
fn infer_darts(g: &SerreGraph, vmap: &[usize], explicit: &[Option<usize>]) -> Result<Vec<usize>> {
    let mut by_ends: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        by_ends.entry((u, v)).or_default().push(2 * e);
        if u != v {
            by_ends.entry((v, u)).or_default().push(2 * e + 1);
        } else {
            by_ends.entry((u, u)).or_default().push(2 * e + 1);
        }
    }
    let mut darts = vec![0; g.dart_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let d = match explicit[e] {
            Some(d) => d,
            None => match by_ends.get(&(vmap[u], vmap[v])).map(Vec::as_slice) {
                Some(&[d]) => d,
                _ => return invalid(format!("dart image of edge `{}` is ambiguous", g.edge_names()[e])),
            },
        };
        darts[2 * e] = d;
        darts[2 * e + 1] = d ^ 1;
    }
    Ok(darts)
}

impl GroupAction {
    /// Builds the action from generator data: `vertex_maps[i][v]` and `dart_maps[i][d]`
    /// are the images under generator `i`.
    pub fn new(
        group: FinitePermGroup,
        space: SerreGraph,
        vertex_maps: Vec<Vec<usize>>,
        dart_maps: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let ngens = group.generators().len();
        if vertex_maps.len() != ngens || dart_maps.len() != ngens {
            return invalid("one vertex map and one dart map per generator required");
        }
        if group.order() > MAX_ACTION_ORDER {
            return Err(Error::TooLarge {
                order: group.order(),
                cap: MAX_ACTION_ORDER as usize,
            });
        }
        for (i, (vm, dm)) in vertex_maps.iter().zip(&dart_maps).enumerate() {
            if vm.len() != space.vertex_count() || !is_bijection(vm) {
                return invalid(format!("generator {i} does not permute the vertices"));
            }
            if dm.len() != space.dart_count() || !is_bijection(dm) {
                return invalid(format!("generator {i} does not permute the darts"));
            }
            for d in 0..space.dart_count() {
                if dm[d ^ 1] != dm[d] ^ 1 {
                    return invalid(format!("generator {i} does not commute with reversal"));
                }
                if space.origin(dm[d]) != vm[space.origin(d)] {
                    return invalid(format!("generator {i} does not respect the origin of {}", space.dart_name(d)));
                }
            }
        }
        let ew = group.element_words()?;
        let index: HashMap<Perm, usize> = ew.iter().enumerate().map(|(i, (p, _))| (p.clone(), i)).collect();
        let (elements, words): (Vec<Perm>, Vec<Word>) = ew.into_iter().unzip();
        let n = elements.len();
        // Maps along the breadth-first words, then verified on every element/generator pair.
        let mut vertex: Vec<Option<Vec<usize>>> = vec![None; n];
        let mut dart: Vec<Option<Vec<usize>>> = vec![None; n];
        vertex[0] = Some((0..space.vertex_count()).collect());
        dart[0] = Some((0..space.dart_count()).collect());
        for e in 0..n {
            let (ve, de) = (vertex[e].clone().unwrap(), dart[e].clone().unwrap());
            for (s, g) in group.generators().iter().enumerate() {
                let f = index[&elements[e].then(g)];
                let vf: Vec<usize> = ve.iter().map(|&x| vertex_maps[s][x]).collect();
                let df: Vec<usize> = de.iter().map(|&x| dart_maps[s][x]).collect();
                match (&vertex[f], &dart[f]) {
                    (Some(v0), Some(d0)) => {
                        if *v0 != vf || *d0 != df {
                            return invalid("generator data does not define a homomorphism");
                        }
                    }
                    _ => {
                        vertex[f] = Some(vf);
                        dart[f] = Some(df);
                    }
                }
            }
        }
        let compose = (0..n)
            .map(|a| (0..n).map(|b| index[&elements[b].then(&elements[a])]).collect())
            .collect();
        let inverse = elements.iter().map(|p| index[&p.inverse()]).collect();
        let generators = group.generators().iter().map(|g| index[g]).collect();
        Ok(GroupAction {
            group,
            elements,
            words,
            index,
            compose,
            inverse,
            generators,
            space,
            vertex: vertex.into_iter().map(Option::unwrap).collect(),
            dart: dart.into_iter().map(Option::unwrap).collect(),
        })
    }

    /// Action with dart images inferred from vertex images (graphs without ambiguous
    /// parallel edges or loops).
    pub fn from_vertex_maps(group: FinitePermGroup, space: SerreGraph, vertex_maps: Vec<Vec<usize>>) -> Result<Self> {
        let none = vec![None; space.edge_count()];
        let dart_maps = vertex_maps
            .iter()
            .map(|vm| {
                if vm.len() != space.vertex_count() {
                    return invalid("vertex map has the wrong length");
                }
                infer_darts(&space, vm, &none)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, space, vertex_maps, dart_maps)
    }

    /// The trivial group acting on `space`.
    pub fn trivial(space: SerreGraph) -> Self {
        Self::new(FinitePermGroup::trivial(1), space, Vec::new(), Vec::new()).unwrap()
    }

    pub fn from_json(json: &ActionJson) -> Result<Self> {
        let space = SerreGraph::from_json(&json.graph)?;
        let degree = json
            .group
            .degree
            .or_else(|| json.group.generators.first().map(Vec::len))
            .unwrap_or(1);
        let gens = json
            .group
            .generators
            .iter()
            .map(|g| {
                if g.len() != degree {
                    return Err(Error::InvalidPermutation(format!("{g:?} does not have degree {degree}")));
                }
                Perm::from_images(g.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        let ngens = gens.len();
        for key in json.vertex_action.keys().chain(json.dart_action.keys()) {
            if key.parse::<usize>().map_or(true, |i| i >= ngens) {
                return invalid(format!("unknown generator key `{key}`"));
            }
        }
        let vertex_of = |name: &str| {
            space
                .vertex_by_name(name)
                .ok_or_else(|| Error::InvalidAction(format!("unknown vertex `{name}`")))
        };
        let mut vertex_maps = Vec::with_capacity(ngens);
        let mut dart_maps = Vec::with_capacity(ngens);
        for i in 0..ngens {
            let key = i.to_string();
            let vm = match json.vertex_action.get(&key) {
                Some(m) => {
                    let mut out = vec![None; space.vertex_count()];
                    for (from, to) in m {
                        out[vertex_of(from)?] = Some(vertex_of(to)?);
                    }
                    out.into_iter()
                        .enumerate()
                        .map(|(v, x)| {
                            x.ok_or_else(|| {
                                Error::InvalidAction(format!(
                                    "generator {i} has no image for vertex `{}`",
                                    space.vertex_names()[v]
                                ))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?
                }
                None => return invalid(format!("generator {i} has no vertex action")),
            };
            let mut explicit = vec![None; space.edge_count()];
            if let Some(m) = json.dart_action.get(&key) {
                for (from, to) in m {
                    let d = space
                        .dart_by_name(from)
                        .filter(|d| d % 2 == 0)
                        .ok_or_else(|| Error::InvalidAction(format!("unknown edge `{from}`")))?;
                    let image = space
                        .dart_by_name(to)
                        .ok_or_else(|| Error::InvalidAction(format!("unknown dart `{to}`")))?;
                    explicit[d / 2] = Some(image);
                }
            }
            dart_maps.push(infer_darts(&space, &vm, &explicit)?);
            vertex_maps.push(vm);
        }
        let group = FinitePermGroup::new(degree, gens)?;
        Self::new(group, space, vertex_maps, dart_maps)
    }

    pub fn to_json(&self) -> ActionJson {
        let g = &self.space;
        let mut vertex_action = BTreeMap::new();
        let mut dart_action = BTreeMap::new();
        for (i, &s) in self.generators.iter().enumerate() {
            let vm = (0..g.vertex_count())
                .map(|v| (g.vertex_names()[v].clone(), g.vertex_names()[self.vertex[s][v]].clone()))
                .collect();
            let dm = (0..g.edge_count())
                .map(|e| (g.edge_names()[e].clone(), g.dart_name(self.dart[s][2 * e])))
                .collect();
            vertex_action.insert(i.to_string(), vm);
            dart_action.insert(i.to_string(), dm);
        }
        ActionJson {
            graph: g.to_json(),
            group: ActionGroupJson {
                degree: Some(self.group.degree()),
                generators: self.group.generators().iter().map(|p| p.to_vec()).collect(),
            },
            vertex_action,
            dart_action,
        }
    }

    pub fn group(&self) -> &FinitePermGroup {
        &self.group
    }

    pub fn space(&self) -> &SerreGraph {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, g: usize) -> &Perm {
        &self.elements[g]
    }

    pub fn element_index(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Shortest word in the group generators for element `g`.
    pub fn element_word(&self, g: usize) -> &Word {
        &self.words[g]
    }

    /// Element indices of the group generators.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// `a` after `b`.
    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.compose[a][b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn act_vertex(&self, g: usize, v: usize) -> usize {
        self.vertex[g][v]
    }

    pub fn act_dart(&self, g: usize, d: usize) -> usize {
        self.dart[g][d]
    }

    pub fn act_path(&self, g: usize, path: &[usize]) -> Vec<usize> {
        path.iter().map(|&d| self.dart[g][d]).collect()
    }

    pub fn stabilizer(&self, v: usize) -> Vec<usize> {
        (0..self.order()).filter(|&g| self.vertex[g][v] == v).collect()
    }

    /// Orbit of each vertex, labelled by the smallest vertex in it.
    pub fn vertex_orbit_labels(&self) -> Vec<usize> {
        (0..self.space.vertex_count())
            .map(|v| (0..self.order()).map(|g| self.vertex[g][v]).min().unwrap())
            .collect()
    }

    /// Edges mapped to their own reverse by some element.
    pub fn inverted_edges(&self) -> Vec<usize> {
        (0..self.space.edge_count())
            .filter(|&e| (0..self.order()).any(|g| self.dart[g][2 * e] == 2 * e + 1))
            .collect()
    }

    pub fn is_free(&self) -> bool {
        (1..self.order()).all(|g| {
            (0..self.space.vertex_count()).all(|v| self.vertex[g][v] != v)
                && (0..self.space.edge_count()).all(|e| self.dart[g][2 * e] / 2 != e)
        })
    }
}

/// Cancels adjacent dart/reverse pairs.
pub fn reduce_path(path: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(path.len());
    for &d in path {
        if out.last() == Some(&(d ^ 1)) {
            out.pop();
        } else {
            out.push(d);
        }
    }
    out
}

/// Barycentric subdivision of the inverted edges, with the induced action.
#[derive(Debug, Clone)]
pub struct Subdivision {
    original: GroupAction,
    action: GroupAction,
    /// Midpoint vertex of each subdivided edge.
    midpoint: Vec<Option<usize>>,
    /// First new edge of each original edge; subdivided edges own two consecutive ids.
    first_edge: Vec<usize>,
    /// Original dart and half (0 for the half at the origin) of each new edge.
    source_edge: Vec<(usize, usize)>,
}

impl Subdivision {
    pub fn new(a: &GroupAction) -> Result<Self> {
        let g = a.space();
        let mut flagged = vec![false; g.edge_count()];
        for e in a.inverted_edges() {
            flagged[e] = true;
        }
        let mut vnames = g.vertex_names().to_vec();
        let mut midpoint = vec![None; g.edge_count()];
        let mut enames = Vec::new();
        let mut edges = Vec::new();
        let mut first_edge = Vec::with_capacity(g.edge_count());
        let mut source_edge = Vec::new();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            first_edge.push(edges.len());
            let name = &g.edge_names()[e];
            if flagged[e] {
                let m = vnames.len();
                vnames.push(format!("{name}.m"));
                midpoint[e] = Some(m);
                enames.push(format!("{name}.a"));
                edges.push((u, m));
                source_edge.push((e, 0));
                enames.push(format!("{name}.b"));
                edges.push((m, v));
                source_edge.push((e, 1));
            } else {
                enames.push(name.clone());
                edges.push((u, v));
                source_edge.push((e, 0));
            }
        }
        let space = SerreGraph::with_names(vnames, enames, edges, g.base())?;
        let mut vertex_maps = Vec::new();
        let mut dart_maps = Vec::new();
        for &s in a.generators() {
            let mut vm: Vec<usize> = (0..g.vertex_count()).map(|v| a.act_vertex(s, v)).collect();
            vm.resize(space.vertex_count(), 0);
            let mut dm = vec![0; space.dart_count()];
            for e in 0..g.edge_count() {
                let image = a.act_dart(s, 2 * e);
                let (e2, rev) = (image / 2, image % 2 == 1);
                let (f, f2) = (first_edge[e], first_edge[e2]);
                if let Some(m) = midpoint[e] {
                    vm[m] = midpoint[e2].unwrap();
                    if rev {
                        dm[2 * f] = 2 * (f2 + 1) + 1;
                        dm[2 * (f + 1)] = 2 * f2 + 1;
                    } else {
                        dm[2 * f] = 2 * f2;
                        dm[2 * (f + 1)] = 2 * (f2 + 1);
                    }
                } else {
                    dm[2 * f] = 2 * f2 + rev as usize;
                }
            }
            for e in 0..space.edge_count() {
                dm[2 * e + 1] = dm[2 * e] ^ 1;
            }
            vertex_maps.push(vm);
            dart_maps.push(dm);
        }
        let action = GroupAction::new(a.group().clone(), space, vertex_maps, dart_maps)?;
        Ok(Subdivision {
            original: a.clone(),
            action,
            midpoint,
            first_edge,
            source_edge,
        })
    }

    pub fn original(&self) -> &GroupAction {
        &self.original
    }

    /// The action on the subdivided graph, which inverts no edge.
    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn midpoint(&self, e: usize) -> Option<usize> {
        self.midpoint[e]
    }

    pub fn is_trivial(&self) -> bool {
        self.midpoint.iter().all(Option::is_none)
    }

    /// Image of a dart path of the original graph.
    pub fn push_path(&self, path: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(path.len());
        for &d in path {
            let f = self.first_edge[d / 2];
            match (self.midpoint[d / 2].is_some(), d % 2 == 1) {
                (false, rev) => out.push(2 * f + rev as usize),
                (true, false) => out.extend([2 * f, 2 * (f + 1)]),
                (true, true) => out.extend([2 * (f + 1) + 1, 2 * f + 1]),
            }
        }
        out
    }

    /// Original path of a subdivided path between original vertices.
    pub fn pull_path(&self, path: &[usize]) -> Result<Vec<usize>> {
        let path = reduce_path(path);
        let mut out = Vec::with_capacity(path.len());
        let mut i = 0;
        while i < path.len() {
            let d = path[i];
            let (e, half) = self.source_edge[d / 2];
            if self.midpoint[e].is_none() {
                out.push(2 * e + d % 2);
                i += 1;
                continue;
            }
            let next = path.get(i + 1).copied();
            let f = self.first_edge[e];
            match (half, d % 2, next) {
                (0, 0, Some(n)) if n == 2 * (f + 1) => out.push(2 * e),
                (1, 1, Some(n)) if n == 2 * f + 1 => out.push(2 * e + 1),
                _ => return Err(Error::InvalidGraph("path stops at an edge midpoint".into())),
            }
            i += 2;
        }
        Ok(out)
    }
}

/// Orbit graph of an action without inversions.
#[derive(Debug, Clone)]
pub struct QuotientGraph {
    pub subdivision: Subdivision,
    pub graph: SerreGraph,
    /// Orbit map from the subdivided graph.
    pub projection: GraphMorphism,
    pub vertex_orbits: Vec<Vec<usize>>,
    pub edge_orbits: Vec<Vec<usize>>,
}

impl QuotientGraph {
    /// A vertex of the subdivided graph over each quotient vertex.
    pub fn vertex_reps(&self) -> Vec<usize> {
        self.vertex_orbits.iter().map(|o| o[0]).collect()
    }
}

/// Quotient of the space by the group, after subdividing inverted edges.
pub fn quotient_graph(a: &GroupAction) -> Result<QuotientGraph> {
    let subdivision = Subdivision::new(a)?;
    let act = subdivision.action();
    let x = act.space();
    let labels = act.vertex_orbit_labels();
    let mut orbit_id = vec![usize::MAX; x.vertex_count()];
    let mut vertex_orbits: Vec<Vec<usize>> = Vec::new();
    for v in 0..x.vertex_count() {
        if orbit_id[labels[v]] == usize::MAX {
            orbit_id[labels[v]] = vertex_orbits.len();
            vertex_orbits.push(Vec::new());
        }
        orbit_id[v] = orbit_id[labels[v]];
        vertex_orbits[orbit_id[v]].push(v);
    }
    let mut dart_image = vec![usize::MAX; x.dart_count()];
    let mut edge_orbits: Vec<Vec<usize>> = Vec::new();
    let mut qedges = Vec::new();
    let mut qenames = Vec::new();
    for e in 0..x.edge_count() {
        if dart_image[2 * e] != usize::MAX {
            continue;
        }
        let q = edge_orbits.len();
        let mut members = Vec::new();
        for g in 0..act.order() {
            let d = act.act_dart(g, 2 * e);
            if dart_image[d] == usize::MAX {
                dart_image[d] = 2 * q;
                dart_image[d ^ 1] = 2 * q + 1;
                members.push(d / 2);
            } else if dart_image[d] != 2 * q {
                return Err(Error::InvalidAction("action inverts an edge".into()));
            }
        }
        members.sort_unstable();
        edge_orbits.push(members);
        let (u, v) = x.edges()[e];
        qedges.push((orbit_id[u], orbit_id[v]));
        qenames.push(x.edge_names()[e].clone());
    }
    let qvnames = vertex_orbits.iter().map(|o| x.vertex_names()[o[0]].clone()).collect();
    let graph = SerreGraph::with_names(qvnames, qenames, qedges, orbit_id[x.base()])?;
    let projection = GraphMorphism::new(x.clone(), graph.clone(), orbit_id, dart_image)?;
    Ok(QuotientGraph {
        subdivision,
        graph,
        projection,
        vertex_orbits,
        edge_orbits,
    })
}

/// Where a witness element has its fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPoint {
    Vertex(usize),
    /// The edge is mapped to itself; `reversed` when the fixed point is its midpoint only.
    Edge { edge: usize, reversed: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub element: usize,
    pub fixed: FixedPoint,
}

/// The subgroup generated by elements with a fixed point.
#[derive(Debug, Clone)]
pub struct FixedPointSubgroup {
    pub witnesses: Vec<Witness>,
    /// Member element indices, sorted.
    pub members: Vec<usize>,
    pub group: FinitePermGroup,
}

impl FixedPointSubgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }
}

/// Fixed point of `g`, preferring vertices.
pub fn fixed_point(a: &GroupAction, g: usize) -> Option<FixedPoint> {
    let x = a.space();
    if let Some(v) = (0..x.vertex_count()).find(|&v| a.act_vertex(g, v) == v) {
        return Some(FixedPoint::Vertex(v));
    }
    (0..x.edge_count())
        .find(|&e| a.act_dart(g, 2 * e) / 2 == e)
        .map(|e| FixedPoint::Edge {
            edge: e,
            reversed: a.act_dart(g, 2 * e) != 2 * e,
        })
}

pub fn fixed_point_subgroup(a: &GroupAction) -> FixedPointSubgroup {
    let witnesses: Vec<Witness> = (1..a.order())
        .filter_map(|g| fixed_point(a, g).map(|fixed| Witness { element: g, fixed }))
        .collect();
    let group = a
        .group()
        .subgroup(witnesses.iter().map(|w| a.element(w.element).clone()).collect())
        .expect("witnesses are group elements");
    let members = (0..a.order()).filter(|&g| group.contains(a.element(g))).collect();
    FixedPointSubgroup {
        witnesses,
        members,
        group,
    }
}
