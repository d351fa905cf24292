//! Lifting morphisms through covers, fiber products, factorization of a morphism into a
//! π₁-surjection followed by a cover, and the exact sequence of a cover.

use std::collections::VecDeque;

use serde::Serialize;

use super::cover::{cover_with_pi1, lift_index, Cover};
use super::morphism::GraphMorphism;
use super::serre::{Pi1, SerreGraph};
use crate::group::folding::Folding;
use crate::group::perm::Perm;
use crate::group::word::Word;
use crate::{Check, Error, Result, Verdict};

/// Outcome of [`lift_morphism`].
#[derive(Debug, Clone)]
pub enum Lift {
    Lifted(GraphMorphism),
    /// A closed dart path at the base of the source whose image leaves the subgroup.
    NoLift { witness: Vec<usize>, image: Word },
}

impl Lift {
    pub fn lifted(self) -> Option<GraphMorphism> {
        match self {
            Lift::Lifted(m) => Some(m),
            Lift::NoLift { .. } => None,
        }
    }
}

fn tree_order(g: &SerreGraph) -> Result<(Vec<usize>, Vec<Option<usize>>)> {
    // vertices in discovery order with the tree dart entering each
    let stars = g.stars();
    let mut parent = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[g.base()] = true;
    let mut order = vec![g.base()];
    let mut queue = VecDeque::from([g.base()]);
    while let Some(v) = queue.pop_front() {
        for &d in &stars[v] {
            let w = g.terminus(d);
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(d);
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    if order.len() != g.vertex_count() {
        return Err(Error::Disconnected);
    }
    Ok((order, parent))
}

fn tree_path(g: &SerreGraph, parent: &[Option<usize>], v: usize) -> Vec<usize> {
    let mut p = Vec::new();
    let mut at = v;
    while let Some(d) = parent[at] {
        p.push(d);
        at = g.origin(d);
    }
    p.reverse();
    p
}

/// Lifts a base-preserving `f: Y -> X` through `c` so that the base of `Y` goes to the
/// vertex over the base of `X` on sheet `sheet`.
pub fn lift_morphism(f: &GraphMorphism, c: &Cover, sheet: usize) -> Result<Lift> {
    let y = f.source();
    if f.target() != c.base_graph() {
        return Err(Error::InvalidMorphism("cover is over a different graph".into()));
    }
    if !f.preserves_base() {
        return Err(Error::InvalidMorphism("morphism does not preserve the base".into()));
    }
    if sheet >= c.degree() {
        return Err(Error::InvalidMorphism("sheet outside the fiber".into()));
    }
    let index = lift_index(c);
    let (order, parent) = tree_order(y)?;
    let real = c.realized();
    let mut vimg = vec![usize::MAX; y.vertex_count()];
    vimg[y.base()] = c.vertex_at(sheet, c.base_graph().base());
    for &v in &order[1..] {
        let d = parent[v].unwrap();
        let lifted = index[&(vimg[y.origin(d)], f.dart(d))];
        vimg[v] = real.terminus(lifted);
    }
    let mut dimg = vec![0; y.dart_count()];
    for d in 0..y.dart_count() {
        let lifted = index[&(vimg[y.origin(d)], f.dart(d))];
        if real.terminus(lifted) != vimg[y.terminus(d)] {
            let mut witness = tree_path(y, &parent, y.origin(d));
            witness.push(d);
            let back = tree_path(y, &parent, y.terminus(d));
            witness.extend(Pi1::reverse_path(&back));
            let image = c.base_graph().pi1()?.loop_word(&f.map_path(&witness))?;
            return Ok(Lift::NoLift { witness, image });
        }
        dimg[d] = lifted;
    }
    let mut realized = real.clone();
    realized = realized.with_base(vimg[y.base()])?;
    Ok(Lift::Lifted(GraphMorphism::new(y.clone(), realized, vimg, dimg)?))
}

/// Fiber product of `f: Y -> X` with a cover of `X`.
#[derive(Debug, Clone)]
pub struct Pullback {
    /// Vertex `(k, y)` has id `k * |V(Y)| + y` and lies over `f(y)` on sheet `k`.
    pub graph: SerreGraph,
    pub projection: GraphMorphism,
    pub components: usize,
    /// Orbits of the image of `π₁(Y)` acting on the sheets.
    pub orbits: usize,
}

pub fn pullback_cover(f: &GraphMorphism, c: &Cover) -> Result<Pullback> {
    let y = f.source();
    let index = lift_index(c);
    let real = c.realized();
    let (ny, n) = (y.vertex_count(), c.degree());
    let nx = c.base_graph().vertex_count();
    let mut vnames = Vec::new();
    let mut vmap = Vec::new();
    for k in 0..n {
        for v in 0..ny {
            vnames.push(format!("{}@{k}", y.vertex_names()[v]));
            vmap.push(v);
        }
    }
    let mut enames = Vec::new();
    let mut edges = Vec::new();
    let mut dmap = Vec::new();
    for k in 0..n {
        for (e, &(u, v)) in y.edges().iter().enumerate() {
            let start = c.vertex_at(k, f.vertex(u));
            let lifted = index[&(start, f.dart(2 * e))];
            let k2 = real.terminus(lifted) / nx;
            enames.push(format!("{}@{k}", y.edge_names()[e]));
            edges.push((k * ny + u, k2 * ny + v));
            dmap.push(2 * e);
            dmap.push(2 * e + 1);
        }
    }
    let graph = SerreGraph::with_names(vnames, enames, edges, y.base())?;
    let projection = GraphMorphism::new(graph.clone(), y.clone(), vmap, dmap)?;
    let components = graph.component_count();
    let images = f.pi1_images()?;
    let perms: Vec<Perm> = images.iter().map(|w| c.table().word_perm(w)).collect();
    let orbits = orbit_count(n, &perms);
    Ok(Pullback {
        graph,
        projection,
        components,
        orbits,
    })
}

fn orbit_count(n: usize, perms: &[Perm]) -> usize {
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for p in perms {
                for j in [p.apply(i), p.inverse().apply(i)] {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
    }
    count
}

/// `f = p ∘ g` with `p` a connected cover and `g` surjective on π₁.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub g: GraphMorphism,
    pub p: Cover,
    pub checks: Vec<Check>,
}

impl Decomposition {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.checks.iter().map(|c| c.verdict))
    }
}

/// Factors a base-preserving morphism of connected graphs through the cover belonging
/// to its π₁-image. Fails when the image has infinite index or index above `max_index`.
pub fn decompose_morphism(f: &GraphMorphism, max_index: usize) -> Result<Decomposition> {
    let x = f.target();
    let xp = x.pi1()?;
    let images = f.pi1_images()?;
    let fold = Folding::of_subgroup(xp.rank(), &images);
    let table = fold.coset_table().ok_or(Error::InfiniteIndexImage)?;
    if table.index() > max_index {
        return Err(Error::IndexBoundExceeded {
            index: table.index(),
            bound: max_index,
        });
    }
    let p = cover_with_pi1(x, &xp, &table)?;
    let g = match lift_morphism(f, &p, 0)? {
        Lift::Lifted(g) => g,
        Lift::NoLift { .. } => return Err(Error::InvalidMorphism("image subgroup failed to lift".into())),
    };
    let composite = g.then(&p.projection().clone())?;
    let mut checks = vec![Check::new(
        "composite equals f",
        Verdict::from_bool(composite.vertex_map() == f.vertex_map() && composite.dart_map() == f.dart_map()),
        "",
    )];
    checks.push(Check::new("p is a covering", Verdict::from_bool(p.is_star_bijective()), ""));
    let up_images = g.pi1_images()?;
    let up_rank = g.target().pi1()?.rank();
    let surj = Folding::of_subgroup(up_rank, &up_images).index() == Some(1);
    checks.push(Check::new(
        "g is surjective on fundamental groups",
        Verdict::from_bool(surj),
        format!("index of image {}", table.index()),
    ));
    Ok(Decomposition { g, p, checks })
}

/// Exactness data for one component of the total space of a cover.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentSequence {
    pub basepoint: usize,
    pub fiber_points: Vec<usize>,
    pub image_index: Option<usize>,
    pub checks: Vec<Check>,
}

/// Report for a covering map `p: Y -> X` with `X` connected and `Y` possibly not.
#[derive(Debug, Clone, Serialize)]
pub struct CoverSequenceReport {
    pub fiber_size: usize,
    pub components: Vec<ComponentSequence>,
    pub checks: Vec<Check>,
}

impl CoverSequenceReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(
            self.checks
                .iter()
                .chain(self.components.iter().flat_map(|c| c.checks.iter()))
                .map(|c| c.verdict),
        )
    }
}

/// Checks `π₀(F) -> π₀(Y) -> π₀(X)` and, per component, that `π₁(Y_i)` injects with
/// image the stabilizer of the chosen basepoint, whose cosets match the orbit.
pub fn check_cover_sequence(p: &GraphMorphism) -> Result<CoverSequenceReport> {
    let (y, x) = (p.source(), p.target());
    let xp = x.pi1()?;
    let mut checks = vec![Check::new("star bijective", Verdict::from_bool(p.is_star_bijective()), "")];
    let fiber: Vec<usize> = (0..y.vertex_count()).filter(|&v| p.vertex(v) == x.base()).collect();
    let pos = |v: usize| fiber.iter().position(|&f| f == v).unwrap();
    // monodromy on the fiber by path lifting
    let stars = y.stars();
    let lift_from = |v: usize, d: usize| stars[v].iter().copied().find(|&e| p.dart(e) == d);
    let mut action = Vec::new();
    for k in 0..xp.rank() {
        let path = xp.generator_loop(k);
        let mut img = Vec::new();
        for &start in &fiber {
            let mut at = start;
            for &d in &path {
                let e = lift_from(at, d).ok_or_else(|| Error::InvalidMorphism("not a covering".into()))?;
                at = y.terminus(e);
            }
            img.push(pos(at));
        }
        action.push(Perm::from_images(img)?);
    }
    let comp = y.components();
    let ncomp = y.component_count();
    let meets: Vec<bool> = (0..ncomp).map(|c| fiber.iter().any(|&v| comp[v] == c)).collect();
    checks.push(Check::new(
        "fiber meets every component",
        Verdict::from_bool(meets.iter().all(|&m| m)),
        format!("{ncomp} components, fiber size {}", fiber.len()),
    ));
    checks.push(Check::new(
        "target connected",
        Verdict::from_bool(x.is_connected()),
        "",
    ));
    let mut components = Vec::new();
    for c in 0..ncomp {
        let members: Vec<usize> = fiber.iter().copied().filter(|&v| comp[v] == c).collect();
        let Some(&basepoint) = members.first() else { continue };
        let orbit = orbit_of(pos(basepoint), &action);
        let orbit_points: Vec<usize> = orbit.iter().map(|&i| fiber[i]).collect();
        let mut cc = vec![Check::new(
            "fiber points in the component form one monodromy orbit",
            Verdict::from_bool({
                let mut a = orbit_points.clone();
                a.sort_unstable();
                a == members
            }),
            "",
        )];
        // restrict to the component
        let (sub, vmap, dmap) = restrict(y, &comp, c, basepoint)?;
        let restricted = GraphMorphism::new(
            sub,
            x.clone(),
            vmap.iter().map(|&v| p.vertex(v)).collect(),
            dmap.iter().map(|&d| p.dart(d)).collect(),
        )?;
        let images = restricted.pi1_images()?;
        let fold = Folding::new(xp.rank(), &images);
        let injective = fold.kernel_generators().is_empty() && fold.rank() == images.len();
        cc.push(Check::new(
            "pi1 of the component injects",
            Verdict::from_bool(injective),
            format!("rank {}", images.len()),
        ));
        let b = pos(basepoint);
        let stabilizes = images.iter().all(|w| Perm::of_word(w, &action, fiber.len()).apply(b) == b);
        let index = fold.index();
        cc.push(Check::new(
            "image is the stabilizer of the basepoint",
            Verdict::from_bool(stabilizes && index == Some(orbit.len())),
            format!("index {:?}, orbit {}", index, orbit.len()),
        ));
        let coset_bijection = fold.coset_table().is_some_and(|t| {
            let reps = t.transversal();
            let mut hit: Vec<usize> = reps
                .iter()
                .map(|w| Perm::of_word(w, &action, fiber.len()).apply(b))
                .collect();
            hit.sort_unstable();
            hit.dedup();
            hit.len() == orbit.len()
        });
        cc.push(Check::new(
            "cosets of the image match the orbit",
            Verdict::from_bool(coset_bijection),
            "",
        ));
        components.push(ComponentSequence {
            basepoint,
            fiber_points: members,
            image_index: index,
            checks: cc,
        });
    }
    Ok(CoverSequenceReport {
        fiber_size: fiber.len(),
        components,
        checks,
    })
}

fn orbit_of(start: usize, perms: &[Perm]) -> Vec<usize> {
    let n = perms.first().map_or(1, |p| p.degree());
    let mut seen = vec![false; n.max(start + 1)];
    seen[start] = true;
    let mut out = vec![start];
    let mut i = 0;
    while i < out.len() {
        let v = out[i];
        for p in perms {
            for w in [p.apply(v), p.inverse().apply(v)] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        i += 1;
    }
    out
}

/// Component `c` of `g` as a graph based at `base`, with maps back to `g`.
pub fn restrict(g: &SerreGraph, comp: &[usize], c: usize, base: usize) -> Result<(SerreGraph, Vec<usize>, Vec<usize>)> {
    let verts: Vec<usize> = (0..g.vertex_count()).filter(|&v| comp[v] == c).collect();
    let mut new_of = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        new_of[v] = i;
    }
    let edges_kept: Vec<usize> = (0..g.edge_count()).filter(|&e| comp[g.edges()[e].0] == c).collect();
    let sub = SerreGraph::with_names(
        verts.iter().map(|&v| g.vertex_names()[v].clone()).collect(),
        edges_kept.iter().map(|&e| g.edge_names()[e].clone()).collect(),
        edges_kept
            .iter()
            .map(|&e| (new_of[g.edges()[e].0], new_of[g.edges()[e].1]))
            .collect(),
        new_of[base],
    )?;
    let dmap = edges_kept.iter().flat_map(|&e| [2 * e, 2 * e + 1]).collect();
    Ok((sub, verts, dmap))
}

/// [`check_cover_sequence`] for a realized cover.
pub fn check_realized_cover(c: &Cover) -> Result<CoverSequenceReport> {
    check_cover_sequence(c.projection())
}
