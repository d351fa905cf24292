//! Finite groupoids stored as explicit tables.
//!
//! Composition is written left to right: `a·b` is defined exactly when
//! `target(a) = source(b)` and means "first `a`, then `b`".

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::group::perm::{FinitePermGroup, Perm};
use crate::{Error, Result};

/// Largest groupoid accepted by the constructors.
pub const MAX_ARROWS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    inv: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    identity: Vec<usize>,
}

/// Wire form of a groupoid; arrow ids and object names are free-form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidJson {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    pub compose: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub id: usize,
    pub src: String,
    pub tgt: String,
    pub inv: usize,
}

impl FiniteGroupoid {
    /// Validates the groupoid axioms exhaustively.
    pub fn new(
        objects: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        inv: Vec<usize>,
        compose: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        let n = src.len();
        let bad = |m: &str| Err(Error::InvalidGroupoid(m.to_string()));
        if n > MAX_ARROWS {
            return bad("too many arrows");
        }
        if tgt.len() != n || inv.len() != n {
            return bad("source, target and inverse maps differ in length");
        }
        if src.iter().chain(tgt.iter()).any(|&o| o >= objects.len()) {
            return bad("arrow endpoint is not an object");
        }
        if inv.iter().any(|&i| i >= n) {
            return bad("inverse is not an arrow");
        }
        let mut table = HashMap::new();
        for (a, b, c) in compose {
            if a >= n || b >= n || c >= n {
                return bad("composition refers to a missing arrow");
            }
            if tgt[a] != src[b] {
                return bad("composition defined for non-composable arrows");
            }
            if src[c] != src[a] || tgt[c] != tgt[b] {
                return bad("composite has wrong endpoints");
            }
            if table.insert((a, b), c).is_some_and(|old| old != c) {
                return bad("composition is not a function");
            }
        }
        for a in 0..n {
            for b in 0..n {
                if tgt[a] == src[b] && !table.contains_key(&(a, b)) {
                    return bad("composition undefined for composable arrows");
                }
            }
        }
        let mut g = FiniteGroupoid {
            objects,
            src,
            tgt,
            inv,
            compose: table,
            identity: Vec::new(),
        };
        g.identity = (0..g.objects.len())
            .map(|x| {
                (0..n)
                    .find(|&e| g.src[e] == x && g.tgt[e] == x && g.compose[&(e, e)] == e)
                    .ok_or_else(|| Error::InvalidGroupoid(format!("object {x} has no identity")))
            })
            .collect::<Result<_>>()?;
        g.check_laws()?;
        Ok(g)
    }

    fn check_laws(&self) -> Result<()> {
        let n = self.arrow_count();
        let bad = |m: &str| Err(Error::InvalidGroupoid(m.to_string()));
        for a in 0..n {
            let (ia, ib) = (self.identity[self.src[a]], self.identity[self.tgt[a]]);
            if self.compose[&(ia, a)] != a || self.compose[&(a, ib)] != a {
                return bad("identity law fails");
            }
            let i = self.inv[a];
            if self.src[i] != self.tgt[a] || self.compose[&(a, i)] != ia || self.compose[&(i, a)] != ib {
                return bad("inverse law fails");
            }
        }
        for (&(a, b), &ab) in &self.compose {
            for c in self.out_arrows(self.tgt[b]) {
                let bc = self.compose[&(b, c)];
                if self.compose[&(ab, c)] != self.compose[&(a, bc)] {
                    return bad("composition is not associative");
                }
            }
        }
        Ok(())
    }

    /// The group viewed as a one-object groupoid; arrows are the elements in
    /// enumeration order.
    pub fn from_group(group: &FinitePermGroup) -> Result<Self> {
        Self::pair_times_group(1, group)
    }

    /// Codiscrete groupoid on `n` objects: exactly one arrow between any two objects.
    pub fn pair(n: usize) -> Result<Self> {
        Self::pair_times_group(n, &FinitePermGroup::trivial(1))
    }

    /// Product of the codiscrete groupoid on `n` objects with a group: arrows are triples
    /// `(i, j, g)` from `i` to `j`.
    pub fn pair_times_group(n: usize, group: &FinitePermGroup) -> Result<Self> {
        let elems = group.elements()?.to_vec();
        let m = elems.len();
        let pos: HashMap<&Perm, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let id = |i: usize, j: usize, g: usize| (i * n + j) * m + g;
        let count = n * n * m;
        let (mut src, mut tgt, mut inv) = (vec![0; count], vec![0; count], vec![0; count]);
        let mut compose = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for g in 0..m {
                    let a = id(i, j, g);
                    src[a] = i;
                    tgt[a] = j;
                    inv[a] = id(j, i, pos[&elems[g].inverse()]);
                    for k in 0..n {
                        for h in 0..m {
                            compose.push((a, id(j, k, h), id(i, k, pos[&elems[g].then(&elems[h])])));
                        }
                    }
                }
            }
        }
        let objects = (0..n).map(|i| format!("x{i}")).collect();
        Self::new(objects, src, tgt, inv, compose)
    }

    /// Disjoint union; arrows of later summands are numbered after earlier ones.
    pub fn disjoint_union(parts: &[FiniteGroupoid]) -> Result<Self> {
        let (mut objects, mut src, mut tgt, mut inv, mut compose) = (vec![], vec![], vec![], vec![], vec![]);
        for (k, p) in parts.iter().enumerate() {
            let (o, a) = (objects.len(), src.len());
            objects.extend(p.objects.iter().map(|x| format!("{x}.{k}")));
            src.extend(p.src.iter().map(|x| x + o));
            tgt.extend(p.tgt.iter().map(|x| x + o));
            inv.extend(p.inv.iter().map(|x| x + a));
            compose.extend(p.compose.iter().map(|(&(x, y), &z)| (x + a, y + a, z + a)));
        }
        Self::new(objects, src, tgt, inv, compose)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow_count(&self) -> usize {
        self.src.len()
    }

    pub fn source(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn target(&self, a: usize) -> usize {
        self.tgt[a]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    /// `a` then `b`, when composable.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.compose.get(&(a, b)).copied()
    }

    pub fn out_arrows(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrow_count()).filter(move |&a| self.src[a] == x)
    }

    pub fn loops(&self, x: usize) -> Vec<usize> {
        (0..self.arrow_count())
            .filter(|&a| self.src[a] == x && self.tgt[a] == x)
            .collect()
    }

    fn check_object(&self, x: usize) -> Result<()> {
        if x < self.object_count() {
            Ok(())
        } else {
            Err(Error::UnknownObject(x))
        }
    }

    /// Automorphism group at `x`, as the right regular representation on its arrows.
    pub fn vertex_group(&self, x: usize) -> Result<FinitePermGroup> {
        self.check_object(x)?;
        let loops = self.loops(x);
        let pos: HashMap<usize, usize> = loops.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let perm_of = |a: usize| {
            Perm::from_images(loops.iter().map(|&b| pos[&self.compose[&(b, a)]]).collect()).unwrap()
        };
        let mut gens: Vec<Perm> = Vec::new();
        let mut group = FinitePermGroup::trivial(loops.len());
        for &a in &loops {
            let p = perm_of(a);
            if !group.contains(&p) {
                gens.push(p);
                group = FinitePermGroup::new(loops.len(), gens.clone())?;
            }
        }
        Ok(group)
    }

    /// Connected component label of every object.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.object_count()];
        let mut next = 0;
        for x in 0..self.object_count() {
            if comp[x] == usize::MAX {
                for a in self.out_arrows(x) {
                    comp[self.tgt[a]] = next;
                }
                comp[x] = next;
                next += 1;
            }
        }
        comp
    }

    pub fn from_json(json: &GroupoidJson) -> Result<Self> {
        let obj: HashMap<&str, usize> = json.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        if obj.len() != json.objects.len() {
            return Err(Error::InvalidGroupoid("duplicate object".into()));
        }
        let idx: HashMap<usize, usize> = json.arrows.iter().enumerate().map(|(i, a)| (a.id, i)).collect();
        if idx.len() != json.arrows.len() {
            return Err(Error::InvalidGroupoid("duplicate arrow id".into()));
        }
        let arrow = |id: usize| {
            idx.get(&id)
                .copied()
                .ok_or_else(|| Error::InvalidGroupoid(format!("unknown arrow {id}")))
        };
        let object = |name: &str| {
            obj.get(name)
                .copied()
                .ok_or_else(|| Error::InvalidGroupoid(format!("unknown object `{name}`")))
        };
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        let mut inv = Vec::new();
        for a in &json.arrows {
            src.push(object(&a.src)?);
            tgt.push(object(&a.tgt)?);
            inv.push(arrow(a.inv)?);
        }
        let compose = json
            .compose
            .iter()
            .map(|[a, b, c]| Ok((arrow(*a)?, arrow(*b)?, arrow(*c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.objects.clone(), src, tgt, inv, compose)
    }

    pub fn to_json(&self) -> GroupoidJson {
        let mut compose: Vec<[usize; 3]> = self.compose.iter().map(|(&(a, b), &c)| [a, b, c]).collect();
        compose.sort();
        GroupoidJson {
            objects: self.objects.clone(),
            arrows: (0..self.arrow_count())
                .map(|a| ArrowJson {
                    id: a,
                    src: self.objects[self.src[a]].clone(),
                    tgt: self.objects[self.tgt[a]].clone(),
                    inv: self.inv[a],
                })
                .collect(),
            compose,
        }
    }
}

/// A set of arrows closed under composition and inverses, containing the identities of
/// the objects it touches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroupoid<'g> {
    parent: &'g FiniteGroupoid,
    arrows: BTreeSet<usize>,
}

impl<'g> Subgroupoid<'g> {
    pub fn new(parent: &'g FiniteGroupoid, arrows: impl IntoIterator<Item = usize>) -> Result<Self> {
        let arrows: BTreeSet<usize> = arrows.into_iter().collect();
        if arrows.iter().any(|&a| a >= parent.arrow_count()) {
            return Err(Error::InvalidGroupoid("arrow out of range".into()));
        }
        let s = Subgroupoid { parent, arrows };
        if !s.is_closed() {
            return Err(Error::NotASubgroup);
        }
        Ok(s)
    }

    /// Smallest subgroupoid containing `seeds`.
    pub fn generated(parent: &'g FiniteGroupoid, seeds: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Subgroupoid {
            parent,
            arrows: seeds.into_iter().collect(),
        };
        s.close(false);
        s
    }

    /// All identities.
    pub fn identities(parent: &'g FiniteGroupoid) -> Self {
        Subgroupoid {
            parent,
            arrows: (0..parent.object_count()).map(|x| parent.identity(x)).collect(),
        }
    }

    pub fn full(parent: &'g FiniteGroupoid) -> Self {
        Subgroupoid {
            parent,
            arrows: (0..parent.arrow_count()).collect(),
        }
    }

    pub fn parent(&self) -> &'g FiniteGroupoid {
        self.parent
    }

    pub fn arrows(&self) -> &BTreeSet<usize> {
        &self.arrows
    }

    pub fn contains(&self, a: usize) -> bool {
        self.arrows.contains(&a)
    }

    /// Arrows of the subgroupoid that are loops at `x`.
    pub fn local_group(&self, x: usize) -> BTreeSet<usize> {
        self.arrows
            .iter()
            .copied()
            .filter(|&a| self.parent.source(a) == x && self.parent.target(a) == x)
            .collect()
    }

    fn is_closed(&self) -> bool {
        let g = self.parent;
        self.arrows.iter().all(|&a| {
            self.contains(g.inverse(a))
                && self.contains(g.identity(g.source(a)))
                && self
                    .arrows
                    .iter()
                    .all(|&b| g.compose(a, b).is_none_or(|c| self.contains(c)))
        })
    }

    /// Closes under inverses, identities and composition, and under conjugation when
    /// `normal` is set.
    fn close(&mut self, normal: bool) {
        let g = self.parent;
        loop {
            let mut add = BTreeSet::new();
            for &a in &self.arrows {
                add.insert(g.inverse(a));
                add.insert(g.identity(g.source(a)));
                add.insert(g.identity(g.target(a)));
                for &b in &self.arrows {
                    if let Some(c) = g.compose(a, b) {
                        add.insert(c);
                    }
                }
                if normal && g.source(a) == g.target(a) {
                    // c^-1 · a · c for every c leaving the base of a
                    for c in g.out_arrows(g.source(a)) {
                        let conj = g.compose(g.compose(g.inverse(c), a).unwrap(), c).unwrap();
                        add.insert(conj);
                    }
                }
            }
            let before = self.arrows.len();
            self.arrows.extend(add);
            if self.arrows.len() == before {
                return;
            }
        }
    }

    /// `a·b·a^-1 ∈ s` for every `b ∈ s` and every arrow `a` for which it is defined.
    pub fn is_normal(&self) -> bool {
        let g = self.parent;
        self.arrows.iter().all(|&b| {
            (0..g.arrow_count()).all(|a| match g.compose(a, b).and_then(|ab| g.compose(ab, g.inverse(a))) {
                Some(c) => self.contains(c),
                None => true,
            })
        })
    }

    pub fn normal_closure(&self) -> Subgroupoid<'g> {
        let mut s = self.clone();
        s.close(true);
        s
    }

    pub fn is_subset_of(&self, other: &Subgroupoid) -> bool {
        self.arrows.is_subset(&other.arrows)
    }
}

pub fn vertex_group(g: &FiniteGroupoid, x: usize) -> Result<FinitePermGroup> {
    g.vertex_group(x)
}

pub fn is_normal_subgroupoid(s: &Subgroupoid) -> bool {
    s.is_normal()
}

pub fn normal_closure_groupoid<'g>(s: &Subgroupoid<'g>) -> Subgroupoid<'g> {
    s.normal_closure()
}

/// A finite set with a distinguished element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointedSet {
    pub size: usize,
    pub base: usize,
    /// Class of each arrow out of the base object, in arrow order.
    pub class_of: Vec<(usize, usize)>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Quotient of the arrows leaving `base` by the relation generated by
/// `r ~ r·n` (for `n` in the normal closure of the stabilizer family at the target of
/// `r`) and by the explicit `fiber_links` between arrows.
///
/// `family[x]` must be a subgroup of the vertex group at `x`.
pub fn component_quotient_mx(
    g: &FiniteGroupoid,
    base: usize,
    family: &[Vec<usize>],
    fiber_links: &[(usize, usize)],
) -> Result<PointedSet> {
    g.check_object(base)?;
    if family.len() != g.object_count() {
        return Err(Error::UnknownObject(family.len()));
    }
    let mut seeds = Vec::new();
    for (x, members) in family.iter().enumerate() {
        for &a in members {
            if a >= g.arrow_count() || g.source(a) != x || g.target(a) != x {
                return Err(Error::NotASubgroup);
            }
        }
        let s = Subgroupoid::generated(g, members.iter().copied().chain([g.identity(x)]));
        if s.local_group(x).len() != members.iter().chain([&g.identity(x)]).collect::<BTreeSet<_>>().len() {
            return Err(Error::NotASubgroup);
        }
        seeds.extend(members.iter().copied());
    }
    let closure = Subgroupoid::generated(g, seeds).normal_closure();
    let mut uf = UnionFind((0..g.arrow_count()).collect());
    for r in 0..g.arrow_count() {
        for &n in &closure.local_group(g.target(r)) {
            uf.union(r, g.compose(r, n).unwrap());
        }
    }
    for &(a, b) in fiber_links {
        uf.union(a, b);
    }
    let out: Vec<usize> = g.out_arrows(base).collect();
    let mut label: HashMap<usize, usize> = HashMap::new();
    let base_root = uf.find(g.identity(base));
    label.insert(base_root, 0);
    let mut class_of = Vec::new();
    for a in out {
        let r = uf.find(a);
        let next = label.len();
        let c = *label.entry(r).or_insert(next);
        class_of.push((a, c));
    }
    Ok(PointedSet {
        size: label.len(),
        base: 0,
        class_of,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FinitePermGroup {
        FinitePermGroup::symmetric(3)
    }

    fn arrow_of(g: &FiniteGroupoid, group: &FinitePermGroup, p: &Perm) -> usize {
        let elems = group.elements().unwrap();
        let _ = g;
        elems.iter().position(|e| e == p).unwrap()
    }

    #[test]
    fn vertex_groups() {
        let z4 = FiniteGroupoid::from_group(&FinitePermGroup::cyclic(4)).unwrap();
        assert_eq!(z4.vertex_group(0).unwrap().order(), 4);
        let pair = FiniteGroupoid::pair(2).unwrap();
        assert_eq!(pair.arrow_count(), 4);
        assert_eq!(pair.vertex_group(1).unwrap().order(), 1);
        let both = FiniteGroupoid::disjoint_union(&[z4, pair]).unwrap();
        assert_eq!(both.vertex_group(0).unwrap().order(), 4);
        assert_eq!(both.vertex_group(2).unwrap().order(), 1);
        assert_eq!(both.vertex_group(9), Err(Error::UnknownObject(9)));
    }

    #[test]
    fn normality_in_s3() {
        let group = s3();
        let g = FiniteGroupoid::from_group(&group).unwrap();
        assert!(Subgroupoid::identities(&g).is_normal());
        assert!(Subgroupoid::full(&g).is_normal());
        let rot = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let a3 = Subgroupoid::generated(&g, [arrow_of(&g, &group, &rot)]);
        assert_eq!(a3.arrows().len(), 3);
        assert!(a3.is_normal());
        let t = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let s = Subgroupoid::generated(&g, [arrow_of(&g, &group, &t)]);
        assert!(!s.is_normal());
        assert_eq!(s.normal_closure(), Subgroupoid::full(&g));
    }

    #[test]
    fn closure_stays_in_component() {
        let group = s3();
        let g = FiniteGroupoid::disjoint_union(&[
            FiniteGroupoid::from_group(&group).unwrap(),
            FiniteGroupoid::pair(2).unwrap(),
        ])
        .unwrap();
        let t = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let s = Subgroupoid::generated(&g, [arrow_of(&g, &group, &t)]);
        let n = s.normal_closure();
        assert!(n.arrows().iter().all(|&a| a < 6));
        assert_eq!(n.arrows().len(), 6);
    }

    #[test]
    fn mx_examples() {
        let z4 = FinitePermGroup::cyclic(4);
        let g = FiniteGroupoid::from_group(&z4).unwrap();
        let trivial = component_quotient_mx(&g, 0, &[vec![]], &[]).unwrap();
        assert_eq!(trivial.size, 4);
        let sq = z4.generators()[0].pow(2);
        let half = component_quotient_mx(&g, 0, &[vec![arrow_of(&g, &z4, &sq)]], &[]).unwrap();
        assert_eq!(half.size, 2);
        let group = s3();
        let g = FiniteGroupoid::from_group(&group).unwrap();
        let t = arrow_of(&g, &group, &Perm::from_cycles(3, &[&[0, 1]]).unwrap());
        let e = arrow_of(&g, &group, &Perm::identity(3));
        assert_eq!(component_quotient_mx(&g, 0, &[vec![e, t]], &[]).unwrap().size, 1);
    }

    #[test]
    fn rejects_non_subgroups() {
        let z4 = FinitePermGroup::cyclic(4);
        let g = FiniteGroupoid::from_group(&z4).unwrap();
        let gen = arrow_of(&g, &z4, &z4.generators()[0]);
        assert_eq!(component_quotient_mx(&g, 0, &[vec![gen]], &[]), Err(Error::NotASubgroup));
    }

    #[test]
    fn json_round_trip() {
        let g = FiniteGroupoid::pair_times_group(2, &FinitePermGroup::cyclic(2)).unwrap();
        let back = FiniteGroupoid::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn constructor_rejects_broken_tables() {
        // one object, two arrows, composition missing
        let r = FiniteGroupoid::new(vec!["x".into()], vec![0, 0], vec![0, 0], vec![0, 1], [(0, 0, 0)]);
        assert!(r.is_err());
    }
}
