//! Doomed loops: the kernel of `pi1(X) -> pi1(X/G)` described by stabilizers.
//!
//! Work happens in the group of pairs `(p, g)` where `p` is a reduced dart path of the
//! subdivided graph from the base `x` to `g(x)`, with product
//! `(p, g)(q, h) = (p · g(q), g h)`. Closed paths with `g = 1` form `pi1(X)`.
//! For a vertex `y`, a generator `s` of its stabilizer and the tree path `T` to `y`,
//! the doomed element is `(T · s(T)^-1, s)`. The kernel is normally generated in
//! `pi1(X)` by the commutators of a free basis with the doomed elements together
//! with the Schreier generators of the subgroup the doomed elements generate.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::action::{reduce_path, GroupAction};
use super::sequence::SequenceData;
use crate::graph::serre::Pi1;
use crate::group::equality::{WordOracle, WordTest};
use crate::group::presentation::Presentation;
use crate::group::tietze::simplify;
use crate::group::word::Word;
use crate::{Bounds, Check, Result, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Arrow {
    path: Vec<usize>,
    g: usize,
}

struct Pairs<'a> {
    a: &'a GroupAction,
}

impl Pairs<'_> {
    fn mul(&self, p: &Arrow, q: &Arrow) -> Arrow {
        let mut path = p.path.clone();
        path.extend(self.a.act_path(p.g, &q.path));
        Arrow {
            path: reduce_path(&path),
            g: self.a.compose(p.g, q.g),
        }
    }

    fn inv(&self, p: &Arrow) -> Arrow {
        let g = self.a.inverse(p.g);
        Arrow {
            path: Pi1::reverse_path(&self.a.act_path(g, &p.path)),
            g,
        }
    }
}

/// One doomed element: a fixed vertex of the subdivided graph and a stabilizer
/// generator there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoomedElement {
    pub vertex: String,
    pub element: usize,
    /// Dart names of the path from the base through the vertex to `element(base)`.
    pub path: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelCertificate {
    /// The kernel is trivial.
    TrivialKernel,
    /// `pi1(X)` modulo the doomed closure simplifies to a free group of the image's rank.
    FreeQuotient { rank: usize },
    /// Every kernel generator was shown trivial modulo the doomed closure.
    Bounded { checked: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct DoomedReport {
    pub doomed_elements: Vec<DoomedElement>,
    /// Normal generators of the doomed loops in `pi1(X)`.
    pub doomed_generators: Vec<Word>,
    /// Normal generators of the kernel from folding the image.
    pub kernel_generators: Vec<Word>,
    pub image_rank: usize,
    pub certificate: Option<KernelCertificate>,
    pub checks: Vec<Check>,
}

impl DoomedReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.checks.iter().map(|c| c.verdict))
    }

    pub fn doomed_in_kernel(&self) -> Verdict {
        self.checks[0].verdict
    }

    pub fn kernel_in_doomed(&self) -> Verdict {
        self.checks[1].verdict
    }
}

/// Greedy generating set of a subgroup given by its member elements.
fn subgroup_generators(a: &GroupAction, members: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span: BTreeSet<usize> = BTreeSet::from([0]);
    for &m in members {
        if span.contains(&m) {
            continue;
        }
        gens.push(m);
        let mut queue: VecDeque<usize> = span.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &s in &gens {
                let y = a.compose(x, s);
                if span.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    gens
}

pub fn doomed_kernel(a: &GroupAction, word_length_bound: usize) -> Result<DoomedReport> {
    let data = SequenceData::new(a)?;
    doomed_kernel_with(&data, word_length_bound)
}

pub fn doomed_kernel_with(data: &SequenceData, word_length_bound: usize) -> Result<DoomedReport> {
    let sub = data.quotient.subdivision.action();
    let x = sub.space();
    let pairs = Pairs { a: sub };
    let pi1 = &data.pi1_subdivided;

    let mut doomed = Vec::new();
    let mut elements = Vec::new();
    for y in 0..x.vertex_count() {
        let tree = pi1.tree_path(y);
        for s in subgroup_generators(sub, &sub.stabilizer(y)) {
            let mut path = tree.to_vec();
            path.extend(Pi1::reverse_path(&sub.act_path(s, tree)));
            elements.push(DoomedElement {
                vertex: x.vertex_names()[y].clone(),
                element: s,
                path: path.iter().map(|&d| x.dart_name(d)).collect(),
            });
            doomed.push(Arrow {
                path: reduce_path(&path),
                g: s,
            });
        }
    }

    let mut loops: Vec<Vec<usize>> = Vec::new();
    // commutators with a free basis
    for k in 0..pi1.rank() {
        let l = Arrow {
            path: pi1.generator_loop(k),
            g: 0,
        };
        let linv = pairs.inv(&l);
        for c in &doomed {
            let comm = pairs.mul(&pairs.mul(&pairs.mul(&l, c), &linv), &pairs.inv(c));
            loops.push(comm.path);
        }
    }
    // Schreier generators of the subgroup generated by the doomed elements
    let mut reps: HashMap<usize, Arrow> = HashMap::from([(0, Arrow { path: Vec::new(), g: 0 })]);
    let mut queue = VecDeque::from([0]);
    while let Some(h) = queue.pop_front() {
        let r = reps[&h].clone();
        for c in &doomed {
            let prod = pairs.mul(&r, c);
            match reps.get(&prod.g) {
                Some(rk) => loops.push(pairs.mul(&prod, &pairs.inv(rk)).path),
                None => {
                    queue.push_back(prod.g);
                    reps.insert(prod.g, prod);
                }
            }
        }
    }
    let mut generators = BTreeSet::new();
    for l in &loops {
        let w = data.subdivided_loop_word(l)?.cyclically_reduced();
        if !w.is_identity() {
            generators.insert(w);
        }
    }
    let mut doomed_generators: Vec<Word> = generators.into_iter().collect();
    doomed_generators.sort_by(|u, v| u.len().cmp(&v.len()).then_with(|| u.cmp(v)));

    let in_kernel = doomed_generators
        .iter()
        .all(|w| w.substitute(&data.images).is_identity());
    let mut checks = vec![Check::new("doomed_in_kernel", Verdict::from_bool(in_kernel), "")];

    let kernel = data.folding.kernel_generators().to_vec();
    let rank = data.folding.rank();
    let space_rank = data.pi1_space.rank();
    let (certificate, verdict, detail) = if kernel.is_empty() {
        (Some(KernelCertificate::TrivialKernel), Verdict::Pass, String::new())
    } else if simplify(space_rank, &doomed_generators).free_rank() == Some(rank) {
        (
            Some(KernelCertificate::FreeQuotient { rank }),
            Verdict::Pass,
            "quotient by doomed loops is free of the image rank".to_string(),
        )
    } else {
        let pres = Presentation::new(data.pi1_space.presentation().names().to_vec(), doomed_generators.clone())?;
        let bounds = Bounds {
            word_length_bound,
            ..Bounds::default()
        };
        let oracle = WordOracle::new(&pres, bounds);
        let mut v = Verdict::Pass;
        for k in &kernel {
            let t = if k.len() > word_length_bound {
                Verdict::Unknown
            } else {
                match oracle.is_trivial(k) {
                    WordTest::Trivial => Verdict::Pass,
                    WordTest::Nontrivial => Verdict::Fail,
                    WordTest::Unknown => Verdict::Unknown,
                }
            };
            v = v.and(t);
        }
        let cert = v.is_pass().then_some(KernelCertificate::Bounded { checked: kernel.len() });
        (cert, v, format!("{} kernel generators checked", kernel.len()))
    };
    checks.push(Check::new("kernel_in_doomed", verdict, detail));
    Ok(DoomedReport {
        doomed_elements: elements,
        doomed_generators,
        kernel_generators: kernel,
        image_rank: rank,
        certificate,
        checks,
    })
}
