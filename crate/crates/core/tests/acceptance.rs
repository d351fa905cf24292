//! One PASS/FAIL line per acceptance criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbifund::graph::{decompose_morphism, enumerate_covers, GraphMorphism, SerreGraph};
use orbifund::group::fingerprint::group_fingerprint;
use orbifund::group::low_index::all_subgroups;
use orbifund::groupoid::{FiniteGroupoid, Subgroupoid};
use orbifund::orbispace::corpus::{football, gerbe, pathological, sl2z, teardrop};
use orbifund::orbispace::{
    enumerate_fpr_covers, is_uniformizable, moduli_pi1, orbispace_corpus, OrbiCover, Uniformization,
};
use orbifund::quotient::{doomed_kernel, quotient_pi1_sequence, random_corpus, small_groups, CorpusShape, GroupAction};
use orbifund::{coset_enumerate, Bounds, Budget, Perm, Presentation};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn budget() -> Budget {
    Budget::new(Bounds::default().node_budget)
}

fn moduli_formula() -> Outcome {
    let start = Instant::now();
    let t = coset_enumerate(&moduli_pi1(&sl2z()).unwrap(), &[], 1000).unwrap();
    let elapsed = start.elapsed();
    let fp = group_fingerprint(&moduli_pi1(&pathological()).unwrap(), 4, &mut budget()).unwrap();
    let z4 = coset_enumerate(&moduli_pi1(&pathological()).unwrap(), &[], 1000).unwrap();
    outcome(
        t.index() == 1 && elapsed < Duration::from_secs(1) && fp.abelianization() == "Z/4" && z4.index() == 4,
        format!(
            "amalgam moduli index {} in {elapsed:?}; pathological moduli {} of order {}",
            t.index(),
            fp.abelianization(),
            z4.index()
        ),
    )
}

/// `|G| / |I|` with `I` generated by elements fixing a vertex or stabilizing an edge.
fn brute_cokernel(a: &GroupAction) -> usize {
    let x = a.space();
    let witnesses: Vec<usize> = (1..a.order())
        .filter(|&g| {
            (0..x.vertex_count()).any(|v| a.act_vertex(g, v) == v)
                || (0..x.edge_count()).any(|e| a.act_dart(g, 2 * e) / 2 == e)
        })
        .collect();
    let mut span = BTreeSet::from([0]);
    let mut stack = vec![0];
    while let Some(h) = stack.pop() {
        for &w in &witnesses {
            let k = a.compose(h, w);
            if span.insert(k) {
                stack.push(k);
            }
        }
    }
    a.order() / span.len()
}

fn corpus() -> Vec<GroupAction> {
    random_corpus(2024, 200, CorpusShape::default()).unwrap()
}

fn quotient_sequence(actions: &[GroupAction]) -> Outcome {
    let start = Instant::now();
    let mut agree = 0;
    let mut decided = 0;
    for a in actions {
        let r = quotient_pi1_sequence(a).unwrap();
        let free = Presentation::free(r.quotient_rank);
        let index = coset_enumerate(&free, &r.image_generators, 100_000).unwrap().index();
        if let Some(i) = r.image_index {
            decided += 1;
            if i == index && i == brute_cokernel(a) && r.verdict().is_pass() {
                agree += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        decided == actions.len() && agree == decided && elapsed < Duration::from_secs(60),
        format!("{agree}/{decided} decided instances agree, {} total, {elapsed:?}", actions.len()),
    )
}

fn doomed_loops(actions: &[GroupAction]) -> Outcome {
    let (mut inside, mut certified, mut failed) = (0, 0, 0);
    for a in actions {
        let r = doomed_kernel(a, 12).unwrap();
        inside += usize::from(r.doomed_in_kernel().is_pass());
        certified += usize::from(r.kernel_in_doomed().is_pass());
        failed += usize::from(r.kernel_in_doomed().is_fail());
    }
    let n = actions.len();
    outcome(
        inside == n && failed == 0 && certified * 10 >= n * 9,
        format!("doomed in kernel {inside}/{n}; kernel in doomed certified {certified}/{n}, failed {failed}"),
    )
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn transitive(n: usize, a: &[usize], b: &[usize]) -> bool {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for y in [a[x], b[x]] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn galois_counts() -> Outcome {
    let start = Instant::now();
    let covers = enumerate_covers(&SerreGraph::rose(2), 4, &mut budget()).unwrap();
    let mut counted = [0usize; 5];
    for c in &covers {
        counted[c.cover.degree()] += c.conjugates;
    }
    let mut brute = [0usize; 5];
    let mut factorial = 1;
    for n in 1..=4 {
        let perms = permutations(n);
        let pairs = perms
            .iter()
            .flat_map(|a| perms.iter().map(move |b| (a, b)))
            .filter(|(a, b)| transitive(n, a, b))
            .count();
        // a subgroup of index n is a transitive pair up to relabelling the non-base points
        brute[n] = pairs / factorial;
        factorial *= n;
    }
    let elapsed = start.elapsed();
    outcome(
        counted[1..] == [1, 3, 13, 71] && counted == brute && elapsed < Duration::from_secs(30),
        format!("engine {:?}, brute force {:?}, {elapsed:?}", &counted[1..], &brute[1..]),
    )
}

fn fpr_bijection() -> Outcome {
    let mut ok = 0;
    let corpus = orbispace_corpus().unwrap();
    for (_, o) in &corpus {
        let r = enumerate_fpr_covers(o, 4, &mut budget()).unwrap();
        ok += usize::from(r.verdict().is_pass() && r.fpr_counts == r.moduli_counts);
    }
    outcome(ok == corpus.len() && corpus.len() == 10, format!("{ok}/{} instances agree per index", corpus.len()))
}

fn uniformizability() -> Outcome {
    let bounds = Bounds::default();
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, o) in [("teardrop", teardrop(3)), ("gerbe", gerbe(2))] {
        let start = Instant::now();
        let r = is_uniformizable(&o, 12, bounds).unwrap();
        let fast = start.elapsed() < Duration::from_secs(1);
        let no = matches!(&r, Uniformization::No(w) if !w.element.is_identity());
        pass &= no && fast;
        notes.push(format!("{name} {}", if no { "no" } else { "?" }));
    }
    for n in 2..=4 {
        let r = is_uniformizable(&football(n), 12, bounds).unwrap();
        let yes = matches!(&r, Uniformization::Yes(c) if c.index() == n && c.is_schematic());
        pass &= yes;
        notes.push(format!("football({n},{n}) {}", if yes { "yes" } else { "?" }));
    }
    outcome(pass, notes.join(", "))
}

fn pullback_identity() -> Outcome {
    let (mut checked, mut bad) = (0usize, 0usize);
    for (_, o) in orbispace_corpus().unwrap() {
        for t in all_subgroups(o.pi1(), 4, &mut budget()).unwrap() {
            let c = OrbiCover::new(o.clone(), t).unwrap();
            for (i, m) in o.markings().iter().enumerate() {
                let images = m.element_images().unwrap();
                for coset in 0..c.index() {
                    let brute: BTreeSet<Perm> = images
                        .iter()
                        .filter(|(_, w)| w.letters().iter().fold(coset, |x, &l| c.table().act(x, l)) == coset)
                        .map(|(p, _)| p.clone())
                        .collect();
                    let got: BTreeSet<Perm> =
                        c.hidden_group_at(i, coset).unwrap().elements().unwrap().iter().cloned().collect();
                    checked += 1;
                    bad += usize::from(brute != got);
                }
            }
        }
    }
    outcome(bad == 0 && checked > 0, format!("{checked} points checked, {bad} mismatches"))
}

/// A cover of a random graph with closed walks and pendant edges glued on at the base.
fn random_morphism(rng: &mut ChaCha8Rng) -> GraphMorphism {
    loop {
        let n = rng.gen_range(1..=4);
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        for _ in 0..rng.gen_range(1..=3) {
            edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
        let x = SerreGraph::new(n, edges.clone(), 0).unwrap();
        let d = rng.gen_range(1..=3);
        let sheets: Vec<Vec<usize>> = edges
            .iter()
            .map(|_| {
                let mut p: Vec<usize> = (0..d).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        let mut vmap: Vec<usize> = (0..n * d).map(|y| y / d).collect();
        let mut ys: Vec<(usize, usize)> = Vec::new();
        let mut dmap = Vec::new();
        for (e, &(u, v)) in edges.iter().enumerate() {
            for i in 0..d {
                ys.push((u * d + i, v * d + sheets[e][i]));
                dmap.extend([2 * e, 2 * e + 1]);
            }
        }
        if !SerreGraph::new(n * d, ys.clone(), 0).unwrap().is_connected() {
            continue;
        }
        let mut add = |ys: &mut Vec<(usize, usize)>, vmap: &mut Vec<usize>, from: usize, to: Option<usize>, dart: usize| {
            let target = match to {
                Some(t) => t,
                None => {
                    vmap.push(x.terminus(dart));
                    vmap.len() - 1
                }
            };
            ys.push((from, target));
            dmap.extend([dart, dart ^ 1]);
            target
        };
        for _ in 0..rng.gen_range(0..=2) {
            // a closed walk at the base: random steps, then home along tree edges
            let mut walk = Vec::new();
            let mut at = 0;
            for _ in 0..rng.gen_range(1..=4) {
                let d = *x.star(at).choose(rng).unwrap();
                walk.push(d);
                at = x.terminus(d);
            }
            let tree = x.pi1().unwrap();
            walk.extend(tree.tree_path(at).iter().rev().map(|&d| d ^ 1));
            let mut y = 0;
            for (k, &dart) in walk.iter().enumerate() {
                let last = k + 1 == walk.len();
                y = add(&mut ys, &mut vmap, y, last.then_some(0), dart);
            }
        }
        for _ in 0..rng.gen_range(0..=2) {
            let y = rng.gen_range(0..vmap.len());
            let dart = *x.star(vmap[y]).choose(rng).unwrap();
            add(&mut ys, &mut vmap, y, None, dart);
        }
        let y = SerreGraph::new(vmap.len(), ys, 0).unwrap();
        return GraphMorphism::new(y, x, vmap, dmap).unwrap();
    }
}

fn factorization() -> Outcome {
    let mut good = 0;
    for i in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xFAC7 + i);
        let f = random_morphism(&mut rng);
        let Ok(dec) = decompose_morphism(&f, 64) else { continue };
        let p = dec.p.projection();
        let darts = (0..f.source().dart_count()).all(|d| p.dart(dec.g.dart(d)) == f.dart(d));
        let vertices = (0..f.source().vertex_count()).all(|v| p.vertex(dec.g.vertex(v)) == f.vertex(v));
        // index of the image by coset enumeration: equal to the degree iff g is surjective
        let xp = f.target().pi1().unwrap();
        let index = coset_enumerate(xp.presentation(), &f.pi1_images().unwrap(), 10_000)
            .unwrap()
            .index();
        if darts && vertices && index == dec.p.degree() && dec.verdict().is_pass() {
            good += 1;
        }
    }
    outcome(good == 50, format!("{good}/50 morphisms factor exactly"))
}

/// Groupoid axioms checked from the tables alone.
fn axioms_hold(g: &FiniteGroupoid) -> bool {
    let n = g.arrow_count();
    (0..n).all(|a| {
        let (s, t) = (g.source(a), g.target(a));
        g.compose(g.identity(s), a) == Some(a)
            && g.compose(a, g.identity(t)) == Some(a)
            && g.compose(a, g.inverse(a)) == Some(g.identity(s))
            && (0..n).all(|b| g.compose(a, b).is_some() == (t == g.source(b)))
            && (0..n).all(|b| {
                g.compose(a, b).is_none()
                    || (0..n).all(|c| match (g.compose(a, b), g.compose(b, c)) {
                        (Some(ab), Some(bc)) => g.compose(ab, c) == g.compose(a, bc),
                        _ => true,
                    })
            })
    })
}

/// Closed under composition, inverses and endpoint identities, and under conjugation.
fn is_normal_subset(g: &FiniteGroupoid, s: &BTreeSet<usize>) -> bool {
    s.iter().all(|&a| {
        s.contains(&g.inverse(a))
            && s.contains(&g.identity(g.source(a)))
            && s.contains(&g.identity(g.target(a)))
            && s.iter().all(|&b| g.compose(a, b).is_none_or(|c| s.contains(&c)))
            && (g.source(a) != g.target(a)
                || (0..g.arrow_count()).all(|c| match g.compose(c, a).and_then(|ca| g.compose(ca, g.inverse(c))) {
                    Some(x) => s.contains(&x),
                    None => true,
                }))
    })
}

fn groupoid_corpus() -> Vec<FiniteGroupoid> {
    let mut out = Vec::new();
    for (_, g) in small_groups() {
        out.push(FiniteGroupoid::from_group(&g).unwrap());
    }
    for n in 1..=4 {
        out.push(FiniteGroupoid::pair(n).unwrap());
    }
    let groups = small_groups();
    let by_name = |name: &str| groups.iter().find(|(n, _)| *n == name).unwrap().1.clone();
    out.push(FiniteGroupoid::pair_times_group(2, &by_name("C2")).unwrap());
    out.push(FiniteGroupoid::pair_times_group(2, &by_name("C3")).unwrap());
    out.push(FiniteGroupoid::pair_times_group(2, &by_name("S3")).unwrap());
    out.push(FiniteGroupoid::pair_times_group(3, &by_name("C2")).unwrap());
    let parts = [FiniteGroupoid::pair(2).unwrap(), FiniteGroupoid::from_group(&by_name("C3")).unwrap()];
    out.push(FiniteGroupoid::disjoint_union(&parts).unwrap());
    let parts = [FiniteGroupoid::pair(2).unwrap(), FiniteGroupoid::pair(2).unwrap()];
    out.push(FiniteGroupoid::disjoint_union(&parts).unwrap());
    out
}

fn groupoids() -> Outcome {
    let corpus = groupoid_corpus();
    let mut failures = Vec::new();
    let mut minimal_checked = 0;
    for (k, g) in corpus.iter().enumerate() {
        assert!(g.object_count() <= 4 && g.arrow_count() <= 24);
        if !axioms_hold(g) {
            failures.push(format!("axioms #{k}"));
        }
        let n = g.arrow_count();
        let mut seeds: Vec<Vec<usize>> = (0..n).map(|a| vec![a]).collect();
        if n <= 12 {
            seeds.extend((0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])));
        }
        // every normal subset, on the smallest instances
        let normals: Option<Vec<BTreeSet<usize>>> = (n <= 12).then(|| {
            (0u32..1 << n)
                .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<BTreeSet<usize>>())
                .filter(|s| is_normal_subset(g, s))
                .collect()
        });
        for seed in &seeds {
            let s = Subgroupoid::generated(g, seed.iter().copied());
            let c = s.normal_closure();
            let closure: BTreeSet<usize> = c.arrows().clone();
            let ok = c.is_normal()
                && is_normal_subset(g, &closure)
                && seed.iter().all(|a| closure.contains(a))
                && c.normal_closure().arrows() == c.arrows()
                && Subgroupoid::generated(g, seed[..1].iter().copied()).normal_closure().is_subset_of(&c);
            if !ok {
                failures.push(format!("closure #{k} {seed:?}"));
            }
            if let Some(normals) = &normals {
                minimal_checked += 1;
                let containing: Vec<&BTreeSet<usize>> =
                    normals.iter().filter(|m| seed.iter().all(|a| m.contains(a))).collect();
                let smallest = containing.iter().all(|m| closure.is_subset(m)) && containing.contains(&&closure);
                if !smallest {
                    failures.push(format!("minimality #{k} {seed:?}"));
                }
            }
        }
        if let Some(normals) = &normals {
            // conjugation along any arrow carries one local group onto the other
            for m in normals {
                for a in 0..n {
                    let (x1, x2) = (g.source(a), g.target(a));
                    let local = |x: usize| -> BTreeSet<usize> {
                        m.iter().copied().filter(|&b| g.source(b) == x && g.target(b) == x).collect()
                    };
                    let moved: BTreeSet<usize> = local(x1)
                        .into_iter()
                        .map(|b| g.compose(g.compose(g.inverse(a), b).unwrap(), a).unwrap())
                        .collect();
                    if moved != local(x2) {
                        failures.push(format!("local groups #{k}"));
                    }
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} groupoids, {minimal_checked} seeds checked for minimality{}",
            corpus.len(),
            if failures.is_empty() { String::new() } else { format!("; failures {failures:?}") }
        ),
    )
}

fn main() -> ExitCode {
    let actions = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("moduli formula", Box::new(moduli_formula)),
        ("quotient exact sequence", Box::new(|| quotient_sequence(&actions))),
        ("doomed loops kernel", Box::new(|| doomed_loops(&actions))),
        ("Galois correspondence counts", Box::new(galois_counts)),
        ("FPR and moduli bijection", Box::new(fpr_bijection)),
        ("uniformizability", Box::new(uniformizability)),
        ("pullback identity", Box::new(pullback_identity)),
        ("factorization", Box::new(factorization)),
        ("groupoid axioms and normal closure", Box::new(groupoids)),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.pass;
        println!("criterion {} {}: {name} ({})", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
