//! One function per subcommand, each producing a status, a result document and drawings.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use orbifund::graph::cover::{lift_index, lift_path};
use orbifund::graph::{check_realized_cover, enumerate_covers, monodromy, Pi1, SerreGraph};
use orbifund::group::equality::WordOracle;
use orbifund::group::fingerprint::group_fingerprint;
use orbifund::group::low_index::all_subgroups;
use orbifund::group::tietze::simplify;
use orbifund::orbispace::{
    enumerate_fpr_covers, from_ggraph, galois_sequence_check, is_uniformizable, kill_omega_cover, moduli_pi1,
    moduli_sequence_check, MarkedOrbispace, OrbiCover, Uniformization,
};
use orbifund::quotient::{doomed_kernel, quotient_pi1_sequence, GroupAction, SequenceData};
use orbifund::{Bounds, Budget, Check, Verdict};

use crate::input::{Failure, Input};
use crate::report::{orbicover, presentation, Drawing, Status};

pub struct Ctx {
    pub bounds: Bounds,
    pub max_index: usize,
    pub seed: u64,
}

impl Ctx {
    fn budget(&self) -> Budget {
        Budget::new(self.bounds.node_budget)
    }
}

pub struct Outcome {
    pub status: Status,
    pub result: Value,
    pub drawings: Vec<Drawing>,
}

impl Outcome {
    fn new(status: impl Into<Status>, result: Value) -> Self {
        Outcome {
            status: status.into(),
            result,
            drawings: Vec::new(),
        }
    }

    fn draw(mut self, name: impl Into<String>, dot: String) -> Self {
        self.drawings.push(Drawing { name: name.into(), dot });
        self
    }
}

type Run = Result<Outcome, Failure>;

fn names(g: &SerreGraph, edges: impl Iterator<Item = usize>) -> Vec<String> {
    edges.map(|e| g.edge_names()[e].clone()).collect()
}

fn euler_rank(g: &SerreGraph) -> usize {
    g.edge_count() + 1 - g.vertex_count()
}

pub fn pi1(g: &SerreGraph) -> Run {
    let p = g.pi1()?;
    let tree = names(g, (0..g.edge_count()).filter(|&e| p.is_tree_edge(e)));
    let result = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "rank": p.rank(),
        "presentation": presentation(p.presentation()),
        "generator_edges": names(g, p.generator_edges().iter().copied()),
        "tree_edges": tree,
    });
    let status = Verdict::from_bool(p.rank() == euler_rank(g));
    Ok(Outcome::new(status, result).draw("graph", g.to_dot("graph", None)))
}

pub fn covers(g: &SerreGraph, ctx: &Ctx) -> Run {
    let found = enumerate_covers(g, ctx.max_index, &mut ctx.budget())?;
    let mut counts: BTreeMap<usize, (usize, usize)> = (1..=ctx.max_index).map(|d| (d, (0, 0))).collect();
    let mut list = Vec::new();
    let mut drawings = Vec::new();
    for (i, c) in found.iter().enumerate() {
        let m = monodromy(&c.cover)?;
        let entry = counts.entry(c.cover.degree()).or_default();
        entry.0 += 1;
        entry.1 += c.conjugates;
        let action: Vec<Vec<usize>> = m.action.iter().map(|p| p.images().collect()).collect();
        list.push(json!({
            "degree": c.cover.degree(),
            "conjugates": c.conjugates,
            "galois": m.is_galois,
            "deck_order": m.deck_order as u64,
            "vertices": c.cover.realized().vertex_count(),
            "edges": c.cover.realized().edge_count(),
            "monodromy": action,
        }));
        let name = format!("cover{i}");
        drawings.push(Drawing {
            dot: c.cover.to_dot(&name),
            name,
        });
    }
    let counts: BTreeMap<String, Value> = counts
        .into_iter()
        .map(|(d, (classes, subgroups))| (d.to_string(), json!({ "classes": classes, "subgroups": subgroups })))
        .collect();
    let mut out = Outcome::new(Status::Pass, json!({ "max_degree": ctx.max_index, "counts": counts, "covers": list }));
    out.drawings = drawings;
    Ok(out)
}

pub fn quotient(a: &GroupAction) -> Run {
    let r = quotient_pi1_sequence(a)?;
    let q = SerreGraph::from_json(&r.quotient)?;
    let space = a.space().to_dot("space", Some(&a.vertex_orbit_labels()));
    Ok(Outcome::new(r.verdict(), json!(r))
        .draw("space", space)
        .draw("quotient", q.to_dot("quotient", None)))
}

pub fn doomed(a: &GroupAction, ctx: &Ctx) -> Run {
    let r = doomed_kernel(a, ctx.bounds.word_length_bound)?;
    Ok(Outcome::new(r.verdict(), json!(r)))
}

pub fn moduli(o: &MarkedOrbispace, ctx: &Ctx) -> Run {
    let m = moduli_pi1(o)?;
    let fingerprint = group_fingerprint(&m, ctx.max_index, &mut ctx.budget())?;
    let oracle = WordOracle::new(&m, ctx.bounds);
    let order = oracle.regular().map(|t| t.index());
    let simplified = simplify(m.generator_count(), m.relators());
    let result = json!({
        "presentation": presentation(&m),
        "order": order,
        "free_rank": simplified.free_rank(),
        "fingerprint": fingerprint,
        "trivial_fingerprint": fingerprint.is_trivial_group(),
        "abelianization": fingerprint.abelianization(),
    });
    Ok(Outcome::new(Status::Pass, result))
}

pub fn fpr(o: &MarkedOrbispace, ctx: &Ctx) -> Run {
    let r = enumerate_fpr_covers(o, ctx.max_index, &mut ctx.budget())?;
    Ok(Outcome::new(r.verdict(), json!(r)))
}

pub fn uniformizable(o: &MarkedOrbispace, ctx: &Ctx) -> Run {
    Ok(match is_uniformizable(o, ctx.max_index, ctx.bounds)? {
        Uniformization::Yes(c) => Outcome::new(Status::Yes, json!({ "uniformizable": "yes", "cover": orbicover(&c) })),
        Uniformization::No(w) => {
            let m = &o.markings()[o.marking(&w.marking).expect("witness names a marking")];
            let result = json!({
                "uniformizable": "no",
                "witness": w,
                "element": w.element.display(&m.hidden_names).to_string(),
                "image": w.image.display(o.pi1().names()).to_string(),
            });
            Outcome::new(Status::No, result)
        }
        Uniformization::Unknown => Outcome::new(Status::Unknown, json!({ "uniformizable": "unknown" })),
    })
}

pub fn kill_omega(o: &MarkedOrbispace, ctx: &Ctx) -> Run {
    Ok(match kill_omega_cover(o, ctx.max_index, ctx.bounds)? {
        Some(c) => Outcome::new(Status::Pass, json!({ "cover": orbicover(&c) })),
        None => Outcome::new(Status::Unknown, json!({ "cover": null })),
    })
}

pub fn check(input: &Input, ctx: &Ctx) -> Run {
    let (kind, checks) = match input {
        Input::Graph(g) => ("graph", check_graph(g, ctx)?),
        Input::Action(a) => ("action", check_action(a, ctx)?),
        Input::Orbispace(o) => ("orbispace", check_orbispace(o, ctx)?),
    };
    let verdict = Verdict::all(checks.iter().map(|c| c.verdict));
    Ok(Outcome::new(verdict, json!({ "kind": kind, "checks": checks })))
}

const LOOPS: usize = 32;
const LOOP_STEPS: usize = 10;

/// A random walk from the base closed up along the spanning tree.
fn random_loop(g: &SerreGraph, p: &Pi1, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let stars = g.stars();
    let mut v = g.base();
    let mut path = Vec::new();
    for _ in 0..rng.gen_range(0..=LOOP_STEPS) {
        let star = &stars[v];
        if star.is_empty() {
            break;
        }
        let d = star[rng.gen_range(0..star.len())];
        path.push(d);
        v = g.terminus(d);
    }
    path.extend(Pi1::reverse_path(p.tree_path(v)));
    path
}

fn check_graph(g: &SerreGraph, ctx: &Ctx) -> Result<Vec<Check>, Failure> {
    let p = g.pi1()?;
    let mut checks = vec![Check::new(
        "rank_is_euler_characteristic",
        Verdict::from_bool(p.rank() == euler_rank(g)),
        format!("rank {}", p.rank()),
    )];

    let covers = enumerate_covers(g, ctx.max_index, &mut ctx.budget())?;
    let subgroups = all_subgroups(p.presentation(), ctx.max_index, &mut ctx.budget())?;
    let mut by_index: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for t in &subgroups {
        by_index.entry(t.index()).or_default().0 += 1;
    }
    for c in &covers {
        by_index.entry(c.cover.degree()).or_default().1 += c.conjugates;
    }
    checks.push(Check::new(
        "class_sizes_add_up",
        Verdict::from_bool(by_index.values().all(|(a, b)| a == b)),
        format!("{} subgroups", subgroups.len()),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let loops: Vec<Vec<usize>> = (0..LOOPS).map(|_| random_loop(g, &p, &mut rng)).collect();
    let (mut realized, mut galois, mut fiber, mut lifting) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for c in &covers {
        let cover = &c.cover;
        let m = monodromy(cover)?;
        realized.push(check_realized_cover(cover)?.verdict());
        galois.push(Verdict::from_bool(m.is_galois == cover.table().is_normal()));
        fiber.push(Verdict::from_bool(m.action == cover.table().action()));
        let index = lift_index(cover);
        let start = cover.vertex_at(0, g.base());
        for path in &loops {
            let lifted = lift_path(cover, start, path, &index);
            let end = lifted.last().map_or(start, |&d| cover.realized().terminus(d));
            let word = p.loop_word(path)?;
            lifting.push(Verdict::from_bool((end == start) == cover.table().contains(&word)));
        }
    }
    let n = covers.len();
    checks.push(Check::new("realized_covers_are_covers", Verdict::all(realized), format!("{n} covers")));
    checks.push(Check::new("galois_iff_normal", Verdict::all(galois), ""));
    checks.push(Check::new("fiber_action_is_the_coset_action", Verdict::all(fiber), ""));
    checks.push(Check::new(
        "loops_lift_closed_iff_in_subgroup",
        Verdict::all(lifting),
        format!("{LOOPS} loops"),
    ));
    Ok(checks)
}

fn check_action(a: &GroupAction, ctx: &Ctx) -> Result<Vec<Check>, Failure> {
    let q = quotient_pi1_sequence(a)?;
    let d = doomed_kernel(a, ctx.bounds.word_length_bound)?;
    let mut checks: Vec<Check> = q.checks.clone();
    checks.extend(d.checks.iter().cloned());

    let data = SequenceData::new(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let (mut round_trip, mut image) = (Vec::new(), Vec::new());
    for _ in 0..LOOPS {
        let path = random_loop(a.space(), &data.pi1_space, &mut rng);
        let word = data.pi1_space.loop_word(&path)?;
        let pushed = data.quotient.subdivision.push_path(&path);
        round_trip.push(Verdict::from_bool(data.subdivided_loop_word(&pushed)? == word));
        let below = data.pi1_quotient.loop_word(&data.quotient.projection.map_path(&pushed))?;
        image.push(Verdict::from_bool(data.folding.contains(&below)));
    }
    checks.push(Check::new("subdivision_round_trip", Verdict::all(round_trip), format!("{LOOPS} loops")));
    checks.push(Check::new("loops_push_into_the_image", Verdict::all(image), format!("{LOOPS} loops")));

    let o = from_ggraph(a)?;
    let m = moduli_pi1(&o)?;
    let rank = data.pi1_quotient.rank();
    let ggraph = match simplify(m.generator_count(), m.relators()).free_rank() {
        Some(r) => Check::new("graph_of_groups_moduli_is_free", Verdict::from_bool(r == rank), format!("rank {r}")),
        None => Check::new("graph_of_groups_moduli_is_free", Verdict::Unknown, "not simplified to a free group"),
    };
    checks.push(ggraph);
    Ok(checks)
}

fn check_orbispace(o: &MarkedOrbispace, ctx: &Ctx) -> Result<Vec<Check>, Failure> {
    let r = moduli_sequence_check(o, ctx.bounds)?;
    let mut checks = r.checks.clone();
    if checks.iter().any(|c| c.name == "omega_respects_relations" && c.verdict.is_fail()) {
        // covers need omega to be a homomorphism
        return Ok(checks);
    }
    let f = enumerate_fpr_covers(o, ctx.max_index, &mut ctx.budget())?;
    checks.extend(f.checks.iter().cloned());

    let tables = all_subgroups(o.pi1(), ctx.max_index, &mut ctx.budget())?;
    let (mut partition, mut galois) = (Vec::new(), Vec::new());
    for t in tables {
        let normal = t.is_normal();
        let c = OrbiCover::new(o.clone(), t)?;
        for i in 0..o.markings().len() {
            let covered: usize = c.points(i).iter().map(|p| p.cosets.len()).sum();
            partition.push(Verdict::from_bool(covered == c.index()));
            if normal {
                for p in 0..c.points(i).len() {
                    galois.push(galois_sequence_check(&c, i, p)?.verdict());
                }
            }
        }
    }
    checks.push(Check::new("points_partition_the_fiber", Verdict::all(partition), ""));
    checks.push(Check::new("galois_sequences_exact", Verdict::all(galois), ""));
    Ok(checks)
}
