//! Shared helpers and brute-force oracles.
//!
//! The oracles work on the plain string-keyed [`Instance`] and reuse none
//! of the engine: rewriting follows the operation definitions literally
//! over every fold order, every operation assignment and every choice, and
//! admissibility is checked straight from the birth and merge equations.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use foldext::genset::{CandidateGraph, EdgeEnds, Label, LabeledEdge};
use foldext::io::{generate_instance, parse_instance, GeneratorParams};
use foldext::{FoldLabel, Instance, Sign, ValidatedInstance};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn fixture(name: &str) -> Instance {
    parse_instance(&fixture_text(name)).unwrap()
}

pub fn validated(name: &str) -> ValidatedInstance {
    ValidatedInstance::new(fixture(name)).unwrap()
}

pub const FIXTURES: &[&str] = &[
    "sphere.json",
    "pinched-sphere.json",
    "double-pinched-sphere.json",
    "chain-crossing.json",
    "two-circles.json",
];

/// Edge `(plus, minus)` to label bits (1 = a, 2 = b).
pub type Graph = BTreeMap<(String, String), u8>;

pub fn add(g: &mut Graph, plus: &str, minus: &str, bits: u8) {
    *g.entry((plus.to_owned(), minus.to_owned())).or_insert(0) |= bits;
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Every graph reachable by processing the II folds in `order` with
/// operations `ops`, trying every available choice at each step.
fn run_schedule(g: &Graph, folds: &[(String, String)], order: &[usize], ops: &[u8], out: &mut BTreeSet<Graph>) {
    let Some((&f, rest)) = order.split_first() else {
        out.insert(g.clone());
        return;
    };
    let op = ops[f];
    let (v, w) = (&folds[f].0, &folds[f].1);
    let edges: Vec<(String, String)> = g.keys().cloned().collect();
    if op == 1 {
        for (_, m1) in edges.iter().filter(|(p, _)| p == v) {
            for (p2, _) in edges.iter().filter(|(_, m)| m == w) {
                // (v, v') ends at m1, (w', w) starts at p2
                if v != p2 && m1 != w {
                    let mut h = g.clone();
                    add(&mut h, p2, m1, 2);
                    run_schedule(&h, folds, rest, ops, out);
                }
            }
        }
    } else {
        for (p, m) in &edges {
            // (w', v') = (p, m)
            if v != p && w != m {
                let mut h = g.clone();
                add(&mut h, v, m, 2);
                add(&mut h, p, w, 2);
                run_schedule(&h, folds, rest, ops, out);
            }
        }
    }
}

/// The generated set by exhaustion over orderings, operation choices and
/// edge choices. Branches with no available choice are dropped.
pub fn oracle_generated_set(inst: &Instance) -> BTreeSet<Graph> {
    let mut start = Graph::new();
    for f in inst.folds.iter().filter(|f| f.label == FoldLabel::I) {
        add(&mut start, &f.plus_end, &f.minus_end, 1);
    }
    let folds: Vec<(String, String)> = inst
        .folds
        .iter()
        .filter(|f| f.label == FoldLabel::II)
        .map(|f| (f.plus_end.clone(), f.minus_end.clone()))
        .collect();
    let idx: Vec<usize> = (0..folds.len()).collect();
    let mut out = BTreeSet::new();
    for order in permutations(&idx) {
        for mask in 0..(1u32 << folds.len()) {
            let ops: Vec<u8> = (0..folds.len()).map(|i| if mask >> i & 1 == 1 { 2 } else { 1 }).collect();
            run_schedule(&start, &folds, &order, &ops, &mut out);
        }
    }
    out
}

pub fn to_graph(inst: &ValidatedInstance, g: &CandidateGraph) -> Graph {
    g.edges()
        .map(|e| {
            (
                (inst.vertex_id(e.ends.plus).to_owned(), inst.vertex_id(e.ends.minus).to_owned()),
                e.label.bits(),
            )
        })
        .collect()
}

pub fn from_graph(inst: &ValidatedInstance, g: &Graph) -> CandidateGraph {
    CandidateGraph::from_edges(
        inst.vertex_count(),
        g.iter().map(|((p, m), bits)| LabeledEdge {
            ends: EdgeEnds::new(inst.vertex_by_id(p).unwrap(), inst.vertex_by_id(m).unwrap()),
            label: match bits {
                1 => Label::A,
                2 => Label::B,
                _ => Label::AB,
            },
        }),
    )
}

pub type Assignment = BTreeMap<String, BTreeSet<(String, String)>>;

/// Every perfect matching of the sheets over `gamma` by edges of `h`.
fn matchings(inst: &Instance, h: &Graph, gamma: &[String]) -> Vec<BTreeSet<(String, String)>> {
    let sign = |id: &str| inst.vertex(id).unwrap().sign;
    let plus: Vec<&String> = gamma.iter().filter(|s| sign(s) == Sign::Plus).collect();
    let minus: Vec<&String> = gamma.iter().filter(|s| sign(s) == Sign::Minus).collect();
    let mut out = Vec::new();
    fn rec(
        h: &Graph,
        plus: &[&String],
        minus: &[&String],
        used: &mut Vec<bool>,
        cur: &mut BTreeSet<(String, String)>,
        out: &mut Vec<BTreeSet<(String, String)>>,
    ) {
        let Some((p, rest)) = plus.split_first() else {
            out.push(cur.clone());
            return;
        };
        for (j, m) in minus.iter().enumerate() {
            let e = ((*p).clone(), (*m).clone());
            if !used[j] && h.contains_key(&e) {
                used[j] = true;
                cur.insert(e.clone());
                rec(h, rest, minus, used, cur, out);
                cur.remove(&e);
                used[j] = false;
            }
        }
    }
    if plus.len() == minus.len() {
        rec(h, &plus, &minus, &mut vec![false; minus.len()], &mut BTreeSet::new(), &mut out);
    }
    out
}

/// Birth or merge across one arc, read from the definition.
pub fn oracle_transition(
    h: &Graph,
    v: &str,
    w: &str,
    large: &BTreeSet<(String, String)>,
    small: &BTreeSet<(String, String)>,
) -> bool {
    let has = |p: &str, m: &str, bit: u8| h.get(&(p.to_owned(), m.to_owned())).is_some_and(|l| l & bit != 0);
    let born = (v.to_owned(), w.to_owned());
    let mut with_born = small.clone();
    let birth = with_born.insert(born.clone()) && with_born == *large && has(v, w, 1);
    if birth {
        return true;
    }
    for (p1, m1) in large.iter().filter(|(p, _)| p == v) {
        for (p2, m2) in large.iter().filter(|(_, m)| m == w) {
            if (p1, m1) == (p2, m2) {
                continue;
            }
            let mut s = large.clone();
            s.remove(&(p1.clone(), m1.clone()));
            s.remove(&(p2.clone(), m2.clone()));
            let merged = (p2.clone(), m1.clone());
            s.insert(merged.clone());
            if s == *small && has(&merged.0, &merged.1, 2) {
                return true;
            }
        }
    }
    false
}

fn arc_ok(inst: &Instance, h: &Graph, arc: &foldext::AdjacencyArc, a: &Assignment) -> bool {
    let gi: BTreeSet<&String> = inst.region(&arc.inner).unwrap().gamma.iter().collect();
    let go: BTreeSet<&String> = inst.region(&arc.outer).unwrap().gamma.iter().collect();
    let (large_id, small_id, extra) = if gi.len() > go.len() {
        (&arc.inner, &arc.outer, gi.difference(&go).cloned().collect::<Vec<_>>())
    } else {
        (&arc.outer, &arc.inner, go.difference(&gi).cloned().collect::<Vec<_>>())
    };
    let sign = |id: &str| inst.vertex(id).unwrap().sign;
    let v = extra.iter().find(|s| sign(s) == Sign::Plus).unwrap();
    let w = extra.iter().find(|s| sign(s) == Sign::Minus).unwrap();
    oracle_transition(h, v, w, &a[large_id], &a[small_id])
}

/// All admissible assignments for `h`, at most `cap`: every combination of
/// per-region perfect matchings, abandoned as soon as an arc between two
/// assigned regions fails.
pub fn oracle_assignments(inst: &Instance, h: &Graph, cap: usize) -> Vec<Assignment> {
    let regions: Vec<&foldext::Region> = inst.regions.iter().collect();
    let options: Vec<Vec<BTreeSet<(String, String)>>> =
        regions.iter().map(|r| matchings(inst, h, &r.gamma)).collect();
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        inst: &Instance,
        h: &Graph,
        regions: &[&foldext::Region],
        options: &[Vec<BTreeSet<(String, String)>>],
        k: usize,
        cur: &mut Assignment,
        out: &mut Vec<Assignment>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if k == regions.len() {
            out.push(cur.clone());
            return;
        }
        for m in &options[k] {
            cur.insert(regions[k].id.clone(), m.clone());
            let ok = inst.arcs.iter().all(|a| {
                !(cur.contains_key(&a.inner) && cur.contains_key(&a.outer)) || arc_ok(inst, h, a, cur)
            });
            if ok {
                rec(inst, h, regions, options, k + 1, cur, out, cap);
            }
            cur.remove(&regions[k].id);
        }
    }
    rec(inst, h, &regions, &options, 0, &mut Assignment::new(), &mut out, cap);
    out
}

/// True when some generated graph admits an admissible assignment.
pub fn oracle_extendable(inst: &Instance) -> bool {
    oracle_generated_set(inst)
        .iter()
        .any(|h| !oracle_assignments(inst, h, 1).is_empty())
}

/// Checks an assignment against the definition without the engine.
pub fn oracle_admissible(inst: &Instance, h: &Graph, a: &Assignment) -> bool {
    let sign = |id: &str| inst.vertex(id).map(|v| v.sign);
    for r in &inst.regions {
        let Some(m) = a.get(&r.id) else { return false };
        let gamma: BTreeSet<&String> = r.gamma.iter().collect();
        let mut seen = BTreeSet::new();
        for (p, q) in m {
            if !h.contains_key(&(p.clone(), q.clone()))
                || !gamma.contains(p)
                || !gamma.contains(q)
                || sign(p) != Some(Sign::Plus)
                || sign(q) != Some(Sign::Minus)
                || !seen.insert(p)
                || !seen.insert(q)
            {
                return false;
            }
        }
        if seen.len() != gamma.len() {
            return false;
        }
    }
    inst.arcs.iter().all(|arc| arc_ok(inst, h, arc, a))
}

pub fn delta_to_assignment(inst: &ValidatedInstance, d: &foldext::admissible::DeltaAssignment) -> Assignment {
    d.iter()
        .map(|(r, m)| {
            (
                inst.region(r).id.clone(),
                m.iter()
                    .map(|e| (inst.vertex_id(e.plus).to_owned(), inst.vertex_id(e.minus).to_owned()))
                    .collect(),
            )
        })
        .collect()
}

/// Parameters for the small corpus used by the oracle comparisons.
pub fn small_params(seed: u64) -> GeneratorParams {
    GeneratorParams {
        seed,
        max_nesting_depth: 4,
        max_siblings_per_level: 2,
        ii_fold_probability: 0.6,
        allow_double_points: seed.is_multiple_of(3),
        shrink_probability: 0.5,
        max_folds: 4,
        max_sheets: 6,
    }
}

pub fn within_bounds(inst: &Instance) -> bool {
    inst.vertices.len() <= 6 && inst.folds.len() <= 4 && inst.regions.len() <= 6
}

/// The first `n` seeds' instances that fit the oracle bounds.
pub fn small_corpus(n: usize) -> Vec<(u64, Instance)> {
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < n {
        let inst = generate_instance(&small_params(seed)).unwrap();
        if within_bounds(&inst) {
            out.push((seed, inst));
        }
        seed += 1;
    }
    out
}
