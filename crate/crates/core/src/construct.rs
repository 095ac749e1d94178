//! Attachment plans: the order in which elementary pieces are glued along
//! fold crossings to build the three-manifold described by a certificate.
//!
//! Regions are attached in [`ValidatedInstance::region_order`]. Attaching a
//! region crosses every arc back to already attached regions. A birth
//! crossing glues a `P_I` piece, a merge crossing a `P_II` piece. At a double
//! point of two II folds whose four surrounding assignments form a chain of
//! three intervals collapsing to one, the two merge crossings of the last
//! attached corner are replaced by a single `P_d` piece.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::admissible::{check_conditions, corners, descend, AdmissiblePair, DeltaAssignment, TransitionRule};
use crate::error::{Error, Result};
use crate::genset::{CandidateGraph, EdgeEnds};
use crate::indexed::{ArcIx, RegionIx, ValidatedInstance, VertexIx};
use crate::model::FoldLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PartKind {
    #[serde(rename = "P_I")]
    Birth,
    #[serde(rename = "P_II")]
    Merge,
    #[serde(rename = "P_d")]
    DoubleMerge,
}

impl PartKind {
    pub fn name(self) -> &'static str {
        match self {
            PartKind::Birth => "P_I",
            PartKind::Merge => "P_II",
            PartKind::DoubleMerge => "P_d",
        }
    }
}

/// What a side of a part is glued to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GluingTarget {
    Interval(EdgeEnds),
    Sheet(VertexIx),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttachStep {
    /// Position in the region order of the region being attached.
    pub step_index: usize,
    pub region: RegionIx,
    pub part: PartKind,
    /// Arcs crossed: one for `P_I` and `P_II`, two for `P_d`.
    pub arcs: Vec<ArcIx>,
    /// Double points (by index into the instance's crossings) this step
    /// completes: the one or more fused into a `P_d`, or for a natural step
    /// those whose last attached corner it enters.
    pub double_points: Vec<usize>,
    /// `P_I`: the interval born. `P_II`, `P_d`: the interval on the smallest side.
    pub edge: EdgeEnds,
    /// Intervals replaced on the larger side (two for `P_II`, three for `P_d`).
    pub replaced: Vec<EdgeEnds>,
    /// Side name of the part to what it is glued along.
    pub gluing: BTreeMap<&'static str, GluingTarget>,
    /// `P_d` only: the chain equations held with the corners read in the
    /// listed clockwise order rather than the reversed one.
    pub mirrored: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildPlan {
    pub region_order: Vec<RegionIx>,
    pub steps: Vec<AttachStep>,
    /// Number of fiber intervals over each region, by region index.
    pub fiber_counts: Vec<usize>,
    /// Double points of two II folds where no `P_d` was used, with the reason.
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlanSummary {
    #[serde(rename = "P_I")]
    pub birth: usize,
    #[serde(rename = "P_II")]
    pub merge: usize,
    #[serde(rename = "P_d")]
    pub double_merge: usize,
    pub max_fiber_count: usize,
}

/// The sheets named in the four chain equations at a double point: over the
/// top corner the intervals are `(v, v1)`, `(w1, w2)`, `(w3, w)`; the folds
/// carry the pairs `{v1, w1}` and `{w2, w3}`; the bottom corner has `(v, w)`.
#[derive(Clone, Copy, Debug)]
struct Chain {
    /// Corners in equation order: bottom, the corner missing `{w2, w3}`,
    /// top, the corner missing `{v1, w1}`.
    corners: [RegionIx; 4],
    v: VertexIx,
    v1: VertexIx,
    w1: VertexIx,
    w2: VertexIx,
    w3: VertexIx,
    w: VertexIx,
}

fn set(edges: &[EdgeEnds]) -> BTreeSet<EdgeEnds> {
    edges.iter().copied().collect()
}

fn replace(base: &BTreeSet<EdgeEnds>, remove: &[EdgeEnds], add: EdgeEnds) -> Option<BTreeSet<EdgeEnds>> {
    let mut out = base.clone();
    for e in remove {
        if !out.remove(e) {
            return None;
        }
    }
    if !out.insert(add) {
        return None;
    }
    Some(out)
}

/// Tests the four chain equations with corners `l = [L1, L2, L3, L4]`.
fn chain_equations(
    inst: &ValidatedInstance,
    delta: &DeltaAssignment,
    l: [RegionIx; 4],
) -> Option<Chain> {
    let g = |i: usize| inst.gamma(l[i]);
    let pair = |a: usize, b: usize| -> Option<(VertexIx, VertexIx)> {
        let d: Vec<VertexIx> = g(a).difference(g(b)).copied().collect();
        if d.len() != 2 || !g(b).is_subset(g(a)) {
            return None;
        }
        let plus = d.iter().copied().find(|v| inst.sign(*v) == crate::Sign::Plus)?;
        let minus = d.iter().copied().find(|v| inst.sign(*v) == crate::Sign::Minus)?;
        Some((plus, minus))
    };
    // {w1, v1} separates L2 from L1 and L3 from L4; {w3, w2} separates L3 from L2 and L4 from L1.
    let (w1, v1) = pair(1, 0)?;
    if pair(2, 3)? != (w1, v1) {
        return None;
    }
    let (w3, w2) = pair(2, 1)?;
    if pair(3, 0)? != (w3, w2) {
        return None;
    }
    let top = delta.get(l[2]);
    let v = top.iter().find(|e| e.minus == v1)?.plus;
    let w = top.iter().find(|e| e.plus == w3)?.minus;
    let e = EdgeEnds::new;
    if !top.contains(&e(w1, w2)) {
        return None;
    }
    let eq1 = replace(delta.get(l[1]), &[e(v, v1), e(w1, w)], e(v, w))? == *delta.get(l[0]);
    let eq2 = replace(delta.get(l[3]), &[e(v, w2), e(w3, w)], e(v, w))? == *delta.get(l[0]);
    let eq3 = replace(top, &[e(w1, w2), e(w3, w)], e(w1, w))? == *delta.get(l[1]);
    let eq4 = replace(top, &[e(v, v1), e(w1, w2)], e(v, w2))? == *delta.get(l[3]);
    if eq1 && eq2 && eq3 && eq4 {
        Some(Chain {
            corners: l,
            v,
            v1,
            w1,
            w2,
            w3,
            w,
        })
    } else {
        None
    }
}

/// Tries the counterclockwise reading (the listed clockwise order reversed)
/// and then the listed order itself, each rotated to start at the bottom corner.
fn chain_at(
    inst: &ValidatedInstance,
    delta: &DeltaAssignment,
    cw: [RegionIx; 4],
    bottom: RegionIx,
) -> Option<(Chain, bool)> {
    let b = cw.iter().position(|r| *r == bottom)?;
    let ccw = [cw[b], cw[(b + 3) % 4], cw[(b + 2) % 4], cw[(b + 1) % 4]];
    let listed = [cw[b], cw[(b + 1) % 4], cw[(b + 2) % 4], cw[(b + 3) % 4]];
    if let Some(c) = chain_equations(inst, delta, ccw) {
        return Some((c, false));
    }
    chain_equations(inst, delta, listed).map(|c| (c, true))
}

fn transition(
    inst: &ValidatedInstance,
    h: &CandidateGraph,
    delta: &DeltaAssignment,
    arc: ArcIx,
) -> Result<(TransitionRule, EdgeEnds, Vec<EdgeEnds>)> {
    let diff = inst.gamma_diff(arc);
    let large = delta.get(diff.larger);
    let (small, rule) = descend(h, &diff, large)
        .map_err(|e| Error::Certificate(format!("arc {}: {}", inst.arc(arc).id, e)))?;
    match rule {
        TransitionRule::Birth => Ok((rule, EdgeEnds::new(diff.plus, diff.minus), Vec::new())),
        TransitionRule::Merge => {
            let replaced: Vec<EdgeEnds> = large.difference(&small).copied().collect();
            let merged = *small.difference(large).next().expect("merge adds one edge");
            Ok((rule, merged, replaced))
        }
    }
}

/// Builds the attachment plan for a verified admissible pair.
pub fn emit_build_plan(inst: &ValidatedInstance, pair: &AdmissiblePair) -> Result<BuildPlan> {
    let h = &pair.graph;
    let delta = &pair.delta;
    let report = check_conditions(inst, h, delta)?;
    if !report.all_passed() {
        return Err(Error::Certificate(format!(
            "pair does not satisfy the admissibility conditions:\n{report}"
        )));
    }

    let order = inst.region_order();
    let mut pos = vec![0usize; inst.region_count()];
    for (i, r) in order.iter().enumerate() {
        pos[r.index()] = i;
    }
    let attached = |a: ArcIx| {
        let [x, y] = inst.arc(a).ends;
        if pos[x.index()] > pos[y.index()] {
            x
        } else {
            y
        }
    };

    // The two crossings into the last attached corner of a double point
    // complete it; they are the ones a P_d replaces.
    let covering = |c: &crate::indexed::Crossing| -> [ArcIx; 2] {
        let last = *c
            .regions_clockwise
            .iter()
            .max_by_key(|r| pos[r.index()])
            .unwrap();
        let mut arcs: Vec<ArcIx> = c
            .arcs
            .iter()
            .copied()
            .filter(|a| inst.arc(*a).ends.contains(&last))
            .collect();
        arcs.sort();
        [arcs[0], arcs[1]]
    };

    // Fusion groups: arc pair -> (double points, chain, mirrored).
    let mut notes = Vec::new();
    let mut groups: BTreeMap<[ArcIx; 2], (Vec<usize>, Chain, bool)> = BTreeMap::new();
    let mut fused_arcs: BTreeMap<ArcIx, [ArcIx; 2]> = BTreeMap::new();
    let mut natural: Vec<(usize, [ArcIx; 2])> = Vec::new();
    for (ci, c) in inst.crossings().iter().enumerate() {
        let key = covering(c);
        let both_ii = c.folds.iter().all(|f| inst.fold(*f).label == FoldLabel::II);
        if !both_ii {
            natural.push((ci, key));
            continue;
        }
        let Some(k) = corners(inst, c) else {
            notes.push(format!("{}: corners not ordered by gamma inclusion; no P_d", c.id));
            natural.push((ci, key));
            continue;
        };
        let Some((chain, mirrored)) = chain_at(inst, delta, c.regions_clockwise, k.bottom) else {
            notes.push(format!("{}: chain equations do not hold; two natural crossings", c.id));
            natural.push((ci, key));
            continue;
        };
        let clash = key
            .iter()
            .any(|a| fused_arcs.get(a).is_some_and(|other| *other != key));
        if clash {
            notes.push(format!(
                "{}: its crossings are already fused at another double point; two natural crossings",
                c.id
            ));
            natural.push((ci, key));
            continue;
        }
        if mirrored {
            notes.push(format!(
                "{}: chain equations hold only with the corners read in the listed clockwise order",
                c.id
            ));
        }
        for a in key {
            fused_arcs.insert(a, key);
        }
        groups
            .entry(key)
            .and_modify(|g| g.0.push(ci))
            .or_insert((vec![ci], chain, mirrored));
    }
    let mut covered: BTreeMap<ArcIx, Vec<usize>> = BTreeMap::new();
    for (ci, key) in natural {
        for a in key {
            covered.entry(a).or_default().push(ci);
        }
    }

    let mut steps = Vec::new();
    for (i, _) in inst.arcs().iter().enumerate() {
        let a = ArcIx::from(i);
        if fused_arcs.contains_key(&a) {
            continue;
        }
        let (rule, edge, replaced) = transition(inst, h, delta, a)?;
        let diff = inst.gamma_diff(a);
        let region = attached(a);
        let mut gluing = BTreeMap::new();
        let part = match rule {
            TransitionRule::Birth => {
                gluing.insert("kappa", GluingTarget::Interval(edge));
                gluing.insert("lambda_1", GluingTarget::Sheet(diff.plus));
                gluing.insert("lambda_2", GluingTarget::Sheet(diff.minus));
                PartKind::Birth
            }
            TransitionRule::Merge => {
                let at_v = *replaced.iter().find(|e| e.plus == diff.plus).unwrap();
                let at_w = *replaced.iter().find(|e| e.minus == diff.minus).unwrap();
                gluing.insert("mu_1", GluingTarget::Interval(edge));
                gluing.insert("mu_2", GluingTarget::Interval(at_v));
                gluing.insert("mu_3", GluingTarget::Interval(at_w));
                gluing.insert("nu_1", GluingTarget::Sheet(diff.plus));
                gluing.insert("nu_2", GluingTarget::Sheet(diff.minus));
                PartKind::Merge
            }
        };
        steps.push(AttachStep {
            step_index: pos[region.index()],
            region,
            part,
            arcs: vec![a],
            double_points: covered.get(&a).cloned().unwrap_or_default(),
            edge,
            replaced,
            gluing,
            mirrored: false,
        });
    }
    for (arcs, (dps, ch, mirrored)) in groups {
        let e = EdgeEnds::new;
        let region = attached(arcs[0]);
        let gluing = BTreeMap::from([
            ("xi_1", GluingTarget::Interval(e(ch.v, ch.w))),
            ("xi_2_1", GluingTarget::Interval(e(ch.v, ch.v1))),
            ("xi_2_2", GluingTarget::Interval(e(ch.w1, ch.w))),
            ("xi_3_1", GluingTarget::Interval(e(ch.v, ch.w2))),
            ("xi_3_2", GluingTarget::Interval(e(ch.w3, ch.w))),
            ("xi_4", GluingTarget::Interval(e(ch.w1, ch.w2))),
        ]);
        debug_assert_eq!(ch.corners.len(), 4);
        steps.push(AttachStep {
            step_index: pos[region.index()],
            region,
            part: PartKind::DoubleMerge,
            arcs: arcs.to_vec(),
            double_points: dps,
            edge: e(ch.v, ch.w),
            replaced: set(&[e(ch.v, ch.v1), e(ch.w1, ch.w2), e(ch.w3, ch.w)])
                .into_iter()
                .collect(),
            gluing,
            mirrored,
        });
    }
    steps.sort_by(|a, b| (a.step_index, &a.arcs).cmp(&(b.step_index, &b.arcs)));

    let fiber_counts = (0..inst.region_count())
        .map(|i| delta.get(RegionIx::from(i)).len())
        .collect();
    Ok(BuildPlan {
        region_order: order,
        steps,
        fiber_counts,
        notes,
    })
}

pub fn plan_summary(plan: &BuildPlan) -> PlanSummary {
    let count = |k: PartKind| plan.steps.iter().filter(|s| s.part == k).count();
    PlanSummary {
        birth: count(PartKind::Birth),
        merge: count(PartKind::Merge),
        double_merge: count(PartKind::DoubleMerge),
        max_fiber_count: plan.fiber_counts.iter().copied().max().unwrap_or(0),
    }
}

/// Re-checks the four chain equations of every `P_d` step against `delta`.
pub fn verify_double_merges(inst: &ValidatedInstance, plan: &BuildPlan, delta: &DeltaAssignment) -> bool {
    plan.steps
        .iter()
        .filter(|s| s.part == PartKind::DoubleMerge)
        .all(|s| {
            s.double_points.iter().all(|&ci| {
                let c = &inst.crossings()[ci];
                corners(inst, c)
                    .and_then(|k| chain_at(inst, delta, c.regions_clockwise, k.bottom))
                    .is_some_and(|(ch, m)| {
                        m == s.mirrored && EdgeEnds::new(ch.v, ch.w) == s.edge
                    })
            })
        })
}
