use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::genset::{CandidateGraph, EdgeEnds};
use crate::indexed::{ArcIx, GammaDiff, RegionIx, ValidatedInstance};

/// The edges assigned to one region: fiber intervals over that region.
pub type Matching = BTreeSet<EdgeEnds>;

/// A set of candidate-graph edges for every region.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaAssignment {
    per_region: Vec<Matching>,
}

impl DeltaAssignment {
    pub fn new(per_region: Vec<Matching>) -> Self {
        DeltaAssignment { per_region }
    }

    pub fn empty(region_count: usize) -> Self {
        DeltaAssignment {
            per_region: vec![Matching::new(); region_count],
        }
    }

    pub fn get(&self, r: RegionIx) -> &Matching {
        &self.per_region[r.index()]
    }

    pub fn set(&mut self, r: RegionIx, m: Matching) {
        self.per_region[r.index()] = m;
    }

    pub fn len(&self) -> usize {
        self.per_region.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_region.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (RegionIx, &Matching)> {
        self.per_region
            .iter()
            .enumerate()
            .map(|(i, m)| (RegionIx::from(i), m))
    }
}

/// How δ changes across an arc, read from the larger side to the smaller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum TransitionRule {
    /// The larger side has one extra interval `(v, w)` whose label contains `a`.
    Birth,
    /// Intervals `(v, v')` and `(w', w)` on the larger side become the single
    /// interval `(w', v')` on the smaller side, whose label contains `b`.
    Merge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Condition {
    /// Every edge assigned to a region has both ends over that region.
    Incidence,
    /// Every sheet over a region is the end of exactly one assigned edge.
    Matching,
    /// Across every arc, one of the birth or merge equations holds.
    Transition,
    /// Around a double point, both two-step descents from the largest
    /// region reach the assignment of the smallest region.
    Commutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConditionEntry {
    pub condition: Condition,
    pub subject: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<TransitionRule>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub entries: Vec<ConditionEntry>,
}

impl ConditionReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn entry(&self, condition: Condition, subject: &str) -> Option<&ConditionEntry> {
        self.entries
            .iter()
            .find(|e| e.condition == condition && e.subject == subject)
    }

    /// All entries of `condition` passed.
    pub fn passed(&self, condition: Condition) -> bool {
        self.entries
            .iter()
            .filter(|e| e.condition == condition)
            .all(|e| e.passed)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(
                f,
                "{:<12} {:<10} {}",
                format!("{:?}", e.condition),
                e.subject,
                if e.passed { "pass" } else { "FAIL" }
            )?;
            if let Some(rule) = e.rule {
                write!(f, " ({:?})", rule)?;
            }
            if !e.detail.is_empty() {
                write!(f, ": {}", e.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Why a forced descent across an arc failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum DescentFailure {
    Unmatched,
    BornEdgeLacksA,
    MergedEdgeMissing,
    MergedEdgeLacksB,
}

impl fmt::Display for DescentFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DescentFailure::Unmatched => "an extra sheet is not matched on the larger side",
            DescentFailure::BornEdgeLacksA => "the vanishing edge is not labeled a",
            DescentFailure::MergedEdgeMissing => "the merged edge is not in the graph",
            DescentFailure::MergedEdgeLacksB => "the merged edge is not labeled b",
        })
    }
}

/// The assignment on the smaller side of an arc forced by a perfect
/// matching `larger` on the larger side.
pub(crate) fn descend(
    h: &CandidateGraph,
    diff: &GammaDiff,
    larger: &Matching,
) -> std::result::Result<(Matching, TransitionRule), DescentFailure> {
    let (v, w) = (diff.plus, diff.minus);
    let at_v = larger.iter().find(|e| e.plus == v).ok_or(DescentFailure::Unmatched)?;
    let at_w = larger.iter().find(|e| e.minus == w).ok_or(DescentFailure::Unmatched)?;
    let mut smaller = larger.clone();
    if at_v == at_w {
        if !h.label(*at_v).is_some_and(|l| l.has_a()) {
            return Err(DescentFailure::BornEdgeLacksA);
        }
        smaller.remove(at_v);
        return Ok((smaller, TransitionRule::Birth));
    }
    let merged = EdgeEnds::new(at_w.plus, at_v.minus);
    match h.label(merged) {
        None => return Err(DescentFailure::MergedEdgeMissing),
        Some(l) if !l.has_b() => return Err(DescentFailure::MergedEdgeLacksB),
        Some(_) => {}
    }
    smaller.remove(at_v);
    smaller.remove(at_w);
    smaller.insert(merged);
    Ok((smaller, TransitionRule::Merge))
}

/// Checks the birth and merge equations by set arithmetic over every
/// candidate pair of edges, without assuming either side is a matching.
fn transition_holds(
    h: &CandidateGraph,
    diff: &GammaDiff,
    larger: &Matching,
    smaller: &Matching,
) -> Option<TransitionRule> {
    let (v, w) = (diff.plus, diff.minus);
    let born = EdgeEnds::new(v, w);
    if larger.contains(&born) && h.label(born).is_some_and(|l| l.has_a()) {
        let mut rest = larger.clone();
        rest.remove(&born);
        if !smaller.contains(&born) && &rest == smaller {
            return Some(TransitionRule::Birth);
        }
    }
    for first in larger.iter().filter(|e| e.plus == v) {
        for second in larger.iter().filter(|e| e.minus == w) {
            if first == second {
                continue;
            }
            let merged = EdgeEnds::new(second.plus, first.minus);
            if !h.label(merged).is_some_and(|l| l.has_b()) {
                continue;
            }
            let mut rest = larger.clone();
            rest.remove(first);
            rest.remove(second);
            if rest.contains(&merged) {
                continue;
            }
            rest.insert(merged);
            if &rest == smaller {
                return Some(TransitionRule::Merge);
            }
        }
    }
    None
}

fn edge_name(inst: &ValidatedInstance, e: EdgeEnds) -> String {
    format!("({}, {})", inst.vertex_id(e.plus), inst.vertex_id(e.minus))
}

fn check_shape(inst: &ValidatedInstance, h: &CandidateGraph, delta: &DeltaAssignment) -> Result<()> {
    if delta.len() != inst.region_count() {
        return Err(Error::Certificate(format!(
            "assignment covers {} regions, instance has {}",
            delta.len(),
            inst.region_count()
        )));
    }
    for (r, m) in delta.iter() {
        for e in m {
            if !h.contains(*e) {
                return Err(Error::Certificate(format!(
                    "region {} is assigned edge {}, which is not in the candidate graph",
                    inst.region(r).id,
                    edge_name(inst, *e)
                )));
            }
        }
    }
    Ok(())
}

/// Checks every admissibility condition of `(h, delta)` and reports each
/// one separately. Structural mismatches (an assigned edge outside `h`, a
/// missing region) are errors rather than failed conditions.
pub fn check_conditions(
    inst: &ValidatedInstance,
    h: &CandidateGraph,
    delta: &DeltaAssignment,
) -> Result<ConditionReport> {
    check_shape(inst, h, delta)?;
    let mut entries = Vec::new();

    for (r, m) in delta.iter() {
        let id = &inst.region(r).id;
        let gamma = inst.gamma(r);
        let outside: Vec<String> = m
            .iter()
            .filter(|e| !gamma.contains(&e.plus) || !gamma.contains(&e.minus))
            .map(|e| edge_name(inst, *e))
            .collect();
        entries.push(ConditionEntry {
            condition: Condition::Incidence,
            subject: id.clone(),
            passed: outside.is_empty(),
            rule: None,
            detail: if outside.is_empty() {
                String::new()
            } else {
                format!("edges leave the region's sheets: {}", outside.join(", "))
            },
        });

        let mut bad = Vec::new();
        for &v in gamma {
            let n = m.iter().filter(|e| e.touches(v)).count();
            if n != 1 {
                bad.push(format!("{} covered {} times", inst.vertex_id(v), n));
            }
        }
        entries.push(ConditionEntry {
            condition: Condition::Matching,
            subject: id.clone(),
            passed: bad.is_empty(),
            rule: None,
            detail: bad.join(", "),
        });
    }

    for (i, arc) in inst.arcs().iter().enumerate() {
        let diff = inst.gamma_diff(ArcIx::from(i));
        let rule = transition_holds(h, &diff, delta.get(diff.larger), delta.get(diff.smaller));
        entries.push(ConditionEntry {
            condition: Condition::Transition,
            subject: arc.id.clone(),
            passed: rule.is_some(),
            rule,
            detail: if rule.is_some() {
                String::new()
            } else {
                format!(
                    "neither birth nor merge relates {} to {}",
                    inst.region(diff.larger).id,
                    inst.region(diff.smaller).id
                )
            },
        });
    }

    for c in inst.crossings() {
        let outcome = commutes(inst, h, delta, c);
        entries.push(ConditionEntry {
            condition: Condition::Commutation,
            subject: c.id.clone(),
            passed: outcome.is_ok(),
            rule: None,
            detail: outcome.err().unwrap_or_default(),
        });
    }

    Ok(ConditionReport { entries })
}

/// Corners of a double point: the region on the larger side of both folds,
/// the one on the smaller side of both, and the two mixed ones with the arcs
/// leading to them from the top corner and down to the bottom corner.
pub(crate) struct Corners {
    pub top: RegionIx,
    pub bottom: RegionIx,
    pub sides: [(RegionIx, ArcIx, ArcIx); 2],
}

pub(crate) fn corners(inst: &ValidatedInstance, c: &crate::indexed::Crossing) -> Option<Corners> {
    let regs = c.regions_clockwise;
    let top_pos = (0..4).max_by_key(|&i| inst.gamma(regs[i]).len())?;
    let top = regs[top_pos];
    let bottom = regs[(top_pos + 2) % 4];
    let arc_between = |x: RegionIx, y: RegionIx| {
        c.arcs.iter().copied().find(|a| {
            let [p, q] = inst.arc(*a).ends;
            (p == x && q == y) || (p == y && q == x)
        })
    };
    let mut sides = Vec::new();
    for side in [regs[(top_pos + 1) % 4], regs[(top_pos + 3) % 4]] {
        let down = arc_between(top, side)?;
        let last = arc_between(side, bottom)?;
        if inst.gamma_diff(down).larger != top || inst.gamma_diff(last).larger != side {
            return None;
        }
        sides.push((side, down, last));
    }
    Some(Corners {
        top,
        bottom,
        sides: [sides[0], sides[1]],
    })
}

fn commutes(
    inst: &ValidatedInstance,
    h: &CandidateGraph,
    delta: &DeltaAssignment,
    c: &crate::indexed::Crossing,
) -> std::result::Result<(), String> {
    let Some(k) = corners(inst, c) else {
        return Err("regions around the point are not ordered by gamma inclusion".into());
    };
    let start = delta.get(k.top);
    let target = delta.get(k.bottom);
    for (side, down, last) in k.sides {
        let via = &inst.region(side).id;
        let (mid, _) = descend(h, &inst.gamma_diff(down), start)
            .map_err(|e| format!("descent via {via} fails at the first step: {e}"))?;
        let (end, _) = descend(h, &inst.gamma_diff(last), &mid)
            .map_err(|e| format!("descent via {via} fails at the second step: {e}"))?;
        if &end != target {
            return Err(format!(
                "descent via {via} does not reach the assignment of {}",
                inst.region(k.bottom).id
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genset::Label;
    use crate::testing::validated;

    fn sphere_pair(label: Label, delta_r2: bool) -> (ValidatedInstance, CandidateGraph, DeltaAssignment) {
        let inst = validated("sphere");
        let vw = EdgeEnds::new(inst.vertex_by_id("v").unwrap(), inst.vertex_by_id("w").unwrap());
        let mut h = CandidateGraph::empty(inst.vertex_count());
        h.add(vw, label);
        let mut delta = DeltaAssignment::empty(inst.region_count());
        if delta_r2 {
            delta.set(inst.region_by_id("R2").unwrap(), [vw].into());
        }
        (inst, h, delta)
    }

    #[test]
    fn sphere_birth_passes() {
        let (inst, h, delta) = sphere_pair(Label::A, true);
        let report = check_conditions(&inst, &h, &delta).unwrap();
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.entry(Condition::Transition, "a1").unwrap().rule, Some(TransitionRule::Birth));
    }

    #[test]
    fn empty_disk_breaks_matching() {
        let (inst, h, delta) = sphere_pair(Label::A, false);
        let report = check_conditions(&inst, &h, &delta).unwrap();
        assert!(!report.entry(Condition::Matching, "R2").unwrap().passed);
        assert!(report.passed(Condition::Incidence));
    }

    #[test]
    fn b_only_label_cannot_be_born() {
        let (inst, h, delta) = sphere_pair(Label::B, true);
        let report = check_conditions(&inst, &h, &delta).unwrap();
        assert!(report.passed(Condition::Matching));
        assert!(!report.entry(Condition::Transition, "a1").unwrap().passed);
    }

    #[test]
    fn edge_outside_graph_is_an_error() {
        let (inst, _, delta) = sphere_pair(Label::A, true);
        let h = CandidateGraph::empty(inst.vertex_count());
        assert!(check_conditions(&inst, &h, &delta).is_err());
        let (inst, h, _) = sphere_pair(Label::A, true);
        assert!(check_conditions(&inst, &h, &DeltaAssignment::empty(1)).is_err());
    }
}
