use crate::error::{Error, Result};
use crate::genset::{CandidateGraph, EdgeEnds};
use crate::indexed::{ArcIx, RegionIx, ValidatedInstance};

use super::conditions::{descend, DeltaAssignment, Matching};

#[derive(Clone, Debug)]
pub struct DeltaSearch {
    /// First assignment found, in branch order.
    pub delta: Option<DeltaAssignment>,
    /// The branch budget ran out before the search finished.
    pub truncated: bool,
    /// Candidate assignments tried for individual regions.
    pub branches: usize,
}

/// Searches for an assignment making `(h, delta)` admissible.
///
/// Regions are visited in [`ValidatedInstance::region_order`], starting
/// from the empty assignment on the unbounded region. Each region is
/// reached from an earlier neighbour: going down in gamma the assignment is
/// forced, going up it is a birth of the `a`-edge on the new pair or a
/// split of one existing interval. Every other arc back to an assigned
/// region is checked as soon as both ends are known; failures backtrack.
pub fn search_delta(
    inst: &ValidatedInstance,
    h: &CandidateGraph,
    max_branches: usize,
) -> Result<DeltaSearch> {
    let mut all = search_deltas(inst, h, max_branches, 1)?;
    Ok(DeltaSearch {
        delta: all.found.pop(),
        truncated: all.truncated,
        branches: all.branches,
    })
}

pub(crate) struct DeltaSearchAll {
    pub found: Vec<DeltaAssignment>,
    pub truncated: bool,
    pub branches: usize,
}

struct Plan {
    order: Vec<RegionIx>,
    /// For each position after the first: the arc to the earlier neighbour
    /// the region is derived from, and all other arcs to earlier regions.
    parent: Vec<Option<ArcIx>>,
    back: Vec<Vec<ArcIx>>,
}

fn plan(inst: &ValidatedInstance) -> Plan {
    let order = inst.region_order();
    let mut pos = vec![usize::MAX; inst.region_count()];
    for (i, r) in order.iter().enumerate() {
        pos[r.index()] = i;
    }
    let mut parent = vec![None; order.len()];
    let mut back = vec![Vec::new(); order.len()];
    for (k, &r) in order.iter().enumerate().skip(1) {
        let mut earlier: Vec<(usize, ArcIx)> = inst
            .arcs_at(r)
            .iter()
            .map(|&a| (pos[inst.other_end(a, r).index()], a))
            .filter(|&(p, _)| p < k)
            .collect();
        earlier.sort();
        parent[k] = Some(earlier[0].1);
        back[k] = earlier[1..].iter().map(|&(_, a)| a).collect();
    }
    Plan {
        order,
        parent,
        back,
    }
}

/// Assignments on the larger side of `arc` compatible with `smaller`.
fn ascend(
    inst: &ValidatedInstance,
    h: &CandidateGraph,
    arc: ArcIx,
    smaller: &Matching,
) -> Vec<Matching> {
    let diff = inst.gamma_diff(arc);
    let (v, w) = (diff.plus, diff.minus);
    let mut out = Vec::new();
    let born = EdgeEnds::new(v, w);
    if h.label(born).is_some_and(|l| l.has_a()) {
        let mut m = smaller.clone();
        m.insert(born);
        out.push(m);
    }
    for &split in smaller {
        if !h.label(split).is_some_and(|l| l.has_b()) {
            continue;
        }
        let left = EdgeEnds::new(v, split.minus);
        let right = EdgeEnds::new(split.plus, w);
        if h.contains(left) && h.contains(right) {
            let mut m = smaller.clone();
            m.remove(&split);
            m.insert(left);
            m.insert(right);
            out.push(m);
        }
    }
    out
}

fn arc_consistent(
    inst: &ValidatedInstance,
    h: &CandidateGraph,
    arc: ArcIx,
    delta: &[Option<Matching>],
) -> bool {
    let diff = inst.gamma_diff(arc);
    let (Some(large), Some(small)) = (&delta[diff.larger.index()], &delta[diff.smaller.index()])
    else {
        return true;
    };
    matches!(descend(h, &diff, large), Ok((m, _)) if &m == small)
}

pub(crate) fn search_deltas(
    inst: &ValidatedInstance,
    h: &CandidateGraph,
    max_branches: usize,
    limit: usize,
) -> Result<DeltaSearchAll> {
    if max_branches == 0 {
        return Err(Error::Budget("max_branches"));
    }
    let plan = plan(inst);
    let mut state = Search {
        inst,
        h,
        plan: &plan,
        delta: vec![None; inst.region_count()],
        branches: 0,
        max_branches,
        truncated: false,
        found: Vec::new(),
        limit,
    };
    state.delta[plan.order[0].index()] = Some(Matching::new());
    state.run(1);
    Ok(DeltaSearchAll {
        found: state.found,
        truncated: state.truncated,
        branches: state.branches,
    })
}

struct Search<'a> {
    inst: &'a ValidatedInstance,
    h: &'a CandidateGraph,
    plan: &'a Plan,
    delta: Vec<Option<Matching>>,
    branches: usize,
    max_branches: usize,
    truncated: bool,
    found: Vec<DeltaAssignment>,
    limit: usize,
}

impl Search<'_> {
    /// Returns true when the search should stop.
    fn run(&mut self, k: usize) -> bool {
        if k == self.plan.order.len() {
            let full = self.delta.iter().map(|m| m.clone().unwrap()).collect();
            self.found.push(DeltaAssignment::new(full));
            return self.found.len() >= self.limit;
        }
        let r = self.plan.order[k];
        let arc = self.plan.parent[k].expect("every later region has a parent arc");
        let from = self.inst.other_end(arc, r);
        let known = self.delta[from.index()].as_ref().unwrap();
        let candidates = if self.inst.gamma_diff(arc).larger == r {
            ascend(self.inst, self.h, arc, known)
        } else {
            match descend(self.h, &self.inst.gamma_diff(arc), known) {
                Ok((m, _)) => vec![m],
                Err(_) => Vec::new(),
            }
        };
        for m in candidates {
            if self.branches >= self.max_branches {
                self.truncated = true;
                return true;
            }
            self.branches += 1;
            self.delta[r.index()] = Some(m);
            let ok = self.plan.back[k]
                .iter()
                .all(|&a| arc_consistent(self.inst, self.h, a, &self.delta));
            if ok && self.run(k + 1) {
                return true;
            }
        }
        self.delta[r.index()] = None;
        false
    }
}
