use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use super::graph::{initial_graph, CandidateGraph};
use super::ops::{apply_choice, successors, OpChoice};
use crate::error::{Error, Result};
use crate::indexed::{FoldIx, ValidatedInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Largest number of distinct graphs reported.
    pub max_graphs: usize,
    /// Largest number of rewriting steps performed.
    pub max_branches: usize,
    /// Record the edgeless graph whenever some operation has no choices,
    /// instead of dropping that branch.
    pub include_degenerate: bool,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_graphs: 1_000_000,
            max_branches: 50_000_000,
            include_degenerate: false,
        }
    }
}

impl EnumerationBudget {
    fn check(&self) -> Result<()> {
        if self.max_graphs == 0 {
            return Err(Error::Budget("max_graphs"));
        }
        if self.max_branches == 0 {
            return Err(Error::Budget("max_branches"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GeneratedSet {
    /// Distinct graphs sorted by canonical key.
    pub graphs: Vec<CandidateGraph>,
    /// A budget cut the search short; `graphs` may be incomplete.
    pub truncated: bool,
    /// Rewriting steps performed.
    pub branches: usize,
    /// Some schedule hit an operation with no available choice.
    pub degenerate_reached: bool,
}

/// One position of a schedule: the II fold processed and the choice made.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScheduleStep {
    pub fold: FoldIx,
    pub choice: OpChoice,
}

/// An ordering of the II folds with one operation and choice per fold.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    pub steps: Vec<ScheduleStep>,
}

type State = (CandidateGraph, u64);

/// Enumerates the generated set.
///
/// States are pairs (graph, set of processed II folds). Each round expands
/// every state of the current round by one more fold, in parallel, and the
/// union is deduplicated into a sorted set before the next round, so
/// schedules that reconverge are explored once and the result does not
/// depend on the thread count.
pub fn enumerate_generated_set(
    instance: &ValidatedInstance,
    budget: EnumerationBudget,
) -> Result<GeneratedSet> {
    budget.check()?;
    let ii = instance.type_two_folds();
    if ii.len() > 64 {
        return Err(Error::TooManyFolds(ii.len()));
    }

    let mut frontier: Vec<State> = vec![(initial_graph(instance), 0)];
    let mut branches = 0usize;
    let mut degenerate_reached = false;
    let mut truncated = false;

    for _ in 0..ii.len() {
        let expanded: Vec<(Vec<State>, bool)> = frontier
            .par_iter()
            .map(|(g, mask)| {
                let mut out = Vec::new();
                let mut degenerate = false;
                for (bit, f) in ii.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        continue;
                    }
                    let (succ, empty) = successors(g, instance.fold(*f));
                    degenerate |= empty[0] || empty[1];
                    out.extend(succ.into_iter().map(|(_, h)| (h, mask | (1 << bit))));
                }
                (out, degenerate)
            })
            .collect();

        branches += expanded.iter().map(|(s, _)| s.len()).sum::<usize>();
        degenerate_reached |= expanded.iter().any(|(_, d)| *d);
        if branches > budget.max_branches {
            truncated = true;
            frontier.clear();
            break;
        }
        let next: BTreeSet<State> = expanded.into_iter().flat_map(|(s, _)| s).collect();
        frontier = next.into_iter().collect();
    }

    let mut keyed: Vec<_> = frontier
        .into_iter()
        .map(|(g, _)| (g.key(), g))
        .collect::<std::collections::BTreeMap<_, _>>()
        .into_iter()
        .collect();
    if budget.include_degenerate && degenerate_reached {
        let empty = CandidateGraph::empty(instance.vertex_count());
        let key = empty.key();
        if let Err(pos) = keyed.binary_search_by(|(k, _)| k.cmp(&key)) {
            keyed.insert(pos, (key, empty));
        }
    }
    if keyed.len() > budget.max_graphs {
        keyed.truncate(budget.max_graphs);
        truncated = true;
    }
    Ok(GeneratedSet {
        graphs: keyed.into_iter().map(|(_, g)| g).collect(),
        truncated,
        branches,
        degenerate_reached,
    })
}

/// Finds a schedule producing exactly `target`, if `target` is in the
/// generated set. Operations only ever add edges or grow labels, so any
/// intermediate graph that is not contained in `target` is abandoned.
pub fn find_schedule(instance: &ValidatedInstance, target: &CandidateGraph) -> Option<Schedule> {
    let ii = instance.type_two_folds();
    if ii.len() > 64 || target.vertex_count() != instance.vertex_count() {
        return None;
    }
    let start = initial_graph(instance);
    if !start.is_subgraph_of(target) {
        return None;
    }
    let full = if ii.len() == 64 { u64::MAX } else { (1u64 << ii.len()) - 1 };
    let mut dead: HashSet<State> = HashSet::new();
    let mut path = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        instance: &ValidatedInstance,
        ii: &[FoldIx],
        full: u64,
        target: &CandidateGraph,
        g: &CandidateGraph,
        mask: u64,
        dead: &mut HashSet<State>,
        path: &mut Vec<ScheduleStep>,
    ) -> bool {
        if mask == full {
            return g == target;
        }
        if dead.contains(&(g.clone(), mask)) {
            return false;
        }
        for (bit, f) in ii.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                continue;
            }
            let (succ, _) = successors(g, instance.fold(*f));
            for (choice, h) in succ {
                if !h.is_subgraph_of(target) {
                    continue;
                }
                path.push(ScheduleStep { fold: *f, choice });
                if dfs(instance, ii, full, target, &h, mask | (1 << bit), dead, path) {
                    return true;
                }
                path.pop();
            }
        }
        dead.insert((g.clone(), mask));
        false
    }

    if dfs(instance, &ii, full, target, &start, 0, &mut dead, &mut path) {
        Some(Schedule { steps: path })
    } else {
        None
    }
}

/// Replays `schedule` from the initial graph. The schedule must process
/// every II fold exactly once and every choice must be available when used.
pub fn replay_schedule(instance: &ValidatedInstance, schedule: &Schedule) -> Result<CandidateGraph> {
    let ii: BTreeSet<FoldIx> = instance.type_two_folds().into_iter().collect();
    let used: BTreeSet<FoldIx> = schedule.steps.iter().map(|s| s.fold).collect();
    if used != ii || schedule.steps.len() != ii.len() {
        return Err(Error::Precondition(
            "schedule must visit every II fold exactly once".into(),
        ));
    }
    let mut g = initial_graph(instance);
    for step in &schedule.steps {
        g = apply_choice(&g, instance.fold(step.fold), step.choice)?;
    }
    Ok(g)
}
