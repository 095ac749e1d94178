use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genset::{enumerate_generated_set, find_schedule, CandidateGraph, EnumerationBudget, Schedule};
use crate::indexed::ValidatedInstance;

use super::conditions::DeltaAssignment;
use super::search::{search_delta, search_deltas};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub enumeration: EnumerationBudget,
    /// Branch budget for the assignment search on each candidate graph.
    pub max_branches_per_graph: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration: EnumerationBudget::default(),
            max_branches_per_graph: 1_000_000,
        }
    }
}

/// A candidate graph with an assignment satisfying every condition, and
/// the schedule that generates the graph when one is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissiblePair {
    pub graph: CandidateGraph,
    pub delta: DeltaAssignment,
    pub schedule: Option<Schedule>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Extendable(AdmissiblePair),
    NotExtendable,
    /// A budget ran out before an answer was established.
    Unknown,
}

impl Outcome {
    pub fn tag(&self) -> &'static str {
        match self {
            Outcome::Extendable(_) => "extendable",
            Outcome::NotExtendable => "notExtendable",
            Outcome::Unknown => "unknown",
        }
    }

    pub fn certificate(&self) -> Option<&AdmissiblePair> {
        match self {
            Outcome::Extendable(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecideStats {
    pub graphs_enumerated: usize,
    pub enumeration_branches: usize,
    pub enumeration_truncated: bool,
    /// Candidates searched, up to and including the one that succeeded.
    pub graphs_searched: usize,
    pub delta_branches: usize,
    pub searches_truncated: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub stats: DecideStats,
}

/// Decides whether some candidate of the generated set admits an assignment.
///
/// Candidates are searched in canonical-key order, several at a time on
/// the rayon pool; the certificate is always the one of the first
/// successful candidate in that order, and the statistics count candidates
/// up to it, so the verdict does not depend on scheduling.
pub fn decide_extension(inst: &ValidatedInstance, budgets: Budgets) -> Result<Verdict> {
    if budgets.max_branches_per_graph == 0 {
        return Err(Error::Budget("max_branches_per_graph"));
    }
    let set = enumerate_generated_set(inst, budgets.enumeration)?;
    let mut stats = DecideStats {
        graphs_enumerated: set.graphs.len(),
        enumeration_branches: set.branches,
        enumeration_truncated: set.truncated,
        ..DecideStats::default()
    };

    let chunk = (rayon::current_num_threads() * 4).max(1);
    for batch in set.graphs.chunks(chunk) {
        let results: Vec<_> = batch
            .par_iter()
            .map(|g| search_delta(inst, g, budgets.max_branches_per_graph))
            .collect::<Result<_>>()?;
        for (g, r) in batch.iter().zip(results) {
            stats.graphs_searched += 1;
            stats.delta_branches += r.branches;
            stats.searches_truncated += usize::from(r.truncated);
            if let Some(delta) = r.delta {
                let schedule = find_schedule(inst, g);
                return Ok(Verdict {
                    outcome: Outcome::Extendable(AdmissiblePair {
                        graph: g.clone(),
                        delta,
                        schedule,
                    }),
                    stats,
                });
            }
        }
    }

    let outcome = if stats.enumeration_truncated || stats.searches_truncated > 0 {
        Outcome::Unknown
    } else {
        Outcome::NotExtendable
    };
    Ok(Verdict { outcome, stats })
}

/// Every admissible pair, up to `cap` of them, in candidate order and then
/// branch order. The second value is true when `cap` or a budget cut the
/// listing short.
pub fn enumerate_admissible_pairs(
    inst: &ValidatedInstance,
    budgets: Budgets,
    cap: usize,
) -> Result<(Vec<AdmissiblePair>, bool)> {
    if cap == 0 {
        return Err(Error::Budget("cap"));
    }
    let set = enumerate_generated_set(inst, budgets.enumeration)?;
    let mut truncated = set.truncated;
    let mut out = Vec::new();
    for g in &set.graphs {
        let left = cap - out.len();
        let found = search_deltas(inst, g, budgets.max_branches_per_graph, left)?;
        truncated |= found.truncated;
        let schedule = if found.found.is_empty() { None } else { find_schedule(inst, g) };
        for delta in found.found {
            out.push(AdmissiblePair {
                graph: g.clone(),
                delta,
                schedule: schedule.clone(),
            });
        }
        if out.len() >= cap {
            truncated = true;
            break;
        }
    }
    Ok((out, truncated))
}
