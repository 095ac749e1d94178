//! Admissible pairs: a candidate graph together with a per-region choice of
//! fiber intervals that is coherent across every fold crossing.

mod conditions;
mod decide;
mod search;

pub use conditions::{
    check_conditions, Condition, ConditionEntry, ConditionReport, DeltaAssignment, Matching,
    TransitionRule,
};
pub(crate) use conditions::{corners, descend};
pub use decide::{
    decide_extension, enumerate_admissible_pairs, AdmissiblePair, Budgets, DecideStats, Outcome,
    Verdict,
};
pub use search::{search_delta, DeltaSearch};
