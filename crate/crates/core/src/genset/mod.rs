//! The generated set: candidate graphs reachable from the I-fold graph by
//! applying operation 1 or operation 2 once per II fold, in every order and
//! with every admissible choice.

mod enumerate;
mod graph;
mod ops;

pub use enumerate::{
    enumerate_generated_set, find_schedule, replay_schedule, EnumerationBudget, GeneratedSet,
    Schedule, ScheduleStep,
};
pub use graph::{canonical_form, initial_graph, CandidateGraph, CanonicalKey, EdgeEnds, Label, LabeledEdge};
pub use ops::{apply_op1, apply_op2, delta_op1, delta_op2, Op1Choice, Op2Choice, OpChoice};
