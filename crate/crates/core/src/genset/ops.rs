//! The two rewriting operations attached to a II fold `e` with plus end `v`
//! and minus end `w`.
//!
//! Operation 1 picks an edge `(v, v')` and an edge `(w', w)` with `v != w'`
//! and `v' != w`, and adds `(w', v')` labeled `b`. Operation 2 picks an edge
//! `(w', v')` with `v != w'` and `w != v'`, and adds `(v, v')` and `(w', w)`
//! labeled `b`. Adding an edge that already exists unions `b` into its label.

use serde::Serialize;

use super::graph::{CandidateGraph, EdgeEnds, Label};
use crate::error::{Error, Result};
use crate::indexed::Fold;
use crate::model::FoldLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Op1Choice {
    /// Edge `(v, v')` at the fold's plus end.
    pub first: EdgeEnds,
    /// Edge `(w', w)` at the fold's minus end.
    pub second: EdgeEnds,
}

impl Op1Choice {
    /// The edge `(w', v')` this choice adds or relabels.
    pub fn merged(self) -> EdgeEnds {
        EdgeEnds::new(self.second.plus, self.first.minus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Op2Choice {
    /// Edge `(w', v')` that gets split.
    pub edge: EdgeEnds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OpChoice {
    One(Op1Choice),
    Two(Op2Choice),
}

impl OpChoice {
    pub fn kind(self) -> u8 {
        match self {
            OpChoice::One(_) => 1,
            OpChoice::Two(_) => 2,
        }
    }
}

fn require_type_two(e: &Fold) -> Result<()> {
    if e.label != FoldLabel::II {
        return Err(Error::Precondition(format!(
            "operations apply to II folds only; {} is labeled {}",
            e.id, e.label
        )));
    }
    Ok(())
}

pub fn delta_op1(g: &CandidateGraph, e: &Fold) -> Result<Vec<Op1Choice>> {
    require_type_two(e)?;
    let (v, w) = (e.plus, e.minus);
    let seconds: Vec<EdgeEnds> = g.edges_at_minus(w).collect();
    let mut out = Vec::new();
    for first in g.edges_at_plus(v) {
        for &second in &seconds {
            if v != second.plus && first.minus != w {
                out.push(Op1Choice { first, second });
            }
        }
    }
    Ok(out)
}

pub fn apply_op1(g: &CandidateGraph, e: &Fold, c: Op1Choice) -> Result<CandidateGraph> {
    require_type_two(e)?;
    let valid = c.first.plus == e.plus
        && c.second.minus == e.minus
        && c.second.plus != e.plus
        && c.first.minus != e.minus
        && g.contains(c.first)
        && g.contains(c.second);
    if !valid {
        return Err(Error::Precondition(format!(
            "operation 1 choice is not available for fold {}",
            e.id
        )));
    }
    let mut out = g.clone();
    out.add(c.merged(), Label::B);
    Ok(out)
}

pub fn delta_op2(g: &CandidateGraph, e: &Fold) -> Result<Vec<Op2Choice>> {
    require_type_two(e)?;
    Ok(g
        .edges()
        .map(|le| le.ends)
        .filter(|ends| ends.plus != e.plus && ends.minus != e.minus)
        .map(|edge| Op2Choice { edge })
        .collect())
}

pub fn apply_op2(g: &CandidateGraph, e: &Fold, c: Op2Choice) -> Result<CandidateGraph> {
    require_type_two(e)?;
    if !g.contains(c.edge) || c.edge.plus == e.plus || c.edge.minus == e.minus {
        return Err(Error::Precondition(format!(
            "operation 2 choice is not available for fold {}",
            e.id
        )));
    }
    let mut out = g.clone();
    out.add(EdgeEnds::new(e.plus, c.edge.minus), Label::B);
    out.add(EdgeEnds::new(c.edge.plus, e.minus), Label::B);
    Ok(out)
}

pub(crate) fn apply_choice(g: &CandidateGraph, e: &Fold, c: OpChoice) -> Result<CandidateGraph> {
    match c {
        OpChoice::One(c) => apply_op1(g, e, c),
        OpChoice::Two(c) => apply_op2(g, e, c),
    }
}

/// Every successor of `g` under either operation on `e`, with the choice
/// that produced it, in choice order. The flags report whether each
/// operation's choice set was empty.
pub(crate) fn successors(
    g: &CandidateGraph,
    e: &Fold,
) -> (Vec<(OpChoice, CandidateGraph)>, [bool; 2]) {
    let d1 = delta_op1(g, e).expect("caller passes II folds");
    let d2 = delta_op2(g, e).expect("caller passes II folds");
    let empty = [d1.is_empty(), d2.is_empty()];
    let mut out = Vec::with_capacity(d1.len() + d2.len());
    for c in d1 {
        let mut h = g.clone();
        h.add(c.merged(), Label::B);
        out.push((OpChoice::One(c), h));
    }
    for c in d2 {
        let mut h = g.clone();
        h.add(EdgeEnds::new(e.plus, c.edge.minus), Label::B);
        h.add(EdgeEnds::new(c.edge.plus, e.minus), Label::B);
        out.push((OpChoice::Two(c), h));
    }
    (out, empty)
}
