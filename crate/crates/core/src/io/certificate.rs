//! Certificate and build plan documents.
//!
//! Everything is written with string ids and sorted collections so that
//! two runs on the same input produce identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::admissible::{AdmissiblePair, DeltaAssignment, Matching};
use crate::construct::{plan_summary, BuildPlan, GluingTarget, PartKind, PlanSummary};
use crate::error::{Error, Result};
use crate::genset::{
    replay_schedule, CandidateGraph, EdgeEnds, Label, Op1Choice, Op2Choice, OpChoice, Schedule, ScheduleStep,
};
use crate::indexed::{ValidatedInstance, VertexIx};

use super::document::FORMAT_VERSION;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub plus: String,
    pub minus: String,
    pub label: String,
}

/// One schedule step: the fold, the operation and the edges chosen
/// (`(v, v')` then `(w', w)` for operation 1, the split edge for operation 2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRecord {
    pub fold: String,
    pub op: u8,
    pub edges: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CertificateDocument {
    pub version: u64,
    pub graph: Vec<EdgeRecord>,
    /// Region id to its intervals as `[plus, minus]` pairs.
    pub delta: BTreeMap<String, Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<StepRecord>>,
}

fn pair_ids(inst: &ValidatedInstance, e: EdgeEnds) -> [String; 2] {
    [inst.vertex_id(e.plus).to_owned(), inst.vertex_id(e.minus).to_owned()]
}

pub fn certificate_to_document(inst: &ValidatedInstance, pair: &AdmissiblePair) -> CertificateDocument {
    let graph = pair
        .graph
        .edges()
        .map(|e| EdgeRecord {
            plus: inst.vertex_id(e.ends.plus).to_owned(),
            minus: inst.vertex_id(e.ends.minus).to_owned(),
            label: e.label.as_str().to_owned(),
        })
        .collect();
    let delta = pair
        .delta
        .iter()
        .map(|(r, m)| (inst.region(r).id.clone(), m.iter().map(|e| pair_ids(inst, *e)).collect()))
        .collect();
    let schedule = pair.schedule.as_ref().map(|s| {
        s.steps
            .iter()
            .map(|step| StepRecord {
                fold: inst.fold(step.fold).id.clone(),
                op: step.choice.kind(),
                edges: match step.choice {
                    OpChoice::One(c) => vec![pair_ids(inst, c.first), pair_ids(inst, c.second)],
                    OpChoice::Two(c) => vec![pair_ids(inst, c.edge)],
                },
            })
            .collect()
    });
    CertificateDocument {
        version: FORMAT_VERSION,
        graph,
        delta,
        schedule,
    }
}

pub fn serialize_certificate(inst: &ValidatedInstance, pair: &AdmissiblePair) -> String {
    let mut s = serde_json::to_string_pretty(&certificate_to_document(inst, pair)).expect("certificate serializes");
    s.push('\n');
    s
}

fn vertex(inst: &ValidatedInstance, id: &str) -> Result<VertexIx> {
    inst.vertex_by_id(id)
        .ok_or_else(|| Error::Certificate(format!("unknown sheet `{id}`")))
}

fn ends(inst: &ValidatedInstance, pair: &[String; 2]) -> Result<EdgeEnds> {
    Ok(EdgeEnds::new(vertex(inst, &pair[0])?, vertex(inst, &pair[1])?))
}

/// Resolves a certificate document against an instance. A schedule, when
/// present, must replay to exactly the listed graph.
pub fn document_to_certificate(inst: &ValidatedInstance, doc: &CertificateDocument) -> Result<AdmissiblePair> {
    if doc.version != FORMAT_VERSION {
        return Err(Error::Version {
            found: Some(doc.version),
            expected: FORMAT_VERSION,
        });
    }
    let mut graph = CandidateGraph::empty(inst.vertex_count());
    for e in &doc.graph {
        let pair = ends(inst, &[e.plus.clone(), e.minus.clone()])?;
        let label = Label::parse(&e.label)
            .ok_or_else(|| Error::Certificate(format!("bad label `{}`", e.label)))?;
        if graph.contains(pair) {
            return Err(Error::Certificate(format!("edge ({}, {}) listed twice", e.plus, e.minus)));
        }
        graph.add(pair, label);
    }

    let mut delta = DeltaAssignment::empty(inst.region_count());
    for id in doc.delta.keys() {
        if inst.region_by_id(id).is_none() {
            return Err(Error::Certificate(format!("unknown region `{id}`")));
        }
    }
    for i in 0..inst.region_count() {
        let r = crate::RegionIx::from(i);
        let id = &inst.region(r).id;
        let listed = doc
            .delta
            .get(id)
            .ok_or_else(|| Error::Certificate(format!("no assignment for region `{id}`")))?;
        let mut m = Matching::new();
        for p in listed {
            if !m.insert(ends(inst, p)?) {
                return Err(Error::Certificate(format!(
                    "interval ({}, {}) listed twice over `{id}`",
                    p[0], p[1]
                )));
            }
        }
        delta.set(r, m);
    }

    let schedule = match &doc.schedule {
        None => None,
        Some(steps) => {
            let mut out = Vec::new();
            for s in steps {
                let fold = inst
                    .fold_by_id(&s.fold)
                    .ok_or_else(|| Error::Certificate(format!("unknown fold `{}`", s.fold)))?;
                let choice = match (s.op, s.edges.as_slice()) {
                    (1, [a, b]) => OpChoice::One(Op1Choice {
                        first: ends(inst, a)?,
                        second: ends(inst, b)?,
                    }),
                    (2, [a]) => OpChoice::Two(Op2Choice { edge: ends(inst, a)? }),
                    _ => {
                        return Err(Error::Certificate(format!(
                            "schedule step on `{}` has a malformed operation",
                            s.fold
                        )))
                    }
                };
                out.push(ScheduleStep { fold, choice });
            }
            let schedule = Schedule { steps: out };
            let built = replay_schedule(inst, &schedule)
                .map_err(|e| Error::Certificate(format!("schedule does not replay: {e}")))?;
            if built != graph {
                return Err(Error::Certificate("schedule produces a different graph".into()));
            }
            Some(schedule)
        }
    };
    Ok(AdmissiblePair { graph, delta, schedule })
}

pub fn parse_certificate(inst: &ValidatedInstance, text: &str) -> Result<AdmissiblePair> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: CertificateDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let inner = e.inner();
        if inner.is_syntax() || inner.is_eof() {
            Error::Syntax {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        } else {
            Error::Field {
                path: e.path().to_string(),
                message: inner.to_string(),
            }
        }
    })?;
    de.end().map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    document_to_certificate(inst, &doc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GluingRecord {
    Interval([String; 2]),
    Sheet(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StepDocument {
    pub step_index: usize,
    pub region: String,
    pub part: PartKind,
    pub arcs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub double_points: Vec<String>,
    pub edge: [String; 2],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub replaced: Vec<[String; 2]>,
    pub gluing: BTreeMap<String, GluingRecord>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub mirrored: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PlanDocument {
    pub version: u64,
    pub region_order: Vec<String>,
    pub steps: Vec<StepDocument>,
    pub fiber_counts: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub summary: PlanSummary,
}

pub fn plan_to_document(inst: &ValidatedInstance, plan: &BuildPlan) -> PlanDocument {
    let steps = plan
        .steps
        .iter()
        .map(|s| StepDocument {
            step_index: s.step_index,
            region: inst.region(s.region).id.clone(),
            part: s.part,
            arcs: s.arcs.iter().map(|a| inst.arc(*a).id.clone()).collect(),
            double_points: s.double_points.iter().map(|&c| inst.crossings()[c].id.clone()).collect(),
            edge: pair_ids(inst, s.edge),
            replaced: s.replaced.iter().map(|e| pair_ids(inst, *e)).collect(),
            gluing: s
                .gluing
                .iter()
                .map(|(k, t)| {
                    let rec = match t {
                        GluingTarget::Interval(e) => GluingRecord::Interval(pair_ids(inst, *e)),
                        GluingTarget::Sheet(v) => GluingRecord::Sheet(inst.vertex_id(*v).to_owned()),
                    };
                    ((*k).to_owned(), rec)
                })
                .collect(),
            mirrored: s.mirrored,
        })
        .collect();
    PlanDocument {
        version: FORMAT_VERSION,
        region_order: plan.region_order.iter().map(|r| inst.region(*r).id.clone()).collect(),
        steps,
        fiber_counts: plan
            .fiber_counts
            .iter()
            .enumerate()
            .map(|(i, n)| (inst.region(crate::RegionIx::from(i)).id.clone(), *n))
            .collect(),
        notes: plan.notes.clone(),
        summary: plan_summary(plan),
    }
}

pub fn serialize_plan(inst: &ValidatedInstance, plan: &BuildPlan) -> String {
    let mut s = serde_json::to_string_pretty(&plan_to_document(inst, plan)).expect("plan serializes");
    s.push('\n');
    s
}

pub fn parse_plan(text: &str) -> Result<PlanDocument> {
    serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

