//! Graphviz rendering of the weighted graph and of candidate graphs.
//!
//! Nodes and edges are written in sorted order, so the text depends only
//! on the graph.

use std::fmt::Write;

use crate::genset::CandidateGraph;
use crate::indexed::{ValidatedInstance, VertexIx};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn nodes(out: &mut String, inst: &ValidatedInstance) {
    for i in 0..inst.vertex_count() {
        let v = VertexIx::from(i);
        let id = inst.vertex_id(v);
        let sign = inst.sign(v).symbol();
        let _ = writeln!(out, "  {} [label={}];", quote(id), quote(&format!("{id} ({sign})")));
    }
}

/// Sheets as nodes with their sign, folds as edges labeled `I` or `II`.
pub fn weighted_dot(inst: &ValidatedInstance) -> String {
    let mut out = String::from("graph weighted {\n");
    nodes(&mut out, inst);
    for f in inst.folds() {
        let _ = writeln!(
            out,
            "  {} -- {} [label={}];",
            quote(inst.vertex_id(f.plus)),
            quote(inst.vertex_id(f.minus)),
            quote(&format!("{} {}", f.id, f.label))
        );
    }
    out.push_str("}\n");
    out
}

/// Sheets as nodes, candidate edges labeled `a`, `b` or `ab`.
pub fn candidate_dot(inst: &ValidatedInstance, g: &CandidateGraph, name: &str) -> String {
    let mut out = format!("graph {} {{\n", quote(name));
    nodes(&mut out, inst);
    for e in g.edges() {
        let _ = writeln!(
            out,
            "  {} -- {} [label={}];",
            quote(inst.vertex_id(e.ends.plus)),
            quote(inst.vertex_id(e.ends.minus)),
            quote(e.label.as_str())
        );
    }
    out.push_str("}\n");
    out
}
