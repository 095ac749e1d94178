use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::indexed::{ValidatedInstance, VertexIx};
use crate::model::FoldLabel;

/// Nonempty subset of `{a, b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Label(u8);

impl Label {
    pub const A: Label = Label(0b01);
    pub const B: Label = Label(0b10);
    pub const AB: Label = Label(0b11);

    pub fn has_a(self) -> bool {
        self.0 & 0b01 != 0
    }

    pub fn has_b(self) -> bool {
        self.0 & 0b10 != 0
    }

    pub fn union(self, other: Label) -> Label {
        Label(self.0 | other.0)
    }

    pub fn contains(self, other: Label) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn as_str(self) -> &'static str {
        match self.0 {
            0b01 => "a",
            0b10 => "b",
            _ => "ab",
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "a" => Some(Label::A),
            "b" => Some(Label::B),
            "ab" => Some(Label::AB),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Endpoint pair of a candidate edge, plus side first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeEnds {
    pub plus: VertexIx,
    pub minus: VertexIx,
}

impl EdgeEnds {
    pub fn new(plus: VertexIx, minus: VertexIx) -> Self {
        EdgeEnds { plus, minus }
    }

    pub fn touches(self, v: VertexIx) -> bool {
        self.plus == v || self.minus == v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LabeledEdge {
    pub ends: EdgeEnds,
    pub label: Label,
}

/// A simple bipartite graph on the instance's sheets with `{a, b}` edge labels.
///
/// At most one edge per endpoint pair; adding an edge that already exists
/// unions the labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateGraph {
    vertex_count: usize,
    edges: BTreeMap<EdgeEnds, Label>,
}

impl CandidateGraph {
    pub fn empty(vertex_count: usize) -> Self {
        CandidateGraph {
            vertex_count,
            edges: BTreeMap::new(),
        }
    }

    pub fn from_edges(vertex_count: usize, edges: impl IntoIterator<Item = LabeledEdge>) -> Self {
        let mut g = CandidateGraph::empty(vertex_count);
        for e in edges {
            g.add(e.ends, e.label);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Adds `ends` with `label`, or unions `label` into the existing edge.
    pub fn add(&mut self, ends: EdgeEnds, label: Label) {
        self.edges
            .entry(ends)
            .and_modify(|l| *l = l.union(label))
            .or_insert(label);
    }

    pub fn label(&self, ends: EdgeEnds) -> Option<Label> {
        self.edges.get(&ends).copied()
    }

    pub fn contains(&self, ends: EdgeEnds) -> bool {
        self.edges.contains_key(&ends)
    }

    /// Edges in `(plus, minus)` order.
    pub fn edges(&self) -> impl Iterator<Item = LabeledEdge> + '_ {
        self.edges
            .iter()
            .map(|(&ends, &label)| LabeledEdge { ends, label })
    }

    pub fn edges_at_plus(&self, v: VertexIx) -> impl Iterator<Item = EdgeEnds> + '_ {
        self.edges.keys().copied().filter(move |e| e.plus == v)
    }

    pub fn edges_at_minus(&self, w: VertexIx) -> impl Iterator<Item = EdgeEnds> + '_ {
        self.edges.keys().copied().filter(move |e| e.minus == w)
    }

    /// Every edge of `self` is an edge of `other` whose label contains it.
    pub fn is_subgraph_of(&self, other: &CandidateGraph) -> bool {
        self.edges
            .iter()
            .all(|(e, l)| other.label(*e).is_some_and(|ol| ol.contains(*l)))
    }

    pub fn key(&self) -> CanonicalKey {
        canonical_form(self)
    }
}

/// Byte string identifying a candidate graph over fixed vertex ids.
///
/// Edges in `(plus, minus)` order, each as two big-endian `u32` indices and
/// a label byte (`a` = 1, `b` = 2, both = 3). Because indices follow id
/// order, comparing keys compares the edge lists lexicographically by id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub Vec<u8>);

pub fn canonical_form(g: &CandidateGraph) -> CanonicalKey {
    let mut out = Vec::with_capacity(g.edges.len() * 9);
    for (e, l) in &g.edges {
        out.extend_from_slice(&e.plus.0.to_be_bytes());
        out.extend_from_slice(&e.minus.0.to_be_bytes());
        out.push(l.bits());
    }
    CanonicalKey(out)
}

/// One `a`-labeled edge per I fold.
pub fn initial_graph(instance: &ValidatedInstance) -> CandidateGraph {
    let mut g = CandidateGraph::empty(instance.vertex_count());
    for f in instance.folds() {
        if f.label == FoldLabel::I {
            g.add(EdgeEnds::new(f.plus, f.minus), Label::A);
        }
    }
    g
}
