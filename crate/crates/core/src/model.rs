//! Plain data describing a fold map combinatorially.
//!
//! Everything here is keyed by opaque string ids and may be inconsistent;
//! [`crate::validate_instance`] decides whether it is, and
//! [`crate::ValidatedInstance`] is the resolved form the engine works on.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Orientation behaviour of the map on a sheet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Collar type of a fold circle.
///
/// `I` folds have local form `(x1^2 + t, x2)`: a fiber interval is born when
/// crossing to the side with more sheets. `II` folds have local form
/// `(x1^2 - t, x2)`: two fiber intervals meet and merge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FoldLabel {
    I,
    II,
}

impl fmt::Display for FoldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoldLabel::I => f.write_str("I"),
            FoldLabel::II => f.write_str("II"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ArcKind {
    /// The two regions are separated by an entire fold circle.
    FullCircle,
    /// The two regions meet along a piece of fold curve ending at double points.
    Interval,
}

/// A connected component of the surface minus its fold set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vertex {
    pub id: String,
    pub sign: Sign,
}

/// A fold circle, joining the two sheets that meet along it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FoldEdge {
    pub id: String,
    pub label: FoldLabel,
    pub plus_end: String,
    pub minus_end: String,
}

/// A component of the plane minus the fold image, with the sheets over it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub id: String,
    #[serde(default)]
    pub unbounded: bool,
    pub gamma: Vec<String>,
}

/// Two regions separated by one crossing of a fold curve.
///
/// `inner`/`outer` are just the two ends; which side carries more sheets
/// is derived from the gamma sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AdjacencyArc {
    pub id: String,
    pub inner: String,
    pub outer: String,
    pub fold: String,
    pub arc_kind: ArcKind,
}

/// A transverse crossing of two fold curves in the plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DoublePoint {
    pub id: String,
    pub folds: [String; 2],
    /// The four regions around the point, listed clockwise.
    pub regions_clockwise: [String; 4],
    pub arcs: [String; 4],
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Instance {
    pub vertices: Vec<Vertex>,
    pub folds: Vec<FoldEdge>,
    pub regions: Vec<Region>,
    pub arcs: Vec<AdjacencyArc>,
    #[serde(default)]
    pub double_points: Vec<DoublePoint>,
}

impl Instance {
    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn fold(&self, id: &str) -> Option<&FoldEdge> {
        self.folds.iter().find(|f| f.id == id)
    }

    pub fn region(&self, id: &str) -> Option<&Region> {
        self.regions.iter().find(|r| r.id == id)
    }

    pub fn arc(&self, id: &str) -> Option<&AdjacencyArc> {
        self.arcs.iter().find(|a| a.id == id)
    }

    /// Number of II-labeled folds.
    pub fn type_two_count(&self) -> usize {
        self.folds.iter().filter(|f| f.label == FoldLabel::II).count()
    }

    /// Applies `rename` to every id in the instance. Used for relabeling checks.
    pub fn rename_ids(&self, rename: impl Fn(&str) -> String) -> Instance {
        let r = |s: &String| rename(s);
        Instance {
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex { id: r(&v.id), sign: v.sign })
                .collect(),
            folds: self
                .folds
                .iter()
                .map(|f| FoldEdge {
                    id: r(&f.id),
                    label: f.label,
                    plus_end: r(&f.plus_end),
                    minus_end: r(&f.minus_end),
                })
                .collect(),
            regions: self
                .regions
                .iter()
                .map(|g| Region {
                    id: r(&g.id),
                    unbounded: g.unbounded,
                    gamma: g.gamma.iter().map(r).collect(),
                })
                .collect(),
            arcs: self
                .arcs
                .iter()
                .map(|a| AdjacencyArc {
                    id: r(&a.id),
                    inner: r(&a.inner),
                    outer: r(&a.outer),
                    fold: r(&a.fold),
                    arc_kind: a.arc_kind,
                })
                .collect(),
            double_points: self
                .double_points
                .iter()
                .map(|d| DoublePoint {
                    id: r(&d.id),
                    folds: d.folds.clone().map(|s| rename(&s)),
                    regions_clockwise: d.regions_clockwise.clone().map(|s| rename(&s)),
                    arcs: d.arcs.clone().map(|s| rename(&s)),
                })
                .collect(),
        }
    }
}
