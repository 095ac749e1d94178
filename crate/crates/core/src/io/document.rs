//! The versioned JSON instance document.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{AdjacencyArc, DoublePoint, FoldEdge, Instance, Region, Vertex};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InstanceDocument {
    pub version: u64,
    /// Free-form note on where the data came from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub vertices: Vec<Vertex>,
    pub folds: Vec<FoldEdge>,
    pub regions: Vec<Region>,
    pub arcs: Vec<AdjacencyArc>,
    #[serde(default)]
    pub double_points: Vec<DoublePoint>,
}

impl InstanceDocument {
    pub fn new(instance: Instance, provenance: Option<String>) -> Self {
        InstanceDocument {
            version: FORMAT_VERSION,
            provenance,
            vertices: instance.vertices,
            folds: instance.folds,
            regions: instance.regions,
            arcs: instance.arcs,
            double_points: instance.double_points,
        }
    }

    pub fn into_instance(self) -> Instance {
        Instance {
            vertices: self.vertices,
            folds: self.folds,
            regions: self.regions,
            arcs: self.arcs,
            double_points: self.double_points,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Drop unknown fields with a warning instead of rejecting the document.
    pub lenient: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedDocument {
    pub document: InstanceDocument,
    pub warnings: Vec<String>,
}

const TOP: &[&str] = &["version", "provenance", "vertices", "folds", "regions", "arcs", "doublePoints"];
const VERTEX: &[&str] = &["id", "sign"];
const FOLD: &[&str] = &["id", "label", "plusEnd", "minusEnd"];
const REGION: &[&str] = &["id", "unbounded", "gamma"];
const ARC: &[&str] = &["id", "inner", "outer", "fold", "arcKind"];
const DOUBLE_POINT: &[&str] = &["id", "folds", "regionsClockwise", "arcs"];

fn strip_unknown(obj: &mut serde_json::Map<String, Value>, known: &[&str], path: &str, out: &mut Vec<String>) {
    let extra: Vec<String> = obj.keys().filter(|k| !known.contains(&k.as_str())).cloned().collect();
    for k in extra {
        obj.remove(&k);
        out.push(if path.is_empty() {
            format!("ignored unknown field `{k}`")
        } else {
            format!("ignored unknown field `{path}.{k}`")
        });
    }
}

fn strip_document(root: &mut Value, warnings: &mut Vec<String>) {
    let Some(obj) = root.as_object_mut() else { return };
    strip_unknown(obj, TOP, "", warnings);
    for (key, known) in [
        ("vertices", VERTEX),
        ("folds", FOLD),
        ("regions", REGION),
        ("arcs", ARC),
        ("doublePoints", DOUBLE_POINT),
    ] {
        if let Some(Value::Array(items)) = obj.get_mut(key) {
            for (i, item) in items.iter_mut().enumerate() {
                if let Some(o) = item.as_object_mut() {
                    strip_unknown(o, known, &format!("{key}[{i}]"), warnings);
                }
            }
        }
    }
}

fn check_unique<'a>(kind: &'static str, ids: impl Iterator<Item = &'a String>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(Error::DuplicateId { kind, id: id.clone() });
        }
    }
    Ok(())
}

/// Parses an instance document. Syntax errors carry line and column,
/// schema errors the path of the offending field.
pub fn parse_document(text: &str, options: ParseOptions) -> Result<ParsedDocument> {
    let mut root: Value = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Some(obj) = root.as_object() else {
        return Err(Error::Field {
            path: ".".into(),
            message: "document must be an object".into(),
        });
    };
    match obj.get("version").map(Value::as_u64) {
        Some(Some(FORMAT_VERSION)) => {}
        Some(found) => {
            return Err(Error::Version {
                found,
                expected: FORMAT_VERSION,
            })
        }
        None => {
            return Err(Error::Version {
                found: None,
                expected: FORMAT_VERSION,
            })
        }
    }

    let mut warnings = Vec::new();
    if options.lenient {
        strip_document(&mut root, &mut warnings);
    }
    let document: InstanceDocument = serde_path_to_error::deserialize(root).map_err(|e| Error::Field {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;

    check_unique("vertex", document.vertices.iter().map(|v| &v.id))?;
    check_unique("fold", document.folds.iter().map(|f| &f.id))?;
    check_unique("region", document.regions.iter().map(|r| &r.id))?;
    check_unique("arc", document.arcs.iter().map(|a| &a.id))?;
    check_unique("double point", document.double_points.iter().map(|d| &d.id))?;
    Ok(ParsedDocument { document, warnings })
}

/// Strict parse straight to an [`Instance`].
pub fn parse_instance(text: &str) -> Result<Instance> {
    Ok(parse_document(text, ParseOptions::default())?.document.into_instance())
}

pub fn serialize_instance(instance: &Instance, provenance: Option<&str>) -> String {
    let doc = InstanceDocument::new(instance.clone(), provenance.map(str::to_owned));
    let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
    s.push('\n');
    s
}
