use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::model::{ArcKind, Instance, Sign};

/// The rule a [`Violation`] breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    // Structural: the document does not describe a well-formed object.
    DuplicateId,
    DanglingReference,
    DuplicateGammaEntry,
    // Laws of fold map data.
    NoFolds,
    LoopEdge,
    Bipartite,
    UnboundedRegion,
    GammaParity,
    ArcEndpoints,
    GammaNesting,
    GammaDifferenceSize,
    GammaDifferenceFold,
    ArcKind,
    FoldWithoutArc,
    Disconnected,
    DoublePointShape,
    DoublePointCrossing,
}

impl Law {
    pub fn is_structural(self) -> bool {
        matches!(
            self,
            Law::DuplicateId | Law::DanglingReference | Law::DuplicateGammaEntry
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Law::DuplicateId => "duplicate-id",
            Law::DanglingReference => "dangling-reference",
            Law::DuplicateGammaEntry => "duplicate-gamma-entry",
            Law::NoFolds => "no-folds",
            Law::LoopEdge => "loop-edge",
            Law::Bipartite => "bipartite",
            Law::UnboundedRegion => "unbounded-region",
            Law::GammaParity => "gamma-parity",
            Law::ArcEndpoints => "arc-endpoints",
            Law::GammaNesting => "gamma-nesting",
            Law::GammaDifferenceSize => "gamma-difference-size",
            Law::GammaDifferenceFold => "gamma-difference-fold",
            Law::ArcKind => "arc-kind",
            Law::FoldWithoutArc => "fold-without-arc",
            Law::Disconnected => "disconnected",
            Law::DoublePointShape => "double-point-shape",
            Law::DoublePointCrossing => "double-point-crossing",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    /// Id of the offending record.
    pub subject: String,
    pub law: Law,
    /// Further ids involved, sorted.
    pub ids: Vec<String>,
    pub message: String,
}

/// Which of the two crossing equalities held at a double point, for the
/// reading starting at the first listed region and for the reading
/// starting at the second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossingReading {
    pub double_point: String,
    pub from_first: Option<CrossingForm>,
    pub from_second: Option<CrossingForm>,
}

/// `Entering`: the last region gains the pair relative to the first one
/// exactly as the third gains it relative to the second. `Leaving`: the
/// first and second regions carry the pair that the fourth and third lack.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CrossingForm {
    Entering,
    Leaving,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub crossings: Vec<CrossingReading>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn structural(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.law.is_structural())
    }

    pub fn has_law(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    pub fn about<'a>(&'a self, subject: &'a str) -> impl Iterator<Item = &'a Violation> {
        self.violations.iter().filter(move |v| v.subject == subject)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{} [{}]: {}", v.subject, v.law, v.message)?;
        }
        Ok(())
    }
}

struct Reporter {
    out: Vec<Violation>,
}

impl Reporter {
    fn push(&mut self, subject: &str, law: Law, ids: &[&str], message: impl Into<String>) {
        let mut ids: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
        ids.sort();
        self.out.push(Violation {
            subject: subject.to_string(),
            law,
            ids,
            message: message.into(),
        });
    }
}

/// Checks every structural law of the instance data. Pure; the report is
/// sorted by subject id, then law.
pub fn validate_instance(instance: &Instance) -> ValidationReport {
    let mut rep = Reporter { out: Vec::new() };

    let signs: HashMap<&str, Sign> = instance
        .vertices
        .iter()
        .map(|v| (v.id.as_str(), v.sign))
        .collect();
    check_duplicates(&mut rep, "vertex", instance.vertices.iter().map(|v| v.id.as_str()));
    check_duplicates(&mut rep, "fold", instance.folds.iter().map(|f| f.id.as_str()));
    check_duplicates(&mut rep, "region", instance.regions.iter().map(|r| r.id.as_str()));
    check_duplicates(&mut rep, "arc", instance.arcs.iter().map(|a| a.id.as_str()));
    check_duplicates(
        &mut rep,
        "double point",
        instance.double_points.iter().map(|d| d.id.as_str()),
    );

    if instance.folds.is_empty() {
        rep.push("", Law::NoFolds, &[], "instance has no fold edges");
    }

    // Folds: endpoints resolve, no loops, plus end signed plus, minus end signed minus.
    let mut fold_ends: HashMap<&str, (&str, &str)> = HashMap::new();
    for f in &instance.folds {
        let mut ok = true;
        for end in [&f.plus_end, &f.minus_end] {
            if !signs.contains_key(end.as_str()) {
                rep.push(
                    &f.id,
                    Law::DanglingReference,
                    &[end],
                    format!("fold {} references unknown vertex {}", f.id, end),
                );
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        if f.plus_end == f.minus_end {
            rep.push(
                &f.id,
                Law::LoopEdge,
                &[&f.plus_end],
                format!(
                    "fold {} joins vertex {} to itself; a loop is unsupported by the sign labeling",
                    f.id, f.plus_end
                ),
            );
            continue;
        }
        let ps = signs[f.plus_end.as_str()];
        let ms = signs[f.minus_end.as_str()];
        if ps != Sign::Plus || ms != Sign::Minus {
            rep.push(
                &f.id,
                Law::Bipartite,
                &[&f.plus_end, &f.minus_end],
                format!(
                    "fold edge must join opposite signs: {} is {}, {} is {}",
                    f.plus_end, ps, f.minus_end, ms
                ),
            );
        }
        fold_ends.insert(f.id.as_str(), (f.plus_end.as_str(), f.minus_end.as_str()));
    }

    // Regions: gamma resolves, is a set, is sign-balanced; exactly one unbounded region.
    let mut gammas: HashMap<&str, BTreeSet<&str>> = HashMap::new();
    let unbounded: Vec<&str> = instance
        .regions
        .iter()
        .filter(|r| r.unbounded)
        .map(|r| r.id.as_str())
        .collect();
    if unbounded.len() != 1 {
        rep.push(
            "",
            Law::UnboundedRegion,
            &unbounded,
            format!("expected exactly one unbounded region, found {}", unbounded.len()),
        );
    }
    for r in &instance.regions {
        let mut set = BTreeSet::new();
        let mut ok = true;
        for v in &r.gamma {
            if !signs.contains_key(v.as_str()) {
                rep.push(
                    &r.id,
                    Law::DanglingReference,
                    &[v],
                    format!("region {} lists unknown vertex {}", r.id, v),
                );
                ok = false;
            } else if !set.insert(v.as_str()) {
                rep.push(
                    &r.id,
                    Law::DuplicateGammaEntry,
                    &[v],
                    format!("region {} lists vertex {} twice", r.id, v),
                );
            }
        }
        if !ok {
            continue;
        }
        if r.unbounded && !set.is_empty() {
            rep.push(
                &r.id,
                Law::UnboundedRegion,
                &[],
                format!("unbounded region {} must have empty gamma", r.id),
            );
        }
        let plus = set.iter().filter(|v| signs[**v] == Sign::Plus).count();
        let minus = set.len() - plus;
        if plus != minus {
            rep.push(
                &r.id,
                Law::GammaParity,
                &[],
                format!(
                    "region {} has {} plus and {} minus sheets; the counts must agree",
                    r.id, plus, minus
                ),
            );
        }
        gammas.insert(r.id.as_str(), set);
    }

    // Arcs.
    let fold_ids: BTreeSet<&str> = instance.folds.iter().map(|f| f.id.as_str()).collect();
    let region_ids: BTreeSet<&str> = instance.regions.iter().map(|r| r.id.as_str()).collect();
    let mut arc_ok: HashMap<&str, bool> = HashMap::new();
    let mut folds_with_arcs: BTreeMap<&str, BTreeSet<ArcKind>> = BTreeMap::new();
    let mut links: Vec<(&str, &str)> = Vec::new();
    for a in &instance.arcs {
        let mut ok = true;
        for reg in [&a.inner, &a.outer] {
            if !region_ids.contains(reg.as_str()) {
                rep.push(
                    &a.id,
                    Law::DanglingReference,
                    &[reg],
                    format!("arc {} references unknown region {}", a.id, reg),
                );
                ok = false;
            }
        }
        if !fold_ids.contains(a.fold.as_str()) {
            rep.push(
                &a.id,
                Law::DanglingReference,
                &[&a.fold],
                format!("arc {} references unknown fold {}", a.id, a.fold),
            );
            ok = false;
        } else {
            folds_with_arcs
                .entry(a.fold.as_str())
                .or_default()
                .insert(a.arc_kind);
        }
        arc_ok.insert(a.id.as_str(), ok);
        if !ok {
            continue;
        }
        links.push((a.inner.as_str(), a.outer.as_str()));
        if a.inner == a.outer {
            rep.push(
                &a.id,
                Law::ArcEndpoints,
                &[&a.inner],
                format!("arc {} joins region {} to itself", a.id, a.inner),
            );
            continue;
        }
        let (Some(gi), Some(go)) = (gammas.get(a.inner.as_str()), gammas.get(a.outer.as_str()))
        else {
            continue;
        };
        let (large, small) = if gi.is_superset(go) {
            (gi, go)
        } else if go.is_superset(gi) {
            (go, gi)
        } else {
            rep.push(
                &a.id,
                Law::GammaNesting,
                &[&a.inner, &a.outer],
                format!(
                    "gamma sets of adjacent regions {} and {} are not nested",
                    a.inner, a.outer
                ),
            );
            continue;
        };
        let diff: Vec<&str> = large.difference(small).copied().collect();
        if diff.len() != 2 {
            rep.push(
                &a.id,
                Law::GammaDifferenceSize,
                &[&a.inner, &a.outer],
                format!(
                    "gamma sets of {} and {} differ by {} sheets, expected 2",
                    a.inner,
                    a.outer,
                    diff.len()
                ),
            );
            continue;
        }
        let Some(&(p, m)) = fold_ends.get(a.fold.as_str()) else {
            continue;
        };
        let diff_set: BTreeSet<&str> = diff.iter().copied().collect();
        let fold_set: BTreeSet<&str> = [p, m].into_iter().collect();
        if diff_set != fold_set {
            rep.push(
                &a.id,
                Law::GammaDifferenceFold,
                &[&a.fold, diff[0], diff[1]],
                format!(
                    "sheets {} and {} gained across arc {} are not the endpoints of fold {}",
                    diff[0], diff[1], a.id, a.fold
                ),
            );
        } else if signs[diff[0]] == signs[diff[1]] {
            rep.push(
                &a.id,
                Law::Bipartite,
                &[diff[0], diff[1]],
                format!(
                    "sheets {} and {} gained across arc {} carry the same sign",
                    diff[0], diff[1], a.id
                ),
            );
        }
    }

    // Connectivity of the region adjacency graph.
    if !instance.regions.is_empty() {
        let mut nbrs: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for &(x, y) in &links {
            nbrs.entry(x).or_default().push(y);
            nbrs.entry(y).or_default().push(x);
        }
        let start = unbounded
            .first()
            .copied()
            .unwrap_or(instance.regions[0].id.as_str());
        let mut seen: BTreeSet<&str> = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(r) = queue.pop_front() {
            for &n in nbrs.get(r).into_iter().flatten() {
                if seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        let unreached: Vec<&str> = region_ids.difference(&seen).copied().collect();
        if !unreached.is_empty() {
            rep.push(
                "",
                Law::Disconnected,
                &unreached,
                format!(
                    "regions not reachable from {} through arcs: {}",
                    start,
                    unreached.join(", ")
                ),
            );
        }
    }

    // Double points.
    let mut fold_at_double_point: BTreeSet<&str> = BTreeSet::new();
    let mut crossings = Vec::new();
    for d in &instance.double_points {
        let mut ok = true;
        for f in &d.folds {
            if !fold_ids.contains(f.as_str()) {
                rep.push(
                    &d.id,
                    Law::DanglingReference,
                    &[f],
                    format!("double point {} references unknown fold {}", d.id, f),
                );
                ok = false;
            } else {
                fold_at_double_point.insert(f.as_str());
            }
        }
        for r in &d.regions_clockwise {
            if !region_ids.contains(r.as_str()) {
                rep.push(
                    &d.id,
                    Law::DanglingReference,
                    &[r],
                    format!("double point {} references unknown region {}", d.id, r),
                );
                ok = false;
            }
        }
        for a in &d.arcs {
            if !arc_ok.contains_key(a.as_str()) {
                rep.push(
                    &d.id,
                    Law::DanglingReference,
                    &[a],
                    format!("double point {} references unknown arc {}", d.id, a),
                );
                ok = false;
            } else if !arc_ok[a.as_str()] {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        if check_double_point_shape(&mut rep, instance, d) {
            let regs: Vec<Option<&BTreeSet<&str>>> = d
                .regions_clockwise
                .iter()
                .map(|r| gammas.get(r.as_str()))
                .collect();
            if let [Some(g1), Some(g2), Some(g3), Some(g4)] = regs[..] {
                let from_first = crossing_form([g1, g2, g3, g4]);
                let from_second = crossing_form([g2, g3, g4, g1]);
                if from_first.is_none() || from_second.is_none() {
                    let which = if from_first.is_none() { "first" } else { "second" };
                    rep.push(
                        &d.id,
                        Law::DoublePointCrossing,
                        &d.regions_clockwise.iter().map(String::as_str).collect::<Vec<_>>(),
                        format!(
                            "gamma sets around double point {} satisfy neither crossing form when read from the {} region",
                            d.id, which
                        ),
                    );
                }
                crossings.push(CrossingReading {
                    double_point: d.id.clone(),
                    from_first,
                    from_second,
                });
            }
        }
    }

    // Every fold is crossed somewhere; arc kinds agree with double point incidence.
    for f in &instance.folds {
        match folds_with_arcs.get(f.id.as_str()) {
            None => rep.push(
                &f.id,
                Law::FoldWithoutArc,
                &[],
                format!("fold {} appears in no adjacency arc", f.id),
            ),
            Some(kinds) => {
                let expected = if fold_at_double_point.contains(f.id.as_str()) {
                    ArcKind::Interval
                } else {
                    ArcKind::FullCircle
                };
                if kinds.iter().any(|k| *k != expected) {
                    let msg = match expected {
                        ArcKind::Interval => format!(
                            "fold {} passes through a double point but has a fullCircle arc",
                            f.id
                        ),
                        ArcKind::FullCircle => format!(
                            "fold {} has no double point but has an interval arc",
                            f.id
                        ),
                    };
                    rep.push(&f.id, Law::ArcKind, &[], msg);
                }
            }
        }
    }

    let mut violations = rep.out;
    violations.sort();
    violations.dedup();
    crossings.sort_by(|a, b| a.double_point.cmp(&b.double_point));
    ValidationReport {
        violations,
        crossings,
    }
}

fn check_duplicates<'a>(rep: &mut Reporter, kind: &str, ids: impl Iterator<Item = &'a str>) {
    let mut seen = BTreeSet::new();
    let mut dup = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            dup.insert(id);
        }
    }
    for id in dup {
        rep.push(id, Law::DuplicateId, &[], format!("duplicate {} id {}", kind, id));
    }
}

/// The four arcs must walk once around the point, alternating between the
/// two (distinct) folds, over four distinct regions.
fn check_double_point_shape(
    rep: &mut Reporter,
    instance: &Instance,
    d: &crate::model::DoublePoint,
) -> bool {
    let listed: Vec<&str> = d.arcs.iter().map(String::as_str).collect();
    let mut fail = |msg: String| {
        rep.push(&d.id, Law::DoublePointShape, &listed, msg);
        false
    };
    if d.folds[0] == d.folds[1] {
        return fail(format!(
            "double point {} lists fold {} twice; a fold cannot cross itself",
            d.id, d.folds[0]
        ));
    }
    let distinct: BTreeSet<&String> = d.regions_clockwise.iter().collect();
    if distinct.len() != 4 {
        return fail(format!(
            "double point {} must have four distinct surrounding regions",
            d.id
        ));
    }
    let arcs: Vec<_> = d.arcs.iter().filter_map(|a| instance.arc(a)).collect();
    for a in &arcs {
        if a.arc_kind != ArcKind::Interval {
            return fail(format!(
                "arc {} at double point {} must be of kind interval",
                a.id, d.id
            ));
        }
        if !d.folds.contains(&a.fold) {
            return fail(format!(
                "arc {} at double point {} lies on fold {}, which does not pass through it",
                a.id, d.id, a.fold
            ));
        }
    }
    let r = &d.regions_clockwise;
    for i in 0..4 {
        let (x, y) = (&r[i], &r[(i + 1) % 4]);
        let found: Vec<_> = arcs
            .iter()
            .filter(|a| (&a.inner == x && &a.outer == y) || (&a.inner == y && &a.outer == x))
            .collect();
        if found.len() != 1 {
            return fail(format!(
                "double point {} needs exactly one listed arc between {} and {}, found {}",
                d.id,
                x,
                y,
                found.len()
            ));
        }
    }
    // Opposite sides of the crossing lie on the same fold.
    let fold_between = |x: &String, y: &String| {
        arcs.iter()
            .find(|a| (&a.inner == x && &a.outer == y) || (&a.inner == y && &a.outer == x))
            .map(|a| a.fold.clone())
    };
    let f01 = fold_between(&r[0], &r[1]);
    let f23 = fold_between(&r[2], &r[3]);
    let f12 = fold_between(&r[1], &r[2]);
    let f30 = fold_between(&r[3], &r[0]);
    if f01 != f23 || f12 != f30 || f01 == f12 {
        return fail(format!(
            "arcs around double point {} must alternate between its two folds",
            d.id
        ));
    }
    true
}

fn crossing_form(g: [&BTreeSet<&str>; 4]) -> Option<CrossingForm> {
    let diff = |x: &BTreeSet<&str>, y: &BTreeSet<&str>| -> BTreeSet<String> {
        x.difference(y).map(|s| s.to_string()).collect()
    };
    let [r1, r2, r3, r4] = g;
    let entering = diff(r4, r1);
    if entering.len() == 2 && entering == diff(r3, r2) {
        return Some(CrossingForm::Entering);
    }
    let leaving = diff(r1, r4);
    if leaving.len() == 2 && leaving == diff(r2, r3) {
        return Some(CrossingForm::Leaving);
    }
    None
}
