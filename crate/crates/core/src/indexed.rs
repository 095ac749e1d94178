use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ArcKind, FoldLabel, Instance, Sign};
use crate::validate::validate_instance;

macro_rules! index_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            fn from(i: usize) -> Self {
                $name(i as u32)
            }
        }
    };
}

index_type!(
    /// Position of a vertex in the id-sorted vertex list.
    VertexIx
);
index_type!(FoldIx);
index_type!(RegionIx);
index_type!(ArcIx);

pub type VertexSet = BTreeSet<VertexIx>;

#[derive(Clone, Debug)]
pub struct Fold {
    pub id: String,
    pub label: FoldLabel,
    pub plus: VertexIx,
    pub minus: VertexIx,
}

#[derive(Clone, Debug)]
pub struct RegionData {
    pub id: String,
    pub unbounded: bool,
    pub gamma: VertexSet,
}

#[derive(Clone, Debug)]
pub struct Arc {
    pub id: String,
    pub ends: [RegionIx; 2],
    pub fold: FoldIx,
    pub kind: ArcKind,
}

#[derive(Clone, Debug)]
pub struct Crossing {
    pub id: String,
    pub folds: [FoldIx; 2],
    pub regions_clockwise: [RegionIx; 4],
    pub arcs: [ArcIx; 4],
}

/// Orientation of an arc derived from the gamma sets of its two regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaDiff {
    pub larger: RegionIx,
    pub smaller: RegionIx,
    pub plus: VertexIx,
    pub minus: VertexIx,
}

/// An instance that passed validation, with every id resolved to a dense
/// index. All lists are sorted by id, so index order is id order.
#[derive(Clone, Debug)]
pub struct ValidatedInstance {
    source: Instance,
    vertex_ids: Vec<String>,
    signs: Vec<Sign>,
    folds: Vec<Fold>,
    regions: Vec<RegionData>,
    arcs: Vec<Arc>,
    crossings: Vec<Crossing>,
    unbounded: RegionIx,
    incident: Vec<Vec<ArcIx>>,
}

impl ValidatedInstance {
    pub fn new(instance: Instance) -> Result<Self> {
        let report = validate_instance(&instance);
        if !report.is_valid() {
            return Err(Error::InvalidInstance(report));
        }
        Ok(Self::resolve(instance))
    }

    fn resolve(source: Instance) -> Self {
        let mut vs: Vec<_> = source.vertices.iter().collect();
        vs.sort_by(|a, b| a.id.cmp(&b.id));
        let vertex_ids: Vec<String> = vs.iter().map(|v| v.id.clone()).collect();
        let signs = vs.iter().map(|v| v.sign).collect();
        let vix: HashMap<&str, VertexIx> = vertex_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), VertexIx::from(i)))
            .collect();

        let mut fs: Vec<_> = source.folds.iter().collect();
        fs.sort_by(|a, b| a.id.cmp(&b.id));
        let folds: Vec<Fold> = fs
            .iter()
            .map(|f| Fold {
                id: f.id.clone(),
                label: f.label,
                plus: vix[f.plus_end.as_str()],
                minus: vix[f.minus_end.as_str()],
            })
            .collect();
        let fix: HashMap<&str, FoldIx> = folds
            .iter()
            .enumerate()
            .map(|(i, f)| (f.id.as_str(), FoldIx::from(i)))
            .collect();

        let mut rs: Vec<_> = source.regions.iter().collect();
        rs.sort_by(|a, b| a.id.cmp(&b.id));
        let regions: Vec<RegionData> = rs
            .iter()
            .map(|r| RegionData {
                id: r.id.clone(),
                unbounded: r.unbounded,
                gamma: r.gamma.iter().map(|v| vix[v.as_str()]).collect(),
            })
            .collect();
        let rix: HashMap<&str, RegionIx> = regions
            .iter()
            .enumerate()
            .map(|(i, r)| (r.id.as_str(), RegionIx::from(i)))
            .collect();

        let mut as_: Vec<_> = source.arcs.iter().collect();
        as_.sort_by(|a, b| a.id.cmp(&b.id));
        let arcs: Vec<Arc> = as_
            .iter()
            .map(|a| Arc {
                id: a.id.clone(),
                ends: [rix[a.inner.as_str()], rix[a.outer.as_str()]],
                fold: fix[a.fold.as_str()],
                kind: a.arc_kind,
            })
            .collect();
        let aix: HashMap<&str, ArcIx> = arcs
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.as_str(), ArcIx::from(i)))
            .collect();

        let mut ds: Vec<_> = source.double_points.iter().collect();
        ds.sort_by(|a, b| a.id.cmp(&b.id));
        let crossings = ds
            .iter()
            .map(|d| Crossing {
                id: d.id.clone(),
                folds: [fix[d.folds[0].as_str()], fix[d.folds[1].as_str()]],
                regions_clockwise: d.regions_clockwise.each_ref().map(|r| rix[r.as_str()]),
                arcs: d.arcs.each_ref().map(|a| aix[a.as_str()]),
            })
            .collect();

        let unbounded = RegionIx::from(regions.iter().position(|r| r.unbounded).unwrap());
        let mut incident = vec![Vec::new(); regions.len()];
        for (i, a) in arcs.iter().enumerate() {
            for end in a.ends {
                incident[end.index()].push(ArcIx::from(i));
            }
        }

        ValidatedInstance {
            source,
            vertex_ids,
            signs,
            folds,
            regions,
            arcs,
            crossings,
            unbounded,
            incident,
        }
    }

    pub fn source(&self) -> &Instance {
        &self.source
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn vertex_id(&self, v: VertexIx) -> &str {
        &self.vertex_ids[v.index()]
    }

    pub fn vertex_by_id(&self, id: &str) -> Option<VertexIx> {
        self.vertex_ids
            .binary_search_by(|x| x.as_str().cmp(id))
            .ok()
            .map(VertexIx::from)
    }

    pub fn sign(&self, v: VertexIx) -> Sign {
        self.signs[v.index()]
    }

    pub fn folds(&self) -> &[Fold] {
        &self.folds
    }

    pub fn fold(&self, f: FoldIx) -> &Fold {
        &self.folds[f.index()]
    }

    pub fn fold_by_id(&self, id: &str) -> Option<FoldIx> {
        self.folds.iter().position(|f| f.id == id).map(FoldIx::from)
    }

    /// II-labeled folds in id order.
    pub fn type_two_folds(&self) -> Vec<FoldIx> {
        (0..self.folds.len())
            .map(FoldIx::from)
            .filter(|f| self.fold(*f).label == FoldLabel::II)
            .collect()
    }

    pub fn region_count(&self) -> usize {
        self.regions.len()
    }

    pub fn region(&self, r: RegionIx) -> &RegionData {
        &self.regions[r.index()]
    }

    pub fn region_by_id(&self, id: &str) -> Option<RegionIx> {
        self.regions
            .binary_search_by(|x| x.id.as_str().cmp(id))
            .ok()
            .map(RegionIx::from)
    }

    pub fn gamma(&self, r: RegionIx) -> &VertexSet {
        &self.regions[r.index()].gamma
    }

    pub fn unbounded(&self) -> RegionIx {
        self.unbounded
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, a: ArcIx) -> &Arc {
        &self.arcs[a.index()]
    }

    pub fn arcs_at(&self, r: RegionIx) -> &[ArcIx] {
        &self.incident[r.index()]
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Which side of `arc` carries the two extra sheets, and which sheets they are.
    pub fn gamma_diff(&self, arc: ArcIx) -> GammaDiff {
        let a = &self.arcs[arc.index()];
        let [x, y] = a.ends;
        let (larger, smaller) = if self.gamma(x).len() > self.gamma(y).len() {
            (x, y)
        } else {
            (y, x)
        };
        let fold = self.fold(a.fold);
        debug_assert!(self
            .gamma(larger)
            .difference(self.gamma(smaller))
            .copied()
            .eq([fold.plus, fold.minus].into_iter().collect::<VertexSet>()));
        GammaDiff {
            larger,
            smaller,
            plus: fold.plus,
            minus: fold.minus,
        }
    }

    /// Breadth-first order from the unbounded region, neighbours taken in
    /// id order. Every region after the first is adjacent to an earlier one.
    pub fn region_order(&self) -> Vec<RegionIx> {
        let mut seen = vec![false; self.regions.len()];
        let mut order = Vec::with_capacity(self.regions.len());
        let mut queue = VecDeque::from([self.unbounded]);
        seen[self.unbounded.index()] = true;
        while let Some(r) = queue.pop_front() {
            order.push(r);
            let mut next: Vec<RegionIx> = self.incident[r.index()]
                .iter()
                .map(|a| self.other_end(*a, r))
                .filter(|n| !seen[n.index()])
                .collect();
            next.sort();
            next.dedup();
            for n in next {
                seen[n.index()] = true;
                queue.push_back(n);
            }
        }
        order
    }

    pub fn other_end(&self, arc: ArcIx, r: RegionIx) -> RegionIx {
        let [x, y] = self.arcs[arc.index()].ends;
        if x == r {
            y
        } else {
            x
        }
    }

    pub fn region_ids<'a>(&'a self, rs: &'a [RegionIx]) -> impl Iterator<Item = &'a str> {
        rs.iter().map(move |r| self.regions[r.index()].id.as_str())
    }
}

impl fmt::Display for GammaDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} > {:?} by ({:?}, {:?})",
            self.larger, self.smaller, self.plus, self.minus
        )
    }
}
