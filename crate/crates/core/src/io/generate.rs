//! Seeded random instances built from nested fold circles.
//!
//! Every circle is one fold. Crossing it inward either adds two new sheets
//! of opposite sign or removes one plus and one minus sheet already present
//! outside it, so nesting alone fixes every gamma set and every arc. A
//! double point gadget is a pair of overlapping circles, each adding its own
//! two sheets, which meet in two double points with mirrored corner order.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AdjacencyArc, ArcKind, DoublePoint, FoldEdge, FoldLabel, Instance, Region, Sign, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct GeneratorParams {
    pub seed: u64,
    /// Depth of circle nesting; 1 means circles directly in the plane only.
    pub max_nesting_depth: u32,
    /// Upper bound on circles placed side by side inside one region.
    pub max_siblings_per_level: u32,
    pub ii_fold_probability: f64,
    pub allow_double_points: bool,
    /// Chance that a nested circle removes a sheet pair instead of adding one.
    pub shrink_probability: f64,
    pub max_folds: u32,
    pub max_sheets: u32,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            seed: 0,
            max_nesting_depth: 3,
            max_siblings_per_level: 2,
            ii_fold_probability: 0.5,
            allow_double_points: false,
            shrink_probability: 0.3,
            max_folds: 6,
            max_sheets: 8,
        }
    }
}

impl GeneratorParams {
    fn check(&self) -> Result<()> {
        for (name, p) in [
            ("iiFoldProbability", self.ii_fold_probability),
            ("shrinkProbability", self.shrink_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Precondition(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        if self.max_nesting_depth == 0 || self.max_siblings_per_level == 0 {
            return Err(Error::Precondition("depth and sibling bounds must be positive".into()));
        }
        if self.max_folds == 0 || self.max_sheets < 2 {
            return Err(Error::Precondition("need room for at least one fold and two sheets".into()));
        }
        Ok(())
    }
}

struct Builder {
    rng: ChaCha8Rng,
    params: GeneratorParams,
    inst: Instance,
}

impl Builder {
    fn sheet(&mut self, sign: Sign) -> String {
        let id = format!("s{}", self.inst.vertices.len() + 1);
        self.inst.vertices.push(Vertex { id: id.clone(), sign });
        id
    }

    fn new_pair(&mut self) -> (String, String) {
        (self.sheet(Sign::Plus), self.sheet(Sign::Minus))
    }

    fn fold(&mut self, plus: String, minus: String) -> String {
        let label = if self.rng.random_bool(self.params.ii_fold_probability) {
            FoldLabel::II
        } else {
            FoldLabel::I
        };
        let id = format!("f{}", self.inst.folds.len() + 1);
        self.inst.folds.push(FoldEdge {
            id: id.clone(),
            label,
            plus_end: plus,
            minus_end: minus,
        });
        id
    }

    fn region(&mut self, gamma: Vec<String>) -> String {
        let id = format!("R{}", self.inst.regions.len());
        let mut gamma = gamma;
        gamma.sort();
        self.inst.regions.push(Region {
            id: id.clone(),
            unbounded: false,
            gamma,
        });
        id
    }

    fn arc(&mut self, inner: &str, outer: &str, fold: &str, kind: ArcKind) -> String {
        let id = format!("a{}", self.inst.arcs.len() + 1);
        self.inst.arcs.push(AdjacencyArc {
            id: id.clone(),
            inner: inner.into(),
            outer: outer.into(),
            fold: fold.into(),
            arc_kind: kind,
        });
        id
    }

    fn folds_left(&self) -> u32 {
        self.params.max_folds - self.inst.folds.len() as u32
    }

    fn sheets_left(&self) -> u32 {
        self.params.max_sheets - self.inst.vertices.len() as u32
    }

    fn pick(&mut self, gamma: &[String], sign: Sign) -> Option<String> {
        let of_sign: Vec<&String> = gamma
            .iter()
            .filter(|id| self.inst.vertex(id).map(|v| v.sign) == Some(sign))
            .collect();
        if of_sign.is_empty() {
            return None;
        }
        let i = self.rng.random_range(0..of_sign.len() as u32) as usize;
        Some(of_sign[i].clone())
    }

    /// Places circles inside `region` whose sheets are `gamma`.
    fn fill(&mut self, region: &str, gamma: &[String], depth: u32) {
        if depth >= self.params.max_nesting_depth {
            return;
        }
        let lo = u32::from(depth == 0);
        let count = self.rng.random_range(lo..=self.params.max_siblings_per_level);
        for _ in 0..count {
            if self.folds_left() == 0 {
                return;
            }
            let gadget = self.params.allow_double_points
                && self.folds_left() >= 2
                && self.sheets_left() >= 4
                && self.rng.random_bool(0.3);
            if gadget {
                self.gadget(region, gamma);
                continue;
            }
            let can_shrink = gamma.len() >= 2;
            let can_grow = self.sheets_left() >= 2;
            let shrink = can_shrink && (!can_grow || self.rng.random_bool(self.params.shrink_probability));
            if !shrink && !can_grow {
                return;
            }
            let (inner_gamma, fold) = if shrink {
                let p = self.pick(gamma, Sign::Plus).expect("parity gives a plus sheet");
                let m = self.pick(gamma, Sign::Minus).expect("parity gives a minus sheet");
                let rest: Vec<String> = gamma.iter().filter(|s| **s != p && **s != m).cloned().collect();
                (rest, self.fold(p, m))
            } else {
                let (p, m) = self.new_pair();
                let mut more = gamma.to_vec();
                more.push(p.clone());
                more.push(m.clone());
                (more, self.fold(p, m))
            };
            let inner = self.region(inner_gamma.clone());
            self.arc(&inner, region, &fold, ArcKind::FullCircle);
            self.fill(&inner, &inner_gamma, depth + 1);
        }
    }

    fn gadget(&mut self, outside: &str, gamma: &[String]) {
        let (pa, ma) = self.new_pair();
        let (pb, mb) = self.new_pair();
        let fa = self.fold(pa.clone(), ma.clone());
        let fb = self.fold(pb.clone(), mb.clone());
        let with = |extra: &[&String]| {
            let mut g = gamma.to_vec();
            g.extend(extra.iter().map(|s| (*s).clone()));
            g
        };
        let a_only = self.region(with(&[&pa, &ma]));
        let b_only = self.region(with(&[&pb, &mb]));
        let lens = self.region(with(&[&pa, &ma, &pb, &mb]));
        let x1 = self.arc(&a_only, outside, &fa, ArcKind::Interval);
        let x2 = self.arc(&b_only, outside, &fb, ArcKind::Interval);
        let x3 = self.arc(&lens, &a_only, &fb, ArcKind::Interval);
        let x4 = self.arc(&lens, &b_only, &fa, ArcKind::Interval);
        let n = self.inst.double_points.len();
        let arcs = [x1, x3, x4, x2];
        self.inst.double_points.push(DoublePoint {
            id: format!("d{}", n + 1),
            folds: [fa.clone(), fb.clone()],
            regions_clockwise: [outside.into(), a_only.clone(), lens.clone(), b_only.clone()],
            arcs: arcs.clone(),
        });
        self.inst.double_points.push(DoublePoint {
            id: format!("d{}", n + 2),
            folds: [fa, fb],
            regions_clockwise: [outside.into(), b_only, lens, a_only],
            arcs,
        });
    }
}

/// Builds a random instance. The same parameters always give the same
/// instance, and the result always passes [`crate::validate_instance`].
pub fn generate_instance(params: &GeneratorParams) -> Result<Instance> {
    params.check()?;
    let mut b = Builder {
        rng: ChaCha8Rng::seed_from_u64(params.seed),
        params: *params,
        inst: Instance::default(),
    };
    b.inst.regions.push(Region {
        id: "R0".into(),
        unbounded: true,
        gamma: Vec::new(),
    });
    b.fill("R0", &[], 0);
    Ok(b.inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate_instance;

    #[test]
    fn one_circle_is_a_sphere() {
        let params = GeneratorParams {
            max_nesting_depth: 1,
            max_siblings_per_level: 1,
            ..GeneratorParams::default()
        };
        let inst = generate_instance(&params).unwrap();
        assert_eq!(inst.vertices.len(), 2);
        assert_eq!(inst.folds.len(), 1);
        assert_eq!(inst.regions.len(), 2);
        assert_eq!(inst.arcs.len(), 1);
        assert!(validate_instance(&inst).is_valid());
    }

    #[test]
    fn same_seed_same_instance() {
        let params = GeneratorParams {
            seed: 42,
            allow_double_points: true,
            ..GeneratorParams::default()
        };
        assert_eq!(generate_instance(&params).unwrap(), generate_instance(&params).unwrap());
    }

    #[test]
    fn bad_probability_rejected() {
        let params = GeneratorParams {
            ii_fold_probability: 1.5,
            ..GeneratorParams::default()
        };
        assert!(generate_instance(&params).is_err());
    }

    #[test]
    fn many_seeds_validate() {
        for seed in 0..300 {
            let params = GeneratorParams {
                seed,
                allow_double_points: seed % 2 == 0,
                ..GeneratorParams::default()
            };
            let inst = generate_instance(&params).unwrap();
            let report = validate_instance(&inst);
            assert!(report.is_valid(), "seed {seed}:\n{report}");
        }
    }
}
