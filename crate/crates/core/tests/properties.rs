mod common;

use common::*;
use foldext::admissible::{check_conditions, decide_extension, Budgets, Outcome};
use foldext::construct::{emit_build_plan, plan_summary, PartKind};
use foldext::genset::{enumerate_generated_set, EnumerationBudget};
use foldext::io::{
    generate_instance, parse_certificate, parse_instance, parse_plan, plan_to_document, serialize_certificate,
    serialize_instance, serialize_plan, weighted_dot, GeneratorParams,
};
use foldext::{validate_instance, Instance, ValidatedInstance};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = GeneratorParams> {
    (any::<u64>(), 1u32..5, 1u32..3, 0.0f64..=1.0, any::<bool>(), 0.0f64..=1.0, 1u32..6, 2u32..9).prop_map(
        |(seed, depth, siblings, ii, dp, shrink, folds, sheets)| GeneratorParams {
            seed,
            max_nesting_depth: depth,
            max_siblings_per_level: siblings,
            ii_fold_probability: ii,
            allow_double_points: dp,
            shrink_probability: shrink,
            max_folds: folds,
            max_sheets: sheets,
        },
    )
}

fn small() -> impl Strategy<Value = Instance> {
    (0u64..5000).prop_map(|s| generate_instance(&small_params(s)).unwrap())
}

fn outcome(v: &ValidatedInstance) -> Outcome {
    decide_extension(v, Budgets::default()).unwrap().outcome
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_instances_validate(p in params()) {
        let inst = generate_instance(&p).unwrap();
        let report = validate_instance(&inst);
        prop_assert!(report.is_valid(), "{}", report);
        prop_assert!(inst.folds.len() as u32 <= p.max_folds);
        prop_assert!(inst.vertices.len() as u32 <= p.max_sheets);
        prop_assert_eq!(generate_instance(&p).unwrap(), inst);
    }

    #[test]
    fn instance_round_trip(p in params()) {
        let inst = generate_instance(&p).unwrap();
        prop_assert_eq!(parse_instance(&serialize_instance(&inst, None)).unwrap(), inst);
    }

    #[test]
    fn validation_is_idempotent(inst in small()) {
        prop_assert_eq!(validate_instance(&inst), validate_instance(&inst.clone()));
    }

    #[test]
    fn certificates_round_trip_and_pass(inst in small()) {
        let v = ValidatedInstance::new(inst).unwrap();
        if let Outcome::Extendable(pair) = outcome(&v) {
            let again = parse_certificate(&v, &serialize_certificate(&v, &pair)).unwrap();
            prop_assert_eq!(&again, &pair);
            prop_assert!(check_conditions(&v, &pair.graph, &pair.delta).unwrap().all_passed());
        }
    }

    #[test]
    fn relabeling_changes_nothing(inst in small()) {
        // Reversing every id scrambles the sort order of ids.
        let renamed = inst.rename_ids(|s| format!("x{}", s.chars().rev().collect::<String>()));
        let back = |g: &Graph| -> Graph {
            g.iter()
                .map(|((p, m), b)| {
                    let undo = |s: &str| s[1..].chars().rev().collect::<String>();
                    ((undo(p), undo(m)), *b)
                })
                .collect()
        };
        let v = ValidatedInstance::new(inst).unwrap();
        let w = ValidatedInstance::new(renamed).unwrap();
        let sv = enumerate_generated_set(&v, EnumerationBudget::default()).unwrap();
        let sw = enumerate_generated_set(&w, EnumerationBudget::default()).unwrap();
        let gv: std::collections::BTreeSet<Graph> = sv.graphs.iter().map(|g| to_graph(&v, g)).collect();
        let gw: std::collections::BTreeSet<Graph> = sw.graphs.iter().map(|g| back(&to_graph(&w, g))).collect();
        prop_assert_eq!(gv, gw);
        prop_assert_eq!(outcome(&v).tag(), outcome(&w).tag());
    }

    #[test]
    fn plans_match_their_certificates(inst in small()) {
        let v = ValidatedInstance::new(inst).unwrap();
        if let Outcome::Extendable(pair) = outcome(&v) {
            let plan = emit_build_plan(&v, &pair).unwrap();
            let fused = plan.steps.iter().filter(|s| s.part == PartKind::DoubleMerge).count();
            prop_assert_eq!(plan.steps.len() + fused, v.arcs().len());
            for (r, m) in pair.delta.iter() {
                prop_assert_eq!(plan.fiber_counts[r.index()], m.len());
                prop_assert_eq!(m.len() * 2, v.gamma(r).len());
            }
            let summary = plan_summary(&plan);
            prop_assert_eq!(summary.birth + summary.merge + summary.double_merge, plan.steps.len());
            let text = serialize_plan(&v, &plan);
            prop_assert_eq!(parse_plan(&text).unwrap(), plan_to_document(&v, &plan));
        }
    }

    #[test]
    fn dot_output_is_stable(inst in small()) {
        let v = ValidatedInstance::new(inst.clone()).unwrap();
        let first = weighted_dot(&v);
        prop_assert_eq!(&first, &weighted_dot(&ValidatedInstance::new(inst.clone()).unwrap()));
        prop_assert_eq!(first.matches(" -- ").count(), inst.folds.len());
    }
}
