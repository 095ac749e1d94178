//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs as a plain binary (`harness = false`) so the verdict lines are
//! always printed by `cargo test`.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use foldext::admissible::{check_conditions, decide_extension, search_delta, Budgets, Condition, Outcome};
use foldext::construct::{emit_build_plan, plan_summary, verify_double_merges, PartKind};
use foldext::genset::{enumerate_generated_set, find_schedule, EnumerationBudget, Label};
use foldext::io::{generate_instance, parse_certificate, GeneratorParams};
use foldext::{validate_instance, Instance, Law, Sign, ValidatedInstance};

/// Time limits, pinned.
const CRITERION_1_LIMIT: Duration = Duration::from_secs(1);
const CRITERION_2_LIMIT: Duration = Duration::from_secs(10);
const CRITERION_5_LIMIT: Duration = Duration::from_secs(60);
/// Corpus sizes, pinned.
const ORACLE_INSTANCES: usize = 200;
const SOUNDNESS_SEEDS: u64 = 500;
const DETERMINISM_RUNS: usize = 3;

type Outcome_ = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden(name: &str) -> BTreeSet<Graph> {
    let v: serde_json::Value = serde_json::from_str(&fixture_text(name)).unwrap();
    v["graphs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| {
            let mut out = Graph::new();
            for e in g.as_array().unwrap() {
                let bits = Label::parse(e["label"].as_str().unwrap()).unwrap().bits();
                add(&mut out, e["plus"].as_str().unwrap(), e["minus"].as_str().unwrap(), bits);
            }
            out
        })
        .collect()
}

fn genset_matches(instance: &str, golden_file: &str, count: usize, limit: Duration) -> Outcome_ {
    let inst = validated(instance);
    let start = Instant::now();
    let set = enumerate_generated_set(&inst, EnumerationBudget::default()).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure(!set.truncated, || "enumeration truncated".into())?;
    ensure(set.graphs.len() == count, || format!("{} graphs, expected {count}", set.graphs.len()))?;
    let got: BTreeSet<Graph> = set.graphs.iter().map(|g| to_graph(&inst, g)).collect();
    ensure(got.len() == count, || "duplicate graphs in output".into())?;
    let want = golden(golden_file);
    ensure(got == want, || format!("graphs differ from {golden_file}"))?;
    let keys: BTreeSet<_> = set.graphs.iter().map(|g| g.key()).collect();
    let want_keys: BTreeSet<_> = want.iter().map(|g| from_graph(&inst, g).key()).collect();
    ensure(keys == want_keys, || "canonical keys differ".into())?;
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(format!("{count} graph(s) equal to {golden_file} in {took:?} (limit {limit:?})"))
}

fn criterion_1() -> Outcome_ {
    genset_matches("pinched-sphere.json", "pinched-sphere.genset.json", 1, CRITERION_1_LIMIT)
}

fn criterion_2() -> Outcome_ {
    genset_matches("double-pinched-sphere.json", "double-pinched-sphere.genset.json", 10, CRITERION_2_LIMIT)
}

fn criterion_3() -> Outcome_ {
    let inst = validated("double-pinched-sphere.json");
    let pair = parse_certificate(&inst, &fixture_text("double-pinched-sphere.cert.json")).map_err(|e| e.to_string())?;
    let report = check_conditions(&inst, &pair.graph, &pair.delta).map_err(|e| e.to_string())?;
    ensure(report.all_passed(), || format!("failed conditions:\n{report}"))?;
    for c in [Condition::Incidence, Condition::Matching, Condition::Transition] {
        ensure(report.entries.iter().any(|e| e.condition == c), || format!("{c:?} not reported"))?;
    }
    ensure(find_schedule(&inst, &pair.graph).is_some(), || "graph not in the generated set".into())?;
    let a = delta_to_assignment(&inst, &pair.delta);
    ensure(oracle_admissible(inst.source(), &to_graph(&inst, &pair.graph), &a), || {
        "independent checker rejects the pair".into()
    })?;
    Ok(format!("{} condition entries, all pass; graph is generated", report.entries.len()))
}

fn decide_verified(name: &str) -> Result<foldext::admissible::AdmissiblePair, String> {
    let inst = validated(name);
    let verdict = decide_extension(&inst, Budgets::default()).map_err(|e| e.to_string())?;
    let Outcome::Extendable(pair) = verdict.outcome else {
        return Err(format!("{name}: outcome {}", verdict.outcome.tag()));
    };
    let report = check_conditions(&inst, &pair.graph, &pair.delta).map_err(|e| e.to_string())?;
    ensure(report.all_passed(), || format!("{name}: certificate fails:\n{report}"))?;
    ensure(pair.schedule.is_some(), || format!("{name}: no schedule witness"))?;
    let a = delta_to_assignment(&inst, &pair.delta);
    ensure(oracle_admissible(inst.source(), &to_graph(&inst, &pair.graph), &a), || {
        format!("{name}: independent checker rejects the certificate")
    })?;
    Ok(pair)
}

fn criterion_4() -> Outcome_ {
    decide_verified("pinched-sphere.json")?;
    decide_verified("double-pinched-sphere.json")?;
    let pair = decide_verified("sphere.json")?;
    let inst = validated("sphere.json");
    let outside = pair.delta.get(inst.unbounded());
    ensure(outside.is_empty(), || "delta(unbounded) not empty".into())?;
    let disk = inst.region_by_id("R2").unwrap();
    let m = pair.delta.get(disk);
    ensure(m.len() == 1, || format!("delta(disk) has {} edges", m.len()))?;
    let e = *m.iter().next().unwrap();
    ensure(pair.graph.label(e).is_some_and(|l| l.has_a()), || "disk edge lacks a".into())?;
    Ok("three fixtures extendable; certificates re-verify; sphere certificate is one a-edge over the disk".into())
}

fn criterion_5() -> Outcome_ {
    let corpus = small_corpus(ORACLE_INSTANCES);
    let start = Instant::now();
    let mut negatives = 0;
    for (seed, inst) in &corpus {
        let v = ValidatedInstance::new(inst.clone()).map_err(|e| format!("seed {seed}: {e}"))?;
        let verdict = decide_extension(&v, Budgets::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        let engine = match verdict.outcome {
            Outcome::Extendable(_) => true,
            Outcome::NotExtendable => false,
            Outcome::Unknown => return Err(format!("seed {seed}: unknown verdict")),
        };
        let oracle = oracle_extendable(inst);
        ensure(engine == oracle, || format!("seed {seed}: engine {engine}, oracle {oracle}"))?;
        negatives += usize::from(!engine);
    }
    let took = start.elapsed();
    ensure(took < CRITERION_5_LIMIT, || format!("took {took:?}, limit {CRITERION_5_LIMIT:?}"))?;
    Ok(format!(
        "{} instances agree ({} notExtendable) in {took:?} (limit {CRITERION_5_LIMIT:?})",
        corpus.len(),
        negatives
    ))
}

fn criterion_6() -> Outcome_ {
    let mut certificates = 0;
    for seed in 0..SOUNDNESS_SEEDS {
        let params = GeneratorParams {
            seed,
            allow_double_points: seed % 2 == 1,
            max_folds: 5,
            max_sheets: 8,
            ..GeneratorParams::default()
        };
        let inst = ValidatedInstance::new(generate_instance(&params).unwrap()).map_err(|e| format!("seed {seed}: {e}"))?;
        let set = enumerate_generated_set(&inst, EnumerationBudget::default()).map_err(|e| e.to_string())?;
        for h in &set.graphs {
            let found = search_delta(&inst, h, 100_000).map_err(|e| e.to_string())?;
            let Some(delta) = found.delta else { continue };
            certificates += 1;
            let report = check_conditions(&inst, h, &delta).map_err(|e| e.to_string())?;
            ensure(report.all_passed(), || format!("seed {seed}: unsound certificate\n{report}"))?;
            for (r, m) in delta.iter() {
                ensure(2 * m.len() == inst.gamma(r).len(), || format!("seed {seed}: |delta| wrong at {}", inst.region(r).id))?;
            }
            for a in inst.arcs() {
                let (x, y) = (delta.get(a.ends[0]).len(), delta.get(a.ends[1]).len());
                ensure(x.abs_diff(y) == 1, || format!("seed {seed}: arc {} fiber counts {x} and {y}", a.id))?;
            }
        }
    }
    ensure(certificates > 0, || "no certificates produced".into())?;
    Ok(format!("{SOUNDNESS_SEEDS} instances, {certificates} certificates, zero violations"))
}

fn cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_foldext"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn criterion_7() -> Outcome_ {
    for name in FIXTURES {
        let path = fixture_path(name);
        let path = path.to_str().unwrap();
        for verb in ["gen-set", "decide"] {
            let first = cli(&[verb, path])?;
            for _ in 1..DETERMINISM_RUNS {
                ensure(cli(&[verb, path])? == first, || format!("{verb} {name}: runs differ"))?;
            }
            let one = cli(&["--threads", "1", verb, path])?;
            let many = cli(&["--threads", "8", verb, path])?;
            ensure(one == first && many == first, || format!("{verb} {name}: thread counts differ"))?;
            ensure(first.0 == 0, || format!("{verb} {name}: exit {}", first.0))?;
        }
    }
    Ok(format!(
        "gen-set and decide byte-identical over {DETERMINISM_RUNS} runs and 1 vs 8 threads on {} fixtures",
        FIXTURES.len()
    ))
}

fn mentions(report: &foldext::ValidationReport, id: &str) -> bool {
    report
        .violations
        .iter()
        .any(|v| v.subject == id || v.ids.iter().any(|i| i == id))
}

fn criterion_8() -> Outcome_ {
    let mut mutants = 0;
    for name in FIXTURES {
        let base = fixture(name);
        ensure(validate_instance(&base).is_valid(), || format!("{name} is not valid"))?;

        for (i, v) in base.vertices.iter().enumerate() {
            let mut m: Instance = base.clone();
            m.vertices[i].sign = v.sign.flip();
            let r = validate_instance(&m);
            ensure(r.has_law(Law::Bipartite) && r.has_law(Law::GammaParity), || {
                format!("{name}: sign flip of {} gave\n{r}", v.id)
            })?;
            let fold_hit = base.folds.iter().any(|f| (f.plus_end == v.id || f.minus_end == v.id) && mentions(&r, &f.id));
            let region_hit = base.regions.iter().any(|g| g.gamma.contains(&v.id) && mentions(&r, &g.id));
            ensure(fold_hit && region_hit, || format!("{name}: sign flip of {} not located\n{r}", v.id))?;
            mutants += 1;
        }

        for (i, g) in base.regions.iter().enumerate() {
            if g.gamma.is_empty() {
                continue;
            }
            let mut m = base.clone();
            let dropped = m.regions[i].gamma.remove(0);
            let r = validate_instance(&m);
            ensure(r.has_law(Law::GammaParity) && mentions(&r, &g.id), || {
                format!("{name}: dropping {dropped} from {} gave\n{r}", g.id)
            })?;
            mutants += 1;
        }
        // Adding a sheet of the wrong sign count to the unbounded region.
        let mut m = base.clone();
        let outside = m.regions.iter().position(|g| g.unbounded).unwrap();
        let plus = base.vertices.iter().find(|v| v.sign == Sign::Plus).unwrap().id.clone();
        m.regions[outside].gamma.push(plus);
        let r = validate_instance(&m);
        let id = &base.regions[outside].id;
        ensure(r.has_law(Law::UnboundedRegion) && r.has_law(Law::GammaParity) && mentions(&r, id), || {
            format!("{name}: non-empty unbounded gamma gave\n{r}")
        })?;
        mutants += 1;

        for (i, a) in base.arcs.iter().enumerate() {
            for other in &base.regions {
                if other.id == a.inner || other.id == a.outer {
                    continue;
                }
                let mut m = base.clone();
                m.arcs[i].inner = other.id.clone();
                let r = validate_instance(&m);
                ensure(!r.is_valid() && mentions(&r, &a.id), || {
                    format!("{name}: moving {} to {} gave\n{r}", a.id, other.id)
                })?;
                mutants += 1;
            }
        }
    }
    Ok(format!("{mutants} mutants, each rejected with a report naming the mutated record"))
}

fn criterion_9() -> Outcome_ {
    let inst = validated("sphere.json");
    let pair = decide_verified("sphere.json")?;
    let plan = emit_build_plan(&inst, &pair).map_err(|e| e.to_string())?;
    ensure(plan.steps.len() == 1 && plan.steps[0].part == PartKind::Birth, || {
        format!("sphere plan: {:?}", plan.steps)
    })?;
    let s = plan_summary(&plan);
    ensure((s.birth, s.merge, s.double_merge, s.max_fiber_count) == (1, 0, 0, 1), || format!("{s:?}"))?;

    let inst = validated("chain-crossing.json");
    let pair = decide_verified("chain-crossing.json")?;
    let plan = emit_build_plan(&inst, &pair).map_err(|e| e.to_string())?;
    let d = inst.crossings().iter().position(|c| c.id == "d1").unwrap();
    let at = |k: PartKind| plan.steps.iter().filter(|s| s.part == k && s.double_points.contains(&d)).count();
    ensure(at(PartKind::DoubleMerge) == 1, || format!("{} P_d steps at d1", at(PartKind::DoubleMerge)))?;
    ensure(at(PartKind::Merge) == 0, || format!("{} P_II steps at d1", at(PartKind::Merge)))?;
    ensure(plan_summary(&plan).double_merge == 1, || "more than one P_d".into())?;
    ensure(verify_double_merges(&inst, &plan, &pair.delta), || "P_d equations do not re-verify".into())?;
    ensure(plan.steps.iter().all(|s| !s.mirrored), || "P_d held only in the mirrored reading".into())?;
    Ok("sphere: one P_I step; chain crossing: one P_d and no P_II at d1, equations re-verify".into())
}

type Criterion = (&'static str, fn() -> Outcome_);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 generated set, one-pinch sphere", criterion_1),
        ("2 generated set, two-pinch sphere", criterion_2),
        ("3 certificate check, two-pinch sphere", criterion_3),
        ("4 decide on fixtures", criterion_4),
        ("5 oracle equivalence", criterion_5),
        ("6 soundness", criterion_6),
        ("7 determinism", criterion_7),
        ("8 validation mutations", criterion_8),
        ("9 build plans", criterion_9),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {name}: PASS ({detail}) [{:?}]", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
