use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use foldext::admissible::{check_conditions, decide_extension, Budgets, Outcome};
use foldext::construct::emit_build_plan;
use foldext::genset::{enumerate_generated_set, find_schedule, EnumerationBudget};
use foldext::io::{
    candidate_dot, certificate_to_document, generate_instance, parse_certificate, parse_document,
    serialize_instance, serialize_plan, weighted_dot, GeneratorParams, ParseOptions,
};
use foldext::{validate_instance, Error, ValidatedInstance};

#[derive(Parser)]
#[command(name = "foldext", version, about = "Decide whether a fold map extends to a non-singular map of a 3-manifold")]
struct Cli {
    /// Worker threads for the search (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Warn about unknown fields in instance documents instead of rejecting them.
    #[arg(long, global = true)]
    lenient: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EnumerationArgs {
    #[arg(long, default_value_t = EnumerationBudget::default().max_graphs)]
    max_graphs: usize,
    /// Total rewriting steps allowed while enumerating.
    #[arg(long, default_value_t = EnumerationBudget::default().max_branches)]
    max_enum_branches: usize,
    #[arg(long)]
    include_degenerate: bool,
}

impl EnumerationArgs {
    fn budget(&self) -> EnumerationBudget {
        EnumerationBudget {
            max_graphs: self.max_graphs,
            max_branches: self.max_enum_branches,
            include_degenerate: self.include_degenerate,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural laws of an instance.
    Validate { file: PathBuf },
    /// List the generated set of candidate graphs.
    GenSet {
        file: PathBuf,
        #[command(flatten)]
        enumeration: EnumerationArgs,
        /// Also write one DOT file per graph into this directory.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decide extendability and print the verdict.
    Decide {
        file: PathBuf,
        #[command(flatten)]
        enumeration: EnumerationArgs,
        /// Branch budget of the assignment search, per candidate graph.
        #[arg(long, default_value_t = Budgets::default().max_branches_per_graph)]
        max_branches: usize,
        /// Write the certificate here instead of embedding it in the output.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Verify a certificate against an instance.
    CheckCert {
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Emit the attachment plan of a certificate.
    Plan {
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a random instance document.
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = GeneratorParams::default().max_nesting_depth)]
        max_depth: u32,
        #[arg(long, default_value_t = GeneratorParams::default().max_siblings_per_level)]
        max_siblings: u32,
        #[arg(long, default_value_t = GeneratorParams::default().ii_fold_probability)]
        ii_probability: f64,
        #[arg(long, default_value_t = GeneratorParams::default().shrink_probability)]
        shrink_probability: f64,
        #[arg(long)]
        double_points: bool,
        #[arg(long, default_value_t = GeneratorParams::default().max_folds)]
        max_folds: u32,
        #[arg(long, default_value_t = GeneratorParams::default().max_sheets)]
        max_sheets: u32,
    },
    /// Print the weighted graph, or the certificate's graph, as DOT.
    ExportDot {
        file: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
}

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const UNKNOWN: u8 = 2;

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn load(path: &Path, lenient: bool) -> Result<ValidatedInstance, Error> {
    let parsed = parse_document(&read(path)?, ParseOptions { lenient })?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    ValidatedInstance::new(parsed.document.into_instance())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Validate { file } => {
            let parsed = parse_document(&read(&file)?, ParseOptions { lenient: cli.lenient })?;
            for w in &parsed.warnings {
                eprintln!("warning: {}: {w}", file.display());
            }
            let report = validate_instance(&parsed.document.into_instance());
            print!("{}", pretty(&serde_json::to_value(&report).expect("report serializes")));
            if report.is_valid() {
                Ok(OK)
            } else {
                eprint!("{report}");
                Ok(3)
            }
        }
        Command::GenSet { file, enumeration, dot } => {
            let inst = load(&file, cli.lenient)?;
            let set = enumerate_generated_set(&inst, enumeration.budget())?;
            let graphs: Vec<_> = set
                .graphs
                .iter()
                .map(|g| {
                    g.edges()
                        .map(|e| {
                            json!({
                                "plus": inst.vertex_id(e.ends.plus),
                                "minus": inst.vertex_id(e.ends.minus),
                                "label": e.label.as_str(),
                            })
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
            if let Some(dir) = dot {
                fs::create_dir_all(&dir)?;
                for (i, g) in set.graphs.iter().enumerate() {
                    let name = format!("h{:03}", i + 1);
                    write(&dir.join(format!("{name}.dot")), &candidate_dot(&inst, g, &name))?;
                }
            }
            print!(
                "{}",
                pretty(&json!({
                    "count": set.graphs.len(),
                    "truncated": set.truncated,
                    "degenerateReached": set.degenerate_reached,
                    "graphs": graphs,
                }))
            );
            Ok(if set.truncated { UNKNOWN } else { OK })
        }
        Command::Decide {
            file,
            enumeration,
            max_branches,
            cert,
        } => {
            let inst = load(&file, cli.lenient)?;
            let verdict = decide_extension(
                &inst,
                Budgets {
                    enumeration: enumeration.budget(),
                    max_branches_per_graph: max_branches,
                },
            )?;
            let mut out = json!({
                "outcome": verdict.outcome.tag(),
                "stats": verdict.stats,
            });
            if let Some(pair) = verdict.outcome.certificate() {
                let doc = certificate_to_document(&inst, pair);
                match &cert {
                    Some(path) => write(path, &pretty(&serde_json::to_value(&doc).expect("certificate serializes")))?,
                    None => out["certificate"] = serde_json::to_value(&doc).expect("certificate serializes"),
                }
            }
            print!("{}", pretty(&out));
            Ok(match verdict.outcome {
                Outcome::Extendable(_) => OK,
                Outcome::NotExtendable => NEGATIVE,
                Outcome::Unknown => UNKNOWN,
            })
        }
        Command::CheckCert { file, cert } => {
            let inst = load(&file, cli.lenient)?;
            let pair = match parse_certificate(&inst, &read(&cert)?) {
                Ok(p) => p,
                Err(e @ Error::Certificate(_)) => {
                    eprintln!("rejected: {e}");
                    return Ok(NEGATIVE);
                }
                Err(e) => return Err(e),
            };
            let report = match check_conditions(&inst, &pair.graph, &pair.delta) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("rejected: {e}");
                    return Ok(NEGATIVE);
                }
            };
            let member = pair.schedule.is_some() || find_schedule(&inst, &pair.graph).is_some();
            print!("{report}");
            println!("membership: {}", if member { "pass" } else { "FAIL" });
            Ok(if report.all_passed() && member { OK } else { NEGATIVE })
        }
        Command::Plan { file, cert, out } => {
            let inst = load(&file, cli.lenient)?;
            let pair = parse_certificate(&inst, &read(&cert)?)?;
            let plan = match emit_build_plan(&inst, &pair) {
                Ok(p) => p,
                Err(e @ Error::Certificate(_)) => {
                    eprintln!("rejected: {e}");
                    return Ok(NEGATIVE);
                }
                Err(e) => return Err(e),
            };
            let text = serialize_plan(&inst, &plan);
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(OK)
        }
        Command::Generate {
            seed,
            max_depth,
            max_siblings,
            ii_probability,
            shrink_probability,
            double_points,
            max_folds,
            max_sheets,
        } => {
            let params = GeneratorParams {
                seed,
                max_nesting_depth: max_depth,
                max_siblings_per_level: max_siblings,
                ii_fold_probability: ii_probability,
                allow_double_points: double_points,
                shrink_probability,
                max_folds,
                max_sheets,
            };
            let inst = generate_instance(&params)?;
            print!("{}", serialize_instance(&inst, Some(&format!("generated with seed {seed}"))));
            Ok(OK)
        }
        Command::ExportDot { file, cert } => {
            let inst = load(&file, cli.lenient)?;
            match cert {
                None => print!("{}", weighted_dot(&inst)),
                Some(path) => {
                    let pair = parse_certificate(&inst, &read(&path)?)?;
                    print!("{}", candidate_dot(&inst, &pair.graph, "certificate"));
                }
            }
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
