//! Command-line front end: JSON (de)serialization of stacky fans, KM fans
//! and colorings, one subcommand per decision procedure, deterministic
//! machine-readable output.
//!
//! Exit codes: 0 for `yes`/`ok`, 1 for `no`/`violation`, 2 for errors.
//! Verdicts go to stdout as one-line JSON; parse and schema errors go to
//! stderr as a JSON error object. `-` stands for stdin/stdout.

use std::fs;
use std::io::{Read, Write};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::birational::{
    self, CheckFailure, ColoringViolation, Conflict, EquivalenceReport, MorphismReport, Witness,
    WitnessError,
};
use crate::cone::Cone;
use crate::doc::{
    encode_cone, encode_lattice, encode_vector, ColoringDoc, DocError, Document, JsonInt,
    StackyFanDoc,
};
use crate::km::KmFan;
use crate::lattice::{IntVector, Sublattice};
use crate::stacky::StackyFan;

#[derive(Parser, Debug)]
#[command(
    name = "stackyfan",
    version,
    about = "Exact toolkit for stacky fans: birational equivalence, sublattice colorings, KM-fan resolution",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a stacky_fan or km_fan document
    Validate { file: String },
    /// Decide torus-equivariant birational equivalence of two stacky fans
    Equiv { a: String, b: String },
    /// Compute the sublattice coloring of a stacky fan
    Coloring {
        a: String,
        /// Output file for the coloring document (default: stdout)
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Validate a coloring document
    #[command(name = "validate-coloring")]
    ValidateColoring { c: String },
    /// Realize a valid coloring as a smooth proper stacky fan
    Realize {
        c: String,
        #[arg(short, long)]
        output: String,
        /// Include the subdivision-center trace in the verdict
        #[arg(long)]
        trace: bool,
    },
    /// Construct a birational roof between two equivalent stacky fans
    Witness {
        a: String,
        b: String,
        #[arg(short, long)]
        output: String,
        #[arg(long)]
        trace: bool,
    },
    /// Check whether the identity induces a toric morphism (or a
    /// representable one with --representable)
    Morphism {
        src: String,
        dst: String,
        #[arg(long)]
        representable: bool,
    },
    /// Resolve a KM fan to a smooth stacky fan
    Resolve {
        k: String,
        #[arg(short, long)]
        output: String,
        #[arg(long)]
        trace: bool,
    },
    /// Stabilizer orders of the maximal cones of a stacky fan
    Stabilizers { a: String },
    /// Summary information about any document
    Info { f: String },
}

struct Verdict {
    status: &'static str,
    detail: Value,
}

impl Verdict {
    fn exit_code(&self) -> i32 {
        match self.status {
            "yes" | "ok" => 0,
            "no" | "violation" => 1,
            _ => 2,
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "status": self.status,
            "detail": self.detail,
            "exit_code": self.exit_code(),
        })
    }
}

enum CommandError {
    /// Parse, schema, or I/O problems: exit 2, JSON object on stderr.
    Hard(String),
}

impl From<DocError> for CommandError {
    fn from(e: DocError) -> Self {
        CommandError::Hard(e.to_string())
    }
}

type CommandResult = Result<(Verdict, Option<(String, Document)>), CommandError>;

/// Entry point used by both `main` and the test harness. Returns the
/// process exit code.
pub fn run<O: Write, E: Write>(
    args: impl IntoIterator<Item = String>,
    stdout: &mut O,
    stderr: &mut E,
) -> i32 {
    if let Err(message) = check_thread_env() {
        return fail(stderr, &message);
    }
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            return fail(stderr, &e.to_string());
        }
        Err(e) => {
            // --help / --version
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match dispatch(&cli.command) {
        Ok((verdict, output)) => {
            let mut wrote_doc_to_stdout = false;
            if let Some((target, doc)) = output {
                let rendered = doc.to_json();
                if target == "-" {
                    let _ = stdout.write_all(rendered.as_bytes());
                    wrote_doc_to_stdout = true;
                } else if let Err(e) = fs::write(&target, rendered) {
                    return fail(stderr, &format!("cannot write {target}: {e}"));
                }
            }
            if !wrote_doc_to_stdout {
                let _ = writeln!(stdout, "{}", verdict.to_json());
            }
            verdict.exit_code()
        }
        Err(CommandError::Hard(message)) => fail(stderr, &message),
    }
}

fn fail<E: Write>(stderr: &mut E, message: &str) -> i32 {
    let err = json!({ "status": "error", "detail": message, "exit_code": 2 });
    let _ = writeln!(stderr, "{err}");
    2
}

fn check_thread_env() -> Result<(), String> {
    match std::env::var("STACKYFAN_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()), // sequential execution stays within any bound
            _ => Err(format!("STACKYFAN_THREADS must be a positive integer, got {v:?}")),
        },
        Err(_) => Ok(()),
    }
}

fn read_input(path: &str) -> Result<String, CommandError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CommandError::Hard(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| CommandError::Hard(format!("cannot read {path}: {e}")))
    }
}

fn load_document(path: &str) -> Result<Document, CommandError> {
    let text = read_input(path)?;
    Ok(Document::parse(&text)?)
}

fn load_stacky(path: &str) -> Result<StackyFan, CommandError> {
    match load_document(path)? {
        Document::StackyFan(doc) => Ok(doc.to_domain()?),
        other => Err(CommandError::Hard(format!(
            "{path}: expected a stacky_fan document, found {}",
            other.kind()
        ))),
    }
}

fn load_km(path: &str) -> Result<KmFan, CommandError> {
    match load_document(path)? {
        Document::KmFan(doc) => Ok(doc.to_domain()?),
        other => Err(CommandError::Hard(format!(
            "{path}: expected a km_fan document, found {}",
            other.kind()
        ))),
    }
}

fn json_vector(v: &IntVector) -> Value {
    serde_json::to_value(encode_vector(v)).expect("vectors serialize")
}

fn json_cone(c: &Cone) -> Value {
    serde_json::to_value(encode_cone(c)).expect("cones serialize")
}

fn json_lattice(l: &Sublattice) -> Value {
    serde_json::to_value(encode_lattice(l)).expect("lattices serialize")
}

fn json_conflicts(conflicts: &[Conflict]) -> Value {
    Value::Array(
        conflicts
            .iter()
            .map(|c| {
                json!({
                    "cone_a": json_cone(&c.cone_a),
                    "cone_b": json_cone(&c.cone_b),
                    "lattice_a": json_lattice(&c.lattice_a),
                    "lattice_b": json_lattice(&c.lattice_b),
                })
            })
            .collect(),
    )
}

fn json_failures(failures: &[CheckFailure]) -> Value {
    Value::Array(
        failures
            .iter()
            .map(|f| match f {
                CheckFailure::NotRefinement => json!({ "kind": "not_refinement" }),
                CheckFailure::RayGenerator {
                    generator,
                    target_cone,
                    target_lattice,
                } => json!({
                    "kind": "ray_generator",
                    "generator": json_vector(generator),
                    "target_cone": json_cone(target_cone),
                    "target_lattice": json_lattice(target_lattice),
                }),
                CheckFailure::LatticeMismatch {
                    source_cone,
                    target_cone,
                    source_lattice,
                    target_lattice,
                } => json!({
                    "kind": "lattice_mismatch",
                    "source_cone": json_cone(source_cone),
                    "target_cone": json_cone(target_cone),
                    "source_lattice": json_lattice(source_lattice),
                    "target_lattice": json_lattice(target_lattice),
                }),
            })
            .collect(),
    )
}

fn json_violations(violations: &[ColoringViolation]) -> Value {
    Value::Array(
        violations
            .iter()
            .map(|v| Value::String(v.to_string()))
            .collect(),
    )
}

fn json_trace(trace: &[IntVector]) -> Value {
    Value::Array(trace.iter().map(json_vector).collect())
}

fn equivalence_verdict(report: &EquivalenceReport) -> Verdict {
    if report.verdict {
        Verdict {
            status: "yes",
            detail: json!({ "conflicts": [] }),
        }
    } else {
        Verdict {
            status: "no",
            detail: json!({ "conflicts": json_conflicts(&report.conflicts) }),
        }
    }
}

fn morphism_verdict(report: &MorphismReport, representable: bool) -> Verdict {
    let check = if representable { "representable" } else { "morphism" };
    if report.ok {
        Verdict {
            status: "ok",
            detail: json!({ "check": check, "failures": [] }),
        }
    } else {
        Verdict {
            status: "violation",
            detail: json!({ "check": check, "failures": json_failures(&report.failures) }),
        }
    }
}

fn witness_detail(w: &Witness, with_trace: bool) -> Value {
    let maps = |m: &birational::WitnessMap| {
        Value::Array(
            m.cells
                .iter()
                .map(|cell| {
                    json!({
                        "roof_cone": cell.roof_cone,
                        "target_cone": cell.target_cone,
                        "lattice": json_lattice(&cell.lattice),
                    })
                })
                .collect(),
        )
    };
    let mut detail = json!({
        "roof_max_cones": w.roof.fan().max_cones().len(),
        "map_to_a": maps(&w.map_to_a),
        "map_to_b": maps(&w.map_to_b),
    });
    if with_trace {
        detail["trace"] = json_trace(&w.trace);
    }
    detail
}

fn dispatch(cmd: &Command) -> CommandResult {
    match cmd {
        Command::Validate { file } => {
            let doc = load_document(file)?;
            let kind = doc.kind();
            let outcome = match doc {
                Document::StackyFan(d) => d.to_domain().map(|_| ()),
                Document::KmFan(d) => d.to_domain().map(|_| ()),
                Document::Coloring(_) => {
                    return Err(CommandError::Hard(format!(
                        "{file}: coloring documents are validated by validate-coloring"
                    )));
                }
            };
            Ok((
                match outcome {
                    Ok(()) => Verdict {
                        status: "ok",
                        detail: json!({ "kind": kind }),
                    },
                    Err(DocError::Invalid(message)) => Verdict {
                        status: "violation",
                        detail: json!({ "kind": kind, "violation": message }),
                    },
                    Err(e) => return Err(e.into()),
                },
                None,
            ))
        }
        Command::Equiv { a, b } => {
            let sa = load_stacky(a)?;
            let sb = load_stacky(b)?;
            let report = birational::equivalent(&sa, &sb)
                .map_err(|e| CommandError::Hard(e.to_string()))?;
            Ok((equivalence_verdict(&report), None))
        }
        Command::Coloring { a, output } => {
            let s = load_stacky(a)?;
            let coloring = birational::coloring_of(&s);
            let doc = Document::Coloring(ColoringDoc::from_domain(&coloring));
            let verdict = Verdict {
                status: "ok",
                detail: json!({ "classes": coloring.classes().len() }),
            };
            let target = output.clone().unwrap_or_else(|| "-".to_string());
            Ok((verdict, Some((target, doc))))
        }
        Command::ValidateColoring { c } => {
            let coloring = match load_document(c)? {
                Document::Coloring(doc) => match doc.to_domain() {
                    Ok(coloring) => coloring,
                    Err(DocError::Invalid(message)) => {
                        return Ok((
                            Verdict {
                                status: "violation",
                                detail: json!({ "violations": [message] }),
                            },
                            None,
                        ));
                    }
                    Err(e) => return Err(e.into()),
                },
                other => {
                    return Err(CommandError::Hard(format!(
                        "{c}: expected a coloring document, found {}",
                        other.kind()
                    )));
                }
            };
            let violations = coloring.validate();
            Ok((
                if violations.is_empty() {
                    Verdict {
                        status: "ok",
                        detail: json!({ "classes": coloring.classes().len() }),
                    }
                } else {
                    Verdict {
                        status: "violation",
                        detail: json!({ "violations": json_violations(&violations) }),
                    }
                },
                None,
            ))
        }
        Command::Realize { c, output, trace } => {
            let coloring = match load_document(c)? {
                Document::Coloring(doc) => doc.to_domain()?,
                other => {
                    return Err(CommandError::Hard(format!(
                        "{c}: expected a coloring document, found {}",
                        other.kind()
                    )));
                }
            };
            let realization = birational::realize_coloring(&coloring)
                .map_err(|e| CommandError::Hard(e.to_string()))?;
            let mut detail = json!({
                "rays": realization.stacky.fan().rays().len(),
                "max_cones": realization.stacky.fan().max_cones().len(),
            });
            if *trace {
                detail["trace"] = json_trace(&realization.trace);
            }
            let doc = Document::StackyFan(StackyFanDoc::from_domain(&realization.stacky));
            Ok((
                Verdict {
                    status: "ok",
                    detail,
                },
                Some((output.clone(), doc)),
            ))
        }
        Command::Witness { a, b, output, trace } => {
            let sa = load_stacky(a)?;
            let sb = load_stacky(b)?;
            match birational::witness(&sa, &sb) {
                Ok(w) => {
                    let doc = Document::StackyFan(StackyFanDoc::from_domain(&w.roof));
                    Ok((
                        Verdict {
                            status: "yes",
                            detail: witness_detail(&w, *trace),
                        },
                        Some((output.clone(), doc)),
                    ))
                }
                Err(e) => match *e {
                    WitnessError::NotEquivalent { report } => {
                        Ok((equivalence_verdict(&report), None))
                    }
                    WitnessError::Other(err) => Err(CommandError::Hard(err.to_string())),
                },
            }
        }
        Command::Morphism {
            src,
            dst,
            representable,
        } => {
            let source = load_stacky(src)?;
            let target = load_stacky(dst)?;
            let report = if *representable {
                birational::check_representable(&source, &target)
            } else {
                birational::check_morphism(&source, &target)
            }
            .map_err(|e| CommandError::Hard(e.to_string()))?;
            Ok((morphism_verdict(&report, *representable), None))
        }
        Command::Resolve { k, output, trace } => {
            let km = load_km(k)?;
            let resolution = km.resolve().map_err(|e| CommandError::Hard(e.to_string()))?;
            let mut detail = json!({
                "subdivisions": resolution.trace.len(),
                "max_cones": resolution.stacky.fan().max_cones().len(),
            });
            if *trace {
                detail["trace"] = json_trace(&resolution.trace);
            }
            let doc = Document::StackyFan(StackyFanDoc::from_domain(&resolution.stacky));
            Ok((
                Verdict {
                    status: "ok",
                    detail,
                },
                Some((output.clone(), doc)),
            ))
        }
        Command::Stabilizers { a } => {
            let s = load_stacky(a)?;
            let orders: Vec<Value> = s
                .fan()
                .max_cones()
                .iter()
                .map(|c| {
                    let order = s
                        .stabilizer_order(c)
                        .expect("maximal cones lie in the fan");
                    json!({
                        "cone": json_cone(c),
                        "order": serde_json::to_value(JsonInt(order)).expect("ints serialize"),
                    })
                })
                .collect();
            Ok((
                Verdict {
                    status: "ok",
                    detail: json!({ "stabilizers": orders }),
                },
                None,
            ))
        }
        Command::Info { f } => {
            let doc = load_document(f)?;
            let detail = match &doc {
                Document::StackyFan(d) => {
                    let s = d.to_domain()?;
                    let smooth = s
                        .fan()
                        .max_cones()
                        .iter()
                        .all(|c| s.stabilizer_order(c).map(|o| o == 1.into()).unwrap_or(false));
                    json!({
                        "kind": "stacky_fan",
                        "dim": s.ambient_dim(),
                        "rays": s.fan().rays().len(),
                        "max_cones": s.fan().max_cones().len(),
                        "complete": true,
                        "simplicial": true,
                        "trivial_stabilizers": smooth,
                    })
                }
                Document::KmFan(d) => {
                    let km = d.to_domain()?;
                    json!({
                        "kind": "km_fan",
                        "dim": km.ambient_dim(),
                        "rays": km.fan().rays().len(),
                        "max_cones": km.fan().max_cones().len(),
                        "simplicial": km.fan().is_simplicial(),
                        "smooth": km.is_smooth(),
                    })
                }
                Document::Coloring(d) => {
                    let c = d.to_domain()?;
                    json!({
                        "kind": "coloring",
                        "dim": c.ambient_dim(),
                        "classes": c.classes().len(),
                        "cones": c.classes().iter().map(|cl| cl.region.len()).sum::<usize>(),
                        "valid": c.validate().is_empty(),
                    })
                }
            };
            Ok((
                Verdict {
                    status: "ok",
                    detail,
                },
                None,
            ))
        }
    }
}
